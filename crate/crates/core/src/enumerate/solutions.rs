//! Enumeration of the points of the representation variety `Rep_d`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::gf::{Elem, Matrix};
use crate::presentations::{AlgebraPresentation, Representation};

use super::EnumOptions;

/// One free matrix entry: `(arrow, row, col)`.
type Slot = (usize, usize, usize);

fn slots(pres: &AlgebraPresentation, d: &[usize], skip: Option<usize>) -> Vec<Slot> {
    let mut out = Vec::new();
    for (k, a) in pres.arrows().iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        for r in 0..d[a.target] {
            for c in 0..d[a.source] {
                out.push((k, r, c));
            }
        }
    }
    out
}

fn checked_pow(q: u64, e: u64) -> Option<u64> {
    u32::try_from(e).ok().and_then(|e| q.checked_pow(e))
}

/// Exponent `Σ_{a: s→t} d_s d_t` of the full tuple space.
pub fn tuple_exponent(pres: &AlgebraPresentation, d: &[usize]) -> u64 {
    pres.arrows()
        .iter()
        .map(|a| (d[a.source] * d[a.target]) as u64)
        .sum()
}

/// Odometer over the free slots, starting at a given lexicographic index.
struct Odometer {
    q: Elem,
    slots: Vec<Slot>,
    digits: Vec<Elem>,
}

impl Odometer {
    fn new(q: Elem, slots: Vec<Slot>, mut index: u64, base: &mut Representation) -> Self {
        let n = slots.len();
        let mut digits = vec![0; n];
        for k in (0..n).rev() {
            digits[k] = (index % q as u64) as Elem;
            index /= q as u64;
        }
        for (k, &(a, r, c)) in slots.iter().enumerate() {
            base.maps[a].set(r, c, digits[k]);
        }
        Odometer { q, slots, digits }
    }

    /// Advances by one; returns false on wrap-around.
    fn step(&mut self, rep: &mut Representation) -> bool {
        for k in (0..self.digits.len()).rev() {
            let (a, r, c) = self.slots[k];
            if self.digits[k] + 1 < self.q {
                self.digits[k] += 1;
                rep.maps[a].set(r, c, self.digits[k]);
                return true;
            }
            self.digits[k] = 0;
            rep.maps[a].set(r, c, 0);
        }
        false
    }
}

/// Lazily yields every solution of the relations in lexicographic order of
/// `(arrow, row, col)` entries.
pub struct SolutionIter<'a> {
    pres: &'a AlgebraPresentation,
    current: Representation,
    odo: Odometer,
    remaining: u64,
}

impl Iterator for SolutionIter<'_> {
    type Item = Representation;

    fn next(&mut self) -> Option<Representation> {
        while self.remaining > 0 {
            let candidate = self.pres.satisfies(&self.current).then(|| self.current.clone());
            self.remaining -= 1;
            if self.remaining > 0 {
                self.odo.step(&mut self.current);
            }
            if candidate.is_some() {
                return candidate;
            }
        }
        None
    }
}

/// Every matrix tuple of dimension `d` satisfying the relations, in
/// deterministic lexicographic order.
pub fn iterate_solutions<'a>(
    pres: &'a AlgebraPresentation,
    d: &[usize],
    opts: &EnumOptions,
) -> Result<SolutionIter<'a>> {
    pres.check_dim(d)?;
    let q = pres.field().order() as u64;
    let exponent = tuple_exponent(pres, d);
    let total = checked_pow(q, exponent)
        .filter(|&t| t <= opts.cap)
        .ok_or(Error::EnumerationCap {
            q,
            exponent,
            cap: opts.cap,
        })?;
    let mut current = Representation::zero(pres, d);
    let odo = Odometer::new(q as Elem, slots(pres, d, None), 0, &mut current);
    Ok(SolutionIter {
        pres,
        current,
        odo,
        remaining: total,
    })
}

/// Number of `m × n` matrices of rank `r` over `F_q`.
pub fn rank_orbit_size(q: u64, m: usize, n: usize, r: usize) -> u128 {
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r as u32 {
        num *= (q.pow(m as u32) - q.pow(i)) * (q.pow(n as u32) - q.pow(i));
        den *= q.pow(r as u32) - q.pow(i);
    }
    num / den
}

/// `[I_r 0; 0 0]` of shape `m × n`.
fn rank_normal_form(m: usize, n: usize, r: usize) -> Matrix {
    let mut a = Matrix::zeros(m, n);
    for i in 0..r {
        a.set(i, i, 1);
    }
    a
}

/// A contiguous run of tuples sharing one normal form of the pivot arrow.
#[derive(Debug, Clone)]
struct WorkItem {
    pivot_rank: Option<usize>,
    start: u64,
    len: u64,
}

/// The work plan for a (possibly orbit-reduced) enumeration.
struct Plan {
    pivot: Option<usize>,
    slots: Vec<Slot>,
    items: Vec<WorkItem>,
}

fn plan(pres: &AlgebraPresentation, d: &[usize], opts: &EnumOptions, reduce: bool) -> Result<Plan> {
    pres.check_dim(d)?;
    let q = pres.field().order() as u64;
    let pivot = if reduce {
        pres.arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| (d[a.source] * d[a.target], k))
            .filter(|&(size, _)| size > 0)
            .max_by_key(|&(size, k)| (size, std::cmp::Reverse(k)))
            .map(|(_, k)| k)
    } else {
        None
    };
    let slots = slots(pres, d, pivot);
    let exponent = slots.len() as u64;
    let ranks: Vec<Option<usize>> = match pivot {
        Some(k) => {
            let a = &pres.arrows()[k];
            (0..=d[a.source].min(d[a.target])).map(Some).collect()
        }
        None => vec![None],
    };
    let per_rank = checked_pow(q, exponent).ok_or(Error::EnumerationCap {
        q,
        exponent,
        cap: opts.cap,
    })?;
    if per_rank.saturating_mul(ranks.len() as u64) > opts.cap {
        return Err(Error::EnumerationCap {
            q,
            exponent,
            cap: opts.cap,
        });
    }
    let workers = opts.workers.max(1) as u64;
    let chunk = (per_rank * ranks.len() as u64 / (workers * 8)).max(1024);
    let mut items = Vec::new();
    for r in ranks {
        let mut start = 0;
        while start < per_rank {
            let len = chunk.min(per_rank - start);
            items.push(WorkItem {
                pivot_rank: r,
                start,
                len,
            });
            start += len;
        }
    }
    Ok(Plan {
        pivot,
        slots,
        items,
    })
}

/// Folds `step` over all solutions of dimension `d`, in parallel.
///
/// With `reduce`, the largest arrow is fixed to rank normal form and each
/// solution carries the size of the corresponding orbit as its weight, so
/// `step` must only compute quantities invariant under base change. Without
/// it every tuple is visited once with weight 1. Partial results are merged
/// in work-item order, so the outcome does not depend on `opts.workers`.
pub fn fold_solutions<T, I, S, M>(
    pres: &AlgebraPresentation,
    d: &[usize],
    opts: &EnumOptions,
    reduce: bool,
    init: I,
    step: S,
    merge: M,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    S: Fn(&mut T, &Representation, u128) -> Result<()> + Sync,
    M: Fn(&mut T, T),
{
    let plan = plan(pres, d, opts, reduce)?;
    let q = pres.field().order() as u64;
    let run = |item: &WorkItem| -> Result<T> {
        let mut acc = init();
        let mut rep = Representation::zero(pres, d);
        let mut weight = 1u128;
        if let (Some(k), Some(r)) = (plan.pivot, item.pivot_rank) {
            let a = &pres.arrows()[k];
            rep.maps[k] = rank_normal_form(d[a.target], d[a.source], r);
            weight = rank_orbit_size(q, d[a.target], d[a.source], r);
        }
        let mut odo = Odometer::new(q as Elem, plan.slots.clone(), item.start, &mut rep);
        for i in 0..item.len {
            if pres.satisfies(&rep) {
                step(&mut acc, &rep, weight)?;
            }
            if i + 1 < item.len {
                odo.step(&mut rep);
            }
        }
        Ok(acc)
    };

    let workers = opts.workers.max(1).min(plan.items.len().max(1));
    let results: Vec<Mutex<Option<Result<T>>>> =
        plan.items.iter().map(|_| Mutex::new(None)).collect();
    if workers == 1 {
        for (k, item) in plan.items.iter().enumerate() {
            let r = run(item);
            let failed = r.is_err();
            *results[k].lock().unwrap() = Some(r);
            if failed {
                break;
            }
        }
    } else {
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= plan.items.len() {
                        break;
                    }
                    let r = run(&plan.items[k]);
                    *results[k].lock().unwrap() = Some(r);
                });
            }
        });
    }
    let mut total = init();
    for slot in results {
        match slot.into_inner().unwrap() {
            Some(Ok(part)) => merge(&mut total, part),
            Some(Err(e)) => return Err(e),
            None => return Err(Error::Internal("work item skipped".into())),
        }
    }
    Ok(total)
}

/// Weighted number of solutions (the number of points of `Rep_d`).
pub fn count_solutions(pres: &AlgebraPresentation, d: &[usize], opts: &EnumOptions) -> Result<u128> {
    fold_solutions(
        pres,
        d,
        opts,
        opts.reduce,
        || 0u128,
        |acc, _, w| {
            *acc += w;
            Ok(())
        },
        |a, b| *a += b,
    )
}
