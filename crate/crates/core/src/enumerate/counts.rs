//! Orbit counts: absolutely indecomposable counts and stack volumes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf::Rational;
use crate::presentations::{AlgebraPresentation, Representation};

use super::endo::{decompose, end_basis, is_abs_indec, nilpotent_count};
use super::solutions::fold_solutions;
use super::{gl_order, EnumOptions};

/// Result of [`count_abs_indec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsIndecCount {
    pub value: BigInt,
    /// Number of points of `Rep_d`.
    pub solutions: u128,
    /// `Σ |Aut M|` over absolutely indecomposable points.
    pub aut_sum: u128,
}

/// An exact volume together with the point count it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    pub value: Rational,
    pub solutions: u128,
    /// Numerator before division by `|GL_d|`.
    pub weighted: u128,
}

fn is_zero_dim(d: &[usize]) -> bool {
    d.iter().all(|&x| x == 0)
}

/// `A_d(q)`: `|GL_d|^{-1} Σ_{M abs. indec.} |Aut M|`, the number of
/// isoclasses of absolutely indecomposable representations of dimension `d`.
pub fn count_abs_indec(pres: &AlgebraPresentation, d: &[usize], opts: &EnumOptions) -> Result<AbsIndecCount> {
    pres.check_dim(d)?;
    let f = pres.field().clone();
    let q = f.order() as u128;
    let (solutions, aut_sum) = if is_zero_dim(d) {
        (1, 0)
    } else {
        fold_solutions(
            pres,
            d,
            opts,
            opts.reduce,
            || (0u128, 0u128),
            |acc, m, w| {
                acc.0 += w;
                let e = end_basis(pres, m);
                if is_abs_indec(&f, &e) {
                    let k = e.rank() as u32;
                    acc.1 += w * (q.pow(k) - q.pow(k - 1));
                }
                Ok(())
            },
            |a, b| {
                a.0 += b.0;
                a.1 += b.1;
            },
        )?
    };
    let gl = gl_order(d, q as u64);
    let (value, rem) = BigInt::from(aut_sum).div_rem(&gl);
    if !rem.is_zero() {
        return Err(Error::Integrality(format!(
            "Σ|Aut| = {aut_sum} is not divisible by |GL_d| = {gl} for d = {d:?}"
        )));
    }
    Ok(AbsIndecCount {
        value,
        solutions,
        aut_sum,
    })
}

/// `vol(Rep_d) = #Rep_d(F_q) / |GL_d(F_q)|`.
pub fn stack_volume(pres: &AlgebraPresentation, d: &[usize], opts: &EnumOptions) -> Result<Volume> {
    pres.check_dim(d)?;
    let q = pres.field().order() as u64;
    let n = super::count_solutions(pres, d, opts)?;
    Ok(Volume {
        value: Rational::new(BigInt::from(n), gl_order(d, q)),
        solutions: n,
        weighted: n,
    })
}

/// `#{(M, θ) : θ ∈ End(M) nilpotent} / |GL_d|`.
pub fn nil_volume(pres: &AlgebraPresentation, d: &[usize], opts: &EnumOptions) -> Result<Volume> {
    nil_volume_impl(pres, d, opts, None)
}

/// Like [`nil_volume`], restricted to modules all of whose indecomposable
/// summands have dimension vectors accepted by `keep`.
pub fn nil_volume_filtered(
    pres: &AlgebraPresentation,
    d: &[usize],
    opts: &EnumOptions,
    keep: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Result<Volume> {
    nil_volume_impl(pres, d, opts, Some(keep))
}

fn nil_volume_impl(
    pres: &AlgebraPresentation,
    d: &[usize],
    opts: &EnumOptions,
    keep: Option<&(dyn Fn(&[usize]) -> bool + Sync)>,
) -> Result<Volume> {
    pres.check_dim(d)?;
    let q = pres.field().order() as u64;
    let (solutions, weighted) = if is_zero_dim(d) {
        (1, 1)
    } else {
        fold_solutions(
            pres,
            d,
            opts,
            opts.reduce,
            || (0u128, 0u128),
            |acc, m, w| {
                acc.0 += w;
                if let Some(keep) = keep {
                    if !summands_accepted(pres, m, opts, keep)? {
                        return Ok(());
                    }
                }
                let e = end_basis(pres, m);
                acc.1 += w * nilpotent_count(pres, m, &e, opts)?;
                Ok(())
            },
            |a, b| {
                a.0 += b.0;
                a.1 += b.1;
            },
        )?
    };
    Ok(Volume {
        value: Rational::new(BigInt::from(weighted), gl_order(d, q)),
        solutions,
        weighted,
    })
}

fn summands_accepted(
    pres: &AlgebraPresentation,
    m: &Representation,
    opts: &EnumOptions,
    keep: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Result<bool> {
    // an absolutely indecomposable module is its own only summand
    let e = end_basis(pres, m);
    if is_abs_indec(pres.field(), &e) {
        return Ok(keep(&m.dim));
    }
    Ok(decompose(pres, m, opts)?.iter().all(|x| keep(&x.dim)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{iterate_solutions, unit_count};
    use crate::gf::{rat, Field};
    use crate::presentations::{canonical_algebra, squid_algebra, WeightData};
    use std::sync::Arc;

    fn canon(p: Vec<usize>, q: u64) -> AlgebraPresentation {
        let f = Arc::new(Field::with_order(q).unwrap());
        let lam = (2..p.len() as u32).collect();
        canonical_algebra(&WeightData::new(p, lam, f).unwrap()).unwrap()
    }

    fn squid(p: Vec<usize>, q: u64) -> AlgebraPresentation {
        let f = Arc::new(Field::with_order(q).unwrap());
        let lam = (2..p.len() as u32).collect();
        squid_algebra(&WeightData::new(p, lam, f).unwrap()).unwrap()
    }

    fn opts() -> EnumOptions {
        EnumOptions::default().with_workers(2)
    }

    #[test]
    fn simples_and_zero() {
        let a = canon(vec![2, 2], 3);
        let o = opts();
        for v in 0..4 {
            let mut d = vec![0; 4];
            d[v] = 1;
            assert_eq!(count_abs_indec(&a, &d, &o).unwrap().value, BigInt::from(1));
            assert_eq!(stack_volume(&a, &d, &o).unwrap().value, rat(1, 2));
            assert_eq!(nil_volume(&a, &d, &o).unwrap().value, rat(1, 2));
        }
        let z = [0; 4];
        assert_eq!(stack_volume(&a, &z, &o).unwrap().value, rat(1, 1));
        assert_eq!(nil_volume(&a, &z, &o).unwrap().value, rat(1, 1));
        assert_eq!(count_abs_indec(&a, &z, &o).unwrap().value, BigInt::from(0));
        assert_eq!(count_abs_indec(&a, &[1, 1, 0, 0], &o).unwrap().value, BigInt::from(0));
        assert_eq!(count_abs_indec(&a, &[2, 1, 0, 0], &o).unwrap().value, BigInt::from(0));
    }

    #[test]
    fn all_ones_canonical_22() {
        let a = canon(vec![2, 2], 2);
        let o = opts();
        let d = [1, 1, 1, 1];
        let v = stack_volume(&a, &d, &o).unwrap();
        assert_eq!(v.value, rat(16, 1));
        // Oracle: with every dimension 1, End(M) = F_q exactly when the
        // nonzero arrows connect all vertices, otherwise M splits.
        let ends: Vec<(usize, usize)> = a.arrows().iter().map(|x| (x.source, x.target)).collect();
        let mut oracle = 0;
        for bits in 0u32..16 {
            let mut comp: Vec<usize> = (0..4).collect();
            for (k, &(s, t)) in ends.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    let (cs, ct) = (comp[s], comp[t]);
                    for c in comp.iter_mut() {
                        if *c == ct {
                            *c = cs;
                        }
                    }
                }
            }
            if comp.iter().all(|&c| c == comp[0]) {
                oracle += 1;
            }
        }
        let c = count_abs_indec(&a, &d, &o).unwrap();
        assert_eq!(c.value, BigInt::from(oracle));
        assert_eq!(c.value, BigInt::from(5));
        assert_eq!(c.solutions, 16);
    }

    #[test]
    fn squid_all_ones() {
        let a = squid(vec![2, 2], 2);
        let o = opts();
        assert_eq!(stack_volume(&a, &[1, 1, 1, 1], &o).unwrap().solutions, 9);
        assert_eq!(iterate_solutions(&a, &[1, 1, 1, 1], &o).unwrap().count(), 9);
        assert_eq!(iterate_solutions(&a, &[0, 0, 0, 0], &o).unwrap().count(), 1);
    }

    #[test]
    fn reduced_matches_unreduced() {
        let o = opts();
        let raw = EnumOptions { reduce: false, ..o.clone() };
        for (a, d) in [
            (canon(vec![2, 2], 2), vec![2, 1, 1, 1]),
            (canon(vec![2, 2, 2], 3), vec![1, 1, 1, 1, 1]),
            (squid(vec![2, 2], 3), vec![1, 2, 1, 1]),
            (squid(vec![2, 3], 2), vec![2, 2, 1, 1, 1]),
        ] {
            assert_eq!(
                count_abs_indec(&a, &d, &o).unwrap(),
                count_abs_indec(&a, &d, &raw).unwrap()
            );
            assert_eq!(nil_volume(&a, &d, &o).unwrap(), nil_volume(&a, &d, &raw).unwrap());
            let n = iterate_solutions(&a, &d, &raw).unwrap().count() as u128;
            assert_eq!(stack_volume(&a, &d, &o).unwrap().solutions, n);
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let a = squid(vec![2, 2, 2], 3);
        let d = [2, 1, 1, 1, 1];
        let base = count_abs_indec(&a, &d, &EnumOptions::default().with_workers(1)).unwrap();
        for w in [2, 3, 8] {
            assert_eq!(count_abs_indec(&a, &d, &EnumOptions::default().with_workers(w)).unwrap(), base);
        }
    }

    #[test]
    fn n2_solution_count_is_full() {
        let a = canon(vec![2, 3], 2);
        let d = [1, 2, 1, 1, 2];
        let raw = EnumOptions { reduce: false, ..opts() };
        let e = crate::enumerate::tuple_exponent(&a, &d);
        assert_eq!(stack_volume(&a, &d, &opts()).unwrap().solutions, 1u128 << e);
        assert_eq!(stack_volume(&a, &d, &raw).unwrap().solutions, 1u128 << e);
    }

    #[test]
    fn nil_volume_dominates_stack_volume() {
        let a = canon(vec![2, 2], 2);
        let o = opts();
        for d in [[1, 1, 1, 1], [2, 1, 1, 0], [1, 2, 1, 1]] {
            let s = stack_volume(&a, &d, &o).unwrap().value;
            let n = nil_volume(&a, &d, &o).unwrap().value;
            assert!(n >= s);
        }
    }

    #[test]
    fn unit_sum_definition_agrees() {
        // Σ over abs. indec. points of the scanned unit count.
        let a = canon(vec![2, 2], 2);
        let d = [1, 1, 2, 1];
        let f = a.field().clone();
        let raw = EnumOptions { reduce: false, ..opts() };
        let mut total = 0u128;
        for m in iterate_solutions(&a, &d, &raw).unwrap() {
            let e = end_basis(&a, &m);
            if crate::enumerate::endo::is_abs_indec_by_units(&f, &e, raw.end_cap).unwrap() {
                total += unit_count(&f, &e, raw.end_cap).unwrap() as u128;
            }
        }
        assert_eq!(count_abs_indec(&a, &d, &opts()).unwrap().aut_sum, total);
    }

    #[test]
    fn cap_is_reported() {
        let a = canon(vec![2, 2], 5);
        let o = opts().with_cap(1000);
        match stack_volume(&a, &[2, 2, 2, 2], &o) {
            Err(Error::EnumerationCap { .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
