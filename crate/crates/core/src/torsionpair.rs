//! The torsion pair `(T, F)` seen from the module side: every indecomposable
//! module lies in `T` or in `F[1]`, decided by the position of its lattice
//! class, and every module splits accordingly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::enumerate::{self, end_basis, fold_solutions, gl_order, is_abs_indec, EnumOptions};
use crate::error::{Error, Result};
use crate::gf::{q_pow, rational_text, Rational};
use crate::lattice::{KClass, LatticeContext, ModuleLattice};
use crate::presentations::{AlgebraPresentation, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    T,
    #[serde(rename = "F[1]")]
    FShift,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::T => write!(f, "T"),
            Side::FShift => write!(f, "F[1]"),
        }
    }
}

/// Sheaves have rank ≥ 0, torsion sheaves positive degree; `F[1]` is the
/// negative of that cone.
pub fn indec_side(ctx: &LatticeContext, c: &KClass) -> Result<Side> {
    ctx.check(c)?;
    if c.is_zero() {
        return Err(Error::ZeroClass);
    }
    let rank = ctx.rank(c);
    let degree = ctx.degree(c);
    match (rank.signum(), degree.signum()) {
        (1, _) | (0, 1) => Ok(Side::T),
        (-1, _) | (0, -1) => Ok(Side::FShift),
        _ => Err(Error::Unclassifiable(format!("{c} has rank 0 and degree 0"))),
    }
}

/// Side of an indecomposable module with dimension vector `d`.
pub fn dim_side(lattice: &ModuleLattice, d: &[usize]) -> Result<Side> {
    indec_side(lattice.context(), &lattice.psi_inverse(d))
}

fn add_dims(acc: &mut [usize], x: &[usize]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// `(d1, d2)`: total dimensions of the `F[1]` and of the `T` summands.
pub fn split_dims(
    pres: &AlgebraPresentation,
    lattice: &ModuleLattice,
    m: &Representation,
    opts: &EnumOptions,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = m.dim.len();
    let mut d1 = vec![0; n];
    let mut d2 = vec![0; n];
    if m.total_dim() == 0 {
        return Ok((d1, d2));
    }
    let summands = if is_abs_indec(pres.field(), &end_basis(pres, m)) {
        vec![m.dim.clone()]
    } else {
        enumerate::decompose(pres, m, opts)?
            .into_iter()
            .map(|x| x.dim)
            .collect()
    };
    for x in &summands {
        match dim_side(lattice, x)? {
            Side::FShift => add_dims(&mut d1, x),
            Side::T => add_dims(&mut d2, x),
        }
    }
    Ok((d1, d2))
}

/// Weighted number of points of `Rep_d` for each value of the `F[1]` part
/// `d1` of the splitting.
pub fn split_distribution(
    pres: &AlgebraPresentation,
    lattice: &ModuleLattice,
    d: &[usize],
    opts: &EnumOptions,
) -> Result<BTreeMap<Vec<usize>, u128>> {
    pres.check_dim(d)?;
    if d.iter().all(|&x| x == 0) {
        return Ok(BTreeMap::from([(d.to_vec(), 1)]));
    }
    fold_solutions(
        pres,
        d,
        opts,
        opts.reduce,
        BTreeMap::new,
        |acc: &mut BTreeMap<Vec<usize>, u128>, m, w| {
            let (d1, _) = split_dims(pres, lattice, m, opts)?;
            *acc.entry(d1).or_insert(0) += w;
            Ok(())
        },
        |a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedVolume {
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    #[serde(with = "rational_text")]
    pub value: Rational,
}

/// `vol(Rep_{d1,d2})`: modules of dimension `d1 + d2` whose `F[1]` part has
/// dimension `d1`.
pub fn bigraded_volume(
    pres: &AlgebraPresentation,
    d1: &[usize],
    d2: &[usize],
    opts: &EnumOptions,
) -> Result<BigradedVolume> {
    if d1.len() != d2.len() {
        return Err(Error::InvalidDimension("d1 and d2 have different lengths".into()));
    }
    let lattice = ModuleLattice::new(pres)?;
    let d: Vec<usize> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
    let dist = split_distribution(pres, &lattice, &d, opts)?;
    let n = dist.get(d1).copied().unwrap_or(0);
    let q = pres.field().order() as u64;
    Ok(BigradedVolume {
        d1: d1.to_vec(),
        d2: d2.to_vec(),
        value: Rational::new(BigInt::from(n), gl_order(&d, q)),
    })
}

/// One admissible pair of the factorization check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationEntry {
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    #[serde(with = "rational_text")]
    pub lhs: Rational,
    /// `vol(Rep_{d1,0})`.
    #[serde(with = "rational_text")]
    pub vol_f: Rational,
    /// `vol(Rep_{0,d2})`.
    #[serde(with = "rational_text")]
    pub vol_t: Rational,
    /// `−⟨d2, d1⟩`.
    pub exponent: i64,
    #[serde(with = "rational_text")]
    pub rhs: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub q: u64,
    pub dim: Vec<usize>,
    pub entries: Vec<FactorizationEntry>,
    #[serde(with = "rational_text")]
    pub stack_volume: Rational,
    #[serde(with = "rational_text")]
    pub partition_sum: Rational,
    pub partition_pass: bool,
    pub pass: bool,
    /// First pair `(d1, d2)` whose two sides differ.
    pub failure: Option<(Vec<usize>, Vec<usize>)>,
}

/// All `x` with `0 ≤ x ≤ d` componentwise, in lexicographic order.
pub fn sub_dims(d: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=n).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// Checks `vol(Rep_{d1,d2}) = q^{−⟨d2,d1⟩} vol(Rep_{d1,0}) vol(Rep_{0,d2})`
/// for every splitting `d = d1 + d2`, and that the left sides sum to
/// `vol(Rep_d)`.
pub fn check_factorization(
    pres: &AlgebraPresentation,
    d: &[usize],
    opts: &EnumOptions,
) -> Result<FactorizationReport> {
    pres.check_dim(d)?;
    let lattice = ModuleLattice::new(pres)?;
    let q = pres.field().order() as u64;
    let mut dists = BTreeMap::new();
    for x in sub_dims(d) {
        let dist = split_distribution(pres, &lattice, &x, opts)?;
        dists.insert(x, dist);
    }
    let vol = |total: &[usize], d1: &[usize]| -> Rational {
        let n = dists[total].get(d1).copied().unwrap_or(0);
        Rational::new(BigInt::from(n), gl_order(total, q))
    };
    let zero = vec![0; d.len()];
    let mut entries = Vec::new();
    let mut partition_sum = Rational::zero();
    for d1 in sub_dims(d) {
        let d2: Vec<usize> = d.iter().zip(&d1).map(|(a, b)| a - b).collect();
        let lhs = vol(d, &d1);
        let vol_f = vol(&d1, &d1);
        let vol_t = vol(&d2, &zero);
        let exponent = -lattice.euler_mod(&d2, &d1);
        let rhs = q_pow(q, exponent) * &vol_f * &vol_t;
        partition_sum += &lhs;
        entries.push(FactorizationEntry {
            pass: lhs == rhs,
            d1,
            d2,
            lhs,
            vol_f,
            vol_t,
            exponent,
            rhs,
        });
    }
    let stack_volume = enumerate::stack_volume(pres, d, opts)?.value;
    let partition_pass = partition_sum == stack_volume;
    let failure = entries
        .iter()
        .find(|e| !e.pass)
        .map(|e| (e.d1.clone(), e.d2.clone()));
    Ok(FactorizationReport {
        q,
        dim: d.to_vec(),
        pass: failure.is_none() && partition_pass,
        entries,
        stack_volume,
        partition_sum,
        partition_pass,
        failure,
    })
}

/// `A_d = A^T_d + A^F_d` according to the side of `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsIndecSplit {
    pub total: BigInt,
    pub t: BigInt,
    pub f: BigInt,
}

pub fn abs_indec_split(pres: &AlgebraPresentation, d: &[usize], opts: &EnumOptions) -> Result<AbsIndecSplit> {
    let total = enumerate::count_abs_indec(pres, d, opts)?.value;
    if total.is_zero() {
        // no indecomposable to classify; d itself may be a flat class
        return Ok(AbsIndecSplit {
            total,
            t: BigInt::zero(),
            f: BigInt::zero(),
        });
    }
    let lattice = ModuleLattice::new(pres)?;
    let side = dim_side(&lattice, d)?;
    let (t, f) = match side {
        Side::T => (total.clone(), BigInt::zero()),
        Side::FShift => (BigInt::zero(), total.clone()),
    };
    Ok(AbsIndecSplit { total, t, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{rat, Field};
    use crate::presentations::{canonical_algebra, squid_algebra, WeightData};
    use std::sync::Arc;

    fn weights(p: Vec<usize>, q: u64) -> WeightData {
        let f = Arc::new(Field::with_order(q).unwrap());
        let lam = (1..p.len() as u32 - 1).collect();
        WeightData::new(p, lam, f).unwrap()
    }

    fn opts() -> EnumOptions {
        EnumOptions::default().with_workers(2)
    }

    #[test]
    fn sides_of_basic_classes() {
        let ctx = LatticeContext::new(&[2, 3, 4]).unwrap();
        let p = ctx.p().to_vec();
        assert_eq!(indec_side(&ctx, &KClass::e(&p)).unwrap(), Side::T);
        assert_eq!(indec_side(&ctx, &KClass::delta(&p)).unwrap(), Side::T);
        assert_eq!(indec_side(&ctx, &-&KClass::generator(&p, 2, 2)).unwrap(), Side::FShift);
        assert_eq!(indec_side(&ctx, &-&KClass::e(&p)).unwrap(), Side::FShift);
        assert_eq!(indec_side(&ctx, &KClass::zero(&p)), Err(Error::ZeroClass));
        let ctx = LatticeContext::new(&[2, 2]).unwrap();
        let p = ctx.p().to_vec();
        let flat = &KClass::generator(&p, 1, 1) - &KClass::generator(&p, 2, 1);
        assert!(matches!(indec_side(&ctx, &flat), Err(Error::Unclassifiable(_))));
    }

    #[test]
    fn simple_sides_regression() {
        use Side::*;
        let w = weights(vec![2, 2], 2);
        let canon = canonical_algebra(&w).unwrap();
        let squid = squid_algebra(&w).unwrap();
        let side = |pres: &AlgebraPresentation, v: usize| {
            let lat = ModuleLattice::new(pres).unwrap();
            let mut d = vec![0; 4];
            d[v] = 1;
            dim_side(&lat, &d).unwrap()
        };
        let canon_sides: Vec<Side> = (0..4).map(|v| side(&canon, v)).collect();
        let squid_sides: Vec<Side> = (0..4).map(|v| side(&squid, v)).collect();
        assert_eq!(canon_sides, vec![FShift, T, FShift, FShift]);
        assert_eq!(squid_sides, vec![FShift, T, T, T]);
    }

    #[test]
    fn bigraded_simple_and_partition() {
        let w = weights(vec![2, 2], 3);
        let a = canonical_algebra(&w).unwrap();
        let o = opts();
        assert_eq!(bigraded_volume(&a, &[0; 4], &[0, 1, 0, 0], &o).unwrap().value, rat(1, 2));
        assert_eq!(bigraded_volume(&a, &[0; 4], &[1, 0, 0, 0], &o).unwrap().value, rat(0, 1));
        assert_eq!(bigraded_volume(&a, &[1, 0, 0, 0], &[0; 4], &o).unwrap().value, rat(1, 2));
        assert!(bigraded_volume(&a, &[1, 0], &[0; 4], &o).is_err());

        let d = [1, 1, 1, 1];
        let total = enumerate::stack_volume(&a, &d, &o).unwrap().value;
        let sum: Rational = sub_dims(&d)
            .into_iter()
            .map(|d1| {
                let d2: Vec<usize> = d.iter().zip(&d1).map(|(x, y)| x - y).collect();
                bigraded_volume(&a, &d1, &d2, &o).unwrap().value
            })
            .sum();
        assert_eq!(sum, total);
    }

    #[test]
    fn factorization_all_ones() {
        let o = opts();
        let canon = canonical_algebra(&weights(vec![2, 2], 2)).unwrap();
        let r = check_factorization(&canon, &[1, 1, 1, 1], &o).unwrap();
        assert!(r.pass, "{r:?}");
        for q in [2, 3] {
            let squid = squid_algebra(&weights(vec![2, 2], q)).unwrap();
            let r = check_factorization(&squid, &[1, 1, 1, 1], &o).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let r = check_factorization(&canon, &[0, 1, 0, 0], &o).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn abs_indec_split_partitions() {
        let o = opts();
        let a = squid_algebra(&weights(vec![2, 2], 2)).unwrap();
        for d in sub_dims(&[1, 2, 1, 1]) {
            let s = abs_indec_split(&a, &d, &o).unwrap();
            assert_eq!(&s.t + &s.f, s.total);
            assert!(s.t >= BigInt::zero() && s.f >= BigInt::zero());
        }
    }
}
