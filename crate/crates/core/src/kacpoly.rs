//! Kac polynomials: interpolation of per-field counts, with checks of
//! integrality, field extensions, independence of the marked points, and
//! agreement between the canonical and squid presentations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::{count_abs_indec, EnumOptions};
use crate::error::{Error, Result};
use crate::gf::{integer_text, Elem, Field, Rational};
use crate::lattice::{KClass, ModuleLattice};
use crate::presentations::{AlgebraKind, AlgebraPresentation, WeightData};
use crate::series::{count_over_extension, recover_a_from_nil, Restriction};
use crate::torsionpair::{dim_side, sub_dims, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    DirectCount,
    NilInversion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KacSample {
    pub q: u64,
    #[serde(with = "integer_text")]
    pub value: BigInt,
    pub provenance: Provenance,
}

impl KacSample {
    pub fn direct(q: u64, value: impl Into<BigInt>) -> Self {
        KacSample {
            q,
            value: value.into(),
            provenance: Provenance::DirectCount,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KacPolynomial {
    pub kind: AlgebraKind,
    pub p: Vec<usize>,
    pub dim: Vec<usize>,
    /// Lowest degree first.
    #[serde(with = "integer_text::vec")]
    pub coefficients: Vec<BigInt>,
    pub samples: Vec<KacSample>,
}

impl KacPolynomial {
    pub fn evaluate(&self, x: u64) -> BigInt {
        evaluate(&self.coefficients, x)
    }

    /// Whether every coefficient is nonnegative.
    pub fn nonnegative(&self) -> bool {
        self.coefficients.iter().all(|c| !c.is_negative())
    }
}

pub fn evaluate(coeffs: &[BigInt], x: u64) -> BigInt {
    let x = BigInt::from(x);
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

/// Monomial coefficients of the polynomial of degree `< n` through `n`
/// points.
fn lagrange(points: &[(u64, BigInt)]) -> Vec<Rational> {
    let n = points.len();
    let mut out = vec![Rational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial ∏_{j≠i} (x − x_j) / (x_i − x_j)
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = Rational::from_integer(BigInt::from(*xj));
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xj;
            }
            basis = next;
            denom *= Rational::from_integer(BigInt::from(*xi)) - xj;
        }
        let scale = Rational::from_integer(yi.clone()) / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Lagrange interpolation through the first `m` samples for growing `m`,
/// accepted once it reproduces every remaining sample and at least two
/// samples are left over to confirm it.
pub fn interpolate(samples: &[KacSample]) -> Result<Vec<BigInt>> {
    let mut points: Vec<(u64, BigInt)> = Vec::new();
    for s in samples {
        match points.iter().find(|(q, _)| *q == s.q) {
            Some((_, v)) if *v != s.value => {
                return Err(Error::InvalidArgument(format!(
                    "conflicting samples at q = {}: {v} and {}",
                    s.q, s.value
                )))
            }
            Some(_) => {}
            None => points.push((s.q, s.value.clone())),
        }
    }
    let n = points.len();
    for m in 1..n.saturating_sub(1) {
        let coeffs = lagrange(&points[..m]);
        let reproduces = points[m..].iter().all(|(x, y)| {
            let x = Rational::from_integer(BigInt::from(*x));
            let v = coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c);
            v == Rational::from_integer(y.clone())
        });
        if reproduces {
            if let Some(bad) = coeffs.iter().find(|c| !c.is_integer()) {
                return Err(Error::Integrality(format!(
                    "interpolated coefficient {bad} is not an integer"
                )));
            }
            return Ok(coeffs.into_iter().map(|c| c.to_integer()).collect());
        }
    }
    Err(Error::Underdetermined(format!(
        "{n} distinct samples do not stabilize with two confirming points"
    )))
}

/// Presentation of the given kind over `F_q`, with `λ` given as element
/// indices.
pub fn presentation_over(kind: AlgebraKind, p: &[usize], lambda: &[Elem], q: u64) -> Result<AlgebraPresentation> {
    let f = Arc::new(Field::with_order(q)?);
    AlgebraPresentation::build(kind, &WeightData::new(p.to_vec(), lambda.to_vec(), f)?)
}

pub fn sample_counts(
    kind: AlgebraKind,
    p: &[usize],
    lambda: &[Elem],
    d: &[usize],
    fields: &[u64],
    opts: &EnumOptions,
) -> Result<Vec<KacSample>> {
    fields
        .iter()
        .map(|&q| {
            let pres = presentation_over(kind, p, lambda, q)?;
            Ok(KacSample::direct(q, count_abs_indec(&pres, d, opts)?.value))
        })
        .collect()
}

/// Counts over every field in `fields` and interpolates.
pub fn kac_polynomial(
    kind: AlgebraKind,
    p: &[usize],
    lambda: &[Elem],
    d: &[usize],
    fields: &[u64],
    opts: &EnumOptions,
) -> Result<KacPolynomial> {
    let samples = sample_counts(kind, p, lambda, d, fields, opts)?;
    let coefficients = interpolate(&samples)?;
    Ok(KacPolynomial {
        kind,
        p: p.to_vec(),
        dim: d.to_vec(),
        coefficients,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub q: u64,
    pub l: u32,
    #[serde(with = "integer_text")]
    pub expected: BigInt,
    #[serde(with = "integer_text")]
    pub actual: BigInt,
    pub pass: bool,
}

/// Compares `poly(q^l)` with a direct count over `F_{q^l}`, the
/// presentation being extended from `F_q`.
pub fn verify_extension(
    poly: &KacPolynomial,
    pres: &AlgebraPresentation,
    l: u32,
    opts: &EnumOptions,
) -> Result<ExtensionReport> {
    let q = pres.field().order() as u64;
    let ql = q
        .checked_pow(l)
        .ok_or_else(|| Error::InvalidField(format!("{q}^{l} is too large")))?;
    let expected = poly.evaluate(ql);
    let actual = count_over_extension(pres, &poly.dim, l, opts)?;
    Ok(ExtensionReport {
        q,
        l,
        pass: expected == actual,
        expected,
        actual,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCount {
    pub lambda: Vec<Elem>,
    #[serde(with = "integer_text")]
    pub count: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub q: u64,
    pub dim: Vec<usize>,
    pub counts: Vec<LambdaCount>,
    pub pass: bool,
}

/// `A_d(q)` for each set of marked points; all must agree. With two arms
/// there is nothing to vary and the check passes vacuously.
pub fn verify_lambda_independence(
    kind: AlgebraKind,
    p: &[usize],
    d: &[usize],
    q: u64,
    lambda_sets: &[Vec<Elem>],
    opts: &EnumOptions,
) -> Result<LambdaReport> {
    let mut counts = Vec::new();
    if p.len() > 2 {
        for lambda in lambda_sets {
            let pres = presentation_over(kind, p, lambda, q)?;
            counts.push(LambdaCount {
                lambda: lambda.clone(),
                count: count_abs_indec(&pres, d, opts)?.value,
            });
        }
    }
    let pass = counts.windows(2).all(|w| w[0].count == w[1].count);
    Ok(LambdaReport {
        q,
        dim: d.to_vec(),
        counts,
        pass,
    })
}

/// A lattice class reached by a canonical and a squid dimension vector,
/// with the counts on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedClass {
    pub class: KClass,
    pub canonical_dim: Vec<usize>,
    pub squid_dim: Vec<usize>,
    #[serde(with = "integer_text")]
    pub canonical: BigInt,
    #[serde(with = "integer_text")]
    pub squid: BigInt,
    pub agree: bool,
}

/// Pairs `(d_can, d_squid)` inside the given boxes with equal lattice
/// classes lying in `T` for both presentations.
pub fn matched_t_classes(
    canonical: &AlgebraPresentation,
    squid: &AlgebraPresentation,
    can_box: &[usize],
    squid_box: &[usize],
) -> Result<Vec<(KClass, Vec<usize>, Vec<usize>)>> {
    let lc = ModuleLattice::new(canonical)?;
    let ls = ModuleLattice::new(squid)?;
    let mut out = Vec::new();
    let squid_dims: Vec<(KClass, Vec<usize>)> = sub_dims(squid_box)
        .into_iter()
        .filter(|d| d.iter().any(|&x| x > 0))
        .filter(|d| dim_side(&ls, d).ok() == Some(Side::T))
        .map(|d| (ls.psi_inverse(&d), d))
        .collect();
    for dc in sub_dims(can_box) {
        if dc.iter().all(|&x| x == 0) || dim_side(&lc, &dc).ok() != Some(Side::T) {
            continue;
        }
        let c = lc.psi_inverse(&dc);
        for (k, ds) in &squid_dims {
            if *k == c {
                out.push((c.clone(), dc.clone(), ds.clone()));
            }
        }
    }
    Ok(out)
}

/// Compares `A_{d_can}` and `A_{d_squid}` over one field for every matched
/// class in the boxes.
pub fn cross_algebra_scan(
    p: &[usize],
    lambda: &[Elem],
    q: u64,
    can_box: &[usize],
    squid_box: &[usize],
    opts: &EnumOptions,
) -> Result<Vec<MatchedClass>> {
    let can = presentation_over(AlgebraKind::Canonical, p, lambda, q)?;
    let squid = presentation_over(AlgebraKind::Squid, p, lambda, q)?;
    matched_t_classes(&can, &squid, can_box, squid_box)?
        .into_iter()
        .map(|(class, dc, ds)| {
            let a = count_abs_indec(&can, &dc, opts)?.value;
            let b = count_abs_indec(&squid, &ds, opts)?.value;
            Ok(MatchedClass {
                class,
                agree: a == b,
                canonical_dim: dc,
                squid_dim: ds,
                canonical: a,
                squid: b,
            })
        })
        .collect()
}

/// `A` values interpolated from nil-volume recovery rather than direct
/// counts.
pub fn recovered_samples(
    kind: AlgebraKind,
    p: &[usize],
    lambda: &[Elem],
    d: &[usize],
    fields: &[u64],
    opts: &EnumOptions,
) -> Result<Vec<KacSample>> {
    fields
        .iter()
        .map(|&q| {
            let pres = presentation_over(kind, p, lambda, q)?;
            let rec = recover_a_from_nil(&pres, d, opts, Restriction::All)?;
            Ok(KacSample {
                q,
                value: rec.get(d).cloned().unwrap_or_default(),
                provenance: Provenance::NilInversion,
            })
        })
        .collect()
}

/// The interpolated polynomial from recovered samples, for comparison with
/// the direct one.
pub fn recovered_polynomial(
    kind: AlgebraKind,
    p: &[usize],
    lambda: &[Elem],
    d: &[usize],
    fields: &[u64],
    opts: &EnumOptions,
) -> Result<Vec<BigInt>> {
    interpolate(&recovered_samples(kind, p, lambda, d, fields, opts)?)
}
