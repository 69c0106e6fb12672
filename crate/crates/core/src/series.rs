//! Truncated generating series over dimension vectors, the exponential
//! identity between nilpotent-pair volumes and absolutely indecomposable
//! counts, its inversion, and the Jordan stratification.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::{
    self, count_abs_indec, end_basis, endo, fold_solutions, gl_order, nil_volume, nil_volume_filtered,
    EnumOptions, JordanType,
};
use crate::error::{Error, Result};
use crate::gf::{q_pow, rat_int, rational_text, Elem, Field, Matrix, Rational};
use crate::lattice::{KClass, LatticeContext, ModuleLattice};
use crate::presentations::{AlgebraPresentation, Representation};
use crate::torsionpair::{dim_side, split_dims, sub_dims, Side};

/// A power series in `z^d`, truncated to `d ≤ bound` componentwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    bound: Vec<usize>,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

fn leq(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn vadd(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_zero_vec(a: &[usize]) -> bool {
    a.iter().all(|&x| x == 0)
}

impl GradedSeries {
    pub fn zero(bound: &[usize]) -> Self {
        GradedSeries {
            bound: bound.to_vec(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(bound: &[usize]) -> Self {
        let mut s = GradedSeries::zero(bound);
        s.set(&vec![0; bound.len()], Rational::one());
        s
    }

    pub fn bound(&self) -> &[usize] {
        &self.bound
    }

    pub fn get(&self, d: &[usize]) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> Rational {
        self.get(&vec![0; self.bound.len()])
    }

    /// Sets a coefficient; terms beyond the bound are dropped.
    pub fn set(&mut self, d: &[usize], c: Rational) {
        if d.len() != self.bound.len() || !leq(d, &self.bound) {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(d);
        } else {
            self.coeffs.insert(d.to_vec(), c);
        }
    }

    pub fn add_term(&mut self, d: &[usize], c: &Rational) {
        let v = self.get(d) + c;
        self.set(d, v);
    }

    /// Nonzero coefficients in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_term(d, c);
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> GradedSeries {
        let mut out = GradedSeries::zero(&self.bound);
        for (d, c) in &self.coeffs {
            out.set(d, c * k);
        }
        out
    }

    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = GradedSeries::zero(&self.bound);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let d = vadd(a, b);
                if leq(&d, &self.bound) {
                    out.add_term(&d, &(x * y));
                }
            }
        }
        out
    }

    fn degree_bound(&self) -> usize {
        self.bound.iter().sum()
    }

    /// `Σ_k s^k / k!`; needs a zero constant term.
    pub fn exp(&self) -> Result<GradedSeries> {
        if !self.constant().is_zero() {
            return Err(Error::Series("exp needs a zero constant term".into()));
        }
        let mut out = GradedSeries::one(&self.bound);
        let mut power = GradedSeries::one(&self.bound);
        for k in 1..=self.degree_bound() {
            power = power.mul(self).scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if power.coeffs.is_empty() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    /// `Σ_k (−1)^{k+1} u^k / k` for `s = 1 + u`; needs constant term 1.
    pub fn log(&self) -> Result<GradedSeries> {
        if !self.constant().is_one() {
            return Err(Error::Series("log needs constant term 1".into()));
        }
        let mut u = self.clone();
        u.set(&vec![0; self.bound.len()], Rational::zero());
        let mut out = GradedSeries::zero(&self.bound);
        let mut power = GradedSeries::one(&self.bound);
        for k in 1..=self.degree_bound() {
            power = power.mul(&u);
            if power.coeffs.is_empty() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&Rational::new(BigInt::from(sign), BigInt::from(k))));
        }
        Ok(out)
    }
}

/// Presentations over `F_{q^l}` for the extension degrees a check needs.
struct Extensions<'a> {
    base: &'a AlgebraPresentation,
    cache: BTreeMap<u32, Arc<AlgebraPresentation>>,
}

impl<'a> Extensions<'a> {
    fn new(base: &'a AlgebraPresentation) -> Self {
        Extensions {
            base,
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, l: u32) -> Result<Arc<AlgebraPresentation>> {
        if let Some(p) = self.cache.get(&l) {
            return Ok(p.clone());
        }
        let pres = if l == 1 {
            self.base.clone()
        } else {
            let q = self.base.field().order() as u64;
            let big = q
                .checked_pow(l)
                .ok_or_else(|| Error::InvalidField(format!("{q}^{l} is too large")))?;
            self.base.extend_scalars(Arc::new(Field::with_order(big)?))?
        };
        let pres = Arc::new(pres);
        self.cache.insert(l, pres.clone());
        Ok(pres)
    }
}

/// Nonzero `x ≤ bound` and the `l ≥ 1` with `l·x ≤ bound`.
fn multiples(bound: &[usize]) -> Vec<(Vec<usize>, u32)> {
    let mut out = Vec::new();
    for x in sub_dims(bound) {
        if is_zero_vec(&x) {
            continue;
        }
        let mut l = 1u32;
        loop {
            let lx: Vec<usize> = x.iter().map(|&a| a * l as usize).collect();
            if !leq(&lx, bound) {
                break;
            }
            out.push((x.clone(), l));
            l += 1;
        }
    }
    out
}

/// One coefficient of a series comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub dim: Vec<usize>,
    #[serde(with = "rational_text")]
    pub lhs: Rational,
    #[serde(with = "rational_text")]
    pub rhs: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesComparison {
    pub entries: Vec<CoefficientEntry>,
    pub pass: bool,
}

fn compare(lhs: &GradedSeries, rhs: &GradedSeries) -> SeriesComparison {
    let entries: Vec<CoefficientEntry> = sub_dims(lhs.bound())
        .into_iter()
        .map(|d| {
            let (l, r) = (lhs.get(&d), rhs.get(&d));
            CoefficientEntry {
                pass: l == r,
                dim: d,
                lhs: l,
                rhs: r,
            }
        })
        .collect();
    SeriesComparison {
        pass: entries.iter().all(|e| e.pass),
        entries,
    }
}

/// `A_x(q^l)` for every pair produced by [`multiples`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionCount {
    pub dim: Vec<usize>,
    pub l: u32,
    pub q: u64,
    pub value: BigInt,
    pub side: Option<Side>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NilExpReport {
    pub q: u64,
    pub bound: Vec<usize>,
    /// Nilpotent pairs on modules with all summands in `T`, against the
    /// exponential of the `T`-side counts.
    pub t_restricted: SeriesComparison,
    /// The same over all modules; informational.
    pub full: SeriesComparison,
    pub counts: Vec<ExtensionCount>,
    pub pass: bool,
}

/// `Σ_{x,l} A_x(q^l) / (l (q^l − 1)) z^{l x}`.
fn plethystic_argument(bound: &[usize], q: u64, counts: &[ExtensionCount], t_only: bool) -> GradedSeries {
    let mut s = GradedSeries::zero(bound);
    for c in counts {
        if t_only && c.side != Some(Side::T) {
            continue;
        }
        let ql = BigInt::from(q).pow(c.l);
        let den = BigInt::from(c.l) * (ql - 1);
        let lx: Vec<usize> = c.dim.iter().map(|&a| a * c.l as usize).collect();
        s.add_term(&lx, &Rational::new(c.value.clone(), den));
    }
    s
}

fn side_or_none(lattice: &ModuleLattice, d: &[usize]) -> Option<Side> {
    dim_side(lattice, d).ok()
}

/// Checks `Σ_d vol(Nil_d) z^d = exp(Σ A_x(q^l)/(l(q^l−1)) z^{lx})` up to
/// `bound`, inside `T` and over the whole module category.
pub fn nil_exp_check(pres: &AlgebraPresentation, bound: &[usize], opts: &EnumOptions) -> Result<NilExpReport> {
    pres.check_dim(bound)?;
    let lattice = ModuleLattice::new(pres)?;
    let q = pres.field().order() as u64;
    let mut ext = Extensions::new(pres);
    let mut counts = Vec::new();
    for (x, l) in multiples(bound) {
        let p = ext.get(l)?;
        let value = count_abs_indec(&p, &x, opts)?.value;
        let side = if value.is_zero() { None } else { Some(dim_side(&lattice, &x)?) };
        counts.push(ExtensionCount {
            dim: x,
            l,
            q: q.pow(l),
            value,
            side,
        });
    }
    let keep_t = |x: &[usize]| side_or_none(&lattice, x) == Some(Side::T);
    let mut lhs_t = GradedSeries::one(bound);
    let mut lhs_full = GradedSeries::one(bound);
    for d in sub_dims(bound) {
        if is_zero_vec(&d) {
            continue;
        }
        lhs_full.set(&d, nil_volume(pres, &d, opts)?.value);
        lhs_t.set(&d, nil_volume_filtered(pres, &d, opts, &keep_t)?.value);
    }
    let rhs_t = plethystic_argument(bound, q, &counts, true).exp()?;
    let rhs_full = plethystic_argument(bound, q, &counts, false).exp()?;
    let t_restricted = compare(&lhs_t, &rhs_t);
    let full = compare(&lhs_full, &rhs_full);
    Ok(NilExpReport {
        q,
        bound: bound.to_vec(),
        pass: t_restricted.pass,
        t_restricted,
        full,
        counts,
    })
}

/// Which modules enter the nilpotent-pair series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    All,
    TorsionSide,
}

fn nil_series(
    pres: &AlgebraPresentation,
    bound: &[usize],
    opts: &EnumOptions,
    restriction: Restriction,
) -> Result<GradedSeries> {
    let lattice = ModuleLattice::new(pres)?;
    let keep_t = |x: &[usize]| side_or_none(&lattice, x) == Some(Side::T);
    let mut s = GradedSeries::one(bound);
    for d in sub_dims(bound) {
        if is_zero_vec(&d) {
            continue;
        }
        let v = match restriction {
            Restriction::All => nil_volume(pres, &d, opts)?,
            Restriction::TorsionSide => nil_volume_filtered(pres, &d, opts, &keep_t)?,
        };
        s.set(&d, v.value);
    }
    Ok(s)
}

/// Recovers `A_d(q)` for every nonzero `d ≤ bound` from nilpotent-pair
/// volumes alone: with `L = log Σ vol(Nil_d) z^d`,
/// `A_d(q) = (q−1) (L_d − Σ_{l≥2, l|d} A_{d/l}(q^l) / (l(q^l−1)))`,
/// the inner values being recovered the same way over `F_{q^l}`.
pub fn recover_a_from_nil(
    pres: &AlgebraPresentation,
    bound: &[usize],
    opts: &EnumOptions,
    restriction: Restriction,
) -> Result<BTreeMap<Vec<usize>, BigInt>> {
    pres.check_dim(bound)?;
    let q = pres.field().order() as u64;
    let log = nil_series(pres, bound, opts, restriction)?.log()?;
    let mut ext = Extensions::new(pres);
    let mut inner: BTreeMap<u32, BTreeMap<Vec<usize>, BigInt>> = BTreeMap::new();
    let max_l = bound.iter().copied().max().unwrap_or(0) as u32;
    for l in 2..=max_l {
        let sub: Vec<usize> = bound.iter().map(|&b| b / l as usize).collect();
        if is_zero_vec(&sub) {
            continue;
        }
        let p = ext.get(l)?;
        inner.insert(l, recover_a_from_nil(&p, &sub, opts, restriction)?);
    }
    let mut out = BTreeMap::new();
    for d in sub_dims(bound) {
        if is_zero_vec(&d) {
            continue;
        }
        let mut s = log.get(&d);
        for (&l, values) in &inner {
            if d.iter().all(|&x| x % l as usize == 0) {
                let x: Vec<usize> = d.iter().map(|&a| a / l as usize).collect();
                let ql = BigInt::from(q).pow(l);
                let a = values.get(&x).cloned().unwrap_or_default();
                s -= Rational::new(a, BigInt::from(l) * (ql - 1));
            }
        }
        let a = s * rat_int(q - 1);
        if !a.is_integer() {
            return Err(Error::Integrality(format!(
                "recovered A_{d:?}({q}) = {a} is not an integer"
            )));
        }
        out.insert(d, a.to_integer());
    }
    Ok(out)
}

/// `r = −{Σ_i (i−1)⟨α_i,α_i⟩ + Σ_{i<j} i (α_i,α_j)} + Σ_{i<j} ⟨α_j,α_i⟩`
/// with `(x,y) = ⟨x,y⟩ + ⟨y,x⟩`.
pub fn rank_r(ctx: &LatticeContext, parts: &[KClass]) -> Result<i64> {
    for x in parts {
        ctx.check(x)?;
    }
    let mut inner = 0i64;
    let mut tail = 0i64;
    for (i0, a) in parts.iter().enumerate() {
        let i = i0 as i64 + 1;
        inner += (i - 1) * ctx.euler(a, a);
        for b in &parts[i0 + 1..] {
            inner += i * ctx.sym(a, b);
            tail += ctx.euler(b, a);
        }
    }
    Ok(-inner + tail)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub q: u64,
    pub dim: Vec<usize>,
    pub jordan_type: JordanType,
    pub rank_r: i64,
    /// `vol(Nil^T_α̲)`.
    #[serde(with = "rational_text")]
    pub lhs: Rational,
    /// Volume of the stack of filtrations with subquotients `α_i`.
    #[serde(with = "rational_text")]
    pub chain_volume: Rational,
    #[serde(with = "rational_text")]
    pub rhs: Rational,
    pub pass: bool,
}

fn trim(mut t: JordanType) -> JordanType {
    while t.len() > 1 && t.last().is_some_and(|a| is_zero_vec(a)) {
        t.pop();
    }
    t
}

fn all_t(pres: &AlgebraPresentation, lattice: &ModuleLattice, m: &Representation, opts: &EnumOptions) -> Result<bool> {
    Ok(is_zero_vec(&split_dims(pres, lattice, m, opts)?.0))
}

/// Weighted count of pairs `(M, θ)` with `M` in `T` and `θ ∈ End(M)`
/// nilpotent, by Jordan type.
pub fn jordan_strata(
    pres: &AlgebraPresentation,
    d: &[usize],
    opts: &EnumOptions,
) -> Result<BTreeMap<JordanType, u128>> {
    pres.check_dim(d)?;
    let lattice = ModuleLattice::new(pres)?;
    let f = pres.field().clone();
    fold_solutions(
        pres,
        d,
        opts,
        opts.reduce,
        BTreeMap::new,
        |acc: &mut BTreeMap<JordanType, u128>, m, w| {
            if !all_t(pres, &lattice, m, opts)? {
                return Ok(());
            }
            let e = end_basis(pres, m);
            let mut err = None;
            e.scan(&f, opts.end_cap, |theta| {
                if endo::is_nilpotent(&f, theta) {
                    match endo::jordan_type(pres, m, theta) {
                        Ok(t) => *acc.entry(trim(t)).or_insert(0) += w,
                        Err(x) => {
                            err = Some(x);
                            return true;
                        }
                    }
                }
                false
            })?;
            err.map_or(Ok(()), Err)
        },
        |a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
        },
    )
}

/// Number of injective homomorphisms `N → M`.
fn injective_homs(pres: &AlgebraPresentation, n: &Representation, m: &Representation, cap: u64) -> Result<u128> {
    let f = pres.field();
    let basis = endo::hom_basis(pres, n, m);
    let q = f.order();
    let h = basis.len();
    let total = u32::try_from(h)
        .ok()
        .and_then(|x| (q as u64).checked_pow(x))
        .filter(|&t| t <= cap)
        .ok_or(Error::EndomorphismCap {
            q: q as u64,
            exponent: h as u64,
            cap,
        })?;
    let mut coeffs = vec![0 as Elem; h];
    let mut count = 0u128;
    for _ in 0..total {
        let phi: Vec<Matrix> = (0..n.dim.len())
            .map(|v| {
                let mut x = Matrix::zeros(m.dim[v], n.dim[v]);
                for (b, &c) in basis.iter().zip(&coeffs) {
                    x.add_scaled(c, &b[v], f);
                }
                x
            })
            .collect();
        if phi.iter().zip(&n.dim).all(|(x, &k)| x.rank(f) == k) {
            count += 1;
        }
        for k in (0..h).rev() {
            coeffs[k] += 1;
            if coeffs[k] < q {
                break;
            }
            coeffs[k] = 0;
        }
    }
    Ok(count)
}

/// Points of `Rep_d` in `T`, orbit-reduced, with weights.
fn t_points(
    pres: &AlgebraPresentation,
    lattice: &ModuleLattice,
    d: &[usize],
    opts: &EnumOptions,
) -> Result<Vec<(Representation, u128)>> {
    if is_zero_vec(d) {
        return Ok(vec![(Representation::zero(pres, d), 1)]);
    }
    fold_solutions(
        pres,
        d,
        opts,
        opts.reduce,
        Vec::new,
        |acc: &mut Vec<(Representation, u128)>, m, w| {
            if all_t(pres, lattice, m, opts)? {
                acc.push((m.clone(), w));
            }
            Ok(())
        },
        |a, b| a.extend(b),
    )
}

/// Volume of chains `N_s ↪ … ↪ N_1` of modules in `T` with
/// `dim N_i = Σ_{j≥i} α_j`: the module-side picture of filtrations with
/// subquotient classes `α_i`.
pub fn chain_volume(
    pres: &AlgebraPresentation,
    jordan_type: &[Vec<usize>],
    opts: &EnumOptions,
) -> Result<Rational> {
    let lattice = ModuleLattice::new(pres)?;
    let q = pres.field().order() as u64;
    let n = pres.vertex_count();
    let s = jordan_type.len();
    let mut dims = vec![vec![0; n]; s];
    for i in (0..s).rev() {
        let below = if i + 1 < s { dims[i + 1].clone() } else { vec![0; n] };
        dims[i] = vadd(&below, &jordan_type[i]);
    }
    let points: Vec<Vec<(Representation, u128)>> = dims
        .iter()
        .map(|d| t_points(pres, &lattice, d, opts))
        .collect::<Result<_>>()?;
    // h[k] = weighted number of chains N_s ↪ … ↪ N_i starting at point k of level i
    let mut h: Vec<u128> = vec![1; points[s - 1].len()];
    for i in (0..s - 1).rev() {
        let mut next = Vec::with_capacity(points[i].len());
        for (m, _) in &points[i] {
            let mut total = 0u128;
            for ((nrep, w), hv) in points[i + 1].iter().zip(&h) {
                if *hv == 0 {
                    continue;
                }
                total += w * hv * injective_homs(pres, nrep, m, opts.end_cap)?;
            }
            next.push(total);
        }
        h = next;
    }
    let total: u128 = points[0].iter().zip(&h).map(|((_, w), hv)| w * hv).sum();
    let den = dims.iter().fold(BigInt::one(), |acc, d| acc * gl_order(d, q));
    Ok(Rational::new(BigInt::from(total), den))
}

/// Compares `vol(Nil^T_α̲)` with `q^{r(α̲)}` times the volume of the
/// corresponding stack of filtrations.
pub fn stratum_check(
    pres: &AlgebraPresentation,
    d: &[usize],
    jordan_type: &[Vec<usize>],
    opts: &EnumOptions,
) -> Result<StratumReport> {
    pres.check_dim(d)?;
    let n = pres.vertex_count();
    if jordan_type.is_empty() || jordan_type.iter().any(|a| a.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "a Jordan type needs at least one part, each of length {n}"
        )));
    }
    let mut weighted = vec![0; n];
    for (i, a) in jordan_type.iter().enumerate() {
        for (w, x) in weighted.iter_mut().zip(a) {
            *w += (i + 1) * x;
        }
    }
    if weighted != d {
        return Err(Error::InvalidArgument(format!(
            "Σ i·α_i = {weighted:?} differs from d = {d:?}"
        )));
    }
    let lattice = ModuleLattice::new(pres)?;
    for (i, a) in jordan_type.iter().enumerate() {
        if !is_zero_vec(a) && dim_side(&lattice, a)? != Side::T {
            return Err(Error::InvalidArgument(format!(
                "part α_{} = {a:?} does not lie on the T side; the stratification is only asserted inside T",
                i + 1
            )));
        }
    }
    let jt = trim(jordan_type.to_vec());
    let q = pres.field().order() as u64;
    let classes: Vec<KClass> = jt.iter().map(|a| lattice.psi_inverse(a)).collect();
    let r = rank_r(lattice.context(), &classes)?;
    let strata = jordan_strata(pres, d, opts)?;
    let lhs = Rational::new(
        BigInt::from(strata.get(&jt).copied().unwrap_or(0)),
        gl_order(d, q),
    );
    let chain = chain_volume(pres, &jt, opts)?;
    let rhs = q_pow(q, r) * &chain;
    Ok(StratumReport {
        q,
        dim: d.to_vec(),
        jordan_type: jt,
        rank_r: r,
        pass: lhs == rhs,
        lhs,
        chain_volume: chain,
        rhs,
    })
}

/// Counts over `F_{q^l}` for a presentation defined over `F_q`.
pub fn count_over_extension(
    pres: &AlgebraPresentation,
    d: &[usize],
    l: u32,
    opts: &EnumOptions,
) -> Result<BigInt> {
    let mut ext = Extensions::new(pres);
    let p = ext.get(l)?;
    Ok(enumerate::count_abs_indec(&p, d, opts)?.value)
}
