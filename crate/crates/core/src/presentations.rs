//! Quivers with relations, and the canonical and squid presentations built
//! from weight data `(p, λ)`.
//!
//! Vertices are always ordered `0, 1, (1,1), …, (1,p_1−1), (2,1), …`, so a
//! dimension vector is a plain list in that order.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{make_field, Elem, Field, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Canonical,
    Squid,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Canonical => write!(f, "canonical"),
            AlgebraKind::Squid => write!(f, "squid"),
        }
    }
}

impl std::str::FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(AlgebraKind::Canonical),
            "squid" => Ok(AlgebraKind::Squid),
            other => Err(Error::InvalidArgument(format!(
                "unknown algebra `{other}` (expected canonical or squid)"
            ))),
        }
    }
}

/// Weights `p_1..p_N` and parameters `λ_3..λ_N`. The points `λ_1 = ∞` and
/// `λ_2 = 0` are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    p: Vec<usize>,
    lambda: Vec<Elem>,
    field: Arc<Field>,
}

impl WeightData {
    pub fn new(p: Vec<usize>, lambda: Vec<Elem>, field: Arc<Field>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidWeight(format!(
                "need at least two weights, got {}",
                p.len()
            )));
        }
        if let Some(bad) = p.iter().find(|&&w| w < 2) {
            return Err(Error::InvalidWeight(format!("weight {bad} is below 2")));
        }
        if lambda.len() != p.len() - 2 {
            return Err(Error::InvalidWeight(format!(
                "{} weights need {} lambda values, got {}",
                p.len(),
                p.len() - 2,
                lambda.len()
            )));
        }
        for (k, &l) in lambda.iter().enumerate() {
            if !field.contains(l) {
                return Err(Error::InvalidWeight(format!(
                    "lambda_{} = {l} is not an element of F_{}",
                    k + 3,
                    field.order()
                )));
            }
            if l == 0 {
                return Err(Error::InvalidWeight(format!(
                    "lambda_{} must be nonzero (0 is reserved for lambda_2)",
                    k + 3
                )));
            }
            if lambda[..k].contains(&l) {
                return Err(Error::InvalidWeight(format!(
                    "lambda values must be pairwise distinct: {l} is repeated"
                )));
            }
        }
        Ok(WeightData { p, lambda, field })
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn lambda(&self) -> &[Elem] {
        &self.lambda
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn arms(&self) -> usize {
        self.p.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Zero,
    One,
    /// Arm vertex `(i, j)`, both 1-based.
    Arm(usize, usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Zero => write!(f, "0"),
            VertexLabel::One => write!(f, "1"),
            VertexLabel::Arm(i, j) => write!(f, "({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<VertexLabel>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<VertexLabel>, arrows: Vec<Arrow>) -> Result<Self> {
        let n = vertices.len();
        for a in &arrows {
            if a.source >= n || a.target >= n {
                return Err(Error::Shape(format!("arrow {} has a bad endpoint", a.label)));
            }
        }
        for (k, a) in arrows.iter().enumerate() {
            if arrows[..k].iter().any(|b| b.label == a.label) {
                return Err(Error::Shape(format!("duplicate arrow label {}", a.label)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, label: VertexLabel) -> Option<usize> {
        self.vertices.iter().position(|&v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// All paths from `v` to `w`, as arrow sequences in traversal order.
    /// Length-zero path included when `v == w`. Assumes no oriented cycles.
    pub fn paths(&self, v: usize, w: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(v, Vec::new())];
        while let Some((at, path)) = stack.pop() {
            if at == w {
                out.push(path.clone());
            }
            for (k, a) in self.arrows.iter().enumerate() {
                if a.source == at {
                    let mut next = path.clone();
                    next.push(k);
                    stack.push((a.target, next));
                }
            }
        }
        out.sort();
        out
    }
}

/// `Σ c_k · path_k = 0`, paths in traversal order (first arrow first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Elem, Vec<usize>)>,
    pub source: usize,
    pub target: usize,
}

impl Relation {
    fn new(quiver: &Quiver, terms: Vec<(Elem, Vec<usize>)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Shape("empty relation".into()))?;
        let source = quiver.arrows[*first.1.first().ok_or_else(|| Error::Shape("empty path".into()))?].source;
        let target = quiver.arrows[*first.1.last().unwrap()].target;
        for (_, path) in &terms {
            if path.is_empty()
                || quiver.arrows[path[0]].source != source
                || quiver.arrows[*path.last().unwrap()].target != target
                || path
                    .windows(2)
                    .any(|w| quiver.arrows[w[0]].target != quiver.arrows[w[1]].source)
            {
                return Err(Error::Shape("relation paths do not compose".into()));
            }
        }
        Ok(Relation {
            terms,
            source,
            target,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    quiver: Quiver,
    relations: Vec<Relation>,
    kind: AlgebraKind,
    weight: WeightData,
}

/// Index of arm vertex `(i, j)` (1-based) in the standard vertex order.
pub fn arm_vertex(p: &[usize], i: usize, j: usize) -> usize {
    2 + p[..i - 1].iter().map(|&w| w - 1).sum::<usize>() + (j - 1)
}

fn standard_vertices(p: &[usize]) -> Vec<VertexLabel> {
    let mut v = vec![VertexLabel::Zero, VertexLabel::One];
    for (i, &w) in p.iter().enumerate() {
        for j in 1..w {
            v.push(VertexLabel::Arm(i + 1, j));
        }
    }
    v
}

/// The canonical algebra: arms `0 → (i,1) → … → (i,p_i−1) → 1` with the
/// relations `arm_i = arm_1 − λ_i·arm_2` for `i ≥ 3`.
pub fn canonical_algebra(w: &WeightData) -> Result<AlgebraPresentation> {
    let p = &w.p;
    let f = &w.field;
    let vertices = standard_vertices(p);
    let mut arrows = Vec::new();
    let mut arm_paths = Vec::new();
    for (i0, &pi) in p.iter().enumerate() {
        let i = i0 + 1;
        let mut path = Vec::new();
        for j in 0..pi {
            let source = if j == 0 { 0 } else { arm_vertex(p, i, j) };
            let target = if j == pi - 1 { 1 } else { arm_vertex(p, i, j + 1) };
            path.push(arrows.len());
            arrows.push(Arrow {
                source,
                target,
                label: format!("x{i},{j}"),
            });
        }
        arm_paths.push(path);
    }
    let quiver = Quiver::new(vertices, arrows)?;
    let mut relations = Vec::new();
    for i in 2..p.len() {
        let lam = w.lambda[i - 2];
        relations.push(Relation::new(
            &quiver,
            vec![
                (f.one(), arm_paths[i].clone()),
                (f.neg(f.one()), arm_paths[0].clone()),
                (lam, arm_paths[1].clone()),
            ],
        )?);
    }
    Ok(AlgebraPresentation {
        quiver,
        relations,
        kind: AlgebraKind::Canonical,
        weight: w.clone(),
    })
}

/// The squid algebra: two arrows `a, b: 0 → 1`, arms `1 → (i,1) → … →
/// (i,p_i−1)`, and relations `x_{1,1}a = 0`, `x_{2,1}b = 0`,
/// `x_{i,1}(λ_i a − b) = 0`.
pub fn squid_algebra(w: &WeightData) -> Result<AlgebraPresentation> {
    let p = &w.p;
    let f = &w.field;
    let vertices = standard_vertices(p);
    let mut arrows = vec![
        Arrow {
            source: 0,
            target: 1,
            label: "a".into(),
        },
        Arrow {
            source: 0,
            target: 1,
            label: "b".into(),
        },
    ];
    let mut first_arrow = Vec::new();
    for (i0, &pi) in p.iter().enumerate() {
        let i = i0 + 1;
        for j in 1..pi {
            let source = if j == 1 { 1 } else { arm_vertex(p, i, j - 1) };
            if j == 1 {
                first_arrow.push(arrows.len());
            }
            arrows.push(Arrow {
                source,
                target: arm_vertex(p, i, j),
                label: format!("x{i},{j}"),
            });
        }
    }
    let quiver = Quiver::new(vertices, arrows)?;
    let (a, b) = (0, 1);
    let mut relations = vec![
        Relation::new(&quiver, vec![(f.one(), vec![a, first_arrow[0]])])?,
        Relation::new(&quiver, vec![(f.one(), vec![b, first_arrow[1]])])?,
    ];
    for i in 2..p.len() {
        let x = first_arrow[i];
        relations.push(Relation::new(
            &quiver,
            vec![(w.lambda[i - 2], vec![a, x]), (f.neg(f.one()), vec![b, x])],
        )?);
    }
    Ok(AlgebraPresentation {
        quiver,
        relations,
        kind: AlgebraKind::Squid,
        weight: w.clone(),
    })
}

impl AlgebraPresentation {
    pub fn build(kind: AlgebraKind, w: &WeightData) -> Result<Self> {
        match kind {
            AlgebraKind::Canonical => canonical_algebra(w),
            AlgebraKind::Squid => squid_algebra(w),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn weight(&self) -> &WeightData {
        &self.weight
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.weight.field
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrows(&self) -> &[Arrow] {
        self.quiver.arrows()
    }

    pub fn check_dim(&self, d: &[usize]) -> Result<()> {
        if d.len() != self.vertex_count() {
            return Err(Error::InvalidDimension(format!(
                "expected {} entries (vertex order {}), got {}",
                self.vertex_count(),
                self.quiver
                    .vertices()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                d.len()
            )));
        }
        Ok(())
    }

    /// The same presentation over an extension field, with `λ` pushed
    /// through the standard embedding.
    pub fn extend_scalars(&self, big: Arc<Field>) -> Result<AlgebraPresentation> {
        let emb = big.embedding_from(&self.weight.field)?;
        let lambda = self.weight.lambda.iter().map(|&l| emb[l as usize]).collect();
        let w = WeightData::new(self.weight.p.clone(), lambda, big)?;
        AlgebraPresentation::build(self.kind, &w)
    }

    /// Whether the representation satisfies every relation.
    pub fn satisfies(&self, m: &Representation) -> bool {
        rep_satisfies(self, m)
    }

    /// The composite matrix of a path (`d_target × d_source`).
    pub fn path_matrix(&self, m: &Representation, path: &[usize]) -> Matrix {
        let f = self.field();
        let mut acc = m.maps[path[0]].clone();
        for &a in &path[1..] {
            acc = m.maps[a].mul(&acc, f);
        }
        acc
    }
}

/// A representation: one `d_target × d_source` matrix per arrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    pub dim: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl Representation {
    pub fn zero(pres: &AlgebraPresentation, dim: &[usize]) -> Representation {
        let maps = pres
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(dim[a.target], dim[a.source]))
            .collect();
        Representation {
            dim: dim.to_vec(),
            maps,
        }
    }

    pub fn simple(pres: &AlgebraPresentation, v: usize) -> Representation {
        let mut d = vec![0; pres.vertex_count()];
        d[v] = 1;
        Representation::zero(pres, &d)
    }

    pub fn total_dim(&self) -> usize {
        self.dim.iter().sum()
    }

    pub fn shapes_match(&self, pres: &AlgebraPresentation) -> bool {
        self.dim.len() == pres.vertex_count()
            && self.maps.len() == pres.arrows().len()
            && pres.arrows().iter().zip(&self.maps).all(|(a, m)| {
                m.rows() == self.dim[a.target] && m.cols() == self.dim[a.source]
            })
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dim = self.dim.iter().zip(&other.dim).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(x, y)| {
                let mut m = Matrix::zeros(x.rows() + y.rows(), x.cols() + y.cols());
                for r in 0..x.rows() {
                    for c in 0..x.cols() {
                        m.set(r, c, x.get(r, c));
                    }
                }
                for r in 0..y.rows() {
                    for c in 0..y.cols() {
                        m.set(x.rows() + r, x.cols() + c, y.get(r, c));
                    }
                }
                m
            })
            .collect();
        Representation { dim, maps }
    }

    /// `g · M`, with `(g·M)_a = g_t M_a g_s^{-1}`.
    pub fn conjugate(&self, pres: &AlgebraPresentation, g: &[Matrix]) -> Option<Representation> {
        let f = pres.field();
        let inv: Option<Vec<Matrix>> = g.iter().map(|m| m.inverse(f)).collect();
        let inv = inv?;
        let maps = pres
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| g[a.target].mul(m, f).mul(&inv[a.source], f))
            .collect();
        Some(Representation {
            dim: self.dim.clone(),
            maps,
        })
    }

    /// Entries mapped through a field embedding.
    pub fn map_entries(&self, emb: &[Elem]) -> Representation {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let data = m.data().iter().map(|&x| emb[x as usize]).collect();
                Matrix::from_vec(m.rows(), m.cols(), data)
            })
            .collect();
        Representation {
            dim: self.dim.clone(),
            maps,
        }
    }
}

/// True iff every relation evaluates to the zero matrix on `m`.
pub fn rep_satisfies(pres: &AlgebraPresentation, m: &Representation) -> bool {
    let f = pres.field();
    pres.relations.iter().all(|rel| {
        let mut acc = Matrix::zeros(m.dim[rel.target], m.dim[rel.source]);
        for (c, path) in &rel.terms {
            acc.add_scaled(*c, &pres.path_matrix(m, path), f);
        }
        acc.is_zero()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u32,
    pub degree: u32,
}

/// JSON config record describing an algebra and a dimension vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub algebra: AlgebraKind,
    pub p: Vec<usize>,
    #[serde(default)]
    pub lambda: Vec<Elem>,
    pub field: FieldSpec,
    #[serde(default)]
    pub dim: Vec<usize>,
}

impl AlgebraConfig {
    pub fn presentation(&self) -> Result<AlgebraPresentation> {
        let field = Arc::new(make_field(self.field.characteristic, self.field.degree)?);
        let w = WeightData::new(self.p.clone(), self.lambda.clone(), field)?;
        let pres = AlgebraPresentation::build(self.algebra, &w)?;
        if !self.dim.is_empty() {
            pres.check_dim(&self.dim)?;
        }
        Ok(pres)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(p: &[usize], lambda: &[Elem], q: u64) -> WeightData {
        WeightData::new(p.to_vec(), lambda.to_vec(), Arc::new(Field::with_order(q).unwrap())).unwrap()
    }

    #[test]
    fn canonical_22() {
        let a = canonical_algebra(&weights(&[2, 2], &[], 2)).unwrap();
        assert_eq!(a.vertex_count(), 4);
        assert_eq!(a.arrows().len(), 4);
        assert!(a.relations().is_empty());
    }

    #[test]
    fn canonical_222_relation() {
        let a = canonical_algebra(&weights(&[2, 2, 2], &[1], 5)).unwrap();
        assert_eq!(a.vertex_count(), 5);
        assert_eq!(a.arrows().len(), 6);
        assert_eq!(a.relations().len(), 1);
        let rel = &a.relations()[0];
        let coeffs: Vec<Elem> = rel.terms.iter().map(|t| t.0).collect();
        assert_eq!(coeffs, vec![1, 4, 1]);
        assert_eq!((rel.source, rel.target), (0, 1));
        let labels: Vec<Vec<&str>> = rel
            .terms
            .iter()
            .map(|t| t.1.iter().map(|&k| a.arrows()[k].label.as_str()).collect())
            .collect();
        assert_eq!(labels, vec![vec!["x3,0", "x3,1"], vec!["x1,0", "x1,1"], vec!["x2,0", "x2,1"]]);
    }

    #[test]
    fn too_few_weights() {
        let f = Arc::new(Field::with_order(2).unwrap());
        assert!(matches!(
            WeightData::new(vec![3], vec![], f),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn bad_lambda() {
        let f = Arc::new(Field::with_order(5).unwrap());
        assert!(WeightData::new(vec![2, 2, 2], vec![0], f.clone()).is_err());
        assert!(WeightData::new(vec![2, 2, 2], vec![7], f.clone()).is_err());
        let e = WeightData::new(vec![2, 2, 2, 2], vec![3, 3], f).unwrap_err();
        assert!(e.to_string().contains("distinct"));
    }

    #[test]
    fn squid_shapes() {
        let a = squid_algebra(&weights(&[2, 2], &[], 2)).unwrap();
        let labels: Vec<&str> = a.arrows().iter().map(|x| x.label.as_str()).collect();
        assert_eq!(labels, vec!["a", "b", "x1,1", "x2,1"]);
        assert_eq!(a.relations().len(), 2);
        assert_eq!(
            a.quiver().vertices(),
            &[VertexLabel::Zero, VertexLabel::One, VertexLabel::Arm(1, 1), VertexLabel::Arm(2, 1)]
        );

        let b = squid_algebra(&weights(&[2, 3], &[], 2)).unwrap();
        assert_eq!((b.vertex_count(), b.arrows().len(), b.relations().len()), (5, 5, 2));

        let c = squid_algebra(&weights(&[2, 2, 2], &[1], 5)).unwrap();
        assert_eq!(c.relations().len(), 3);
        let r = &c.relations()[2];
        assert_eq!(r.terms[0].0, 1);
        assert_eq!(r.terms[1].0, 4);
        assert_eq!(r.target, arm_vertex(&[2, 2, 2], 3, 1));
    }

    #[test]
    fn vertex_and_arrow_counts() {
        for p in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2], vec![2, 3, 4]] {
            let lambda: Vec<Elem> = (0..p.len() - 2).map(|k| k as Elem + 1).collect();
            let w = weights(&p, &lambda, 5);
            let verts = 2 + p.iter().map(|x| x - 1).sum::<usize>();
            let c = canonical_algebra(&w).unwrap();
            let s = squid_algebra(&w).unwrap();
            assert_eq!(c.vertex_count(), verts);
            assert_eq!(s.vertex_count(), verts);
            assert_eq!(c.arrows().len(), p.iter().sum::<usize>());
            assert_eq!(s.arrows().len(), 2 + p.iter().map(|x| x - 1).sum::<usize>());
            assert_eq!(c.relations().len(), p.len() - 2);
            assert_eq!(s.relations().len(), p.len());
            assert!(c.relations().iter().all(|r| (r.source, r.target) == (0, 1)));
            for (i, r) in s.relations().iter().enumerate() {
                assert_eq!((r.source, r.target), (0, arm_vertex(&p, i + 1, 1)));
            }
        }
    }

    #[test]
    fn relation_checking() {
        let w = weights(&[2, 2], &[], 2);
        let s = squid_algebra(&w).unwrap();
        let ones = [1, 1, 1, 1];
        assert!(rep_satisfies(&s, &Representation::zero(&s, &ones)));
        let mut m = Representation::zero(&s, &ones);
        m.maps[0] = Matrix::from_rows(&[vec![1]]);
        m.maps[2] = Matrix::from_rows(&[vec![1]]);
        assert!(!rep_satisfies(&s, &m));

        let c = canonical_algebra(&w).unwrap();
        let mut m = Representation::zero(&c, &ones);
        for k in 0..4 {
            m.maps[k] = Matrix::from_rows(&[vec![1]]);
        }
        assert!(rep_satisfies(&c, &m));
    }

    #[test]
    fn config_roundtrip() {
        let json = r#"{"algebra":"squid","p":[2,2,2],"lambda":[2],"field":{"characteristic":5,"degree":1},"dim":[1,1,1,1,1]}"#;
        let cfg: AlgebraConfig = serde_json::from_str(json).unwrap();
        let pres = cfg.presentation().unwrap();
        assert_eq!(pres.kind(), AlgebraKind::Squid);
        assert_eq!(pres.weight().lambda(), &[2]);
        let bad: AlgebraConfig = serde_json::from_str(
            r#"{"algebra":"canonical","p":[2,2],"field":{"characteristic":2,"degree":1},"dim":[1,1]}"#,
        )
        .unwrap();
        assert!(matches!(bad.presentation(), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn extension_keeps_lambda_image() {
        let w = weights(&[2, 2, 2], &[2], 3);
        let c = canonical_algebra(&w).unwrap();
        let big = Arc::new(Field::with_order(9).unwrap());
        let e = c.extend_scalars(big).unwrap();
        assert_eq!(e.field().order(), 9);
        assert_eq!(e.weight().lambda(), &[2]);
    }

    #[test]
    fn paths_in_canonical() {
        let c = canonical_algebra(&weights(&[2, 3], &[], 2)).unwrap();
        assert_eq!(c.quiver().paths(0, 1).len(), 2);
        assert_eq!(c.quiver().paths(1, 0).len(), 0);
        assert_eq!(c.quiver().paths(2, 2), vec![Vec::<usize>::new()]);
    }
}
