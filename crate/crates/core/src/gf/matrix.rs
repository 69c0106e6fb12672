//! Dense matrices over a [`Field`], row-major.

use super::field::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: Elem) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data: Vec<Elem> = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Matrix::from_vec(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Elem] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    /// `self + c * other`, in place.
    pub fn add_scaled(&mut self, c: Elem, other: &Matrix, f: &Field) {
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(row, c);
                self.set(row, c, f.mul(inv, v));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for c in col..self.cols {
                    let pv = self.get(row, c);
                    if pv != 0 {
                        let v = self.get(r, c);
                        self.set(r, c, f.add(v, f.mul(neg, pv)));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut m = self.clone();
        m.rref_in_place(f).len()
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref_in_place(f);
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    pub fn is_nilpotent(&self, f: &Field) -> bool {
        self.is_square() && (self.rows == 0 || self.pow(self.rows as u64, f).is_zero())
    }

    /// Basis of the column space, as columns of a `rows x rank` matrix.
    pub fn column_space(&self, f: &Field) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref_in_place(f);
        let mut out = Matrix::zeros(self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    /// Basis of the null space, as columns of a `cols x nullity` matrix.
    pub fn kernel(&self, f: &Field) -> Matrix {
        let basis = solve_homogeneous(self, f);
        let mut out = Matrix::zeros(self.cols, basis.len());
        for (k, v) in basis.iter().enumerate() {
            for (r, &x) in v.iter().enumerate() {
                out.set(r, k, x);
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut out = Matrix::zeros(self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }
}

/// Rank over the field by exact Gaussian elimination.
pub fn mat_rank(m: &Matrix, f: &Field) -> usize {
    m.rank(f)
}

/// Basis of `{x : m x = 0}`, one vector per free column of the RREF.
pub fn solve_homogeneous(m: &Matrix, f: &Field) -> Vec<Vec<Elem>> {
    let mut r = m.clone();
    let pivots = r.rref_in_place(f);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; m.cols];
        v[free] = 1;
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(r.get(row, free));
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field::make_field;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        let f2 = make_field(2, 1).unwrap();
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(mat_rank(&Matrix::zeros(2, 2), &f2), 0);
        assert_eq!(mat_rank(&Matrix::identity(3), &f3), 3);
        assert_eq!(mat_rank(&Matrix::from_rows(&[vec![1, 1], vec![1, 1]]), &f2), 1);
        assert_eq!(mat_rank(&Matrix::zeros(0, 4), &f2), 0);
        assert_eq!(mat_rank(&Matrix::zeros(3, 0), &f2), 0);
    }

    #[test]
    fn null_space_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert!(solve_homogeneous(&Matrix::identity(2), &f2).is_empty());
        assert_eq!(solve_homogeneous(&Matrix::zeros(1, 3), &f2).len(), 3);
        assert_eq!(
            solve_homogeneous(&Matrix::from_rows(&[vec![1, 1]]), &f2),
            vec![vec![1, 1]]
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let f = make_field(5, 1).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(2));
        assert!(Matrix::from_rows(&[vec![1, 2], vec![2, 4]]).inverse(&f).is_none());
        assert_eq!(Matrix::identity(0).inverse(&f), Some(Matrix::identity(0)));
    }

    fn arb_matrix(q: u32) -> impl Strategy<Value = Matrix> {
        (0usize..5, 0usize..5).prop_flat_map(move |(r, c)| {
            prop::collection::vec(0..q, r * c).prop_map(move |d| Matrix::from_vec(r, c, d))
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in arb_matrix(9)) {
            let f = make_field(3, 2).unwrap();
            prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
        }

        #[test]
        fn null_space_vectors_solve_system(m in arb_matrix(4)) {
            let f = make_field(2, 2).unwrap();
            let basis = solve_homogeneous(&m, &f);
            prop_assert_eq!(basis.len(), m.cols() - m.rank(&f));
            for v in &basis {
                let col = Matrix::from_vec(v.len(), 1, v.clone());
                prop_assert!(m.mul(&col, &f).is_zero());
            }
        }
    }
}
