//! Dense exact linear algebra over a [`Field`].
//!
//! Everything here is exact: rank decisions are never subject to rounding.
//! Reduced row-echelon forms use unit pivots, so two reductions of the same
//! matrix are identical entry for entry.

use std::fmt;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// Output of [`Matrix::row_reduce`]: `basis_change * m == reduced`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction<K> {
    pub reduced: Matrix<K>,
    pub basis_change: Matrix<K>,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl<K: Field> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| K::from_i64(x)).collect()).collect())
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<K>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cur = out[(i, j)].clone();
                        out[(i, j)] = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<K>) -> Matrix<K> {
        self.add(&other.scale(&-K::one()))
    }

    pub fn scale(&self, c: &K) -> Matrix<K> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[K] {
        &self.data
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Gauss-Jordan elimination to reduced row-echelon form with unit pivots.
    pub fn row_reduce(&self) -> RowReduction<K> {
        let mut a = self.clone();
        let mut b = Self::identity(self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            b.swap_rows(r, p);
            let inv = a[(r, c)].inv().expect("nonzero pivot");
            a.scale_row(r, &inv);
            b.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.add_row_multiple(i, r, &f);
                    b.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowReduction { reduced: a, basis_change: b, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// A basis of the null space `{v : self * v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let red = self.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![K::zero(); self.cols];
                v[f] = K::one();
                for (row, &p) in red.pivots.iter().enumerate() {
                    v[p] = -red.reduced[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x == b`, or `None` when `b` is outside the column span.
    pub fn solve(&self, b: &[K]) -> Result<Option<Vec<K>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let red = self.row_reduce();
        let c = red.basis_change.mul_vec(b);
        if c[red.rank..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut x = vec![K::zero(); self.cols];
        for (row, &p) in red.pivots.iter().enumerate() {
            x[p] = c[row].clone();
        }
        Ok(Some(x))
    }

    pub fn determinant(&self) -> K {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.clone();
        let n = self.rows;
        let mut det = K::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return K::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone() * inv.clone();
                    a.add_row_multiple(i, c, &f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<K>> {
        if self.rows != self.cols {
            return None;
        }
        let red = self.row_reduce();
        (red.rank == self.rows).then_some(red.basis_change)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, i: usize, f: &K) {
        for c in 0..self.cols {
            let x = &mut self.data[i * self.cols + c];
            if !x.is_zero() {
                *x = x.clone() * f.clone();
            }
        }
    }

    /// row_i -= f * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, f: &K) {
        for c in 0..self.cols {
            let y = self.data[j * self.cols + c].clone();
            if !y.is_zero() {
                let x = &mut self.data[i * self.cols + c];
                *x = x.clone() - f.clone() * y;
            }
        }
    }
}

impl<K> std::ops::Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<K: fmt::Debug> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn identity_has_full_rank() {
        let red = Matrix::<Q>::identity(2).row_reduce();
        assert_eq!(red.rank, 2);
        assert_eq!(red.reduced, Matrix::identity(2));
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::<Q>::zeros(3, 4);
        assert_eq!(m.rank(), 0);
        let z = Matrix::<Q>::zeros(2, 3);
        assert_eq!(z.kernel_basis().len(), 3);
        assert_eq!(z.solve(&[q(1), q(0)]).unwrap(), None);
    }

    #[test]
    fn rank_one_example() {
        // [[1,2],[2,4]]: R2 -= 2 R1 leaves [[1,2],[0,0]].
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let red = m.row_reduce();
        assert_eq!(red.rank, 1);
        assert_eq!(red.reduced, Matrix::from_i64_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(red.basis_change.mul(&m), red.reduced);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        // proportional to (2, -1)
        assert_eq!(ker[0][0].clone() + q(2) * ker[0][1].clone(), q(0));
        assert!(!ker[0][0].is_zero());
    }

    #[test]
    fn identity_kernel_and_solve() {
        let id = Matrix::<Q>::identity(3);
        assert!(id.kernel_basis().is_empty());
        let b = vec![q(4), q(-1), q(7)];
        assert_eq!(id.solve(&b).unwrap(), Some(b));
    }

    #[test]
    fn back_substitution_example() {
        // x + y = 3, y = 1  =>  x = 2.
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.solve(&[q(3), q(1)]).unwrap(), Some(vec![q(2), q(1)]));
    }

    #[test]
    fn solve_rejects_wrong_length() {
        let m = Matrix::<Q>::identity(2);
        assert_eq!(m.solve(&[q(1)]), Err(LinalgError::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::<Q>::from_i64_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m), Matrix::identity(2));
        assert!(Matrix::<Q>::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn prime_field_rank_can_drop() {
        // det = 101 vanishes mod 101
        let m = Matrix::<Fp<101>>::from_i64_rows(&[&[1, 3], &[-32, 5]]);
        assert_eq!(m.rank(), 1);
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 3], &[-32, 5]]);
        assert_eq!(m.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<Q>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                Matrix::from_rows(v.chunks(c).map(|row| row.iter().map(|&x| q(x)).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let ker = m.kernel_basis();
            prop_assert_eq!(m.cols(), m.rank() + ker.len());
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(Matrix::from_columns(m.cols(), &ker).rank(), ker.len());
        }

        #[test]
        fn solve_reaches_image(m in small_matrix(), seed in proptest::collection::vec(-4i64..=4, 4)) {
            let x: Vec<Q> = (0..m.cols()).map(|i| q(seed[i % seed.len()])).collect();
            let b = m.mul_vec(&x);
            let sol = m.solve(&b).unwrap().expect("b is in the image");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }

        #[test]
        fn reduction_is_idempotent(m in small_matrix()) {
            let once = m.row_reduce();
            prop_assert_eq!(once.basis_change.mul(&m), once.reduced.clone());
            let twice = once.reduced.row_reduce();
            prop_assert_eq!(twice.reduced, once.reduced);
        }
    }
}
