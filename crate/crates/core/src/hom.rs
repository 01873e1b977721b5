//! Morphism complexes between twisted complexes and their cohomology.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::AlgElem;
use crate::complex::{AMatrix, ChainMap, TwistedComplex};
use crate::error::TwistError;
use crate::field::Field;
use crate::linalg::Matrix;

/// `i ↦ dim Hom(X, Y[i])`, nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    entries: BTreeMap<i64, usize>,
}

impl ExtTable {
    pub fn from_entries(it: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut entries = BTreeMap::new();
        for (i, n) in it {
            if n > 0 {
                *entries.entry(i).or_insert(0) += n;
            }
        }
        ExtTable { entries }
    }

    pub fn get(&self, i: i64) -> usize {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<i64, usize> {
        &self.entries
    }

    /// The table of `Hom(X, Y[n][i])`, i.e. entry `i` moves to `i - n`.
    pub fn translate(&self, n: i64) -> Self {
        ExtTable { entries: self.entries.iter().map(|(i, v)| (i - n, *v)).collect() }
    }

    /// `Σ (-1)^i dim`.
    pub fn euler_characteristic(&self) -> i64 {
        self.entries.iter().map(|(i, v)| if i.rem_euclid(2) == 0 { *v as i64 } else { -(*v as i64) }).sum()
    }
}

impl std::fmt::Display for ExtTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// One basis vector of `Hom^m(X, Y)`: basis element `elem` placed at entry `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomBasisVector {
    pub row: usize,
    pub col: usize,
    pub elem: usize,
}

/// The graded vector space `Hom^*(X, Y)` with its differential.
pub struct HomComplex<'a, K> {
    x: &'a TwistedComplex<K>,
    y: &'a TwistedComplex<K>,
    lo: i64,
    hi: i64,
    bases: BTreeMap<i64, Vec<HomBasisVector>>,
    index: HashMap<i64, HashMap<HomBasisVector, usize>>,
}

impl<'a, K: Field> HomComplex<'a, K> {
    pub fn new(x: &'a TwistedComplex<K>, y: &'a TwistedComplex<K>) -> Result<Self, TwistError> {
        x.same_algebra(y)?;
        let alg = x.algebra();
        let maxdeg = alg.max_degree();
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for t in y.summands() {
            for s in x.summands() {
                lo = lo.min(s.shift - t.shift);
                hi = hi.max(s.shift - t.shift + maxdeg);
            }
        }
        let mut bases = BTreeMap::new();
        let mut index = HashMap::new();
        if lo <= hi {
            for m in lo..=hi {
                let mut basis = Vec::new();
                for (j, t) in y.summands().iter().enumerate() {
                    for (k, s) in x.summands().iter().enumerate() {
                        for &b in alg.paths(t.vertex, s.vertex, m + t.shift - s.shift) {
                            basis.push(HomBasisVector { row: j, col: k, elem: b });
                        }
                    }
                }
                index.insert(m, basis.iter().enumerate().map(|(i, v)| (*v, i)).collect());
                bases.insert(m, basis);
            }
        }
        Ok(HomComplex { x, y, lo, hi, bases, index })
    }

    /// Degrees in which `Hom^m` can be nonzero; empty when `lo > hi`.
    pub fn degree_range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn basis(&self, m: i64) -> &[HomBasisVector] {
        self.bases.get(&m).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, m: i64) -> usize {
        self.basis(m).len()
    }

    pub fn to_matrix(&self, m: i64, coords: &[K]) -> AMatrix<K> {
        let mut out = AMatrix::zeros(self.y.len(), self.x.len());
        for (v, c) in self.basis(m).iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            let cur = out.get(v.row, v.col).add(&AlgElem::term(v.elem, c.clone()));
            out.set(v.row, v.col, cur);
        }
        out
    }

    pub fn to_map(&self, m: i64, coords: &[K]) -> ChainMap<K> {
        ChainMap::from_raw(self.x.clone(), self.y.clone(), m, self.to_matrix(m, coords))
    }

    /// Coordinates of a degree-`m` matrix; panics on entries outside `Hom^m`.
    pub fn coords(&self, m: i64, matrix: &AMatrix<K>) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim(m)];
        let idx = self.index.get(&m);
        for j in 0..matrix.rows() {
            for k in 0..matrix.cols() {
                for (b, c) in matrix.get(j, k).terms() {
                    let pos = idx
                        .and_then(|ix| ix.get(&HomBasisVector { row: j, col: k, elem: *b }))
                        .expect("entry outside the morphism space");
                    out[*pos] = c.clone();
                }
            }
        }
        out
    }

    fn boundary_of(&self, m: i64, e: &AMatrix<K>) -> AMatrix<K> {
        let alg = self.x.algebra();
        let left = self.y.differential().mul(alg, e);
        let right = e.mul(alg, self.x.differential());
        if m % 2 == 0 {
            left.add(&right.neg())
        } else {
            left.add(&right)
        }
    }

    /// Matrix of `D: Hom^m -> Hom^{m+1}` in the standard bases.
    pub fn differential(&self, m: i64) -> Matrix<K> {
        let src = self.basis(m);
        let tgt_dim = self.dim(m + 1);
        let mut cols = Vec::with_capacity(src.len());
        for v in src {
            let mut e = AMatrix::zeros(self.y.len(), self.x.len());
            e.set(v.row, v.col, AlgElem::basis(v.elem));
            let d = self.boundary_of(m, &e);
            let c = if tgt_dim == 0 { Vec::new() } else { self.coords(m + 1, &d) };
            cols.push(c);
        }
        Matrix::from_columns(tgt_dim, &cols)
    }

    /// Basis of the cocycles `Z^m`.
    pub fn cocycles(&self, m: i64) -> Vec<Vec<K>> {
        if self.dim(m) == 0 {
            return Vec::new();
        }
        self.differential(m).kernel_basis()
    }

    /// Cocycles whose classes form a basis of `H^m`.
    pub fn homology_basis(&self, m: i64) -> Vec<Vec<K>> {
        let z = self.cocycles(m);
        if z.is_empty() {
            return z;
        }
        let b = self.differential(m - 1);
        let n = self.dim(m);
        let mut cols: Vec<Vec<K>> = (0..b.cols()).map(|j| b.column(j)).collect();
        let nb = cols.len();
        cols.extend(z.iter().cloned());
        let red = Matrix::from_columns(n, &cols).row_reduce();
        red.pivots.iter().filter(|&&p| p >= nb).map(|&p| z[p - nb].clone()).collect()
    }

    pub fn homology_dim(&self, m: i64) -> usize {
        let n = self.dim(m);
        if n == 0 {
            return 0;
        }
        let dm = self.differential(m);
        let ker = n - if dm.rows() == 0 { 0 } else { dm.rank() };
        let prev = self.differential(m - 1);
        let im = if prev.rows() == 0 || prev.cols() == 0 { 0 } else { prev.rank() };
        ker - im
    }

    /// Whether a degree-`m` cocycle is a coboundary.
    pub fn is_exact(&self, m: i64, coords: &[K]) -> bool {
        if coords.iter().all(Field::is_zero) {
            return true;
        }
        let b = self.differential(m - 1);
        if b.cols() == 0 {
            return false;
        }
        matches!(b.solve(coords), Ok(Some(_)))
    }

    pub fn ext_table(&self) -> ExtTable {
        if self.lo > self.hi {
            return ExtTable::default();
        }
        ExtTable::from_entries((self.lo..=self.hi).map(|m| (m, self.homology_dim(m))))
    }
}

pub fn ext_table<K: Field>(x: &TwistedComplex<K>, y: &TwistedComplex<K>) -> Result<ExtTable, TwistError> {
    Ok(HomComplex::new(x, y)?.ext_table())
}
