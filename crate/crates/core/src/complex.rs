//! Twisted complexes: formal complexes of shifted indecomposable projectives
//! with algebra-valued differentials, and maps between them.
//!
//! A summand `(v, s)` stands for `P_v[s]`. An entry of a map of degree `m`
//! from summand `(v, s)` to summand `(w, t)` lies in `e_w A e_v` and has
//! internal degree `m + t - s`; the differential is a degree-1 self-map.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgElem, AlgebraSpec};
use crate::error::TwistError;
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Summand {
    pub vertex: usize,
    pub shift: i64,
}

/// A dense matrix with algebra entries.
#[derive(Clone, PartialEq, Eq)]
pub struct AMatrix<K> {
    rows: usize,
    cols: usize,
    entries: Vec<AlgElem<K>>,
}

impl<K: Field> AMatrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        AMatrix { rows, cols, entries: vec![AlgElem::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgElem<K> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: AlgElem<K>) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgElem::is_zero)
    }

    pub fn mul(&self, alg: &AlgebraSpec<K>, other: &AMatrix<K>) -> AMatrix<K> {
        assert_eq!(self.cols, other.rows, "algebra matrix product shape");
        let mut out = AMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = alg.mul(a, b);
                    let cur = out.get(i, j).add(&p);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &AMatrix<K>) -> AMatrix<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "algebra matrix sum shape");
        AMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> AMatrix<K> {
        AMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn neg(&self) -> AMatrix<K> {
        self.scale(&-K::one())
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> AMatrix<K> {
        let mut out = AMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &AMatrix<K>, b: &AMatrix<K>, c: &AMatrix<K>, d: &AMatrix<K>) -> AMatrix<K> {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = AMatrix::zeros(a.rows + c.rows, a.cols + b.cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        out
    }

    pub fn hconcat(parts: &[AMatrix<K>], rows: usize) -> AMatrix<K> {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = AMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, c0 + j, p.get(i, j).clone());
                }
            }
            c0 += p.cols;
        }
        out
    }

    pub fn vconcat(parts: &[AMatrix<K>], cols: usize) -> AMatrix<K> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = AMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            for i in 0..p.rows {
                for j in 0..cols {
                    out.set(r0 + i, j, p.get(i, j).clone());
                }
            }
            r0 += p.rows;
        }
        out
    }

    pub fn block_diagonal(parts: &[&AMatrix<K>]) -> AMatrix<K> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = AMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out.set(r0 + i, c0 + j, p.get(i, j).clone());
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }
}

impl<K: fmt::Debug> fmt::Debug for AMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                self.entries[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Checks that `x` is a legal entry of a degree-`m` map from `src` to `tgt`.
fn check_entry<K: Field>(alg: &AlgebraSpec<K>, src: Summand, tgt: Summand, m: i64, x: &AlgElem<K>) -> Result<(), String> {
    let deg = m + tgt.shift - src.shift;
    if alg.is_homogeneous(x, tgt.vertex, src.vertex, deg) {
        Ok(())
    } else {
        Err(format!(
            "expected an element of e_{} A e_{} in degree {deg}, got {}",
            alg.vertices()[tgt.vertex],
            alg.vertices()[src.vertex],
            alg.format_elem(x)
        ))
    }
}

fn check_matrix<K: Field>(
    alg: &AlgebraSpec<K>,
    src: &[Summand],
    tgt: &[Summand],
    m: i64,
    matrix: &AMatrix<K>,
) -> Result<(), TwistError> {
    if matrix.rows() != tgt.len() {
        return Err(TwistError::DimensionMismatch { what: "map rows", expected: tgt.len(), got: matrix.rows() });
    }
    if matrix.cols() != src.len() {
        return Err(TwistError::DimensionMismatch { what: "map columns", expected: src.len(), got: matrix.cols() });
    }
    for (j, t) in tgt.iter().enumerate() {
        for (k, s) in src.iter().enumerate() {
            check_entry(alg, *s, *t, m, matrix.get(j, k))
                .map_err(|reason| TwistError::EntryConstraint { row: j, col: k, reason })?;
        }
    }
    Ok(())
}

#[derive(Clone)]
pub struct TwistedComplex<K> {
    alg: Arc<AlgebraSpec<K>>,
    summands: Vec<Summand>,
    differential: AMatrix<K>,
}

impl<K: Field> TwistedComplex<K> {
    pub fn new(alg: Arc<AlgebraSpec<K>>, summands: Vec<Summand>, differential: AMatrix<K>) -> Result<Self, TwistError> {
        for s in &summands {
            if s.vertex >= alg.vertices().len() {
                return Err(TwistError::UnknownVertex(s.vertex.to_string()));
            }
        }
        check_matrix(&alg, &summands, &summands, 1, &differential)?;
        if !differential.mul(&alg, &differential).is_zero() {
            return Err(TwistError::NotSquareZero);
        }
        Ok(TwistedComplex { alg, summands, differential })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_raw(alg: Arc<AlgebraSpec<K>>, summands: Vec<Summand>, differential: AMatrix<K>) -> Self {
        debug_assert!(check_matrix(&alg, &summands, &summands, 1, &differential).is_ok());
        debug_assert!(differential.mul(&alg, &differential).is_zero());
        TwistedComplex { alg, summands, differential }
    }

    pub fn zero(alg: Arc<AlgebraSpec<K>>) -> Self {
        TwistedComplex { alg, summands: Vec::new(), differential: AMatrix::zeros(0, 0) }
    }

    /// The indecomposable projective `e_v A` in shift 0.
    pub fn projective(alg: Arc<AlgebraSpec<K>>, v: usize) -> Result<Self, TwistError> {
        if v >= alg.vertices().len() {
            return Err(TwistError::UnknownVertex(v.to_string()));
        }
        Ok(TwistedComplex { alg, summands: vec![Summand { vertex: v, shift: 0 }], differential: AMatrix::zeros(1, 1) })
    }

    pub fn projective_named(alg: Arc<AlgebraSpec<K>>, name: &str) -> Result<Self, TwistError> {
        let v = alg.vertex_index(name).ok_or_else(|| TwistError::UnknownVertex(name.to_string()))?;
        Self::projective(alg, v)
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec<K>> {
        &self.alg
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn differential(&self) -> &AMatrix<K> {
        &self.differential
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn same_algebra(&self, other: &TwistedComplex<K>) -> Result<(), TwistError> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(TwistError::AlgebraMismatch)
        }
    }

    /// `self[n]`: shifts move up by `n` and the differential picks up `(-1)^n`.
    pub fn shift(&self, n: i64) -> Self {
        let differential = if n % 2 == 0 { self.differential.clone() } else { self.differential.neg() };
        TwistedComplex {
            alg: self.alg.clone(),
            summands: self.summands.iter().map(|s| Summand { vertex: s.vertex, shift: s.shift + n }).collect(),
            differential,
        }
    }

    pub fn max_abs_shift(&self) -> i64 {
        self.summands.iter().map(|s| s.shift.abs()).max().unwrap_or(0)
    }

    pub fn check_window(&self, window: i64) -> Result<(), TwistError> {
        match self.summands.iter().find(|s| s.shift.abs() > window) {
            Some(s) => Err(TwistError::ShiftWindow { shift: s.shift, window }),
            None => Ok(()),
        }
    }

    /// Sorted `(vertex, shift)` multiset.
    pub fn summand_multiset(&self) -> Vec<Summand> {
        let mut v = self.summands.clone();
        v.sort();
        v
    }

    /// Conjugates the differential by a block matrix `u` with inverse `u_inv`, both
    /// degree-0 self-maps: the result has differential `u * d * u_inv`.
    pub(crate) fn conjugate(&self, u: &AMatrix<K>, u_inv: &AMatrix<K>) -> Self {
        let d = u.mul(&self.alg, &self.differential).mul(&self.alg, u_inv);
        TwistedComplex::from_raw(self.alg.clone(), self.summands.clone(), d)
    }

    /// The subcomplex data on a subset of summands (caller ensures it is a direct summand).
    pub(crate) fn restrict(&self, idx: &[usize]) -> Self {
        TwistedComplex::from_raw(
            self.alg.clone(),
            idx.iter().map(|&i| self.summands[i]).collect(),
            self.differential.select(idx, idx),
        )
    }

    pub fn describe(&self) -> String {
        if self.summands.is_empty() {
            return "0".into();
        }
        let v = self.alg.vertices();
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| if s.shift == 0 { format!("P{}", v[s.vertex]) } else { format!("P{}[{}]", v[s.vertex], s.shift) })
            .collect();
        let mut out = parts.join(" + ");
        if !self.differential.is_zero() {
            out.push_str(" (twisted)");
        }
        out
    }
}

impl<K: Field> PartialEq for TwistedComplex<K> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.summands == other.summands && self.differential == other.differential
    }
}

impl<K: Field> fmt::Debug for TwistedComplex<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())?;
        if !self.differential.is_zero() {
            write!(f, " d = {:?}", self.differential)?;
        }
        Ok(())
    }
}

pub fn projective<K: Field>(alg: &Arc<AlgebraSpec<K>>, v: usize) -> Result<TwistedComplex<K>, TwistError> {
    TwistedComplex::projective(alg.clone(), v)
}

pub fn shift<K: Field>(x: &TwistedComplex<K>, n: i64) -> TwistedComplex<K> {
    x.shift(n)
}

/// Direct sum with block-diagonal differential. The empty sum needs the algebra.
pub fn direct_sum<K: Field>(alg: &Arc<AlgebraSpec<K>>, xs: &[TwistedComplex<K>]) -> Result<TwistedComplex<K>, TwistError> {
    for x in xs {
        if !Arc::ptr_eq(alg, &x.alg) {
            return Err(TwistError::AlgebraMismatch);
        }
    }
    let summands = xs.iter().flat_map(|x| x.summands.iter().copied()).collect();
    let diffs: Vec<&AMatrix<K>> = xs.iter().map(|x| &x.differential).collect();
    Ok(TwistedComplex::from_raw(alg.clone(), summands, AMatrix::block_diagonal(&diffs)))
}

/// A homogeneous map of twisted complexes; closedness is checked separately.
#[derive(Clone)]
pub struct ChainMap<K> {
    source: TwistedComplex<K>,
    target: TwistedComplex<K>,
    degree: i64,
    matrix: AMatrix<K>,
}

impl<K: Field> ChainMap<K> {
    pub fn new(
        source: TwistedComplex<K>,
        target: TwistedComplex<K>,
        degree: i64,
        matrix: AMatrix<K>,
    ) -> Result<Self, TwistError> {
        source.same_algebra(&target)?;
        check_matrix(&source.alg, &source.summands, &target.summands, degree, &matrix)?;
        Ok(ChainMap { source, target, degree, matrix })
    }

    pub(crate) fn from_raw(source: TwistedComplex<K>, target: TwistedComplex<K>, degree: i64, matrix: AMatrix<K>) -> Self {
        debug_assert!(check_matrix(&source.alg, &source.summands, &target.summands, degree, &matrix).is_ok());
        ChainMap { source, target, degree, matrix }
    }

    pub fn zero(source: TwistedComplex<K>, target: TwistedComplex<K>, degree: i64) -> Self {
        let matrix = AMatrix::zeros(target.len(), source.len());
        ChainMap { source, target, degree, matrix }
    }

    pub fn identity(x: &TwistedComplex<K>) -> Self {
        let mut matrix = AMatrix::zeros(x.len(), x.len());
        for (i, s) in x.summands.iter().enumerate() {
            let e = x.alg.idempotent(s.vertex).expect("vertex idempotent");
            matrix.set(i, i, AlgElem::basis(e));
        }
        ChainMap { source: x.clone(), target: x.clone(), degree: 0, matrix }
    }

    pub fn source(&self) -> &TwistedComplex<K> {
        &self.source
    }

    pub fn target(&self) -> &TwistedComplex<K> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &AMatrix<K> {
        &self.matrix
    }

    /// `D(f) = d_target f - (-1)^m f d_source`.
    pub fn boundary(&self) -> AMatrix<K> {
        let alg = &self.source.alg;
        let left = self.target.differential.mul(alg, &self.matrix);
        let right = self.matrix.mul(alg, &self.source.differential);
        if self.degree % 2 == 0 {
            left.add(&right.neg())
        } else {
            left.add(&right)
        }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().is_zero()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap<K>) -> Result<ChainMap<K>, TwistError> {
        if first.target != self.source {
            return Err(TwistError::DimensionMismatch {
                what: "composition: middle object",
                expected: self.source.len(),
                got: first.target.len(),
            });
        }
        let matrix = self.matrix.mul(&self.source.alg, &first.matrix);
        Ok(ChainMap::from_raw(first.source.clone(), self.target.clone(), self.degree + first.degree, matrix))
    }

    pub fn add(&self, other: &ChainMap<K>) -> Result<ChainMap<K>, TwistError> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(TwistError::WrongDegree { expected: self.degree, got: other.degree });
        }
        Ok(ChainMap::from_raw(self.source.clone(), self.target.clone(), self.degree, self.matrix.add(&other.matrix)))
    }

    pub fn scale(&self, c: &K) -> ChainMap<K> {
        ChainMap::from_raw(self.source.clone(), self.target.clone(), self.degree, self.matrix.scale(c))
    }
}

impl<K: Field> PartialEq for ChainMap<K> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.degree == other.degree
            && self.matrix == other.matrix
    }
}

impl<K: Field> fmt::Debug for ChainMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} (degree {}) {:?}", self.source.describe(), self.target.describe(), self.degree, self.matrix)
    }
}

/// `cone(f) = src[1] ⊕ tgt` with differential `[[-d_src, 0], [f, d_tgt]]`.
pub fn cone<K: Field>(f: &ChainMap<K>) -> Result<TwistedComplex<K>, TwistError> {
    if f.degree != 0 {
        return Err(TwistError::WrongDegree { expected: 0, got: f.degree });
    }
    if !f.is_closed() {
        return Err(TwistError::NotClosed);
    }
    let src = f.source.shift(1);
    let tgt = &f.target;
    let d = AMatrix::blocks(
        &src.differential,
        &AMatrix::zeros(src.len(), tgt.len()),
        &f.matrix,
        &tgt.differential,
    );
    let summands = src.summands.iter().chain(&tgt.summands).copied().collect();
    Ok(TwistedComplex::from_raw(src.alg.clone(), summands, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_zigzag, GraphSpec};
    use crate::field::{FieldSpec, Rational};

    type Q = Rational;

    fn a2() -> Arc<AlgebraSpec<Q>> {
        Arc::new(build_zigzag(&GraphSpec::a_n(2, 2), FieldSpec::Rationals, 2).unwrap())
    }

    fn elem(alg: &AlgebraSpec<Q>, name: &str) -> AlgElem<Q> {
        AlgElem::basis(alg.basis().iter().position(|b| b.name == name).unwrap())
    }

    #[test]
    fn projective_has_one_summand() {
        let alg = a2();
        let p = projective(&alg, 0).unwrap();
        assert_eq!(p.summands(), &[Summand { vertex: 0, shift: 0 }]);
        assert!(projective(&alg, 5).is_err());
    }

    #[test]
    fn shift_round_trip_is_exact() {
        let alg = a2();
        let p1 = projective(&alg, 0).unwrap();
        let f = ChainMap::new(p1.shift(-1), projective(&alg, 1).unwrap(), 0, {
            let mut m = AMatrix::zeros(1, 1);
            m.set(0, 0, elem(&alg, "a2_1"));
            m
        })
        .unwrap();
        let c = cone(&f).unwrap();
        assert_eq!(c.shift(3).shift(-3), c);
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(1).differential(), &c.differential().neg());
    }

    #[test]
    fn entry_constraints_are_checked() {
        let alg = a2();
        let p1 = projective(&alg, 0).unwrap();
        let p2 = projective(&alg, 1).unwrap();
        let mut m = AMatrix::zeros(1, 1);
        // a1_2 lies in e1 A e2, not in e2 A e1
        m.set(0, 0, elem(&alg, "a1_2"));
        assert!(matches!(ChainMap::new(p1.shift(-1), p2.clone(), 0, m), Err(TwistError::EntryConstraint { .. })));
        let mut m = AMatrix::zeros(1, 1);
        m.set(0, 0, elem(&alg, "a2_1"));
        // wrong degree: P1 -> P2 in degree 0 needs internal degree 0
        assert!(ChainMap::new(p1, p2, 0, m).is_err());
    }

    #[test]
    fn cone_rejects_open_and_nonzero_degree_maps() {
        let alg = a2();
        let p1 = projective(&alg, 0).unwrap();
        let mut m = AMatrix::zeros(1, 1);
        m.set(0, 0, elem(&alg, "l1"));
        let f = ChainMap::new(p1.clone(), p1.clone(), 2, m).unwrap();
        assert_eq!(cone(&f).unwrap_err(), TwistError::WrongDegree { expected: 0, got: 2 });

        // a non-closed map out of a twisted complex
        let f = ChainMap::new(p1.shift(-1), projective(&alg, 1).unwrap(), 0, {
            let mut m = AMatrix::zeros(1, 1);
            m.set(0, 0, elem(&alg, "a2_1"));
            m
        })
        .unwrap();
        let c = cone(&f).unwrap();
        // c = P1 + P2 with d = a2_1; the map P1 -> c hitting the P1 summand is not closed
        let mut m = AMatrix::zeros(2, 1);
        m.set(0, 0, elem(&alg, "e1"));
        let g = ChainMap::new(p1, c, 0, m).unwrap();
        assert!(!g.is_closed());
        assert_eq!(cone(&g).unwrap_err(), TwistError::NotClosed);
    }

    #[test]
    fn differential_must_square_to_zero() {
        let alg = a2();
        let s = vec![Summand { vertex: 0, shift: 0 }, Summand { vertex: 1, shift: 0 }, Summand { vertex: 0, shift: 0 }];
        let mut d = AMatrix::zeros(3, 3);
        d.set(1, 0, elem(&alg, "a2_1"));
        d.set(2, 1, elem(&alg, "a1_2"));
        assert_eq!(TwistedComplex::new(alg.clone(), s.clone(), d).unwrap_err(), TwistError::NotSquareZero);
    }

    #[test]
    fn direct_sum_of_nothing_is_zero() {
        let alg = a2();
        let z = direct_sum(&alg, &[]).unwrap();
        assert!(z.is_empty());
        let s = direct_sum(&alg, &[projective(&alg, 0).unwrap(), projective(&alg, 1).unwrap()]).unwrap();
        assert_eq!(s.len(), 2);
        let other = a2();
        assert_eq!(direct_sum(&other, &[projective(&alg, 0).unwrap()]).unwrap_err(), TwistError::AlgebraMismatch);
    }
}
