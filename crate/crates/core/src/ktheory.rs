//! Classes in the Grothendieck group (free on the projectives), the Euler
//! pairing, and twists acting as reflections.

use serde::Serialize;

use crate::algebra::AlgebraSpec;
use crate::complex::TwistedComplex;
use crate::error::TwistError;
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct KClass(pub Vec<i64>);

impl KClass {
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        KClass(v)
    }

    pub fn add(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: i64) -> KClass {
        KClass(self.0.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        self.add(&other.scale(-1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeModel {
    pub labels: Vec<String>,
    /// `gram[i][j] = χ(P_i, P_j)`.
    pub gram: Vec<Vec<i64>>,
    pub d: i64,
}

impl LatticeModel {
    pub fn of_algebra<K: Field>(alg: &AlgebraSpec<K>) -> Self {
        let n = alg.vertices().len();
        let mut gram = vec![vec![0; n]; n];
        for b in alg.basis() {
            // b in e_w A e_v contributes to χ(P_v, P_w)
            gram[b.target][b.source] += if b.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        }
        LatticeModel { labels: alg.vertices().to_vec(), gram, d: alg.cy_dimension() }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    fn check(&self, u: &KClass) -> Result<(), TwistError> {
        if u.0.len() == self.rank() {
            Ok(())
        } else {
            Err(TwistError::DimensionMismatch { what: "class", expected: self.rank(), got: u.0.len() })
        }
    }

    /// `uᵀ · gram · v`.
    pub fn euler_pairing(&self, u: &KClass, v: &KClass) -> Result<i64, TwistError> {
        self.check(u)?;
        self.check(v)?;
        let mut s = 0;
        for (i, a) in u.0.iter().enumerate() {
            for (j, b) in v.0.iter().enumerate() {
                s += a * self.gram[i][j] * b;
            }
        }
        Ok(s)
    }

    /// `v - χ(e, v) e`.
    pub fn reflect(&self, e: &KClass, v: &KClass) -> Result<KClass, TwistError> {
        let c = self.euler_pairing(e, v)?;
        Ok(v.sub(&e.scale(c)))
    }

    /// Whether the two reflections commute, checked on basis vectors.
    pub fn lattice_commute(&self, e: &KClass, f: &KClass) -> Result<bool, TwistError> {
        for i in 0..self.rank() {
            let b = KClass::basis(self.rank(), i);
            let ef = self.reflect(e, &self.reflect(f, &b)?)?;
            let fe = self.reflect(f, &self.reflect(e, &b)?)?;
            if ef != fe {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Violations of `gram[i][j] = (-1)^d gram[j][i]` and `gram[i][i] = 1 + (-1)^d`.
    pub fn invariant_violations(&self) -> Vec<String> {
        let sign = if self.d.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if self.gram[i][j] != sign * self.gram[j][i] {
                    out.push(format!("gram[{i}][{j}] = {} but gram[{j}][{i}] = {}", self.gram[i][j], self.gram[j][i]));
                }
            }
        }
        out
    }

    /// Diagonal entries that differ from `1 + (-1)^d` (isolated vertices do, by design).
    pub fn non_spherical_diagonal(&self) -> Vec<usize> {
        let want = if self.d.rem_euclid(2) == 0 { 2 } else { 0 };
        (0..self.rank()).filter(|&i| self.gram[i][i] != want).collect()
    }
}

/// `Σ (-1)^s e_v` over the summands `P_v[s]`.
pub fn class_of<K: Field>(x: &TwistedComplex<K>, m: &LatticeModel) -> Result<KClass, TwistError> {
    if x.algebra().vertices().len() != m.rank() {
        return Err(TwistError::DimensionMismatch { what: "lattice rank", expected: m.rank(), got: x.algebra().vertices().len() });
    }
    let mut v = vec![0; m.rank()];
    for s in x.summands() {
        v[s.vertex] += if s.shift.rem_euclid(2) == 0 { 1 } else { -1 };
    }
    Ok(KClass(v))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::algebra::{build_zigzag, GraphEdge, GraphSpec};
    use crate::complex::{cone, projective};
    use crate::field::{FieldSpec, Rational};
    use crate::hom::{ext_table, HomComplex};
    use crate::minimal::minimize;
    use crate::twist::twist;

    type Q = Rational;

    fn zigzag(n: usize, d: i64) -> Arc<AlgebraSpec<Q>> {
        Arc::new(build_zigzag(&GraphSpec::a_n(n, d), FieldSpec::Rationals, d).unwrap())
    }

    fn a2_odd() -> Arc<AlgebraSpec<Q>> {
        let g = GraphSpec {
            vertices: vec!["1".into(), "2".into()],
            edges: vec![GraphEdge { a: "1".into(), b: "2".into(), degree_ab: 1, degree_ba: 2 }],
        };
        Arc::new(build_zigzag(&g, FieldSpec::Rationals, 3).unwrap())
    }

    #[test]
    fn classes_of_simple_objects() {
        let alg = zigzag(3, 2);
        let m = LatticeModel::of_algebra(&alg);
        let p1 = projective(&alg, 0).unwrap();
        assert_eq!(class_of(&p1, &m).unwrap(), KClass(vec![1, 0, 0]));
        assert_eq!(class_of(&p1.shift(1), &m).unwrap(), KClass(vec![-1, 0, 0]));
        let src = p1.shift(-1);
        let p2 = projective(&alg, 1).unwrap();
        let hc = HomComplex::new(&src, &p2).unwrap();
        let c = cone(&hc.to_map(0, &hc.homology_basis(0)[0])).unwrap();
        assert_eq!(class_of(&c, &m).unwrap(), KClass(vec![1, 1, 0]));
    }

    #[test]
    fn gram_matches_ext_tables() {
        for alg in [zigzag(2, 2), zigzag(3, 2), zigzag(4, 3), a2_odd()] {
            let m = LatticeModel::of_algebra(&alg);
            assert!(m.invariant_violations().is_empty());
            assert!(m.non_spherical_diagonal().is_empty());
            for i in 0..m.rank() {
                for j in 0..m.rank() {
                    let t = ext_table(&projective(&alg, i).unwrap(), &projective(&alg, j).unwrap()).unwrap();
                    assert_eq!(m.gram[i][j], t.euler_characteristic());
                }
            }
        }
        let m = LatticeModel::of_algebra(&zigzag(2, 2));
        let (e1, e2) = (KClass(vec![1, 0]), KClass(vec![0, 1]));
        assert_eq!(m.euler_pairing(&e1, &e1).unwrap(), 2);
        assert_eq!(m.euler_pairing(&e1, &e2).unwrap(), -1);
        let m3 = LatticeModel::of_algebra(&a2_odd());
        assert_eq!(m3.euler_pairing(&e1, &e1).unwrap(), 0);
    }

    #[test]
    fn reflections() {
        let m = LatticeModel::of_algebra(&zigzag(2, 2));
        let (e1, e2) = (KClass(vec![1, 0]), KClass(vec![0, 1]));
        assert_eq!(m.reflect(&e1, &e2).unwrap(), KClass(vec![1, 1]));
        assert_eq!(m.reflect(&e1, &e1).unwrap(), KClass(vec![-1, 0]));
        let m3 = LatticeModel::of_algebra(&a2_odd());
        assert_eq!(m3.reflect(&e1, &e1).unwrap(), e1);
        assert!(m.reflect(&e1, &KClass(vec![1])).is_err());
    }

    #[test]
    fn lattice_commutation() {
        let m = LatticeModel::of_algebra(&zigzag(3, 2));
        let e = |i| KClass::basis(3, i);
        assert!(m.lattice_commute(&e(0), &e(2)).unwrap());
        assert!(!m.lattice_commute(&e(0), &e(1)).unwrap());
        assert!(m.lattice_commute(&e(1), &e(1)).unwrap());
    }

    #[test]
    fn twist_acts_by_reflection() {
        let alg = zigzag(3, 2);
        let m = LatticeModel::of_algebra(&alg);
        let p: Vec<_> = (0..3).map(|v| projective(&alg, v).unwrap()).collect();
        for e in &p {
            for g in &p {
                let t = twist(e, g).unwrap();
                let want = m.reflect(&class_of(e, &m).unwrap(), &class_of(g, &m).unwrap()).unwrap();
                assert_eq!(class_of(&t, &m).unwrap(), want);
                assert_eq!(class_of(&minimize(&t), &m).unwrap(), want);
            }
        }
    }

    proptest! {
        #[test]
        fn even_reflection_is_an_isometric_involution(
            u in proptest::collection::vec(-5i64..=5, 3),
            v in proptest::collection::vec(-5i64..=5, 3),
            r in 0usize..3,
        ) {
            let m = LatticeModel::of_algebra(&zigzag(3, 2));
            let e = KClass::basis(3, r);
            let (u, v) = (KClass(u), KClass(v));
            prop_assert_eq!(m.reflect(&e, &m.reflect(&e, &v).unwrap()).unwrap(), v.clone());
            let ru = m.reflect(&e, &u).unwrap();
            let rv = m.reflect(&e, &v).unwrap();
            prop_assert_eq!(m.euler_pairing(&ru, &rv).unwrap(), m.euler_pairing(&u, &v).unwrap());
        }

        #[test]
        fn odd_transvection_preserves_pairing(
            u in proptest::collection::vec(-5i64..=5, 2),
            v in proptest::collection::vec(-5i64..=5, 2),
            r in 0usize..2,
        ) {
            let m = LatticeModel::of_algebra(&a2_odd());
            let e = KClass::basis(2, r);
            let (u, v) = (KClass(u), KClass(v));
            let ru = m.reflect(&e, &u).unwrap();
            let rv = m.reflect(&e, &v).unwrap();
            prop_assert_eq!(m.euler_pairing(&ru, &rv).unwrap(), m.euler_pairing(&u, &v).unwrap());
        }
    }
}
