//! Minimal models by Gaussian elimination, and isomorphism testing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{AMatrix, ChainMap, Summand, TwistedComplex};
use crate::error::TwistError;
use crate::field::Field;
use crate::hom::HomComplex;
use crate::linalg::Matrix;

/// An entry of the differential that is a nonzero multiple of a vertex idempotent.
fn find_unit<K: Field>(x: &TwistedComplex<K>) -> Option<(usize, usize, K)> {
    let alg = x.algebra();
    let s = x.summands();
    let d = x.differential();
    for k in 0..s.len() {
        for j in 0..s.len() {
            if s[j].vertex != s[k].vertex || s[k].shift != s[j].shift + 1 {
                continue;
            }
            let c = alg.unit_coefficient(d.get(j, k), s[k].vertex);
            if !c.is_zero() {
                return Some((j, k, c));
            }
        }
    }
    None
}

/// A homotopy-equivalent complex whose differential has no unit entries.
///
/// Each step cancels a unit entry `d[j][k] = c e_v` against its two summands and
/// corrects the rest by `d[a][b] -= d[a][k] c^{-1} d[j][b]`.
pub fn minimize<K: Field>(x: &TwistedComplex<K>) -> TwistedComplex<K> {
    let alg = x.algebra().clone();
    let mut summands = x.summands().to_vec();
    let mut d = x.differential().clone();
    loop {
        let cur = TwistedComplex::from_raw(alg.clone(), summands.clone(), d.clone());
        let Some((j, k, c)) = find_unit(&cur) else {
            return cur;
        };
        let inv = c.inv().expect("unit entry");
        let keep: Vec<usize> = (0..summands.len()).filter(|&i| i != j && i != k).collect();
        let mut next = d.select(&keep, &keep);
        for (a, &ia) in keep.iter().enumerate() {
            let left = d.get(ia, k);
            if left.is_zero() {
                continue;
            }
            let left = left.scale(&inv);
            for (b, &ib) in keep.iter().enumerate() {
                let right = d.get(j, ib);
                if right.is_zero() {
                    continue;
                }
                let corr = alg.mul(&left, right);
                let v = next.get(a, b).sub(&corr);
                next.set(a, b, v);
            }
        }
        summands = keep.iter().map(|&i| summands[i]).collect();
        d = next;
    }
}

pub fn is_minimal<K: Field>(x: &TwistedComplex<K>) -> bool {
    find_unit(x).is_none()
}

#[derive(Clone)]
pub struct IsoResult<K> {
    pub isomorphic: bool,
    /// A closed degree-0 map between the minimal models that is invertible.
    pub witness: Option<ChainMap<K>>,
    pub seed: u64,
}

impl<K: Field> std::fmt::Debug for IsoResult<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IsoResult")
            .field("isomorphic", &self.isomorphic)
            .field("witness", &self.witness)
            .field("seed", &self.seed)
            .finish()
    }
}

const ISO_ATTEMPTS: usize = 8;
const ISO_COEFF_BOUND: i64 = 1000;

/// Degree-0 scalar blocks of a degree-0 map between complexes with equal summand
/// multisets, one block per `(vertex, shift)` class.
fn scalar_blocks<K: Field>(f: &ChainMap<K>) -> Vec<Matrix<K>> {
    let alg = f.source().algebra();
    let src = f.source().summands();
    let tgt = f.target().summands();
    let mut classes: Vec<Summand> = src.to_vec();
    classes.sort();
    classes.dedup();
    classes
        .iter()
        .map(|c| {
            let rows: Vec<usize> = (0..tgt.len()).filter(|&j| tgt[j] == *c).collect();
            let cols: Vec<usize> = (0..src.len()).filter(|&k| src[k] == *c).collect();
            let data: Vec<Vec<K>> = rows
                .iter()
                .map(|&j| cols.iter().map(|&k| alg.unit_coefficient(f.matrix().get(j, k), c.vertex)).collect())
                .collect();
            Matrix::from_rows(data)
        })
        .collect()
}

/// Whether a closed degree-0 map between minimal complexes is an isomorphism:
/// exactly when every scalar block is invertible.
pub fn is_invertible_mod_radical<K: Field>(f: &ChainMap<K>) -> bool {
    if f.degree() != 0 || f.source().summand_multiset() != f.target().summand_multiset() {
        return false;
    }
    scalar_blocks(f).iter().all(|b| b.rows() == b.cols() && !b.determinant().is_zero())
}

/// Decides `x ≅ y` by comparing minimal models. A positive answer carries a
/// witness that has been checked exactly; random coefficients come from `seed`.
pub fn is_isomorphic<K: Field>(x: &TwistedComplex<K>, y: &TwistedComplex<K>, seed: u64) -> Result<IsoResult<K>, TwistError> {
    x.same_algebra(y)?;
    let mx = minimize(x);
    let my = minimize(y);
    let no = IsoResult { isomorphic: false, witness: None, seed };
    if mx.summand_multiset() != my.summand_multiset() {
        return Ok(no);
    }
    let hc = HomComplex::new(&mx, &my)?;
    if mx.is_empty() {
        return Ok(IsoResult { isomorphic: true, witness: Some(hc.to_map(0, &[])), seed });
    }
    let z = hc.cocycles(0);
    if z.is_empty() {
        return Ok(no);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ISO_ATTEMPTS {
        let mut coords = vec![K::zero(); hc.dim(0)];
        for v in &z {
            let r = K::random(&mut rng, ISO_COEFF_BOUND);
            for (c, x) in coords.iter_mut().zip(v) {
                *c = c.clone() + r.clone() * x.clone();
            }
        }
        let f = hc.to_map(0, &coords);
        if f.is_closed() && is_invertible_mod_radical(&f) {
            return Ok(IsoResult { isomorphic: true, witness: Some(f), seed });
        }
    }
    Ok(no)
}

/// Some `n` with `x[n] ≅ y`, if one exists.
pub fn isomorphic_up_to_shift<K: Field>(
    x: &TwistedComplex<K>,
    y: &TwistedComplex<K>,
    seed: u64,
) -> Result<Option<i64>, TwistError> {
    x.same_algebra(y)?;
    let mx = minimize(x);
    let my = minimize(y);
    if mx.len() != my.len() {
        return Ok(None);
    }
    if mx.is_empty() {
        return Ok(Some(0));
    }
    let a = mx.summand_multiset();
    let b = my.summand_multiset();
    let n = b[0].shift - a[0].shift;
    if mx.shift(n).summand_multiset() != b {
        return Ok(None);
    }
    Ok(is_isomorphic(&mx.shift(n), &my, seed)?.isomorphic.then_some(n))
}

/// The differential of `x` conjugated by a block base change, used to hide the
/// obvious structure of generated objects.
pub fn conjugate_by<K: Field>(x: &TwistedComplex<K>, u: &AMatrix<K>, u_inv: &AMatrix<K>) -> TwistedComplex<K> {
    x.conjugate(u, u_inv)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{build_zigzag, AlgElem, AlgebraSpec, GraphSpec};
    use crate::complex::{cone, direct_sum, projective};
    use crate::field::{FieldSpec, Rational};
    use crate::hom::ext_table;

    type Q = Rational;

    fn zigzag(n: usize, d: i64) -> Arc<AlgebraSpec<Q>> {
        Arc::new(build_zigzag(&GraphSpec::a_n(n, d), FieldSpec::Rationals, d).unwrap())
    }

    fn cone_id(x: &TwistedComplex<Q>) -> TwistedComplex<Q> {
        cone(&ChainMap::identity(x)).unwrap()
    }

    fn arrow_cone(alg: &Arc<AlgebraSpec<Q>>) -> TwistedComplex<Q> {
        let p1 = projective(alg, 0).unwrap();
        let p2 = projective(alg, 1).unwrap();
        let src = p1.shift(-1);
        let hc = HomComplex::new(&src, &p2).unwrap();
        cone(&hc.to_map(0, &hc.homology_basis(0)[0])).unwrap()
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let alg = zigzag(2, 2);
        let p1 = projective(&alg, 0).unwrap();
        assert!(minimize(&cone_id(&p1)).is_empty());
        let c = arrow_cone(&alg);
        assert!(minimize(&cone_id(&c)).is_empty());
    }

    #[test]
    fn contractible_summands_are_stripped() {
        let alg = zigzag(2, 2);
        let p1 = projective(&alg, 0).unwrap();
        let p2 = projective(&alg, 1).unwrap();
        let x = direct_sum(&alg, &[p1.clone(), cone_id(&p2)]).unwrap();
        assert_eq!(minimize(&x), p1);
        let c = arrow_cone(&alg);
        let y = direct_sum(&alg, &[cone_id(&p1.shift(3)), c.clone(), cone_id(&p2)]).unwrap();
        assert_eq!(minimize(&y), minimize(&c));
    }

    #[test]
    fn minimize_preserves_ext_tables() {
        let alg = zigzag(3, 2);
        let c = arrow_cone(&alg);
        let x = direct_sum(&alg, &[cone_id(&c), c.clone(), cone_id(&projective(&alg, 2).unwrap().shift(-1))]).unwrap();
        let m = minimize(&x);
        assert!(is_minimal(&m));
        for v in 0..3 {
            let p = projective(&alg, v).unwrap();
            assert_eq!(ext_table(&p, &x).unwrap(), ext_table(&p, &m).unwrap());
            assert_eq!(ext_table(&x, &p).unwrap(), ext_table(&m, &p).unwrap());
        }
    }

    #[test]
    fn isomorphism_basics() {
        let alg = zigzag(2, 2);
        let p1 = projective(&alg, 0).unwrap();
        let p2 = projective(&alg, 1).unwrap();
        let r = is_isomorphic(&p1, &p1, 0).unwrap();
        assert!(r.isomorphic);
        assert!(r.witness.unwrap().is_closed());
        assert!(!is_isomorphic(&p1, &p1.shift(1), 0).unwrap().isomorphic);
        let c = arrow_cone(&alg);
        let s = direct_sum(&alg, &[p1.clone(), p2.clone()]).unwrap();
        assert!(!is_isomorphic(&c, &s, 0).unwrap().isomorphic);
        assert!(is_isomorphic(&c, &direct_sum(&alg, &[cone_id(&p2), c.clone()]).unwrap(), 0).unwrap().isomorphic);
        assert_eq!(isomorphic_up_to_shift(&c, &c.shift(-4), 0).unwrap(), Some(-4));
        assert_eq!(isomorphic_up_to_shift(&c, &s, 0).unwrap(), None);
    }

    /// Exhaustive oracle over F_5: no closed degree-0 map from the arrow cone to
    /// P1 + P2 is invertible.
    #[test]
    fn arrow_cone_is_not_split_exhaustively() {
        use crate::field::Fp;
        type F5 = Fp<5>;
        let alg: Arc<AlgebraSpec<F5>> =
            Arc::new(build_zigzag(&GraphSpec::a_n(2, 2), FieldSpec::PrimeField { characteristic: 5 }, 2).unwrap());
        let p1 = projective(&alg, 0).unwrap();
        let p2 = projective(&alg, 1).unwrap();
        let mut d = AMatrix::zeros(2, 2);
        let a21 = alg.basis().iter().position(|b| b.name == "a2_1").unwrap();
        d.set(1, 0, AlgElem::basis(a21));
        let c = TwistedComplex::new(alg.clone(), vec![Summand { vertex: 0, shift: 0 }, Summand { vertex: 1, shift: 0 }], d)
            .unwrap();
        let s = direct_sum(&alg, &[p1, p2]).unwrap();
        let hc = HomComplex::new(&c, &s).unwrap();
        let z = hc.cocycles(0);
        let n = z.len();
        assert!(n <= 4);
        let mut found = false;
        for code in 0..5usize.pow(n as u32) {
            let mut coords = vec![F5::new(0); hc.dim(0)];
            let mut t = code;
            for v in &z {
                let r = F5::new((t % 5) as i64);
                t /= 5;
                for (c, x) in coords.iter_mut().zip(v) {
                    *c = *c + r * *x;
                }
            }
            if is_invertible_mod_radical(&hc.to_map(0, &coords)) {
                found = true;
            }
        }
        assert!(!found);
        assert!(!is_isomorphic(&c, &s, 3).unwrap().isomorphic);
    }
}
