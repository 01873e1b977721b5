//! Seeded random objects for property tests and acceptance runs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::AlgebraSpec;
use crate::complex::{cone, direct_sum, projective, AMatrix, ChainMap, TwistedComplex};
use crate::decompose::{invert_degree_zero, scalar_part};
use crate::error::TwistError;
use crate::field::Field;
use crate::hom::HomComplex;
use crate::minimal::minimize;

const COEFF_BOUND: i64 = 5;

/// A random closed degree-0 map `x -> y`, nonzero in homology when possible.
pub fn random_closed_map<K: Field>(
    x: &TwistedComplex<K>,
    y: &TwistedComplex<K>,
    rng: &mut impl Rng,
) -> Result<ChainMap<K>, TwistError> {
    let hc = HomComplex::new(x, y)?;
    let classes = hc.homology_basis(0);
    let mut coords = vec![K::zero(); hc.dim(0)];
    for _ in 0..8 {
        for v in &classes {
            let c = K::random(rng, COEFF_BOUND);
            for (acc, x) in coords.iter_mut().zip(v) {
                *acc = acc.clone() + c.clone() * x.clone();
            }
        }
        if classes.is_empty() || !hc.is_exact(0, &coords) {
            break;
        }
    }
    Ok(hc.to_map(0, &coords))
}

/// A minimal object of `<e>` built from at most `len` shifted copies of `e`
/// by iterated cones, shifts within `[-max_shift, max_shift]`.
pub fn random_in_thick<K: Field>(
    e: &TwistedComplex<K>,
    len: usize,
    max_shift: i64,
    rng: &mut impl Rng,
) -> Result<TwistedComplex<K>, TwistError> {
    let mut g = e.shift(rng.gen_range(-max_shift..=max_shift));
    for _ in 1..len {
        let shifts: Vec<i64> = (-max_shift..=max_shift)
            .filter(|&s| HomComplex::new(&e.shift(s), &g).is_ok_and(|hc| hc.homology_dim(0) > 0))
            .collect();
        let s = match shifts.choose(rng) {
            Some(&s) if rng.gen_bool(0.8) => s,
            _ => rng.gen_range(-max_shift..=max_shift),
        };
        let f = random_closed_map(&e.shift(s), &g, rng)?;
        let next = minimize(&cone(&f)?);
        if !next.is_empty() {
            g = next;
        }
    }
    Ok(g)
}

/// A random minimal object from `pieces` shifted projectives at the given vertices.
pub fn random_object<K: Field>(
    alg: &Arc<AlgebraSpec<K>>,
    vertices: &[usize],
    pieces: usize,
    max_shift: i64,
    rng: &mut impl Rng,
) -> Result<TwistedComplex<K>, TwistError> {
    let pick = |rng: &mut dyn rand::RngCore| -> Result<TwistedComplex<K>, TwistError> {
        let v = vertices[rng.gen_range(0..vertices.len())];
        Ok(projective(alg, v)?.shift(rng.gen_range(-max_shift..=max_shift)))
    };
    let mut g = pick(rng)?;
    for _ in 1..pieces {
        let p = pick(rng)?;
        let f = random_closed_map(&p, &g, rng)?;
        let next = if f.matrix().is_zero() || rng.gen_bool(0.2) {
            direct_sum(alg, &[p, g.clone()])?
        } else {
            minimize(&cone(&f)?)
        };
        if !next.is_empty() {
            g = next;
        }
    }
    Ok(g)
}

/// A random invertible degree-0 self-map of the underlying graded module of
/// `x`, with its inverse.
pub fn random_automorphism<K: Field>(x: &TwistedComplex<K>, rng: &mut impl Rng) -> (AMatrix<K>, AMatrix<K>) {
    let hc = HomComplex::new(x, x).expect("same algebra");
    loop {
        let coords: Vec<K> = (0..hc.dim(0)).map(|_| K::random(rng, COEFF_BOUND)).collect();
        let u = hc.to_matrix(0, &coords);
        if scalar_part(x, &u).inverse().is_none() {
            continue;
        }
        let u_inv = invert_degree_zero(x, &u).expect("invertible scalar part");
        return (u, u_inv);
    }
}

/// `x` with its differential conjugated by a random base change; isomorphic to `x`.
pub fn random_conjugate<K: Field>(x: &TwistedComplex<K>, rng: &mut impl Rng) -> TwistedComplex<K> {
    let (u, u_inv) = random_automorphism(x, rng);
    x.conjugate(&u, &u_inv)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{build_zigzag, GraphSpec};
    use crate::analysis::d_e;
    use crate::field::{FieldSpec, Rational};
    use crate::minimal::is_isomorphic;

    type Q = Rational;

    fn a3() -> Arc<AlgebraSpec<Q>> {
        Arc::new(build_zigzag(&GraphSpec::a_n(3, 2), FieldSpec::Rationals, 2).unwrap())
    }

    #[test]
    fn automorphisms_invert() {
        let alg = a3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = random_object(&alg, &[0, 1, 2], 3, 2, &mut rng).unwrap();
            let (u, u_inv) = random_automorphism(&x, &mut rng);
            let id = ChainMap::identity(&x).matrix().clone();
            assert_eq!(u.mul(&alg, &u_inv), id);
            assert_eq!(u_inv.mul(&alg, &u), id);
        }
    }

    #[test]
    fn conjugates_are_isomorphic() {
        let alg = a3();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let x = random_object(&alg, &[0, 1, 2], 3, 2, &mut rng).unwrap();
            let y = random_conjugate(&x, &mut rng);
            assert!(is_isomorphic(&x, &y, 0).unwrap().isomorphic);
        }
    }

    #[test]
    fn thick_objects_see_e() {
        let alg = a3();
        let p1 = projective(&alg, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_in_thick(&p1, 3, 2, &mut rng).unwrap();
            assert!(!g.is_empty());
            assert!(g.summands().iter().all(|s| s.vertex == 0));
            assert!(d_e(&p1, &g).unwrap() > 0);
        }
    }
}
