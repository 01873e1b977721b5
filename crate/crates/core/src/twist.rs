//! Spherical twists as cones of evaluation maps.
//!
//! `T_E(G) = cone(Hom*(E,G) ⊗ E -> G)`, so `T_E` fixes `E^⊥` and sends a
//! spherical `E` to `E[1-d]`.

use crate::analysis::strong_sphericity_violation;
use crate::complex::{cone, direct_sum, AMatrix, ChainMap, TwistedComplex};
use crate::error::TwistError;
use crate::field::Field;
use crate::hom::HomComplex;
use crate::minimal::minimize;

/// An ordered list of objects meant to be a strongly spherical collection.
#[derive(Clone)]
pub struct SphericalCollection<K> {
    pub objects: Vec<TwistedComplex<K>>,
    pub d: i64,
}

/// Cocycle representatives of a basis of `H*(Hom(x, y))`, with their degrees.
pub fn homology_classes<K: Field>(x: &TwistedComplex<K>, y: &TwistedComplex<K>) -> Result<Vec<ChainMap<K>>, TwistError> {
    let hc = HomComplex::new(x, y)?;
    let (lo, hi) = hc.degree_range();
    let mut out = Vec::new();
    if lo <= hi {
        for m in lo..=hi {
            for z in hc.homology_basis(m) {
                out.push(hc.to_map(m, &z));
            }
        }
    }
    Ok(out)
}

/// `⊕_b E[-m_b] -> G`, one block per homology class `φ_b ∈ H^{m_b}(Hom(E, G))`.
pub fn evaluation_map<K: Field>(e: &TwistedComplex<K>, g: &TwistedComplex<K>) -> Result<ChainMap<K>, TwistError> {
    let classes = homology_classes(e, g)?;
    let sources: Vec<TwistedComplex<K>> = classes.iter().map(|c| e.shift(-c.degree())).collect();
    let source = direct_sum(e.algebra(), &sources)?;
    let blocks: Vec<AMatrix<K>> = classes.iter().map(|c| c.matrix().clone()).collect();
    let matrix = AMatrix::hconcat(&blocks, g.len());
    let f = ChainMap::from_raw(source, g.clone(), 0, matrix);
    debug_assert!(f.is_closed());
    Ok(f)
}

/// `G -> ⊕_b E[m_b]`, one block per class `ψ_b ∈ H^{m_b}(Hom(G, E))`.
pub fn coevaluation_map<K: Field>(e: &TwistedComplex<K>, g: &TwistedComplex<K>) -> Result<ChainMap<K>, TwistError> {
    let classes = homology_classes(g, e)?;
    let targets: Vec<TwistedComplex<K>> = classes.iter().map(|c| e.shift(c.degree())).collect();
    let target = direct_sum(e.algebra(), &targets)?;
    let blocks: Vec<AMatrix<K>> = classes.iter().map(|c| c.matrix().clone()).collect();
    let matrix = AMatrix::vconcat(&blocks, g.len());
    let f = ChainMap::from_raw(g.clone(), target, 0, matrix);
    debug_assert!(f.is_closed());
    Ok(f)
}

/// `T_E(G)`, minimized.
pub fn twist<K: Field>(e: &TwistedComplex<K>, g: &TwistedComplex<K>) -> Result<TwistedComplex<K>, TwistError> {
    e.same_algebra(g)?;
    Ok(minimize(&cone(&evaluation_map(e, g)?)?))
}

/// `T_E^{-1}(G) = cone(G -> Hom*(G,E)^∨ ⊗ E)[-1]`, minimized.
pub fn inverse_twist<K: Field>(e: &TwistedComplex<K>, g: &TwistedComplex<K>) -> Result<TwistedComplex<K>, TwistError> {
    e.same_algebra(g)?;
    Ok(minimize(&cone(&coevaluation_map(e, g)?)?.shift(-1)))
}

/// `T_{E_1} T_{E_2} ... T_{E_n} (G)`. In strict mode the collection must be strongly spherical.
pub fn composite_twist<K: Field>(
    gamma: &SphericalCollection<K>,
    g: &TwistedComplex<K>,
    strict: bool,
) -> Result<TwistedComplex<K>, TwistError> {
    if strict {
        if let Some(v) = strong_sphericity_violation(&gamma.objects, gamma.d)? {
            return Err(TwistError::NotStronglySpherical { first: v.first, second: v.second, shift: v.shift });
        }
    }
    let mut cur = minimize(g);
    for e in gamma.objects.iter().rev() {
        cur = twist(e, &cur)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{build_zigzag, AlgebraSpec, GraphSpec};
    use crate::complex::{projective, Summand};
    use crate::field::{FieldSpec, Rational};
    use crate::hom::ext_table;
    use crate::minimal::is_isomorphic;

    type Q = Rational;

    fn zigzag(n: usize, d: i64) -> Arc<AlgebraSpec<Q>> {
        Arc::new(build_zigzag(&GraphSpec::a_n(n, d), FieldSpec::Rationals, d).unwrap())
    }

    fn iso(x: &TwistedComplex<Q>, y: &TwistedComplex<Q>) -> bool {
        is_isomorphic(x, y, 0).unwrap().isomorphic
    }

    #[test]
    fn evaluation_map_shapes() {
        let alg = zigzag(3, 2);
        let p: Vec<_> = (0..3).map(|v| projective(&alg, v).unwrap()).collect();
        let ev = evaluation_map(&p[0], &p[2]).unwrap();
        assert!(ev.source().is_empty());
        let ev = evaluation_map(&p[0], &p[0]).unwrap();
        assert_eq!(ev.source().summand_multiset(), vec![Summand { vertex: 0, shift: -2 }, Summand { vertex: 0, shift: 0 }]);
        let names: Vec<String> = (0..2).map(|k| alg.format_elem(ev.matrix().get(0, k))).collect();
        assert_eq!(names, vec!["e1".to_string(), "l1".to_string()]);
        let ev = evaluation_map(&p[0], &p[1]).unwrap();
        assert_eq!(ev.source().summands(), &[Summand { vertex: 0, shift: -1 }]);
        assert_eq!(alg.format_elem(ev.matrix().get(0, 0)), "a2_1");
    }

    #[test]
    fn twist_examples_on_small_zigzags() {
        let alg = zigzag(3, 2);
        let p: Vec<_> = (0..3).map(|v| projective(&alg, v).unwrap()).collect();
        assert_eq!(twist(&p[0], &p[2]).unwrap(), p[2]);
        assert!(iso(&twist(&p[0], &p[0]).unwrap(), &p[0].shift(-1)));
        let t = twist(&p[0], &p[1]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(inverse_twist(&p[0], &p[2]).unwrap(), p[2]);
        assert!(iso(&inverse_twist(&p[0], &t).unwrap(), &p[1]));
        assert!(iso(&inverse_twist(&p[0], &p[0].shift(-1)).unwrap(), &p[0]));
    }

    #[test]
    fn sphere_shift_for_odd_d() {
        let g = GraphSpec {
            vertices: vec!["1".into(), "2".into()],
            edges: vec![crate::algebra::GraphEdge { a: "1".into(), b: "2".into(), degree_ab: 1, degree_ba: 2 }],
        };
        let alg = Arc::new(build_zigzag::<Q>(&g, FieldSpec::Rationals, 3).unwrap());
        for v in 0..2 {
            let p = projective(&alg, v).unwrap();
            assert!(iso(&twist(&p, &p).unwrap(), &p.shift(-2)));
            let other = projective(&alg, 1 - v).unwrap();
            let t = twist(&p, &other).unwrap();
            assert!(iso(&inverse_twist(&p, &t).unwrap(), &other));
            assert!(iso(&twist(&p, &inverse_twist(&p, &other).unwrap()).unwrap(), &other));
        }
    }

    #[test]
    fn composite_twist_orders_and_gate() {
        let alg = zigzag(3, 2);
        let p: Vec<_> = (0..3).map(|v| projective(&alg, v).unwrap()).collect();
        let g13 = SphericalCollection { objects: vec![p[0].clone(), p[2].clone()], d: 2 };
        let g31 = SphericalCollection { objects: vec![p[2].clone(), p[0].clone()], d: 2 };
        let a = composite_twist(&g13, &p[1], true).unwrap();
        let b = composite_twist(&g31, &p[1], true).unwrap();
        assert!(iso(&a, &b));
        let single = SphericalCollection { objects: vec![p[0].clone()], d: 2 };
        assert!(iso(&composite_twist(&single, &p[1], true).unwrap(), &twist(&p[0], &p[1]).unwrap()));
        let adjacent = SphericalCollection { objects: vec![p[0].clone(), p[1].clone()], d: 2 };
        assert_eq!(
            composite_twist(&adjacent, &p[2], true).unwrap_err(),
            TwistError::NotStronglySpherical { first: 1, second: 2, shift: 1 }
        );
        assert!(composite_twist(&adjacent, &p[2], false).is_ok());
    }

    #[test]
    fn twist_changes_tables_by_reflection() {
        let alg = zigzag(3, 2);
        let p: Vec<_> = (0..3).map(|v| projective(&alg, v).unwrap()).collect();
        let t = twist(&p[1], &p[0]).unwrap();
        // T_{P2}(P1) is the arrow cone; it is still spherical
        let tt = ext_table(&t, &t).unwrap();
        assert_eq!(tt.total(), 2);
        assert_eq!(tt.get(0), 1);
        assert_eq!(tt.get(2), 1);
    }
}
