use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistlab::algebra::{build_zigzag, AlgebraSpec, GraphSpec};
use twistlab::complex::{cone, projective, TwistedComplex};
use twistlab::field::{Field, FieldSpec, Rational};
use twistlab::hom::{ext_table, HomComplex};
use twistlab::ledger::{Affine, Direction, Problem, Relop, Ses};

type Q = Rational;

fn objects(alg: &Arc<AlgebraSpec<Q>>) -> Vec<TwistedComplex<Q>> {
    let p: Vec<_> = (0..alg.vertices().len()).map(|v| projective(alg, v).unwrap()).collect();
    let mut out = p.clone();
    out.push(p[0].shift(-1));
    out.push(p[1].shift(1));
    for (x, y) in [(p[0].shift(-1), p[1].clone()), (p[0].shift(-2), p[0].clone())] {
        let hc = HomComplex::new(&x, &y).unwrap();
        let class = hc.homology_basis(0).remove(0);
        out.push(cone(&hc.to_map(0, &class)).unwrap());
    }
    out
}

/// `(lowest, highest)` degree over the given tables, if any is nonzero.
fn support(tables: &[twistlab::hom::ExtTable]) -> Option<(i64, i64)> {
    let keys: Vec<i64> = tables.iter().flat_map(|t| t.entries().keys().copied()).collect();
    Some((*keys.iter().min()?, *keys.iter().max()?))
}

/// Runs one long exact sequence of the triangle `x -> y -> c` against `t`,
/// feeding in the exact `x` and `y` slots, and checks every interval against
/// the homology computation.
fn check_triangle(x: &TwistedComplex<Q>, y: &TwistedComplex<Q>, c: &TwistedComplex<Q>, t0: &TwistedComplex<Q>, dir: Direction) {
    let table = |a: &TwistedComplex<Q>, b: &TwistedComplex<Q>| match dir {
        Direction::Into => ext_table(a, b).unwrap(),
        Direction::From => ext_table(b, a).unwrap(),
    };
    let Some((lo, _)) = support(&[table(x, t0), table(y, t0), table(c, t0)]) else {
        return;
    };
    // move every table into degrees >= 0 so the sequence starts with 0
    let k = (-lo).max(0);
    let t = match dir {
        Direction::Into => t0.shift(-k),
        Direction::From => t0.shift(k),
    };
    let tables = [table(x, &t), table(y, &t), table(c, &t)];
    let (_, hi) = support(&tables).unwrap();
    let max_degree = hi + 1;
    let mut p = Problem::new();
    for e in ["X", "Y", "C", "T"] {
        p.add_entity(e).unwrap();
    }
    let ses = Ses { name: "S".into(), a: "X".into(), b: "Y".into(), c: "C".into() };
    p.derive_les(&ses, dir, "T", max_degree).unwrap();
    let slot = |p: &mut Problem, e: &str, i: i64| match dir {
        Direction::Into => p.slot(e, "T", i).unwrap(),
        Direction::From => p.slot("T", e, i).unwrap(),
    };
    for i in 0..=max_degree {
        for (name, tab) in [("X", &tables[0]), ("Y", &tables[1])] {
            let v = slot(&mut p, name, i);
            p.assert_slot(v, Relop::Eq, &Affine::constant(tab.get(i) as i64), format!("{name} table"), &[]).unwrap();
        }
    }
    let p = p.propagate().unwrap();
    for i in 0..=max_degree {
        for (name, tab) in [("X", &tables[0]), ("Y", &tables[1]), ("C", &tables[2])] {
            let found = match dir {
                Direction::Into => p.find_slot(name, "T", i),
                Direction::From => p.find_slot("T", name, i),
            };
            let Ok(v) = found else { continue };
            let q = p.query(v);
            let truth = tab.get(i) as i64;
            assert!(q.lo <= truth && q.hi.is_none_or(|h| truth <= h), "{} = {truth} not in {}", q.slot, q.interval());
            if let Some(e) = q.exact {
                assert_eq!(e, truth.to_string(), "{}", q.slot);
            }
        }
    }
}

#[test]
fn ledger_intervals_contain_homology_dims_on_cone_triangles() {
    let alg = Arc::new(build_zigzag::<Q>(&GraphSpec::a_n(3, 2), FieldSpec::Rationals, 2).unwrap());
    let objs = objects(&alg);
    let targets: Vec<_> = (0..3).map(|v| projective(&alg, v).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut triangles = 0;
    for x in &objs {
        for y in &objs {
            let hc = HomComplex::new(x, y).unwrap();
            let basis = hc.cocycles(0);
            if basis.is_empty() {
                continue;
            }
            let mut coords = vec![Q::zero(); hc.dim(0)];
            for b in &basis {
                let c = Q::from_i64(rng.gen_range(-2..=2));
                for (acc, v) in coords.iter_mut().zip(b) {
                    *acc += c.clone() * v.clone();
                }
            }
            let c = cone(&hc.to_map(0, &coords)).unwrap();
            for t in &targets {
                check_triangle(x, y, &c, t, Direction::Into);
                check_triangle(x, y, &c, t, Direction::From);
            }
            triangles += 1;
        }
    }
    assert!(triangles >= 10, "only {triangles} triangles");
}
