use std::collections::HashMap;
use std::time::Instant;

use proptest::prelude::*;

use super::*;

const KERNEL: &str = include_str!("../../../../scenarios/kernel.ledger");
const KERNEL_D2: &str = include_str!("../../../../scenarios/kernel_d2.ledger");
const RECOVERY: &str = include_str!("../../../../scenarios/recovery.ledger");
const KERNEL_D4: &str = include_str!("../../../../scenarios/kernel_ext2_d4.ledger");

fn report(src: &str) -> LedgerReport {
    run_source(src).unwrap().1
}

fn ses(a: &str, b: &str, c: &str) -> Ses {
    Ses { name: "S".into(), a: a.into(), b: b.into(), c: c.into() }
}

fn problem(entities: &[&str]) -> Problem {
    let mut p = Problem::new();
    for e in entities {
        p.add_entity(e).unwrap();
    }
    p
}

#[test]
fn les_templates() {
    let mut p = problem(&["F", "EH", "Ox"]);
    let s = p.derive_les(&ses("F", "EH", "Ox"), Direction::Into, "EH", 2).unwrap();
    let names: Vec<String> = p.sequences()[s].slots.iter().map(|&v| p.var_name(v)).collect();
    assert_eq!(
        names,
        ["hom(Ox,EH)", "hom(EH,EH)", "hom(F,EH)", "ext1(Ox,EH)", "ext1(EH,EH)", "ext1(F,EH)", "ext2(Ox,EH)", "ext2(EH,EH)"]
    );
    assert_eq!(p.sequences()[s].ranks.len(), 7);
    let s = p.derive_les(&ses("F", "EH", "Ox"), Direction::From, "Ox", 1).unwrap();
    let names: Vec<String> = p.sequences()[s].slots.iter().map(|&v| p.var_name(v)).collect();
    assert_eq!(names, ["hom(Ox,F)", "hom(Ox,EH)", "hom(Ox,Ox)", "ext1(Ox,F)", "ext1(Ox,EH)"]);
    assert_eq!(p.derive_les(&ses("F", "EH", "Ox"), Direction::From, "Ox", 0), Err(LedgerError::MaxDegree));
    assert!(matches!(p.derive_les(&ses("F", "EH", "Nope"), Direction::From, "Ox", 1), Err(LedgerError::UnknownEntity(_))));
}

#[test]
fn degenerate_sequence_zeroes_the_zero_object() {
    let mut p = problem(&["B", "T"]);
    let s = p.derive_les(&ses(ZERO_ENTITY, "B", "B"), Direction::Into, "T", 2).unwrap();
    let p = p.propagate().unwrap();
    for &v in &p.sequences()[s].slots {
        if p.var_name(v).contains("(0,") {
            assert_eq!(p.query(v).exact.as_deref(), Some("0"));
        }
    }
}

#[test]
fn unconstrained_slot_is_unbounded() {
    let mut p = problem(&["A", "B"]);
    let v = p.slot("A", "B", 3).unwrap();
    let q = p.propagate().unwrap().query(v);
    assert_eq!(q.interval(), "[0, inf)");
    assert_eq!((q.lo, q.hi, q.exact), (0, None, None));
    assert!(matches!(p.find_slot("B", "A", 0), Err(LedgerError::UnknownSlot(_))));
}

#[test]
fn aliases_shift_degrees() {
    let mut p = problem(&["F", "O"]);
    p.add_alias("G", "F", 1).unwrap();
    assert_eq!(p.canonical("G", "O", 1).unwrap(), SlotKey { a: "F".into(), b: "O".into(), degree: 0 });
    assert_eq!(p.canonical("O", "G", 1).unwrap(), SlotKey { a: "O".into(), b: "F".into(), degree: 2 });
    assert_eq!(p.add_alias("G", "F", 2), Err(LedgerError::Duplicate("G".into())));
}

#[test]
fn kernel_golden_values() {
    let t = Instant::now();
    let (_, r) = run_source(KERNEL).unwrap();
    assert!(t.elapsed().as_secs_f64() < 1.0);
    for e in &r.expectations {
        assert!(e.ok, "{e:?}");
    }
    assert_eq!(r.expectations.len(), 7);
    let exact = |q: &str| r.derivation(q).unwrap().value.exact.clone().unwrap();
    assert_eq!(exact("ext1(Ox,F)"), "1");
    assert_eq!(exact("ext1(Fx,Ox)"), "r2 + d - 1");
    assert_eq!(exact("hom(F,EH)"), "r2");
    assert_eq!(exact("ext1(F,EH)"), "0");
    assert_eq!(exact("hom(EH,F)"), "0");
    assert_eq!(exact("hom(F,F)"), "1");
    assert_eq!(exact("ext1(F,F)"), "d");
    assert_eq!(r.relations[0].relation.as_deref(), Some("ext1(F,F) = hom(F,F) + d - 1"));
    let ext1_f_eh = &r.derivation("ext1(F,EH)").unwrap().value.trace;
    assert!(ext1_f_eh.iter().any(|l| l.contains("d > 2")), "{ext1_f_eh:#?}");
    assert!(ext1_f_eh.iter().any(|l| l.contains("ext2(Ox,EH) = 0 (from ext(Ox,EH,i<d))")));
    let ext1_ff = &r.derivation("ext1(F,F)").unwrap().value.trace;
    assert!(ext1_ff.iter().any(|l| l == "[relate] ext1(F,F) = hom(F,F) + d - 1"), "{ext1_ff:#?}");
    assert!(ext1_ff.iter().any(|l| l.contains("hom(EH,EH) -> hom(EH,Ox) is injective")));
    assert!(r.unbounded.is_empty());
}

#[test]
fn before_injectivity_hom_ff_is_open() {
    let cut = KERNEL.split("map hom(EH,EH) -> hom(EH,Ox) injective").next().unwrap();
    let (p, _) = run_source(&format!("{cut}derive hom(F,F)\n")).unwrap();
    let q = p.query(p.find_slot("F", "F", 0).unwrap());
    assert_eq!((q.lo, q.exact), (1, None));
}

#[test]
fn koszul_input_gives_ext2() {
    let r = report(KERNEL_D4);
    assert!(r.all_expectations_hold(), "{:?}", r.expectations);
    let d = r.derivation("ext2(Fx,Fx)").unwrap();
    assert_eq!(d.value.exact.as_deref(), Some("6"));
    assert!(d.value.trace.iter().any(|l| l.contains("C(4,2)")));
}

#[test]
fn recovery_replay() {
    let r = report(RECOVERY);
    assert!(r.all_expectations_hold(), "{:?}", r.expectations);
    assert_eq!(r.derivation("hom(F,F)").unwrap().value.exact.as_deref(), Some("r"));
}

#[test]
fn surface_variant_derives_less() {
    let r = report(KERNEL_D2);
    assert!(r.all_expectations_hold(), "{:?}", r.expectations);
    assert!(r.unbounded.contains(&"ext1(F,EH)".to_string()));
}

#[test]
fn contradictions_and_infeasibility() {
    let base = "params r\nentity A B\nses S: A -> B -> B\nfact hom(A,B) = 1\n";
    let err = run_source(&format!("{base}derive hom(A,B)\nfact hom(A,B) = 2\n")).unwrap_err();
    assert!(matches!(err, LedgerError::At { line: 6, ref inner } if matches!(**inner, LedgerError::Contradiction { .. })), "{err}");
    let err = run_source("entity A B C T\nses S: A -> B -> C\nles S into T\nfact hom(B,T) = 0\nmap hom(C,T) -> hom(B,T) nonzero\nderive hom(C,T)\n")
        .unwrap_err();
    match err {
        LedgerError::At { line: 6, inner } => match *inner {
            LedgerError::Infeasible { chain, .. } => {
                assert!(chain.iter().any(|l| l.contains("hom(B,T) = 0")));
                assert!(chain.iter().any(|l| l.contains("nonzero")));
            }
            other => panic!("{other}"),
        },
        other => panic!("{other}"),
    }
    let err = run_source("entity A B C T\nses S: A -> B -> C\nles S into T\nmap hom(A,T) -> hom(C,T) zero\n").unwrap_err();
    assert!(matches!(err, LedgerError::At { line: 4, ref inner } if matches!(**inner, LedgerError::UnknownArrow(_))));
}

#[test]
fn parse_errors_carry_positions() {
    let cases = [
        ("entity A\nfrobnicate A\n", 2, 1),
        ("entity A B\nfact hom(A B) = 1\n", 2, 12),
        ("entity A\n  derive foo(A,A)\n", 2, 10),
        ("params r\nassume r > x\n", 2, 12),
    ];
    for (src, line, col) in cases {
        match parse_program(src) {
            Err(LedgerError::Parse { line: l, col: c, .. }) => assert_eq!((l, c), (line, col), "{src}"),
            other => panic!("{src}: {other:?}"),
        }
    }
}

#[test]
fn programs_round_trip() {
    for src in [KERNEL, KERNEL_D2, RECOVERY, KERNEL_D4] {
        let p = parse_program(src).unwrap();
        let again = parse_program(&p.to_string()).unwrap();
        let strip = |p: &Program| p.statements.iter().map(|(_, s)| s.clone()).collect::<Vec<_>>();
        assert_eq!(strip(&p), strip(&again));
    }
}

/// A random exact sequence with known ranks, and the dims they force.
#[derive(Debug, Clone)]
struct Instance {
    ranks: Vec<i64>,
    dims: Vec<i64>,
}

fn instance(ranks: Vec<i64>, tail: i64) -> Instance {
    let n = ranks.len() + 1;
    let mut dims = vec![0; n];
    dims[0] = ranks[0];
    for j in 1..n - 1 {
        dims[j] = ranks[j - 1] + ranks[j];
    }
    dims[n - 1] = ranks[n - 2] + tail;
    Instance { ranks, dims }
}

fn check_sound(inst: &Instance, known: &[bool], anns: &[u8], symbolic: Option<usize>) -> Result<(), TestCaseError> {
    let mut p = problem(&["A", "B", "C", "T"]);
    let param = p.add_param("p").unwrap();
    let s = p.derive_les(&ses("A", "B", "C"), Direction::Into, "T", 2).unwrap();
    let seq = p.sequences()[s].clone();
    let truth_p = symbolic.map_or(0, |k| inst.dims[k]);
    for (k, &v) in seq.slots.iter().enumerate() {
        if Some(k) == symbolic {
            p.assert_slot(v, Relop::Eq, &Affine::param(param), "symbolic".into(), &[]).unwrap();
        } else if known[k] {
            p.assert_slot(v, Relop::Eq, &Affine::constant(inst.dims[k]), "known".into(), &[]).unwrap();
        }
    }
    for (k, &a) in anns.iter().enumerate() {
        let (src, tgt) = (seq.slots[k], seq.slots[k + 1]);
        let r = inst.ranks[k];
        let ann = match a {
            1 if r == 0 => Annotation::Zero,
            2 if r > 0 => Annotation::Nonzero,
            3 if r == inst.dims[k] => Annotation::Injective,
            4 if r == inst.dims[k + 1] => Annotation::Surjective,
            _ => continue,
        };
        p.assert_arrow(src, tgt, ann, "map".into()).unwrap();
    }
    let p = p.propagate().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut values: HashMap<usize, i64> = HashMap::new();
    values.insert(param, truth_p);
    for (k, &v) in seq.slots.iter().enumerate() {
        values.insert(v, inst.dims[k]);
    }
    for (k, &v) in seq.ranks.iter().enumerate() {
        values.insert(v, inst.ranks[k]);
    }
    for (&v, &x) in &values {
        if v == param {
            continue;
        }
        let (lo, hi, _, _) = p.bounds(v);
        prop_assert!(lo <= x && hi.is_none_or(|h| x <= h), "{} = {x} outside [{lo}, {hi:?}]", p.var_name(v));
        if let Some(a) = p.exact_value(v) {
            let mut val = a.constant.clone();
            for (q, c) in &a.terms {
                val += c * crate::field::Rational::from_integer(values[q].into());
            }
            prop_assert_eq!(val, crate::field::Rational::from_integer(x.into()), "{}", p.var_name(v));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_is_sound(
        ranks in proptest::collection::vec(0i64..4, 7),
        tail in 0i64..3,
        known in proptest::collection::vec(any::<bool>(), 8),
        anns in proptest::collection::vec(0u8..5, 7),
        symbolic in proptest::option::of(0usize..8),
    ) {
        check_sound(&instance(ranks, tail), &known, &anns, symbolic)?;
    }

    #[test]
    fn propagation_never_widens(
        ranks in proptest::collection::vec(0i64..4, 7),
        known in proptest::collection::vec(any::<bool>(), 8),
    ) {
        let inst = instance(ranks, 1);
        let mut p = problem(&["A", "B", "C", "T"]);
        let s = p.derive_les(&ses("A", "B", "C"), Direction::Into, "T", 2).unwrap();
        let slots = p.sequences()[s].slots.clone();
        for (k, &v) in slots.iter().enumerate() {
            if known[k] {
                p.assert_slot(v, Relop::Eq, &Affine::constant(inst.dims[k]), "known".into(), &[]).unwrap();
            }
        }
        let once = p.propagate().unwrap();
        let twice = once.propagate().unwrap();
        for v in 0..once.num_vars() {
            let (a, b, _, _) = once.bounds(v);
            let (c, d, _, _) = twice.bounds(v);
            prop_assert!(c >= a);
            let narrower = match (b, d) {
                (Some(b), Some(d)) => d <= b,
                (None, _) => true,
                (Some(_), None) => false,
            };
            prop_assert!(narrower);
            prop_assert_eq!((a, b), (c, d));
        }
    }
}
