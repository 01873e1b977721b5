use std::collections::BTreeMap;

use proptest::prelude::*;
use twistlab::algebra::{GraphEdge, GraphSpec};
use twistlab::field::FieldSpec;
use twistlab::ledger::parse_statement;
use twistlab_cli::scenario::{parse_scenario, Expect, GraphDecl, Item, LedgerBlock, MapDecl, MapSpec, ObjExpr, Scenario, Verdict};

fn name() -> impl Strategy<Value = String> {
    prop_oneof![Just("P1".to_string()), Just("P2".to_string()), "[A-OR-Z][a-z0-9_]{0,3}".prop_map(String::from)]
}

fn expr() -> impl Strategy<Value = ObjExpr> {
    let leaf = prop_oneof![
        name().prop_map(ObjExpr::Name),
        "[1-9]".prop_map(|v: String| ObjExpr::Proj(v)),
        Just(ObjExpr::Zero),
        name().prop_map(ObjExpr::Cone),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), -5i64..5).prop_map(|(x, n)| ObjExpr::Shift(Box::new(x), n)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|xs| {
                let flat = xs.into_iter().flat_map(|x| match x {
                    ObjExpr::Sum(ys) => ys,
                    other => vec![other],
                });
                ObjExpr::Sum(flat.collect())
            }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ObjExpr::Twist(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| ObjExpr::Untwist(Box::new(a), Box::new(b))),
        ]
    })
}

fn expect() -> impl Strategy<Value = Expect> {
    let table = prop::collection::btree_map(-4i64..6, 1usize..4, 0..3);
    prop_oneof![
        (expr(), any::<bool>()).prop_map(|(x, b)| Expect::Spherical(x, b)),
        (expr(), expr(), table).prop_map(|(x, y, t)| Expect::Ext(x, y, t)),
        (expr(), expr(), any::<bool>()).prop_map(|(x, y, b)| Expect::Orthogonal(x, y, b)),
        (expr(), expr(), any::<bool>()).prop_map(|(x, y, b)| Expect::Iso(x, y, b)),
        (expr(), expr(), prop_oneof![Just(Verdict::Orthogonal), Just(Verdict::Equal), Just(Verdict::NotCommute)])
            .prop_map(|(x, y, v)| Expect::Commute(x, y, v)),
        (expr(), expr(), any::<bool>()).prop_map(|(x, y, b)| Expect::Member(x, y, b)),
        (expr(), expr(), 0usize..9).prop_map(|(x, y, n)| Expect::DE(x, y, n)),
        (name(), any::<bool>()).prop_map(|(c, b)| Expect::StronglySpherical(c, b)),
        (expr(), 0usize..9).prop_map(|(x, n)| Expect::Summands(x, n)),
        (expr(), any::<bool>()).prop_map(|(x, b)| Expect::Recover(x, b)),
        (expr(), prop::collection::vec(-3i64..4, 0..4)).prop_map(|(x, v)| Expect::Class(x, v)),
    ]
}

fn map_spec() -> impl Strategy<Value = MapSpec> {
    prop_oneof![
        (0usize..4).prop_map(MapSpec::Class),
        prop::collection::vec(prop_oneof![Just("1".to_string()), Just("-2".to_string()), Just("3/4".to_string())], 1..4)
            .prop_map(MapSpec::Combo),
        Just(MapSpec::Random),
        Just(MapSpec::Zero),
        Just(MapSpec::Identity),
    ]
}

fn graph() -> impl Strategy<Value = GraphDecl> {
    prop_oneof![
        (1usize..6).prop_map(GraphDecl::Path),
        (prop::collection::vec("[a-z][0-9]?", 1..4), prop::collection::vec((0usize..3, 0usize..3, 0i64..3, 0i64..3), 0..3))
            .prop_map(|(vertices, es)| {
                let n = vertices.len();
                let edges = es
                    .into_iter()
                    .map(|(a, b, x, y)| GraphEdge { a: vertices[a % n].clone(), b: vertices[b % n].clone(), degree_ab: x, degree_ba: y })
                    .collect();
                GraphDecl::Explicit(GraphSpec { vertices, edges })
            }),
    ]
}

const LEDGER_LINES: [&str; 6] = [
    "params r d",
    "entity F EH Ox",
    "ses S: F -> EH -> Ox",
    "fact ext(EH, Ox, i>0) = 0 source \"rigid\"",
    "map boundary(hom(F,F) -> ext1(Ox,F)) nonzero",
    "expect hom(F,F) = 1",
];

fn item() -> impl Strategy<Value = Item> {
    prop_oneof![
        prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::prime(101).unwrap()), Just(FieldSpec::prime(65521).unwrap())]
            .prop_map(Item::Field),
        (2i64..6).prop_map(Item::Cy),
        Just(Item::Algebra("zigzag".into())),
        graph().prop_map(Item::Graph),
        (name(), expr()).prop_map(|(name, expr)| Item::Object { name, expr }),
        (name(), expr(), expr(), map_spec()).prop_map(|(name, source, target, spec)| Item::Map(MapDecl { name, source, target, spec })),
        (name(), prop::collection::vec(expr(), 1..4)).prop_map(|(name, members)| Item::Collection { name, members }),
        expect().prop_map(Item::Expect),
        prop::collection::vec(0usize..LEDGER_LINES.len(), 0..4).prop_map(|ix| {
            let statements = ix.iter().map(|&i| parse_statement(LEDGER_LINES[i], 1, 0).unwrap()).collect();
            Item::Ledger(LedgerBlock { statements, lines: vec![0; ix.len()] })
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_scenarios_reparse_equal(items in prop::collection::vec(item(), 0..10)) {
        let s = Scenario { lines: vec![0; items.len()], items };
        let text = s.to_string();
        let back = parse_scenario(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &s, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn tables_drop_zero_entries() {
    let s = parse_scenario("expect ext P1, P2 = {0:0, 1:2}\n").unwrap();
    let Item::Expect(Expect::Ext(_, _, t)) = &s.items[0] else { panic!() };
    assert_eq!(t, &BTreeMap::from([(1, 2)]));
}
