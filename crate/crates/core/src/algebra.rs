//! Finite-dimensional graded algebras given by structure constants, and the
//! zigzag algebra of a graph.
//!
//! Conventions: modules are right modules and paths compose left to right, so
//! a basis element `x` with source `v` and target `w` satisfies
//! `e_v · x · e_w = x`. A morphism `P_w -> P_v` of projectives is left
//! multiplication by an element of `e_v · A · e_w`, and composition of
//! morphisms is the algebra product taken in the same order as composition
//! (`g ∘ f` is `g · f`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

/// A linear combination of basis elements, sorted by basis index, with no zero terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem<K> {
    terms: Vec<(usize, K)>,
}

impl<K: Field> AlgElem<K> {
    pub fn zero() -> Self {
        AlgElem { terms: Vec::new() }
    }

    pub fn basis(i: usize) -> Self {
        AlgElem { terms: vec![(i, K::one())] }
    }

    pub fn term(i: usize, c: K) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            AlgElem { terms: vec![(i, c)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, K)>) -> Self {
        let mut acc: BTreeMap<usize, K> = BTreeMap::new();
        for (i, c) in terms {
            let cur = acc.remove(&i).unwrap_or_else(K::zero);
            let sum = cur + c;
            if !sum.is_zero() {
                acc.insert(i, sum);
            }
        }
        AlgElem { terms: acc.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(usize, K)] {
        &self.terms
    }

    pub fn coeff(&self, i: usize) -> K {
        self.terms
            .binary_search_by_key(&i, |(j, _)| *j)
            .map(|p| self.terms[p].1.clone())
            .unwrap_or_else(|_| K::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            match (self.terms.get(i), other.terms.get(j)) {
                (Some((a, x)), Some((b, y))) if a == b => {
                    let s = x.clone() + y.clone();
                    if !s.is_zero() {
                        out.push((*a, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((a, x)), Some((b, _))) if a < b => {
                    out.push((*a, x.clone()));
                    i += 1;
                }
                (Some(_), Some((b, y))) => {
                    out.push((*b, y.clone()));
                    j += 1;
                }
                (Some((a, x)), None) => {
                    out.push((*a, x.clone()));
                    i += 1;
                }
                (None, Some((b, y))) => {
                    out.push((*b, y.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        AlgElem { terms: out }
    }

    pub fn neg(&self) -> Self {
        AlgElem { terms: self.terms.iter().map(|(i, c)| (*i, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgElem { terms: self.terms.iter().map(|(i, x)| (*i, x.clone() * c.clone())).collect() }
    }
}

impl<K: fmt::Debug> fmt::Debug for AlgElem<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(i, c)| format!("{c:?}*b{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite-dimensional graded algebra over `K` with a distinguished
/// Calabi–Yau dimension.
#[derive(Clone, Debug)]
pub struct AlgebraSpec<K> {
    field: FieldSpec,
    cy_dimension: i64,
    vertices: Vec<String>,
    basis: Vec<BasisElement>,
    products: HashMap<(usize, usize), AlgElem<K>>,
    idempotents: Vec<Option<usize>>,
    by_path: HashMap<(usize, usize, i64), Vec<usize>>,
    max_degree: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("Calabi-Yau dimension must be at least 2, got {0}")]
    DimensionTooSmall(i64),
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("edge {from}-{to}: arrow degrees {forward} + {backward} must sum to d = {d}")]
    DegreeSum { from: String, to: String, forward: i64, backward: i64, d: i64 },
    #[error("arrow degrees must be at least 1 (edge {from}-{to})")]
    NonPositiveArrow { from: String, to: String },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("field mismatch: algebra is over {declared}, scalars are {actual}")]
    FieldMismatch { declared: FieldSpec, actual: FieldSpec },
}

impl<K: Field> AlgebraSpec<K> {
    /// Assembles an algebra from raw data without checking the axioms; see [`validate`].
    /// Products not listed are zero. The idempotent of vertex `v` is taken to be the
    /// first degree-0 basis element with source and target `v`.
    pub fn from_parts(
        field: FieldSpec,
        cy_dimension: i64,
        vertices: Vec<String>,
        basis: Vec<BasisElement>,
        products: HashMap<(usize, usize), AlgElem<K>>,
    ) -> Result<Self, AlgebraError> {
        if !field.matches::<K>() {
            return Err(AlgebraError::FieldMismatch { declared: field, actual: FieldSpec::of::<K>() });
        }
        let mut idempotents = vec![None; vertices.len()];
        let mut by_path: HashMap<(usize, usize, i64), Vec<usize>> = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.degree == 0 && b.source == b.target && idempotents[b.source].is_none() {
                idempotents[b.source] = Some(i);
            }
            by_path.entry((b.source, b.target, b.degree)).or_default().push(i);
        }
        let max_degree = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        let products = products.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(AlgebraSpec { field, cy_dimension, vertices, basis, products, idempotents, by_path, max_degree })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn cy_dimension(&self) -> i64 {
        self.cy_dimension
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn idempotent(&self, v: usize) -> Option<usize> {
        self.idempotents[v]
    }

    /// Basis elements with the given source, target and degree.
    pub fn paths(&self, source: usize, target: usize, degree: i64) -> &[usize] {
        self.by_path.get(&(source, target, degree)).map_or(&[], Vec::as_slice)
    }

    /// Product of two basis elements.
    pub fn basis_product(&self, a: usize, b: usize) -> Option<&AlgElem<K>> {
        self.products.get(&(a, b))
    }

    pub fn mul(&self, x: &AlgElem<K>, y: &AlgElem<K>) -> AlgElem<K> {
        let mut terms = Vec::new();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                if let Some(p) = self.products.get(&(*a, *b)) {
                    let c = ca.clone() * cb.clone();
                    terms.extend(p.terms().iter().map(|(k, ck)| (*k, ck.clone() * c.clone())));
                }
            }
        }
        AlgElem::from_terms(terms)
    }

    /// Whether every term of `x` has the given source, target and degree.
    pub fn is_homogeneous(&self, x: &AlgElem<K>, source: usize, target: usize, degree: i64) -> bool {
        x.terms().iter().all(|(i, _)| {
            let b = &self.basis[*i];
            b.source == source && b.target == target && b.degree == degree
        })
    }

    /// Coefficient of the vertex idempotent `e_v` in `x`.
    pub fn unit_coefficient(&self, x: &AlgElem<K>, v: usize) -> K {
        match self.idempotents[v] {
            Some(i) => x.coeff(i),
            None => K::zero(),
        }
    }

    pub fn format_elem(&self, x: &AlgElem<K>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms()
            .iter()
            .map(|(i, c)| {
                if c.is_one() {
                    self.basis[*i].name.clone()
                } else {
                    format!("{c}*{}", self.basis[*i].name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// One edge of a graph with the degrees of its two oriented arrows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub a: String,
    pub b: String,
    /// Degree of the arrow from `a` to `b`.
    pub degree_ab: i64,
    /// Degree of the arrow from `b` to `a`.
    pub degree_ba: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<GraphEdge>,
}

impl GraphSpec {
    /// The path graph `1 - 2 - ... - n` with arrow degrees split as evenly as `d` allows
    /// (`floor(d/2)` forward, `ceil(d/2)` backward).
    pub fn a_n(n: usize, d: i64) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let edges = (1..n)
            .map(|i| GraphEdge {
                a: i.to_string(),
                b: (i + 1).to_string(),
                degree_ab: d / 2,
                degree_ba: d - d / 2,
            })
            .collect();
        GraphSpec { vertices, edges }
    }
}

/// Builds the zigzag algebra of `graph` with loops in degree `d`.
///
/// Basis: idempotents `e_v`, one arrow per oriented edge, and a loop `l_v` at every
/// non-isolated vertex. Relations: any two-cycle at `v` equals `l_v`, paths of length two
/// that do not return are zero, and loops annihilate everything of positive degree.
pub fn build_zigzag<K: Field>(graph: &GraphSpec, field: FieldSpec, d: i64) -> Result<AlgebraSpec<K>, AlgebraError> {
    if graph.vertices.is_empty() {
        return Err(AlgebraError::EmptyGraph);
    }
    if d < 2 {
        return Err(AlgebraError::DimensionTooSmall(d));
    }
    let n = graph.vertices.len();
    let index = |name: &str| {
        graph.vertices.iter().position(|v| v == name).ok_or_else(|| AlgebraError::UnknownVertex(name.to_string()))
    };
    let mut basis: Vec<BasisElement> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| BasisElement { name: format!("e{v}"), source: i, target: i, degree: 0 })
        .collect();

    let mut seen = std::collections::HashSet::new();
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new(); // (from, to, basis index)
    for e in &graph.edges {
        let (a, b) = (index(&e.a)?, index(&e.b)?);
        if a == b {
            return Err(AlgebraError::SelfLoop(e.a.clone()));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(AlgebraError::DuplicateEdge(e.a.clone(), e.b.clone()));
        }
        if e.degree_ab < 1 || e.degree_ba < 1 {
            return Err(AlgebraError::NonPositiveArrow { from: e.a.clone(), to: e.b.clone() });
        }
        if e.degree_ab + e.degree_ba != d {
            return Err(AlgebraError::DegreeSum {
                from: e.a.clone(),
                to: e.b.clone(),
                forward: e.degree_ab,
                backward: e.degree_ba,
                d,
            });
        }
        for (s, t, deg) in [(a, b, e.degree_ab), (b, a, e.degree_ba)] {
            arrows.push((s, t, basis.len()));
            basis.push(BasisElement {
                name: format!("a{}_{}", graph.vertices[s], graph.vertices[t]),
                source: s,
                target: t,
                degree: deg,
            });
        }
    }

    let mut loops = vec![None; n];
    for v in 0..n {
        if arrows.iter().any(|&(s, _, _)| s == v) {
            loops[v] = Some(basis.len());
            basis.push(BasisElement { name: format!("l{}", graph.vertices[v]), source: v, target: v, degree: d });
        }
    }

    let mut products: HashMap<(usize, usize), AlgElem<K>> = HashMap::new();
    for (i, b) in basis.iter().enumerate() {
        products.insert((b.source, i), AlgElem::basis(i));
        products.insert((i, b.target), AlgElem::basis(i));
    }
    for &(s, t, x) in &arrows {
        for &(s2, t2, y) in &arrows {
            if t == s2 && t2 == s {
                products.insert((x, y), AlgElem::basis(loops[s].expect("vertex with an arrow has a loop")));
            }
        }
    }

    AlgebraSpec::from_parts(field, d, graph.vertices.clone(), basis, products)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    DimensionTooSmall { d: i64 },
    NegativeDegree { element: String },
    MissingIdempotent { vertex: String },
    /// A degree-0 basis element other than a vertex idempotent.
    ExtraDegreeZero { element: String },
    IdempotentAxiom { left: String, right: String },
    Grading { left: String, right: String, term: String },
    Composability { left: String, right: String },
    Associativity { a: String, b: String, c: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionTooSmall { d } => write!(f, "Calabi-Yau dimension {d} < 2"),
            Violation::NegativeDegree { element } => write!(f, "negative degree on {element}"),
            Violation::MissingIdempotent { vertex } => write!(f, "vertex {vertex} has no idempotent"),
            Violation::ExtraDegreeZero { element } => {
                write!(f, "degree-0 element {element} is not a vertex idempotent")
            }
            Violation::IdempotentAxiom { left, right } => {
                write!(f, "idempotent axiom fails on {left}*{right}")
            }
            Violation::Grading { left, right, term } => {
                write!(f, "grading: {left}*{right} contains {term} of the wrong degree")
            }
            Violation::Composability { left, right } => {
                write!(f, "composability: {left}*{right} is nonzero or has mismatched endpoints")
            }
            Violation::Associativity { a, b, c } => write!(f, "associativity fails on ({a}, {b}, {c})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the graded-algebra axioms. Violations are data: the report is empty exactly
/// when the structure constants describe a valid graded algebra.
pub fn validate<K: Field>(a: &AlgebraSpec<K>) -> ValidationReport {
    let mut violations = Vec::new();
    let name = |i: usize| a.basis[i].name.clone();
    if a.cy_dimension < 2 {
        violations.push(Violation::DimensionTooSmall { d: a.cy_dimension });
    }
    for (i, b) in a.basis.iter().enumerate() {
        if b.degree < 0 {
            violations.push(Violation::NegativeDegree { element: name(i) });
        }
        if b.degree == 0 && a.idempotents[b.source] != Some(i) {
            violations.push(Violation::ExtraDegreeZero { element: name(i) });
        }
    }
    for (v, idem) in a.idempotents.iter().enumerate() {
        let Some(e) = *idem else {
            violations.push(Violation::MissingIdempotent { vertex: a.vertices[v].clone() });
            continue;
        };
        for (i, b) in a.basis.iter().enumerate() {
            let left = a.mul(&AlgElem::basis(e), &AlgElem::basis(i));
            let want_left = if b.source == v { AlgElem::basis(i) } else { AlgElem::zero() };
            if left != want_left {
                violations.push(Violation::IdempotentAxiom { left: name(e), right: name(i) });
            }
            let right = a.mul(&AlgElem::basis(i), &AlgElem::basis(e));
            let want_right = if b.target == v { AlgElem::basis(i) } else { AlgElem::zero() };
            if right != want_right {
                violations.push(Violation::IdempotentAxiom { left: name(i), right: name(e) });
            }
        }
    }
    let n = a.dim();
    for x in 0..n {
        for y in 0..n {
            let Some(p) = a.products.get(&(x, y)) else { continue };
            let (bx, by) = (&a.basis[x], &a.basis[y]);
            if bx.target != by.source {
                violations.push(Violation::Composability { left: name(x), right: name(y) });
                continue;
            }
            for (t, _) in p.terms() {
                let bt = &a.basis[*t];
                if bt.degree != bx.degree + by.degree {
                    violations.push(Violation::Grading { left: name(x), right: name(y), term: name(*t) });
                } else if bt.source != bx.source || bt.target != by.target {
                    violations.push(Violation::Composability { left: name(x), right: name(y) });
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (ex, ey, ez) = (AlgElem::basis(x), AlgElem::basis(y), AlgElem::basis(z));
                let lhs = a.mul(&a.mul(&ex, &ey), &ez);
                let rhs = a.mul(&ex, &a.mul(&ey, &ez));
                if lhs != rhs {
                    violations.push(Violation::Associativity { a: name(x), b: name(y), c: name(z) });
                }
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    /// Independent count of zigzag basis elements between two vertices in a given
    /// degree: idempotent, arrow, or loop.
    fn count_paths(g: &GraphSpec, d: i64, s: usize, t: usize, deg: i64) -> usize {
        let v = &g.vertices;
        let isolated = |x: usize| !g.edges.iter().any(|e| e.a == v[x] || e.b == v[x]);
        let mut n = 0;
        if s == t && deg == 0 {
            n += 1;
        }
        if s == t && deg == d && !isolated(s) {
            n += 1;
        }
        for e in &g.edges {
            if e.a == v[s] && e.b == v[t] && e.degree_ab == deg {
                n += 1;
            }
            if e.b == v[s] && e.a == v[t] && e.degree_ba == deg {
                n += 1;
            }
        }
        n
    }

    fn check_against_oracle(g: &GraphSpec, d: i64) {
        let a = build_zigzag::<Q>(g, FieldSpec::Rationals, d).unwrap();
        let mut total = 0;
        for s in 0..g.vertices.len() {
            for t in 0..g.vertices.len() {
                for deg in 0..=d {
                    let want = count_paths(g, d, s, t, deg);
                    assert_eq!(a.paths(s, t, deg).len(), want, "paths {s}->{t} degree {deg}");
                    total += want;
                }
            }
        }
        assert_eq!(a.dim(), total);
    }

    #[test]
    fn a2_dimension_matches_path_count() {
        let g = GraphSpec::a_n(2, 2);
        check_against_oracle(&g, 2);
        let a = build_zigzag::<Q>(&g, FieldSpec::Rationals, 2).unwrap();
        // e1, e2, a1_2, a2_1, l1, l2
        assert_eq!(a.dim(), 6);
        let e1ze1: usize = (0..=2).map(|deg| a.paths(0, 0, deg).len()).sum();
        assert_eq!(e1ze1, 2);
    }

    #[test]
    fn single_vertex_is_one_dimensional() {
        let g = GraphSpec { vertices: vec!["1".into()], edges: vec![] };
        check_against_oracle(&g, 2);
        let a = build_zigzag::<Q>(&g, FieldSpec::Rationals, 2).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(validate(&a).is_valid());
    }

    #[test]
    fn odd_dimension_asymmetric_degrees() {
        let g = GraphSpec {
            vertices: vec!["1".into(), "2".into()],
            edges: vec![GraphEdge { a: "1".into(), b: "2".into(), degree_ab: 1, degree_ba: 2 }],
        };
        check_against_oracle(&g, 3);
        let a = build_zigzag::<Q>(&g, FieldSpec::Rationals, 3).unwrap();
        let e1ze2: usize = (0..=3).map(|deg| a.paths(0, 1, deg).len()).sum();
        assert_eq!(e1ze2, 1);
        assert_eq!(a.paths(0, 0, 3).len(), 1);
        assert!(validate(&a).is_valid());
    }

    #[test]
    fn larger_graphs_match_oracle_and_validate() {
        for n in 1..=5 {
            for d in 2..=4 {
                let g = GraphSpec::a_n(n, d);
                check_against_oracle(&g, d);
                let a = build_zigzag::<Q>(&g, FieldSpec::Rationals, d).unwrap();
                assert!(validate(&a).is_valid(), "A_{n}, d={d}: {:?}", validate(&a));
            }
        }
        // a star has a vertex with three neighbours
        let g = GraphSpec {
            vertices: vec!["c".into(), "x".into(), "y".into(), "z".into()],
            edges: ["x", "y", "z"]
                .iter()
                .map(|w| GraphEdge { a: "c".into(), b: (*w).into(), degree_ab: 1, degree_ba: 1 })
                .collect(),
        };
        check_against_oracle(&g, 2);
        assert!(validate(&build_zigzag::<Q>(&g, FieldSpec::Rationals, 2).unwrap()).is_valid());
    }

    #[test]
    fn builder_rejects_bad_graphs() {
        let mut g = GraphSpec::a_n(2, 2);
        g.edges[0].degree_ab = 2;
        assert!(matches!(build_zigzag::<Q>(&g, FieldSpec::Rationals, 2), Err(AlgebraError::DegreeSum { .. })));
        let empty = GraphSpec { vertices: vec![], edges: vec![] };
        assert_eq!(build_zigzag::<Q>(&empty, FieldSpec::Rationals, 2).unwrap_err(), AlgebraError::EmptyGraph);
        assert_eq!(
            build_zigzag::<Q>(&GraphSpec::a_n(2, 2), FieldSpec::Rationals, 1).unwrap_err(),
            AlgebraError::DimensionTooSmall(1)
        );
    }

    fn two_vertex_parts() -> (Vec<String>, Vec<BasisElement>, HashMap<(usize, usize), AlgElem<Q>>) {
        let a = build_zigzag::<Q>(&GraphSpec::a_n(2, 2), FieldSpec::Rationals, 2).unwrap();
        (a.vertices.clone(), a.basis.clone(), a.products.clone())
    }

    #[test]
    fn planted_grading_defect_is_named() {
        let (v, mut basis, products) = two_vertex_parts();
        // claim the loop at vertex 1 has degree 3 while a1_2 * a2_1 still equals it
        basis[4].degree = 3;
        let a = AlgebraSpec::from_parts(FieldSpec::Rationals, 2, v, basis, products).unwrap();
        let report = validate(&a);
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::Grading { left, right, term } if left == "a1_2" && right == "a2_1" && term == "l1")));
    }

    #[test]
    fn planted_associativity_defect_cites_triple() {
        let (v, basis, mut products) = two_vertex_parts();
        // make l1 * e1 vanish: (a1_2 a2_1) e1 = 0 but a1_2 (a2_1 e1) = l1
        products.remove(&(4, 0));
        let a = AlgebraSpec::from_parts(FieldSpec::Rationals, 2, v, basis, products).unwrap();
        let report = validate(&a);
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::Associativity { a, b, c } if a == "a1_2" && b == "a2_1" && c == "e1")));
    }
}
