//! Evaluates a parsed scenario over a concrete field: builds the algebra,
//! resolves names and computes `expect` lines.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twistlab::algebra::{build_zigzag, AlgebraSpec, GraphSpec};
use twistlab::analysis::{commute_classify, d_e, is_spherical, is_strongly_spherical, thick_membership, CommuteVerdict};
use twistlab::complex::{cone, direct_sum, projective, ChainMap, TwistedComplex};
use twistlab::config::Config;
use twistlab::decompose::{recover_collection, split_summands};
use twistlab::error::TwistError;
use twistlab::field::{Field, FieldSpec};
use twistlab::generate::random_closed_map;
use twistlab::hom::{ext_table, HomComplex};
use twistlab::ktheory::{class_of, LatticeModel};
use twistlab::minimal::is_isomorphic;
use twistlab::twist::{inverse_twist, twist};

use crate::scenario::{format_table, Expect, GraphDecl, Item, MapDecl, MapSpec, ObjExpr, ParseError, Scenario, Verdict};

/// Prime characteristics with a compiled field type.
pub const PRIMES: [u64; 10] = [101, 103, 107, 109, 113, 127, 10007, 65521, 1000003, 2147483647];

/// Runs `$body` with `$k` bound to the field type of `$spec`, or evaluates
/// `$unsupported` for primes without a compiled type.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $k:ident => $body:expr, $unsupported:expr) => {{
        use twistlab::field::{FieldSpec, Fp, Rational};
        match $spec {
            FieldSpec::Rationals => {
                type $k = Rational;
                $body
            }
            FieldSpec::PrimeField { characteristic } => match characteristic {
                101 => {
                    type $k = Fp<101>;
                    $body
                }
                103 => {
                    type $k = Fp<103>;
                    $body
                }
                107 => {
                    type $k = Fp<107>;
                    $body
                }
                109 => {
                    type $k = Fp<109>;
                    $body
                }
                113 => {
                    type $k = Fp<113>;
                    $body
                }
                127 => {
                    type $k = Fp<127>;
                    $body
                }
                10007 => {
                    type $k = Fp<10007>;
                    $body
                }
                65521 => {
                    type $k = Fp<65521>;
                    $body
                }
                1000003 => {
                    type $k = Fp<1000003>;
                    $body
                }
                2147483647 => {
                    type $k = Fp<2147483647>;
                    $body
                }
                _ => $unsupported,
            },
        }
    }};
}

/// Column of the first whole-word occurrence of `needle` in `text`, 1-based.
pub fn column_of(text: &str, needle: &str) -> usize {
    let bytes = text.as_bytes();
    let word = |c: u8| c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' || c == b'.';
    let mut from = 0;
    while let Some(i) = text[from..].find(needle).map(|i| i + from) {
        let end = i + needle.len();
        let before = i == 0 || !word(bytes[i - 1]);
        let after = end >= bytes.len() || !word(bytes[end]);
        if before && after {
            return text[..i].chars().count() + 1;
        }
        from = i + 1;
    }
    1
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectResult {
    pub line: usize,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

pub struct Model<K> {
    pub alg: Arc<AlgebraSpec<K>>,
    pub d: i64,
    pub cfg: Config,
    /// Named objects in declaration order, projectives `P<v>` first.
    pub objects: Vec<(String, TwistedComplex<K>)>,
    pub maps: HashMap<String, ChainMap<K>>,
    pub collections: Vec<(String, Vec<TwistedComplex<K>>)>,
    source: Vec<String>,
    rng: ChaCha8Rng,
}

impl<K: Field> Model<K> {
    fn err_at(&self, line: usize, needle: &str, msg: impl Into<String>) -> ParseError {
        let text = self.source.get(line.wrapping_sub(1)).map(String::as_str).unwrap_or("");
        ParseError { line, col: column_of(text, needle), msg: msg.into() }
    }

    fn twist_err(&self, line: usize, needle: &str, e: TwistError) -> ParseError {
        self.err_at(line, needle, e.to_string())
    }

    pub fn object(&self, name: &str) -> Option<&TwistedComplex<K>> {
        self.objects.iter().rev().find(|(n, _)| n == name).map(|(_, x)| x)
    }

    pub fn collection(&self, name: &str) -> Option<&[TwistedComplex<K>]> {
        self.collections.iter().rev().find(|(n, _)| n == name).map(|(_, x)| x.as_slice())
    }

    pub fn projectives(&self) -> Vec<TwistedComplex<K>> {
        (0..self.alg.vertices().len()).map(|v| projective(&self.alg, v).expect("vertex in range")).collect()
    }

    pub fn eval(&self, line: usize, e: &ObjExpr) -> Result<TwistedComplex<K>, ParseError> {
        let x = match e {
            ObjExpr::Name(n) => self.object(n).cloned().ok_or_else(|| self.err_at(line, n, format!("unknown object `{n}`")))?,
            ObjExpr::Proj(v) => {
                let i = self.alg.vertex_index(v).ok_or_else(|| self.err_at(line, v, format!("unknown vertex `{v}`")))?;
                projective(&self.alg, i).map_err(|e| self.twist_err(line, v, e))?
            }
            ObjExpr::Zero => TwistedComplex::zero(self.alg.clone()),
            ObjExpr::Shift(x, n) => self.eval(line, x)?.shift(*n),
            ObjExpr::Sum(xs) => {
                let parts = xs.iter().map(|x| self.eval(line, x)).collect::<Result<Vec<_>, _>>()?;
                direct_sum(&self.alg, &parts).map_err(|e| self.twist_err(line, "+", e))?
            }
            ObjExpr::Cone(m) => {
                let f = self.maps.get(m).ok_or_else(|| self.err_at(line, m, format!("unknown map `{m}`")))?;
                cone(f).map_err(|e| self.twist_err(line, m, e))?
            }
            ObjExpr::Twist(a, b) => {
                let (a, b) = (self.eval(line, a)?, self.eval(line, b)?);
                twist(&a, &b).map_err(|e| self.twist_err(line, "twist", e))?
            }
            ObjExpr::Untwist(a, b) => {
                let (a, b) = (self.eval(line, a)?, self.eval(line, b)?);
                inverse_twist(&a, &b).map_err(|e| self.twist_err(line, "untwist", e))?
            }
        };
        x.check_window(self.cfg.max_shift).map_err(|err| self.err_at(line, &expr_head(e), err.to_string()))?;
        Ok(x)
    }

    fn build_map(&mut self, line: usize, m: &MapDecl) -> Result<ChainMap<K>, ParseError> {
        let src = self.eval(line, &m.source)?;
        let tgt = self.eval(line, &m.target)?;
        let head = e_needle(m.spec.to_string());
        let f = match &m.spec {
            MapSpec::Zero => ChainMap::zero(src, tgt, 0),
            MapSpec::Identity => {
                if src != tgt {
                    return Err(self.err_at(line, "identity", "identity needs equal source and target"));
                }
                ChainMap::identity(&src)
            }
            MapSpec::Random => random_closed_map(&src, &tgt, &mut self.rng).map_err(|e| self.twist_err(line, "random", e))?,
            MapSpec::Class(_) | MapSpec::Combo(_) => {
                let hc = HomComplex::new(&src, &tgt).map_err(|e| self.twist_err(line, &head, e))?;
                let classes = hc.homology_basis(0);
                let coeffs: Vec<K> = match &m.spec {
                    MapSpec::Class(i) => {
                        if *i >= classes.len() {
                            let e = TwistError::NoSuchClass { index: *i, dim: classes.len() };
                            return Err(self.twist_err(line, "class", e));
                        }
                        (0..classes.len()).map(|j| if j == *i { K::one() } else { K::zero() }).collect()
                    }
                    MapSpec::Combo(cs) => {
                        if cs.len() != classes.len() {
                            let msg = format!("combo needs {} coefficients, got {}", classes.len(), cs.len());
                            return Err(self.err_at(line, "combo", msg));
                        }
                        cs.iter()
                            .map(|c| K::parse(c).ok_or_else(|| self.err_at(line, c, format!("bad coefficient `{c}`"))))
                            .collect::<Result<_, _>>()?
                    }
                    _ => unreachable!(),
                };
                let mut coords = vec![K::zero(); hc.dim(0)];
                for (c, v) in coeffs.iter().zip(&classes) {
                    for (acc, x) in coords.iter_mut().zip(v) {
                        *acc = acc.clone() + c.clone() * x.clone();
                    }
                }
                hc.to_map(0, &coords)
            }
        };
        Ok(f)
    }

    /// Builds every named object, map and collection in file order.
    pub fn build(scenario: &Scenario, source: &str, cfg: Config) -> Result<Self, ParseError> {
        let source: Vec<String> = source.lines().map(str::to_string).collect();
        let mut d = None;
        let mut graph = None;
        for (line, item) in scenario.with_lines() {
            match item {
                Item::Cy(n) => {
                    if d.is_some_and(|m| m != *n) {
                        let text = source.get(line - 1).map(String::as_str).unwrap_or("");
                        return Err(ParseError { line, col: column_of(text, &n.to_string()), msg: "conflicting cy dimension".into() });
                    }
                    d = Some(*n);
                }
                Item::Graph(g) => {
                    if graph.is_some() {
                        return Err(ParseError { line, col: 1, msg: "second graph declaration".into() });
                    }
                    graph = Some((line, g.clone()));
                }
                _ => {}
            }
        }
        let d = d.unwrap_or(2);
        let Some((gline, graph)) = graph else {
            return Err(ParseError { line: 1, col: 1, msg: "missing graph declaration".into() });
        };
        let spec = match graph {
            GraphDecl::Path(n) => GraphSpec::a_n(n, d),
            GraphDecl::Explicit(g) => g,
        };
        let alg = build_zigzag::<K>(&spec, scenario.field(), d).map_err(|e| ParseError { line: gline, col: 1, msg: e.to_string() })?;
        let alg = Arc::new(alg);
        let mut model = Model {
            objects: Vec::new(),
            maps: HashMap::new(),
            collections: Vec::new(),
            d,
            cfg,
            source,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            alg,
        };
        for (v, name) in model.alg.vertices().iter().enumerate() {
            let p = projective(&model.alg, v).expect("vertex in range");
            model.objects.push((format!("P{name}"), p));
        }
        for (line, item) in scenario.with_lines() {
            match item {
                Item::Object { name, expr } => {
                    let x = model.eval(line, expr)?;
                    model.objects.push((name.clone(), x));
                }
                Item::Map(m) => {
                    if model.maps.contains_key(&m.name) {
                        return Err(model.err_at(line, &m.name, format!("map `{}` declared twice", m.name)));
                    }
                    let f = model.build_map(line, m)?;
                    model.maps.insert(m.name.clone(), f);
                }
                Item::Collection { name, members } => {
                    let xs = members.iter().map(|x| model.eval(line, x)).collect::<Result<Vec<_>, _>>()?;
                    model.collections.push((name.clone(), xs));
                }
                _ => {}
            }
        }
        Ok(model)
    }

    /// Evaluates every `expect` line. Computation errors count as failures.
    pub fn check_expectations(&self, scenario: &Scenario) -> Result<Vec<ExpectResult>, ParseError> {
        let mut out = Vec::new();
        for (line, item) in scenario.with_lines() {
            let Item::Expect(e) = item else { continue };
            let (expected, actual) = self.expectation(line, e)?;
            let actual = match actual {
                Ok(a) => a,
                Err(err) => format!("error: {err}"),
            };
            out.push(ExpectResult { line, check: e.to_string(), ok: expected == actual, expected, actual });
        }
        Ok(out)
    }

    /// `(expected, actual)` rendered the same way so that equality decides the check.
    fn expectation(&self, line: usize, e: &Expect) -> Result<(String, Result<String, TwistError>), ParseError> {
        let ev = |x: &ObjExpr| self.eval(line, x);
        let cfg = &self.cfg;
        let d = self.d;
        Ok(match e {
            Expect::Spherical(x, b) => (b.to_string(), is_spherical(&ev(x)?, d).map(|v| v.to_string())),
            Expect::Ext(x, y, t) => (format_table(t), ext_table(&ev(x)?, &ev(y)?).map(|t| format_table(t.entries()))),
            Expect::Orthogonal(x, y, b) => {
                let (x, y) = (ev(x)?, ev(y)?);
                (b.to_string(), twistlab::analysis::is_orthogonal(&x, &y).map(|v| v.to_string()))
            }
            Expect::Iso(x, y, b) => (b.to_string(), is_isomorphic(&ev(x)?, &ev(y)?, cfg.seed).map(|r| r.isomorphic.to_string())),
            Expect::Commute(x, y, v) => {
                let gens = self.projectives();
                let r = commute_classify(&ev(x)?, &ev(y)?, &gens, d, cfg);
                (v.name().to_string(), r.map(|r| verdict_of(&r.verdict).name().to_string()))
            }
            Expect::Member(x, y, b) => {
                (b.to_string(), thick_membership(&ev(x)?, &ev(y)?, d, cfg).map(|r| r.in_thick_subcategory.to_string()))
            }
            Expect::DE(x, y, n) => (n.to_string(), d_e(&ev(x)?, &ev(y)?).map(|v| v.to_string())),
            Expect::StronglySpherical(c, b) => {
                let xs = self.collection(c).ok_or_else(|| self.err_at(line, c, format!("unknown collection `{c}`")))?;
                (b.to_string(), is_strongly_spherical(xs, d).map(|(v, _)| v.to_string()))
            }
            Expect::Summands(x, n) => (n.to_string(), split_summands(&ev(x)?, cfg).map(|r| r.total().to_string())),
            Expect::Recover(x, b) => (b.to_string(), recover_collection(&ev(x)?, d, cfg).map(|r| r.strongly_spherical().to_string())),
            Expect::Class(x, v) => {
                let lattice = LatticeModel::of_algebra(&self.alg);
                (format!("{v:?}"), class_of(&ev(x)?, &lattice).map(|c| format!("{:?}", c.0)))
            }
        })
    }
}

pub fn verdict_of(v: &CommuteVerdict) -> Verdict {
    match v {
        CommuteVerdict::CommuteOrthogonal { .. } => Verdict::Orthogonal,
        CommuteVerdict::CommuteEqual { .. } => Verdict::Equal,
        CommuteVerdict::NotCommute { .. } => Verdict::NotCommute,
    }
}

fn expr_head(e: &ObjExpr) -> String {
    match e {
        ObjExpr::Name(n) => n.clone(),
        ObjExpr::Proj(v) => v.clone(),
        ObjExpr::Zero => "zero".into(),
        ObjExpr::Shift(x, _) => expr_head(x),
        ObjExpr::Sum(xs) => xs.first().map(expr_head).unwrap_or_default(),
        ObjExpr::Cone(m) => m.clone(),
        ObjExpr::Twist(..) => "twist".into(),
        ObjExpr::Untwist(..) => "untwist".into(),
    }
}

fn e_needle(s: impl AsRef<str>) -> String {
    s.as_ref().split_whitespace().next().unwrap_or("").to_string()
}

/// Ext tables keyed by degree as strings, for machine output.
pub fn table_json(t: &BTreeMap<i64, usize>) -> serde_json::Value {
    let m: serde_json::Map<String, serde_json::Value> = t.iter().map(|(i, v)| (i.to_string(), (*v).into())).collect();
    serde_json::Value::Object(m)
}

/// The field named by a scenario, or an error for primes without a compiled type.
pub fn check_field(spec: FieldSpec) -> Result<(), String> {
    match spec {
        FieldSpec::Rationals => Ok(()),
        FieldSpec::PrimeField { characteristic } if PRIMES.contains(&characteristic) => Ok(()),
        FieldSpec::PrimeField { characteristic } => {
            Err(format!("prime {characteristic} is not compiled in (supported: {})", PRIMES.map(|p| p.to_string()).join(", ")))
        }
    }
}
