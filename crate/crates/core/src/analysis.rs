//! Decision procedures for spherical objects: sphericality, orthogonality,
//! `d_E`, membership in the thick subcategory `<E>`, cone peeling, and the
//! commutation classifier.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{cone, TwistedComplex};
use crate::config::Config;
use crate::error::TwistError;
use crate::field::Field;
use crate::hom::{ext_table, ExtTable, HomComplex};
use crate::minimal::{is_isomorphic, isomorphic_up_to_shift, minimize};
use crate::twist::twist;

/// The table `{0:1, d:1}`.
pub fn sphere_table(d: i64) -> ExtTable {
    ExtTable::from_entries([(0, 1), (d, 1)])
}

pub fn is_spherical<K: Field>(e: &TwistedComplex<K>, d: i64) -> Result<bool, TwistError> {
    Ok(ext_table(e, e)? == sphere_table(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub simple: bool,
    pub rigid: bool,
    pub exceptional: bool,
    pub spherical: bool,
}

pub fn classify<K: Field>(e: &TwistedComplex<K>, d: i64) -> Result<Classification, TwistError> {
    let t = ext_table(e, e)?;
    let simple = t.get(0) == 1;
    Ok(Classification {
        simple,
        rigid: t.get(1) == 0,
        exceptional: simple && (1..d).all(|i| t.get(i) == 0),
        spherical: t == sphere_table(d),
    })
}

pub fn is_orthogonal<K: Field>(e: &TwistedComplex<K>, f: &TwistedComplex<K>) -> Result<bool, TwistError> {
    Ok(ext_table(e, f)?.is_empty() && ext_table(f, e)?.is_empty())
}

/// A pair `(first, second)` (1-based positions) whose table breaks the strongly
/// spherical pattern, with the first offending shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub first: usize,
    pub second: usize,
    pub shift: i64,
}

fn first_difference(have: &ExtTable, want: &ExtTable) -> Option<i64> {
    have.entries().keys().chain(want.entries().keys()).copied().filter(|&i| have.get(i) != want.get(i)).min()
}

pub fn strong_sphericity_violations<K: Field>(objs: &[TwistedComplex<K>], d: i64) -> Result<Vec<PairViolation>, TwistError> {
    let mut out = Vec::new();
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            let want = if i == j { sphere_table(d) } else { ExtTable::default() };
            if let Some(shift) = first_difference(&ext_table(a, b)?, &want) {
                out.push(PairViolation { first: i + 1, second: j + 1, shift });
            }
        }
    }
    Ok(out)
}

pub fn strong_sphericity_violation<K: Field>(objs: &[TwistedComplex<K>], d: i64) -> Result<Option<PairViolation>, TwistError> {
    Ok(strong_sphericity_violations(objs, d)?.into_iter().next())
}

pub fn is_strongly_spherical<K: Field>(objs: &[TwistedComplex<K>], d: i64) -> Result<(bool, Vec<PairViolation>), TwistError> {
    let v = strong_sphericity_violations(objs, d)?;
    Ok((v.is_empty(), v))
}

/// Every object simple and no Homs in any degree between distinct members.
pub fn is_strongly_simple<K: Field>(objs: &[TwistedComplex<K>]) -> Result<bool, TwistError> {
    for (i, a) in objs.iter().enumerate() {
        if ext_table(a, a)?.get(0) != 1 {
            return Ok(false);
        }
        for (j, b) in objs.iter().enumerate() {
            if i != j && !ext_table(a, b)?.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `d_E(G) = Σ_i dim Hom(E, G[i])`.
pub fn d_e<K: Field>(e: &TwistedComplex<K>, g: &TwistedComplex<K>) -> Result<usize, TwistError> {
    Ok(ext_table(e, g)?.total())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PeelFailure {
    /// `d_E` is odd, which no object of `<E>` allows.
    ParityObstruction { d_e: usize },
    /// The remaining object is nonzero but has no maps from `E`.
    Orthogonal { remaining: usize },
    /// No candidate cone shrinks the object.
    NoReducingChoice { d_e: usize, remaining: usize },
    BudgetExhausted { tried: usize },
}

/// One cone step: the factor `E[shift]` was split off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelStep {
    pub shift: i64,
    pub d_e_before: usize,
    pub d_e_after: usize,
    pub summands_before: usize,
    pub summands_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelReport {
    pub steps: Vec<PeelStep>,
    pub failure: Option<PeelFailure>,
}

impl PeelReport {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }

    pub fn shifts(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.shift).collect()
    }
}

/// Splits copies of `E` off `G` by cones until nothing is left.
///
/// At each step a class `f ∈ Hom(E, G[i])` is chosen, smallest `|i|` first: basis
/// classes, then seeded random combinations. `G` is replaced by `cone(f: E[-i] -> G)`
/// when that strictly shrinks the minimal model. The recorded shift is `-i`.
pub fn peel_filtration<K: Field>(e: &TwistedComplex<K>, g: &TwistedComplex<K>, cfg: &Config) -> Result<PeelReport, TwistError> {
    e.same_algebra(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cur = minimize(g);
    let mut steps = Vec::new();
    let mut tried = 0usize;
    loop {
        if cur.is_empty() {
            return Ok(PeelReport { steps, failure: None });
        }
        let table = ext_table(e, &cur)?;
        let de = table.total();
        if de % 2 == 1 {
            return Ok(PeelReport { steps, failure: Some(PeelFailure::ParityObstruction { d_e: de }) });
        }
        if de == 0 {
            return Ok(PeelReport { steps, failure: Some(PeelFailure::Orthogonal { remaining: cur.len() }) });
        }
        let mut degrees: Vec<i64> = table.entries().keys().copied().collect();
        degrees.sort_by_key(|i| (i.abs(), *i));
        let hc = HomComplex::new(e, &cur)?;
        let mut next = None;
        'search: for &i in &degrees {
            let basis = hc.homology_basis(i);
            let mut candidates: Vec<Vec<K>> = basis.clone();
            if basis.len() > 1 {
                for _ in 0..basis.len() {
                    let mut v = vec![K::zero(); hc.dim(i)];
                    for b in &basis {
                        let r = K::random(&mut rng, 5);
                        for (c, x) in v.iter_mut().zip(b) {
                            *c = c.clone() + r.clone() * x.clone();
                        }
                    }
                    candidates.push(v);
                }
            }
            for coords in candidates {
                if hc.is_exact(i, &coords) {
                    continue;
                }
                if tried >= cfg.budget {
                    return Ok(PeelReport { steps, failure: Some(PeelFailure::BudgetExhausted { tried }) });
                }
                tried += 1;
                let f = hc.to_map(i, &coords);
                let src = e.shift(-i);
                let map = crate::complex::ChainMap::from_raw(src, cur.clone(), 0, f.matrix().clone());
                let c = minimize(&cone(&map)?);
                if c.len() < cur.len() && c.check_window(cfg.max_shift).is_ok() {
                    next = Some((i, c));
                    break 'search;
                }
            }
        }
        let Some((i, c)) = next else {
            return Ok(PeelReport {
                steps,
                failure: Some(PeelFailure::NoReducingChoice { d_e: de, remaining: cur.len() }),
            });
        };
        steps.push(PeelStep {
            shift: -i,
            d_e_before: de,
            d_e_after: ext_table(e, &c)?.total(),
            summands_before: cur.len(),
            summands_after: c.len(),
        });
        cur = c;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub in_thick_subcategory: bool,
    pub d_e_total: usize,
    pub filtration_shifts: Option<Vec<i64>>,
    pub twist_test_passed: bool,
    /// The peeling run behind `filtration_shifts`, for members.
    pub peel: Option<PeelReport>,
}

/// `G ∈ <E>` iff `T_E(G) ≅ G[1-d]`; members are also peeled into `E`-factors.
pub fn thick_membership<K: Field>(
    e: &TwistedComplex<K>,
    g: &TwistedComplex<K>,
    d: i64,
    cfg: &Config,
) -> Result<MembershipReport, TwistError> {
    if d < 2 {
        return Err(TwistError::DimensionTooSmall(d));
    }
    if !is_spherical(e, d)? {
        return Err(TwistError::NotSpherical("E".into()));
    }
    let de = d_e(e, g)?;
    let t = twist(e, g)?;
    let passed = is_isomorphic(&t, &g.shift(1 - d), cfg.seed)?.isomorphic;
    let peel = if passed { Some(peel_filtration(e, g, cfg)?) } else { None };
    let filtration_shifts = peel.as_ref().filter(|p| p.succeeded()).map(PeelReport::shifts);
    Ok(MembershipReport { in_thick_subcategory: passed, d_e_total: de, filtration_shifts, twist_test_passed: passed, peel })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CommuteVerdict {
    CommuteOrthogonal { orthogonality_confirmed: bool },
    /// `E[shift] ≅ F`.
    CommuteEqual { shift: i64 },
    /// The twists disagree on generator number `generator` (0-based).
    NotCommute { generator: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommuteReport {
    pub verdict: CommuteVerdict,
    pub generators_checked: usize,
    pub seed: u64,
}

/// Compares `T_E T_F g` with `T_F T_E g` over the generators.
pub fn commute_classify<K: Field>(
    e: &TwistedComplex<K>,
    f: &TwistedComplex<K>,
    generators: &[TwistedComplex<K>],
    d: i64,
    cfg: &Config,
) -> Result<CommuteReport, TwistError> {
    if !is_spherical(e, d)? {
        return Err(TwistError::NotSpherical("E".into()));
    }
    if !is_spherical(f, d)? {
        return Err(TwistError::NotSpherical("F".into()));
    }
    for (n, g) in generators.iter().enumerate() {
        let ef = twist(e, &twist(f, g)?)?;
        let fe = twist(f, &twist(e, g)?)?;
        if !is_isomorphic(&ef, &fe, cfg.seed)?.isomorphic {
            return Ok(CommuteReport {
                verdict: CommuteVerdict::NotCommute { generator: n },
                generators_checked: n + 1,
                seed: cfg.seed,
            });
        }
    }
    let verdict = match isomorphic_up_to_shift(e, f, cfg.seed)? {
        Some(shift) => CommuteVerdict::CommuteEqual { shift },
        None => CommuteVerdict::CommuteOrthogonal { orthogonality_confirmed: is_orthogonal(e, f)? },
    };
    Ok(CommuteReport { verdict, generators_checked: generators.len(), seed: cfg.seed })
}
