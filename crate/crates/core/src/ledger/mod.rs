//! Dimension bookkeeping over long exact Ext sequences.
//!
//! Every `dim Ext^i(A, B)` and every arrow rank is a nonnegative integer
//! variable. Exactness, rank bounds, facts and arrow annotations are linear
//! constraints; [`Problem::propagate`] alternates exact elimination over `Q`
//! with interval tightening until nothing moves, and records which inputs
//! each tightening used.

mod dsl;
mod propagate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::Rational;

pub use dsl::{parse_lines, parse_program, parse_statement, run_program, run_source, Derivation, ExpectOutcome, LedgerReport, Program, RelationReport, SlotRef, Statement};
pub use propagate::SlotValue;

pub type EventId = usize;

/// The zero object: every slot touching it is exactly 0.
pub const ZERO_ENTITY: &str = "0";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("unknown entity {0}")]
    UnknownEntity(String),
    #[error("unknown parameter {0}")]
    UnknownParam(String),
    #[error("name {0} declared twice")]
    Duplicate(String),
    #[error("unknown slot {0}")]
    UnknownSlot(String),
    #[error("no arrow {0} in any exact sequence")]
    UnknownArrow(String),
    #[error("unknown sequence {0}")]
    UnknownSequence(String),
    #[error("max degree must be at least 1")]
    MaxDegree,
    #[error("parameter {0} must be exact here")]
    InexactParam(String),
    #[error("contradiction: {slot} is already {existing}, asserted {asserted}")]
    Contradiction { slot: String, existing: String, asserted: String },
    #[error("infeasible: {what}")]
    Infeasible { what: String, chain: Vec<String> },
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: {inner}")]
    At { line: usize, inner: Box<LedgerError> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Input,
    Assumption,
    Structure,
    Deduction,
    Relation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub id: EventId,
    pub kind: EventKind,
    pub text: String,
    pub deps: Vec<EventId>,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            EventKind::Input => "input",
            EventKind::Assumption => "assume",
            EventKind::Structure => "exact",
            EventKind::Deduction => "deduce",
            EventKind::Relation => "relate",
        };
        write!(f, "[{tag}] {}", self.text)
    }
}

/// `dim Ext^degree(a, b)` between base entities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotKey {
    pub a: String,
    pub b: String,
    pub degree: i64,
}

impl fmt::Display for SlotKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            0 => write!(f, "hom({},{})", self.a, self.b),
            n if n > 0 => write!(f, "ext{n}({},{})", self.a, self.b),
            n => write!(f, "ext({},{},i={n})", self.a, self.b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    Param(String),
    Dim(SlotKey),
    Rank { seq: usize, arrow: usize },
}

#[derive(Clone, Debug)]
pub(crate) struct Var {
    kind: VarKind,
    lo: i64,
    hi: Option<i64>,
    lo_ev: Option<EventId>,
    hi_ev: Option<EventId>,
    symbolic: Option<(Affine, EventId)>,
    pinned: bool,
}

impl Var {
    fn new(kind: VarKind) -> Self {
        Var { kind, lo: 0, hi: None, lo_ev: None, hi_ev: None, symbolic: None, pinned: false }
    }

    fn is_param(&self) -> bool {
        matches!(self.kind, VarKind::Param(_))
    }

    fn point(&self) -> Option<i64> {
        (self.hi == Some(self.lo)).then_some(self.lo)
    }
}

/// `constant + Σ coeff · param`, params named by their variable index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub constant: Rational,
    pub terms: BTreeMap<usize, Rational>,
}

impl Affine {
    pub fn constant(c: i64) -> Self {
        Affine { constant: Rational::from_integer(c.into()), terms: BTreeMap::new() }
    }

    pub fn param(p: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, Rational::one());
        Affine { constant: Rational::zero(), terms }
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (p, c) in &other.terms {
            let e = out.terms.entry(*p).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(p);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Affine {
        if c.is_zero() {
            return Affine::default();
        }
        Affine { constant: &self.constant * c, terms: self.terms.iter().map(|(p, x)| (*p, x * c)).collect() }
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.is_constant() && self.constant.is_integer()).then(|| self.constant.to_integer().to_i64()).flatten()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `Ext^*(-, T)` applied to the sequence.
    Into,
    /// `Ext^*(T, -)` applied to the sequence.
    From,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ses {
    pub name: String,
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequence {
    pub label: String,
    /// Dimension variables in sequence order.
    pub slots: Vec<usize>,
    /// `ranks[k]` is the rank of the arrow `slots[k] -> slots[k + 1]`.
    pub ranks: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Annotation {
    Injective,
    Surjective,
    Zero,
    Nonzero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relop {
    Eq,
    Ge,
    Le,
    Gt,
    Lt,
}

impl fmt::Display for Relop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relop::Eq => "=",
            Relop::Ge => ">=",
            Relop::Le => "<=",
            Relop::Gt => ">",
            Relop::Lt => "<",
        })
    }
}

/// `Σ coeffs · x = rhs`.
#[derive(Clone, Debug)]
pub(crate) struct Row {
    coeffs: BTreeMap<usize, Rational>,
    rhs: Rational,
    deps: BTreeSet<EventId>,
}

/// `x = coeff · y + offset`, derived from the constraints at the time it was recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub x: usize,
    pub y: usize,
    pub coeff: Rational,
    pub offset: Affine,
    pub event: EventId,
}

#[derive(Clone, Debug, Default)]
pub struct Problem {
    vars: Vec<Var>,
    params: Vec<usize>,
    param_index: HashMap<String, usize>,
    entities: Vec<String>,
    aliases: BTreeMap<String, (String, i64)>,
    slots: HashMap<SlotKey, usize>,
    sequences: Vec<ExactSequence>,
    equations: Vec<Row>,
    echelon: Vec<Row>,
    absorbed: usize,
    uppers: Vec<(usize, usize, EventId)>,
    events: Vec<Event>,
    relations: Vec<Relation>,
}

fn int(c: i64) -> Rational {
    Rational::from_integer(c.into())
}

impl Problem {
    pub fn new() -> Self {
        Problem::default()
    }

    fn event(&mut self, kind: EventKind, text: String, deps: impl IntoIterator<Item = EventId>) -> EventId {
        let id = self.events.len();
        let mut deps: Vec<EventId> = deps.into_iter().collect();
        deps.sort_unstable();
        deps.dedup();
        self.events.push(Event { id, kind, text, deps });
        id
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn sequences(&self) -> &[ExactSequence] {
        &self.sequences
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    fn declared(&self, name: &str) -> bool {
        name == ZERO_ENTITY || self.param_index.contains_key(name) || self.entities.iter().any(|e| e == name) || self.aliases.contains_key(name)
    }

    pub fn add_param(&mut self, name: &str) -> Result<usize, LedgerError> {
        if self.declared(name) {
            return Err(LedgerError::Duplicate(name.to_string()));
        }
        let idx = self.vars.len();
        self.vars.push(Var::new(VarKind::Param(name.to_string())));
        self.params.push(idx);
        self.param_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    pub fn param(&self, name: &str) -> Result<usize, LedgerError> {
        self.param_index.get(name).copied().ok_or_else(|| LedgerError::UnknownParam(name.to_string()))
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|&p| self.var_name(p)).collect()
    }

    pub fn add_entity(&mut self, name: &str) -> Result<(), LedgerError> {
        if self.declared(name) {
            return Err(LedgerError::Duplicate(name.to_string()));
        }
        self.entities.push(name.to_string());
        Ok(())
    }

    /// Declares `name = base[shift]`.
    pub fn add_alias(&mut self, name: &str, base: &str, shift: i64) -> Result<(), LedgerError> {
        if self.declared(name) {
            return Err(LedgerError::Duplicate(name.to_string()));
        }
        let (b, s) = self.resolve(base)?;
        self.aliases.insert(name.to_string(), (b, s + shift));
        Ok(())
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    /// Base entity and shift of a declared name.
    pub fn resolve(&self, name: &str) -> Result<(String, i64), LedgerError> {
        if name == ZERO_ENTITY || self.entities.iter().any(|e| e == name) {
            return Ok((name.to_string(), 0));
        }
        self.aliases.get(name).cloned().ok_or_else(|| LedgerError::UnknownEntity(name.to_string()))
    }

    /// `Ext^i(A[s], B[t]) = Ext^{i+t-s}(A, B)`.
    pub fn canonical(&self, a: &str, b: &str, degree: i64) -> Result<SlotKey, LedgerError> {
        let (a, s) = self.resolve(a)?;
        let (b, t) = self.resolve(b)?;
        Ok(SlotKey { a, b, degree: degree + t - s })
    }

    /// The variable of `dim Ext^degree(a, b)`, created on first use.
    pub fn slot(&mut self, a: &str, b: &str, degree: i64) -> Result<usize, LedgerError> {
        let key = self.canonical(a, b, degree)?;
        if let Some(&v) = self.slots.get(&key) {
            return Ok(v);
        }
        let v = self.vars.len();
        let zero = key.a == ZERO_ENTITY || key.b == ZERO_ENTITY;
        self.vars.push(Var::new(VarKind::Dim(key.clone())));
        self.slots.insert(key.clone(), v);
        if zero {
            let ev = self.event(EventKind::Structure, format!("{key} = 0 (zero object)"), []);
            self.push_equation([(v, int(1))], int(0), [ev]);
        }
        Ok(v)
    }

    /// Looks up an existing slot.
    pub fn find_slot(&self, a: &str, b: &str, degree: i64) -> Result<usize, LedgerError> {
        let key = self.canonical(a, b, degree)?;
        self.slots.get(&key).copied().ok_or_else(|| LedgerError::UnknownSlot(key.to_string()))
    }

    pub fn var_name(&self, v: usize) -> String {
        match &self.vars[v].kind {
            VarKind::Param(p) => p.clone(),
            VarKind::Dim(k) => k.to_string(),
            VarKind::Rank { seq, arrow } => {
                let s = &self.sequences[*seq];
                format!("rank[{}]({} -> {})", s.label, self.var_name(s.slots[*arrow]), self.var_name(s.slots[*arrow + 1]))
            }
        }
    }

    /// Current interval of `v` and the events that set each end.
    pub fn bounds(&self, v: usize) -> (i64, Option<i64>, Option<EventId>, Option<EventId>) {
        let var = &self.vars[v];
        (var.lo, var.hi, var.lo_ev, var.hi_ev)
    }

    pub fn var_kind(&self, v: usize) -> &VarKind {
        &self.vars[v].kind
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn push_equation(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational, deps: impl IntoIterator<Item = EventId>) {
        let mut map = BTreeMap::new();
        for (v, c) in coeffs {
            let e = map.entry(v).or_insert_with(Rational::zero);
            *e += c;
        }
        map.retain(|_, c: &mut Rational| !c.is_zero());
        self.equations.push(Row { coeffs: map, rhs, deps: deps.into_iter().collect() });
    }

    /// Emits the long exact sequence of `Ext^*(-, T)` or `Ext^*(T, -)` applied
    /// to `a -> b -> c`, stopping at `Ext^max_degree` of the middle term.
    pub fn derive_les(&mut self, ses: &Ses, dir: Direction, target: &str, max_degree: i64) -> Result<usize, LedgerError> {
        if max_degree < 1 {
            return Err(LedgerError::MaxDegree);
        }
        self.resolve(target)?;
        let order: [&str; 3] = match dir {
            Direction::Into => [&ses.c, &ses.b, &ses.a],
            Direction::From => [&ses.a, &ses.b, &ses.c],
        };
        let len = (3 * max_degree + 2) as usize;
        let mut slots = Vec::with_capacity(len);
        'outer: for i in 0..=max_degree {
            for x in order {
                if slots.len() == len {
                    break 'outer;
                }
                let v = match dir {
                    Direction::Into => self.slot(x, target, i)?,
                    Direction::From => self.slot(target, x, i)?,
                };
                slots.push(v);
            }
        }
        let label = match dir {
            Direction::Into => format!("{} into {target}", ses.name),
            Direction::From => format!("{} from {target}", ses.name),
        };
        let seq = self.sequences.len();
        let mut ranks = Vec::with_capacity(len - 1);
        for arrow in 0..len - 1 {
            ranks.push(self.vars.len());
            self.vars.push(Var::new(VarKind::Rank { seq, arrow }));
        }
        self.sequences.push(ExactSequence { label: label.clone(), slots: slots.clone(), ranks: ranks.clone() });
        let bounds = self.event(EventKind::Structure, format!("{label}: ranks bounded by both endpoints"), []);
        for k in 0..len - 1 {
            self.uppers.push((ranks[k], slots[k], bounds));
            self.uppers.push((ranks[k], slots[k + 1], bounds));
        }
        let first = self.event(EventKind::Structure, format!("{label}: 0 -> {} is injective", self.var_name(slots[0])), []);
        self.push_equation([(slots[0], int(1)), (ranks[0], int(-1))], int(0), [first]);
        for j in 1..len - 1 {
            let ev = self.event(EventKind::Structure, format!("{label}: exact at {}", self.var_name(slots[j])), []);
            self.push_equation([(slots[j], int(1)), (ranks[j - 1], int(-1)), (ranks[j], int(-1))], int(0), [ev]);
        }
        Ok(seq)
    }

    /// Bounds or fixes a parameter.
    pub fn assume(&mut self, param: &str, op: Relop, value: i64) -> Result<EventId, LedgerError> {
        let p = self.param(param)?;
        let ev = self.event(EventKind::Assumption, format!("{param} {op} {value}"), []);
        self.bound(p, op, value, ev)?;
        Ok(ev)
    }

    fn bound(&mut self, v: usize, op: Relop, value: i64, ev: EventId) -> Result<(), LedgerError> {
        match op {
            Relop::Eq => {
                self.push_equation([(v, int(1))], int(value), [ev]);
                self.tighten_lo(v, value, ev)?;
                self.tighten_hi(v, value, ev)?;
            }
            Relop::Ge => {
                self.tighten_lo(v, value, ev)?;
            }
            Relop::Gt => {
                self.tighten_lo(v, value + 1, ev)?;
            }
            Relop::Le => {
                self.tighten_hi(v, value, ev)?;
            }
            Relop::Lt => {
                self.tighten_hi(v, value - 1, ev)?;
            }
        }
        Ok(())
    }

    fn tighten_lo(&mut self, v: usize, value: i64, ev: EventId) -> Result<bool, LedgerError> {
        if value <= self.vars[v].lo {
            return Ok(false);
        }
        self.vars[v].lo = value;
        self.vars[v].lo_ev = Some(ev);
        self.check_interval(v)?;
        Ok(true)
    }

    fn tighten_hi(&mut self, v: usize, value: i64, ev: EventId) -> Result<bool, LedgerError> {
        if self.vars[v].hi.is_some_and(|h| h <= value) {
            return Ok(false);
        }
        self.vars[v].hi = Some(value);
        self.vars[v].hi_ev = Some(ev);
        self.check_interval(v)?;
        Ok(true)
    }

    fn check_interval(&self, v: usize) -> Result<(), LedgerError> {
        let var = &self.vars[v];
        match var.hi {
            Some(h) if h < var.lo => {
                let roots: Vec<EventId> = var.lo_ev.into_iter().chain(var.hi_ev).collect();
                Err(LedgerError::Infeasible {
                    what: format!("{} needs to be >= {} and <= {h}", self.var_name(v), var.lo),
                    chain: self.chain(&roots),
                })
            }
            _ => Ok(()),
        }
    }

    /// Transitive dependencies of `roots`, oldest first, rendered.
    pub fn chain(&self, roots: &[EventId]) -> Vec<String> {
        self.closure(roots).into_iter().map(|e| self.events[e].to_string()).collect()
    }

    pub(crate) fn closure(&self, roots: &[EventId]) -> BTreeSet<EventId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<EventId> = roots.to_vec();
        while let Some(e) = stack.pop() {
            if seen.insert(e) {
                stack.extend(self.events[e].deps.iter().copied());
            }
        }
        seen
    }

    /// Current exact value of `v`, if any.
    pub(crate) fn exact_value(&self, v: usize) -> Option<Affine> {
        if let Some(p) = self.vars[v].point() {
            return Some(Affine::constant(p));
        }
        self.vars[v].symbolic.as_ref().map(|(a, _)| self.substitute(a))
    }

    /// Replaces parameters whose value is pinned by that value.
    pub(crate) fn substitute(&self, a: &Affine) -> Affine {
        let mut out = Affine { constant: a.constant.clone(), terms: BTreeMap::new() };
        for (p, c) in &a.terms {
            match self.vars[*p].point() {
                Some(x) => out.constant += c * int(x),
                None => {
                    out.terms.insert(*p, c.clone());
                }
            }
        }
        out
    }

    /// Records an exact value or a bound for a slot.
    pub fn assert_slot(&mut self, v: usize, op: Relop, value: &Affine, text: String, deps: &[EventId]) -> Result<EventId, LedgerError> {
        if op == Relop::Eq {
            if let Some(existing) = self.exact_value(v) {
                let diff = self.substitute(&existing.sub(value));
                if diff.is_constant() && !diff.constant.is_zero() {
                    return Err(LedgerError::Contradiction {
                        slot: self.var_name(v),
                        existing: self.format_affine(&existing),
                        asserted: self.format_affine(value),
                    });
                }
            }
            let ev = self.event(EventKind::Input, text, deps.iter().copied());
            let mut coeffs = vec![(v, int(1))];
            coeffs.extend(value.terms.iter().map(|(p, c)| (*p, -c.clone())));
            self.push_equation(coeffs, value.constant.clone(), [ev]);
            return Ok(ev);
        }
        let n = value.as_integer().ok_or_else(|| LedgerError::InexactParam(self.format_affine(value)))?;
        let (lo, hi) = (self.vars[v].lo, self.vars[v].hi);
        let clash = match op {
            Relop::Ge => hi.is_some_and(|h| h < n),
            Relop::Gt => hi.is_some_and(|h| h <= n),
            Relop::Le => lo > n,
            Relop::Lt => lo >= n,
            Relop::Eq => false,
        };
        if clash && (self.vars[v].point().is_some() || self.vars[v].symbolic.is_some()) {
            return Err(LedgerError::Contradiction {
                slot: self.var_name(v),
                existing: self.format_interval(v),
                asserted: format!("{op} {n}"),
            });
        }
        let ev = self.event(EventKind::Input, text, deps.iter().copied());
        self.bound(v, op, n, ev)?;
        Ok(ev)
    }

    /// Annotates every arrow `src -> tgt` found in the declared sequences.
    pub fn assert_arrow(&mut self, src: usize, tgt: usize, ann: Annotation, text: String) -> Result<EventId, LedgerError> {
        let arrows: Vec<usize> = self
            .sequences
            .iter()
            .flat_map(|s| (0..s.ranks.len()).filter(|&k| s.slots[k] == src && s.slots[k + 1] == tgt).map(|k| s.ranks[k]))
            .collect();
        if arrows.is_empty() {
            return Err(LedgerError::UnknownArrow(format!("{} -> {}", self.var_name(src), self.var_name(tgt))));
        }
        let ev = self.event(EventKind::Input, text, []);
        for r in arrows {
            match ann {
                Annotation::Injective => self.push_equation([(r, int(1)), (src, int(-1))], int(0), [ev]),
                Annotation::Surjective => self.push_equation([(r, int(1)), (tgt, int(-1))], int(0), [ev]),
                Annotation::Zero => self.bound(r, Relop::Eq, 0, ev)?,
                Annotation::Nonzero => self.bound(r, Relop::Ge, 1, ev)?,
            }
        }
        Ok(ev)
    }

    pub fn format_affine(&self, a: &Affine) -> String {
        let mut out = String::new();
        for (p, c) in &a.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&self.var_name(*p));
        }
        if out.is_empty() {
            return a.constant.to_string();
        }
        if !a.constant.is_zero() {
            out.push_str(if a.constant.is_negative() { " - " } else { " + " });
            out.push_str(&a.constant.abs().to_string());
        }
        out
    }

    pub fn format_interval(&self, v: usize) -> String {
        let var = &self.vars[v];
        match var.hi {
            Some(h) if h == var.lo => h.to_string(),
            Some(h) => format!("[{}, {h}]", var.lo),
            None => format!("[{}, inf)", var.lo),
        }
    }
}

#[cfg(test)]
mod tests;
