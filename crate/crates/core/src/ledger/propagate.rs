use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Affine, EventId, EventKind, LedgerError, Problem, Relation, Row};
use crate::field::Rational;

const MAX_ROUNDS: usize = 1000;
/// Longer rows are left to exact elimination only.
const MAX_INTERVAL_TERMS: usize = 16;

/// Interval, exact value (if any) and deduction trace of one slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotValue {
    pub slot: String,
    pub lo: i64,
    /// `None` means unbounded above.
    pub hi: Option<i64>,
    pub exact: Option<String>,
    pub trace: Vec<String>,
}

impl SlotValue {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn interval(&self) -> String {
        match self.hi {
            Some(h) if h == self.lo => h.to_string(),
            Some(h) => format!("[{}, {h}]", self.lo),
            None => format!("[{}, inf)", self.lo),
        }
    }
}

type Key = (u8, usize);

fn pivot(row: &Row, key: &dyn Fn(usize) -> Key) -> usize {
    *row.coeffs.keys().min_by_key(|&&c| key(c)).expect("nonzero row")
}

/// `target += c · src`.
fn axpy(target: &mut Row, c: &Rational, src: &Row) {
    for (k, v) in &src.coeffs {
        let e = target.coeffs.entry(*k).or_insert_with(Rational::zero);
        *e += c * v;
        if e.is_zero() {
            target.coeffs.remove(k);
        }
    }
    target.rhs += c * &src.rhs;
    target.deps.extend(src.deps.iter().copied());
}

/// Adds `row` to a fully reduced echelon form; returns the dependencies of
/// `0 = c` when the row is inconsistent with it.
fn insert_row(echelon: &mut Vec<Row>, mut row: Row, key: &dyn Fn(usize) -> Key) -> Result<(), BTreeSet<EventId>> {
    for e in echelon.iter() {
        let p = pivot(e, key);
        if let Some(c) = row.coeffs.get(&p).cloned() {
            axpy(&mut row, &-c, e);
        }
    }
    if row.coeffs.is_empty() {
        return if row.rhs.is_zero() { Ok(()) } else { Err(row.deps) };
    }
    let p = pivot(&row, key);
    let inv = row.coeffs[&p].recip();
    for v in row.coeffs.values_mut() {
        *v *= &inv;
    }
    row.rhs *= &inv;
    for e in echelon.iter_mut() {
        if let Some(c) = e.coeffs.get(&p).cloned() {
            axpy(e, &-c, &row);
        }
    }
    echelon.push(row);
    Ok(())
}

fn ceil(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().unwrap_or(i64::MAX)
}

fn floor(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().unwrap_or(i64::MIN)
}

impl Problem {
    /// Returns the fixed point of all propagation rules.
    pub fn propagate(&self) -> Result<Problem, LedgerError> {
        let mut p = self.clone();
        p.run()?;
        Ok(p)
    }

    pub(crate) fn run(&mut self) -> Result<(), LedgerError> {
        for _ in 0..MAX_ROUNDS {
            self.absorb()?;
            let mut changed = self.read_symbolic()?;
            changed |= self.tighten_rows()?;
            changed |= self.tighten_uppers()?;
            changed |= self.pin_points();
            if !changed {
                break;
            }
        }
        Ok(())
    }

    fn key(&self) -> impl Fn(usize) -> Key + '_ {
        move |v| (u8::from(self.vars[v].is_param()), v)
    }

    fn inconsistent(&self, deps: BTreeSet<EventId>) -> LedgerError {
        let roots: Vec<EventId> = deps.into_iter().collect();
        LedgerError::Infeasible { what: "the linear constraints are inconsistent".into(), chain: self.chain(&roots) }
    }

    fn absorb(&mut self) -> Result<(), LedgerError> {
        let mut echelon = std::mem::take(&mut self.echelon);
        let result = {
            let key = self.key();
            let mut res = Ok(());
            for row in &self.equations[self.absorbed..] {
                if let Err(deps) = insert_row(&mut echelon, row.clone(), &key) {
                    res = Err(deps);
                    break;
                }
            }
            res
        };
        self.echelon = echelon;
        self.absorbed = self.equations.len();
        result.map_err(|deps| self.inconsistent(deps))
    }

    /// Bounds of `Σ c·x` over the current intervals, with the events used for each side.
    fn bounds_of(&self, terms: impl Iterator<Item = (usize, Rational)>) -> (Option<Rational>, Vec<EventId>, Option<Rational>, Vec<EventId>) {
        let (mut lo, mut hi) = (Some(Rational::zero()), Some(Rational::zero()));
        let (mut lo_deps, mut hi_deps) = (Vec::new(), Vec::new());
        for (v, c) in terms {
            let var = &self.vars[v];
            let at_lo = Rational::from_integer(var.lo.into()) * &c;
            let at_hi = var.hi.map(|h| Rational::from_integer(h.into()) * &c);
            let (tlo, tlo_ev, thi, thi_ev) =
                if c.is_positive() { (Some(at_lo), var.lo_ev, at_hi, var.hi_ev) } else { (at_hi, var.hi_ev, Some(at_lo), var.lo_ev) };
            lo = lo.zip(tlo).map(|(a, b)| a + b);
            hi = hi.zip(thi).map(|(a, b)| a + b);
            lo_deps.extend(tlo_ev);
            hi_deps.extend(thi_ev);
        }
        (lo, lo_deps, hi, hi_deps)
    }

    /// Tightens `v` to `[ceil(lo), floor(hi)]`, recording an event per side that moves.
    fn apply(&mut self, v: usize, lo: Option<Rational>, lo_deps: Vec<EventId>, hi: Option<Rational>, hi_deps: Vec<EventId>) -> Result<bool, LedgerError> {
        let mut changed = false;
        if let Some(l) = lo.map(|l| ceil(&l)) {
            if l > self.vars[v].lo {
                let ev = self.event(EventKind::Deduction, format!("{} >= {l}", self.var_name(v)), lo_deps);
                changed |= self.tighten_lo(v, l, ev)?;
            }
        }
        if let Some(h) = hi.map(|h| floor(&h)) {
            if self.vars[v].hi.is_none_or(|cur| h < cur) {
                let ev = self.event(EventKind::Deduction, format!("{} <= {h}", self.var_name(v)), hi_deps);
                changed |= self.tighten_hi(v, h, ev)?;
            }
        }
        Ok(changed)
    }

    /// Reads `x = affine(params)` off echelon rows whose only non-parameter is the pivot.
    fn read_symbolic(&mut self) -> Result<bool, LedgerError> {
        let mut changed = false;
        let found: Vec<(usize, Affine, Vec<EventId>)> = {
            let key = self.key();
            self.echelon
                .iter()
                .filter_map(|row| {
                    let p = pivot(row, &key);
                    if self.vars[p].is_param() || row.coeffs.keys().any(|&c| c != p && !self.vars[c].is_param()) {
                        return None;
                    }
                    let terms = row.coeffs.iter().filter(|(&c, _)| c != p).map(|(&c, x)| (c, -x.clone())).collect();
                    Some((p, Affine { constant: row.rhs.clone(), terms }, row.deps.iter().copied().collect()))
                })
                .collect()
        };
        for (v, affine, deps) in found {
            let better = match &self.vars[v].symbolic {
                None => true,
                Some((old, _)) => affine.terms.len() < old.terms.len(),
            };
            if better {
                let ev = self.event(EventKind::Deduction, format!("{} = {}", self.var_name(v), self.format_affine(&affine)), deps);
                self.vars[v].symbolic = Some((affine, ev));
                changed = true;
            }
            let (affine, ev) = self.vars[v].symbolic.clone().expect("set above");
            let (lo, mut lo_deps, hi, mut hi_deps) = self.bounds_of(affine.terms.into_iter());
            let lo = lo.map(|l| l + &affine.constant);
            let hi = hi.map(|h| h + &affine.constant);
            lo_deps.push(ev);
            hi_deps.push(ev);
            changed |= self.apply(v, lo, lo_deps, hi, hi_deps)?;
        }
        Ok(changed)
    }

    fn tighten_rows(&mut self) -> Result<bool, LedgerError> {
        let rows: Vec<Row> =
            self.echelon.iter().chain(&self.equations).filter(|r| r.coeffs.len() <= MAX_INTERVAL_TERMS).cloned().collect();
        let mut changed = false;
        for row in rows {
            for (&k, ak) in &row.coeffs {
                let others = row.coeffs.iter().filter(|(&j, _)| j != k).map(|(&j, c)| (j, c.clone()));
                let (slo, slo_deps, shi, shi_deps) = self.bounds_of(others);
                // a_k x_k = rhs - S
                let rlo = shi.map(|s| &row.rhs - s);
                let rhi = slo.map(|s| &row.rhs - s);
                let with = |mut d: Vec<EventId>| {
                    d.extend(row.deps.iter().copied());
                    d
                };
                let (lo, lo_deps, hi, hi_deps) = if ak.is_positive() {
                    (rlo.map(|r| r / ak), with(shi_deps), rhi.map(|r| r / ak), with(slo_deps))
                } else {
                    (rhi.map(|r| r / ak), with(slo_deps), rlo.map(|r| r / ak), with(shi_deps))
                };
                changed |= self.apply(k, lo, lo_deps, hi, hi_deps)?;
            }
        }
        Ok(changed)
    }

    fn tighten_uppers(&mut self) -> Result<bool, LedgerError> {
        let mut changed = false;
        for (small, big, ev) in self.uppers.clone() {
            let hi = self.vars[big].hi.map(|h| Rational::from_integer(h.into()));
            let hi_deps: Vec<EventId> = std::iter::once(ev).chain(self.vars[big].hi_ev).collect();
            changed |= self.apply(small, None, Vec::new(), hi, hi_deps)?;
            let lo = Some(Rational::from_integer(self.vars[small].lo.into()));
            let lo_deps: Vec<EventId> = std::iter::once(ev).chain(self.vars[small].lo_ev).collect();
            changed |= self.apply(big, lo, lo_deps, None, Vec::new())?;
        }
        Ok(changed)
    }

    /// Feeds every newly exact interval back into the linear system.
    fn pin_points(&mut self) -> bool {
        let mut changed = false;
        for v in 0..self.vars.len() {
            if self.vars[v].pinned {
                continue;
            }
            if let Some(x) = self.vars[v].point() {
                self.vars[v].pinned = true;
                let deps: Vec<EventId> = self.vars[v].lo_ev.into_iter().chain(self.vars[v].hi_ev).collect();
                self.push_equation([(v, Rational::one())], Rational::from_integer(x.into()), deps);
                changed = true;
            }
        }
        changed
    }

    /// Interval, exact value and trace of variable `v`.
    pub fn query(&self, v: usize) -> SlotValue {
        let var = &self.vars[v];
        let mut roots: Vec<EventId> = var.lo_ev.into_iter().chain(var.hi_ev).collect();
        roots.extend(var.symbolic.as_ref().map(|(_, e)| *e));
        let exact = self.exact_value(v);
        for rel in &self.relations {
            if (rel.x == v || rel.y == v) && self.relation_holds(rel) {
                roots.push(rel.event);
            }
        }
        SlotValue {
            slot: self.var_name(v),
            lo: var.lo,
            hi: var.hi,
            exact: exact.map(|a| self.format_affine(&a)),
            trace: self.chain(&roots),
        }
    }

    fn relation_holds(&self, rel: &Relation) -> bool {
        match (self.exact_value(rel.x), self.exact_value(rel.y)) {
            (Some(x), Some(y)) => self.substitute(&x.sub(&y.scale(&rel.coeff).add(&rel.offset))) == Affine::default(),
            _ => false,
        }
    }

    /// Eliminates everything but `x`, `y` and the parameters to find
    /// `x = c · y + affine(params)`; records it when found.
    pub fn relate(&mut self, x: usize, y: usize) -> Result<Option<Relation>, LedgerError> {
        self.run()?;
        let key = |v: usize| -> Key {
            if v == x {
                (1, 0)
            } else if v == y {
                (2, 0)
            } else if self.vars[v].is_param() {
                (3, v)
            } else {
                (0, v)
            }
        };
        let mut echelon = Vec::new();
        for row in &self.equations {
            if let Err(deps) = insert_row(&mut echelon, row.clone(), &key) {
                return Err(self.inconsistent(deps));
            }
        }
        let Some(row) = echelon.iter().find(|r| pivot(r, &key) == x && r.coeffs.keys().all(|&c| key(c).0 >= 1)) else {
            return Ok(None);
        };
        let coeff = row.coeffs.get(&y).map_or_else(Rational::zero, |c| -c.clone());
        let terms = row.coeffs.iter().filter(|(&c, _)| c != x && c != y).map(|(&c, v)| (c, -v.clone())).collect();
        let offset = Affine { constant: row.rhs.clone(), terms };
        let deps: Vec<EventId> = row.deps.iter().copied().collect();
        let text = self.format_relation(x, y, &coeff, &offset);
        let event = self.event(EventKind::Relation, text, deps);
        let rel = Relation { x, y, coeff, offset, event };
        self.relations.push(rel.clone());
        Ok(Some(rel))
    }

    pub fn format_relation(&self, x: usize, y: usize, coeff: &Rational, offset: &Affine) -> String {
        let mut rhs = String::new();
        if !coeff.is_zero() {
            if *coeff == -Rational::one() {
                rhs.push('-');
            } else if !coeff.is_one() {
                rhs.push_str(&format!("{coeff}*"));
            }
            rhs.push_str(&self.var_name(y));
            if *offset != Affine::default() {
                let s = self.format_affine(offset);
                match s.strip_prefix('-') {
                    Some(rest) => rhs.push_str(&format!(" - {rest}")),
                    None => rhs.push_str(&format!(" + {s}")),
                }
            }
        } else {
            rhs = self.format_affine(offset);
        }
        format!("{} = {rhs}", self.var_name(x))
    }
}
