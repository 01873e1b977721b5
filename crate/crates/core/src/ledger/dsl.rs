//! Line-oriented ledger programs.
//!
//! ```text
//! params r2 d
//! assume d > 2
//! entity F EH Ox
//! entity Fx = F[1]
//! ses S: F -> EH -> Ox
//! maxdeg 2
//! fact ext(EH, Ox, i>0) = 0
//! fact hom(EH, EH) = r2 source "stable bundle"
//! map boundary(hom(F,F) -> ext1(Ox,F)) nonzero
//! derive ext1(F, F)
//! relate ext1(F,F) hom(F,F)
//! expect hom(F,F) = 1
//! ```

use std::fmt;

use serde::Serialize;

use super::{Affine, Annotation, Direction, EventId, LedgerError, Problem, Relop, Ses, SlotValue};

/// A concrete slot as written, before alias resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotRef {
    pub a: String,
    pub b: String,
    pub degree: i64,
}

impl fmt::Display for SlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            0 => write!(f, "hom({},{})", self.a, self.b),
            n if n > 0 => write!(f, "ext{n}({},{})", self.a, self.b),
            n => write!(f, "ext({},{},i={n})", self.a, self.b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Int(i64),
    Param(String),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Int(n) => write!(f, "{n}"),
            Bound::Param(p) => f.write_str(p),
        }
    }
}

/// The degrees a fact ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degrees {
    Fixed(i64),
    Pred(Relop, Bound),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotPattern {
    pub a: String,
    pub b: String,
    pub degrees: Degrees,
}

impl fmt::Display for SlotPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.degrees {
            Degrees::Fixed(n) => SlotRef { a: self.a.clone(), b: self.b.clone(), degree: *n }.fmt(f),
            Degrees::Pred(op, k) => write!(f, "ext({},{},i{op}{k})", self.a, self.b),
        }
    }
}

/// `Σ coeff · param + constant` with integer coefficients, as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr(pub Vec<(i64, Option<String>)>);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, p)) in self.0.iter().enumerate() {
            let mag = c.abs();
            match (i, *c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match p {
                Some(p) if mag == 1 => f.write_str(p)?,
                Some(p) => write!(f, "{mag}*{p}")?,
                None => write!(f, "{mag}")?,
            }
        }
        Ok(())
    }
}

impl Expr {
    pub fn to_affine(&self, problem: &Problem) -> Result<Affine, LedgerError> {
        let mut out = Affine::default();
        for (c, p) in &self.0 {
            let term = match p {
                Some(p) => Affine::param(problem.param(p)?).scale(&crate::field::Rational::from_integer((*c).into())),
                None => Affine::constant(*c),
            };
            out = out.add(&term);
        }
        Ok(out)
    }
}

fn ann_name(a: Annotation) -> &'static str {
    match a {
        Annotation::Injective => "injective",
        Annotation::Surjective => "surjective",
        Annotation::Zero => "zero",
        Annotation::Nonzero => "nonzero",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Params(Vec<String>),
    Assume { param: String, op: Relop, value: i64 },
    Entities(Vec<String>),
    Alias { name: String, base: String, shift: i64 },
    Ses(Ses),
    Les { ses: String, dir: Direction, target: String },
    MaxDeg(i64),
    Fact { slot: SlotPattern, op: Relop, value: Expr, source: Option<String> },
    Map { src: SlotRef, tgt: SlotRef, boundary: bool, ann: Annotation },
    Derive(SlotRef),
    Relate(SlotRef, SlotRef),
    Expect { slot: SlotRef, value: Expr },
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Params(ps) => write!(f, "params {}", ps.join(" ")),
            Statement::Assume { param, op, value } => write!(f, "assume {param} {op} {value}"),
            Statement::Entities(es) => write!(f, "entity {}", es.join(" ")),
            Statement::Alias { name, base, shift } => write!(f, "entity {name} = {base}[{shift}]"),
            Statement::Ses(s) => write!(f, "ses {}: {} -> {} -> {}", s.name, s.a, s.b, s.c),
            Statement::Les { ses, dir, target } => {
                write!(f, "les {ses} {} {target}", if *dir == Direction::Into { "into" } else { "from" })
            }
            Statement::MaxDeg(n) => write!(f, "maxdeg {n}"),
            Statement::Fact { slot, op, value, source } => {
                write!(f, "fact {slot} {op} {value}")?;
                if let Some(s) = source {
                    write!(f, " source {s:?}")?;
                }
                Ok(())
            }
            Statement::Map { src, tgt, boundary, ann } => {
                if *boundary {
                    write!(f, "map boundary({src} -> {tgt}) {}", ann_name(*ann))
                } else {
                    write!(f, "map {src} -> {tgt} {}", ann_name(*ann))
                }
            }
            Statement::Derive(s) => write!(f, "derive {s}"),
            Statement::Relate(x, y) => write!(f, "relate {x} {y}"),
            Statement::Expect { slot, value } => write!(f, "expect {slot} = {value}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    /// Statements with their 1-based line numbers.
    pub statements: Vec<(usize, Statement)>,
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, s) in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Cursor {
    fn new(src: &str, line: usize, col0: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, col0 }
    }

    fn err(&self, msg: impl Into<String>) -> LedgerError {
        LedgerError::Parse { line: self.line, col: self.col0 + self.pos + 1, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), LedgerError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String, LedgerError> {
        self.ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '\'') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<i64, LedgerError> {
        self.ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn string(&mut self) -> Result<String, LedgerError> {
        self.expect("\"")?;
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| *c != '"') {
            self.pos += 1;
        }
        if self.pos == self.chars.len() {
            return Err(self.err("unterminated string"));
        }
        let s = self.chars[start..self.pos].iter().collect();
        self.pos += 1;
        Ok(s)
    }

    fn relop(&mut self) -> Result<Relop, LedgerError> {
        for (s, op) in [(">=", Relop::Ge), ("<=", Relop::Le), (">", Relop::Gt), ("<", Relop::Lt), ("=", Relop::Eq)] {
            if self.eat(s) {
                return Ok(op);
            }
        }
        Err(self.err("expected one of = < > <= >="))
    }

    fn bound(&mut self) -> Result<Bound, LedgerError> {
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '-') {
            Ok(Bound::Int(self.int()?))
        } else {
            Ok(Bound::Param(self.ident()?))
        }
    }

    /// `hom(A,B)`, `extN(A,B)` or `ext(A,B,<degrees>)`.
    fn slot_head(&mut self) -> Result<(String, String, Option<Degrees>), LedgerError> {
        self.ws();
        let save = self.pos;
        let word = self.ident()?;
        let fixed = if word == "hom" {
            Some(0)
        } else if word == "ext" {
            None
        } else if let Some(n) = word.strip_prefix("ext").and_then(|n| n.parse::<i64>().ok()) {
            Some(n)
        } else {
            self.pos = save;
            return Err(self.err("expected hom(..), extN(..) or ext(.., .., i..)"));
        };
        self.expect("(")?;
        let a = self.ident()?;
        self.expect(",")?;
        let b = self.ident()?;
        let degrees = match fixed {
            Some(n) => Some(Degrees::Fixed(n)),
            None => {
                self.expect(",")?;
                self.expect("i")?;
                let op = self.relop()?;
                Some(match (op, self.bound()?) {
                    (Relop::Eq, Bound::Int(n)) => Degrees::Fixed(n),
                    (op, k) => Degrees::Pred(op, k),
                })
            }
        };
        self.expect(")")?;
        Ok((a, b, degrees))
    }

    fn slot_pattern(&mut self) -> Result<SlotPattern, LedgerError> {
        let (a, b, degrees) = self.slot_head()?;
        Ok(SlotPattern { a, b, degrees: degrees.expect("always set") })
    }

    fn slot_ref(&mut self) -> Result<SlotRef, LedgerError> {
        self.ws();
        let start = self.pos;
        match self.slot_pattern()? {
            SlotPattern { a, b, degrees: Degrees::Fixed(degree) } => Ok(SlotRef { a, b, degree }),
            _ => {
                self.pos = start;
                Err(self.err("expected a single degree"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, LedgerError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat("-") { -1 } else { 1 };
        loop {
            let term = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let c = self.int()?;
                if self.eat("*") {
                    (sign * c, Some(self.ident()?))
                } else {
                    (sign * c, None)
                }
            } else {
                (sign, Some(self.ident()?))
            };
            terms.push(term);
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                return Ok(Expr(terms));
            }
        }
    }

    fn finish(&mut self) -> Result<(), LedgerError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_annotation(c: &mut Cursor) -> Result<Annotation, LedgerError> {
    c.ws();
    let start = c.pos;
    match c.ident()?.as_str() {
        "injective" => Ok(Annotation::Injective),
        "surjective" => Ok(Annotation::Surjective),
        "zero" => Ok(Annotation::Zero),
        "nonzero" => Ok(Annotation::Nonzero),
        _ => {
            c.pos = start;
            Err(c.err("expected injective, surjective, zero or nonzero"))
        }
    }
}

/// Parses one statement from `text`; `col0` is the offset of `text` within its line.
pub fn parse_statement(text: &str, line: usize, col0: usize) -> Result<Statement, LedgerError> {
    let mut c = Cursor::new(text, line, col0);
    let kw = c.ident()?;
    let stmt = match kw.as_str() {
        "params" => {
            let mut ps = vec![c.ident()?];
            while !c.at_end() {
                ps.push(c.ident()?);
            }
            Statement::Params(ps)
        }
        "assume" => {
            let param = c.ident()?;
            let op = c.relop()?;
            Statement::Assume { param, op, value: c.int()? }
        }
        "entity" => {
            let first = c.ident()?;
            if c.eat("=") {
                let base = c.ident()?;
                let shift = if c.eat("[") {
                    let s = c.int()?;
                    c.expect("]")?;
                    s
                } else {
                    0
                };
                Statement::Alias { name: first, base, shift }
            } else {
                let mut es = vec![first];
                while !c.at_end() {
                    es.push(c.ident()?);
                }
                Statement::Entities(es)
            }
        }
        "ses" => {
            let name = c.ident()?;
            c.expect(":")?;
            let a = c.ident()?;
            c.expect("->")?;
            let b = c.ident()?;
            c.expect("->")?;
            let cc = c.ident()?;
            Statement::Ses(Ses { name, a, b, c: cc })
        }
        "les" => {
            let ses = c.ident()?;
            c.ws();
            let start = c.pos;
            let dir = match c.ident()?.as_str() {
                "into" => Direction::Into,
                "from" => Direction::From,
                _ => {
                    c.pos = start;
                    return Err(c.err("expected `into` or `from`"));
                }
            };
            Statement::Les { ses, dir, target: c.ident()? }
        }
        "maxdeg" => Statement::MaxDeg(c.int()?),
        "fact" => {
            let save = c.pos;
            let word = c.ident()?;
            if !c.eat("(") {
                let op = c.relop()?;
                Statement::Assume { param: word, op, value: c.int()? }
            } else {
                c.pos = save;
                let slot = c.slot_pattern()?;
                let op = c.relop()?;
                let value = c.expr()?;
                let source = if c.eat("source") { Some(c.string()?) } else { None };
                Statement::Fact { slot, op, value, source }
            }
        }
        "map" => {
            let boundary = c.eat("boundary(");
            let src = c.slot_ref()?;
            c.expect("->")?;
            let tgt = c.slot_ref()?;
            if boundary {
                c.expect(")")?;
            }
            Statement::Map { src, tgt, boundary, ann: parse_annotation(&mut c)? }
        }
        "derive" => Statement::Derive(c.slot_ref()?),
        "relate" => {
            let x = c.slot_ref()?;
            c.eat(",");
            Statement::Relate(x, c.slot_ref()?)
        }
        "expect" => {
            let slot = c.slot_ref()?;
            c.expect("=")?;
            Statement::Expect { slot, value: c.expr()? }
        }
        other => {
            return Err(LedgerError::Parse { line, col: col0 + 1, msg: format!("unknown keyword `{other}`") });
        }
    };
    c.finish()?;
    Ok(stmt)
}

pub fn parse_program(src: &str) -> Result<Program, LedgerError> {
    parse_lines(src.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// Parses `(line number, text)` pairs, skipping blanks and comments.
pub fn parse_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Program, LedgerError> {
    let mut statements = Vec::new();
    for (n, raw) in lines {
        let body = strip_comment(raw);
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let col0 = body.len() - trimmed.len();
        statements.push((n, parse_statement(trimmed.trim_end(), n, col0)?));
    }
    Ok(Program { statements })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub line: usize,
    pub query: String,
    #[serde(flatten)]
    pub value: SlotValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub line: usize,
    pub query: String,
    pub relation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectOutcome {
    pub line: usize,
    pub slot: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerReport {
    pub derivations: Vec<Derivation>,
    pub relations: Vec<RelationReport>,
    pub expectations: Vec<ExpectOutcome>,
    /// Derived slots still unbounded above.
    pub unbounded: Vec<String>,
}

impl LedgerReport {
    pub fn all_expectations_hold(&self) -> bool {
        self.expectations.iter().all(|e| e.ok)
    }

    pub fn derivation(&self, query: &str) -> Option<&Derivation> {
        self.derivations.iter().rev().find(|d| d.query == query || d.value.slot == query)
    }
}

fn at(line: usize) -> impl Fn(LedgerError) -> LedgerError {
    move |e| match e {
        LedgerError::Parse { .. } | LedgerError::At { .. } => e,
        other => LedgerError::At { line, inner: Box::new(other) },
    }
}

fn display_slot(problem: &Problem, s: &SlotRef) -> Result<String, LedgerError> {
    let key = problem.canonical(&s.a, &s.b, s.degree)?;
    let written = s.to_string();
    let canon = key.to_string();
    Ok(if written == canon { written } else { format!("{written} i.e. {canon}") })
}

/// Degrees a pattern covers, with the parameter-bound events it relies on.
fn instances(problem: &Problem, pat: &SlotPattern, max_degree: i64) -> Result<(Vec<i64>, Vec<EventId>), LedgerError> {
    let (op, k) = match &pat.degrees {
        Degrees::Fixed(n) => return Ok((vec![*n], Vec::new())),
        Degrees::Pred(op, k) => (*op, k),
    };
    let (lo, hi, deps) = match k {
        Bound::Int(n) => (*n, Some(*n), Vec::new()),
        Bound::Param(p) => {
            let (lo, hi, lo_ev, hi_ev) = problem.bounds(problem.param(p)?);
            (lo, hi, lo_ev.into_iter().chain(hi_ev).collect())
        }
    };
    let need_hi = || hi.ok_or_else(|| LedgerError::InexactParam(k.to_string()));
    // The first slot of every sequence is in degree 0; patterns cover 0..=max_degree.
    let range: Vec<i64> = match op {
        Relop::Lt => (0..lo.min(max_degree + 1)).collect(),
        Relop::Le => (0..=lo.min(max_degree)).collect(),
        Relop::Gt => (need_hi()? + 1..=max_degree).collect(),
        Relop::Ge => (need_hi()?..=max_degree).collect(),
        Relop::Eq => {
            let h = need_hi()?;
            if h != lo {
                return Err(LedgerError::InexactParam(k.to_string()));
            }
            vec![h]
        }
    };
    Ok((range, deps))
}

/// Runs a program top to bottom: declarations and sequences first, then
/// facts, maps and queries in the order written.
pub fn run_program(program: &Program) -> Result<(Problem, LedgerReport), LedgerError> {
    let mut p = Problem::new();
    let mut max_degree = 2;
    let mut sess: Vec<Ses> = Vec::new();
    let mut les = Vec::new();
    for (line, s) in &program.statements {
        let line = *line;
        match s {
            Statement::Params(ps) => {
                for name in ps {
                    p.add_param(name).map_err(at(line))?;
                }
            }
            Statement::Entities(es) => {
                for name in es {
                    p.add_entity(name).map_err(at(line))?;
                }
            }
            Statement::Alias { name, base, shift } => p.add_alias(name, base, *shift).map_err(at(line))?,
            Statement::MaxDeg(n) => {
                if *n < 1 {
                    return Err(at(line)(LedgerError::MaxDegree));
                }
                max_degree = *n;
            }
            Statement::Ses(ses) => {
                for x in [&ses.a, &ses.b, &ses.c] {
                    p.resolve(x).map_err(at(line))?;
                }
                if sess.iter().any(|s| s.name == ses.name) {
                    return Err(at(line)(LedgerError::Duplicate(ses.name.clone())));
                }
                sess.push(ses.clone());
            }
            Statement::Les { ses, dir, target } => les.push((line, ses.clone(), *dir, target.clone())),
            _ => {}
        }
    }
    if les.is_empty() {
        for ses in &sess {
            for t in p.entities().to_vec() {
                p.derive_les(ses, Direction::Into, &t, max_degree)?;
                p.derive_les(ses, Direction::From, &t, max_degree)?;
            }
        }
    } else {
        for (line, name, dir, target) in les {
            let ses = sess.iter().find(|s| s.name == name).ok_or_else(|| at(line)(LedgerError::UnknownSequence(name.clone())))?;
            p.derive_les(ses, dir, &target, max_degree).map_err(at(line))?;
        }
    }
    let mut report = LedgerReport { derivations: Vec::new(), relations: Vec::new(), expectations: Vec::new(), unbounded: Vec::new() };
    for (line, s) in &program.statements {
        let line = *line;
        let wrap = at(line);
        match s {
            Statement::Assume { param, op, value } => {
                p.assume(param, *op, *value).map_err(&wrap)?;
            }
            Statement::Fact { slot, op, value, source } => {
                p.run().map_err(&wrap)?;
                let rhs = value.to_affine(&p).map_err(&wrap)?;
                let (degrees, deps) = instances(&p, slot, max_degree).map_err(&wrap)?;
                for i in degrees {
                    let inst = SlotRef { a: slot.a.clone(), b: slot.b.clone(), degree: i };
                    let v = p.slot(&inst.a, &inst.b, i).map_err(&wrap)?;
                    let mut text = format!("{} {op} {value}", display_slot(&p, &inst).map_err(&wrap)?);
                    if !matches!(slot.degrees, Degrees::Fixed(_)) {
                        text.push_str(&format!(" (from {slot})"));
                    }
                    if let Some(src) = source {
                        text.push_str(&format!(" [source: {src}]"));
                    }
                    p.assert_slot(v, *op, &rhs, text, &deps).map_err(&wrap)?;
                }
            }
            Statement::Map { src, tgt, boundary, ann } => {
                let s = p.find_slot(&src.a, &src.b, src.degree).map_err(&wrap)?;
                let t = p.find_slot(&tgt.a, &tgt.b, tgt.degree).map_err(&wrap)?;
                let kind = if *boundary { "connecting map " } else { "" };
                let text = format!("{kind}{src} -> {tgt} is {}", ann_name(*ann));
                p.assert_arrow(s, t, *ann, text).map_err(&wrap)?;
            }
            Statement::Derive(slot) => {
                let v = p.find_slot(&slot.a, &slot.b, slot.degree).map_err(&wrap)?;
                p.run().map_err(&wrap)?;
                let value = p.query(v);
                if value.hi.is_none() && value.exact.is_none() {
                    report.unbounded.push(value.slot.clone());
                }
                report.derivations.push(Derivation { line, query: slot.to_string(), value });
            }
            Statement::Relate(x, y) => {
                let vx = p.find_slot(&x.a, &x.b, x.degree).map_err(&wrap)?;
                let vy = p.find_slot(&y.a, &y.b, y.degree).map_err(&wrap)?;
                let rel = p.relate(vx, vy).map_err(&wrap)?;
                let relation = rel.map(|r| p.format_relation(r.x, r.y, &r.coeff, &r.offset));
                report.relations.push(RelationReport { line, query: format!("{x} {y}"), relation });
            }
            Statement::Expect { slot, value } => {
                let v = p.find_slot(&slot.a, &slot.b, slot.degree).map_err(&wrap)?;
                p.run().map_err(&wrap)?;
                let want = value.to_affine(&p).map_err(&wrap)?;
                let got = p.exact_value(v);
                let ok = got.as_ref().is_some_and(|g| p.substitute(&g.sub(&want)) == Affine::default());
                let actual = match got {
                    Some(g) => p.format_affine(&g),
                    None => p.format_interval(v),
                };
                report.expectations.push(ExpectOutcome { line, slot: slot.to_string(), expected: value.to_string(), actual, ok });
            }
            _ => {}
        }
    }
    p.run()?;
    Ok((p, report))
}

pub fn run_source(src: &str) -> Result<(Problem, LedgerReport), LedgerError> {
    run_program(&parse_program(src)?)
}
