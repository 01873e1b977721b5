//! Scenario files: one algebra context with named objects, maps, collections,
//! self-checking `expect` lines and an optional embedded ledger program.
//!
//! ```text
//! field Q
//! cy 2
//! graph A3
//! map f : P1[-1] -> P2 = class 0
//! object C = cone(f)
//! collection G = P1, P3
//! expect spherical P1 = true
//! ledger {
//!   params d
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;
use twistlab::algebra::{GraphEdge, GraphSpec};
use twistlab::field::FieldSpec;
use twistlab::ledger::{parse_statement, LedgerError, Statement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDecl {
    /// `graph A<n>`: the path graph with the default degree split.
    Path(usize),
    Explicit(GraphSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjExpr {
    Name(String),
    /// `P(v)`: the projective at vertex `v`.
    Proj(String),
    Zero,
    Shift(Box<ObjExpr>, i64),
    Sum(Vec<ObjExpr>),
    Cone(String),
    Twist(Box<ObjExpr>, Box<ObjExpr>),
    Untwist(Box<ObjExpr>, Box<ObjExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSpec {
    /// The `i`-th basis class of `H^0(Hom(source, target))`.
    Class(usize),
    /// Coefficients on the basis classes, as field literals.
    Combo(Vec<String>),
    Random,
    Zero,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    pub source: ObjExpr,
    pub target: ObjExpr,
    pub spec: MapSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Orthogonal,
    Equal,
    NotCommute,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Orthogonal => "COMMUTE_ORTHOGONAL",
            Verdict::Equal => "COMMUTE_EQUAL",
            Verdict::NotCommute => "NOT_COMMUTE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    Spherical(ObjExpr, bool),
    Ext(ObjExpr, ObjExpr, BTreeMap<i64, usize>),
    Orthogonal(ObjExpr, ObjExpr, bool),
    Iso(ObjExpr, ObjExpr, bool),
    Commute(ObjExpr, ObjExpr, Verdict),
    Member(ObjExpr, ObjExpr, bool),
    DE(ObjExpr, ObjExpr, usize),
    StronglySpherical(String, bool),
    /// Total number of indecomposable summands.
    Summands(ObjExpr, usize),
    /// Whether the summands recover a strongly spherical collection.
    Recover(ObjExpr, bool),
    Class(ObjExpr, Vec<i64>),
}

/// Ledger statements with their file lines; lines never affect equality.
#[derive(Clone, Debug)]
pub struct LedgerBlock {
    pub statements: Vec<Statement>,
    pub lines: Vec<usize>,
}

impl PartialEq for LedgerBlock {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Eq for LedgerBlock {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Field(FieldSpec),
    Cy(i64),
    Algebra(String),
    Graph(GraphDecl),
    Object { name: String, expr: ObjExpr },
    Map(MapDecl),
    Collection { name: String, members: Vec<ObjExpr> },
    Expect(Expect),
    Ledger(LedgerBlock),
}

/// A parsed file. `lines[i]` is the 1-based line of `items[i]`; equality ignores it.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub items: Vec<Item>,
    pub lines: Vec<usize>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for Scenario {}

impl Scenario {
    pub fn field(&self) -> FieldSpec {
        self.items
            .iter()
            .find_map(|i| match i {
                Item::Field(f) => Some(*f),
                _ => None,
            })
            .unwrap_or(FieldSpec::Rationals)
    }

    pub fn with_lines(&self) -> impl Iterator<Item = (usize, &Item)> {
        self.lines.iter().copied().zip(&self.items)
    }

    pub fn ledger(&self) -> Option<&LedgerBlock> {
        self.items.iter().find_map(|i| match i {
            Item::Ledger(b) => Some(b),
            _ => None,
        })
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T], sep: &str) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjExpr::Name(n) => write!(f, "{n}"),
            ObjExpr::Proj(v) => write!(f, "P({v})"),
            ObjExpr::Zero => write!(f, "zero"),
            ObjExpr::Shift(x, n) => match **x {
                ObjExpr::Sum(_) => write!(f, "({x})[{n}]"),
                _ => write!(f, "{x}[{n}]"),
            },
            ObjExpr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match x {
                        ObjExpr::Sum(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            ObjExpr::Cone(m) => write!(f, "cone({m})"),
            ObjExpr::Twist(e, g) => write!(f, "twist({e}, {g})"),
            ObjExpr::Untwist(e, g) => write!(f, "untwist({e}, {g})"),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Class(i) => write!(f, "class {i}"),
            MapSpec::Combo(cs) => {
                f.write_str("combo ")?;
                write_list(f, cs, " ")
            }
            MapSpec::Random => write!(f, "random"),
            MapSpec::Zero => write!(f, "zero"),
            MapSpec::Identity => write!(f, "identity"),
        }
    }
}

pub fn format_table(t: &BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = t.iter().map(|(i, v)| format!("{i}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Spherical(x, b) => write!(f, "spherical {x} = {b}"),
            Expect::Ext(x, y, t) => write!(f, "ext {x}, {y} = {}", format_table(t)),
            Expect::Orthogonal(x, y, b) => write!(f, "orthogonal {x}, {y} = {b}"),
            Expect::Iso(x, y, b) => write!(f, "iso {x}, {y} = {b}"),
            Expect::Commute(x, y, v) => write!(f, "commute {x}, {y} = {}", v.name()),
            Expect::Member(e, g, b) => write!(f, "member {e}, {g} = {b}"),
            Expect::DE(e, g, n) => write!(f, "d_e {e}, {g} = {n}"),
            Expect::StronglySpherical(c, b) => write!(f, "strongly-spherical {c} = {b}"),
            Expect::Summands(x, n) => write!(f, "summands {x} = {n}"),
            Expect::Recover(x, b) => write!(f, "recover {x} = {b}"),
            Expect::Class(x, v) => {
                write!(f, "class {x} = [")?;
                write_list(f, v, ", ")?;
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match item {
                Item::Field(s) => writeln!(f, "field {s}")?,
                Item::Cy(d) => writeln!(f, "cy {d}")?,
                Item::Algebra(k) => writeln!(f, "algebra {k}")?,
                Item::Graph(GraphDecl::Path(n)) => writeln!(f, "graph A{n}")?,
                Item::Graph(GraphDecl::Explicit(g)) => {
                    writeln!(f, "graph {{")?;
                    writeln!(f, "  vertices {}", g.vertices.join(" "))?;
                    for e in &g.edges {
                        writeln!(f, "  edge {} {} {} {}", e.a, e.b, e.degree_ab, e.degree_ba)?;
                    }
                    writeln!(f, "}}")?;
                }
                Item::Object { name, expr } => writeln!(f, "object {name} = {expr}")?,
                Item::Map(m) => writeln!(f, "map {} : {} -> {} = {}", m.name, m.source, m.target, m.spec)?,
                Item::Collection { name, members } => {
                    write!(f, "collection {name} = ")?;
                    write_list(f, members, ", ")?;
                    writeln!(f)?;
                }
                Item::Expect(e) => writeln!(f, "expect {e}")?,
                Item::Ledger(b) => {
                    writeln!(f, "ledger {{")?;
                    for s in &b.statements {
                        writeln!(f, "  {s}")?;
                    }
                    writeln!(f, "}}")?;
                }
            }
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]` minus one.
    col0: usize,
    _src: &'a str,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.')
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, col0, _src: src }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, col: self.col0 + self.pos + 1, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn mark(&mut self) -> usize {
        self.ws();
        self.pos
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            let next = self.chars.get(self.pos + n).copied();
            let word = s.chars().last().is_some_and(is_ident_char);
            if word && next.is_some_and(is_ident_char) {
                return false;
            }
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.ws();
        let start = self.pos;
        while self.chars.get(self.pos).copied().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        match s.parse() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        let save = self.mark();
        let n = self.int()?;
        usize::try_from(n).or_else(|_| {
            self.pos = save;
            self.err("expected a nonnegative integer")
        })
    }

    fn rest(&mut self) -> String {
        self.ws();
        let s: String = self.chars[self.pos..].iter().collect();
        self.pos = self.chars.len();
        s.trim_end().to_string()
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn bool(&mut self) -> Result<bool, ParseError> {
        if self.eat("true") {
            Ok(true)
        } else if self.eat("false") {
            Ok(false)
        } else {
            self.err("expected `true` or `false`")
        }
    }

    fn sum(&mut self) -> Result<ObjExpr, ParseError> {
        let mut parts = vec![self.shifted()?];
        while self.eat("+") {
            parts.push(self.shifted()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { ObjExpr::Sum(parts) })
    }

    fn shifted(&mut self) -> Result<ObjExpr, ParseError> {
        let mut x = self.atom()?;
        while self.eat("[") {
            let n = self.int()?;
            self.expect("]")?;
            x = ObjExpr::Shift(Box::new(x), n);
        }
        Ok(x)
    }

    fn pair(&mut self) -> Result<(ObjExpr, ObjExpr), ParseError> {
        self.expect("(")?;
        let a = self.sum()?;
        self.expect(",")?;
        let b = self.sum()?;
        self.expect(")")?;
        Ok((a, b))
    }

    fn atom(&mut self) -> Result<ObjExpr, ParseError> {
        if self.eat("(") {
            let x = self.sum()?;
            self.expect(")")?;
            return Ok(x);
        }
        let save = self.mark();
        let name = self.ident()?;
        let call = self.peek() == Some('(');
        match name.as_str() {
            "zero" if !call => Ok(ObjExpr::Zero),
            "P" if call => {
                self.expect("(")?;
                let v = self.ident()?;
                self.expect(")")?;
                Ok(ObjExpr::Proj(v))
            }
            "cone" if call => {
                self.expect("(")?;
                let m = self.ident()?;
                self.expect(")")?;
                Ok(ObjExpr::Cone(m))
            }
            "twist" if call => {
                let (a, b) = self.pair()?;
                Ok(ObjExpr::Twist(Box::new(a), Box::new(b)))
            }
            "untwist" if call => {
                let (a, b) = self.pair()?;
                Ok(ObjExpr::Untwist(Box::new(a), Box::new(b)))
            }
            _ if call => {
                self.pos = save;
                self.err(format!("unknown constructor `{name}`"))
            }
            _ => Ok(ObjExpr::Name(name)),
        }
    }

    fn args(&mut self, n: usize) -> Result<Vec<ObjExpr>, ParseError> {
        let mut out = vec![self.sum()?];
        for _ in 1..n {
            self.expect(",")?;
            out.push(self.sum()?);
        }
        Ok(out)
    }

    fn table(&mut self) -> Result<BTreeMap<i64, usize>, ParseError> {
        self.expect("{")?;
        let mut t = BTreeMap::new();
        if self.eat("}") {
            return Ok(t);
        }
        loop {
            let i = self.int()?;
            self.expect(":")?;
            let v = self.uint()?;
            if v > 0 {
                t.insert(i, v);
            }
            if self.eat("}") {
                return Ok(t);
            }
            self.expect(",")?;
        }
    }

    fn class(&mut self) -> Result<Vec<i64>, ParseError> {
        self.expect("[")?;
        let mut v = Vec::new();
        if self.eat("]") {
            return Ok(v);
        }
        loop {
            v.push(self.int()?);
            if self.eat("]") {
                return Ok(v);
            }
            self.expect(",")?;
        }
    }

    fn expectation(&mut self) -> Result<Expect, ParseError> {
        let save = self.mark();
        let mut kind = self.ident()?;
        if kind == "strongly" && self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
            kind = format!("strongly-{}", self.ident()?);
        }
        let e = match kind.as_str() {
            "spherical" => {
                let x = self.sum()?;
                self.expect("=")?;
                Expect::Spherical(x, self.bool()?)
            }
            "ext" | "orthogonal" | "iso" | "commute" | "member" | "d_e" => {
                let mut a = self.args(2)?;
                self.expect("=")?;
                let y = a.pop().expect("two args");
                let x = a.pop().expect("two args");
                match kind.as_str() {
                    "ext" => Expect::Ext(x, y, self.table()?),
                    "orthogonal" => Expect::Orthogonal(x, y, self.bool()?),
                    "iso" => Expect::Iso(x, y, self.bool()?),
                    "member" => Expect::Member(x, y, self.bool()?),
                    "d_e" => Expect::DE(x, y, self.uint()?),
                    _ => {
                        let v = match self.ident()?.as_str() {
                            "COMMUTE_ORTHOGONAL" => Verdict::Orthogonal,
                            "COMMUTE_EQUAL" => Verdict::Equal,
                            "NOT_COMMUTE" => Verdict::NotCommute,
                            _ => return self.err("expected COMMUTE_ORTHOGONAL, COMMUTE_EQUAL or NOT_COMMUTE"),
                        };
                        Expect::Commute(x, y, v)
                    }
                }
            }
            "strongly-spherical" => {
                let c = self.ident()?;
                self.expect("=")?;
                Expect::StronglySpherical(c, self.bool()?)
            }
            "summands" => {
                let x = self.sum()?;
                self.expect("=")?;
                Expect::Summands(x, self.uint()?)
            }
            "recover" => {
                let x = self.sum()?;
                self.expect("=")?;
                Expect::Recover(x, self.bool()?)
            }
            "class" => {
                let x = self.sum()?;
                self.expect("=")?;
                Expect::Class(x, self.class()?)
            }
            _ => {
                self.pos = save;
                return self.err(format!("unknown expectation `{kind}`"));
            }
        };
        Ok(e)
    }
}

fn parse_field(c: &mut Cursor<'_>) -> Result<FieldSpec, ParseError> {
    let save = c.mark();
    let name = c.ident()?;
    if name == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let p = name.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()).and_then(FieldSpec::prime);
    p.ok_or_else(|| {
        c.pos = save;
        ParseError { line: c.line, col: c.col0 + c.pos + 1, msg: format!("unknown field `{name}` (use Q or F<prime>)") }
    })
}

fn parse_map(c: &mut Cursor<'_>) -> Result<MapDecl, ParseError> {
    let name = c.ident()?;
    c.expect(":")?;
    let source = c.sum()?;
    c.expect("->")?;
    let target = c.sum()?;
    c.expect("=")?;
    let save = c.mark();
    let spec = match c.ident()?.as_str() {
        "class" => MapSpec::Class(c.uint()?),
        "combo" => {
            let mut cs = Vec::new();
            while c.peek().is_some() {
                c.ws();
                let start = c.pos;
                while c.chars.get(c.pos).is_some_and(|ch| !ch.is_whitespace()) {
                    c.pos += 1;
                }
                cs.push(c.chars[start..c.pos].iter().collect());
            }
            if cs.is_empty() {
                return c.err("expected coefficients");
            }
            MapSpec::Combo(cs)
        }
        "random" => MapSpec::Random,
        "zero" => MapSpec::Zero,
        "identity" => MapSpec::Identity,
        other => {
            c.pos = save;
            return c.err(format!("unknown map `{other}` (class, combo, random, zero, identity)"));
        }
    };
    Ok(MapDecl { name, source, target, spec })
}

fn ledger_error(e: LedgerError) -> ParseError {
    match e {
        LedgerError::Parse { line, col, msg } => ParseError { line, col, msg },
        other => ParseError { line: 0, col: 0, msg: other.to_string() },
    }
}

enum Block {
    Graph { line: usize, vertices: Option<Vec<String>>, edges: Vec<GraphEdge> },
    Ledger { line: usize, block: LedgerBlock },
}

pub fn parse_scenario(src: &str) -> Result<Scenario, ParseError> {
    let mut items = Vec::new();
    let mut lines = Vec::new();
    let mut open: Option<Block> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim_start();
        let col0 = body.len() - trimmed.len();
        let text = trimmed.trim_end();
        if text.is_empty() {
            continue;
        }
        if text == "}" {
            match open.take() {
                Some(Block::Graph { line: l, vertices, edges }) => {
                    let Some(vertices) = vertices else {
                        return Err(ParseError { line: l, col: 1, msg: "graph block has no `vertices` line".into() });
                    };
                    items.push(Item::Graph(GraphDecl::Explicit(GraphSpec { vertices, edges })));
                    lines.push(l);
                }
                Some(Block::Ledger { line: l, block }) => {
                    items.push(Item::Ledger(block));
                    lines.push(l);
                }
                None => return Err(ParseError { line, col: col0 + 1, msg: "unmatched `}`".into() }),
            }
            continue;
        }
        let mut c = Cursor::new(text, line, col0);
        match &mut open {
            Some(Block::Ledger { block, .. }) => {
                block.statements.push(parse_statement(text, line, col0).map_err(ledger_error)?);
                block.lines.push(line);
                continue;
            }
            Some(Block::Graph { vertices, edges, .. }) => {
                if c.eat("vertices") {
                    let mut vs = Vec::new();
                    while c.peek().is_some() {
                        vs.push(c.ident()?);
                    }
                    *vertices = Some(vs);
                } else if c.eat("edge") {
                    let a = c.ident()?;
                    let b = c.ident()?;
                    let degree_ab = c.int()?;
                    let degree_ba = c.int()?;
                    c.finish()?;
                    edges.push(GraphEdge { a, b, degree_ab, degree_ba });
                } else {
                    return c.err("expected `vertices`, `edge` or `}`");
                }
                continue;
            }
            None => {}
        }
        let save = c.mark();
        let kw = c.ident()?;
        let item = match kw.as_str() {
            "field" => Item::Field(parse_field(&mut c)?),
            "cy" => Item::Cy(c.int()?),
            "algebra" => {
                let save = c.mark();
                let k = c.ident()?;
                if k != "zigzag" {
                    c.pos = save;
                    return c.err(format!("unknown algebra kind `{k}` (only zigzag)"));
                }
                Item::Algebra(k)
            }
            "graph" => {
                if c.eat("{") {
                    c.finish()?;
                    open = Some(Block::Graph { line, vertices: None, edges: Vec::new() });
                    continue;
                }
                let save = c.mark();
                let name = c.ident()?;
                match name.strip_prefix('A').and_then(|n| n.parse::<usize>().ok()).filter(|&n| n >= 1) {
                    Some(n) => Item::Graph(GraphDecl::Path(n)),
                    None => {
                        c.pos = save;
                        return c.err("expected `A<n>` or `{`");
                    }
                }
            }
            "object" => {
                let name = c.ident()?;
                c.expect("=")?;
                Item::Object { name, expr: c.sum()? }
            }
            "map" => Item::Map(parse_map(&mut c)?),
            "collection" => {
                let name = c.ident()?;
                c.expect("=")?;
                let mut members = vec![c.sum()?];
                while c.eat(",") {
                    members.push(c.sum()?);
                }
                Item::Collection { name, members }
            }
            "expect" => Item::Expect(c.expectation()?),
            "ledger" => {
                c.expect("{")?;
                c.finish()?;
                open = Some(Block::Ledger { line, block: LedgerBlock { statements: Vec::new(), lines: Vec::new() } });
                continue;
            }
            _ => {
                c.pos = save;
                let _ = c.rest();
                return Err(ParseError { line, col: col0 + 1, msg: format!("unknown keyword `{kw}`") });
            }
        };
        c.finish()?;
        items.push(item);
        lines.push(line);
    }
    if let Some(b) = open {
        let line = match b {
            Block::Graph { line, .. } | Block::Ledger { line, .. } => line,
        };
        return Err(ParseError { line, col: 1, msg: "unclosed block".into() });
    }
    Ok(Scenario { items, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
field Q
cy 2
algebra zigzag
graph A3
map f : P1[-1] -> P2 = class 0   # the arrow
object C = cone(f)
object S = (P1 + P3)[2] + zero + P(3)
object T = twist(P1, untwist(P2, C))
collection G = P1, P3
expect spherical P1 = true
expect ext P1, P2 = {1:1}
expect commute P1, P3 = COMMUTE_ORTHOGONAL
expect class C = [-1, 1, 0]
ledger {
  params d
  entity A
}
";

    #[test]
    fn parses_and_round_trips() {
        let s = parse_scenario(SAMPLE).unwrap();
        assert_eq!(s.items.len(), 14);
        assert_eq!(s.lines[4], 5);
        let printed = s.to_string();
        assert_eq!(parse_scenario(&printed).unwrap(), s);
        assert_eq!(parse_scenario(&printed).unwrap().to_string(), printed);
        assert_eq!(s.ledger().unwrap().lines, vec![15, 16]);
    }

    #[test]
    fn explicit_graph_block() {
        let s = parse_scenario("graph {\n  vertices a b\n  edge a b 1 2\n}\ncy 3\n").unwrap();
        let Item::Graph(GraphDecl::Explicit(g)) = &s.items[0] else { panic!() };
        assert_eq!(g.vertices, vec!["a", "b"]);
        assert_eq!(g.edges[0].degree_ba, 2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_scenario("field Q\nobject X = cone(f\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 18));
        let e = parse_scenario("  frobnicate 3\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        let e = parse_scenario("field F100\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        let e = parse_scenario("expect ext P1 P2 = {}\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 15));
        let e = parse_scenario("ledger {\n  bogus\n}\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        let e = parse_scenario("ledger {\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
