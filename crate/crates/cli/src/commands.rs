//! Subcommand dispatch and report assembly.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use twistlab::algebra::validate;
use twistlab::analysis::{classify, commute_classify, d_e, is_spherical, is_strongly_spherical, thick_membership, CommuteVerdict};
use twistlab::complex::TwistedComplex;
use twistlab::config::Config;
use twistlab::decompose::recover_collection;
use twistlab::error::TwistError;
use twistlab::field::Field;
use twistlab::hom::ext_table;
use twistlab::ktheory::{class_of, LatticeModel};
use twistlab::ledger::{parse_program, run_program, LedgerError, LedgerReport, Program};
use twistlab::minimal::is_isomorphic;
use twistlab::twist::{inverse_twist, twist};

use crate::model::{check_field, table_json, verdict_of, Model};
use crate::render::render_text;
use crate::scenario::{parse_scenario, ParseError, Scenario};
use crate::with_field;

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXPECTATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "twistlab", version, about = "Spherical twists on zigzag algebras, driven by scenario files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit a single JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Objects must keep summand shifts within [-W, W].
    #[arg(long, global = true, default_value_t = 16, value_name = "W", value_parser = clap::value_parser!(i64).range(0..))]
    pub max_shift: i64,
    /// Cap on candidates tried by peeling and idempotent searches.
    #[arg(long, global = true, default_value_t = 64)]
    pub budget: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ext table and classification of one object against itself.
    CheckSpherical {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Whether the twists along two objects commute.
    Commute {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1, value_name = "A,B")]
        pair: Vec<String>,
        /// Comma-separated object or collection names, or `all-proj`.
        #[arg(long, default_value = "all-proj")]
        generators: String,
    },
    /// Membership of G in the thick subcategory generated by E.
    Member {
        file: PathBuf,
        #[arg(long = "e")]
        e: String,
        #[arg(long = "g")]
        g: String,
    },
    /// The twist of G along E.
    Twist {
        file: PathBuf,
        #[arg(long = "e")]
        e: String,
        #[arg(long = "g")]
        g: String,
    },
    /// Indecomposable summands and the collection they recover.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Runs a ledger program (`.ledger`) or a scenario's ledger block.
    Ledger { file: PathBuf },
    /// Euler form, classes of named objects and reflection checks.
    Ktheory { file: PathBuf },
    /// Checks the algebra, builds every name and evaluates all expectations.
    Validate { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckSpherical { .. } => "check-spherical",
            Command::Commute { .. } => "commute",
            Command::Member { .. } => "member",
            Command::Twist { .. } => "twist",
            Command::Decompose { .. } => "decompose",
            Command::Ledger { .. } => "ledger",
            Command::Ktheory { .. } => "ktheory",
            Command::Validate { .. } => "validate",
        }
    }

    fn file(&self) -> &Path {
        match self {
            Command::CheckSpherical { file, .. }
            | Command::Commute { file, .. }
            | Command::Member { file, .. }
            | Command::Twist { file, .. }
            | Command::Decompose { file, .. }
            | Command::Ledger { file }
            | Command::Ktheory { file }
            | Command::Validate { file } => file,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An input problem: exit code 2 with a positional message.
#[derive(Debug)]
struct InputError(String);

impl InputError {
    fn at(file: &Path, e: &ParseError) -> Self {
        InputError(format!("{}:{}:{}: {}", file.display(), e.line, e.col, e.msg))
    }

    fn arg(flag: &str, msg: impl std::fmt::Display) -> Self {
        InputError(format!("argument {flag}: {msg}"))
    }

    fn ledger(file: &Path, e: &LedgerError) -> Self {
        match e {
            LedgerError::Parse { line, col, msg } => InputError(format!("{}:{line}:{col}: {msg}", file.display())),
            LedgerError::At { line, inner } => InputError(format!("{}:{line}:1: {inner}", file.display())),
            other => InputError(format!("{}: {other}", file.display())),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let file = cli.command.file();
    match dispatch(cli) {
        Ok(body) => finish(cli, file, body),
        Err(InputError(msg)) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn finish(cli: &Cli, file: &Path, body: Map<String, Value>) -> Outcome {
    let mut failures = Vec::new();
    if let Some(Value::Array(es)) = body.get("expectations") {
        for e in es {
            if e["ok"] == Value::Bool(false) {
                failures.push(format!(
                    "{}:{}: expectation failed: {} (got {})",
                    file.display(),
                    e["line"],
                    e["check"].as_str().or(e["slot"].as_str()).unwrap_or(""),
                    e["actual"].as_str().unwrap_or("")
                ));
            }
        }
    }
    if let Some(Value::Array(es)) = body.get("ledger").and_then(|l| l.get("expectations")) {
        for e in es {
            if e["ok"] == Value::Bool(false) {
                failures.push(format!(
                    "{}:{}: ledger expectation failed: {} = {} (got {})",
                    file.display(),
                    e["line"],
                    e["slot"].as_str().unwrap_or(""),
                    e["expected"].as_str().unwrap_or(""),
                    e["actual"].as_str().unwrap_or("")
                ));
            }
        }
    }
    let mut report = Map::new();
    report.insert("command".into(), cli.command.name().into());
    report.insert("file".into(), file.display().to_string().into());
    report.insert("seed".into(), cli.seed.into());
    report.extend(body);
    report.insert("ok".into(), failures.is_empty().into());
    let report = Value::Object(report);
    let stdout = if cli.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        render_text(&report)
    };
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_EXPECTATION };
    let stderr = failures.iter().map(|f| format!("{f}\n")).collect();
    Outcome { code, stdout, stderr }
}

fn config(cli: &Cli) -> Config {
    Config { seed: cli.seed, max_shift: cli.max_shift, budget: cli.budget }
}

fn ledger_json(report: &LedgerReport) -> Value {
    serde_json::to_value(report).expect("ledger report serializes")
}

fn run_ledger(file: &Path, program: &Program) -> Result<Value, InputError> {
    let (_, report) = run_program(program).map_err(|e| InputError::ledger(file, &e))?;
    Ok(ledger_json(&report))
}

fn dispatch(cli: &Cli) -> Result<Map<String, Value>, InputError> {
    let file = cli.command.file();
    let src = std::fs::read_to_string(file).map_err(|e| InputError(format!("{}: {e}", file.display())))?;
    if matches!(cli.command, Command::Ledger { .. }) && file.extension().is_some_and(|x| x == "ledger") {
        let program = parse_program(&src).map_err(|e| InputError::ledger(file, &e))?;
        let mut body = Map::new();
        body.insert("ledger".into(), run_ledger(file, &program)?);
        return Ok(body);
    }
    let scenario = parse_scenario(&src).map_err(|e| InputError::at(file, &e))?;
    let spec = scenario.field();
    check_field(spec).map_err(|msg| {
        let line = scenario.with_lines().find(|(_, i)| matches!(i, crate::scenario::Item::Field(_))).map_or(1, |(l, _)| l);
        InputError::at(file, &ParseError { line, col: 7, msg })
    })?;
    with_field!(spec, K => scenario_command::<K>(cli, file, &src, &scenario), unreachable!("field checked"))
}

fn scenario_command<K: Field>(cli: &Cli, file: &Path, src: &str, scenario: &Scenario) -> Result<Map<String, Value>, InputError> {
    let model = Model::<K>::build(scenario, src, config(cli)).map_err(|e| InputError::at(file, &e))?;
    let mut body = Map::new();
    body.insert("field".into(), model.alg.field().to_string().into());
    body.insert("cy".into(), model.d.into());
    let result = match &cli.command {
        Command::CheckSpherical { object, .. } => check_spherical(&model, object),
        Command::Commute { pair, generators, .. } => commute(&model, pair, generators),
        Command::Member { e, g, .. } => member(&model, e, g),
        Command::Twist { e, g, .. } => twist_report(&model, e, g),
        Command::Decompose { object, .. } => decompose(&model, object),
        Command::Ledger { .. } => {
            let Some(block) = scenario.ledger() else {
                return Err(InputError(format!("{}: no ledger block", file.display())));
            };
            let program = Program { statements: block.lines.iter().copied().zip(block.statements.iter().cloned()).collect() };
            Ok(Map::from_iter([("ledger".to_string(), run_ledger(file, &program)?)]))
        }
        Command::Ktheory { .. } => ktheory(&model),
        Command::Validate { .. } => {
            let mut m = validate_report(&model)?;
            if let Some(block) = scenario.ledger() {
                let program = Program { statements: block.lines.iter().copied().zip(block.statements.iter().cloned()).collect() };
                m.insert("ledger".into(), run_ledger(file, &program)?);
            }
            Ok(m)
        }
    }?;
    body.extend(result);
    let expectations = model.check_expectations(scenario).map_err(|e| InputError::at(file, &e))?;
    body.insert("expectations".into(), serde_json::to_value(expectations).expect("serializes"));
    Ok(body)
}

fn lookup<'m, K: Field>(model: &'m Model<K>, flag: &str, name: &str) -> Result<&'m TwistedComplex<K>, InputError> {
    model.object(name).ok_or_else(|| InputError::arg(flag, format!("unknown object `{name}`")))
}

fn compute<T>(r: Result<T, TwistError>) -> Result<T, InputError> {
    r.map_err(|e| InputError(e.to_string()))
}

fn check_spherical<K: Field>(model: &Model<K>, name: &str) -> Result<Map<String, Value>, InputError> {
    let x = lookup(model, "--object", name)?;
    let t = compute(ext_table(x, x))?;
    let c = compute(classify(x, model.d))?;
    let mut m = Map::new();
    m.insert("object".into(), name.into());
    m.insert("complex".into(), x.describe().into());
    m.insert("ext_table".into(), table_json(t.entries()));
    m.insert("simple".into(), c.simple.into());
    m.insert("rigid".into(), c.rigid.into());
    m.insert("exceptional".into(), c.exceptional.into());
    m.insert("spherical".into(), c.spherical.into());
    Ok(m)
}

fn generators<K: Field>(model: &Model<K>, spec: &str) -> Result<(Vec<String>, Vec<TwistedComplex<K>>), InputError> {
    if spec == "all-proj" {
        let names = model.alg.vertices().iter().map(|v| format!("P{v}")).collect();
        return Ok((names, model.projectives()));
    }
    let mut names = Vec::new();
    let mut objs = Vec::new();
    for n in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(c) = model.collection(n) {
            for (i, x) in c.iter().enumerate() {
                names.push(format!("{n}[{i}]"));
                objs.push(x.clone());
            }
        } else {
            objs.push(lookup(model, "--generators", n)?.clone());
            names.push(n.to_string());
        }
    }
    if objs.is_empty() {
        return Err(InputError::arg("--generators", "empty generator list"));
    }
    Ok((names, objs))
}

fn commute<K: Field>(model: &Model<K>, pair: &[String], gens: &str) -> Result<Map<String, Value>, InputError> {
    let [a, b] = pair else {
        return Err(InputError::arg("--pair", "expected two names A,B"));
    };
    let (e, f) = (lookup(model, "--pair", a)?, lookup(model, "--pair", b)?);
    let (names, objs) = generators(model, gens)?;
    let r = compute(commute_classify(e, f, &objs, model.d, &model.cfg))?;
    let mut m = Map::new();
    m.insert("pair".into(), json!([a, b]));
    m.insert("generators".into(), json!(names));
    m.insert("verdict".into(), verdict_of(&r.verdict).name().into());
    match &r.verdict {
        CommuteVerdict::CommuteOrthogonal { orthogonality_confirmed } => {
            m.insert("orthogonality_confirmed".into(), (*orthogonality_confirmed).into());
        }
        CommuteVerdict::CommuteEqual { shift } => {
            m.insert("shift".into(), (*shift).into());
        }
        CommuteVerdict::NotCommute { generator } => {
            let g = &objs[*generator];
            let ef = compute(twist(e, &compute(twist(f, g))?))?;
            let fe = compute(twist(f, &compute(twist(e, g))?))?;
            let dims = |x: &TwistedComplex<K>| -> Result<Vec<usize>, InputError> {
                model.projectives().iter().map(|p| compute(d_e(p, x))).collect()
            };
            m.insert(
                "witness".into(),
                json!({
                    "generator": names[*generator],
                    "complex": g.describe(),
                    "t_a_t_b": ef.describe(),
                    "t_b_t_a": fe.describe(),
                    "t_a_t_b_hom_from_projectives": dims(&ef)?,
                    "t_b_t_a_hom_from_projectives": dims(&fe)?,
                }),
            );
        }
    }
    m.insert("generators_checked".into(), r.generators_checked.into());
    Ok(m)
}

fn member<K: Field>(model: &Model<K>, e: &str, g: &str) -> Result<Map<String, Value>, InputError> {
    let (x, y) = (lookup(model, "--e", e)?, lookup(model, "--g", g)?);
    let r = compute(thick_membership(x, y, model.d, &model.cfg))?;
    let mut m = Map::new();
    m.insert("e".into(), e.into());
    m.insert("g".into(), g.into());
    m.insert("g_complex".into(), y.describe().into());
    if let Value::Object(fields) = serde_json::to_value(&r).expect("serializes") {
        m.extend(fields);
    }
    Ok(m)
}

fn twist_report<K: Field>(model: &Model<K>, e: &str, g: &str) -> Result<Map<String, Value>, InputError> {
    let (x, y) = (lookup(model, "--e", e)?, lookup(model, "--g", g)?);
    let t = compute(twist(x, y))?;
    let back = compute(inverse_twist(x, &t))?;
    let lattice = LatticeModel::of_algebra(&model.alg);
    let ce = compute(class_of(x, &lattice))?;
    let cg = compute(class_of(y, &lattice))?;
    let ct = compute(class_of(&t, &lattice))?;
    let reflected = compute(lattice.reflect(&ce, &cg))?;
    let mut m = Map::new();
    m.insert("e".into(), e.into());
    m.insert("g".into(), g.into());
    m.insert("e_spherical".into(), compute(is_spherical(x, model.d))?.into());
    m.insert("ext_table".into(), table_json(compute(ext_table(x, y))?.entries()));
    m.insert("d_e".into(), compute(d_e(x, y))?.into());
    m.insert("twist".into(), t.describe().into());
    m.insert("twist_summands".into(), t.len().into());
    m.insert("twist_class".into(), json!(ct.0));
    m.insert("reflection".into(), json!(reflected.0));
    m.insert("class_matches_reflection".into(), (ct == reflected).into());
    m.insert("inverse_round_trip".into(), compute(is_isomorphic(&back, y, model.cfg.seed))?.isomorphic.into());
    Ok(m)
}

fn decompose<K: Field>(model: &Model<K>, name: &str) -> Result<Map<String, Value>, InputError> {
    let x = lookup(model, "--object", name)?;
    let r = compute(recover_collection(x, model.d, &model.cfg))?;
    let pieces: Vec<Value> = r
        .split
        .pieces
        .iter()
        .map(|p| json!({"complex": p.object.describe(), "multiplicity": p.multiplicity, "spherical": p.is_spherical, "resolved": p.resolved}))
        .collect();
    let commute: Vec<Value> = r
        .commute
        .iter()
        .map(|c| json!({"first": c.first, "second": c.second, "verdict": verdict_of(&c.report.verdict).name()}))
        .collect();
    let mut m = Map::new();
    m.insert("object".into(), name.into());
    m.insert("complex".into(), x.describe().into());
    m.insert("summands".into(), r.split.total().into());
    m.insert("verified".into(), r.split.verified.into());
    m.insert("complete".into(), r.split.is_complete().into());
    m.insert("pieces".into(), pieces.into());
    m.insert("orthogonality".into(), json!(r.split.orthogonality));
    m.insert("members".into(), json!(r.members.iter().map(TwistedComplex::describe).collect::<Vec<_>>()));
    m.insert("multiplicities".into(), json!(r.multiplicities));
    m.insert("shifts".into(), json!(r.shifts));
    m.insert("strongly_spherical".into(), r.strongly_spherical().into());
    m.insert("diagnostic".into(), serde_json::to_value(r.diagnostic).expect("serializes"));
    m.insert("commute".into(), commute.into());
    Ok(m)
}

fn ktheory<K: Field>(model: &Model<K>) -> Result<Map<String, Value>, InputError> {
    let lattice = LatticeModel::of_algebra(&model.alg);
    let classes: Vec<Value> = model
        .objects
        .iter()
        .map(|(n, x)| Ok(json!({"object": n, "class": compute(class_of(x, &lattice))?.0})))
        .collect::<Result<_, InputError>>()?;
    let mut reflections = Vec::new();
    for (en, e) in &model.objects {
        if !compute(is_spherical(e, model.d))? {
            continue;
        }
        let ce = compute(class_of(e, &lattice))?;
        for (gn, g) in &model.objects {
            let cg = compute(class_of(g, &lattice))?;
            let ct = compute(class_of(&compute(twist(e, g))?, &lattice))?;
            let want = compute(lattice.reflect(&ce, &cg))?;
            reflections.push(json!({"e": en, "g": gn, "twist_class": ct.0, "reflection": want.0, "ok": ct == want}));
        }
    }
    let non_spherical: Vec<&String> = lattice.non_spherical_diagonal().into_iter().map(|i| &lattice.labels[i]).collect();
    let mut m = Map::new();
    m.insert("labels".into(), json!(lattice.labels));
    m.insert("gram".into(), json!(lattice.gram));
    m.insert("violations".into(), json!(lattice.invariant_violations()));
    m.insert("non_spherical_diagonal".into(), json!(non_spherical));
    m.insert("classes".into(), classes.into());
    m.insert("reflections".into(), reflections.into());
    Ok(m)
}

fn validate_report<K: Field>(model: &Model<K>) -> Result<Map<String, Value>, InputError> {
    let v = validate(&model.alg);
    if !v.is_valid() {
        let list: Vec<String> = v.violations.iter().map(ToString::to_string).collect();
        return Err(InputError(format!("invalid algebra: {}", list.join("; "))));
    }
    let objects: Vec<Value> = model
        .objects
        .iter()
        .map(|(n, x)| {
            Ok(json!({
                "name": n,
                "complex": x.describe(),
                "summands": x.len(),
                "spherical": compute(is_spherical(x, model.d))?,
            }))
        })
        .collect::<Result<_, InputError>>()?;
    let collections: Vec<Value> = model
        .collections
        .iter()
        .map(|(n, xs)| {
            Ok(json!({
                "name": n,
                "size": xs.len(),
                "strongly_spherical": compute(is_strongly_spherical(xs, model.d))?.0,
            }))
        })
        .collect::<Result<_, InputError>>()?;
    let mut m = Map::new();
    m.insert("vertices".into(), json!(model.alg.vertices()));
    m.insert("algebra_dim".into(), model.alg.dim().into());
    m.insert("algebra_valid".into(), true.into());
    m.insert("objects".into(), objects.into());
    m.insert("maps".into(), model.maps.len().into());
    m.insert("collections".into(), collections.into());
    Ok(m)
}
