use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rlattice::checker::{check_with_limits, enumerate_relations_with_limit, Limits};
use rlattice::model::{model_from_universe, search_model, verify_model, FiniteModel, SearchOptions, SearchOutcome};
use rlattice::suites::{self, SuiteOptions, Theorem};
use rlattice::term::parse_goal_file;
use rlattice::{parse_goal, Error, FdReading, Mode, Statement, Universe, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "rlattice", version, about = "Relational lattice workbench: check identities over finite universes and search finite models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check statements over every relation of a universe.
    Check(CheckArgs),
    /// Search for a finite model of axioms that falsifies the goals.
    Search(SearchArgs),
    /// Check statements over all assignments of a model file.
    VerifyModel(VerifyArgs),
    /// Count (and optionally list) the relations over a universe.
    Enumerate(EnumerateArgs),
    /// Run, list or export the law catalog.
    Suite(SuiteArgs),
    /// Write the model whose carrier is every relation over a universe.
    Bridge(BridgeArgs),
    /// Check the Armstrong-style theorems under every dependency reading.
    Discriminate(DiscriminateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write the report (or model) here instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Include elapsed times in structured output.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct Input {
    /// Inline statement.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    /// Statement file, one statement per line.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Universe file; repeat to check over several universes.
    #[arg(short = 'u', long = "universe", required = true)]
    universes: Vec<PathBuf>,
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Largest assignment space checked exhaustively.
    #[arg(long, default_value_t = 200_000_000)]
    max_assignments: u128,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SearchArgs {
    /// Axiom file; defaults to the twelve-axiom minimal system.
    #[arg(short = 'a', long = "axioms")]
    axioms: Option<PathBuf>,
    /// Additional inline axiom; repeatable.
    #[arg(long = "axiom")]
    extra_axioms: Vec<String>,
    /// Goal the model must falsify; repeatable. `|` separates disjuncts.
    #[arg(short = 'g', long = "goal")]
    goals: Vec<String>,
    /// File of goals.
    #[arg(long = "goals")]
    goal_file: Option<PathBuf>,
    /// Carrier sizes to try, inclusive, e.g. `2..6`.
    #[arg(long, default_value = "2..8", value_parser = parse_sizes)]
    sizes: RangeInclusive<usize>,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 600.0)]
    budget: f64,
    /// Try every value for every cell instead of pruning relabelings.
    #[arg(long)]
    no_symmetry_breaking: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(short = 'u', long = "universe")]
    universe: PathBuf,
    /// Print every relation, one per line, in canonical order.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite name; omit with --list.
    name: Option<String>,
    /// Universe file; repeatable. Defaults to the two reference universes.
    #[arg(short = 'u', long = "universe")]
    universes: Vec<PathBuf>,
    /// List the registered suites.
    #[arg(long)]
    list: bool,
    /// Print the suite as a statement file instead of running it.
    #[arg(long)]
    export: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Samples drawn for entries too large to check exhaustively.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct BridgeArgs {
    #[arg(short = 'u', long = "universe")]
    universe: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DiscriminateArgs {
    /// Universe file; repeatable. Defaults to the one-attribute reference universe.
    #[arg(short = 'u', long = "universe")]
    universes: Vec<PathBuf>,
    #[command(flatten)]
    out: Output,
}

fn parse_sizes(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower size `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper size `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("size range `{s}` is empty or starts at 0"));
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Search(a) => cmd_search(a),
        Command::VerifyModel(a) => cmd_verify_model(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Bridge(a) => cmd_bridge(a),
        Command::Discriminate(a) => cmd_discriminate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_universe(path: &Path) -> Result<Universe> {
    Universe::parse(&read(path)?).with_context(|| format!("in universe file {}", path.display()))
}

fn load_statements(path: &Path) -> Result<Vec<Statement>> {
    let parsed = parse_goal_file(&read(path)?).with_context(|| format!("in statement file {}", path.display()))?;
    Ok(parsed.into_iter().map(|(_, s)| s).collect())
}

fn statements(input: &Input) -> Result<Vec<Statement>> {
    match (&input.expr, &input.file) {
        (Some(e), None) => Ok(vec![parse_goal(e).with_context(|| format!("in `{e}`"))?]),
        (None, Some(f)) => load_statements(f),
        _ => bail!("give exactly one of -e <statement> or -f <file>"),
    }
}

fn emit(out: &Output, human: String, structured: Value) -> Result<()> {
    let text = match out.format {
        Format::Human => human,
        Format::Structured => serde_json::to_string_pretty(&structured)? + "\n",
    };
    match &out.output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_check(a: CheckArgs) -> Result<u8> {
    let stmts = statements(&a.input)?;
    let mode = match a.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Sample => Mode::Sample { seed: a.seed, samples: a.samples },
    };
    let limits = Limits { assignments: a.max_assignments, ..Limits::default() };
    let mut human = String::new();
    let mut results = Vec::new();
    let (mut refuted, mut exhausted) = (false, false);
    for path in &a.universes {
        let u = load_universe(path)?;
        for s in &stmts {
            match check_with_limits(&u, s, mode, limits) {
                Ok(r) => {
                    refuted |= r.verdict == Verdict::Refuted;
                    exhausted |= r.verdict == Verdict::BudgetExhausted;
                    human.push_str(&format!("[{}] {}\n", suites::universe_label(&u), r.render(&u)));
                    let mut doc = serde_json::to_value(r.structured(&u, a.out.timing))?;
                    doc["universe"] = json!(suites::universe_label(&u));
                    results.push(doc);
                }
                Err(Error::BudgetExceeded { required, limit }) => {
                    exhausted = true;
                    human.push_str(&format!(
                        "[{}] {s}\n  BUDGET_EXHAUSTED: {required} assignments exceed the limit {limit}\n",
                        suites::universe_label(&u)
                    ));
                    results.push(json!({
                        "statement": s.to_string(),
                        "universe": suites::universe_label(&u),
                        "verdict": "BUDGET_EXHAUSTED",
                        "required_assignments": required.to_string(),
                        "limit": limit.to_string(),
                    }));
                }
                Err(e) => return Err(e).with_context(|| format!("checking `{s}`")),
            }
        }
    }
    emit(&a.out, human, json!({ "command": "check", "results": results }))?;
    Ok(if refuted {
        EXIT_REFUTED
    } else if exhausted {
        EXIT_EXHAUSTED
    } else {
        EXIT_OK
    })
}

fn cmd_search(a: SearchArgs) -> Result<u8> {
    let mut axioms = match &a.axioms {
        Some(p) => load_statements(p)?,
        None => suites::minimal_axioms(),
    };
    for s in &a.extra_axioms {
        axioms.push(parse_goal(s).with_context(|| format!("in axiom `{s}`"))?);
    }
    let mut goals = Vec::new();
    for g in &a.goals {
        goals.push(parse_goal(g).with_context(|| format!("in goal `{g}`"))?);
    }
    if let Some(p) = &a.goal_file {
        goals.extend(load_statements(p)?);
    }
    if a.budget.is_nan() || a.budget <= 0.0 {
        bail!("budget must be positive");
    }
    let opts = SearchOptions {
        sizes: a.sizes.clone(),
        budget: Duration::from_secs_f64(a.budget),
        symmetry_breaking: !a.no_symmetry_breaking,
    };
    match search_model(&axioms, &goals, &opts) {
        Ok(SearchOutcome::Found { model, skolems, excluded, stats }) => {
            let mut human = format!("model of size {} found", model.size());
            if !excluded.is_empty() {
                human.push_str(&format!("; no model of size {}", join(&excluded)));
            }
            human.push('\n');
            for (name, v) in &skolems {
                human.push_str(&format!(" goal variable {name} : {v}\n"));
            }
            human.push('\n');
            human.push_str(&model.pretty());
            let mut doc = json!({
                "command": "search",
                "outcome": "found",
                "size": model.size(),
                "excluded_sizes": excluded,
                "goal_variables": skolems.iter().map(|(n, v)| json!({"variable": n, "element": v})).collect::<Vec<_>>(),
                "decisions": stats.decisions.iter().map(|(n, d)| json!({"size": n, "decisions": d})).collect::<Vec<_>>(),
                "model": model.to_file_string(),
            });
            if a.out.timing {
                doc["elapsed_ms"] = json!(stats.elapsed.as_millis() as u64);
            }
            write_model_or_report(&a.out, &model, human, doc)?;
            Ok(EXIT_OK)
        }
        Ok(SearchOutcome::Exhausted { excluded, .. }) => {
            let human = format!("no model of size {}\n", join(&excluded));
            emit_report_only(&a.out, human, json!({"command": "search", "outcome": "exhausted", "excluded_sizes": excluded}))?;
            Ok(EXIT_EXHAUSTED)
        }
        Err(Error::SearchBudgetExhausted { largest_excluded }) => {
            let human = format!(
                "search budget exhausted; largest size fully excluded: {}\n",
                largest_excluded.map_or("none".into(), |n| n.to_string())
            );
            emit_report_only(
                &a.out,
                human,
                json!({"command": "search", "outcome": "budget_exhausted", "largest_excluded": largest_excluded}),
            )?;
            Ok(EXIT_EXHAUSTED)
        }
        Err(e) => Err(e.into()),
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// With `-o`, the model file goes there and the report to standard output.
fn write_model_or_report(out: &Output, model: &FiniteModel, human: String, doc: Value) -> Result<()> {
    if let Some(p) = &out.output {
        fs::write(p, model.to_file_string()).with_context(|| format!("cannot write {}", p.display()))?;
    }
    emit_report_only(out, human, doc)
}

fn emit_report_only(out: &Output, human: String, doc: Value) -> Result<()> {
    match out.format {
        Format::Human => print!("{human}"),
        Format::Structured => println!("{}", serde_json::to_string_pretty(&doc)?),
    }
    Ok(())
}

fn cmd_verify_model(a: VerifyArgs) -> Result<u8> {
    let model = FiniteModel::parse(&read(&a.model)?).with_context(|| format!("in model file {}", a.model.display()))?;
    let stmts = statements(&a.input)?;
    let verdicts = verify_model(&model, &stmts)?;
    let mut human = String::new();
    let mut docs = Vec::new();
    for v in &verdicts {
        human.push_str(&format!("{:<8} {}", v.verdict.to_string(), v.statement));
        if let Some(w) = &v.witness {
            let binds: Vec<String> = w.iter().map(|(n, e)| format!("{n} = {e}")).collect();
            human.push_str(&format!("  [{}]", binds.join(", ")));
        }
        human.push('\n');
        docs.push(json!({
            "statement": v.statement,
            "verdict": v.verdict,
            "witness": v.witness.as_ref().map(|w| w.iter().map(|(n, e)| json!({"variable": n, "element": e})).collect::<Vec<_>>()),
            "assignments_tested": v.assignments_tested,
            "premises_satisfied": v.premises_satisfied,
        }));
    }
    emit(&a.out, human, json!({"command": "verify-model", "size": model.size(), "results": docs}))?;
    Ok(if verdicts.iter().any(|v| v.verdict == Verdict::Refuted) { EXIT_REFUTED } else { EXIT_OK })
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<u8> {
    let u = load_universe(&a.universe)?;
    let rels = enumerate_relations_with_limit(&u, rlattice::checker::DEFAULT_ENUMERATION_LIMIT)?;
    let mut human = format!("{}\n", rels.len());
    if a.list {
        for (i, r) in rels.iter().enumerate() {
            human.push_str(&format!("{i}\t{}\n", r.to_literal(&u)));
        }
    }
    let mut doc = json!({"command": "enumerate", "universe": suites::universe_label(&u), "count": rels.len()});
    if a.list {
        doc["relations"] = json!(rels.iter().map(|r| r.to_literal(&u)).collect::<Vec<_>>());
    }
    emit(&a.out, human, doc)?;
    Ok(EXIT_OK)
}

fn cmd_suite(a: SuiteArgs) -> Result<u8> {
    if a.list {
        let mut human = String::new();
        let mut docs = Vec::new();
        for name in suites::SUITES {
            let s = suites::suite(name)?;
            human.push_str(&format!("{name:<14} {} entries\n", s.entries.len()));
            docs.push(json!({"suite": name, "entries": s.entries.len()}));
        }
        emit(&a.out, human, json!({"command": "suite", "suites": docs}))?;
        return Ok(EXIT_OK);
    }
    let Some(name) = &a.name else { bail!("give a suite name or --list") };
    let suite = suites::suite(name)?;
    if a.export {
        let text = suite.to_statement_file();
        match &a.out.output {
            Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
            None => print!("{text}"),
        }
        return Ok(EXIT_OK);
    }
    let universes = if a.universes.is_empty() {
        ["u1", "u2"].iter().filter_map(|id| suites::reference_universe(id)).collect()
    } else {
        a.universes.iter().map(|p| load_universe(p)).collect::<Result<Vec<_>>>()?
    };
    let opts = SuiteOptions { seed: a.seed, samples: a.samples, ..SuiteOptions::default() };
    let report = suites::run_suite(&suite, &universes, &opts)?;
    let entries: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "id": o.entry.id,
                "statement": o.entry.text,
                "expected": o.entry.expected,
                "actual": o.actual(),
                "matches": o.matches(),
                "checks": o.checks.iter().map(|c| {
                    let u = &universes[c.universe];
                    let mut d = serde_json::to_value(c.report.structured(u, a.out.timing)).expect("report serializes");
                    d["universe"] = json!(suites::universe_label(u));
                    d
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "command": "suite",
        "suite": report.suite,
        "entries": entries,
        "mismatches": report.mismatches().len(),
    });
    emit(&a.out, report.render(&universes), doc)?;
    Ok(if report.all_match() { EXIT_OK } else { EXIT_REFUTED })
}

fn cmd_bridge(a: BridgeArgs) -> Result<u8> {
    let u = load_universe(&a.universe)?;
    let model = model_from_universe(&u)?;
    match (&a.out.output, a.out.format) {
        (Some(p), _) => {
            fs::write(p, model.to_file_string()).with_context(|| format!("cannot write {}", p.display()))?;
            println!("wrote {}-element model to {}", model.size(), p.display());
        }
        (None, Format::Human) => print!("{}", model.pretty()),
        (None, Format::Structured) => println!(
            "{}",
            serde_json::to_string_pretty(&json!({"command": "bridge", "size": model.size(), "model": model.to_file_string()}))?
        ),
    }
    Ok(EXIT_OK)
}

fn cmd_discriminate(a: DiscriminateArgs) -> Result<u8> {
    let universes = if a.universes.is_empty() {
        vec![suites::reference_universe("u1").expect("reference universe")]
    } else {
        a.universes.iter().map(|p| load_universe(p)).collect::<Result<Vec<_>>>()?
    };
    let rows = suites::discriminate_fd_reading(&universes)?;
    let default = FdReading::default();
    let mut human = format!("{:<32} {:<9} {:<9} {:<9}\n", "reading", "reflex", "trans", "augment");
    let mut docs = Vec::new();
    for row in &rows {
        let mark = if row.reading == default { " (default)" } else if row.survives() { " *" } else { "" };
        let cells: Vec<String> = Theorem::ALL
            .iter()
            .map(|t| if row.verdict(*t) == Verdict::Holds { "holds".into() } else { "refuted".into() })
            .collect();
        human.push_str(&format!("{:<32} {:<9} {:<9} {:<9}{mark}\n", row.reading.to_string(), cells[0], cells[1], cells[2]));
        docs.push(json!({
            "reading": row.reading,
            "label": row.reading.to_string(),
            "survives": row.survives(),
            "verdicts": Theorem::ALL.iter().map(|t| json!({"theorem": t.name(), "verdict": row.verdict(*t)})).collect::<Vec<_>>(),
            "witnesses": row.witnesses.iter().zip(Theorem::ALL).filter_map(|(w, t)| w.as_ref().map(|(ui, text)| json!({
                "theorem": t.name(),
                "universe": suites::universe_label(&universes[*ui]),
                "assignment": text,
            }))).collect::<Vec<_>>(),
        }));
    }
    let survivors: Vec<&suites::ReadingRow> = rows.iter().filter(|r| r.survives()).collect();
    let default_survives = survivors.iter().any(|r| r.reading == default);
    human.push_str(&format!(
        "{} of {} readings satisfy all three; default reading {}\n",
        survivors.len(),
        rows.len(),
        if default_survives { "is among them" } else { "is NOT among them" }
    ));
    emit(
        &a.out,
        human,
        json!({"command": "discriminate", "readings": docs, "survivors": survivors.len(), "default": default.to_string(), "default_survives": default_survives}),
    )?;
    Ok(if default_survives { EXIT_OK } else { EXIT_REFUTED })
}
