use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use redei_core::analysis::{evaluate, reproduce_maximality_examples};
use redei_core::geometry::{directions_of, s_of_set};
use redei_core::io::{parse_linset, read_point_set};
use redei_core::linsets::{directions_in_space, project_subgeometry, realize_direction_set, Vector};
use redei_core::redei::{divide_xq, invariants};
use redei_core::search::{complete_to_q, hunt, sweep, CompletionQuery, Mode, SearchConfig, SearchReport};
use redei_core::verdict::Rational;
use redei_core::{AffinePointSet, Error, Field, Statement, Verdict};

#[derive(Parser, Debug)]
#[command(name = "redei", version, about = "Directions determined by point sets in AG(2,q)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args, Debug, Clone)]
struct SearchArgs {
    /// JSON search configuration; flags given below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long = "min")]
    n_min: Option<usize>,
    #[arg(long = "max")]
    n_max: Option<usize>,
    /// Sample instead of enumerating; requires --budget.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    symmetry: Option<Switch>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    replay_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Directions determined by a point set.
    Directions {
        #[arg(long)]
        set: PathBuf,
    },
    /// s, t, deg_X H and the per-direction table.
    Invariants {
        #[arg(long)]
        set: PathBuf,
    },
    /// R, Q and H of a point set.
    Redei {
        #[arg(long)]
        set: PathBuf,
    },
    /// Checks statements against a point set.
    Verify {
        #[arg(long = "statement", required = true)]
        statements: Vec<String>,
        #[arg(long)]
        set: PathBuf,
    },
    /// Lifts a projective linear set to an affine set with that direction set.
    Realize {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Applies statements to every enumerated or sampled set.
    Search {
        #[command(flatten)]
        args: SearchArgs,
        #[arg(long = "statement")]
        statements: Vec<String>,
    },
    /// Looks for counterexamples to a conjecture among maximal sets.
    Hunt {
        #[command(flatten)]
        args: SearchArgs,
        #[arg(long)]
        conjecture: String,
    },
    /// Extends a set to q points without new directions.
    Complete {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value = "3/4")]
        alpha: String,
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Builds the maximal non-linear and non-maximal linear examples.
    Examples,
}

/// Outcome classes, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    Counterexample = 2,
    Alarm = 3,
}

struct Output {
    command: &'static str,
    config: Value,
    field: Option<Field>,
    json: Value,
    /// Header row and rows for CSV.
    table: (Vec<String>, Vec<Vec<String>>),
    text: String,
    status: Status,
}

fn field_json(f: &Field) -> Value {
    json!({ "p": f.characteristic(), "h": f.degree(), "q": f.order(), "modulus": f.modulus() })
}

fn header_lines(out: &Output) -> Vec<String> {
    let mut lines = vec![format!("redei {}", env!("CARGO_PKG_VERSION")), format!("command: {}", out.command)];
    if let Some(f) = &out.field {
        lines.push(format!("field: GF({}^{}) modulus {:?}", f.characteristic(), f.degree(), f.modulus()));
    }
    lines.push(format!("config: {}", out.config));
    lines
}

fn render(out: &Output, format: Format) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            let doc = json!({
                "tool": "redei",
                "version": env!("CARGO_PKG_VERSION"),
                "command": out.command,
                "config": out.config,
                "field": out.field.as_ref().map(field_json),
                "result": out.json,
            });
            serde_json::to_writer_pretty(&mut buf, &doc)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            for line in header_lines(out) {
                writeln!(buf, "# {line}")?;
            }
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&out.table.0)?;
            for row in &out.table.1 {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for line in header_lines(out) {
                writeln!(buf, "# {line}")?;
            }
            buf.extend_from_slice(out.text.as_bytes());
        }
    }
    Ok(buf)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!(
        "{}: {}{}\n",
        v.statement,
        if !v.applicable {
            "not applicable"
        } else if v.passed() {
            "holds"
        } else {
            "FAILS"
        },
        v.case.map(|c| format!(", case {c}")).unwrap_or_default()
    );
    for c in &v.checks {
        let rel = serde_json::to_value(c.rel).ok().and_then(|r| r.as_str().map(String::from)).unwrap_or_default();
        s.push_str(&format!("  [{}] {}: {} {} {}\n", if c.holds { "ok" } else { "FAIL" }, c.name, c.lhs, rel, c.rhs));
    }
    for n in &v.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    s
}

fn load_set(path: &Path) -> anyhow::Result<AffinePointSet> {
    read_point_set(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_statement(s: &str) -> anyhow::Result<Statement> {
    Ok(s.parse::<Statement>()?)
}

fn cmd_directions(set: &Path) -> anyhow::Result<Output> {
    let u = load_set(set)?;
    let d = directions_of(&u);
    let rows = d.iter().map(|y| vec![y.to_string()]).collect();
    Ok(Output {
        command: "directions",
        config: json!({ "set": set }),
        field: Some(u.field().clone()),
        json: json!({ "n": u.len(), "directions": d, "size": d.len() }),
        table: (vec!["direction".into()], rows),
        text: format!("D = {{{}}}\n|D| = {}\n", d.to_text().replace(' ', ", "), d.len()),
        status: Status::Ok,
    })
}

fn cmd_invariants(set: &Path) -> anyhow::Result<Output> {
    let u = load_set(set)?;
    let rep = invariants(&u)?;
    let mut rows = Vec::new();
    let mut text = format!(
        "n = {}\n|D| = {}\ns = {}\nt = {}\ndeg_X H = {}\n",
        rep.n,
        rep.directions.len(),
        rep.s,
        rep.t,
        opt(rep.deg_x_h)
    );
    text.push_str("direction  s(y)  t(y)  kappa(y)  deg H(X,y)\n");
    for (y, sy) in &rep.geometric.per_direction {
        let alg = y.slope().and_then(|v| rep.algebraic.at(v));
        let det = rep.directions.contains(y);
        let row = vec![
            y.to_string(),
            det.to_string(),
            sy.to_string(),
            opt(alg.map(|a| a.t)),
            opt(alg.map(|a| a.kappa)),
            opt(alg.and_then(|a| a.deg_h_y)),
        ];
        if det {
            text.push_str(&format!("{:<9}  {:<4}  {:<4}  {:<8}  {}\n", row[0], row[2], row[3], row[4], row[5]));
        }
        rows.push(row);
    }
    if rep.algebraic.infinity_excluded {
        text.push_str("note: ∞ ∈ D; t is taken over the affine determined directions\n");
    }
    Ok(Output {
        command: "invariants",
        config: json!({ "set": set }),
        field: Some(u.field().clone()),
        json: serde_json::to_value(&rep)?,
        table: (
            ["direction", "determined", "s", "t", "kappa", "deg_h_y"].map(String::from).to_vec(),
            rows,
        ),
        text,
        status: Status::Ok,
    })
}

fn cmd_redei(set: &Path) -> anyhow::Result<Output> {
    let u = load_set(set)?;
    let sys = divide_xq(&u)?;
    sys.check_invariants()?;
    let r = sys.r.to_text();
    let q = sys.q.to_text();
    let h = sys.h.to_text();
    let rows = vec![
        vec!["R".to_string(), r.clone()],
        vec!["Q".to_string(), q.clone()],
        vec!["H".to_string(), h.clone()],
    ];
    Ok(Output {
        command: "redei",
        config: json!({ "set": set }),
        field: Some(u.field().clone()),
        json: json!({ "n": u.len(), "R": r, "Q": q, "H": h, "deg_x_h": sys.deg_x_h() }),
        table: (vec!["poly".into(), "terms".into()], rows),
        text: format!("R = {r}\nQ = {q}\nH = {h}\n"),
        status: Status::Ok,
    })
}

fn cmd_verify(statements: &[String], set: &Path) -> anyhow::Result<Output> {
    let u = load_set(set)?;
    let statements = statements.iter().map(|s| parse_statement(s)).collect::<anyhow::Result<Vec<_>>>()?;
    let mut verdicts = Vec::new();
    for &st in &statements {
        verdicts.push(evaluate(st, &u)?);
    }
    let status = if verdicts.iter().any(Verdict::failed) { Status::Counterexample } else { Status::Ok };
    let d = directions_of(&u);
    let inv = invariants(&u).ok();
    let rows = verdicts
        .iter()
        .map(|v| {
            vec![
                "0".to_string(),
                u.len().to_string(),
                d.len().to_string(),
                opt(inv.as_ref().map(|i| i.s).or_else(|| s_of_set(&u).ok().map(|g| g.s))),
                opt(inv.as_ref().map(|i| i.t)),
                opt(inv.as_ref().and_then(|i| i.deg_x_h)),
                opt(v.case),
                if v.applicable { v.passed().to_string() } else { String::new() },
            ]
        })
        .collect();
    let json = if verdicts.len() == 1 { serde_json::to_value(&verdicts[0])? } else { serde_json::to_value(&verdicts)? };
    Ok(Output {
        command: "verify",
        config: json!({ "set": set, "statements": statements }),
        field: Some(u.field().clone()),
        json,
        table: (csv_columns(), rows),
        text: verdicts.iter().map(verdict_text).collect(),
        status,
    })
}

fn csv_columns() -> Vec<String> {
    ["set_id", "n", "D_size", "s", "t", "degXH", "case", "holds"].map(String::from).to_vec()
}

fn vec_codecs(v: &Vector) -> Vec<u32> {
    v.iter().map(|c| c.0).collect()
}

fn cmd_realize(spec_path: &Path) -> anyhow::Result<Output> {
    let text = std::fs::read_to_string(spec_path).with_context(|| format!("reading {}", spec_path.display()))?;
    let file = parse_linset(&text)?;
    let spec = file.to_spec()?;
    let f = spec.field.clone();
    let image = project_subgeometry(&spec);
    let mut points = realize_direction_set(&spec);
    if let Some(t) = file.translate()? {
        points = points.iter().map(|p| p.iter().zip(&t).map(|(&a, &b)| f.add(a, b)).collect()).collect();
        points.sort();
    }
    let dirs = directions_in_space(&f, &points);
    let round_trip = dirs == image.support();
    let total = image.total_weight();
    let expected = spec.expected_weight();
    let status = if round_trip && total == expected { Status::Ok } else { Status::Counterexample };
    let support: Vec<Value> =
        image.points.iter().map(|(k, w)| json!({ "point": vec_codecs(k), "weight": w })).collect();
    let pts: Vec<Vec<u32>> = points.iter().map(vec_codecs).collect();
    let rows = pts.iter().map(|p| p.iter().map(u32::to_string).collect()).collect();
    let header = (0..=spec.n).map(|i| format!("x{i}")).collect();
    let mut txt = format!("|U| = {}\n|D| = {}\ntotal weight = {total} (expected {expected})\n", points.len(), dirs.len());
    txt.push_str(&format!("directions match the projected support: {round_trip}\n"));
    for p in &pts {
        txt.push_str(&format!("{}\n", p.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")));
    }
    Ok(Output {
        command: "realize",
        config: json!({ "spec": spec_path, "linset": file }),
        field: Some(f),
        json: json!({
            "points": pts,
            "support": support,
            "total_weight": total,
            "expected_weight": expected,
            "directions": dirs.iter().map(vec_codecs).collect::<Vec<_>>(),
            "round_trip": round_trip,
        }),
        table: (header, rows),
        text: txt,
        status,
    })
}

fn resolve_config(args: &SearchArgs, statements: Vec<Statement>) -> anyhow::Result<SearchConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<SearchConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => {
            let Some(q) = args.q else { bail!("--q is required without --config") };
            let n_min = args.n_min.unwrap_or(1);
            let n_max = args.n_max.unwrap_or(q as usize);
            let mut c = SearchConfig::exhaustive(q, n_min, n_max);
            c.symmetry = true;
            c
        }
    };
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(n) = args.n_min {
        cfg.n_min = n;
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    match (args.seed, args.budget) {
        (Some(seed), Some(budget)) => cfg.mode = Mode::Random { seed, budget },
        (None, None) => {}
        _ => bail!("random mode needs both --seed and --budget"),
    }
    if let Some(sw) = args.symmetry {
        cfg.symmetry = sw == Switch::On;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if let Some(dir) = &args.replay_dir {
        cfg.replay_dir = Some(dir.clone());
    }
    if !statements.is_empty() {
        cfg.statements = statements;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report_output(command: &'static str, rep: &SearchReport, f: Field) -> anyhow::Result<Output> {
    let rows = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.set_id.to_string(),
                r.n.to_string(),
                r.d_size.to_string(),
                opt(r.s),
                opt(r.t),
                opt(r.deg_x_h),
                opt(r.case),
                opt(r.holds),
            ]
        })
        .collect();
    let mut text = format!("sets examined: {}\n", rep.sets_examined);
    if let Some(c) = rep.canonical_representatives {
        text.push_str(&format!("canonical representatives: {c}\n"));
    }
    if let Some(m) = rep.maximal_sets {
        text.push_str(&format!("maximal sets: {m}\n"));
    }
    for (st, t) in &rep.tallies {
        text.push_str(&format!("{st}: pass {} fail {} inapplicable {}\n", t.pass, t.fail, t.inapplicable));
    }
    for (n, pts) in &rep.sharp {
        text.push_str(&format!("sharp |U| = {n}: {pts:?}\n"));
    }
    for c in &rep.counterexamples {
        text.push_str(&format!("counterexample #{} ({}) points {:?}\n", c.set_id, c.statement, c.points));
        text.push_str(&verdict_text(&c.verdict));
    }
    for a in &rep.alarms {
        text.push_str(&format!("ALARM #{} ({}): {}\n", a.set_id, a.statement, a.message));
    }
    let status = if !rep.alarms.is_empty() {
        Status::Alarm
    } else if rep.failed() {
        Status::Counterexample
    } else {
        Status::Ok
    };
    let mut json = serde_json::to_value(rep)?;
    if let Some(obj) = json.as_object_mut() {
        obj.remove("config");
    }
    Ok(Output {
        command,
        config: serde_json::to_value(&rep.config)?,
        field: Some(f),
        json,
        table: (csv_columns(), rows),
        text,
        status,
    })
}

fn cmd_search(args: &SearchArgs, statements: &[String]) -> anyhow::Result<Output> {
    let mut sts = statements.iter().map(|s| parse_statement(s)).collect::<anyhow::Result<Vec<_>>>()?;
    if sts.is_empty() && args.config.is_none() {
        sts.push(Statement::DirectionBound);
    }
    let cfg = resolve_config(args, sts)?;
    if cfg.statements.is_empty() {
        bail!("no statement selected");
    }
    let rep = sweep(&cfg)?;
    eprintln!("search finished in {} ms", rep.wall_time.as_millis());
    report_output("search", &rep, cfg.field()?)
}

fn cmd_hunt(args: &SearchArgs, conjecture: &str) -> anyhow::Result<Output> {
    let st = parse_statement(conjecture)?;
    if !st.is_conjecture() {
        bail!("{conjecture} is not a conjecture id (conj-1 or conj-2)");
    }
    let cfg = resolve_config(args, vec![st])?;
    let rep = hunt(&cfg, st)?;
    eprintln!("hunt finished in {} ms", rep.wall_time.as_millis());
    report_output("hunt", &rep, cfg.field()?)
}

fn cmd_complete(set: &Path, alpha: &str, cap: usize) -> anyhow::Result<Output> {
    let u = load_set(set)?;
    let alpha: Rational = alpha.parse().map_err(|_| anyhow::anyhow!("alpha must be a rational such as 3/4"))?;
    let query = CompletionQuery { set: u.clone(), alpha, cap };
    let res = complete_to_q(&query)?;
    let status = if res.alarm { Status::Alarm } else { Status::Ok };
    let rows = res
        .completions
        .iter()
        .enumerate()
        .map(|(i, c)| vec![i.to_string(), c.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")])
        .collect();
    let mut text = format!(
        "epsilon = {}\nhypotheses hold (alpha = {alpha}): {}\ncandidates: {:?}\ncompletions: {}{}\n",
        res.epsilon,
        res.hypotheses_hold,
        res.candidates,
        res.completions.len(),
        if res.truncated { " (truncated)" } else { "" }
    );
    for c in &res.completions {
        text.push_str(&format!("{c:?}\n"));
    }
    if res.alarm {
        text.push_str("ALARM: hypotheses hold but no completion exists\n");
    }
    Ok(Output {
        command: "complete",
        config: json!({ "set": set, "alpha": alpha.to_string(), "cap": cap }),
        field: Some(u.field().clone()),
        json: serde_json::to_value(&res)?,
        table: (vec!["completion".into(), "points".into()], rows),
        text,
        status,
    })
}

fn cmd_examples() -> anyhow::Result<Output> {
    let rep = reproduce_maximality_examples()?;
    let status = if rep.holds() { Status::Ok } else { Status::Counterexample };
    let mut rows = Vec::new();
    let mut text = String::new();
    for e in &rep.non_linear_maximal {
        rows.push(vec![
            "non-linear maximal".into(),
            format!("AG(2,{}) in AG(2,{})", e.q, e.big_q),
            e.points.len().to_string(),
            e.d_size.to_string(),
            e.holds.to_string(),
        ]);
        text.push_str(&format!(
            "non-linear maximal: q = {} in AG(2,{}), |U| = {}, |D| = {}, s = {}, maximal {} / {}, linear over {:?}: {}\n",
            e.q, e.big_q, e.points.len(), e.d_size, e.s, e.maximal_small, e.maximal_big, e.linear_over, e.holds
        ));
    }
    for e in &rep.non_maximal_linear {
        rows.push(vec![
            "non-maximal linear".into(),
            format!("GF({})-linear in AG(2,{}^{})", e.s, e.s, e.i * e.j),
            e.points.len().to_string(),
            e.d_size.to_string(),
            e.holds.to_string(),
        ]);
        text.push_str(&format!(
            "non-maximal linear: s = {}, i = {}, j = {}, |U| = {}, |D| = {}, same D as subplane {}, maximal {}: {}\n",
            e.s, e.i, e.j, e.points.len(), e.d_size, e.same_directions_as_subplane, e.maximal, e.holds
        ));
    }
    Ok(Output {
        command: "examples",
        config: json!({}),
        field: None,
        json: serde_json::to_value(&rep)?,
        table: (["example", "setting", "n", "D_size", "holds"].map(String::from).to_vec(), rows),
        text,
        status,
    })
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Directions { set } => cmd_directions(set),
        Command::Invariants { set } => cmd_invariants(set),
        Command::Redei { set } => cmd_redei(set),
        Command::Verify { statements, set } => cmd_verify(statements, set),
        Command::Realize { spec } => cmd_realize(spec),
        Command::Search { args, statements } => cmd_search(args, statements),
        Command::Hunt { args, conjecture } => cmd_hunt(args, conjecture),
        Command::Complete { set, alpha, cap } => cmd_complete(set, alpha, *cap),
        Command::Examples => cmd_examples(),
    }
}

fn is_alarm(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_soundness_alarm))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if is_alarm(&e) { 3 } else { 1 });
        }
    };
    let bytes = match render(&out, cli.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(&bytes).and_then(|_| stdout.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(out.status as u8)
}
