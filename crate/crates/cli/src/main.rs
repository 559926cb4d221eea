//! `drcycle`: batch front end with JSON output.
//!
//! Exit codes: 0 success or pass, 1 fail, 2 inconclusive (truncated), 64 usage error.

mod config;
mod fail;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use drcycle::calculus::{integrate, pair};
use drcycle::graphs::{canonicalize, enumerate_prestable_graphs, enumerate_stable_graphs, DegreeSpec};
use drcycle::pixton::{
    dr_cycle, pixton_polynomial_with, pixton_raw, set_threads, PixtonMode, PixtonRequest, SampleSpec,
    Truncation as PixtonTruncation,
};
use drcycle::tautring::TautClass;
use drcycle::verify::{
    check_compact_type, check_conjecture_a, check_factorization, check_invariance, check_polynomiality, check_vanishing,
    CheckReport, Invariance, InvarianceParams,
};
use drcycle::{Q, VERSION};

use config::{resolve_threads, ConfigFile, RunConfig, Sampling, Truncation};
use fail::{Failure, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "drcycle", version, about = "Pixton's formula and double ramification cycles in the tautological ring")]
struct Cli {
    /// JSON file with default values for the global and truncation flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: $DRCYCLE_THREADS, else 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for check reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Pic,
    Moduli,
}

#[derive(Args, Debug, Clone, Default)]
struct FitArgs {
    /// Polynomial degree to fit (default 2c).
    #[arg(long)]
    fit_degree: Option<usize>,
    /// First sampled modulus (default: per-graph bound).
    #[arg(long, allow_negative_numbers = true)]
    fit_base: Option<i64>,
    /// Extra held-out offsets beyond `R+D`, comma separated.
    #[arg(long, value_parser = parse_list)]
    holdouts: Option<IntList>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate graphs of type (g, n) up to isomorphism.
    Graphs {
        g: u32,
        n: usize,
        #[arg(long)]
        stable: bool,
        #[arg(long)]
        max_edges: Option<usize>,
        /// Total degree; with --bound, lists every multidegree.
        #[arg(long, allow_negative_numbers = true)]
        degree: Option<i64>,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Codimension-c part of Pixton's formula.
    Pixton {
        g: u32,
        n: usize,
        /// Comma-separated integers; "" for n = 0.
        #[arg(value_parser = parse_list, allow_hyphen_values = true)]
        a: IntList,
        c: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Moduli)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
        /// Evaluate at a single modulus.
        #[arg(long, conflicts_with_all = ["poly", "constant"])]
        r: Option<i64>,
        /// Coefficients as polynomials in r.
        #[arg(long, conflicts_with = "constant")]
        poly: bool,
        /// Constant term in r (the default).
        #[arg(long = "const", id = "constant")]
        constant: bool,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        bound: Option<i64>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// The double ramification cycle for Σ a_i = k(2g-2).
    Dr {
        g: u32,
        #[arg(value_parser = parse_list, allow_hyphen_values = true)]
        a: IntList,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
    },
    /// Degree of a class file.
    Integrate { file: PathBuf },
    /// Intersection pairing of two class files.
    Pair { first: PathBuf, second: PathBuf },
    /// Run a named check: polynomiality, vanishing, factorization,
    /// compact-type, conjecture-a or invariance.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    name: String,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "A", value_parser = parse_list, allow_hyphen_values = true)]
    a: Option<IntList>,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, value_enum, default_value_t = ModeArg::Moduli)]
    mode: ModeArg,
    /// Invariance to test (I-VI).
    #[arg(long)]
    which: Option<String>,
    /// Translation vector for invariance III.
    #[arg(long = "shift", value_parser = parse_list, allow_hyphen_values = true)]
    shift: Option<IntList>,
    /// Modulus for fixed-r comparisons.
    #[arg(long, default_value_t = 7)]
    r: i64,
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    bound: Option<i64>,
    /// Perturb the computed side; the check is then expected to fail.
    #[arg(long)]
    negative_control: bool,
    #[command(flatten)]
    fit: FitArgs,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct IntList(Vec<i64>);

fn parse_list(s: &str) -> Result<IntList, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(IntList(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(IntList)
}

/// Resolved flags shared by every command.
struct Ctx {
    file: ConfigFile,
    output: Option<PathBuf>,
    threads: usize,
    format: Format,
}

impl Ctx {
    fn max_edges(&self, flag: Option<usize>) -> Option<usize> {
        flag.or(self.file.max_edges)
    }

    fn bound(&self, flag: Option<i64>) -> Option<i64> {
        flag.or(self.file.bound)
    }

    fn sampling(&self, f: &FitArgs) -> Sampling {
        Sampling {
            degree: f.fit_degree.or(self.file.fit_degree),
            base: f.fit_base.or(self.file.fit_base),
            holdouts: f
                .holdouts
                .clone()
                .map(|l| l.0)
                .or_else(|| self.file.holdouts.clone())
                .unwrap_or_else(|| SampleSpec::default().holdouts),
        }
    }

    fn run_config(&self, command: &str, params: Value, truncation: Truncation, sampling: Sampling) -> RunConfig {
        RunConfig { command: command.into(), params, truncation, sampling, output: self.output.clone(), threads: self.threads }
    }
}

fn sample_spec(s: &Sampling) -> SampleSpec {
    SampleSpec { degree: s.degree, base: s.base, holdouts: s.holdouts.clone() }
}

fn no_sampling() -> Sampling {
    Sampling { degree: None, base: None, holdouts: Vec::new() }
}

fn no_truncation() -> Truncation {
    Truncation { max_edges: None, bound: None }
}

/// What a command produced: the JSON result and its exit code.
struct Outcome {
    config: RunConfig,
    result: Value,
    report: Option<CheckReport>,
    exit: i32,
}

fn check_n(n: usize, a: &[i64]) -> Result<(), Failure> {
    if n != a.len() {
        return Err(Failure::usage("n", format!("n = {n} but A has {} entries", a.len())));
    }
    Ok(())
}

fn read_class(path: &Path, param: &str) -> Result<TautClass<Q>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(param, path, e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(param, format!("{}: {e}", path.display())))?;
    // Accept either a bare class or an output envelope.
    let class = v.get("result").unwrap_or(&v);
    Ok(TautClass::from_json(class)?)
}

fn cmd_graphs(ctx: &Ctx, g: u32, n: usize, stable: bool, max_edges: Option<usize>, degree: Option<i64>, bound: Option<i64>) -> Result<Outcome, Failure> {
    let max_edges = ctx.max_edges(max_edges);
    let bound = ctx.bound(bound);
    let spec = match (degree, bound) {
        (Some(d), Some(b)) => Some(DegreeSpec { d, bound: b }),
        (Some(_), None) => return Err(Failure::usage("bound", "--degree needs --bound")),
        _ => None,
    };
    let cap = if stable {
        max_edges.unwrap_or(usize::MAX)
    } else {
        max_edges.ok_or_else(|| Failure::usage("max-edges", "prestable enumeration needs --max-edges"))?
    };
    let graphs = if stable { enumerate_stable_graphs(g, n, cap, spec)? } else { enumerate_prestable_graphs(g, n, cap, spec)? };
    let records: Vec<Value> = graphs
        .iter()
        .map(|gr| json!({ "graph": gr.to_json(), "edges": gr.num_edges(), "aut": canonicalize(gr).aut_order() }))
        .collect();
    let params = json!({ "g": g, "n": n, "stable": stable, "degree": degree });
    let config = ctx.run_config("graphs", params, Truncation { max_edges, bound }, no_sampling());
    Ok(Outcome { config, result: Value::Array(records), report: None, exit: 0 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_pixton(
    ctx: &Ctx,
    g: u32,
    n: usize,
    a: Vec<i64>,
    c: u32,
    mode: ModeArg,
    k: i64,
    r: Option<i64>,
    poly: bool,
    max_edges: Option<usize>,
    bound: Option<i64>,
    fit: &FitArgs,
) -> Result<Outcome, Failure> {
    check_n(n, &a)?;
    let max_edges = ctx.max_edges(max_edges);
    let bound = ctx.bound(bound);
    let (pmode, trunc) = match mode {
        ModeArg::Moduli => (PixtonMode::Moduli { k }, PixtonTruncation { max_edges: max_edges.unwrap_or(c as usize), bound: 0 }),
        ModeArg::Pic => (PixtonMode::Pic, PixtonTruncation { max_edges: max_edges.unwrap_or(c as usize), bound: bound.unwrap_or(0) }),
    };
    let req = PixtonRequest::new(g, a.clone(), c, pmode, trunc)?;
    let sampling = ctx.sampling(fit);
    let spec = sample_spec(&sampling);
    let (evaluation, result) = match r {
        Some(r) => ("r", pixton_raw(&req, r)?.to_json()),
        None if poly => ("poly", pixton_polynomial_with(&req, &spec)?.to_json()),
        None => ("const", pixton_polynomial_with(&req, &spec)?.constant_term().to_json()),
    };
    let params = json!({ "g": g, "n": n, "A": a, "c": c, "mode": req.mode, "evaluation": evaluation, "r": r });
    let truncation = Truncation { max_edges: Some(trunc.max_edges), bound: Some(trunc.bound) };
    let config = ctx.run_config("pixton", params, truncation, sampling);
    Ok(Outcome { config, result, report: None, exit: 0 })
}

fn cmd_dr(ctx: &Ctx, g: u32, a: Vec<i64>, k: i64) -> Result<Outcome, Failure> {
    let class = dr_cycle(g, &a, k)?;
    let params = json!({ "g": g, "A": a, "k": k });
    let config = ctx.run_config("dr", params, Truncation { max_edges: Some(g as usize), bound: None }, sample_defaults());
    Ok(Outcome { config, result: class.to_json(), report: None, exit: 0 })
}

fn sample_defaults() -> Sampling {
    let s = SampleSpec::default();
    Sampling { degree: s.degree, base: s.base, holdouts: s.holdouts }
}

fn cmd_integrate(ctx: &Ctx, file: &Path) -> Result<Outcome, Failure> {
    let x = read_class(file, "file")?;
    let v = integrate(&x)?;
    let config = ctx.run_config("integrate", json!({ "file": file }), no_truncation(), no_sampling());
    Ok(Outcome { config, result: Value::String(drcycle::arith::fmt_q(&v)), report: None, exit: 0 })
}

fn cmd_pair(ctx: &Ctx, first: &Path, second: &Path) -> Result<Outcome, Failure> {
    let x = read_class(first, "first")?;
    let y = read_class(second, "second")?;
    let v = pair(&x, &y)?;
    let config = ctx.run_config("pair", json!({ "first": first, "second": second }), no_truncation(), no_sampling());
    Ok(Outcome { config, result: Value::String(drcycle::arith::fmt_q(&v)), report: None, exit: 0 })
}

fn need<T>(x: Option<T>, param: &str, check: &str) -> Result<T, Failure> {
    x.ok_or_else(|| Failure::usage(param, format!("check {check} needs --{param}")))
}

fn cmd_check(ctx: &Ctx, args: &CheckArgs) -> Result<Outcome, Failure> {
    let name = args.name.as_str();
    let g = need(args.g, "g", name)?;
    let a = args.a.clone().map(|l| l.0).unwrap_or_default();
    if let Some(n) = args.n {
        check_n(n, &a)?;
    }
    let neg = args.negative_control;
    let max_edges = ctx.max_edges(args.max_edges);
    let bound = ctx.bound(args.bound);
    let sampling = ctx.sampling(&args.fit);
    let mut truncation = no_truncation();
    let report = match name {
        "polynomiality" => {
            let c = need(args.c, "c", name)?;
            let me = max_edges.unwrap_or(c as usize);
            let req = match args.mode {
                ModeArg::Moduli => PixtonRequest::new(g, a.clone(), c, PixtonMode::Moduli { k: args.k }, PixtonTruncation { max_edges: me, bound: 0 })?,
                ModeArg::Pic => PixtonRequest::pic(g, a.clone(), c, me, bound.unwrap_or(0))?,
            };
            truncation = Truncation { max_edges: Some(req.truncation.max_edges), bound: Some(req.truncation.bound) };
            let mut r = check_polynomiality(&req, &sample_spec(&sampling))?;
            if neg {
                // Fitting with D = 0 cannot reproduce a nonconstant coefficient.
                let spec = SampleSpec { degree: Some(0), ..sample_spec(&sampling) };
                r = check_polynomiality(&req, &spec)?;
            }
            r
        }
        "vanishing" => check_vanishing(g, &a, args.k, need(args.c, "c", name)?, neg)?,
        "factorization" => check_factorization(g, &a, args.k, need(args.c, "c", name)?, neg)?,
        "compact-type" => check_compact_type(g, &a, args.k, neg)?,
        "conjecture-a" => check_conjecture_a(g, &a, args.k, neg)?,
        "invariance" => {
            let which: Invariance = need(args.which.as_deref(), "which", name)?.parse()?;
            let c = need(args.c, "c", name)?;
            let me = max_edges.unwrap_or(c as usize);
            let b = bound.unwrap_or(1);
            truncation = Truncation { max_edges: Some(me), bound: Some(b) };
            let mut p = InvarianceParams::new(g, a.clone(), c, me, b);
            p.b = args.shift.clone().map(|l| l.0).unwrap_or_default();
            p.r = args.r;
            p.negative_control = neg;
            check_invariance(which, &p)?
        }
        other => return Err(Failure::usage("name", format!("unknown check {other:?}"))),
    };
    let params = json!({
        "name": name, "g": g, "A": a, "c": args.c, "k": args.k, "which": args.which,
        "shift": args.shift.as_ref().map(|l| l.0.clone()), "r": args.r, "negative_control": neg,
    });
    let config = ctx.run_config("check", params, truncation, sampling);
    let exit = report.verdict.exit_code();
    Ok(Outcome { config, result: report.to_json(), report: Some(report), exit })
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let threads = resolve_threads(cli.threads, &file)?;
    set_threads(threads);
    let output = cli.output.clone().or_else(|| file.output.clone());
    let ctx = Ctx { file, output, threads, format: cli.format };
    let out = match cli.command {
        Command::Graphs { g, n, stable, max_edges, degree, bound } => cmd_graphs(&ctx, g, n, stable, max_edges, degree, bound)?,
        Command::Pixton { g, n, a, c, mode, k, r, poly, constant: _, max_edges, bound, fit } => {
            cmd_pixton(&ctx, g, n, a.0, c, mode, k, r, poly, max_edges, bound, &fit)?
        }
        Command::Dr { g, a, k } => cmd_dr(&ctx, g, a.0, k)?,
        Command::Integrate { file } => cmd_integrate(&ctx, &file)?,
        Command::Pair { first, second } => cmd_pair(&ctx, &first, &second)?,
        Command::Check(args) => cmd_check(&ctx, &args)?,
    };
    let text = match (&out.report, ctx.format) {
        (Some(r), Format::Table) => {
            let cfg = serde_json::to_string(&out.config).unwrap();
            format!("{:<10} {}\n{:<10} {}\n{}", "version", VERSION, "config", cfg, r.table())
        }
        _ => {
            let doc = json!({ "version": VERSION, "config": out.config, "result": out.result });
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
    };
    match &ctx.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::io("output", p, e))?,
        None => print!("{text}"),
    }
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::{ContextKind, ErrorKind};
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let param = e.get(ContextKind::InvalidArg).map(|v| v.to_string());
            let rendered = e.render().to_string();
            let message = rendered.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let f = Failure { kind: "usage".into(), message, parameter: param, exit: EXIT_USAGE };
            eprintln!("{}", serde_json::to_string(&f.to_json()).unwrap());
            eprint!("{}", e.render());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("{}", serde_json::to_string(&f.to_json()).unwrap());
            ExitCode::from(f.exit as u8)
        }
    }
}
