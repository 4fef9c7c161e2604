use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wsat_core::bounds::{all_bounds, best_lower_bound, gamma, gamma_count_params, gamma_graph_m, gamma_shadow, gamma_subgraph, verify_gamma_delta_inequality};
use wsat_core::constructions::{build_construction_h, build_saturated_host};
use wsat_core::corpus::{load_corpus_dir, run_corpus_checks, Status};
use wsat_core::hypergraph::{delta_m, delta_star, shadow_size, sparseness};
use wsat_core::io::{read_hypergraph, HypergraphJson};
use wsat_core::kruskal_katona::verify_kk_exhaustive;
use wsat_core::rational::{self, Rational};
use wsat_core::rhosat::{build_lp, check_count_poly_feasible, solve_rhosat, SolveMode};
use wsat_core::verify::{run_criterion, summary_line, CRITERIA};
use wsat_core::wsat::{closure, wsat_exact, Family, WsatOptions};
use wsat_core::{Caps, Hypergraph, WsatError};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const GIT_HASH: &str = env!("WSAT_GIT_HASH");

#[derive(Parser, Debug, Serialize)]
#[command(name = "wsat", version, about = "Weak saturation experiments on uniform hypergraphs")]
struct Cli {
    /// Seed for randomized sampling; recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Cap override `key=value`, applied after WSAT_CAP_OVERRIDE.
    #[arg(long = "cap", global = true, value_name = "KEY=VALUE")]
    caps: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Sparseness, codegrees, shadow sizes and gamma of a pattern.
    Invariants { file: PathBuf },
    /// Exact wsat(n, family) by search.
    Exact(ExactArgs),
    /// All lower bounds at n.
    Bounds(PatternN),
    /// Gamma in subgraph and shadow form.
    Gamma(GammaArgs),
    /// Staged construction and its saturated host.
    Construct(ConstructArgs),
    /// The set-function LP optimum.
    Rhosat(RhosatArgs),
    /// Exhaustive Kruskal-Katona check.
    KkVerify(KkArgs),
    /// Per-n table of wsat, lower bounds and rho_sat.
    Table(TableArgs),
    /// Acceptance criteria plus corpus expectation files.
    VerifyAll(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
struct PatternN {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct ExactArgs {
    /// One file per family member.
    #[arg(long, required = true)]
    pattern: Vec<PathBuf>,
    #[arg(long)]
    n: usize,
    /// Search labelled edge sets instead of isomorphism classes.
    #[arg(long)]
    no_symmetry: bool,
    /// Start the search at 0 instead of the best lower bound.
    #[arg(long)]
    no_bounds: bool,
}

#[derive(Args, Debug, Serialize)]
struct GammaArgs {
    #[arg(long)]
    pattern: PathBuf,
    /// Level; defaults to s(H).
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    /// The base pattern G.
    #[arg(long)]
    pattern: PathBuf,
    /// The vertex set P, comma separated; defaults to all of V(G).
    #[arg(long, value_delimiter = ',')]
    p: Vec<usize>,
    #[arg(long)]
    n: usize,
    /// Skip the closure check of the host.
    #[arg(long)]
    no_check: bool,
}

#[derive(Args, Debug, Serialize)]
struct RhosatArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    n: usize,
    /// Exact rational simplex (the default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Floating point simplex; the result is flagged inexact.
    #[arg(long)]
    float: bool,
    /// Write the unreduced LP as JSON rows.
    #[arg(long)]
    emit_lp: Option<PathBuf>,
    /// Also check the gamma count polymatroid as a feasible point.
    #[arg(long)]
    gamma_check: bool,
}

#[derive(Args, Debug, Serialize)]
struct KkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    e: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct TableArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    n_from: usize,
    #[arg(long)]
    n_to: usize,
    /// Leave out the rho_sat column.
    #[arg(long)]
    no_rhosat: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// Directory of expectation files.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Only evaluate the corpus expectations.
    #[arg(long)]
    corpus_only: bool,
    /// Criteria to run, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<usize>,
    /// Keep wall-clock timings (makes the output non-reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

struct Ctx {
    caps: Caps,
    seed: u64,
    workers: usize,
    config: Value,
}

struct Report {
    body: Value,
    csv: Option<String>,
    ok: bool,
}

impl Report {
    fn json(body: Value) -> Self {
        Report { body, csv: None, ok: true }
    }
}

fn load(path: &Path) -> Result<Hypergraph> {
    Ok(read_hypergraph(path)?)
}

fn hj(g: &Hypergraph) -> HypergraphJson {
    HypergraphJson::from(g)
}

/// Integers bare, other rationals as `num/den`.
fn cell(v: &Rational) -> String {
    if rational::is_integer(v) {
        v.numer().to_string()
    } else {
        rational::format(v)
    }
}

fn rat(v: &Rational) -> Value {
    Value::String(rational::format(v))
}

fn cmd_invariants(file: &Path, ctx: &Ctx) -> Result<Report> {
    let h = load(file)?;
    let r = h.r();
    let deltas: Vec<i64> = (0..=r).map(|m| delta_m(&h, m)).collect::<Result<_, _>>()?;
    let shadows: Vec<usize> = (0..=r).map(|m| shadow_size(&h, m)).collect::<Result<_, _>>()?;
    let s = sparseness(&h);
    let mut gammas = Vec::new();
    if s >= 2 {
        for level in 2..=r {
            match gamma(&h, level, &ctx.caps) {
                Ok(g) => gammas.push(json!({"s": level, "value": rat(&g.value), "witness": g.witness})),
                Err(WsatError::Precondition(msg)) => gammas.push(json!({"s": level, "undefined": msg})),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let headline = if s >= 2 { gamma(&h, s as usize, &ctx.caps).ok().map(|g| rat(&g.value)) } else { None };
    Ok(Report::json(json!({
        "pattern": hj(&h),
        "edges": h.num_edges(),
        "sparseness": s,
        "delta_star": delta_star(&h)?,
        "delta_m": deltas,
        "shadow_sizes": shadows,
        "gamma": headline,
        "gamma_levels": gammas,
    })))
}

fn cmd_exact(a: &ExactArgs, ctx: &Ctx) -> Result<Report> {
    let patterns: Vec<Hypergraph> = a.pattern.iter().map(|p| load(p)).collect::<Result<_>>()?;
    let fam = Family::new(patterns.clone())?;
    let opts = WsatOptions {
        symmetry: !a.no_symmetry,
        workers: (ctx.workers > 0).then_some(ctx.workers),
        use_bounds: !a.no_bounds,
    };
    let res = wsat_exact(a.n, &fam, &opts, &ctx.caps)?;
    Ok(Report::json(json!({
        "n": res.n,
        "patterns": patterns.iter().map(hj).collect::<Vec<_>>(),
        "value": res.value,
        "witness": hj(&res.witness),
        "start": res.start,
        "levels": res.levels,
        "certificate": res.certificate,
    })))
}

fn cmd_bounds(a: &PatternN, ctx: &Ctx) -> Result<Report> {
    let h = load(&a.pattern)?;
    Ok(Report::json(json!({
        "pattern": hj(&h),
        "n": a.n,
        "bounds": all_bounds(&h, a.n, &ctx.caps)?,
        "best": rat(&best_lower_bound(&h, a.n, &ctx.caps)?),
    })))
}

fn cmd_gamma(a: &GammaArgs, ctx: &Ctx) -> Result<Report> {
    let h = load(&a.pattern)?;
    let s = match a.s {
        Some(s) => s,
        None if sparseness(&h) >= 2 => sparseness(&h) as usize,
        None => bail!("s(H) = {} < 2; pass --s explicitly", sparseness(&h)),
    };
    let sub = gamma_subgraph(&h, s, &ctx.caps)?;
    let sh = gamma_shadow(&h, s, &ctx.caps)?;
    let mut body = json!({
        "pattern": hj(&h),
        "s": s,
        "subgraph": {"value": rat(&sub.value), "witness": sub.witness},
        "shadow": {"value": rat(&sh.value), "witness": sh.witness},
        "agree": sub.value == sh.value,
    });
    if h.r() == 2 {
        let mut graph = Vec::new();
        for m in 1..=2 {
            let g = gamma_graph_m(&h, m, &ctx.caps)?;
            graph.push(json!({"m": m, "value": rat(&g.value), "witness": g.witness}));
        }
        body["graph_m"] = Value::Array(graph);
    }
    if s == h.r() && delta_star(&h)? >= 2 {
        body["codegree_check"] = serde_json::to_value(verify_gamma_delta_inequality(&h, &ctx.caps)?)?;
    }
    Ok(Report::json(body))
}

fn cmd_construct(a: &ConstructArgs, ctx: &Ctx) -> Result<Report> {
    let g = load(&a.pattern)?;
    let p: Vec<usize> = if a.p.is_empty() { (0..g.n()).collect() } else { a.p.clone() };
    let c = build_construction_h(&g, &p, &ctx.caps)?;
    let host = build_saturated_host(&c, a.n, &ctx.caps)?;
    let mut body = json!({
        "g": hj(&g),
        "p": p,
        "meta": c.meta,
        "h0": hj(&c.h0),
        "host": hj(&host.host),
        "host_edges": host.host.num_edges(),
        "z": host.z,
        "cover_blocks": host.cover.blocks.len(),
        "coefficient": rat(&host.coefficient),
        "leading_term": rat(&host.leading_term),
    });
    if !a.no_check {
        let fam = c.family()?;
        let res = closure(&host.host, &fam, &ctx.caps)?;
        body["closes"] = json!(res.is_complete());
        body["certificate_valid"] = json!(res.certificate.validate_saturating(&fam).is_ok());
    }
    Ok(Report::json(body))
}

fn cmd_rhosat(a: &RhosatArgs, ctx: &Ctx) -> Result<Report> {
    let h = load(&a.pattern)?;
    let mode = if a.float { SolveMode::Float } else { SolveMode::Exact };
    if let Some(path) = &a.emit_lp {
        let lp = build_lp(&h, a.n, &ctx.caps)?;
        let text = serde_json::to_string(&lp)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let res = solve_rhosat(&h, a.n, mode, &ctx.caps)?;
    let mut body = json!({"pattern": hj(&h), "result": res});
    if a.gamma_check {
        let params = gamma_count_params(&h, &ctx.caps)?;
        let rep = check_count_poly_feasible(&h, a.n, &params, ctx.seed, &ctx.caps)?;
        body["gamma_params"] = serde_json::to_value(&params)?;
        body["gamma_feasibility"] = serde_json::to_value(&rep)?;
    }
    Ok(Report::json(body))
}

fn cmd_kk(a: &KkArgs, ctx: &Ctx) -> Result<Report> {
    let rep = verify_kk_exhaustive(a.n, a.r, a.e, a.m, &ctx.caps)?;
    let ok = rep.pass;
    Ok(Report {
        body: serde_json::to_value(rep)?,
        csv: None,
        ok,
    })
}

fn cmd_table(a: &TableArgs, ctx: &Ctx) -> Result<Report> {
    let h = load(&a.pattern)?;
    if a.n_from > a.n_to {
        bail!("empty range {}..={}", a.n_from, a.n_to);
    }
    let fam = Family::single(&h)?;
    let mut rows = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for n in a.n_from..=a.n_to {
        let w = wsat_exact(n, &fam, &WsatOptions::default(), &ctx.caps)?.value;
        let bounds = all_bounds(&h, n, &ctx.caps)?;
        if names.is_empty() {
            names = bounds.iter().map(|b| b.name.clone()).collect();
        }
        let rho = if a.no_rhosat {
            None
        } else {
            match solve_rhosat(&h, n, SolveMode::Exact, &ctx.caps) {
                Ok(res) => res.value,
                Err(WsatError::CapExceeded { .. }) => None,
                Err(e) => return Err(e.into()),
            }
        };
        rows.push((n, w, bounds, rho));
    }
    let body = json!({
        "pattern": hj(&h),
        "rows": rows.iter().map(|(n, w, bounds, rho)| json!({
            "n": n,
            "wsat": w,
            "bounds": bounds.iter().map(|b| json!({"name": b.name, "value": rat(&b.value)})).collect::<Vec<_>>(),
            "rhosat": rho.as_ref().map(rat),
        })).collect::<Vec<_>>(),
    });
    let csv = if a.format == Format::Csv {
        let mut out = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["n".to_owned(), "wsat".to_owned()];
        header.extend(names.iter().cloned());
        if !a.no_rhosat {
            header.push("rhosat".into());
        }
        out.write_record(&header)?;
        for (n, w, bounds, rho) in &rows {
            let mut rec = vec![n.to_string(), w.to_string()];
            rec.extend(bounds.iter().map(|b| cell(&b.value)));
            if !a.no_rhosat {
                rec.push(rho.as_ref().map(cell).unwrap_or_default());
            }
            out.write_record(&rec)?;
        }
        Some(String::from_utf8(out.into_inner()?)?)
    } else {
        None
    };
    Ok(Report { body, csv, ok: true })
}

fn cmd_verify_all(a: &VerifyArgs, ctx: &Ctx) -> Result<Report> {
    let mut criteria = Vec::new();
    if !a.corpus_only {
        let ids: Vec<usize> = if a.criteria.is_empty() { (1..=CRITERIA).collect() } else { a.criteria.clone() };
        for id in ids {
            let mut rep = run_criterion(id, &ctx.caps, ctx.seed)?;
            eprintln!("{}", summary_line(&rep));
            if !a.timings {
                rep.seconds = 0.0;
            }
            criteria.push(rep);
        }
    }
    let checks = match &a.corpus {
        Some(dir) => run_corpus_checks(&load_corpus_dir(dir)?, &ctx.caps),
        None => Vec::new(),
    };
    for c in &checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        eprintln!("{tag} {} {}", c.entry, c.check);
    }
    let ok = criteria.iter().all(|c| c.pass) && checks.iter().all(|c| c.status != Status::Fail);
    let body = json!({
        "pass": ok,
        "criteria": criteria,
        "corpus": checks,
        "summary": {
            "criteria_passed": criteria.iter().filter(|c| c.pass).count(),
            "criteria_failed": criteria.iter().filter(|c| !c.pass).count(),
            "checks_passed": checks.iter().filter(|c| c.status == Status::Pass).count(),
            "checks_failed": checks.iter().filter(|c| c.status == Status::Fail).count(),
            "checks_skipped": checks.iter().filter(|c| c.status == Status::Skip).count(),
        },
    });
    let csv = if a.format == Format::Csv {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["item", "status", "detail"])?;
        for c in &criteria {
            out.write_record([
                format!("criterion {}", c.id),
                if c.pass { "pass".into() } else { "fail".into() },
                c.title.clone(),
            ])?;
        }
        for c in &checks {
            let status = serde_json::to_value(c.status)?.as_str().unwrap_or_default().to_owned();
            let detail = match (&c.actual, &c.reason) {
                (_, Some(reason)) => reason.clone(),
                (Some(v), None) => format!("expected {} got {}", cell(&c.expected), cell(v)),
                (None, None) => String::new(),
            };
            out.write_record([format!("{} {}", c.entry, c.check), status, detail])?;
        }
        Some(String::from_utf8(out.into_inner()?)?)
    } else {
        None
    };
    Ok(Report { body, csv, ok })
}

fn run(cli: &Cli) -> Result<bool> {
    let mut caps = Caps::from_env()?;
    for spec in &cli.caps {
        caps.apply_overrides(spec)?;
    }
    if cli.workers > 0 {
        caps.workers = cli.workers;
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let ctx = Ctx {
        config: json!({
            "command": cli.command,
            "seed": cli.seed,
            "workers": cli.workers,
            "caps": caps,
        }),
        caps,
        seed: cli.seed,
        workers: cli.workers,
    };
    let report = match &cli.command {
        Command::Invariants { file } => cmd_invariants(file, &ctx)?,
        Command::Exact(a) => cmd_exact(a, &ctx)?,
        Command::Bounds(a) => cmd_bounds(a, &ctx)?,
        Command::Gamma(a) => cmd_gamma(a, &ctx)?,
        Command::Construct(a) => cmd_construct(a, &ctx)?,
        Command::Rhosat(a) => cmd_rhosat(a, &ctx)?,
        Command::KkVerify(a) => cmd_kk(a, &ctx)?,
        Command::Table(a) => cmd_table(a, &ctx)?,
        Command::VerifyAll(a) => cmd_verify_all(a, &ctx)?,
    };
    let text = match &report.csv {
        Some(csv) => format!(
            "# wsat {VERSION} git={GIT_HASH} seed={} config={}\n{csv}",
            ctx.seed,
            serde_json::to_string(&ctx.config)?
        ),
        None => {
            let envelope = json!({
                "tool": "wsat",
                "version": VERSION,
                "git": GIT_HASH,
                "seed": ctx.seed,
                "config": ctx.config,
                "result": report.body,
            });
            serde_json::to_string_pretty(&envelope)? + "\n"
        }
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
