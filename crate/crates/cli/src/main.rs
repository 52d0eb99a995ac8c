use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use quasihopf::classification::coalgebra_family::{build_delta_family, check_delta_family};
use quasihopf::classification::coproduct::{classify_coproduct, coproduct_grid};
use quasihopf::classification::rmatrix::{classify_grid, default_d_grid, r_ef_block, r_fe_block};
use quasihopf::classification::{build_coproduct, braided_standard, standard_coproduct, CoalgebraParams, CoproductParams, Side};
use quasihopf::fusion;
use quasihopf::module::check_module_coalgebra;
use quasihopf::pipeline::{run_pipeline, PipelineConfig};
use quasihopf::presets::build_cartan;
use quasihopf::quasi::verify_all;
use quasihopf::{AxiomReport, BetaChoice, CycNum};

#[derive(Parser)]
#[command(name = "quasihopf", version, about = "Exact verifier for quasi-Hopf data on u_i(sl2) and singlet/triplet fusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom of a preset.
    Verify(VerifyArgs),
    /// Classification sweeps.
    #[command(subcommand)]
    Classify(Classify),
    /// Module-coalgebra checks.
    #[command(subcommand)]
    Coalgebra(Coalgebra),
    /// Evaluate a fusion expression such as "Fbar[1,1] * F[1,1]".
    Fusion(FusionArgs),
    /// Preset data.
    #[command(subcommand)]
    Preset(Preset),
    /// Full reproduction run.
    Pipeline(PipelineArgs),
}

#[derive(Subcommand)]
enum Classify {
    /// Accept or reject coproduct parameters.
    Coproduct(CoproductArgs),
    /// Solve for R-matrices over a list of d values.
    Rmatrix(RmatrixArgs),
}

#[derive(Subcommand)]
enum Coalgebra {
    /// Check the coalgebra family on the induced regular module.
    Check(CoalgebraArgs),
}

#[derive(Subcommand)]
enum Preset {
    /// Print structure constants, coproduct, associator and R as JSON.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetName {
    /// The normal form with its R-matrix.
    Standard,
    /// The normal form without R.
    U,
    Cartan,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum Over {
    /// Both actions restricted to the Cartan part.
    Cartan,
    /// Left action of U with a completed coproduct.
    U,
}

#[derive(Args)]
struct Common {
    /// Odd exponent k with beta = zeta^k.
    #[arg(long, default_value_t = 1)]
    beta: u8,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "standard")]
    preset: PresetName,
    #[arg(long, allow_hyphen_values = true, default_value = "i")]
    d: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eps: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CoproductArgs {
    /// Lower parameters "1,c1,c2,c3".
    #[arg(long, default_value = "1,1,1,1")]
    c: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eps: String,
    /// Upper parameters "1,cbar1,cbar2,cbar3".
    #[arg(long, default_value = "1,i,-1,-i")]
    cbar: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    eps_bar: String,
    /// Run the built-in grid instead of a single tuple.
    #[arg(long)]
    grid: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RmatrixArgs {
    /// Values of d; defaults to ±1, ±i, ±zeta, ±zeta^3, 2, 1/2.
    #[arg(long = "d", allow_hyphen_values = true)]
    ds: Vec<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eps: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CoalgebraArgs {
    #[arg(long, default_value = "1,1,1,1")]
    c: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eps: String,
    #[arg(long, value_enum, default_value = "lower")]
    side: SideArg,
    #[arg(long, value_enum, default_value = "cartan")]
    over: Over,
    /// Free upper parameter when completing the coproduct (`--over u`).
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    cbar1: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FusionArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Expression with labels KIND[r,s], `*` for fusion, `+` for direct sum.
    expr: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long, value_enum, default_value = "standard")]
    preset: PresetName,
    #[arg(long, allow_hyphen_values = true, default_value = "i")]
    d: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eps: String,
    #[arg(long, default_value_t = 1)]
    beta: u8,
}

#[derive(Args)]
struct PipelineArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured beta exponent.
    #[arg(long)]
    beta: Option<u8>,
    /// Seed for the auxiliary twist sample.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

/// `println!` that exits quietly when stdout is closed, e.g. by `| head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

fn num(s: &str) -> Result<CycNum> {
    s.parse().with_context(|| format!("cannot parse {s:?} as an element of Q(zeta8)"))
}

fn beta(k: u8) -> Result<BetaChoice> {
    Ok(BetaChoice::new(k)?)
}

fn print_reports(reports: &[AxiomReport]) {
    for r in reports {
        out!("{r}");
    }
}

fn verify(a: &VerifyArgs) -> Result<bool> {
    let b = beta(a.common.beta)?;
    let q = match a.preset {
        PresetName::Standard => braided_standard(&num(&a.d)?, &num(&a.eps)?, b)?,
        PresetName::U => standard_coproduct(&num(&a.d)?, &num(&a.eps)?, b)?,
        PresetName::Cartan => build_cartan(b).quasi_bialgebra(),
    };
    let reports = verify_all(&q);
    if a.common.json {
        out!("{}", serde_json::to_string_pretty(&json!({ "preset": q.name, "reports": reports }))?);
    } else {
        out!("{}", q.name);
        print_reports(&reports);
    }
    Ok(reports.iter().all(AxiomReport::passed))
}

fn classify_coproducts(a: &CoproductArgs) -> Result<bool> {
    let b = beta(a.common.beta)?;
    let tuples = if a.grid {
        coproduct_grid()
    } else {
        vec![CoproductParams {
            lower: CoalgebraParams::parse(&a.c, &a.eps)?,
            upper: CoalgebraParams::parse(&a.cbar, &a.eps_bar)?,
        }]
    };
    let verdicts: Vec<_> = tuples.iter().map(|p| classify_coproduct(p, b)).collect();
    if a.common.json {
        out!("{}", serde_json::to_string_pretty(&verdicts)?);
    } else {
        for v in &verdicts {
            let status = match &v.certificate {
                None => "accepted".to_string(),
                Some(c) => format!("rejected ({c})"),
            };
            out!(
                "c={:?} eps={} cbar={:?} eps_bar={}: {status}",
                v.params.lower.c, v.params.lower.eps, v.params.upper.c, v.params.upper.eps
            );
            if !a.grid {
                print_reports(&v.reports);
            }
        }
        let accepted = verdicts.iter().filter(|v| v.accepted).count();
        out!("{accepted} of {} accepted", verdicts.len());
    }
    Ok(verdicts
        .iter()
        .all(|v| v.conditions_agree && (!v.accepted || v.reports.iter().all(AxiomReport::passed))))
}

fn classify_rmatrix(a: &RmatrixArgs) -> Result<bool> {
    let b = beta(a.common.beta)?;
    let ds = if a.ds.is_empty() { default_d_grid() } else { a.ds.iter().map(|s| num(s)).collect::<Result<_>>()? };
    let entries = classify_grid(&ds, &num(&a.eps)?, b)?;
    let ok = entries.iter().all(|e| {
        (e.solution.exists && e.solution.verification.iter().all(AxiomReport::passed)) || e.solution.certificate.is_some()
    });
    if a.common.json {
        let out: Vec<_> = entries
            .iter()
            .map(|e| {
                json!({
                    "d": e.d,
                    "eps": e.eps,
                    "solution": e.solution,
                    "r_fe": e.solution.r.as_ref().map(r_fe_block),
                    "r_ef": e.solution.r.as_ref().map(r_ef_block),
                    "ansatz_mismatches": e.ansatz_mismatches.len(),
                })
            })
            .collect();
        out!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ok);
    }
    for e in &entries {
        if e.solution.exists {
            let all = e.solution.verification.iter().all(AxiomReport::passed);
            out!(
                "d = {}: R exists; axioms {}; F(x)E block differs from the Y = d i form in {} entries",
                e.d,
                if all { "PASS" } else { "FAIL" },
                e.ansatz_mismatches.len()
            );
            if let Some(r) = &e.solution.r {
                for row in r_fe_block(r) {
                    let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    out!("    [{}]", cells.join(", "));
                }
            }
        } else {
            match &e.solution.certificate {
                Some(c) => out!("d = {}: no R; {} fails at {:?} (residual {})", e.d, c.constraint_id, c.witness_indices, c.residual_sample),
                None => out!("d = {}: undetermined ({} free parameters)", e.d, e.solution.undetermined_parameters),
            }
        }
        for s in &e.solution.stages {
            out!("    {:<16} {:>4} equations {:>4} pivots {:>4} free", s.stage, s.equations, s.new_pivots, s.free_parameters);
        }
    }
    Ok(ok)
}

fn coalgebra_check(a: &CoalgebraArgs) -> Result<bool> {
    let b = beta(a.common.beta)?;
    let p = CoalgebraParams::parse(&a.c, &a.eps)?;
    let side = match a.side {
        SideArg::Lower => Side::Lower,
        SideArg::Upper => Side::Upper,
    };
    let reports = match a.over {
        Over::Cartan => check_delta_family(&p, side, b)?,
        Over::U => {
            let cartan = build_cartan(b).quasi_bialgebra();
            let (params, lower) = match side {
                Side::Lower => (CoproductParams::completing(p.clone(), num(&a.cbar1)?)?, true),
                Side::Upper => {
                    bail!("--over u completes from the lower side; pass the lower parameters with --side lower")
                }
            };
            let q = build_coproduct(&params, b)?;
            let mc = build_delta_family(if lower { &params.lower } else { &params.upper }, side)?;
            check_module_coalgebra(&mc, &q, Some(&cartan))?
        }
    };
    if a.common.json {
        out!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        print_reports(&reports);
    }
    Ok(reports.iter().all(AxiomReport::passed))
}

fn fusion_cmd(a: &FusionArgs) -> Result<bool> {
    let e = fusion::evaluate(&a.expr, a.p)?;
    if a.json {
        out!("{}", serde_json::to_string_pretty(&json!({ "p": a.p, "input": a.expr, "result": e }))?);
    } else {
        out!("{e}");
    }
    Ok(true)
}

fn dump(a: &DumpArgs) -> Result<bool> {
    let b = beta(a.beta)?;
    let q = match a.preset {
        PresetName::Standard => braided_standard(&num(&a.d)?, &num(&a.eps)?, b)?,
        PresetName::U => standard_coproduct(&num(&a.d)?, &num(&a.eps)?, b)?,
        PresetName::Cartan => build_cartan(b).quasi_bialgebra(),
    };
    out!("{}", serde_json::to_string_pretty(&q.to_json())?);
    Ok(true)
}

fn pipeline(a: &PipelineArgs) -> Result<bool> {
    let mut cfg = match &a.config {
        Some(path) => {
            let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            PipelineConfig::from_json(&s)?
        }
        None => PipelineConfig::default(),
    };
    if let Some(b) = a.beta {
        cfg.beta_exponent = b;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let rep = run_pipeline(&cfg)?;
    if let Some(out) = &a.out {
        std::fs::write(out, rep.to_json()).with_context(|| format!("writing {}", out.display()))?;
    }
    if a.json {
        out!("{}", rep.to_json());
    } else {
        for s in &rep.sections {
            out!("[{}]", s.name);
            for c in &s.checks {
                let tag = if c.ok() { "ok  " } else { "FAIL" };
                let exp = if c.expected == quasihopf::pipeline::Outcome::Fail { " (expected to fail)" } else { "" };
                out!("  {tag} {}{exp}", c.name);
                if !c.ok() {
                    for w in &c.witnesses {
                        out!("         {w}");
                    }
                }
                if let Some(n) = &c.note {
                    out!("         note: {n}");
                }
            }
        }
        out!("certified: {} ({} ms)", rep.certified, rep.wall_time_ms);
    }
    Ok(rep.certified)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Classify(Classify::Coproduct(a)) => classify_coproducts(a),
        Command::Classify(Classify::Rmatrix(a)) => classify_rmatrix(a),
        Command::Coalgebra(Coalgebra::Check(a)) => coalgebra_check(a),
        Command::Fusion(a) => fusion_cmd(a),
        Command::Preset(Preset::Dump(a)) => dump(a),
        Command::Pipeline(a) => pipeline(a),
    }
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
