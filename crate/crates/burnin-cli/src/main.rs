//! `burnin`: estimate design diagnostics, recommend a burn-in length, run
//! operating-characteristics simulations, and rebuild the reference tables.
//!
//! Every run prints a provenance comment line (version, master seed, effect
//! variant, half-information size, aggregation mode) so any output can be
//! reproduced byte for byte from the command alone. Human-readable numbers
//! follow the x100 convention of the reference tables; CSV files written via
//! `--out` keep raw proportions.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use burnin::harness::{
    self, compare, oc_csv, profile_oc_rows, reproduce_table, BurninOption, OcRow, ReferenceCheck,
    ScenarioProfile, TableArtifact, TableId, TableOptions,
};
use burnin::metrics::{
    reactiveness_global, recommend_burnin, recommend_burnin_from_inputs, CiRadii,
};
use burnin::{
    standardized_effect, DeltaVariant, DesignSpec, Error, MetricReport, OperatingCharacteristics,
    RecommendMode, TrialScenario,
};

#[derive(Parser)]
#[command(
    name = "burnin",
    version,
    about = "Burn-in selection for response-adaptive two-arm binary trials"
)]
struct Cli {
    /// Worker threads for simulation batches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recommend a burn-in length for one design and scenario.
    Recommend(RecommendArgs),
    /// Full reactiveness and allocation-error report for one design.
    Metrics(MetricsArgs),
    /// Operating characteristics at a chosen burn-in policy.
    Simulate(SimulateArgs),
    /// Rebuild a reference table and diff it against the published values.
    Table(TableArgs),
    /// Standardized treatment effect for a pair of response rates.
    Delta(DeltaArgs),
}

#[derive(Args)]
struct RecommendArgs {
    #[arg(long)]
    p0: f64,
    #[arg(long)]
    p1: f64,
    #[arg(long)]
    n: u32,
    /// Half-information trial size in the burn-in budget.
    #[arg(long, default_value_t = 10_000.0)]
    n_half: f64,
    #[arg(long, default_value = "brar-u")]
    design: String,
    #[arg(long, default_value = "ssd", value_parser = parse_variant)]
    delta_variant: DeltaVariant,
    /// Aggregation: `plugin` or `perrep`.
    #[arg(long, default_value = "perrep", value_parser = parse_mode)]
    mode: RecommendMode,
    /// Metric replications behind the estimate.
    #[arg(long, default_value_t = 1000)]
    nsim: usize,
    #[arg(long, default_value_t = harness::DEFAULT_SEED)]
    seed: u64,
    /// Externally estimated reactiveness; skips simulation (requires --eps).
    #[arg(long, requires = "eps")]
    r: Option<f64>,
    /// Externally estimated final allocation error (requires --r).
    #[arg(long, requires = "r")]
    eps: Option<f64>,
    /// Write the report as one CSV row (raw units).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Integrate the diagnostics over uniformly drawn response rates instead
    /// of fixing a scenario.
    #[arg(long, conflicts_with_all = ["p0", "p1"])]
    global: bool,
    #[arg(long, required_unless_present = "global")]
    p0: Option<f64>,
    #[arg(long, required_unless_present = "global")]
    p1: Option<f64>,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 10_000.0)]
    n_half: f64,
    #[arg(long, default_value = "brar-u")]
    design: String,
    #[arg(long, default_value = "rss", value_parser = parse_variant)]
    delta_variant: DeltaVariant,
    #[arg(long, default_value = "perrep", value_parser = parse_mode)]
    mode: RecommendMode,
    #[arg(long, default_value_t = 1000)]
    nsim: usize,
    #[arg(long, default_value_t = harness::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Profile file describing scenario, designs, and burn-in policies; runs
    /// the whole batch. Flags given alongside it override the file's values.
    #[arg(long, conflicts_with_all = ["p0", "p1", "n", "design", "burnin"])]
    profile: Option<PathBuf>,
    #[arg(long, required_unless_present = "profile")]
    p0: Option<f64>,
    #[arg(long, required_unless_present = "profile")]
    p1: Option<f64>,
    #[arg(long, required_unless_present = "profile")]
    n: Option<u32>,
    #[arg(long, required_unless_present = "profile")]
    design: Option<String>,
    /// Burn-in policy: `min`, `formula`, `third`, `half`, or a number.
    #[arg(long, required_unless_present = "profile")]
    burnin: Option<String>,
    /// Shared success rate under the null (default: p0).
    #[arg(long)]
    null_p: Option<f64>,
    /// Significance level (default 0.05).
    #[arg(long)]
    alpha: Option<f64>,
    /// Half-information trial size in the burn-in budget (default 10000).
    #[arg(long)]
    n_half: Option<f64>,
    /// Standardized-effect variant (default rss).
    #[arg(long, value_parser = parse_variant)]
    delta_variant: Option<DeltaVariant>,
    /// Trial replications per operating-characteristics cell (default 10000).
    #[arg(long)]
    nsim_oc: Option<usize>,
    /// Metric replications behind a `formula` burn-in (default 1000).
    #[arg(long)]
    nsim: Option<usize>,
    /// Master seed (default 20240612).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// One of t1, t2, t2-arrest, t2-calisto, t3, t4, fig1, fig2 (t2 builds
    /// both scenarios).
    #[arg(long)]
    id: String,
    /// Reduced replication count for a quick pass.
    #[arg(long)]
    nsim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory (or single .csv path) for the artifact files; without it the
    /// CSV goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    p0: f64,
    #[arg(long)]
    p1: f64,
    /// Report a single variant instead of both.
    #[arg(long, value_parser = parse_variant)]
    delta_variant: Option<DeltaVariant>,
}

fn parse_variant(s: &str) -> Result<DeltaVariant, String> {
    DeltaVariant::parse(s).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<RecommendMode, String> {
    RecommendMode::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Recommend(args) => cmd_recommend(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Table(args) => cmd_table(args),
        Command::Delta(args) => cmd_delta(args),
    }
}

/// The reproduction header every subcommand prints first. Fields that do not
/// apply to a subcommand stay as dashes so the line shape is stable.
fn provenance(seed: Option<u64>, variant: Option<&str>, n_half: Option<f64>, mode: Option<&str>) {
    let field = |s: Option<String>| s.unwrap_or_else(|| "-".into());
    println!(
        "# burnin {} | seed {} | delta-variant {} | n-half {} | mode {}",
        env!("CARGO_PKG_VERSION"),
        field(seed.map(|s| s.to_string())),
        field(variant.map(str::to_string)),
        field(n_half.map(|h| format!("{h}"))),
        field(mode.map(str::to_string)),
    );
}

fn cmd_recommend(args: RecommendArgs) -> Result<(), Error> {
    let design = DesignSpec::from_label(&args.design)?;
    let scenario = TrialScenario::new(args.p0, args.p1, args.n)?.with_n_half(args.n_half)?;
    let report = match (args.r, args.eps) {
        (Some(r), Some(eps)) => {
            let delta = standardized_effect(args.p0, args.p1, args.delta_variant)?;
            recommend_burnin_from_inputs(&scenario, design.label(), r, eps, delta)
        }
        _ => recommend_burnin(
            &design,
            &scenario,
            args.mode,
            args.nsim,
            args.seed,
            args.delta_variant,
        )?,
    };
    provenance(
        Some(args.seed),
        Some(args.delta_variant.label()),
        Some(args.n_half),
        Some(report.mode.label()),
    );
    println!(
        "scenario p0={} p1={} n={} alpha={}",
        args.p0, args.p1, args.n, scenario.alpha
    );
    print_report(&report, false);
    if let Some(path) = &args.out {
        std::fs::write(path, report_csv(&report))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), Error> {
    let design = DesignSpec::from_label(&args.design)?;
    let report = if args.global {
        reactiveness_global(
            &design,
            args.n,
            args.n_half,
            args.mode,
            args.nsim,
            args.seed,
            args.delta_variant,
        )?
    } else {
        let scenario = TrialScenario::new(args.p0.unwrap(), args.p1.unwrap(), args.n)?
            .with_n_half(args.n_half)?;
        recommend_burnin(
            &design,
            &scenario,
            args.mode,
            args.nsim,
            args.seed,
            args.delta_variant,
        )?
    };
    provenance(
        Some(args.seed),
        Some(args.delta_variant.label()),
        Some(args.n_half),
        Some(report.mode.label()),
    );
    if args.global {
        println!(
            "scenario response rates integrated over the unit square, n={}",
            args.n
        );
    } else {
        println!(
            "scenario p0={} p1={} n={}",
            args.p0.unwrap(),
            args.p1.unwrap(),
            args.n
        );
    }
    print_report(&report, true);
    if let Some(path) = &args.out {
        std::fs::write(path, report_csv(&report))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    let profile = match &args.profile {
        Some(path) => {
            let mut profile = ScenarioProfile::from_file(path)?;
            if let Some(h) = args.n_half {
                profile.scenario = profile.scenario.with_n_half(h)?;
            }
            if let Some(a) = args.alpha {
                profile.scenario = profile.scenario.with_alpha(a)?;
            }
            if let Some(v) = args.delta_variant {
                profile.delta_variant = v;
            }
            if let Some(p) = args.null_p {
                profile.null_p = Some(p);
            }
            if let Some(n) = args.nsim_oc {
                profile.n_sim_oc = n;
            }
            if let Some(n) = args.nsim {
                profile.n_sim_metrics = n;
            }
            if let Some(s) = args.seed {
                profile.seed = s;
            }
            profile
        }
        None => {
            let scenario = TrialScenario::new(args.p0.unwrap(), args.p1.unwrap(), args.n.unwrap())?
                .with_n_half(args.n_half.unwrap_or(10_000.0))?
                .with_alpha(args.alpha.unwrap_or(0.05))?;
            ScenarioProfile {
                name: "cli".into(),
                scenario,
                designs: vec![DesignSpec::from_label(args.design.as_ref().unwrap())?],
                burnin_options: vec![BurninOption::parse(args.burnin.as_ref().unwrap())?],
                n_sim_metrics: args.nsim.unwrap_or(1000),
                n_sim_oc: args.nsim_oc.unwrap_or(10_000),
                delta_variant: args.delta_variant.unwrap_or(DeltaVariant::Rss),
                null_p: args.null_p,
                seed: args.seed.unwrap_or(harness::DEFAULT_SEED),
            }
        }
    };
    let rows = profile_oc_rows(&profile)?;
    provenance(
        Some(profile.seed),
        Some(profile.delta_variant.label()),
        Some(profile.scenario.n_half),
        None,
    );
    println!(
        "scenario p0={} p1={} n={} null_p={} replications={}",
        profile.scenario.p0,
        profile.scenario.p1,
        profile.scenario.n,
        profile.null_p.unwrap_or(profile.scenario.p0),
        profile.n_sim_oc
    );
    print_oc_rows(&rows);
    if let Some(path) = &args.out {
        std::fs::write(path, oc_csv(&rows)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<(), Error> {
    let ids = if args.id.eq_ignore_ascii_case("t2") {
        vec![TableId::T2Arrest, TableId::T2Calisto]
    } else {
        vec![TableId::parse(&args.id)?]
    };
    let opts = TableOptions {
        n_sim_metrics: args.nsim,
        n_sim_oc: args.nsim,
        seed: args.seed,
    };
    if args.nsim.is_some_and(|n| n < 1000) {
        println!(
            "note: reduced precision ({} replications)",
            args.nsim.unwrap()
        );
    }
    for id in ids {
        let artifact = reproduce_table(id, &opts)?;
        // Only the Monte Carlo tables carry a seed and aggregation mode.
        let closed_form = matches!(id, TableId::Fig1 | TableId::Fig2);
        provenance(
            (!closed_form).then(|| opts.seed.unwrap_or(harness::DEFAULT_SEED)),
            (id != TableId::Fig2).then_some("rss"),
            (id != TableId::Fig1).then_some(1000.0),
            (!closed_form).then_some("perrep"),
        );
        match &args.out {
            Some(out) => write_artifact(&artifact, out)?,
            None => print!("{}", artifact.csv),
        }
        print_reference_diff(&artifact);
    }
    Ok(())
}

/// A `.csv` path takes the CSV directly (JSON beside it); anything else is
/// treated as a directory for the artifact pair.
fn write_artifact(artifact: &TableArtifact, out: &Path) -> Result<(), Error> {
    if out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        std::fs::write(out, &artifact.csv)?;
        let json_path = out.with_extension("json");
        std::fs::write(&json_path, format!("{:#}\n", artifact.json))?;
        println!("wrote {} and {}", out.display(), json_path.display());
    } else {
        std::fs::create_dir_all(out)?;
        let (csv_path, json_path) = artifact.write_files(out)?;
        println!("wrote {} and {}", csv_path.display(), json_path.display());
    }
    Ok(())
}

fn cmd_delta(args: DeltaArgs) -> Result<(), Error> {
    let variants = match args.delta_variant {
        Some(v) => vec![v],
        None => vec![DeltaVariant::Rss, DeltaVariant::Ssd],
    };
    let label = args.delta_variant.map_or("both", |v| v.label());
    provenance(None, Some(label), None, None);
    for variant in variants {
        let delta = standardized_effect(args.p0, args.p1, variant)?;
        println!("{} {}", variant.label(), fmt_delta(delta));
    }
    Ok(())
}

fn fmt_delta(delta: f64) -> String {
    if delta.is_infinite() {
        "inf".into()
    } else {
        format!("{delta:.6}")
    }
}

fn pm(value: f64, radius: f64) -> String {
    format!("{:.2} +/- {:.2}", value * 100.0, radius * 100.0)
}

fn print_report(report: &MetricReport, candidates: bool) {
    println!("design   {}", report.design);
    if report.n_sim > 0 {
        let rho = if report.rho.is_nan() {
            "varies".to_string()
        } else {
            format!("{:.4}", report.rho)
        };
        println!("rho      {rho}   replications {}", report.n_sim);
    }
    if candidates {
        let tilde = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{:.2}", x * 100.0));
        println!(
            "slopes   toward rho {} | toward 0 {} | toward 1 {}  (x100)",
            tilde(report.r_tilde_rho),
            tilde(report.r_tilde_0),
            tilde(report.r_tilde_1)
        );
    }
    println!("delta    {:.4}   budget {:.2}", report.delta, report.budget);
    println!("r        {}  (x100)", pm(report.r, report.ci.r));
    println!("eps_rho  {}  (x100)", pm(report.eps_rho, report.ci.eps));
    println!("r+eps    {}  (x100)", pm(report.sum(), report.ci.sum()));
    println!("b        {} +/- {:.2}", report.b, report.ci.b);
    println!("BP       {}  (x100)", pm(report.bp, report.ci.bp));
    for warning in &report.warnings {
        println!("warning: {warning}");
    }
}

fn report_csv(report: &MetricReport) -> String {
    let CiRadii { r, eps, b, bp } = report.ci;
    format!(
        "design,mode,n_sim,rho,r,eps_rho,sum,delta,budget,b,bp,ci_r,ci_eps,ci_b,ci_bp\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        report.design,
        report.mode.label(),
        report.n_sim,
        report.rho,
        report.r,
        report.eps_rho,
        report.sum(),
        report.delta,
        report.budget,
        report.b,
        report.bp,
        r,
        eps,
        b,
        bp
    )
}

fn print_oc_rows(rows: &[OcRow]) {
    println!(
        "{:<8} {:>8} {:>5} {:>9} {:>9} {:>9} {:>9} {:>6} {:>6} {:>9}",
        "design",
        "burnin",
        "b",
        "type1_z1",
        "type1_z0",
        "power_z1",
        "power_z0",
        "prop1",
        "best",
        "mse"
    );
    for row in rows {
        let oc: &OperatingCharacteristics = &row.oc;
        let rate = |x: f64| format!("{:.2}", x * 100.0);
        println!(
            "{:<8} {:>8} {:>5} {:>9} {:>9} {:>9} {:>9} {:>6.3} {:>6.3} {:>9.6}",
            row.design,
            row.option.map_or("-".to_string(), |o| o.label()),
            row.display_b.map_or("-".to_string(), |b| b.to_string()),
            rate(oc.type1_z1),
            rate(oc.type1_z0),
            rate(oc.power_z1),
            rate(oc.power_z0),
            oc.mean_prop_arm1,
            oc.patient_benefit,
            oc.mse
        );
    }
}

fn print_reference_diff(artifact: &TableArtifact) {
    let checks = compare(artifact);
    if checks.is_empty() {
        println!("reference: no published values for {}", artifact.id.name());
        return;
    }
    let (pinned, info): (Vec<&ReferenceCheck>, Vec<&ReferenceCheck>) =
        checks.iter().partition(|c| c.pinned);
    let passed = |set: &[&ReferenceCheck]| set.iter().filter(|c| c.pass()).count();
    println!(
        "reference {}: pinned {}/{} within tolerance, informational {}/{}",
        artifact.id.name(),
        passed(&pinned),
        pinned.len(),
        passed(&info),
        info.len()
    );
    for check in checks.iter().filter(|c| !c.pass()) {
        println!(
            "  off: {} {} = {:.2} vs published {:.2} (tol {:.2}{})",
            check.table,
            check.cell,
            check.actual,
            check.expected,
            check.tol,
            if check.pinned { ", pinned" } else { "" }
        );
    }
}
