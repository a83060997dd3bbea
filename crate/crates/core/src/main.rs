//! Command-line front end: fit a dataset, enumerate tree catalogs, or run
//! registry benchmarks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use gentree::bench::{run_benchmark, BenchReport};
use gentree::enumerate::{enumerate_gentrees, EnumConfig, OperatorSet, RuleSet};
use gentree::io::{inject_noise, load_dataset, save_report};
use gentree::scheduler::{default_plan, search_with_restarts, RestartPhase, SearchOptions};
use gentree::solver::SolverConfig;
use gentree::SolverConfig64;

#[derive(Parser)]
#[command(name = "gentree", version, about = "Symbolic regression over generalized expression trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a closed-form model to a CSV dataset
    Fit(FitArgs),
    /// Enumerate the pruned tree catalog and print counts per depth
    Enumerate(EnumerateArgs),
    /// Run problems from the built-in benchmark registry
    Bench(BenchArgs),
}

#[derive(clap::Args)]
struct FitArgs {
    /// points CSV: header row of variable names, target column last
    #[arg(long)]
    data: PathBuf,
    /// units CSV (name,dim1,...); omit to disable dimensional analysis
    #[arg(long)]
    units: Option<PathBuf>,
    /// maximum tree depth
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// maximum number of gated constants per model
    #[arg(long, default_value_t = 1)]
    max_constants: usize,
    /// constant box half-width
    #[arg(long, default_value_t = 100.0)]
    omega: f64,
    /// per-variable power bound
    #[arg(long, default_value_t = 2)]
    delta: i32,
    /// per-leaf bound on the sum of absolute powers
    #[arg(long, default_value_t = 6)]
    tau: i32,
    /// SSE at or below which a model counts as solved
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// wall-clock limit per phase, seconds
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// worker slice length, seconds
    #[arg(long, default_value_t = 1.0)]
    slice: f64,
    /// relative noise level applied to targets before fitting
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// seed for the noise generator
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// whether gated constants may carry their own units
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    dimensioned_constants: bool,
    /// operator set, e.g. +,*,/,sqrt
    #[arg(long, default_value = "+,*,/,sqrt")]
    ops: String,
    /// restart phases: "default", or OPS[:TOL[:BUDGET]] joined with ';'
    #[arg(long)]
    restart_plan: Option<String>,
    /// write the full search report as JSON
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EnumerateArgs {
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// operator set, e.g. +,*,/,sqrt
    #[arg(long, default_value = "+,*,/,sqrt")]
    ops: String,
    /// pruning rules: "all", "none", or a comma list like r1,r2a,sqrt-l
    #[arg(long, default_value = "all")]
    rules: String,
    /// named configuration; only "paper-counts" is defined
    #[arg(long)]
    preset: Option<String>,
    /// also print each surviving tree, one per line
    #[arg(long)]
    print_trees: bool,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// comma-separated registry labels, e.g. I.12.2,I.25.13
    #[arg(long, default_value = "")]
    labels: String,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    max_constants: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// wall-clock limit per phase, seconds
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// worker slice length, seconds
    #[arg(long, default_value_t = 1.0)]
    slice: f64,
    /// dataset generation seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// write the benchmark table as JSON
    #[arg(long)]
    report_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let code = match cli.command {
        Command::Fit(args) => fit(args),
        Command::Enumerate(args) => enumerate(args),
        Command::Bench(args) => bench(args),
    };
    ExitCode::from(code)
}

fn fit(args: FitArgs) -> u8 {
    let data = match load_dataset(&args.data, args.units.as_deref()) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let data = if args.noise > 0.0 { inject_noise(&data, args.noise, args.seed) } else { data };
    let cfg = SolverConfig64 {
        depth: args.depth,
        max_constants: args.max_constants,
        omega: args.omega,
        delta: args.delta,
        tau: args.tau,
        tol: args.tol,
        time_limit_s: args.time_limit,
        dimensioned_constants: args.dimensioned_constants,
        ..SolverConfig::default()
    };
    let plan = match build_plan(&args, &cfg) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let opts = SearchOptions {
        threads: args.threads,
        slice_s: args.slice,
        label: args.data.file_stem().map(|s| s.to_string_lossy().into_owned()),
        seed: (args.noise > 0.0).then_some(args.seed),
    };
    let report = match search_with_restarts(&data, &cfg, &plan, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Some(path) = &args.report_out {
        if let Err(e) = save_report(&report, path) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    println!("status: {}", report.status);
    println!("elapsed: {:.2} s", report.elapsed_s);
    match report.best_model() {
        Some(best) => {
            println!("model: {}", best.rendered);
            println!("sse: {:e}", best.sse);
            0
        }
        None => {
            println!("no model found");
            2
        }
    }
}

fn build_plan(args: &FitArgs, cfg: &SolverConfig64) -> Result<Vec<RestartPhase<f64>>, String> {
    let Some(spec) = args.restart_plan.as_deref() else {
        let ops = OperatorSet::parse(&args.ops).map_err(|e| e.to_string())?;
        return Ok(vec![RestartPhase { ops, tol: cfg.tol, budget_s: cfg.time_limit_s }]);
    };
    if spec == "default" {
        return Ok(default_plan(cfg));
    }
    let mut plan = Vec::new();
    for part in spec.split(';') {
        let mut fields = part.split(':');
        let ops_part = fields.next().unwrap_or("");
        let ops = OperatorSet::parse(ops_part).map_err(|e| e.to_string())?;
        let tol = match fields.next() {
            Some(t) => t.parse::<f64>().map_err(|_| format!("bad tolerance {t:?}"))?,
            None => cfg.tol,
        };
        let budget_s = match fields.next() {
            Some(b) => b.parse::<f64>().map_err(|_| format!("bad budget {b:?}"))?,
            None => cfg.time_limit_s,
        };
        if let Some(extra) = fields.next() {
            return Err(format!("unexpected phase field {extra:?}"));
        }
        plan.push(RestartPhase { ops, tol, budget_s });
    }
    Ok(plan)
}

fn enumerate(args: EnumerateArgs) -> u8 {
    let cfg = match args.preset.as_deref() {
        Some("paper-counts") => EnumConfig::paper_counts(args.depth),
        Some(other) => {
            eprintln!("error: unknown preset {other:?}");
            return 1;
        }
        None => {
            let ops = match OperatorSet::parse(&args.ops) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            };
            let rules = match RuleSet::parse(&args.rules) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            };
            EnumConfig { rules, ..EnumConfig::new(args.depth, ops) }
        }
    };
    let catalog = match enumerate_gentrees(&cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    for (d, count) in catalog.cumulative_counts().iter().enumerate() {
        println!("depth {d}: {count}");
    }
    if args.print_trees {
        for tree in catalog.trees() {
            println!("{}", tree.serialize());
        }
    }
    0
}

fn bench(args: BenchArgs) -> u8 {
    let labels: Vec<String> = args
        .labels
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    let cfg = SolverConfig64 {
        depth: args.depth,
        max_constants: args.max_constants,
        tol: args.tol,
        time_limit_s: args.time_limit,
        ..SolverConfig::default()
    };
    let opts = SearchOptions {
        threads: args.threads,
        slice_s: args.slice,
        label: None,
        seed: Some(args.seed),
    };
    let report = match run_benchmark(&labels, &cfg, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Some(path) = &args.report_out {
        if let Err(e) = write_bench_report(&report, path) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    print!("{}", report.summary());
    0
}

fn write_bench_report(report: &BenchReport, path: &PathBuf) -> Result<(), String> {
    let json = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    std::fs::write(path, json).map_err(|e| e.to_string())
}
