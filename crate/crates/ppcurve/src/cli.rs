//! Command-line front end for the `ppcurve` binary.
//!
//! Every subcommand logs its resolved configuration (including defaulted
//! values) to stderr, prints a one-line summary to stdout, and writes JSON or
//! CSV artifacts atomically. Exit codes: 0 on success with all pass flags
//! true, 1 when an experiment's pass flag is false, 2 on usage errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bootstrap::{bootstrap_replicates, ReplicateStatistic, ResampleMode};
use crate::copulas::CopulaModel;
use crate::empirical::{build_pp_plot, SortedSample, StepFunction};
use crate::error::{Error, Result};
use crate::experiments::{
    run_bootstrap_validity_experiment, run_convergence_experiment, run_divergence_diagnostic,
    run_dkw_check, run_equality_test, run_inequality_check, ExperimentConfig, ExperimentReport,
    SamplingMode,
};
use crate::io::{read_column_csv, read_paired_csv, write_atomic};
use crate::limit::{build_limit_sampler, LimitSpec};
use crate::margins::MarginModel;
use crate::rng::{tag, StreamKey};

#[derive(Debug, Parser)]
#[command(
    name = "ppcurve",
    version,
    about = "P-P curve inference: plots, bootstrap, limit simulation, Monte Carlo checks"
)]
struct Cli {
    /// Worker thread cap (also via PPCURVE_THREADS); 0 = rayon default.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Margin specification for X, e.g. uniform:0,1 | normal:0,1 |
    /// exponential:1 | atoms:0=0.5,1=0.5 | atomunif:0.5,0.3,0,1
    #[arg(long)]
    fx: String,

    /// Margin specification for Y (same grammar as --fx).
    #[arg(long)]
    gy: String,

    /// Copula: product | gaussian:RHO | clayton:THETA | comonotone |
    /// countermonotone
    #[arg(long, default_value = "product")]
    copula: String,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[command(flatten)]
    models: ModelArgs,

    /// Comma-separated ascending sample sizes.
    #[arg(long, default_value = "256,1024,4096", value_delimiter = ',')]
    n: Vec<usize>,

    /// Two-sample ratio rho = n/(m+n); switches to independent-samples mode.
    #[arg(long, conflicts_with = "m")]
    rho: Option<f64>,

    /// x-sample size m for independent mode (single n only); rho = n/(m+n).
    #[arg(long)]
    m: Option<usize>,

    /// Monte Carlo replicates per sample size.
    #[arg(long, default_value_t = 2000)]
    reps: usize,

    /// Bootstrap replicates B.
    #[arg(long = "boot-b", default_value_t = 2000)]
    boot_b: usize,

    /// Grid size J for limit paths and moduli.
    #[arg(long, default_value_t = 512)]
    grid: usize,

    /// Shift h for the modulus diagnostic; must align to the 1/J grid.
    #[arg(long, default_value_t = 1.0 / 64.0)]
    shift: f64,

    /// Limit-law draws.
    #[arg(long = "limit-draws", default_value_t = 20_000)]
    limit_draws: usize,

    /// Master seed; all streams derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Report output path (JSON). Raw samples go to a sidecar CSV next to it.
    #[arg(long = "out")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a P-P plot from data and write its breakpoints as CSV.
    PpPlot {
        /// Paired two-column x,y CSV.
        #[arg(long = "in", required_unless_present_all = ["in_x", "in_y"], conflicts_with_all = ["in_x", "in_y"])]
        input: Option<PathBuf>,
        /// Single-column x sample (independent mode).
        #[arg(long = "in-x", requires = "in_y")]
        in_x: Option<PathBuf>,
        /// Single-column y sample (independent mode).
        #[arg(long = "in-y", requires = "in_x")]
        in_y: Option<PathBuf>,
        #[arg(long = "out")]
        out: PathBuf,
    },

    /// Bootstrap replicate statistics sqrt(n) ||R_n* - R_n||_1 as CSV.
    Bootstrap {
        #[arg(long = "in", required_unless_present_all = ["in_x", "in_y"], conflicts_with_all = ["in_x", "in_y"])]
        input: Option<PathBuf>,
        #[arg(long = "in-x", requires = "in_y")]
        in_x: Option<PathBuf>,
        #[arg(long = "in-y", requires = "in_x")]
        in_y: Option<PathBuf>,
        #[arg(long = "boot-b", default_value_t = 2000)]
        boot_b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out")]
        out: PathBuf,
    },

    /// Simulate L1 norms of the Gaussian limit process and write them as CSV.
    LimitSim {
        #[command(flatten)]
        models: ModelArgs,
        /// Two-sample ratio rho; kappa = sqrt(rho/(1-rho)). Default paired.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 20_000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out")]
        out: PathBuf,
    },

    /// Convergence experiment: finite-n law vs the limit law in KS distance.
    McConvergence(ExperimentArgs),

    /// Bootstrap validity experiment: bootstrap law vs the limit law.
    McBootstrap(ExperimentArgs),

    /// Shift-modulus divergence diagnostic vs an absolutely continuous reference.
    McDivergence(ExperimentArgs),

    /// DKW moment bound check on the x margin.
    Dkw(ExperimentArgs),

    /// Bridge integral inequality check on [a,b].
    Inequality {
        #[command(flatten)]
        args: ExperimentArgs,
        #[arg(long, default_value_t = 0.25)]
        a: f64,
        #[arg(long, default_value_t = 0.75)]
        b: f64,
    },

    /// Bootstrap equality test of H0: F = G on paired data; prints p=VALUE.
    TestEqual {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "boot-b", default_value_t = 999)]
        boot_b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional JSON output with the full test record.
        #[arg(long = "out")]
        out: Option<PathBuf>,
    },
}

/// Parses argv and dispatches; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    configure_threads(cli.threads);
    match dispatch(cli.command) {
        Ok(all_passed) => {
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(Error::InvalidParameter(msg)) | Err(Error::SpecParse(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn configure_threads(flag: usize) {
    let threads = if flag > 0 {
        flag
    } else {
        std::env::var("PPCURVE_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(0)
    };
    if threads > 0 {
        // Ignore failure when a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn parse_models(models: &ModelArgs) -> Result<(MarginModel, MarginModel, CopulaModel)> {
    let fx: MarginModel = models.fx.parse().map_err(|e| name_flag(e, "--fx"))?;
    let gy: MarginModel = models.gy.parse().map_err(|e| name_flag(e, "--gy"))?;
    let copula: CopulaModel = models.copula.parse().map_err(|e| name_flag(e, "--copula"))?;
    Ok((fx, gy, copula))
}

fn name_flag(e: Error, flag: &str) -> Error {
    match e {
        Error::SpecParse(msg) => Error::SpecParse(format!("{flag}: {msg}")),
        Error::InvalidParameter(msg) => Error::InvalidParameter(format!("{flag}: {msg}")),
        other => other,
    }
}

fn build_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let (fx, gy, copula) = parse_models(&args.models)?;
    let mut config = ExperimentConfig::new(fx, gy, copula);
    config.n_list = args.n.clone();
    config.replicates = args.reps;
    config.bootstrap_b = args.boot_b;
    config.grid_size = args.grid;
    config.shift = args.shift;
    config.limit_draws = args.limit_draws;
    config.master_seed = args.seed;
    if let Some(rho) = args.rho {
        config.mode = SamplingMode::Independent { rho };
    } else if let Some(m) = args.m {
        if args.n.len() != 1 {
            return Err(Error::InvalidParameter(
                "--m needs a single --n; pass --rho for several sizes".into(),
            ));
        }
        let n = args.n[0] as f64;
        config.mode = SamplingMode::Independent { rho: n / (m as f64 + n) };
    }
    config.validate()?;
    eprintln!(
        "config: fx={} gy={} copula={} mode={:?} n={:?} reps={} boot_b={} grid={} shift={} \
         limit_draws={} seed={}",
        config.fx,
        config.gy,
        config.copula,
        config.mode,
        config.n_list,
        config.replicates,
        config.bootstrap_b,
        config.grid_size,
        config.shift,
        config.limit_draws,
        config.master_seed
    );
    Ok(config)
}

fn read_two_samples(
    input: &Option<PathBuf>,
    in_x: &Option<PathBuf>,
    in_y: &Option<PathBuf>,
) -> Result<(Vec<f64>, Vec<f64>, ResampleMode)> {
    match (input, in_x, in_y) {
        (Some(p), _, _) => {
            let (x, y) = read_paired_csv(p)?;
            Ok((x, y, ResampleMode::Paired))
        }
        (None, Some(px), Some(py)) => {
            Ok((read_column_csv(px)?, read_column_csv(py)?, ResampleMode::Independent))
        }
        _ => Err(Error::InvalidParameter("pass --in or both --in-x and --in-y".into())),
    }
}

fn plot_csv_bytes(plot: &StepFunction) -> Vec<u8> {
    // Endpoint row (0, R_n(0)) followed by one row per breakpoint.
    let mut out = String::from("u,value\n");
    out.push_str(&format!("0,{}\n", plot.values()[0]));
    for (b, v) in plot.breakpoints().iter().zip(plot.values()) {
        out.push_str(&format!("{b},{v}\n"));
    }
    out.into_bytes()
}

fn write_report(report: &mut ExperimentReport, out: &Path) -> Result<()> {
    let sidecar = out.with_extension("samples.csv");
    if !report.samples.is_empty() {
        report.samples_csv = Some(
            sidecar
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "samples.csv".into()),
        );
        write_atomic(&sidecar, &report.samples_csv_bytes())?;
    }
    write_atomic(out, &report.to_json()?)?;
    println!("{}", report.one_line_summary());
    println!("wrote {}", out.display());
    Ok(())
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::PpPlot { input, in_x, in_y, out } => {
            let (x, y, mode) = read_two_samples(&input, &in_x, &in_y)?;
            eprintln!(
                "config: pp-plot mode={mode:?} m={} n={} out={}",
                x.len(),
                y.len(),
                out.display()
            );
            let plot = build_pp_plot(&SortedSample::new(x)?, &SortedSample::new(y)?);
            write_atomic(&out, &plot_csv_bytes(&plot))?;
            println!("pp-plot: {} cells -> {}", plot.num_cells(), out.display());
            Ok(true)
        }

        Command::Bootstrap { input, in_x, in_y, boot_b, seed, out } => {
            let (x, y, mode) = read_two_samples(&input, &in_x, &in_y)?;
            eprintln!(
                "config: bootstrap mode={mode:?} m={} n={} boot_b={boot_b} seed={seed} out={}",
                x.len(),
                y.len(),
                out.display()
            );
            let key = StreamKey::new(seed, tag::BOOTSTRAP_WEIGHTS, y.len() as u64);
            let stats =
                bootstrap_replicates(&x, &y, mode, boot_b, ReplicateStatistic::L1ToPlot, key)?;
            let mut csv = String::from("replicate,value\n");
            for (i, v) in stats.iter().enumerate() {
                csv.push_str(&format!("{i},{v}\n"));
            }
            write_atomic(&out, csv.as_bytes())?;
            let mean = stats.iter().sum::<f64>() / stats.len() as f64;
            println!("bootstrap: B={} mean={:.5} -> {}", stats.len(), mean, out.display());
            Ok(true)
        }

        Command::LimitSim { models, rho, grid, draws, seed, out } => {
            let (fx, gy, copula) = parse_models(&models)?;
            let curve = crate::margins::PPCurve::new(fx, gy);
            let spec = match rho {
                None => LimitSpec::paired(curve, copula, grid),
                Some(rho) => {
                    if copula != CopulaModel::Product {
                        return Err(Error::InvalidState(
                            "--rho (two-sample mode) assumes the product copula".into(),
                        ));
                    }
                    LimitSpec::two_sample(curve, rho, grid)?
                }
            };
            eprintln!(
                "config: limit-sim fx={} gy={} copula={} kappa={} grid={grid} draws={draws} seed={seed}",
                models.fx, models.gy, models.copula, spec.kappa
            );
            let sampler = build_limit_sampler(&spec)?;
            let norms = sampler.norm_samples(draws, StreamKey::new(seed, tag::LIMIT_PATH, 0));
            let mut csv = String::from("draw,value\n");
            for (i, v) in norms.iter().enumerate() {
                csv.push_str(&format!("{i},{v}\n"));
            }
            write_atomic(&out, csv.as_bytes())?;
            let mean = norms.iter().sum::<f64>() / norms.len() as f64;
            println!(
                "limit-sim: draws={} mean={:.5} jitter={:.0e} -> {}",
                draws,
                mean,
                sampler.jitter(),
                out.display()
            );
            Ok(true)
        }

        Command::McConvergence(args) => {
            let config = build_config(&args)?;
            let mut report = run_convergence_experiment(&config)?;
            write_report(&mut report, &args.out)?;
            Ok(report.pass)
        }

        Command::McBootstrap(args) => {
            let config = build_config(&args)?;
            let mut report = run_bootstrap_validity_experiment(&config)?;
            write_report(&mut report, &args.out)?;
            Ok(report.pass)
        }

        Command::McDivergence(args) => {
            let config = build_config(&args)?;
            let mut report = run_divergence_diagnostic(&config)?;
            write_report(&mut report, &args.out)?;
            Ok(report.pass)
        }

        Command::Dkw(args) => {
            let config = build_config(&args)?;
            let mut report = run_dkw_check(&config)?;
            write_report(&mut report, &args.out)?;
            Ok(report.pass)
        }

        Command::Inequality { args, a, b } => {
            let config = build_config(&args)?;
            let mut report = run_inequality_check(&config, a, b)?;
            write_report(&mut report, &args.out)?;
            Ok(report.pass)
        }

        Command::TestEqual { input, boot_b, seed, out } => {
            let (x, y) = read_paired_csv(&input)?;
            eprintln!(
                "config: test-equal n={} boot_b={boot_b} seed={seed} in={}",
                x.len(),
                input.display()
            );
            let test = run_equality_test(&x, &y, boot_b, seed)?;
            if let Some(out) = out {
                let mut bytes = serde_json::to_vec_pretty(&test)?;
                bytes.push(b'\n');
                write_atomic(&out, &bytes)?;
            }
            println!("p={}", test.p_value);
            Ok(true)
        }
    }
}
