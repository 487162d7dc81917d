use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hodgelab::experiment::config::{MajorantSpec, RationalSpec};
use hodgelab::experiment::{prepare_output_dir, run_experiment, write_outputs, ExperimentConfig, ExperimentKind};
use hodgelab::torus::TorusGeometry;
use hodgelab::Error;

#[derive(Parser)]
#[command(name = "hodgelab", version, about = "Hodge-theoretic experiments on flat complex tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `outputDir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the bracket and contraction constants and validate them on fresh samples.
    Calibrate {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "K", alias = "k", default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        oversample: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact majorant coefficients for rational `c` and `x1`.
    Majorant {
        #[arg(long)]
        c: String,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn base_config(experiment: ExperimentKind, geometry: TorusGeometry) -> ExperimentConfig {
    ExperimentConfig {
        geometry,
        experiment,
        seed: None,
        order: 6,
        parameters: 1,
        tolerances: Default::default(),
        t_grid: vec![0.25, 0.5, 0.9],
        output_dir: None,
        instances: 50,
        calibration_samples: 1000,
        majorant: None,
        rng_seed: 0,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("HODGELAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("HODGELAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn execute(cli: Cli) -> Result<bool, Error> {
    configure_threads()?;
    let (cfg, out) = match cli.command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = out.or_else(|| cfg.output_dir.as_ref().map(PathBuf::from));
            (cfg, out)
        }
        Command::Calibrate {
            n,
            k,
            oversample,
            samples,
            rng_seed,
            out,
        } => {
            let g = TorusGeometry { n, k, oversample };
            let mut cfg = base_config(ExperimentKind::Calibrate, g);
            cfg.calibration_samples = samples;
            cfg.rng_seed = rng_seed;
            (cfg, out)
        }
        Command::Majorant { c, x1, order, tau, out } => {
            let g = TorusGeometry { n: 1, k: 1, oversample: 2 };
            let mut cfg = base_config(ExperimentKind::Majorant, g);
            cfg.order = order;
            cfg.majorant = Some(MajorantSpec {
                c: RationalSpec::Text(c),
                x1: RationalSpec::Text(x1),
                tau: tau.map(RationalSpec::Text),
            });
            (cfg, out)
        }
    };
    cfg.validate()?;
    if let Some(dir) = &out {
        prepare_output_dir(dir)?;
    }
    let outcome = run_experiment(&cfg)?;
    for c in &outcome.report.checks {
        println!("{}", c.verdict_line());
    }
    if let Some(dir) = &out {
        for p in write_outputs(&outcome, dir)? {
            println!("wrote {}", p.display());
        }
    }
    let pass = outcome.report.pass;
    println!(
        "{} {} checks in {:.2}s",
        if pass { "ALL PASS" } else { "FAILED" },
        outcome.report.checks.len(),
        outcome.elapsed.as_secs_f64()
    );
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hodgelab: {e}");
            ExitCode::from(2)
        }
    }
}
