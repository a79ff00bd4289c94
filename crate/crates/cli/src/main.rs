//! `dt`: acceptance checks and experiments on compact components of relative
//! PSL(2,ℝ) character varieties of punctured spheres.
//!
//! Exit codes: 0 success, 1 failed checks, 2 bad arguments or configuration.
//! Verbosity comes from `DT_LOG` (`error`, `warn`, `info`, `debug`, `trace`).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dt_core::chain::build_chain;
use dt_core::dynamics::orbit::{OrbitConfig, OrbitVerdict, StrategyRegistry};
use dt_core::experiments::{ExperimentConfig, ExperimentOutput, ExperimentRegistry, Table};
use dt_core::rep::chain_to_rep;
use dt_core::suite::{run_suite, SuiteOptions};

#[derive(Parser, Debug)]
#[command(name = "dt", version, about = "Triangle chains, twists and orbit experiments on DT components")]
struct Cli {
    /// JSON experiment configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    steps: Option<usize>,
    /// Primary output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Number of punctures.
    #[arg(long, global = true, value_name = "N")]
    n: Option<usize>,
    /// Fingerprint quantum.
    #[arg(long, global = true, value_name = "REAL")]
    quantum: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the acceptance checks; one line per check.
    Verify,
    /// Stream an orbit as JSON lines.
    Orbit,
    /// Write a scan table as CSV.
    Scan {
        #[arg(long, value_enum)]
        kind: ScanKind,
    },
    /// Run the density probe and write its JSON report.
    Density,
    /// Run the restriction/twist consistency check and write its JSON report.
    Glue,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanKind {
    Fiber,
    Transversality,
    ZeroLocus,
}

impl ScanKind {
    fn experiment(self) -> &'static str {
        match self {
            ScanKind::Fiber => "fiber",
            ScanKind::Transversality => "transversality",
            ScanKind::ZeroLocus => "zero-locus",
        }
    }
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Verify => verify(cli),
        Command::Orbit => orbit(cli, &load_config(cli)?),
        Command::Scan { kind } => {
            let cfg = load_config(cli)?;
            let out = experiment(kind.experiment(), &cfg, None)?;
            let table = out.table.as_ref().context("scan produced no table")?;
            with_output(cli.out.as_deref(), |w| write_csv(table, w))?;
            write_report_file(&cfg, &out)?;
            if !out.passed {
                log::warn!("{} scan reported violations", kind.experiment());
            }
            Ok(true)
        }
        Command::Density => report_command(cli, "density"),
        Command::Glue => report_command(cli, "glue"),
    }
}

fn verify(cli: &Cli) -> Result<bool> {
    let mut opts = SuiteOptions::default();
    if let Some(seed) = cli.seed {
        opts.seed = seed;
    }
    opts.filter_n = cli.n.map(|n| vec![n]);
    let mut passed = true;
    with_output(cli.out.as_deref(), |w| {
        let mut io_err = Ok(());
        let results = run_suite(&opts, |r| {
            if io_err.is_ok() {
                io_err = writeln!(w, "{}", r.line()).and_then(|_| w.flush());
            }
        });
        io_err?;
        let failed = results.iter().filter(|r| !r.passed()).count();
        writeln!(w, "{} of {} checks passed", results.len() - failed, results.len())?;
        passed = failed == 0;
        Ok(())
    })?;
    Ok(passed)
}

/// Parses the config file (if any), applies flag overrides and validates.
fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            serde_path_to_error::deserialize(de).map_err(|e| {
                let path = e.path().to_string();
                ConfigError(format!("at `{path}`: {}", e.into_inner()))
            })?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(steps) = cli.steps {
        cfg.steps = steps;
    }
    if let Some(q) = cli.quantum {
        cfg.quantum = q;
    }
    cfg.validate().map_err(|e| ConfigError(e.to_string()))?;
    Ok(cfg)
}

fn orbit(cli: &Cli, cfg: &ExperimentConfig) -> Result<bool> {
    let alpha = cfg.alpha_vector()?;
    let start = cfg.start_coords(&alpha)?;
    let gens = cfg.generator_curves()?;
    let rep = chain_to_rep(&build_chain(&alpha, &start)?)?;
    let registry = StrategyRegistry::default();
    let strategy = registry.get(&cfg.strategy)?;
    let orbit_cfg = OrbitConfig {
        max_steps: cfg.steps,
        quantum: cfg.quantum,
        seed: cfg.seed,
        ..OrbitConfig::default()
    };
    let verdict = with_output(cli.out.as_deref(), |w| {
        strategy
            .explore(&rep, &gens, &orbit_cfg, &mut |r| {
                writeln!(w, "{}", r.to_json_line()).map_err(|e| dt_core::Error::Precondition(e.to_string()))
            })
            .map_err(anyhow::Error::from)
    })?;
    match verdict {
        OrbitVerdict::Finite(size) => eprintln!("verdict: finite orbit of size {size}"),
        OrbitVerdict::BudgetExceeded => log::info!("verdict: budget of {} steps exhausted", cfg.steps),
    }
    Ok(true)
}

fn report_command(cli: &Cli, name: &str) -> Result<bool> {
    let cfg = load_config(cli)?;
    let mut samples = match &cfg.output.samples {
        Some(p) => Some(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => None,
    };
    let out = experiment(name, &cfg, samples.as_mut().map(|w| w as &mut dyn Write))?;
    if let Some(mut w) = samples {
        w.flush()?;
    }
    with_output(cli.out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &out.report)?;
        writeln!(w)?;
        Ok(())
    })?;
    if let (Some(path), Some(table)) = (&cfg.output.table, &out.table) {
        with_output(Some(path), |w| write_csv(table, w))?;
    }
    Ok(out.passed)
}

fn experiment(name: &str, cfg: &ExperimentConfig, mut samples: Option<&mut dyn Write>) -> Result<ExperimentOutput> {
    let registry = ExperimentRegistry::default();
    let exp = registry.get(name)?;
    log::info!("running {name} with seed {}", cfg.seed);
    let out = exp.run(cfg, &mut |r| match samples.as_mut() {
        Some(w) => writeln!(w, "{}", r.to_json_line()).map_err(|e| dt_core::Error::Precondition(e.to_string())),
        None => Ok(()),
    })?;
    Ok(out)
}

fn write_report_file(cfg: &ExperimentConfig, out: &ExperimentOutput) -> Result<()> {
    if let Some(path) = &cfg.output.report {
        with_output(Some(path), |w| {
            serde_json::to_writer_pretty(&mut *w, &out.report)?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    Ok(())
}

fn write_csv(table: &Table, w: &mut dyn Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&table.header)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

/// Runs `f` against the file at `path`, or standard output.
fn with_output<T>(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<T>) -> Result<T> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            let v = f(&mut w)?;
            w.flush()?;
            Ok(v)
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let v = f(&mut w)?;
            w.flush()?;
            Ok(v)
        }
    }
}
