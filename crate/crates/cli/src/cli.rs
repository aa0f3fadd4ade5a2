//! Argument parsing and dispatch for the `jordan-kepler` binary.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, RecoverSource};
use crate::config::{CoefficientConfig, RunConfig};
use crate::error::{CliError, CliResult, Outcome};
use crate::suites::parse_suites;

#[derive(Debug, Parser)]
#[command(
    name = "jordan-kepler",
    version,
    about = "Kernels, blow-up charts and curvature on matrix Jordan triples"
)]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags that override the config file.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// JSON config file; flags win over its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub r: Option<usize>,
    #[arg(long, global = true)]
    pub s: Option<usize>,
    #[arg(long, global = true)]
    pub lambda: Option<usize>,
    /// Use the nu-rule sequence with this ν.
    #[arg(long, global = true, conflicts_with = "hardy")]
    pub nu: Option<f64>,
    /// Use the Hardy sequence (all ρ = 1).
    #[arg(long, global = true)]
    pub hardy: bool,
    /// Truncation weight.
    #[arg(long = "M", global = true)]
    pub max_weight: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub cases: Option<usize>,
    #[arg(long, global = true)]
    pub mc_samples: Option<usize>,
    /// Ball dimension for the beta-integral suite.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, env = "KEPLER_WORKERS")]
    pub workers: Option<usize>,
    /// Tolerance override `suite.case=value`; repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    pub tolerances: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write a JSON-lines report.
    Verify {
        /// Suite name or `all`; repeatable or comma-separated.
        #[arg(long = "suite", value_delimiter = ',', required = true)]
        suites: Vec<String>,
    },
    /// Scan the curvature of the submodule metric over a chart grid.
    #[command(allow_negative_numbers = true)]
    CurvatureScan {
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        #[arg(long)]
        s_value: Option<f64>,
        /// Coarse finite-difference step; the fine step is half of it.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Recover the coefficient table from Q-kernel data.
    Recover {
        /// `hardy` or `nu:<value>`; repeatable.
        #[arg(long = "generator")]
        generators: Vec<String>,
        /// Samples file written by `--emit-samples`; repeatable.
        #[arg(long = "samples")]
        samples: Vec<PathBuf>,
        /// Write the Q-kernel of this generator on the recovery grid instead.
        #[arg(long)]
        emit_samples: Option<String>,
    },
}

impl Overrides {
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident => $t:ident),*) => {$(
                if let Some(v) = self.$f.clone() {
                    c.$t = v;
                }
            )*};
        }
        set!(r => r, s => s, lambda => lambda, seed => seed, cases => cases, mc_samples => mc_samples);
        if self.max_weight.is_some() {
            c.max_weight = self.max_weight;
        }
        if self.d.is_some() {
            c.d = self.d;
        }
        if self.output.is_some() {
            c.output = self.output.clone();
        }
        if self.workers.is_some() {
            c.workers = self.workers;
        }
        if let Some(nu) = self.nu {
            c.coefficients = CoefficientConfig::NuRule { nu };
        }
        if self.hardy {
            c.coefficients = CoefficientConfig::Hardy;
        }
        for t in &self.tolerances {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("tolerance `{t}` is not KEY=VALUE")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("tolerance `{t}` has a bad value")))?;
            c.tolerances.insert(k.trim().to_string(), v);
        }
        Ok(c)
    }
}

fn emit(config: &RunConfig, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &config.output {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn configure_workers(n: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

/// Run a parsed command, returning the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli, stdout, stderr) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let kind = match e {
                CliError::Config(_) => "config",
                CliError::Numerical(_) => "numerical",
                CliError::Io(_) => "io",
            };
            let msg = serde_json::json!({ "error": kind, "message": e.to_string() });
            let _ = writeln!(stderr, "{msg}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<Outcome> {
    let mut config = cli.overrides.resolve()?;
    config.validate()?;
    configure_workers(config.workers);
    match &cli.command {
        Command::Verify { suites } => {
            let suites = parse_suites(suites)?;
            let report = commands::verify(&config, &suites)?;
            emit(&config, &report.to_jsonl(), stdout)?;
            let s = report.summary();
            writeln!(
                stderr,
                "{} cases, {} failed, {} errors",
                s.cases, s.failed, s.errors
            )?;
            Ok(report.outcome())
        }
        Command::CurvatureScan {
            points,
            min,
            max,
            s_value,
            step,
        } => {
            let g = &mut config.grid;
            if let Some(v) = points {
                g.points = *v;
            }
            if let Some(v) = min {
                g.min = *v;
            }
            if let Some(v) = max {
                g.max = *v;
            }
            if let Some(v) = s_value {
                g.s_value = *v;
            }
            if let Some(v) = step {
                g.steps = (*v, *v / 2.0);
            }
            let text = commands::curvature_scan(&config)?;
            emit(&config, &text, stdout)?;
            Ok(Outcome::Pass)
        }
        Command::Recover {
            generators,
            samples,
            emit_samples,
        } => {
            if let Some(g) = emit_samples {
                let text = commands::emit_samples(&config, &g.parse()?)?;
                emit(&config, &text, stdout)?;
                return Ok(Outcome::Pass);
            }
            let mut sources = Vec::new();
            for g in generators {
                let g: CoefficientConfig = g.parse()?;
                g.sequence()?
                    .validate(&config.space()?)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                sources.push(RecoverSource::Generator(g));
            }
            for p in samples {
                sources.push(RecoverSource::Samples(commands::read_samples(
                    p,
                    config.lambda,
                )?));
            }
            let out = commands::recover(&config, &sources)?;
            let mut text = serde_json::to_string_pretty(&out)?;
            text.push('\n');
            emit(&config, &text, stdout)?;
            Ok(Outcome::Pass)
        }
    }
}
