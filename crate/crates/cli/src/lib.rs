//! Command-line harness for the teleportation channel library.
//!
//! Every report carries the seed, sample count, library version and the
//! resource fingerprint. Thread count and timing are deliberately left out so
//! that reruns with the same seed are byte-identical.

pub mod commands;
pub mod error;
pub mod output;
pub mod resource;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qtele_core::tolerance::{TOL_HERM, TOL_PSD, TOL_TRACE};
use qtele_core::{MonteCarlo, TeleportChannel, Tolerances, VERSION};

use crate::commands::AvgKind;
use crate::error::{exit, CliError};
use crate::output::Format;
use crate::resource::ResourceSpec;

pub const SAMPLES_ENV: &str = "QTELE_SAMPLES";

#[derive(Debug, Parser)]
#[command(name = "qtele", version, about = "Teleportation channel fidelity verification")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Qudit dimension d (resource lives on d ⊗ d). Defaults to 2 for
    /// presets; inferred from a matrix file.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// bell | maximally_mixed | isotropic(p) | random_density(seed) | path to
    /// a JSON or CSV matrix.
    #[arg(long, global = true, default_value = "bell")]
    pub resource: ResourceSpec,
    /// Monte Carlo sample count.
    #[arg(long, global = true, env = SAMPLES_ENV, default_value_t = 100_000)]
    pub samples: usize,
    /// RNG seed; drawn from entropy and printed to stderr when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker thread cap. Does not affect results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Pass threshold in standard errors for Monte Carlo checks.
    #[arg(long, global = true, default_value_t = 4.0)]
    pub sigmas: f64,
    #[arg(long, global = true, default_value_t = TOL_HERM)]
    pub tol_herm: f64,
    #[arg(long, global = true, default_value_t = TOL_PSD)]
    pub tol_psd: f64,
    #[arg(long, global = true, default_value_t = TOL_TRACE)]
    pub tol_trace: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Outcome grid, singlet fraction and closed-form averages.
    ChannelInfo,
    /// Monte Carlo average fidelity against its closed form.
    VerifyAvg {
        #[arg(long, value_enum, default_value = "fidelity")]
        kind: AvgKind,
    },
    /// Numerical checks of the identities behind the entanglement-fidelity formula.
    VerifyProof,
    /// Step-by-step protocol simulation against the channel on random inputs.
    ProtocolEquiv {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Serialize)]
pub struct ResourceInfo {
    pub spec: String,
    pub fingerprint: String,
}

#[derive(Debug, Serialize)]
pub struct Report<B> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub d: usize,
    pub resource: Option<ResourceInfo>,
    #[serde(flatten)]
    pub body: B,
    pub pass: bool,
}

/// Rendered report and aggregate verdict.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            exit::PASS
        } else {
            exit::VERIFICATION_FAILED
        }
    }
}

impl Common {
    fn tolerances(&self) -> Result<Tolerances, CliError> {
        for (name, v) in [
            ("--tol-herm", self.tol_herm),
            ("--tol-psd", self.tol_psd),
            ("--tol-trace", self.tol_trace),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Validation(format!("{name} must be a non-negative number")));
            }
        }
        Ok(Tolerances {
            herm: self.tol_herm,
            psd: self.tol_psd,
            trace: self.tol_trace,
            ..Tolerances::default()
        })
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(d) = self.dim {
            if d < 2 {
                return Err(CliError::Validation(format!("--dim must be at least 2 (got {d})")));
            }
        }
        if self.samples < 2 {
            return Err(CliError::Validation(format!(
                "--samples must be at least 2 (got {})",
                self.samples
            )));
        }
        if self.threads == Some(0) {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        if !(self.sigmas.is_finite() && self.sigmas > 0.0) {
            return Err(CliError::Validation("--sigmas must be positive".into()));
        }
        Ok(())
    }

    fn seed_or_entropy(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        })
    }

    fn resource(&self) -> Result<(qtele_core::DensityMatrix, TeleportChannel, ResourceInfo), CliError> {
        let chi = self.resource.resolve(self.dim, &self.tolerances()?)?;
        let ch = TeleportChannel::from_resource(&chi)?;
        let info = ResourceInfo {
            spec: self.resource.to_string(),
            fingerprint: ch.fingerprint().to_string(),
        };
        Ok((chi, ch, info))
    }
}

fn finish<B: Serialize>(report: Report<B>, format: Format) -> Result<Outcome, CliError> {
    let pass = report.pass;
    Ok(Outcome {
        text: output::render(&report, format)?,
        pass,
    })
}

/// Runs a parsed command and renders its report without writing it.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    c.validate()?;
    let mc = MonteCarlo::with_threads(c.threads);
    match &cli.command {
        Command::ChannelInfo => {
            let (_, ch, info) = c.resource()?;
            let (body, pass) = commands::channel_info(&ch)?;
            finish(
                Report {
                    command: "channel-info",
                    version: VERSION,
                    seed: None,
                    samples: None,
                    d: ch.d(),
                    resource: Some(info),
                    body,
                    pass,
                },
                c.format,
            )
        }
        Command::VerifyAvg { kind } => {
            let (_, ch, info) = c.resource()?;
            let seed = c.seed_or_entropy();
            let (body, pass) = commands::verify_avg(&ch, *kind, c.samples, seed, c.sigmas, &mc)?;
            finish(
                Report {
                    command: "verify-avg",
                    version: VERSION,
                    seed: Some(seed),
                    samples: Some(c.samples),
                    d: ch.d(),
                    resource: Some(info),
                    body,
                    pass,
                },
                c.format,
            )
        }
        Command::VerifyProof => {
            let d = c.dim.unwrap_or(2);
            let seed = c.seed_or_entropy();
            let (body, pass) = commands::verify_proof(d, c.samples, seed, c.sigmas, &mc)?;
            finish(
                Report {
                    command: "verify-proof",
                    version: VERSION,
                    seed: Some(seed),
                    samples: Some(c.samples),
                    d,
                    resource: None,
                    body,
                    pass,
                },
                c.format,
            )
        }
        Command::ProtocolEquiv { trials } => {
            if *trials == 0 {
                return Err(CliError::Validation("--trials must be at least 1".into()));
            }
            let (chi, ch, info) = c.resource()?;
            let seed = c.seed_or_entropy();
            let (body, pass) = commands::protocol_equiv(&chi, &ch, *trials, seed)?;
            finish(
                Report {
                    command: "protocol-equiv",
                    version: VERSION,
                    seed: Some(seed),
                    samples: None,
                    d: ch.d(),
                    resource: Some(info),
                    body,
                    pass,
                },
                c.format,
            )
        }
    }
}

/// Executes the command, writes the report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|outcome| {
        match &cli.common.out {
            Some(path) => std::fs::write(path, &outcome.text)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
