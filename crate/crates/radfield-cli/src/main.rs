// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Batch front end for the radfield library.
//!
//! Each subcommand reads a flat `key = value` config file plus a few
//! command line overrides, runs one computation and writes deterministic
//! text output. Exit codes: 0 success, 2 configuration error, 3 file
//! error, 4 solver nonconvergence, 5 value out of physical range.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radfield::{Complex64, Error};

use commands::{
    ChainCmd, FitCmd, ModelOverrides, NoiseCmd, SensitivityCmd, SimulateCmd, ThermometerCmd,
    ThermometerInput,
};

#[derive(Parser)]
#[command(
    name = "radfield",
    version,
    about = "Steady-state modeling and thermometry for an atom terminating a waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOverrides {
    /// Number of ladder states in the model (overrides the config).
    #[arg(long)]
    levels: Option<usize>,
    /// Keep cross transition dissipator pairs (overrides the config).
    #[arg(long, value_name = "on|off", value_parser = parse_switch)]
    cross_terms: Option<bool>,
}

impl CommonOverrides {
    fn overrides(&self) -> ModelOverrides {
        ModelOverrides {
            levels: self.levels,
            cross_terms: self.cross_terms,
        }
    }
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        other => Err(format!("'{other}' is not on/off")),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("'{s}' is not RE,IM"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("'{re}' is not a number"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("'{im}' is not a number"))?;
    Ok(Complex64::new(re, im))
}

/// Exactly one way of stating what the thermometer should convert.
#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).multiple(false))]
struct ThermometerInputArgs {
    /// Measured resonant reflection as RE,IM.
    #[arg(long, value_parser = parse_complex, group = "input")]
    reflection: Option<Complex64>,
    /// Known effective occupation.
    #[arg(long, group = "input")]
    occupation: Option<f64>,
    /// Known temperature in kelvin.
    #[arg(long, group = "input")]
    temperature: Option<f64>,
}

impl ThermometerInputArgs {
    fn into_input(self) -> ThermometerInput {
        if let Some(r) = self.reflection {
            ThermometerInput::Reflection(r)
        } else if let Some(n) = self.occupation {
            ThermometerInput::Occupation(n)
        } else if let Some(t) = self.temperature {
            ThermometerInput::Temperature(t)
        } else {
            unreachable!("clap enforces one input flag");
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a reflection measurement over a power and detuning grid.
    Simulate {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output trace file.
        #[arg(long)]
        output: PathBuf,
        /// Noise seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonOverrides,
    },
    /// Fit transition frequency, linewidth, anharmonicity and line
    /// attenuation to measured traces.
    Fit {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Measured trace files (repeatable).
        #[arg(long, required = true)]
        data: Vec<PathBuf>,
        /// Reference trace to divide the data by before fitting.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Result file (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOverrides,
    },
    /// Convert between reflection, occupation and temperature.
    Thermometer {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        input: ThermometerInputArgs,
        /// Result file (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOverrides,
    },
    /// Noise-equivalent occupation and power for a given readout
    /// efficiency.
    Sensitivity {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Result file (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOverrides,
    },
    /// Photon occupation after each stage of an attenuator chain.
    Chain {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Chain file with `attenuation_db, temperature_k` rows.
        #[arg(long)]
        chain: PathBuf,
        /// Result file (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Occupations induced by a measured noise spectrum.
    Noise {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Spectrum file with `frequency_hz, occupation` rows.
        #[arg(long)]
        spectrum: PathBuf,
        /// Result file (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOverrides,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            output,
            seed,
            common,
        } => commands::run_simulate(&SimulateCmd {
            config,
            output,
            overrides: common.overrides(),
            seed,
        }),
        Command::Fit {
            config,
            data,
            reference,
            output,
            common,
        } => commands::run_fit(&FitCmd {
            config,
            data,
            reference,
            output,
            overrides: common.overrides(),
        }),
        Command::Thermometer {
            config,
            input,
            output,
            common,
        } => commands::run_thermometer(&ThermometerCmd {
            config,
            input: input.into_input(),
            output,
            overrides: common.overrides(),
        }),
        Command::Sensitivity {
            config,
            output,
            common,
        } => commands::run_sensitivity(&SensitivityCmd {
            config,
            output,
            overrides: common.overrides(),
        }),
        Command::Chain {
            config,
            chain,
            output,
        } => commands::run_chain(&ChainCmd {
            config,
            chain,
            output,
        }),
        Command::Noise {
            config,
            spectrum,
            output,
            common,
        } => commands::run_noise(&NoiseCmd {
            config,
            spectrum,
            output,
            overrides: common.overrides(),
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Stable exit codes so scripts can tell configuration mistakes from
/// solver trouble.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::BathSizeMismatch { .. } => 2,
        Error::Io(_) | Error::Parse { .. } => 3,
        Error::NonConvergence(_) | Error::SingularSteadyState(_) => 4,
        Error::OutOfRange(_)
        | Error::NotBracketed(_)
        | Error::InvalidSteadyState(_)
        | Error::DegenerateReference { .. } => 5,
    }
}
