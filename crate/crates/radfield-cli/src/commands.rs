// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Implementations of the CLI subcommands.
//!
//! Every command reads model settings from a flat config file, takes data
//! files and overrides from the command line, and writes either a trace
//! file or a `key = value` result manifest. Outputs are deterministic:
//! identical inputs, including seeds, reproduce identical bytes.

use std::io::Write;
use std::path::{Path, PathBuf};

use radfield::analytic::{
    noise_equivalent_occupation, noise_equivalent_power, occupation_responsivity,
    optimal_rabi_ratio, SensitivityInputs,
};
use radfield::calibration::{global_fit, normalize_trace, FitConfig, FitInit};
use radfield::constants::{angular_from_hz, hz_from_angular, HBAR, KB};
use radfield::lindblad::reflection_spectrum;
use radfield::synth::{generate_synthetic_experiment, CirculatorParams, SyntheticConfig};
use radfield::thermometry::{
    band_weight, bose_occupation, chain_occupation, effective_occupation,
    occupation_from_reflection, temperature_from_occupation, weighted_occupation, InversionMode,
};
use radfield::trace::{read_chain, read_spectrum, write_atomic, ReflectionTrace};
use radfield::{BathOccupation, Complex64, Error, Result, TransmonParams};

use crate::config::Config;

/// Overrides shared by the model-driven commands.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModelOverrides {
    pub levels: Option<usize>,
    pub cross_terms: Option<bool>,
}

const DEFAULT_LEVELS: usize = 3;

/// Transmon parameters from config keys, with command line overrides.
///
/// Returns the parameters and the cross-term switch. Config frequencies
/// are in cycles (`_hz` keys); the library works in angular units.
fn model_from_config(cfg: &Config, over: &ModelOverrides) -> Result<(TransmonParams, bool)> {
    let omega_ge = angular_from_hz(cfg.require_f64("frequency_ge_hz")?);
    let alpha = angular_from_hz(cfg.require_f64("anharmonicity_hz")?);
    let gamma = angular_from_hz(cfg.require_f64("gamma_hz")?);
    let levels = match over.levels {
        Some(l) => l,
        None => cfg.get_usize("levels")?.unwrap_or(DEFAULT_LEVELS),
    };
    let mut p = TransmonParams::new(omega_ge, alpha, gamma, levels)?;
    if let Some(phi) = cfg.get_f64("gamma_phi_hz")? {
        p = p.with_dephasing(angular_from_hz(phi))?;
    }
    if let Some(nr) = cfg.get_f64("gamma_nr_hz")? {
        p = p.with_nonradiative(angular_from_hz(nr))?;
    }
    let cross = match over.cross_terms {
        Some(c) => c,
        None => cfg.get_switch("cross_terms")?.unwrap_or(true),
    };
    Ok((p, cross))
}

/// Bath occupation from config: one of `occupation` (uniform),
/// `occupation_per_transition` (list) or `temperature_k` (thermal);
/// absent means a cold bath.
fn bath_from_config(cfg: &Config, p: &TransmonParams) -> Result<BathOccupation> {
    let uniform = cfg.get_f64("occupation")?;
    let per = cfg.get_f64_list("occupation_per_transition")?;
    let temp = cfg.get_f64("temperature_k")?;
    let given = usize::from(uniform.is_some()) + usize::from(per.is_some()) + usize::from(temp.is_some());
    if given > 1 {
        return Err(Error::InvalidParameter(
            "give at most one of occupation, occupation_per_transition, temperature_k".into(),
        ));
    }
    match (uniform, per, temp) {
        (Some(n), _, _) => BathOccupation::uniform(n, p.transitions()),
        (_, Some(list), _) => {
            if list.len() != p.transitions() {
                return Err(Error::BathSizeMismatch {
                    expected: p.transitions(),
                    got: list.len(),
                });
            }
            BathOccupation::from_per_transition(list)
        }
        (_, _, Some(t)) => BathOccupation::thermal(p, t),
        _ => Ok(BathOccupation::zero(p.transitions())),
    }
}

/// Linear power transmission from `attenuation_db` (positive dB) or
/// `attenuation` (linear, in (0, 1]).
fn attenuation_from_config(cfg: &Config) -> Result<f64> {
    let db = cfg.get_f64("attenuation_db")?;
    let linear = cfg.get_f64("attenuation")?;
    match (db, linear) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter(
            "give either attenuation_db or attenuation, not both".into(),
        )),
        (Some(db), None) => Ok(10f64.powf(-db / 10.0)),
        (None, Some(a)) => Ok(a),
        (None, None) => Err(Error::InvalidParameter(
            "missing config key 'attenuation_db' (or 'attenuation')".into(),
        )),
    }
}

/// Detuning grid in angular units from `detuning_start_hz`,
/// `detuning_stop_hz` and `detuning_points`.
fn detunings_from_config(cfg: &Config) -> Result<Vec<f64>> {
    let start = angular_from_hz(cfg.require_f64("detuning_start_hz")?);
    let stop = angular_from_hz(cfg.require_f64("detuning_stop_hz")?);
    let points = cfg
        .get_usize("detuning_points")?
        .ok_or_else(|| Error::InvalidParameter("missing config key 'detuning_points'".into()))?;
    if points == 0 {
        return Err(Error::InvalidParameter("detuning_points = 0".into()));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|i| start + step * i as f64).collect())
}

fn warn_unused(cfg: &Config) {
    let unused = cfg.unused_keys();
    if !unused.is_empty() {
        eprintln!("warning: unused config keys: {}", unused.join(", "));
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Write `key = value` lines to `path`, or stdout when absent.
fn write_manifest(
    output: Option<&Path>,
    title: &str,
    entries: &[(String, String)],
) -> Result<()> {
    let render = |w: &mut dyn Write| -> Result<()> {
        writeln!(w, "# {title}")?;
        for (key, value) in entries {
            writeln!(w, "{key} = {value}")?;
        }
        Ok(())
    };
    match output {
        Some(path) => {
            write_atomic(path, |w| render(w))?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)
        }
    }
}

fn model_annotations(p: &TransmonParams, cross: bool) -> Vec<(String, String)> {
    vec![
        ("frequency_ge_hz".into(), fmt(hz_from_angular(p.omega_ge))),
        ("anharmonicity_hz".into(), fmt(hz_from_angular(p.alpha))),
        ("gamma_hz".into(), fmt(hz_from_angular(p.gamma))),
        ("gamma_phi_hz".into(), fmt(hz_from_angular(p.gamma_phi))),
        ("gamma_nr_hz".into(), fmt(hz_from_angular(p.gamma_nr))),
        ("levels".into(), p.levels.to_string()),
        (
            "cross_terms".into(),
            if cross { "on" } else { "off" }.to_string(),
        ),
    ]
}

pub struct SimulateCmd {
    pub config: PathBuf,
    pub output: PathBuf,
    pub overrides: ModelOverrides,
    pub seed: Option<u64>,
}

/// Steady-state reflection over a power and detuning grid, optionally
/// with additive noise and a circulator imperfection.
pub fn run_simulate(cmd: &SimulateCmd) -> Result<()> {
    let cfg = Config::load(&cmd.config)?;
    let (p, cross) = model_from_config(&cfg, &cmd.overrides)?;
    let bath = bath_from_config(&cfg, &p)?;
    let attenuation = attenuation_from_config(&cfg)?;
    let powers = cfg
        .get_f64_list("powers_watt")?
        .ok_or_else(|| Error::InvalidParameter("missing config key 'powers_watt'".into()))?;
    let detunings = detunings_from_config(&cfg)?;
    let noise_level = cfg.get_f64("noise_level")?.unwrap_or(0.0);
    let seed = match cmd.seed {
        Some(s) => s,
        None => cfg.get_u64("seed")?.unwrap_or(0),
    };
    let circulator = match cfg.get_f64("circulator_leakage")? {
        Some(leakage) => Some(CirculatorParams::new(
            leakage,
            cfg.get_f64("circulator_delay_s")?.unwrap_or(0.0),
            cfg.get_f64("circulator_phase_rad")?.unwrap_or(0.0),
        )?),
        None => None,
    };

    let mut annotations = vec![("generator".to_string(), "radfield simulate".to_string())];
    annotations.extend(model_annotations(&p, cross));
    annotations.push(("attenuation".into(), fmt(attenuation)));
    annotations.push(("bath".into(), bath_description(&bath)));
    annotations.push(("noise_level".into(), fmt(noise_level)));
    annotations.push(("seed".into(), seed.to_string()));
    if let Some(c) = &circulator {
        annotations.push(("circulator_leakage".into(), fmt(c.leakage)));
        annotations.push(("circulator_delay_s".into(), fmt(c.delay_s)));
        annotations.push(("circulator_phase_rad".into(), fmt(c.phase)));
    }

    let trace = if noise_level == 0.0 && circulator.is_none() {
        reflection_spectrum(&p, &bath, attenuation, &powers, &detunings, cross)?
    } else {
        let config = SyntheticConfig {
            attenuation,
            powers_watt: powers,
            detunings,
            noise_level,
            circulator,
            include_cross_terms: cross,
            seed,
        };
        generate_synthetic_experiment(&p, &bath, &config)?
    };
    trace.write_path_annotated(&cmd.output, &annotations)?;
    println!("wrote {} points to {}", trace.len(), cmd.output.display());
    warn_unused(&cfg);
    Ok(())
}

fn bath_description(bath: &BathOccupation) -> String {
    let parts: Vec<String> = bath.as_slice().iter().map(|n| fmt(*n)).collect();
    parts.join(", ")
}

pub struct FitCmd {
    pub config: PathBuf,
    pub data: Vec<PathBuf>,
    pub reference: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub overrides: ModelOverrides,
}

/// Global model fit across one or more measured traces.
pub fn run_fit(cmd: &FitCmd) -> Result<()> {
    let cfg = Config::load(&cmd.config)?;
    let levels = match cmd.overrides.levels {
        Some(l) => l,
        None => cfg.get_usize("levels")?.unwrap_or(FitConfig::default().levels),
    };
    let cross = match cmd.overrides.cross_terms {
        Some(c) => c,
        None => cfg.get_switch("cross_terms")?.unwrap_or(true),
    };
    let initial = initial_from_config(&cfg)?;

    let reference = cmd
        .reference
        .as_ref()
        .map(ReflectionTrace::read_path)
        .transpose()?;
    let mut traces = Vec::with_capacity(cmd.data.len());
    for path in &cmd.data {
        let raw = ReflectionTrace::read_path(path)?;
        traces.push(match &reference {
            Some(r) => normalize_trace(&raw, r)?,
            None => raw,
        });
    }

    let fit_config = FitConfig {
        levels,
        include_cross_terms: cross,
        initial,
    };
    let result = global_fit(&traces, &fit_config)?;

    let attenuation_db = -10.0 * result.attenuation.log10();
    let entries = vec![
        ("frequency_ge_hz".into(), fmt(hz_from_angular(result.omega_ge))),
        ("gamma_hz".into(), fmt(hz_from_angular(result.gamma))),
        ("anharmonicity_hz".into(), fmt(hz_from_angular(result.alpha))),
        ("attenuation".into(), fmt(result.attenuation)),
        ("attenuation_db".into(), fmt(attenuation_db)),
        (
            "frequency_ge_err_hz".into(),
            fmt(hz_from_angular(result.std_errors[0])),
        ),
        ("gamma_err_hz".into(), fmt(hz_from_angular(result.std_errors[1]))),
        (
            "anharmonicity_err_hz".into(),
            fmt(hz_from_angular(result.std_errors[2])),
        ),
        ("attenuation_err".into(), fmt(result.std_errors[3])),
        ("residual_norm".into(), fmt(result.residual_norm)),
        ("iterations".into(), result.iterations.to_string()),
        ("points".into(), result.points.to_string()),
        ("levels".into(), levels.to_string()),
        (
            "cross_terms".into(),
            if cross { "on" } else { "off" }.to_string(),
        ),
    ];
    write_manifest(cmd.output.as_deref(), "radfield fit result", &entries)?;
    warn_unused(&cfg);
    Ok(())
}

/// All-or-nothing explicit starting point from `init_*` keys.
fn initial_from_config(cfg: &Config) -> Result<Option<FitInit>> {
    let freq = cfg.get_f64("init_frequency_ge_hz")?;
    let gamma = cfg.get_f64("init_gamma_hz")?;
    let alpha = cfg.get_f64("init_anharmonicity_hz")?;
    let att_db = cfg.get_f64("init_attenuation_db")?;
    let present =
        [freq.is_some(), gamma.is_some(), alpha.is_some(), att_db.is_some()];
    if present.iter().all(|p| !p) {
        return Ok(None);
    }
    if !present.iter().all(|p| *p) {
        return Err(Error::InvalidParameter(
            "give all four init_* keys or none".into(),
        ));
    }
    Ok(Some(FitInit {
        omega_ge: angular_from_hz(freq.unwrap()),
        gamma: angular_from_hz(gamma.unwrap()),
        alpha: angular_from_hz(alpha.unwrap()),
        attenuation: 10f64.powf(-att_db.unwrap() / 10.0),
    }))
}

pub enum ThermometerInput {
    /// Measured complex reflection on resonance.
    Reflection(Complex64),
    /// Known effective occupation.
    Occupation(f64),
    /// Known temperature, K.
    Temperature(f64),
}

pub struct ThermometerCmd {
    pub config: PathBuf,
    pub input: ThermometerInput,
    pub output: Option<PathBuf>,
    pub overrides: ModelOverrides,
}

/// Convert between reflection, occupation and temperature.
pub fn run_thermometer(cmd: &ThermometerCmd) -> Result<()> {
    let cfg = Config::load(&cmd.config)?;
    let (p, cross) = model_from_config(&cfg, &cmd.overrides)?;
    let mut entries = model_annotations(&p, cross);

    match cmd.input {
        ThermometerInput::Reflection(measured) => {
            let rabi_ratio = cfg.require_f64("rabi_ratio")?;
            let mode = match cfg.get_str("inversion_mode").as_deref() {
                None | Some("real") => InversionMode::RealPart,
                Some("magnitude") => InversionMode::Magnitude,
                Some(other) => {
                    return Err(Error::InvalidParameter(format!(
                        "inversion_mode = '{other}' (expected real or magnitude)"
                    )))
                }
            };
            let occupation = occupation_from_reflection(&p, measured, rabi_ratio, mode, cross)?;
            let temperature = temperature_from_occupation(&p, occupation)?;
            entries.push(("rabi_ratio".into(), fmt(rabi_ratio)));
            entries.push((
                "inversion_mode".into(),
                match mode {
                    InversionMode::RealPart => "real",
                    InversionMode::Magnitude => "magnitude",
                }
                .to_string(),
            ));
            entries.push(("reflection_re".into(), fmt(measured.re)));
            entries.push(("reflection_im".into(), fmt(measured.im)));
            entries.push(("occupation".into(), fmt(occupation)));
            entries.push(("temperature_k".into(), fmt(temperature)));
        }
        ThermometerInput::Occupation(occupation) => {
            let temperature = temperature_from_occupation(&p, occupation)?;
            entries.push(("occupation".into(), fmt(occupation)));
            entries.push(("temperature_k".into(), fmt(temperature)));
        }
        ThermometerInput::Temperature(temperature) => {
            let occupation = effective_occupation(&p, temperature)?;
            entries.push(("temperature_k".into(), fmt(temperature)));
            for j in 1..=p.transitions() {
                let n = bose_occupation(p.transition_frequency(j), temperature)?;
                entries.push((format!("occupation_transition_{j}"), fmt(n)));
            }
            entries.push(("occupation".into(), fmt(occupation)));
        }
    }
    write_manifest(cmd.output.as_deref(), "radfield thermometer result", &entries)?;
    warn_unused(&cfg);
    Ok(())
}

pub struct SensitivityCmd {
    pub config: PathBuf,
    pub output: Option<PathBuf>,
    pub overrides: ModelOverrides,
}

/// Noise floor figures for a given readout efficiency.
pub fn run_sensitivity(cmd: &SensitivityCmd) -> Result<()> {
    let cfg = Config::load(&cmd.config)?;
    let (p, cross) = model_from_config(&cfg, &cmd.overrides)?;
    let efficiency = cfg.require_f64("efficiency")?;
    let inputs = SensitivityInputs::new(p.omega_ge, p.gamma, efficiency)?;
    let best = optimal_rabi_ratio();
    let rabi_ratio = cfg.get_f64("rabi_ratio")?.unwrap_or(best);

    let neo = noise_equivalent_occupation(&inputs, rabi_ratio)?;
    let nep = noise_equivalent_power(&inputs, neo);
    // Spectral densities are quoted per root angular frequency; multiply
    // by sqrt(2 pi) for a per root hertz figure.
    let to_hz = (2.0 * std::f64::consts::PI).sqrt();

    let mut entries = model_annotations(&p, cross);
    entries.push(("efficiency".into(), fmt(efficiency)));
    entries.push(("rabi_ratio".into(), fmt(rabi_ratio)));
    entries.push(("optimal_rabi_ratio".into(), fmt(best)));
    entries.push((
        "responsivity".into(),
        fmt(occupation_responsivity(rabi_ratio)?),
    ));
    entries.push((
        "noise_equivalent_occupation_per_sqrt_rad_s".into(),
        fmt(neo),
    ));
    entries.push((
        "noise_equivalent_occupation_per_sqrt_hz".into(),
        fmt(neo * to_hz),
    ));
    entries.push(("noise_equivalent_power_w_per_sqrt_rad_s".into(), fmt(nep)));
    entries.push((
        "noise_equivalent_power_w_per_sqrt_hz".into(),
        fmt(nep * to_hz),
    ));
    write_manifest(cmd.output.as_deref(), "radfield sensitivity result", &entries)?;
    warn_unused(&cfg);
    Ok(())
}

pub struct ChainCmd {
    pub config: PathBuf,
    pub chain: PathBuf,
    pub output: Option<PathBuf>,
}

/// Photon occupation down an attenuator chain.
pub fn run_chain(cmd: &ChainCmd) -> Result<()> {
    let cfg = Config::load(&cmd.config)?;
    let omega = match cfg.get_f64("frequency_hz")? {
        Some(f) => angular_from_hz(f),
        None => angular_from_hz(cfg.require_f64("frequency_ge_hz")?),
    };
    let source_temperature = cfg.get_f64("source_temperature_k")?.unwrap_or(300.0);
    let chain = read_chain(&cmd.chain)?;
    let source = bose_occupation(omega, source_temperature)?;
    let occupations = chain_occupation(&chain, omega, source)?;

    let render = |w: &mut dyn Write| -> Result<()> {
        writeln!(w, "# format: chain-occupation/1")?;
        writeln!(w, "# frequency_hz: {}", fmt(hz_from_angular(omega)))?;
        writeln!(w, "# source_temperature_k: {}", fmt(source_temperature))?;
        writeln!(w, "# source_occupation: {}", fmt(source))?;
        writeln!(
            w,
            "# columns: stage, attenuation_db, temperature_k, occupation, equivalent_temperature_k"
        )?;
        for (i, (stage, n)) in chain.stages().iter().zip(&occupations).enumerate() {
            let db = 10.0 * stage.attenuation.log10();
            writeln!(
                w,
                "{},{},{},{},{}",
                i + 1,
                fmt(db),
                fmt(stage.temperature),
                fmt(*n),
                fmt(single_mode_temperature(omega, *n))
            )?;
        }
        Ok(())
    };
    match cmd.output.as_deref() {
        Some(path) => {
            write_atomic(path, |w| render(w))?;
            println!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)?;
        }
    }
    warn_unused(&cfg);
    Ok(())
}

/// Temperature whose thermal occupation at `omega` equals `n`.
fn single_mode_temperature(omega: f64, n: f64) -> f64 {
    HBAR * omega / (KB * (1.0 + 1.0 / n).ln())
}

pub struct NoiseCmd {
    pub config: PathBuf,
    pub spectrum: PathBuf,
    pub output: Option<PathBuf>,
    pub overrides: ModelOverrides,
}

/// Occupations seen by the atom under a structured noise spectrum.
pub fn run_noise(cmd: &NoiseCmd) -> Result<()> {
    let cfg = Config::load(&cmd.config)?;
    let (p, cross) = model_from_config(&cfg, &cmd.overrides)?;
    let spectrum = read_spectrum(&cmd.spectrum)?;
    let bath = radfield::synth::bath_from_spectrum(&p, &spectrum)?;
    let weighted = weighted_occupation(&p, &spectrum)?;

    let mut entries = model_annotations(&p, cross);
    for j in 1..=p.transitions() {
        entries.push((format!("occupation_transition_{j}"), fmt(bath.occupation(j))));
    }
    entries.push(("weighted_occupation".into(), fmt(weighted)));
    match temperature_from_occupation(&p, weighted) {
        Ok(t) => entries.push(("temperature_k".into(), fmt(t))),
        Err(_) => entries.push(("temperature_k".into(), "nan".into())),
    }
    if let Some(center) = cfg.get_f64("band_center_hz")? {
        let width = cfg.require_f64("band_width_hz")?;
        let w = band_weight(&p, angular_from_hz(center), angular_from_hz(width))?;
        entries.push(("band_center_hz".into(), fmt(center)));
        entries.push(("band_width_hz".into(), fmt(width)));
        entries.push(("band_weight".into(), fmt(w)));
    }
    write_manifest(cmd.output.as_deref(), "radfield noise result", &entries)?;
    warn_unused(&cfg);
    Ok(())
}
