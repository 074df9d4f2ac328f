// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form expressions for weak driving and sensitivity planning.
//!
//! The full model in [`crate::lindblad`] is numeric; the expressions here
//! are its leading-order expansions around a cold, weakly driven,
//! strongly anharmonic atom. They are the working formulas for
//! thermometer design: how far the resonant reflection sits from perfect
//! inversion, how fast it moves with occupation, and how those two trade
//! off against measurement noise.

use crate::constants::HBAR;
use crate::numeric::golden_section_min;
use crate::params::{BathOccupation, TransmonParams};
use crate::{Complex64, Error, Result};

/// Exact resonant reflection of a driven two level atom in a thermal
/// field with mean occupation `n`, as a function of the Rabi to decay
/// ratio `u = Omega / Gamma`.
pub fn two_level_resonant_reflection(n: f64, rabi_ratio: f64) -> f64 {
    let broadening = (1.0 + 2.0 * n).powi(2);
    1.0 - 1.0 / (0.5 * broadening + rabi_ratio * rabi_ratio)
}

/// Inputs of the weak-drive reflection expansion, all dimensionless.
#[derive(Debug, Clone, Copy)]
pub struct WeakDriveInputs {
    /// Field occupation at the first transition.
    pub occupation_ge: f64,
    /// Field occupation at the second transition.
    pub occupation_ef: f64,
    /// Pure dephasing over radiative rate, `gamma_phi / gamma`.
    pub dephasing_ratio: f64,
    /// Nonradiative over radiative rate, `gamma_nr / gamma`.
    pub nonradiative_ratio: f64,
    /// Drive amplitude over radiative rate, `Omega / gamma`.
    pub rabi_ratio: f64,
    /// Linewidth over anharmonicity magnitude, `gamma / |alpha|`.
    pub gamma_over_alpha: f64,
}

impl WeakDriveInputs {
    /// Collect the expansion inputs from full parameter sets.
    pub fn from_params(p: &TransmonParams, bath: &BathOccupation, rabi_ratio: f64) -> Result<Self> {
        if bath.transitions() != p.transitions() {
            return Err(Error::BathSizeMismatch {
                expected: p.transitions(),
                got: bath.transitions(),
            });
        }
        let occupation_ef = if bath.transitions() >= 2 {
            bath.occupation(2)
        } else {
            0.0
        };
        Ok(Self {
            occupation_ge: bath.occupation(1),
            occupation_ef,
            dephasing_ratio: p.gamma_phi / p.gamma,
            nonradiative_ratio: p.gamma_nr / p.gamma,
            rabi_ratio,
            gamma_over_alpha: p.gamma / p.alpha.abs(),
        })
    }
}

/// Resonant reflection to first order in occupation, loss ratios and
/// drive power.
///
/// Small occupations feed both ladder transitions and partially refill
/// the dip through a complex coefficient whose phase comes from the
/// detuned second transition; dephasing and nonradiative loss lift the
/// dip on the real axis; finite drive power saturates it. Each correction
/// is first order, so the expression is a sum of independent terms on top
/// of the perfect `-1`.
pub fn weak_drive_reflection(inputs: &WeakDriveInputs) -> Complex64 {
    let g = inputs.gamma_over_alpha;
    let thermal_coeff = Complex64::new(1.0, 1.5 * g);
    let power_coeff = Complex64::new(1.0, g);
    Complex64::new(-1.0, 0.0)
        + Complex64::new(
            8.0 * inputs.occupation_ge + 4.0 * inputs.occupation_ef,
            0.0,
        ) / thermal_coeff
        + Complex64::new(
            4.0 * inputs.dephasing_ratio + 2.0 * inputs.nonradiative_ratio,
            0.0,
        )
        + Complex64::new(4.0 * inputs.rabi_ratio * inputs.rabi_ratio, 0.0) / power_coeff
}

/// Drive detuning that cancels the residual thermal reflection,
/// `gamma^2 / (2 alpha)`. Negative because the anharmonicity is.
pub fn cancellation_detuning(p: &TransmonParams) -> f64 {
    p.gamma * p.gamma / (2.0 * p.alpha)
}

/// Magnitude of the resonant reflection slope against occupation,
/// `|d r / d n|`, at Rabi to decay ratio `u`.
pub fn occupation_responsivity(rabi_ratio: f64) -> Result<f64> {
    if !rabi_ratio.is_finite() || rabi_ratio < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rabi_ratio = {rabi_ratio}"
        )));
    }
    let u2 = rabi_ratio * rabi_ratio;
    Ok(2.0 * (6.0 + u2) / (1.0 + 2.0 * u2).powi(2))
}

/// Fixed inputs of the sensitivity figures.
#[derive(Debug, Clone, Copy)]
pub struct SensitivityInputs {
    /// First transition frequency, rad/s.
    pub omega_ge: f64,
    /// Radiative rate, rad/s.
    pub gamma: f64,
    /// Overall measurement efficiency, in `(0, 1]`.
    pub efficiency: f64,
}

impl SensitivityInputs {
    pub fn new(omega_ge: f64, gamma: f64, efficiency: f64) -> Result<Self> {
        for (name, v, ok) in [
            ("omega_ge", omega_ge, omega_ge > 0.0),
            ("gamma", gamma, gamma > 0.0),
            (
                "efficiency",
                efficiency,
                efficiency > 0.0 && efficiency <= 1.0,
            ),
        ] {
            if !v.is_finite() || !ok {
                return Err(Error::InvalidParameter(format!("{name} = {v}")));
            }
        }
        Ok(Self {
            omega_ge,
            gamma,
            efficiency,
        })
    }
}

/// Dimensionless part of the occupation noise floor,
/// `(1 + 2 u^2)^2 / (u (6 + u^2))`.
fn occupation_noise_shape(rabi_ratio: f64) -> f64 {
    let u2 = rabi_ratio * rabi_ratio;
    (1.0 + 2.0 * u2).powi(2) / (rabi_ratio * (6.0 + u2))
}

/// Smallest detectable occupation change per unit bandwidth at Rabi to
/// decay ratio `u`, for shot-noise limited homodyne detection.
///
/// Rates are angular, so the result is per `sqrt(rad/s)`; multiply by
/// `sqrt(2 pi)` for the per-root-hertz convention.
pub fn noise_equivalent_occupation(s: &SensitivityInputs, rabi_ratio: f64) -> Result<f64> {
    if !(rabi_ratio > 0.0) || !rabi_ratio.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rabi_ratio = {rabi_ratio} (need > 0)"
        )));
    }
    Ok(occupation_noise_shape(rabi_ratio) / (2.0 * s.gamma * s.efficiency).sqrt())
}

/// Drive ratio minimizing [`noise_equivalent_occupation`]; independent of
/// rate and efficiency because they only scale the noise floor.
pub fn optimal_rabi_ratio() -> f64 {
    golden_section_min(occupation_noise_shape, 0.05, 5.0, 1e-10).0
}

/// Radiative power resolution implied by an occupation resolution:
/// one thermal photon per linewidth carries `hbar omega gamma`.
pub fn noise_equivalent_power(s: &SensitivityInputs, noise_equivalent_occ: f64) -> f64 {
    HBAR * s.omega_ge * s.gamma * noise_equivalent_occ
}
