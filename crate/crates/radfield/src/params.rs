// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Validated parameter sets for the atom, the drive and the bath.
//!
//! All constructors reject non-finite or out-of-domain values so the
//! numerical layers can assume well-formed inputs. Fields stay public for
//! read access; mutate by building a new value.

use crate::{Error, Result};

/// Ladder parameters of the artificial atom.
///
/// The ladder has `levels` states `|0>, |1>, ...` with transition `j`
/// (one based) joining levels `j - 1` and `j` at angular frequency
/// `omega_ge + (j - 1) * alpha`. The radiative rate of transition `j`
/// is `j * gamma` through the matrix-element scaling `sqrt(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmonParams {
    /// Ground to first excited state transition, rad/s.
    pub omega_ge: f64,
    /// Anharmonicity, rad/s. Strictly negative for this ladder.
    pub alpha: f64,
    /// Radiative coupling rate of the first transition to the waveguide,
    /// rad/s.
    pub gamma: f64,
    /// Pure dephasing rate, rad/s.
    pub gamma_phi: f64,
    /// Nonradiative decay rate of the first transition, rad/s.
    pub gamma_nr: f64,
    /// Number of ladder states kept in the model, at least two.
    pub levels: usize,
}

impl TransmonParams {
    /// Build a radiatively coupled ladder with no dephasing and no
    /// nonradiative decay.
    pub fn new(omega_ge: f64, alpha: f64, gamma: f64, levels: usize) -> Result<Self> {
        let p = Self {
            omega_ge,
            alpha,
            gamma,
            gamma_phi: 0.0,
            gamma_nr: 0.0,
            levels,
        };
        p.validate()?;
        Ok(p)
    }

    /// Add a pure dephasing rate (rad/s).
    pub fn with_dephasing(mut self, gamma_phi: f64) -> Result<Self> {
        self.gamma_phi = gamma_phi;
        self.validate()?;
        Ok(self)
    }

    /// Add a nonradiative decay rate (rad/s).
    pub fn with_nonradiative(mut self, gamma_nr: f64) -> Result<Self> {
        self.gamma_nr = gamma_nr;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64, ok: bool| {
            if v.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} = {v}")))
            }
        };
        check("omega_ge", self.omega_ge, self.omega_ge > 0.0)?;
        check("alpha", self.alpha, self.alpha < 0.0)?;
        check("gamma", self.gamma, self.gamma > 0.0)?;
        check("gamma_phi", self.gamma_phi, self.gamma_phi >= 0.0)?;
        check("gamma_nr", self.gamma_nr, self.gamma_nr >= 0.0)?;
        if self.levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "levels = {} (need at least 2)",
                self.levels
            )));
        }
        Ok(())
    }

    /// Number of ladder transitions, `levels - 1`.
    pub fn transitions(&self) -> usize {
        self.levels - 1
    }

    /// Angular frequency of transition `j` (one based).
    ///
    /// Panics if `j` is not in `1..=transitions()`.
    pub fn transition_frequency(&self, j: usize) -> f64 {
        assert!(
            j >= 1 && j <= self.transitions(),
            "transition index {j} outside 1..={}",
            self.transitions()
        );
        self.omega_ge + (j as f64 - 1.0) * self.alpha
    }

    /// Angular frequency of the second ladder transition,
    /// `omega_ge + alpha`. Defined by the formula even when the model
    /// keeps only two levels.
    pub fn omega_ef(&self) -> f64 {
        self.omega_ge + self.alpha
    }
}

/// Coherent probe tone applied through the waveguide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Drive detuning from the first transition, rad/s
    /// (`omega_drive - omega_ge`).
    pub detuning: f64,
    /// Drive amplitude expressed as the resonant Rabi rate of the first
    /// transition, rad/s. Zero means an undriven atom.
    pub rabi_rate: f64,
}

impl DriveParams {
    /// Build a drive; the Rabi rate must be finite and nonnegative.
    pub fn new(detuning: f64, rabi_rate: f64) -> Result<Self> {
        if !detuning.is_finite() {
            return Err(Error::InvalidParameter(format!("detuning = {detuning}")));
        }
        if !rabi_rate.is_finite() || rabi_rate < 0.0 {
            return Err(Error::InvalidParameter(format!("rabi_rate = {rabi_rate}")));
        }
        Ok(Self { detuning, rabi_rate })
    }

    /// Drive on resonance with the first transition.
    pub fn resonant(rabi_rate: f64) -> Result<Self> {
        Self::new(0.0, rabi_rate)
    }
}

/// Thermal (or engineered) occupation of the field mode seen by each
/// ladder transition.
///
/// Entry `j - 1` is the mean photon number at the frequency of transition
/// `j`. A single shared bath that is not frequency flat therefore shows up
/// here as distinct per-transition numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct BathOccupation {
    occupations: Vec<f64>,
}

impl BathOccupation {
    /// Same occupation at every transition.
    pub fn uniform(n: f64, transitions: usize) -> Result<Self> {
        Self::from_per_transition(vec![n; transitions.max(1)])
    }

    /// Empty bath (zero temperature) for a given number of transitions.
    pub fn zero(transitions: usize) -> Self {
        Self {
            occupations: vec![0.0; transitions.max(1)],
        }
    }

    /// One occupation per transition, ordered by transition index.
    pub fn from_per_transition(occupations: Vec<f64>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::InvalidParameter(
                "bath occupation needs at least one transition".into(),
            ));
        }
        for (i, &n) in occupations.iter().enumerate() {
            if !n.is_finite() || n < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "occupation[{i}] = {n}"
                )));
            }
        }
        Ok(Self { occupations })
    }

    /// Occupation at transition `j` (one based).
    ///
    /// Panics if `j` is not in `1..=transitions()`.
    pub fn occupation(&self, j: usize) -> f64 {
        assert!(
            j >= 1 && j <= self.occupations.len(),
            "transition index {j} outside 1..={}",
            self.occupations.len()
        );
        self.occupations[j - 1]
    }

    /// Number of transitions covered.
    pub fn transitions(&self) -> usize {
        self.occupations.len()
    }

    /// Occupations ordered by transition index.
    pub fn as_slice(&self) -> &[f64] {
        &self.occupations
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_frequencies_step_down_by_alpha() {
        let p = TransmonParams::new(1.0e10, -1.0e9, 1.0e6, 4).unwrap();
        assert_eq!(p.transitions(), 3);
        assert_eq!(p.transition_frequency(1), 1.0e10);
        assert_eq!(p.transition_frequency(2), 9.0e9);
        assert_eq!(p.transition_frequency(3), 8.0e9);
        assert_eq!(p.omega_ef(), 9.0e9);
    }

    #[test]
    fn rejects_positive_anharmonicity() {
        assert!(TransmonParams::new(1.0e10, 1.0e9, 1.0e6, 3).is_err());
        assert!(TransmonParams::new(1.0e10, 0.0, 1.0e6, 3).is_err());
    }

    #[test]
    fn rejects_single_level_and_zero_gamma() {
        assert!(TransmonParams::new(1.0e10, -1.0e9, 1.0e6, 1).is_err());
        assert!(TransmonParams::new(1.0e10, -1.0e9, 0.0, 3).is_err());
    }

    #[test]
    fn rejects_negative_auxiliary_rates() {
        let p = TransmonParams::new(1.0e10, -1.0e9, 1.0e6, 3).unwrap();
        assert!(p.clone().with_dephasing(-1.0).is_err());
        assert!(p.with_nonradiative(f64::NAN).is_err());
    }

    #[test]
    fn drive_accepts_zero_amplitude_but_not_negative() {
        assert!(DriveParams::new(0.0, 0.0).is_ok());
        assert!(DriveParams::new(0.0, -1.0).is_err());
        assert!(DriveParams::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn bath_occupation_is_one_based_per_transition() {
        let b = BathOccupation::from_per_transition(vec![0.1, 0.2]).unwrap();
        assert_eq!(b.transitions(), 2);
        assert_eq!(b.occupation(1), 0.1);
        assert_eq!(b.occupation(2), 0.2);
        assert!(BathOccupation::from_per_transition(vec![-0.1]).is_err());
        assert!(BathOccupation::from_per_transition(vec![]).is_err());
    }
}
