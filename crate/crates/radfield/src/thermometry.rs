// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Converting between reflection, field occupation and temperature.
//!
//! The atom samples the waveguide field at its transition frequencies, so
//! a measured reflection pins down a weighted occupation, and occupation
//! pins down temperature through the Bose law. This module carries those
//! inversions, the spectral weight describing what the atom averages when
//! the field is not frequency flat, and the occupation budget of an
//! attenuator chain.

use crate::constants::{HBAR, KB};
use crate::lindblad::{reflection_coefficient, LiouvillianBuilder};
use crate::numeric::{adaptive_simpson, find_root, golden_section_min};
use crate::params::{BathOccupation, DriveParams, TransmonParams};
use crate::{Complex64, Error, Result};

/// Mean thermal photon number of a mode at `omega` (rad/s) and
/// temperature `temperature` (K).
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!("omega = {omega}")));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "temperature = {temperature}"
        )));
    }
    Ok(1.0 / (HBAR * omega / (KB * temperature)).exp_m1())
}

/// Occupation the resonant reflection thermometer reports for a field in
/// equilibrium at `temperature`: the first two transitions contribute
/// with weights two thirds and one third.
pub fn effective_occupation(p: &TransmonParams, temperature: f64) -> Result<f64> {
    let omega_ef = p.omega_ef();
    if omega_ef <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "second transition frequency {omega_ef} is not positive"
        )));
    }
    Ok((2.0 * bose_occupation(p.omega_ge, temperature)?
        + bose_occupation(omega_ef, temperature)?)
        / 3.0)
}

/// Temperature range searched by [`temperature_from_occupation`], K.
pub const TEMPERATURE_SEARCH_RANGE: (f64, f64) = (1e-3, 10.0);

/// Invert [`effective_occupation`] for temperature.
///
/// The map is strictly increasing so a bracketed root search on
/// [`TEMPERATURE_SEARCH_RANGE`] converges unconditionally; the result is
/// accurate to a relative `1e-9`. Occupations outside the range covered
/// by the bracket are rejected.
pub fn temperature_from_occupation(p: &TransmonParams, occupation: f64) -> Result<f64> {
    if !(occupation > 0.0) || !occupation.is_finite() {
        return Err(Error::OutOfRange(format!("occupation = {occupation}")));
    }
    let (t_lo, t_hi) = TEMPERATURE_SEARCH_RANGE;
    let n_lo = effective_occupation(p, t_lo)?;
    let n_hi = effective_occupation(p, t_hi)?;
    if occupation < n_lo || occupation > n_hi {
        return Err(Error::OutOfRange(format!(
            "occupation {occupation:e} outside [{n_lo:e}, {n_hi:e}] reachable for {t_lo} K to {t_hi} K"
        )));
    }
    let f = |t: f64| {
        effective_occupation(p, t)
            .map(|n| n - occupation)
            .unwrap_or(f64::NAN)
    };
    find_root(f, t_lo, t_hi, 0.0, 1e-9)
}

impl BathOccupation {
    /// Thermal occupation of every ladder transition at one temperature.
    pub fn thermal(p: &TransmonParams, temperature: f64) -> Result<Self> {
        let per_transition = (1..=p.transitions())
            .map(|j| {
                let omega = p.transition_frequency(j);
                if omega <= 0.0 {
                    return Err(Error::OutOfRange(format!(
                        "transition {j} frequency {omega} is not positive"
                    )));
                }
                bose_occupation(omega, temperature)
            })
            .collect::<Result<Vec<f64>>>()?;
        Self::from_per_transition(per_transition)
    }
}

/// Which scalar of the measured reflection the inversion matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMode {
    /// Match the real part; monotone in occupation over the full search
    /// range.
    RealPart,
    /// Match the magnitude on the low occupation branch, below the
    /// magnitude dip.
    Magnitude,
}

/// Occupation range searched by [`occupation_from_reflection`].
pub const OCCUPATION_SEARCH_RANGE: (f64, f64) = (0.0, 10.0);

/// Infer the uniform field occupation that reproduces a measured
/// resonant reflection.
///
/// The model curve is the full steady state reflection at zero detuning
/// with the same occupation at every transition. In `RealPart` mode the
/// curve is monotone over [`OCCUPATION_SEARCH_RANGE`]. In `Magnitude`
/// mode the curve first falls to a dip and then rises again; the
/// inversion deliberately uses the branch below the dip, where small
/// occupations live, and rejects targets under the dip floor.
pub fn occupation_from_reflection(
    p: &TransmonParams,
    measured: Complex64,
    rabi_ratio: f64,
    mode: InversionMode,
    include_cross_terms: bool,
) -> Result<f64> {
    if !(rabi_ratio > 0.0) || !rabi_ratio.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rabi_ratio = {rabi_ratio} (need > 0)"
        )));
    }
    let drive = DriveParams::resonant(rabi_ratio * p.gamma)?;
    let model = |n: f64| -> Result<Complex64> {
        let bath = BathOccupation::uniform(n, p.transitions())?;
        let rho = LiouvillianBuilder::new(p, &bath, include_cross_terms)?
            .liouvillian(&drive)
            .steady_state()?;
        reflection_coefficient(p, &rho, &drive)
    };
    let (n_lo, n_hi) = OCCUPATION_SEARCH_RANGE;
    // Solver failures inside the search turn into NaN, which the root
    // finder reports as nonconvergence instead of panicking.
    let model_re = |n: f64| model(n).map(|r| r.re).unwrap_or(f64::NAN);
    let model_mag = |n: f64| model(n).map(|r| r.norm()).unwrap_or(f64::NAN);

    match mode {
        InversionMode::RealPart => {
            let target = measured.re;
            let lo = model(n_lo)?.re;
            let hi = model(n_hi)?.re;
            if target < lo || target > hi {
                return Err(Error::OutOfRange(format!(
                    "Re r = {target} outside model range [{lo}, {hi}]"
                )));
            }
            find_root(|n| model_re(n) - target, n_lo, n_hi, 1e-12, 1e-9)
        }
        InversionMode::Magnitude => {
            let target = measured.norm();
            // The dip sits at small occupation for weak drives; the wider
            // bracket keeps stronger drives covered.
            let (n_dip, mag_dip) = golden_section_min(model_mag, n_lo, 5.0, 1e-8);
            let mag_cold = model(n_lo)?.norm();
            if target < mag_dip || target > mag_cold {
                return Err(Error::OutOfRange(format!(
                    "|r| = {target} outside low branch [{mag_dip}, {mag_cold}]"
                )));
            }
            find_root(|n| model_mag(n) - target, n_lo, n_dip, 1e-12, 1e-9)
        }
    }
}

/// Unit-area Lorentzian line of full width `fwhm` evaluated at offset
/// `x` from its center.
pub fn lorentzian_line(x: f64, fwhm: f64) -> f64 {
    let half = 0.5 * fwhm;
    (fwhm / (2.0 * std::f64::consts::PI)) / (x * x + half * half)
}

/// Spectral weight density of the thermometer at absolute frequency
/// `omega`: the two transitions contribute unit-area Lorentzians of
/// width `gamma` and `2 gamma` with weights two thirds and one third.
pub fn spectral_weight(p: &TransmonParams, omega: f64) -> f64 {
    (2.0 / 3.0) * lorentzian_line(omega - p.omega_ge, p.gamma)
        + (1.0 / 3.0) * lorentzian_line(omega - p.omega_ef(), 2.0 * p.gamma)
}

/// Fraction of the spectral weight captured by a flat band of full width
/// `full_width` centered at `center` (closed form).
pub fn band_weight(p: &TransmonParams, center: f64, full_width: f64) -> Result<f64> {
    if !(full_width > 0.0) || !full_width.is_finite() || !center.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "band center {center}, width {full_width}"
        )));
    }
    let lo = center - 0.5 * full_width;
    let hi = center + 0.5 * full_width;
    let line_integral = |center_line: f64, fwhm: f64| {
        let scale = 2.0 / fwhm;
        (((hi - center_line) * scale).atan() - ((lo - center_line) * scale).atan())
            / std::f64::consts::PI
    };
    Ok((2.0 / 3.0) * line_integral(p.omega_ge, p.gamma)
        + (1.0 / 3.0) * line_integral(p.omega_ef(), 2.0 * p.gamma))
}

/// A sampled one dimensional spectral density over angular frequency,
/// interpolated linearly and treated as zero outside its support.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpectrum {
    samples: Vec<(f64, f64)>,
}

impl NoiseSpectrum {
    /// Build from `(omega, density)` samples with strictly increasing
    /// frequencies and nonnegative densities.
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter(
                "spectrum needs at least two samples".into(),
            ));
        }
        for pair in samples.windows(2) {
            if !(pair[0].0 < pair[1].0) {
                return Err(Error::InvalidParameter(format!(
                    "frequencies not strictly increasing near {}",
                    pair[0].0
                )));
            }
        }
        for &(omega, density) in &samples {
            if !omega.is_finite() || !density.is_finite() || density < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "bad sample ({omega}, {density})"
                )));
            }
        }
        Ok(Self { samples })
    }

    /// Density at `omega`; zero outside the sampled support.
    pub fn density(&self, omega: f64) -> f64 {
        let n = self.samples.len();
        if omega < self.samples[0].0 || omega > self.samples[n - 1].0 {
            return 0.0;
        }
        let idx = self.samples.partition_point(|&(w, _)| w <= omega);
        if idx == 0 {
            return self.samples[0].1;
        }
        if idx == n {
            return self.samples[n - 1].1;
        }
        let (w0, d0) = self.samples[idx - 1];
        let (w1, d1) = self.samples[idx];
        d0 + (d1 - d0) * (omega - w0) / (w1 - w0)
    }

    /// Frequency support `(lowest, highest)`.
    pub fn support(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    /// The raw samples.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Integral of the density over its support (exact for the linear
    /// interpolant).
    pub fn integral(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum()
    }

    /// Pointwise rescaled copy, density multiplied by `map(omega)`.
    /// The factor must be nonnegative on the support.
    pub fn rescaled<F: Fn(f64) -> f64>(&self, map: F) -> Result<Self> {
        let samples = self
            .samples
            .iter()
            .map(|&(w, d)| (w, d * map(w)))
            .collect();
        Self::from_samples(samples)
    }
}

/// Occupation reported by the thermometer for a nonflat field spectrum:
/// the spectral weight integrated against the density.
///
/// Integration runs segment by segment between spectrum samples so the
/// kinks of the interpolant never confuse the adaptive rule.
pub fn weighted_occupation(p: &TransmonParams, spectrum: &NoiseSpectrum) -> Result<f64> {
    let samples = spectrum.samples();
    // Coarse trapezoid pass to set an absolute tolerance scale.
    let coarse: f64 = samples
        .windows(2)
        .map(|w| {
            let f0 = spectral_weight(p, w[0].0) * w[0].1;
            let f1 = spectral_weight(p, w[1].0) * w[1].1;
            0.5 * (f0 + f1) * (w[1].0 - w[0].0)
        })
        .sum();
    let tol = 1e-10 * coarse.abs().max(1e-30) / samples.len() as f64;
    let mut total = 0.0;
    for w in samples.windows(2) {
        let f = |omega: f64| spectral_weight(p, omega) * spectrum.density(omega);
        total += adaptive_simpson(&f, w[0].0, w[1].0, tol);
    }
    Ok(total)
}

/// One attenuating element thermalized at its own temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainStage {
    /// Linear power attenuation factor, at least one.
    pub attenuation: f64,
    /// Physical temperature of the attenuator, K.
    pub temperature: f64,
}

impl ChainStage {
    pub fn new(attenuation: f64, temperature: f64) -> Result<Self> {
        if !(attenuation >= 1.0) || !attenuation.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "attenuation = {attenuation} (need >= 1)"
            )));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "stage temperature = {temperature}"
            )));
        }
        Ok(Self {
            attenuation,
            temperature,
        })
    }

    /// Stage from an attenuation in dB.
    pub fn from_db(attenuation_db: f64, temperature: f64) -> Result<Self> {
        if !attenuation_db.is_finite() || attenuation_db < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "attenuation_db = {attenuation_db}"
            )));
        }
        Self::new(10f64.powf(attenuation_db / 10.0), temperature)
    }
}

/// Ordered attenuator stages from the warm end to the cold end.
#[derive(Debug, Clone, PartialEq)]
pub struct AttenuatorChain {
    stages: Vec<ChainStage>,
}

impl AttenuatorChain {
    pub fn new(stages: Vec<ChainStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidParameter("chain has no stages".into()));
        }
        Ok(Self { stages })
    }

    /// Chain from `(attenuation_db, temperature_k)` rows.
    pub fn from_db_rows(rows: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|&(db, t)| ChainStage::from_db(db, t))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn stages(&self) -> &[ChainStage] {
        &self.stages
    }
}

/// Occupation after each stage of the chain for a source occupation
/// `source` entering the warm end, evaluated at `omega`.
///
/// Each stage passes a fraction `1 / A` of the incoming field and
/// replaces the rest with its own thermal field, so occupations are
/// convex combinations and the chain converges toward the coldest stage.
pub fn chain_occupation(
    chain: &AttenuatorChain,
    omega: f64,
    source: f64,
) -> Result<Vec<f64>> {
    if !(source >= 0.0) || !source.is_finite() {
        return Err(Error::InvalidParameter(format!("source = {source}")));
    }
    let mut n = source;
    let mut out = Vec::with_capacity(chain.stages().len());
    for stage in chain.stages() {
        let a = stage.attenuation;
        n = n / a + (a - 1.0) / a * bose_occupation(omega, stage.temperature)?;
        out.push(n);
    }
    Ok(out)
}
