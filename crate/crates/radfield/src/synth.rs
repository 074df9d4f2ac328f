// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Synthetic signals and setup imperfections.
//!
//! Tools for exercising the analysis chain end to end: band limited
//! Gaussian noise with a prescribed spectral density (plus the matching
//! Welch estimator and a mixer compensation step), conversion of a field
//! spectrum into per-transition occupations, a swept narrowband noise
//! line as seen by the thermometer, a leaky circulator model for the
//! reflection readout, and a generator for noisy synthetic reflection
//! data sets.
//!
//! All randomness comes from a counter based stream cipher generator
//! seeded with an explicit 64 bit seed, so outputs are reproducible
//! across runs and platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

use crate::lindblad::{reflection_coefficient, reflection_spectrum, LiouvillianBuilder};
use crate::numeric::adaptive_simpson;
use crate::params::{BathOccupation, DriveParams, TransmonParams};
use crate::thermometry::{lorentzian_line, NoiseSpectrum};
use crate::trace::{ReferenceMode, ReflectionTrace, TracePoint};
use crate::{Complex64, Error, Result};

/// A complex baseband time series with a known sample rate and seed.
#[derive(Debug, Clone)]
pub struct NoiseRealization {
    /// Sample rate, Hz.
    pub sample_rate_hz: f64,
    /// Seed the realization was drawn from.
    pub seed: u64,
    samples: Vec<Complex64>,
}

impl NoiseRealization {
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Draw a Gaussian time series whose spectral density follows `spectrum`
/// (units: value squared per rad/s, two sided over positive frequencies).
///
/// The draw happens in the frequency domain: every positive frequency bin
/// gets an independent complex Gaussian scaled to the target density, the
/// negative bins stay empty, and one inverse FFT of the next power of two
/// length produces the series (truncated to `samples`). The total
/// variance therefore equals the spectrum integral, and the empty
/// negative bins make the series a clean single sideband signal.
pub fn synthesize_band_noise(
    spectrum: &NoiseSpectrum,
    sample_rate_hz: f64,
    samples: usize,
    seed: u64,
) -> Result<NoiseRealization> {
    if !(sample_rate_hz > 0.0) || !sample_rate_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sample_rate_hz = {sample_rate_hz}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "samples = {samples} (need at least 2)"
        )));
    }
    let (lo, hi) = spectrum.support();
    let omega_nyquist = std::f64::consts::PI * sample_rate_hz;
    if lo <= 0.0 || hi >= omega_nyquist {
        return Err(Error::OutOfRange(format!(
            "spectrum support [{lo:e}, {hi:e}] rad/s must sit inside (0, {omega_nyquist:e})"
        )));
    }

    let len = samples.next_power_of_two();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut buffer = vec![Complex64::new(0.0, 0.0); len];
    let bin_step = std::f64::consts::TAU * sample_rate_hz / len as f64;
    for (k, slot) in buffer.iter_mut().enumerate().take(len / 2).skip(1) {
        let density = spectrum.density(k as f64 * bin_step);
        if density > 0.0 {
            let scale =
                (std::f64::consts::TAU * sample_rate_hz * len as f64 * density / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *slot = Complex64::new(scale * re, scale * im);
        }
    }

    FftPlanner::new()
        .plan_fft_inverse(len)
        .process(&mut buffer);
    let norm = 1.0 / len as f64;
    buffer.truncate(samples);
    for v in &mut buffer {
        *v *= norm;
    }

    Ok(NoiseRealization {
        sample_rate_hz,
        seed,
        samples: buffer,
    })
}

/// Welch spectral density estimate of a complex series: Hann windowed
/// segments with half overlap, averaged periodograms, two sided in
/// angular frequency (negative frequencies first).
///
/// The returned density uses the same convention as
/// [`synthesize_band_noise`], so feeding a synthesized series back in
/// recovers its target spectrum.
pub fn welch_psd(
    samples: &[Complex64],
    sample_rate_hz: f64,
    segment_len: usize,
) -> Result<NoiseSpectrum> {
    if !(sample_rate_hz > 0.0) || !sample_rate_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sample_rate_hz = {sample_rate_hz}"
        )));
    }
    if segment_len < 8 || segment_len % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "segment_len = {segment_len} (need an even length of at least 8)"
        )));
    }
    if samples.len() < segment_len {
        return Err(Error::InvalidParameter(format!(
            "{} samples are shorter than one segment of {segment_len}",
            samples.len()
        )));
    }

    let window: Vec<f64> = (0..segment_len)
        .map(|n| {
            0.5 * (1.0
                - (std::f64::consts::TAU * n as f64 / segment_len as f64).cos())
        })
        .collect();
    let window_power: f64 = window.iter().map(|w| w * w).sum();

    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let hop = segment_len / 2;
    let mut accum = vec![0.0_f64; segment_len];
    let mut segments = 0usize;
    let mut start = 0usize;
    let mut buffer = vec![Complex64::new(0.0, 0.0); segment_len];
    while start + segment_len <= samples.len() {
        for (i, slot) in buffer.iter_mut().enumerate() {
            *slot = samples[start + i] * window[i];
        }
        fft.process(&mut buffer);
        for (a, y) in accum.iter_mut().zip(&buffer) {
            *a += y.norm_sqr();
        }
        segments += 1;
        start += hop;
    }

    let norm = 1.0
        / (segments as f64 * std::f64::consts::TAU * sample_rate_hz * window_power);
    let bin_step = std::f64::consts::TAU * sample_rate_hz / segment_len as f64;
    // Reorder so negative frequencies come first and omega increases.
    let mut out = Vec::with_capacity(segment_len);
    for k in segment_len / 2..segment_len {
        out.push((
            (k as f64 - segment_len as f64) * bin_step,
            accum[k] * norm,
        ));
    }
    for (k, a) in accum.iter().enumerate().take(segment_len / 2) {
        out.push((k as f64 * bin_step, a * norm));
    }
    NoiseSpectrum::from_samples(out)
}

/// Frequency dependent amplitude gain correcting a mixer or line
/// response.
#[derive(Debug, Clone, PartialEq)]
pub struct GainProfile {
    samples: Vec<(f64, f64)>,
}

impl GainProfile {
    /// Amplitude gain at `omega`; one (no correction) outside the
    /// profiled range.
    pub fn gain(&self, omega: f64) -> f64 {
        let n = self.samples.len();
        if omega < self.samples[0].0 || omega > self.samples[n - 1].0 {
            return 1.0;
        }
        let idx = self.samples.partition_point(|&(w, _)| w <= omega);
        if idx == 0 {
            return self.samples[0].1;
        }
        if idx == n {
            return self.samples[n - 1].1;
        }
        let (w0, g0) = self.samples[idx - 1];
        let (w1, g1) = self.samples[idx];
        g0 + (g1 - g0) * (omega - w0) / (w1 - w0)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Apply the correction to a spectral density (density scales with
    /// gain squared), sampling at the union of both knot sets.
    pub fn apply(&self, spectrum: &NoiseSpectrum) -> Result<NoiseSpectrum> {
        let (lo, hi) = spectrum.support();
        let mut knots: Vec<f64> = spectrum.samples().iter().map(|&(w, _)| w).collect();
        knots.extend(
            self.samples
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| w > lo && w < hi),
        );
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        NoiseSpectrum::from_samples(
            knots
                .into_iter()
                .map(|w| {
                    let g = self.gain(w);
                    (w, spectrum.density(w) * g * g)
                })
                .collect(),
        )
    }
}

/// Amplitude gain that maps a measured spectral density onto a target
/// one, `g = sqrt(target / measured)`, sampled on the target's knots.
///
/// The measured density must be positive wherever the target has a knot.
pub fn mixer_transfer_compensation(
    measured: &NoiseSpectrum,
    target: &NoiseSpectrum,
) -> Result<GainProfile> {
    let samples = target
        .samples()
        .iter()
        .map(|&(omega, want)| {
            let have = measured.density(omega);
            if have <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "measured spectrum vanishes at omega = {omega:e}"
                )));
            }
            Ok((omega, (want / have).sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    if samples.len() < 2 {
        return Err(Error::InvalidParameter(
            "compensation needs at least two target samples".into(),
        ));
    }
    Ok(GainProfile { samples })
}

/// Occupation each ladder transition picks up from a field spectrum:
/// the transition's unit area Lorentzian line (width `j gamma`)
/// integrated against the sampled density.
pub fn bath_from_spectrum(p: &TransmonParams, spectrum: &NoiseSpectrum) -> Result<BathOccupation> {
    let occupations = (1..=p.transitions())
        .map(|j| {
            let center = p.transition_frequency(j);
            if center <= 0.0 {
                return Err(Error::OutOfRange(format!(
                    "transition {j} frequency {center} is not positive"
                )));
            }
            let width = j as f64 * p.gamma;
            let samples = spectrum.samples();
            let coarse: f64 = samples
                .windows(2)
                .map(|w| {
                    let f0 = lorentzian_line(w[0].0 - center, width) * w[0].1;
                    let f1 = lorentzian_line(w[1].0 - center, width) * w[1].1;
                    0.5 * (f0 + f1) * (w[1].0 - w[0].0)
                })
                .sum();
            let tol = 1e-10 * coarse.abs().max(1e-30) / samples.len() as f64;
            let mut total = 0.0;
            for w in samples.windows(2) {
                let f =
                    |omega: f64| lorentzian_line(omega - center, width) * spectrum.density(omega);
                total += adaptive_simpson(&f, w[0].0, w[1].0, tol);
            }
            Ok(total)
        })
        .collect::<Result<Vec<f64>>>()?;
    BathOccupation::from_per_transition(occupations)
}

/// Sweep a narrow Lorentzian noise line (full width `line_fwhm`, peak
/// occupation density `line_peak`) across the given center frequencies
/// and record how the resonant reflection moves.
///
/// Returns `(center, Re r - Re r_cold)` pairs. The per-transition
/// occupations are computed by exact quadrature of the sensing line
/// against the injected line over a wide window, not from a closed form,
/// so the same path also covers non-Lorentzian profiles.
pub fn noise_spectroscopy_sweep(
    p: &TransmonParams,
    centers: &[f64],
    line_fwhm: f64,
    line_peak: f64,
    rabi_ratio: f64,
    include_cross_terms: bool,
) -> Result<Vec<(f64, f64)>> {
    if centers.is_empty() {
        return Err(Error::InvalidParameter("no sweep centers".into()));
    }
    if !(line_fwhm > 0.0) || !(line_peak >= 0.0) || !(rabi_ratio > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "line_fwhm = {line_fwhm}, line_peak = {line_peak}, rabi_ratio = {rabi_ratio}"
        )));
    }
    let drive = DriveParams::resonant(rabi_ratio * p.gamma)?;
    let cold = {
        let bath = BathOccupation::zero(p.transitions());
        let rho = LiouvillianBuilder::new(p, &bath, include_cross_terms)?
            .liouvillian(&drive)
            .steady_state()?;
        reflection_coefficient(p, &rho, &drive)?.re
    };

    let mut out = Vec::with_capacity(centers.len());
    for &center in centers {
        let occupations = (1..=p.transitions())
            .map(|j| {
                let omega_j = p.transition_frequency(j);
                let width_j = j as f64 * p.gamma;
                // The product of the two lines decays as x^-4; forty
                // combined widths of margin keep the truncation error
                // orders below the sweep structure.
                let margin = 40.0 * (width_j + line_fwhm);
                let lo = omega_j.min(center) - margin;
                let hi = omega_j.max(center) + margin;
                let f = |omega: f64| {
                    lorentzian_line(omega - omega_j, width_j)
                        * line_peak
                        * lorentzian_line(omega - center, line_fwhm)
                        * (std::f64::consts::PI * line_fwhm / 2.0)
                };
                adaptive_simpson(&f, lo, hi, 1e-12 * line_peak.max(1e-30))
            })
            .collect::<Vec<f64>>();
        let bath = BathOccupation::from_per_transition(occupations)?;
        let rho = LiouvillianBuilder::new(p, &bath, include_cross_terms)?
            .liouvillian(&drive)
            .steady_state()?;
        let r = reflection_coefficient(p, &rho, &drive)?;
        out.push((center, r.re - cold));
    }
    Ok(out)
}

/// Imperfections of the circulator separating drive from readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculatorParams {
    /// Amplitude leaking directly from the drive port to the readout
    /// port, in `[0, 1)`.
    pub leakage: f64,
    /// Electrical delay of the atom arm, seconds.
    pub delay_s: f64,
    /// Static phase offset of the atom arm, radians.
    pub phase: f64,
}

impl CirculatorParams {
    pub fn new(leakage: f64, delay_s: f64, phase: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&leakage) || !leakage.is_finite() {
            return Err(Error::InvalidParameter(format!("leakage = {leakage}")));
        }
        if !(delay_s >= 0.0) || !delay_s.is_finite() {
            return Err(Error::InvalidParameter(format!("delay_s = {delay_s}")));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!("phase = {phase}")));
        }
        Ok(Self {
            leakage,
            delay_s,
            phase,
        })
    }
}

/// Reflection seen through a leaky circulator, referenced against an
/// ideal mirror measured through the same path.
///
/// The atom arm carries a propagation phase `omega * delay + phase`; the
/// drive port leaks amplitude `leakage` straight into the readout and the
/// mismatched port bounces the atom signal with amplitude `-leakage`,
/// giving the two port transfer `t(G) = leakage +
/// (1 - leakage^2)^2 G / (1 + leakage G)` for arm reflection `G`. The
/// measured value is `t(r e^{i theta}) / t(e^{i theta})`; zero leakage
/// returns `r` exactly.
pub fn circulator_referenced_reflection(
    c: &CirculatorParams,
    r_ideal: Complex64,
    omega: f64,
) -> Complex64 {
    let theta = omega * c.delay_s + c.phase;
    let arm = Complex64::new(0.0, theta).exp();
    let transfer = |g: Complex64| -> Complex64 {
        let leak = Complex64::new(c.leakage, 0.0);
        let through = (1.0 - c.leakage * c.leakage).powi(2);
        leak + g * Complex64::new(through, 0.0) / (Complex64::new(1.0, 0.0) + leak * g)
    };
    transfer(r_ideal * arm) / transfer(arm)
}

/// Grid, noise and imperfection settings for
/// [`generate_synthetic_experiment`].
#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    /// Linear power transmission of the drive line.
    pub attenuation: f64,
    /// Probe powers at the source, W.
    pub powers_watt: Vec<f64>,
    /// Probe detunings from the first transition, rad/s.
    pub detunings: Vec<f64>,
    /// Standard deviation of the additive noise per quadrature.
    pub noise_level: f64,
    /// Optional readout circulator imperfection.
    pub circulator: Option<CirculatorParams>,
    /// Whether the model keeps cross transition dissipator pairs.
    pub include_cross_terms: bool,
    /// Seed for the additive noise.
    pub seed: u64,
}

/// Produce a noisy synthetic reflection data set over a power and
/// detuning grid, optionally distorted by a circulator.
///
/// Deterministic for a fixed configuration and seed. The trace is marked
/// as referenced against a saturated response when a circulator is
/// present (its model divides by an ideal mirror), raw otherwise.
pub fn generate_synthetic_experiment(
    p: &TransmonParams,
    bath: &BathOccupation,
    config: &SyntheticConfig,
) -> Result<ReflectionTrace> {
    if !(config.noise_level >= 0.0) || !config.noise_level.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise_level = {}",
            config.noise_level
        )));
    }
    let clean = reflection_spectrum(
        p,
        bath,
        config.attenuation,
        &config.powers_watt,
        &config.detunings,
        config.include_cross_terms,
    )?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let points = clean
        .points()
        .iter()
        .map(|pt| {
            let mut r = pt.reflection;
            if let Some(circ) = &config.circulator {
                r = circulator_referenced_reflection(
                    circ,
                    r,
                    crate::constants::angular_from_hz(pt.frequency_hz),
                );
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            r += Complex64::new(config.noise_level * re, config.noise_level * im);
            TracePoint {
                reflection: r,
                ..*pt
            }
        })
        .collect();
    let mode = if config.circulator.is_some() {
        ReferenceMode::Saturated
    } else {
        ReferenceMode::None
    };
    ReflectionTrace::new(points, mode)
}
