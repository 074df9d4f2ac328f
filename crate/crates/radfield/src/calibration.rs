// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Calibrating the instrument around the atom.
//!
//! Three concerns live here: converting generator power to the drive
//! amplitude at the atom through the line attenuation, removing the setup
//! response from raw traces by complex division against a reference, and
//! recovering the atom and line parameters from a power sweep with one
//! global least squares fit. A small exponential tail fit supports
//! settling time measurements.

use nalgebra::DMatrix;

use crate::constants::{angular_from_hz, HBAR};
use crate::lindblad::{reflection_coefficient, LiouvillianBuilder};
use crate::numeric::{golden_section_min, levenberg_marquardt, LmOptions};
use crate::params::{BathOccupation, DriveParams, TransmonParams};
use crate::trace::{ReflectionTrace, TracePoint};
use crate::{Complex64, Error, Result};

/// Rabi rate at the atom for generator power `power_watt` through a line
/// with linear power transmission `attenuation`:
/// `Omega = 2 sqrt(attenuation * gamma * P / (hbar omega_ge))`.
pub fn drive_rate_from_power(
    p: &TransmonParams,
    power_watt: f64,
    attenuation: f64,
) -> Result<f64> {
    check_attenuation(attenuation)?;
    if !(power_watt > 0.0) || !power_watt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "power_watt = {power_watt}"
        )));
    }
    Ok(2.0 * (attenuation * p.gamma * power_watt / (HBAR * p.omega_ge)).sqrt())
}

/// Inverse of [`drive_rate_from_power`].
pub fn power_from_drive_rate(
    p: &TransmonParams,
    rabi_rate: f64,
    attenuation: f64,
) -> Result<f64> {
    check_attenuation(attenuation)?;
    if !(rabi_rate > 0.0) || !rabi_rate.is_finite() {
        return Err(Error::InvalidParameter(format!("rabi_rate = {rabi_rate}")));
    }
    Ok(rabi_rate * rabi_rate * HBAR * p.omega_ge / (4.0 * attenuation * p.gamma))
}

fn check_attenuation(attenuation: f64) -> Result<()> {
    if !(attenuation > 0.0 && attenuation <= 1.0) || !attenuation.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "attenuation = {attenuation} (need a linear transmission in (0, 1])"
        )));
    }
    Ok(())
}

/// Reference magnitude below which complex division is refused.
pub const REFERENCE_MAGNITUDE_FLOOR: f64 = 1e-6;

/// Divide a raw trace by a reference trace, interpolating the reference
/// linearly in frequency.
///
/// Raw frequencies must lie inside the reference grid; no extrapolation.
/// Reference points with magnitude under [`REFERENCE_MAGNITUDE_FLOOR`]
/// after interpolation make the division meaningless and are reported
/// with their count and first location. The output inherits the reference
/// trace's declared mode.
pub fn normalize_trace(
    raw: &ReflectionTrace,
    reference: &ReflectionTrace,
) -> Result<ReflectionTrace> {
    let mut ref_points: Vec<&TracePoint> = reference.points().iter().collect();
    ref_points.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz));
    let lo = ref_points[0].frequency_hz;
    let hi = ref_points[ref_points.len() - 1].frequency_hz;

    let interpolate = |f: f64| -> Result<Complex64> {
        if f < lo || f > hi {
            return Err(Error::OutOfRange(format!(
                "frequency {f} Hz outside reference grid [{lo}, {hi}]"
            )));
        }
        let idx = ref_points.partition_point(|p| p.frequency_hz <= f);
        if idx == 0 {
            return Ok(ref_points[0].reflection);
        }
        if idx == ref_points.len() {
            return Ok(ref_points[idx - 1].reflection);
        }
        let a = ref_points[idx - 1];
        let b = ref_points[idx];
        let t = (f - a.frequency_hz) / (b.frequency_hz - a.frequency_hz);
        Ok(a.reflection + (b.reflection - a.reflection) * Complex64::new(t, 0.0))
    };

    let mut degenerate = 0usize;
    let mut first_degenerate = 0usize;
    let mut out = Vec::with_capacity(raw.len());
    for (i, pt) in raw.points().iter().enumerate() {
        let denom = interpolate(pt.frequency_hz)?;
        if denom.norm() < REFERENCE_MAGNITUDE_FLOOR {
            if degenerate == 0 {
                first_degenerate = i;
            }
            degenerate += 1;
            continue;
        }
        out.push(TracePoint {
            reflection: pt.reflection / denom,
            ..*pt
        });
    }
    if degenerate > 0 {
        return Err(Error::DegenerateReference {
            count: degenerate,
            first: first_degenerate,
        });
    }
    ReflectionTrace::new(out, reference.reference_mode())
}

/// Model options for [`global_fit`].
#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Ladder states used by the fit model.
    pub levels: usize,
    /// Whether the model keeps cross transition dissipator pairs.
    pub include_cross_terms: bool,
    /// Starting point; when absent it is estimated from the data.
    pub initial: Option<FitInit>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            levels: 4,
            include_cross_terms: true,
            initial: None,
        }
    }
}

/// Explicit starting point for the fit.
#[derive(Debug, Clone, Copy)]
pub struct FitInit {
    /// First transition frequency, rad/s.
    pub omega_ge: f64,
    /// Radiative rate, rad/s.
    pub gamma: f64,
    /// Anharmonicity, rad/s (negative).
    pub alpha: f64,
    /// Linear power transmission of the drive line.
    pub attenuation: f64,
}

/// Fitted parameters with rough standard errors.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// First transition frequency, rad/s.
    pub omega_ge: f64,
    /// Radiative rate, rad/s.
    pub gamma: f64,
    /// Anharmonicity, rad/s.
    pub alpha: f64,
    /// Linear power transmission of the drive line.
    pub attenuation: f64,
    /// One sigma errors for the four parameters above, from the local
    /// curvature; NaN when the curvature is singular.
    pub std_errors: [f64; 4],
    /// Euclidean norm of the final residual vector.
    pub residual_norm: f64,
    /// Accepted optimizer iterations.
    pub iterations: usize,
    /// Number of complex data points used.
    pub points: usize,
}

// Frequency-like parameters are scaled by this during optimization so all
// four directions are order one.
const FREQ_SCALE: f64 = 2.0 * std::f64::consts::PI * 100.0e6;

/// Fit `omega_ge`, `gamma`, `alpha` and the line attenuation to
/// referenced traces spanning several probe powers.
///
/// The model is the full steady state reflection of a cold atom
/// (`levels` states, empty bath); the power dependence through the
/// saturating drive is what separates the attenuation from the other
/// three parameters, so at least two distinct powers are required. Both
/// quadratures of every point enter one least squares problem. The fit
/// converges when the cost gradient drops below `1e-8` of the initial
/// residual norm, else it reports nonconvergence.
pub fn global_fit(traces: &[ReflectionTrace], config: &FitConfig) -> Result<FitResult> {
    if config.levels < 2 {
        return Err(Error::InvalidParameter(format!(
            "levels = {} (need at least 2)",
            config.levels
        )));
    }
    let points: Vec<TracePoint> = traces
        .iter()
        .flat_map(|t| t.points().iter().copied())
        .collect();
    if points.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "{} points cannot determine 4 parameters",
            points.len()
        )));
    }
    let mut powers: Vec<f64> = Vec::new();
    for pt in &points {
        if !powers.iter().any(|&p| p == pt.power_watt) {
            powers.push(pt.power_watt);
        }
    }
    if powers.len() < 2 {
        return Err(Error::InvalidParameter(
            "global fit needs at least two distinct probe powers".into(),
        ));
    }

    let init = match config.initial {
        Some(init) => init,
        None => estimate_initial(&points, &powers)?,
    };
    if !(init.alpha < 0.0) || !(init.gamma > 0.0) || !(init.omega_ge > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "unusable starting point: omega_ge = {}, gamma = {}, alpha = {}",
            init.omega_ge, init.gamma, init.alpha
        )));
    }
    check_attenuation(init.attenuation)?;

    let omega_ref = init.omega_ge;
    let levels = config.levels;
    let cross = config.include_cross_terms;
    let bath = BathOccupation::zero(levels - 1);

    let residual = |x: &[f64]| -> Result<Vec<f64>> {
        let omega_ge = omega_ref + x[0] * FREQ_SCALE;
        let gamma = x[1].exp();
        let alpha = x[2] * FREQ_SCALE;
        let attenuation = x[3].exp();
        if attenuation > 1.0 {
            return Err(Error::OutOfRange("attenuation above one".into()));
        }
        let p = TransmonParams::new(omega_ge, alpha, gamma, levels)?;
        let builder = LiouvillianBuilder::new(&p, &bath, cross)?;
        let mut res = Vec::with_capacity(2 * points.len());
        for pt in &points {
            let rabi = drive_rate_from_power(&p, pt.power_watt, attenuation)?;
            let drive = DriveParams::new(angular_from_hz(pt.frequency_hz) - omega_ge, rabi)?;
            let rho = builder.liouvillian(&drive).steady_state()?;
            let model = reflection_coefficient(&p, &rho, &drive)?;
            res.push(model.re - pt.reflection.re);
            res.push(model.im - pt.reflection.im);
        }
        Ok(res)
    };

    let x0 = [
        0.0,
        init.gamma.ln(),
        init.alpha / FREQ_SCALE,
        init.attenuation.ln(),
    ];
    let opts = LmOptions {
        max_iterations: 100,
        gradient_tol_rel: 1e-8,
        ..LmOptions::default()
    };
    let lm = levenberg_marquardt(residual, &x0, &opts)?;
    if !lm.converged {
        return Err(Error::NonConvergence(format!(
            "fit gradient norm {:e} after {} iterations",
            lm.gradient_norm, lm.iterations
        )));
    }

    let omega_ge = omega_ref + lm.params[0] * FREQ_SCALE;
    let gamma = lm.params[1].exp();
    let alpha = lm.params[2] * FREQ_SCALE;
    let attenuation = lm.params[3].exp();
    let scaled_errors = standard_errors(&lm.jacobian, &lm.residuals);
    let std_errors = [
        scaled_errors[0] * FREQ_SCALE,
        scaled_errors[1] * gamma,
        scaled_errors[2] * FREQ_SCALE,
        scaled_errors[3] * attenuation,
    ];

    Ok(FitResult {
        omega_ge,
        gamma,
        alpha,
        attenuation,
        std_errors,
        residual_norm: lm.residual_norm,
        iterations: lm.iterations,
        points: points.len(),
    })
}

/// Curvature based one sigma errors in the optimizer's scaled space.
fn standard_errors(jacobian: &DMatrix<f64>, residuals: &[f64]) -> [f64; 4] {
    let m = residuals.len();
    let n = jacobian.ncols();
    if m <= n {
        return [f64::NAN; 4];
    }
    let sigma2 = residuals.iter().map(|r| r * r).sum::<f64>() / (m - n) as f64;
    let jtj = jacobian.transpose() * jacobian;
    match jtj.try_inverse() {
        Some(cov) => {
            let mut out = [f64::NAN; 4];
            for k in 0..n.min(4) {
                out[k] = (sigma2 * cov[(k, k)]).max(0.0).sqrt();
            }
            out
        }
        None => [f64::NAN; 4],
    }
}

/// Starting point from the data.
///
/// The lowest power trace locates the first transition (deepest real
/// part) and its linewidth (width of the negative real part region); the
/// highest power trace exposes the red shifted two photon dip that sets
/// the anharmonicity scale; the attenuation guess puts the median power
/// near a Rabi rate of one linewidth.
fn estimate_initial(points: &[TracePoint], powers: &[f64]) -> Result<FitInit> {
    let p_min = powers.iter().cloned().fold(f64::INFINITY, f64::min);
    let p_max = powers.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut low: Vec<&TracePoint> = points.iter().filter(|p| p.power_watt == p_min).collect();
    low.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz));
    let deepest = low
        .iter()
        .min_by(|a, b| a.reflection.re.total_cmp(&b.reflection.re))
        .expect("nonempty by construction");
    let f_ge = deepest.frequency_hz;

    let negative: Vec<f64> = low
        .iter()
        .filter(|p| p.reflection.re < 0.0)
        .map(|p| p.frequency_hz)
        .collect();
    let span_hz = low[low.len() - 1].frequency_hz - low[0].frequency_hz;
    let width_hz = if negative.len() >= 2 {
        negative[negative.len() - 1] - negative[0]
    } else {
        span_hz / 20.0
    };
    let gamma = angular_from_hz(width_hz.max(span_hz / 200.0));

    let mut high: Vec<&TracePoint> = points.iter().filter(|p| p.power_watt == p_max).collect();
    high.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz));
    // The two photon dip of the second transition sits near half the
    // anharmonicity below the first transition.
    let red_side: Vec<&&TracePoint> = high
        .iter()
        .filter(|p| angular_from_hz(f_ge - p.frequency_hz) > gamma)
        .collect();
    let alpha = match red_side
        .iter()
        .min_by(|a, b| a.reflection.re.total_cmp(&b.reflection.re))
    {
        Some(dip) => 2.0 * angular_from_hz(dip.frequency_hz - f_ge),
        None => -angular_from_hz(250.0e6),
    };
    let alpha = if alpha < 0.0 {
        alpha
    } else {
        -angular_from_hz(250.0e6)
    };

    let omega_ge = angular_from_hz(f_ge);
    let p_med = powers[powers.len() / 2];
    let attenuation = (HBAR * omega_ge * gamma / (4.0 * p_med)).min(0.5);

    Ok(FitInit {
        omega_ge,
        gamma,
        alpha,
        attenuation,
    })
}

/// Result of [`exponential_tail_fit`].
#[derive(Debug, Clone, Copy)]
pub struct ExponentialTail {
    /// Long time value.
    pub asymptote: f64,
    /// Amplitude of the decaying term at the first sample.
    pub amplitude: f64,
    /// Decay time in the units of the time axis.
    pub tau: f64,
    /// Whether the record actually pins the decay time down: the fitted
    /// `tau` is at most half the record and the exponential term improves
    /// the residual norm by at least ten percent over a constant.
    pub tau_identifiable: bool,
    /// Euclidean norm of the final residuals.
    pub residual_norm: f64,
}

/// Fit `v(t) = asymptote + amplitude * exp(-(t - t0) / tau)` to a time
/// series.
///
/// The linear pair `(asymptote, amplitude)` is profiled out exactly for
/// each candidate `tau`, so the search is one dimensional: a log spaced
/// scan over decay times from a fraction of the sample spacing to ten
/// records, refined by golden section. This cannot get stuck in the flat
/// large `tau` plateau the way a joint descent can.
pub fn exponential_tail_fit(times: &[f64], values: &[f64]) -> Result<ExponentialTail> {
    if times.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "{} times vs {} values",
            times.len(),
            values.len()
        )));
    }
    if times.len() < 4 {
        return Err(Error::InvalidParameter(
            "need at least four samples".into(),
        ));
    }
    for w in times.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "times must be strictly increasing".into(),
            ));
        }
    }
    if times.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("nonfinite sample".into()));
    }

    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let shifted: Vec<f64> = times.iter().map(|t| t - t0).collect();

    // Exact linear profile: given tau, minimize over (asymptote,
    // amplitude) by the 2x2 normal equations.
    let profile = |tau: f64| -> (f64, f64, f64) {
        let mut s_e = 0.0;
        let mut s_ee = 0.0;
        let mut s_v = 0.0;
        let mut s_ev = 0.0;
        let m = shifted.len() as f64;
        for (t, v) in shifted.iter().zip(values) {
            let e = (-t / tau).exp();
            s_e += e;
            s_ee += e * e;
            s_v += v;
            s_ev += e * v;
        }
        let det = m * s_ee - s_e * s_e;
        if det.abs() < 1e-300 {
            return (s_v / m, 0.0, f64::INFINITY);
        }
        let asymptote = (s_ee * s_v - s_e * s_ev) / det;
        let amplitude = (m * s_ev - s_e * s_v) / det;
        let cost: f64 = shifted
            .iter()
            .zip(values)
            .map(|(t, v)| {
                let model = asymptote + amplitude * (-t / tau).exp();
                (model - v) * (model - v)
            })
            .sum();
        (asymptote, amplitude, cost)
    };

    let tau_lo = span / 200.0;
    let tau_hi = 10.0 * span;
    let grid = 80;
    let mut best = (tau_lo, f64::INFINITY);
    for k in 0..grid {
        let tau = tau_lo * (tau_hi / tau_lo).powf(k as f64 / (grid - 1) as f64);
        let (_, _, cost) = profile(tau);
        if cost < best.1 {
            best = (tau, cost);
        }
    }
    let step = (tau_hi / tau_lo).powf(1.0 / (grid - 1) as f64);
    let (log_tau, _) = golden_section_min(
        |lt: f64| profile(lt.exp()).2,
        (best.0 / step).ln(),
        (best.0 * step).ln(),
        1e-10,
    );
    let tau = log_tau.exp();
    let (asymptote, amplitude, cost) = profile(tau);

    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let cost_const: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let tau_identifiable =
        tau <= 0.5 * span && cost_const > 0.0 && cost.sqrt() <= 0.9 * cost_const.sqrt();

    Ok(ExponentialTail {
        asymptote,
        amplitude,
        tau,
        tau_identifiable,
        residual_norm: cost.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::reflection_spectrum;
    use crate::trace::ReferenceMode;
    use approx::assert_relative_eq;

    fn device() -> TransmonParams {
        TransmonParams::new(
            angular_from_hz(5.332e9),
            -angular_from_hz(250.0e6),
            angular_from_hz(1.23e6),
            4,
        )
        .unwrap()
    }

    #[test]
    fn drive_rate_follows_square_root_of_power() {
        let p = device();
        let a = 1e-11;
        let r1 = drive_rate_from_power(&p, 1e-7, a).unwrap();
        let r2 = drive_rate_from_power(&p, 4e-7, a).unwrap();
        assert_relative_eq!(r2 / r1, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn power_round_trips_through_drive_rate() {
        let p = device();
        let a = 3.1e-10;
        let power = 2.4e-6;
        let rabi = drive_rate_from_power(&p, power, a).unwrap();
        assert_relative_eq!(
            power_from_drive_rate(&p, rabi, a).unwrap(),
            power,
            max_relative = 1e-12
        );
    }

    #[test]
    fn attenuation_must_be_a_transmission() {
        let p = device();
        assert!(drive_rate_from_power(&p, 1e-7, 0.0).is_err());
        assert!(drive_rate_from_power(&p, 1e-7, 1.5).is_err());
    }

    #[test]
    fn normalization_divides_out_background() {
        let background = |f: f64| Complex64::new(0.5 + 1e-12 * (f - 5.0e9), 0.2);
        let truth = Complex64::new(-0.8, 0.1);
        let raw_points: Vec<TracePoint> = (0..21)
            .map(|k| {
                let f = 5.0e9 + 1e6 * k as f64;
                TracePoint {
                    frequency_hz: f,
                    power_watt: 1e-7,
                    reflection: truth * background(f),
                }
            })
            .collect();
        let ref_points: Vec<TracePoint> = (0..41)
            .map(|k| {
                let f = 4.999e9 + 0.6e6 * k as f64;
                TracePoint {
                    frequency_hz: f,
                    power_watt: 1e-7,
                    reflection: background(f),
                }
            })
            .collect();
        let raw = ReflectionTrace::new(raw_points, ReferenceMode::None).unwrap();
        let reference = ReflectionTrace::new(ref_points, ReferenceMode::Detuned).unwrap();
        let out = normalize_trace(&raw, &reference).unwrap();
        assert_eq!(out.reference_mode(), ReferenceMode::Detuned);
        for pt in out.points() {
            assert!((pt.reflection - truth).norm() < 1e-9);
        }
    }

    #[test]
    fn normalization_flags_degenerate_reference() {
        let mk = |reflection| TracePoint {
            frequency_hz: 5.0e9,
            power_watt: 1e-7,
            reflection,
        };
        let raw = ReflectionTrace::new(
            vec![TracePoint {
                frequency_hz: 5.0e9,
                power_watt: 1e-7,
                reflection: Complex64::new(1.0, 0.0),
            }],
            ReferenceMode::None,
        )
        .unwrap();
        let reference = ReflectionTrace::new(
            vec![mk(Complex64::new(1e-9, 0.0)), {
                let mut p = mk(Complex64::new(1e-9, 0.0));
                p.frequency_hz = 5.1e9;
                p
            }],
            ReferenceMode::Detuned,
        )
        .unwrap();
        assert!(matches!(
            normalize_trace(&raw, &reference),
            Err(Error::DegenerateReference { count: 1, first: 0 })
        ));
    }

    #[test]
    fn normalization_refuses_extrapolation() {
        let mk = |f| TracePoint {
            frequency_hz: f,
            power_watt: 1e-7,
            reflection: Complex64::new(1.0, 0.0),
        };
        let raw = ReflectionTrace::new(vec![mk(4.0e9)], ReferenceMode::None).unwrap();
        let reference =
            ReflectionTrace::new(vec![mk(5.0e9), mk(5.1e9)], ReferenceMode::Detuned).unwrap();
        assert!(matches!(
            normalize_trace(&raw, &reference),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn noiseless_fit_recovers_truth_from_perturbed_start() {
        let p = device();
        let attenuation = 1.0e-11;
        let powers = [1.0e-7, 1.0e-5];
        let detunings: Vec<f64> = (0..9)
            .map(|k| angular_from_hz(-6.0e6 + 1.5e6 * k as f64))
            .collect();
        let bath = BathOccupation::zero(p.transitions());
        let trace =
            reflection_spectrum(&p, &bath, attenuation, &powers, &detunings, true).unwrap();
        let config = FitConfig {
            levels: 4,
            include_cross_terms: true,
            initial: Some(FitInit {
                omega_ge: p.omega_ge + angular_from_hz(0.4e6),
                gamma: p.gamma * 1.3,
                alpha: p.alpha * 0.8,
                attenuation: attenuation * 2.0,
            }),
        };
        let fit = global_fit(&[trace], &config).unwrap();
        assert_relative_eq!(fit.omega_ge, p.omega_ge, max_relative = 1e-9);
        assert_relative_eq!(fit.gamma, p.gamma, max_relative = 1e-6);
        assert_relative_eq!(fit.alpha, p.alpha, max_relative = 1e-4);
        assert_relative_eq!(fit.attenuation, attenuation, max_relative = 1e-5);
        assert!(fit.residual_norm < 1e-8, "residual {}", fit.residual_norm);
    }

    #[test]
    fn fit_requires_two_powers() {
        let p = device();
        let bath = BathOccupation::zero(p.transitions());
        let detunings: Vec<f64> = (0..5).map(|k| angular_from_hz(-2e6 + 1e6 * k as f64)).collect();
        let trace =
            reflection_spectrum(&p, &bath, 1e-11, &[1e-7], &detunings, true).unwrap();
        assert!(global_fit(&[trace], &FitConfig::default()).is_err());
    }

    #[test]
    fn tail_fit_recovers_parameters() {
        let times: Vec<f64> = (0..200).map(|k| 1.0 + 0.05 * k as f64).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|t| 3.0 + 2.0 * (-(t - 1.0) / 0.8).exp())
            .collect();
        let fit = exponential_tail_fit(&times, &values).unwrap();
        assert!(fit.tau_identifiable);
        assert_relative_eq!(fit.asymptote, 3.0, max_relative = 1e-6);
        assert_relative_eq!(fit.amplitude, 2.0, max_relative = 1e-6);
        assert_relative_eq!(fit.tau, 0.8, max_relative = 1e-6);
    }

    #[test]
    fn tail_fit_flags_unresolved_decay() {
        // Decay ten times longer than the record: any tau this size fits.
        let times: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let span = times[times.len() - 1];
        let values: Vec<f64> = times
            .iter()
            .map(|t| 1.0 + 0.5 * (-t / (10.0 * span)).exp())
            .collect();
        let fit = exponential_tail_fit(&times, &values).unwrap();
        assert!(!fit.tau_identifiable);
    }

    #[test]
    fn tail_fit_flags_constant_data() {
        let times: Vec<f64> = (0..20).map(|k| k as f64).collect();
        let values = vec![2.5; 20];
        let fit = exponential_tail_fit(&times, &values).unwrap();
        assert!(!fit.tau_identifiable);
        assert_relative_eq!(fit.asymptote, 2.5, max_relative = 1e-12);
    }
}
