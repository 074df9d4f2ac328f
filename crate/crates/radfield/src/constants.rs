// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical constants and unit helpers.
//!
//! The model works in angular frequency (rad/s) everywhere. File formats
//! and command-line options use cycles/s (Hz) because that is what
//! instruments report; the two helpers here are the only sanctioned way to
//! cross that boundary.

/// Reduced Planck constant, J s (2019 SI exact value of h over 2 pi).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (2019 SI exact value).
pub const KB: f64 = 1.380_649e-23;

/// Convert a frequency in Hz to angular frequency in rad/s.
#[inline]
pub fn angular_from_hz(f_hz: f64) -> f64 {
    std::f64::consts::TAU * f_hz
}

/// Convert an angular frequency in rad/s to Hz.
#[inline]
pub fn hz_from_angular(omega: f64) -> f64 {
    omega / std::f64::consts::TAU
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hz_round_trip_is_exact_enough() {
        let f = 5.332e9;
        assert!((hz_from_angular(angular_from_hz(f)) - f).abs() < 1e-6);
    }

    #[test]
    fn thermal_energy_scale_matches_known_ratio() {
        // hbar * 2 pi * 1 GHz corresponds to about 48 mK.
        let t = HBAR * angular_from_hz(1e9) / KB;
        assert!((t - 0.047992).abs() < 1e-5);
    }
}
