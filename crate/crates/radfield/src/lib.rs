// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Radiative thermometry of a semi-infinite waveguide terminated by a
//! multilevel superconducting artificial atom.
//!
//! The crate models the atom as a weakly anharmonic ladder of `N` levels
//! coupled to the propagating field of the waveguide. Its centerpiece is the
//! steady state of a Lindblad master equation whose dissipator retains the
//! cross-transition terms that arise when several ladder transitions share
//! one radiative bath; from the steady state it computes the coherent
//! reflection coefficient of a weak probe tone.
//!
//! On top of the solver sit closed-form weak-drive expansions, converters
//! between reflection, mode occupation and temperature, sensitivity figures
//! for bolometric operation, calibration fits for measured reflection
//! traces, and synthetic-data generators (band-limited noise, circulator
//! leakage) used to exercise the full analysis chain.
//!
//! Conventions used throughout:
//!
//! * frequencies inside the model are angular (rad/s); helpers in
//!   [`constants`] convert from cycles/s at the boundary,
//! * the anharmonicity is negative for the transmon-like ladder,
//! * level indices are zero based, transition `j` (one based, `1..N`)
//!   connects levels `j - 1` and `j`.

pub mod analytic;
pub mod calibration;
pub mod constants;
mod error;
pub mod lindblad;
pub mod numeric;
pub mod params;
pub mod state;
pub mod synth;
pub mod thermometry;
pub mod trace;

pub use error::{Error, Result};
pub use params::{BathOccupation, DriveParams, TransmonParams};
pub use state::DensityMatrix;

/// Complex scalar used for all field and operator arithmetic.
pub type Complex64 = num_complex::Complex<f64>;

/// Dense complex matrix; operators and superoperators are stored this way.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

/// Dense complex vector; vectorized density matrices are stored this way.
pub type CVector = nalgebra::DVector<Complex64>;
