// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Python bindings for the radfield library.
//!
//! The module mirrors the Rust API with two small changes for Python
//! ergonomics: frequencies cross the boundary in hertz (`_hz` arguments,
//! converted to angular units internally), and reflection values are
//! plain Python complex numbers.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use radfield::analytic::{self, SensitivityInputs};
use radfield::constants::{angular_from_hz, hz_from_angular};
use radfield::lindblad;
use radfield::params::{BathOccupation, DriveParams, TransmonParams};
use radfield::thermometry::{self, AttenuatorChain, InversionMode};
use radfield::Complex64;

fn to_py_err(e: radfield::Error) -> PyErr {
    use radfield::Error::*;
    match e {
        InvalidParameter(_) | BathSizeMismatch { .. } | OutOfRange(_) | NotBracketed(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<InversionMode> {
    match mode {
        "real" => Ok(InversionMode::RealPart),
        "magnitude" => Ok(InversionMode::Magnitude),
        other => Err(PyValueError::new_err(format!(
            "mode = '{other}' (expected 'real' or 'magnitude')"
        ))),
    }
}

/// Multilevel atom at the end of the waveguide.
#[pyclass(module = "radfield_py", skip_from_py_object)]
#[derive(Clone)]
struct Transmon {
    inner: TransmonParams,
}

#[pymethods]
impl Transmon {
    #[new]
    #[pyo3(signature = (frequency_ge_hz, anharmonicity_hz, gamma_hz, levels=3, gamma_phi_hz=0.0, gamma_nr_hz=0.0))]
    fn new(
        frequency_ge_hz: f64,
        anharmonicity_hz: f64,
        gamma_hz: f64,
        levels: usize,
        gamma_phi_hz: f64,
        gamma_nr_hz: f64,
    ) -> PyResult<Self> {
        let inner = TransmonParams::new(
            angular_from_hz(frequency_ge_hz),
            angular_from_hz(anharmonicity_hz),
            angular_from_hz(gamma_hz),
            levels,
        )
        .and_then(|p| p.with_dephasing(angular_from_hz(gamma_phi_hz)))
        .and_then(|p| p.with_nonradiative(angular_from_hz(gamma_nr_hz)))
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn frequency_ge_hz(&self) -> f64 {
        hz_from_angular(self.inner.omega_ge)
    }

    #[getter]
    fn anharmonicity_hz(&self) -> f64 {
        hz_from_angular(self.inner.alpha)
    }

    #[getter]
    fn gamma_hz(&self) -> f64 {
        hz_from_angular(self.inner.gamma)
    }

    #[getter]
    fn levels(&self) -> usize {
        self.inner.levels
    }

    /// Frequency of ladder transition `j` (1 based), Hz.
    fn transition_frequency_hz(&self, j: usize) -> PyResult<f64> {
        if j < 1 || j > self.inner.transitions() {
            return Err(PyValueError::new_err(format!(
                "transition {j} out of 1..={}",
                self.inner.transitions()
            )));
        }
        Ok(hz_from_angular(self.inner.transition_frequency(j)))
    }

    /// Spectrally weighted occupation of a thermal field at `temperature_k`.
    fn effective_occupation(&self, temperature_k: f64) -> PyResult<f64> {
        thermometry::effective_occupation(&self.inner, temperature_k).map_err(to_py_err)
    }

    /// Temperature in kelvin whose thermal field has the given effective
    /// occupation.
    fn temperature_from_occupation(&self, occupation: f64) -> PyResult<f64> {
        thermometry::temperature_from_occupation(&self.inner, occupation).map_err(to_py_err)
    }

    /// Thermal bath occupations for each transition at `temperature_k`.
    fn thermal_bath(&self, temperature_k: f64) -> PyResult<Bath> {
        BathOccupation::thermal(&self.inner, temperature_k)
            .map(|inner| Bath { inner })
            .map_err(to_py_err)
    }

    /// Fraction of the thermometer's spectral response inside a band of
    /// `full_width_hz` around `center_hz`.
    fn band_weight(&self, center_hz: f64, full_width_hz: f64) -> PyResult<f64> {
        thermometry::band_weight(
            &self.inner,
            angular_from_hz(center_hz),
            angular_from_hz(full_width_hz),
        )
        .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Transmon(frequency_ge_hz={}, anharmonicity_hz={}, gamma_hz={}, levels={})",
            hz_from_angular(self.inner.omega_ge),
            hz_from_angular(self.inner.alpha),
            hz_from_angular(self.inner.gamma),
            self.inner.levels
        )
    }
}

/// Per transition occupations of the shared bath.
#[pyclass(module = "radfield_py", skip_from_py_object)]
#[derive(Clone)]
struct Bath {
    inner: BathOccupation,
}

#[pymethods]
impl Bath {
    /// Same occupation on every transition.
    #[staticmethod]
    fn uniform(occupation: f64, transitions: usize) -> PyResult<Self> {
        BathOccupation::uniform(occupation, transitions)
            .map(|inner| Bath { inner })
            .map_err(to_py_err)
    }

    /// Cold bath.
    #[staticmethod]
    fn zero(transitions: usize) -> Self {
        Bath {
            inner: BathOccupation::zero(transitions),
        }
    }

    /// One occupation per transition, lowest first.
    #[staticmethod]
    fn per_transition(occupations: Vec<f64>) -> PyResult<Self> {
        BathOccupation::from_per_transition(occupations)
            .map(|inner| Bath { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn occupations(&self) -> Vec<f64> {
        self.inner.as_slice().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Bath(occupations={:?})", self.inner.as_slice())
    }
}

/// Steady-state reflection coefficient for a coherent probe.
#[pyfunction]
#[pyo3(signature = (atom, bath, detuning_hz, rabi_hz, cross_terms=true))]
fn steady_reflection(
    atom: &Transmon,
    bath: &Bath,
    detuning_hz: f64,
    rabi_hz: f64,
    cross_terms: bool,
) -> PyResult<Complex64> {
    let drive = DriveParams::new(angular_from_hz(detuning_hz), angular_from_hz(rabi_hz))
        .map_err(to_py_err)?;
    lindblad::steady_reflection(&atom.inner, &bath.inner, &drive, cross_terms).map_err(to_py_err)
}

/// Reflection over a power and detuning grid.
///
/// Returns `(frequency_hz, power_watt, reflection)` tuples, power major.
#[pyfunction]
#[pyo3(signature = (atom, bath, attenuation, powers_watt, detunings_hz, cross_terms=true))]
fn reflection_spectrum(
    atom: &Transmon,
    bath: &Bath,
    attenuation: f64,
    powers_watt: Vec<f64>,
    detunings_hz: Vec<f64>,
    cross_terms: bool,
) -> PyResult<Vec<(f64, f64, Complex64)>> {
    let detunings: Vec<f64> = detunings_hz.iter().map(|&f| angular_from_hz(f)).collect();
    let trace = lindblad::reflection_spectrum(
        &atom.inner,
        &bath.inner,
        attenuation,
        &powers_watt,
        &detunings,
        cross_terms,
    )
    .map_err(to_py_err)?;
    Ok(trace
        .points()
        .iter()
        .map(|pt| (pt.frequency_hz, pt.power_watt, pt.reflection))
        .collect())
}

/// Bath occupation consistent with a measured resonant reflection.
///
/// `mode` selects the inverted observable: `'real'` uses the real part,
/// `'magnitude'` uses the modulus below its saturation dip.
#[pyfunction]
#[pyo3(signature = (atom, measured, rabi_ratio, mode="real", cross_terms=true))]
fn occupation_from_reflection(
    atom: &Transmon,
    measured: Complex64,
    rabi_ratio: f64,
    mode: &str,
    cross_terms: bool,
) -> PyResult<f64> {
    thermometry::occupation_from_reflection(
        &atom.inner,
        measured,
        rabi_ratio,
        parse_mode(mode)?,
        cross_terms,
    )
    .map_err(to_py_err)
}

/// Occupation after each stage of an attenuator chain.
///
/// `stages` are `(attenuation_db, temperature_k)` pairs from the warm end
/// inward; the source is a thermal field at `source_temperature_k`.
#[pyfunction]
#[pyo3(signature = (stages, frequency_hz, source_temperature_k=300.0))]
fn chain_occupation(
    stages: Vec<(f64, f64)>,
    frequency_hz: f64,
    source_temperature_k: f64,
) -> PyResult<Vec<f64>> {
    let chain = AttenuatorChain::from_db_rows(&stages).map_err(to_py_err)?;
    let omega = angular_from_hz(frequency_hz);
    let source = thermometry::bose_occupation(omega, source_temperature_k).map_err(to_py_err)?;
    thermometry::chain_occupation(&chain, omega, source).map_err(to_py_err)
}

/// Thermal occupation of a single mode, `1 / (exp(h f / k T) - 1)`.
#[pyfunction]
fn bose_occupation(frequency_hz: f64, temperature_k: f64) -> PyResult<f64> {
    thermometry::bose_occupation(angular_from_hz(frequency_hz), temperature_k).map_err(to_py_err)
}

/// Drive strength, as a ratio to the linewidth, that minimizes the
/// occupation noise floor.
#[pyfunction]
fn optimal_rabi_ratio() -> f64 {
    analytic::optimal_rabi_ratio()
}

/// Derivative of the resonant reflection real part with respect to the
/// bath occupation, at the given drive ratio.
#[pyfunction]
fn occupation_responsivity(rabi_ratio: f64) -> PyResult<f64> {
    analytic::occupation_responsivity(rabi_ratio).map_err(to_py_err)
}

/// Smallest detectable occupation per root angular bandwidth.
#[pyfunction]
fn noise_equivalent_occupation(
    frequency_ge_hz: f64,
    gamma_hz: f64,
    efficiency: f64,
    rabi_ratio: f64,
) -> PyResult<f64> {
    let s = SensitivityInputs::new(
        angular_from_hz(frequency_ge_hz),
        angular_from_hz(gamma_hz),
        efficiency,
    )
    .map_err(to_py_err)?;
    analytic::noise_equivalent_occupation(&s, rabi_ratio).map_err(to_py_err)
}

/// Smallest detectable radiative power in watts per root angular
/// bandwidth.
#[pyfunction]
fn noise_equivalent_power(
    frequency_ge_hz: f64,
    gamma_hz: f64,
    efficiency: f64,
    rabi_ratio: f64,
) -> PyResult<f64> {
    let s = SensitivityInputs::new(
        angular_from_hz(frequency_ge_hz),
        angular_from_hz(gamma_hz),
        efficiency,
    )
    .map_err(to_py_err)?;
    let neo = analytic::noise_equivalent_occupation(&s, rabi_ratio).map_err(to_py_err)?;
    Ok(analytic::noise_equivalent_power(&s, neo))
}

#[pymodule]
fn radfield_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Transmon>()?;
    m.add_class::<Bath>()?;
    m.add_function(wrap_pyfunction!(steady_reflection, m)?)?;
    m.add_function(wrap_pyfunction!(reflection_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(occupation_from_reflection, m)?)?;
    m.add_function(wrap_pyfunction!(chain_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(bose_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_rabi_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(occupation_responsivity, m)?)?;
    m.add_function(wrap_pyfunction!(noise_equivalent_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(noise_equivalent_power, m)?)?;
    Ok(())
}
