// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Density matrix wrapper with physicality checks.

use nalgebra::SymmetricEigen;

use crate::{CMatrix, Complex64, Error, Result};

/// Relative Hermiticity deviation accepted before symmetrization.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Most negative eigenvalue accepted, relative to the largest population.
pub const EIGENVALUE_TOL: f64 = 1e-10;

/// Trace deviation from one accepted after solving.
pub const TRACE_TOL: f64 = 1e-8;

/// A validated density matrix.
///
/// Construction through [`DensityMatrix::from_solution`] enforces unit
/// trace, Hermiticity (up to [`HERMITICITY_TOL`], then symmetrized exactly)
/// and positive semidefiniteness (up to [`EIGENVALUE_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validate a raw solver output and wrap it.
    ///
    /// The input is symmetrized, `(m + m^dagger) / 2`, after the
    /// Hermiticity check so downstream code sees an exactly Hermitian
    /// matrix.
    pub fn from_solution(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() < 2 {
            return Err(Error::InvalidSteadyState(format!(
                "expected square matrix of dimension >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }

        let scale = matrix.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::InvalidSteadyState(format!(
                "matrix scale is {scale}"
            )));
        }

        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidSteadyState(format!(
                "trace = {trace} is not 1"
            )));
        }

        let herm_dev = hermiticity_deviation(&matrix);
        if herm_dev > HERMITICITY_TOL * scale {
            return Err(Error::InvalidSteadyState(format!(
                "Hermiticity deviation {herm_dev:e} exceeds {:e}",
                HERMITICITY_TOL * scale
            )));
        }

        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let eigs = SymmetricEigen::new(sym.clone()).eigenvalues;
        let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOL {
            return Err(Error::InvalidSteadyState(format!(
                "negative population eigenvalue {min_eig:e}"
            )));
        }

        Ok(Self { matrix: sym })
    }

    /// Dimension of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Population of level `j` (zero based).
    ///
    /// Panics if `j` is outside the ladder.
    pub fn population(&self, j: usize) -> f64 {
        assert!(j < self.dim(), "level index {j} outside 0..{}", self.dim());
        self.matrix[(j, j)].re
    }

    /// All level populations, ground state first.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.population(j)).collect()
    }

    /// Matrix element `<i| rho |j>` (zero based).
    ///
    /// Panics if an index is outside the ladder.
    pub fn coherence(&self, i: usize, j: usize) -> Complex64 {
        assert!(
            i < self.dim() && j < self.dim(),
            "indices ({i}, {j}) outside 0..{}",
            self.dim()
        );
        self.matrix[(i, j)]
    }

    /// Borrow the full matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Largest absolute difference between a matrix and its adjoint.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
}
