// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Master equation of the driven multilevel ladder and its steady state.
//!
//! The atom is described in the frame rotating with the drive, where the
//! Hamiltonian for ladder operator `b` reads
//!
//! ```text
//! H = -delta b'b + (alpha/2) b'b'bb + i (Omega/2) (b - b')
//! ```
//!
//! with `delta` the drive detuning from the first transition, `alpha` the
//! anharmonicity and `Omega` the resonant Rabi rate (`'` marks the
//! adjoint). Every ladder transition couples to the same waveguide
//! continuum, so the radiative dissipator is a double sum over transition
//! pairs `(l, m)` weighted by the matrix elements `sqrt(l) sqrt(m)`: the
//! diagonal pairs give ordinary decay and thermal excitation of each
//! transition, while the off-diagonal pairs transfer neighboring
//! coherences into each other. In this rotating frame all of those terms
//! are static because transition `m` rotates at `delta + (m - 1) alpha`
//! relative to the drive and the pair terms inherit only frequency
//! differences. The off-diagonal pairs can be switched off to quantify
//! their effect.
//!
//! The steady state is obtained by replacing one row of the vectorized
//! generator with the trace constraint and solving the dense linear
//! system with an LU factorization; the result is validated for trace,
//! Hermiticity and positivity before use.

use crate::calibration::drive_rate_from_power;
use crate::constants::hz_from_angular;
use crate::params::{BathOccupation, DriveParams, TransmonParams};
use crate::state::DensityMatrix;
use crate::trace::{ReferenceMode, ReflectionTrace, TracePoint};
use crate::{CMatrix, CVector, Complex64, Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative residual accepted for the solved steady state.
pub const STEADY_STATE_RESIDUAL_TOL: f64 = 1e-10;

/// Ladder annihilation operator `b` with `<j-1| b |j> = sqrt(j)`.
pub fn annihilation(levels: usize) -> CMatrix {
    let mut b = CMatrix::zeros(levels, levels);
    for j in 1..levels {
        b[(j - 1, j)] = Complex64::new((j as f64).sqrt(), 0.0);
    }
    b
}

/// Lowering operator of transition `j` (one based), `|j-1><j|` without the
/// `sqrt(j)` matrix element.
pub fn transition_lowering(levels: usize, j: usize) -> CMatrix {
    assert!(
        j >= 1 && j < levels,
        "transition index {j} outside 1..{levels}"
    );
    let mut s = CMatrix::zeros(levels, levels);
    s[(j - 1, j)] = ONE;
    s
}

/// Rotating-frame Hamiltonian of the driven ladder.
pub fn build_hamiltonian(p: &TransmonParams, d: &DriveParams) -> CMatrix {
    let n = p.levels;
    let mut h = CMatrix::zeros(n, n);
    for j in 0..n {
        let jf = j as f64;
        // -delta b'b + (alpha/2) b'b' b b, both diagonal in the ladder basis.
        h[(j, j)] = Complex64::new(-d.detuning * jf + 0.5 * p.alpha * jf * (jf - 1.0), 0.0);
    }
    let half = 0.5 * d.rabi_rate;
    for j in 1..n {
        let elem = (j as f64).sqrt() * half;
        h[(j - 1, j)] += I * elem;
        h[(j, j - 1)] -= I * elem;
    }
    h
}

/// Vectorize a matrix by stacking columns.
fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`] for a square matrix of dimension `n`.
fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Build the matrix of a linear map on operators by applying it to every
/// basis matrix `|i><j|`.
fn superoperator<F>(n: usize, map: F) -> CMatrix
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let mut s = CMatrix::zeros(n * n, n * n);
    let mut basis = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            basis[(i, j)] = ONE;
            let image = map(&basis);
            basis[(i, j)] = Complex64::new(0.0, 0.0);
            let col = i + j * n;
            for (row, value) in image.as_slice().iter().enumerate() {
                s[(row, col)] = *value;
            }
        }
    }
    s
}

/// Apply the shared-bath ladder dissipator at rate `rate` and the given
/// per-transition occupations to `rho`.
///
/// The double sum runs over transition pairs; with `include_cross` false
/// only the diagonal pairs `(l, l)` are kept, which is the standard
/// independent-transition Lindblad form.
fn apply_ladder_dissipator(
    rho: &CMatrix,
    lowering: &[CMatrix],
    rate: f64,
    occupations: &[f64],
    include_cross: bool,
) -> CMatrix {
    let n = rho.nrows();
    let mut out = CMatrix::zeros(n, n);
    let transitions = lowering.len();
    for l in 1..=transitions {
        for m in 1..=transitions {
            if !include_cross && l != m {
                continue;
            }
            let weight = rate * ((l * m) as f64).sqrt();
            let n_m = occupations[m - 1];
            let sl = &lowering[l - 1];
            let sm = &lowering[m - 1];
            let sl_dag = sl.adjoint();
            let sm_dag = sm.adjoint();

            // Downward pair term, weight (1 + n_m).
            let down = (sl * rho * &sm_dag + sm * rho * &sl_dag
                - rho * &sm_dag * sl
                - &sl_dag * sm * rho)
                .scale(0.5);
            // Upward pair term, weight n_m.
            let up = (&sl_dag * rho * sm + &sm_dag * rho * sl
                - rho * sm * &sl_dag
                - sl * &sm_dag * rho)
                .scale(0.5);

            out += down.scale(weight * (1.0 + n_m)) + up.scale(weight * n_m);
        }
    }
    out
}

/// Pure dephasing: every coherence decays at `gamma_phi`, populations are
/// untouched.
fn apply_dephasing(rho: &CMatrix, gamma_phi: f64) -> CMatrix {
    let n = rho.nrows();
    let mut out = rho.scale(-gamma_phi);
    for j in 0..n {
        out[(j, j)] += Complex64::new(gamma_phi, 0.0) * rho[(j, j)];
    }
    out
}

/// Caches the drive-independent part of the generator so that sweeps over
/// drive settings reuse it.
#[derive(Debug, Clone)]
pub struct LiouvillianBuilder {
    params: TransmonParams,
    include_cross_terms: bool,
    static_part: CMatrix,
}

impl LiouvillianBuilder {
    /// Precompute dissipation (radiative, nonradiative, dephasing) for a
    /// parameter set and bath.
    pub fn new(
        p: &TransmonParams,
        bath: &BathOccupation,
        include_cross_terms: bool,
    ) -> Result<Self> {
        if bath.transitions() != p.transitions() {
            return Err(Error::BathSizeMismatch {
                expected: p.transitions(),
                got: bath.transitions(),
            });
        }
        let n = p.levels;
        let lowering: Vec<CMatrix> = (1..n).map(|j| transition_lowering(n, j)).collect();
        let zeros = vec![0.0; p.transitions()];
        let gamma_phi = p.gamma_phi;
        let gamma_nr = p.gamma_nr;
        let gamma = p.gamma;
        let occupations = bath.as_slice().to_vec();
        let static_part = superoperator(n, |rho| {
            let mut out =
                apply_ladder_dissipator(rho, &lowering, gamma, &occupations, include_cross_terms);
            if gamma_nr > 0.0 {
                out += apply_ladder_dissipator(rho, &lowering, gamma_nr, &zeros, include_cross_terms);
            }
            if gamma_phi > 0.0 {
                out += apply_dephasing(rho, gamma_phi);
            }
            out
        });
        Ok(Self {
            params: p.clone(),
            include_cross_terms,
            static_part,
        })
    }

    /// Assemble the full generator for one drive setting.
    pub fn liouvillian(&self, d: &DriveParams) -> Liouvillian {
        let n = self.params.levels;
        let h = build_hamiltonian(&self.params, d);
        let mut matrix = superoperator(n, |rho| {
            let comm = &h * rho - rho * &h;
            comm * (-I)
        });
        matrix += &self.static_part;
        Liouvillian { matrix, levels: n }
    }

    /// Whether off-diagonal transition pairs are included.
    pub fn include_cross_terms(&self) -> bool {
        self.include_cross_terms
    }
}

/// The full generator of the master equation acting on vectorized density
/// matrices (columns stacked).
#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: CMatrix,
    levels: usize,
}

impl Liouvillian {
    /// The generator as a dense `levels^2` by `levels^2` matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Hilbert space dimension the generator acts on.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Apply the generator to a density matrix.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)), self.levels)
    }

    /// Solve for the steady state.
    ///
    /// The generator always annihilates some state but is singular by
    /// construction (the trace is conserved), so the first row is replaced
    /// by the trace constraint and the system is solved against the unit
    /// vector. The raw solution must reproduce `L rho = 0` to a relative
    /// residual of [`STEADY_STATE_RESIDUAL_TOL`] and pass the physicality
    /// checks of [`DensityMatrix::from_solution`].
    pub fn steady_state(&self) -> Result<DensityMatrix> {
        let n = self.levels;
        let dim = n * n;
        let scale = self
            .matrix
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::SingularSteadyState(format!(
                "generator scale is {scale}"
            )));
        }

        let mut system = self.matrix.scale(1.0 / scale);
        for col in 0..dim {
            system[(0, col)] = Complex64::new(0.0, 0.0);
        }
        for j in 0..n {
            // Diagonal entries of rho sit at vectorized index j * (n + 1).
            system[(0, j * (n + 1))] = ONE;
        }
        let mut rhs = CVector::zeros(dim);
        rhs[0] = ONE;

        let solution = system
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSteadyState("LU solve failed".into()))?;
        let rho = unvectorize(&solution, n);

        let residual = vectorize(&self.apply(&rho)).norm();
        if residual > STEADY_STATE_RESIDUAL_TOL * scale {
            return Err(Error::InvalidSteadyState(format!(
                "steady-state residual {residual:e} exceeds {:e}",
                STEADY_STATE_RESIDUAL_TOL * scale
            )));
        }

        DensityMatrix::from_solution(rho)
    }
}

/// Build the generator for a single drive setting.
pub fn build_liouvillian(
    p: &TransmonParams,
    bath: &BathOccupation,
    d: &DriveParams,
    include_cross_terms: bool,
) -> Result<Liouvillian> {
    Ok(LiouvillianBuilder::new(p, bath, include_cross_terms)?.liouvillian(d))
}

/// Coherent reflection coefficient of the probe.
///
/// The reflected amplitude adds the atomic emission to the incoming tone:
/// `r = 1 + (2 gamma / Omega) sum_j sqrt(j) <j| rho |j-1>`. An undriven
/// atom has no defined reflection, so a zero Rabi rate is rejected.
pub fn reflection_coefficient(
    p: &TransmonParams,
    rho: &DensityMatrix,
    d: &DriveParams,
) -> Result<Complex64> {
    if d.rabi_rate <= 0.0 {
        return Err(Error::OutOfRange(
            "reflection undefined for zero drive amplitude".into(),
        ));
    }
    if rho.dim() != p.levels {
        return Err(Error::InvalidParameter(format!(
            "state dimension {} does not match {} levels",
            rho.dim(),
            p.levels
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..p.levels {
        sum += Complex64::new((j as f64).sqrt(), 0.0) * rho.coherence(j, j - 1);
    }
    Ok(ONE + sum * Complex64::new(2.0 * p.gamma / d.rabi_rate, 0.0))
}

/// Steady-state reflection for one drive setting.
pub fn steady_reflection(
    p: &TransmonParams,
    bath: &BathOccupation,
    d: &DriveParams,
    include_cross_terms: bool,
) -> Result<Complex64> {
    let rho = build_liouvillian(p, bath, d, include_cross_terms)?.steady_state()?;
    reflection_coefficient(p, &rho, d)
}

/// Simulate a reflection measurement over a grid of probe powers and
/// detunings.
///
/// `attenuation` is the linear power transmission between the room
/// temperature source and the atom; each grid point converts the
/// attenuated power to a Rabi rate, solves for the steady state and
/// records the reflection. Points are ordered power major, then detuning.
pub fn reflection_spectrum(
    p: &TransmonParams,
    bath: &BathOccupation,
    attenuation: f64,
    powers_watt: &[f64],
    detunings: &[f64],
    include_cross_terms: bool,
) -> Result<ReflectionTrace> {
    if powers_watt.is_empty() || detunings.is_empty() {
        return Err(Error::InvalidParameter(
            "reflection spectrum needs at least one power and one detuning".into(),
        ));
    }
    let builder = LiouvillianBuilder::new(p, bath, include_cross_terms)?;
    let mut points = Vec::with_capacity(powers_watt.len() * detunings.len());
    for &power in powers_watt {
        let rabi = drive_rate_from_power(p, power, attenuation)?;
        for &delta in detunings {
            let drive = DriveParams::new(delta, rabi)?;
            let rho = builder.liouvillian(&drive).steady_state()?;
            let r = reflection_coefficient(p, &rho, &drive)?;
            points.push(TracePoint {
                frequency_hz: hz_from_angular(p.omega_ge + delta),
                power_watt: power,
                reflection: r,
            });
        }
    }
    ReflectionTrace::new(points, ReferenceMode::None)
}

/// Propagate `rho0` for `steps` fixed steps of length `dt` with classic
/// fourth order Runge-Kutta.
///
/// This is a cross-check utility: it makes no stiffness or accuracy
/// promises beyond small `dt * gamma`, and does not revalidate the state.
pub fn evolve_rk4(liou: &Liouvillian, rho0: &CMatrix, dt: f64, steps: usize) -> CMatrix {
    let mut v = vectorize(rho0);
    let l = &liou.matrix;
    for _ in 0..steps {
        let k1 = l * &v;
        let k2 = l * (&v + (&k1).scale(0.5 * dt));
        let k3 = l * (&v + (&k2).scale(0.5 * dt));
        let k4 = l * (&v + (&k3).scale(dt));
        v += (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0);
    }
    unvectorize(&v, liou.levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn three_level() -> TransmonParams {
        TransmonParams::new(2.0e9, -5.0e8, 1.0e7, 3).unwrap()
    }

    #[test]
    fn hamiltonian_matches_hand_elements() {
        let p = three_level();
        let d = DriveParams::new(2.0e6, 4.0e6).unwrap();
        let h = build_hamiltonian(&p, &d);
        // Drive block: +i Omega/2 above the diagonal, -i below, sqrt(2) on
        // the second transition.
        assert_eq!(h[(0, 1)], Complex64::new(0.0, 2.0e6));
        assert_eq!(h[(1, 0)], Complex64::new(0.0, -2.0e6));
        assert_relative_eq!(h[(1, 2)].im, 2.0e6 * 2.0_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(h[(2, 1)].im, -2.0e6 * 2.0_f64.sqrt(), max_relative = 1e-15);
        // Diagonal: -delta j + alpha j (j - 1) / 2.
        assert_eq!(h[(0, 0)], Complex64::new(0.0, 0.0));
        assert_relative_eq!(h[(1, 1)].re, -2.0e6, max_relative = 1e-15);
        assert_relative_eq!(h[(2, 2)].re, -2.0 * 2.0e6 - 5.0e8, max_relative = 1e-15);
    }

    #[test]
    fn annihilation_has_sqrt_matrix_elements() {
        let b = annihilation(4);
        assert_eq!(b[(0, 1)].re, 1.0);
        assert_relative_eq!(b[(1, 2)].re, 2.0_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(b[(2, 3)].re, 3.0_f64.sqrt(), max_relative = 1e-15);
        assert_eq!(b[(1, 0)].re, 0.0);
    }

    #[test]
    fn undriven_two_level_thermalizes_to_detailed_balance() {
        let p = TransmonParams::new(2.0e9, -5.0e8, 1.0e7, 2).unwrap();
        let n = 0.25;
        let bath = BathOccupation::uniform(n, 1).unwrap();
        let d = DriveParams::new(0.0, 0.0).unwrap();
        let rho = build_liouvillian(&p, &bath, &d, true)
            .unwrap()
            .steady_state()
            .unwrap();
        // P_e = n / (1 + 2 n) for a two level atom in a thermal field.
        assert_relative_eq!(rho.population(1), n / (1.0 + 2.0 * n), max_relative = 1e-12);
        assert!(rho.coherence(0, 1).norm() < 1e-14);
    }

    #[test]
    fn weak_drive_cold_atom_reflects_near_minus_one() {
        let p = three_level();
        let bath = BathOccupation::zero(p.transitions());
        let d = DriveParams::resonant(1.0e-3 * p.gamma).unwrap();
        let r = steady_reflection(&p, &bath, &d, true).unwrap();
        assert!((r - Complex64::new(-1.0, 0.0)).norm() < 1e-4, "r = {r}");
    }

    #[test]
    fn strong_drive_saturates_reflection_toward_plus_one() {
        let p = three_level();
        let bath = BathOccupation::zero(p.transitions());
        let d = DriveParams::resonant(50.0 * p.gamma).unwrap();
        let r = steady_reflection(&p, &bath, &d, true).unwrap();
        assert!(r.re > 0.9, "r = {r}");
    }

    #[test]
    fn reflection_rejects_zero_drive() {
        let p = three_level();
        let bath = BathOccupation::zero(p.transitions());
        let d = DriveParams::new(0.0, 0.0).unwrap();
        let rho = build_liouvillian(&p, &bath, &d, true)
            .unwrap()
            .steady_state()
            .unwrap();
        assert!(reflection_coefficient(&p, &rho, &d).is_err());
    }

    #[test]
    fn bath_size_is_checked() {
        let p = three_level();
        let bath = BathOccupation::uniform(0.1, 5).unwrap();
        let d = DriveParams::resonant(1.0e6).unwrap();
        assert!(matches!(
            build_liouvillian(&p, &bath, &d, true),
            Err(Error::BathSizeMismatch { expected: 2, got: 5 })
        ));
    }

    #[test]
    fn generator_annihilates_its_steady_state() {
        let p = three_level().with_dephasing(2.0e6).unwrap();
        let bath = BathOccupation::from_per_transition(vec![0.05, 0.02]).unwrap();
        let d = DriveParams::new(3.0e6, 8.0e6).unwrap();
        let liou = build_liouvillian(&p, &bath, &d, true).unwrap();
        let rho = liou.steady_state().unwrap();
        let residual = vectorize(&liou.apply(rho.matrix())).norm();
        let scale = liou.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(residual < 1e-12 * scale, "residual = {residual:e}");
    }
}
