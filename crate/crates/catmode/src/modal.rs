//! Null-space reduction and the constrained eigenproblem.
//!
//! Linearizing the end-fixity constraint confines the coefficient
//! vector to the hyperplane `aᵀq = 0`. With `Q` an orthonormal basis
//! of that hyperplane and `a = Qζ`, the multiplier drops out and the
//! equations of motion reduce to the (N−1)-dimensional pencil
//!
//! ```text
//! (Qᵀ M Q) ζ̈ = λ₀ (Qᵀ B Q) ζ,
//! ```
//!
//! whose eigenvalues are the squared angular frequencies: `−λ₀ B̃` is
//! positive definite (B is negative definite and λ₀ > 0), so every
//! ω² comes out positive by construction.

use nalgebra::{DMatrix, DVector};

use crate::assembly::AssembledSystem;
use crate::basis::linspace;
use crate::equilibrium::{EquilibriumShape, SpanGeometry};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_of_rows, sym_definite_eig};
use crate::quadrature::QuadratureRule;

/// Default number of output samples per mode shape.
pub const DEFAULT_OUTPUT_SAMPLES: usize = 401;

/// One sampled point of a mode shape: vertical and first-order
/// horizontal displacement at x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSample {
    pub x: f64,
    pub v: f64,
    pub u: f64,
}

/// One in-plane mode.
#[derive(Debug, Clone)]
pub struct Mode {
    /// Angular frequency in radians per nondimensional time.
    pub omega: f64,
    /// Coefficient vector a in the trial basis, with aᵀq = 0.
    pub coefficients: DVector<f64>,
    /// (x, v, u) sampled on a uniform grid over [0, b].
    pub samples: Vec<ShapeSample>,
}

/// All modes of one assembled system, ascending in frequency.
#[derive(Debug, Clone)]
pub struct ModeSet {
    shape: EquilibriumShape,
    modes: Vec<Mode>,
}

impl ModeSet {
    pub fn shape(&self) -> &EquilibriumShape {
        &self.shape
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.omega).collect()
    }

    /// Sample tables `(x, v)` of each mode, ready to feed back into
    /// [`crate::basis::TrialBasis::from_samples`].
    pub fn vertical_sample_tables(&self) -> Vec<Vec<(f64, f64)>> {
        self.modes
            .iter()
            .map(|m| m.samples.iter().map(|s| (s.x, s.v)).collect())
            .collect()
    }
}

/// Orthonormal basis of the hyperplane orthogonal to `q`: an
/// N×(N−1) matrix `Q` with `QᵀQ = I` and `Qᵀq = 0`.
pub fn nullspace_basis(q: &DVector<f64>) -> Result<DMatrix<f64>> {
    if q.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let row = DMatrix::from_row_slice(1, q.len(), q.as_slice());
    nullspace_of_rows(&row).ok_or(Error::ZeroVector)
}

/// Solve the reduced eigenproblem and sample the mode shapes on
/// `n_output_samples` uniform points.
///
/// Modes are normalized to max |v| = 1 on the sample grid with the
/// sign fixed by v′(0) > 0, so outputs are deterministic.
pub fn solve_modes(system: &AssembledSystem, n_output_samples: usize) -> Result<ModeSet> {
    let lambda0 = match system.lambda0.value() {
        Some(v) => v,
        None => return Err(Error::DegenerateSystem),
    };
    if system.is_degenerate() {
        return Err(Error::DegenerateSystem);
    }
    let q_basis = nullspace_basis(&system.constraint_vector)?;
    let m_red = q_basis.transpose() * &system.mass * &q_basis;
    let b_red = q_basis.transpose() * &system.constraint_matrix * &q_basis;
    let stiffness = -lambda0 * b_red;
    let (omega_sq, zeta) = sym_definite_eig(&stiffness, &m_red)?;

    let shape = *system.shape();
    let basis = system.basis();
    let b_span = shape.geometry().b;
    let grid = linspace(b_span, n_output_samples.max(3));
    let n = system.size();

    let mut modes = Vec::with_capacity(n - 1);
    for (idx, &w2) in omega_sq.iter().enumerate() {
        if w2 <= 0.0 {
            // cannot happen while B̃ is negative definite; treat as a
            // failed reduction rather than emit a bogus frequency
            return Err(Error::IndefiniteMass);
        }
        let mut a = &q_basis * zeta.column(idx).clone_owned();

        // v values on the grid
        let v_of = |x: f64, coeff: &DVector<f64>| {
            (0..n).map(|j| coeff[j] * basis.value(j, x)).sum::<f64>()
        };
        // sign: v′(0) > 0
        let slope0: f64 = (0..n).map(|j| a[j] * basis.derivative(j, 0.0)).sum();
        if slope0 < 0.0 {
            a = -a;
        }
        let mut v_vals: Vec<f64> = grid.iter().map(|&x| v_of(x, &a)).collect();
        let vmax = v_vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if vmax > 0.0 {
            let scale = 1.0 / vmax;
            a *= scale;
            for v in &mut v_vals {
                *v *= scale;
            }
        }

        // induced horizontal displacement on the same grid, by-parts form
        let running = system.rule().cumulative_integrate(0.0, &grid, |x| {
            shape.sec_theta(x) * v_of(x, &a)
        })?;
        let samples: Vec<ShapeSample> = grid
            .iter()
            .zip(v_vals.iter())
            .zip(running.iter())
            .map(|((&x, &v), &cum)| ShapeSample {
                x,
                v,
                u: -shape.y_prime(x) * v + cum / shape.w(),
            })
            .collect();

        modes.push(Mode {
            omega: w2.sqrt(),
            coefficients: a,
            samples,
        });
    }

    Ok(ModeSet { shape, modes })
}

/// First few frequencies as a function of sine-basis size; the
/// convergence table behind the default N = 4 runs.
///
/// For nested sine bases each frequency is nonincreasing in N.
pub fn frequencies_vs_basis_size(
    geometry: SpanGeometry,
    sizes: &[usize],
    rule: &QuadratureRule,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let shape = EquilibriumShape::solve(geometry)?;
    let mut table = Vec::with_capacity(sizes.len());
    for &n in sizes {
        if n < 2 {
            return Err(Error::InvalidGeometry(format!(
                "basis size {n} too small for a constrained spectrum"
            )));
        }
        let basis = crate::basis::TrialBasis::fourier_sine(geometry.b, n)?;
        let system = crate::assembly::assemble(&shape, &basis, rule)?;
        let set = solve_modes(&system, 101)?;
        let freqs: Vec<f64> = set.frequencies().into_iter().take(3).collect();
        table.push((n, freqs));
    }
    Ok(table)
}
