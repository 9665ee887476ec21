//! Second-order treatment of a single constraint-satisfying mode.
//!
//! When the trial shape ψ already satisfies the end fixity at first
//! order (as every computed mode does), the gravity and constraint
//! vectors vanish and the multiplier route collapses. Expanding
//! `v = ε α ψ + ε² v̄` instead, the fixity constraint at second order
//! trades the unknown correction `v̄` for the ψ′² integral, and the
//! potential becomes genuinely quadratic:
//!
//! ```text
//! C₁ = (W m̄ g / 2) ∫ (1 + y′²) ψ′² dx
//! C₂ = (m̄ / 2) ∫ (U_ψ² + ψ²) sec θ dx,   U_ψ(x) = −∫₀ˣ y′ ψ′ dξ
//! ω̃ = sqrt(C₁ / C₂)
//! ```
//!
//! The correction field v̄ never needs to be constructed, and the
//! bookkeeping parameter ε cancels from the ratio.

use crate::basis::TrialFunction;
use crate::equilibrium::EquilibriumShape;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

/// Relative threshold on the first-order constraint residual of ψ.
pub const CONSTRAINT_TOL: f64 = 1e-6;

/// The two energy coefficients and the frequency they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneModeResult {
    /// Quadratic potential coefficient.
    pub c1: f64,
    /// Quadratic kinetic coefficient.
    pub c2: f64,
    /// ω̃ = sqrt(C₁/C₂).
    pub omega_tilde: f64,
}

/// Frequency of a single constraint-satisfying trial shape, no
/// multiplier involved.
///
/// ψ must vanish at both supports and satisfy the fixity constraint at
/// first order: |∫ y′ψ′ dx| below `CONSTRAINT_TOL` relative to the
/// Cauchy–Schwarz scale ‖y′‖·‖ψ′‖. A generic shape (say a bare sine)
/// fails that precondition and is rejected, because the quadratic
/// potential below silently omits the then-nonvanishing first-order
/// terms.
pub fn one_mode_frequency(
    shape: &EquilibriumShape,
    psi: &dyn TrialFunction,
    rule: &QuadratureRule,
) -> Result<OneModeResult> {
    let geom = shape.geometry();
    let b = geom.b;
    let m_bar = geom.m_bar;
    let g = geom.g;
    let w = shape.w();

    let first_order = rule.integrate(0.0, b, |x| shape.y_prime(x) * psi.derivative(x))?;
    let yp_scale = rule
        .integrate(0.0, b, |x| shape.y_prime(x).powi(2))?
        .sqrt();
    let dpsi_scale = rule.integrate(0.0, b, |x| psi.derivative(x).powi(2))?.sqrt();
    let threshold = CONSTRAINT_TOL * yp_scale * dpsi_scale;
    if first_order.abs() >= threshold {
        return Err(Error::ConstraintViolated {
            residual: first_order.abs(),
            threshold,
        });
    }

    let c1 = 0.5
        * w
        * m_bar
        * g
        * rule.integrate(0.0, b, |x| {
            let d = psi.derivative(x);
            (1.0 + shape.y_prime(x).powi(2)) * d * d
        })?;

    // kinetic coefficient with U_psi in the by-parts form, accumulated
    // along the quadrature node grid
    let nodes = rule.mapped_nodes(0.0, b);
    let xs: Vec<f64> = nodes.iter().map(|nw| nw.0).collect();
    let running = rule.cumulative_integrate(0.0, &xs, |x| shape.sec_theta(x) * psi.value(x))?;
    let mut c2 = 0.0;
    for ((&x, &(_, wgt)), &cum) in xs.iter().zip(nodes.iter()).zip(running.iter()) {
        let v = psi.value(x);
        let u = -shape.y_prime(x) * v + cum / w;
        c2 += wgt * (u * u + v * v) * shape.sec_theta(x);
    }
    c2 *= 0.5 * m_bar;

    Ok(OneModeResult {
        c1,
        c2,
        omega_tilde: (c1 / c2).sqrt(),
    })
}
