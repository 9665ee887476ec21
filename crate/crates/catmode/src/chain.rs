//! Discrete rigid-link chain: an independent frequency oracle.
//!
//! The same physical system, discretized as n uniform rigid links
//! pinned at both supports, with the link inclinations θ̂ as minimal
//! coordinates and the two end-closure equations as constraints. At a
//! constrained minimum of the potential the stationarity conditions
//! read `tan θ̂_j = (μ_v − m̄g ℓ κ_j) / μ_h` with `κ_j = n − j − ½`,
//! i.e. each link aligns with the force it transmits, and the two
//! multipliers are the support reactions: `μ_h` is the (constant)
//! horizontal tension and `μ_v` the vertical reaction at the right
//! support. The statics therefore reduce to two nested bracketed
//! solves in `(μ_h, μ_v)`.
//!
//! The constrained Hessian of the potential collapses to the diagonal
//! `ℓ μ_h sec θ̂_j` — tension times turning rate, the discrete twin of
//! the continuum's quadratic energy rise — and the kinetic metric
//! comes from link-midpoint velocities plus the rotary inertia
//! `m ℓ²/12` of each uniform rod. Small-oscillation frequencies are
//! the pencil eigenvalues on the null space of the closure Jacobian,
//! mirroring the continuum reduction.
//!
//! None of the assembled matrices of the continuum path are reused
//! here; agreement between the two spectra is a genuine cross-check.

use nalgebra::DMatrix;

use crate::equilibrium::SpanGeometry;
use crate::error::{Error, Result};
use crate::linalg::{nullspace_of_rows, sym_definite_eig};
use crate::roots::bracketed_root;

/// An n-link chain at (or near) static equilibrium.
#[derive(Debug, Clone)]
pub struct DiscreteChain {
    pub geometry: SpanGeometry,
    pub n_links: usize,
    /// ℓ = L / n.
    pub link_length: f64,
    /// Link inclinations against the +x axis, left to right.
    pub angles: Vec<f64>,
    /// Horizontal support reaction (equals the constant horizontal
    /// tension; the first closure multiplier).
    pub horizontal_reaction: f64,
    /// Vertical reaction at the right support (the second closure
    /// multiplier).
    pub vertical_reaction_right: f64,
}

/// Solve the constrained energy minimum for an n-link chain.
///
/// The closure residual of the returned chain is below 1e-10.
pub fn static_equilibrium(geometry: SpanGeometry, n_links: usize) -> Result<DiscreteChain> {
    if n_links < 3 {
        return Err(Error::TooFewLinks(n_links));
    }
    let (b, h) = (geometry.b, geometry.h);
    let length = geometry.length;
    let chord = geometry.chord();
    if chord >= length {
        return Err(Error::TautOrImpossible { chord, length });
    }
    let weight_rate = geometry.m_bar * geometry.g;
    let ell = length / n_links as f64;
    let kappa: Vec<f64> = (0..n_links)
        .map(|j| n_links as f64 - j as f64 - 0.5)
        .collect();

    let angles_of = |mu_h: f64, mu_v: f64| -> Vec<f64> {
        kappa
            .iter()
            .map(|&k| ((mu_v - weight_rate * ell * k) / mu_h).atan())
            .collect()
    };

    // vertical closure is strictly increasing in mu_v
    let total_weight = weight_rate * length;
    let mu_v_for = |mu_h: f64| -> Result<f64> {
        let gap = |mu_v: f64| {
            angles_of(mu_h, mu_v)
                .iter()
                .map(|t| ell * t.sin())
                .sum::<f64>()
                - h
        };
        let mut lo = -3.0 * total_weight - h.abs();
        let mut hi = 3.0 * total_weight + h.abs();
        let mut iter = 0;
        while gap(lo) > 0.0 {
            lo *= 2.0;
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence {
                    context: "chain vertical bracket",
                    iterations: iter,
                });
            }
        }
        while gap(hi) < 0.0 {
            hi *= 2.0;
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence {
                    context: "chain vertical bracket",
                    iterations: iter,
                });
            }
        }
        bracketed_root(gap, lo, hi, 1e-15, "chain vertical closure")
    };

    // horizontal closure: width grows from ~0 (links vertical) to L
    // (links flat) as the tension grows
    let width_gap = |mu_h: f64| -> f64 {
        match mu_v_for(mu_h) {
            Ok(mu_v) => {
                angles_of(mu_h, mu_v)
                    .iter()
                    .map(|t| ell * t.cos())
                    .sum::<f64>()
                    - b
            }
            Err(_) => f64::NAN,
        }
    };
    let lo = 1e-9 * total_weight.max(1.0);
    let mut hi = total_weight.max(b);
    let mut iter = 0;
    while width_gap(hi) < 0.0 {
        hi *= 2.0;
        iter += 1;
        if iter > 60 {
            return Err(Error::NoConvergence {
                context: "chain horizontal bracket",
                iterations: iter,
            });
        }
    }
    let mu_h = bracketed_root(width_gap, lo, hi, 1e-14, "chain horizontal closure")?;
    let mu_v = mu_v_for(mu_h)?;
    let angles = angles_of(mu_h, mu_v);

    let chain = DiscreteChain {
        geometry,
        n_links,
        link_length: ell,
        angles,
        horizontal_reaction: mu_h,
        vertical_reaction_right: mu_v,
    };
    let residual = chain.closure_residual();
    if residual >= 1e-10 {
        return Err(Error::NoConvergence {
            context: "chain closure residual",
            iterations: crate::roots::MAX_ITER,
        });
    }
    Ok(chain)
}

impl DiscreteChain {
    /// Joint positions from the left support, n+1 points.
    pub fn joint_positions(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.n_links + 1);
        let (mut x, mut y) = (0.0, 0.0);
        pts.push((x, y));
        for &t in &self.angles {
            x += self.link_length * t.cos();
            y += self.link_length * t.sin();
            pts.push((x, y));
        }
        pts
    }

    /// Distance between the chain's free end and the right support.
    pub fn closure_residual(&self) -> f64 {
        let end = *self.joint_positions().last().expect("chain has joints");
        (end.0 - self.geometry.b).hypot(end.1 - self.geometry.h)
    }

    /// Total gravitational potential energy (link midpoints).
    pub fn potential_energy(&self) -> f64 {
        let w = self.geometry.m_bar * self.geometry.g;
        let ell = self.link_length;
        let mut height_sum = 0.0;
        let mut y = 0.0;
        for &t in &self.angles {
            height_sum += y + 0.5 * ell * t.sin();
            y += ell * t.sin();
        }
        w * ell * height_sum
    }

    /// Diagonal of the constrained potential Hessian, ℓ μ_h sec θ̂_j.
    pub fn hessian_diagonal(&self) -> Vec<f64> {
        self.angles
            .iter()
            .map(|t| self.link_length * self.horizontal_reaction / t.cos())
            .collect()
    }

    /// Kinetic-energy metric in the angle coordinates: midpoint
    /// translation of each rod plus its rotary inertia.
    pub fn kinetic_metric(&self) -> DMatrix<f64> {
        let n = self.n_links;
        let ell = self.link_length;
        let m_link = self.geometry.m_bar * ell;
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for k in i..n {
                let coupling = if i == k {
                    ell * ell * (n as f64 - k as f64 - 0.75)
                } else {
                    ell * ell * (n as f64 - k as f64 - 0.5)
                };
                let val = m_link * coupling * (self.angles[i] - self.angles[k]).cos();
                a[(i, k)] = val;
                a[(k, i)] = val;
            }
        }
        for i in 0..n {
            a[(i, i)] += m_link * ell * ell / 12.0;
        }
        a
    }

    /// Jacobian of the two closure constraints, 2×n.
    pub fn closure_jacobian(&self) -> DMatrix<f64> {
        let n = self.n_links;
        let ell = self.link_length;
        let mut j = DMatrix::<f64>::zeros(2, n);
        for (col, &t) in self.angles.iter().enumerate() {
            j[(0, col)] = -ell * t.sin();
            j[(1, col)] = ell * t.cos();
        }
        j
    }
}

/// Small-oscillation frequencies of the chain about its equilibrium:
/// ascending, at most `n_modes` of them.
pub fn linearized_frequencies(chain: &DiscreteChain, n_modes: usize) -> Result<Vec<f64>> {
    if chain.angles.iter().any(|t| t.cos() <= 0.0) {
        return Err(Error::IndefiniteHessian);
    }
    let n = chain.n_links;
    let k_diag = chain.hessian_diagonal();
    let a = chain.kinetic_metric();
    let jac = chain.closure_jacobian();
    let z = nullspace_of_rows(&jac).ok_or(Error::IndefiniteHessian)?;

    let k_full = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(k_diag));
    let k_red = z.transpose() * &k_full * &z;
    let a_red = z.transpose() * &a * &z;
    let (omega_sq, _) = sym_definite_eig(&k_red, &a_red)?;
    if omega_sq.first().copied().unwrap_or(1.0) <= 0.0 {
        return Err(Error::IndefiniteHessian);
    }
    Ok(omega_sq
        .iter()
        .take(n_modes.min(n.saturating_sub(2)))
        .map(|w2| w2.sqrt())
        .collect())
}
