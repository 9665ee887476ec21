//! Assembly of the constrained Lagrangian data.
//!
//! With the vertical displacement expanded as `v = Σ aₖ φₖ`, pointwise
//! inextensibility ties the horizontal displacement to `v`. To first
//! order `uₓ = −y′vₓ`, so each trial function induces
//!
//! ```text
//! U_j(x) = −∫₀ˣ y′ φ_j′ dξ = −y′(x) φ_j(x) + (1/W) ∫₀ˣ sec θ · φ_j dξ,
//! ```
//!
//! where the second form follows from integration by parts with
//! `φ_j(0) = 0` and `y″ = sec θ / W`, and avoids quadrature of a
//! derivative-bearing integrand. The assembled pieces are
//!
//! ```text
//! M_jk = m̄ ∫ (U_j U_k + φ_j φ_k) sec θ dx      kinetic metric
//! p_j  = m̄ g ∫ φ_j sec θ dx                    gravity gradient
//! q_j  = −∫ y′ φ_j′ dx                         constraint, 1st order
//! B_jk = −∫ (1 + y′²) φ_j′ φ_k′ dx             constraint, 2nd order
//! ```
//!
//! so the distal fixity reads `u(b) = aᵀq + ½ aᵀB a + ⋯ = 0`. The
//! gravity gradient is parallel to `q` (both reduce to the same
//! integral of `sec θ · φ` by parts), which pins the equilibrium
//! multiplier to `λ₀ = p·q / q·q = m̄ g W`. When the basis already
//! satisfies the constraint at first order, `q` and `p` vanish
//! together and λ₀ becomes indeterminate; that state is recorded
//! rather than guessed.

use nalgebra::{DMatrix, DVector};

use crate::basis::TrialBasis;
use crate::equilibrium::EquilibriumShape;
use crate::error::{Error, Result};
use crate::linalg::frobenius;
use crate::quadrature::QuadratureRule;

/// The equilibrium Lagrange multiplier, or the marker that the basis
/// left it undetermined at first order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    Determinate(f64),
    Indeterminate,
}

impl Multiplier {
    pub fn value(&self) -> Option<f64> {
        match self {
            Multiplier::Determinate(v) => Some(*v),
            Multiplier::Indeterminate => None,
        }
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Multiplier::Indeterminate)
    }
}

/// Matrices, vectors, and multiplier for one shape + basis pair.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    shape: EquilibriumShape,
    basis: TrialBasis,
    rule: QuadratureRule,
    /// Kinetic metric M (symmetric positive definite).
    pub mass: DMatrix<f64>,
    /// Second-order constraint matrix B (symmetric, negative definite
    /// for any basis with independent derivatives).
    pub constraint_matrix: DMatrix<f64>,
    /// Gravity gradient p.
    pub gravity: DVector<f64>,
    /// First-order constraint vector q.
    pub constraint_vector: DVector<f64>,
    /// λ₀ from p = λ₀ q, or indeterminate when ‖q‖ is at quadrature
    /// roundoff scale.
    pub lambda0: Multiplier,
    /// ‖p − λ₀q‖ / ‖p‖ when determinate.
    pub parallelism_residual: Option<f64>,
}

/// Assemble M, B, p, q, and λ₀ on the quadrature node grid.
pub fn assemble(
    shape: &EquilibriumShape,
    basis: &TrialBasis,
    rule: &QuadratureRule,
) -> Result<AssembledSystem> {
    let b = shape.geometry().b;
    if (basis.span() - b).abs() > 1e-12 * b.max(1.0) {
        return Err(Error::SpanMismatch {
            shape_span: b,
            basis_span: basis.span(),
        });
    }
    let n = basis.len();
    let m_bar = shape.geometry().m_bar;
    let g = shape.geometry().g;
    let w = shape.w();

    let nodes = rule.mapped_nodes(0.0, b);
    let node_count = nodes.len();
    let xs: Vec<f64> = nodes.iter().map(|nw| nw.0).collect();
    let ws: Vec<f64> = nodes.iter().map(|nw| nw.1).collect();
    let y_prime: Vec<f64> = xs.iter().map(|&x| shape.y_prime(x)).collect();
    let sec: Vec<f64> = xs.iter().map(|&x| shape.sec_theta(x)).collect();

    // basis values and derivatives on the node grid
    let mut phi = DMatrix::<f64>::zeros(n, node_count);
    let mut dphi = DMatrix::<f64>::zeros(n, node_count);
    for j in 0..n {
        for (gidx, &x) in xs.iter().enumerate() {
            let v = basis.value(j, x);
            let d = basis.derivative(j, x);
            if !v.is_finite() || !d.is_finite() {
                return Err(Error::NonFinite { x });
            }
            phi[(j, gidx)] = v;
            dphi[(j, gidx)] = d;
        }
    }

    // induced horizontal fields U_j at the nodes, by-parts form
    let mut u_field = DMatrix::<f64>::zeros(n, node_count);
    for j in 0..n {
        let cum = rule.cumulative_integrate(0.0, &xs, |x| shape.sec_theta(x) * basis.value(j, x))?;
        for gidx in 0..node_count {
            u_field[(j, gidx)] = -y_prime[gidx] * phi[(j, gidx)] + cum[gidx] / w;
        }
    }

    let mut mass = DMatrix::<f64>::zeros(n, n);
    let mut constraint_matrix = DMatrix::<f64>::zeros(n, n);
    let mut gravity = DVector::<f64>::zeros(n);
    let mut constraint_vector = DVector::<f64>::zeros(n);
    for j in 0..n {
        let mut pj = 0.0;
        let mut qj = 0.0;
        for gidx in 0..node_count {
            pj += ws[gidx] * phi[(j, gidx)] * sec[gidx];
            qj -= ws[gidx] * y_prime[gidx] * dphi[(j, gidx)];
        }
        gravity[j] = m_bar * g * pj;
        constraint_vector[j] = qj;
        for k in j..n {
            let mut mjk = 0.0;
            let mut bjk = 0.0;
            for gidx in 0..node_count {
                let wgt = ws[gidx];
                mjk += wgt
                    * (u_field[(j, gidx)] * u_field[(k, gidx)] + phi[(j, gidx)] * phi[(k, gidx)])
                    * sec[gidx];
                bjk -= wgt
                    * (1.0 + y_prime[gidx] * y_prime[gidx])
                    * dphi[(j, gidx)]
                    * dphi[(k, gidx)];
            }
            mass[(j, k)] = m_bar * mjk;
            mass[(k, j)] = m_bar * mjk;
            constraint_matrix[(j, k)] = bjk;
            constraint_matrix[(k, j)] = bjk;
        }
    }

    // M must be symmetric positive definite; failure means the trial
    // functions are linearly dependent on the node grid.
    if mass.clone().cholesky().is_none() {
        return Err(Error::SingularMass);
    }

    let q_norm = constraint_vector.norm();
    let threshold = degeneracy_threshold(&constraint_matrix);
    let (lambda0, parallelism_residual) = if q_norm < threshold {
        (Multiplier::Indeterminate, None)
    } else {
        let l0 = gravity.dot(&constraint_vector) / constraint_vector.dot(&constraint_vector);
        let p_norm = gravity.norm();
        let residual = (&gravity - l0 * &constraint_vector).norm() / p_norm;
        (Multiplier::Determinate(l0), Some(residual))
    };

    Ok(AssembledSystem {
        shape: *shape,
        basis: basis.clone(),
        rule: rule.clone(),
        mass,
        constraint_matrix,
        gravity,
        constraint_vector,
        lambda0,
        parallelism_residual,
    })
}

/// Default degeneracy threshold: quadrature-roundoff scale, far below
/// any generic basis's ‖q‖.
pub fn degeneracy_threshold(constraint_matrix: &DMatrix<f64>) -> f64 {
    1e-6 * frobenius(constraint_matrix).max(1.0)
}

/// True when ‖q‖ falls below `threshold`, i.e. every basis function
/// already satisfies the end-fixity constraint at first order and the
/// multiplier cannot be determined from the linear equations.
pub fn detect_degeneracy(system: &AssembledSystem, threshold: f64) -> bool {
    system.constraint_vector.norm() < threshold
}

impl AssembledSystem {
    pub fn shape(&self) -> &EquilibriumShape {
        &self.shape
    }

    pub fn basis(&self) -> &TrialBasis {
        &self.basis
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Degeneracy at the default threshold.
    pub fn is_degenerate(&self) -> bool {
        detect_degeneracy(self, degeneracy_threshold(&self.constraint_matrix))
    }

    /// First-order horizontal displacement Σ aⱼ U_j(x) induced by the
    /// coefficient vector `a`. Zero at x = 0 by construction.
    pub fn first_order_u(&self, a: &DVector<f64>, x: f64) -> Result<f64> {
        let b = self.shape.geometry().b;
        if !(0.0..=b).contains(&x) {
            return Err(Error::OutOfDomain { x, span: b });
        }
        let v_at = |t: f64| (0..self.basis.len()).map(|j| a[j] * self.basis.value(j, t)).sum::<f64>();
        let running = self
            .rule
            .cumulative_integrate(0.0, &[x], |t| self.shape.sec_theta(t) * v_at(t))?[0];
        Ok(-self.shape.y_prime(x) * v_at(x) + running / self.shape.w())
    }

    /// Constraint residual through second order: aᵀq + ½ aᵀB a.
    pub fn quadratic_constraint_residual(&self, a: &DVector<f64>) -> f64 {
        a.dot(&self.constraint_vector) + 0.5 * (a.transpose() * &self.constraint_matrix * a)[0]
    }
}

/// Full nonlinear end displacement
/// `u(b) = ∫₀ᵇ (sqrt(1 − 2y′vₓ − vₓ²) − 1) dx` for `v = Σ aₖφₖ`.
///
/// The square-root sign makes `u` infinitesimal with `v`; the radicand
/// must stay positive for the displacement to remain kinematically
/// admissible.
pub fn exact_constraint_residual(
    shape: &EquilibriumShape,
    basis: &TrialBasis,
    a: &DVector<f64>,
    rule: &QuadratureRule,
) -> Result<f64> {
    let b = shape.geometry().b;
    let vx = |x: f64| {
        (0..basis.len())
            .map(|j| a[j] * basis.derivative(j, x))
            .sum::<f64>()
    };
    // reject inadmissible amplitudes with a dedicated error instead of
    // letting NaN flow out of the square root
    for (x, _) in rule.mapped_nodes(0.0, b) {
        let vx_val = vx(x);
        let radicand = 1.0 - 2.0 * shape.y_prime(x) * vx_val - vx_val * vx_val;
        if radicand <= 0.0 {
            return Err(Error::AmplitudeTooLarge { x });
        }
    }
    rule.integrate(0.0, b, |x| {
        let vx_val = vx(x);
        (1.0 - 2.0 * shape.y_prime(x) * vx_val - vx_val * vx_val).sqrt() - 1.0
    })
}

/// Max relative change of any assembled quantity when the panel count
/// doubles; the convergence diagnostic for the quadrature choice.
pub fn panel_doubling_change(
    shape: &EquilibriumShape,
    basis: &TrialBasis,
    rule: &QuadratureRule,
) -> Result<f64> {
    let coarse = assemble(shape, basis, rule)?;
    let fine = assemble(shape, basis, &rule.doubled())?;
    let mut max_rel: f64 = 0.0;
    let scale_m = frobenius(&coarse.mass);
    let scale_b = frobenius(&coarse.constraint_matrix);
    let scale_p = coarse.gravity.norm();
    let scale_q = coarse.constraint_vector.norm().max(scale_b * 1e-12);
    for (c, f) in coarse.mass.iter().zip(fine.mass.iter()) {
        max_rel = max_rel.max((c - f).abs() / scale_m);
    }
    for (c, f) in coarse
        .constraint_matrix
        .iter()
        .zip(fine.constraint_matrix.iter())
    {
        max_rel = max_rel.max((c - f).abs() / scale_b);
    }
    for (c, f) in coarse.gravity.iter().zip(fine.gravity.iter()) {
        max_rel = max_rel.max((c - f).abs() / scale_p);
    }
    for (c, f) in coarse
        .constraint_vector
        .iter()
        .zip(fine.constraint_vector.iter())
    {
        max_rel = max_rel.max((c - f).abs() / scale_q);
    }
    if let (Multiplier::Determinate(c), Multiplier::Determinate(f)) = (coarse.lambda0, fine.lambda0)
    {
        max_rel = max_rel.max((c - f).abs() / c.abs());
    }
    Ok(max_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::SpanGeometry;
    use approx::assert_abs_diff_eq;

    fn system(h: f64, n: usize) -> AssembledSystem {
        let shape = EquilibriumShape::solve(SpanGeometry::new(0.6, h).unwrap()).unwrap();
        let basis = TrialBasis::fourier_sine(0.6, n).unwrap();
        assemble(&shape, &basis, &QuadratureRule::default()).unwrap()
    }

    // Printed reference values for the two spans (4 significant
    // decimals), plus the multiplier to 7.
    #[test]
    fn symmetric_case_matches_reference_tables() {
        let sys = system(0.0, 4);
        let m_ref = [
            [3.4764, 2.5342, 1.6515, 2.2369],
            [2.5342, 3.3974, 1.7375, 2.4056],
            [1.6515, 1.7375, 2.3715, 1.5337],
            [2.2369, 2.4056, 1.5337, 3.1275],
        ];
        let b_ref = [
            [-38.9759, 0.0, -55.2220, 0.0],
            [0.0, -127.3652, 0.0, -125.5176],
            [-55.2220, 0.0, -262.1130, 0.0],
            [0.0, -125.5176, 0.0, -447.1589],
        ];
        let p_ref = [0.5195, 0.0, 0.3562, 0.0];
        let q_ref = [3.1838, 0.0, 2.1830, 0.0];
        for j in 0..4 {
            assert_abs_diff_eq!(sys.gravity[j], p_ref[j], epsilon = 5e-5);
            assert_abs_diff_eq!(sys.constraint_vector[j], q_ref[j], epsilon = 5e-5);
            for k in 0..4 {
                assert_abs_diff_eq!(sys.mass[(j, k)], m_ref[j][k], epsilon = 5e-5);
                assert_abs_diff_eq!(sys.constraint_matrix[(j, k)], b_ref[j][k], epsilon = 5e-5);
            }
        }
        assert_abs_diff_eq!(sys.lambda0.value().unwrap(), 0.1631682, epsilon = 5e-7);
    }

    #[test]
    fn offset_case_matches_reference_tables() {
        let sys = system(0.1, 4);
        assert_abs_diff_eq!(sys.constraint_matrix[(0, 1)], 10.7499, epsilon = 5e-5);
        let q_ref = [3.1725, -0.2650, 2.1648, -0.1636];
        for j in 0..4 {
            assert_abs_diff_eq!(sys.constraint_vector[j], q_ref[j], epsilon = 5e-5);
        }
        assert_abs_diff_eq!(sys.lambda0.value().unwrap(), 0.1640525, epsilon = 5e-7);
    }

    #[test]
    fn multiplier_equals_tension_parameter() {
        for h in [0.0, 0.1, 0.35] {
            let sys = system(h, 5);
            let w = sys.shape().w();
            let l0 = sys.lambda0.value().unwrap();
            assert!(
                (l0 - w).abs() <= 1e-8 * w,
                "lambda0 {l0} vs m̄gW {w} at h={h}"
            );
            assert!(sys.parallelism_residual.unwrap() < 1e-8);
        }
    }

    #[test]
    fn by_parts_identity_holds_per_function() {
        // −∫ y′φ′ = (1/W) ∫ sec θ φ for every φ vanishing at both ends
        let sys = system(0.1, 6);
        let shape = sys.shape();
        let rule = QuadratureRule::default();
        for j in 0..6 {
            let lhs = rule
                .integrate(0.0, 0.6, |x| -shape.y_prime(x) * sys.basis().derivative(j, x))
                .unwrap();
            let rhs = rule
                .integrate(0.0, 0.6, |x| shape.sec_theta(x) * sys.basis().value(j, x))
                .unwrap()
                / shape.w();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn symmetric_case_zero_pattern() {
        let sys = system(0.0, 4);
        // p and q vanish on the antisymmetric (even-k) sines, and B
        // decouples the two symmetry classes; M stays full because the
        // induced u fields are anchored at the left support
        for j in [1usize, 3] {
            assert_abs_diff_eq!(sys.gravity[j], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sys.constraint_vector[j], 0.0, epsilon = 1e-12);
        }
        for j in 0..4 {
            for k in 0..4 {
                if (j + k) % 2 == 1 {
                    assert_abs_diff_eq!(sys.constraint_matrix[(j, k)], 0.0, epsilon = 1e-10);
                }
            }
        }
        assert!(sys.mass[(0, 1)].abs() > 1.0);
    }

    #[test]
    fn first_order_u_basics() {
        let sys = system(0.0, 4);
        let zero = DVector::zeros(4);
        assert_abs_diff_eq!(sys.first_order_u(&zero, 0.3).unwrap(), 0.0, epsilon = 0.0);
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(sys.first_order_u(&e1, 0.0).unwrap(), 0.0, epsilon = 1e-14);
        // u(b) for a unit coefficient equals the q entry
        assert_abs_diff_eq!(
            sys.first_order_u(&e1, 0.6).unwrap(),
            sys.constraint_vector[0],
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(sys.first_order_u(&e1, 0.6).unwrap(), 3.1838, epsilon = 5e-5);
        assert!(sys.first_order_u(&e1, 0.7).is_err());
    }

    #[test]
    fn quadratic_residual_formula() {
        let sys = system(0.1, 4);
        let zero = DVector::zeros(4);
        assert_abs_diff_eq!(sys.quadratic_constraint_residual(&zero), 0.0, epsilon = 0.0);
        let a = DVector::from_vec(vec![0.01, -0.02, 0.005, 0.003]);
        let direct = a.dot(&sys.constraint_vector)
            + 0.5 * (a.transpose() * &sys.constraint_matrix * &a)[0];
        assert_abs_diff_eq!(sys.quadratic_constraint_residual(&a), direct, epsilon = 1e-15);
    }

    #[test]
    fn exact_residual_agrees_with_quadratic_to_third_order() {
        let sys = system(0.0, 4);
        let rule = QuadratureRule::default();
        let dir = DVector::from_vec(vec![0.7, -0.4, 0.5, 0.2]);
        let mut prev_ratio: Option<f64> = None;
        for scale in [1e-2, 1e-3, 1e-4] {
            let a = &dir * scale;
            let exact =
                exact_constraint_residual(sys.shape(), sys.basis(), &a, &rule).unwrap();
            let quad = sys.quadratic_constraint_residual(&a);
            let ratio = (exact - quad).abs() / scale.powi(3);
            // O(‖a‖³): the normalized gap stays bounded as the
            // amplitude shrinks by two decades
            if let Some(prev) = prev_ratio {
                assert!(ratio < 10.0 * prev.max(1e-6), "ratio {ratio} blew up");
            }
            prev_ratio = Some(ratio);
        }
    }

    #[test]
    fn exact_residual_small_amplitude_tracks_q() {
        let sys = system(0.0, 4);
        let rule = QuadratureRule::default();
        let a = DVector::from_vec(vec![1e-4, 0.0, 0.0, 0.0]);
        let exact = exact_constraint_residual(sys.shape(), sys.basis(), &a, &rule).unwrap();
        // dominated by a·q₁; the remaining gap is the second-order
        // term ½a²B₁₁ ≈ −1.9e-7
        assert_abs_diff_eq!(exact, 1e-4 * 3.1838, epsilon = 2.5e-7);
        let second_order = 1e-4 * sys.constraint_vector[0]
            + 0.5 * 1e-8 * sys.constraint_matrix[(0, 0)];
        assert_abs_diff_eq!(exact, second_order, epsilon = 1e-9);
    }

    #[test]
    fn amplitude_too_large_is_reported() {
        let sys = system(0.0, 4);
        let rule = QuadratureRule::default();
        let a = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]); // slope order 5, far too big
        match exact_constraint_residual(sys.shape(), sys.basis(), &a, &rule) {
            Err(Error::AmplitudeTooLarge { .. }) => {}
            other => panic!("expected AmplitudeTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_zero_function_is_rejected_by_mass_check() {
        let shape = EquilibriumShape::solve(SpanGeometry::new(0.6, 0.0).unwrap()).unwrap();
        let zeros: Vec<(f64, f64)> = crate::basis::linspace(0.6, 50)
            .into_iter()
            .map(|x| (x, 0.0))
            .collect();
        let sine: Vec<(f64, f64)> = crate::basis::linspace(0.6, 400)
            .into_iter()
            .map(|x| (x, (std::f64::consts::PI * x / 0.6).sin()))
            .collect();
        let basis = TrialBasis::from_samples(0.6, &[sine, zeros]).unwrap();
        match assemble(&shape, &basis, &QuadratureRule::default()) {
            Err(Error::SingularMass) => {}
            other => panic!("expected SingularMass, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn single_sine_is_not_degenerate() {
        let sys = system(0.0, 1);
        assert!(!sys.is_degenerate());
        assert!(sys.lambda0.value().is_some());
    }

    #[test]
    fn relabeling_permutes_entries() {
        let sys = system(0.1, 4);
        let perm = [2usize, 0, 3, 1];
        let permuted_basis = sys.basis().permuted(&perm).unwrap();
        let sys_p = assemble(sys.shape(), &permuted_basis, &QuadratureRule::default()).unwrap();
        for j in 0..4 {
            assert_abs_diff_eq!(
                sys_p.constraint_vector[j],
                sys.constraint_vector[perm[j]],
                epsilon = 1e-14
            );
            for k in 0..4 {
                let m_ref = sys.mass[(perm[j], perm[k])];
                assert_abs_diff_eq!(
                    sys_p.mass[(j, k)],
                    m_ref,
                    epsilon = 1e-13 * m_ref.abs().max(1.0)
                );
                let b_ref = sys.constraint_matrix[(perm[j], perm[k])];
                assert_abs_diff_eq!(
                    sys_p.constraint_matrix[(j, k)],
                    b_ref,
                    epsilon = 1e-13 * b_ref.abs().max(1.0)
                );
            }
        }
    }

    #[test]
    fn constraint_matrix_is_negative_definite_for_sines() {
        let sys = system(0.1, 5);
        let neg = -sys.constraint_matrix.clone();
        assert!(neg.cholesky().is_some(), "B must be negative definite");
    }

    #[test]
    fn gravity_entries_nonnegative_for_nonnegative_functions() {
        // first sine mode is ≥ 0 on the whole span
        let sys = system(0.1, 1);
        assert!(sys.gravity[0] > 0.0);
    }

    #[test]
    fn panel_doubling_is_quiet() {
        let shape = EquilibriumShape::solve(SpanGeometry::new(0.6, 0.1).unwrap()).unwrap();
        let basis = TrialBasis::fourier_sine(0.6, 4).unwrap();
        let change = panel_doubling_change(&shape, &basis, &QuadratureRule::default()).unwrap();
        assert!(change < 1e-10, "panel doubling moved results by {change}");
    }
}
