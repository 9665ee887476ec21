//! Composite Gauss–Legendre quadrature for smooth integrands.
//!
//! Every energy and constraint integral in this crate involves products
//! of trigonometric and hyperbolic functions, i.e. entire functions, so
//! a fixed composite Gauss–Legendre rule converges spectrally. The
//! default of 16 panels with 10 nodes each resolves sine trial
//! functions up to index k = 16 to machine precision.

use crate::error::{Error, Result};

/// Default number of equal panels over the span.
pub const DEFAULT_PANELS: usize = 16;
/// Default Gauss–Legendre order per panel.
pub const DEFAULT_NODES_PER_PANEL: usize = 10;

/// A composite Gauss–Legendre rule: `panel_count` equal panels, each
/// carrying a `nodes_per_panel`-point Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    panel_count: usize,
    nodes_per_panel: usize,
    /// Reference nodes on (-1, 1), ascending.
    ref_nodes: Vec<f64>,
    /// Reference weights, summing to 2.
    ref_weights: Vec<f64>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(DEFAULT_PANELS, DEFAULT_NODES_PER_PANEL).expect("default rule is valid")
    }
}

impl QuadratureRule {
    pub fn new(panel_count: usize, nodes_per_panel: usize) -> Result<Self> {
        if panel_count == 0 {
            return Err(Error::InvalidRule("panel_count must be positive".into()));
        }
        if nodes_per_panel == 0 {
            return Err(Error::InvalidRule(
                "nodes_per_panel must be positive".into(),
            ));
        }
        let (ref_nodes, ref_weights) = legendre_nodes(nodes_per_panel);
        Ok(Self {
            panel_count,
            nodes_per_panel,
            ref_nodes,
            ref_weights,
        })
    }

    pub fn panel_count(&self) -> usize {
        self.panel_count
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    /// Same reference rule with twice the panels; used as a convergence
    /// guard by the assembly layer.
    pub fn doubled(&self) -> Self {
        Self::new(2 * self.panel_count, self.nodes_per_panel).expect("doubling keeps rule valid")
    }

    /// All mapped (node, weight) pairs on [a, b], ascending in x.
    /// The nodes lie strictly inside the interval.
    pub fn mapped_nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.panel_count * self.nodes_per_panel);
        let width = (b - a) / self.panel_count as f64;
        for panel in 0..self.panel_count {
            let lo = a + panel as f64 * width;
            let mid = lo + 0.5 * width;
            let half = 0.5 * width;
            for (&t, &w) in self.ref_nodes.iter().zip(&self.ref_weights) {
                out.push((mid + half * t, half * w));
            }
        }
        out
    }

    /// ∫ₐᵇ f(x) dx by the composite rule. Exact to roundoff for
    /// polynomials of degree ≤ 2·nodes_per_panel − 1 on each panel.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (x, w) in self.mapped_nodes(a, b) {
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFinite { x });
            }
            sum += w * fx;
        }
        Ok(sum)
    }

    /// Running integrals ∫_start^{grid[i]} f(x) dx for an ascending grid.
    ///
    /// Each consecutive segment is integrated with a single
    /// Gauss–Legendre panel, which is ample for smooth integrands on
    /// the short segments that arise here, and the segments are
    /// accumulated left to right.
    pub fn cumulative_integrate<F: Fn(f64) -> f64>(
        &self,
        start: f64,
        grid: &[f64],
        f: F,
    ) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        let mut prev = start;
        for &x in grid {
            if x < prev {
                return Err(Error::InvalidSamples(format!(
                    "cumulative grid must ascend from {start}, got {x} after {prev}"
                )));
            }
            acc += self.segment(prev, x, &f)?;
            out.push(acc);
            prev = x;
        }
        Ok(out)
    }

    /// One Gauss–Legendre panel over [lo, hi].
    fn segment<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: &F) -> Result<f64> {
        if hi == lo {
            return Ok(0.0);
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut sum = 0.0;
        for (&t, &w) in self.ref_nodes.iter().zip(&self.ref_weights) {
            let x = mid + half * t;
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFinite { x });
            }
            sum += w * fx;
        }
        Ok(half * sum)
    }
}

/// Nodes and weights of the n-point Gauss–Legendre rule on (-1, 1),
/// by Newton iteration on the Legendre polynomial Pₙ.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on Pn.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (p2, d2) = legendre_eval(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // Interior midpoint is exactly zero by symmetry.
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_eval(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Pₙ(x) and Pₙ′(x) by the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_nodes_match_reference_five_point() {
        let (x, w) = legendre_nodes(5);
        let x_ref = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let w_ref = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert_abs_diff_eq!(x[i], x_ref[i], epsilon = 1e-15);
            assert_abs_diff_eq!(w[i], w_ref[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn polynomial_exactness() {
        let rule = QuadratureRule::new(1, 3).unwrap();
        // degree 5 is the limit for a 3-point rule
        let val = rule.integrate(0.0, 1.0, |x| x.powi(5)).unwrap();
        assert_abs_diff_eq!(val, 1.0 / 6.0, epsilon = 1e-15);
        let val = rule.integrate(0.0, 1.0, |x| x * x).unwrap();
        assert_abs_diff_eq!(val, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn sine_orthogonality_on_span() {
        let rule = QuadratureRule::default();
        let b = 0.6;
        let val = rule
            .integrate(0.0, b, |x| {
                (std::f64::consts::PI * x / b).sin() * (2.0 * std::f64::consts::PI * x / b).sin()
            })
            .unwrap();
        assert_abs_diff_eq!(val, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cumulative_of_constant_is_identity() {
        let rule = QuadratureRule::default();
        let b = 0.6;
        let grid = [0.0, b / 2.0, b];
        let vals = rule.cumulative_integrate(0.0, &grid, |_| 1.0).unwrap();
        assert_abs_diff_eq!(vals[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(vals[1], b / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(vals[2], b, epsilon = 1e-15);
    }

    #[test]
    fn cumulative_matches_prefix_integrals() {
        let rule = QuadratureRule::default();
        let f = |x: f64| (3.0 * x).cosh() * (2.0 * x).sin();
        let grid: Vec<f64> = (0..=40).map(|i| 0.6 * i as f64 / 40.0).collect();
        let cums = rule.cumulative_integrate(0.0, &grid, f).unwrap();
        for (i, &g) in grid.iter().enumerate().step_by(8) {
            let direct = rule.integrate(0.0, g, f).unwrap();
            assert_abs_diff_eq!(cums[i], direct, epsilon = 1e-13);
        }
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let rule = QuadratureRule::default();
        let err = rule.integrate(0.0, 1.0, |x| (x - 0.5).ln()).unwrap_err();
        match err {
            Error::NonFinite { .. } => {}
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn zero_sized_rules_are_rejected() {
        assert!(QuadratureRule::new(0, 10).is_err());
        assert!(QuadratureRule::new(16, 0).is_err());
    }

    #[test]
    fn nodes_stay_strictly_inside() {
        let rule = QuadratureRule::new(4, 7).unwrap();
        for (x, w) in rule.mapped_nodes(0.0, 0.6) {
            assert!(x > 0.0 && x < 0.6);
            assert!(w > 0.0);
        }
    }
}
