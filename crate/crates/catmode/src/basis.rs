//! Trial functions for the vertical displacement.
//!
//! A [`TrialBasis`] is a finite family of functions on `[0, b]` that
//! vanish at both supports, so the essential boundary conditions
//! `v(0) = v(b) = 0` hold for every expansion. Two families are
//! provided: the Fourier sine family `sin(kπx/b)`, and arbitrary
//! sampled functions interpolated by natural cubic splines — the
//! latter is what lets computed mode shapes be fed back in as a basis.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Endpoint tolerance for sampled functions.
const ENDPOINT_TOL: f64 = 1e-9;

/// A single trial function with its derivative.
pub trait TrialFunction: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// A family of trial functions sharing one span. Cheap to clone.
#[derive(Clone)]
pub struct TrialBasis {
    span: f64,
    functions: Vec<Arc<dyn TrialFunction>>,
}

impl std::fmt::Debug for TrialBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TrialBasis")
            .field("span", &self.span)
            .field("size", &self.functions.len())
            .finish()
    }
}

impl TrialBasis {
    /// The sine family φ_k(x) = sin(kπx/b), k = 1..=n.
    pub fn fourier_sine(span: f64, n: usize) -> Result<Self> {
        if !(span > 0.0) {
            return Err(Error::InvalidGeometry(format!("span = {span} must be > 0")));
        }
        if n == 0 {
            return Err(Error::InvalidGeometry("basis size must be >= 1".into()));
        }
        let functions = (1..=n)
            .map(|k| Arc::new(SineMode { span, k }) as Arc<dyn TrialFunction>)
            .collect();
        Ok(Self { span, functions })
    }

    /// Build a basis from per-function sample tables `(x, value)`.
    ///
    /// Each table must cover `[0, span]` with ascending abscissae and
    /// vanish at both ends; values are interpolated by a natural cubic
    /// spline and derivatives are taken from the spline.
    pub fn from_samples(span: f64, samples: &[Vec<(f64, f64)>]) -> Result<Self> {
        if !(span > 0.0) {
            return Err(Error::InvalidGeometry(format!("span = {span} must be > 0")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidSamples("no sample tables given".into()));
        }
        let mut functions: Vec<Arc<dyn TrialFunction>> = Vec::with_capacity(samples.len());
        for (index, table) in samples.iter().enumerate() {
            let f = SampledFunction::new(span, table).map_err(|e| match e {
                Error::EndpointViolation { value, .. } => {
                    Error::EndpointViolation { index, value }
                }
                other => other,
            })?;
            functions.push(Arc::new(f));
        }
        Ok(Self { span, functions })
    }

    /// Basis from already-built trial functions.
    pub fn from_functions(span: f64, functions: Vec<Arc<dyn TrialFunction>>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidSamples("no trial functions given".into()));
        }
        Ok(Self { span, functions })
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// φ_k(x) with k zero-based.
    pub fn value(&self, k: usize, x: f64) -> f64 {
        self.functions[k].value(x)
    }

    /// φ_k′(x) with k zero-based.
    pub fn derivative(&self, k: usize, x: f64) -> f64 {
        self.functions[k].derivative(x)
    }

    pub fn function(&self, k: usize) -> &dyn TrialFunction {
        self.functions[k].as_ref()
    }

    /// Basis with the functions reordered by `perm` (a permutation of
    /// 0..len).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.functions.len() {
            return Err(Error::InvalidSamples("permutation length mismatch".into()));
        }
        let functions = perm.iter().map(|&i| self.functions[i].clone()).collect();
        Ok(Self {
            span: self.span,
            functions,
        })
    }
}

/// One member of the sine family.
struct SineMode {
    span: f64,
    k: usize,
}

impl TrialFunction for SineMode {
    fn value(&self, x: f64) -> f64 {
        (self.k as f64 * std::f64::consts::PI * x / self.span).sin()
    }

    fn derivative(&self, x: f64) -> f64 {
        let rate = self.k as f64 * std::f64::consts::PI / self.span;
        rate * (rate * x).cos()
    }
}

/// A sampled function interpolated by a natural cubic spline.
pub struct SampledFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots (natural: zero at both ends).
    y2: Vec<f64>,
}

impl SampledFunction {
    pub fn new(span: f64, samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::InvalidSamples(format!(
                "need at least 4 samples, got {}",
                samples.len()
            )));
        }
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSamples(
                "sample abscissae must be strictly increasing".into(),
            ));
        }
        let n = xs.len();
        if xs[0].abs() > ENDPOINT_TOL * span.max(1.0) || (xs[n - 1] - span).abs() > ENDPOINT_TOL * span.max(1.0)
        {
            return Err(Error::InvalidSamples(format!(
                "samples must cover [0, {span}], got [{}, {}]",
                xs[0],
                xs[n - 1]
            )));
        }
        for &v in &[ys[0], ys[n - 1]] {
            if v.abs() > ENDPOINT_TOL {
                return Err(Error::EndpointViolation { index: 0, value: v });
            }
        }
        let y2 = natural_spline_second_derivatives(&xs, &ys);
        Ok(Self { xs, ys, y2 })
    }

    fn segment(&self, x: f64) -> usize {
        // binary search for the knot interval containing x
        match self
            .xs
            .binary_search_by(|probe| probe.partial_cmp(&x).expect("knots are finite"))
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        }
    }
}

impl TrialFunction for SampledFunction {
    fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let hseg = x1 - x0;
        let a = (x1 - x) / hseg;
        let b = (x - x0) / hseg;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[i + 1]) * hseg * hseg / 6.0
    }

    fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let hseg = x1 - x0;
        let a = (x1 - x) / hseg;
        let b = (x - x0) / hseg;
        (self.ys[i + 1] - self.ys[i]) / hseg
            + ((3.0 * b * b - 1.0) * self.y2[i + 1] - (3.0 * a * a - 1.0) * self.y2[i]) * hseg / 6.0
    }
}

/// Second derivatives of the natural cubic spline through (xs, ys),
/// via the standard symmetric tridiagonal solve.
fn natural_spline_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut y2 = vec![0.0; n];
    let mut u = vec![0.0; n];
    for i in 1..n - 1 {
        let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        let p = sig * y2[i - 1] + 2.0;
        y2[i] = (sig - 1.0) / p;
        let slope_right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        let slope_left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        u[i] = (6.0 * (slope_right - slope_left) / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
    }
    for i in (1..n - 1).rev() {
        y2[i] = y2[i] * y2[i + 1] + u[i];
    }
    y2
}

/// Uniform grid of `n` points covering [0, span], endpoints included.
pub fn linspace(span: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "need at least two grid points");
    (0..n)
        .map(|i| span * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureRule;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn sine_values_at_known_points() {
        let basis = TrialBasis::fourier_sine(0.6, 4).unwrap();
        assert_abs_diff_eq!(basis.value(0, 0.3), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.value(1, 0.3), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.derivative(0, 0.0), PI / 0.6, epsilon = 1e-15);
        for k in 0..4 {
            assert_abs_diff_eq!(basis.value(k, 0.0), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(basis.value(k, 0.6), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sine_gram_matrix_is_diagonal() {
        let b = 0.6;
        let basis = TrialBasis::fourier_sine(b, 6).unwrap();
        let rule = QuadratureRule::default();
        for j in 0..6 {
            for k in 0..6 {
                let g = rule
                    .integrate(0.0, b, |x| basis.value(j, x) * basis.value(k, x))
                    .unwrap();
                let expect = if j == k { b / 2.0 } else { 0.0 };
                assert_abs_diff_eq!(g, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sampled_sine_interpolates_closely() {
        let b = 0.6;
        let table: Vec<(f64, f64)> = linspace(b, 200)
            .into_iter()
            .map(|x| (x, (PI * x / b).sin()))
            .collect();
        let f = SampledFunction::new(b, &table).unwrap();
        let mut max_val_err: f64 = 0.0;
        let mut max_der_err: f64 = 0.0;
        for i in 0..=1000 {
            let x = b * i as f64 / 1000.0;
            max_val_err = max_val_err.max((f.value(x) - (PI * x / b).sin()).abs());
            max_der_err =
                max_der_err.max((f.derivative(x) - (PI / b) * (PI * x / b).cos()).abs());
        }
        assert!(max_val_err < 1e-8, "value error {max_val_err}");
        assert!(max_der_err < 1e-5, "derivative error {max_der_err}");
    }

    #[test]
    fn endpoint_violation_is_rejected() {
        let b = 0.6;
        let table: Vec<(f64, f64)> = linspace(b, 100)
            .into_iter()
            .map(|x| (x, (PI * x / (2.0 * b)).sin())) // nonzero at x = b
            .collect();
        let err = TrialBasis::from_samples(b, &[table]).unwrap_err();
        match err {
            Error::EndpointViolation { .. } => {}
            other => panic!("expected EndpointViolation, got {other:?}"),
        }
    }

    #[test]
    fn malformed_samples_are_rejected() {
        let b = 0.6;
        // too few points
        assert!(SampledFunction::new(b, &[(0.0, 0.0), (b, 0.0)]).is_err());
        // not ascending
        assert!(SampledFunction::new(
            b,
            &[(0.0, 0.0), (0.4, 0.1), (0.2, 0.1), (b, 0.0)]
        )
        .is_err());
        // does not reach the right support
        let short: Vec<(f64, f64)> = linspace(b / 2.0, 50).into_iter().map(|x| (x, 0.0)).collect();
        assert!(SampledFunction::new(b, &short).is_err());
    }

    #[test]
    fn permuted_basis_reorders_functions() {
        let basis = TrialBasis::fourier_sine(0.6, 3).unwrap();
        let perm = basis.permuted(&[2, 0, 1]).unwrap();
        assert_abs_diff_eq!(perm.value(0, 0.25), basis.value(2, 0.25), epsilon = 0.0);
        assert_abs_diff_eq!(perm.value(1, 0.25), basis.value(0, 0.25), epsilon = 0.0);
    }
}
