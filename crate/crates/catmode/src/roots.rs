//! Bracketed scalar root finding: bisection alternated with secant
//! steps, so the bracket provably halves every other iteration while
//! still converging superlinearly on smooth stretches.

use crate::error::{Error, Result};

pub(crate) const MAX_ITER: usize = 200;

/// Find the root of a continuous `f` inside `[lo, hi]`, where
/// `f(lo)` and `f(hi)` have opposite signs. Converges when the bracket
/// width falls below `tol` relative to the root's magnitude (with an
/// absolute floor of `tol` itself).
pub(crate) fn bracketed_root<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    context: &'static str,
) -> Result<f64> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoConvergence {
            context,
            iterations: 0,
        });
    }
    for i in 0..MAX_ITER {
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        let x = if i % 2 == 1 && secant.is_finite() && secant > lo && secant < hi {
            secant
        } else {
            0.5 * (lo + hi)
        };
        if x <= lo || x >= hi {
            // bracket has collapsed to machine resolution
            return Ok(0.5 * (lo + hi));
        }
        let fx = f(x);
        if fx == 0.0 || (hi - lo).abs() <= tol * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Err(Error::NoConvergence {
        context,
        iterations: MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14, "sqrt2").unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn survives_infinite_endpoint_values() {
        // steep function: secant proposals get clipped to bisection
        let r = bracketed_root(
            |x| if x < 0.1 { -f64::MAX } else { x - 0.5 },
            0.0,
            1.0,
            1e-13,
            "steep",
        )
        .unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn same_sign_bracket_is_an_error() {
        assert!(bracketed_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, "nosign").is_err());
    }
}
