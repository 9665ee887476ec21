//! Static shape of the hanging chain.
//!
//! A uniform inextensible chain of length `L` hangs between the origin
//! and `(b, h)` under gravity. Its shape is the hyperbolic cosine
//!
//! ```text
//! y(x) = -W cosh(C) + W cosh(C + x/W),      W = T0 / (m̄ g),
//! ```
//!
//! with `W` the horizontal tension parameter and `C` an integration
//! constant. Both follow from the end condition `y(b) = h` and the
//! length condition `∫ sec θ dx = L`, which collapse to the closed
//! identities
//!
//! ```text
//! 2 W sinh(b / 2W) = sqrt(L² - h²),    C = atanh(h/L) - b / 2W,
//! ```
//!
//! so the whole solve is a single bracketed 1-D root find in `W`. The
//! left side decreases monotonically from ∞ to `b` as `W` grows, so a
//! unique root exists exactly when the chord is shorter than the chain.

use crate::error::{Error, Result};

/// Default relative tolerance on the tension parameter `W`.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 200;

/// Span, chain length, and physical constants defining one problem.
///
/// Everything in this crate is nondimensional; the usual choice is
/// `L = 1`, `m_bar = 1`, `g = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanGeometry {
    /// Horizontal span between the supports.
    pub b: f64,
    /// Vertical offset of the right support. Negative offsets are
    /// handled by mirroring the span at solve time.
    pub h: f64,
    /// Chain length; must exceed the chord.
    pub length: f64,
    /// Mass per unit length.
    pub m_bar: f64,
    /// Gravitational acceleration.
    pub g: f64,
}

impl SpanGeometry {
    /// Geometry with `L = m̄ = g = 1`.
    pub fn new(b: f64, h: f64) -> Result<Self> {
        Self::with_all(b, h, 1.0, 1.0, 1.0)
    }

    pub fn with_all(b: f64, h: f64, length: f64, m_bar: f64, g: f64) -> Result<Self> {
        let geom = Self {
            b,
            h,
            length,
            m_bar,
            g,
        };
        geom.validate()?;
        Ok(geom)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("b", self.b),
            ("h", self.h),
            ("length", self.length),
            ("m_bar", self.m_bar),
            ("g", self.g),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} = {v} is not finite")));
            }
        }
        if self.b <= 0.0 {
            return Err(Error::InvalidGeometry(format!("b = {} must be > 0", self.b)));
        }
        if self.length <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "length = {} must be > 0",
                self.length
            )));
        }
        if self.m_bar <= 0.0 || self.g <= 0.0 {
            return Err(Error::InvalidGeometry(
                "m_bar and g must be > 0".to_string(),
            ));
        }
        let chord = self.b.hypot(self.h);
        if chord >= self.length {
            return Err(Error::TautOrImpossible {
                chord,
                length: self.length,
            });
        }
        Ok(())
    }

    /// Straight-line distance between the supports.
    pub fn chord(&self) -> f64 {
        self.b.hypot(self.h)
    }
}

/// Shape evaluation record at one point: height, slope, and the
/// arc-length density sec θ = sqrt(1 + y′²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapePoint {
    pub y: f64,
    pub y_prime: f64,
    pub sec_theta: f64,
}

/// The solved catenary. Immutable; all evaluators are pure.
#[derive(Debug, Clone, Copy)]
pub struct EquilibriumShape {
    geometry: SpanGeometry,
    /// Horizontal tension parameter T₀/(m̄g).
    w: f64,
    /// Integration constant for the solved (mirrored if h < 0) span.
    c: f64,
    /// True when the input had h < 0 and the solve ran on the
    /// reflected span; evaluators map back through x → b − x.
    mirrored: bool,
}

/// Solve for `W` and `C` to relative tolerance `tol` on `W`.
///
/// The bracket is found by geometric expansion from `W = b/4` and
/// tightened by bisection with secant acceleration.
pub fn solve_equilibrium(geometry: SpanGeometry, tol: f64) -> Result<EquilibriumShape> {
    geometry.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidGeometry(format!("tol = {tol} must be > 0")));
    }
    let mirrored = geometry.h < 0.0;
    let h = geometry.h.abs();
    let (b, length) = (geometry.b, geometry.length);
    let target = (length * length - h * h).sqrt();

    // f decreases strictly in w; f(0+) = +inf, f(inf) = b - target < 0.
    let f = |w: f64| {
        let arg = b / (2.0 * w);
        if arg > 700.0 {
            f64::MAX
        } else {
            2.0 * w * arg.sinh() - target
        }
    };

    let mut lo = b / 4.0;
    let mut iter = 0usize;
    while f(lo) < 0.0 {
        lo *= 0.5;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::NoConvergence {
                context: "equilibrium bracket (lower)",
                iterations: MAX_ITER,
            });
        }
    }
    let mut hi = lo.max(b / 2.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::NoConvergence {
                context: "equilibrium bracket (upper)",
                iterations: MAX_ITER,
            });
        }
    }

    let w = crate::roots::bracketed_root(f, lo, hi, tol, "equilibrium tension solve")?;

    let c = (h / length).atanh() - b / (2.0 * w);
    Ok(EquilibriumShape {
        geometry,
        w,
        c,
        mirrored,
    })
}

impl EquilibriumShape {
    /// Solve with the default tolerance.
    pub fn solve(geometry: SpanGeometry) -> Result<Self> {
        solve_equilibrium(geometry, DEFAULT_TOL)
    }

    pub fn geometry(&self) -> &SpanGeometry {
        &self.geometry
    }

    /// Horizontal tension parameter W = T₀/(m̄g).
    pub fn w(&self) -> f64 {
        self.w
    }

    /// Integration constant of the cosh profile, in the caller's
    /// (unmirrored) coordinates.
    pub fn c(&self) -> f64 {
        if self.mirrored {
            // Reflecting x → b − x maps cosh(C + x/W) onto
            // cosh(C' + x/W) with C' = −C − b/W.
            -self.c - self.geometry.b / self.w
        } else {
            self.c
        }
    }

    /// Whether the solve ran on the reflected span (input h < 0).
    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    /// Argument of the hyperbolic functions at x, after unmirroring.
    fn arg(&self, x: f64) -> f64 {
        let x_eff = if self.mirrored {
            self.geometry.b - x
        } else {
            x
        };
        self.c + x_eff / self.w
    }

    /// Height of the chain above the left support. y(0) = 0, y(b) = h.
    pub fn y(&self, x: f64) -> f64 {
        if self.mirrored {
            let b = self.geometry.b;
            self.w * ((self.c + (b - x) / self.w).cosh() - self.c.cosh()) + self.geometry.h
        } else {
            self.w * ((self.c + x / self.w).cosh() - self.c.cosh())
        }
    }

    /// Slope y′(x) = sinh(C + x/W).
    pub fn y_prime(&self, x: f64) -> f64 {
        let s = self.arg(x).sinh();
        if self.mirrored {
            -s
        } else {
            s
        }
    }

    /// Arc-length density sec θ(x) = cosh(C + x/W) = sqrt(1 + y′²).
    pub fn sec_theta(&self, x: f64) -> f64 {
        self.arg(x).cosh()
    }

    /// Checked point evaluation.
    pub fn eval(&self, x: f64) -> Result<ShapePoint> {
        self.check_domain(x)?;
        Ok(ShapePoint {
            y: self.y(x),
            y_prime: self.y_prime(x),
            sec_theta: self.sec_theta(x),
        })
    }

    /// Arc length of the chain from the left support to x, in closed
    /// form: s(x) = W (sinh(C + x/W) − sinh C). Strictly increasing,
    /// with s(b) = L and ds/dx = sec θ.
    pub fn arc_length(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        if self.mirrored {
            let full = self.w * ((self.c + self.geometry.b / self.w).sinh() - self.c.sinh());
            let from_right = self.w * (self.arg(x).sinh() - self.c.sinh());
            Ok(full - from_right)
        } else {
            Ok(self.w * (self.arg(x).sinh() - self.c.sinh()))
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if x < 0.0 || x > self.geometry.b || x.is_nan() {
            return Err(Error::OutOfDomain {
                x,
                span: self.geometry.b,
            });
        }
        Ok(())
    }

    /// Residuals of the two defining conditions: |y(b) − h| and the
    /// closed-form length defect |s(b) − L|.
    pub fn residuals(&self) -> (f64, f64) {
        let boundary = (self.y(self.geometry.b) - self.geometry.h).abs();
        let length = (self
            .arc_length(self.geometry.b)
            .expect("b is inside the domain")
            - self.geometry.length)
            .abs();
        (boundary, length)
    }
}
