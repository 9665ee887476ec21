//! Small in-plane oscillations of a slack inextensible catenary.
//!
//! A uniform chain hangs between two fixed supports with substantial
//! sag. Because the chain is inextensible, its horizontal and vertical
//! displacements cannot be approximated independently: the vertical
//! field `v` determines the horizontal field `u` pointwise, and fixing
//! the far end adds one scalar constraint with a Lagrange multiplier.
//! This crate solves that problem end to end:
//!
//! * [`equilibrium`] — the static cosh shape, from a single bracketed
//!   root find.
//! * [`basis`] — sine and sampled trial families for the vertical
//!   displacement.
//! * [`assembly`] — the kinetic metric `M`, constraint pieces `q` and
//!   `B`, gravity gradient `p`, and the equilibrium multiplier λ₀.
//! * [`modal`] — null-space reduction of the constraint and the
//!   reduced eigenproblem for frequencies and mode shapes.
//! * [`one_mode`] — the second-order treatment that recovers the
//!   frequency of a constraint-satisfying shape when the multiplier
//!   route degenerates.
//! * [`chain`] — an n-rigid-link chain solved independently, as a
//!   consistency oracle for both statics and spectra.
//! * [`quadrature`] — composite Gauss–Legendre rules used throughout.
//!
//! ```
//! use catmode::prelude::*;
//!
//! let geom = SpanGeometry::new(0.6, 0.0)?;
//! let shape = EquilibriumShape::solve(geom)?;
//! let basis = TrialBasis::fourier_sine(0.6, 4)?;
//! let system = assemble(&shape, &basis, &QuadratureRule::default())?;
//! let modes = solve_modes(&system, 401)?;
//!
//! assert!((shape.w() - 0.1631683).abs() < 5e-7);
//! assert!((system.lambda0.value().unwrap() - 0.1631682).abs() < 5e-7);
//! assert_eq!(modes.len(), 3);
//! # Ok::<(), catmode::Error>(())
//! ```

pub mod assembly;
pub mod basis;
pub mod chain;
pub mod equilibrium;
mod error;
mod linalg;
pub mod modal;
pub mod one_mode;
pub mod quadrature;
mod roots;

pub use error::{Error, Result};

/// The handful of names almost every caller needs.
pub mod prelude {
    pub use crate::assembly::{
        assemble, detect_degeneracy, exact_constraint_residual, AssembledSystem, Multiplier,
    };
    pub use crate::basis::{SampledFunction, TrialBasis, TrialFunction};
    pub use crate::chain::{linearized_frequencies, static_equilibrium, DiscreteChain};
    pub use crate::equilibrium::{
        solve_equilibrium, EquilibriumShape, ShapePoint, SpanGeometry,
    };
    pub use crate::error::{Error, Result};
    pub use crate::modal::{nullspace_basis, solve_modes, Mode, ModeSet, ShapeSample};
    pub use crate::one_mode::{one_mode_frequency, OneModeResult};
    pub use crate::quadrature::QuadratureRule;
}
