//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while solving, assembling, or reducing.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The support chord is at least as long as the chain, so no slack
    /// catenary hangs between the ends.
    #[error("chord {chord} is not shorter than chain length {length}; no slack shape exists")]
    TautOrImpossible { chord: f64, length: f64 },

    /// A geometry parameter violates its basic bounds (b > 0, L > 0, ...).
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// An iterative solver exhausted its iteration budget.
    #[error("no convergence in {context} after {iterations} iterations")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
    },

    /// An evaluation point lies outside the span [0, b].
    #[error("x = {x} is outside the span [0, {span}]")]
    OutOfDomain { x: f64, span: f64 },

    /// An integrand returned a non-finite value at a quadrature node.
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },

    /// A quadrature rule parameter is out of range.
    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    /// A sampled trial function does not vanish at a support.
    #[error("sampled function {index} has value {value} at an endpoint; both ends must be fixed")]
    EndpointViolation { index: usize, value: f64 },

    /// A sample table is malformed (unsorted, out of span, too short, ...).
    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    /// Shape and basis were built for different spans.
    #[error("span mismatch: shape has b = {shape_span}, basis has b = {basis_span}")]
    SpanMismatch { shape_span: f64, basis_span: f64 },

    /// The mass matrix failed its positive-definite factorization,
    /// usually because the trial functions are linearly dependent.
    #[error("mass matrix is not positive definite; trial functions may be linearly dependent")]
    SingularMass,

    /// The reduced mass metric failed its factorization.
    #[error("reduced mass matrix is not positive definite")]
    IndefiniteMass,

    /// The constraint gradient is the zero vector, so no null-space
    /// basis can be oriented.
    #[error("constraint vector q is zero; null-space basis is undefined")]
    ZeroVector,

    /// The multiplier is indeterminate at first order; the linear
    /// eigenproblem cannot be posed for this basis.
    #[error("system is degenerate (q below threshold, multiplier indeterminate); use the second-order one-mode treatment")]
    DegenerateSystem,

    /// Displacement amplitude too large for the inextensibility square
    /// root to stay real.
    #[error("displacement amplitude too large near x = {x}: radicand of the constraint is nonpositive")]
    AmplitudeTooLarge { x: f64 },

    /// A trial function handed to the one-mode treatment does not
    /// satisfy the end-fixity constraint at first order.
    #[error("trial function violates the first-order constraint: |residual| = {residual} exceeds {threshold}")]
    ConstraintViolated { residual: f64, threshold: f64 },

    /// The reduced potential Hessian of the discrete chain is not
    /// positive definite, which signals a failed equilibrium solve.
    #[error("reduced Hessian is not positive definite; chain is not at a constrained minimum")]
    IndefiniteHessian,

    /// Too few links for the discrete chain model.
    #[error("chain needs at least 3 links, got {0}")]
    TooFewLinks(usize),
}
