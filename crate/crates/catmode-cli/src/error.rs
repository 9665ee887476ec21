//! Exit-code policy: 0 success, 2 input error, 3 numerical failure.

use catmode::Error as LibError;

#[derive(Debug)]
pub enum AppError {
    Lib(LibError),
    Input(String),
}

impl From<LibError> for AppError {
    fn from(e: LibError) -> Self {
        AppError::Lib(e)
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Lib(e) => write!(f, "{e}"),
            AppError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl AppError {
    /// 2 for anything the caller got wrong; 3 for failures discovered
    /// while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 2,
            AppError::Lib(e) => match e {
                LibError::TautOrImpossible { .. }
                | LibError::InvalidGeometry(_)
                | LibError::OutOfDomain { .. }
                | LibError::InvalidRule(_)
                | LibError::EndpointViolation { .. }
                | LibError::InvalidSamples(_)
                | LibError::SpanMismatch { .. }
                | LibError::ZeroVector
                | LibError::TooFewLinks(_) => 2,
                LibError::NoConvergence { .. }
                | LibError::NonFinite { .. }
                | LibError::SingularMass
                | LibError::IndefiniteMass
                | LibError::DegenerateSystem
                | LibError::AmplitudeTooLarge { .. }
                | LibError::ConstraintViolated { .. }
                | LibError::IndefiniteHessian => 3,
            },
        }
    }
}
