use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("expected a {expected}x{expected} matrix, got {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "not a density matrix (|Tr - 1| = {trace_error:e}, min eigenvalue = {min_eigenvalue:e})"
    )]
    NotDensityMatrix {
        trace_error: f64,
        min_eigenvalue: f64,
    },

    #[error("state is not of X form (largest excluded entry {deviation:e})")]
    NotXState { deviation: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("principal-value quadrature did not converge at omega = {omega} (estimate {estimate:e}, error {error:e})")]
    QuadratureNotConverged {
        omega: f64,
        estimate: f64,
        error: f64,
    },

    #[error("Jacobi eigensolver did not converge (off-diagonal norm {off_norm:e})")]
    EigenNotConverged { off_norm: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("state invariant violated at t = {t}: {what} = {value:e}")]
    InvariantViolation {
        t: f64,
        what: &'static str,
        value: f64,
    },
}

impl Error {
    /// True for failures raised while integrating, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::StepSizeUnderflow { .. }
                | Error::TooManySteps { .. }
                | Error::InvariantViolation { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::EigenNotConverged { .. }
        )
    }
}
