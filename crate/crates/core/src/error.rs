use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the documented domain of the operation.
    InvalidArgument(String),
    /// A bound that only exists on part of the parameter range was requested outside it.
    NotApplicable(String),
    /// A factorization broke down or the solution missed the residual target.
    LinearSolverFailure { residual: f64 },
    /// A pivot fell below the relative singularity threshold.
    SingularMatrix { row: usize },
    /// Newton did not reach the tolerance within the iteration budget.
    NewtonDivergence { iterations: usize, residual: f64 },
    /// Lower state bound is not strictly below the upper bound at a constraint node.
    InfeasibleSpec { node: usize },
    /// Input violates a precondition such as "solution converged".
    InvalidInput(String),
    /// The sampled structural inequality |φ''| <= M φ'^(1/r) failed.
    AssumptionViolated { s: f64, lhs: f64, rhs: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NotApplicable(msg) => write!(f, "not applicable: {msg}"),
            Error::LinearSolverFailure { residual } => {
                write!(f, "linear solver failure (relative residual {residual:e})")
            }
            Error::SingularMatrix { row } => write!(f, "singular matrix (pivot row {row})"),
            Error::NewtonDivergence {
                iterations,
                residual,
            } => write!(
                f,
                "newton divergence after {iterations} iterations (residual {residual:e})"
            ),
            Error::InfeasibleSpec { node } => {
                write!(f, "infeasible spec: y_a >= y_b at constraint node {node}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::AssumptionViolated { s, lhs, rhs } => write!(
                f,
                "structural assumption violated at s = {s}: |phi''| = {lhs} > {rhs}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(String::from(msg))
}
