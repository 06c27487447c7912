use thiserror::Error;

/// Errors raised by the distinguishability toolkit.
///
/// Variants split into two families: input validation (malformed or
/// out-of-contract arguments) and numeric-domain failures (the inputs are
/// well formed but the requested quantity is singular or undefined there).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("parameter `{name}` out of range: {value} ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid state description: {0}")]
    InvalidSpec(String),

    #[error("invalid POVM element: {0}")]
    InvalidPovm(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("{0}")]
    WrongRegime(String),

    #[error("singular direction: {0}")]
    SingularDirection(String),

    #[error("boundary point: {0}")]
    Boundary(String),

    #[error("error probability is zero at n = {0}; the exponent is infinite")]
    ZeroErrorProbability(u32),

    #[error("rejection sampling exhausted its budget (acceptance rate {rate:.3e} after {tries} proposals)")]
    RejectionBudget { rate: f64, tries: u64 },

    #[error("Fock truncation tail mass {tail:.3e} exceeds {limit:.1e} at cutoff {cutoff}")]
    FockTail { tail: f64, limit: f64, cutoff: usize },

    #[error("bound ordering violated: {0}")]
    BoundOrder(String),
}

impl Error {
    /// True for argument/format validation failures, false for numeric-domain
    /// failures (singular metrics, infinite exponents, truncation limits).
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::SingularDirection(_)
                | Error::Boundary(_)
                | Error::ZeroErrorProbability(_)
                | Error::RejectionBudget { .. }
                | Error::FockTail { .. }
                | Error::BoundOrder(_)
                | Error::WrongRegime(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
