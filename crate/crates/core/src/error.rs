use thiserror::Error;

/// Errors shared by every layer of the library.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {0}x{1} exceeds the supported maximum of 8x8")]
    Oversize(usize, usize),

    #[error("non-finite entry encountered in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("trace is {0} but must be 1 within 1e-10")]
    BadTrace(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("parameter {name} = {value} outside its domain {domain}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("Kraus channel is not complete (deviation {0:.3e})")]
    IncompleteChannel(f64),

    #[error("selective operation annihilated the state (trace {0:.3e})")]
    DegenerateNormalization(f64),

    #[error("measurement outcome has vanishing probability ({0:.3e})")]
    OutcomeImpossible(f64),

    #[error("input state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),
}

pub type Result<T> = std::result::Result<T, CoreError>;
