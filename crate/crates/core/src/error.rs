use thiserror::Error;

/// Errors raised anywhere in the simulation and analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operator is not Hermitian (max anti-Hermitian residue {residue:.3e})")]
    NonHermitian { residue: f64 },

    #[error("generator is not anti-Hermitian (max Hermitian residue {residue:.3e})")]
    NonAntiHermitian { residue: f64 },

    #[error("generator terms do not mutually commute; exact element evolution is undefined")]
    NonCommutingTerms,

    #[error("{what} needs {n_qubits} qubits, above the dense limit of {limit}")]
    TooLarge {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("numeric integrity violated: {0}")]
    NumericIntegrity(String),

    #[error("operation not supported on the {0} backend")]
    UnsupportedBackend(&'static str),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("FCIDUMP line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("objective returned a non-finite value at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with a short description of where it happened.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all context layers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
