use thiserror::Error;

#[derive(Debug, Error)]
pub enum QmlaError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not a positive power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("state vector is not normalised (norm = {0})")]
    NotNormalised(f64),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("chromosome length {found} does not match gene map length {expected}")]
    ChromosomeLength { expected: usize, found: usize },

    #[error("term {0} is not part of the alphabet")]
    NotInAlphabet(String),

    #[error("cannot parse term label {0:?}")]
    ParseTerm(String),

    #[error("cannot parse chromosome {0:?}")]
    ParseChromosome(String),

    #[error("degenerate update: every particle assigns zero likelihood to the datum")]
    DegenerateUpdate,

    #[error("empty experiment set")]
    EmptyExperiments,

    #[error("information criterion undefined: need n > k + 1 (n = {n}, k = {k})")]
    TooFewSamples { n: usize, k: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown model id {0}")]
    UnknownModel(usize),

    #[error("ledger error: {0}")]
    Ledger(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QmlaError>;
