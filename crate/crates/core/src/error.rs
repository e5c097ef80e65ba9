use thiserror::Error;

/// Invariant of a density matrix that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateInvariant {
    Hermitian,
    Trace,
    Positivity,
}

impl std::fmt::Display for StateInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            StateInvariant::Hermitian => "hermitian",
            StateInvariant::Trace => "trace",
            StateInvariant::Positivity => "positivity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension overflow: {rows}x{cols} exceeds the limit of {limit}")]
    DimensionOverflow { rows: usize, cols: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not hermitian (max |a - a^†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid dimension d = {0} (need d >= 2)")]
    InvalidDimension(usize),

    #[error("count mismatch: N(M-1) = {got} but d^2-1 = {expected}")]
    CountMismatch { got: usize, expected: usize },

    #[error("grouping scheme `{scheme}` requires d = {required}, got d = {got}")]
    SchemeDimensionMismatch { scheme: String, required: usize, got: usize },

    #[error("invalid grouping permutation: {0}")]
    InvalidPermutation(String),

    #[error("t = {t} outside the admissible interval [{lo}, {hi}]")]
    TOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("all H operators vanish; the t interval is unbounded")]
    Degenerate,

    #[error("effect ({alpha},{k}) is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    PsdViolation { alpha: usize, k: usize, min_eigenvalue: f64 },

    #[error("POVM is not informationally complete: {0}")]
    NotInformationallyComplete(String),

    #[error("purity parameter x = {x} outside the window ({lo}, {hi}] for d = {d}, M = {m}")]
    WindowViolation { d: usize, m: usize, x: f64, lo: f64, hi: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid density matrix: {invariant} invariant violated ({detail})")]
    InvalidState { invariant: StateInvariant, detail: String },

    #[error("zero vector has no Schmidt decomposition")]
    ZeroVector,

    #[error("correlation entry ({row},{col}) has imaginary residue {residue:.3e}")]
    ImaginaryResidue { row: usize, col: usize, residue: f64 },

    #[error("fiducial does not generate a SIC: {0}")]
    NotASic(String),

    #[error("level {level} is not bracketed on [{lo}, {hi}] (curve values {f_lo}, {f_hi})")]
    NoSignChange { level: f64, lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 3 for dimension problems, 4 for invalid
    /// states, 1 for I/O, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionOverflow { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidDimension(_)
            | Error::SchemeDimensionMismatch { .. } => 3,
            Error::InvalidState { .. } | Error::NotHermitian { .. } => 4,
            Error::Io(_) | Error::Csv(_) => 1,
            _ => 2,
        }
    }
}
