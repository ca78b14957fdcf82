use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants are grouped by how a caller should react: argument and domain
/// errors are caller mistakes, `Budget` means the request was too large to
/// decide exhaustively, `Inconclusive` marks a randomized search that ran out
/// of attempts, and `Invariant` signals an internal bug.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient-domain mismatch: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("not decidable: {0}")]
    NotDecidable(String),

    #[error("element is not invertible")]
    NotInvertible,

    #[error("budget exceeded for {what}: needs {required}, limit {limit}")]
    Budget {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("inconclusive randomized search ({what}, seed {seed})")]
    Inconclusive { what: String, seed: u64 },

    #[error("orbit is not Galois-fixed")]
    NotGaloisFixed,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
