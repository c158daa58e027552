use thiserror::Error;

/// Errors produced by state constructors, the evolution engine and the
/// observable reductions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The Fock truncation cannot represent the requested state: the
    /// probability lost to (or parked near) the cutoff exceeds 1e-8.
    #[error("Fock cutoff too small: missing probability {leakage:.3e} (tolerance 1e-8)")]
    CutoffTooSmall { leakage: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A full-space state could not be projected onto the symmetric
    /// (Dicke) subspace without loss.
    #[error("state is not permutation-symmetric: residual norm {residual:.3e}")]
    NotSymmetric { residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// Basin parameter outside the admissible disc |a| <= 1/sqrt(2^(N_q-1)).
    #[error("basin parameter out of range: |a| = {modulus:.6} > {max:.6}")]
    BasinOutOfRange { modulus: f64, max: f64 },

    /// The brute-force reference path refuses sizes it was not meant for.
    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("operation requires a two-qubit state, got N_q = {0}")]
    WrongQubitCount(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
