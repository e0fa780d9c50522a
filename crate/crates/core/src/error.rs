use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symplectic: M^T J M != J")]
    NotSymplectic,

    #[error("spectrum is not generic enough to classify numerically: {0}")]
    NonGenericSpectrum(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("mean index is not positive ({0})")]
    MeanIndexNonpositive(String),

    /// Only means the scan ran out of room; it is not a refutation.
    #[error(
        "no tuple found with N <= {n_max} (best vertex distance {best_distance}); \
         this does not show that none exist"
    )]
    NoTupleFound { n_max: u64, best_distance: String },

    #[error("Betti number requested below the minimal degree n-1 = {min} (k = {k})")]
    DomainBelowMin { k: i64, min: i64 },

    #[error("iterate {k} of `{label}` is degenerate (nullity {nu}) and has no local homology table entry")]
    DegenerateWithoutTable { label: String, k: u64, nu: u32 },

    #[error("period of the local Euler characteristic could not be established: {0}")]
    PeriodUndetermined(String),

    #[error("point is not on the unit circle")]
    NotOnUnitCircle,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
