//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Tori smaller than 2x2 cells would wrap a bond onto itself and
    /// create double edges.
    #[error("lattice must have at least 2 cells in each direction, got {m}x{n}")]
    LatticeTooSmall { m: usize, n: usize },

    #[error("site ({alpha},{beta}) out of range for a {m}x{n} lattice")]
    SiteOutOfRange {
        alpha: usize,
        beta: usize,
        m: usize,
        n: usize,
    },

    #[error("flat index {index} out of range for {sites} sites")]
    IndexOutOfRange { index: usize, sites: usize },

    /// Exact Dirac states require both cell counts to be multiples of 3.
    #[error("no exact Dirac states on a {m}x{n} torus (cell counts must be multiples of 3)")]
    DiracUnavailable { m: usize, n: usize },

    #[error("matrix is not symmetric (max asymmetry {max_asym:e})")]
    NotSymmetric { max_asym: f64 },

    #[error("cannot decompose an empty matrix")]
    EmptyMatrix,

    #[error("dispersion radicand {value:e} negative beyond roundoff tolerance")]
    NegativeRadicand { value: f64 },

    #[error("energy {energy:e} within 1e-12 of unperturbed level {pole:e}")]
    PoleProximity { energy: f64, pole: f64 },

    #[error("no sign change of F on ({lo:e}, {hi:e}); root bracketing failed")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root polish did not reach tolerance (|F| = {f_abs:e})")]
    RootTolerance { f_abs: f64 },

    #[error("QL iteration failed to converge for eigenvalue {index}")]
    EigenNoConvergence { index: usize },

    #[error("expected the 4 known zero modes at the crossing, found {count}")]
    UnexpectedZeroModes { count: usize },

    #[error("no positive eigenvalue below the unperturbed band after zero-mode exclusion (wrong gamma?)")]
    NoGapState,

    #[error("time step {dt:e} exceeds {max_dt:e} and would undersample the search oscillation")]
    TimeStepTooCoarse { dt: f64, max_dt: f64 },

    #[error("the two marked sites must be distinct")]
    IdenticalMarks,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("wave function norm drifted to {norm} (unitarity lost)")]
    NormDrift { norm: f64 },

    #[error("{0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
