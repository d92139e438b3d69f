//! Joint Bayesian estimation of a sparse coefficient matrix and a sparse
//! error precision matrix in multivariate (seemingly unrelated) regression.
//!
//! The model is
//!
//! ```text
//!     Y = X B + E,        rows of E  ~  N(0, Omega^{-1})
//! ```
//!
//! with `Y` an `n x q` response matrix, `X` an `n x p` design, `B` a `p x q`
//! coefficient matrix, and `Omega` a `q x q` precision matrix. A horseshoe
//! prior shrinks the entries of `B`; a graphical horseshoe prior shrinks the
//! off-diagonal entries of `Omega`. [`sampler::run_chain`] draws from the
//! joint posterior with a blocked Gibbs sampler whose regression step works
//! on the whitened vectorized system
//!
//! ```text
//!     y_tilde = vec(Omega^{1/2} Y'),    X_tilde = X (x) Omega^{1/2},
//! ```
//!
//! where `(x)` is the Kronecker product and `vec` stacks columns. Throughout
//! the crate the coefficient vector is `beta = vec(B')`, i.e. the response
//! index varies fastest: `beta[i*q + k] = B[i, k]`.
//!
//! Modules:
//!
//! * [`types`] — datasets, chain state, sampler configuration, stored draws.
//! * [`dist`] — seeded RNG plus the gamma / inverse-gamma / half-Cauchy
//!   primitives (shape–scale parameterization everywhere).
//! * [`sampler`] — the Gibbs sweep and chain driver.
//! * [`simulate`] — sparse precision/coefficient generators and Gaussian
//!   data synthesis for benchmarking.
//! * [`summary`] — posterior means, equal-tailed credible intervals,
//!   interval-based selection, ROC sweeps.
//! * [`metrics`] — estimation/prediction error, support recovery, average
//!   Kullback–Leibler divergence.
//! * [`oracles`] — slow, obviously-correct reference implementations used
//!   to validate the fast paths in tests.
//! * [`io`] — headerless CSV matrices, the binary sample stream, and run
//!   manifests.
//! * [`pipeline`] — file-based commands mirroring the `hsgs` binary.
//!
//! The `examples/` directory is the front door: each example is a runnable
//! walkthrough of one capability (end-to-end fit, credible-interval
//! selection, ROC sweeps, convergence diagnostics, prior primitives, the
//! file pipeline).

pub mod dist;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod oracles;
pub mod pipeline;
pub mod sampler;
pub mod simulate;
pub mod summary;
pub mod types;

/// Crate-wide error type. Input-validation variants (`InvalidInput`,
/// `DimensionMismatch`, `Format`) indicate caller mistakes; the rest are
/// runtime failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Incompatible matrix/vector dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A parameter or input value outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// NaN or infinity where a finite value is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),
    /// A matrix that must be symmetric positive definite is not.
    #[error("matrix not positive definite: {0}")]
    NotPositiveDefinite(String),
    /// A dense factorization or solve failed.
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    /// Residual scatter too close to singular to continue sampling.
    #[error("degenerate residual: {0}")]
    DegenerateResidual(String),
    /// A reference implementation was asked to exceed its size guard.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    /// An operation that needs posterior draws received none.
    #[error("empty posterior sample")]
    EmptySamples,
    /// A file did not match the expected on-disk format.
    #[error("malformed file: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
