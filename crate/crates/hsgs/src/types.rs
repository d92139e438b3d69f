//! Core data carriers: observed data, sampler configuration, the full Gibbs
//! chain state, stored posterior draws, and simulation ground truth, plus
//! the two layout conventions everything else relies on:
//!
//! * `beta = vec(B')` — the coefficient matrix is flattened row-major, so
//!   the response index varies fastest: `beta[i*q + k] = B[i, k]`.
//! * Symmetric `q x q` matrices are packed as the upper triangle in
//!   row-major order (`(0,0), (0,1), ..., (0,q-1), (1,1), ...`), giving
//!   `q (q + 1) / 2` entries.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::{linalg, Error, Result};

/// An observed regression dataset: design `X` (`n x p`) and responses `Y`
/// (`n x q`).
#[derive(Debug, Clone)]
pub struct Dataset {
    pub x: Array2<f64>,
    pub y: Array2<f64>,
}

impl Dataset {
    /// Bundle a design and response after validating shapes and finiteness.
    pub fn new(x: Array2<f64>, y: Array2<f64>) -> Result<Self> {
        let ds = Dataset { x, y };
        ds.validate()?;
        Ok(ds)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn q(&self) -> usize {
        self.y.ncols()
    }

    /// Check row agreement, non-empty dimensions, and finiteness.
    pub fn validate(&self) -> Result<()> {
        if self.x.nrows() != self.y.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "X has {} rows but Y has {}",
                self.x.nrows(),
                self.y.nrows()
            )));
        }
        if self.x.nrows() == 0 || self.x.ncols() == 0 || self.y.ncols() == 0 {
            return Err(Error::InvalidInput(
                "dataset requires n >= 1, p >= 1, q >= 1".into(),
            ));
        }
        if !self.x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("design matrix X".into()));
        }
        if !self.y.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("response matrix Y".into()));
        }
        Ok(())
    }
}

/// Gibbs sampler run configuration.
///
/// The chain takes `burnin + nmc * thin` total sweeps; after burn-in every
/// `thin`-th state is retained, for exactly `nmc` stored draws.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GibbsConfig {
    /// Sweeps discarded before any draw is stored.
    pub burnin: usize,
    /// Number of retained posterior draws.
    pub nmc: usize,
    /// Keep every `thin`-th post-burn-in sweep.
    pub thin: usize,
    /// Seed for the chain's own RNG stream.
    pub seed: u64,
    /// Ridge added to the eigenvalues of `Omega` when forming
    /// `Omega^{1/2}`; zero by default, only needed for near-singular input.
    pub pd_jitter: f64,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        GibbsConfig { burnin: 1000, nmc: 5000, thin: 1, seed: 0, pd_jitter: 0.0 }
    }
}

impl GibbsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nmc == 0 {
            return Err(Error::InvalidInput("nmc must be >= 1".into()));
        }
        if self.thin == 0 {
            return Err(Error::InvalidInput("thin must be >= 1".into()));
        }
        if !self.pd_jitter.is_finite() || self.pd_jitter < 0.0 {
            return Err(Error::InvalidInput(format!(
                "pd_jitter must be finite and >= 0, got {}",
                self.pd_jitter
            )));
        }
        Ok(())
    }

    /// Total number of Gibbs sweeps the chain will take.
    pub fn total_sweeps(&self) -> usize {
        self.burnin + self.nmc * self.thin
    }
}

/// Every latent quantity one Gibbs sweep reads and writes.
///
/// Local shrinkage for the coefficients lives in `lambda2`/`nu` (length
/// `p*q`, aligned with `beta`); global coefficient shrinkage in
/// `tau2`/`xi`. For the precision matrix, `eta2`/`rho` are symmetric
/// `q x q` matrices whose off-diagonal entries shrink the matching
/// `omega` entries (their diagonals are carried but unused), with global
/// counterparts `zeta2`/`phi`.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub beta: Array1<f64>,
    pub omega: Array2<f64>,
    pub lambda2: Array1<f64>,
    pub nu: Array1<f64>,
    pub tau2: f64,
    pub xi: f64,
    pub eta2: Array2<f64>,
    pub rho: Array2<f64>,
    pub zeta2: f64,
    pub phi: f64,
}

impl ChainState {
    /// The standard initialization: `beta = 0`, `Omega = I`, every
    /// shrinkage parameter 1.
    pub fn init(p: usize, q: usize) -> Self {
        ChainState {
            beta: Array1::zeros(p * q),
            omega: Array2::eye(q),
            lambda2: Array1::ones(p * q),
            nu: Array1::ones(p * q),
            tau2: 1.0,
            xi: 1.0,
            eta2: Array2::ones((q, q)),
            rho: Array2::ones((q, q)),
            zeta2: 1.0,
            phi: 1.0,
        }
    }

    /// View `beta` as the `p x q` coefficient matrix (row-major reshape).
    pub fn coef_matrix(&self, p: usize, q: usize) -> Result<Array2<f64>> {
        beta_to_coef(&self.beta, p, q)
    }

    /// Invariant check used by tests and debug assertions: finite
    /// everywhere, positive shrinkage scales, symmetric PD `omega`.
    pub fn validate(&self) -> Result<()> {
        let finite_vec = |v: &Array1<f64>, name: &str| -> Result<()> {
            if v.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::NonFinite(name.into()))
            }
        };
        finite_vec(&self.beta, "beta")?;
        finite_vec(&self.lambda2, "lambda2")?;
        finite_vec(&self.nu, "nu")?;
        if self.lambda2.iter().any(|&v| v <= 0.0) || self.nu.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidInput("lambda2 and nu must be positive".into()));
        }
        for (val, name) in [
            (self.tau2, "tau2"),
            (self.xi, "xi"),
            (self.zeta2, "zeta2"),
            (self.phi, "phi"),
        ] {
            if !val.is_finite() || val <= 0.0 {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {val}")));
            }
        }
        for m in [&self.eta2, &self.rho] {
            if m.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                return Err(Error::InvalidInput("eta2 and rho must be positive".into()));
            }
        }
        if linalg::asymmetry(&self.omega) > 1e-10 {
            return Err(Error::InvalidInput("omega is not symmetric".into()));
        }
        linalg::cholesky(&self.omega).map_err(|_| {
            Error::NotPositiveDefinite("chain state omega".into())
        })?;
        Ok(())
    }
}

/// Retained posterior draws from one chain.
///
/// `beta_draws` is `nmc x (p*q)` in `vec(B')` order; `omega_draws` is
/// `nmc x q(q+1)/2`, each row the packed upper triangle of `Omega`.
#[derive(Debug, Clone)]
pub struct PosteriorSamples {
    pub beta_draws: Array2<f64>,
    pub omega_draws: Array2<f64>,
    /// `(n, p, q)` of the dataset the chain ran on.
    pub dims: (usize, usize, usize),
    pub config: GibbsConfig,
}

impl PosteriorSamples {
    pub fn nmc(&self) -> usize {
        self.beta_draws.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let (_, p, q) = self.dims;
        if self.beta_draws.ncols() != p * q {
            return Err(Error::DimensionMismatch(format!(
                "beta draws have {} columns, expected p*q = {}",
                self.beta_draws.ncols(),
                p * q
            )));
        }
        if self.omega_draws.ncols() != tri_len(q) {
            return Err(Error::DimensionMismatch(format!(
                "omega draws have {} columns, expected q(q+1)/2 = {}",
                self.omega_draws.ncols(),
                tri_len(q)
            )));
        }
        if self.beta_draws.nrows() != self.omega_draws.nrows() {
            return Err(Error::DimensionMismatch(
                "beta and omega draw counts differ".into(),
            ));
        }
        if self.beta_draws.nrows() == 0 {
            return Err(Error::EmptySamples);
        }
        Ok(())
    }
}

/// Simulation ground truth: the generating coefficient matrix and
/// precision matrix.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub b0: Array2<f64>,
    pub omega0: Array2<f64>,
}

impl GroundTruth {
    /// Validate shapes, symmetry, and positive definiteness of `omega0`.
    pub fn new(b0: Array2<f64>, omega0: Array2<f64>) -> Result<Self> {
        let q = b0.ncols();
        if omega0.nrows() != q || omega0.ncols() != q {
            return Err(Error::DimensionMismatch(format!(
                "B0 has q = {q} but Omega0 is {} x {}",
                omega0.nrows(),
                omega0.ncols()
            )));
        }
        if linalg::asymmetry(&omega0) > 1e-8 {
            return Err(Error::InvalidInput("Omega0 is not symmetric".into()));
        }
        linalg::cholesky(&omega0)
            .map_err(|_| Error::NotPositiveDefinite("Omega0".into()))?;
        Ok(GroundTruth { b0, omega0 })
    }

    /// Support mask of `B0` (true where the entry is nonzero).
    pub fn b_support(&self) -> Array2<bool> {
        self.b0.mapv(|v| v != 0.0)
    }

    /// Off-diagonal support mask of `Omega0` (diagonal always false).
    pub fn omega_support(&self) -> Array2<bool> {
        let q = self.omega0.nrows();
        Array2::from_shape_fn((q, q), |(i, j)| i != j && self.omega0[(i, j)] != 0.0)
    }
}

/// Length of the packed upper triangle of a `q x q` symmetric matrix.
pub fn tri_len(q: usize) -> usize {
    q * (q + 1) / 2
}

/// Pack the upper triangle (row-major, `k <= l`) of a symmetric matrix.
pub fn compress_triangle(m: &Array2<f64>) -> Result<Array1<f64>> {
    let q = m.nrows();
    if m.ncols() != q {
        return Err(Error::DimensionMismatch(format!(
            "compress_triangle of {} x {} matrix",
            q,
            m.ncols()
        )));
    }
    let mut out = Array1::zeros(tri_len(q));
    let mut idx = 0;
    for k in 0..q {
        for l in k..q {
            out[idx] = m[(k, l)];
            idx += 1;
        }
    }
    Ok(out)
}

/// Expand a packed upper triangle back to the full symmetric matrix,
/// inferring `q` from the length. `[1, 2, 3]` becomes `[[1, 2], [2, 3]]`.
pub fn expand_triangle(tri: &Array1<f64>) -> Result<Array2<f64>> {
    let len = tri.len();
    let q = triangle_order(len)?;
    let mut m = Array2::zeros((q, q));
    let mut idx = 0;
    for k in 0..q {
        for l in k..q {
            m[(k, l)] = tri[idx];
            m[(l, k)] = tri[idx];
            idx += 1;
        }
    }
    Ok(m)
}

/// Solve `q(q+1)/2 = len` for `q`, rejecting non-triangular lengths.
pub fn triangle_order(len: usize) -> Result<usize> {
    // q = (-1 + sqrt(1 + 8 len)) / 2, checked exactly.
    let disc = 1 + 8 * len;
    let guess = ((disc as f64).sqrt() as usize).saturating_sub(1) / 2;
    for q in guess.saturating_sub(1)..=guess + 1 {
        if q * (q + 1) / 2 == len && q > 0 {
            return Ok(q);
        }
    }
    Err(Error::InvalidInput(format!("{len} is not a triangular number q(q+1)/2")))
}

/// Reshape `beta = vec(B')` into the `p x q` coefficient matrix.
pub fn beta_to_coef(beta: &Array1<f64>, p: usize, q: usize) -> Result<Array2<f64>> {
    if beta.len() != p * q {
        return Err(Error::DimensionMismatch(format!(
            "beta length {} vs p*q = {}",
            beta.len(),
            p * q
        )));
    }
    Ok(Array2::from_shape_fn((p, q), |(i, k)| beta[i * q + k]))
}

/// Flatten a `p x q` coefficient matrix into `beta = vec(B')`.
pub fn coef_to_beta(b: &Array2<f64>) -> Array1<f64> {
    let (p, q) = b.dim();
    Array1::from_shape_fn(p * q, |j| b[(j / q, j % q)])
}
