//! Slow, obviously-correct reference implementations.
//!
//! Everything here trades efficiency for transparency: explicit Kronecker
//! products, direct dense factorizations of the `pq x pq` posterior
//! precision, eigenvalue-based determinants. Size guards keep these
//! routines honest about their role — they exist to cross-check the fast
//! paths in tests, not to run at scale.

use ndarray::{Array1, Array2};

use crate::dist::{std_normal_vec, Rng};
use crate::types::GroundTruth;
use crate::{linalg, Error, Result};

/// Maximum `p*q` accepted by [`beta_conditional_direct`].
pub const BETA_DIRECT_MAX: usize = 200;
/// Maximum `n*q` accepted by [`kl_naive`].
pub const KL_NAIVE_MAX: usize = 500;

/// Explicit Kronecker product `A (x) B`.
pub fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == 0.0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Direct draw from the conditional posterior of `beta`,
/// `N((X~'X~ + L^{-1})^{-1} X~'y~, (X~'X~ + L^{-1})^{-1})` with
/// `L = diag(lambda_star)`, by factoring the full `pq x pq` precision.
///
/// This is the textbook sampler the fast auxiliary-variable scheme must
/// match in distribution. Guarded to `pq <=` [`BETA_DIRECT_MAX`].
pub fn beta_conditional_direct(
    y_tilde: &Array1<f64>,
    x_tilde: &Array2<f64>,
    lambda_star: &Array1<f64>,
    rng: &mut Rng,
) -> Result<Array1<f64>> {
    let (nq, pq) = x_tilde.dim();
    if pq > BETA_DIRECT_MAX {
        return Err(Error::SizeGuard(format!(
            "beta_conditional_direct limited to pq <= {BETA_DIRECT_MAX}, got {pq}"
        )));
    }
    if y_tilde.len() != nq {
        return Err(Error::DimensionMismatch(format!(
            "y_tilde length {} vs design rows {nq}",
            y_tilde.len()
        )));
    }
    if lambda_star.len() != pq {
        return Err(Error::DimensionMismatch(format!(
            "lambda_star length {} vs design cols {pq}",
            lambda_star.len()
        )));
    }
    if lambda_star.iter().any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(Error::InvalidInput("lambda_star must be positive and finite".into()));
    }

    let mut precision = x_tilde.t().dot(x_tilde);
    for j in 0..pq {
        precision[(j, j)] += 1.0 / lambda_star[j];
    }
    let chol = linalg::cholesky(&precision)?;
    let mean = chol.solve_vec(&x_tilde.t().dot(y_tilde))?;
    let z = std_normal_vec(pq, rng);
    Ok(&mean + &chol.solve_lower_t(&z)?)
}

/// Unnormalized Kullback–Leibler divergence `D_n` between the generating
/// Gaussian model and a candidate `(B_hat, Omega_hat)`, computed the
/// maximally literal way:
///
/// ```text
///     D_n = (n/2) [ log det(Omega_hat^{-1} Omega0)
///                   + tr(Omega_hat Omega0^{-1}) - q ]
///           + (1/2) vec(Delta)' (Omega_hat (x) I_n) vec(Delta),
/// ```
///
/// with `Delta = X (B_hat - B0)`, `vec` stacking columns, the Kronecker
/// factor built explicitly, and determinants from eigenvalues. Guarded to
/// `nq <=` [`KL_NAIVE_MAX`]. The fast path divides by `n`; this one does
/// not.
pub fn kl_naive(
    truth: &GroundTruth,
    b_hat: &Array2<f64>,
    omega_hat: &Array2<f64>,
    x: &Array2<f64>,
) -> Result<f64> {
    let n = x.nrows();
    let q = truth.omega0.nrows();
    if n * q > KL_NAIVE_MAX {
        return Err(Error::SizeGuard(format!(
            "kl_naive limited to nq <= {KL_NAIVE_MAX}, got {}",
            n * q
        )));
    }
    if b_hat.dim() != truth.b0.dim() {
        return Err(Error::DimensionMismatch("B_hat vs B0".into()));
    }
    if omega_hat.dim() != truth.omega0.dim() {
        return Err(Error::DimensionMismatch("Omega_hat vs Omega0".into()));
    }
    if x.ncols() != truth.b0.nrows() {
        return Err(Error::DimensionMismatch("X vs B0".into()));
    }

    // Term I from eigenvalues: log dets and the trace of
    // Omega_hat * Omega0^{-1} via the spectral inverse of Omega0.
    let (d0, v0) = linalg::eigh(&truth.omega0)?;
    let (dh, _) = linalg::eigh(omega_hat)?;
    if d0.iter().any(|&v| v <= 0.0) || dh.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositiveDefinite("kl_naive inputs".into()));
    }
    let logdet0: f64 = d0.iter().map(|v| v.ln()).sum();
    let logdet_hat: f64 = dh.iter().map(|v| v.ln()).sum();
    // Omega0^{-1} = V' diag(1/d) V with eigenvectors in rows of V.
    let mut inv0 = Array2::<f64>::zeros((q, q));
    for k in 0..q {
        for i in 0..q {
            for j in 0..q {
                inv0[(i, j)] += v0[(k, i)] * v0[(k, j)] / d0[k];
            }
        }
    }
    let mut trace = 0.0;
    for i in 0..q {
        for j in 0..q {
            trace += omega_hat[(i, j)] * inv0[(j, i)];
        }
    }
    let term1 = (n as f64 / 2.0) * (logdet0 - logdet_hat + trace - q as f64);

    // Term II literally: vec(Delta)' (Omega_hat (x) I_n) vec(Delta) with
    // the standard column-stacking vec.
    let delta = x.dot(&(b_hat - &truth.b0));
    let mut vec_delta = Array1::zeros(n * q);
    for k in 0..q {
        for i in 0..n {
            vec_delta[k * n + i] = delta[(i, k)];
        }
    }
    let big = kron(omega_hat, &Array2::eye(n));
    let term2 = 0.5 * vec_delta.dot(&big.dot(&vec_delta));

    Ok(term1 + term2)
}

/// Smallest eigenvalue of a symmetric matrix (symmetry enforced to 1e-8).
pub fn min_eigenvalue(m: &Array2<f64>) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "min_eigenvalue of {} x {} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if linalg::asymmetry(m) > 1e-8 {
        return Err(Error::InvalidInput("min_eigenvalue requires a symmetric matrix".into()));
    }
    let vals = linalg::eigvalsh(m)?;
    Ok(vals[0])
}
