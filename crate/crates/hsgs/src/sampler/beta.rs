//! The coefficient block of the Gibbs sweep.
//!
//! Conditional on the shrinkage scales and the whitened data, `beta` is
//! Gaussian with precision `X_tilde' X_tilde + Lambda*^{-1}` where
//! `Lambda* = diag(lambda_j^2 tau^2)`. Instead of factoring that `pq x pq`
//! matrix, the draw uses the auxiliary-variable scheme that only ever
//! factors the `nq x nq` matrix `X_tilde Lambda* X_tilde' + I`:
//!
//! ```text
//!     u ~ N(0, Lambda*),  delta ~ N(0, I_nq),  v = X_tilde u + delta,
//!     (X_tilde Lambda* X_tilde' + I) w = y_tilde - v,
//!     beta = u + Lambda* X_tilde' w.
//! ```
//!
//! The result is an exact draw from the conditional posterior with cost
//! linear in `p`.

use ndarray::Array1;

use crate::dist::{std_normal_vec, Rng};
use crate::sampler::design::KroneckerDesign;
use crate::{linalg, Error, Result};

/// One exact draw of `beta` given the whitened response, the design
/// operator, and the per-coefficient prior variances
/// `lambda_star[j] = lambda_j^2 tau^2`.
pub fn sample_beta(
    y_tilde: &Array1<f64>,
    design: &KroneckerDesign,
    lambda_star: &Array1<f64>,
    rng: &mut Rng,
) -> Result<Array1<f64>> {
    if y_tilde.len() != design.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "y_tilde length {} vs nq = {}",
            y_tilde.len(),
            design.nrows()
        )));
    }
    if lambda_star.len() != design.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "lambda_star length {} vs pq = {}",
            lambda_star.len(),
            design.ncols()
        )));
    }
    if lambda_star.iter().any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(Error::InvalidInput(
            "lambda_star entries must be positive and finite".into(),
        ));
    }

    let u = std_normal_vec(design.ncols(), rng) * &lambda_star.mapv(f64::sqrt);
    let delta = std_normal_vec(design.nrows(), rng);
    let v = design.matvec(&u)? + &delta;

    let m = design.gram_lambda_plus_eye(lambda_star)?;
    let chol = linalg::cholesky(&m).map_err(|e| {
        Error::LinearSolve(format!("beta-step normal equations not factorable: {e}"))
    })?;
    let w = chol.solve_vec(&(y_tilde - &v))?;

    let correction = design.tmatvec(&w)?;
    Ok(u + &(lambda_star * &correction))
}
