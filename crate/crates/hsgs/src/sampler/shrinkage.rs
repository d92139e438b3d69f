//! Conjugate updates for the horseshoe shrinkage hierarchy.
//!
//! Thanks to the inverse-gamma mixture representation of the half-Cauchy,
//! every local scale `lambda_j^2`, global scale `tau^2`, and their
//! auxiliaries `nu_j`, `xi` (and the precision-side `zeta^2`, `phi`) have
//! closed-form inverse-gamma full conditionals.

use crate::dist::{inv_gamma_draw, Rng};
use crate::types::ChainState;
use crate::Result;

/// Local coefficient scales:
/// `lambda_j^2 ~ InvGamma(1, 1/nu_j + beta_j^2 / (2 tau^2))` followed by
/// `nu_j ~ InvGamma(1, 1 + 1/lambda_j^2)`.
pub fn update_lambda_nu(state: &mut ChainState, rng: &mut Rng) -> Result<()> {
    let tau2 = state.tau2;
    for j in 0..state.beta.len() {
        let beta_j = state.beta[j];
        let scale = 1.0 / state.nu[j] + beta_j * beta_j / (2.0 * tau2);
        state.lambda2[j] = inv_gamma_draw(1.0, scale, rng)?;
        state.nu[j] = inv_gamma_draw(1.0, 1.0 + 1.0 / state.lambda2[j], rng)?;
    }
    Ok(())
}

/// Global coefficient scale:
/// `tau^2 ~ InvGamma((pq + 1)/2, 1/xi + sum_j beta_j^2 / (2 lambda_j^2))`
/// followed by `xi ~ InvGamma(1, 1 + 1/tau^2)`.
pub fn update_tau_xi(state: &mut ChainState, rng: &mut Rng) -> Result<()> {
    let pq = state.beta.len();
    let shape = (pq as f64 + 1.0) / 2.0;
    let mut quad = 0.0;
    for j in 0..pq {
        quad += state.beta[j] * state.beta[j] / state.lambda2[j];
    }
    let scale = 1.0 / state.xi + 0.5 * quad;
    state.tau2 = inv_gamma_draw(shape, scale, rng)?;
    state.xi = inv_gamma_draw(1.0, 1.0 + 1.0 / state.tau2, rng)?;
    Ok(())
}

/// Global precision-side scale:
/// `zeta^2 ~ InvGamma((q(q-1)/2 + 1)/2, 1/phi + sum_{k<l} omega_kl^2 / (2 eta_kl^2))`
/// followed by `phi ~ InvGamma(1, 1 + 1/zeta^2)`. The local `eta^2`/`rho`
/// updates live in the per-column precision sweep.
pub fn update_zeta_phi(state: &mut ChainState, rng: &mut Rng) -> Result<()> {
    let q = state.omega.nrows();
    let pairs = q * (q.saturating_sub(1)) / 2;
    let shape = (pairs as f64 + 1.0) / 2.0;
    let mut quad = 0.0;
    for k in 0..q {
        for l in (k + 1)..q {
            let w = state.omega[(k, l)];
            quad += w * w / state.eta2[(k, l)];
        }
    }
    let scale = 1.0 / state.phi + 0.5 * quad;
    state.zeta2 = inv_gamma_draw(shape, scale, rng)?;
    state.phi = inv_gamma_draw(1.0, 1.0 + 1.0 / state.zeta2, rng)?;
    Ok(())
}
