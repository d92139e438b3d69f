//! Chain monitoring: the per-sweep log-likelihood and a Geweke-style
//! convergence score on its trace.

use ndarray::Array2;

use crate::types::Dataset;
use crate::{linalg, Error, Result};

/// Gaussian log-likelihood of `(B, Omega)` up to the additive constant
/// `-(nq/2) log(2 pi)`:
///
/// ```text
///     -(n/2) * [ tr{ n^{-1} (Y - XB)'(Y - XB) Omega } - log det Omega ]
/// ```
///
/// Larger is better. Fails if `Omega` is not positive definite.
pub fn log_likelihood(b: &Array2<f64>, omega: &Array2<f64>, ds: &Dataset) -> Result<f64> {
    if b.nrows() != ds.p() || b.ncols() != ds.q() {
        return Err(Error::DimensionMismatch(format!(
            "B is {} x {} but dataset has p = {}, q = {}",
            b.nrows(),
            b.ncols(),
            ds.p(),
            ds.q()
        )));
    }
    let resid = &ds.y - &ds.x.dot(b);
    let s = resid.t().dot(&resid);
    ll_from_scatter(&s, omega, ds.n())
}

/// [`log_likelihood`] when the residual scatter `S = (Y-XB)'(Y-XB)` is
/// already available.
pub fn ll_from_scatter(s: &Array2<f64>, omega: &Array2<f64>, n: usize) -> Result<f64> {
    let q = omega.nrows();
    if s.nrows() != q || s.ncols() != q {
        return Err(Error::DimensionMismatch(format!(
            "scatter is {} x {} but omega is {q} x {q}",
            s.nrows(),
            s.ncols()
        )));
    }
    let logdet = linalg::cholesky(omega)
        .map_err(|_| Error::NotPositiveDefinite("omega in log-likelihood".into()))?
        .logdet();
    let mut tr = 0.0;
    for i in 0..q {
        for j in 0..q {
            tr += s[(i, j)] * omega[(j, i)];
        }
    }
    let n_f = n as f64;
    Ok(-(n_f / 2.0) * (tr / n_f - logdet))
}

/// Geweke convergence score for a scalar trace: the difference between
/// the means of the first `first` and last `last` fractions, studentized
/// with spectral (autocorrelation-consistent) variance estimates. Values
/// near zero are consistent with stationarity; |z| above ~3 indicates the
/// window means disagree.
pub fn geweke_z(trace: &[f64], first: f64, last: f64) -> Result<f64> {
    if !(first > 0.0 && last > 0.0 && first + last <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "window fractions must be positive with first + last <= 1, got {first} and {last}"
        )));
    }
    let len = trace.len();
    let n_a = ((len as f64) * first).floor() as usize;
    let n_b = ((len as f64) * last).floor() as usize;
    if n_a < 10 || n_b < 10 {
        return Err(Error::InvalidInput(format!(
            "trace too short for Geweke windows: {len} points give segments {n_a} and {n_b}"
        )));
    }
    let seg_a = &trace[..n_a];
    let seg_b = &trace[len - n_b..];
    let (mean_a, var_a) = spectral_mean_variance(seg_a);
    let (mean_b, var_b) = spectral_mean_variance(seg_b);
    let denom = (var_a + var_b).sqrt();
    if denom == 0.0 {
        // A perfectly constant trace is trivially "converged".
        return Ok(0.0);
    }
    Ok((mean_a - mean_b) / denom)
}

/// Mean of a segment and the variance of that mean, using the spectral
/// density at frequency zero estimated with a Bartlett window of width
/// ~sqrt(segment length).
fn spectral_mean_variance(seg: &[f64]) -> (f64, f64) {
    let n = seg.len();
    let mean = seg.iter().sum::<f64>() / n as f64;
    let lag_max = ((n as f64).sqrt().floor() as usize).min(n - 1);
    let mut s0 = autocovariance(seg, mean, 0);
    for lag in 1..=lag_max {
        let w = 1.0 - lag as f64 / (lag_max as f64 + 1.0);
        s0 += 2.0 * w * autocovariance(seg, mean, lag);
    }
    (mean, s0.max(0.0) / n as f64)
}

fn autocovariance(seg: &[f64], mean: f64, lag: usize) -> f64 {
    let n = seg.len();
    let mut acc = 0.0;
    for i in 0..n - lag {
        acc += (seg[i] - mean) * (seg[i + lag] - mean);
    }
    acc / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{std_normal, Rng};
    use crate::types::Dataset;
    use ndarray::{array, Array2};

    /// q = 1, omega = 2, residual sum of squares equal to n gives exactly
    /// -(n/2)(2 - ln 2).
    #[test]
    fn known_scalar_value() {
        let n = 2;
        let ds = Dataset::new(Array2::zeros((n, 1)), array![[1.0], [1.0]]).unwrap();
        let b = Array2::zeros((1, 1));
        let omega = array![[2.0]];
        let got = log_likelihood(&b, &omega, &ds).unwrap();
        let want = -(n as f64 / 2.0) * (2.0 - std::f64::consts::LN_2);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    /// The generating coefficients score higher than a zero fit on data
    /// with signal.
    #[test]
    fn truth_beats_null() {
        let mut rng = Rng::from_seed(51);
        let x = Array2::from_shape_fn((40, 3), |_| std_normal(&mut rng));
        let b = array![[2.0, 0.0], [0.0, -1.5], [1.0, 1.0]];
        let noise = Array2::from_shape_fn((40, 2), |_| 0.3 * std_normal(&mut rng));
        let y = x.dot(&b) + &noise;
        let ds = Dataset::new(x, y).unwrap();
        let omega = Array2::eye(2);
        let ll_truth = log_likelihood(&b, &omega, &ds).unwrap();
        let ll_null = log_likelihood(&Array2::zeros((3, 2)), &omega, &ds).unwrap();
        assert!(ll_truth > ll_null);
    }

    #[test]
    fn rejects_indefinite_omega() {
        let ds = Dataset::new(array![[1.0]], array![[1.0, 0.0]]).unwrap();
        let omega = array![[1.0, 2.0], [2.0, 1.0]];
        assert!(matches!(
            log_likelihood(&Array2::zeros((1, 2)), &omega, &ds),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn geweke_flags_drift_but_not_noise() {
        let mut rng = Rng::from_seed(52);
        let stationary: Vec<f64> = (0..2000).map(|_| std_normal(&mut rng)).collect();
        let z = geweke_z(&stationary, 0.1, 0.5).unwrap();
        assert!(z.abs() < 3.0, "stationary trace scored {z}");

        let drifting: Vec<f64> = (0..2000)
            .map(|i| i as f64 / 100.0 + 0.1 * std_normal(&mut rng))
            .collect();
        let z = geweke_z(&drifting, 0.1, 0.5).unwrap();
        assert!(z.abs() > 5.0, "drifting trace scored {z}");

        assert!(geweke_z(&stationary[..50], 0.1, 0.5).is_err());
        assert!(geweke_z(&stationary, 0.6, 0.6).is_err());
    }
}
