//! Scoring a fit against simulation ground truth: element-wise estimation
//! error, out-of-sample prediction error, support-recovery rates, per-task
//! R^2, and the average Kullback–Leibler divergence between the generating
//! model and the fitted one.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::types::GroundTruth;
use crate::{linalg, Error, Result};

/// Mean squared difference over all entries of two equally-shaped
/// matrices. For precision matrices this covers the full symmetric matrix,
/// diagonal included.
pub fn mse_elements(estimate: &Array2<f64>, truth: &Array2<f64>) -> Result<f64> {
    if estimate.dim() != truth.dim() {
        return Err(Error::DimensionMismatch(format!(
            "mse_elements: {:?} vs {:?}",
            estimate.dim(),
            truth.dim()
        )));
    }
    let total: f64 = estimate
        .iter()
        .zip(truth.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(total / estimate.len() as f64)
}

/// Out-of-sample prediction error: squared Frobenius norm of
/// `Y_test - X_test B_hat` divided by the number of response entries
/// (`n_test * q`).
pub fn prediction_mse(
    b_hat: &Array2<f64>,
    x_test: &Array2<f64>,
    y_test: &Array2<f64>,
) -> Result<f64> {
    check_test_shapes(b_hat, x_test, y_test)?;
    let resid = y_test - &x_test.dot(b_hat);
    Ok(resid.iter().map(|v| v * v).sum::<f64>() / resid.len() as f64)
}

/// Per-response-column coefficient of determination on test data:
/// `1 - RSS_k / TSS_k`, with TSS centered at the column mean. Fails when a
/// response column is constant (zero total variance).
pub fn r_squared(
    b_hat: &Array2<f64>,
    x_test: &Array2<f64>,
    y_test: &Array2<f64>,
) -> Result<Array1<f64>> {
    check_test_shapes(b_hat, x_test, y_test)?;
    let fitted = x_test.dot(b_hat);
    let (n, q) = y_test.dim();
    let mut out = Array1::zeros(q);
    for k in 0..q {
        let col = y_test.column(k);
        let mean = col.sum() / n as f64;
        let tss: f64 = col.iter().map(|y| (y - mean) * (y - mean)).sum();
        if tss == 0.0 {
            return Err(Error::InvalidInput(format!(
                "response column {k} has zero variance; R^2 undefined"
            )));
        }
        let rss: f64 = col
            .iter()
            .zip(fitted.column(k).iter())
            .map(|(y, f)| (y - f) * (y - f))
            .sum();
        out[k] = 1.0 - rss / tss;
    }
    Ok(out)
}

fn check_test_shapes(
    b_hat: &Array2<f64>,
    x_test: &Array2<f64>,
    y_test: &Array2<f64>,
) -> Result<()> {
    if x_test.ncols() != b_hat.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "X_test has {} columns but B_hat has {} rows",
            x_test.ncols(),
            b_hat.nrows()
        )));
    }
    if y_test.nrows() != x_test.nrows() || y_test.ncols() != b_hat.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Y_test is {:?}, expected ({}, {})",
            y_test.dim(),
            x_test.nrows(),
            b_hat.ncols()
        )));
    }
    Ok(())
}

/// Average (per-observation) Kullback–Leibler divergence of the fitted
/// Gaussian model from the generating one, evaluated on the training
/// design:
///
/// ```text
///     (1/n) * [ (n/2) ( log det(Omega_hat^{-1} Omega0)
///                       + tr(Omega_hat Omega0^{-1}) - q )
///               + (1/2) tr( Omega_hat Delta' Delta ) ],
/// ```
///
/// with `Delta = X (B_hat - B0)`. The second term is the trace-identity
/// form of `vec(Delta)' (Omega_hat (x) I_n) vec(Delta) / 2`; the Kronecker
/// product is never formed.
pub fn avg_kl(
    truth: &GroundTruth,
    b_hat: &Array2<f64>,
    omega_hat: &Array2<f64>,
    x: &Array2<f64>,
) -> Result<f64> {
    let q = truth.omega0.nrows();
    let n = x.nrows();
    if b_hat.dim() != truth.b0.dim() {
        return Err(Error::DimensionMismatch("B_hat vs B0".into()));
    }
    if omega_hat.dim() != (q, q) {
        return Err(Error::DimensionMismatch("Omega_hat vs Omega0".into()));
    }
    if x.ncols() != truth.b0.nrows() {
        return Err(Error::DimensionMismatch("X vs B0".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("avg_kl requires n >= 1".into()));
    }

    let chol0 = linalg::cholesky(&truth.omega0)
        .map_err(|_| Error::NotPositiveDefinite("Omega0 in avg_kl".into()))?;
    let chol_hat = linalg::cholesky(omega_hat)
        .map_err(|_| Error::NotPositiveDefinite("Omega_hat in avg_kl".into()))?;
    let inv0 = chol0.inverse()?;
    let mut trace = 0.0;
    for i in 0..q {
        for j in 0..q {
            trace += omega_hat[(i, j)] * inv0[(j, i)];
        }
    }
    let term1 = 0.5 * (chol0.logdet() - chol_hat.logdet() + trace - q as f64);

    let delta = x.dot(&(b_hat - &truth.b0));
    let dtd = delta.t().dot(&delta);
    let mut fit_trace = 0.0;
    for i in 0..q {
        for j in 0..q {
            fit_trace += omega_hat[(i, j)] * dtd[(j, i)];
        }
    }
    let term2 = 0.5 * fit_trace / n as f64;

    Ok(term1 + term2)
}

/// Support-recovery rates. Each rate is `None` when its denominator is
/// zero: no true positives in the truth (sensitivity), no true negatives
/// (specificity), or nothing selected (precision). JSON renders these as
/// `null`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Confusion {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub precision: Option<f64>,
}

/// Confusion rates over every entry of two equally-shaped boolean masks.
pub fn confusion(selected: &Array2<bool>, truth: &Array2<bool>) -> Result<Confusion> {
    if selected.dim() != truth.dim() {
        return Err(Error::DimensionMismatch(format!(
            "confusion: {:?} vs {:?}",
            selected.dim(),
            truth.dim()
        )));
    }
    Ok(confusion_from_pairs(
        selected.iter().copied().zip(truth.iter().copied()),
    ))
}

/// Confusion rates over the strict upper triangle only — the convention
/// for precision-matrix support, where the diagonal is structural.
pub fn confusion_offdiag(selected: &Array2<bool>, truth: &Array2<bool>) -> Result<Confusion> {
    if selected.dim() != truth.dim() || selected.nrows() != selected.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "confusion_offdiag: {:?} vs {:?}",
            selected.dim(),
            truth.dim()
        )));
    }
    let q = selected.nrows();
    let mut pairs = Vec::with_capacity(q * (q.saturating_sub(1)) / 2);
    for k in 0..q {
        for l in (k + 1)..q {
            pairs.push((selected[(k, l)], truth[(k, l)]));
        }
    }
    Ok(confusion_from_pairs(pairs.into_iter()))
}

fn confusion_from_pairs(pairs: impl Iterator<Item = (bool, bool)>) -> Confusion {
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (sel, tru) in pairs {
        match (sel, tru) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let rate = |num: usize, den: usize| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    Confusion {
        sensitivity: rate(tp, tp + fn_),
        specificity: rate(tn, tn + fp),
        precision: rate(tp, tp + fp),
    }
}

/// Everything worth tabulating about one fit, JSON-serializable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mse_b: f64,
    pub mse_omega: f64,
    pub prediction_mse: f64,
    pub avg_kl: f64,
    pub b_sen: Option<f64>,
    pub b_spe: Option<f64>,
    pub b_prc: Option<f64>,
    pub omega_sen: Option<f64>,
    pub omega_spe: Option<f64>,
    pub omega_prc: Option<f64>,
}

/// Assemble the full report from a point estimate, selection masks (e.g.
/// from [`crate::summary::select_by_interval`]), and a held-out test set.
/// Coefficient support is scored over all `p*q` entries; precision support
/// over the off-diagonal upper triangle.
#[allow(clippy::too_many_arguments)]
pub fn compute_report(
    truth: &GroundTruth,
    b_hat: &Array2<f64>,
    omega_hat: &Array2<f64>,
    b_selected: &Array2<bool>,
    omega_selected: &Array2<bool>,
    x_train: &Array2<f64>,
    x_test: &Array2<f64>,
    y_test: &Array2<f64>,
) -> Result<MetricsReport> {
    let b_conf = confusion(b_selected, &truth.b_support())?;
    let o_conf = confusion_offdiag(omega_selected, &truth.omega_support())?;
    Ok(MetricsReport {
        mse_b: mse_elements(b_hat, &truth.b0)?,
        mse_omega: mse_elements(omega_hat, &truth.omega0)?,
        prediction_mse: prediction_mse(b_hat, x_test, y_test)?,
        avg_kl: avg_kl(truth, b_hat, omega_hat, x_train)?,
        b_sen: b_conf.sensitivity,
        b_spe: b_conf.specificity,
        b_prc: b_conf.precision,
        omega_sen: o_conf.sensitivity,
        omega_spe: o_conf.specificity,
        omega_prc: o_conf.precision,
    })
}
