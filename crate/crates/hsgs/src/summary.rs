//! Posterior summaries: means, equal-tailed credible intervals, selection
//! by interval exclusion of zero, and ROC sweeps over either the credible
//! level or a magnitude threshold.
//!
//! Quantiles use linear interpolation of order statistics (the common
//! "type 7" rule): for `n` sorted draws and probability `pr`, the index is
//! `h = (n - 1) pr` and the quantile interpolates between `floor(h)` and
//! `floor(h) + 1`.

use ndarray::{Array1, Array2};

use crate::types::{beta_to_coef, expand_triangle, PosteriorSamples};
use crate::{Error, Result};

/// Posterior means as point estimates: `(B_hat, Omega_hat)`.
pub fn posterior_mean(samples: &PosteriorSamples) -> Result<(Array2<f64>, Array2<f64>)> {
    samples.validate()?;
    let (_, p, q) = samples.dims;
    let nmc = samples.nmc() as f64;
    let beta_mean = samples.beta_draws.sum_axis(ndarray::Axis(0)) / nmc;
    let omega_mean_tri = samples.omega_draws.sum_axis(ndarray::Axis(0)) / nmc;
    Ok((beta_to_coef(&beta_mean, p, q)?, expand_triangle(&omega_mean_tri)?))
}

/// Per-element equal-tailed credible bounds at a common level.
///
/// `omega_lo`/`omega_hi` are full symmetric matrices; the diagonal entries
/// are computed like any other but never participate in selection.
#[derive(Debug, Clone)]
pub struct Intervals {
    pub b_lo: Array2<f64>,
    pub b_hi: Array2<f64>,
    pub omega_lo: Array2<f64>,
    pub omega_hi: Array2<f64>,
    pub level: f64,
}

/// Equal-tailed credible intervals at `level` (e.g. 0.75 spans the 12.5th
/// to 87.5th percentiles of each element's draws).
pub fn credible_interval(samples: &PosteriorSamples, level: f64) -> Result<Intervals> {
    samples.validate()?;
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidInput(format!(
            "credible level must be in (0, 1), got {level}"
        )));
    }
    let (_, p, q) = samples.dims;
    let lo_pr = (1.0 - level) / 2.0;
    let hi_pr = (1.0 + level) / 2.0;

    let (b_lo_flat, b_hi_flat) = column_quantiles(&samples.beta_draws, lo_pr, hi_pr);
    let (o_lo_tri, o_hi_tri) = column_quantiles(&samples.omega_draws, lo_pr, hi_pr);

    Ok(Intervals {
        b_lo: beta_to_coef(&b_lo_flat, p, q)?,
        b_hi: beta_to_coef(&b_hi_flat, p, q)?,
        omega_lo: expand_triangle(&o_lo_tri)?,
        omega_hi: expand_triangle(&o_hi_tri)?,
        level,
    })
}

fn column_quantiles(draws: &Array2<f64>, lo_pr: f64, hi_pr: f64) -> (Array1<f64>, Array1<f64>) {
    let cols = draws.ncols();
    let mut lo = Array1::zeros(cols);
    let mut hi = Array1::zeros(cols);
    let mut buf: Vec<f64> = Vec::with_capacity(draws.nrows());
    for j in 0..cols {
        buf.clear();
        buf.extend(draws.column(j).iter());
        buf.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
        lo[j] = quantile_sorted(&buf, lo_pr);
        hi[j] = quantile_sorted(&buf, hi_pr);
    }
    (lo, hi)
}

/// Type-7 quantile of pre-sorted data.
pub fn quantile_sorted(sorted: &[f64], pr: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&pr));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * pr;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[n - 1]
    }
}

/// Support calls made from credible intervals.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    /// True where the interval for `B_ik` excludes zero.
    pub b_selected: Array2<bool>,
    /// True where the interval for an **off-diagonal** `Omega_kl` excludes
    /// zero; the diagonal is always false (it is not a support question).
    pub omega_selected: Array2<bool>,
    pub level: f64,
}

/// Select elements whose equal-tailed interval excludes zero
/// (`lo > 0` or `hi < 0`).
pub fn select_by_interval(intervals: &Intervals) -> SelectionResult {
    let excludes = |lo: f64, hi: f64| lo > 0.0 || hi < 0.0;
    let (p, q) = intervals.b_lo.dim();
    let b_selected =
        Array2::from_shape_fn((p, q), |ij| excludes(intervals.b_lo[ij], intervals.b_hi[ij]));
    let qq = intervals.omega_lo.nrows();
    let omega_selected = Array2::from_shape_fn((qq, qq), |(k, l)| {
        k != l && excludes(intervals.omega_lo[(k, l)], intervals.omega_hi[(k, l)])
    });
    SelectionResult { b_selected, omega_selected, level: intervals.level }
}

/// One operating point of an ROC sweep. `cut` is the credible level or the
/// magnitude threshold that produced it.
#[derive(Debug, Clone, Copy)]
pub struct RocPoint {
    pub cut: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Which block of the model an ROC sweep scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RocTarget {
    /// All `p*q` coefficient entries.
    Coefficients,
    /// Off-diagonal upper-triangle precision entries.
    Precision,
}

/// The default credible-level grid: 0.01 to 0.99 in steps of 0.01.
pub fn default_level_grid() -> Vec<f64> {
    (1..100).map(|i| i as f64 / 100.0).collect()
}

/// ROC curve from interval selection: sweep the credible level over
/// `levels`, selecting elements whose equal-tailed interval excludes zero,
/// scored against the true support. Wider intervals select fewer elements,
/// so TPR and FPR are non-increasing in the level.
///
/// `truth` is the `p x q` support mask for [`RocTarget::Coefficients`] or
/// the `q x q` off-diagonal support mask for [`RocTarget::Precision`].
pub fn roc_sweep_bayes(
    samples: &PosteriorSamples,
    truth: &Array2<bool>,
    target: RocTarget,
    levels: &[f64],
) -> Result<Vec<RocPoint>> {
    samples.validate()?;
    if levels.iter().any(|&l| !(0.0 < l && l < 1.0)) {
        return Err(Error::InvalidInput("credible levels must be in (0, 1)".into()));
    }
    let (_, p, q) = samples.dims;

    // Collect (sorted draws, truth flag) per scored element.
    let mut columns: Vec<(Vec<f64>, bool)> = Vec::new();
    match target {
        RocTarget::Coefficients => {
            if truth.dim() != (p, q) {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient truth mask is {:?}, expected ({p}, {q})",
                    truth.dim()
                )));
            }
            for j in 0..p * q {
                let mut v: Vec<f64> = samples.beta_draws.column(j).to_vec();
                v.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
                columns.push((v, truth[(j / q, j % q)]));
            }
        }
        RocTarget::Precision => {
            if truth.dim() != (q, q) {
                return Err(Error::DimensionMismatch(format!(
                    "precision truth mask is {:?}, expected ({q}, {q})",
                    truth.dim()
                )));
            }
            let mut idx = 0;
            for k in 0..q {
                for l in k..q {
                    if k != l {
                        let mut v: Vec<f64> = samples.omega_draws.column(idx).to_vec();
                        v.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
                        columns.push((v, truth[(k, l)]));
                    }
                    idx += 1;
                }
            }
        }
    }

    let mut points = Vec::with_capacity(levels.len());
    for &level in levels {
        let lo_pr = (1.0 - level) / 2.0;
        let hi_pr = (1.0 + level) / 2.0;
        let mut counts = RateCounts::default();
        for (sorted, is_true) in &columns {
            let lo = quantile_sorted(sorted, lo_pr);
            let hi = quantile_sorted(sorted, hi_pr);
            counts.add(lo > 0.0 || hi < 0.0, *is_true);
        }
        points.push(RocPoint { cut: level, fpr: counts.fpr(), tpr: counts.tpr() });
    }
    Ok(points)
}

/// ROC curve from a point estimate: select entries with `|estimate| > t`
/// for each threshold `t`. With `grid = None` the thresholds are the
/// sorted distinct absolute values of the scored entries (the full
/// attainable curve).
pub fn roc_sweep_threshold(
    estimate: &Array2<f64>,
    truth: &Array2<bool>,
    target: RocTarget,
    grid: Option<&[f64]>,
) -> Result<Vec<RocPoint>> {
    if estimate.dim() != truth.dim() {
        return Err(Error::DimensionMismatch(format!(
            "estimate is {:?} but truth mask is {:?}",
            estimate.dim(),
            truth.dim()
        )));
    }
    let mut scored: Vec<(f64, bool)> = Vec::new();
    match target {
        RocTarget::Coefficients => {
            for (e, t) in estimate.iter().zip(truth.iter()) {
                scored.push((e.abs(), *t));
            }
        }
        RocTarget::Precision => {
            let q = estimate.nrows();
            if estimate.ncols() != q {
                return Err(Error::DimensionMismatch(
                    "precision estimate must be square".into(),
                ));
            }
            for k in 0..q {
                for l in (k + 1)..q {
                    scored.push((estimate[(k, l)].abs(), truth[(k, l)]));
                }
            }
        }
    }

    let thresholds: Vec<f64> = match grid {
        Some(g) => g.to_vec(),
        None => {
            let mut t: Vec<f64> = scored.iter().map(|(a, _)| *a).collect();
            t.sort_by(|a, b| a.partial_cmp(b).expect("finite estimates"));
            t.dedup();
            t
        }
    };

    let mut points = Vec::with_capacity(thresholds.len());
    for &t in &thresholds {
        let mut counts = RateCounts::default();
        for &(mag, is_true) in &scored {
            counts.add(mag > t, is_true);
        }
        points.push(RocPoint { cut: t, fpr: counts.fpr(), tpr: counts.tpr() });
    }
    Ok(points)
}

#[derive(Default)]
struct RateCounts {
    tp: usize,
    fp: usize,
    tn: usize,
    fn_: usize,
}

impl RateCounts {
    fn add(&mut self, selected: bool, is_true: bool) {
        match (selected, is_true) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    /// TPR, with the vacuous no-positives case scored as 1.
    fn tpr(&self) -> f64 {
        if self.tp + self.fn_ == 0 {
            1.0
        } else {
            self.tp as f64 / (self.tp + self.fn_) as f64
        }
    }

    /// FPR, with the vacuous no-negatives case scored as 0.
    fn fpr(&self) -> f64 {
        if self.fp + self.tn == 0 {
            0.0
        } else {
            self.fp as f64 / (self.fp + self.tn) as f64
        }
    }
}
