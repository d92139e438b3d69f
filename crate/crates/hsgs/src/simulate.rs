//! Synthetic-data generators for benchmarking: structured sparse precision
//! matrices, sparse coefficient matrices, correlated Gaussian designs, and
//! matrix-normal responses.
//!
//! The default parameter values ([`DEFAULT_AR1_VALUE`] and friends) are the
//! standard benchmark settings used throughout the examples and tests.

use ndarray::Array2;
use rand::Rng as _;

use crate::dist::{std_normal, std_normal_vec, Rng};
use crate::{linalg, Error, Result};

/// Off-diagonal value of the AR(1)-style tridiagonal precision.
pub const DEFAULT_AR1_VALUE: f64 = 0.45;
/// Within-block value of the block-diagonal (cliques) precision.
pub const DEFAULT_CLIQUES_VALUE: f64 = 0.75;
/// Block size of the cliques precision.
pub const DEFAULT_CLIQUES_GROUP: usize = 3;
/// Hub weight of the star precision.
pub const DEFAULT_STAR_VALUE: f64 = 0.25;
/// Decay of the Toeplitz design covariance, `T_ij = rho^{|i-j|}`.
pub const DEFAULT_TOEPLITZ_RHO: f64 = 0.7;
/// Fraction of nonzero coefficients.
pub const DEFAULT_SPARSITY: f64 = 0.05;

/// Tridiagonal precision: unit diagonal, `value` on the first off-diagonal.
///
/// Eigenvalues are `1 + 2 value cos(k pi / (q+1))`, so `|value| < 0.5`
/// guarantees positive definiteness for every `q`; that bound is enforced.
pub fn precision_ar1(q: usize, value: f64) -> Result<Array2<f64>> {
    if q < 1 {
        return Err(Error::InvalidInput("precision_ar1 requires q >= 1".into()));
    }
    if !value.is_finite() || value.abs() >= 0.5 {
        return Err(Error::InvalidInput(format!(
            "precision_ar1 requires |value| < 0.5 for guaranteed positive definiteness, got {value}"
        )));
    }
    Ok(Array2::from_shape_fn((q, q), |(i, j)| {
        if i == j {
            1.0
        } else if i.abs_diff(j) == 1 {
            value
        } else {
            0.0
        }
    }))
}

/// Block-diagonal precision of fully connected cliques: unit diagonal,
/// `value` everywhere inside each `group_size` block.
///
/// Each block has eigenvalues `1 - value` (multiplicity `group_size - 1`)
/// and `1 + (group_size - 1) value`, so positive definiteness requires
/// `-1/(group_size - 1) < value < 1`; that bound is enforced. When `q` is
/// not a multiple of `group_size`: with `strict` the call fails, otherwise
/// the trailing `q mod group_size` variables are left isolated (unit
/// diagonal, no edges).
pub fn precision_cliques(
    q: usize,
    group_size: usize,
    value: f64,
    strict: bool,
) -> Result<Array2<f64>> {
    if q < 1 || group_size < 1 {
        return Err(Error::InvalidInput(
            "precision_cliques requires q >= 1 and group_size >= 1".into(),
        ));
    }
    if !value.is_finite()
        || value >= 1.0
        || (group_size > 1 && value <= -1.0 / (group_size as f64 - 1.0))
    {
        return Err(Error::InvalidInput(format!(
            "precision_cliques block with group_size {group_size} and value {value} is not positive definite"
        )));
    }
    let remainder = q % group_size;
    if remainder != 0 && strict {
        return Err(Error::InvalidInput(format!(
            "q = {q} is not divisible by group_size = {group_size} (strict mode)"
        )));
    }
    let full = q - remainder;
    Ok(Array2::from_shape_fn((q, q), |(i, j)| {
        if i == j {
            1.0
        } else if i < full && j < full && i / group_size == j / group_size {
            value
        } else {
            0.0
        }
    }))
}

/// A star (hub) precision candidate plus its definiteness status.
#[derive(Debug, Clone)]
pub struct StarPrecision {
    pub matrix: Array2<f64>,
    /// Whether the matrix is strictly positive definite; false for
    /// combinations with `value^2 (q - 1) >= 1`. Callers decide how to
    /// handle indefinite configurations.
    pub positive_definite: bool,
}

/// Star precision: unit diagonal, `value` between variable 0 (the hub) and
/// everyone else. Spectrum is `1 +- value sqrt(q-1)` plus ones, so the
/// matrix loses positive definiteness once `value^2 (q-1) >= 1`; the
/// matrix is returned regardless, with the status flagged.
pub fn precision_star(q: usize, value: f64) -> Result<StarPrecision> {
    if q < 1 {
        return Err(Error::InvalidInput("precision_star requires q >= 1".into()));
    }
    if !value.is_finite() {
        return Err(Error::NonFinite("precision_star value".into()));
    }
    let matrix = Array2::from_shape_fn((q, q), |(i, j)| {
        if i == j {
            1.0
        } else if i == 0 || j == 0 {
            value
        } else {
            0.0
        }
    });
    let positive_definite = value * value * (q as f64 - 1.0) < 1.0;
    Ok(StarPrecision { matrix, positive_definite })
}

/// How nonzero coefficients are drawn.
#[derive(Debug, Clone, Copy)]
pub enum CoefDist {
    /// Magnitude uniform on (0.5, 2), sign fair-coin: values in
    /// `(-2, -0.5) U (0.5, 2)`.
    Uniform,
    /// Every nonzero equals the given constant.
    Constant(f64),
}

/// Sparse `p x q` coefficient matrix with exactly
/// `round(sparsity * p * q)` nonzero entries at positions sampled without
/// replacement. Returns the matrix and its boolean support mask.
pub fn coef_matrix(
    p: usize,
    q: usize,
    sparsity: f64,
    dist: CoefDist,
    rng: &mut Rng,
) -> Result<(Array2<f64>, Array2<bool>)> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidInput("coef_matrix requires p >= 1 and q >= 1".into()));
    }
    if !(0.0..=1.0).contains(&sparsity) {
        return Err(Error::InvalidInput(format!(
            "sparsity must be in [0, 1], got {sparsity}"
        )));
    }
    let total = p * q;
    let nonzeros = (sparsity * total as f64).round() as usize;
    let positions = rand::seq::index::sample(rng, total, nonzeros);

    let mut b = Array2::zeros((p, q));
    let mut mask = Array2::from_elem((p, q), false);
    for pos in positions.iter() {
        let (i, k) = (pos / q, pos % q);
        let value = match dist {
            CoefDist::Uniform => {
                let mag = rng.random_range(0.5..2.0);
                if rng.random_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            }
            CoefDist::Constant(c) => c,
        };
        b[(i, k)] = value;
        mask[(i, k)] = true;
    }
    Ok((b, mask))
}

/// `n x p` design with i.i.d. rows `N(0, T)`, `T_ij = rho^{|i-j|}`
/// (Toeplitz). Rows are generated as `L z` with `T = L L'`.
pub fn design_toeplitz(n: usize, p: usize, rho: f64, rng: &mut Rng) -> Result<Array2<f64>> {
    if n < 1 || p < 1 {
        return Err(Error::InvalidInput("design_toeplitz requires n >= 1 and p >= 1".into()));
    }
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "Toeplitz decay must satisfy |rho| < 1, got {rho}"
        )));
    }
    let t = Array2::from_shape_fn((p, p), |(i, j)| rho.powi(i.abs_diff(j) as i32));
    let l = linalg::cholesky(&t)
        .map_err(|e| Error::InvalidInput(format!("Toeplitz covariance not factorable: {e}")))?
        .lower_triangular();
    let z = Array2::from_shape_fn((n, p), |_| std_normal(rng));
    // Row i of Z L' equals L z_i, giving covariance L L' = T.
    Ok(z.dot(&l.t()))
}

/// Responses `Y = X B + E` with i.i.d. error rows `N(0, Omega^{-1})`.
///
/// With `Omega = L L'`, each error row is `L'^{-1} z`, so only triangular
/// solves are needed — `Omega` is never inverted explicitly.
pub fn gen_response(
    x: &Array2<f64>,
    b: &Array2<f64>,
    omega: &Array2<f64>,
    rng: &mut Rng,
) -> Result<Array2<f64>> {
    let (_, p) = x.dim();
    let (bp, q) = b.dim();
    if bp != p {
        return Err(Error::DimensionMismatch(format!(
            "X has p = {p} columns but B has {bp} rows"
        )));
    }
    if omega.nrows() != q || omega.ncols() != q {
        return Err(Error::DimensionMismatch(format!(
            "B has q = {q} but omega is {} x {}",
            omega.nrows(),
            omega.ncols()
        )));
    }
    if linalg::asymmetry(omega) > 1e-8 {
        return Err(Error::InvalidInput("omega must be symmetric".into()));
    }
    let chol = linalg::cholesky(omega)
        .map_err(|_| Error::NotPositiveDefinite("gen_response omega".into()))?;
    let mut y = x.dot(b);
    for mut row in y.rows_mut() {
        let z = std_normal_vec(q, rng);
        let e = chol.solve_lower_t(&z)?;
        for k in 0..q {
            row[k] += e[k];
        }
    }
    Ok(y)
}

/// RNG seed for replicate `index` of a study seeded with `seed`
/// (wrapping addition — the same rule as [`Rng::replicate`]).
pub fn replicate_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::min_eigenvalue;

    #[test]
    fn ar1_structure_and_margin() {
        let m = precision_ar1(25, DEFAULT_AR1_VALUE).unwrap();
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(3, 4)], 0.45);
        assert_eq!(m[(3, 5)], 0.0);
        let min = min_eigenvalue(&m).unwrap();
        let want = 1.0 - 0.9 * (std::f64::consts::PI / 26.0).cos();
        assert!((min - want).abs() < 1e-12);

        assert!(precision_ar1(5, 0.5).is_err());
        assert!(precision_ar1(0, 0.1).is_err());
        assert!(precision_ar1(1, 0.45).unwrap() == ndarray::array![[1.0]]);
    }

    #[test]
    fn cliques_blocks_and_padding() {
        let m = precision_cliques(6, 3, DEFAULT_CLIQUES_VALUE, true).unwrap();
        assert_eq!(m[(0, 1)], 0.75);
        assert_eq!(m[(0, 2)], 0.75);
        assert_eq!(m[(0, 3)], 0.0);
        assert_eq!(m[(4, 5)], 0.75);
        // Spectrum per block: {1 - v, 1 - v, 1 + 2v} = {0.25, 0.25, 2.5}.
        let min = min_eigenvalue(&m).unwrap();
        assert!((min - 0.25).abs() < 1e-12);

        // q = 25 with blocks of 3: strict refuses, lenient pads one
        // isolated variable.
        assert!(precision_cliques(25, 3, 0.75, true).is_err());
        let padded = precision_cliques(25, 3, 0.75, false).unwrap();
        let nnz = padded.iter().filter(|v| **v != 0.0).count();
        assert_eq!(nnz, 8 * 9 + 1);
        for j in 0..24 {
            assert_eq!(padded[(24, j)], 0.0);
        }
        assert_eq!(padded[(24, 24)], 1.0);

        // Indefinite block parameters are rejected.
        assert!(precision_cliques(6, 3, 1.0, true).is_err());
        assert!(precision_cliques(6, 3, -0.5, true).is_err());
    }

    #[test]
    fn star_flags_definiteness() {
        let ok = precision_star(10, DEFAULT_STAR_VALUE).unwrap();
        assert!(ok.positive_definite);
        let min = min_eigenvalue(&ok.matrix).unwrap();
        assert!((min - (1.0 - 0.25 * 3.0)).abs() < 1e-12);

        let bad = precision_star(25, DEFAULT_STAR_VALUE).unwrap();
        assert!(!bad.positive_definite);
        let min = min_eigenvalue(&bad.matrix).unwrap();
        assert!((min - (1.0 - 0.25 * 24.0f64.sqrt())).abs() < 1e-12);
        assert!(min < 0.0);
    }

    #[test]
    fn coef_matrix_counts_and_ranges() {
        let mut rng = Rng::from_seed(81);
        let (b, mask) = coef_matrix(200, 25, 0.05, CoefDist::Uniform, &mut rng).unwrap();
        let nnz = b.iter().filter(|v| **v != 0.0).count();
        assert_eq!(nnz, 250);
        assert_eq!(mask.iter().filter(|m| **m).count(), 250);
        for (&v, &m) in b.iter().zip(mask.iter()) {
            assert_eq!(v != 0.0, m);
            if v != 0.0 {
                assert!((0.5..=2.0).contains(&v.abs()), "value {v}");
            }
        }

        let (b5, _) = coef_matrix(10, 4, 0.2, CoefDist::Constant(5.0), &mut rng).unwrap();
        let nnz5: Vec<f64> = b5.iter().cloned().filter(|v| *v != 0.0).collect();
        assert_eq!(nnz5.len(), 8);
        assert!(nnz5.iter().all(|&v| v == 5.0));

        let (zero, _) = coef_matrix(3, 3, 0.0, CoefDist::Uniform, &mut rng).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));

        // Same seed, same placement.
        let (a1, _) = coef_matrix(20, 5, 0.1, CoefDist::Uniform, &mut Rng::from_seed(5)).unwrap();
        let (a2, _) = coef_matrix(20, 5, 0.1, CoefDist::Uniform, &mut Rng::from_seed(5)).unwrap();
        assert_eq!(a1, a2);

        assert!(coef_matrix(3, 3, 1.5, CoefDist::Uniform, &mut rng).is_err());
    }

    #[test]
    fn toeplitz_design_covariance() {
        let mut rng = Rng::from_seed(82);
        let n = 20_000;
        let x = design_toeplitz(n, 3, DEFAULT_TOEPLITZ_RHO, &mut rng).unwrap();
        let mut cov = Array2::<f64>::zeros((3, 3));
        for row in x.rows() {
            for i in 0..3 {
                for j in 0..3 {
                    cov[(i, j)] += row[i] * row[j];
                }
            }
        }
        cov.mapv_inplace(|v| v / n as f64);
        assert!((cov[(0, 0)] - 1.0).abs() < 0.05);
        assert!((cov[(0, 1)] - 0.7).abs() < 0.05);
        assert!((cov[(0, 2)] - 0.49).abs() < 0.05, "lag-2 cov {}", cov[(0, 2)]);

        assert!(design_toeplitz(10, 2, 1.0, &mut rng).is_err());
    }

    #[test]
    fn response_covariance_is_omega_inverse() {
        let mut rng = Rng::from_seed(83);
        let n = 20_000;
        let x = Array2::zeros((n, 1));
        let b = Array2::zeros((1, 2));
        let omega = ndarray::array![[1.0, 0.45], [0.45, 1.0]];
        let y = gen_response(&x, &b, &omega, &mut rng).unwrap();
        let det = 1.0 - 0.45 * 0.45;
        let mut cov = Array2::<f64>::zeros((2, 2));
        for row in y.rows() {
            for i in 0..2 {
                for j in 0..2 {
                    cov[(i, j)] += row[i] * row[j];
                }
            }
        }
        cov.mapv_inplace(|v| v / n as f64);
        assert!((cov[(0, 0)] - 1.0 / det).abs() < 0.05, "var {}", cov[(0, 0)]);
        assert!((cov[(0, 1)] + 0.45 / det).abs() < 0.05, "cov {}", cov[(0, 1)]);
    }

    /// Whitened second moment: with B = 0, E[y' Omega y] = q exactly, so
    /// tr(n^{-1} Y'Y Omega) concentrates near q.
    #[test]
    fn whitened_trace_concentrates_at_q() {
        let mut rng = Rng::from_seed(84);
        let (n, q) = (10_000, 3);
        let omega = precision_ar1(q, DEFAULT_AR1_VALUE).unwrap();
        let x = Array2::zeros((n, 1));
        let y = gen_response(&x, &Array2::zeros((1, q)), &omega, &mut rng).unwrap();
        let s = y.t().dot(&y);
        let mut tr = 0.0;
        for i in 0..q {
            for j in 0..q {
                tr += s[(i, j)] * omega[(j, i)];
            }
        }
        tr /= n as f64;
        assert!((tr - q as f64).abs() / (q as f64) < 0.05, "trace {tr}");
    }

    #[test]
    fn replicate_seeds_wrap() {
        assert_eq!(replicate_seed(10, 3), 13);
        assert_eq!(replicate_seed(u64::MAX, 2), 1);
    }
}
