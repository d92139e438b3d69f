//! The whitened design operator `X_tilde = X (x) Omega^{1/2}` and the data
//! transformation that produces it.
//!
//! With `R = Omega^{1/2}` (symmetric PSD square root) the `nq x pq`
//! Kronecker product never has to be formed to apply it: reshaping the
//! operand to a matrix turns both directions into two small dense products,
//!
//! ```text
//!     X_tilde v  = rows of (X V) R,     V = reshape(v, p x q),
//!     X_tilde' u = rows of (X' U) R,    U = reshape(u, n x q),
//! ```
//!
//! flattened row-major. For moderate problems the explicit matrix is still
//! cheaper for the Gram product `X_tilde D X_tilde'` (one `dsyrk`), so the
//! operator materializes itself whenever `nq * pq` stays at or under
//! [`MATERIALIZE_LIMIT`] entries and falls back to blockwise accumulation
//! above it. Both routes are exact; only floating-point summation order
//! differs.

use ndarray::{Array1, Array2, Axis};

use crate::types::Dataset;
use crate::{linalg, Error, Result};

/// Materialize the whitened design when it has at most this many entries
/// (2e7 f64s = 160 MB); above this, operate matrix-free.
pub const MATERIALIZE_LIMIT: usize = 20_000_000;

/// `X (x) Omega^{1/2}` as an operator, optionally materialized.
pub struct KroneckerDesign {
    x: Array2<f64>,
    omega_sqrt: Array2<f64>,
    materialized: Option<Array2<f64>>,
}

impl KroneckerDesign {
    /// Build the operator with the default materialization policy.
    pub fn new(x: Array2<f64>, omega_sqrt: Array2<f64>) -> Result<Self> {
        Self::with_limit(x, omega_sqrt, MATERIALIZE_LIMIT)
    }

    /// Build with an explicit materialization threshold (entry count).
    /// Mostly useful to force the matrix-free path in tests.
    pub fn with_limit(x: Array2<f64>, omega_sqrt: Array2<f64>, limit: usize) -> Result<Self> {
        let q = omega_sqrt.nrows();
        if omega_sqrt.ncols() != q {
            return Err(Error::DimensionMismatch(format!(
                "omega_sqrt is {} x {}",
                q,
                omega_sqrt.ncols()
            )));
        }
        if linalg::asymmetry(&omega_sqrt) > 1e-8 {
            return Err(Error::InvalidInput("omega_sqrt must be symmetric".into()));
        }
        let (n, p) = x.dim();
        let mut design = KroneckerDesign { x, omega_sqrt, materialized: None };
        if (n * q).saturating_mul(p * q) <= limit {
            design.materialized = Some(design.build_dense());
        }
        Ok(design)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn q(&self) -> usize {
        self.omega_sqrt.nrows()
    }

    /// Rows of the operator, `n * q`.
    pub fn nrows(&self) -> usize {
        self.n() * self.q()
    }

    /// Columns of the operator, `p * q`.
    pub fn ncols(&self) -> usize {
        self.p() * self.q()
    }

    pub fn is_materialized(&self) -> bool {
        self.materialized.is_some()
    }

    /// The explicit `nq x pq` matrix with entries
    /// `X_tilde[i*q + a, j*q + b] = X[i, j] * R[a, b]`.
    fn build_dense(&self) -> Array2<f64> {
        let (n, p, q) = (self.n(), self.p(), self.q());
        let mut out = Array2::zeros((n * q, p * q));
        for i in 0..n {
            for j in 0..p {
                let xij = self.x[(i, j)];
                if xij == 0.0 {
                    continue;
                }
                for a in 0..q {
                    for b in 0..q {
                        out[(i * q + a, j * q + b)] = xij * self.omega_sqrt[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// `X_tilde v` for `v` of length `pq`.
    pub fn matvec(&self, v: &Array1<f64>) -> Result<Array1<f64>> {
        if v.len() != self.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "matvec: operand length {} vs pq = {}",
                v.len(),
                self.ncols()
            )));
        }
        if let Some(mat) = &self.materialized {
            return Ok(mat.dot(v));
        }
        let v_mat = v
            .view()
            .into_shape_with_order((self.p(), self.q()))
            .expect("contiguous vector reshapes");
        let prod = self.x.dot(&v_mat).dot(&self.omega_sqrt);
        Ok(flatten_rows(prod))
    }

    /// `X_tilde' u` for `u` of length `nq`.
    pub fn tmatvec(&self, u: &Array1<f64>) -> Result<Array1<f64>> {
        if u.len() != self.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "tmatvec: operand length {} vs nq = {}",
                u.len(),
                self.nrows()
            )));
        }
        if let Some(mat) = &self.materialized {
            return Ok(mat.t().dot(u));
        }
        let u_mat = u
            .view()
            .into_shape_with_order((self.n(), self.q()))
            .expect("contiguous vector reshapes");
        let prod = self.x.t().dot(&u_mat).dot(&self.omega_sqrt);
        Ok(flatten_rows(prod))
    }

    /// `X_tilde diag(lambda_star) X_tilde' + I_nq`, the coefficient-step
    /// normal-equation matrix.
    ///
    /// Materialized: scale columns of the dense operator by
    /// `sqrt(lambda_star)` and take one symmetric rank-k product.
    /// Matrix-free: accumulate per predictor `j` the block outer product
    /// `x_{.j} x_{.j}' (x) (R D_j R)` with `D_j` the matching `q`-slice of
    /// `lambda_star`.
    pub fn gram_lambda_plus_eye(&self, lambda_star: &Array1<f64>) -> Result<Array2<f64>> {
        let (n, p, q) = (self.n(), self.p(), self.q());
        if lambda_star.len() != p * q {
            return Err(Error::DimensionMismatch(format!(
                "gram: lambda_star length {} vs pq = {}",
                lambda_star.len(),
                p * q
            )));
        }
        if lambda_star.iter().any(|&v| !v.is_finite() || v <= 0.0) {
            return Err(Error::InvalidInput("lambda_star must be positive and finite".into()));
        }

        let mut m = if let Some(mat) = &self.materialized {
            let mut scaled = mat.clone();
            let roots = lambda_star.mapv(f64::sqrt);
            for mut row in scaled.axis_iter_mut(Axis(0)) {
                row *= &roots;
            }
            linalg::gram(&scaled)?
        } else {
            let nq = n * q;
            let mut m = Array2::<f64>::zeros((nq, nq));
            let r = &self.omega_sqrt;
            for j in 0..p {
                // G_j = R D_j R via column scaling.
                let mut r_scaled = r.clone();
                for b in 0..q {
                    let s = lambda_star[j * q + b];
                    r_scaled.column_mut(b).mapv_inplace(|v| v * s);
                }
                let g = r_scaled.dot(r);
                for i in 0..n {
                    let xi = self.x[(i, j)];
                    if xi == 0.0 {
                        continue;
                    }
                    for i2 in i..n {
                        let w = xi * self.x[(i2, j)];
                        if w == 0.0 {
                            continue;
                        }
                        for a in 0..q {
                            for b in 0..q {
                                m[(i * q + a, i2 * q + b)] += w * g[(a, b)];
                            }
                        }
                    }
                }
            }
            // Mirror the strictly-upper blocks down.
            for r_idx in 1..nq {
                for c_idx in 0..r_idx {
                    m[(r_idx, c_idx)] = m[(c_idx, r_idx)];
                }
            }
            m
        };

        for d in 0..n * q {
            m[(d, d)] += 1.0;
        }
        Ok(m)
    }
}

/// Flatten a standard-layout matrix row by row into a vector.
fn flatten_rows(m: Array2<f64>) -> Array1<f64> {
    let len = m.len();
    m.into_shape_with_order(len).expect("dot products are standard layout")
}

/// Symmetric square root of a positive definite matrix via
/// eigendecomposition, with an optional eigenvalue ridge.
///
/// Eigenvalues are shifted by `jitter` before the square root; if any
/// shifted eigenvalue is still non-positive the matrix is rejected.
pub fn omega_sqrt_with_jitter(omega: &Array2<f64>, jitter: f64) -> Result<Array2<f64>> {
    let q = omega.nrows();
    if omega.ncols() != q {
        return Err(Error::DimensionMismatch(format!(
            "omega_sqrt of {} x {} matrix",
            q,
            omega.ncols()
        )));
    }
    if linalg::asymmetry(omega) > 1e-8 {
        return Err(Error::InvalidInput("omega_sqrt requires a symmetric matrix".into()));
    }
    let (vals, vecs) = linalg::eigh(omega)?;
    let mut shifted = vals.to_owned();
    shifted.mapv_inplace(|v| v + jitter);
    if shifted.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositiveDefinite(format!(
            "omega has min eigenvalue {:.3e} after jitter {:.3e}",
            shifted.iter().cloned().fold(f64::INFINITY, f64::min),
            jitter
        )));
    }
    // R = V' diag(sqrt(d)) V with eigenvectors in the rows of V.
    let mut scaled = vecs.clone();
    for (k, mut row) in scaled.axis_iter_mut(Axis(0)).enumerate() {
        let s = shifted[k].sqrt();
        row.mapv_inplace(|v| v * s);
    }
    let mut r = vecs.t().dot(&scaled);
    // Symmetrize against roundoff.
    for i in 1..q {
        for j in 0..i {
            let avg = 0.5 * (r[(i, j)] + r[(j, i)]);
            r[(i, j)] = avg;
            r[(j, i)] = avg;
        }
    }
    Ok(r)
}

/// [`omega_sqrt_with_jitter`] with no ridge.
pub fn omega_sqrt(omega: &Array2<f64>) -> Result<Array2<f64>> {
    omega_sqrt_with_jitter(omega, 0.0)
}

/// Whiten a dataset against the current precision matrix: returns
/// `y_tilde = vec(R Y')` (equivalently the rows of `Y R` flattened) and the
/// design operator for `X (x) R`.
pub fn transform_data(ds: &Dataset, omega: &Array2<f64>) -> Result<(Array1<f64>, KroneckerDesign)> {
    transform_data_with_jitter(ds, omega, 0.0)
}

/// [`transform_data`] with an eigenvalue ridge for near-singular `omega`.
pub fn transform_data_with_jitter(
    ds: &Dataset,
    omega: &Array2<f64>,
    jitter: f64,
) -> Result<(Array1<f64>, KroneckerDesign)> {
    if omega.nrows() != ds.q() {
        return Err(Error::DimensionMismatch(format!(
            "omega is {} x {} but Y has q = {}",
            omega.nrows(),
            omega.ncols(),
            ds.q()
        )));
    }
    let r = omega_sqrt_with_jitter(omega, jitter)?;
    let y_tilde = flatten_rows(ds.y.dot(&r));
    let design = KroneckerDesign::new(ds.x.clone(), r)?;
    Ok((y_tilde, design))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{std_normal_vec, Rng};
    use crate::oracles::kron;
    use ndarray::array;

    fn max_abs_diff(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn scalar_case_whitens_exactly() {
        // n = p = q = 1, omega = 4: R = 2, y_tilde = 2*3 = 6, X_tilde = 4,
        // and the whitened residual at beta = 1 is 6 - 4 = 2.
        let ds = Dataset::new(array![[2.0]], array![[3.0]]).unwrap();
        let omega = array![[4.0]];
        let (y_tilde, design) = transform_data(&ds, &omega).unwrap();
        assert!((y_tilde[0] - 6.0).abs() < 1e-14);
        let fitted = design.matvec(&array![1.0]).unwrap();
        assert!((fitted[0] - 4.0).abs() < 1e-14);
        assert!((y_tilde[0] - fitted[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn identity_omega_is_pure_reordering() {
        // With Omega = I, y_tilde must equal vec(Y') and the operator must
        // equal X (x) I.
        let mut rng = Rng::from_seed(11);
        let x = Array2::from_shape_fn((4, 3), |_| crate::dist::std_normal(&mut rng));
        let y = Array2::from_shape_fn((4, 2), |_| crate::dist::std_normal(&mut rng));
        let ds = Dataset::new(x.clone(), y.clone()).unwrap();
        let (y_tilde, design) = transform_data(&ds, &Array2::eye(2)).unwrap();
        for i in 0..4 {
            for k in 0..2 {
                assert!((y_tilde[i * 2 + k] - y[(i, k)]).abs() < 1e-14);
            }
        }
        let dense = kron(&x, &Array2::eye(2));
        let v = std_normal_vec(6, &mut rng);
        let got = design.matvec(&v).unwrap();
        let want = dense.dot(&v);
        assert!(max_abs_diff(&got, &want) < 1e-12);
    }

    #[test]
    fn operator_matches_explicit_kronecker() {
        let mut rng = Rng::from_seed(12);
        for &(n, p, q) in &[(3usize, 2usize, 2usize), (5, 4, 3), (2, 6, 4)] {
            let x = Array2::from_shape_fn((n, p), |_| crate::dist::std_normal(&mut rng));
            // Build a random symmetric PD omega and take its root.
            let a = Array2::from_shape_fn((q, q), |_| crate::dist::std_normal(&mut rng));
            let omega = a.dot(&a.t()) + Array2::<f64>::eye(q);
            let r = omega_sqrt(&omega).unwrap();
            let dense = kron(&x, &r);

            for materialize in [true, false] {
                let limit = if materialize { MATERIALIZE_LIMIT } else { 0 };
                let design = KroneckerDesign::with_limit(x.clone(), r.clone(), limit).unwrap();
                assert_eq!(design.is_materialized(), materialize);

                let v = std_normal_vec(p * q, &mut rng);
                let u = std_normal_vec(n * q, &mut rng);
                assert!(max_abs_diff(&design.matvec(&v).unwrap(), &dense.dot(&v)) < 1e-10);
                assert!(max_abs_diff(&design.tmatvec(&u).unwrap(), &dense.t().dot(&u)) < 1e-10);

                let lambda = std_normal_vec(p * q, &mut rng).mapv(|z| z * z + 0.1);
                let got = design.gram_lambda_plus_eye(&lambda).unwrap();
                let mut want = dense.dot(&Array2::from_diag(&lambda)).dot(&dense.t());
                for d in 0..n * q {
                    want[(d, d)] += 1.0;
                }
                let worst = got
                    .iter()
                    .zip(want.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(worst < 1e-9, "gram mismatch {worst} (materialize={materialize})");
            }
        }
    }

    #[test]
    fn omega_sqrt_squares_back() {
        let omega = array![[2.0, 0.5, 0.0], [0.5, 1.5, -0.3], [0.0, -0.3, 1.0]];
        let r = omega_sqrt(&omega).unwrap();
        let back = r.dot(&r);
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[(i, j)] - omega[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(linalg::asymmetry(&r) == 0.0);
    }

    #[test]
    fn omega_sqrt_rejects_indefinite_unless_jittered() {
        let m = array![[1.0, 0.0], [0.0, -0.5]];
        assert!(matches!(omega_sqrt(&m), Err(Error::NotPositiveDefinite(_))));
        // A large enough ridge rescues it.
        let r = omega_sqrt_with_jitter(&m, 1.0).unwrap();
        let back = r.dot(&r);
        assert!((back[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((back[(1, 1)] - 0.5).abs() < 1e-12);
    }
}
