//! Thin safe wrappers over the system BLAS/LAPACK for the dense kernels the
//! sampler spends its time in: symmetric rank-k products, Cholesky
//! factorization and solves, and symmetric eigendecomposition.
//!
//! `ndarray` stores row-major while BLAS/LAPACK expect column-major, so a
//! buffer handed over unchanged is read as the transpose. Every wrapper here
//! either exploits that (`gram`) or works only with symmetric matrices,
//! where the two interpretations agree. [`CholFactor`] keeps its buffer in
//! LAPACK's column-major convention internally and exposes layout-corrected
//! accessors.

use ndarray::{Array1, Array2};

use crate::{Error, Result};

extern "C" {
    fn dsyrk_(
        uplo: *const u8,
        trans: *const u8,
        n: *const i32,
        k: *const i32,
        alpha: *const f64,
        a: *const f64,
        lda: *const i32,
        beta: *const f64,
        c: *mut f64,
        ldc: *const i32,
    );
    fn dpotrf_(uplo: *const u8, n: *const i32, a: *mut f64, lda: *const i32, info: *mut i32);
    fn dpotrs_(
        uplo: *const u8,
        n: *const i32,
        nrhs: *const i32,
        a: *const f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        info: *mut i32,
    );
    fn dtrsv_(
        uplo: *const u8,
        trans: *const u8,
        diag: *const u8,
        n: *const i32,
        a: *const f64,
        lda: *const i32,
        x: *mut f64,
        incx: *const i32,
    );
    fn dsyevd_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
}

fn blas_dim(n: usize, what: &str) -> Result<i32> {
    i32::try_from(n).map_err(|_| Error::InvalidInput(format!("{what} = {n} exceeds BLAS index range")))
}

/// `A A'` for a row-major `n x k` matrix, computed with one `dsyrk` call.
///
/// The raw buffer read column-major is `A'` (`k x n`), so `trans = 'T'`
/// yields `(A')' A' = A A'`. LAPACK fills one triangle; the result is
/// mirrored to a full symmetric matrix before returning.
pub fn gram(a: &Array2<f64>) -> Result<Array2<f64>> {
    let (n, k) = a.dim();
    let ni = blas_dim(n, "gram rows")?;
    let ki = blas_dim(k, "gram cols")?;
    let a_slice = a
        .as_slice()
        .ok_or_else(|| Error::InvalidInput("gram requires a contiguous matrix".into()))?;
    let mut c = Array2::<f64>::zeros((n, n));
    {
        let c_slice = c.as_slice_mut().expect("freshly allocated array is contiguous");
        let (alpha, beta) = (1.0, 0.0);
        unsafe {
            dsyrk_(
                &b'L', &b'T', &ni, &ki, &alpha, a_slice.as_ptr(), &ki, &beta,
                c_slice.as_mut_ptr(), &ni,
            );
        }
    }
    // Column-major lower triangle == row-major upper triangle; mirror down.
    for i in 1..n {
        for j in 0..i {
            c[(i, j)] = c[(j, i)];
        }
    }
    Ok(c)
}

/// Cholesky factorization `M = L L'` of a symmetric positive definite
/// matrix, retaining the factor for repeated solves.
///
/// The buffer holds LAPACK's column-major lower factor, which in the
/// row-major view lives in the upper triangle (the strict lower triangle
/// still holds untouched entries of `M`; accessors mask it).
pub struct CholFactor {
    buf: Array2<f64>,
    n: usize,
}

/// Factor a symmetric positive definite matrix. Fails with
/// [`Error::NotPositiveDefinite`] when a pivot is non-positive.
pub fn cholesky(m: &Array2<f64>) -> Result<CholFactor> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::DimensionMismatch(format!("cholesky of {r} x {c} matrix")));
    }
    let ni = blas_dim(r, "cholesky order")?;
    let mut buf = m.clone();
    if buf.as_slice().is_none() {
        buf = buf.as_standard_layout().into_owned();
    }
    let mut info: i32 = 0;
    unsafe {
        dpotrf_(&b'L', &ni, buf.as_slice_mut().expect("standard layout").as_mut_ptr(), &ni, &mut info);
    }
    match info {
        0 => Ok(CholFactor { buf, n: r }),
        i if i > 0 => Err(Error::NotPositiveDefinite(format!(
            "leading minor of order {i} is not positive definite"
        ))),
        i => Err(Error::LinearSolve(format!("dpotrf illegal argument {}", -i))),
    }
}

impl CholFactor {
    pub fn order(&self) -> usize {
        self.n
    }

    fn raw(&self) -> &[f64] {
        self.buf.as_slice().expect("factor buffer is contiguous")
    }

    /// Solve `M x = b` using both triangular sweeps.
    pub fn solve_vec(&self, b: &Array1<f64>) -> Result<Array1<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "solve_vec: rhs length {} vs order {}",
                b.len(),
                self.n
            )));
        }
        let ni = blas_dim(self.n, "solve order")?;
        let one: i32 = 1;
        let mut x = b.to_owned();
        let mut info: i32 = 0;
        unsafe {
            dpotrs_(
                &b'L', &ni, &one, self.raw().as_ptr(), &ni,
                x.as_slice_mut().expect("owned vector").as_mut_ptr(), &ni, &mut info,
            );
        }
        if info != 0 {
            return Err(Error::LinearSolve(format!("dpotrs info {info}")));
        }
        Ok(x)
    }

    /// Solve `L y = b` (forward substitution against the lower factor).
    pub fn solve_lower(&self, b: &Array1<f64>) -> Result<Array1<f64>> {
        self.trsv(b, b'N')
    }

    /// Solve `L' y = b`. With `z ~ N(0, I)` this turns a factored
    /// *precision* matrix into a correlated draw: `L'^{-1} z ~ N(0, M^{-1})`.
    pub fn solve_lower_t(&self, b: &Array1<f64>) -> Result<Array1<f64>> {
        self.trsv(b, b'T')
    }

    fn trsv(&self, b: &Array1<f64>, trans: u8) -> Result<Array1<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "triangular solve: rhs length {} vs order {}",
                b.len(),
                self.n
            )));
        }
        let ni = blas_dim(self.n, "solve order")?;
        let one: i32 = 1;
        let mut x = b.to_owned();
        unsafe {
            dtrsv_(
                &b'L', &trans, &b'N', &ni, self.raw().as_ptr(), &ni,
                x.as_slice_mut().expect("owned vector").as_mut_ptr(), &one,
            );
        }
        Ok(x)
    }

    /// `M^{-1}` via `n` solves against the identity. The inverse of a
    /// symmetric matrix is symmetric, so the layout question is moot.
    pub fn inverse(&self) -> Result<Array2<f64>> {
        let ni = blas_dim(self.n, "inverse order")?;
        let mut rhs = Array2::<f64>::eye(self.n);
        let mut info: i32 = 0;
        unsafe {
            dpotrs_(
                &b'L', &ni, &ni, self.raw().as_ptr(), &ni,
                rhs.as_slice_mut().expect("eye is contiguous").as_mut_ptr(), &ni, &mut info,
            );
        }
        if info != 0 {
            return Err(Error::LinearSolve(format!("dpotrs info {info}")));
        }
        // Enforce exact symmetry against roundoff so downstream quadratic
        // forms stay symmetric.
        for i in 1..self.n {
            for j in 0..i {
                let avg = 0.5 * (rhs[(i, j)] + rhs[(j, i)]);
                rhs[(i, j)] = avg;
                rhs[(j, i)] = avg;
            }
        }
        Ok(rhs)
    }

    /// `log det M = 2 sum_i log L_ii`.
    pub fn logdet(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            acc += self.buf[(i, i)].ln();
        }
        2.0 * acc
    }

    /// The explicit lower-triangular factor `L` as a row-major matrix
    /// (strict upper triangle zeroed). Useful for `L z` products when
    /// drawing from a factored *covariance*.
    pub fn lower_triangular(&self) -> Array2<f64> {
        // Column-major L(i, j) sits at row-major (j, i).
        Array2::from_shape_fn((self.n, self.n), |(i, j)| if i >= j { self.buf[(j, i)] } else { 0.0 })
    }
}

/// Eigendecomposition of a symmetric matrix via `dsyevd`.
///
/// Returns `(values, vectors)` with eigenvalues ascending and eigenvector
/// `j` stored in **row** `j` of `vectors` (LAPACK's column-major columns are
/// our row-major rows), so `M = vectors' * diag(values) * vectors`.
pub fn eigh(m: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    syev_impl(m, true).map(|(w, v)| (w, v.expect("vectors requested")))
}

/// Eigenvalues only (ascending) of a symmetric matrix.
pub fn eigvalsh(m: &Array2<f64>) -> Result<Array1<f64>> {
    syev_impl(m, false).map(|(w, _)| w)
}

fn syev_impl(m: &Array2<f64>, vectors: bool) -> Result<(Array1<f64>, Option<Array2<f64>>)> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::DimensionMismatch(format!("eigh of {r} x {c} matrix")));
    }
    let ni = blas_dim(r, "eigh order")?;
    let jobz = if vectors { b'V' } else { b'N' };
    let mut a = m.as_standard_layout().into_owned();
    let mut w = Array1::<f64>::zeros(r);
    let mut info: i32 = 0;

    // Workspace query, then the real call.
    let mut work_query = [0.0f64];
    let mut iwork_query = [0i32];
    let neg_one: i32 = -1;
    unsafe {
        dsyevd_(
            &jobz, &b'L', &ni,
            a.as_slice_mut().expect("standard layout").as_mut_ptr(), &ni,
            w.as_slice_mut().expect("owned").as_mut_ptr(),
            work_query.as_mut_ptr(), &neg_one, iwork_query.as_mut_ptr(), &neg_one, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::LinearSolve(format!("dsyevd workspace query info {info}")));
    }
    let lwork = work_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        dsyevd_(
            &jobz, &b'L', &ni,
            a.as_slice_mut().expect("standard layout").as_mut_ptr(), &ni,
            w.as_slice_mut().expect("owned").as_mut_ptr(),
            work.as_mut_ptr(), &lwork, iwork.as_mut_ptr(), &liwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::LinearSolve(format!("dsyevd info {info}")));
    }
    Ok((w, if vectors { Some(a) } else { None }))
}

/// Largest absolute deviation from symmetry, `max_ij |M_ij - M_ji|`.
pub fn asymmetry(m: &Array2<f64>) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}
