fn main() {
    // All dense kernels (syrk/potrf/potrs/trsv/syevd and ndarray's cblas_dgemm)
    // resolve against the system OpenBLAS.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
