//! Randomized invariants for the serialization formats and the small
//! numeric helpers they depend on.

use ndarray::Array2;
use proptest::prelude::*;

use hsgs::io::{read_matrix_csv, read_samples, write_matrix_csv, write_samples};
use hsgs::summary::quantile_sorted;
use hsgs::types::{
    compress_triangle, expand_triangle, tri_len, triangle_order, GibbsConfig, PosteriorSamples,
};

/// Finite doubles spanning many binades, including negatives and zero.
fn finite_f64() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        -1e12..1e12f64,
        (-60i32..60).prop_flat_map(|e| (0.5..2.0f64).prop_map(move |m| m * 2f64.powi(e))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_roundtrip_is_bit_exact(
        rows in 1usize..6,
        cols in 1usize..6,
        values in proptest::collection::vec(finite_f64(), 36),
    ) {
        let m = Array2::from_shape_fn((rows, cols), |(i, j)| values[i * 6 + j]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_matrix_csv(&path, &m).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        prop_assert_eq!(m, back);
    }

    #[test]
    fn triangle_roundtrip_is_exact(
        q in 1usize..8,
        values in proptest::collection::vec(finite_f64(), 36),
    ) {
        // Build a symmetric matrix, pack it, and unpack it.
        let mut m = Array2::zeros((q, q));
        let mut idx = 0;
        for k in 0..q {
            for l in k..q {
                m[(k, l)] = values[idx];
                m[(l, k)] = values[idx];
                idx += 1;
            }
        }
        let tri = compress_triangle(&m).unwrap();
        prop_assert_eq!(tri.len(), tri_len(q));
        prop_assert_eq!(triangle_order(tri.len()).unwrap(), q);
        let back = expand_triangle(&tri).unwrap();
        prop_assert_eq!(m, back);
    }

    #[test]
    fn sample_stream_roundtrip_is_bit_exact(
        n in 1usize..20,
        p in 1usize..4,
        q in 1usize..4,
        nmc in 1usize..5,
        seed in any::<u64>(),
    ) {
        let mut rng = hsgs::dist::Rng::from_seed(seed);
        let beta_draws =
            Array2::from_shape_fn((nmc, p * q), |_| hsgs::dist::std_normal(&mut rng));
        let omega_draws =
            Array2::from_shape_fn((nmc, tri_len(q)), |_| hsgs::dist::std_normal(&mut rng));
        let samples = PosteriorSamples {
            beta_draws,
            omega_draws,
            dims: (n, p, q),
            config: GibbsConfig { burnin: 0, nmc, thin: 1, seed: 0, pd_jitter: 0.0 },
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("draws.bin");
        write_samples(&path, &samples).unwrap();
        let back = read_samples(&path).unwrap();
        prop_assert_eq!(back.dims, samples.dims);
        prop_assert_eq!(back.beta_draws, samples.beta_draws);
        prop_assert_eq!(back.omega_draws, samples.omega_draws);
    }

    #[test]
    fn quantiles_are_bounded_and_monotone(
        mut values in proptest::collection::vec(-1e6..1e6f64, 1..40),
        p1 in 0.0..1.0f64,
        p2 in 0.0..1.0f64,
    ) {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (lo, hi) = (p1.min(p2), p1.max(p2));
        let q_lo = quantile_sorted(&values, lo);
        let q_hi = quantile_sorted(&values, hi);
        prop_assert!(q_lo >= values[0] && q_hi <= *values.last().unwrap());
        prop_assert!(q_lo <= q_hi);
    }
}
