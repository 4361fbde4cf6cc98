use proptest::prelude::*;
use toeplipz_core::rng::seeded;
use toeplipz_core::toeplitz::{
    build_conv_matrix, build_dbt, conv2d, conv2d_transpose, is_doubly_block_toeplitz, polys_to_kernel,
};
use toeplipz_core::{kernel_to_polys, Complex64, ConvKernel, TrigPoly2D};

fn kernel_strategy() -> impl Strategy<Value = ConvKernel> {
    (1usize..4, 1usize..4, prop_oneof![Just(1usize), Just(3), Just(5)], any::<u64>()).prop_flat_map(
        |(cout, cin, s, seed)| {
            (0..s).prop_map(move |p| {
                ConvKernel::random_normal(cout, cin, s, p, 1.0, &mut seeded(seed)).unwrap()
            })
        },
    )
}

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conv_matrix_matches_convolution(k in kernel_strategy(), extra in 0usize..4, seed in any::<u64>()) {
        let n = k.degree() + 1 + extra;
        let x = toeplipz_core::rng::standard_normal_nonzero(&mut seeded(seed), k.cin() * n * n);
        let m = build_conv_matrix(&k, n).unwrap();
        let via_matrix = m.transpose().matvec(&real(&x)).unwrap();
        let direct = conv2d(&k, &x, n).unwrap();
        for (a, b) in via_matrix.iter().zip(&direct) {
            prop_assert!((a.re - b).abs() <= 1e-10 && a.im == 0.0);
        }
    }

    #[test]
    fn transpose_is_adjoint(k in kernel_strategy(), extra in 0usize..4, seed in any::<u64>()) {
        let n = k.degree() + 1 + extra;
        let mut rng = seeded(seed);
        let x = toeplipz_core::rng::standard_normal_nonzero(&mut rng, k.cin() * n * n);
        let y = toeplipz_core::rng::standard_normal_nonzero(&mut rng, k.cout() * n * n);
        let lhs: f64 = conv2d(&k, &x, n).unwrap().iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = x.iter().zip(&conv2d_transpose(&k, &y, n).unwrap()).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn dbt_is_structured(d in 0usize..3, extra in 0usize..4, seed in any::<u64>()) {
        let n = d + 1 + extra;
        let mut rng = seeded(seed);
        let side = 2 * d + 1;
        let coeffs = toeplipz_core::rng::standard_normal_nonzero(&mut rng, side * side);
        let f = TrigPoly2D::new(d, coeffs).unwrap();
        let m = build_dbt(&f, n).unwrap();
        prop_assert_eq!(m.rows(), n * n);
        prop_assert!(is_doubly_block_toeplitz(&m, n));
    }

    #[test]
    fn polys_roundtrip(k in kernel_strategy()) {
        // Off-center padding drops taps outside the band, so only centered kernels roundtrip.
        prop_assume!(k.padding() == k.size() / 2);
        let back = polys_to_kernel(&kernel_to_polys(&k), k.size(), k.padding()).unwrap();
        prop_assert_eq!(back, k);
    }

    #[test]
    fn poly_is_periodic(k in kernel_strategy(), w1 in -10.0f64..10.0, w2 in -10.0f64..10.0, a in -3i32..4, b in -3i32..4) {
        let tau = 2.0 * std::f64::consts::PI;
        for row in kernel_to_polys(&k) {
            for f in row {
                let z0 = f.eval(w1, w2);
                let z1 = f.eval(w1 + tau * a as f64, w2 + tau * b as f64);
                prop_assert!((z0 - z1).norm() <= 1e-9 * (1.0 + z0.norm()));
            }
        }
    }
}

#[test]
fn rejects_invalid_kernels() {
    assert!(ConvKernel::new(1, 1, 2, 0, vec![0.0; 4]).is_err());
    assert!(ConvKernel::new(1, 1, 3, 3, vec![0.0; 9]).is_err());
    assert!(ConvKernel::new(1, 1, 3, 1, vec![0.0; 8]).is_err());
    assert!(ConvKernel::new(1, 1, 3, 1, vec![f64::NAN; 9]).is_err());
}

#[test]
fn grid_must_exceed_degree() {
    let k = ConvKernel::delta(5).unwrap();
    assert!(build_conv_matrix(&k, 2).is_err());
    assert!(build_conv_matrix(&k, 3).is_ok());
}
