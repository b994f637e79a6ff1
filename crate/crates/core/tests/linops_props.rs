use nalgebra::DMatrix;
use opalg::linops::{eig, hermitian_eig, svd, CMat, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn to_nalgebra(m: &CMat) -> DMatrix<nalgebra::Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m[(i, j)];
        nalgebra::Complex::new(z.re, z.im)
    })
}

fn random_normal(n: usize, r: &mut ChaCha8Rng) -> CMat {
    let u = CMat::random_unitary(n, r);
    let d: Vec<C64> = (0..n).map(|_| opalg::linops::random_in_disc(r).scale(3.0)).collect();
    &(&u * &CMat::diag(&d)) * &u.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_star_identity(seed in any::<u64>(), n in 1usize..=8) {
        let m = CMat::random(n, n, &mut rng(seed));
        let a = m.op_norm().unwrap();
        let b = (&m.adjoint() * &m).op_norm().unwrap();
        prop_assert!((a * a - b).abs() <= 1e-9 * a * a);
    }

    #[test]
    fn normal_eigenpairs_and_reconstruction(seed in any::<u64>(), n in 1usize..=8) {
        let m = random_normal(n, &mut rng(seed));
        let norm = m.norm();
        let dec = eig(&m, 1e-10).unwrap();
        prop_assert!(dec.normal);
        for (k, lambda) in dec.values.iter().enumerate() {
            let v = dec.vectors.column(k);
            let r: f64 = m.mat_vec(&v).iter().zip(&v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(r <= 1e-8 * norm);
        }
        let rebuilt = &(&dec.vectors * &CMat::diag(&dec.values)) * &dec.vectors.adjoint();
        prop_assert!(rebuilt.dist(&m) <= 1e-8 * norm);
    }

    #[test]
    fn norm_dominates_eigenvalues(seed in any::<u64>(), n in 1usize..=8) {
        let m = CMat::random(n, n, &mut rng(seed));
        let r = eig(&m, 1e-10).unwrap().values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(r <= m.op_norm().unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn singular_values_match_nalgebra(seed in any::<u64>(), rows in 1usize..=7, cols in 1usize..=7) {
        let m = CMat::random(rows, cols, &mut rng(seed));
        let ours = svd(&m).singular_values;
        let mut theirs: Vec<f64> = to_nalgebra(&m).singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + theirs[0]));
        }
    }

    #[test]
    fn hermitian_eigenvalues_match_nalgebra(seed in any::<u64>(), n in 1usize..=8) {
        let m = CMat::random_hermitian(n, &mut rng(seed));
        let (ours, _) = hermitian_eig(&m).unwrap();
        let mut theirs: Vec<f64> = to_nalgebra(&m).symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + m.norm()));
        }
    }
}
