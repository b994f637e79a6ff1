use opalg::elemcalc::{abs, jordan_parts, polar_factorise, positive_sqrt, sqrt_poly_gap, sqrt_series};
use opalg::linops::{hermitian_eig, CMat};
use opalg::specanalysis::positive_test;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn min_eig(m: &CMat) -> f64 {
    hermitian_eig(m).unwrap().0[0]
}

fn random_positive(n: usize, r: &mut ChaCha8Rng) -> CMat {
    let x = CMat::random(n, n, r);
    &x.adjoint() * &x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sqrt_poly_monotone(t in 0.0f64..=1.0, n in 1usize..200) {
        prop_assert!(sqrt_poly_gap(t, n + 1) <= sqrt_poly_gap(t, n));
        prop_assert!(sqrt_poly_gap(t, n) >= 0.0);
    }

    #[test]
    fn sqrt_of_square(seed in any::<u64>(), n in 1usize..=6) {
        let a = random_positive(n, &mut rng(seed));
        let s = positive_sqrt(&(&a * &a), 1e-12).unwrap();
        prop_assert!(s.dist(&a) <= 1e-8 * (1.0 + a.norm()));
    }

    #[test]
    fn series_matches_eigen_route(seed in any::<u64>(), n in 1usize..=5) {
        // a = 𝟙 + h with r(h) < 1
        let mut r = rng(seed);
        let h = CMat::random_hermitian(n, &mut r);
        let h = h.scale_real(0.6 / h.norm().max(1e-3));
        let s = sqrt_series(&h, 200, 1e-12).unwrap();
        let via_series = s.b.shift(opalg::linops::ONE);
        let via_eig = positive_sqrt(&h.shift(opalg::linops::ONE), 1e-12).unwrap();
        prop_assert!(via_series.dist(&via_eig) <= 1e-7);
    }

    #[test]
    fn abs_preserves_norm(seed in any::<u64>(), n in 1usize..=6) {
        let a = CMat::random(n, n, &mut rng(seed));
        prop_assert!((abs(&a, 1e-12).unwrap().norm() - a.norm()).abs() <= 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn hermitian_between_minus_abs_and_abs(seed in any::<u64>(), n in 1usize..=6) {
        let a = CMat::random_hermitian(n, &mut rng(seed));
        let m = abs(&a, 1e-12).unwrap();
        let tol = 1e-10 * (1.0 + a.norm());
        prop_assert!(min_eig(&(&m - &a)) >= -tol);
        prop_assert!(min_eig(&(&m + &a)) >= -tol);
    }

    #[test]
    fn inverse_is_operator_monotone(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let a = random_positive(n, &mut r).shift(opalg::linops::ONE.scale(0.1));
        let b = &a + &random_positive(n, &mut r);
        let d = &a.inverse().unwrap() - &b.inverse().unwrap();
        prop_assert!(min_eig(&d) >= -1e-9 * (1.0 + d.norm()));
    }

    #[test]
    fn commuting_positives_multiply_to_positive(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let u = CMat::random_unitary(n, &mut r);
        let diag = |r: &mut ChaCha8Rng| {
            let d: Vec<f64> = (0..n).map(|_| rand::Rng::random::<f64>(r)).collect();
            &(&u * &CMat::diag_real(&d)) * &u.adjoint()
        };
        let (a, b) = (diag(&mut r), diag(&mut r));
        prop_assert!(positive_test(&(&a * &b), 1e-9).unwrap());
    }

    #[test]
    fn polar_is_exact(seed in any::<u64>(), n in 1usize..=6) {
        let a = CMat::random(n, n, &mut rng(seed));
        let p = polar_factorise(&a, 1e-12).unwrap();
        prop_assert!((&p.u * &p.p).dist(&a) <= 1e-9 * (1.0 + a.norm()));
        prop_assert!((&p.u.adjoint() * &p.u).dist(&CMat::identity(n)) <= 1e-9);
    }

    #[test]
    fn jordan_parts_are_orthogonal(seed in any::<u64>(), n in 1usize..=6) {
        let a = CMat::random_hermitian(n, &mut rng(seed));
        let j = jordan_parts(&a, 1e-12).unwrap();
        prop_assert!((&j.plus * &j.minus).norm() <= 1e-10 * (1.0 + a.norm()));
        prop_assert!((&j.plus - &j.minus).dist(&a) <= 1e-10 * (1.0 + a.norm()));
    }
}

#[test]
fn non_commuting_positive_pair_has_non_positive_product() {
    let a = CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let b = CMat::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
    assert!(positive_test(&a, 1e-12).unwrap() && positive_test(&b, 1e-12).unwrap());
    assert!(a.commutator(&b).norm() > 0.1);
    assert!(!positive_test(&(&a * &b), 1e-12).unwrap());
}
