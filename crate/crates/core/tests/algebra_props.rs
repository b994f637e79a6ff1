use opalg::linops::{random_in_disc, CMat, C64};
use opalg::specanalysis::{hausdorff, ptak, r_lambda, spectral_radius, unitisation_norms};
use opalg::staralg::{from_matrices, group_ring, left_regular, matrix_algebra, spectrum, StarAlgebra, StarElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeffs(d: usize, r: &mut ChaCha8Rng) -> Vec<C64> {
    (0..d).map(|_| random_in_disc(r)).collect()
}

/// M₂ written in a randomly rotated matrix-unit basis.
fn rotated_m2(r: &mut ChaCha8Rng) -> StarAlgebra {
    let u = CMat::random_unitary(2, r);
    let mats = (0..4).map(|k| &(&u * &CMat::unit(2, k / 2, k % 2)) * &u.adjoint()).collect();
    from_matrices((0..4).map(|k| format!("u{k}")).collect(), mats).unwrap()
}

fn drop_zeros(v: Vec<C64>, tol: f64) -> Vec<C64> {
    v.into_iter().filter(|z| z.norm() > tol).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn left_regular_is_multiplicative(seed in any::<u64>(), which in 0usize..2) {
        let mut r = rng(seed);
        let alg = if which == 0 { group_ring(&[4]).unwrap() } else { rotated_m2(&mut r) };
        let a = alg.element(coeffs(4, &mut r)).unwrap();
        let b = alg.element(coeffs(4, &mut r)).unwrap();
        let lhs = left_regular(&alg, &a.mul(&b)).unwrap();
        let rhs = &left_regular(&alg, &a).unwrap() * &left_regular(&alg, &b).unwrap();
        prop_assert!(lhs.dist(&rhs) <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn spectrum_of_adjoint_is_conjugate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = matrix_algebra(3).unwrap();
        let a = alg.element(coeffs(9, &mut r)).unwrap();
        let s: Vec<C64> = spectrum(&alg, &a, 1e-9).unwrap().iter().map(|z| z.conj()).collect();
        let t = spectrum(&alg, &a.adjoint(), 1e-9).unwrap();
        prop_assert!(hausdorff(&s, &t) <= 1e-8);
    }

    #[test]
    fn nonzero_spectra_of_ab_and_ba_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = matrix_algebra(3).unwrap();
        let a = alg.element(coeffs(9, &mut r)).unwrap();
        // a rank-deficient factor makes 0 a genuine point of both spectra
        let mut bc = coeffs(9, &mut r);
        bc[0] = C64::new(0.0, 0.0);
        let b = alg.element(bc).unwrap();
        let ab = drop_zeros(spectrum(&alg, &a.mul(&b), 1e-9).unwrap(), 1e-7);
        let ba = drop_zeros(spectrum(&alg, &b.mul(&a), 1e-9).unwrap(), 1e-7);
        prop_assert!(hausdorff(&ab, &ba) <= 1e-7);
    }

    #[test]
    fn gelfand_limit(seed in any::<u64>()) {
        let a = CMat::random(6, 6, &mut rng(seed));
        let s = spectral_radius(&a, 20).unwrap();
        prop_assert!(s.eig_gap <= 1e-6 * (1.0 + a.norm()));
    }

    #[test]
    fn ptak_identities(seed in any::<u64>(), n in 1usize..=6) {
        let a = CMat::random(n, n, &mut rng(seed));
        let p = ptak(&a).unwrap();
        prop_assert!((ptak(&a.adjoint()).unwrap() - p).abs() <= 1e-9 * (1.0 + p));
        let q = ptak(&(&a.adjoint() * &a)).unwrap();
        prop_assert!((q - p * p).abs() <= 1e-9 * (1.0 + p * p));
        prop_assert!((a.norm() - p).abs() <= 1e-8 * (1.0 + p));
    }

    #[test]
    fn radius_on_commuting_pairs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = CMat::random(4, 4, &mut r);
        let (c0, c1, c2) = (random_in_disc(&mut r), random_in_disc(&mut r), random_in_disc(&mut r));
        let b = &(&CMat::identity(4).scale(c0) + &a.scale(c1)) + &(&a * &a).scale(c2);
        let tol = 1e-9;
        let (ra, rb) = (r_lambda(&a, tol).unwrap(), r_lambda(&b, tol).unwrap());
        prop_assert!(r_lambda(&(&a + &b), tol).unwrap() <= ra + rb + 1e-8);
        prop_assert!(r_lambda(&(&a * &b), tol).unwrap() <= ra * rb + 1e-8);
    }

    #[test]
    fn unitisation_constants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = CMat::random(3, 3, &mut r).scale_real(2.0);
        let lambda = random_in_disc(&mut r).scale(3.0);
        let (norm, ell) = unitisation_norms(lambda, &a);
        prop_assert!(norm <= ell + 1e-9 && ell <= 6.0 * norm + 1e-9);
        let h = CMat::random_hermitian(3, &mut r);
        let (norm, ell) = unitisation_norms(C64::new(lambda.re, 0.0), &h);
        prop_assert!(norm <= ell + 1e-9 && ell <= 3.0 * norm + 1e-9);
    }
}
