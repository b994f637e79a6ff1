use opalg::gnsrep::Representation;
use opalg::linops::{hermitian_eig, random_in_disc, random_unit_vector, vdot, vnorm, vsub, CMat, C64, ONE, ZERO};
use opalg::specmeasure::spectral_resolution;
use opalg::vonneumann::{
    bicommutant, commutant, diagonalise_cyclic, generated_algebra, irreducibility_report, vector_report, OperatorSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normal matrix `U diag(d) U*` with `d` drawn from a small lattice so that
/// repeated eigenvalues occur.
fn random_normal(n: usize, r: &mut ChaCha8Rng) -> (CMat, CMat, Vec<C64>) {
    let u = CMat::random_unitary(n, r);
    let d: Vec<C64> = (0..n).map(|_| C64::new(r.random_range(-2..=2) as f64, r.random_range(-1..=1) as f64)).collect();
    (&(&u * &CMat::diag(&d)) * &u.adjoint(), u, d)
}

fn diagonal_rep(n: usize, r: &mut ChaCha8Rng) -> Representation {
    let u = CMat::random_unitary(n, r);
    Representation { dim: n, mats: (0..n).map(|k| &(&u * &CMat::unit(n, k, k)) * &u.adjoint()).collect() }
}

fn min_eig(m: &CMat) -> f64 {
    hermitian_eig(&(&(m + &m.adjoint()).scale_real(0.5))).unwrap().0[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reconstruction_and_kernel(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let (b, _, _) = random_normal(n, &mut r);
        let p = spectral_resolution(&b, 1e-10).unwrap();
        prop_assert!(p.integrate(Some).unwrap().dist(&b) <= 1e-8 * (1.0 + b.norm()));
        prop_assert!(p.defect() <= 1e-9);
        let zeros: Vec<bool> = p.points.iter().map(|_| r.random::<bool>()).collect();
        let f = |z: C64| p.points.iter().position(|q| *q == z).map(|i| if zeros[i] { ZERO } else { z + C64::new(5.0, 0.0) });
        let vanishes = p.integrate(f).unwrap().norm() <= 1e-12;
        prop_assert_eq!(vanishes, zeros.iter().all(|&z| z));
    }

    #[test]
    fn positivity_of_integrals(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let (b, _, _) = random_normal(n, &mut r);
        let p = spectral_resolution(&b, 1e-10).unwrap();
        let vals: Vec<f64> = p.points.iter().map(|_| r.random_range(-1.0..2.0)).collect();
        let f = |z: C64| p.points.iter().position(|q| *q == z).map(|i| C64::new(vals[i], 0.0));
        let m = p.integrate(f).unwrap();
        prop_assert_eq!(min_eig(&m) >= -1e-12, vals.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn monotone_and_dominated_convergence(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let (b, _, _) = random_normal(n, &mut r);
        let p = spectral_resolution(&b, 1e-10).unwrap();
        let x = random_unit_vector(n, &mut r);
        let f = |z: C64| z.norm_sqr();
        let target = p.integrate(|z| Some(C64::new(f(z), 0.0))).unwrap().mat_vec(&x);
        // f_k = min(f, k) increases to f and reaches it once k ≥ max f
        let top = p.points.iter().map(|z| f(*z)).fold(0.0, f64::max).ceil() as usize;
        for k in 0..=top {
            let fk = p.integrate(|z| Some(C64::new(f(z).min(k as f64), 0.0))).unwrap().mat_vec(&x);
            let gap = vnorm(&vsub(&fk, &target));
            if k >= top {
                prop_assert!(gap <= 1e-12);
            }
        }
        for k in [1usize, 10, 100, 1000] {
            let fk = p.integrate(|z| Some(C64::new(f(z) + (k as f64 * z.re).sin() / k as f64, 0.0))).unwrap().mat_vec(&x);
            prop_assert!(vnorm(&vsub(&fk, &target)) <= 1.0 / k as f64 + 1e-12);
        }
    }

    #[test]
    fn projections_in_range_are_atom_sums(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let (b, _, _) = random_normal(n, &mut r);
        let p = spectral_resolution(&b, 1e-10).unwrap();
        let chosen: Vec<usize> = (0..p.points.len()).filter(|_| r.random::<bool>()).collect();
        let q = p.integrate(|z| Some(if chosen.iter().any(|&i| p.points[i] == z) { ONE } else { ZERO })).unwrap();
        prop_assert!((&q * &q).dist(&q) <= 1e-12);
        prop_assert!(q.dist(&p.measure_of(&chosen)) <= 1e-12);
    }

    #[test]
    fn fuglede_putnam_rosenblum(seed in any::<u64>(), n in 1usize..=5) {
        let (b, _, _) = random_normal(n, &mut rng(seed));
        let s = OperatorSet::new(n, vec![b.clone()], false).unwrap();
        for c in &commutant(&s, 1e-10).mats {
            prop_assert!(c.commutator(&b.adjoint()).norm() <= 1e-9 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn triple_commutant(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        let mats = (0..k).map(|_| CMat::random(4, 4, &mut r)).collect();
        let s = OperatorSet::new(4, mats, true).unwrap();
        let c1 = commutant(&s, 1e-10);
        prop_assert!(commutant(&bicommutant(&s, 1e-10), 1e-10).same_span(&c1, 1e-10));
    }

    #[test]
    fn normal_generated_algebra(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let (b, u, _) = random_normal(n, &mut r);
        let d2: Vec<C64> = (0..n).map(|_| random_in_disc(&mut r)).collect();
        let b2 = &(&u * &CMat::diag(&d2)) * &u.adjoint();
        let w = generated_algebra(&OperatorSet::new(n, vec![b.clone(), b2], true).unwrap(), true, 1e-10);
        prop_assert!(w.commutation_defect() <= 1e-9 * (1.0 + b.norm()).powi(4));
        let wb = generated_algebra(&OperatorSet::new(n, vec![b.clone()], true).unwrap(), true, 1e-10);
        let bb = bicommutant(&OperatorSet::new(n, vec![b], true).unwrap(), 1e-10);
        prop_assert!(wb.same_span(&bb, 1e-10));
    }

    #[test]
    fn invariant_subspaces(seed in any::<u64>()) {
        let mut r = rng(seed);
        // ℂ ⊕ M₂ acting block-diagonally on ℂ³
        let block = |r: &mut ChaCha8Rng| {
            let m = CMat::random(2, 2, r);
            CMat::direct_sum(&[CMat::diag(&[random_in_disc(r)]), m])
        };
        let mats: Vec<CMat> = (0..3).map(|_| block(&mut r)).collect();
        let s = OperatorSet::new(3, mats.clone(), true).unwrap();
        let comm = commutant(&s, 1e-10);
        for mask in 0u32..8 {
            let d: Vec<f64> = (0..3).map(|i| f64::from((mask >> i) & 1)).collect();
            let p = CMat::diag_real(&d);
            let q = p.shift(C64::new(-1.0, 0.0)).scale_real(-1.0);
            let invariant = s.mats.iter().all(|m| (&(&q * m) * &p).norm() <= 1e-12);
            prop_assert_eq!(comm.contains(&p, 1e-10), invariant, "mask {}", mask);
        }
    }

    #[test]
    fn diagonalisation(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let rep = diagonal_rep(n, &mut r);
        let c = random_unit_vector(n, &mut r);
        let d = diagonalise_cyclic(&rep, &c, 1e-10).unwrap();
        prop_assert!((&d.unitary * &d.unitary.adjoint()).dist(&CMat::identity(n)) <= 1e-9);
        prop_assert!(d.intertwining_residual <= 1e-9);
        let p = spectral_resolution(&rep.mats.iter().enumerate().fold(CMat::zeros(n, n), |acc, (k, m)| &acc + &m.scale_real(k as f64 + 1.0)), 1e-10).unwrap();
        let mut mu: Vec<f64> = p.projections.iter().map(|q| vdot(&c, &q.mat_vec(&c)).re).collect();
        let mut got: Vec<f64> = d.measure.iter().map(|m| m.1).collect();
        mu.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in mu.iter().zip(&got) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        let report = irreducibility_report(&rep, 1e-10).unwrap();
        prop_assert!(report.multiplicity_free);
        let s = OperatorSet::new(n, rep.mats.clone(), true).unwrap();
        prop_assert!(commutant(&s, 1e-10).same_span(&generated_algebra(&s, true, 1e-10), 1e-10));
    }

    #[test]
    fn cyclic_iff_separating_for_commutant(seed in any::<u64>(), degenerate in any::<bool>()) {
        let mut r = rng(seed);
        // {A ⊕ A} on ℂ⁴ together with the unit
        let gens: Vec<CMat> = (0..2).map(|_| {
            let a = CMat::random(2, 2, &mut r);
            CMat::direct_sum(&[a.clone(), a])
        }).collect();
        let s = generated_algebra(&OperatorSet::new(4, gens, true).unwrap(), true, 1e-10);
        let comm = commutant(&s, 1e-10);
        let u = random_unit_vector(2, &mut r);
        let v = if degenerate { u.iter().map(|z| z * C64::new(0.3, -0.7)).collect() } else { random_unit_vector(2, &mut r) };
        let x: Vec<C64> = u.into_iter().chain(v).collect();
        let cyclic = vector_report(&s, &x, 1e-10).unwrap().cyclic;
        prop_assert_eq!(cyclic, !degenerate);
        prop_assert_eq!(cyclic, vector_report(&comm, &x, 1e-10).unwrap().separating);
    }
}
