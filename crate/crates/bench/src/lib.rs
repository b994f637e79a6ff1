//! Seeded inputs shared by the benchmarks.

use opalg::gnsrep::{density_functional, Functional};
use opalg::staralg::{matrix_algebra, StarAlgebra};
use opalg::vonneumann::OperatorSet;
use opalg::{CMat, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(n: usize, seed: u64) -> CMat {
    CMat::random(n, n, &mut rng(seed))
}

pub fn random_hermitian(n: usize, seed: u64) -> CMat {
    CMat::random_hermitian(n, &mut rng(seed))
}

/// Two random generators with adjoints, acting on `ℂⁿ`.
pub fn generator_pair(n: usize, seed: u64) -> OperatorSet {
    let mut r = rng(seed);
    let gens = vec![CMat::random(n, n, &mut r), CMat::random(n, n, &mut r)];
    OperatorSet::new(n, gens, true).expect("square generators")
}

/// `M_n` with a faithful state given by a random density matrix.
pub fn matrix_state(n: usize, seed: u64) -> (StarAlgebra, Functional) {
    let alg = matrix_algebra(n).expect("matrix algebra");
    let x = random_matrix(n, seed);
    let p = &x.adjoint() * &x;
    let rho = p.scale_real(1.0 / p.trace().re);
    let phi = density_functional(&alg, &rho).expect("density state");
    (alg, phi)
}

/// `3δ₀ + δ₁ + δ₋₁`.
pub fn wiener_symbol() -> opalg::gelfand::L1ZElement {
    let one = C64::new(1.0, 0.0);
    opalg::gelfand::L1ZElement::new(-1, vec![one, C64::new(3.0, 0.0), one])
}
