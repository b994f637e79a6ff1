//! Spectral radius, the Pták function, positivity and the rational
//! functional calculus, generic over [`StarElement`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linops::{random_in_disc, CMat, C64, ONE, ZERO};
use crate::staralg::{AlgElement, StarAlgebra, StarElement};

/// Result of [`spectral_radius`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRadius {
    pub radius: f64,
    /// `r_k = |a^(2^k)|^(1/2^k)` for `k = 0, 1, …`.
    pub sequence: Vec<f64>,
    /// `|radius − max |eigenvalue||`.
    pub eig_gap: f64,
}

/// Gelfand limit `lim |aⁿ|^{1/n}` along `n = 2^k`, `k ≤ k_max`.
///
/// The iterate is renormalized after each squaring and the logarithms of the
/// discarded norms are accumulated, so nothing overflows or underflows.
pub fn spectral_radius<E: StarElement>(a: &E, k_max: usize) -> Result<SpectralRadius> {
    let eig_max = r_lambda(a, crate::DEFAULT_TOL)?;
    let n0 = a.norm();
    let mut sequence = vec![n0];
    let mut radius = n0;
    if n0 > 0.0 {
        let mut b = a.scale(C64::new(1.0 / n0, 0.0));
        let mut log = n0.ln();
        for k in 1..=k_max {
            let sq = b.mul(&b);
            let n = sq.norm();
            if n == 0.0 || !n.is_finite() {
                radius = 0.0;
                sequence.push(0.0);
                break;
            }
            log = 2.0 * log + n.ln();
            radius = (log / 2f64.powi(k as i32)).exp();
            sequence.push(radius);
            b = sq.scale(C64::new(1.0 / n, 0.0));
        }
    }
    Ok(SpectralRadius { radius, sequence, eig_gap: (radius - eig_max).abs() })
}

/// `r_λ(a)`: largest modulus in the spectrum.
pub fn r_lambda<E: StarElement>(a: &E, tol: f64) -> Result<f64> {
    Ok(a.spectrum(tol)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Pták function `r_σ(a) = r_λ(a* a)^{1/2}`.
pub fn ptak<E: StarElement>(a: &E) -> Result<f64> {
    Ok(r_lambda(&a.adjoint().mul(a), crate::DEFAULT_TOL)?.sqrt())
}

/// `sp(a) ⊂ [0, ∞)` and `a = a*`, each up to `tol·|a|`.
pub fn positive_test<E: StarElement>(a: &E, tol: f64) -> Result<bool> {
    let n = a.norm();
    if a.sub(&a.adjoint()).norm() > tol * n {
        return Ok(false);
    }
    let sp = a.spectrum(tol)?;
    let min_re = sp.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let max_im = sp.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(sp.is_empty() || (min_re >= -tol * n && max_im <= tol * n))
}

/// Outcome of [`hermitian_probe`].
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeVerdict {
    NoCounterexample,
    Counterexample { coeffs: Vec<C64>, reason: String },
}

/// Searches for a Hermitian element with non-real spectrum, or an element
/// with `r_λ(a) > r_σ(a)`. A falsifier only: absence of a counterexample
/// proves nothing.
pub fn hermitian_probe(alg: &StarAlgebra, samples: usize, seed: u64) -> Result<ProbeVerdict> {
    const TOL: f64 = 1e-8;
    let d = alg.dim();
    let real_spectrum = |x: &AlgElement<'_>| -> Result<Option<String>> {
        let sp = x.spectrum(crate::DEFAULT_TOL)?;
        let scale = 1.0 + x.norm();
        Ok(sp.iter().find(|z| z.im.abs() > TOL * scale).map(|z| format!("Hermitian element has spectral point {z}")))
    };

    let mut candidates = Vec::new();
    for i in 0..d {
        let b = alg.basis_element(i);
        let bs = b.adjoint();
        candidates.push(b.add(&bs));
        candidates.push(b.sub(&bs).scale(C64::new(0.0, 1.0)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = alg.element((0..d).map(|_| random_in_disc(&mut rng)).collect())?;
        candidates.push(x.add(&x.adjoint()));
    }
    for h in &candidates {
        if h.coeffs.iter().all(|z| *z == ZERO) {
            continue;
        }
        if let Some(reason) = real_spectrum(h)? {
            return Ok(ProbeVerdict::Counterexample { coeffs: h.coeffs.clone(), reason });
        }
    }
    for _ in 0..samples {
        let x = alg.element((0..d).map(|_| random_in_disc(&mut rng)).collect())?;
        let rl = r_lambda(&x, crate::DEFAULT_TOL)?;
        let rs = ptak(&x)?;
        if rl > rs * (1.0 + TOL) + TOL {
            return Ok(ProbeVerdict::Counterexample {
                coeffs: x.coeffs,
                reason: format!("r_λ = {rl} exceeds r_σ = {rs}"),
            });
        }
    }
    Ok(ProbeVerdict::NoCounterexample)
}

/// `p(x) / Π (x − z_j)^{m_j}` with `p` given by ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub numerator: Vec<C64>,
    pub poles: Vec<(C64, u32)>,
}

impl RationalFn {
    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        RationalFn { numerator: coeffs, poles: Vec::new() }
    }

    /// Möbius map `(x − iμ)(x + iμ)⁻¹`.
    pub fn cayley(mu: f64) -> Self {
        RationalFn { numerator: vec![C64::new(0.0, -mu), ONE], poles: vec![(C64::new(0.0, -mu), 1)] }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut p = self.numerator.iter().rev().fold(ZERO, |acc, c| acc * z + c);
        for &(r, m) in &self.poles {
            p /= (z - r).powu(m);
        }
        p
    }
}

/// `r(a)` by Horner on the numerator followed by resolvent factors.
pub fn rational_apply<E: StarElement>(a: &E, r: &RationalFn, tol: f64) -> Result<E> {
    let unit = a.unit().ok_or(Error::NoUnit)?;
    let sp = a.spectrum(tol)?;
    let rl = sp.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for &(root, _) in &r.poles {
        let (nearest, distance) = sp
            .iter()
            .map(|z| (*z, (z - root).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap_or((root, f64::INFINITY));
        if distance < tol * (1.0 + rl) {
            return Err(Error::PoleOnSpectrum { root, nearest, distance });
        }
    }
    let mut acc = unit.scale(ZERO);
    for c in r.numerator.iter().rev() {
        acc = acc.mul(a).add(&unit.scale(*c));
    }
    for &(root, m) in &r.poles {
        let shifted = a.sub(&unit.scale(root));
        let inv = shifted.inverse().ok_or_else(|| {
            let (nearest, distance) = sp
                .iter()
                .map(|z| (*z, (z - root).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap_or((root, 0.0));
            Error::PoleOnSpectrum { root, nearest, distance }
        })?;
        for _ in 0..m {
            acc = acc.mul(&inv);
        }
    }
    Ok(acc)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

/// For `b = λe + a` with `a` in a C*-algebra of matrices and `e` the
/// adjoined unit, returns `(|b|_C*, |λ| + |a|)`. The C*-norm of the formal
/// unitisation is `max(|λ|, |λ·1 + a|)`.
pub fn unitisation_norms(lambda: C64, a: &CMat) -> (f64, f64) {
    let cstar = lambda.norm().max(a.shift(lambda).norm());
    (cstar, lambda.norm() + a.norm())
}
