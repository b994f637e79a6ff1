//! Diagonal model of unbounded self-adjoint operators: multiplication by a
//! real symbol `g_n` on the weighted sequence space `ℓ²(w)`, indices
//! `n = 1, 2, …`.
//!
//! Domains are decided from closed-form growth exponents; only the
//! numerical fallback sums anything, and its verdict is marked heuristic.

use crate::error::{Error, Result};
use crate::linops::{C64, ZERO};

pub const DEFAULT_TRUNCATION: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    /// `g_n = n^t`.
    Power { t: f64 },
    /// `g_n = α n + β`.
    Affine { alpha: f64, beta: f64 },
    /// `g_n = table[n − 1]`; undefined past the end.
    Table(Vec<f64>),
}

impl Symbol {
    pub fn at(&self, n: usize) -> f64 {
        match self {
            Symbol::Power { t } => (n as f64).powf(*t),
            Symbol::Affine { alpha, beta } => alpha * n as f64 + beta,
            Symbol::Table(v) => v[n - 1],
        }
    }

    /// `sup_n log|g_n| / log n` as `n → ∞`, when known in closed form.
    pub fn growth(&self) -> Option<f64> {
        match self {
            Symbol::Power { t } => Some(*t),
            Symbol::Affine { alpha, .. } => Some(if *alpha == 0.0 { 0.0 } else { 1.0 }),
            Symbol::Table(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    /// Raw weights `n^{−r}`; `r = 0` is counting measure.
    Power { r: f64 },
    /// Raw weights `table[n − 1]`.
    Table(Vec<f64>),
}

impl Weights {
    fn raw(&self, n: usize) -> f64 {
        match self {
            Weights::Power { r } => (n as f64).powf(-r),
            Weights::Table(v) => v[n - 1],
        }
    }

    fn decay(&self) -> Option<f64> {
        match self {
            Weights::Power { r } => Some(*r),
            Weights::Table(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    pub symbol: Symbol,
    pub weights: Weights,
    pub truncation: usize,
}

impl DiagonalOperator {
    pub fn new(symbol: Symbol, weights: Weights, truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::InvalidInput("truncation must be positive".into()));
        }
        if let Symbol::Table(v) = &symbol {
            if v.len() < truncation {
                return Err(Error::InvalidInput("symbol table shorter than the truncation".into()));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("symbol must be real and finite".into()));
            }
        }
        if let Weights::Table(v) = &weights {
            if v.len() < truncation || v.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::InvalidInput("weights must be positive and cover the truncation".into()));
            }
        }
        Ok(DiagonalOperator { symbol, weights, truncation })
    }

    /// Multiplication by `n` on counting measure.
    pub fn identity_symbol(truncation: usize) -> Self {
        DiagonalOperator { symbol: Symbol::Power { t: 1.0 }, weights: Weights::Power { r: 0.0 }, truncation }
    }

    /// Weights normalized to a probability vector on `1..=N`.
    pub fn weights(&self) -> Vec<f64> {
        let raw: Vec<f64> = (1..=self.truncation).map(|n| self.weights.raw(n)).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    pub fn symbol_values(&self) -> Vec<f64> {
        (1..=self.truncation).map(|n| self.symbol.at(n)).collect()
    }

    /// Distinct symbol values up to the truncation, ascending: the atoms
    /// of the spectrum.
    pub fn spectrum_atoms(&self) -> Vec<f64> {
        let mut v = self.symbol_values();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Norm in `ℓ²(w)` with normalized weights.
    pub fn norm(&self, x: &[C64]) -> Result<f64> {
        check_support(x, self.truncation)?;
        let w = self.weights();
        Ok(x.iter().zip(&w).map(|(z, wi)| z.norm_sqr() * wi).sum::<f64>().sqrt())
    }
}

/// Spectral functions with a known growth exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralFn {
    Identity,
    /// `λ ↦ |λ|^k`.
    AbsPower(f64),
    /// Any bounded Borel function; the value used is the constant given.
    Bounded(C64),
    /// `|f_1| + … + |f_m|`.
    SumAbs(Vec<SpectralFn>),
}

impl SpectralFn {
    pub fn eval(&self, x: f64) -> C64 {
        match self {
            SpectralFn::Identity => C64::new(x, 0.0),
            SpectralFn::AbsPower(k) => C64::new(x.abs().powf(*k), 0.0),
            SpectralFn::Bounded(c) => *c,
            SpectralFn::SumAbs(fs) => C64::new(fs.iter().map(|f| f.eval(x).norm()).sum(), 0.0),
        }
    }

    /// Growth exponent of `f ∘ g` given that of `g`.
    fn growth(&self, g: f64) -> f64 {
        match self {
            SpectralFn::Identity => g,
            SpectralFn::AbsPower(k) => k * g,
            SpectralFn::Bounded(_) => 0.0,
            SpectralFn::SumAbs(fs) => fs.iter().map(|f| f.growth(g)).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeqVector {
    /// `x_n = entries[n − 1]`, zero afterwards.
    Finite(Vec<C64>),
    /// `x_n = c · n^{−s}`.
    PowerLaw { c: C64, s: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    FiniteSupport,
    /// `Σ n^{−p}` with the member iff `p > 1`.
    PSeries { exponent: f64 },
    /// Partial sums at `N` and `2N`; not a proof.
    Heuristic { sum_n: f64, sum_2n: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub heuristic: bool,
    pub certificate: Certificate,
}

/// Whether `x` lies in `𝒟_f = {x : Σ |f(g_n)|² |x_n|² w_n < ∞}`.
pub fn domain_membership(a: &DiagonalOperator, x: &SeqVector, f: &SpectralFn, tol: f64) -> Membership {
    match x {
        SeqVector::Finite(_) => Membership { member: true, heuristic: false, certificate: Certificate::FiniteSupport },
        SeqVector::PowerLaw { c, s } => {
            if *c == ZERO {
                return Membership { member: true, heuristic: false, certificate: Certificate::FiniteSupport };
            }
            if let (Some(g), Some(r)) = (a.symbol.growth(), a.weights.decay()) {
                let exponent = 2.0 * (s - f.growth(g)) + r;
                return Membership { member: exponent > 1.0, heuristic: false, certificate: Certificate::PSeries { exponent } };
            }
            let n = a.truncation / 2;
            let term = |k: usize| {
                (f.eval(a.symbol.at(k)).norm() * c.norm() * (k as f64).powf(-s)).powi(2) * a.weights.raw(k)
            };
            let sum_n: f64 = (1..=n.max(1)).map(term).sum();
            let sum_2n: f64 = sum_n + ((n.max(1) + 1)..=2 * n.max(1)).map(term).sum::<f64>();
            Membership {
                member: sum_2n <= sum_n * (1.0 + tol),
                heuristic: true,
                certificate: Certificate::Heuristic { sum_n, sum_2n },
            }
        }
    }
}

fn check_support(x: &[C64], truncation: usize) -> Result<()> {
    let support = x.iter().rposition(|z| *z != ZERO).map_or(0, |i| i + 1);
    if support > truncation {
        return Err(Error::SupportExceedsTruncation { support, truncation });
    }
    Ok(())
}

/// `Ψ(f) x = (f(g_n) x_n)_n` for finitely supported `x`.
pub fn apply_function(a: &DiagonalOperator, f: impl Fn(f64) -> C64, x: &[C64]) -> Result<Vec<C64>> {
    check_support(x, a.truncation)?;
    Ok(x.iter().enumerate().map(|(i, z)| if *z == ZERO { ZERO } else { f(a.symbol.at(i + 1)) * z }).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CayleyPair {
    /// `u_n = (g_n − i)/(g_n + i)` for `n = 1..=N`.
    pub u: Vec<C64>,
    /// Largest `|g_n − g̃_n| / max(1, |g_n|)` after inverting.
    pub roundtrip_residual: f64,
    /// `min_n |1 − u_n|`.
    pub distance_from_one: f64,
}

/// `(g − i)/(g + i) = e^{−2iφ}` with `φ = arg(g + i) ∈ (0, π)`.
pub fn cayley_symbol(g: f64) -> C64 {
    let phi = 1f64.atan2(g);
    C64::new((2.0 * phi).cos(), -(2.0 * phi).sin())
}

/// `i(1 + u)(1 − u)⁻¹ = cot φ` for `u = e^{−2iφ}`, `φ ∈ (0, π)`.
///
/// Evaluating the quotient directly loses all digits once `u` is close to
/// `1`, which is where large `g` land; the half angle does not.
pub fn inverse_cayley_symbol(u: C64) -> f64 {
    let theta = u.im.atan2(u.re); // = −2φ mod 2π
    let phi = if theta <= 0.0 { -theta / 2.0 } else { std::f64::consts::PI - theta / 2.0 };
    phi.cos() / phi.sin()
}

pub fn cayley_pair(a: &DiagonalOperator) -> CayleyPair {
    let g = a.symbol_values();
    let u: Vec<C64> = g.iter().map(|&x| cayley_symbol(x)).collect();
    let roundtrip_residual = g
        .iter()
        .zip(&u)
        .map(|(&x, &z)| (x - inverse_cayley_symbol(z)).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max);
    let distance_from_one = u
        .iter()
        .map(|z| {
            // |1 − e^{−2iφ}| = 2 sin φ
            let theta = z.im.atan2(z.re);
            2.0 * (theta / 2.0).sin().abs()
        })
        .fold(f64::INFINITY, f64::min);
    CayleyPair { u, roundtrip_residual, distance_from_one }
}

/// `(U_t x)_n = e^{−itg_n} x_n`.
pub fn evolve(a: &DiagonalOperator, t: f64, x: &[C64]) -> Result<Vec<C64>> {
    apply_function(a, |g| C64::new(0.0, -t * g).exp(), x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCheck {
    /// `|−(1/(ih))(U_h x − x) − a x|` in `ℓ²(w)`.
    pub residual: f64,
    /// `residual / h`.
    pub constant: f64,
}

pub fn generator_check(a: &DiagonalOperator, x: &[C64], h: f64) -> Result<GeneratorCheck> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    // e^{−iθ} − 1 = −2 sin²(θ/2) − i sin θ, so
    // −(1/(ih))(e^{−iθ} − 1) − g = (sin θ)/h − g − 2i sin²(θ/2)/h.
    let diff = apply_function(
        a,
        |g| {
            let theta = h * g;
            let s = (theta / 2.0).sin();
            C64::new(theta.sin() / h - g, -2.0 * s * s / h)
        },
        x,
    )?;
    let residual = a.norm(&diff)?;
    Ok(GeneratorCheck { residual, constant: residual / h })
}
