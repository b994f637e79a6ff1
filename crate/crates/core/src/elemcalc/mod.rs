//! Element calculus: square roots, absolute value, polar and Jordan
//! decompositions, and the bounded Cayley transform.

mod sqrtpoly;

pub use sqrtpoly::{
    sqrt_poly, sqrt_poly_eval, sqrt_poly_eval_exact, sqrt_poly_gap, sqrt_poly_scaled_eval, MAX_EXACT_INDEX,
};

use crate::error::{Error, Result};
use crate::linops::{hermitian_eig, svd, CMat, C64, I};
use crate::specanalysis::{r_lambda, spectral_radius};
use crate::staralg::StarElement;

/// Partial sum of `Σ_{n≥1} binom(1/2, n) aⁿ`.
#[derive(Debug, Clone)]
pub struct SqrtSeries<E> {
    pub b: E,
    /// `|(e + b)² − (e + a)| = |2b + b² − a|`.
    pub residual: f64,
    /// Bound on the same quantity from the omitted tail, when `|a| < 1`.
    pub residual_bound: Option<f64>,
}

/// `binom(1/2, n)` for `n = 0..=terms`.
fn half_binomials(terms: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(terms + 1);
    c.push(1.0);
    for n in 1..=terms {
        let prev = c[n - 1];
        c.push(prev * (0.5 - (n as f64 - 1.0)) / n as f64);
    }
    c
}

/// `b` with `(e + b)² = e + a`, valid when `r_λ(a) < 1`. No unit is needed:
/// the residual is measured as `2b + b² − a`.
pub fn sqrt_series<E: StarElement>(a: &E, terms: usize, tol: f64) -> Result<SqrtSeries<E>> {
    let radius = r_lambda(a, tol)?.max(spectral_radius(a, 24)?.radius);
    if radius >= 1.0 - tol {
        return Err(Error::SpectralRadiusTooLarge { radius });
    }
    let c = half_binomials(terms + 1);
    let mut power = a.clone();
    let mut b = a.scale(C64::new(c[1], 0.0));
    for ck in c.iter().take(terms + 1).skip(2) {
        power = power.mul(a);
        b = b.add(&power.scale(C64::new(*ck, 0.0)));
    }
    let residual = b.scale(C64::new(2.0, 0.0)).add(&b.mul(&b)).sub(a).norm();
    let rho = a.norm();
    let residual_bound = (rho < 1.0).then(|| {
        let tail = c[terms + 1].abs() * rho.powi(terms as i32 + 1) / (1.0 - rho);
        // |S² − (e+a)| ≤ τ(2|S| + τ) with |S| ≤ 1 + |b|
        tail * (2.0 * (1.0 + b.norm()) + tail)
    });
    Ok(SqrtSeries { b, residual, residual_bound })
}

fn clamped_eig(a: &CMat, tol: f64) -> Result<(Vec<f64>, CMat)> {
    let defect = a.hermitian_defect();
    let scale = a.norm();
    if defect > tol * scale.max(f64::MIN_POSITIVE) * (a.rows() as f64).sqrt() {
        return Err(Error::NotHermitian { defect });
    }
    let (mut w, v) = hermitian_eig(a)?;
    for x in w.iter_mut() {
        if *x < 0.0 && *x >= -tol * scale {
            *x = 0.0;
        }
    }
    Ok((w, v))
}

fn from_eig(w: &[f64], v: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let d: Vec<f64> = w.iter().map(|&x| f(x)).collect();
    let vd = CMat::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * d[j]);
    &vd * &v.adjoint()
}

/// Unique positive square root, by diagonalization.
pub fn positive_sqrt(a: &CMat, tol: f64) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::InvalidShape("square root of a non-square matrix".into()));
    }
    let (w, v) = clamped_eig(a, tol).map_err(|e| match e {
        Error::NotHermitian { defect } => Error::NotPositive { min_eigenvalue: -defect },
        other => other,
    })?;
    if let Some(&min) = w.first() {
        if min < 0.0 {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    Ok(from_eig(&w, &v, f64::sqrt))
}

/// `|a| = (a* a)^{1/2}`.
pub fn abs(a: &CMat, tol: f64) -> Result<CMat> {
    positive_sqrt(&(&a.adjoint() * a), tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarPair {
    pub u: CMat,
    pub p: CMat,
}

/// `a = u |a|` with `u` unitary, for invertible `a`.
pub fn polar_factorise(a: &CMat, tol: f64) -> Result<PolarPair> {
    if !a.is_square() || a.is_empty() {
        return Err(Error::InvalidShape("polar factorisation needs a non-empty square matrix".into()));
    }
    let s = svd(a);
    let smin = *s.singular_values.last().expect("non-empty");
    if smin <= tol * s.singular_values[0] {
        return Err(Error::NotInvertible { min_singular_value: smin });
    }
    let p = abs(a, tol)?;
    let u = a * &p.inverse()?;
    Ok(PolarPair { u, p })
}

/// Orthogonal decomposition of a Hermitian element and its reflection.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanParts {
    pub plus: CMat,
    pub minus: CMat,
    pub abs: CMat,
    /// `sign(a)`, taking `sign(0) = 1`; a self-adjoint unitary.
    pub u: CMat,
    /// `½(1 + u)`.
    pub p: CMat,
    /// `½(1 − u)`.
    pub q: CMat,
}

pub fn jordan_parts(a: &CMat, tol: f64) -> Result<JordanParts> {
    if !a.is_square() {
        return Err(Error::InvalidShape("Jordan decomposition of a non-square matrix".into()));
    }
    let (w, v) = clamped_eig(a, tol)?;
    let step = |keep: bool| move |x: f64| if (x >= 0.0) == keep { 1.0 } else { 0.0 };
    Ok(JordanParts {
        plus: from_eig(&w, &v, |x| x.max(0.0)),
        minus: from_eig(&w, &v, |x| (-x).max(0.0)),
        abs: from_eig(&w, &v, f64::abs),
        u: from_eig(&w, &v, |x| if x >= 0.0 { 1.0 } else { -1.0 }),
        p: from_eig(&w, &v, step(true)),
        q: from_eig(&w, &v, step(false)),
    })
}

/// `(a − iμ)(a + iμ)⁻¹` for Hermitian `a` and `μ > r_λ(a)`.
pub fn cayley_bounded(a: &CMat, mu: f64, tol: f64) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::InvalidShape("Cayley transform of a non-square matrix".into()));
    }
    let defect = a.hermitian_defect();
    if defect > tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let radius = r_lambda(a, tol)?;
    // μ = r_λ(a) is admitted: a + iμ stays invertible for Hermitian a.
    if !(mu >= radius - tol * (1.0 + radius)) || mu <= 0.0 {
        return Err(Error::MuTooSmall { mu, radius });
    }
    let plus = a.shift(I * mu);
    let minus = a.shift(-I * mu);
    plus.solve(&minus)
}
