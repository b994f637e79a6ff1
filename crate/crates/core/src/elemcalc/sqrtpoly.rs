//! Polynomials `p_n` with `p_0 = 0`, `p_{n+1} = p_n + ½(x − p_n²)`, which
//! increase to `√x` on `[0, 1]` with `0 ≤ √t − p_n(t) < 2/n`.
//!
//! In floating point the direct recursion overshoots `√t` by an ulp for some
//! `t`, so there are three evaluators: exact rational arithmetic, the direct
//! recursion, and the gap `e_n = √t − p_n`, which obeys
//! `e_{n+1} = e_n (1 − √t + e_n/2)` and stays non-negative in floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest `n` for which [`sqrt_poly`] expands coefficients; `p_n` has
/// degree `2^(n−1)`.
pub const MAX_EXACT_INDEX: usize = 12;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Coefficients of `p_n`, ascending, index 0 being the (zero) constant term.
pub fn sqrt_poly(n: usize) -> Result<Vec<BigRational>> {
    if n > MAX_EXACT_INDEX {
        return Err(Error::DegreeTooLarge { n, max: MAX_EXACT_INDEX });
    }
    let mut p: Vec<BigRational> = vec![BigRational::zero()];
    for _ in 0..n {
        let sq = poly_square(&p);
        let len = sq.len().max(p.len()).max(2);
        let mut next = vec![BigRational::zero(); len];
        for (k, c) in p.iter().enumerate() {
            next[k] += c;
        }
        next[1] += half();
        for (k, c) in sq.iter().enumerate() {
            next[k] -= c * half();
        }
        while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        p = next;
    }
    Ok(p)
}

fn poly_square(p: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); 2 * p.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        out[2 * i] += a * a;
        for (j, b) in p.iter().enumerate().skip(i + 1) {
            if !b.is_zero() {
                out[i + j] += a * b * BigInt::from(2);
            }
        }
    }
    out
}

/// `p_n(t)` by the recursion in exact arithmetic.
pub fn sqrt_poly_eval_exact(t: &BigRational, n: usize) -> BigRational {
    let mut p = BigRational::zero();
    for _ in 0..n {
        p = &p + (t - &p * &p) * half();
    }
    p
}

/// `p_n(t)` by the recursion in `f64`.
pub fn sqrt_poly_eval(t: f64, n: usize) -> f64 {
    let mut p = 0.0;
    for _ in 0..n {
        p += 0.5 * (t - p * p);
    }
    p
}

/// `√t − p_n(t)` for `t ∈ [0, 1]`, computed from the factored recursion.
pub fn sqrt_poly_gap(t: f64, n: usize) -> f64 {
    let s = t.sqrt();
    let mut e = s;
    for _ in 0..n {
        e *= 1.0 - s + 0.5 * e;
    }
    e
}

/// Scaled approximant `q_n(x) = 2^k p_n(x / 4^k)` for `x ∈ [0, 4^k]`.
pub fn sqrt_poly_scaled_eval(x: f64, n: usize, k: u32) -> f64 {
    let s = 2f64.powi(k as i32);
    s * sqrt_poly_eval(x / (s * s), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(sqrt_poly(0).unwrap(), vec![r(0, 1)]);
        assert_eq!(sqrt_poly(1).unwrap(), vec![r(0, 1), r(1, 2)]);
        // p_2 = x/2 + ½(x − x²/4) = x − x²/8
        assert_eq!(sqrt_poly(2).unwrap(), vec![r(0, 1), r(1, 1), r(-1, 8)]);
        assert!(matches!(sqrt_poly(MAX_EXACT_INDEX + 1), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn coefficients_match_recursion() {
        let p = sqrt_poly(6).unwrap();
        assert_eq!(p.len(), 33);
        assert!(p[0].is_zero());
        for k in 0..=20 {
            let t = r(k, 20);
            let horner = p.iter().rev().fold(BigRational::zero(), |acc, c| acc * &t + c);
            assert_eq!(horner, sqrt_poly_eval_exact(&t, 6));
        }
    }

    #[test]
    fn gap_and_direct_agree() {
        for j in 0..=1000 {
            let t = j as f64 / 1000.0;
            for n in [1, 5, 30, 100] {
                let d = sqrt_poly_eval(t, n);
                let g = t.sqrt() - sqrt_poly_gap(t, n);
                assert!((d - g).abs() < 4e-16, "t={t} n={n}");
            }
        }
    }

    #[test]
    fn scaled_version() {
        let x = 9.0;
        let q = sqrt_poly_scaled_eval(x, 200, 2);
        assert!((q - 3.0).abs() < 4.0 * 2.0 / 200.0);
        assert!(q <= 3.0 + 1e-15);
    }
}
