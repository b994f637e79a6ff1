//! One-sided (Hestenes) Jacobi SVD.
//!
//! Small singular values come out with absolute error about `eps·σ_max`,
//! which is what rank decisions at `tol = 1e-10` need; forming `m* m` and
//! diagonalizing it would square that error away.

use super::{vdot, CMat, C64, ZERO};

const MAX_SWEEPS: usize = 80;

pub struct Svd {
    /// `rows × cols`; column `j` is `m v_j / σ_j`, or zero when `σ_j = 0`.
    pub u: CMat,
    /// Descending, one per column of the input.
    pub singular_values: Vec<f64>,
    /// `cols × cols` unitary; columns are right singular vectors.
    pub v: CMat,
}

pub fn svd(m: &CMat) -> Svd {
    let (rows, n) = (m.rows(), m.cols());
    let mut cols: Vec<Vec<C64>> = m.columns();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    // Columns below eps²·|m|_F carry no information at double precision.
    let negligible = (f64::EPSILON * f64::EPSILON * m.frobenius_norm()).powi(2).max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = vdot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                if !(c.is_finite() && s.is_finite()) {
                    continue;
                }
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let mut u = CMat::zeros(rows, n);
    let mut vm = CMat::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        if sigma > 0.0 {
            for i in 0..rows {
                u[(i, dst)] = cols[src][i] / sigma;
            }
        }
        for i in 0..n {
            vm[(i, dst)] = v[src][i];
        }
    }
    Svd { u, singular_values, v: vm }
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *xp;
        let b = *xq * phase;
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

/// Orthonormal basis (as columns) of `{x : |m x| <= tol·σ_max·|x|}`.
///
/// Rank is decided by the singular-value threshold `tol·σ_max`; a zero
/// matrix has the whole space as its nullspace.
pub fn nullspace(m: &CMat, tol: f64) -> CMat {
    let s = svd(m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    select_small(&s, tol * smax)
}

/// Right singular vectors with `σ <= threshold`, an absolute cut.
pub fn nullspace_abs(m: &CMat, threshold: f64) -> CMat {
    select_small(&svd(m), threshold)
}

fn select_small(s: &Svd, threshold: f64) -> CMat {
    let idx: Vec<usize> = s
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sig)| sig <= threshold)
        .map(|(j, _)| j)
        .collect();
    s.v.select_columns(&idx)
}

/// Numerical rank with threshold `tol·σ_max`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = svd(m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.singular_values.iter().filter(|&&sig| sig > tol * smax).count()
}
