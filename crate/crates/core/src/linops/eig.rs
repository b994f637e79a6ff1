//! Eigendecomposition of dense complex matrices.
//!
//! Hermitian input: Householder tridiagonalization, a diagonal phase change
//! to make the tridiagonal real, then implicit QL (EISPACK `tql2`).
//! Everything else: Householder reduction to Hessenberg form followed by
//! single-shift complex QR with Wilkinson shifts, giving a Schur form
//! `m = Q T Q*`. For normal input the Schur vectors are the eigenvectors;
//! otherwise eigenvectors come from back-substitution on `T`.

use super::{lex_cmp, vnorm, CMat, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_QR_ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct EigenDecomp {
    /// Sorted lexicographically by `(re, im)`.
    pub values: Vec<C64>,
    /// Column `k` is a unit eigenvector for `values[k]`.
    pub vectors: CMat,
    /// `max_k |m v_k − λ_k v_k| / |m|`.
    pub residual: f64,
    /// Whether the input was treated as normal (vectors orthonormal).
    pub normal: bool,
}

#[derive(Debug, Clone)]
pub struct Schur {
    /// Upper triangular.
    pub t: CMat,
    /// Unitary with `m = q t q*`.
    pub q: CMat,
}

/// Eigenvalues and eigenvectors of a square matrix.
pub fn eig(m: &CMat, tol: f64) -> Result<EigenDecomp> {
    if !m.is_square() {
        return Err(Error::InvalidShape(format!("eig of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomp { values: vec![], vectors: CMat::zeros(0, 0), residual: 0.0, normal: true });
    }
    let (values, vectors, normal) = if m.is_hermitian(tol) {
        let (vals, vecs) = hermitian_eig(m)?;
        (vals.into_iter().map(|x| C64::new(x, 0.0)).collect::<Vec<_>>(), vecs, true)
    } else {
        let Schur { t, q } = schur(m)?;
        let vals = t.diagonal();
        if m.is_normal(tol) {
            (vals, q, true)
        } else {
            let y = triangular_eigenvectors(&t);
            let mut v = &q * &y;
            for j in 0..n {
                let col = v.column(j);
                let nv = vnorm(&col);
                if nv > 0.0 {
                    let scaled: Vec<C64> = col.iter().map(|z| z / nv).collect();
                    v.set_column(j, &scaled);
                }
            }
            (vals, v, false)
        }
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lex_cmp(&values[a], &values[b]));
    let values: Vec<C64> = order.iter().map(|&k| values[k]).collect();
    let vectors = vectors.select_columns(&order);

    let mnorm = m.norm();
    let mut residual: f64 = 0.0;
    if mnorm > 0.0 {
        for (k, lambda) in values.iter().enumerate() {
            let v = vectors.column(k);
            let mv = m.mat_vec(&v);
            let r: f64 = mv.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt();
            residual = residual.max(r / mnorm);
        }
    }
    Ok(EigenDecomp { values, vectors, residual, normal })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
/// Only the lower triangle and the real part of the diagonal are read after
/// symmetrization `(m + m*)/2`.
pub fn hermitian_eig(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    if !m.is_square() {
        return Err(Error::InvalidShape(format!("hermitian_eig of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let h = (m + &m.adjoint()).scale_real(0.5);
    let (t, q) = tridiagonalize(&h);

    // Phase change making the subdiagonal real and non-negative.
    let mut phases = vec![ONE; n];
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for k in 0..n {
        d[k] = t[(k, k)].re;
        if k + 1 < n {
            let sub = t[(k + 1, k)];
            let a = sub.norm();
            phases[k + 1] = if a > 0.0 { phases[k] * (sub / a) } else { phases[k] };
            e[k + 1] = a;
        }
    }
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    tql2(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    // vectors = Q · diag(phases) · Z
    let qd = CMat::from_fn(n, n, |i, j| q[(i, j)] * phases[j]);
    let zm = CMat::from_fn(n, n, |i, j| C64::new(z[i][order[j]], 0.0));
    Ok((values, &qd * &zm))
}

/// Householder reduction of a Hermitian matrix: returns `(t, q)` with
/// `h = q t q*` and `t` tridiagonal.
fn tridiagonalize(h: &CMat) -> (CMat, CMat) {
    let n = h.rows();
    let mut a = h.clone();
    let mut q = CMat::identity(n);
    for k in 0..n.saturating_sub(2) {
        if let Some(v) = householder_vector(&a, k) {
            apply_reflector_left(&mut a, &v, k + 1, 0);
            apply_reflector_right(&mut a, &v, k + 1, 0);
            apply_reflector_right(&mut q, &v, k + 1, 0);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 {
                a[(i, j)] = ZERO;
            }
        }
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    (a, q)
}

/// Reflector `v` (acting on indices `k+1..n`) that zeroes `a[k+2.., k]`;
/// `None` when the column is already reduced.
fn householder_vector(a: &CMat, k: usize) -> Option<Vec<C64>> {
    let n = a.rows();
    let x: Vec<C64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
    let alpha = vnorm(&x);
    let tail = vnorm(&x[1..]);
    if alpha == 0.0 || tail == 0.0 {
        return None;
    }
    let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
    let mut v = x;
    v[0] += phase * alpha;
    let nv = vnorm(&v);
    Some(v.iter().map(|z| z / nv).collect())
}

/// `a ← (I − 2 v v*) a` on rows `off..off+len(v)`, columns `col0..`.
fn apply_reflector_left(a: &mut CMat, v: &[C64], off: usize, col0: usize) {
    for j in col0..a.cols() {
        let s: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[(off + i, j)]).sum();
        let s2 = s * 2.0;
        for (i, vi) in v.iter().enumerate() {
            a[(off + i, j)] -= vi * s2;
        }
    }
}

/// `a ← a (I − 2 v v*)` on columns `off..off+len(v)`, rows `row0..`.
fn apply_reflector_right(a: &mut CMat, v: &[C64], off: usize, row0: usize) {
    for i in row0..a.rows() {
        let s: C64 = v.iter().enumerate().map(|(j, vj)| a[(i, off + j)] * vj).sum();
        let s2 = s * 2.0;
        for (j, vj) in v.iter().enumerate() {
            a[(i, off + j)] -= s2 * vj.conj();
        }
    }
}

/// Symmetric tridiagonal QL with implicit shifts. `d` is the diagonal,
/// `e[i]` the subdiagonal entry `(i, i−1)` (`e[0]` ignored); `z`
/// accumulates the rotations. Derived from EISPACK `tql2` via JAMA.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QR_ITERS_PER_EIGENVALUE {
                    return Err(Error::NoConvergence { iterations: iter });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in z.iter_mut() {
                        let hz = row[i + 1];
                        row[i + 1] = s * row[i] + c * hz;
                        row[i] = c * row[i] - s * hz;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Complex Schur form `m = q t q*` with `t` upper triangular.
pub fn schur(m: &CMat) -> Result<Schur> {
    if !m.is_square() {
        return Err(Error::InvalidShape(format!("schur of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut h = m.clone();
    let mut q = CMat::identity(n);
    for k in 0..n.saturating_sub(2) {
        if let Some(v) = householder_vector(&h, k) {
            apply_reflector_left(&mut h, &v, k + 1, 0);
            apply_reflector_right(&mut h, &v, k + 1, 0);
            apply_reflector_right(&mut q, &v, k + 1, 0);
        }
    }
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            h[(i, j)] = ZERO;
        }
    }

    let hnorm = h.frobenius_norm();
    if n <= 1 || hnorm == 0.0 {
        return Ok(Schur { t: h, q });
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_QR_ITERS_PER_EIGENVALUE {
            return Err(Error::NoConvergence { iterations: total });
        }

        let mu = if iter % 10 == 0 {
            // Exceptional shift to break cycles.
            let extra = if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + C64::new(0.75 * (h[(hi, hi - 1)].norm() + extra), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            rots.push((c, s));
        }
        for (idx, k) in (l..hi).enumerate() {
            let (c, s) = rots[idx];
            let top = (k + 1).min(hi);
            for i in 0..=top {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + s.conj() * b;
                h[(i, k + 1)] = -s * a + b * c;
            }
            for i in 0..n {
                let a = q[(i, k)];
                let b = q[(i, k + 1)];
                q[(i, k)] = a * c + s.conj() * b;
                q[(i, k + 1)] = -s * a + b * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    for i in 1..n {
        h[(i, i - 1)] = ZERO;
    }
    Ok(Schur { t: h, q })
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `[[c, s], [−conj(s), c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (C64, C64) {
    let r = x.norm().hypot(y.norm());
    if r == 0.0 {
        return (ONE, ZERO);
    }
    if x.norm() == 0.0 {
        return (ZERO, ONE);
    }
    let c = x.norm() / r;
    let s = (x / x.norm()) * y.conj() / r;
    (C64::new(c, 0.0), s)
}

/// Eigenvectors of an upper triangular matrix by back-substitution; column
/// `k` belongs to `t[k][k]`. Near-zero pivots are replaced by `eps·|t|`.
fn triangular_eigenvectors(t: &CMat) -> CMat {
    let n = t.rows();
    let small = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE);
    let mut y = CMat::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = C64::new(small, 0.0);
            }
            y[(i, k)] = -s / denom;
        }
        // Rescale to avoid overflow from tiny pivots.
        let nv = vnorm(&y.column(k));
        if nv > 1e100 {
            for i in 0..=k {
                y[(i, k)] /= nv;
            }
        }
    }
    y
}
