//! Dense complex matrices: the model of `B(H)` for `H = C^n`.
//!
//! [`CMat`] is a plain row-major value type. Arithmetic goes through the
//! usual operator traits on references and panics on shape mismatch, the way
//! dense-matrix crates usually behave; the fallible entry points
//! ([`CMat::op_norm`], [`eig`], [`nullspace`], [`CMat::solve`]) return
//! [`Error`](crate::Error) instead.

mod eig;
mod lu;
mod svd;

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub use eig::{eig, hermitian_eig, schur, EigenDecomp, Schur};
pub use svd::{nullspace, nullspace_abs, rank, svd, Svd};

pub type C64 = Complex64;

/// Relative tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Builds a matrix from rows; panics if they are ragged.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMat { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let owned: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        CMat::from_rows(&owned)
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        CMat::from_fn(r, c, |i, j| cols[j][i])
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = CMat::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        CMat::diag(&v)
    }

    /// Matrix unit `E_ij` in `M_n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    /// Rank-one operator `x y*`.
    pub fn outer(x: &[C64], y: &[C64]) -> Self {
        CMat::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }

    /// Entries uniform in the unit disc.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        CMat::from_fn(rows, cols, |_, _| random_in_disc(rng))
    }

    pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let a = CMat::random(n, n, rng);
        (&a + &a.adjoint()).scale_real(0.5)
    }

    /// Haar-ish unitary from orthonormalizing a random matrix.
    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let q = orthonormalize_columns(&CMat::random(n, n, rng), 1e-8);
            if q.cols == n {
                return q;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Row-major entries.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, c: C64) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> CMat {
        self.scale(C64::new(c, 0.0))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// `self + c·1`; panics if not square.
    pub fn shift(&self, c: C64) -> CMat {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] += c;
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mat_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "mat_vec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Hilbert-Schmidt inner product `tr(other* self)`.
    pub fn hs_inner(&self, other: &CMat) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        other.data.iter().zip(&self.data).map(|(b, a)| b.conj() * a).sum()
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &CMat) -> CMat {
        &(self * other) - &(other * self)
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::InvalidShape("empty matrix has no norm".into()));
        }
        // Prescaling keeps squared column norms inside the f64 range.
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return Ok(scale);
        }
        let s = svd(&self.scale_real(1.0 / scale));
        Ok(scale * s.singular_values.first().copied().unwrap_or(0.0))
    }

    /// Operator norm, zero for empty matrices.
    pub fn norm(&self) -> f64 {
        self.op_norm().unwrap_or(0.0)
    }

    /// Frobenius norm of `self − self*`, relative to nothing.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// Frobenius norm of `self* self − self self*`.
    pub fn normality_defect(&self) -> f64 {
        let a = self.adjoint();
        (&(&a * self) - &(self * &a)).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_defect() <= tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let n2 = self.frobenius_norm().powi(2);
        self.is_square() && self.normality_defect() <= tol * n2.max(f64::MIN_POSITIVE)
    }

    /// Row-major vectorization as a column vector of length `rows·cols`.
    pub fn vec(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, v: &[C64]) -> CMat {
        assert_eq!(v.len(), rows * cols);
        CMat { rows, cols, data: v.to_vec() }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[CMat]) -> CMat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = CMat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Kronecker product.
    pub fn kron(&self, other: &CMat) -> CMat {
        CMat::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut k: u32) -> CMat {
        assert!(self.is_square());
        let mut result = CMat::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Distance in operator norm.
    pub fn dist(&self, other: &CMat) -> f64 {
        (self - other).norm()
    }

    /// Least-squares solution of `self·x = b` via the pseudo-inverse, with
    /// singular values below `tol·σ_max` discarded.
    pub fn lstsq(&self, b: &[C64], tol: f64) -> Vec<C64> {
        let s = svd(self);
        let smax = s.singular_values.first().copied().unwrap_or(0.0);
        let mut x = vec![ZERO; self.cols];
        for (k, &sigma) in s.singular_values.iter().enumerate() {
            if sigma <= tol * smax || sigma == 0.0 {
                continue;
            }
            let u = s.u.column(k);
            let coef = vdot(&u, b) / sigma;
            for (xi, vi) in x.iter_mut().zip(s.v.column(k)) {
                *xi += coef * vi;
            }
        }
        x
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&CMat> for CMat {
    fn add_assign(&mut self, rhs: &CMat) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `Σ conj(a_i) b_i`.
pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vsub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(a: &[C64], c: C64) -> Vec<C64> {
    a.iter().map(|x| x * c).collect()
}

pub fn random_in_disc<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    loop {
        let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| random_in_disc(rng)).collect();
        let nv = vnorm(&v);
        if nv > 1e-3 {
            return vscale(&v, C64::new(1.0 / nv, 0.0));
        }
    }
}

/// Orthonormal basis of the column span by modified Gram-Schmidt with one
/// re-orthogonalization pass; columns whose residual falls below
/// `tol·(largest column norm)` are dropped.
pub fn orthonormalize_columns(m: &CMat, tol: f64) -> CMat {
    let scale = m.columns().iter().map(|c| vnorm(c)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    if scale == 0.0 {
        return CMat::zeros(m.rows, 0);
    }
    for col in m.columns() {
        let mut v = col;
        for _ in 0..2 {
            for q in &basis {
                let c = vdot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let nv = vnorm(&v);
        if nv > tol * scale {
            basis.push(vscale(&v, C64::new(1.0 / nv, 0.0)));
        }
    }
    if basis.is_empty() {
        CMat::zeros(m.rows, 0)
    } else {
        CMat::from_columns(&basis)
    }
}

/// Orthogonal projection onto the column span of an orthonormal `q`.
pub fn projector(q: &CMat) -> CMat {
    q * &q.adjoint()
}

/// Single-linkage clusters of points closer than `gap`, each as a sorted
/// list of indices; clusters are ordered by their smallest index.
pub fn cluster(values: &[C64], gap: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= gap {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Sorts complex numbers lexicographically by `(re, im)`.
pub fn lex_cmp(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn op_norm_examples() {
        assert!((CMat::identity(3).op_norm().unwrap() - 1.0).abs() < 1e-14);
        assert!((CMat::diag_real(&[1.0, 2.0]).op_norm().unwrap() - 2.0).abs() < 1e-14);
        let n = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!((n.op_norm().unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(CMat::zeros(0, 0).op_norm(), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn new_checks_length() {
        assert!(CMat::new(2, 2, vec![ONE; 3]).is_err());
    }

    #[test]
    fn adjoint_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = CMat::random(3, 5, &mut rng);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = CMat::random(4, 4, &mut rng);
        let p = m.pow(5);
        let q = &(&(&(&m * &m) * &m) * &m) * &m;
        assert!(p.dist(&q) < 1e-12);
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let m = CMat::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 0.0, 1.0]]);
        let q = orthonormalize_columns(&m, 1e-12);
        assert_eq!(q.cols(), 2);
        assert!((&q.adjoint() * &q).dist(&CMat::identity(2)) < 1e-14);
    }

    #[test]
    fn lstsq_recovers_solution() {
        let a = CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0], &[0.0, 0.0]]);
        let x = a.lstsq(&[ONE, C64::new(4.0, 0.0), ZERO], 1e-12);
        assert!((x[0] - ONE).norm() < 1e-14 && (x[1] - C64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
