//! Characters of commutative *-algebras, the Gelfand transform, and the
//! truncated convolution algebra `ℓ¹(Z)` with numerical Wiener inversion.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linops::{eig, lex_cmp, random_in_disc, vdot, CMat, C64, ZERO};
use crate::staralg::{unitise, AlgElement, StarAlgebra};

const CHARACTER_SEED: u64 = 0x6a09_e667;
const ATTEMPTS: usize = 3;

/// Rows are characters, columns the basis of the algebra (not of its
/// unitisation): `values[(t, i)] = τ_t(b_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub values: CMat,
    pub multiplicativity_residual: f64,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.values.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.rows() == 0
    }

    pub fn row(&self, t: usize) -> &[C64] {
        self.values.row(t)
    }
}

/// All characters of a commutative, semisimple algebra, found by
/// diagonalizing the left-regular image of a random element of `Ã`.
pub fn characters(alg: &StarAlgebra, tol: f64) -> Result<CharacterTable> {
    alg.check_commutative(tol)?;
    let tilde = unitise(alg);
    let n = tilde.dim();
    let d = alg.dim();
    let basis_l: Vec<CMat> = (0..n).map(|i| tilde.left_mult_matrix(&tilde.basis_element(i).coeffs)).collect();
    let scale = basis_l.iter().map(CMat::max_abs).fold(1.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(CHARACTER_SEED);

    for _ in 0..ATTEMPTS {
        let c: Vec<C64> = (0..n).map(|_| random_in_disc(&mut rng)).collect();
        let lc = tilde.left_mult_matrix(&c);
        let dec = eig(&lc, tol)?;
        let spread = dec.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let separated = dec.values.iter().enumerate().all(|(i, x)| {
            dec.values[i + 1..].iter().all(|y| (x - y).norm() > 1e3 * tol.sqrt() * spread)
        });
        if !separated {
            continue;
        }
        let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n);
        for k in 0..n {
            let v = dec.vectors.column(k);
            let vv = vdot(&v, &v);
            rows.push(basis_l.iter().map(|l| vdot(&v, &l.mat_vec(&v)) / vv).collect());
        }
        let mut residual: f64 = 0.0;
        for row in &rows {
            for i in 0..n {
                for j in 0..n {
                    let prod: C64 = tilde.structure(i, j).iter().zip(row).map(|(c, t)| c * t).sum();
                    residual = residual.max((prod - row[i] * row[j]).norm());
                }
            }
        }
        if residual > 1e3 * tol * scale {
            continue;
        }
        let mut kept: Vec<Vec<C64>> = rows
            .into_iter()
            .map(|r| r[..d].to_vec())
            .filter(|r| alg.is_unital() || r.iter().any(|z| z.norm() > 1e3 * tol * scale))
            .collect();
        kept.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| lex_cmp(&round(*x), &round(*y)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = if kept.is_empty() { CMat::zeros(0, d) } else { CMat::from_rows(&kept) };
        return Ok(CharacterTable { values, multiplicativity_residual: residual });
    }
    Err(Error::NotSemisimple)
}

fn round(z: C64) -> C64 {
    let q = |x: f64| (x * 1e9).round() / 1e9;
    C64::new(q(z.re), q(z.im))
}

/// `â(τ_t)` for every character in the table.
pub fn gelfand_transform(table: &CharacterTable, a: &AlgElement<'_>) -> Result<Vec<C64>> {
    if a.coeffs.len() != table.values.cols() {
        return Err(Error::InvalidInput("element and character table disagree on dimension".into()));
    }
    Ok(table.values.mat_vec(&a.coeffs))
}

/// Worst `|τ(a*) − conj τ(a)|` over basis elements and characters.
pub fn hermitian_defect(alg: &StarAlgebra, table: &CharacterTable) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..alg.dim() {
        let star = alg.star_coeffs(&alg.basis_element(i).coeffs);
        for t in 0..table.len() {
            let row = table.row(t);
            let lhs: C64 = row.iter().zip(&star).map(|(x, y)| x * y).sum();
            worst = worst.max((lhs - row[i].conj()).norm());
        }
    }
    worst
}

/// Finitely supported element of `ℓ¹(Z)`: `a(offset + j) = coeffs[j]`.
///
/// Leading and trailing zeros are always trimmed; the zero element has no
/// coefficients and offset 0.
#[derive(Debug, Clone, PartialEq)]
pub struct L1ZElement {
    offset: i64,
    coeffs: Vec<C64>,
}

impl L1ZElement {
    pub fn new(offset: i64, coeffs: Vec<C64>) -> Self {
        let first = coeffs.iter().position(|z| *z != ZERO);
        let Some(first) = first else {
            return L1ZElement { offset: 0, coeffs: Vec::new() };
        };
        let last = coeffs.iter().rposition(|z| *z != ZERO).expect("non-zero entry exists");
        L1ZElement { offset: offset + first as i64, coeffs: coeffs[first..=last].to_vec() }
    }

    pub fn delta(k: i64) -> Self {
        L1ZElement { offset: k, coeffs: vec![C64::new(1.0, 0.0)] }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn get(&self, k: i64) -> C64 {
        let j = k - self.offset;
        if j < 0 || j as usize >= self.coeffs.len() {
            ZERO
        } else {
            self.coeffs[j as usize]
        }
    }

    /// Number of integers between the first and last non-zero entry.
    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).sum()
    }

    /// `a*(k) = conj a(−k)`.
    pub fn star(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let top = self.offset + self.coeffs.len() as i64 - 1;
        L1ZElement { offset: -top, coeffs: self.coeffs.iter().rev().map(|z| z.conj()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return L1ZElement::new(other.offset, other.coeffs.iter().map(|z| -z).collect());
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.coeffs.len() as i64).max(other.offset + other.coeffs.len() as i64);
        L1ZElement::new(lo, (lo..hi).map(|k| self.get(k) - other.get(k)).collect())
    }
}

/// Exact finite convolution.
pub fn l1z_convolve(a: &L1ZElement, b: &L1ZElement) -> L1ZElement {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return L1ZElement::new(0, Vec::new());
    }
    let mut out = vec![ZERO; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    L1ZElement::new(a.offset + b.offset, out)
}

/// `e^{−2πi m/N}` for `m = 0..N`, each from an exact angle reduction.
fn roots(n: usize) -> Vec<C64> {
    (0..n)
        .map(|m| {
            let t = 2.0 * PI * m as f64 / n as f64;
            C64::new(t.cos(), -t.sin())
        })
        .collect()
}

/// `f(t_j) = Σ_k a(k) e^{−ikt_j}` at `t_j = 2πj/N`.
pub fn l1z_transform_grid(a: &L1ZElement, n: usize) -> Result<Vec<C64>> {
    if n == 0 {
        return Err(Error::InvalidInput("grid size must be positive".into()));
    }
    let w = roots(n);
    let nn = n as i64;
    Ok((0..nn)
        .map(|j| {
            a.coeffs
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    let k = a.offset + idx as i64;
                    c * w[((k * j).rem_euclid(nn)) as usize]
                })
                .sum()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WienerInverse {
    pub b: L1ZElement,
    /// `|a * b − δ₀|₁`.
    pub residual: f64,
    /// `max(|b(−K)|, |b(K)|)`; a heuristic truncation certificate.
    pub tail: f64,
    pub tail_ok: bool,
    pub min_modulus: f64,
    pub grid: usize,
}

pub fn default_grid(truncation: usize) -> usize {
    4096usize.max(32 * truncation)
}

/// Approximate inverse supported in `[−K, K]`, from grid quadrature of
/// `1/f` where `f` is the Gelfand transform of `a`.
pub fn wiener_invert(a: &L1ZElement, truncation: usize, grid: Option<usize>, tol: f64) -> Result<WienerInverse> {
    let n = grid.unwrap_or_else(|| default_grid(truncation));
    let f = l1z_transform_grid(a, n)?;
    let (jmin, fmin) = f
        .iter()
        .enumerate()
        .map(|(j, z)| (j, z.norm()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("grid is non-empty");
    if fmin <= tol {
        return Err(Error::TransformVanishes { t: 2.0 * PI * jmin as f64 / n as f64, modulus: fmin });
    }
    let inv: Vec<C64> = f.iter().map(|z| z.inv()).collect();
    let w = roots(n);
    let nn = n as i64;
    let k = truncation as i64;
    let coeffs: Vec<C64> = (-k..=k)
        .map(|m| {
            // e^{+imt_j} = conj(e^{−imt_j})
            let s: C64 = inv.iter().enumerate().map(|(j, z)| z * w[((m * j as i64).rem_euclid(nn)) as usize].conj()).sum();
            s / n as f64
        })
        .collect();
    let tail = coeffs[0].norm().max(coeffs[coeffs.len() - 1].norm());
    let b = L1ZElement::new(-k, coeffs);
    let residual = l1z_convolve(a, &b).sub(&L1ZElement::delta(0)).norm1();
    Ok(WienerInverse { b, residual, tail, tail_ok: tail <= tol, min_modulus: fmin, grid: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::ONE;
    use crate::specanalysis::r_lambda;
    use crate::staralg::{diagonal_algebra, group_ring, StarElement};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn contains_row(table: &CharacterTable, row: &[C64]) -> bool {
        (0..table.len()).any(|t| table.row(t).iter().zip(row).all(|(x, y)| (x - y).norm() < 1e-10))
    }

    #[test]
    fn diagonal_algebra_gives_coordinate_evaluations() {
        let d3 = diagonal_algebra(3).unwrap();
        let t = characters(&d3, 1e-10).unwrap();
        assert_eq!(t.len(), 3);
        for i in 0..3 {
            let mut row = vec![ZERO; 3];
            row[i] = ONE;
            assert!(contains_row(&t, &row));
        }
    }

    #[test]
    fn group_ring_characters() {
        let t = characters(&group_ring(&[2]).unwrap(), 1e-10).unwrap();
        assert_eq!(t.len(), 2);
        assert!(contains_row(&t, &[ONE, ONE]) && contains_row(&t, &[ONE, c(-1.0, 0.0)]));
        let z4 = group_ring(&[4]).unwrap();
        let t = characters(&z4, 1e-10).unwrap();
        assert_eq!(t.len(), 4);
        let i = c(0.0, 1.0);
        for m in 0..4 {
            let z = i.powu(m);
            assert!(contains_row(&t, &[ONE, z, z * z, z * z * z]), "m = {m}");
        }
        assert!(hermitian_defect(&z4, &t) < 1e-12);
    }

    #[test]
    fn transform_examples() {
        let z4 = group_ring(&[4]).unwrap();
        let t = characters(&z4, 1e-10).unwrap();
        let ones = gelfand_transform(&t, &z4.basis_element(0)).unwrap();
        assert!(ones.iter().all(|z| (z - ONE).norm() < 1e-12));
        let a = z4.element(vec![ZERO, ONE, ZERO, ONE]).unwrap();
        let mut vals: Vec<f64> = gelfand_transform(&t, &a).unwrap().iter().map(|z| z.re).collect();
        vals.sort_by(f64::total_cmp);
        for (v, e) in vals.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        let b = z4.element(vec![c(0.3, 0.1), c(-1.0, 0.5), c(0.2, 0.0), c(0.0, 0.7)]).unwrap();
        let sup = gelfand_transform(&t, &b).unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((sup - r_lambda(&b, 1e-10).unwrap()).abs() < 1e-10);
        let ab = gelfand_transform(&t, &a.mul(&b)).unwrap();
        let (ha, hb) = (gelfand_transform(&t, &a).unwrap(), gelfand_transform(&t, &b).unwrap());
        for k in 0..4 {
            assert!((ab[k] - ha[k] * hb[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn noncommutative_rejected() {
        let m2 = crate::staralg::matrix_algebra(2).unwrap();
        assert!(matches!(characters(&m2, 1e-10), Err(Error::NotCommutative { .. })));
    }

    #[test]
    fn nilpotent_is_not_semisimple() {
        use crate::staralg::{build_algebra, NormTag, RawAlgebra};
        let raw = RawAlgebra::from_triples(vec!["x".into()], &[], CMat::identity(1), NormTag::Sup, None).unwrap();
        let nil = build_algebra(raw).unwrap();
        assert!(matches!(characters(&nil, 1e-10), Err(Error::NotSemisimple)));
    }

    #[test]
    fn convolution_examples() {
        assert_eq!(l1z_convolve(&L1ZElement::delta(1), &L1ZElement::delta(2)), L1ZElement::delta(3));
        let a = L1ZElement::new(0, vec![ONE, ONE]);
        assert_eq!(l1z_convolve(&a, &a), L1ZElement::new(0, vec![ONE, c(2.0, 0.0), ONE]));
        let x = L1ZElement::new(-1, vec![c(1.0, 2.0), ZERO, c(0.0, -1.0), c(3.0, 0.0)]);
        let y = L1ZElement::new(2, vec![c(0.5, 0.5), c(-1.0, 0.0)]);
        assert_eq!(x.star().get(1), c(1.0, -2.0));
        let lhs = l1z_convolve(&x, &y).star();
        let rhs = l1z_convolve(&y.star(), &x.star());
        assert!(lhs.sub(&rhs).norm1() < 1e-15);
        assert!(l1z_convolve(&x, &y).norm1() <= x.norm1() * y.norm1() + 1e-12);
        assert_eq!(L1ZElement::new(5, vec![ZERO, ONE, ZERO]), L1ZElement::delta(6));
    }

    #[test]
    fn transform_grid_examples() {
        let f = l1z_transform_grid(&L1ZElement::delta(0), 8).unwrap();
        assert!(f.iter().all(|z| *z == ONE));
        let f = l1z_transform_grid(&L1ZElement::delta(1), 16).unwrap();
        for (j, z) in f.iter().enumerate() {
            let t = 2.0 * PI * j as f64 / 16.0;
            assert!((z - C64::new(0.0, -t).exp()).norm() < 1e-15);
        }
        let a = L1ZElement::new(-1, vec![ONE, c(3.0, 0.0), ONE]);
        for (j, z) in l1z_transform_grid(&a, 64).unwrap().iter().enumerate() {
            let t = 2.0 * PI * j as f64 / 64.0;
            assert!((z.re - (3.0 + 2.0 * t.cos())).abs() < 1e-14 && z.im.abs() < 1e-14);
        }
    }

    #[test]
    fn wiener_examples() {
        let w = wiener_invert(&L1ZElement::delta(0), 8, None, 1e-10).unwrap();
        assert!(w.b.sub(&L1ZElement::delta(0)).norm1() < 1e-14);
        let a = L1ZElement::new(-1, vec![ONE, c(3.0, 0.0), ONE]);
        let w = wiener_invert(&a, 64, Some(4096), 1e-10).unwrap();
        assert!(w.residual <= 1e-8, "{}", w.residual);
        assert!(w.tail_ok);
        let bad = L1ZElement::new(-1, vec![ONE, c(2.0, 0.0), ONE]);
        match wiener_invert(&bad, 64, None, 1e-10) {
            Err(Error::TransformVanishes { t, .. }) => assert!((t - PI).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
