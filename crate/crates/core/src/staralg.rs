//! Finite-dimensional *-algebras given by structure constants.
//!
//! An algebra is stored densely: `b_i b_j = Σ_k c[i][j][k] b_k`, and the
//! involution as a matrix whose column `i` holds the coefficients of `b_i*`.
//! Spectra are always computed in the unitisation through the left regular
//! representation, so no ideal theory is needed anywhere.

use crate::error::{Error, Result, Violation};
use crate::linops::{self, cluster, eig, rank, svd, CMat, C64, ONE, ZERO};

/// Relative residual accepted by the structural checks in [`build_algebra`].
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum NormTag {
    /// Operator norm of a faithful matrix realization, one matrix per basis
    /// element.
    Operator(Vec<CMat>),
    /// Weighted ℓ¹ norm of the coefficients.
    Ell1(Vec<f64>),
    /// Largest coefficient modulus.
    Sup,
    /// `|λe + a| := |λ| + |a|` on an adjoined unit (last coordinate).
    Unitised(Box<NormTag>),
}

/// Unvalidated algebra data, the input to [`build_algebra`].
#[derive(Debug, Clone)]
pub struct RawAlgebra {
    pub basis_names: Vec<String>,
    /// Flat `dim³` tensor, index `(i·dim + j)·dim + k`.
    pub mult: Vec<C64>,
    /// Column `i` holds the coefficients of `b_i*`.
    pub star: CMat,
    pub norm: NormTag,
    /// Declared unit, if it is a basis element.
    pub unit: Option<usize>,
}

impl RawAlgebra {
    /// Dense tensor from sparse `(i, j, k, c)` entries.
    pub fn from_triples(
        basis_names: Vec<String>,
        triples: &[(usize, usize, usize, C64)],
        star: CMat,
        norm: NormTag,
        unit: Option<usize>,
    ) -> Result<Self> {
        let d = basis_names.len();
        let mut mult = vec![ZERO; d * d * d];
        for &(i, j, k, c) in triples {
            if i >= d || j >= d || k >= d {
                return Err(Error::InvalidInput(format!("structure index ({i},{j},{k}) out of range")));
            }
            mult[(i * d + j) * d + k] += c;
        }
        Ok(RawAlgebra { basis_names, mult, star, norm, unit })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarAlgebra {
    names: Vec<String>,
    mult: Vec<C64>,
    star: CMat,
    norm: NormTag,
    unit: Option<Vec<C64>>,
}

/// Element of a [`StarAlgebra`], as coefficients on its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement<'a> {
    alg: &'a StarAlgebra,
    pub coeffs: Vec<C64>,
}

impl StarAlgebra {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn norm_tag(&self) -> &NormTag {
        &self.norm
    }

    pub fn star_matrix(&self) -> &CMat {
        &self.star
    }

    /// Coefficients of `b_i b_j`.
    pub fn structure(&self, i: usize, j: usize) -> &[C64] {
        let d = self.dim();
        &self.mult[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Coefficient vector of the unit, when one exists.
    pub fn unit(&self) -> Option<&[C64]> {
        self.unit.as_deref()
    }

    /// Index of the unit when it is itself a basis element.
    pub fn unit_index(&self) -> Option<usize> {
        let u = self.unit.as_ref()?;
        let idx = u.iter().position(|z| (z - ONE).norm() < 1e-12)?;
        u.iter().enumerate().all(|(k, z)| k == idx || z.norm() < 1e-12).then_some(idx)
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn element(&self, coeffs: Vec<C64>) -> Result<AlgElement<'_>> {
        if coeffs.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "element has {} coefficients, algebra has dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        Ok(AlgElement { alg: self, coeffs })
    }

    pub fn basis_element(&self, i: usize) -> AlgElement<'_> {
        let mut c = vec![ZERO; self.dim()];
        c[i] = ONE;
        AlgElement { alg: self, coeffs: c }
    }

    pub fn zero(&self) -> AlgElement<'_> {
        AlgElement { alg: self, coeffs: vec![ZERO; self.dim()] }
    }

    pub fn mul_coeffs(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![ZERO; d];
        for (i, ai) in a.iter().enumerate() {
            if *ai == ZERO {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let f = ai * bj;
                if f == ZERO {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(self.structure(i, j)) {
                    *o += f * c;
                }
            }
        }
        out
    }

    pub fn star_coeffs(&self, a: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = a.iter().map(|z| z.conj()).collect();
        self.star.mat_vec(&conj)
    }

    pub fn norm_coeffs(&self, a: &[C64]) -> f64 {
        tag_norm(&self.norm, a)
    }

    /// Matrix of `x ↦ a x` on the algebra itself (not its unitisation).
    pub fn left_mult_matrix(&self, a: &[C64]) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for j in 0..d {
            let mut e = vec![ZERO; d];
            e[j] = ONE;
            m.set_column(j, &self.mul_coeffs(a, &e));
        }
        m
    }

    /// Checks that all basis elements commute; reports the worst pair.
    pub fn check_commutative(&self, tol: f64) -> Result<()> {
        let d = self.dim();
        let scale = 1.0 + self.mult.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..d {
            for j in (i + 1)..d {
                let r = linops::vnorm(&linops::vsub(self.structure(i, j), self.structure(j, i)));
                if r > tol * scale {
                    return Err(Error::NotCommutative { i, j, residual: r });
                }
            }
        }
        Ok(())
    }

    /// Matrices `R(b_i)` when the algebra carries a realization.
    pub fn realization(&self) -> Option<&[CMat]> {
        match &self.norm {
            NormTag::Operator(r) => Some(r),
            _ => None,
        }
    }
}

fn tag_norm(tag: &NormTag, a: &[C64]) -> f64 {
    match tag {
        NormTag::Operator(r) => {
            let mut m = CMat::zeros(r[0].rows(), r[0].cols());
            for (ai, ri) in a.iter().zip(r) {
                if *ai != ZERO {
                    m += &ri.scale(*ai);
                }
            }
            m.norm()
        }
        NormTag::Ell1(w) => a.iter().zip(w).map(|(z, wi)| z.norm() * wi).sum(),
        NormTag::Sup => a.iter().map(|z| z.norm()).fold(0.0, f64::max),
        NormTag::Unitised(inner) => {
            let (last, rest) = a.split_last().expect("unitised element is non-empty");
            last.norm() + tag_norm(inner, rest)
        }
    }
}

/// Validates raw data; on failure lists every violated invariant.
pub fn build_algebra(raw: RawAlgebra) -> Result<StarAlgebra> {
    let d = raw.basis_names.len();
    if d == 0 {
        return Err(Error::InvalidInput("algebra must have at least one basis element".into()));
    }
    if raw.mult.len() != d * d * d {
        return Err(Error::InvalidShape(format!("structure tensor has {} entries, need {}", raw.mult.len(), d * d * d)));
    }
    if raw.star.rows() != d || raw.star.cols() != d {
        return Err(Error::InvalidShape(format!("involution matrix must be {d}x{d}")));
    }
    match &raw.norm {
        NormTag::Operator(r) => {
            if r.len() != d || r.iter().any(|m| !m.is_square() || m.rows() != r[0].rows()) {
                return Err(Error::InvalidShape("realization needs one square matrix per basis element".into()));
            }
        }
        NormTag::Ell1(w) => {
            if w.len() != d || w.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::InvalidInput("ℓ¹ weights must be positive, one per basis element".into()));
            }
        }
        NormTag::Sup => {}
        NormTag::Unitised(_) => {
            return Err(Error::InvalidInput("unitised norm tags are produced by unitise only".into()));
        }
    }
    if let Some(u) = raw.unit {
        if u >= d {
            return Err(Error::InvalidInput(format!("unit index {u} out of range")));
        }
    }

    let alg = StarAlgebra { names: raw.basis_names, mult: raw.mult, star: raw.star, norm: raw.norm, unit: None };
    let scale = 1.0 + alg.mult.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = STRUCTURE_TOL * scale * scale;
    let mut violations = Vec::new();

    let e = |i: usize| {
        let mut v = vec![ZERO; d];
        v[i] = ONE;
        v
    };
    let products: Vec<Vec<C64>> = (0..d * d).map(|ij| alg.structure(ij / d, ij % d).to_vec()).collect();

    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let left = alg.mul_coeffs(&products[i * d + j], &e(k));
                let right = alg.mul_coeffs(&e(i), &products[j * d + k]);
                let r = linops::vnorm(&linops::vsub(&left, &right));
                if r > tol {
                    violations.push(Violation::Associativity { i, j, k, residual: r });
                }
            }
        }
    }

    for i in 0..d {
        let back = alg.star_coeffs(&alg.star_coeffs(&e(i)));
        let r = linops::vnorm(&linops::vsub(&back, &e(i)));
        if r > STRUCTURE_TOL * (1.0 + alg.star.max_abs().powi(2)) {
            violations.push(Violation::NotInvolutive { i, residual: r });
        }
    }
    let stars: Vec<Vec<C64>> = (0..d).map(|i| alg.star_coeffs(&e(i))).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = alg.star_coeffs(&products[i * d + j]);
            let rhs = alg.mul_coeffs(&stars[j], &stars[i]);
            let r = linops::vnorm(&linops::vsub(&lhs, &rhs));
            if r > tol * (1.0 + alg.star.max_abs().powi(2)) {
                violations.push(Violation::Involution { i, j, residual: r });
            }
        }
    }

    let basis_norms: Vec<f64> = (0..d).map(|i| alg.norm_coeffs(&e(i))).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = alg.norm_coeffs(&products[i * d + j]);
            let rhs = basis_norms[i] * basis_norms[j];
            if lhs > rhs * (1.0 + STRUCTURE_TOL) + STRUCTURE_TOL {
                violations.push(Violation::Norm { i, j, lhs, rhs });
            }
        }
    }

    if let NormTag::Operator(r) = &alg.norm {
        check_realization(&alg, r, &mut violations);
    }

    let unit = match raw.unit {
        Some(u) => {
            let mut res: f64 = 0.0;
            for j in 0..d {
                res = res.max(linops::vnorm(&linops::vsub(alg.structure(u, j), &e(j))));
                res = res.max(linops::vnorm(&linops::vsub(alg.structure(j, u), &e(j))));
            }
            if res > tol {
                violations.push(Violation::Unit { index: u, residual: res });
            }
            Some(e(u))
        }
        None => detect_unit(&alg, tol),
    };

    if !violations.is_empty() {
        return Err(Error::AlgebraViolations(violations));
    }
    Ok(StarAlgebra { unit, ..alg })
}

fn check_realization(alg: &StarAlgebra, r: &[CMat], violations: &mut Vec<Violation>) {
    let d = alg.dim();
    let rnorm = r.iter().map(|m| m.max_abs()).fold(0.0, f64::max).max(1e-300);
    let tol = STRUCTURE_TOL * (1.0 + rnorm * rnorm) * (1.0 + alg.mult.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let combine = |c: &[C64]| {
        let mut m = CMat::zeros(r[0].rows(), r[0].cols());
        for (ci, ri) in c.iter().zip(r) {
            if *ci != ZERO {
                m += &ri.scale(*ci);
            }
        }
        m
    };
    for i in 0..d {
        for j in 0..d {
            let res = (&(&r[i] * &r[j]) - &combine(alg.structure(i, j))).max_abs();
            if res > tol {
                violations.push(Violation::Realization {
                    detail: format!("R(b_{i})R(b_{j}) differs from R(b_{i} b_{j}) by {res:.3e}"),
                });
            }
        }
        let mut ei = vec![ZERO; d];
        ei[i] = ONE;
        let res = (&r[i].adjoint() - &combine(&alg.star_coeffs(&ei))).max_abs();
        if res > tol {
            violations.push(Violation::Realization { detail: format!("R(b_{i}*) differs from R(b_{i})* by {res:.3e}") });
        }
    }
    let stacked = CMat::from_columns(&r.iter().map(CMat::vec).collect::<Vec<_>>());
    let rk = rank(&stacked, 1e-10);
    if rk < d {
        violations.push(Violation::Realization { detail: format!("realization has rank {rk} < {d}, not faithful") });
    }
}

/// Solves `u b_j = b_j = b_j u` for all `j` in the least-squares sense.
fn detect_unit(alg: &StarAlgebra, tol: f64) -> Option<Vec<C64>> {
    let d = alg.dim();
    // Unknown u; equations Σ_i u_i c[i][j][k] = δ_jk and Σ_i u_i c[j][i][k] = δ_jk.
    let mut sys = CMat::zeros(2 * d * d, d);
    let mut rhs = vec![ZERO; 2 * d * d];
    for j in 0..d {
        for k in 0..d {
            let r1 = j * d + k;
            let r2 = d * d + r1;
            for i in 0..d {
                sys[(r1, i)] = alg.structure(i, j)[k];
                sys[(r2, i)] = alg.structure(j, i)[k];
            }
            if j == k {
                rhs[r1] = ONE;
                rhs[r2] = ONE;
            }
        }
    }
    let u = sys.lstsq(&rhs, 1e-12);
    let res = linops::vnorm(&linops::vsub(&sys.mat_vec(&u), &rhs));
    (res <= tol * (1.0 + linops::vnorm(&u))).then(|| snap(u))
}

fn snap(v: Vec<C64>) -> Vec<C64> {
    v.into_iter()
        .map(|z| C64::new(snap_real(z.re), snap_real(z.im)))
        .collect()
}

fn snap_real(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-13 {
        r
    } else {
        x
    }
}

/// Group ring `C[G]` of `G = Z_{n_1} × … × Z_{n_r}` with convolution,
/// `a* = Σ conj(a(g)) δ_{g⁻¹}` and the ℓ¹ norm; unit `δ_0` at index 0.
pub fn group_ring(orders: &[usize]) -> Result<StarAlgebra> {
    if orders.is_empty() {
        return Err(Error::InvalidInput("group needs at least one cyclic factor".into()));
    }
    if orders.iter().any(|&n| n == 0) {
        return Err(Error::InvalidInput("cyclic orders must be at least 1".into()));
    }
    let d: usize = orders.iter().product();
    let decode = |mut idx: usize| {
        let mut g = vec![0; orders.len()];
        for r in (0..orders.len()).rev() {
            g[r] = idx % orders[r];
            idx /= orders[r];
        }
        g
    };
    let encode = |g: &[usize]| g.iter().zip(orders).fold(0, |acc, (x, n)| acc * n + x);
    let names = (0..d)
        .map(|idx| {
            let g = decode(idx);
            if g.len() == 1 {
                format!("δ{}", g[0])
            } else {
                format!("δ({})", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        })
        .collect();
    let mut triples = Vec::with_capacity(d * d);
    let mut star = CMat::zeros(d, d);
    for i in 0..d {
        let gi = decode(i);
        let inv: Vec<usize> = gi.iter().zip(orders).map(|(x, n)| (n - x) % n).collect();
        star[(encode(&inv), i)] = ONE;
        for j in 0..d {
            let gj = decode(j);
            let sum: Vec<usize> = gi.iter().zip(&gj).zip(orders).map(|((a, b), n)| (a + b) % n).collect();
            triples.push((i, j, encode(&sum), ONE));
        }
    }
    build_algebra(RawAlgebra::from_triples(names, &triples, star, NormTag::Ell1(vec![1.0; d]), Some(0))?)
}

/// Coefficient extraction onto the span of a family of matrices.
struct SpanDecomposer {
    basis: CMat,
    pinv: CMat,
}

impl SpanDecomposer {
    fn new(mats: &[CMat]) -> Self {
        let basis = CMat::from_columns(&mats.iter().map(CMat::vec).collect::<Vec<_>>());
        let s = svd(&basis);
        let smax = s.singular_values[0];
        let d = mats.len();
        let mut pinv = CMat::zeros(d, basis.rows());
        for (k, &sig) in s.singular_values.iter().enumerate() {
            if sig <= 1e-12 * smax {
                continue;
            }
            for i in 0..d {
                for j in 0..basis.rows() {
                    pinv[(i, j)] += s.v[(i, k)] * s.u[(j, k)].conj() / sig;
                }
            }
        }
        SpanDecomposer { basis, pinv }
    }

    /// Coefficients of `m` and the residual of the fit.
    fn coeffs(&self, m: &CMat) -> (Vec<C64>, f64) {
        let v = m.vec();
        let c = snap_small(self.pinv.mat_vec(&v));
        let res = linops::vnorm(&linops::vsub(&self.basis.mat_vec(&c), &v));
        (c, res)
    }
}

fn snap_small(v: Vec<C64>) -> Vec<C64> {
    v.into_iter()
        .map(|z| {
            let re = if z.re.abs() < 1e-14 { 0.0 } else { z.re };
            let im = if z.im.abs() < 1e-14 { 0.0 } else { z.im };
            snap_real_c(C64::new(re, im))
        })
        .collect()
}

fn snap_real_c(z: C64) -> C64 {
    C64::new(snap_real(z.re), snap_real(z.im))
}

/// *-algebra spanned by a family of matrices closed under products and
/// adjoints, with the operator-norm tag. The unit is detected, not declared.
pub fn from_matrices(names: Vec<String>, mats: Vec<CMat>) -> Result<StarAlgebra> {
    if names.len() != mats.len() || mats.is_empty() {
        return Err(Error::InvalidInput("need one name per matrix and at least one matrix".into()));
    }
    let d = mats.len();
    let dec = SpanDecomposer::new(&mats);
    let scale = mats.iter().map(CMat::max_abs).fold(0.0, f64::max).max(1e-300);
    let mut triples = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let (c, res) = dec.coeffs(&(&mats[i] * &mats[j]));
            if res > 1e-10 * scale * scale {
                return Err(Error::InvalidInput(format!("span not closed under product ({i},{j})")));
            }
            for (k, ck) in c.into_iter().enumerate() {
                if ck != ZERO {
                    triples.push((i, j, k, ck));
                }
            }
        }
    }
    let mut star = CMat::zeros(d, d);
    for i in 0..d {
        let (c, res) = dec.coeffs(&mats[i].adjoint());
        if res > 1e-10 * scale {
            return Err(Error::InvalidInput(format!("span not closed under adjoint ({i})")));
        }
        star.set_column(i, &c);
    }
    let unit = mats.iter().position(|m| m.is_square() && m.dist(&CMat::identity(m.rows())) < 1e-14);
    build_algebra(RawAlgebra::from_triples(names, &triples, star, NormTag::Operator(mats), unit)?)
}

/// `M_n` with basis `{1} ∪ {E_ij : (i, j) ≠ (0, 0)}`; the unit is basis
/// element 0.
pub fn matrix_algebra(n: usize) -> Result<StarAlgebra> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix size must be positive".into()));
    }
    let mut names = vec!["1".to_string()];
    let mut mats = vec![CMat::identity(n)];
    for i in 0..n {
        for j in 0..n {
            if (i, j) != (0, 0) {
                names.push(format!("E{i}{j}"));
                mats.push(CMat::unit(n, i, j));
            }
        }
    }
    from_matrices(names, mats)
}

/// Diagonal matrices `D_n` with basis `E_ii`.
pub fn diagonal_algebra(n: usize) -> Result<StarAlgebra> {
    let names = (0..n).map(|i| format!("E{i}{i}")).collect();
    let mats = (0..n).map(|i| CMat::unit(n, i, i)).collect();
    from_matrices(names, mats)
}

/// Adjoins a unit `e` (as the last basis element) unless `A` already has
/// one, in which case `A` is returned unchanged.
pub fn unitise(a: &StarAlgebra) -> StarAlgebra {
    if a.is_unital() {
        return a.clone();
    }
    let d = a.dim();
    let n = d + 1;
    let mut mult = vec![ZERO; n * n * n];
    for i in 0..d {
        for j in 0..d {
            for (k, c) in a.structure(i, j).iter().enumerate() {
                mult[(i * n + j) * n + k] = *c;
            }
        }
    }
    for j in 0..n {
        mult[(d * n + j) * n + j] = ONE;
        mult[(j * n + d) * n + j] = ONE;
    }
    let mut star = CMat::zeros(n, n);
    for i in 0..d {
        for k in 0..d {
            star[(k, i)] = a.star[(k, i)];
        }
    }
    star[(d, d)] = ONE;
    let norm = match &a.norm {
        NormTag::Operator(r) => {
            let mut r = r.clone();
            r.push(CMat::identity(r[0].rows()));
            NormTag::Operator(r)
        }
        NormTag::Ell1(w) => {
            let mut w = w.clone();
            w.push(1.0);
            NormTag::Ell1(w)
        }
        other => NormTag::Unitised(Box::new(other.clone())),
    };
    let mut names = a.names.clone();
    names.push("e".into());
    let mut unit = vec![ZERO; n];
    unit[d] = ONE;
    StarAlgebra { names, mult, star, norm, unit: Some(unit) }
}

/// Image of an element of `A` in its unitisation.
pub fn embed_in_unitisation(a: &StarAlgebra, coeffs: &[C64]) -> Vec<C64> {
    let mut v = coeffs.to_vec();
    if !a.is_unital() {
        v.push(ZERO);
    }
    v
}

/// Matrix of `L_a : x ↦ a x` on the unitisation in its canonical basis.
pub fn left_regular(alg: &StarAlgebra, a: &AlgElement<'_>) -> Result<CMat> {
    if a.coeffs.len() != alg.dim() {
        return Err(Error::InvalidInput(format!(
            "element of dimension {} for an algebra of dimension {}",
            a.coeffs.len(),
            alg.dim()
        )));
    }
    let tilde = unitise(alg);
    Ok(tilde.left_mult_matrix(&embed_in_unitisation(alg, &a.coeffs)))
}

/// Spectrum of `a` in the unitisation, as a sorted multiset in which
/// eigenvalues within `tol·(1 + |L_a|)` of each other are merged to their
/// cluster mean.
pub fn spectrum(alg: &StarAlgebra, a: &AlgElement<'_>, tol: f64) -> Result<Vec<C64>> {
    let l = left_regular(alg, a)?;
    grouped_spectrum(&l, tol)
}

/// Eigenvalues of `m`, merged within `tol·(1 + |m|)`.
pub fn grouped_spectrum(m: &CMat, tol: f64) -> Result<Vec<C64>> {
    let values = eig(m, tol)?.values;
    let gap = tol * (1.0 + m.norm());
    let mut out = Vec::with_capacity(values.len());
    for group in cluster(&values, gap) {
        let mean = group.iter().map(|&i| values[i]).sum::<C64>() / group.len() as f64;
        out.extend(std::iter::repeat_n(mean, group.len()));
    }
    out.sort_by(linops::lex_cmp);
    Ok(out)
}

/// Operations shared by matrices and abstract algebra elements, enough to
/// run the spectral-radius, Pták and positivity machinery generically.
pub trait StarElement: Clone {
    fn mul(&self, rhs: &Self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn scale(&self, c: C64) -> Self;
    fn adjoint(&self) -> Self;
    fn norm(&self) -> f64;
    /// The unit of the ambient algebra, if there is one.
    fn unit(&self) -> Option<Self>;
    /// Spectrum in the unitisation.
    fn spectrum(&self, tol: f64) -> Result<Vec<C64>>;
    /// Two-sided inverse, if the element is invertible.
    fn inverse(&self) -> Option<Self>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }
}

impl StarElement for CMat {
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn scale(&self, c: C64) -> Self {
        CMat::scale(self, c)
    }
    fn adjoint(&self) -> Self {
        CMat::adjoint(self)
    }
    fn norm(&self) -> f64 {
        CMat::norm(self)
    }
    fn unit(&self) -> Option<Self> {
        Some(CMat::identity(self.rows()))
    }
    fn spectrum(&self, tol: f64) -> Result<Vec<C64>> {
        Ok(eig(self, tol)?.values)
    }
    fn inverse(&self) -> Option<Self> {
        CMat::inverse(self).ok()
    }
}

impl<'a> AlgElement<'a> {
    pub fn algebra(&self) -> &'a StarAlgebra {
        self.alg
    }
}

impl StarElement for AlgElement<'_> {
    fn mul(&self, rhs: &Self) -> Self {
        AlgElement { alg: self.alg, coeffs: self.alg.mul_coeffs(&self.coeffs, &rhs.coeffs) }
    }
    fn add(&self, rhs: &Self) -> Self {
        AlgElement { alg: self.alg, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
    fn scale(&self, c: C64) -> Self {
        AlgElement { alg: self.alg, coeffs: linops::vscale(&self.coeffs, c) }
    }
    fn adjoint(&self) -> Self {
        AlgElement { alg: self.alg, coeffs: self.alg.star_coeffs(&self.coeffs) }
    }
    fn norm(&self) -> f64 {
        self.alg.norm_coeffs(&self.coeffs)
    }
    fn unit(&self) -> Option<Self> {
        self.alg.unit().map(|u| AlgElement { alg: self.alg, coeffs: u.to_vec() })
    }
    fn spectrum(&self, tol: f64) -> Result<Vec<C64>> {
        let l = left_regular(self.alg, self)?;
        Ok(eig(&l, tol)?.values)
    }
    fn inverse(&self) -> Option<Self> {
        let u = self.alg.unit()?;
        let l = self.alg.left_mult_matrix(&self.coeffs);
        let x = l.solve(&CMat::from_columns(&[u.to_vec()])).ok()?.column(0);
        let inv = AlgElement { alg: self.alg, coeffs: x };
        let check = inv.mul(self);
        let res = linops::vnorm(&linops::vsub(&check.coeffs, u));
        (res < 1e-8 * (1.0 + linops::vnorm(&inv.coeffs))).then_some(inv)
    }
}
