//! Positive functionals and the GNS construction.
//!
//! For a functional `φ` on `A` with values `φ(b_i)`, the Gram matrix
//! `G_ij = φ(b_i* b_j)` gives the form `⟨a, b⟩_φ = b^H G a`. The quotient by
//! its isotropic part is realized as `ℂ^r` through `ξ(a) = Λ^{1/2} W^H a`,
//! where `G W = W Λ` keeps eigenvalues above `tol·λ_max`.

use crate::error::{Error, Result};
use crate::linops::{hermitian_eig, vdot, vnorm, vsub, CMat, C64, ZERO};
use crate::staralg::{unitise, StarAlgebra};

/// Values `φ(b_i)` on the basis of the algebra it is used with.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub values: Vec<C64>,
}

impl Functional {
    pub fn new(values: Vec<C64>) -> Self {
        Functional { values }
    }

    pub fn eval(&self, coeffs: &[C64]) -> C64 {
        self.values.iter().zip(coeffs).map(|(v, a)| v * a).sum()
    }

    pub fn add(&self, other: &Functional) -> Functional {
        Functional { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: f64) -> Functional {
        Functional { values: self.values.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| *z == ZERO)
    }

    fn check_dim(&self, alg: &StarAlgebra) -> Result<()> {
        if self.values.len() != alg.dim() {
            return Err(Error::InvalidInput(format!(
                "functional has {} values, algebra has dimension {}",
                self.values.len(),
                alg.dim()
            )));
        }
        Ok(())
    }
}

/// `φ(b) = tr(ρ R(b))` for an algebra with a matrix realization.
pub fn density_functional(alg: &StarAlgebra, rho: &CMat) -> Result<Functional> {
    let r = alg
        .realization()
        .ok_or_else(|| Error::InvalidInput("algebra has no matrix realization".into()))?;
    if rho.rows() != r[0].rows() || !rho.is_square() {
        return Err(Error::InvalidShape("density matrix does not match the realization".into()));
    }
    Ok(Functional { values: r.iter().map(|m| (rho * m).trace()).collect() })
}

/// Vector functional `b ↦ ⟨R(b)x, x⟩`.
pub fn vector_functional(alg: &StarAlgebra, x: &[C64]) -> Result<Functional> {
    density_functional(alg, &CMat::outer(x, x))
}

/// Normalized trace `b ↦ tr R(b) / n`.
pub fn trace_state(alg: &StarAlgebra) -> Result<Functional> {
    let n = alg.realization().map(|r| r[0].rows()).unwrap_or(0);
    density_functional(alg, &CMat::identity(n).scale_real(1.0 / n.max(1) as f64))
}

pub fn gram(alg: &StarAlgebra, phi: &Functional) -> Result<CMat> {
    phi.check_dim(alg)?;
    let d = alg.dim();
    let stars: Vec<Vec<C64>> = (0..d).map(|i| alg.star_coeffs(&alg.basis_element(i).coeffs)).collect();
    let mut g = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let e_j = alg.basis_element(j).coeffs;
            g[(i, j)] = phi.eval(&alg.mul_coeffs(&stars[i], &e_j));
        }
    }
    Ok(g)
}

/// Spectral data of the Gram matrix and the reproducing vector.
struct Quotient {
    gram: CMat,
    min_eigenvalue: f64,
    hermitian_defect: f64,
    /// `W`, orthonormal columns for the kept eigenvalues.
    w: CMat,
    lambda: Vec<f64>,
    /// Reproducing vector in quotient coordinates, with its residual.
    c: Vec<C64>,
    c_residual: f64,
}

fn quotient(alg: &StarAlgebra, phi: &Functional, tol: f64) -> Result<Quotient> {
    let g = gram(alg, phi)?;
    let hermitian_defect = g.hermitian_defect();
    let (w_all, v) = hermitian_eig(&g)?;
    let lmax = w_all.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let min_eigenvalue = w_all.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..w_all.len()).filter(|&k| w_all[k] > tol * lmax && w_all[k] > 0.0).collect();
    let w = v.select_columns(&keep);
    let lambda: Vec<f64> = keep.iter().map(|&k| w_all[k]).collect();
    // W Λ^{1/2} c = conj φ, least squares through the orthonormal columns.
    let target: Vec<C64> = phi.values.iter().map(|z| z.conj()).collect();
    let proj = w.adjoint().mat_vec(&target);
    let c: Vec<C64> = proj.iter().zip(&lambda).map(|(p, l)| p / l.sqrt()).collect();
    let back: Vec<C64> = w.mat_vec(&c.iter().zip(&lambda).map(|(x, l)| x * l.sqrt()).collect::<Vec<_>>());
    let c_residual = vnorm(&vsub(&back, &target));
    Ok(Quotient { gram: g, min_eigenvalue, hermitian_defect, w, lambda, c, c_residual })
}

fn positive_from(q: &Quotient, tol: f64) -> bool {
    let scale = q.gram.max_abs().max(f64::MIN_POSITIVE);
    q.hermitian_defect <= tol * scale * (q.gram.rows() as f64) && q.min_eigenvalue >= -tol * scale.max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDiagnostics {
    pub positive: bool,
    pub hermitian: bool,
    pub min_gram_eigenvalue: f64,
    /// `None` when the variation is infinite.
    pub variation: Option<f64>,
    /// Least-squares residual of the reproducing-vector equations.
    pub reproducing_residual: f64,
}

/// Positivity, Hermitian symmetry and variation of `φ`. Not-positive
/// functionals are reported through the flag, not as an error; their
/// variation is `None`.
pub fn functional_diagnostics(alg: &StarAlgebra, phi: &Functional, tol: f64) -> Result<FunctionalDiagnostics> {
    let q = quotient(alg, phi, tol)?;
    let positive = positive_from(&q, tol);
    let scale = phi.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let hermitian = (0..alg.dim()).all(|i| {
        let star = alg.star_coeffs(&alg.basis_element(i).coeffs);
        (phi.eval(&star) - phi.values[i].conj()).norm() <= tol * scale
    });
    let variation = if !positive {
        None
    } else if let Some(u) = alg.unit() {
        Some(phi.eval(u).re)
    } else if q.c_residual <= 1e3 * tol * scale {
        Some(vnorm(&q.c).powi(2))
    } else {
        None
    };
    Ok(FunctionalDiagnostics {
        positive,
        hermitian,
        min_gram_eigenvalue: q.min_eigenvalue,
        variation,
        reproducing_residual: q.c_residual,
    })
}

/// Basis element `b_i ↦ mats[i]` on `ℂ^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub dim: usize,
    pub mats: Vec<CMat>,
}

impl Representation {
    pub fn image(&self, coeffs: &[C64]) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (c, r) in coeffs.iter().zip(&self.mats) {
            if *c != ZERO {
                m += &r.scale(*c);
            }
        }
        m
    }

    /// Worst defect of `π(b_i b_j) = π(b_i)π(b_j)` and `π(b_i*) = π(b_i)*`.
    pub fn defect(&self, alg: &StarAlgebra) -> f64 {
        let d = alg.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = self.image(alg.structure(i, j));
                worst = worst.max((&lhs - &(&self.mats[i] * &self.mats[j])).max_abs());
            }
            let star = self.image(&alg.star_coeffs(&alg.basis_element(i).coeffs));
            worst = worst.max((&star - &self.mats[i].adjoint()).max_abs());
        }
        worst
    }

    pub fn direct_sum(reps: &[Representation], basis_len: usize) -> Representation {
        let dim = reps.iter().map(|r| r.dim).sum();
        let mats = (0..basis_len)
            .map(|i| CMat::direct_sum(&reps.iter().map(|r| r.mats[i].clone()).collect::<Vec<_>>()))
            .collect();
        Representation { dim, mats }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnsResult {
    pub rep: Representation,
    pub cyclic: Vec<C64>,
    pub gram: CMat,
    pub quotient_dim: usize,
    pub reproducing_residual: f64,
}

impl GnsResult {
    /// Worst `|φ(b_i) − ⟨π(b_i)c, c⟩|`.
    pub fn reproduction_defect(&self, phi: &Functional) -> f64 {
        self.rep
            .mats
            .iter()
            .zip(&phi.values)
            .map(|(m, v)| (vdot(&self.cyclic, &m.mat_vec(&self.cyclic)) - v).norm())
            .fold(0.0, f64::max)
    }
}

pub fn gns_construct(alg: &StarAlgebra, phi: &Functional, tol: f64) -> Result<GnsResult> {
    phi.check_dim(alg)?;
    if phi.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let q = quotient(alg, phi, tol)?;
    if !positive_from(&q, tol) {
        return Err(Error::NotPositive { min_eigenvalue: q.min_eigenvalue });
    }
    let r = q.lambda.len();
    if r == 0 {
        return Err(Error::ZeroFunctional);
    }
    let sqrt_l: Vec<f64> = q.lambda.iter().map(|l| l.sqrt()).collect();
    let left = CMat::from_fn(r, alg.dim(), |i, j| q.w[(j, i)].conj() * sqrt_l[i]);
    let right = CMat::from_fn(alg.dim(), r, |i, j| q.w[(i, j)] / sqrt_l[j]);
    let mats = (0..alg.dim())
        .map(|i| &(&left * &alg.left_mult_matrix(&alg.basis_element(i).coeffs)) * &right)
        .collect();
    let cyclic = match alg.unit() {
        Some(u) => left.mat_vec(u),
        None => q.c.clone(),
    };
    Ok(GnsResult {
        rep: Representation { dim: r, mats },
        cyclic,
        gram: q.gram,
        quotient_dim: r,
        reproducing_residual: q.c_residual,
    })
}

/// Extension `φ̃(λe + a) = λγ + φ(a)` to the unitisation, positive for
/// every `γ ≥ v(φ)`.
pub fn extend_to_unitisation(alg: &StarAlgebra, phi: &Functional, gamma: f64, tol: f64) -> Result<(StarAlgebra, Functional)> {
    if alg.is_unital() {
        return Err(Error::InvalidInput("algebra is already unital".into()));
    }
    let diag = functional_diagnostics(alg, phi, tol)?;
    if !diag.positive {
        return Err(Error::NotPositive { min_eigenvalue: diag.min_gram_eigenvalue });
    }
    if !diag.hermitian {
        return Err(Error::InvalidInput("functional is not Hermitian".into()));
    }
    let v = diag.variation.ok_or(Error::InfiniteVariation)?;
    if gamma < v - tol * (1.0 + v) {
        return Err(Error::GammaTooSmall { variation: v });
    }
    let tilde = unitise(alg);
    let mut values = phi.values.clone();
    values.push(C64::new(gamma, 0.0));
    let ext = Functional { values };
    let q = quotient(&tilde, &ext, tol)?;
    if !positive_from(&q, tol) {
        return Err(Error::NotPositive { min_eigenvalue: q.min_eigenvalue });
    }
    Ok((tilde, ext))
}

/// Direct sum of the GNS representations of a finite family of states.
pub fn universal_rep(alg: &StarAlgebra, states: &[Functional], tol: f64) -> Result<Representation> {
    let mut reps = Vec::with_capacity(states.len());
    for (index, s) in states.iter().enumerate() {
        let d = functional_diagnostics(alg, s, tol)?;
        let is_state = d.positive && d.variation.is_some_and(|v| (v - 1.0).abs() <= 1e3 * tol);
        if !is_state {
            return Err(Error::NotAState { index });
        }
        reps.push(gns_construct(alg, s, tol)?.rep);
    }
    Ok(Representation::direct_sum(&reps, alg.dim()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnSeminorm {
    /// `max_ψ ψ(a* a)^{1/2}` over the family.
    pub value: f64,
    /// `|π_u(a)|` for the direct sum over the same family.
    pub universal_norm: f64,
}

/// Gelfand–Naimark seminorm relative to a finite family of states.
///
/// The two numbers coincide when the family contains, for the given `a`, a
/// state maximizing `ψ(a* a)`, as [`canonical_states`] does; for arbitrary
/// finite families `value ≤ universal_norm` and the inequality can be strict.
pub fn gn_seminorm(alg: &StarAlgebra, coeffs: &[C64], states: &[Functional], tol: f64) -> Result<GnSeminorm> {
    if states.is_empty() {
        return Ok(GnSeminorm { value: 0.0, universal_norm: 0.0 });
    }
    let astar_a = alg.mul_coeffs(&alg.star_coeffs(coeffs), coeffs);
    let value = states.iter().map(|s| s.eval(&astar_a).re.max(0.0).sqrt()).fold(0.0, f64::max);
    let u = universal_rep(alg, states, tol)?;
    Ok(GnSeminorm { value, universal_norm: u.image(coeffs).norm() })
}

/// Vector states at `e_j`, `(e_j + e_k)/√2`, `(e_j + i e_k)/√2` and at a top
/// eigenvector of `R(a)* R(a)`, for an algebra with a matrix realization.
pub fn canonical_states(alg: &StarAlgebra, coeffs: &[C64]) -> Result<Vec<Functional>> {
    let r = alg
        .realization()
        .ok_or_else(|| Error::InvalidInput("algebra has no matrix realization".into()))?;
    let n = r[0].rows();
    let e = |j: usize| {
        let mut v = vec![ZERO; n];
        v[j] = C64::new(1.0, 0.0);
        v
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut vecs = Vec::new();
    for j in 0..n {
        vecs.push(e(j));
        for k in (j + 1)..n {
            let mut p = vec![ZERO; n];
            p[j] = C64::new(h, 0.0);
            p[k] = C64::new(h, 0.0);
            vecs.push(p.clone());
            p[k] = C64::new(0.0, h);
            vecs.push(p);
        }
    }
    let mut ra = CMat::zeros(n, n);
    for (c, m) in coeffs.iter().zip(r) {
        ra += &m.scale(*c);
    }
    let (_, v) = hermitian_eig(&(&ra.adjoint() * &ra))?;
    if n > 0 {
        vecs.push(v.column(n - 1));
    }
    vecs.iter().map(|x| vector_functional(alg, x)).collect()
}

/// The unitary `U` with `U π₁(a) c₁ = π₂(a) c₂`, for cyclic `c₁`, `c₂`.
pub fn cyclic_intertwiner(
    alg: &StarAlgebra,
    first: (&Representation, &[C64]),
    second: (&Representation, &[C64]),
    tol: f64,
) -> Result<CMat> {
    let (r1, c1) = first;
    let (r2, c2) = second;
    let mut orbit1: Vec<Vec<C64>> = r1.mats.iter().map(|m| m.mat_vec(c1)).collect();
    let mut orbit2: Vec<Vec<C64>> = r2.mats.iter().map(|m| m.mat_vec(c2)).collect();
    if !alg.is_unital() {
        orbit1.push(c1.to_vec());
        orbit2.push(c2.to_vec());
    }
    let o1 = CMat::from_columns(&orbit1);
    let o2 = CMat::from_columns(&orbit2);
    let rank = crate::linops::rank(&o1, tol);
    if rank < r1.dim {
        return Err(Error::NotCyclic { rank, dim: r1.dim });
    }
    // U = O₂ O₁⁺ with O₁⁺ from the normal equations on a full-row-rank O₁.
    let gram = &o1 * &o1.adjoint();
    let u = &o2 * &(&o1.adjoint() * &gram.inverse()?);
    Ok(u)
}
