//! Commutants, bicommutants and cyclic vectors on `ℂ^n`.
//!
//! In finite dimension the weak, strong and norm closures of a subspace of
//! `M_n` coincide with the subspace itself, so the bicommutant theorem
//! reduces to an equality of spans; that equality is what gets checked.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gelfand::CharacterTable;
use crate::gnsrep::Representation;
use crate::linops::{
    lex_cmp, nullspace_abs, orthonormalize_columns, random_unit_vector, rank, vdot, vnorm, CMat, C64, ONE,
};
use crate::specmeasure::spectral_resolution;

const SEPARATING_DRAWS: usize = 64;
const GENERIC_SEED: u64 = 0xbb67_ae85;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSet {
    pub carrier_dim: usize,
    pub mats: Vec<CMat>,
    pub star_closed: bool,
}

impl OperatorSet {
    /// With `star_closed`, adjoints of the members are appended.
    pub fn new(carrier_dim: usize, mats: Vec<CMat>, star_closed: bool) -> Result<Self> {
        if mats.iter().any(|m| m.rows() != carrier_dim || m.cols() != carrier_dim) {
            return Err(Error::InvalidShape(format!("operators must be {carrier_dim}x{carrier_dim}")));
        }
        let mut mats = mats;
        if star_closed {
            let adj: Vec<CMat> = mats.iter().map(CMat::adjoint).collect();
            mats.extend(adj);
        }
        Ok(OperatorSet { carrier_dim, mats, star_closed })
    }

    /// Orthonormal basis of the span, as vectorized columns.
    pub fn span_basis(&self, tol: f64) -> CMat {
        let n2 = self.carrier_dim * self.carrier_dim;
        if self.mats.is_empty() {
            return CMat::zeros(n2, 0);
        }
        orthonormalize_columns(&CMat::from_columns(&self.mats.iter().map(CMat::vec).collect::<Vec<_>>()), tol)
    }

    pub fn span_dim(&self, tol: f64) -> usize {
        self.span_basis(tol).cols()
    }

    /// Distance of `m` (Frobenius, relative to `|m|_F`) from the span.
    pub fn span_residual(&self, m: &CMat, tol: f64) -> f64 {
        let q = self.span_basis(tol);
        let v = m.vec();
        let mut r = v.clone();
        for j in 0..q.cols() {
            let col = q.column(j);
            let c = vdot(&col, &v);
            for (ri, qi) in r.iter_mut().zip(&col) {
                *ri -= c * qi;
            }
        }
        vnorm(&r) / vnorm(&v).max(f64::MIN_POSITIVE)
    }

    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        m.max_abs() == 0.0 || self.span_residual(m, tol) <= tol.sqrt()
    }

    /// Equality of spans.
    pub fn same_span(&self, other: &OperatorSet, tol: f64) -> bool {
        self.span_dim(tol) == other.span_dim(tol)
            && self.mats.iter().all(|m| other.contains(m, tol))
            && other.mats.iter().all(|m| self.contains(m, tol))
    }

    /// Worst `|[a, b]|` over pairs of members.
    pub fn commutation_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.mats.iter().enumerate() {
            for b in &self.mats[i + 1..] {
                worst = worst.max(a.commutator(b).norm());
            }
        }
        worst
    }
}

/// `S′`: the joint nullspace of `X ↦ a X − X a` over the generators,
/// returned as an orthonormal basis in the trace inner product.
pub fn commutant(s: &OperatorSet, tol: f64) -> OperatorSet {
    let n = s.carrier_dim;
    let q = s.span_basis(tol);
    let gens: Vec<CMat> = (0..q.cols()).map(|j| CMat::from_vec(n, n, &q.column(j))).collect();
    let mats = if gens.is_empty() {
        (0..n * n).map(|k| CMat::unit(n, k / n, k % n)).collect()
    } else {
        let id = CMat::identity(n);
        let blocks: Vec<CMat> = gens.iter().map(|a| &a.kron(&id) - &id.kron(&a.transpose())).collect();
        let mut stacked = CMat::zeros(blocks.len() * n * n, n * n);
        for (b, blk) in blocks.iter().enumerate() {
            for i in 0..n * n {
                for j in 0..n * n {
                    stacked[(b * n * n + i, j)] = blk[(i, j)];
                }
            }
        }
        // generators are orthonormal, so the cut is absolute
        let ns = nullspace_abs(&stacked, tol);
        (0..ns.cols()).map(|j| CMat::from_vec(n, n, &ns.column(j))).collect()
    };
    OperatorSet { carrier_dim: n, mats, star_closed: s.star_closed }
}

pub fn bicommutant(s: &OperatorSet, tol: f64) -> OperatorSet {
    commutant(&commutant(s, tol), tol)
}

/// Span of all products of members (and of their adjoints when the set is
/// star-closed), together with `1` when `with_unit`.
pub fn generated_algebra(s: &OperatorSet, with_unit: bool, tol: f64) -> OperatorSet {
    let n = s.carrier_dim;
    let mut gens = s.mats.clone();
    if s.star_closed {
        gens.extend(s.mats.iter().map(CMat::adjoint));
    }
    let mut basis: Vec<CMat> = Vec::new();
    let push = |m: CMat, basis: &mut Vec<CMat>| -> bool {
        let cur = OperatorSet { carrier_dim: n, mats: basis.clone(), star_closed: false };
        if m.max_abs() > tol && (basis.is_empty() || cur.span_residual(&m, tol) > tol.sqrt()) {
            basis.push(m);
            true
        } else {
            false
        }
    };
    if with_unit {
        push(CMat::identity(n), &mut basis);
    }
    for g in &gens {
        push(g.clone(), &mut basis);
    }
    loop {
        let mut grew = false;
        let snapshot = basis.clone();
        for a in &snapshot {
            for g in &gens {
                grew |= push(a * g, &mut basis);
            }
        }
        if !grew {
            break;
        }
    }
    OperatorSet { carrier_dim: n, mats: basis, star_closed: s.star_closed }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    pub commutant_dim: usize,
    pub multiplicity_free: bool,
}

pub fn irreducibility_report(rep: &Representation, tol: f64) -> Result<IrreducibilityReport> {
    if rep.dim == 0 || rep.mats.iter().all(|m| m.max_abs() == 0.0) {
        return Err(Error::ZeroRepresentation);
    }
    let s = OperatorSet::new(rep.dim, rep.mats.clone(), true)?;
    let c = commutant(&s, tol);
    let dim = c.mats.len();
    let scale = c.mats.iter().map(CMat::norm).fold(1.0, f64::max);
    Ok(IrreducibilityReport {
        irreducible: dim == 1,
        commutant_dim: dim,
        multiplicity_free: c.commutation_defect() <= tol.sqrt() * scale,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorReport {
    pub cyclic: bool,
    pub separating: bool,
    /// Rank of `{a x : a ∈ span S}`.
    pub orbit_rank: usize,
}

pub fn vector_report(s: &OperatorSet, x: &[C64], tol: f64) -> Result<VectorReport> {
    if x.len() != s.carrier_dim {
        return Err(Error::InvalidShape("vector length differs from carrier dimension".into()));
    }
    if vnorm(x) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let n = s.carrier_dim;
    let q = s.span_basis(tol);
    let images: Vec<Vec<C64>> = (0..q.cols()).map(|j| CMat::from_vec(n, n, &q.column(j)).mat_vec(x)).collect();
    if images.is_empty() {
        return Ok(VectorReport { cyclic: n == 0, separating: true, orbit_rank: 0 });
    }
    let orbit = CMat::from_columns(&images);
    let r = rank(&orbit, tol.sqrt());
    // Separating: a ↦ a x injective on span S, i.e. full column rank; the
    // smallest singular value is compared with |x| since the basis is
    // orthonormal in the trace norm.
    let sv = crate::linops::svd(&orbit).singular_values;
    let smin = sv.last().copied().unwrap_or(0.0);
    Ok(VectorReport {
        cyclic: r == n,
        separating: q.cols() <= n && smin > tol.sqrt() * vnorm(x),
        orbit_rank: r,
    })
}

/// A separating vector for `S`, from fixed candidates and then seeded draws.
pub fn find_separating_vector(s: &OperatorSet, seed: u64, tol: f64) -> Result<Vec<C64>> {
    let n = s.carrier_dim;
    let scaled = |v: Vec<C64>| {
        let nv = vnorm(&v);
        v.into_iter().map(|z| z / nv).collect::<Vec<_>>()
    };
    let mut candidates = vec![
        scaled(vec![ONE; n]),
        scaled((1..=n).map(|k| C64::new(k as f64, 0.0)).collect()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SEPARATING_DRAWS {
        candidates.push(random_unit_vector(n, &mut rng));
    }
    for x in candidates {
        if vector_report(s, &x, tol)?.separating {
            return Ok(x);
        }
    }
    Err(Error::NoSeparatingVector { draws: SEPARATING_DRAWS })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalisationResult {
    /// `(character index, μ_i)`, weights summing to `|c|²`.
    pub measure: Vec<(usize, f64)>,
    /// Rows are `f_i^H` with `f_i = P_i c / |P_i c|`.
    pub unitary: CMat,
    pub characters: CharacterTable,
    /// `max_k |U π(b_k) − M(b̂_k) U|`.
    pub intertwining_residual: f64,
}

/// Unitary equivalence of a cyclic commutative representation with
/// multiplication operators on `L²(μ)` over its atoms.
pub fn diagonalise_cyclic(rep: &Representation, c: &[C64], tol: f64) -> Result<DiagonalisationResult> {
    let n = rep.dim;
    for i in 0..rep.mats.len() {
        for j in (i + 1)..rep.mats.len() {
            let residual = rep.mats[i].commutator(&rep.mats[j]).norm();
            if residual > tol.sqrt() * (1.0 + rep.mats[i].norm() * rep.mats[j].norm()) {
                return Err(Error::NotCommutative { i, j, residual });
            }
        }
    }
    let s = OperatorSet::new(n, rep.mats.clone(), false)?;
    let report = vector_report(&s, c, tol)?;
    if !report.cyclic {
        return Err(Error::NotCyclic { rank: report.orbit_rank, dim: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED);
    let mut generic = CMat::zeros(n, n);
    for m in &rep.mats {
        let w = crate::linops::random_in_disc(&mut rng);
        generic += &m.scale(w);
        generic += &m.adjoint().scale(w.conj() * C64::new(0.0, 1.0));
    }
    let p = spectral_resolution(&generic, tol)?;

    let mut atoms: Vec<(usize, f64, Vec<C64>, Vec<C64>)> = Vec::new();
    let mut cut_residual: f64 = 0.0;
    for proj in &p.projections {
        let pc = proj.mat_vec(c);
        let mu = vnorm(&pc).powi(2);
        if mu <= tol {
            continue;
        }
        let tr = proj.trace().re;
        let chars: Vec<C64> = rep.mats.iter().map(|m| (proj * m).trace() / tr).collect();
        for (m, t) in rep.mats.iter().zip(&chars) {
            cut_residual = cut_residual.max((&(m * proj) - &proj.scale(*t)).norm());
        }
        let f: Vec<C64> = pc.iter().map(|z| z / mu.sqrt()).collect();
        let lead = (0..n).max_by(|&a, &b| f[a].norm().total_cmp(&f[b].norm()).then(b.cmp(&a))).unwrap_or(0);
        atoms.push((lead, mu, f, chars));
    }
    atoms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| lex_cmp(&a.3[0], &b.3[0])));

    let unitary = CMat::from_fn(atoms.len(), n, |i, j| atoms[i].2[j].conj());
    let values = CMat::from_fn(atoms.len(), rep.mats.len(), |i, k| atoms[i].3[k]);
    let mut intertwining_residual: f64 = 0.0;
    for (k, m) in rep.mats.iter().enumerate() {
        let diag = CMat::diag(&values.column(k));
        let lhs = &unitary * m;
        let rhs = &diag * &unitary;
        intertwining_residual = intertwining_residual.max((&lhs - &rhs).norm());
    }
    Ok(DiagonalisationResult {
        measure: atoms.iter().enumerate().map(|(i, a)| (i, a.1)).collect(),
        unitary,
        characters: CharacterTable { values, multiplicativity_residual: cut_residual },
        intertwining_residual,
    })
}
