//! Atomic resolutions of the identity, spectral integrals and the Borel
//! functional calculus of normal matrices.

use crate::error::{Error, Result};
use crate::linops::{cluster, eig, lex_cmp, orthonormalize_columns, projector, CMat, C64, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionOfIdentity {
    pub points: Vec<C64>,
    pub projections: Vec<CMat>,
}

impl ResolutionOfIdentity {
    /// Validates projection, orthogonality and completeness within `tol`.
    pub fn new(points: Vec<C64>, projections: Vec<CMat>, tol: f64) -> Result<Self> {
        let p = ResolutionOfIdentity { points, projections };
        if p.points.len() != p.projections.len() {
            return Err(Error::InvalidInput("one projection per point required".into()));
        }
        let defect = p.defect();
        if defect > tol {
            return Err(Error::InvalidInput(format!("not a resolution of the identity (defect {defect:.3e})")));
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.projections.first().map_or(0, CMat::rows)
    }

    /// Worst violation of `p = p* = p²`, `p_i p_j = 0` and `Σ p = 1`.
    pub fn defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut sum = CMat::zeros(n, n);
        for (i, p) in self.projections.iter().enumerate() {
            worst = worst.max(p.hermitian_defect()).max((&(p * p) - p).max_abs());
            for q in &self.projections[i + 1..] {
                worst = worst.max((p * q).max_abs());
            }
            sum += p;
        }
        worst.max((&sum - &CMat::identity(n)).max_abs())
    }

    /// `Σ f(λ) P({λ})`; `f` returning `None` marks a missing point.
    pub fn integrate(&self, f: impl Fn(C64) -> Option<C64>) -> Result<CMat> {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (z, p) in self.points.iter().zip(&self.projections) {
            let v = f(*z).ok_or(Error::MissingPoint { label: *z })?;
            if v != ZERO {
                out += &p.scale(v);
            }
        }
        Ok(out)
    }

    /// Integral of a function given as a table of `(point, value)` pairs,
    /// points matched within `tol`.
    pub fn integrate_table(&self, table: &[(C64, C64)], tol: f64) -> Result<CMat> {
        self.integrate(|z| table.iter().find(|(p, _)| (p - z).norm() <= tol).map(|(_, v)| *v))
    }

    /// `P(Δ)` for `Δ` given as a set of point indices.
    pub fn measure_of(&self, indices: &[usize]) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for &i in indices {
            out += &self.projections[i];
        }
        out
    }

    /// Indices of atoms with a non-zero projection.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.projections[i].norm() > tol).collect()
    }
}

fn cluster_gap(b: &CMat, tol: f64) -> f64 {
    (tol * b.norm()).max(1e-8)
}

/// Atoms at eigenvalue clusters with orthonormalized eigenprojections.
pub fn spectral_resolution(b: &CMat, tol: f64) -> Result<ResolutionOfIdentity> {
    if !b.is_square() {
        return Err(Error::InvalidShape("spectral resolution of a non-square matrix".into()));
    }
    let bn = b.norm();
    let a = b.adjoint();
    let defect = (&(&a * b) - &(b * &a)).norm();
    if defect > tol * bn * bn {
        return Err(Error::NotNormal { defect });
    }
    let dec = eig(b, tol)?;
    if !dec.normal {
        return Err(Error::NotNormal { defect });
    }
    let gap = cluster_gap(b, tol);
    let mut atoms: Vec<(C64, CMat)> = cluster(&dec.values, gap)
        .into_iter()
        .map(|group| {
            let point = group.iter().map(|&i| dec.values[i]).sum::<C64>() / group.len() as f64;
            let q = orthonormalize_columns(&dec.vectors.select_columns(&group), 1e-8);
            (point, projector(&q))
        })
        .collect();
    atoms.sort_by(|x, y| lex_cmp(&x.0, &y.0));
    let (points, projections) = atoms.into_iter().unzip();
    Ok(ResolutionOfIdentity { points, projections })
}

/// `f(b) = ∫ f dP` over the spectral resolution of a normal `b`.
pub fn borel_function(b: &CMat, f: impl Fn(C64) -> C64, tol: f64) -> Result<CMat> {
    spectral_resolution(b, tol)?.integrate(|z| Some(f(z)))
}

/// Image `f(P)`: atoms at the distinct values of `f` (merged within `tol`),
/// each carrying the sum of its preimage projections.
pub fn image_measure(p: &ResolutionOfIdentity, f: impl Fn(C64) -> C64, tol: f64) -> ResolutionOfIdentity {
    let values: Vec<C64> = p.points.iter().map(|z| f(*z)).collect();
    let mut atoms: Vec<(C64, CMat)> = cluster(&values, tol)
        .into_iter()
        .map(|group| {
            let point = group.iter().map(|&i| values[i]).sum::<C64>() / group.len() as f64;
            (point, p.measure_of(&group))
        })
        .collect();
    atoms.sort_by(|x, y| lex_cmp(&x.0, &y.0));
    let (points, projections) = atoms.into_iter().unzip();
    ResolutionOfIdentity { points, projections }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenAtom {
    pub is_eigenvalue: bool,
    pub projection: CMat,
}

/// Atom of the spectral measure of `b` at `lambda`.
pub fn eigen_atoms(b: &CMat, lambda: C64, tol: f64) -> Result<EigenAtom> {
    let p = spectral_resolution(b, tol)?;
    let gap = cluster_gap(b, tol);
    let hit = p.points.iter().position(|z| (z - lambda).norm() <= gap);
    Ok(match hit {
        Some(i) => EigenAtom { is_eigenvalue: true, projection: p.projections[i].clone() },
        None => EigenAtom { is_eigenvalue: false, projection: CMat::zeros(b.rows(), b.cols()) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{rank, ONE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn resolution_of_repeated_eigenvalue() {
        let p = spectral_resolution(&CMat::diag_real(&[1.0, 1.0, 2.0]), 1e-10).unwrap();
        assert_eq!(p.points.len(), 2);
        assert!((p.points[0] - ONE).norm() < 1e-14 && (p.points[1] - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert_eq!(rank(&p.projections[0], 1e-10), 2);
        assert_eq!(rank(&p.projections[1], 1e-10), 1);
        assert!(p.defect() < 1e-14);
    }

    #[test]
    fn pauli_x() {
        let sx = CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let p = spectral_resolution(&sx, 1e-10).unwrap();
        let half = |s: f64| (&CMat::identity(2) + &sx.scale_real(s)).scale_real(0.5);
        assert!(p.projections[0].dist(&half(-1.0)) < 1e-14);
        assert!(p.projections[1].dist(&half(1.0)) < 1e-14);
    }

    #[test]
    fn unitary_points_on_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = CMat::random_unitary(6, &mut rng);
        let p = spectral_resolution(&u, 1e-10).unwrap();
        assert!(p.points.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        assert!(p.integrate(|z| Some(z)).unwrap().dist(&u) < 1e-12);
    }

    #[test]
    fn integrate_examples() {
        let b = CMat::diag_real(&[1.0, 2.0]);
        let p = spectral_resolution(&b, 1e-10).unwrap();
        assert!(p.integrate(|_| Some(ONE)).unwrap().dist(&CMat::identity(2)) < 1e-15);
        let ind = p.integrate(|z| Some(if (z - ONE).norm() < 1e-9 { ONE } else { ZERO })).unwrap();
        assert!(ind.dist(&p.projections[0]) < 1e-15);
        assert!(p.integrate(Some).unwrap().dist(&b) < 1e-15);
        assert!(matches!(p.integrate(|z| (z.re < 1.5).then_some(z)), Err(Error::MissingPoint { .. })));
        let t = p.integrate_table(&[(ONE, ONE), (C64::new(2.0, 0.0), ZERO)], 1e-12).unwrap();
        assert!(t.dist(&p.projections[0]) < 1e-15);
    }

    #[test]
    fn borel_examples() {
        let b = CMat::diag_real(&[0.0, 2f64.ln()]);
        let e = borel_function(&b, |z| z.exp(), 1e-10).unwrap();
        assert!(e.dist(&CMat::diag_real(&[1.0, 2.0])) < 1e-14);
        assert!(borel_function(&b, |z| z, 1e-10).unwrap().dist(&b) < 1e-15);
        let nn = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(spectral_resolution(&nn, 1e-10), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn image_measure_merges_preimages() {
        let p = spectral_resolution(&CMat::diag_real(&[1.0, -1.0]), 1e-10).unwrap();
        let q = image_measure(&p, |z| z * z, 1e-10);
        assert_eq!(q.points.len(), 1);
        assert!(q.projections[0].dist(&CMat::identity(2)) < 1e-15);
        let same = image_measure(&p, |z| z, 1e-10);
        assert_eq!(same, p);
    }

    #[test]
    fn eigen_atom_examples() {
        let b = CMat::diag_real(&[1.0, 1.0, 2.0]);
        let a = eigen_atoms(&b, ONE, 1e-10).unwrap();
        assert!(a.is_eigenvalue);
        assert_eq!(rank(&a.projection, 1e-10), 2);
        let a = eigen_atoms(&b, C64::new(3.0, 0.0), 1e-10).unwrap();
        assert!(!a.is_eigenvalue && a.projection.max_abs() == 0.0);
    }
}
