use super::{CMat, C64, ZERO};
use crate::error::{Error, Result};

impl CMat {
    /// Solves `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &CMat) -> Result<CMat> {
        if !self.is_square() || self.rows() != rhs.rows() {
            return Err(Error::InvalidShape(format!(
                "solve with {}x{} system and {}x{} right-hand side",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        let n = self.rows();
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = a.max_abs();
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap_or(k);
            if a[(piv, k)].norm() <= f64::EPSILON * scale * n as f64 || scale == 0.0 {
                return Err(Error::NotInvertible { min_singular_value: a[(piv, k)].norm() });
            }
            if piv != k {
                swap_rows(&mut a, piv, k);
                swap_rows(&mut b, piv, k);
            }
            let d = a[(k, k)];
            for i in (k + 1)..n {
                let f = a[(i, k)] / d;
                if f == ZERO {
                    continue;
                }
                a[(i, k)] = ZERO;
                for j in (k + 1)..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
                for j in 0..b.cols() {
                    let t = b[(k, j)];
                    b[(i, j)] -= f * t;
                }
            }
        }
        for j in 0..b.cols() {
            for i in (0..n).rev() {
                let mut s: C64 = b[(i, j)];
                for k in (i + 1)..n {
                    s -= a[(i, k)] * b[(k, j)];
                }
                b[(i, j)] = s / a[(i, i)];
            }
        }
        Ok(b)
    }

    pub fn inverse(&self) -> Result<CMat> {
        self.solve(&CMat::identity(self.rows()))
    }
}

fn swap_rows(m: &mut CMat, r1: usize, r2: usize) {
    for j in 0..m.cols() {
        let t = m[(r1, j)];
        m[(r1, j)] = m[(r2, j)];
        m[(r2, j)] = t;
    }
}
