//! Direct solver for the assembled sparse systems.
//!
//! Assembly produces coordinate-format triplets; the solve converts them to
//! a banded layout and runs an LU factorization with partial pivoting
//! (row interchanges stay inside the band, which is stored with the extra
//! fill rows that pivoting can produce). The meshes here are structured, so
//! bandwidths stay small and this is comfortably fast at the problem sizes
//! involved.

use crate::error::SimError;
use std::io::Write;

/// Sparse matrix in coordinate format; duplicate entries add up.
#[derive(Clone, Debug)]
pub struct Coo {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Coo {
    pub fn new(n: usize) -> Self {
        Coo { n, entries: Vec::new() }
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if v != 0.0 {
            self.entries.push((i, j, v));
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, &(_, _, v)| m.max(v.abs()))
    }

    /// Writes one "row col value" triple per line, 0-based indices, after
    /// merging duplicates.
    pub fn write_triplets(&self, w: &mut impl Write) -> Result<(), SimError> {
        let mut merged = std::collections::BTreeMap::new();
        for &(i, j, v) in &self.entries {
            *merged.entry((i, j)).or_insert(0.0f64) += v;
        }
        for ((i, j), v) in merged {
            writeln!(w, "{i} {j} {v:.16e}")?;
        }
        Ok(())
    }
}

struct Band {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    /// column-major storage, A(i,j) at ab[j*ldab + kl + ku + i - j]
    ab: Vec<f64>,
}

impl Band {
    fn from_coo(coo: &Coo) -> Self {
        let (mut kl, mut ku) = (0usize, 0usize);
        for &(i, j, _) in &coo.entries {
            if i > j {
                kl = kl.max(i - j);
            } else {
                ku = ku.max(j - i);
            }
        }
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![0.0; ldab * coo.n];
        for &(i, j, v) in &coo.entries {
            ab[j * ldab + kl + ku + i - j] += v;
        }
        Band { n: coo.n, kl, ku, ldab, ab }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + self.kl + self.ku + i - j
    }

    /// LU factorization with partial pivoting. Returns the pivot rows.
    fn factorize(&mut self) -> Result<Vec<usize>, SimError> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // pivot search over the column's diagonal and subdiagonals
            let mut jp = 0;
            let mut best = 0.0f64;
            for p in 0..=km {
                let v = self.ab[self.idx(j + p, j)].abs();
                if v > best {
                    best = v;
                    jp = p;
                }
            }
            if best == 0.0 {
                return Err(SimError::solver(format!(
                    "singular system: zero pivot at column {j}"
                )));
            }
            ipiv[j] = j + jp;
            let ju = (j + ku + kl).min(n - 1);
            if jp != 0 {
                for c in j..=ju {
                    let a = self.idx(j, c);
                    let b = self.idx(j + jp, c);
                    self.ab.swap(a, b);
                }
            }
            if km > 0 {
                let piv = self.ab[self.idx(j, j)];
                for p in 1..=km {
                    let k = self.idx(j + p, j);
                    self.ab[k] /= piv;
                }
                for c in (j + 1)..=ju {
                    let t = self.ab[self.idx(j, c)];
                    if t != 0.0 {
                        for p in 1..=km {
                            let l = self.ab[self.idx(j + p, j)];
                            let k = self.idx(j + p, c);
                            self.ab[k] -= l * t;
                        }
                    }
                }
            }
        }
        Ok(ipiv)
    }

    fn solve(&self, ipiv: &[usize], b: &mut [f64]) {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        // forward substitution with the recorded interchanges
        for j in 0..n {
            b.swap(j, ipiv[j]);
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for p in 1..=km {
                    b[j + p] -= self.ab[self.idx(j + p, j)] * bj;
                }
            }
        }
        // back substitution
        for j in (0..n).rev() {
            b[j] /= self.ab[self.idx(j, j)];
            let bj = b[j];
            if bj != 0.0 {
                let top = j.saturating_sub(ku + kl);
                for i in top..j {
                    b[i] -= self.ab[self.idx(i, j)] * bj;
                }
            }
        }
    }
}

/// Solves A x = b by banded LU with partial pivoting and verifies the
/// backward error of the computed solution.
pub fn linear_solve(a: &Coo, b: &[f64]) -> Result<Vec<f64>, SimError> {
    if a.n != b.len() {
        return Err(SimError::solver(format!(
            "system size {} does not match rhs length {}",
            a.n,
            b.len()
        )));
    }
    if a.n == 0 {
        return Ok(Vec::new());
    }
    let mut band = Band::from_coo(a);
    let ipiv = band.factorize()?;
    let mut x = b.to_vec();
    band.solve(&ipiv, &mut x);

    let r = a.matvec(&x);
    let err = r
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (ri, bi)| m.max((ri - bi).abs()));
    let xmax = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bmax = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = a.max_abs() * xmax + bmax;
    if err > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(SimError::solver(format!(
            "linear solve residual too large: {err:.3e} vs scale {scale:.3e}"
        )));
    }
    Ok(x)
}
