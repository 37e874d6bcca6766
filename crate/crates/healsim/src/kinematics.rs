//! Tensor algebra and the multiplicative elastic–growth split.
//!
//! All kinematic quantities live in a fixed orthonormal frame as full 3×3
//! tensors. 2D problems are treated as plane strain embedded in 3D: the
//! out-of-plane stretch is 1 and the out-of-plane shears are 0, so the
//! volumetric terms keep their full 3D meaning.

use crate::error::SimError;
use nalgebra::Matrix3;

/// Second-order tensor in a fixed orthonormal frame. Norms are Frobenius.
pub type Tensor2 = Matrix3<f64>;

/// Fourth-order tensor with full index storage, used for stress tangents.
#[derive(Clone, Debug)]
pub struct Tensor4(pub [[[[f64; 3]; 3]; 3]; 3]);

impl Tensor4 {
    pub fn zeros() -> Self {
        Tensor4([[[[0.0; 3]; 3]; 3]; 3])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[i][j][k][l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.0[i][j][k][l] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.0[i][j][k][l] += v;
    }

    pub fn scale(&self, s: f64) -> Tensor4 {
        let mut out = Tensor4::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        out.0[i][j][k][l] = self.0[i][j][k][l] * s;
                    }
                }
            }
        }
        out
    }

    pub fn axpy(&mut self, s: f64, other: &Tensor4) {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        self.0[i][j][k][l] += s * other.0[i][j][k][l];
                    }
                }
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        m = m.max(self.0[i][j][k][l].abs());
                    }
                }
            }
        }
        m
    }
}

/// Volume ratio J = det(F).
pub fn jacobian(f: &Tensor2) -> f64 {
    f.determinant()
}

/// Elastic part of the deformation gradient for spherical growth,
/// F_e = J_g^{-1/3} F, so that det(F_e) · J_g = det(F).
pub fn elastic_part(f: &Tensor2, j_g: f64) -> Result<Tensor2, SimError> {
    if !(j_g > 0.0) {
        return Err(SimError::domain(format!(
            "growth volume ratio must be positive, got {j_g}"
        )));
    }
    Ok(f * j_g.powf(-1.0 / 3.0))
}

/// Right Cauchy–Green tensor C = Fᵀ·F.
pub fn right_cauchy_green(f_e: &Tensor2) -> Tensor2 {
    f_e.transpose() * f_e
}

/// Isochoric (unimodular) part F̄ = J^{-1/3} F with det(F̄) = 1.
pub fn isochoric_part(f: &Tensor2) -> Result<Tensor2, SimError> {
    let j = jacobian(f);
    if !(j > 0.0) {
        return Err(SimError::domain(format!(
            "isochoric split needs det(F) > 0, got {j}"
        )));
    }
    Ok(f * j.powf(-1.0 / 3.0))
}

/// Set-valued sign function of a tensor: T/‖T‖ for T ≠ 0, and the zero
/// tensor at T = 0 (an admissible selection with ‖S‖ ≤ 1 that keeps the
/// evolution laws continuous, since their prefactors vanish there).
pub fn sign_tensor(t: &Tensor2) -> Tensor2 {
    let n = t.norm();
    if n == 0.0 {
        Tensor2::zeros()
    } else {
        t / n
    }
}

/// Deviatoric part dev(T) = T − (tr T / 3) I.
pub fn deviator(t: &Tensor2) -> Tensor2 {
    t - Tensor2::identity() * (t.trace() / 3.0)
}

/// Spherical part (tr T / 3) I.
pub fn spherical_part(t: &Tensor2) -> Tensor2 {
    Tensor2::identity() * (t.trace() / 3.0)
}
