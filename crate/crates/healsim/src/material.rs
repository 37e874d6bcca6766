//! Neo-Hookean hyperelastic energy, stresses, and consistent tangents.
//!
//! The base response of every constituent is
//! ψ(F_e) = ½ μ (J_e^{-2/3} I₁ − 3) + ½ κ (J_e − 1)²
//! with I₁ = tr(C_e) and J_e = det(F_e), i.e. an isochoric term in the
//! modified invariant plus a quadratic volumetric term. With this split the
//! reference state is exactly stress free and pure dilation produces pure
//! pressure. All derivatives below are exact; finite-difference tests pin
//! them against the energy.

use crate::error::SimError;
use crate::kinematics::{deviator, elastic_part, jacobian, right_cauchy_green, Tensor2, Tensor4};

/// Hyperelastic constants of one constituent (stress units).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeoHookeanParams {
    pub mu: f64,
    pub kappa: f64,
}

impl NeoHookeanParams {
    pub fn new(mu: f64, kappa: f64) -> Result<Self, SimError> {
        if !(mu > 0.0) || !(kappa > 0.0) {
            return Err(SimError::domain(format!(
                "moduli must be positive, got mu={mu}, kappa={kappa}"
            )));
        }
        Ok(NeoHookeanParams { mu, kappa })
    }
}

/// Stress measures plus the stored energy density at one material point.
#[derive(Clone, Copy, Debug)]
pub struct StressState {
    pub cauchy: Tensor2,
    pub first_pk: Tensor2,
    pub energy_density: f64,
}

fn check_positive_det(j: f64, what: &str) -> Result<(), SimError> {
    if !(j > 0.0) {
        return Err(SimError::domain(format!("det({what}) must be positive, got {j}")));
    }
    Ok(())
}

/// Strain energy per unit intermediate-configuration volume.
pub fn elastic_energy(f_e: &Tensor2, p: &NeoHookeanParams) -> Result<f64, SimError> {
    let j = jacobian(f_e);
    check_positive_det(j, "F_e")?;
    let i1 = right_cauchy_green(f_e).trace();
    Ok(0.5 * p.mu * (j.powf(-2.0 / 3.0) * i1 - 3.0) + 0.5 * p.kappa * (j - 1.0) * (j - 1.0))
}

/// Derivative of the elastic energy with respect to F_e.
pub fn energy_gradient(f_e: &Tensor2, p: &NeoHookeanParams) -> Result<Tensor2, SimError> {
    let j = jacobian(f_e);
    check_positive_det(j, "F_e")?;
    let f_inv_t = f_e
        .try_inverse()
        .ok_or_else(|| SimError::domain("F_e is singular"))?
        .transpose();
    let i1 = right_cauchy_green(f_e).trace();
    let jm23 = j.powf(-2.0 / 3.0);
    Ok(f_e * (p.mu * jm23) + f_inv_t * (p.kappa * (j - 1.0) * j - p.mu * jm23 * i1 / 3.0))
}

/// Second Piola–Kirchhoff stress S = 2 ∂ψ/∂C as a function of C = F_eᵀF_e.
pub fn pk2_stress(c: &Tensor2, p: &NeoHookeanParams) -> Result<Tensor2, SimError> {
    let det_c = c.determinant();
    check_positive_det(det_c, "C")?;
    let j = det_c.sqrt();
    let c_inv = c
        .try_inverse()
        .ok_or_else(|| SimError::domain("C is singular"))?;
    let i1 = c.trace();
    let jm23 = j.powf(-2.0 / 3.0);
    Ok(Tensor2::identity() * (p.mu * jm23)
        + c_inv * (p.kappa * (j - 1.0) * j - p.mu * jm23 * i1 / 3.0))
}

/// Cauchy stress of one constituent under spherical growth:
/// σ = μ J_e^{-5/3} dev(B_e) + κ (J_e − 1) I. Exactly zero at F_e = I.
pub fn cauchy_stress(f: &Tensor2, j_g: f64, p: &NeoHookeanParams) -> Result<Tensor2, SimError> {
    let f_e = elastic_part(f, j_g)?;
    let j = jacobian(&f_e);
    check_positive_det(j, "F_e")?;
    let b = f_e * f_e.transpose();
    Ok(deviator(&b) * (p.mu * j.powf(-5.0 / 3.0)) + Tensor2::identity() * (p.kappa * (j - 1.0)))
}

/// First Piola–Kirchhoff stress of one constituent,
/// P = stiffness_factor · J_g · ∂ψ/∂F_e · F_g^{-T}, with spherical F_g.
///
/// The caller supplies the composite weight ((1−λ)f(d) for the original
/// tissue, λ for the deposited one); the growth factors are applied here.
pub fn first_pk_stress(
    f: &Tensor2,
    j_g: f64,
    p: &NeoHookeanParams,
    stiffness_factor: f64,
) -> Result<Tensor2, SimError> {
    if !(0.0..=1.0).contains(&stiffness_factor) {
        return Err(SimError::domain(format!(
            "stiffness factor must lie in [0,1], got {stiffness_factor}"
        )));
    }
    let f_e = elastic_part(f, j_g)?;
    let grad = energy_gradient(&f_e, p)?;
    Ok(grad * (stiffness_factor * j_g.powf(2.0 / 3.0)))
}

/// Referential elasticity tensor ℂ = 2 ∂S/∂C = 4 ∂²ψ/∂C∂C.
pub fn ref_elasticity(c: &Tensor2, p: &NeoHookeanParams) -> Result<Tensor4, SimError> {
    let det_c = c.determinant();
    check_positive_det(det_c, "C")?;
    let j = det_c.sqrt();
    let c_inv = c
        .try_inverse()
        .ok_or_else(|| SimError::domain("C is singular"))?;
    let i1 = c.trace();
    let jm23 = j.powf(-2.0 / 3.0);
    let ident = Tensor2::identity();

    // coefficients of the four tensor products
    let a_mix = -(2.0 * p.mu / 3.0) * jm23; // I ⊗ C⁻¹ and C⁻¹ ⊗ I pair
    let a_cc = (2.0 * p.mu / 9.0) * jm23 * i1 + p.kappa * (2.0 * j * j - j);
    let a_sym = (2.0 * p.mu / 3.0) * jm23 * i1 - 2.0 * p.kappa * (j * j - j);

    let mut out = Tensor4::zeros();
    for i in 0..3 {
        for jj in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let sym = 0.5 * (c_inv[(i, k)] * c_inv[(jj, l)] + c_inv[(i, l)] * c_inv[(jj, k)]);
                    let v = a_mix * (ident[(i, jj)] * c_inv[(k, l)] + c_inv[(i, jj)] * ident[(k, l)])
                        + a_cc * c_inv[(i, jj)] * c_inv[(k, l)]
                        + a_sym * sym;
                    out.set(i, jj, k, l, v);
                }
            }
        }
    }
    Ok(out)
}

/// Tangent of the first Piola–Kirchhoff stress of one constituent,
/// dA/dF = δ ⊗ S + (F ⊗ F) : ℂ, evaluated at F (geometric + material parts).
pub fn pk1_tangent(f: &Tensor2, p: &NeoHookeanParams) -> Result<Tensor4, SimError> {
    let c = right_cauchy_green(f);
    let s = pk2_stress(&c, p)?;
    let cc = ref_elasticity(&c, p)?;
    let mut out = Tensor4::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = if i == k { s[(j, l)] } else { 0.0 };
                    for m in 0..3 {
                        for q in 0..3 {
                            v += f[(i, m)] * f[(k, q)] * cc.get(m, j, l, q);
                        }
                    }
                    out.set(i, j, k, l, v);
                }
            }
        }
    }
    Ok(out)
}

/// Composite stiffness weights derived from the internal variables:
/// w1 = (1−λ) f(d) for the damaged original tissue, w2 = λ for new tissue.
#[derive(Clone, Copy, Debug)]
pub struct CompositeWeights {
    pub w1: f64,
    pub w2: f64,
}

impl CompositeWeights {
    pub fn from_state(lambda: f64, d: f64) -> Self {
        CompositeWeights {
            w1: (1.0 - lambda) * (-d).exp(),
            w2: lambda,
        }
    }
}

/// Composite first Piola–Kirchhoff stress of the two-constituent mixture.
pub fn composite_pk1(
    f: &Tensor2,
    j_g1: f64,
    j_g2: f64,
    w: CompositeWeights,
    p1: &NeoHookeanParams,
    p2: &NeoHookeanParams,
) -> Result<Tensor2, SimError> {
    let pk1 = first_pk_stress(f, j_g1, p1, 1.0)? * w.w1;
    let pk2 = first_pk_stress(f, j_g2, p2, 1.0)? * w.w2;
    Ok(pk1 + pk2)
}

/// Composite first-PK tangent d(P_total)/dF used for assembly.
pub fn composite_pk1_tangent(
    f: &Tensor2,
    j_g1: f64,
    j_g2: f64,
    w: CompositeWeights,
    p1: &NeoHookeanParams,
    p2: &NeoHookeanParams,
) -> Result<Tensor4, SimError> {
    let mut out = Tensor4::zeros();
    if w.w1 != 0.0 {
        let f_e1 = elastic_part(f, j_g1)?;
        let t1 = pk1_tangent(&f_e1, p1)?;
        out.axpy(w.w1 * j_g1.powf(1.0 / 3.0), &t1);
    }
    if w.w2 != 0.0 {
        let f_e2 = elastic_part(f, j_g2)?;
        let t2 = pk1_tangent(&f_e2, p2)?;
        out.axpy(w.w2 * j_g2.powf(1.0 / 3.0), &t2);
    }
    Ok(out)
}

/// Spatial composite material tangent: the weighted referential tensors
/// 4 ∂²ψ_i/∂C_e∂C_e pushed forward through each constituent's F_e.
pub fn material_tangent(
    f: &Tensor2,
    j_g1: f64,
    j_g2: f64,
    lambda: f64,
    d: f64,
    p1: &NeoHookeanParams,
    p2: &NeoHookeanParams,
) -> Result<Tensor4, SimError> {
    let w = CompositeWeights::from_state(lambda, d);
    let mut out = Tensor4::zeros();
    if w.w1 != 0.0 {
        let f_e = elastic_part(f, j_g1)?;
        out.axpy(w.w1, &push_forward(&f_e, &ref_elasticity(&right_cauchy_green(&f_e), p1)?));
    }
    if w.w2 != 0.0 {
        let f_e = elastic_part(f, j_g2)?;
        out.axpy(w.w2, &push_forward(&f_e, &ref_elasticity(&right_cauchy_green(&f_e), p2)?));
    }
    Ok(out)
}

/// Push a referential 4th-order tensor to the spatial configuration:
/// c_ijkl = J^{-1} F_iI F_jJ F_kK F_lL ℂ_IJKL.
fn push_forward(f: &Tensor2, cc: &Tensor4) -> Tensor4 {
    let j = jacobian(f);
    let mut out = Tensor4::zeros();
    for i in 0..3 {
        for jj in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            for g in 0..3 {
                                for h in 0..3 {
                                    v += f[(i, a)] * f[(jj, b)] * f[(k, g)] * f[(l, h)]
                                        * cc.get(a, b, g, h);
                                }
                            }
                        }
                    }
                    out.set(i, jj, k, l, v / j);
                }
            }
        }
    }
    out
}

/// Composite stress state (Cauchy, first PK, energy) for output purposes.
pub fn composite_stress_state(
    f: &Tensor2,
    j_g1: f64,
    j_g2: f64,
    lambda: f64,
    d: f64,
    p1: &NeoHookeanParams,
    p2: &NeoHookeanParams,
) -> Result<StressState, SimError> {
    let w = CompositeWeights::from_state(lambda, d);
    let pk = composite_pk1(f, j_g1, j_g2, w, p1, p2)?;
    let j = jacobian(f);
    check_positive_det(j, "F")?;
    let cauchy = pk * f.transpose() / j;
    let e1 = elastic_energy(&elastic_part(f, j_g1)?, p1)?;
    let e2 = elastic_energy(&elastic_part(f, j_g2)?, p2)?;
    Ok(StressState {
        cauchy,
        first_pk: pk,
        energy_density: (1.0 - lambda) * j_g1 * (-d).exp() * e1 + lambda * j_g2 * e2,
    })
}

/// Von Mises equivalent of a (symmetric) stress tensor.
pub fn von_mises(sigma: &Tensor2) -> f64 {
    (1.5 * deviator(sigma).norm_squared()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn diag(a: f64, b: f64, c: f64) -> Tensor2 {
        Tensor2::from_diagonal(&Vector3::new(a, b, c))
    }

    fn unit_params() -> NeoHookeanParams {
        NeoHookeanParams { mu: 1.0, kappa: 1.0 }
    }

    /// Central-difference gradient of the elastic energy w.r.t. F_e.
    fn fd_energy_gradient(f_e: &Tensor2, p: &NeoHookeanParams) -> Tensor2 {
        let mut g = Tensor2::zeros();
        let h = 1e-6 * f_e.norm();
        for i in 0..3 {
            for j in 0..3 {
                let mut fp = *f_e;
                let mut fm = *f_e;
                fp[(i, j)] += h;
                fm[(i, j)] -= h;
                g[(i, j)] = (elastic_energy(&fp, p).unwrap() - elastic_energy(&fm, p).unwrap())
                    / (2.0 * h);
            }
        }
        g
    }

    fn rotation(axis: Vector3<f64>, angle: f64) -> Tensor2 {
        nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle)
            .matrix()
            .clone_owned()
    }

    fn sample_f(seed: u64) -> Tensor2 {
        // deterministic pseudo-random perturbation of the identity
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 0.4 - 0.2
        };
        let mut f = Tensor2::identity();
        for i in 0..3 {
            for j in 0..3 {
                f[(i, j)] += next();
            }
        }
        f
    }

    #[test]
    fn energy_vanishes_at_reference() {
        assert_eq!(elastic_energy(&Tensor2::identity(), &unit_params()).unwrap(), 0.0);
    }

    #[test]
    fn energy_of_isochoric_stretch() {
        // J = 1, I₁ = 5 → ψ = ½·μ·(5−3) = 1
        let f = diag(2.0, 2.0f64.powf(-0.5), 2.0f64.powf(-0.5));
        let e = elastic_energy(&f, &unit_params()).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_of_pure_dilation() {
        // isochoric term vanishes identically, ½κ(0.1)² remains
        let f = Tensor2::identity() * 1.1f64.powf(1.0 / 3.0);
        let e = elastic_energy(&f, &unit_params()).unwrap();
        assert!((e - 0.005).abs() < 1e-15);
    }

    #[test]
    fn energy_rejects_inverted_state() {
        assert!(elastic_energy(&diag(-1.0, 1.0, 1.0), &unit_params()).is_err());
    }

    #[test]
    fn cauchy_stress_is_zero_at_reference() {
        let s = cauchy_stress(&Tensor2::identity(), 1.0, &unit_params()).unwrap();
        assert_eq!(s, Tensor2::zeros());
    }

    #[test]
    fn cauchy_stress_of_pure_dilation_is_pressure() {
        let f = Tensor2::identity() * 1.1f64.powf(1.0 / 3.0);
        let s = cauchy_stress(&f, 1.0, &unit_params()).unwrap();
        assert!((s - Tensor2::identity() * 0.1).norm() < 1e-12);
    }

    #[test]
    fn cauchy_stress_matches_energy_derivative() {
        // σ = (1/J_e) ∂ψ/∂F_e · F_eᵀ with the gradient from central differences
        let p = unit_params();
        for seed in 0..20u64 {
            let f = sample_f(seed);
            if jacobian(&f) < 0.4 {
                continue;
            }
            let sigma = cauchy_stress(&f, 1.0, &p).unwrap();
            let grad = fd_energy_gradient(&f, &p);
            let expected = grad * f.transpose() / jacobian(&f);
            let scale = sigma.norm().max(1e-8);
            assert!(
                (sigma - expected).norm() <= 1e-6 * scale,
                "seed {seed}: {:.3e}",
                (sigma - expected).norm() / scale
            );
        }
    }

    #[test]
    fn first_pk_is_zero_at_reference() {
        let p = first_pk_stress(&Tensor2::identity(), 1.0, &unit_params(), 1.0).unwrap();
        assert_eq!(p, Tensor2::zeros());
    }

    #[test]
    fn first_pk_matches_growth_scaled_energy_derivative() {
        // FD of J_g ψ(F·F_g^{-1}) with respect to F
        let p = unit_params();
        let f = diag(1.2, 1.0, 1.0);
        let j_g = 1.05f64;
        let pk = first_pk_stress(&f, j_g, &p, 1.0).unwrap();
        let h = 1e-6f64;
        let mut fd = Tensor2::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut fp = f;
                let mut fm = f;
                fp[(i, j)] += h;
                fm[(i, j)] -= h;
                let ep = j_g * elastic_energy(&elastic_part(&fp, j_g).unwrap(), &p).unwrap();
                let em = j_g * elastic_energy(&elastic_part(&fm, j_g).unwrap(), &p).unwrap();
                fd[(i, j)] = (ep - em) / (2.0 * h);
            }
        }
        assert!((pk - fd).norm() <= 1e-6 * fd.norm());
    }

    #[test]
    fn pk_times_f_transpose_is_symmetric() {
        let f = sample_f(7);
        let pk = first_pk_stress(&f, 1.1, &unit_params(), 0.8).unwrap();
        let m = pk * f.transpose();
        assert!((m - m.transpose()).norm() <= 1e-10 * m.norm());
    }

    #[test]
    fn first_pk_consistent_with_cauchy() {
        let f = sample_f(3);
        let j_g = 1.07;
        let pk = first_pk_stress(&f, j_g, &unit_params(), 1.0).unwrap();
        let sigma = cauchy_stress(&f, j_g, &unit_params()).unwrap();
        let via_pk = pk * f.transpose() / jacobian(&f);
        assert!((via_pk - sigma).norm() <= 1e-10 * sigma.norm());
    }

    #[test]
    fn energy_is_objective() {
        let p = unit_params();
        let f = sample_f(11);
        let e0 = elastic_energy(&f, &p).unwrap();
        for (k, axis) in [
            Vector3::new(1.0, 0.2, -0.3),
            Vector3::new(-0.5, 1.0, 0.8),
            Vector3::new(0.1, -0.7, 1.0),
        ]
        .iter()
        .enumerate()
        {
            let q = rotation(*axis, 0.3 + 0.4 * k as f64);
            let e = elastic_energy(&(q * f), &p).unwrap();
            assert!((e - e0).abs() <= 1e-12 * e0.abs());
        }
    }

    #[test]
    fn cauchy_stress_is_objective() {
        let p = unit_params();
        let f = sample_f(13);
        let s0 = cauchy_stress(&f, 1.0, &p).unwrap();
        let q = rotation(Vector3::new(0.3, 1.0, -0.2), 0.7);
        let s = cauchy_stress(&(q * f), 1.0, &p).unwrap();
        let expected = q * s0 * q.transpose();
        assert!((s - expected).norm() <= 1e-10 * expected.norm());
    }

    #[test]
    fn ref_elasticity_matches_stress_differences() {
        let p = NeoHookeanParams { mu: 1.3, kappa: 2.1 };
        for seed in 0..6u64 {
            let f = sample_f(seed + 40);
            if jacobian(&f) < 0.4 {
                continue;
            }
            let c = right_cauchy_green(&f);
            let cc = ref_elasticity(&c, &p).unwrap();
            // perturbing the symmetric pair (kl, lk) by h gives
            // dS_ij = ℂ_ijkl h for k≠l, and dS_ij = ℂ_ijkk h/2 for k=l
            let h = 1e-6;
            let scale = cc.max_abs();
            let mut max_rel: f64 = 0.0;
            for k in 0..3 {
                for l in k..3 {
                    let mut cp = c;
                    let mut cm = c;
                    cp[(k, l)] += h;
                    cp[(l, k)] = cp[(k, l)];
                    cm[(k, l)] -= h;
                    cm[(l, k)] = cm[(k, l)];
                    let ds = (pk2_stress(&cp, &p).unwrap() - pk2_stress(&cm, &p).unwrap())
                        / (2.0 * h);
                    for i in 0..3 {
                        for j in 0..3 {
                            let analytic = if k == l {
                                0.5 * cc.get(i, j, k, l)
                            } else {
                                cc.get(i, j, k, l)
                            };
                            max_rel = max_rel.max((analytic - ds[(i, j)]).abs() / scale);
                        }
                    }
                }
            }
            assert!(max_rel < 1e-6, "seed {seed}: max rel {max_rel:.3e}");
        }
    }

    #[test]
    fn pk1_tangent_matches_gradient_differences() {
        let p = NeoHookeanParams { mu: 0.9, kappa: 1.7 };
        let f = sample_f(21);
        let t = pk1_tangent(&f, &p).unwrap();
        let h = 1e-6;
        let scale = t.max_abs();
        for k in 0..3 {
            for l in 0..3 {
                let mut fp = f;
                let mut fm = f;
                fp[(k, l)] += h;
                fm[(k, l)] -= h;
                let da = (energy_gradient(&fp, &p).unwrap() - energy_gradient(&fm, &p).unwrap())
                    / (2.0 * h);
                for i in 0..3 {
                    for j in 0..3 {
                        assert!(
                            (t.get(i, j, k, l) - da[(i, j)]).abs() <= 1e-6 * scale,
                            "component ({i},{j},{k},{l})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn material_tangent_at_identity_is_small_strain_tensor() {
        // shear modulus 1 and bulk modulus 1 → λ_L = 1 − 2/3 = 1/3
        let t = material_tangent(&Tensor2::identity(), 1.0, 1.0, 0.0, 0.0, &unit_params(), &unit_params())
            .unwrap();
        let lam = 1.0 - 2.0 / 3.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let di_j = (i == j) as usize as f64;
                        let dk_l = (k == l) as usize as f64;
                        let dik = (i == k) as usize as f64;
                        let djl = (j == l) as usize as f64;
                        let dil = (i == l) as usize as f64;
                        let djk = (j == k) as usize as f64;
                        let expected = lam * di_j * dk_l + 1.0 * (dik * djl + dil * djk);
                        assert!((t.get(i, j, k, l) - expected).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn material_tangent_vanishes_when_fully_damaged() {
        let t = material_tangent(&sample_f(2), 1.0, 1.0, 0.0, 1e6, &unit_params(), &unit_params())
            .unwrap();
        assert_eq!(t.max_abs(), 0.0);
    }

    #[test]
    fn material_tangent_reduces_to_second_constituent() {
        let p2 = NeoHookeanParams { mu: 2.0, kappa: 3.0 };
        let f = sample_f(5);
        let t = material_tangent(&f, 1.0, 1.1, 1.0, 0.7, &unit_params(), &p2).unwrap();
        let f_e = elastic_part(&f, 1.1).unwrap();
        let alone = push_forward(&f_e, &ref_elasticity(&right_cauchy_green(&f_e), &p2).unwrap());
        let mut diff: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        diff = diff.max((t.get(i, j, k, l) - alone.get(i, j, k, l)).abs());
                    }
                }
            }
        }
        assert!(diff < 1e-14);
    }

    #[test]
    fn material_tangent_has_major_and_minor_symmetries() {
        let f = sample_f(17);
        let t = material_tangent(&f, 1.05, 0.98, 0.3, 0.4, &unit_params(), &unit_params()).unwrap();
        let scale = t.max_abs();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let v = t.get(i, j, k, l);
                        assert!((v - t.get(j, i, k, l)).abs() <= 1e-10 * scale);
                        assert!((v - t.get(i, j, l, k)).abs() <= 1e-10 * scale);
                        assert!((v - t.get(k, l, i, j)).abs() <= 1e-10 * scale);
                    }
                }
            }
        }
    }

    #[test]
    fn stiffness_factor_range_checked() {
        assert!(first_pk_stress(&Tensor2::identity(), 1.0, &unit_params(), 1.5).is_err());
        assert!(first_pk_stress(&Tensor2::identity(), 1.0, &unit_params(), -0.1).is_err());
    }
}
