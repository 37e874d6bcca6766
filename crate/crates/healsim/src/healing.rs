//! Internal-variable state and thermodynamic evolution of growth,
//! remodeling and damage, including the nonlocal-penalty contribution to
//! the damage driving force.
//!
//! Every quadrature point carries one [`InternalState`]. The update is an
//! explicit forward-Euler step driven by [`DrivingForces`]; equilibrium is
//! solved with these variables frozen (staggered scheme). Mobilities are
//! interpreted so that M · (energy density / μ_ref) has units 1/day, with
//! μ_ref the shear modulus of the original tissue at that point.

use crate::error::SimError;
use crate::kinematics::{elastic_part, Tensor2};
use crate::material::{elastic_energy, energy_gradient, NeoHookeanParams};

/// Exponential stiffness-reduction function f(d) = e^{-d}.
pub fn damage_function(d: f64) -> Result<f64, SimError> {
    if d < 0.0 {
        return Err(SimError::domain(format!("damage variable must be >= 0, got {d}")));
    }
    Ok((-d).exp())
}

/// Physiological potential g(d): the energy offset controlled by the
/// organism that biases remodeling toward replacing damaged tissue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GSpec {
    /// g(d) = value, independent of damage.
    Constant(f64),
    /// g(d) = amplitude · (1 − e^{-d}); zero for virgin tissue, saturating
    /// with damage. Not taken from any reported parameter set; provided for
    /// scenarios whose offset the tables leave open.
    Saturating { amplitude: f64 },
}

pub fn physiological_potential(d: f64, g_spec: GSpec) -> f64 {
    match g_spec {
        GSpec::Constant(v) => v,
        GSpec::Saturating { amplitude } => amplitude * (1.0 - (-d).exp()),
    }
}

/// Per-quadrature-point history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InternalState {
    /// Growth volume ratio of the damaged original tissue.
    pub j_g1: f64,
    /// Growth volume ratio of the newly deposited tissue.
    pub j_g2: f64,
    /// Volume fraction of new tissue, in [0, 1].
    pub lambda: f64,
    /// Damage variable, non-decreasing along any trajectory.
    pub d: f64,
    /// Nonlocal damage field interpolated at this point.
    pub phi: f64,
    /// Growth limits frozen by the capture rule, if already captured.
    pub captured_r_g: Option<(f64, f64)>,
}

impl InternalState {
    /// Virgin tissue reference state.
    pub fn virgin() -> Self {
        InternalState {
            j_g1: 1.0,
            j_g2: 1.0,
            lambda: 0.0,
            d: 0.0,
            phi: 0.0,
            captured_r_g: None,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.j_g1 > 0.0 && self.j_g2 > 0.0) {
            return Err(SimError::internal(format!(
                "growth ratios must stay positive: Jg1={}, Jg2={}",
                self.j_g1, self.j_g2
            )));
        }
        if !(0.0..=1.0).contains(&self.lambda) || self.d < 0.0 {
            return Err(SimError::internal(format!(
                "state bounds violated: lambda={}, d={}",
                self.lambda, self.d
            )));
        }
        Ok(())
    }
}

/// Composite stiffness retention H = (1−λ) f(d) + λ; 1 healthy, 0 destroyed.
pub fn healing_parameter(s: &InternalState) -> f64 {
    (1.0 - s.lambda) * (-s.d).exp() + s.lambda
}

/// Gradient-regularization constants of the nonlocal damage field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlocalParams {
    /// Gradient parameter (stress · length²); sets the internal length scale.
    pub c_d: f64,
    /// Penalty tying the nonlocal field to γ_d · d (stress units).
    pub beta_d: f64,
    /// Switch between local (0) and gradient-enhanced (1) coupling.
    pub gamma_d: f64,
}

/// Mobilities, thresholds and related constants of the evolution laws.
#[derive(Clone, Copy, Debug)]
pub struct HealingParams {
    pub m_g1: f64,
    pub m_g2: f64,
    /// Fixed growth limits; when None the captured per-point value applies.
    pub r_g1: Option<f64>,
    pub r_g2: Option<f64>,
    pub m_rm: f64,
    pub r_rm: f64,
    /// Cap on the healable fraction: λ evolves only while λ < η.
    pub eta: f64,
    pub m_d: f64,
    /// Damage threshold (the tables' κ_d).
    pub r_d: f64,
    pub g_spec: GSpec,
    /// Stress scale of the rate normalization (original tissue's μ).
    pub mu_ref: f64,
}

impl HealingParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let nonneg = [
            ("M_g1", self.m_g1),
            ("M_g2", self.m_g2),
            ("M_rm", self.m_rm),
            ("r_rm", self.r_rm),
            ("M_d", self.m_d),
            ("r_d", self.r_d),
        ];
        for (name, v) in nonneg {
            if v < 0.0 {
                return Err(SimError::domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(SimError::domain(format!("eta must lie in [0,1], got {}", self.eta)));
        }
        if !(self.mu_ref > 0.0) {
            return Err(SimError::domain("mu_ref must be positive".to_string()));
        }
        Ok(())
    }

    /// Copy with growth and remodeling switched off, used before the
    /// activation time of the growth-and-remodeling process.
    pub fn with_gr_inactive(&self) -> Self {
        HealingParams {
            m_g1: 0.0,
            m_g2: 0.0,
            m_rm: 0.0,
            ..*self
        }
    }
}

/// Thermodynamic driving forces conjugate to the internal variables.
#[derive(Clone, Copy, Debug)]
pub struct DrivingForces {
    pub q_g1: Tensor2,
    pub q_g2: Tensor2,
    pub q_rm: f64,
    pub q_d: f64,
}

/// Evaluates the modified driving forces at the given state:
///
/// q_g1 = −(f(d) ψ₁ + g(d)) I + f(d) F_e1ᵀ ∂ψ₁/∂F_e1
/// q_g2 = −ψ₂ I + F_e2ᵀ ∂ψ₂/∂F_e2
/// q_rm = J_g1 (f(d) ψ₁ + g(d)) − J_g2 ψ₂
/// q_d  = f(d) ψ₁ + β_d γ_d (φ − γ_d d)
///
/// The damage force includes the nonlocal penalty coupling; the derivative
/// of g is deliberately absent from q_d because the physiological potential
/// is an externally controlled input, not a stored energy of the tissue.
pub fn driving_forces(
    f: &Tensor2,
    s: &InternalState,
    mats: (&NeoHookeanParams, &NeoHookeanParams),
    hp: &HealingParams,
    nl: &NonlocalParams,
) -> Result<DrivingForces, SimError> {
    let f_e1 = elastic_part(f, s.j_g1)?;
    let f_e2 = elastic_part(f, s.j_g2)?;
    let psi1 = elastic_energy(&f_e1, mats.0)?;
    let psi2 = elastic_energy(&f_e2, mats.1)?;
    let fd = damage_function(s.d)?;
    let g = physiological_potential(s.d, hp.g_spec);
    let ident = Tensor2::identity();

    let q_g1 = ident * (-(fd * psi1 + g)) + f_e1.transpose() * energy_gradient(&f_e1, mats.0)? * fd;
    let q_g2 = ident * (-psi2) + f_e2.transpose() * energy_gradient(&f_e2, mats.1)?;
    let q_rm = s.j_g1 * (fd * psi1 + g) - s.j_g2 * psi2;
    let q_d = fd * psi1 + nl.beta_d * nl.gamma_d * (s.phi - nl.gamma_d * s.d);

    Ok(DrivingForces { q_g1, q_g2, q_rm, q_d })
}

/// Gradient-enhanced free energy density at one point.
pub fn total_energy(
    f: &Tensor2,
    s: &InternalState,
    grad_phi: &[f64; 2],
    mats: (&NeoHookeanParams, &NeoHookeanParams),
    hp: &HealingParams,
    nl: &NonlocalParams,
) -> Result<f64, SimError> {
    let psi1 = elastic_energy(&elastic_part(f, s.j_g1)?, mats.0)?;
    let psi2 = elastic_energy(&elastic_part(f, s.j_g2)?, mats.1)?;
    let fd = damage_function(s.d)?;
    let g = physiological_potential(s.d, hp.g_spec);
    let grad_sq = grad_phi[0] * grad_phi[0] + grad_phi[1] * grad_phi[1];
    let mismatch = s.phi - nl.gamma_d * s.d;
    Ok((1.0 - s.lambda)
        * s.j_g1
        * (fd * psi1 + 0.5 * nl.c_d * grad_sq + 0.5 * nl.beta_d * mismatch * mismatch + g)
        + s.lambda * s.j_g2 * psi2)
}

/// Outcome flags of one explicit update.
#[derive(Clone, Copy, Debug, Default)]
pub struct EvolveReport {
    /// Number of hard clamps applied (overshoot past an invariant bound).
    /// Constraint holds at a bound with an outward drive do not count.
    pub clamps: u32,
}

fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

/// Signed magnitude of the volumetric growth drive: the Frobenius norm of
/// the spherical part of q, carrying the sign of its trace. Spherical
/// growth can only work against this part; the deviatoric remainder is
/// reacted by the isotropy constraint on F_g.
pub fn spherical_drive(q: &Tensor2) -> f64 {
    q.trace() / 3.0f64.sqrt()
}

/// One forward-Euler update of all internal variables. The driving forces
/// must have been evaluated at the incoming state. φ is not evolved here;
/// it is a primary field of the equilibrium solve.
pub fn evolve(
    s: &InternalState,
    forces: &DrivingForces,
    hp: &HealingParams,
    dt: f64,
) -> Result<(InternalState, EvolveReport), SimError> {
    if !(dt > 0.0) {
        return Err(SimError::domain(format!("time step must be positive, got {dt}")));
    }
    hp.validate()?;
    let mut report = EvolveReport::default();
    let mut out = *s;

    // volumetric growth of both constituents, J̇_g / J_g = tr(L_g), with the
    // flow thresholded on the spherical part of the growth force; growth
    // arrests exactly on ‖spherical(q)‖ = r_g
    for (j_g, q, m, r_fixed, captured) in [
        (&mut out.j_g1, &forces.q_g1, hp.m_g1, hp.r_g1, s.captured_r_g.map(|c| c.0)),
        (&mut out.j_g2, &forces.q_g2, hp.m_g2, hp.r_g2, s.captured_r_g.map(|c| c.1)),
    ] {
        let limit = captured.or(r_fixed);
        let (Some(r_g), true) = (limit, m > 0.0) else { continue };
        let drive = spherical_drive(q);
        let gap = positive_part((drive.abs() - r_g) / hp.mu_ref);
        if gap > 0.0 {
            // tr(M gap sign_tensor(spherical(q))) = √3 M gap sign(tr q)
            let tr_l = m * gap * 3.0f64.sqrt() * drive.signum();
            let j_new = *j_g * (1.0 + dt * tr_l);
            if j_new <= 0.0 {
                report.clamps += 1;
                *j_g *= 0.5; // emergency floor; driver will halve the step
            } else {
                *j_g = j_new;
            }
        }
    }

    // remodeling: λ̇ = M_rm (|q_rm| − r_rm)_+ sign(q_rm) (η − λ)_+, with the
    // volume-fraction constraint λ ≥ 0 treated as an active bound
    let headroom = positive_part(hp.eta - s.lambda);
    let drive = positive_part((forces.q_rm.abs() - hp.r_rm) / hp.mu_ref) * forces.q_rm.signum();
    let mut rate = hp.m_rm * drive * headroom;
    if s.lambda <= 0.0 && rate < 0.0 {
        rate = 0.0;
    }
    let lambda_new = s.lambda + dt * rate;
    if lambda_new < 0.0 {
        out.lambda = 0.0;
        report.clamps += 1;
    } else if lambda_new > 1.0 {
        out.lambda = 1.0;
        report.clamps += 1;
    } else {
        out.lambda = lambda_new;
    }

    // damage: ḋ = M_d (q_d − r_d)_+, never negative
    out.d = s.d + dt * hp.m_d * positive_part((forces.q_d - hp.r_d) / hp.mu_ref);

    out.validate()?;
    if out.d < s.d {
        return Err(SimError::internal("damage decreased within a step".to_string()));
    }
    Ok((out, report))
}

/// Dissipation q · Δz summed over all internal variables for one step;
/// growth contributes tr(q) ΔJ_g / (3 J_g), the spherical contraction
/// consistent with the Euler update. Must be ≥ −1e-12 for every step.
pub fn dissipation_increment(
    s_old: &InternalState,
    s_new: &InternalState,
    forces: &DrivingForces,
    _dt: f64,
) -> f64 {
    let growth1 = forces.q_g1.trace() * (s_new.j_g1 - s_old.j_g1) / (3.0 * s_old.j_g1);
    let growth2 = forces.q_g2.trace() * (s_new.j_g2 - s_old.j_g2) / (3.0 * s_old.j_g2);
    let remodeling = forces.q_rm * (s_new.lambda - s_old.lambda);
    let damage = forces.q_d * (s_new.d - s_old.d);
    growth1 + growth2 + remodeling + damage
}

/// Growth-limit snapshot at the capture instant: the norms of the
/// spherical growth drives of both constituents, frozen as r_g thereafter.
pub fn capture_limits(
    f: &Tensor2,
    s: &InternalState,
    mats: (&NeoHookeanParams, &NeoHookeanParams),
    hp: &HealingParams,
    nl: &NonlocalParams,
) -> Result<(f64, f64), SimError> {
    let forces = driving_forces(f, s, mats, hp, nl)?;
    Ok((
        spherical_drive(&forces.q_g1).abs(),
        spherical_drive(&forces.q_g2).abs(),
    ))
}
