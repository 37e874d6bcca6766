//! Time marching: staggered alternation of global equilibrium solves with
//! explicit per-point updates of the internal variables.
//!
//! Each nominal increment applies the scheduled boundary values, solves
//! equilibrium with frozen internal variables, then evolves the internal
//! variables at every quadrature point. A failed solve rolls the fields
//! back and retries the increment with a halved sub-step, as does an update
//! that activates an invariant clamp or grows the growth-force gap while
//! the load is constant.

use crate::error::SimError;
use crate::fem::assemble::{assemble_residual, gp_kinematics, Discretization};
use crate::fem::mesh::GP_PER_ELEM;
use crate::fem::newton::{newton_solve, NewtonReport, SolveControls};
use crate::healing::{
    capture_limits, dissipation_increment, driving_forces, evolve, healing_parameter,
    spherical_drive, InternalState,
};

/// When to freeze the growth limits from the running driving forces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaptureRule {
    /// Growth limits are given a priori (or growth is off).
    None,
    /// Capture at the first increment reaching this time (days).
    AtTime(f64),
    /// Capture at the first increment reaching this load factor in [0, 1].
    AtLoadFactor(f64),
}

/// Piecewise-linear load factor; boundary values scale with it.
#[derive(Clone, Debug)]
pub struct Schedule {
    /// (time, factor) knots with strictly increasing times; constant
    /// extrapolation beyond the last knot.
    pub knots: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn ramp_and_hold(ramp_duration: f64) -> Self {
        Schedule { knots: vec![(0.0, 0.0), (ramp_duration, 1.0)] }
    }

    pub fn factor(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            if t <= w[1].0 {
                let s = (t - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + s * (w[1].1 - w[0].1);
            }
        }
        k[k.len() - 1].1
    }
}

/// One segment of the integration grid with its own nominal step.
#[derive(Clone, Copy, Debug)]
pub struct GridSegment {
    pub t_end: f64,
    pub dt: f64,
}

/// Full problem state owned by the time driver.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub disc: Discretization,
    /// Constrained dof → value at load factor one.
    pub bc: Vec<(usize, f64)>,
    pub schedule: Schedule,
    pub grid: Vec<GridSegment>,
    /// Activation time of growth and remodeling; damage runs from t = 0.
    pub gr_start: f64,
    pub capture: CaptureRule,
    pub controls: SolveControls,
    pub max_halvings: u32,
    pub states: Vec<InternalState>,
    pub u: Vec<f64>,
    pub t: f64,
}

/// Per-increment record handed to the output observer.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub t: f64,
    pub newton: NewtonReport,
    /// Full residual at convergence; constrained entries are reactions.
    pub residual: Vec<f64>,
    /// Volume-integrated dissipation of this increment.
    pub dissipation_total: f64,
    /// Smallest per-point dissipation increment seen in this increment.
    pub dissipation_min: f64,
    pub clamps: u32,
    pub substeps: u32,
}

/// Run-level invariant bookkeeping.
#[derive(Clone, Debug)]
pub struct MarchDiagnostics {
    pub total_clamps: u64,
    pub min_dissipation: f64,
    pub damage_monotone: bool,
    pub lambda_in_bounds: bool,
    pub healing_in_bounds: bool,
    pub captured: bool,
    pub total_newton_iterations: u64,
}

impl Default for MarchDiagnostics {
    fn default() -> Self {
        MarchDiagnostics {
            total_clamps: 0,
            min_dissipation: f64::INFINITY,
            damage_monotone: true,
            lambda_in_bounds: true,
            healing_in_bounds: true,
            captured: false,
            total_newton_iterations: 0,
        }
    }
}

impl Simulation {
    fn apply_bcs(&mut self, t: f64) {
        let factor = self.schedule.factor(t);
        for &(dof, v) in &self.bc {
            self.u[dof] = v * factor;
        }
    }
}

struct SubstepOutcome {
    states: Vec<InternalState>,
    clamps: u32,
    dissipation_total: f64,
    dissipation_min: f64,
    gap_grew: bool,
}

/// Evolves every quadrature point over one converged sub-step.
///
/// The explicit growth update carries a per-point overshoot watchdog: the
/// growth-force gap is re-evaluated with only the growth ratios advanced
/// (damage and volume fraction held), so a genuine Euler overshoot of the
/// arrest surface requests a halved step without being masked by the other
/// evolving variables.
fn evolve_all(sim: &Simulation, t_start: f64, dt: f64) -> Result<SubstepOutcome, SimError> {
    let gr_active = t_start >= sim.gr_start - 1e-9;
    let mut out = SubstepOutcome {
        states: sim.states.clone(),
        clamps: 0,
        dissipation_total: 0.0,
        dissipation_min: f64::INFINITY,
        gap_grew: false,
    };
    for e in 0..sim.disc.mesh.n_elems() {
        let params = sim.disc.region_of(e);
        let hp = if gr_active { params.healing } else { params.healing.with_gr_inactive() };
        let mats = (&params.mat1, &params.mat2);
        for g in 0..GP_PER_ELEM {
            let idx = e * GP_PER_ELEM + g;
            let s = &sim.states[idx];
            let (f, phi, _) = gp_kinematics(&sim.disc, &sim.u, e, g);
            let mut s_in = *s;
            s_in.phi = phi;
            let forces = driving_forces(&f, &s_in, mats, &hp, &sim.disc.nl)?;
            let (s_new, rep) = evolve(&s_in, &forces, &hp, dt)?;

            let grew = s_new.j_g1 != s_in.j_g1 || s_new.j_g2 != s_in.j_g2;
            if grew {
                let limits = s_in.captured_r_g.unwrap_or((
                    hp.r_g1.unwrap_or(f64::INFINITY),
                    hp.r_g2.unwrap_or(f64::INFINITY),
                ));
                let mut probe = s_in;
                probe.j_g1 = s_new.j_g1;
                probe.j_g2 = s_new.j_g2;
                let after = driving_forces(&f, &probe, mats, &hp, &sim.disc.nl)?;
                for (q_before, q_after, r) in [
                    (&forces.q_g1, &after.q_g1, limits.0),
                    (&forces.q_g2, &after.q_g2, limits.1),
                ] {
                    let gap_before = spherical_drive(q_before).abs() - r;
                    let gap_after = spherical_drive(q_after).abs() - r;
                    if gap_before > 0.0 && gap_after > gap_before * (1.0 + 1e-9) + 1e-14 {
                        out.gap_grew = true;
                    }
                }
            }

            let diss = dissipation_increment(&s_in, &s_new, &forces, dt);
            let wdet: f64 = sim.disc.cache[e][g].wdet;
            out.dissipation_total += wdet * diss;
            out.dissipation_min = out.dissipation_min.min(diss);
            out.clamps += rep.clamps;
            out.states[idx] = s_new;
        }
    }
    Ok(out)
}

fn capture_triggered(sim: &Simulation, t: f64) -> bool {
    match sim.capture {
        CaptureRule::None => false,
        CaptureRule::AtTime(t_star) => t >= t_star - 1e-9,
        CaptureRule::AtLoadFactor(x) => sim.schedule.factor(t) >= x - 1e-12,
    }
}

fn capture_all(sim: &mut Simulation) -> Result<(), SimError> {
    for e in 0..sim.disc.mesh.n_elems() {
        let params = sim.disc.region_of(e);
        for g in 0..GP_PER_ELEM {
            let idx = e * GP_PER_ELEM + g;
            let (f, phi, _) = gp_kinematics(&sim.disc, &sim.u, e, g);
            let mut s = sim.states[idx];
            s.phi = phi;
            let limits =
                capture_limits(&f, &s, (&params.mat1, &params.mat2), &params.healing, &sim.disc.nl)?;
            sim.states[idx].captured_r_g = Some(limits);
        }
    }
    Ok(())
}

fn update_diagnostics(
    diag: &mut MarchDiagnostics,
    old_states: &[InternalState],
    new_states: &[InternalState],
) {
    for (o, n) in old_states.iter().zip(new_states) {
        if n.d < o.d {
            diag.damage_monotone = false;
        }
        if !(0.0..=1.0).contains(&n.lambda) {
            diag.lambda_in_bounds = false;
        }
        let h = healing_parameter(n);
        if !(0.0..=1.0 + 1e-12).contains(&h) {
            diag.healing_in_bounds = false;
        }
    }
}

/// Runs the whole schedule. The observer is called once per nominal
/// increment with the converged fields and committed states.
pub fn time_march(
    sim: &mut Simulation,
    on_step: &mut dyn FnMut(&Simulation, &StepRecord) -> Result<(), SimError>,
) -> Result<MarchDiagnostics, SimError> {
    let mut diag = MarchDiagnostics::default();
    let mut captured = matches!(sim.capture, CaptureRule::None);

    for seg_idx in 0..sim.grid.len() {
        let seg = sim.grid[seg_idx];
        if seg.t_end <= sim.t + 1e-12 {
            continue;
        }
        let span = seg.t_end - sim.t;
        let n_steps = (span / seg.dt).round().max(1.0) as usize;
        let t_seg_start = sim.t;
        for step in 0..n_steps {
            let t1 = if step + 1 == n_steps {
                seg.t_end
            } else {
                t_seg_start + span * (step + 1) as f64 / n_steps as f64
            };
            let record = advance_increment(sim, t1, &mut diag, &mut captured)?;
            on_step(sim, &record)?;
        }
    }

    if !captured {
        return Err(SimError::config(
            "growth-limit capture instant was never reached by the schedule".to_string(),
        ));
    }
    diag.captured = captured;
    Ok(diag)
}

fn advance_increment(
    sim: &mut Simulation,
    t1: f64,
    diag: &mut MarchDiagnostics,
    captured: &mut bool,
) -> Result<StepRecord, SimError> {
    let t0 = sim.t;
    let dt_nominal = t1 - t0;
    let mut remaining = dt_nominal;
    let mut dt_try = dt_nominal;
    let mut halvings: u32 = 0;
    let mut substeps: u32 = 0;
    let mut record = StepRecord {
        t: t1,
        newton: NewtonReport {
            converged: false,
            iterations: 0,
            initial_norm: 0.0,
            final_norm: 0.0,
            norms: Vec::new(),
        },
        residual: Vec::new(),
        dissipation_total: 0.0,
        dissipation_min: f64::INFINITY,
        clamps: 0,
        substeps: 0,
    };

    while remaining > 1e-12 * dt_nominal {
        let t_from = t1 - remaining;
        let t_to = t_from + dt_try;
        let u_backup = sim.u.clone();
        sim.apply_bcs(t_to);

        let solve = newton_solve(&sim.disc, &sim.states, &mut sim.u, &sim.controls);
        let (report, residual) = match solve {
            Ok((rep, res)) if rep.converged => (rep, res),
            outcome => {
                sim.u = u_backup;
                halvings += 1;
                if halvings > sim.max_halvings {
                    let detail = match outcome {
                        Ok((rep, _)) => format!(
                            "no convergence in {} iterations (residual {:.3e})",
                            rep.iterations, rep.final_norm
                        ),
                        Err(e) => e.to_string(),
                    };
                    return Err(SimError::solver(format!(
                        "increment t={t0:.6}..{t1:.6} failed after {} halvings: {detail}",
                        halvings - 1
                    )));
                }
                dt_try *= 0.5;
                continue;
            }
        };

        let outcome = evolve_all(sim, t_from, dt_try)?;
        let unstable = outcome.clamps > 0 || outcome.gap_grew;
        if unstable && halvings < sim.max_halvings {
            sim.u = u_backup;
            halvings += 1;
            dt_try *= 0.5;
            continue;
        }

        // commit the sub-step
        update_diagnostics(diag, &sim.states, &outcome.states);
        sim.states = outcome.states;
        sim.t = t_to;
        remaining -= dt_try;
        substeps += 1;
        record.clamps += outcome.clamps;
        record.dissipation_total += outcome.dissipation_total;
        record.dissipation_min = record.dissipation_min.min(outcome.dissipation_min);
        diag.total_clamps += outcome.clamps as u64;
        diag.min_dissipation = diag.min_dissipation.min(outcome.dissipation_min);
        diag.total_newton_iterations += report.iterations as u64;
        record.newton = report;
        record.residual = residual;

        if !*captured && capture_triggered(sim, sim.t) {
            capture_all(sim)?;
            *captured = true;
        }

        dt_try = dt_try.min(remaining.max(f64::MIN_POSITIVE));
    }

    sim.t = t1;
    record.substeps = substeps;
    if record.dissipation_min == f64::INFINITY {
        record.dissipation_min = 0.0;
    }
    Ok(record)
}

/// Convenience for tests and probes: the full residual (reactions at
/// constrained dofs) at the current fields.
pub fn current_reactions(sim: &Simulation) -> Result<Vec<f64>, SimError> {
    assemble_residual(&sim.disc, &sim.u, &sim.states)
}
