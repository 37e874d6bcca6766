//! Increment-iterative Newton solver for the coupled two-field system.

use crate::error::SimError;
use crate::fem::assemble::{assemble_residual, assemble_tangent, reduce_to_free, Discretization};
use crate::fem::linsolve::linear_solve;
use crate::healing::InternalState;

/// Tolerances and iteration limits of the global solve.
#[derive(Clone, Copy, Debug)]
pub struct SolveControls {
    /// Relative residual tolerance.
    pub newton_tol: f64,
    pub max_iterations: usize,
    /// Absolute floor added to the initial norm, so that already-converged
    /// inputs (zero residual) terminate immediately.
    pub residual_floor: f64,
}

impl Default for SolveControls {
    fn default() -> Self {
        SolveControls {
            newton_tol: 1e-8,
            max_iterations: 25,
            // a small force (N per unit thickness); keeps the target finite
            // when an increment starts already balanced
            residual_floor: 1e-4,
        }
    }
}

impl SolveControls {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.newton_tol > 0.0) {
            return Err(SimError::domain(format!(
                "newton tolerance must be positive, got {}",
                self.newton_tol
            )));
        }
        Ok(())
    }
}

/// Iteration log of one converged (or failed) solve.
#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub converged: bool,
    pub iterations: usize,
    pub initial_norm: f64,
    pub final_norm: f64,
    /// Free-residual norms after each update.
    pub norms: Vec<f64>,
}

fn free_norm(disc: &Discretization, r: &[f64]) -> f64 {
    disc.dofs
        .free_dofs()
        .iter()
        .map(|&d| r[d] * r[d])
        .sum::<f64>()
        .sqrt()
}

/// Solves equilibrium at fixed internal variables. Boundary values must
/// already be written into `u` at the constrained dofs. On success the
/// returned vector is the full residual at the converged state, whose
/// entries at constrained dofs are the reactions.
pub fn newton_solve(
    disc: &Discretization,
    states: &[InternalState],
    u: &mut [f64],
    controls: &SolveControls,
) -> Result<(NewtonReport, Vec<f64>), SimError> {
    controls.validate()?;
    let mut residual = assemble_residual(disc, u, states)?;
    let initial_norm = free_norm(disc, &residual);
    if !initial_norm.is_finite() {
        return Err(SimError::solver("non-finite residual at start of solve".to_string()));
    }
    let target = controls.newton_tol * (initial_norm + controls.residual_floor);
    let mut report = NewtonReport {
        converged: initial_norm <= target,
        iterations: 0,
        initial_norm,
        final_norm: initial_norm,
        norms: Vec::new(),
    };
    if report.converged {
        return Ok((report, residual));
    }

    for it in 1..=controls.max_iterations {
        let k_full = assemble_tangent(disc, u, states)?;
        let k = reduce_to_free(disc, &k_full);
        let rhs: Vec<f64> = disc.dofs.free_dofs().iter().map(|&d| -residual[d]).collect();
        let delta = linear_solve(&k, &rhs)?;
        for (i, &d) in disc.dofs.free_dofs().iter().enumerate() {
            u[d] += delta[i];
        }
        residual = assemble_residual(disc, u, states)?;
        let norm = free_norm(disc, &residual);
        report.iterations = it;
        report.final_norm = norm;
        report.norms.push(norm);
        if !norm.is_finite() {
            return Ok((report, residual));
        }
        if norm <= target {
            report.converged = true;
            return Ok((report, residual));
        }
    }
    Ok((report, residual))
}
