//! Uniaxial tension of a single square element.
//!
//! A 10×10 mm plate modeled with one bilinear quad: the left edge is held
//! in x, the bottom edge in y, and the right edge is pulled to the
//! configured stretch over the ramp, then held. The lateral (top) edge is
//! free, so the transverse displacement responds to growth.

use super::{
    capture_rule_for, finalize_bcs, CaptureSetting, ProbeMeasure, Probes, ReactionMeasure,
    ScenarioConfig, ScenarioKind, ScenarioSpec,
};
use crate::error::SimError;
use crate::fem::{
    Discretization, DofMap, GridSegment, Mesh, RegionParams, Schedule, Simulation, SolveControls,
    DOF_UX, DOF_UY,
};
use crate::healing::{HealingParams, InternalState};
use std::collections::BTreeMap;

pub const EDGE_MM: f64 = 10.0;

pub fn build_uniaxial(cfg: &ScenarioConfig) -> Result<ScenarioSpec, SimError> {
    if !(cfg.ramp_target > 0.0) {
        return Err(SimError::domain(format!(
            "edge stretch must be positive, got {}",
            cfg.ramp_target
        )));
    }
    let mut node_sets = BTreeMap::new();
    node_sets.insert("left".to_string(), vec![0usize, 3]);
    node_sets.insert("right".to_string(), vec![1usize, 2]);
    node_sets.insert("bottom".to_string(), vec![0usize, 1]);
    node_sets.insert("top".to_string(), vec![3usize, 2]);
    let mesh = Mesh {
        nodes: vec![[0.0, 0.0], [EDGE_MM, 0.0], [EDGE_MM, EDGE_MM], [0.0, EDGE_MM]],
        quads: vec![[0, 1, 2, 3]],
        region: vec![0],
        node_sets,
    };

    let (rule, fixed_r) = capture_rule_for(cfg)?;
    let healing = HealingParams {
        m_g1: cfg.healing.m_g1,
        m_g2: cfg.healing.m_g2,
        r_g1: fixed_r.map(|r| r.0),
        r_g2: fixed_r.map(|r| r.1),
        m_rm: cfg.healing.m_rm,
        r_rm: cfg.healing.r_rm,
        eta: cfg.healing.eta,
        m_d: cfg.healing.m_d,
        r_d: cfg.healing.r_d,
        g_spec: cfg.healing.g,
        mu_ref: cfg.mat1.mu,
    };
    healing.validate()?;
    let regions = vec![RegionParams { mat1: cfg.mat1, mat2: cfg.mat2, healing }];

    let mut dofs = DofMap::new(mesh.n_nodes());
    let pull = cfg.ramp_target * EDGE_MM;
    let declared = vec![
        (DofMap::global(0, DOF_UX), 0.0),
        (DofMap::global(3, DOF_UX), 0.0),
        (DofMap::global(0, DOF_UY), 0.0),
        (DofMap::global(1, DOF_UY), 0.0),
        (DofMap::global(1, DOF_UX), pull),
        (DofMap::global(2, DOF_UX), pull),
    ];
    let bc = finalize_bcs(&mut dofs, declared)?;

    let disc = Discretization::new(mesh, dofs, regions, cfg.nonlocal)?;
    let n_gp = disc.n_gp();
    let n_dofs = disc.dofs.n_total();
    let sim = Simulation {
        disc,
        bc,
        schedule: Schedule::ramp_and_hold(cfg.ramp_duration),
        grid: vec![GridSegment { t_end: cfg.duration, dt: cfg.dt }],
        gr_start: cfg.gr_start_time(),
        capture: rule,
        controls: SolveControls {
            newton_tol: cfg.newton_tol,
            max_iterations: cfg.max_iterations,
            ..SolveControls::default()
        },
        max_halvings: cfg.max_halvings,
        states: vec![InternalState::virgin(); n_gp],
        u: vec![0.0; n_dofs],
        t: 0.0,
    };

    Ok(ScenarioSpec {
        kind: ScenarioKind::Uniaxial,
        sim,
        probes: Probes {
            loaded_chain: vec![1, 2],
            reaction: ReactionMeasure::AxialX,
            probe_node: 2,
            probe: ProbeMeasure::DisplacementY,
            outer_nodes: Vec::new(),
            outer_center: [0.0, 0.0],
            outer_radius0: 1.0,
        },
        region_names: vec!["tissue"],
    })
}

/// Default uniaxial configuration with the tabulated constants.
pub fn default_config() -> ScenarioConfig {
    ScenarioConfig::default_for(ScenarioKind::Uniaxial)
}

/// Growth-only variant: remodeling and damage switched off.
pub fn growth_only(m_g: f64, capture_time: f64) -> ScenarioConfig {
    let mut cfg = default_config();
    cfg.healing.m_g1 = m_g;
    cfg.healing.m_g2 = m_g;
    cfg.healing.m_rm = 0.0;
    cfg.healing.m_d = 0.0;
    cfg.capture = CaptureSetting::AtTime(capture_time);
    cfg
}

/// Remodeling-only variant: growth switched off, damage active.
pub fn remodeling_only(m_rm: f64, eta: f64) -> ScenarioConfig {
    let mut cfg = default_config();
    cfg.healing.m_g1 = 0.0;
    cfg.healing.m_g2 = 0.0;
    cfg.healing.m_rm = m_rm;
    cfg.healing.eta = eta;
    cfg.capture = CaptureSetting::Off;
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_build_has_one_element_and_two_phases() {
        let spec = build_uniaxial(&default_config()).unwrap();
        assert_eq!(spec.sim.disc.mesh.n_elems(), 1);
        assert_eq!(spec.sim.disc.mesh.n_nodes(), 4);
        // ramp knot plus implicit hold
        assert_eq!(spec.sim.schedule.knots.len(), 2);
        assert_eq!(spec.sim.schedule.factor(50.0), 0.5);
        assert_eq!(spec.sim.schedule.factor(400.0), 1.0);
    }

    #[test]
    fn growth_only_switches_remodeling_off() {
        let cfg = growth_only(0.01, 10.0);
        assert_eq!(cfg.healing.m_rm, 0.0);
        assert_eq!(cfg.healing.m_d, 0.0);
        let spec = build_uniaxial(&cfg).unwrap();
        assert_eq!(spec.sim.disc.regions[0].healing.m_rm, 0.0);
    }

    #[test]
    fn remodeling_only_switches_growth_off() {
        let cfg = remodeling_only(0.02, 1.0);
        let spec = build_uniaxial(&cfg).unwrap();
        assert_eq!(spec.sim.disc.regions[0].healing.m_g1, 0.0);
        assert_eq!(spec.sim.disc.regions[0].healing.eta, 1.0);
    }
}
