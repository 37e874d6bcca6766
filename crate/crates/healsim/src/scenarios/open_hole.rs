//! Open-hole plate under uniaxial edge displacement.
//!
//! The full plate is 100×100 mm with a central hole of 50 mm diameter; by
//! symmetry one quarter is meshed: the region of [0,50]² outside the
//! quarter circle of radius 25 at the origin. A transfinite spoke mesh maps
//! the hole boundary to the outer square edges. Symmetry conditions act on
//! the cut edges, the right edge is pulled in x over the ramp, the top edge
//! and hole boundary are free.

use super::{
    capture_rule_for, finalize_bcs, MeshLevel, ProbeMeasure, Probes, ReactionMeasure,
    ScenarioConfig, ScenarioKind, ScenarioSpec,
};
use crate::error::SimError;
use crate::fem::{
    Discretization, DofMap, GridSegment, Mesh, RegionParams, Schedule, Simulation, SolveControls,
    DOF_UX, DOF_UY,
};
use crate::healing::{HealingParams, InternalState};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

pub const HOLE_RADIUS_MM: f64 = 25.0;
pub const HALF_PLATE_MM: f64 = 50.0;

/// Spoke/layer counts targeting roughly 79 / 286 / 793 elements.
fn grid_counts(level: MeshLevel) -> (usize, usize) {
    match level {
        MeshLevel::Coarse => (10, 8),
        MeshLevel::Medium => (18, 16),
        MeshLevel::Fine => (30, 26),
    }
}

/// Outer intersection of the ray at angle θ with the square [0,L]².
fn square_boundary_point(theta: f64, l: f64) -> [f64; 2] {
    if theta <= FRAC_PI_4 {
        [l, l * theta.tan()]
    } else {
        [l * (FRAC_PI_2 - theta).tan(), l]
    }
}

fn quarter_mesh(n_t: usize, n_r: usize) -> Mesh {
    let node_id = |j: usize, i: usize| j * (n_r + 1) + i;
    let mut nodes = Vec::with_capacity((n_t + 1) * (n_r + 1));
    for j in 0..=n_t {
        let theta = FRAC_PI_2 * j as f64 / n_t as f64;
        let inner = [HOLE_RADIUS_MM * theta.cos(), HOLE_RADIUS_MM * theta.sin()];
        let outer = square_boundary_point(theta, HALF_PLATE_MM);
        for i in 0..=n_r {
            let s = i as f64 / n_r as f64;
            nodes.push([
                inner[0] + s * (outer[0] - inner[0]),
                inner[1] + s * (outer[1] - inner[1]),
            ]);
        }
    }
    let mut quads = Vec::with_capacity(n_t * n_r);
    for j in 0..n_t {
        for i in 0..n_r {
            quads.push([
                node_id(j, i),
                node_id(j, i + 1),
                node_id(j + 1, i + 1),
                node_id(j + 1, i),
            ]);
        }
    }

    let mut node_sets = BTreeMap::new();
    node_sets.insert("hole".to_string(), (0..=n_t).map(|j| node_id(j, 0)).collect());
    node_sets.insert("bottom".to_string(), (0..=n_r).map(|i| node_id(0, i)).collect());
    node_sets.insert("left".to_string(), (0..=n_r).map(|i| node_id(n_t, i)).collect());
    let right: Vec<usize> = (0..=n_t)
        .map(|j| node_id(j, n_r))
        .filter(|&n| {
            let jj = n / (n_r + 1);
            FRAC_PI_2 * jj as f64 / n_t as f64 <= FRAC_PI_4 + 1e-12
        })
        .collect();
    node_sets.insert("right".to_string(), right);
    node_sets.insert("node_a".to_string(), vec![node_id(n_t, 0)]);

    Mesh { nodes, quads, region: vec![0; n_t * n_r], node_sets }
}

fn healing_from(cfg: &ScenarioConfig, fixed_r: Option<(f64, f64)>) -> HealingParams {
    HealingParams {
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
    }
}

pub fn build_open_hole(cfg: &ScenarioConfig) -> Result<ScenarioSpec, SimError> {
    let (n_t, n_r) = grid_counts(cfg.mesh_level);
    let mesh = quarter_mesh(n_t, n_r);

    let (rule, fixed_r) = capture_rule_for(cfg)?;
    let healing = healing_from(cfg, fixed_r);
    healing.validate()?;
    let regions = vec![RegionParams { mat1: cfg.mat1, mat2: cfg.mat2, healing }];

    let mut dofs = DofMap::new(mesh.n_nodes());
    let mut declared = Vec::new();
    for &n in mesh.node_set("bottom")? {
        declared.push((DofMap::global(n, DOF_UY), 0.0));
    }
    for &n in mesh.node_set("left")? {
        declared.push((DofMap::global(n, DOF_UX), 0.0));
    }
    for &n in mesh.node_set("right")? {
        declared.push((DofMap::global(n, DOF_UX), cfg.ramp_target));
    }
    let loaded_chain = mesh.node_set("right")?.to_vec();
    let probe_node = mesh.node_set("node_a")?[0];
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
        kind: ScenarioKind::OpenHole,
        sim,
        probes: Probes {
            loaded_chain,
            reaction: ReactionMeasure::AxialX,
            probe_node,
            probe: ProbeMeasure::DisplacementY,
            outer_nodes: Vec::new(),
            outer_center: [0.0, 0.0],
            outer_radius0: 1.0,
        },
        region_names: vec!["plate"],
    })
}

/// Full 100×100 mm plate with the central hole, meshed by mirroring the
/// quarter spokes all around. Both vertical edges are pulled (±target),
/// one node pins the vertical rigid mode; no symmetry conditions are
/// imposed, so agreement with the quarter model is a real check.
pub fn build_full_plate(cfg: &ScenarioConfig) -> Result<ScenarioSpec, SimError> {
    let (n_tq, n_r) = grid_counts(cfg.mesh_level);
    let n_t = 4 * n_tq; // spokes over the full circle
    let node_id = |j: usize, i: usize| (j % n_t) * (n_r + 1) + i;
    let mut nodes = Vec::with_capacity(n_t * (n_r + 1));
    for j in 0..n_t {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n_t as f64;
        let inner = [HOLE_RADIUS_MM * theta.cos(), HOLE_RADIUS_MM * theta.sin()];
        // reflect the first-quadrant boundary map into the other quadrants
        let tq = theta.rem_euclid(2.0 * std::f64::consts::PI);
        let (quadrant, local) = ((tq / FRAC_PI_2).floor() as usize % 4, tq.rem_euclid(FRAC_PI_2));
        let p = square_boundary_point(local, HALF_PLATE_MM);
        let outer = match quadrant {
            0 => [p[0], p[1]],
            1 => [-p[1], p[0]],
            2 => [-p[0], -p[1]],
            _ => [p[1], -p[0]],
        };
        for i in 0..=n_r {
            let s = i as f64 / n_r as f64;
            nodes.push([
                inner[0] + s * (outer[0] - inner[0]),
                inner[1] + s * (outer[1] - inner[1]),
            ]);
        }
    }
    let mut quads = Vec::with_capacity(n_t * n_r);
    for j in 0..n_t {
        for i in 0..n_r {
            quads.push([
                node_id(j, i),
                node_id(j, i + 1),
                node_id(j + 1, i + 1),
                node_id(j + 1, i),
            ]);
        }
    }
    let tol = 1e-9;
    let right: Vec<usize> = (0..nodes.len())
        .filter(|&n| (nodes[n][0] - HALF_PLATE_MM).abs() < tol)
        .collect();
    let left: Vec<usize> = (0..nodes.len())
        .filter(|&n| (nodes[n][0] + HALF_PLATE_MM).abs() < tol)
        .collect();
    let mut node_sets = BTreeMap::new();
    node_sets.insert("right".to_string(), right.clone());
    node_sets.insert("left".to_string(), left.clone());
    let mesh = Mesh { nodes, quads, region: vec![0; n_t * n_r], node_sets };

    let (rule, fixed_r) = capture_rule_for(cfg)?;
    let healing = healing_from(cfg, fixed_r);
    let regions = vec![RegionParams { mat1: cfg.mat1, mat2: cfg.mat2, healing }];

    let mut dofs = DofMap::new(mesh.n_nodes());
    let mut declared = Vec::new();
    for &n in &right {
        declared.push((DofMap::global(n, DOF_UX), cfg.ramp_target));
    }
    for &n in &left {
        declared.push((DofMap::global(n, DOF_UX), -cfg.ramp_target));
    }
    // pin the vertical rigid mode at the outer node on the +x axis
    declared.push((DofMap::global(node_id(0, n_r), DOF_UY), 0.0));
    let bc = finalize_bcs(&mut dofs, declared)?;

    let disc = Discretization::new(mesh, dofs, regions, cfg.nonlocal)?;
    let n_gp = disc.n_gp();
    let n_dofs = disc.dofs.n_total();
    let probe_node = node_id(n_tq, 0); // hole shoulder (0, 25)
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
        kind: ScenarioKind::OpenHole,
        sim,
        probes: Probes {
            loaded_chain: Vec::new(),
            reaction: ReactionMeasure::AxialX,
            probe_node,
            probe: ProbeMeasure::DisplacementY,
            outer_nodes: Vec::new(),
            outer_center: [0.0, 0.0],
            outer_radius0: 1.0,
        },
        region_names: vec!["plate"],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_counts_track_the_three_levels() {
        for (level, target) in [
            (MeshLevel::Coarse, 79.0),
            (MeshLevel::Medium, 286.0),
            (MeshLevel::Fine, 793.0),
        ] {
            let mut cfg = ScenarioConfig::default_for(ScenarioKind::OpenHole);
            cfg.mesh_level = level;
            let spec = build_open_hole(&cfg).unwrap();
            let n = spec.sim.disc.mesh.n_elems() as f64;
            assert!(
                (n - target).abs() <= 0.15 * target,
                "level {level:?}: {n} vs {target}"
            );
        }
    }

    #[test]
    fn probe_node_sits_on_the_hole_boundary() {
        let cfg = ScenarioConfig::default_for(ScenarioKind::OpenHole);
        let spec = build_open_hole(&cfg).unwrap();
        let x = spec.sim.disc.mesh.nodes[spec.probes.probe_node];
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        assert!((r - HOLE_RADIUS_MM).abs() < 1e-9);
        assert!(x[0].abs() < 1e-9, "probe is the shoulder node (0, 25)");
    }

    #[test]
    fn all_levels_share_the_same_schedule() {
        let mut knots = Vec::new();
        for level in [MeshLevel::Coarse, MeshLevel::Medium, MeshLevel::Fine] {
            let mut cfg = ScenarioConfig::default_for(ScenarioKind::OpenHole);
            cfg.mesh_level = level;
            let spec = build_open_hole(&cfg).unwrap();
            knots.push(spec.sim.schedule.knots.clone());
        }
        assert_eq!(knots[0], knots[1]);
        assert_eq!(knots[1], knots[2]);
    }

    #[test]
    fn quarter_mesh_area_matches_geometry() {
        let cfg = ScenarioConfig::default_for(ScenarioKind::OpenHole);
        let spec = build_open_hole(&cfg).unwrap();
        let cache = spec.sim.disc.mesh.quadrature_cache().unwrap();
        let area: f64 = (0..spec.sim.disc.mesh.n_elems())
            .map(|e| spec.sim.disc.mesh.element_area(&cache, e))
            .sum();
        let exact = HALF_PLATE_MM * HALF_PLATE_MM
            - std::f64::consts::PI * HOLE_RADIUS_MM * HOLE_RADIUS_MM / 4.0;
        assert!((area - exact).abs() < 0.02 * exact, "{area} vs {exact}");
    }
}
