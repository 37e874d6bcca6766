//! Balloon inflation of an atherosclerotic artery cross-section.
//!
//! Idealized plane-strain geometry (mm): the artery is a thick-walled
//! cylinder (inner radius 1.8, outer 2.0) around the origin; the lumen is a
//! circle of radius 1.0 whose center sits 0.5 off the artery center; the
//! space between lumen and artery wall is fibrous plaque; a 140° lipid-pool
//! crescent spans radii 1.25–1.75 about the lumen center on the thick side,
//! leaving a thin fibrous cap between pool and lumen. Half of the section
//! is meshed with spokes from the lumen center; the luminal nodes are
//! displaced radially to the inflation radius over the loading increments
//! and then held while the tissue heals.

use super::{
    capture_rule_for, finalize_bcs, ProbeMeasure, Probes, ReactionMeasure, ScenarioConfig,
    ScenarioKind, ScenarioSpec,
};
use crate::error::SimError;
use crate::fem::{
    Discretization, DofMap, GridSegment, Mesh, RegionParams, Schedule, Simulation, SolveControls,
    DOF_UX, DOF_UY,
};
use crate::healing::{HealingParams, InternalState};
use crate::material::NeoHookeanParams;
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub const LUMEN_CENTER: [f64; 2] = [0.5, 0.0];
pub const LUMEN_RADIUS: f64 = 1.0;
pub const ARTERY_INNER: f64 = 1.8;
pub const ARTERY_OUTER: f64 = 2.0;
pub const LIPID_INNER: f64 = 1.25;
pub const LIPID_OUTER: f64 = 1.75;
/// Half-opening of the lipid crescent about the thick side (140° total).
pub const LIPID_EDGE_DEG: f64 = 110.0;

pub const REGION_ARTERY: usize = 0;
pub const REGION_PLAQUE: usize = 1;
pub const REGION_LIPID: usize = 2;

/// Distance from the lumen center to a circle of radius `r` about the
/// artery center, along the direction θ: the positive root of
/// |C + t e(θ)| = r with C the lumen-center offset.
fn wall_distance(theta: f64, r: f64) -> f64 {
    let ce = LUMEN_CENTER[0] * theta.cos();
    let c2 = LUMEN_CENTER[0] * LUMEN_CENTER[0];
    -ce + (ce * ce + r * r - c2).sqrt()
}

/// Radial station list along one spoke, from the lumen out to the artery
/// outer wall. Spokes inside the crescent sector align stations with the
/// lipid-pool radii so the pool boundary follows mesh lines.
fn spoke_stations(theta: f64, counts: &RadialCounts) -> Vec<f64> {
    let t_in = wall_distance(theta, ARTERY_INNER);
    let t_out = wall_distance(theta, ARTERY_OUTER);
    let n_plaque = counts.cap + counts.lipid + counts.outer;
    let mut r = Vec::with_capacity(n_plaque + counts.artery + 1);
    if theta >= LIPID_EDGE_DEG.to_radians() - 1e-12 {
        push_segment(&mut r, LUMEN_RADIUS, LIPID_INNER, counts.cap, true);
        push_segment(&mut r, LIPID_INNER, LIPID_OUTER, counts.lipid, false);
        push_segment(&mut r, LIPID_OUTER, t_in, counts.outer, false);
    } else {
        push_segment(&mut r, LUMEN_RADIUS, t_in, n_plaque, true);
    }
    push_segment(&mut r, t_in, t_out, counts.artery, false);
    r
}

fn push_segment(r: &mut Vec<f64>, from: f64, to: f64, n: usize, include_start: bool) {
    if include_start {
        r.push(from);
    }
    for k in 1..=n {
        r.push(from + (to - from) * k as f64 / n as f64);
    }
}

struct RadialCounts {
    cap: usize,
    lipid: usize,
    outer: usize,
    artery: usize,
}

fn radial_counts(density: f64) -> RadialCounts {
    let scale = |base: f64, min: usize| ((base * density).round() as usize).max(min);
    RadialCounts {
        cap: scale(2.0, 2),
        lipid: scale(3.0, 2),
        outer: scale(2.0, 1),
        artery: scale(2.0, 1),
    }
}

/// Spoke count for the half model; multiples of 18 keep the crescent edge
/// (110°) on a mesh line.
fn spoke_count(density: f64) -> usize {
    18 * ((2.0 * density).round() as usize).max(1)
}

fn classify(centroid: [f64; 2]) -> usize {
    let dx = centroid[0] - LUMEN_CENTER[0];
    let dy = centroid[1] - LUMEN_CENTER[1];
    let r = (dx * dx + dy * dy).sqrt();
    let theta = dy.atan2(dx).abs();
    if r > wall_distance(theta, ARTERY_INNER) {
        REGION_ARTERY
    } else if theta >= LIPID_EDGE_DEG.to_radians() && (LIPID_INNER..=LIPID_OUTER).contains(&r) {
        REGION_LIPID
    } else {
        REGION_PLAQUE
    }
}

fn cross_section_mesh(density: f64, full: bool) -> Mesh {
    let n_t_half = spoke_count(density);
    let counts = radial_counts(density);
    let n_spokes = if full { 2 * n_t_half } else { n_t_half + 1 };
    let n_st = counts.cap + counts.lipid + counts.outer + counts.artery + 1;
    let node_id = move |j: usize, i: usize| (j % n_spokes) * n_st + i;

    let mut nodes = Vec::with_capacity(n_spokes * n_st);
    for j in 0..n_spokes {
        let theta = PI * j as f64 / n_t_half as f64;
        // station radii use the folded angle so both halves mirror exactly
        let folded = if theta > PI { 2.0 * PI - theta } else { theta };
        let stations = spoke_stations(folded, &counts);
        for &r in &stations {
            nodes.push([
                LUMEN_CENTER[0] + r * theta.cos(),
                LUMEN_CENTER[1] + r * theta.sin(),
            ]);
        }
    }

    let n_cols = if full { 2 * n_t_half } else { n_t_half };
    let mut quads = Vec::with_capacity(n_cols * (n_st - 1));
    let mut region = Vec::with_capacity(n_cols * (n_st - 1));
    for j in 0..n_cols {
        for i in 0..(n_st - 1) {
            let quad = [
                node_id(j, i),
                node_id(j, i + 1),
                node_id(j + 1, i + 1),
                node_id(j + 1, i),
            ];
            let mut cx = 0.0;
            let mut cy = 0.0;
            for &n in &quad {
                cx += nodes[n][0] / 4.0;
                cy += nodes[n][1] / 4.0;
            }
            region.push(classify([cx, cy]));
            quads.push(quad);
        }
    }

    let mut node_sets = BTreeMap::new();
    let lumen: Vec<usize> = (0..n_spokes).map(|j| node_id(j, 0)).collect();
    let outer: Vec<usize> = (0..n_spokes).map(|j| node_id(j, n_st - 1)).collect();
    node_sets.insert("lumen".to_string(), lumen);
    node_sets.insert("outer".to_string(), outer);
    if !full {
        let mut symmetry: Vec<usize> = (0..n_st).map(|i| node_id(0, i)).collect();
        symmetry.extend((0..n_st).map(|i| node_id(n_t_half, i)));
        node_sets.insert("symmetry".to_string(), symmetry);
    }
    node_sets.insert("probe".to_string(), vec![node_id(n_t_half, n_st - 1)]);

    Mesh { nodes, quads, region, node_sets }
}

fn region_params(cfg: &ScenarioConfig, fixed_r: Option<(f64, f64)>) -> Vec<RegionParams> {
    let mk = |mu: f64, kappa: f64| NeoHookeanParams { mu, kappa };
    let healing_for = |mu_ref: f64| HealingParams {
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
        mu_ref,
    };
    let am = &cfg.angio_materials;
    vec![
        RegionParams {
            mat1: mk(am.artery.0, am.artery.1),
            mat2: mk(am.artery.0, am.artery.1),
            healing: healing_for(am.artery.0),
        },
        RegionParams {
            mat1: mk(am.plaque.0, am.plaque.1),
            mat2: mk(am.plaque.0, am.plaque.1),
            healing: healing_for(am.plaque.0),
        },
        RegionParams {
            mat1: mk(am.lipid.0, am.lipid.1),
            mat2: mk(am.lipid.0, am.lipid.1),
            healing: healing_for(am.lipid.0),
        },
    ]
}

fn build(cfg: &ScenarioConfig, full: bool) -> Result<ScenarioSpec, SimError> {
    let r_f = cfg.ramp_target;
    if !(r_f > 1.0 && r_f < 1.6) {
        return Err(SimError::domain(format!(
            "inflation radius must lie in (1.0, 1.6) mm, got {r_f}"
        )));
    }
    let mesh = cross_section_mesh(cfg.mesh_density, full);
    let (rule, fixed_r) = capture_rule_for(cfg)?;
    let regions = region_params(cfg, fixed_r);
    for r in &regions {
        r.healing.validate()?;
    }

    let mut dofs = DofMap::new(mesh.n_nodes());
    let mut declared = Vec::new();
    if !full {
        for &n in mesh.node_set("symmetry")? {
            declared.push((DofMap::global(n, DOF_UY), 0.0));
        }
    }
    for &n in mesh.node_set("lumen")? {
        let x = mesh.nodes[n];
        let radial = [x[0] - LUMEN_CENTER[0], x[1] - LUMEN_CENTER[1]];
        declared.push((DofMap::global(n, DOF_UX), (r_f - LUMEN_RADIUS) * radial[0]));
        declared.push((DofMap::global(n, DOF_UY), (r_f - LUMEN_RADIUS) * radial[1]));
    }
    let loaded_chain = mesh.node_set("lumen")?.to_vec();
    let outer_nodes = mesh.node_set("outer")?.to_vec();
    let probe_node = mesh.node_set("probe")?[0];
    let bc = finalize_bcs(&mut dofs, declared)?;

    let disc = Discretization::new(mesh, dofs, regions, cfg.nonlocal)?;
    let n_gp = disc.n_gp();
    let n_dofs = disc.dofs.n_total();
    let t_load = cfg.ramp_duration;
    let sim = Simulation {
        disc,
        bc,
        schedule: Schedule::ramp_and_hold(t_load),
        grid: vec![
            // one hundred loading increments, then the healing grid
            GridSegment { t_end: t_load, dt: t_load / 100.0 },
            GridSegment { t_end: cfg.duration, dt: cfg.dt },
        ],
        gr_start: cfg.gr_start.unwrap_or(t_load),
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
        kind: ScenarioKind::Angioplasty,
        sim,
        probes: Probes {
            loaded_chain,
            reaction: ReactionMeasure::Radial { center: LUMEN_CENTER },
            probe_node,
            probe: ProbeMeasure::DisplacementMagnitude,
            outer_nodes,
            outer_center: [0.0, 0.0],
            outer_radius0: ARTERY_OUTER,
        },
        region_names: vec!["artery", "plaque", "lipid"],
    })
}

pub fn build_angioplasty(cfg: &ScenarioConfig) -> Result<ScenarioSpec, SimError> {
    build(cfg, false)
}

/// Full cross-section without symmetry conditions, for verification runs.
pub fn build_full_cross_section(cfg: &ScenarioConfig) -> Result<ScenarioSpec, SimError> {
    build(cfg, true)
}

/// Analytic half-model region areas (mm²) for mesh verification.
pub fn analytic_half_areas() -> [f64; 3] {
    let lipid = (140.0 / 360.0)
        * PI
        * (LIPID_OUTER * LIPID_OUTER - LIPID_INNER * LIPID_INNER)
        / 2.0;
    let artery = PI * (ARTERY_OUTER * ARTERY_OUTER - ARTERY_INNER * ARTERY_INNER) / 2.0;
    let plaque =
        PI * (ARTERY_INNER * ARTERY_INNER - LUMEN_RADIUS * LUMEN_RADIUS) / 2.0 - lipid;
    [artery, plaque, lipid]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::GP_PER_ELEM;

    fn default_cfg() -> ScenarioConfig {
        ScenarioConfig::default_for(ScenarioKind::Angioplasty)
    }

    #[test]
    fn luminal_nodes_reach_the_inflation_radius_exactly() {
        let spec = build_angioplasty(&default_cfg()).unwrap();
        assert_eq!(spec.sim.schedule.factor(1e9), 1.0);
        // at full load every luminal node sits at distance r_f from the
        // lumen center
        let lumen = spec.sim.disc.mesh.node_set("lumen").unwrap();
        for &n in lumen {
            let x = spec.sim.disc.mesh.nodes[n];
            let radial = [x[0] - LUMEN_CENTER[0], x[1] - LUMEN_CENTER[1]];
            let moved = [
                x[0] + (1.4 - 1.0) * radial[0] - LUMEN_CENTER[0],
                x[1] + (1.4 - 1.0) * radial[1] - LUMEN_CENTER[1],
            ];
            let r = (moved[0] * moved[0] + moved[1] * moved[1]).sqrt();
            assert!((r - 1.4).abs() < 1e-12);
        }
    }

    #[test]
    fn region_areas_match_analytic_geometry() {
        let spec = build_angioplasty(&default_cfg()).unwrap();
        let mesh = &spec.sim.disc.mesh;
        let cache = mesh.quadrature_cache().unwrap();
        let mut areas = [0.0f64; 3];
        for e in 0..mesh.n_elems() {
            areas[mesh.region[e]] += mesh.element_area(&cache, e);
        }
        let exact = analytic_half_areas();
        for (r, (&got, &want)) in areas.iter().zip(exact.iter()).enumerate() {
            assert!(
                (got - want).abs() <= 0.02 * want,
                "region {r}: {got:.4} vs {want:.4}"
            );
        }
    }

    #[test]
    fn all_three_regions_are_present_with_states() {
        let spec = build_angioplasty(&default_cfg()).unwrap();
        let mesh = &spec.sim.disc.mesh;
        for r in 0..3 {
            assert!(mesh.region.iter().any(|&x| x == r), "region {r} missing");
        }
        assert_eq!(spec.sim.states.len(), mesh.n_elems() * GP_PER_ELEM);
    }

    #[test]
    fn invalid_inflation_radius_is_rejected() {
        for bad in [0.9, 1.0, 1.6, 2.0] {
            let mut cfg = default_cfg();
            cfg.ramp_target = bad;
            cfg.capture = super::super::CaptureSetting::Off;
            assert!(build_angioplasty(&cfg).is_err(), "radius {bad} accepted");
        }
    }

    #[test]
    fn full_model_mirrors_the_half_mesh() {
        let half = build_angioplasty(&default_cfg()).unwrap();
        let full = build_full_cross_section(&default_cfg()).unwrap();
        // upper-half nodes coincide (same spoke/station ordering)
        for n in 0..half.sim.disc.mesh.n_nodes() {
            let a = half.sim.disc.mesh.nodes[n];
            let b = full.sim.disc.mesh.nodes[n];
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        }
        assert_eq!(full.sim.disc.mesh.n_elems(), 2 * half.sim.disc.mesh.n_elems());
    }
}
