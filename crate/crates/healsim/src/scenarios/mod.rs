//! Built-in scenario generators and the run orchestration that turns a
//! configured scenario into time series and field snapshots.

pub mod angioplasty;
pub mod open_hole;
pub mod uniaxial;

use crate::error::SimError;
use crate::fem::assemble::gp_kinematics;
use crate::fem::{
    assemble_tangent, time_march, CaptureRule, DofMap, MarchDiagnostics, Simulation, StepRecord,
    GP_PER_ELEM,
};
use crate::healing::{driving_forces, healing_parameter, GSpec, NonlocalParams};
use crate::material::NeoHookeanParams;
use crate::output;
use std::io::Write;
use std::path::PathBuf;

/// Which of the built-in problems to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Uniaxial,
    OpenHole,
    Angioplasty,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Uniaxial => "uniaxial",
            ScenarioKind::OpenHole => "open_hole",
            ScenarioKind::Angioplasty => "angioplasty",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshLevel {
    Coarse,
    Medium,
    Fine,
}

/// How the growth limits are fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaptureSetting {
    /// No capture; growth stays off unless fixed limits are given.
    Off,
    /// Freeze ‖q_g‖ per point at this time (days).
    AtTime(f64),
    /// Freeze when the prescribed luminal radius reaches this value (mm).
    AtLumenRadius(f64),
    /// Fixed limits for both constituents (energy-density units).
    Fixed(f64, f64),
}

/// Evolution constants shared by the scenario builders.
#[derive(Clone, Copy, Debug)]
pub struct HealingSettings {
    pub m_g1: f64,
    pub m_g2: f64,
    pub m_rm: f64,
    pub r_rm: f64,
    pub eta: f64,
    pub m_d: f64,
    pub r_d: f64,
    pub g: GSpec,
}

/// Moduli of the three arterial regions (kPa).
#[derive(Clone, Copy, Debug)]
pub struct AngioMaterials {
    pub artery: (f64, f64),
    pub plaque: (f64, f64),
    pub lipid: (f64, f64),
}

/// Everything a scenario builder needs; per-kind defaults come from
/// [`ScenarioConfig::default_for`].
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub dt: f64,
    pub duration: f64,
    /// Activation time of growth and remodeling; None → end of the ramp.
    pub gr_start: Option<f64>,
    /// Ramp magnitude: edge stretch (uniaxial), edge displacement in mm
    /// (open hole), final luminal radius in mm (angioplasty).
    pub ramp_target: f64,
    pub ramp_duration: f64,
    pub mesh_level: MeshLevel,
    pub mesh_density: f64,
    pub mat1: NeoHookeanParams,
    pub mat2: NeoHookeanParams,
    pub angio_materials: AngioMaterials,
    pub healing: HealingSettings,
    pub nonlocal: NonlocalParams,
    pub capture: CaptureSetting,
    pub newton_tol: f64,
    pub max_iterations: usize,
    pub max_halvings: u32,
}

impl ScenarioConfig {
    pub fn default_for(kind: ScenarioKind) -> Self {
        let unit = NeoHookeanParams { mu: 1.0, kappa: 1.0 };
        let base = ScenarioConfig {
            kind,
            dt: 0.25,
            duration: 1000.0,
            gr_start: None,
            ramp_target: 0.5,
            ramp_duration: 100.0,
            mesh_level: MeshLevel::Coarse,
            mesh_density: 1.0,
            mat1: unit,
            mat2: unit,
            angio_materials: AngioMaterials {
                artery: (15.0, 4.0),
                plaque: (78.9, 23.7),
                lipid: (0.1, 0.5),
            },
            healing: HealingSettings {
                m_g1: 0.01,
                m_g2: 0.01,
                m_rm: 0.01,
                r_rm: 0.0,
                eta: 0.0,
                m_d: 1.0,
                r_d: 0.2,
                g: GSpec::Constant(0.001),
            },
            nonlocal: NonlocalParams { c_d: 1.0, beta_d: 0.001, gamma_d: 1.0 },
            capture: CaptureSetting::AtTime(10.0),
            newton_tol: 1e-8,
            max_iterations: 25,
            max_halvings: 10,
        };
        match kind {
            ScenarioKind::Uniaxial => base,
            ScenarioKind::OpenHole => ScenarioConfig {
                dt: 0.5,
                duration: 700.0,
                ramp_target: 10.0,
                mat1: NeoHookeanParams { mu: 1.0, kappa: 40.0 },
                mat2: NeoHookeanParams { mu: 1.0, kappa: 40.0 },
                healing: HealingSettings {
                    m_g1: 0.03,
                    m_g2: 0.03,
                    m_rm: 0.1,
                    r_rm: 0.0,
                    eta: 0.0,
                    m_d: 1.0,
                    r_d: 0.01,
                    g: GSpec::Constant(0.001),
                },
                nonlocal: NonlocalParams { c_d: 1.0, beta_d: 1.0, gamma_d: 1.0 },
                capture: CaptureSetting::AtTime(50.0),
                ..base
            },
            ScenarioKind::Angioplasty => ScenarioConfig {
                dt: 0.5,
                duration: 410.0,
                ramp_target: 1.4,
                ramp_duration: 10.0,
                healing: HealingSettings {
                    m_g1: 0.01,
                    m_g2: 0.01,
                    m_rm: 0.1,
                    r_rm: 0.0,
                    eta: 1.0,
                    m_d: 1.0,
                    r_d: 5.0,
                    g: GSpec::Saturating { amplitude: 60.0 },
                },
                nonlocal: NonlocalParams { c_d: 1.0, beta_d: 20.0, gamma_d: 1.0 },
                capture: CaptureSetting::AtLumenRadius(1.2),
                ..base
            },
        }
    }

    pub fn gr_start_time(&self) -> f64 {
        self.gr_start.unwrap_or(self.ramp_duration)
    }
}

/// Direction of the boundary reaction resultant.
#[derive(Clone, Debug)]
pub enum ReactionMeasure {
    /// Sum of x-components divided by the deformed chain length.
    AxialX,
    /// Mean radial traction about a center.
    Radial { center: [f64; 2] },
}

#[derive(Clone, Debug)]
pub enum ProbeMeasure {
    DisplacementY,
    DisplacementMagnitude,
}

/// Named locations the time series reports.
#[derive(Clone, Debug)]
pub struct Probes {
    /// Nodes whose reactions make up the boundary-averaged stress, in
    /// chain order along the boundary.
    pub loaded_chain: Vec<usize>,
    pub reaction: ReactionMeasure,
    pub probe_node: usize,
    pub probe: ProbeMeasure,
    /// Outer-boundary nodes for the normalized outer radius (empty → 1).
    pub outer_nodes: Vec<usize>,
    pub outer_center: [f64; 2],
    pub outer_radius0: f64,
}

/// A fully built, ready-to-march scenario.
#[derive(Clone, Debug)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub sim: Simulation,
    pub probes: Probes,
    pub region_names: Vec<&'static str>,
}

pub fn build_scenario(cfg: &ScenarioConfig) -> Result<ScenarioSpec, SimError> {
    match cfg.kind {
        ScenarioKind::Uniaxial => uniaxial::build_uniaxial(cfg),
        ScenarioKind::OpenHole => open_hole::build_open_hole(cfg),
        ScenarioKind::Angioplasty => angioplasty::build_angioplasty(cfg),
    }
}

/// Translates the capture setting into the march rule plus fixed limits.
pub(crate) fn capture_rule_for(
    cfg: &ScenarioConfig,
) -> Result<(CaptureRule, Option<(f64, f64)>), SimError> {
    match cfg.capture {
        CaptureSetting::Off => Ok((CaptureRule::None, None)),
        CaptureSetting::AtTime(t) => {
            if t > cfg.duration {
                return Err(SimError::config(format!(
                    "capture time {t} lies beyond the run duration {}",
                    cfg.duration
                )));
            }
            Ok((CaptureRule::AtTime(t), None))
        }
        CaptureSetting::AtLumenRadius(r) => {
            if cfg.kind != ScenarioKind::Angioplasty {
                return Err(SimError::config(
                    "lumen-radius capture only applies to the angioplasty scenario".to_string(),
                ));
            }
            let r_f = cfg.ramp_target;
            if !(r > 1.0 && r <= r_f) {
                return Err(SimError::config(format!(
                    "capture radius {r} must lie in (1.0, final radius {r_f}]"
                )));
            }
            Ok((CaptureRule::AtLoadFactor((r - 1.0) / (r_f - 1.0)), None))
        }
        CaptureSetting::Fixed(r1, r2) => Ok((CaptureRule::None, Some((r1, r2)))),
    }
}

/// Channel names of the emitted time series, in column order.
pub const CHANNELS: [&str; 16] = [
    "time",
    "sigma",
    "u_probe",
    "H_min",
    "H_mean",
    "lambda_mean",
    "lambda_max",
    "d_max",
    "Jg1_mean",
    "Jg2_mean",
    "qg1_norm",
    "rg1",
    "R_t",
    "dissipation",
    "newton_iters",
    "clamps",
];

/// File outputs requested for one run.
#[derive(Clone, Debug, Default)]
pub struct OutputPlan {
    /// Output directory; None runs without touching the filesystem.
    pub dir: Option<PathBuf>,
    pub snapshot_times: Vec<f64>,
    pub dump_first_matrix: bool,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub rows: Vec<[f64; CHANNELS.len()]>,
    pub diagnostics: MarchDiagnostics,
}

impl RunResult {
    pub fn channel(&self, name: &str) -> Vec<f64> {
        let idx = CHANNELS.iter().position(|&c| c == name).expect("unknown channel");
        self.rows.iter().map(|r| r[idx]).collect()
    }

    pub fn last(&self, name: &str) -> f64 {
        *self.channel(name).last().expect("empty run")
    }
}

fn chain_length(nodes: &[usize], sim: &Simulation) -> f64 {
    if nodes.len() < 2 {
        return 1.0;
    }
    let pos = |n: usize| {
        let x = sim.disc.mesh.nodes[n];
        [x[0] + sim.u[n * 3], x[1] + sim.u[n * 3 + 1]]
    };
    nodes
        .windows(2)
        .map(|w| {
            let a = pos(w[0]);
            let b = pos(w[1]);
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
        })
        .sum()
}

/// Boundary-averaged stress from the reactions along the loaded chain.
fn boundary_stress(sim: &Simulation, probes: &Probes, residual: &[f64]) -> f64 {
    let length = chain_length(&probes.loaded_chain, sim);
    match &probes.reaction {
        ReactionMeasure::AxialX => {
            let sum: f64 = probes.loaded_chain.iter().map(|&n| residual[n * 3]).sum();
            sum / length
        }
        ReactionMeasure::Radial { center } => {
            let sum: f64 = probes
                .loaded_chain
                .iter()
                .map(|&n| {
                    let x = sim.disc.mesh.nodes[n];
                    let cur =
                        [x[0] + sim.u[n * 3] - center[0], x[1] + sim.u[n * 3 + 1] - center[1]];
                    let r = (cur[0] * cur[0] + cur[1] * cur[1]).sqrt().max(1e-30);
                    (residual[n * 3] * cur[0] + residual[n * 3 + 1] * cur[1]) / r
                })
                .sum();
            sum / length
        }
    }
}

/// Extracts one time-series row from the current simulation state.
pub fn extract_channels(
    sim: &Simulation,
    probes: &Probes,
    record: &StepRecord,
) -> Result<[f64; CHANNELS.len()], SimError> {
    let n_gp = sim.disc.n_gp() as f64;
    let mut h_min = f64::INFINITY;
    let mut h_sum = 0.0;
    let mut lam_sum = 0.0;
    let mut lam_max = 0.0f64;
    let mut d_max = 0.0f64;
    let mut jg1_sum = 0.0;
    let mut jg2_sum = 0.0;
    let mut qg1_sum = 0.0;
    let mut rg1_sum = 0.0;
    for e in 0..sim.disc.mesh.n_elems() {
        let params = sim.disc.region_of(e);
        for g in 0..GP_PER_ELEM {
            let s = &sim.states[e * GP_PER_ELEM + g];
            let h = healing_parameter(s);
            h_min = h_min.min(h);
            h_sum += h;
            lam_sum += s.lambda;
            lam_max = lam_max.max(s.lambda);
            d_max = d_max.max(s.d);
            jg1_sum += s.j_g1;
            jg2_sum += s.j_g2;
            let (f, phi, _) = gp_kinematics(&sim.disc, &sim.u, e, g);
            let mut st = *s;
            st.phi = phi;
            let forces = driving_forces(
                &f,
                &st,
                (&params.mat1, &params.mat2),
                &params.healing,
                &sim.disc.nl,
            )?;
            qg1_sum += crate::healing::spherical_drive(&forces.q_g1).abs();
            rg1_sum += s.captured_r_g.map(|c| c.0).or(params.healing.r_g1).unwrap_or(0.0);
        }
    }

    let probe_node = probes.probe_node;
    let u_probe = match probes.probe {
        ProbeMeasure::DisplacementY => sim.u[probe_node * 3 + 1],
        ProbeMeasure::DisplacementMagnitude => {
            let ux = sim.u[probe_node * 3];
            let uy = sim.u[probe_node * 3 + 1];
            (ux * ux + uy * uy).sqrt()
        }
    };

    let r_t = if probes.outer_nodes.is_empty() {
        1.0
    } else {
        let c = probes.outer_center;
        let mean: f64 = probes
            .outer_nodes
            .iter()
            .map(|&n| {
                let x = sim.disc.mesh.nodes[n];
                let cur = [x[0] + sim.u[n * 3] - c[0], x[1] + sim.u[n * 3 + 1] - c[1]];
                (cur[0] * cur[0] + cur[1] * cur[1]).sqrt()
            })
            .sum::<f64>()
            / probes.outer_nodes.len() as f64;
        mean / probes.outer_radius0
    };

    Ok([
        record.t,
        boundary_stress(sim, probes, &record.residual),
        u_probe,
        h_min,
        h_sum / n_gp,
        lam_sum / n_gp,
        lam_max,
        d_max,
        jg1_sum / n_gp,
        jg2_sum / n_gp,
        qg1_sum / n_gp,
        rg1_sum / n_gp,
        r_t,
        record.dissipation_total,
        record.newton.iterations as f64,
        record.clamps as f64,
    ])
}

/// Reference-coordinate location and region of the worst (minimum) healing
/// parameter over all quadrature points.
pub fn min_h_location(sim: &Simulation) -> ([f64; 2], usize) {
    let mut best = f64::INFINITY;
    let mut loc = [0.0, 0.0];
    let mut region = 0;
    for e in 0..sim.disc.mesh.n_elems() {
        for g in 0..GP_PER_ELEM {
            let s = &sim.states[e * GP_PER_ELEM + g];
            let h = healing_parameter(s);
            if h < best {
                best = h;
                let qc = &sim.disc.cache[e][g];
                let mut x = [0.0, 0.0];
                for (i, &node) in sim.disc.mesh.quads[e].iter().enumerate() {
                    x[0] += qc.n[i] * sim.disc.mesh.nodes[node][0];
                    x[1] += qc.n[i] * sim.disc.mesh.nodes[node][1];
                }
                loc = x;
                region = sim.disc.mesh.region[e];
            }
        }
    }
    (loc, region)
}

/// Executes the scenario, collecting the time series and writing the
/// requested artifacts.
pub fn run_scenario(spec: &mut ScenarioSpec, plan: &OutputPlan) -> Result<RunResult, SimError> {
    if let Some(dir) = &plan.dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut log: Option<std::fs::File> = match &plan.dir {
        Some(dir) => Some(std::fs::File::create(dir.join("run.log"))?),
        None => None,
    };
    let mut snapshot_times = plan.snapshot_times.clone();
    snapshot_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_snapshot = 0usize;
    let mut snapshot_count = 0usize;
    let mut matrix_dumped = !plan.dump_first_matrix;

    let mut rows: Vec<[f64; CHANNELS.len()]> = Vec::new();
    let region_names = spec.region_names.clone();
    let probes = spec.probes.clone();
    let dir = plan.dir.clone();

    let march_outcome = {
        let mut on_step = |sim: &Simulation, record: &StepRecord| -> Result<(), SimError> {
            let row = extract_channels(sim, &probes, record)?;
            if let Some(log) = log.as_mut() {
                writeln!(
                    log,
                    "t={:<10.4} iters={} residual={:.3e} dissipation={:.6e} clamps={} substeps={}",
                    record.t,
                    record.newton.iterations,
                    record.newton.final_norm,
                    record.dissipation_total,
                    record.clamps,
                    record.substeps
                )?;
            }
            rows.push(row);
            if let Some(dir) = &dir {
                if !matrix_dumped {
                    let k = assemble_tangent(&sim.disc, &sim.u, &sim.states)?;
                    let mut f = std::fs::File::create(dir.join("system_matrix.txt"))?;
                    k.write_triplets(&mut f)?;
                    matrix_dumped = true;
                }
                while next_snapshot < snapshot_times.len()
                    && record.t >= snapshot_times[next_snapshot] - 1e-9
                {
                    let path = dir.join(format!("snapshot_t{:08.2}.vtk", record.t));
                    output::write_vtk(&path, sim, &region_names)?;
                    next_snapshot += 1;
                    snapshot_count += 1;
                }
            }
            Ok(())
        };
        time_march(&mut spec.sim, &mut on_step)
    };

    let diagnostics = match march_outcome {
        Ok(d) => d,
        Err(e) => {
            if let Some(log) = log.as_mut() {
                let _ = writeln!(log, "FAILED: {e}");
            }
            return Err(e);
        }
    };

    // always leave a final field snapshot
    if let Some(dir) = &plan.dir {
        let path = dir.join(format!("snapshot_t{:08.2}.vtk", spec.sim.t));
        output::write_vtk(&path, &spec.sim, &spec.region_names)?;
        snapshot_count += 1;
        let mut csv = std::fs::File::create(dir.join("timeseries.csv"))?;
        output::write_csv(&mut csv, &CHANNELS, &rows)?;
        if let Some(log) = log.as_mut() {
            writeln!(
                log,
                "done: {} increments, {} snapshots, clamps={}, min_dissipation={:.3e}",
                rows.len(),
                snapshot_count,
                diagnostics.total_clamps,
                diagnostics.min_dissipation
            )?;
        }
    }

    Ok(RunResult { rows, diagnostics })
}

/// Marks every constrained dof once, merging duplicate declarations and
/// rejecting contradictory values.
pub(crate) fn finalize_bcs(
    dofs: &mut DofMap,
    declared: Vec<(usize, f64)>,
) -> Result<Vec<(usize, f64)>, SimError> {
    let mut merged: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
    for (dof, v) in declared {
        if let Some(old) = merged.insert(dof, v) {
            if (old - v).abs() > 1e-12 * v.abs().max(1.0) {
                return Err(SimError::mesh(format!(
                    "conflicting boundary values at dof {dof}: {old} vs {v}"
                )));
            }
        }
    }
    let bc: Vec<(usize, f64)> = merged.into_iter().collect();
    for &(dof, _) in &bc {
        dofs.constrain(dof / 3, dof % 3)?;
    }
    dofs.finalize();
    Ok(bc)
}
