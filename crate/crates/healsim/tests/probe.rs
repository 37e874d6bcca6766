// scratch probe for tuning scenario defaults; will be removed
use healsim::healing::GSpec;
use healsim::scenarios::{self, uniaxial, OutputPlan, ScenarioConfig, ScenarioKind};

fn run(cfg: &ScenarioConfig) -> scenarios::RunResult {
    let mut spec = scenarios::build_scenario(cfg).unwrap();
    scenarios::run_scenario(&mut spec, &OutputPlan::default()).unwrap()
}

#[test]
#[ignore]
fn probe_growth_ordering() {
    let mut plateaus = Vec::new();
    for t_cap in [10.0, 20.0, 50.0] {
        let cfg = uniaxial::growth_only(0.01, t_cap);
        let r = run(&cfg);
        let sigma = r.last("sigma");
        let gap = (r.last("qg1_norm") - r.last("rg1")).abs() / r.last("rg1");
        let uy = r.last("u_probe");
        println!(
            "capture t={t_cap}: rg1={:.5} sigma_end={:.5} uy_end={:.5} rel_gap={:.3e}",
            r.last("rg1"),
            sigma,
            uy,
            gap
        );
        plateaus.push((sigma, uy));
    }
    println!("plateaus: {plateaus:?}");
}

#[test]
#[ignore]
fn probe_remodeling_big_stretch() {
    for (m_rm, eta, g) in [
        (0.01, 1.0, 1.0),
        (0.02, 1.0, 1.0),
        (0.05, 1.0, 1.0),
        (0.01, 0.5, 1.0),
    ] {
        let mut cfg = uniaxial::remodeling_only(m_rm, eta);
        cfg.ramp_target = 0.8;
        cfg.duration = 2000.0;
        cfg.healing.g = GSpec::Constant(g);
        let r = run(&cfg);
        let h = r.channel("H_min");
        let t = r.channel("time");
        let h_post = h[(100.0 / 0.25) as usize - 1];
        let t_cross = t
            .iter()
            .zip(&h)
            .find(|(_, &hv)| hv >= 0.9)
            .map(|(tt, _)| *tt)
            .unwrap_or(-1.0);
        println!(
            "m_rm={m_rm} eta={eta} g={g}: H_post={:.4} d_max={:.4} lambda_end={:.6} H_end={:.6} t(H=0.9)={:.1} sigma_end={:.4}",
            h_post,
            r.last("d_max"),
            r.last("lambda_max"),
            r.last("H_min"),
            t_cross,
            r.last("sigma")
        );
        println!("  diag clamps={} min_diss={:.2e}", r.diagnostics.total_clamps, r.diagnostics.min_dissipation);
    }
}

#[test]
#[ignore]
fn probe_dt_convergence() {
    let mut vals = Vec::new();
    for dt in [0.25, 0.125] {
        let mut cfg = uniaxial::growth_only(0.01, 10.0);
        cfg.dt = dt;
        let r = run(&cfg);
        vals.push(r.last("sigma"));
    }
    println!("sigma plateau dt=0.25: {:.6}, dt=0.125: {:.6}, rel diff {:.3e}",
        vals[0], vals[1], (vals[0]-vals[1]).abs()/vals[1].abs());
}

#[test]
#[ignore]
fn probe_open_hole_coarse() {
    let mut cfg = ScenarioConfig::default_for(ScenarioKind::OpenHole);
    cfg.duration = 300.0;
    let t0 = std::time::Instant::now();
    let r = run(&cfg);
    println!(
        "open-hole coarse: rows={} elapsed={:?} sigma_end={:.5} Hmin_end={:.4} d_max={:.3} lambda_max={:.3} clamps={}",
        r.rows.len(),
        t0.elapsed(),
        r.last("sigma"),
        r.last("H_min"),
        r.last("d_max"),
        r.last("lambda_max"),
        r.diagnostics.total_clamps,
    );
    let iters = r.channel("newton_iters");
    println!("max newton iters: {}", iters.iter().fold(0.0f64, |m, &v| m.max(v)));
}
