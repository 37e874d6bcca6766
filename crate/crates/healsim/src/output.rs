//! File outputs: lossless CSV time series and legacy ASCII VTK snapshots.

use crate::error::SimError;
use crate::fem::{Simulation, DOF_PHI, GP_PER_ELEM};
use crate::healing::healing_parameter;
use crate::material::composite_stress_state;
use crate::material::von_mises;
use std::io::Write;
use std::path::Path;

/// Comma-separated values with a header row and 17 significant digits, so
/// baselines round-trip losslessly.
pub fn write_csv<const N: usize>(
    w: &mut impl Write,
    channels: &[&str; N],
    rows: &[[f64; N]],
) -> Result<(), SimError> {
    writeln!(w, "{}", channels.join(","))?;
    for row in rows {
        let mut line = String::with_capacity(N * 26);
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Legacy ASCII VTK unstructured grid: point data carries displacement and
/// the nonlocal field, cell data the region id and element-averaged
/// internal variables plus the healing parameter and von Mises stress.
pub fn write_vtk(path: &Path, sim: &Simulation, region_names: &[&str]) -> Result<(), SimError> {
    let mesh = &sim.disc.mesh;
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str(&format!(
        "tissue healing snapshot t={:.6} regions={}\n",
        sim.t,
        region_names.join("/")
    ));
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    out.push_str(&format!("POINTS {} double\n", mesh.n_nodes()));
    for x in &mesh.nodes {
        out.push_str(&format!("{:.9e} {:.9e} 0.0\n", x[0], x[1]));
    }
    out.push_str(&format!("CELLS {} {}\n", mesh.n_elems(), 5 * mesh.n_elems()));
    for q in &mesh.quads {
        out.push_str(&format!("4 {} {} {} {}\n", q[0], q[1], q[2], q[3]));
    }
    out.push_str(&format!("CELL_TYPES {}\n", mesh.n_elems()));
    for _ in 0..mesh.n_elems() {
        out.push_str("9\n");
    }

    out.push_str(&format!("POINT_DATA {}\n", mesh.n_nodes()));
    out.push_str("VECTORS displacement double\n");
    for n in 0..mesh.n_nodes() {
        out.push_str(&format!("{:.9e} {:.9e} 0.0\n", sim.u[n * 3], sim.u[n * 3 + 1]));
    }
    out.push_str("SCALARS phi double 1\nLOOKUP_TABLE default\n");
    for n in 0..mesh.n_nodes() {
        out.push_str(&format!("{:.9e}\n", sim.u[n * 3 + DOF_PHI]));
    }

    out.push_str(&format!("CELL_DATA {}\n", mesh.n_elems()));
    out.push_str("SCALARS region int 1\nLOOKUP_TABLE default\n");
    for &r in &mesh.region {
        out.push_str(&format!("{r}\n"));
    }

    // element averages of the per-point history
    let mut h = vec![0.0f64; mesh.n_elems()];
    let mut lambda = vec![0.0f64; mesh.n_elems()];
    let mut jg1 = vec![0.0f64; mesh.n_elems()];
    let mut jg2 = vec![0.0f64; mesh.n_elems()];
    let mut dmg = vec![0.0f64; mesh.n_elems()];
    let mut mises = vec![0.0f64; mesh.n_elems()];
    for e in 0..mesh.n_elems() {
        let params = sim.disc.region_of(e);
        for g in 0..GP_PER_ELEM {
            let s = &sim.states[e * GP_PER_ELEM + g];
            h[e] += healing_parameter(s) / GP_PER_ELEM as f64;
            lambda[e] += s.lambda / GP_PER_ELEM as f64;
            jg1[e] += s.j_g1 / GP_PER_ELEM as f64;
            jg2[e] += s.j_g2 / GP_PER_ELEM as f64;
            dmg[e] += s.d / GP_PER_ELEM as f64;
            let (f, _, _) = crate::fem::assemble::gp_kinematics(&sim.disc, &sim.u, e, g);
            if let Ok(stress) = composite_stress_state(
                &f,
                s.j_g1,
                s.j_g2,
                s.lambda,
                s.d,
                &params.mat1,
                &params.mat2,
            ) {
                mises[e] += von_mises(&stress.cauchy) / GP_PER_ELEM as f64;
            }
        }
    }
    for (name, field) in [
        ("H", &h),
        ("lambda", &lambda),
        ("Jg1", &jg1),
        ("Jg2", &jg2),
        ("d", &dmg),
        ("von_mises", &mises),
    ] {
        out.push_str(&format!("SCALARS {name} double 1\nLOOKUP_TABLE default\n"));
        for v in field {
            out.push_str(&format!("{v:.9e}\n"));
        }
    }

    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_full_precision() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["time", "value"], &[[0.1, 1.0 / 3.0]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "time,value");
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.0000000000000001e-1,3.3333333333333331e-1"), "{row}");
    }
}
