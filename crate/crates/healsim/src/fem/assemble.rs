//! Residual and tangent assembly for the coupled displacement / nonlocal
//! damage discretization.
//!
//! Everything is integrated in the reference configuration. The mechanical
//! block uses the composite first Piola–Kirchhoff stress and its exact
//! tangent, which carries the material and the geometric stiffness in one
//! object. The nonlocal block is linear in φ with the state-dependent
//! weight (1−λ) J_g1; with the internal variables frozen during a solve the
//! two fields decouple in the tangent, so the off-diagonal blocks vanish
//! identically and are not stored.

use crate::error::SimError;
use crate::fem::dofs::{DofMap, DOFS_PER_NODE, DOF_PHI};
use crate::fem::linsolve::Coo;
use crate::fem::mesh::{Mesh, QuadCache, GP_PER_ELEM};
use crate::healing::{HealingParams, InternalState, NonlocalParams};
use crate::kinematics::Tensor2;
use crate::material::{composite_pk1, composite_pk1_tangent, CompositeWeights, NeoHookeanParams};

/// Material data of one mesh region: the two constituents plus the
/// evolution constants that apply there.
#[derive(Clone, Debug)]
pub struct RegionParams {
    pub mat1: NeoHookeanParams,
    pub mat2: NeoHookeanParams,
    pub healing: HealingParams,
}

/// Mesh, quadrature cache, dof numbering and material data of one problem.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: Mesh,
    pub cache: Vec<[QuadCache; GP_PER_ELEM]>,
    pub dofs: DofMap,
    pub regions: Vec<RegionParams>,
    pub nl: NonlocalParams,
    /// External nodal forces (body force / traction resultants); all
    /// built-in scenarios leave this zero.
    pub external_forces: Vec<f64>,
}

impl Discretization {
    pub fn new(
        mesh: Mesh,
        dofs: DofMap,
        regions: Vec<RegionParams>,
        nl: NonlocalParams,
    ) -> Result<Self, SimError> {
        mesh.validate()?;
        let cache = mesh.quadrature_cache()?;
        let n = dofs.n_total();
        for &r in &mesh.region {
            if r >= regions.len() {
                return Err(SimError::mesh(format!("element region {r} has no parameters")));
            }
        }
        Ok(Discretization {
            mesh,
            cache,
            dofs,
            regions,
            nl,
            external_forces: vec![0.0; n],
        })
    }

    pub fn n_gp(&self) -> usize {
        self.mesh.n_elems() * GP_PER_ELEM
    }

    pub fn region_of(&self, e: usize) -> &RegionParams {
        &self.regions[self.mesh.region[e]]
    }
}

/// Deformation gradient (plane strain), nonlocal field value and its
/// reference gradient at one quadrature point.
pub fn gp_kinematics(
    disc: &Discretization,
    u: &[f64],
    e: usize,
    g: usize,
) -> (Tensor2, f64, [f64; 2]) {
    let quad = &disc.mesh.quads[e];
    let qc = &disc.cache[e][g];
    let mut f = Tensor2::identity();
    let mut phi = 0.0;
    let mut grad_phi = [0.0f64; 2];
    for (i, &node) in quad.iter().enumerate() {
        let base = node * DOFS_PER_NODE;
        for a in 0..2 {
            for b in 0..2 {
                f[(a, b)] += u[base + a] * qc.grad[i][b];
            }
        }
        let p = u[base + DOF_PHI];
        phi += qc.n[i] * p;
        grad_phi[0] += qc.grad[i][0] * p;
        grad_phi[1] += qc.grad[i][1] * p;
    }
    (f, phi, grad_phi)
}

/// Assembles the full-length residual (internal minus external forces) over
/// all dofs, constrained ones included; the entries at constrained dofs are
/// the negated reactions.
pub fn assemble_residual(
    disc: &Discretization,
    u: &[f64],
    states: &[InternalState],
) -> Result<Vec<f64>, SimError> {
    let mut r = vec![0.0f64; disc.dofs.n_total()];
    for e in 0..disc.mesh.n_elems() {
        let quad = &disc.mesh.quads[e];
        let params = disc.region_of(e);
        for g in 0..GP_PER_ELEM {
            let qc = &disc.cache[e][g];
            let s = &states[e * GP_PER_ELEM + g];
            let (f, phi, grad_phi) = gp_kinematics(disc, u, e, g);
            let w = CompositeWeights::from_state(s.lambda, s.d);
            let pk = composite_pk1(&f, s.j_g1, s.j_g2, w, &params.mat1, &params.mat2)
                .map_err(|err| SimError::solver(format!("element {e}: {err}")))?;
            let wgt_nl = (1.0 - s.lambda) * s.j_g1;
            let mismatch = phi - disc.nl.gamma_d * s.d;
            for (i, &node) in quad.iter().enumerate() {
                let base = node * DOFS_PER_NODE;
                for a in 0..2 {
                    let mut v = 0.0;
                    for b in 0..2 {
                        v += pk[(a, b)] * qc.grad[i][b];
                    }
                    r[base + a] += qc.wdet * v;
                }
                let flux = disc.nl.c_d * (grad_phi[0] * qc.grad[i][0] + grad_phi[1] * qc.grad[i][1]);
                let source = disc.nl.beta_d * mismatch * qc.n[i];
                r[base + DOF_PHI] += qc.wdet * wgt_nl * (flux + source);
            }
        }
    }
    for (ri, fi) in r.iter_mut().zip(&disc.external_forces) {
        *ri -= fi;
    }
    Ok(r)
}

/// Assembles the full tangent as coordinate triplets over all dofs.
pub fn assemble_tangent(
    disc: &Discretization,
    u: &[f64],
    states: &[InternalState],
) -> Result<Coo, SimError> {
    let mut k = Coo::new(disc.dofs.n_total());
    for e in 0..disc.mesh.n_elems() {
        let quad = &disc.mesh.quads[e];
        let params = disc.region_of(e);
        for g in 0..GP_PER_ELEM {
            let qc = &disc.cache[e][g];
            let s = &states[e * GP_PER_ELEM + g];
            let (f, _, _) = gp_kinematics(disc, u, e, g);
            let w = CompositeWeights::from_state(s.lambda, s.d);
            let tangent =
                composite_pk1_tangent(&f, s.j_g1, s.j_g2, w, &params.mat1, &params.mat2)
                    .map_err(|err| SimError::solver(format!("element {e}: {err}")))?;
            let wgt_nl = (1.0 - s.lambda) * s.j_g1;
            for (i, &node_i) in quad.iter().enumerate() {
                let row = node_i * DOFS_PER_NODE;
                for (j, &node_j) in quad.iter().enumerate() {
                    let col = node_j * DOFS_PER_NODE;
                    for a in 0..2 {
                        for c in 0..2 {
                            let mut v = 0.0;
                            for b in 0..2 {
                                for d in 0..2 {
                                    v += tangent.get(a, b, c, d) * qc.grad[i][b] * qc.grad[j][d];
                                }
                            }
                            k.add(row + a, col + c, qc.wdet * v);
                        }
                    }
                    let diff = disc.nl.c_d
                        * (qc.grad[i][0] * qc.grad[j][0] + qc.grad[i][1] * qc.grad[j][1]);
                    let mass = disc.nl.beta_d * qc.n[i] * qc.n[j];
                    k.add(row + DOF_PHI, col + DOF_PHI, qc.wdet * wgt_nl * (diff + mass));
                }
            }
        }
    }
    Ok(k)
}

/// Restricts a full matrix to the free dofs for the Newton update.
pub fn reduce_to_free(disc: &Discretization, full: &Coo) -> Coo {
    let mut k = Coo::new(disc.dofs.n_free());
    for &(i, j, v) in &full.entries {
        if let (Some(fi), Some(fj)) = (disc.dofs.free_of(i), disc.dofs.free_of(j)) {
            k.add(fi, fj, v);
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::healing::GSpec;
    use std::collections::BTreeMap;

    pub fn unit_region(mu_ref: f64) -> RegionParams {
        let mat = NeoHookeanParams { mu: 1.0, kappa: 1.0 };
        RegionParams {
            mat1: mat,
            mat2: mat,
            healing: HealingParams {
                m_g1: 0.0,
                m_g2: 0.0,
                r_g1: None,
                r_g2: None,
                m_rm: 0.0,
                r_rm: 0.0,
                eta: 0.0,
                m_d: 0.0,
                r_d: 0.2,
                g_spec: GSpec::Constant(0.001),
                mu_ref,
            },
        }
    }

    fn square_disc(beta_d: f64) -> Discretization {
        let mesh = Mesh {
            nodes: vec![[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]],
            quads: vec![[0, 1, 2, 3]],
            region: vec![0],
            node_sets: BTreeMap::new(),
        };
        let mut dofs = DofMap::new(4);
        dofs.finalize();
        Discretization::new(
            mesh,
            dofs,
            vec![unit_region(1.0)],
            NonlocalParams { c_d: 1.0, beta_d, gamma_d: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn virgin_unloaded_state_has_zero_residual() {
        let disc = square_disc(0.001);
        let u = vec![0.0; disc.dofs.n_total()];
        let states = vec![InternalState::virgin(); disc.n_gp()];
        let r = assemble_residual(&disc, &u, &states).unwrap();
        assert!(r.iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn uniform_damage_drives_nonlocal_field_upward() {
        // with φ = 0 and d > 0 the nonlocal residual must push φ toward γ_d d;
        // hand assembly: R_φ[I] = −β_d γ_d d ∫N_I = −β_d d (A/4) per node
        let disc = square_disc(2.0);
        let u = vec![0.0; disc.dofs.n_total()];
        let mut states = vec![InternalState::virgin(); disc.n_gp()];
        for s in &mut states {
            s.d = 0.3;
        }
        let r = assemble_residual(&disc, &u, &states).unwrap();
        let expected = -2.0 * 0.3 * 25.0; // β_d · d · area/4
        for node in 0..4 {
            let got = r[node * DOFS_PER_NODE + DOF_PHI];
            assert!((got - expected).abs() < 1e-12, "node {node}: {got}");
        }
    }

    #[test]
    fn affine_displacement_gives_uniform_stress_resultants() {
        // single element under affine boundary displacement: the residual is
        // exactly the nodal resultant of one uniform stress state
        let disc = square_disc(0.001);
        let grad = [[0.08, 0.03], [-0.02, -0.05]];
        let mut u = vec![0.0; disc.dofs.n_total()];
        for (n, x) in disc.mesh.nodes.iter().enumerate() {
            u[n * DOFS_PER_NODE] = grad[0][0] * x[0] + grad[0][1] * x[1];
            u[n * DOFS_PER_NODE + 1] = grad[1][0] * x[0] + grad[1][1] * x[1];
        }
        let states = vec![InternalState::virgin(); disc.n_gp()];
        let r = assemble_residual(&disc, &u, &states).unwrap();

        let mut f = Tensor2::identity();
        for a in 0..2 {
            for b in 0..2 {
                f[(a, b)] += grad[a][b];
            }
        }
        let w = CompositeWeights::from_state(0.0, 0.0);
        let p = &disc.regions[0];
        let pk = composite_pk1(&f, 1.0, 1.0, w, &p.mat1, &p.mat2).unwrap();
        for (i, &node) in disc.mesh.quads[0].iter().enumerate() {
            for a in 0..2 {
                let mut expected = 0.0;
                for g in 0..GP_PER_ELEM {
                    let qc = &disc.cache[0][g];
                    for b in 0..2 {
                        expected += qc.wdet * pk[(a, b)] * qc.grad[i][b];
                    }
                }
                let got = r[node * DOFS_PER_NODE + a];
                assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1.0));
            }
        }
    }

    #[test]
    fn tangent_has_no_field_coupling_blocks() {
        let disc = square_disc(1.0);
        let mut u = vec![0.0; disc.dofs.n_total()];
        for (i, v) in u.iter_mut().enumerate() {
            *v = 0.01 * ((i * 7 % 11) as f64 - 5.0);
        }
        let mut states = vec![InternalState::virgin(); disc.n_gp()];
        for s in &mut states {
            s.d = 0.4;
            s.lambda = 0.0;
        }
        let k = assemble_tangent(&disc, &u, &states).unwrap();
        for &(i, j, v) in &k.entries {
            let i_is_phi = i % DOFS_PER_NODE == DOF_PHI;
            let j_is_phi = j % DOFS_PER_NODE == DOF_PHI;
            if i_is_phi != j_is_phi {
                assert_eq!(v, 0.0, "coupling entry ({i},{j})");
            }
        }
    }
}
