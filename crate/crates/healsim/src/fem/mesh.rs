//! 2D quadrilateral mesh with region tags and named boundary sets.

use crate::error::SimError;
use crate::fem::shape::{shape_eval, GAUSS_2X2};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Mesh {
    /// Reference coordinates (mm).
    pub nodes: Vec<[f64; 2]>,
    /// 4-node connectivity, counter-clockwise.
    pub quads: Vec<[usize; 4]>,
    /// Material region id per element.
    pub region: Vec<usize>,
    /// Named node groups for boundary conditions and probes.
    pub node_sets: BTreeMap<String, Vec<usize>>,
}

/// Per-quadrature-point reference geometry: shape values, shape gradients
/// with respect to the reference coordinates, and the integration weight
/// (Gauss weight times the reference Jacobian determinant).
#[derive(Clone, Copy, Debug)]
pub struct QuadCache {
    pub n: [f64; 4],
    pub grad: [[f64; 2]; 4],
    pub wdet: f64,
}

pub const GP_PER_ELEM: usize = 4;

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elems(&self) -> usize {
        self.quads.len()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.region.len() != self.quads.len() {
            return Err(SimError::mesh("region tags and elements disagree in length".to_string()));
        }
        for (e, quad) in self.quads.iter().enumerate() {
            for &n in quad {
                if n >= self.nodes.len() {
                    return Err(SimError::mesh(format!(
                        "element {e} references missing node {n}"
                    )));
                }
            }
        }
        for set in self.node_sets.values() {
            for &n in set {
                if n >= self.nodes.len() {
                    return Err(SimError::mesh(format!("node set references missing node {n}")));
                }
            }
        }
        // positive Jacobian at every quadrature point
        self.quadrature_cache()?;
        Ok(())
    }

    /// Precomputes shape data at all Gauss points of all elements.
    /// Fails on inverted or degenerate elements, naming the element.
    pub fn quadrature_cache(&self) -> Result<Vec<[QuadCache; GP_PER_ELEM]>, SimError> {
        let mut out = Vec::with_capacity(self.quads.len());
        for (e, quad) in self.quads.iter().enumerate() {
            let xs: Vec<[f64; 2]> = quad.iter().map(|&n| self.nodes[n]).collect();
            let mut gps = [QuadCache { n: [0.0; 4], grad: [[0.0; 2]; 4], wdet: 0.0 }; GP_PER_ELEM];
            for (g, (xi, w)) in GAUSS_2X2.iter().enumerate() {
                let (n, dn) = shape_eval(*xi);
                // reference Jacobian J_ab = ∂X_a/∂ξ_b
                let mut jac = [[0.0f64; 2]; 2];
                for i in 0..4 {
                    for a in 0..2 {
                        for b in 0..2 {
                            jac[a][b] += xs[i][a] * dn[i][b];
                        }
                    }
                }
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                if det <= 0.0 {
                    return Err(SimError::mesh(format!(
                        "element {e} is inverted or degenerate (jacobian {det:.3e} at gauss point {g})"
                    )));
                }
                let inv = [
                    [jac[1][1] / det, -jac[0][1] / det],
                    [-jac[1][0] / det, jac[0][0] / det],
                ];
                let mut grad = [[0.0f64; 2]; 4];
                for i in 0..4 {
                    // ∂N/∂X_a = ∂N/∂ξ_b (J⁻¹)_ba
                    for a in 0..2 {
                        grad[i][a] = dn[i][0] * inv[0][a] + dn[i][1] * inv[1][a];
                    }
                }
                gps[g] = QuadCache { n, grad, wdet: w * det };
            }
            out.push(gps);
        }
        Ok(out)
    }

    /// Area of one element from its quadrature weights.
    pub fn element_area(&self, cache: &[[QuadCache; GP_PER_ELEM]], e: usize) -> f64 {
        cache[e].iter().map(|g| g.wdet).sum()
    }

    pub fn node_set(&self, name: &str) -> Result<&[usize], SimError> {
        self.node_sets
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| SimError::mesh(format!("missing node set '{name}'")))
    }
}
