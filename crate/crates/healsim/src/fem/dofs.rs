//! Global degree-of-freedom numbering for the two-field discretization.
//!
//! Every node carries three unknowns: the two displacement components and
//! the nonlocal damage scalar. Dirichlet conditions are handled by
//! restricting the solve to free dofs; reactions are read off the full
//! residual at the constrained ones.

use crate::error::SimError;

pub const DOF_UX: usize = 0;
pub const DOF_UY: usize = 1;
pub const DOF_PHI: usize = 2;
pub const DOFS_PER_NODE: usize = 3;

#[derive(Clone, Debug)]
pub struct DofMap {
    n_nodes: usize,
    constrained: Vec<bool>,
    /// global dof → index into the free vector (usize::MAX if constrained)
    free_index: Vec<usize>,
    /// free index → global dof
    free_dofs: Vec<usize>,
}

impl DofMap {
    pub fn new(n_nodes: usize) -> Self {
        let n = n_nodes * DOFS_PER_NODE;
        DofMap {
            n_nodes,
            constrained: vec![false; n],
            free_index: (0..n).collect(),
            free_dofs: (0..n).collect(),
        }
    }

    #[inline]
    pub fn global(node: usize, comp: usize) -> usize {
        node * DOFS_PER_NODE + comp
    }

    pub fn n_total(&self) -> usize {
        self.n_nodes * DOFS_PER_NODE
    }

    pub fn n_free(&self) -> usize {
        self.free_dofs.len()
    }

    pub fn constrain(&mut self, node: usize, comp: usize) -> Result<(), SimError> {
        let dof = Self::global(node, comp);
        if dof >= self.constrained.len() {
            return Err(SimError::mesh(format!("dof {dof} out of range")));
        }
        self.constrained[dof] = true;
        Ok(())
    }

    /// Recomputes the free-dof indexing after all constraints are declared.
    pub fn finalize(&mut self) {
        self.free_dofs.clear();
        self.free_index = vec![usize::MAX; self.constrained.len()];
        for (dof, &c) in self.constrained.iter().enumerate() {
            if !c {
                self.free_index[dof] = self.free_dofs.len();
                self.free_dofs.push(dof);
            }
        }
    }

    #[inline]
    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constrained[dof]
    }

    #[inline]
    pub fn free_of(&self, dof: usize) -> Option<usize> {
        if self.constrained[dof] {
            None
        } else {
            Some(self.free_index[dof])
        }
    }

    pub fn free_dofs(&self) -> &[usize] {
        &self.free_dofs
    }

    /// Gathers the free part of a full-length vector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free_dofs.iter().map(|&d| full[d]).collect()
    }

    /// Scatter-adds a free-length vector into a full-length one.
    pub fn expand_into(&self, free: &[f64], full: &mut [f64]) {
        for (i, &d) in self.free_dofs.iter().enumerate() {
            full[d] += free[i];
        }
    }
}
