//! Two-field finite-element machinery: bilinear quads with 2×2 Gauss
//! quadrature, displacement + nonlocal damage dofs, banded direct solver,
//! Newton iteration and the staggered time driver.

pub mod assemble;
pub mod dofs;
pub mod linsolve;
pub mod march;
pub mod mesh;
pub mod newton;
pub mod shape;

pub use assemble::{assemble_residual, assemble_tangent, Discretization, RegionParams};
pub use dofs::{DofMap, DOFS_PER_NODE, DOF_PHI, DOF_UX, DOF_UY};
pub use linsolve::{linear_solve, Coo};
pub use march::{
    time_march, CaptureRule, GridSegment, MarchDiagnostics, Schedule, Simulation, StepRecord,
};
pub use mesh::{Mesh, QuadCache, GP_PER_ELEM};
pub use newton::{newton_solve, NewtonReport, SolveControls};
