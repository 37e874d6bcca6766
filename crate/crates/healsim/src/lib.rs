//! Finite-strain simulator for damage, growth, remodeling and healing of
//! soft biological tissue.
//!
//! The library couples a two-field finite-element solver (displacement plus
//! a nonlocal damage field) with explicit thermodynamic evolution of four
//! internal variables per quadrature point: the growth volume ratios of the
//! original and newly deposited tissue, the new-tissue volume fraction, and
//! a damage variable. Built-in scenario generators cover uniaxial tension of
//! a single element, a quarter open-hole plate, and the cross-section of an
//! atherosclerotic artery under balloon inflation.

pub mod config;
pub mod error;
pub mod fem;
pub mod healing;
pub mod kinematics;
pub mod material;
pub mod output;
pub mod scenarios;
pub mod sweep;

pub use error::SimError;
