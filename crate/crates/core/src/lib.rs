//! Mode-III crack opening with strain-gradient (Hilgers–Pipkin) surface
//! elasticity on the crack faces.
//!
//! The crate is organised bottom-up:
//!
//! * [`kinematics`] and [`surface_energy`] cover convected-surface geometry
//!   and the quadratic surface energies with their stress resultants.
//! * [`greens`] and [`hilbert`] supply the Green function of the clamped
//!   fourth-order operator and the Hilbert-transform machinery.
//! * [`fredholm`] solves the boundary integral equation for the crack
//!   opening profile, with a Galerkin energy minimiser as cross-check.
//! * [`field`] rebuilds the half-plane displacement from the profile.

pub mod diff;
pub mod error;
pub mod field;
pub mod fredholm;
pub mod greens;
pub mod hilbert;
pub mod kinematics;
pub mod poly;
pub mod quadrature;
pub mod surface_energy;

pub use error::{Error, Result};
pub use fredholm::{
    nondimensionalize, solve_galerkin_oracle, solve_nystrom, BoundaryProfile, CrackParams,
    PhysicalInputs, SolveReport,
};
pub use hilbert::GridFunction;
