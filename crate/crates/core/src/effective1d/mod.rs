//! Quasi-one-dimensional reduction of confined diffusion.
//!
//! After local equilibration across the section, the line density `φ(s)` obeys
//! `∂φ/∂t = ∂ₛ D_eff(s) ∂ₛ φ` with `D_eff = D ⟨1/(1 − κ q²)⟩`, the section average of the
//! inverse metric length factor. Inner fibres of a bent tube are shorter, so the
//! effective coefficient always exceeds `D`.

mod deff;
mod solver;
mod static_sol;

pub use deff::{
    bent_disk_partition, deff_circular, deff_quadrangular, deff_quadrature, parallel_conductance,
    DeffProfile, SectionShape, SERIES_SWITCH,
};
pub use solver::{solve, Boundary, Field1D, Grid1D, ThetaScheme, MIN_CELLS};
pub use static_sol::{static_solution, StaticBc, StaticSolution};
