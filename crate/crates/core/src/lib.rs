//! Diffusion of Brownian particles confined to a thin winding tube.
//!
//! The crate reduces three-dimensional confined diffusion to a quasi-one-dimensional
//! equation along the tube centerline,
//!
//! ```text
//! ∂φ/∂t = ∂ₛ D_eff(s) ∂ₛ φ,   D_eff = D ⟨1 / (1 − κ q²)⟩,
//! ```
//!
//! and cross-validates it against a 3D Brownian-dynamics simulation:
//!
//! - [`geometry`]: arc-length curves, Frenet–Serret frames, tube metric, embedding and projection.
//! - [`effective1d`]: closed-form and quadrature `D_eff`, the bundle (parallel conductance)
//!   construction, and a conservative θ-scheme solver for the reduced equation.
//! - [`mc3d`]: reflecting Brownian dynamics inside the tube with per-particle RNG streams.
//! - [`msd`]: mean square displacement laws, moment identities and short-time fits.
//! - [`fluctuation`]: the order-ε correction to the flat cross-sectional profile.

pub mod effective1d;
pub mod error;
pub mod fluctuation;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod mc3d;
pub mod msd;
pub mod quadrature;

pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Cartesian 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;
