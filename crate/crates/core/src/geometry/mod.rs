//! Space-curve differential geometry and the tube coordinate system `(s, q², q³)`.
//!
//! Torsion sign convention: `τ = (de₂/ds)·e₃` with `e₃ = e₁ × e₂`, so a right-handed
//! helix (`μω > 0`) has positive torsion.

mod curve;
mod frame;
mod profile;
mod spline;
mod tube;

pub use curve::{
    arclength_reparam, curve_from_curvature, CurveJet, CurveKind, CurveSpec, FnCurve,
    ParametricCurve, PlaneCurve, SplineCurve,
};
pub use frame::{frame_at, FrameSample};
pub use profile::{CurvatureMode, KappaProfile};
pub use spline::{CubicSpline, SplineEnd};
pub use tube::{CrossSection, MetricSample, Projection, TubeSpec};
