use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec3;

use super::curve::CurveSpec;
use super::frame::FrameSample;

/// Tube cross section in the normal plane `(q², q³)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CrossSection {
    /// Disk `v² + w² ≤ ε²`.
    Circular { radius: f64 },
    /// Rectangle `|q²| ≤ ε/2`, `|q³| ≤ W/2`; `q²` is the bending direction.
    Quadrangular { thickness: f64, width: f64 },
}

impl CrossSection {
    /// The thickness `ε` (radius or bending-direction width).
    pub fn epsilon(&self) -> f64 {
        match *self {
            CrossSection::Circular { radius } => radius,
            CrossSection::Quadrangular { thickness, .. } => thickness,
        }
    }

    /// Largest `|q²|` inside the cross section.
    pub fn reach(&self) -> f64 {
        match *self {
            CrossSection::Circular { radius } => radius,
            CrossSection::Quadrangular { thickness, .. } => 0.5 * thickness,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            CrossSection::Circular { radius } => std::f64::consts::PI * radius * radius,
            CrossSection::Quadrangular { thickness, width } => thickness * width,
        }
    }

    pub fn contains(&self, q2: f64, q3: f64) -> bool {
        match *self {
            CrossSection::Circular { radius } => q2 * q2 + q3 * q3 <= radius * radius,
            CrossSection::Quadrangular { thickness, width } => {
                q2.abs() <= 0.5 * thickness && q3.abs() <= 0.5 * width
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        match *self {
            CrossSection::Circular { radius } if !ok(radius) => {
                Err(Error::param("radius", "tube radius must be positive"))
            }
            CrossSection::Quadrangular { thickness, width } if !ok(thickness) || !ok(width) => {
                Err(Error::param("thickness", "quadrangular sides must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// Metric tensor of the tube coordinates `(s, v, w)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub g: Matrix3<f64>,
    pub g_inv: Matrix3<f64>,
    /// `det G = (1 − κv)²`.
    pub det_g: f64,
}

impl MetricSample {
    pub fn new(kappa: f64, tau: f64, v: f64, w: f64) -> Self {
        let a = 1.0 - kappa * v;
        let g = Matrix3::new(
            1.0 - 2.0 * kappa * v + (kappa * kappa + tau * tau) * v * v + tau * tau * w * w,
            -tau * w,
            tau * v,
            -tau * w,
            1.0,
            0.0,
            tau * v,
            0.0,
            1.0,
        );
        let g_inv = Matrix3::new(
            1.0,
            tau * w,
            -tau * v,
            tau * w,
            a * a + tau * tau * w * w,
            -tau * tau * v * w,
            -tau * v,
            -tau * tau * v * w,
            a * a + tau * tau * v * v,
        ) / (a * a);
        MetricSample {
            g,
            g_inv,
            det_g: a * a,
        }
    }
}

/// Tube coordinates of a Cartesian point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub s: f64,
    pub q2: f64,
    pub q3: f64,
}

/// A tube of fixed cross section around a centerline curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeSpec {
    curve: CurveSpec,
    cross_section: CrossSection,
}

const PROJECT_MAX_ITERS: usize = 60;

impl TubeSpec {
    /// Validates the cross section and non-self-intersection `κ_max · reach < 1`.
    pub fn new(curve: CurveSpec, cross_section: CrossSection) -> Result<Self> {
        cross_section.validate()?;
        let kappa_reach = curve.max_curvature() * cross_section.reach();
        if !(kappa_reach < 1.0) {
            return Err(Error::SelfIntersection { kappa_reach });
        }
        Ok(TubeSpec {
            curve,
            cross_section,
        })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn cross_section(&self) -> &CrossSection {
        &self.cross_section
    }

    pub fn epsilon(&self) -> f64 {
        self.cross_section.epsilon()
    }

    /// Frame used for tube coordinates (Frenet, or the straight-segment fallback).
    pub fn frame(&self, s: f64) -> FrameSample {
        self.curve.frame_or_fallback(s)
    }

    /// `X = x(s) + q² e₂(s) + q³ e₃(s)` for `(q², q³)` in the cross section.
    pub fn embed(&self, s: f64, q2: f64, q3: f64) -> Result<Vec3> {
        if !self.cross_section.contains(q2, q3) {
            return Err(Error::OutsideCrossSection { q2, q3 });
        }
        self.curve.check_domain(s)?;
        Ok(self.embed_unchecked(s, q2, q3))
    }

    pub(crate) fn embed_unchecked(&self, s: f64, q2: f64, q3: f64) -> Vec3 {
        let f = self.frame(s);
        self.curve.point(s) + f.e2 * q2 + f.e3 * q3
    }

    /// Metric `G_{μν}` of `(s, v, w)` at a point of the tube.
    pub fn metric_at(&self, s: f64, v: f64, w: f64) -> Result<MetricSample> {
        if !self.cross_section.contains(v, w) {
            return Err(Error::OutsideCrossSection { q2: v, q3: w });
        }
        self.curve.check_domain(s)?;
        let f = self.frame(s);
        if !(f.kappa * v < 1.0) {
            return Err(Error::SelfIntersection {
                kappa_reach: f.kappa * v,
            });
        }
        Ok(MetricSample::new(f.kappa, f.tau, v, w))
    }

    /// Tube coordinates of `x`, searching near `s_seed`.
    ///
    /// Newton on `f(s) = (X − x(s))·x'(s)`, falling back to safeguarded Newton/bisection
    /// on a bracket of width `4ε` around the seed. `s` is not wrapped, so successive
    /// projections of a moving point stay continuous across the period.
    pub fn project(&self, x: &Vec3, s_seed: f64) -> Result<Projection> {
        self.project_with_frame(x, s_seed).map(|(p, _)| p)
    }

    pub(crate) fn project_with_frame(
        &self,
        x: &Vec3,
        s_seed: f64,
    ) -> Result<(Projection, FrameSample)> {
        let half = 2.0 * self.epsilon();
        let (lo, hi) = (s_seed - half, s_seed + half);
        let s = match self.newton(x, s_seed, lo, hi) {
            Some(s) => s,
            None => self.bracketed(x, lo, hi)?,
        };
        let f = self.frame(s);
        let d = x - self.curve.point(s);
        Ok((
            Projection {
                s,
                q2: d.dot(&f.e2),
                q3: d.dot(&f.e3),
            },
            f,
        ))
    }

    fn residual(&self, x: &Vec3, s: f64) -> (f64, f64) {
        let j = self.curve.jet(s);
        let d = x - j.pos;
        (d.dot(&j.d1), d.dot(&j.d2) - j.d1.norm_squared())
    }

    fn newton(&self, x: &Vec3, seed: f64, lo: f64, hi: f64) -> Option<f64> {
        let mut s = seed;
        for _ in 0..PROJECT_MAX_ITERS {
            let (f, fp) = self.residual(x, s);
            if !(fp < 0.0) {
                return None;
            }
            let step = f / fp;
            s -= step;
            if !(s > lo && s < hi) {
                return None;
            }
            if step.abs() <= 1e-13 * (1.0 + s.abs()) {
                return Some(s);
            }
        }
        None
    }

    fn bracketed(&self, x: &Vec3, mut lo: f64, mut hi: f64) -> Result<f64> {
        let (f_lo, _) = self.residual(x, lo);
        let (f_hi, _) = self.residual(x, hi);
        if !(f_lo > 0.0 && f_hi < 0.0) {
            let s = 0.5 * (lo + hi);
            return Err(Error::ProjectionDiverged {
                last_s: s,
                residual: self.residual(x, s).0,
            });
        }
        let mut s = 0.5 * (lo + hi);
        let mut last = (f64::NAN, f64::NAN);
        for _ in 0..200 {
            let (f, fp) = self.residual(x, s);
            last = (s, f);
            if f > 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let newton = s - f / fp;
            let next = if fp < 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - s).abs() <= 1e-13 * (1.0 + s.abs()) || hi - lo <= 1e-15 * (1.0 + s.abs()) {
                return Ok(next);
            }
            s = next;
        }
        Err(Error::ProjectionDiverged {
            last_s: last.0,
            residual: last.1,
        })
    }
}
