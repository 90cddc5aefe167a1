use crate::error::{Error, Result};
use crate::Vec3;

use super::curve::{CurveJet, CurveSpec};

/// Local Frenet–Serret frame at arc length `s`.
///
/// `e2` points toward the centre of curvature and `e3 = e1 × e2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    pub s: f64,
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
    pub kappa: f64,
    pub tau: f64,
    /// False where the curve is straight and a parallel-transport frame stands in;
    /// `tau` is then reported as 0 and carries no information.
    pub torsion_reliable: bool,
}

impl FrameSample {
    /// Frenet frame from a jet; `None` where `κ` is below `floor`.
    pub(crate) fn from_jet(s: f64, j: &CurveJet, floor: f64) -> Option<Self> {
        let speed = j.d1.norm();
        let e1 = j.d1 / speed;
        let b = j.d1.cross(&j.d2);
        let bn = b.norm();
        let kappa = bn / (speed * speed * speed);
        if !(kappa >= floor) || bn == 0.0 {
            return None;
        }
        let tau = b.dot(&j.d3) / (bn * bn);
        let e3 = b / bn;
        let e2 = e3.cross(&e1);
        Some(FrameSample {
            s,
            e1,
            e2,
            e3: e1.cross(&e2),
            kappa,
            tau,
            torsion_reliable: true,
        })
    }

    /// Frame for a straight point: constant transverse axes (the rotation-minimizing
    /// frame of a straight segment).
    pub(crate) fn straight(s: f64, j: &CurveJet) -> Self {
        let e1 = j.d1.normalize();
        let axes = [Vec3::x(), Vec3::y(), Vec3::z()];
        let reference = axes
            .iter()
            .min_by(|a, b| e1.dot(a).abs().total_cmp(&e1.dot(b).abs()))
            .copied()
            .unwrap_or_else(Vec3::x);
        let e2 = (reference - e1 * e1.dot(&reference)).normalize();
        let speed = j.d1.norm();
        FrameSample {
            s,
            e1,
            e2,
            e3: e1.cross(&e2),
            kappa: j.d1.cross(&j.d2).norm() / (speed * speed * speed),
            tau: 0.0,
            torsion_reliable: false,
        }
    }
}

/// Frenet–Serret frame at `s`; errors at straight points and outside the domain.
pub fn frame_at(curve: &CurveSpec, s: f64) -> Result<FrameSample> {
    curve.check_domain(s)?;
    let j = curve.jet(s);
    FrameSample::from_jet(s, &j, curve.kappa_floor()).ok_or_else(|| Error::FrameUndefined {
        s,
        kappa: curve.curvature(s),
    })
}

impl CurveSpec {
    /// Frenet frame where defined, otherwise the straight-segment fallback.
    pub fn frame_or_fallback(&self, s: f64) -> FrameSample {
        let j = self.jet(s);
        FrameSample::from_jet(s, &j, self.kappa_floor())
            .unwrap_or_else(|| FrameSample::straight(s, &j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curve_from_curvature, KappaProfile};

    #[test]
    fn circle_frame() {
        let c = CurveSpec::circle(2.0).unwrap();
        let f = frame_at(&c, 1.3).unwrap();
        assert!((f.kappa - 0.5).abs() < 1e-15);
        assert!(f.tau.abs() < 1e-15);
        // e2 points at the centre.
        let to_centre = -c.point(1.3).normalize();
        assert!((f.e2 - to_centre).norm() < 1e-14);
    }

    #[test]
    fn helix_curvature_and_torsion() {
        let (r, w, mu) = (1.0, 1.0, 1.0);
        let c = CurveSpec::helix(r, w, mu).unwrap();
        let f = frame_at(&c, 0.7).unwrap();
        let den = mu * mu + r * r * w * w;
        assert!((f.kappa - r * w * w / den).abs() < 1e-15);
        assert!((f.tau - mu * w / den).abs() < 1e-15);
        let left = frame_at(&CurveSpec::helix(r, w, -mu).unwrap(), 0.7).unwrap();
        assert!((left.tau + mu * w / den).abs() < 1e-15);
    }

    #[test]
    fn straight_line_has_no_frenet_frame() {
        let c = CurveSpec::line(Vec3::zeros(), Vec3::z()).unwrap();
        assert!(matches!(frame_at(&c, 0.5), Err(Error::FrameUndefined { .. })));
        let f = c.frame_or_fallback(0.5);
        assert!(!f.torsion_reliable);
        assert!((f.e1.cross(&f.e2) - f.e3).norm() < 1e-15);
        assert!(f.e1.dot(&f.e2).abs() < 1e-15);
    }

    #[test]
    fn out_of_domain_rejected() {
        let c = curve_from_curvature(KappaProfile::constant(1.0), 2.0, false).unwrap();
        assert!(matches!(frame_at(&c, 2.5), Err(Error::OutOfDomain { .. })));
    }
}
