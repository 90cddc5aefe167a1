//! Curvature-dependent effective diffusion coefficient.
//!
//! `D_eff = D ⟨1/(1 − κq²)⟩` averaged over the cross section. Closed forms exist for
//! the disk and the rectangle; [`deff_quadrature`] evaluates the average directly and
//! serves as their oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CrossSection, KappaProfile, TubeSpec};
use crate::jet::Jet;
use crate::quadrature::{disk_rule, GaussLegendre};

/// Below this `κε` (disk) or `κε/2` (rectangle) the closed forms switch to their series.
pub const SERIES_SWITCH: f64 = 1e-4;

/// `D_eff = 2D (1 − √(1 − (κε)²)) / (κε)²`, evaluated as `2D / (1 + √(1 − (κε)²))`.
pub fn deff_circular(diffusivity: f64, kappa: f64, epsilon: f64) -> Result<f64> {
    let x = (kappa * epsilon).abs();
    if !(x < 1.0) {
        return Err(Error::SelfIntersection { kappa_reach: x });
    }
    if x < SERIES_SWITCH {
        return Ok(diffusivity * (1.0 + 0.25 * x * x));
    }
    Ok(diffusivity * 2.0 / (1.0 + (1.0 - x * x).sqrt()))
}

/// `D_eff = (D/κε) ln |(1 + κε/2)/(1 − κε/2)|` for a rectangle of thickness `ε` in the
/// bending direction. The width `W` does not enter.
pub fn deff_quadrangular(diffusivity: f64, kappa: f64, epsilon: f64, width: f64) -> Result<f64> {
    if !(width > 0.0) {
        return Err(Error::param("width", "must be positive"));
    }
    let y = 0.5 * (kappa * epsilon).abs();
    if !(y < 1.0) {
        return Err(Error::SelfIntersection { kappa_reach: y });
    }
    if y < SERIES_SWITCH {
        return Ok(diffusivity * (1.0 + y * y / 3.0));
    }
    Ok(diffusivity * y.atanh() / y)
}

/// Direct average of `1/(1 − κq²)` over the cross section with tensor Gauss–Legendre rules.
pub fn deff_quadrature(
    diffusivity: f64,
    kappa: f64,
    section: &CrossSection,
    order: usize,
) -> Result<f64> {
    let reach = kappa.abs() * section.reach();
    if !(reach < 1.0) {
        return Err(Error::SelfIntersection { kappa_reach: reach });
    }
    if order == 0 {
        return Err(Error::param("order", "must be positive"));
    }
    let mean = match *section {
        CrossSection::Circular { radius } => {
            let sum: f64 = disk_rule(radius, order)
                .into_iter()
                .map(|(v, _, wt)| wt / (1.0 - kappa * v))
                .sum();
            sum / section.area()
        }
        CrossSection::Quadrangular { thickness, width } => {
            let gl = GaussLegendre::new(order);
            let mut sum = 0.0;
            for (q2, w2) in gl.mapped(-0.5 * thickness, 0.5 * thickness) {
                for (_, w3) in gl.mapped(-0.5 * width, 0.5 * width) {
                    sum += w2 * w3 / (1.0 - kappa * q2);
                }
            }
            sum / section.area()
        }
    };
    Ok(diffusivity * mean)
}

/// Parallel-conductance (bundle) construction: `D_eff = (D/σ) Σ (s̄/sᵢ) dσᵢ`.
///
/// `segments` holds `(dσᵢ, sᵢ)`: area and length of each thin tube between two sections
/// whose centerline separation is `s̄`.
pub fn parallel_conductance(
    segments: &[(f64, f64)],
    sbar: f64,
    sigma: f64,
    diffusivity: f64,
) -> Result<f64> {
    if segments.is_empty() {
        return Err(Error::param("segments", "empty partition"));
    }
    if !(sbar > 0.0) || !(sigma > 0.0) {
        return Err(Error::param("sbar", "lengths and areas must be positive"));
    }
    let mut area = 0.0;
    let mut acc = 0.0;
    for &(ds, s) in segments {
        if !(s > 0.0) || !(ds >= 0.0) {
            return Err(Error::param(
                "segments",
                format!("segment (dσ = {ds}, s = {s}) must have s > 0 and dσ ≥ 0"),
            ));
        }
        area += ds;
        acc += sbar / s * ds;
    }
    if (area - sigma).abs() > 1e-9 * sigma {
        return Err(Error::InconsistentAreas { sum: area, sigma });
    }
    Ok(diffusivity / sigma * acc)
}

/// Partition of a bent disk of radius `ε` into `strips` slabs of equal width in `q²`.
///
/// Each slab gets its exact area and the length `s̄(1 − κq²)` at its midline.
pub fn bent_disk_partition(kappa: f64, epsilon: f64, sbar: f64, strips: usize) -> Vec<(f64, f64)> {
    let cumulative = |v: f64| {
        let v = v.clamp(-epsilon, epsilon);
        v * (epsilon * epsilon - v * v).max(0.0).sqrt()
            + epsilon * epsilon * (v / epsilon).asin()
    };
    let width = 2.0 * epsilon / strips as f64;
    (0..strips)
        .map(|i| {
            let a = -epsilon + i as f64 * width;
            let b = a + width;
            let area = cumulative(b) - cumulative(a);
            let mid = 0.5 * (a + b);
            (area, sbar * (1.0 - kappa * mid))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionShape {
    Circular,
    Quadrangular,
}

/// `D_eff(s)` along a tube, with analytic derivatives up to third order.
#[derive(Debug, Clone, PartialEq)]
pub struct DeffProfile {
    diffusivity: f64,
    epsilon: f64,
    shape: SectionShape,
    kappa: KappaProfile,
}

impl DeffProfile {
    pub fn new(
        diffusivity: f64,
        epsilon: f64,
        shape: SectionShape,
        kappa: KappaProfile,
    ) -> Result<Self> {
        if !(diffusivity > 0.0) || !diffusivity.is_finite() {
            return Err(Error::param("diffusivity", "must be positive"));
        }
        if !(epsilon > 0.0) {
            return Err(Error::param("epsilon", "must be positive"));
        }
        let reach = match shape {
            SectionShape::Circular => epsilon,
            SectionShape::Quadrangular => 0.5 * epsilon,
        };
        if !(kappa.max_abs() * reach < 1.0) {
            return Err(Error::SelfIntersection {
                kappa_reach: kappa.max_abs() * reach,
            });
        }
        Ok(DeffProfile {
            diffusivity,
            epsilon,
            shape,
            kappa,
        })
    }

    /// Constant curvature profile (torus, helix, straight tube).
    pub fn constant(diffusivity: f64, epsilon: f64, kappa: f64) -> Result<Self> {
        Self::new(
            diffusivity,
            epsilon,
            SectionShape::Circular,
            KappaProfile::constant(kappa),
        )
    }

    pub fn from_tube(tube: &TubeSpec, diffusivity: f64) -> Result<Self> {
        let kappa = tube.curve().kappa_profile().ok_or_else(|| {
            Error::param("curve", "sampled curves carry no analytic curvature profile")
        })?;
        let shape = match tube.cross_section() {
            CrossSection::Circular { .. } => SectionShape::Circular,
            CrossSection::Quadrangular { .. } => SectionShape::Quadrangular,
        };
        Self::new(diffusivity, tube.epsilon(), shape, kappa)
    }

    pub fn diffusivity(&self) -> f64 {
        self.diffusivity
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn shape(&self) -> SectionShape {
        self.shape
    }

    pub fn kappa(&self) -> &KappaProfile {
        &self.kappa
    }

    pub fn value(&self, s: f64) -> f64 {
        let k = self.kappa.kappa(s);
        match self.shape {
            SectionShape::Circular => deff_circular(self.diffusivity, k, self.epsilon),
            SectionShape::Quadrangular => deff_quadrangular(self.diffusivity, k, self.epsilon, 1.0),
        }
        .expect("curvature bound checked at construction")
    }

    /// Taylor jet of `D_eff` at `s`.
    pub fn jet(&self, s: f64) -> Jet {
        let kj = self.kappa.jet(s);
        let x = kj.scale(self.epsilon);
        let ratio = match self.shape {
            SectionShape::Circular => {
                let q = (Jet::constant(1.0) - x * x).sqrt();
                Jet::constant(2.0) / (q + 1.0)
            }
            SectionShape::Quadrangular => {
                let y = x.scale(0.5);
                if y.value().abs() < SERIES_SWITCH {
                    let y2 = y * y;
                    Jet::constant(1.0) + y2.scale(1.0 / 3.0) + (y2 * y2).scale(0.2)
                } else {
                    y.atanh() / y
                }
            }
        };
        ratio.scale(self.diffusivity)
    }

    /// `[D_eff, D_eff', D_eff'', D_eff''']` at `s`.
    pub fn derivatives(&self, s: f64) -> [f64; 4] {
        let mut d = self.jet(s).derivatives();
        d[0] = self.value(s);
        d
    }

    pub fn max_value(&self) -> f64 {
        let k = self.kappa.max_abs();
        match self.shape {
            SectionShape::Circular => deff_circular(self.diffusivity, k, self.epsilon),
            SectionShape::Quadrangular => deff_quadrangular(self.diffusivity, k, self.epsilon, 1.0),
        }
        .expect("curvature bound checked at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn straight_tube_has_bare_diffusivity() {
        assert_eq!(deff_circular(1.7, 0.0, 0.3).unwrap(), 1.7);
        assert_eq!(deff_quadrangular(1.7, 0.0, 0.3, 2.0).unwrap(), 1.7);
        let q = deff_quadrature(1.7, 0.0, &CrossSection::Circular { radius: 0.3 }, 8).unwrap();
        assert!((q - 1.7).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // 2(1 − 0.8)/0.36
        let c = deff_circular(1.0, 0.6, 1.0).unwrap();
        assert!((c - 0.4 / 0.36).abs() < 1e-15);
        // 2 ln(5/3) at κε = 0.5
        let q = deff_quadrangular(1.0, 0.5, 1.0, 3.0).unwrap();
        assert!((q - 2.0 * (5.0f64 / 3.0).ln()).abs() < 1e-15);
        // Torus R = 1, ε = 0.3.
        let t = deff_circular(1.0, 1.0, 0.3).unwrap();
        assert!((2.0 * t - 2.047_146_603_691_3).abs() < 1e-12);
    }

    #[test]
    fn self_intersection_is_an_error() {
        assert!(deff_circular(1.0, 1.0, 1.0).is_err());
        assert!(deff_quadrangular(1.0, 2.0, 1.0, 1.0).is_err());
        assert!(deff_quadrangular(1.0, 1.9, 1.0, 1.0).is_ok());
    }

    #[test]
    fn width_does_not_matter_for_the_rectangle() {
        let a = deff_quadrature(
            1.0,
            0.9,
            &CrossSection::Quadrangular {
                thickness: 1.0,
                width: 0.1,
            },
            40,
        )
        .unwrap();
        let b = deff_quadrature(
            1.0,
            0.9,
            &CrossSection::Quadrangular {
                thickness: 1.0,
                width: 7.0,
            },
            40,
        )
        .unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn partition_rejects_bad_areas() {
        let parts = bent_disk_partition(0.5, 1.0, 1.0, 10);
        let total: f64 = parts.iter().map(|p| p.0).sum();
        assert!((total - PI).abs() < 1e-12);
        assert!(matches!(
            parallel_conductance(&parts, 1.0, 2.0 * PI, 1.0),
            Err(Error::InconsistentAreas { .. })
        ));
        assert!(parallel_conductance(&[(1.0, 0.0)], 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn uniform_bundle_has_no_dispersion() {
        let parts = vec![(0.2, 1.5), (0.3, 1.5), (0.5, 1.5)];
        assert!((parallel_conductance(&parts, 1.5, 1.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn profile_jet_matches_scalar_value() {
        let p = DeffProfile::new(
            1.3,
            0.4,
            SectionShape::Quadrangular,
            KappaProfile::sinusoidal(1.0, 0.5, 2.0),
        )
        .unwrap();
        for &s in &[0.0, 0.3, 1.1] {
            assert!((p.jet(s).value() - p.value(s)).abs() < 1e-14);
        }
    }
}
