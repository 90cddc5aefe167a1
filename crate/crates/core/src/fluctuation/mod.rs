//! Departure from local equilibrium across the section.
//!
//! Beyond the flat cross-sectional profile, the density acquires a correction
//! `n₀(v, w)` of relative order ε driven by the axial derivatives of `φ`. It is built from
//! two cubic polynomials `f, g` with `Δ⁽²⁾f = v`, `Δ⁽²⁾g = w`, no-flux at the wall, and zero
//! `√G`-weighted mean.

mod poly;

pub use poly::{disk_monomial, Poly2};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::disk_rule;

/// Local data at one point of the centerline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationParams {
    pub kappa: f64,
    /// `dκ/ds`.
    pub kappa_s: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub dphi_ds: f64,
    pub d2phi_ds2: f64,
}

impl FluctuationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::param("epsilon", "must be positive"));
        }
        if !(self.kappa.abs() * self.epsilon < 1.0) {
            return Err(Error::SelfIntersection {
                kappa_reach: self.kappa.abs() * self.epsilon,
            });
        }
        Ok(())
    }

    /// Cross-sectional area `πε²`.
    pub fn sigma(&self) -> f64 {
        PI * self.epsilon * self.epsilon
    }
}

/// `f = v³/8 + vw²/8 − (3ε²/8)v + h`, `g = w³/8 + wv²/8 − (3ε²/8)w + u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair {
    pub f: Poly2,
    pub g: Poly2,
    pub h: f64,
    pub u: f64,
}

pub fn fg_polynomials(epsilon: f64, kappa: f64) -> PolynomialPair {
    let e2 = epsilon * epsilon;
    let h = -7.0 / 96.0 * kappa * e2 * e2;
    let u = 0.0;
    let cubic = |a: (u32, u32), b: (u32, u32), c: (u32, u32), k: f64| {
        let mut p = &Poly2::monomial(0.125, a.0, a.1) + &Poly2::monomial(0.125, b.0, b.1);
        p = &p + &Poly2::monomial(-0.375 * e2, c.0, c.1);
        &p + &Poly2::constant(k)
    };
    PolynomialPair {
        f: cubic((3, 0), (1, 2), (1, 0), h),
        g: cubic((0, 3), (2, 1), (0, 1), u),
        h,
        u,
    }
}

/// Leading transverse coefficients of the axial operator: `second·∂²ₛ + first·∂ₛ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingOperator {
    /// `2κv`.
    pub second: Poly2,
    /// `κτw + κ_s v`.
    pub first: Poly2,
}

impl LeadingOperator {
    /// Applied to a line density with the given axial derivatives.
    pub fn apply(&self, dphi_ds: f64, d2phi_ds2: f64) -> Poly2 {
        &self.second.scale(d2phi_ds2) + &self.first.scale(dphi_ds)
    }
}

#[allow(non_snake_case)]
pub fn expand_F(params: &FluctuationParams) -> LeadingOperator {
    let k = params.kappa;
    LeadingOperator {
        second: Poly2::monomial(2.0 * k, 1, 0),
        first: &Poly2::monomial(k * params.tau, 0, 1) + &Poly2::monomial(params.kappa_s, 1, 0),
    }
}

/// `n₀ = −(1/σ)[2κ f ∂²ₛφ + (κτ g + κ_s f) ∂ₛφ]` as a polynomial.
pub fn n0_polynomial(params: &FluctuationParams) -> Poly2 {
    let fg = fg_polynomials(params.epsilon, params.kappa);
    let k = params.kappa;
    let on_f = 2.0 * k * params.d2phi_ds2 + params.kappa_s * params.dphi_ds;
    let on_g = k * params.tau * params.dphi_ds;
    (&fg.f.scale(on_f) + &fg.g.scale(on_g)).scale(-1.0 / params.sigma())
}

pub fn n0_at(params: &FluctuationParams, v: f64, w: f64) -> Result<f64> {
    params.validate()?;
    let r2 = v * v + w * w;
    if r2 > params.epsilon * params.epsilon * (1.0 + 1e-12) {
        return Err(Error::OutsideCrossSection { q2: v, q3: w });
    }
    Ok(n0_polynomial(params).eval(v, w))
}

/// Residuals of the no-net-flow statement at the implemented order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoFlowReport {
    /// `|∫√G Δ⁽²⁾n₀ dσ|`, normalized by `|∂²ₛφ| + |κ ∂ₛφ|`.
    pub laplacian: f64,
    /// `|∫√G F̂φ dσ|` with the leading operator, normalized by `σ(|∂²ₛφ| + |κ ∂ₛφ|)`.
    pub closure: f64,
    /// `|∫ ∂_a(√G ∂_a n₀) dσ|` with the curvature term kept; vanishes by the wall condition.
    pub corrected: f64,
}

impl NoFlowReport {
    pub fn max(&self) -> f64 {
        self.laplacian.max(self.closure)
    }
}

/// Integrates the no-flow combinations with a disk rule of the given order.
pub fn verify_no_flow_effect(params: &FluctuationParams, order: usize) -> Result<NoFlowReport> {
    params.validate()?;
    if order < 2 {
        return Err(Error::param("order", "need at least 2 nodes"));
    }
    let k = params.kappa;
    let sqrt_g = &Poly2::constant(1.0) - &Poly2::monomial(k, 1, 0);
    let n0 = n0_polynomial(params);
    let lap = &sqrt_g * &n0.laplacian();
    let source = &sqrt_g * &expand_F(params).apply(params.dphi_ds, params.d2phi_ds2);
    let divergence = &lap - &n0.dv().scale(k);

    let rule = disk_rule(params.epsilon, order);
    let integrate = |p: &Poly2| rule.iter().map(|(v, w, wt)| wt * p.eval(*v, *w)).sum::<f64>();
    let scale = params.d2phi_ds2.abs() + (k * params.dphi_ds).abs();
    if scale == 0.0 {
        return Ok(NoFlowReport {
            laplacian: 0.0,
            closure: 0.0,
            corrected: integrate(&divergence).abs(),
        });
    }
    Ok(NoFlowReport {
        laplacian: integrate(&lap).abs() / scale,
        closure: integrate(&source).abs() / (params.sigma() * scale),
        corrected: integrate(&divergence).abs() / scale,
    })
}
