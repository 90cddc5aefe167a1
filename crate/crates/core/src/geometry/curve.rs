use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::Vec3;

use super::profile::KappaProfile;
use super::spline::{CubicSpline, SplineEnd};

/// Position and first three arc-length derivatives of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub pos: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

/// Plane curve synthesized from a curvature profile: `θ = ∫κ`, `x = ∫(cos θ, sin θ, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve {
    profile: KappaProfile,
    length: f64,
    closed: bool,
    spacing: f64,
    nodes: Vec<Vec3>,
}

const PLANE_PANEL_ORDER: usize = 12;

impl PlaneCurve {
    pub fn profile(&self) -> &KappaProfile {
        &self.profile
    }

    fn tangent(&self, s: f64) -> Vec3 {
        let (sn, cs) = self.profile.heading(s).sin_cos();
        Vec3::new(cs, sn, 0.0)
    }

    fn position(&self, s: f64) -> Vec3 {
        let s = if self.closed {
            s.rem_euclid(self.length)
        } else {
            s
        };
        let last = self.nodes.len() - 1;
        let k = ((s / self.spacing).round().max(0.0) as usize).min(last);
        let sk = k as f64 * self.spacing;
        let gl = GaussLegendre::new(PLANE_PANEL_ORDER);
        let mut p = self.nodes[k];
        for (x, w) in gl.mapped(sk, s) {
            p += self.tangent(x) * w;
        }
        p
    }

    fn jet(&self, s: f64) -> CurveJet {
        let [k, dk, _, _] = self.profile.derivatives(s);
        let (sn, cs) = self.profile.heading(s).sin_cos();
        let t = Vec3::new(cs, sn, 0.0);
        let n = Vec3::new(-sn, cs, 0.0);
        CurveJet {
            pos: self.position(s),
            d1: t,
            d2: n * k,
            d3: n * dk - t * (k * k),
        }
    }
}

/// Curve stored as a cubic spline in arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineCurve {
    spline: CubicSpline,
    closed: bool,
}

impl SplineCurve {
    fn jet(&self, s: f64) -> CurveJet {
        let [pos, d1, d2, d3] = self.spline.eval(s);
        CurveJet { pos, d1, d2, d3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// `origin + s·direction`, `direction` unit.
    Line { origin: Vec3, direction: Vec3 },
    /// Circle of radius `R` in the `xy` plane centred at the origin.
    Circle { radius: f64 },
    /// `(R cos ωu, R sin ωu, μu)` with `ds = √(μ² + R²ω²) du`.
    Helix { radius: f64, omega: f64, mu: f64 },
    Plane(PlaneCurve),
    Spline(SplineCurve),
}

/// An arc-length parameterized space curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    kind: CurveKind,
    length: Option<f64>,
    periodic: bool,
}

impl CurveSpec {
    pub fn line(origin: Vec3, direction: Vec3) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::param("direction", "must be a nonzero finite vector"));
        }
        Ok(CurveSpec {
            kind: CurveKind::Line {
                origin,
                direction: direction / n,
            },
            length: None,
            periodic: false,
        })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::param("radius", "must be positive"));
        }
        Ok(CurveSpec {
            kind: CurveKind::Circle { radius },
            length: Some(2.0 * PI * radius),
            periodic: true,
        })
    }

    /// Helix `(R cos ωu, R sin ωu, μu)`; periodic only when `μ = 0`.
    pub fn helix(radius: f64, omega: f64, mu: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::param("radius", "must be positive"));
        }
        if omega == 0.0 || !omega.is_finite() || !mu.is_finite() {
            return Err(Error::param("omega", "must be nonzero and finite"));
        }
        let (length, periodic) = if mu == 0.0 {
            (Some(2.0 * PI * radius), true)
        } else {
            (None, false)
        };
        Ok(CurveSpec {
            kind: CurveKind::Helix { radius, omega, mu },
            length,
            periodic,
        })
    }

    /// Curve through sampled points, fitted in chord length and re-parameterized by arc length.
    pub fn from_points(points: &[Vec3], closed: bool, tol: f64) -> Result<Self> {
        let min_points = if closed { 3 } else { 4 };
        if points.len() < min_points {
            return Err(Error::param("points", format!("need at least {min_points} points")));
        }
        let mut pts = points.to_vec();
        if closed && (pts[0] - pts[pts.len() - 1]).norm() == 0.0 {
            pts.pop();
        }
        // Uniform-in-index raw spline; arc length reparameterization removes the speed variation.
        let raw = if closed {
            CubicSpline::periodic(pts, 1.0)
        } else {
            CubicSpline::open(pts, 1.0, SplineEnd::Natural)
        };
        let span = raw.span();
        let curve = FnCurve {
            point: |u: f64| raw.eval(u)[0],
            derivative: |u: f64| raw.eval(u)[1],
            domain: (0.0, span),
            closed,
        };
        arclength_reparam(&curve, tol)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    /// Length of the domain `[0, L)`; `None` for unbounded curves.
    pub fn length(&self) -> Option<f64> {
        self.length
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Length scale used to set the straight-point curvature floor.
    pub fn reference_length(&self) -> f64 {
        match (&self.kind, self.length) {
            (_, Some(l)) => l,
            (CurveKind::Helix { radius, omega, mu }, None) => {
                2.0 * PI * (mu * mu + radius * radius * omega * omega).sqrt() / omega.abs()
            }
            _ => 1.0,
        }
    }

    /// Curvature below which the Frenet frame is treated as undefined.
    pub fn kappa_floor(&self) -> f64 {
        1e-12 / self.reference_length()
    }

    /// Wraps `s` into `[0, L)` for periodic curves.
    pub fn wrap(&self, s: f64) -> f64 {
        match (self.periodic, self.length) {
            (true, Some(l)) => s.rem_euclid(l),
            _ => s,
        }
    }

    pub fn check_domain(&self, s: f64) -> Result<()> {
        if !s.is_finite() {
            return Err(Error::OutOfDomain {
                s,
                length: self.length.unwrap_or(f64::INFINITY),
            });
        }
        if let (false, Some(l)) = (self.periodic, self.length) {
            let slack = 1e-12 * l;
            if s < -slack || s > l + slack {
                return Err(Error::OutOfDomain { s, length: l });
            }
        }
        Ok(())
    }

    /// Position and arc-length derivatives at `s` (no domain check; open curves extrapolate).
    pub fn jet(&self, s: f64) -> CurveJet {
        match &self.kind {
            CurveKind::Line { origin, direction } => CurveJet {
                pos: origin + direction * s,
                d1: *direction,
                d2: Vec3::zeros(),
                d3: Vec3::zeros(),
            },
            CurveKind::Circle { radius } => {
                let (sn, cs) = (s / radius).sin_cos();
                CurveJet {
                    pos: Vec3::new(cs, sn, 0.0) * *radius,
                    d1: Vec3::new(-sn, cs, 0.0),
                    d2: Vec3::new(-cs, -sn, 0.0) / *radius,
                    d3: Vec3::new(sn, -cs, 0.0) / (radius * radius),
                }
            }
            CurveKind::Helix { radius, omega, mu } => {
                let c = (mu * mu + radius * radius * omega * omega).sqrt();
                let u = s / c;
                let (sn, cs) = (omega * u).sin_cos();
                let (r, w) = (*radius, *omega);
                CurveJet {
                    pos: Vec3::new(r * cs, r * sn, mu * u),
                    d1: Vec3::new(-r * w * sn, r * w * cs, *mu) / c,
                    d2: Vec3::new(-r * w * w * cs, -r * w * w * sn, 0.0) / (c * c),
                    d3: Vec3::new(r * w * w * w * sn, -r * w * w * w * cs, 0.0) / (c * c * c),
                }
            }
            CurveKind::Plane(p) => p.jet(s),
            CurveKind::Spline(sp) => sp.jet(s),
        }
    }

    pub fn point(&self, s: f64) -> Vec3 {
        self.jet(s).pos
    }

    /// Curvature `|x' × x''| / |x'|³` at `s`.
    pub fn curvature(&self, s: f64) -> f64 {
        if let CurveKind::Plane(p) = &self.kind {
            return p.profile.kappa(s);
        }
        let j = self.jet(s);
        let sp = j.d1.norm();
        j.d1.cross(&j.d2).norm() / (sp * sp * sp)
    }

    /// Analytic curvature profile, when the curve has one.
    pub fn kappa_profile(&self) -> Option<KappaProfile> {
        match &self.kind {
            CurveKind::Line { .. } => Some(KappaProfile::constant(0.0)),
            CurveKind::Circle { radius } => Some(KappaProfile::constant(1.0 / radius)),
            CurveKind::Helix { radius, omega, mu } => Some(KappaProfile::constant(
                radius * omega * omega / (mu * mu + radius * radius * omega * omega),
            )),
            CurveKind::Plane(p) => Some(p.profile.clone()),
            CurveKind::Spline(_) => None,
        }
    }

    /// Maximum curvature over the domain (sampled for spline curves).
    pub fn max_curvature(&self) -> f64 {
        if let Some(p) = self.kappa_profile() {
            return p.max_abs();
        }
        let CurveKind::Spline(sp) = &self.kind else {
            unreachable!("analytic kinds return a profile")
        };
        let span = sp.spline.span();
        let n = (span / sp.spline.step()).ceil() as usize * 4 + 1;
        (0..=n)
            .map(|k| self.curvature(span * k as f64 / n as f64))
            .fold(0.0, f64::max)
    }
}

/// A raw parametric curve `u ↦ x(u)`, not necessarily unit speed.
pub trait ParametricCurve {
    fn point(&self, u: f64) -> Vec3;
    fn derivative(&self, u: f64) -> Vec3;
    fn domain(&self) -> (f64, f64);
    /// Whether `x(u₁) = x(u₀)` with matching tangents.
    fn is_closed(&self) -> bool;
}

/// Parametric curve from closures.
pub struct FnCurve<P, D> {
    pub point: P,
    pub derivative: D,
    pub domain: (f64, f64),
    pub closed: bool,
}

impl<P, D> ParametricCurve for FnCurve<P, D>
where
    P: Fn(f64) -> Vec3,
    D: Fn(f64) -> Vec3,
{
    fn point(&self, u: f64) -> Vec3 {
        (self.point)(u)
    }
    fn derivative(&self, u: f64) -> Vec3 {
        (self.derivative)(u)
    }
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
    fn is_closed(&self) -> bool {
        self.closed
    }
}

const ARC_PANELS: usize = 512;
const ARC_ORDER: usize = 16;
const MAX_SPLINE_NODES: usize = 1 << 17;

/// Cumulative arc length table of a raw curve.
struct ArcTable<'a> {
    curve: &'a dyn ParametricCurve,
    u0: f64,
    du: f64,
    cumulative: Vec<f64>,
    gl: GaussLegendre,
}

impl<'a> ArcTable<'a> {
    fn new(curve: &'a dyn ParametricCurve) -> Self {
        let (u0, u1) = curve.domain();
        let du = (u1 - u0) / ARC_PANELS as f64;
        let gl = GaussLegendre::new(ARC_ORDER);
        let mut cumulative = Vec::with_capacity(ARC_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for p in 0..ARC_PANELS {
            let a = u0 + p as f64 * du;
            acc += gl.integrate(a, a + du, |u| curve.derivative(u).norm());
            cumulative.push(acc);
        }
        ArcTable {
            curve,
            u0,
            du,
            cumulative,
            gl,
        }
    }

    fn total(&self) -> f64 {
        self.cumulative[ARC_PANELS]
    }

    fn arc(&self, u: f64) -> f64 {
        let p = (((u - self.u0) / self.du).floor().max(0.0) as usize).min(ARC_PANELS - 1);
        let a = self.u0 + p as f64 * self.du;
        self.cumulative[p] + self.gl.integrate(a, u, |x| self.curve.derivative(x).norm())
    }

    /// Parameter `u` with arc length `s` (Newton on `s(u)` from a table guess).
    fn invert(&self, s: f64) -> f64 {
        let p = self.cumulative.partition_point(|&c| c <= s).clamp(1, ARC_PANELS) - 1;
        let seg = self.cumulative[p + 1] - self.cumulative[p];
        let frac = if seg > 0.0 {
            (s - self.cumulative[p]) / seg
        } else {
            0.0
        };
        let mut u = self.u0 + (p as f64 + frac) * self.du;
        for _ in 0..30 {
            let step = (self.arc(u) - s) / self.curve.derivative(u).norm();
            u -= step;
            if step.abs() <= 1e-15 * (1.0 + u.abs()) {
                break;
            }
        }
        u
    }
}

/// Re-parameterizes a regular raw curve by arc length as a cubic spline in `s`.
///
/// The node count doubles until `||dx/ds| − 1| ≤ tol` at interior check points.
pub fn arclength_reparam(curve: &dyn ParametricCurve, tol: f64) -> Result<CurveSpec> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let (u0, u1) = curve.domain();
    if !(u1 > u0) {
        return Err(Error::param("domain", "must be a nonempty interval"));
    }
    let scan = 8192;
    let speeds: Vec<(f64, f64)> = (0..=scan)
        .map(|k| {
            let u = u0 + (u1 - u0) * k as f64 / scan as f64;
            (u, curve.derivative(u).norm())
        })
        .collect();
    let vmax = speeds.iter().map(|p| p.1).fold(0.0, f64::max);
    if let Some(&(u, speed)) = speeds.iter().find(|p| !(p.1 > 1e-9 * vmax)) {
        return Err(Error::NonRegular { u, speed });
    }

    let table = ArcTable::new(curve);
    let length = table.total();
    let closed = curve.is_closed();

    let mut n = 32;
    loop {
        let step = length / n as f64;
        let count = if closed { n } else { n + 1 };
        let values: Vec<Vec3> = (0..count)
            .map(|k| curve.point(table.invert(k as f64 * step)))
            .collect();
        let spline = if closed {
            CubicSpline::periodic(values, step)
        } else {
            let t0 = curve.derivative(u0).normalize();
            let t1 = curve.derivative(u1).normalize();
            CubicSpline::open(values, step, SplineEnd::Clamped(t0, t1))
        };
        let worst = (0..n)
            .flat_map(|k| [0.25, 0.5, 0.75].map(|f| (k as f64 + f) * step))
            .map(|s| (spline.eval(s)[1].norm() - 1.0).abs())
            .fold(0.0, f64::max);
        if worst <= tol {
            return Ok(CurveSpec {
                kind: CurveKind::Spline(SplineCurve { spline, closed }),
                length: Some(length),
                periodic: closed,
            });
        }
        if n >= MAX_SPLINE_NODES {
            return Err(Error::param(
                "tol",
                format!("speed error {worst:e} remains above tolerance at {n} nodes"),
            ));
        }
        n *= 2;
    }
}

/// Synthesizes a plane curve (torsion ≡ 0) whose curvature follows `profile`.
pub fn curve_from_curvature(profile: KappaProfile, length: f64, closed: bool) -> Result<CurveSpec> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::param("length", "must be positive"));
    }
    if !(profile.min() > 0.0) {
        return Err(Error::param(
            "kappa_profile",
            "curvature must stay strictly positive on [0, L]",
        ));
    }
    // Node spacing keeps the heading change per panel small for the panel quadrature.
    let panels = ((length * profile.max_abs() / 0.05).ceil() as usize).clamp(64, 1 << 16);
    let spacing = length / panels as f64;
    let gl = GaussLegendre::new(PLANE_PANEL_ORDER);
    let mut curve = PlaneCurve {
        profile,
        length,
        closed: false,
        spacing,
        nodes: Vec::with_capacity(panels + 1),
    };
    let mut p = Vec3::zeros();
    curve.nodes.push(p);
    for k in 0..panels {
        let a = k as f64 * spacing;
        for (x, w) in gl.mapped(a, a + spacing) {
            p += curve.tangent(x) * w;
        }
        curve.nodes.push(p);
    }
    if closed {
        let turn = curve.profile.heading(length);
        let heading_gap = (turn - 2.0 * PI * (turn / (2.0 * PI)).round()).abs();
        let position_gap = (curve.nodes[panels] - curve.nodes[0]).norm();
        if heading_gap > 1e-9 || position_gap > 1e-9 * length {
            return Err(Error::CannotClose {
                heading_gap,
                position_gap,
            });
        }
        curve.closed = true;
    }
    Ok(CurveSpec {
        kind: CurveKind::Plane(curve),
        length: Some(length),
        periodic: closed,
    })
}
