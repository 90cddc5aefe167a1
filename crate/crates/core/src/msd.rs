//! Mean square displacement along the centerline.
//!
//! `⟨(Δs)²⟩` is the variance of `s` under the line density, `Δs = s − ⟨s⟩`. For constant
//! curvature it grows exactly as `2 D_eff t`; otherwise the short-time expansion
//! `a₁t + a₂t²` is fixed by `D_eff` and its derivatives at the starting point.

use serde::{Deserialize, Serialize};

use crate::effective1d::{deff_circular, Boundary, DeffProfile, Field1D};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsdSeries {
    pub times: Vec<f64>,
    pub msd: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

impl MsdSeries {
    pub fn new(times: Vec<f64>, msd: Vec<f64>) -> Result<Self> {
        if times.len() != msd.len() {
            return Err(Error::param("msd", "times and values differ in length"));
        }
        Ok(MsdSeries {
            times,
            msd,
            stderr: None,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn window(&self, window: (f64, f64)) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.times
            .iter()
            .zip(&self.msd)
            .enumerate()
            .filter(move |(_, (t, _))| **t >= window.0 && **t <= window.1)
            .map(|(i, (t, m))| (i, *t, *m))
    }
}

/// Coefficients of `⟨(Δs)²⟩ = a₁t + a₂t² + …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsdExpansion {
    pub a1: f64,
    pub a2: f64,
}

/// `4D (1 − √(1 − (κε)²)) t / (κε)²`, i.e. `2 D_eff t` for a circular section.
pub fn msd_constant_curvature(diffusivity: f64, kappa: f64, epsilon: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::param("t", "must be nonnegative"));
    }
    Ok(2.0 * deff_circular(diffusivity, kappa, epsilon)? * t)
}

/// `a₁ = 2D_eff(s₀)`, `a₂ = 3D_eff″(s₀)D_eff(s₀) + D_eff′(s₀)²` for point initial data at `s₀`.
pub fn short_time_coeffs(profile: &DeffProfile, s0: f64) -> MsdExpansion {
    let [d, d1, d2, _] = profile.derivatives(s0);
    MsdExpansion {
        a1: 2.0 * d,
        a2: 3.0 * d2 * d + d1 * d1,
    }
}

/// Cell-midpoint moments of a line density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMoments {
    pub mass: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Edge-cell mass fraction above which a periodic field counts as wrapped.
pub const WRAP_TOLERANCE: f64 = 1e-10;

pub fn field_moments(field: &Field1D) -> Result<FieldMoments> {
    let grid = &field.grid;
    let mass = field.mass();
    if !(mass > 0.0) {
        return Err(Error::param("field", "mass must be positive"));
    }
    if grid.boundary() == Boundary::Periodic {
        let n = grid.cells();
        let edge = grid.spacing() * (field.values[0].abs() + field.values[n - 1].abs());
        if edge > WRAP_TOLERANCE * mass {
            return Err(Error::WrappedSupport);
        }
    }
    let expect = |f: &dyn Fn(f64) -> f64| {
        grid.centers()
            .zip(&field.values)
            .map(|(s, p)| f(s) * p)
            .sum::<f64>()
            * grid.spacing()
            / mass
    };
    let mean = expect(&|s| s);
    let variance = expect(&|s| (s - mean).powi(2));
    Ok(FieldMoments {
        mass,
        mean,
        variance,
    })
}

pub fn msd_from_field(fields: &[Field1D]) -> Result<MsdSeries> {
    let mut times = Vec::with_capacity(fields.len());
    let mut msd = Vec::with_capacity(fields.len());
    for f in fields {
        if f.grid != fields[0].grid {
            return Err(Error::param("fields", "snapshots must share one grid"));
        }
        times.push(f.time);
        msd.push(field_moments(f)?.variance);
    }
    MsdSeries::new(times, msd)
}

/// Both sides of the first and second time-derivative identities for the variance.
///
/// The second identity is
/// `6⟨DD″⟩ + 4⟨D′²⟩ − 2⟨D′⟩² + 2⟨Δs DD‴⟩ + 2⟨Δs D′D″⟩`, obtained by applying the
/// generator `∂ₛ D ∂ₛ` twice to the variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck {
    pub first_numeric: f64,
    pub first_moments: f64,
    pub second_numeric: f64,
    pub second_moments: f64,
}

impl DerivativeCheck {
    pub fn first_residual(&self) -> f64 {
        (self.first_numeric - self.first_moments).abs()
    }

    pub fn second_residual(&self) -> f64 {
        (self.second_numeric - self.second_moments).abs()
    }
}

/// Right-hand sides of the derivative identities evaluated against `field`.
pub fn identity_moments(field: &Field1D, profile: &DeffProfile) -> Result<(f64, f64)> {
    let m = field_moments(field)?;
    let grid = &field.grid;
    let mut acc = [0.0; 6];
    for (s, p) in grid.centers().zip(&field.values) {
        let [d, d1, d2, d3] = profile.derivatives(s);
        let ds = s - m.mean;
        let w = p * grid.spacing() / m.mass;
        acc[0] += w * d;
        acc[1] += w * ds * d1;
        acc[2] += w * d * d2;
        acc[3] += w * d1 * d1;
        acc[4] += w * d1;
        acc[5] += w * ds * (d * d3 + d1 * d2);
    }
    let first = 2.0 * acc[0] + 2.0 * acc[1];
    let second = 6.0 * acc[2] + 4.0 * acc[3] - 2.0 * acc[4] * acc[4] + 2.0 * acc[5];
    Ok((first, second))
}

/// Compares centred finite differences of the snapshot variances around `index` with the
/// moment identities. Snapshots `index ± 1` must be equally spaced in time.
pub fn msd_derivative_check(
    fields: &[Field1D],
    profile: &DeffProfile,
    index: usize,
) -> Result<DerivativeCheck> {
    if index == 0 || index + 1 >= fields.len() {
        return Err(Error::param("index", "needs a snapshot on each side"));
    }
    let (t0, t1, t2) = (fields[index - 1].time, fields[index].time, fields[index + 1].time);
    let dt = t1 - t0;
    if !(dt > 0.0) || ((t2 - t1) - dt).abs() > 1e-9 * dt {
        return Err(Error::param("fields", "neighbouring snapshots must be equally spaced"));
    }
    let v: Vec<f64> = fields[index - 1..=index + 1]
        .iter()
        .map(|f| field_moments(f).map(|m| m.variance))
        .collect::<Result<_>>()?;
    let (first, second) = identity_moments(&fields[index], profile)?;
    Ok(DerivativeCheck {
        first_numeric: (v[2] - v[0]) / (2.0 * dt),
        first_moments: first,
        second_numeric: (v[2] - 2.0 * v[1] + v[0]) / (dt * dt),
        second_moments: second,
    })
}

/// Minimum number of samples for the short-time fit.
pub const MIN_FIT_POINTS: usize = 5;

/// Least squares for `msd = a₁t + a₂t²` over samples with `t` in `window`.
pub fn fit_short_time(series: &MsdSeries, window: (f64, f64)) -> Result<MsdExpansion> {
    let pts: Vec<(f64, f64)> = series.window(window).map(|(_, t, m)| (t, m)).collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::param(
            "window",
            format!("holds {} samples, need {MIN_FIT_POINTS}", pts.len()),
        ));
    }
    let scale = pts.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::IllConditioned("all sample times are zero".into()));
    }
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(t, m) in &pts {
        let x = t / scale;
        s11 += x * x;
        s12 += x * x * x;
        s22 += x * x * x * x;
        r1 += x * m;
        r2 += x * x * m;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det > 1e-12 * s11 * s22) {
        return Err(Error::IllConditioned(format!(
            "normal matrix determinant {det:e} relative to {:e}",
            s11 * s22
        )));
    }
    let b1 = (r1 * s22 - r2 * s12) / det;
    let b2 = (r2 * s11 - r1 * s12) / det;
    Ok(MsdExpansion {
        a1: b1 / scale,
        a2: b2 / (scale * scale),
    })
}

/// Ordinary least-squares line `msd ≈ slope·t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the fit residuals.
    pub slope_stderr: f64,
}

pub fn fit_linear(series: &MsdSeries, window: (f64, f64)) -> Result<LinearFit> {
    let pts: Vec<(f64, f64)> = series.window(window).map(|(_, t, m)| (t, m)).collect();
    let n = pts.len();
    if n < 3 {
        return Err(Error::param("window", format!("holds {n} samples, need 3")));
    }
    let nf = n as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mm = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    if !(sxx > 1e-24 * tm * tm * nf) {
        return Err(Error::IllConditioned("sample times nearly coincide".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - mm)).sum();
    let slope = sxy / sxx;
    let intercept = mm - slope * tm;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (rss / (nf - 2.0) / sxx).sqrt(),
    })
}
