use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::deff::DeffProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    /// Zero flux through both ends.
    Reflecting,
}

/// Uniform cell-centred grid on `[origin, origin + length)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    cells: usize,
    length: f64,
    origin: f64,
    boundary: Boundary,
}

pub const MIN_CELLS: usize = 8;

impl Grid1D {
    pub fn new(cells: usize, length: f64, origin: f64, boundary: Boundary) -> Result<Self> {
        if cells < MIN_CELLS {
            return Err(Error::param("cells", format!("need at least {MIN_CELLS} cells")));
        }
        if !(length > 0.0) || !length.is_finite() || !origin.is_finite() {
            return Err(Error::param("length", "must be positive and finite"));
        }
        Ok(Grid1D {
            cells,
            length,
            origin,
            boundary,
        })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn end(&self) -> f64 {
        self.origin + self.length
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.spacing()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.cells).map(|i| self.center(i))
    }

    /// Cell containing `s` (wrapped on periodic grids).
    pub fn locate(&self, s: f64) -> Result<usize> {
        let x = match self.boundary {
            Boundary::Periodic => (s - self.origin).rem_euclid(self.length),
            Boundary::Reflecting => s - self.origin,
        };
        if !(x >= 0.0 && x < self.length) {
            return Err(Error::OutsideGrid {
                s,
                lo: self.origin,
                hi: self.end(),
            });
        }
        Ok(((x / self.spacing()) as usize).min(self.cells - 1))
    }
}

/// Quasi-1D density `φ(s)` as cell averages.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub values: Vec<f64>,
    pub grid: Grid1D,
    pub time: f64,
}

impl Field1D {
    pub fn new(grid: Grid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::param(
                "values",
                format!("expected {} cells, got {}", grid.cells(), values.len()),
            ));
        }
        Ok(Field1D { values, grid, time })
    }

    /// Flat field carrying `mass`.
    pub fn uniform(grid: Grid1D, mass: f64) -> Self {
        Field1D {
            values: vec![mass / grid.length(); grid.cells()],
            grid,
            time: 0.0,
        }
    }

    /// Point mass realized as `mass/h` in the cell containing `s0`.
    pub fn delta(grid: Grid1D, s0: f64, mass: f64) -> Result<Self> {
        let i = grid.locate(s0)?;
        let mut values = vec![0.0; grid.cells()];
        values[i] = mass / grid.spacing();
        Ok(Field1D {
            values,
            grid,
            time: 0.0,
        })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Field1D {
            values: grid.centers().map(f).collect(),
            grid,
            time: 0.0,
        }
    }

    /// `N = h Σ φᵢ`.
    pub fn mass(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }
}

/// Precomputed (cyclic) tridiagonal factorization of `I − θ dt A`.
struct Implicit {
    lower: Vec<f64>,
    // Thomas elimination coefficients for the (possibly modified) matrix.
    cprime: Vec<f64>,
    denom: Vec<f64>,
    // Sherman–Morrison data for the periodic case.
    cyclic: Option<Cyclic>,
}

struct Cyclic {
    beta: f64,
    gamma: f64,
    z: Vec<f64>,
    fact_den: f64,
}

impl Implicit {
    fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>, periodic: bool) -> Self {
        let n = diag.len();
        let mut d = diag.clone();
        let mut cyclic_parts = None;
        if periodic {
            let alpha = upper[n - 1];
            let beta = lower[0];
            let gamma = -diag[0];
            d[0] = diag[0] - gamma;
            d[n - 1] = diag[n - 1] - alpha * beta / gamma;
            cyclic_parts = Some((alpha, beta, gamma));
        }
        let mut cprime = vec![0.0; n];
        let mut denom = vec![0.0; n];
        denom[0] = d[0];
        cprime[0] = upper[0] / d[0];
        for i in 1..n {
            denom[i] = d[i] - lower[i] * cprime[i - 1];
            cprime[i] = if i + 1 < n { upper[i] / denom[i] } else { 0.0 };
        }
        let mut me = Implicit {
            lower,
            cprime,
            denom,
            cyclic: None,
        };
        if let Some((alpha, beta, gamma)) = cyclic_parts {
            let mut u = vec![0.0; n];
            u[0] = gamma;
            u[n - 1] = alpha;
            let z = me.thomas(&u);
            let fact_den = 1.0 + z[0] + beta * z[n - 1] / gamma;
            me.cyclic = Some(Cyclic {
                beta,
                gamma,
                z,
                fact_den,
            });
        }
        me
    }

    fn thomas(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut y = vec![0.0; n];
        y[0] = rhs[0] / self.denom[0];
        for i in 1..n {
            y[i] = (rhs[i] - self.lower[i] * y[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            y[i] -= self.cprime[i] * y[i + 1];
        }
        y
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let x = self.thomas(rhs);
        match &self.cyclic {
            None => x,
            Some(c) => {
                let n = x.len();
                let fact = (x[0] + c.beta * x[n - 1] / c.gamma) / c.fact_den;
                x.iter().zip(&c.z).map(|(xi, zi)| xi - fact * zi).collect()
            }
        }
    }
}

/// θ-scheme for `∂φ/∂t = ∂ₛ D_eff ∂ₛ φ` in flux form on a fixed grid.
///
/// Face diffusivities are arithmetic means of adjacent cell values; reflecting ends have
/// zero face diffusivity, so `h Σ φᵢ` is conserved by every step.
pub struct ThetaScheme {
    grid: Grid1D,
    theta: f64,
    /// `D_{i+1/2}` for `i = 0..n`; the last entry closes the ring (zero if reflecting).
    faces: Vec<f64>,
}

impl ThetaScheme {
    pub fn new(grid: Grid1D, profile: &DeffProfile, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::param("theta", "must lie in [0, 1]"));
        }
        let n = grid.cells();
        let cell: Vec<f64> = grid.centers().map(|s| profile.value(s)).collect();
        let mut faces: Vec<f64> = (0..n - 1).map(|i| 0.5 * (cell[i] + cell[i + 1])).collect();
        faces.push(match grid.boundary() {
            Boundary::Periodic => 0.5 * (cell[n - 1] + cell[0]),
            Boundary::Reflecting => 0.0,
        });
        Ok(ThetaScheme { grid, theta, faces })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// `D_{i-1/2}, D_{i+1/2}` of cell `i`.
    fn face_pair(&self, i: usize) -> (f64, f64) {
        let n = self.grid.cells();
        let left = if i == 0 { self.faces[n - 1] } else { self.faces[i - 1] };
        (left, self.faces[i])
    }

    fn max_face_sum(&self) -> f64 {
        (0..self.grid.cells())
            .map(|i| {
                let (l, r) = self.face_pair(i);
                l + r
            })
            .fold(0.0, f64::max)
    }

    /// Largest stable `dt` (infinite for `θ ≥ 1/2`).
    pub fn max_stable_dt(&self) -> f64 {
        if self.theta >= 0.5 {
            return f64::INFINITY;
        }
        let h = self.grid.spacing();
        h * h / ((1.0 - 2.0 * self.theta) * self.max_face_sum())
    }

    /// Largest `dt` preserving nonnegativity (infinite for fully implicit steps).
    pub fn monotone_dt_bound(&self) -> f64 {
        if self.theta >= 1.0 {
            return f64::INFINITY;
        }
        let h = self.grid.spacing();
        h * h / ((1.0 - self.theta) * self.max_face_sum())
    }

    /// `(Aφ)ᵢ = [D_{i+1/2}(φᵢ₊₁ − φᵢ) − D_{i−1/2}(φᵢ − φᵢ₋₁)] / h²`.
    pub fn apply(&self, phi: &[f64]) -> Vec<f64> {
        let n = phi.len();
        let h2 = self.grid.spacing().powi(2);
        (0..n)
            .map(|i| {
                let (dl, dr) = self.face_pair(i);
                let prev = phi[(i + n - 1) % n];
                let next = phi[(i + 1) % n];
                (dr * (next - phi[i]) - dl * (phi[i] - prev)) / h2
            })
            .collect()
    }

    fn factor(&self, dt: f64) -> Option<Implicit> {
        if self.theta == 0.0 {
            return None;
        }
        let n = self.grid.cells();
        let r = self.theta * dt / self.grid.spacing().powi(2);
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 0..n {
            let (dl, dr) = self.face_pair(i);
            lower[i] = -r * dl;
            upper[i] = -r * dr;
            diag[i] = 1.0 + r * (dl + dr);
        }
        Some(Implicit::new(
            lower,
            diag,
            upper,
            self.grid.boundary() == Boundary::Periodic,
        ))
    }

    fn step(&self, phi: &[f64], dt: f64, implicit: Option<&Implicit>) -> Vec<f64> {
        let a = self.apply(phi);
        let explicit = (1.0 - self.theta) * dt;
        let rhs: Vec<f64> = phi.iter().zip(&a).map(|(p, ap)| p + explicit * ap).collect();
        match implicit {
            Some(m) => m.solve(&rhs),
            None => rhs,
        }
    }

    /// Advances `field0` to each time in `times` (ascending), returning one snapshot per time.
    ///
    /// Each interval is split into equal steps no longer than `dt`.
    pub fn evolve(&self, field0: &Field1D, times: &[f64], dt: f64) -> Result<Vec<Field1D>> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", "must be positive"));
        }
        if field0.grid != self.grid {
            return Err(Error::param("field0", "grid differs from the scheme grid"));
        }
        let max_dt = self.max_stable_dt();
        if dt > max_dt {
            return Err(Error::CflViolation { dt, max_dt });
        }
        let mut t = field0.time;
        let mut phi = field0.values.clone();
        let mut cached: Option<(f64, Option<Implicit>)> = None;
        let mut out = Vec::with_capacity(times.len());
        for &target in times {
            if target < t - 1e-12 * t.abs().max(1.0) {
                return Err(Error::param("times", "snapshot times must be ascending"));
            }
            let span = target - t;
            if span > 0.0 {
                let steps = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                if cached.as_ref().map(|c| c.0) != Some(h) {
                    cached = Some((h, self.factor(h)));
                }
                let implicit = cached.as_ref().and_then(|c| c.1.as_ref());
                for _ in 0..steps {
                    phi = self.step(&phi, h, implicit);
                }
            }
            t = target;
            out.push(Field1D {
                values: phi.clone(),
                grid: self.grid,
                time: t,
            });
        }
        Ok(out)
    }
}

/// Evolves `field0` under `profile` with the θ-scheme, one snapshot per requested time.
pub fn solve(
    field0: &Field1D,
    profile: &DeffProfile,
    times: &[f64],
    dt: f64,
    theta: f64,
) -> Result<Vec<Field1D>> {
    ThetaScheme::new(field0.grid, profile, theta)?.evolve(field0, times, dt)
}
