use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

use super::deff::DeffProfile;
use super::solver::{Boundary, Field1D, Grid1D};

/// Boundary data for the steady state, imposed at the grid ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StaticBc {
    Densities { left: f64, right: f64 },
    /// Density at the left end and the (constant) flux `J = −D_eff ∂ₛφ`.
    DensityAndFlux { left_density: f64, flux: f64 },
}

/// `φ(s) = C₁ + C₂ ∫ ds′/D_eff(s′)`, integral taken from the grid origin.
#[derive(Debug, Clone)]
pub struct StaticSolution {
    profile: DeffProfile,
    origin: f64,
    c1: f64,
    c2: f64,
    rule: GaussLegendre,
    /// Resistance integral at each node `origin + k·panel`.
    nodes: Vec<f64>,
    panel: f64,
    field: Field1D,
}

const PANELS_PER_CELL: usize = 4;

impl StaticSolution {
    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Cell-centre samples of the density.
    pub fn field(&self) -> &Field1D {
        &self.field
    }

    /// `∫_{origin}^{s} ds′/D_eff(s′)`.
    pub fn resistance(&self, s: f64) -> f64 {
        let x = s - self.origin;
        let k = ((x / self.panel).floor().max(0.0) as usize).min(self.nodes.len() - 1);
        let a = self.origin + k as f64 * self.panel;
        self.nodes[k] + self.rule.integrate(a, s, |u| 1.0 / self.profile.value(u))
    }

    pub fn density(&self, s: f64) -> f64 {
        self.c1 + self.c2 * self.resistance(s)
    }

    pub fn gradient(&self, s: f64) -> f64 {
        self.c2 / self.profile.value(s)
    }

    /// `−D_eff ∂ₛφ`, identically `−C₂`.
    pub fn flux(&self, s: f64) -> f64 {
        -self.profile.value(s) * self.gradient(s)
    }
}

/// Steady state of the effective equation with the given two boundary data.
pub fn static_solution(profile: &DeffProfile, grid: Grid1D, bc: StaticBc) -> Result<StaticSolution> {
    if grid.boundary() == Boundary::Periodic {
        return match bc {
            StaticBc::Densities { left, right } if left == right => {
                build(profile, grid, left, 0.0)
            }
            StaticBc::DensityAndFlux { left_density, flux } if flux == 0.0 => {
                build(profile, grid, left_density, 0.0)
            }
            _ => Err(Error::InconsistentBoundary(
                "a periodic domain admits only the constant steady state".into(),
            )),
        };
    }
    match bc {
        StaticBc::Densities { left, right } => {
            let mut sol = build(profile, grid, left, 0.0)?;
            let total = sol.resistance(grid.end());
            let c2 = (right - left) / total;
            sol.c2 = c2;
            sol.field = sample(&sol, grid);
            Ok(sol)
        }
        StaticBc::DensityAndFlux { left_density, flux } => {
            build(profile, grid, left_density, -flux)
        }
    }
}

fn build(profile: &DeffProfile, grid: Grid1D, c1: f64, c2: f64) -> Result<StaticSolution> {
    for v in [c1, c2] {
        if !v.is_finite() {
            return Err(Error::param("bc", "boundary data must be finite"));
        }
    }
    let rule = GaussLegendre::new(12);
    let panels = grid.cells() * PANELS_PER_CELL;
    let panel = grid.length() / panels as f64;
    let mut nodes = Vec::with_capacity(panels + 1);
    let mut acc = 0.0;
    nodes.push(acc);
    for k in 0..panels {
        let a = grid.origin() + k as f64 * panel;
        acc += rule.integrate(a, a + panel, |u| 1.0 / profile.value(u));
        nodes.push(acc);
    }
    let mut sol = StaticSolution {
        profile: profile.clone(),
        origin: grid.origin(),
        c1,
        c2,
        rule,
        nodes,
        panel,
        field: Field1D::uniform(grid, 0.0),
    };
    sol.field = sample(&sol, grid);
    Ok(sol)
}

fn sample(sol: &StaticSolution, grid: Grid1D) -> Field1D {
    Field1D {
        values: grid.centers().map(|s| sol.density(s)).collect(),
        grid,
        time: 0.0,
    }
}
