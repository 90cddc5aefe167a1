use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CrossSection, TubeSpec};

/// Default bound `c` in `dt ≤ c·ε²/D`.
pub const DEFAULT_DT_FACTOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// Every particle on the centerline at `s0`.
    Point { s0: f64 },
    /// Uniform over the flat disk at `s0`.
    UniformSection { s0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub particles: usize,
    pub dt: f64,
    /// Ascending, positive; the last one is the total simulated time.
    pub snapshot_times: Vec<f64>,
    pub seed: u64,
    pub diffusivity: f64,
    pub initial: InitialCondition,
    /// `c` in `dt ≤ c·ε²/D`.
    pub dt_factor: f64,
    /// Contiguous particle batches used for the slope standard error.
    pub batches: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(particles: usize, dt: f64, snapshot_times: Vec<f64>, seed: u64) -> Self {
        McConfig {
            particles,
            dt,
            snapshot_times,
            seed,
            diffusivity: 1.0,
            initial: InitialCondition::Point { s0: 0.0 },
            dt_factor: DEFAULT_DT_FACTOR,
            batches: 20,
            threads: None,
        }
    }

    pub fn total_time(&self) -> f64 {
        self.snapshot_times.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self, tube: &TubeSpec) -> Result<()> {
        if !matches!(tube.cross_section(), CrossSection::Circular { .. }) {
            return Err(Error::param(
                "cross_section",
                "Brownian dynamics supports circular sections only",
            ));
        }
        let curve = tube.curve();
        if curve.length().is_some() && !curve.is_periodic() {
            return Err(Error::param(
                "curve",
                "Brownian dynamics needs a closed or unbounded centerline",
            ));
        }
        if self.particles == 0 {
            return Err(Error::param("particles", "must be positive"));
        }
        if !(self.diffusivity > 0.0) || !self.diffusivity.is_finite() {
            return Err(Error::param("diffusivity", "must be positive"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", "must be positive"));
        }
        if !(self.dt_factor > 0.0) {
            return Err(Error::param("dt_factor", "must be positive"));
        }
        let eps = tube.epsilon();
        let max_dt = self.dt_factor * eps * eps / self.diffusivity;
        if self.dt > max_dt * (1.0 + 1e-12) {
            return Err(Error::param(
                "dt",
                format!("{:e} exceeds {:e} = c·ε²/D; walls would be under-resolved", self.dt, max_dt),
            ));
        }
        if self.snapshot_times.is_empty() {
            return Err(Error::param("snapshot_times", "need at least one snapshot"));
        }
        let mut prev = 0.0;
        for &t in &self.snapshot_times {
            if !(t > prev) || !t.is_finite() {
                return Err(Error::param(
                    "snapshot_times",
                    "must be positive and strictly ascending",
                ));
            }
            prev = t;
        }
        if self.batches == 0 || self.batches > self.particles {
            return Err(Error::param("batches", "must lie in 1..=particles"));
        }
        if self.threads == Some(0) {
            return Err(Error::param("threads", "must be positive"));
        }
        Ok(())
    }
}
