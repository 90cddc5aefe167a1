use rayon::ThreadPoolBuilder;

use crate::effective1d::{Boundary, Field1D, Grid1D};
use crate::error::{Error, Result};
use crate::geometry::TubeSpec;
use crate::msd::{fit_linear, MsdSeries};

use super::config::McConfig;
use super::ensemble::ParticleEnsemble;

/// Moments of the unwrapped arc length at one snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotMoments {
    pub mean: f64,
    pub variance: f64,
    /// Standard error of the sample variance, `√((m₄ − m₂²)/N)`.
    pub variance_stderr: f64,
}

/// Central moments of `values`, accumulated in index order.
pub fn moments(values: &[f64]) -> SnapshotMoments {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in values {
        let d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    SnapshotMoments {
        mean,
        variance: m2,
        variance_stderr: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    /// Variance of the unwrapped arc length, with standard errors.
    pub msd: MsdSeries,
    pub mean: Vec<f64>,
    /// `batch_msd[b][k]`: variance within particle batch `b` at snapshot `k`.
    pub batch_msd: Vec<Vec<f64>>,
    /// Projected line densities, when a grid was supplied.
    pub histograms: Vec<Field1D>,
}

/// Slope of the MSD with a batch-based standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

impl McResult {
    /// Linear fit of the MSD over `window`; the error is the spread of per-batch slopes.
    pub fn slope(&self, window: (f64, f64)) -> Result<SlopeEstimate> {
        let whole = fit_linear(&self.msd, window)?;
        let slopes = self
            .batch_msd
            .iter()
            .map(|b| {
                let series = MsdSeries::new(self.msd.times.clone(), b.clone())?;
                Ok(fit_linear(&series, window)?.slope)
            })
            .collect::<Result<Vec<f64>>>()?;
        let nb = slopes.len() as f64;
        let stderr = if slopes.len() > 1 {
            let m = slopes.iter().sum::<f64>() / nb;
            (slopes.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (nb - 1.0) / nb).sqrt()
        } else {
            f64::NAN
        };
        Ok(SlopeEstimate {
            slope: whole.slope,
            intercept: whole.intercept,
            stderr,
        })
    }
}

/// Mass-one histogram of particle arc lengths on `grid`.
///
/// Periodic grids use wrapped positions; other grids use the unwrapped coordinate.
pub fn project_ensemble(ensemble: &ParticleEnsemble, grid: &Grid1D) -> Result<Field1D> {
    if ensemble.is_empty() {
        return Err(Error::param("ensemble", "is empty"));
    }
    let mut counts = vec![0.0; grid.cells()];
    for p in ensemble.particles() {
        let s = match grid.boundary() {
            Boundary::Periodic => p.s,
            Boundary::Reflecting => p.s_unwrapped,
        };
        counts[grid.locate(s)?] += 1.0;
    }
    let norm = 1.0 / (ensemble.len() as f64 * grid.spacing());
    Field1D::new(
        *grid,
        counts.into_iter().map(|c| c * norm).collect(),
        ensemble.time(),
    )
}

/// Runs the ensemble to each snapshot time, calling `observe` at every snapshot.
///
/// Snapshot `k` is taken after `round(t_k/dt)` steps; the recorded time is the accumulated
/// step time.
pub fn run_observed(
    tube: &TubeSpec,
    config: &McConfig,
    mut observe: impl FnMut(&ParticleEnsemble) -> Result<()> + Send,
) -> Result<()> {
    config.validate(tube)?;
    let mut body = || -> Result<()> {
        let mut ens =
            ParticleEnsemble::new(tube, config.initial, config.particles, config.seed)?;
        let mut done = 0usize;
        for &t in &config.snapshot_times {
            let target = ((t / config.dt).round() as usize).max(done);
            for _ in done..target {
                ens.step(tube, config.diffusivity, config.dt)?;
            }
            done = target;
            observe(&ens)?;
        }
        Ok(())
    };
    match config.threads {
        Some(n) => ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param("threads", e.to_string()))?
            .install(body),
        None => body(),
    }
}

/// Brownian dynamics run returning the MSD series and optional `s` histograms.
pub fn run(tube: &TubeSpec, config: &McConfig, grid: Option<&Grid1D>) -> Result<McResult> {
    run_with(tube, config, grid, |_| Ok(()))
}

/// As [`run`], additionally handing every snapshot to `extra`.
pub fn run_with(
    tube: &TubeSpec,
    config: &McConfig,
    grid: Option<&Grid1D>,
    mut extra: impl FnMut(&ParticleEnsemble) -> Result<()> + Send,
) -> Result<McResult> {
    let nb = config.batches;
    let mut times = Vec::new();
    let mut msd = Vec::new();
    let mut stderr = Vec::new();
    let mut mean = Vec::new();
    let mut batch_msd = vec![Vec::new(); nb];
    let mut histograms = Vec::new();
    let mut buf = Vec::with_capacity(config.particles);
    run_observed(tube, config, |ens| {
        buf.clear();
        buf.extend(ens.particles().iter().map(|p| p.s_unwrapped));
        let m = moments(&buf);
        times.push(ens.time());
        msd.push(m.variance);
        stderr.push(m.variance_stderr);
        mean.push(m.mean);
        let n = buf.len();
        for (b, slot) in batch_msd.iter_mut().enumerate() {
            let (lo, hi) = (b * n / nb, (b + 1) * n / nb);
            slot.push(moments(&buf[lo..hi]).variance);
        }
        if let Some(g) = grid {
            histograms.push(project_ensemble(ens, g)?);
        }
        extra(ens)
    })?;
    let mut series = MsdSeries::new(times, msd)?;
    series.stderr = Some(stderr);
    Ok(McResult {
        msd: series,
        mean,
        batch_msd,
        histograms,
    })
}
