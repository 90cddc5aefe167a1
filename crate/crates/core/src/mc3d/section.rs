use std::f64::consts::PI;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Annular-sector binning of the disk of radius `epsilon`: radial edges at equal flat area,
/// angular edges uniform, angle measured from the `q²` axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionBins {
    pub epsilon: f64,
    pub radial: usize,
    pub angular: usize,
}

impl SectionBins {
    pub fn len(&self) -> usize {
        self.radial * self.angular
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn radius_edge(&self, k: usize) -> f64 {
        self.epsilon * (k as f64 / self.radial as f64).sqrt()
    }

    fn angle_edge(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.angular as f64
    }

    pub fn index(&self, q2: f64, q3: f64) -> usize {
        let r2 = (q2 * q2 + q3 * q3) / (self.epsilon * self.epsilon);
        let ir = ((r2 * self.radial as f64) as usize).min(self.radial - 1);
        let th = q3.atan2(q2).rem_euclid(2.0 * PI);
        let it = ((th / (2.0 * PI) * self.angular as f64) as usize).min(self.angular - 1);
        ir * self.angular + it
    }

    pub fn histogram(&self, samples: impl IntoIterator<Item = (f64, f64)>) -> Vec<u64> {
        let mut counts = vec![0u64; self.len()];
        for (q2, q3) in samples {
            counts[self.index(q2, q3)] += 1;
        }
        counts
    }

    /// Bin probabilities under the density `(1 − κ q²)/(πε²)`.
    pub fn expected(&self, kappa: f64) -> Vec<f64> {
        let area = PI * self.epsilon * self.epsilon;
        let mut p = Vec::with_capacity(self.len());
        for ir in 0..self.radial {
            let (r0, r1) = (self.radius_edge(ir), self.radius_edge(ir + 1));
            for it in 0..self.angular {
                let (t0, t1) = (self.angle_edge(it), self.angle_edge(it + 1));
                let flat = 0.5 * (r1 * r1 - r0 * r0) * (t1 - t0);
                let tilt = kappa * (r1.powi(3) - r0.powi(3)) / 3.0 * (t1.sin() - t0.sin());
                p.push((flat - tilt) / area);
            }
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `counts` against `probabilities`.
pub fn chi_square(counts: &[u64], probabilities: &[f64]) -> Result<ChiSquareTest> {
    if counts.len() != probabilities.len() || counts.len() < 2 {
        return Err(Error::param("counts", "need matching bins, at least two"));
    }
    let n: u64 = counts.iter().sum();
    let n = n as f64;
    let mut stat = 0.0;
    for (&c, &p) in counts.iter().zip(probabilities) {
        if !(p > 0.0) {
            return Err(Error::param("probabilities", "must be positive"));
        }
        let e = n * p;
        stat += (c as f64 - e).powi(2) / e;
    }
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::param("dof", e.to_string()))?;
    Ok(ChiSquareTest {
        statistic: stat,
        dof,
        p_value: dist.sf(stat),
    })
}
