use serde::{Deserialize, Serialize};

use crate::jet::Jet;

/// One Fourier mode `amplitude · sin(wavenumber · s + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureMode {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub phase: f64,
}

/// Analytic curvature profile `κ(s) = mean + Σ aₖ sin(kₖ s + φₖ)`.
///
/// All derivatives and the heading `θ(s) = ∫₀ˢ κ` are evaluated in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaProfile {
    pub mean: f64,
    pub modes: Vec<CurvatureMode>,
}

impl KappaProfile {
    pub fn constant(kappa: f64) -> Self {
        KappaProfile {
            mean: kappa,
            modes: Vec::new(),
        }
    }

    /// `κ₀ (1 + α sin(2πs/L))`.
    pub fn sinusoidal(kappa0: f64, alpha: f64, period: f64) -> Self {
        KappaProfile {
            mean: kappa0,
            modes: vec![CurvatureMode {
                amplitude: kappa0 * alpha,
                wavenumber: 2.0 * std::f64::consts::PI / period,
                phase: 0.0,
            }],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.modes.iter().all(|m| m.amplitude == 0.0)
    }

    pub fn kappa(&self, s: f64) -> f64 {
        self.derivatives(s)[0]
    }

    /// `[κ, κ', κ'', κ''']` at `s`.
    pub fn derivatives(&self, s: f64) -> [f64; 4] {
        let mut d = [self.mean, 0.0, 0.0, 0.0];
        for m in &self.modes {
            let (sn, cs) = (m.wavenumber * s + m.phase).sin_cos();
            let k = m.wavenumber;
            d[0] += m.amplitude * sn;
            d[1] += m.amplitude * k * cs;
            d[2] -= m.amplitude * k * k * sn;
            d[3] -= m.amplitude * k * k * k * cs;
        }
        d
    }

    pub fn jet(&self, s: f64) -> Jet {
        Jet::from_derivatives(self.derivatives(s))
    }

    /// Heading angle `θ(s) = ∫₀ˢ κ(s') ds'`.
    pub fn heading(&self, s: f64) -> f64 {
        let mut th = self.mean * s;
        for m in &self.modes {
            if m.wavenumber == 0.0 {
                th += m.amplitude * m.phase.sin() * s;
            } else {
                th += m.amplitude / m.wavenumber * (m.phase.cos() - (m.wavenumber * s + m.phase).cos());
            }
        }
        th
    }

    /// Upper bound on `|κ|` (exact for a single mode).
    pub fn max_abs(&self) -> f64 {
        self.mean.abs() + self.modes.iter().map(|m| m.amplitude.abs()).sum::<f64>()
    }

    /// Lower bound on `κ` (exact for a single mode).
    pub fn min(&self) -> f64 {
        self.mean - self.modes.iter().map(|m| m.amplitude.abs()).sum::<f64>()
    }
}
