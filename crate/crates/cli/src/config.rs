//! Scenario configuration: one TOML file, every table optional, flag overrides on top.

use serde::{Deserialize, Serialize};
use tube_diffusion::effective1d::StaticBc;
use tube_diffusion::geometry::{curve_from_curvature, CrossSection, CurveSpec, KappaProfile, TubeSpec};
use tube_diffusion::mc3d::InitialCondition;
use tube_diffusion::Vec3;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Frames,
    Deff,
    Solve1d,
    Mc3d,
    MsdCompare,
    Static,
    Fluct,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Frames => "frames",
            ScenarioKind::Deff => "deff",
            ScenarioKind::Solve1d => "solve1d",
            ScenarioKind::Mc3d => "mc3d",
            ScenarioKind::MsdCompare => "msd-compare",
            ScenarioKind::Static => "static",
            ScenarioKind::Fluct => "fluct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveConfig {
    Circle {
        radius: f64,
    },
    Helix {
        radius: f64,
        omega: f64,
        mu: f64,
    },
    Line {
        #[serde(default = "z_axis")]
        direction: [f64; 3],
    },
    /// Plane curve with `κ(s) = κ₀(1 + α sin(2πs/period))`.
    Curvature {
        kappa0: f64,
        #[serde(default)]
        alpha: f64,
        period: f64,
        length: f64,
        #[serde(default)]
        closed: bool,
    },
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SectionConfig {
    Circular { radius: f64 },
    Quadrangular { thickness: f64, width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeConfig {
    pub curve: CurveConfig,
    pub section: SectionConfig,
}

impl Default for TubeConfig {
    fn default() -> Self {
        TubeConfig {
            curve: CurveConfig::Circle { radius: 1.0 },
            section: SectionConfig::Circular { radius: 0.3 },
        }
    }
}

impl TubeConfig {
    pub fn build(&self) -> Result<TubeSpec, CliError> {
        let curve = match self.curve.clone() {
            CurveConfig::Circle { radius } => CurveSpec::circle(radius),
            CurveConfig::Helix { radius, omega, mu } => CurveSpec::helix(radius, omega, mu),
            CurveConfig::Line { direction } => {
                CurveSpec::line(Vec3::zeros(), Vec3::from(direction))
            }
            CurveConfig::Curvature {
                kappa0,
                alpha,
                period,
                length,
                closed,
            } => curve_from_curvature(KappaProfile::sinusoidal(kappa0, alpha, period), length, closed),
        }
        .map_err(|e| CliError::config("tube.curve", e))?;
        let section = match self.section {
            SectionConfig::Circular { radius } => CrossSection::Circular { radius },
            SectionConfig::Quadrangular { thickness, width } => {
                CrossSection::Quadrangular { thickness, width }
            }
        };
        TubeSpec::new(curve, section).map_err(|e| CliError::config("tube", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FramesConfig {
    pub samples: usize,
}

impl Default for FramesConfig {
    fn default() -> Self {
        FramesConfig { samples: 101 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeffTableConfig {
    pub rows: usize,
    pub kappa_eps_max: f64,
    pub quadrature_order: usize,
}

impl Default for DeffTableConfig {
    fn default() -> Self {
        DeffTableConfig {
            rows: 20,
            kappa_eps_max: 0.95,
            quadrature_order: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialField {
    Delta { s0: f64 },
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Solve1dConfig {
    pub cells: usize,
    pub theta: f64,
    /// Maximum step; defaults to half the monotonicity bound.
    pub dt: Option<f64>,
    pub times: Vec<f64>,
    pub initial: InitialField,
    /// Half-width of the domain around `s0` on curves without a finite length, and of
    /// the unwrapped line used by `msd-compare`. Defaults to 5 for `solve1d` and to
    /// eight diffusion lengths for `msd-compare`.
    pub half_width: Option<f64>,
}

impl Default for Solve1dConfig {
    fn default() -> Self {
        Solve1dConfig {
            cells: 512,
            theta: 0.5,
            dt: None,
            times: (1..=10).map(|k| 0.01 * k as f64).collect(),
            initial: InitialField::Delta { s0: 0.0 },
            half_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Mc3dConfig {
    pub particles: usize,
    /// Time step; defaults to `dt_factor·ε²/D`.
    pub dt: Option<f64>,
    pub dt_factor: f64,
    pub times: Vec<f64>,
    pub batches: usize,
    pub initial: InitialCondition,
}

impl Default for Mc3dConfig {
    fn default() -> Self {
        Mc3dConfig {
            particles: 10_000,
            dt: None,
            dt_factor: tube_diffusion::mc3d::DEFAULT_DT_FACTOR,
            times: (1..=20).map(|k| 0.05 * k as f64).collect(),
            batches: 20,
            initial: InitialCondition::Point { s0: 0.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct MsdCompareConfig {
    /// Slope window; defaults to `[5ε²/D, last snapshot]`.
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaticConfig {
    pub cells: usize,
    pub bc: StaticBc,
    /// Domain length on curves without a finite length.
    pub length: f64,
}

impl Default for StaticConfig {
    fn default() -> Self {
        StaticConfig {
            cells: 200,
            bc: StaticBc::DensityAndFlux {
                left_density: 1.0,
                flux: 0.0,
            },
            length: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluctConfig {
    pub kappa: f64,
    pub kappa_s: f64,
    pub tau: f64,
    /// Section radius; defaults to the tube's.
    pub epsilon: Option<f64>,
    pub dphi_ds: f64,
    pub d2phi_ds2: f64,
    /// Grid points per axis of the `(v, w)` slice.
    pub points: usize,
    pub quadrature_order: usize,
}

impl Default for FluctConfig {
    fn default() -> Self {
        FluctConfig {
            kappa: 1.0,
            kappa_s: 0.0,
            tau: 0.0,
            epsilon: None,
            dphi_ds: 1.0,
            d2phi_ds2: 0.0,
            points: 41,
            quadrature_order: 16,
        }
    }
}

/// Complete description of one run. Serialized (after overrides) into the manifest hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// If set, must match the subcommand.
    pub scenario: Option<ScenarioKind>,
    pub diffusivity: f64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub tube: TubeConfig,
    pub frames: FramesConfig,
    pub deff: DeffTableConfig,
    pub solve1d: Solve1dConfig,
    pub mc3d: Mc3dConfig,
    pub msd_compare: MsdCompareConfig,
    #[serde(rename = "static")]
    pub static_: StaticConfig,
    pub fluct: FluctConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario: None,
            diffusivity: 1.0,
            seed: 0,
            threads: None,
            tube: TubeConfig::default(),
            frames: FramesConfig::default(),
            deff: DeffTableConfig::default(),
            solve1d: Solve1dConfig::default(),
            mc3d: Mc3dConfig::default(),
            msd_compare: MsdCompareConfig::default(),
            static_: StaticConfig::default(),
            fluct: FluctConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config {
            field: "config".into(),
            reason: e.to_string(),
        })
    }

    /// Checks the fields the chosen scenario reads.
    pub fn validate(&self, kind: ScenarioKind) -> Result<(), CliError> {
        let bad = |field: &str, reason: &str| {
            Err(CliError::Config {
                field: field.into(),
                reason: reason.into(),
            })
        };
        if let Some(k) = self.scenario {
            if k != kind {
                return bad("scenario", &format!("config is for `{}`", k.name()));
            }
        }
        if !(self.diffusivity > 0.0) || !self.diffusivity.is_finite() {
            return bad("diffusivity", "must be positive");
        }
        if self.threads == Some(0) {
            return bad("threads", "must be positive");
        }
        match kind {
            ScenarioKind::Frames if self.frames.samples < 2 => bad("frames.samples", "need at least 2"),
            ScenarioKind::Deff if self.deff.rows < 2 => bad("deff.rows", "need at least 2"),
            ScenarioKind::Deff if !(self.deff.kappa_eps_max > 0.0 && self.deff.kappa_eps_max < 1.0) => {
                bad("deff.kappa_eps_max", "must lie in (0, 1)")
            }
            ScenarioKind::Solve1d | ScenarioKind::MsdCompare if self.solve1d.times.is_empty() => {
                bad("solve1d.times", "need at least one snapshot")
            }
            ScenarioKind::Solve1d | ScenarioKind::MsdCompare
                if self.solve1d.half_width.is_some_and(|h| !(h > 0.0)) =>
            {
                bad("solve1d.half_width", "must be positive")
            }
            ScenarioKind::Fluct if self.fluct.points < 2 => bad("fluct.points", "need at least 2"),
            ScenarioKind::Static if !(self.static_.length > 0.0) => bad("static.length", "must be positive"),
            _ => Ok(()),
        }
    }
}
