//! Reflecting Brownian dynamics inside a tube.
//!
//! Walkers take isotropic Gaussian steps in space and mirror off the wall, which realizes the
//! no-flux condition. Their arc-length coordinates give an independent estimate of the MSD and
//! of the projected line density. Each particle draws from its own counter-selected ChaCha
//! stream, so results do not depend on the number of worker threads.

mod config;
mod ensemble;
mod run;
mod section;

pub use config::{InitialCondition, McConfig, DEFAULT_DT_FACTOR};
pub use ensemble::{particle_rng, reflect_step, Particle, ParticleEnsemble, ReflectedStep, REFLECTION_CAP};
pub use run::{moments, project_ensemble, run, run_observed, run_with, McResult, SlopeEstimate, SnapshotMoments};
pub use section::{chi_square, ChiSquareTest, SectionBins};
