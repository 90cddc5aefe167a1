use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{FrameSample, Projection, TubeSpec};
use crate::Vec3;

use super::config::InitialCondition;

/// Bounce limit per step. Grazing paths creep along the concave wall in many short
/// chords; past the limit the end point is folded radially back inside instead.
pub const REFLECTION_CAP: usize = 1024;

/// One walker: Cartesian position plus its last tube coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub pos: Vec3,
    /// Last projected arc length (wrapped into `[0, L)` on periodic curves).
    pub s: f64,
    pub q2: f64,
    pub q3: f64,
    /// Arc length accumulated across periodic wraps.
    pub s_unwrapped: f64,
}

/// Per-particle stream: the master seed selects the key, the particle index the stream.
pub fn particle_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    particles: Vec<Particle>,
    rngs: Vec<ChaCha8Rng>,
    time: f64,
}

/// Outcome of one reflected displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectedStep {
    pub end: Vec3,
    pub s: f64,
    pub q2: f64,
    pub q3: f64,
    /// Total length of the broken path from start to end.
    pub path_length: f64,
    pub bounces: usize,
}

/// Root-finder iteration limit when locating a wall crossing.
const CROSSING_MAX_ITERS: usize = 60;

/// Moves `start` by `displacement`, mirroring off the wall until the end point is inside.
/// Past [`REFLECTION_CAP`] bounces the end point is folded radially instead.
///
/// Each wall crossing is located on the straight segment by a bracketed root search on
/// the projected radius, seeded with the crossing of the local cylinder. The remainder of
/// the segment is mirrored about the wall tangent plane at the crossing, so every bounce
/// preserves the path length.
pub fn reflect_step(
    tube: &TubeSpec,
    start: &Vec3,
    displacement: &Vec3,
    s_seed: f64,
) -> Result<ReflectedStep> {
    let eps = tube.epsilon();
    let eps2 = eps * eps;
    let mut seg_start = *start;
    let mut seg_end = start + displacement;
    let mut seed = s_seed;
    let mut path = 0.0;
    for bounces in 0..=REFLECTION_CAP {
        let (p, frame) = tube.project_with_frame(&seg_end, seed)?;
        let r2 = p.q2 * p.q2 + p.q3 * p.q3;
        if r2 <= eps2 {
            return Ok(ReflectedStep {
                end: seg_end,
                s: p.s,
                q2: p.q2,
                q3: p.q3,
                path_length: path + (seg_end - seg_start).norm(),
                bounces,
            });
        }
        if bounces == REFLECTION_CAP {
            let r = r2.sqrt();
            let folded = (2.0 * eps - r).clamp(0.0, eps);
            let (q2, q3) = (p.q2 * folded / r, p.q3 * folded / r);
            let end = tube.embed(p.s, q2, q3)?;
            return Ok(ReflectedStep {
                end,
                s: p.s,
                q2,
                q3,
                path_length: path + (end - seg_start).norm(),
                bounces,
            });
        }
        let d = seg_end - seg_start;
        let guess = cylinder_crossing(tube, &seg_start, &p, &frame, eps2);
        let (t, hit_s, normal) = locate_crossing(tube, &seg_start, &d, seed, p.s, guess, r2 - eps2)?;
        let hit = seg_start + d * t;
        path += d.norm() * t;
        let over = (1.0 - t) * d.dot(&normal);
        if over > 0.0 {
            seg_end -= normal * (2.0 * over);
        } else {
            // Grazing exit within rounding: pull the end point back radially.
            seg_end -= normal * (2.0 * (r2.sqrt() - eps));
        }
        seg_start = hit;
        seed = hit_s;
    }
    unreachable!("the bounce loop returns at the cap")
}

/// Crossing parameter of the segment with the cylinder of radius ε in the normal plane
/// at the projection of the segment end.
fn cylinder_crossing(
    tube: &TubeSpec,
    seg_start: &Vec3,
    p: &Projection,
    frame: &FrameSample,
    eps2: f64,
) -> f64 {
    let a = seg_start - tube.curve().point(p.s);
    let (a2, a3) = (a.dot(&frame.e2), a.dot(&frame.e3));
    let (d2, d3) = (p.q2 - a2, p.q3 - a3);
    let aa = d2 * d2 + d3 * d3;
    let bb = a2 * d2 + a3 * d3;
    let cc = a2 * a2 + a3 * a3 - eps2;
    if cc < 0.0 && aa > 0.0 {
        let disc = (bb * bb - aa * cc).sqrt();
        (-cc / (bb + disc)).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Illinois iteration for `r(t)² = ε²` on `[0, 1]`, with `t = 0` treated as inside.
///
/// Returns the crossing parameter, its arc length and the outward wall normal there.
fn locate_crossing(
    tube: &TubeSpec,
    seg_start: &Vec3,
    d: &Vec3,
    s_start: f64,
    s_end: f64,
    guess: f64,
    g_end: f64,
) -> Result<(f64, f64, Vec3)> {
    let eps2 = tube.epsilon().powi(2);
    let tol = 4.0 * f64::EPSILON * eps2;
    let (mut lo, mut hi) = ((0.0, -0.0f64, s_start), (1.0, g_end, s_end));
    let mut t = if guess > 0.0 && guess < 1.0 { guess } else { 0.5 };
    let mut side = 0i8;
    for _ in 0..CROSSING_MAX_ITERS {
        let seed = lo.2 + (hi.2 - lo.2) * (t - lo.0) / (hi.0 - lo.0);
        let (p, frame) = tube.project_with_frame(&(seg_start + d * t), seed)?;
        let r2 = p.q2 * p.q2 + p.q3 * p.q3;
        let mut g = r2 - eps2;
        if g.abs() <= tol || hi.0 - lo.0 <= f64::EPSILON {
            let r = r2.sqrt();
            let normal = if r > 0.0 {
                (frame.e2 * p.q2 + frame.e3 * p.q3) / r
            } else {
                *d / d.norm()
            };
            // A root where the path enters the tube is the wall it just left.
            if d.dot(&normal) > 0.0 || hi.0 - lo.0 <= f64::EPSILON {
                return Ok((t, p.s, normal));
            }
            g = -0.0;
        }
        if g <= 0.0 {
            lo = (t, g, p.s);
            if side == -1 {
                hi.1 *= 0.5;
            }
            side = -1;
        } else {
            hi = (t, g, p.s);
            if side == 1 {
                lo.1 *= 0.5;
            }
            side = 1;
        }
        t = if hi.1 - lo.1 > 0.0 {
            (lo.0 - lo.1 * (hi.0 - lo.0) / (hi.1 - lo.1)).clamp(lo.0, hi.0)
        } else {
            0.5 * (lo.0 + hi.0)
        };
        if t <= lo.0 || t >= hi.0 {
            t = 0.5 * (lo.0 + hi.0);
        }
    }
    Err(Error::WallCrossing {
        iterations: CROSSING_MAX_ITERS,
    })
}

impl ParticleEnsemble {
    pub fn new(tube: &TubeSpec, initial: InitialCondition, count: usize, seed: u64) -> Result<Self> {
        let mut rngs: Vec<ChaCha8Rng> = (0..count).map(|i| particle_rng(seed, i)).collect();
        let eps = tube.epsilon();
        let particles = rngs
            .iter_mut()
            .map(|rng| {
                let (s0, q2, q3) = match initial {
                    InitialCondition::Point { s0 } => (s0, 0.0, 0.0),
                    InitialCondition::UniformSection { s0 } => {
                        let r = eps * rng.random::<f64>().sqrt();
                        let th = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                        (s0, r * th.cos(), r * th.sin())
                    }
                };
                let pos = tube.embed(s0, q2, q3)?;
                Ok(Particle {
                    pos,
                    s: tube.curve().wrap(s0),
                    q2,
                    q3,
                    s_unwrapped: s0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParticleEnsemble {
            particles,
            rngs,
            time: 0.0,
        })
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Advances every particle by one Gaussian step of per-axis variance `2D·dt`.
    pub fn step(&mut self, tube: &TubeSpec, diffusivity: f64, dt: f64) -> Result<()> {
        if dt == 0.0 {
            return Ok(());
        }
        let sd = (2.0 * diffusivity * dt).sqrt();
        let curve = tube.curve();
        let period = curve.length().filter(|_| curve.is_periodic());
        self.particles
            .par_iter_mut()
            .zip(self.rngs.par_iter_mut())
            .try_for_each(|(p, rng)| {
                let xi = Vec3::new(
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                ) * sd;
                let r = reflect_step(tube, &p.pos, &xi, p.s)?;
                let s_new = curve.wrap(r.s);
                let mut ds = s_new - p.s;
                if let Some(l) = period {
                    if ds > 0.5 * l {
                        ds -= l;
                    } else if ds < -0.5 * l {
                        ds += l;
                    }
                }
                p.s_unwrapped += ds;
                p.s = s_new;
                p.pos = r.end;
                p.q2 = r.q2;
                p.q3 = r.q3;
                Ok::<(), Error>(())
            })?;
        self.time += dt;
        Ok(())
    }
}
