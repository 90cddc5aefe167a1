use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tube_diffusion::effective1d::{deff_circular, Boundary, Grid1D};
use tube_diffusion::geometry::{CrossSection, CurveSpec, TubeSpec};
use tube_diffusion::mc3d::*;
use tube_diffusion::{Error, Vec3};

fn torus(r: f64, eps: f64) -> TubeSpec {
    TubeSpec::new(
        CurveSpec::circle(r).unwrap(),
        CrossSection::Circular { radius: eps },
    )
    .unwrap()
}

fn straight(eps: f64) -> TubeSpec {
    TubeSpec::new(
        CurveSpec::line(Vec3::zeros(), Vec3::new(1.0, 1.0, 0.0)).unwrap(),
        CrossSection::Circular { radius: eps },
    )
    .unwrap()
}

#[test]
fn straight_tube_axial_motion_is_free() {
    let tube = straight(0.2);
    let (n, steps, dt) = (4000, 200, 4e-4);
    let mut ens = ParticleEnsemble::new(&tube, InitialCondition::Point { s0: 0.0 }, n, 3).unwrap();
    for _ in 0..steps {
        ens.step(&tube, 1.0, dt).unwrap();
    }
    let var = 2.0 * steps as f64 * dt;
    let xs: Vec<f64> = ens.particles().iter().map(|p| p.s_unwrapped).collect();
    let m = moments(&xs);
    assert!(m.mean.abs() <= 3.0 * (var / n as f64).sqrt());
    assert!((m.variance - var).abs() <= 3.0 * m.variance_stderr, "{m:?} vs {var}");
    // Gaussian shape: the standardized fourth moment is 3.
    let k4 = xs.iter().map(|x| (x - m.mean).powi(4)).sum::<f64>() / n as f64 / m.variance.powi(2);
    assert!((k4 - 3.0).abs() < 3.0 * (96.0 / n as f64).sqrt());
}

#[test]
fn zero_step_is_the_identity() {
    let tube = torus(1.0, 0.3);
    let mut ens =
        ParticleEnsemble::new(&tube, InitialCondition::UniformSection { s0: 1.0 }, 100, 9).unwrap();
    let before = ens.particles().to_vec();
    ens.step(&tube, 1.0, 0.0).unwrap();
    assert_eq!(ens.particles(), &before[..]);
}

#[test]
fn particles_stay_confined() {
    let tube = torus(1.0, 0.3);
    let eps2 = 0.09;
    let mut ens =
        ParticleEnsemble::new(&tube, InitialCondition::UniformSection { s0: 0.0 }, 2000, 5).unwrap();
    for _ in 0..300 {
        ens.step(&tube, 1.0, 9e-4).unwrap();
        for p in ens.particles() {
            assert!(p.q2 * p.q2 + p.q3 * p.q3 <= eps2);
            let q = tube.project(&p.pos, p.s).unwrap();
            assert!((q.q2 - p.q2).abs() < 1e-12 && (q.q3 - p.q3).abs() < 1e-12);
        }
    }
}

#[test]
fn reflection_preserves_path_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for tube in [torus(1.0, 0.3), straight(0.3)] {
        let mut bounced = 0;
        for _ in 0..2000 {
            let s = 2.0 * rng.random::<f64>();
            let r = 0.3 * (0.9 + 0.1 * rng.random::<f64>());
            let th = 2.0 * PI * rng.random::<f64>();
            let start = tube.embed(s, r * th.cos(), r * th.sin()).unwrap();
            let d = Vec3::new(
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
            ) * 0.12;
            let out = reflect_step(&tube, &start, &d, s).unwrap();
            assert!(out.q2 * out.q2 + out.q3 * out.q3 <= 0.09);
            if out.bounces > 0 {
                bounced += 1;
                let err = (out.path_length - d.norm()).abs();
                assert!(err <= 1e-12 * out.bounces as f64, "{err:e}");
            } else {
                assert!((out.end - (start + d)).norm() < 1e-15);
            }
        }
        assert!(bounced > 100);
    }
}

#[test]
fn straight_wall_reflection_is_specular() {
    // Along a straight tube the mirrored end point has the reflected radial offset.
    let tube = TubeSpec::new(
        CurveSpec::line(Vec3::zeros(), Vec3::z()).unwrap(),
        CrossSection::Circular { radius: 1.0 },
    )
    .unwrap();
    let start = Vec3::new(0.5, 0.0, 0.0);
    let out = reflect_step(&tube, &start, &Vec3::new(1.0, 0.0, 0.25), 0.0).unwrap();
    assert_eq!(out.bounces, 1);
    assert!((out.end - Vec3::new(0.5, 0.0, 0.25)).norm() < 1e-14);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let tube = torus(1.0, 0.3);
    let runs: Vec<McResult> = [1, 2, 8]
        .iter()
        .map(|&t| {
            let mut cfg = McConfig::new(600, 5e-4, vec![0.01, 0.02, 0.05], 77);
            cfg.threads = Some(t);
            cfg.batches = 6;
            run(&tube, &cfg, None).unwrap()
        })
        .collect();
    for r in &runs[1..] {
        let bits = |x: &McResult| x.msd.msd.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(r), bits(&runs[0]));
        assert_eq!(r.batch_msd, runs[0].batch_msd);
    }
}

#[test]
fn seeds_select_distinct_streams() {
    let a: f64 = particle_rng(1, 0).random();
    let b: f64 = particle_rng(1, 1).random();
    let c: f64 = particle_rng(2, 0).random();
    assert!(a != b && a != c);
    assert_eq!(a, particle_rng(1, 0).random::<f64>());
}

#[test]
fn straight_tube_msd_is_two_d_t() {
    let tube = straight(0.1);
    let times: Vec<f64> = (1..=5).map(|k| 0.02 * k as f64).collect();
    let mut cfg = McConfig::new(5000, 1e-4, times, 12);
    cfg.diffusivity = 0.5;
    let r = run(&tube, &cfg, None).unwrap();
    let se = r.msd.stderr.as_ref().unwrap();
    for ((t, m), e) in r.msd.times.iter().zip(&r.msd.msd).zip(se) {
        assert!((m - t).abs() <= 3.0 * e, "t = {t}: {m} ± {e}");
    }
}

#[test]
fn projection_of_a_point_ensemble_is_a_spike() {
    let tube = torus(1.0, 0.3);
    let ens = ParticleEnsemble::new(&tube, InitialCondition::Point { s0: 0.5 }, 50, 1).unwrap();
    let g = Grid1D::new(20, 2.0 * PI, 0.0, Boundary::Periodic).unwrap();
    let f = project_ensemble(&ens, &g).unwrap();
    let hit = g.locate(0.5).unwrap();
    assert!((f.values[hit] * g.spacing() - 1.0).abs() < 1e-15);
    assert!((f.mass() - 1.0).abs() < 1e-14);
    let open = Grid1D::new(20, 0.2, 0.0, Boundary::Reflecting).unwrap();
    assert!(matches!(
        project_ensemble(&ens, &open),
        Err(Error::OutsideGrid { .. })
    ));
}

#[test]
fn small_torus_relaxes_to_a_uniform_line_density() {
    let tube = torus(0.2, 0.06);
    let l = 2.0 * PI * 0.2;
    let n = 3000;
    let mut cfg = McConfig::new(n, 3.6e-5, vec![0.3], 4);
    cfg.batches = 10;
    let g = Grid1D::new(10, l, 0.0, Boundary::Periodic).unwrap();
    let r = run(&tube, &cfg, Some(&g)).unwrap();
    let f = &r.histograms[0];
    let p = 0.1;
    let sd = (p * (1.0 - p) / n as f64).sqrt();
    for v in &f.values {
        assert!((v * g.spacing() - p).abs() <= 3.0 * sd, "{:?}", f.values);
    }
}

#[test]
fn torus_slope_is_near_two_deff() {
    let tube = torus(1.0, 0.3);
    let times: Vec<f64> = (1..=12).map(|k| 0.05 * k as f64).collect();
    let cfg = McConfig::new(4000, 4e-4, times, 31);
    let r = run(&tube, &cfg, None).unwrap();
    let s = r.slope((0.3, 0.6)).unwrap();
    let want = 2.0 * deff_circular(1.0, 1.0, 0.3).unwrap();
    assert!((s.slope - want).abs() <= 4.0 * s.stderr, "{s:?}");
}

#[test]
fn config_validation() {
    let tube = torus(1.0, 0.3);
    let ok = McConfig::new(100, 8e-4, vec![0.01], 0);
    assert!(ok.validate(&tube).is_ok());
    let coarse = McConfig::new(100, 1e-3, vec![0.01], 0);
    assert!(coarse.validate(&tube).is_err());
    let mut relaxed = coarse.clone();
    relaxed.dt_factor = 0.02;
    assert!(relaxed.validate(&tube).is_ok());
    assert!(McConfig::new(100, 1e-4, vec![0.02, 0.01], 0).validate(&tube).is_err());
    let quad = TubeSpec::new(
        CurveSpec::circle(1.0).unwrap(),
        CrossSection::Quadrangular {
            thickness: 0.3,
            width: 0.3,
        },
    )
    .unwrap();
    assert!(ok.validate(&quad).is_err());
}

#[test]
fn section_histogram_of_the_stationary_measure() {
    // Exact samples from (1 − κq²)/(πε²) by rejection pass the goodness-of-fit test.
    let (kappa, eps) = (1.0, 0.3);
    let bins = SectionBins {
        epsilon: eps,
        radial: 6,
        angular: 12,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut samples = Vec::new();
    while samples.len() < 50_000 {
        let (v, w) = (eps * (2.0 * rng.random::<f64>() - 1.0), eps * (2.0 * rng.random::<f64>() - 1.0));
        if v * v + w * w <= eps * eps && rng.random::<f64>() * (1.0 + kappa * eps) <= 1.0 - kappa * v {
            samples.push((v, w));
        }
    }
    let counts = bins.histogram(samples.iter().copied());
    let t = chi_square(&counts, &bins.expected(kappa)).unwrap();
    assert!(t.p_value > 0.01, "{t:?}");
    // The flat density is rejected decisively.
    let flat = chi_square(&counts, &bins.expected(0.0)).unwrap();
    assert!(flat.p_value < 1e-6, "{flat:?}");
}

/// Halving dt leaves the torus slope unchanged within statistical error at 10⁵ particles.
#[test]
#[ignore = "about five minutes on one core"]
fn slope_is_robust_to_halving_dt() {
    let tube = torus(1.0, 0.3);
    let times: Vec<f64> = (1..=30).map(|k| 0.05 * k as f64).collect();
    let slope = |dt: f64| {
        let cfg = McConfig::new(100_000, dt, times.clone(), 99);
        run(&tube, &cfg, None).unwrap().slope((0.45, 1.5)).unwrap()
    };
    let (a, b) = (slope(4e-4), slope(2e-4));
    let se = a.stderr.hypot(b.stderr);
    assert!((a.slope - b.slope).abs() < se, "{a:?} vs {b:?}");
}

#[test]
fn slope_is_robust_to_halving_dt_small() {
    let tube = torus(1.0, 0.3);
    let times: Vec<f64> = (1..=12).map(|k| 0.05 * k as f64).collect();
    let slope = |dt: f64| {
        let cfg = McConfig::new(3000, dt, times.clone(), 5);
        run(&tube, &cfg, None).unwrap().slope((0.3, 0.6)).unwrap()
    };
    let (a, b) = (slope(8e-4), slope(4e-4));
    let se = a.stderr.hypot(b.stderr);
    assert!((a.slope - b.slope).abs() < 3.0 * se, "{a:?} vs {b:?}");
}

#[test]
fn grazing_path_along_the_wall_resolves() {
    // Starts on the wall and leaves almost tangentially: hundreds of short chords.
    let tube = torus(0.2, 0.06);
    let pos = Vec3::new(-0.219_291_252_424_408_06, 0.112_500_523_994_521_26, 0.037_960_480_514_981_285);
    let xi = Vec3::new(0.011_541_909_069_797_284, 0.006_962_367_568_823_911, 0.008_696_365_746_355_76);
    let out = reflect_step(&tube, &pos, &xi, 0.533_516_874_244_403_7).unwrap();
    assert!(out.bounces > 64);
    assert!(out.q2.hypot(out.q3) <= 0.06);
}
