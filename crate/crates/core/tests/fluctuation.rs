use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tube_diffusion::fluctuation::*;

/// Disk integral: 12-point Gauss–Legendre in `r`, trapezoid in `θ` (exact for the
/// trigonometric polynomials that polynomial integrands produce).
fn disk(eps: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    const X: [f64; 6] = [
        0.125_233_408_511_468_9,
        0.367_831_498_998_180_2,
        0.587_317_954_286_617_4,
        0.769_902_674_194_304_7,
        0.904_117_256_370_474_9,
        0.981_560_634_246_719_3,
    ];
    const W: [f64; 6] = [
        0.249_147_045_813_402_8,
        0.233_492_536_538_354_8,
        0.203_167_426_723_065_9,
        0.160_078_328_543_346_2,
        0.106_939_325_995_318_4,
        0.047_175_336_386_511_8,
    ];
    let m = 64;
    let mut acc = 0.0;
    for (x, w) in X.iter().flat_map(|x| [*x, -*x]).zip(W.iter().flat_map(|w| [*w, *w])) {
        let r = 0.5 * eps * (1.0 + x);
        let wr = 0.5 * eps * w * r;
        for k in 0..m {
            let th = 2.0 * PI * k as f64 / m as f64;
            acc += wr * (2.0 * PI / m as f64) * f(r * th.cos(), r * th.sin());
        }
    }
    acc
}

fn params(kappa: f64, eps: f64) -> FluctuationParams {
    FluctuationParams {
        kappa,
        kappa_s: 0.3,
        tau: 0.7,
        epsilon: eps,
        dphi_ds: 1.0,
        d2phi_ds2: 2.0,
    }
}

#[test]
fn poisson_identities_hold_exactly() {
    for eps in [0.1, 0.5, 1.0, 3.0] {
        let fg = fg_polynomials(eps, 0.2);
        assert_eq!(fg.f.laplacian(), Poly2::v());
        assert_eq!(fg.g.laplacian(), Poly2::w());
    }
}

#[test]
fn poisson_identities_at_random_points() {
    let fg = fg_polynomials(0.7, 0.9);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-3;
    for _ in 0..1000 {
        let r = 0.7 * rng.random::<f64>().sqrt();
        let th = 2.0 * PI * rng.random::<f64>();
        let (v, w) = (r * th.cos(), r * th.sin());
        assert!((fg.f.laplacian().eval(v, w) - v).abs() <= 1e-14);
        assert!((fg.g.laplacian().eval(v, w) - w).abs() <= 1e-14);
        // Five-point stencil as an independent check (exact for cubics up to rounding).
        let lap = |p: &Poly2| {
            (p.eval(v + h, w) + p.eval(v - h, w) + p.eval(v, w + h) + p.eval(v, w - h)
                - 4.0 * p.eval(v, w))
                / (h * h)
        };
        assert!((lap(&fg.f) - v).abs() < 1e-8);
    }
}

#[test]
fn wall_is_no_flux() {
    for eps in [0.2, 1.0] {
        let fg = fg_polynomials(eps, 0.4);
        for p in [&fg.f, &fg.g] {
            let rest = p.euler().restrict_to_circle(eps);
            assert!(rest.max_abs_coeff() <= 1e-15, "{rest:?}");
            for k in 0..64 {
                let th = 2.0 * PI * k as f64 / 64.0;
                let (c, s) = (th.cos(), th.sin());
                let dr = c * p.dv().eval(eps * c, eps * s) + s * p.dw().eval(eps * c, eps * s);
                assert!(dr.abs() <= 1e-14);
            }
        }
    }
}

#[test]
fn closed_form_and_normalization_constants() {
    let fg = fg_polynomials(1.0, 0.5);
    assert!((fg.f.eval(1.0, 0.0) - fg.h + 0.25).abs() < 1e-15);
    assert_eq!(fg_polynomials(0.3, 0.0).h, 0.0);
    let (eps, kappa): (f64, f64) = (0.4, 1.3);
    let fg = fg_polynomials(eps, kappa);
    assert!((fg.h + 7.0 / 96.0 * kappa * eps.powi(4)).abs() < 1e-16);
    assert_eq!(fg.u, 0.0);
    let scale = PI * eps.powi(6);
    let mean_f = disk(eps, |v, w| fg.f.eval(v, w) * (1.0 - kappa * v));
    let mean_g = disk(eps, |v, w| fg.g.eval(v, w) * (1.0 - kappa * v));
    assert!(mean_f.abs() <= 1e-12 * scale, "{mean_f:e}");
    assert!(mean_g.abs() <= 1e-12 * scale, "{mean_g:e}");
}

#[test]
fn leading_operator_coefficients() {
    let p = FluctuationParams {
        kappa: 1.0,
        kappa_s: 0.0,
        tau: 1.0,
        epsilon: 0.3,
        dphi_ds: 0.0,
        d2phi_ds2: 0.0,
    };
    let op = expand_F(&p);
    assert!((op.first.eval(0.0, 0.3) - 0.3).abs() < 1e-16);
    assert_eq!(op.second.eval(0.2, 0.1), 0.4);
    let flat = expand_F(&FluctuationParams { tau: 0.0, ..p });
    assert!(flat.first.is_zero());
    let straight = expand_F(&FluctuationParams {
        kappa: 0.0,
        ..p
    });
    assert!(straight.first.is_zero() && straight.second.is_zero());
}

#[test]
fn correction_vanishes_without_gradients_or_curvature() {
    let mut p = params(0.8, 0.3);
    p.dphi_ds = 0.0;
    p.d2phi_ds2 = 0.0;
    assert_eq!(n0_at(&p, 0.1, 0.1).unwrap(), 0.0);
    let mut p = params(0.0, 0.3);
    p.kappa_s = 0.0;
    for (v, w) in [(0.1, 0.2), (-0.25, 0.0)] {
        assert_eq!(n0_at(&p, v, w).unwrap(), 0.0);
    }
}

#[test]
fn correction_has_zero_weighted_mean() {
    let p = params(0.9, 0.4);
    let n0 = n0_polynomial(&p);
    let mean = disk(p.epsilon, |v, w| n0.eval(v, w) * (1.0 - p.kappa * v));
    let scale = n0.max_abs_coeff() * p.sigma();
    assert!(mean.abs() <= 1e-12 * scale, "{mean:e}");
}

#[test]
fn correction_solves_the_transverse_problem() {
    // Δ⁽²⁾n₀ = −(1/σ) F̂φ with the leading operator.
    let p = params(0.9, 0.4);
    let lhs = n0_polynomial(&p).laplacian();
    let rhs = expand_F(&p)
        .apply(p.dphi_ds, p.d2phi_ds2)
        .scale(-1.0 / p.sigma());
    assert!((&lhs - &rhs).max_abs_coeff() < 1e-13);
}

#[test]
fn correction_halves_with_the_radius() {
    let peak = |eps: f64| {
        let p = params(1.0, eps);
        let mut m: f64 = 0.0;
        for i in 0..=40 {
            for k in 0..72 {
                let r = eps * i as f64 / 40.0;
                let th = 2.0 * PI * k as f64 / 72.0;
                m = m.max(n0_at(&p, r * th.cos(), r * th.sin()).unwrap().abs());
            }
        }
        m
    };
    let ratio = peak(0.005) / peak(0.01);
    assert!((ratio - 0.5).abs() <= 1e-3, "ratio {ratio}");
}

#[test]
fn closure_residual_matches_its_closed_form() {
    let p = params(0.7, 0.2);
    let r = verify_no_flow_effect(&p, 16).unwrap();
    let scale = p.d2phi_ds2.abs() + (p.kappa * p.dphi_ds).abs();
    let exact = p.kappa
        * (2.0 * p.kappa * p.d2phi_ds2 + p.kappa_s * p.dphi_ds)
        * PI
        * p.epsilon.powi(4)
        / 4.0;
    assert!((r.closure - exact / (p.sigma() * scale)).abs() < 1e-15);
    assert!((r.laplacian - exact / (p.sigma() * scale)).abs() < 1e-15);
    assert!(r.corrected < 1e-15);
}

#[test]
fn no_flow_residual_decays_at_second_order() {
    let mut p = params(1.0, 0.1);
    p.tau = 0.0;
    p.kappa_s = 0.0;
    let a = verify_no_flow_effect(&p, 16).unwrap().max();
    p.epsilon = 0.05;
    let b = verify_no_flow_effect(&p, 16).unwrap().max();
    let order = (a / b).log2();
    assert!(order >= 1.9, "order {order}");
    assert!(a <= 0.01, "κε = 0.1 residual {a:e}");
}

#[test]
fn no_flow_residual_is_quadrature_converged() {
    let p = params(1.2, 0.3);
    let a = verify_no_flow_effect(&p, 16).unwrap();
    let b = verify_no_flow_effect(&p, 32).unwrap();
    assert!((a.max() - b.max()).abs() <= 1e-12);
}

#[test]
fn straight_tube_has_no_residual() {
    let mut p = params(0.0, 0.3);
    p.kappa_s = 0.0;
    assert_eq!(verify_no_flow_effect(&p, 8).unwrap().max(), 0.0);
}
