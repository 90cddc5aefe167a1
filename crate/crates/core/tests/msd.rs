use std::f64::consts::PI;

use tube_diffusion::effective1d::*;
use tube_diffusion::geometry::KappaProfile;
use tube_diffusion::msd::*;
use tube_diffusion::Error;

fn wavy(eps: f64) -> DeffProfile {
    DeffProfile::new(
        1.0,
        eps,
        SectionShape::Circular,
        KappaProfile::sinusoidal(1.0, 0.5, 1.0),
    )
    .unwrap()
}

#[test]
fn constant_curvature_msd_is_linear() {
    let d = deff_circular(1.0, 1.0, 0.3).unwrap();
    for t in [0.1, 1.0, 7.5] {
        let m = msd_constant_curvature(1.0, 1.0, 0.3, t).unwrap();
        assert_eq!(m / t, 2.0 * d);
    }
    assert!((msd_constant_curvature(1.0, 1.0, 0.3, 1.0).unwrap() - 2.047_146_6).abs() < 1e-7);
    // Helix R = ω = μ = 1 has κ = 1/2.
    let kappa = 1.0 / (1.0 + 1.0);
    let want = 4.0 * (1.0 - (1.0f64 - (kappa * 0.4f64).powi(2)).sqrt()) / (kappa * 0.4f64).powi(2);
    assert!((msd_constant_curvature(1.0, kappa, 0.4, 1.0).unwrap() - want).abs() < 1e-14);
    assert!(msd_constant_curvature(1.0, 1.0, 0.3, -1.0).is_err());
}

#[test]
fn coefficients_for_constant_and_straight_tubes() {
    let e = short_time_coeffs(&DeffProfile::constant(1.0, 0.3, 1.0).unwrap(), 0.2);
    assert_eq!(e.a1, 2.0 * deff_circular(1.0, 1.0, 0.3).unwrap());
    assert_eq!(e.a2, 0.0);
    let e = short_time_coeffs(&DeffProfile::constant(1.5, 0.3, 0.0).unwrap(), 0.0);
    assert_eq!((e.a1, e.a2), (3.0, 0.0));
}

#[test]
fn coefficients_match_finite_differences_of_the_closed_form() {
    // Oracle: D_eff evaluated through the closed form, differentiated numerically.
    let eps = 0.4;
    let deff = |s: f64| deff_circular(1.0, 1.0 + 0.5 * (2.0 * PI * s).sin(), eps).unwrap();
    let h = 1e-3;
    let d0 = deff(0.0);
    let d1 = (-deff(2.0 * h) + 8.0 * deff(h) - 8.0 * deff(-h) + deff(-2.0 * h)) / (12.0 * h);
    let d2 = (-deff(2.0 * h) + 16.0 * deff(h) - 30.0 * d0 + 16.0 * deff(-h) - deff(-2.0 * h))
        / (12.0 * h * h);
    let e = short_time_coeffs(&wavy(eps), 0.0);
    assert!((e.a1 - 2.0 * d0).abs() < 1e-14);
    assert!((e.a2 - (3.0 * d2 * d0 + d1 * d1)).abs() < 1e-6);
}

#[test]
fn gaussian_field_moments() {
    let g = Grid1D::new(400, 2.0, -1.0, Boundary::Reflecting).unwrap();
    let v: f64 = 0.01;
    let f = Field1D::from_fn(g, |s| (-(s - 0.1).powi(2) / (2.0 * v)).exp());
    let m = field_moments(&f).unwrap();
    // Midpoint sums of a smooth rapidly decaying density are spectrally accurate.
    assert!((m.mean - 0.1).abs() < 1e-12);
    assert!((m.variance - v).abs() < 1e-12);
}

#[test]
fn free_diffusion_msd() {
    let g = Grid1D::new(801, 8.0, -4.0, Boundary::Reflecting).unwrap();
    let p = DeffProfile::constant(1.0, 0.2, 0.0).unwrap();
    let times: Vec<f64> = (1..=10).map(|k| 0.01 * k as f64).collect();
    let out = solve(&Field1D::delta(g, 0.0, 1.0).unwrap(), &p, &times, 1e-4, 0.5).unwrap();
    let s = msd_from_field(&out).unwrap();
    for (t, m) in s.times.iter().zip(&s.msd) {
        assert!(((m - 2.0 * t) / (2.0 * t)).abs() <= 5e-3);
    }
    let e = fit_short_time(&s, (0.0, 1.0)).unwrap();
    assert!((e.a1 - 2.0).abs() <= 0.01);
    assert!(e.a2.abs() < 1e-6);
}

#[test]
fn first_identity_reduces_to_two_deff_for_constant_curvature() {
    let p = DeffProfile::constant(1.0, 0.3, 1.0).unwrap();
    let g = Grid1D::new(401, 4.0, -2.0, Boundary::Reflecting).unwrap();
    let f = Field1D::from_fn(g, |s| (-s * s / 0.02).exp());
    let (first, second) = identity_moments(&f, &p).unwrap();
    assert!((first - 2.0 * p.value(0.0)).abs() < 1e-14);
    assert_eq!(second, 0.0);
}

fn identity_residuals(cells: usize, dt: f64) -> (f64, f64) {
    let g = Grid1D::new(cells, 1.0, -0.5, Boundary::Periodic).unwrap();
    let f0 = Field1D::from_fn(g, |s| (-s * s / (2.0 * 0.001)).exp());
    let p = wavy(0.6);
    let delta = 1e-4;
    let times = [0.001 - delta, 0.001, 0.001 + delta];
    let out = solve(&f0, &p, &times, dt, 0.5).unwrap();
    let c = msd_derivative_check(&out, &p, 1).unwrap();
    (c.first_residual(), c.second_residual())
}

#[test]
fn derivative_identities_converge_at_second_order() {
    let (a1, a2) = identity_residuals(200, 2e-5);
    let (b1, b2) = identity_residuals(400, 1e-5);
    assert!(a1 / b1 > 3.0, "first identity: {a1:e} -> {b1:e}");
    assert!(a2 / b2 > 3.0, "second identity: {a2:e} -> {b2:e}");
    assert!(b1 < 1e-3 && b2 < 1e-1);
}

#[test]
fn first_identity_at_the_start_gives_a1() {
    let p = wavy(0.4);
    let g = Grid1D::new(1001, 1.0, -0.5, Boundary::Periodic).unwrap();
    let f = Field1D::delta(g, 0.0, 1.0).unwrap();
    let (first, second) = identity_moments(&f, &p).unwrap();
    let e = short_time_coeffs(&p, 0.0);
    assert!((first - e.a1).abs() < 1e-12);
    assert!((0.5 * second - e.a2).abs() < 1e-9);
}

#[test]
fn solver_reproduces_the_short_time_expansion() {
    let p = wavy(0.4);
    let g = Grid1D::new(1001, 1.0, -0.5, Boundary::Periodic).unwrap();
    let h = g.spacing();
    let e = short_time_coeffs(&p, 0.0);
    let tmax = 1e-4 / p.value(0.0);
    let times: Vec<f64> = (1..=200).map(|k| tmax * k as f64 / 200.0).collect();
    let scheme = ThetaScheme::new(g, &p, 0.5).unwrap();
    let out = scheme
        .evolve(&Field1D::delta(g, 0.0, 1.0).unwrap(), &times, 0.5 * scheme.monotone_dt_bound())
        .unwrap();
    let fit = fit_short_time(&msd_from_field(&out).unwrap(), (h * h / p.value(0.0), tmax)).unwrap();
    assert!(((fit.a1 - e.a1) / e.a1).abs() <= 0.01);
    assert!(((fit.a2 - e.a2) / e.a2).abs() <= 0.05);
}

#[test]
fn linear_fit_recovers_slope_and_offset() {
    let times: Vec<f64> = (0..10).map(|k| k as f64).collect();
    let msd = times.iter().map(|t| 3.0 * t - 0.5).collect();
    let f = fit_linear(&MsdSeries::new(times, msd).unwrap(), (0.0, 100.0)).unwrap();
    assert!((f.slope - 3.0).abs() < 1e-13 && (f.intercept + 0.5).abs() < 1e-12);
    assert!(f.slope_stderr < 1e-12);
}

#[test]
fn ring_support_must_not_wrap() {
    let g = Grid1D::new(64, 1.0, 0.0, Boundary::Periodic).unwrap();
    let f = Field1D::delta(g, 0.001, 1.0).unwrap();
    assert!(matches!(msd_from_field(&[f]), Err(Error::WrappedSupport)));
}
