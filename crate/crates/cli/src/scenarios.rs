//! One function per subcommand, each producing a table plus summary results.

use serde_json::{json, Map, Value};
use tube_diffusion::effective1d::{
    deff_circular, deff_quadrangular, deff_quadrature, solve, static_solution, Boundary,
    DeffProfile, Field1D, Grid1D, ThetaScheme,
};
use tube_diffusion::fluctuation::{fg_polynomials, n0_polynomial, verify_no_flow_effect, FluctuationParams};
use tube_diffusion::geometry::{CrossSection, TubeSpec};
use tube_diffusion::mc3d::{run, InitialCondition, McConfig, McResult};
use tube_diffusion::msd::{fit_linear, msd_from_field, short_time_coeffs, MsdSeries};

use crate::config::{InitialField, ScenarioConfig, ScenarioKind};
use crate::error::CliError;
use crate::output::Table;

pub struct Outcome {
    pub table: Table,
    pub results: Map<String, Value>,
}

pub fn run_scenario(kind: ScenarioKind, cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    cfg.validate(kind)?;
    let tube = cfg.tube.build()?;
    match kind {
        ScenarioKind::Frames => frames(cfg, &tube),
        ScenarioKind::Deff => deff_table(cfg),
        ScenarioKind::Solve1d => solve1d(cfg, &tube),
        ScenarioKind::Mc3d => mc3d(cfg, &tube),
        ScenarioKind::MsdCompare => msd_compare(cfg, &tube),
        ScenarioKind::Static => static_profile(cfg, &tube),
        ScenarioKind::Fluct => fluct(cfg, &tube),
    }
}

fn profile(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<DeffProfile, CliError> {
    DeffProfile::from_tube(tube, cfg.diffusivity).map_err(|e| CliError::config("tube", e))
}

/// Transport grid: the ring for closed curves, a window around `center` for unbounded
/// ones, the whole curve otherwise.
fn transport_grid(
    tube: &TubeSpec,
    cells: usize,
    center: f64,
    half_width: f64,
    field: &str,
) -> Result<Grid1D, CliError> {
    let curve = tube.curve();
    let grid = match curve.length() {
        Some(l) if curve.is_periodic() => Grid1D::new(cells, l, center - 0.5 * l, Boundary::Periodic),
        Some(l) => Grid1D::new(cells, l, 0.0, Boundary::Reflecting),
        None => Grid1D::new(cells, 2.0 * half_width, center - half_width, Boundary::Reflecting),
    };
    grid.map_err(|e| CliError::config(field, e))
}

fn frames(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<Outcome, CliError> {
    let curve = tube.curve();
    let n = cfg.frames.samples;
    let (span, closed) = match curve.length() {
        Some(l) => (l, curve.is_periodic()),
        None => (curve.reference_length(), false),
    };
    let step = if closed { span / n as f64 } else { span / (n - 1) as f64 };
    let mut table = Table::new(vec![
        "s [L]", "x [L]", "y [L]", "z [L]", "kappa [1/L]", "tau [1/L]", "e1_x [1]", "e1_y [1]",
        "e1_z [1]", "e2_x [1]", "e2_y [1]", "e2_z [1]", "e3_x [1]", "e3_y [1]", "e3_z [1]",
    ]);
    let mut torsion_reliable = true;
    for k in 0..n {
        let s = k as f64 * step;
        let f = curve.frame_or_fallback(s);
        torsion_reliable &= f.torsion_reliable;
        let x = curve.point(s);
        let mut row = vec![s, x.x, x.y, x.z, f.kappa, f.tau];
        for e in [f.e1, f.e2, f.e3] {
            row.extend([e.x, e.y, e.z]);
        }
        table.push(row);
    }
    let mut results = Map::new();
    results.insert("torsion_reliable".into(), json!(torsion_reliable));
    results.insert("max_curvature".into(), json!(curve.max_curvature()));
    Ok(Outcome { table, results })
}

fn deff_table(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let c = &cfg.deff;
    let mut table = Table::new(vec![
        "kappa_eps [1]",
        "deff_circular_over_D [1]",
        "deff_quadrangular_over_D [1]",
        "deff_quadrature_circular_over_D [1]",
    ]);
    let disk = CrossSection::Circular { radius: 1.0 };
    for k in 0..c.rows {
        let ke = c.kappa_eps_max * k as f64 / (c.rows - 1) as f64;
        let row = (|| {
            Ok::<_, tube_diffusion::Error>(vec![
                ke,
                deff_circular(1.0, ke, 1.0)?,
                deff_quadrangular(1.0, ke, 1.0, 1.0)?,
                deff_quadrature(1.0, ke, &disk, c.quadrature_order)?,
            ])
        })()
        .map_err(CliError::numeric("effective diffusivity"))?;
        table.push(row);
    }
    Ok(Outcome {
        table,
        results: Map::new(),
    })
}

fn solve1d(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<Outcome, CliError> {
    let c = &cfg.solve1d;
    let p = profile(cfg, tube)?;
    let s0 = match c.initial {
        InitialField::Delta { s0 } => s0,
        InitialField::Uniform => 0.0,
    };
    let grid = transport_grid(tube, c.cells, s0, c.half_width.unwrap_or(5.0), "solve1d.cells")?;
    let field0 = match c.initial {
        InitialField::Delta { s0 } => {
            Field1D::delta(grid, s0, 1.0).map_err(|e| CliError::config("solve1d.initial.s0", e))?
        }
        InitialField::Uniform => Field1D::uniform(grid, 1.0),
    };
    let scheme = ThetaScheme::new(grid, &p, c.theta).map_err(|e| CliError::config("solve1d.theta", e))?;
    let t_end = *c.times.last().expect("validated non-empty");
    let dt = c
        .dt
        .unwrap_or_else(|| (0.5 * scheme.monotone_dt_bound()).min(0.01 * t_end));
    let out = scheme
        .evolve(&field0, &c.times, dt)
        .map_err(CliError::numeric("1D transport solve"))?;
    let mut table = Table::new(vec!["t [T]", "s [L]", "density [1/L]"]);
    for f in &out {
        for (s, v) in grid.centers().zip(&f.values) {
            table.push(vec![f.time, s, *v]);
        }
    }
    let mut results = Map::new();
    results.insert("dt".into(), json!(dt));
    results.insert("final_mass".into(), json!(out.last().map(Field1D::mass)));
    if matches!(c.initial, InitialField::Delta { .. }) {
        if let Ok(series) = msd_from_field(&out) {
            results.insert("msd".into(), json!(series.msd));
        }
    }
    Ok(Outcome { table, results })
}

fn mc_config(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<McConfig, CliError> {
    let c = &cfg.mc3d;
    let eps = tube.epsilon();
    let dt = c.dt.unwrap_or(c.dt_factor * eps * eps / cfg.diffusivity);
    let mut mc = McConfig::new(c.particles, dt, c.times.clone(), cfg.seed);
    mc.diffusivity = cfg.diffusivity;
    mc.initial = c.initial;
    mc.dt_factor = c.dt_factor;
    mc.batches = c.batches;
    mc.threads = cfg.threads;
    mc.validate(tube).map_err(|e| CliError::config("mc3d", e))?;
    Ok(mc)
}

fn slope_window(cfg: &ScenarioConfig, tube: &TubeSpec, times: &[f64]) -> (f64, f64) {
    let eps = tube.epsilon();
    cfg.msd_compare.window.unwrap_or((
        5.0 * eps * eps / cfg.diffusivity,
        times.last().copied().unwrap_or(0.0),
    ))
}

fn insert_mc_slope(results: &mut Map<String, Value>, r: &McResult, window: (f64, f64)) {
    match r.slope(window) {
        Ok(s) => {
            results.insert("mc_slope".into(), json!(s.slope));
            results.insert("mc_slope_stderr".into(), json!(s.stderr));
        }
        Err(e) => {
            results.insert("mc_slope_error".into(), json!(e.to_string()));
        }
    }
}

fn mc3d(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<Outcome, CliError> {
    let mc = mc_config(cfg, tube)?;
    let r = run(tube, &mc, None).map_err(CliError::numeric("Brownian dynamics"))?;
    let mut table = Table::new(vec!["t [T]", "msd [L^2]", "msd_stderr [L^2]", "mean_s [L]"]);
    let se = r.msd.stderr.clone().unwrap_or_default();
    for i in 0..r.msd.len() {
        table.push(vec![r.msd.times[i], r.msd.msd[i], se[i], r.mean[i]]);
    }
    let mut results = Map::new();
    results.insert("dt".into(), json!(mc.dt));
    insert_mc_slope(&mut results, &r, slope_window(cfg, tube, &mc.snapshot_times));
    Ok(Outcome { table, results })
}

fn msd_compare(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<Outcome, CliError> {
    let mc = mc_config(cfg, tube)?;
    let p = profile(cfg, tube)?;
    let s0 = match mc.initial {
        InitialCondition::Point { s0 } | InitialCondition::UniformSection { s0 } => s0,
    };
    let c = &cfg.solve1d;
    let t_end = *mc.snapshot_times.last().expect("validated non-empty");
    // Unwrapped line matching the Brownian `s`, wide enough that the walls stay unseen.
    let half_width = c
        .half_width
        .unwrap_or_else(|| 8.0 * (2.0 * p.max_value() * t_end).sqrt());
    let grid = Grid1D::new(c.cells, 2.0 * half_width, s0 - half_width, Boundary::Reflecting)
        .map_err(|e| CliError::config("solve1d.cells", e))?;
    let scheme = ThetaScheme::new(grid, &p, c.theta).map_err(|e| CliError::config("solve1d.theta", e))?;
    let dt = c
        .dt
        .unwrap_or_else(|| (0.5 * scheme.monotone_dt_bound()).min(0.01 * t_end));
    let delta = Field1D::delta(grid, s0, 1.0).map_err(|e| CliError::config("mc3d.initial.s0", e))?;
    let fields = solve(&delta, &p, &mc.snapshot_times, dt, c.theta)
        .map_err(CliError::numeric("1D transport solve"))?;
    let pde = msd_from_field(&fields).map_err(CliError::numeric("1D moments"))?;
    let r = run(tube, &mc, None).map_err(CliError::numeric("Brownian dynamics"))?;
    let model = short_time_coeffs(&p, s0);

    let mut table = Table::new(vec![
        "t [T]",
        "analytic_msd [L^2]",
        "pde_msd [L^2]",
        "mc_msd [L^2]",
        "mc_stderr [L^2]",
    ]);
    let se = r.msd.stderr.clone().unwrap_or_default();
    let mut analytic = Vec::new();
    for (i, &t) in pde.times.iter().enumerate() {
        let a = model.a1 * t + model.a2 * t * t;
        analytic.push(a);
        table.push(vec![t, a, pde.msd[i], r.msd.msd[i], se[i]]);
    }
    let window = slope_window(cfg, tube, &mc.snapshot_times);
    let mut results = Map::new();
    results.insert("window".into(), json!(window));
    results.insert("a1".into(), json!(model.a1));
    results.insert("a2".into(), json!(model.a2));
    let analytic_series =
        MsdSeries::new(pde.times.clone(), analytic).map_err(CliError::numeric("analytic MSD"))?;
    for (name, series) in [("analytic_slope", &analytic_series), ("pde_slope", &pde)] {
        match fit_linear(series, window) {
            Ok(f) => results.insert(name.into(), json!(f.slope)),
            Err(e) => results.insert(format!("{name}_error"), json!(e.to_string())),
        };
    }
    insert_mc_slope(&mut results, &r, window);
    Ok(Outcome { table, results })
}

fn static_profile(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<Outcome, CliError> {
    let c = &cfg.static_;
    let p = profile(cfg, tube)?;
    let curve = tube.curve();
    let grid = match curve.length() {
        Some(l) if curve.is_periodic() => Grid1D::new(c.cells, l, 0.0, Boundary::Periodic),
        Some(l) => Grid1D::new(c.cells, l, 0.0, Boundary::Reflecting),
        None => Grid1D::new(c.cells, c.length, 0.0, Boundary::Reflecting),
    }
    .map_err(|e| CliError::config("static.cells", e))?;
    let sol = static_solution(&p, grid, c.bc).map_err(|e| CliError::config("static.bc", e))?;
    let mut table = Table::new(vec![
        "s [L]",
        "density [1/L]",
        "gradient [1/L^2]",
        "flux [1/T]",
        "resistance [T/L]",
    ]);
    for s in grid.centers() {
        table.push(vec![s, sol.density(s), sol.gradient(s), sol.flux(s), sol.resistance(s)]);
    }
    let mut results = Map::new();
    results.insert("flux".into(), json!(sol.flux(grid.origin())));
    results.insert("total_resistance".into(), json!(sol.resistance(grid.end())));
    Ok(Outcome { table, results })
}

fn fluct(cfg: &ScenarioConfig, tube: &TubeSpec) -> Result<Outcome, CliError> {
    let c = &cfg.fluct;
    let params = FluctuationParams {
        kappa: c.kappa,
        kappa_s: c.kappa_s,
        tau: c.tau,
        epsilon: c.epsilon.unwrap_or(tube.epsilon()),
        dphi_ds: c.dphi_ds,
        d2phi_ds2: c.d2phi_ds2,
    };
    params.validate().map_err(|e| CliError::config("fluct", e))?;
    let eps = params.epsilon;
    let n0 = n0_polynomial(&params);
    let mut table = Table::new(vec!["v [L]", "w [L]", "n0 [1/L^3]"]);
    let n = c.points;
    for i in 0..n {
        for j in 0..n {
            let v = eps * (2.0 * i as f64 / (n - 1) as f64 - 1.0);
            let w = eps * (2.0 * j as f64 / (n - 1) as f64 - 1.0);
            if v * v + w * w <= eps * eps {
                table.push(vec![v, w, n0.eval(v, w)]);
            }
        }
    }
    let report = verify_no_flow_effect(&params, c.quadrature_order)
        .map_err(|e| CliError::config("fluct.quadrature_order", e))?;
    let fg = fg_polynomials(eps, params.kappa);
    let mut results = Map::new();
    results.insert("h".into(), json!(fg.h));
    results.insert("u".into(), json!(fg.u));
    results.insert("no_flow".into(), json!(report));
    Ok(Outcome { table, results })
}
