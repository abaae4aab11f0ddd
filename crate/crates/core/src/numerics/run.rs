use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{
    boundary_flux, conserved_integral, step, Boundary, Grid, GridField, Kernel, Levels, Monitor,
    NumericsError, Params, Problem, Workspace, DEFAULT_CFL, DEFAULT_X_MAX, DEFAULT_X_MIN,
};
use crate::equation::{residual, FSpec};
use crate::geom::ChartMetric;
use crate::noether::{canonical_currents, current_from_gauge, ConservedCurrent};
use crate::symcore::{diff_multi, parse_with, substitute_with, Atom, Coord, Expr, ParseContext};

/// Second solution of the linear equation, used by the gauge monitor.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Companion {
    pub initial: String,
    #[serde(default = "zero_text")]
    pub velocity: String,
}

/// A run description, read from TOML.
///
/// ```toml
/// nx = 128
/// ny = 128
/// t_end = 4.442882938158366
/// boundary = "prescribed"
/// f = "zero"
/// exact = "cos(w*t)*cos(x)"
/// monitors = ["S0", "S1"]
/// [params]
/// w = 1.4142135623730951
/// ```
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default = "zero_source")]
    pub f: String,
    /// `u(0, x, y)`; defaults to the exact solution at `t = 0`.
    pub initial: Option<String>,
    /// `u_t(0, x, y)`.
    pub velocity: Option<String>,
    /// Exact solution `u(t, x, y)`, for errors and prescribed walls.
    pub exact: Option<String>,
    /// Explicit forcing `g(t, x, y)` added to the right-hand side.
    pub forcing: Option<String>,
    /// Derive the forcing from `exact` so that it solves the forced problem.
    #[serde(default)]
    pub manufactured: bool,
    #[serde(default)]
    pub params: Params,
    /// Generators whose canonical currents are monitored: S0..S3, Sinf.
    #[serde(default)]
    pub monitors: Vec<String>,
    pub companion: Option<Companion>,
    /// Keep every n-th step in the time series.
    #[serde(default = "one")]
    pub sample_every: usize,
    /// Resolutions for a convergence study against `exact`.
    #[serde(default)]
    pub ladder: Vec<usize>,
}

fn zero_text() -> String {
    "0".into()
}
fn zero_source() -> String {
    "zero".into()
}
fn default_cfl() -> f64 {
    DEFAULT_CFL
}
fn default_x_min() -> f64 {
    DEFAULT_X_MIN
}
fn default_x_max() -> f64 {
    DEFAULT_X_MAX
}
fn one() -> usize {
    1
}

pub const PRESETS: [&str; 3] = ["eigenfunction", "manufactured", "constant"];

fn base(nx: usize, t_end: f64) -> RunConfig {
    RunConfig {
        nx,
        ny: nx,
        t_end,
        cfl: DEFAULT_CFL,
        x_min: DEFAULT_X_MIN,
        x_max: DEFAULT_X_MAX,
        boundary: Boundary::Neumann,
        f: zero_source(),
        initial: None,
        velocity: None,
        exact: None,
        forcing: None,
        manufactured: false,
        params: Params::new(),
        monitors: Vec::new(),
        companion: None,
        sample_every: 1,
        ladder: Vec::new(),
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<RunConfig, NumericsError> {
        toml::from_str(text).map_err(|e| NumericsError::Config(e.to_string()))
    }

    pub fn preset(name: &str) -> Option<RunConfig> {
        let w = 2f64.sqrt();
        let all = || ["S0", "S1", "S2", "S3"].map(String::from).to_vec();
        match name {
            // u = cos(√2 t) cos(x) over one period.
            "eigenfunction" => Some(RunConfig {
                boundary: Boundary::Prescribed,
                exact: Some("cos(w*t)*cos(x)".into()),
                params: Params::from([("w".to_string(), w)]),
                monitors: all(),
                sample_every: 10,
                ..base(128, std::f64::consts::TAU / w)
            }),
            "manufactured" => Some(RunConfig {
                boundary: Boundary::Prescribed,
                exact: Some("sin(t)*sin(x)^2*cos(y)".into()),
                manufactured: true,
                sample_every: 10,
                ladder: vec![16, 32, 64],
                ..base(64, 1.0)
            }),
            "constant" => Some(RunConfig {
                initial: Some("1".into()),
                monitors: all(),
                ..base(32, 1.0)
            }),
            _ => None,
        }
    }

    fn context(&self) -> ParseContext {
        self.params
            .keys()
            .fold(ParseContext::default(), |c, k| c.with_param(k))
    }

    fn expr(&self, text: &str) -> Result<Expr, NumericsError> {
        parse_with(text, &self.context()).map_err(|source| NumericsError::Expression {
            text: text.into(),
            source,
        })
    }

    pub fn source(&self) -> Result<FSpec, NumericsError> {
        let spec: FSpec = self.f.parse()?;
        if spec == FSpec::Arbitrary {
            return Err(NumericsError::Config(
                "the solver needs a concrete f".into(),
            ));
        }
        Ok(spec)
    }
}

/// Forcing `g = u*_tt − Δu* − f(u*)` that makes `u*` an exact solution.
pub fn manufactured_forcing(exact: &Expr, spec: &FSpec) -> Result<Expr, NumericsError> {
    substitute_with(&residual(spec), &mut |a, _| match a {
        Atom::Jet(j) if &*j.field == "u" => Some(diff_multi(exact, j.orders)),
        _ => None,
    })
    .map_err(|source| NumericsError::Expression {
        text: exact.to_string(),
        source,
    })
}

/// `log2` of successive ratios of a halving error sequence.
pub fn convergence_order(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TimeSeries {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(|v| format!("{v:.16e}")))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Conservation budget of one monitored integral.
#[derive(Clone, Debug, Serialize)]
pub struct MonitorSummary {
    pub name: String,
    pub initial: f64,
    pub final_value: f64,
    pub drift: f64,
    /// Time integral of the net outward wall flux.
    pub flux: f64,
    /// `drift + flux`; zero for exact conservation.
    pub corrected_drift: f64,
    /// `corrected_drift / |initial|`, when the integral is not zero.
    pub relative: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderRow {
    pub n: usize,
    pub dt: f64,
    pub max_error: f64,
    pub order: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub grid: Grid,
    pub f: String,
    pub steps: usize,
    pub t_final: f64,
    pub monitors: Vec<MonitorSummary>,
    /// Max-norm error against the exact solution at the final time.
    pub max_error: Option<f64>,
    pub ladder: Vec<LadderRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub summary: RunSummary,
    #[serde(skip)]
    pub series: TimeSeries,
}

fn monitor_current(name: &str, spec: &FSpec) -> Result<ConservedCurrent, NumericsError> {
    let canonical = ["S0", "S1", "S2", "S3"];
    if let Some(k) = canonical.iter().position(|n| *n == name) {
        return Ok(canonical_currents(spec)?.swap_remove(k));
    }
    if name == "Sinf" {
        if spec.linear_coefficient().is_none() && !spec.source().is_zero() {
            return Err(NumericsError::Config(
                "the gauge monitor needs a linear f".into(),
            ));
        }
        let m = ChartMetric::preset("s2xr").expect("bundled metric");
        return Ok(current_from_gauge(&m, "b")?);
    }
    Err(NumericsError::Config(format!(
        "unknown monitor `{name}`; use S0, S1, S2, S3 or Sinf"
    )))
}

struct Setup {
    problem: Problem,
    steps: usize,
    u: GridField,
    b: Option<(Problem, GridField)>,
    monitors: Vec<Monitor>,
}

fn sample(grid: &Grid, e: &Expr, t: f64, params: &Params) -> Result<Vec<f64>, NumericsError> {
    let k = Kernel::new(e, &Coord::ALL.map(Atom::Coord), params)?;
    let mut ws = Workspace::new();
    Ok(grid.sample(|x, y| k.eval(&[t, x, y], &mut ws)))
}

fn setup(cfg: &RunConfig, n: Option<usize>) -> Result<Setup, NumericsError> {
    let spec = cfg.source()?;
    let (nx, ny) = n.map_or((cfg.nx, cfg.ny), |n| (n, n));
    let mut grid = Grid::new(nx, ny, cfg.x_min, cfg.x_max, cfg.cfl, cfg.boundary)?;
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(NumericsError::Config(format!(
            "t_end must be positive, got {}",
            cfg.t_end
        )));
    }
    if cfg.sample_every == 0 {
        return Err(NumericsError::Config(
            "sample_every must be at least 1".into(),
        ));
    }
    let steps = grid.fit_to(cfg.t_end);
    let exact = cfg.exact.as_deref().map(|s| cfg.expr(s)).transpose()?;
    let forcing = match (&cfg.forcing, cfg.manufactured, &exact) {
        (Some(_), true, _) => {
            return Err(NumericsError::Config(
                "give either forcing or manufactured".into(),
            ))
        }
        (Some(g), false, _) => Some(cfg.expr(g)?),
        (None, true, Some(e)) => Some(manufactured_forcing(e, &spec)?),
        (None, true, None) => {
            return Err(NumericsError::Config(
                "manufactured needs an exact solution".into(),
            ))
        }
        (None, false, _) => None,
    };
    let problem = Problem::new(
        grid.clone(),
        &spec,
        forcing.as_ref(),
        exact.as_ref(),
        &cfg.params,
    )?;
    let u = match (&cfg.initial, &exact) {
        (Some(u0), _) => {
            let u0 = sample(&grid, &cfg.expr(u0)?, 0.0, &cfg.params)?;
            let v0 = sample(
                &grid,
                &cfg.expr(cfg.velocity.as_deref().unwrap_or("0"))?,
                0.0,
                &cfg.params,
            )?;
            GridField::from_data(&problem, u0, &v0, 0.0)
        }
        (None, Some(_)) => GridField::from_exact(&problem, 0.0).expect("exact solution present"),
        (None, None) => {
            return Err(NumericsError::Config(
                "give initial data or an exact solution".into(),
            ))
        }
    };
    let mut monitors = Vec::new();
    for name in &cfg.monitors {
        monitors.push(Monitor::new(
            name,
            &monitor_current(name, &spec)?,
            &cfg.params,
        )?);
    }
    let b = match &cfg.companion {
        Some(c) => {
            if forcing.is_some() || grid.boundary != Boundary::Neumann {
                return Err(NumericsError::Config(
                    "the companion needs an unforced run with Neumann walls".into(),
                ));
            }
            let hp = problem.homogeneous();
            let b0 = sample(&grid, &cfg.expr(&c.initial)?, 0.0, &cfg.params)?;
            let v0 = sample(&grid, &cfg.expr(&c.velocity)?, 0.0, &cfg.params)?;
            let field = GridField::from_data(&hp, b0, &v0, 0.0);
            Some((hp, field))
        }
        None => None,
    };
    if b.is_none() && monitors.iter().any(Monitor::needs_companion) {
        return Err(NumericsError::Config(
            "the gauge monitor needs a [companion] field".into(),
        ));
    }
    Ok(Setup {
        problem,
        steps,
        u,
        b,
        monitors,
    })
}

fn levels<'a>(prev: &'a GridField, next: &'a GridField, dt: f64) -> Levels<'a> {
    Levels {
        before: &prev.prev,
        at: &prev.curr,
        after: &next.curr,
        t: prev.t,
        dt,
    }
}

fn max_error(p: &Problem, u: &GridField) -> Option<f64> {
    let exact = p.sample_exact(u.t)?;
    Some(
        u.curr
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    )
}

fn simulate(cfg: &RunConfig, n: Option<usize>) -> Result<(RunSummary, TimeSeries), NumericsError> {
    let Setup {
        problem,
        steps,
        mut u,
        mut b,
        monitors,
    } = setup(cfg, n)?;
    let dt = problem.grid.dt;
    let k = monitors.len();
    let mut columns = vec!["t".to_string()];
    for m in &monitors {
        columns.push(m.name.clone());
        columns.push(format!("{}_flux", m.name));
        columns.push(format!("{}_budget", m.name));
    }
    columns.push("max_error".into());
    let mut series = TimeSeries {
        columns,
        rows: Vec::new(),
    };
    let mut initial = vec![f64::NAN; k];
    let mut values = vec![f64::NAN; k];
    let mut flux_total = vec![0.0; k];
    let mut last_flux = vec![0.0; k];
    u.flux = vec![0.0; k];
    // Monitors at level n need level n + 1, so they lag one step behind.
    for s in 0..=steps {
        let next = step(u.clone(), &problem)?;
        let b_next = b
            .as_ref()
            .map(|(hp, bf)| step(bf.clone(), hp))
            .transpose()?;
        let lu = levels(&u, &next, dt);
        let lb = b
            .as_ref()
            .zip(b_next.as_ref())
            .map(|((_, bf), bn)| levels(bf, bn, dt));
        for (i, m) in monitors.iter().enumerate() {
            values[i] = conserved_integral(m, &problem, lu, lb);
            let phi = boundary_flux(m, &problem, lu, lb);
            if s == 0 {
                initial[i] = values[i];
            } else {
                flux_total[i] += 0.5 * dt * (phi + last_flux[i]);
            }
            last_flux[i] = phi;
        }
        if s % cfg.sample_every == 0 || s == steps {
            let mut row = vec![u.t];
            for i in 0..k {
                row.extend([
                    values[i],
                    flux_total[i],
                    values[i] - initial[i] + flux_total[i],
                ]);
            }
            row.push(max_error(&problem, &u).unwrap_or(f64::NAN));
            series.rows.push(row);
        }
        if s == steps {
            break;
        }
        u = next;
        u.flux.clone_from(&flux_total);
        if let (Some((_, bf)), Some(bn)) = (b.as_mut(), b_next) {
            *bf = bn;
        }
    }
    let monitors = monitors
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let drift = values[i] - initial[i];
            let corrected = drift + flux_total[i];
            MonitorSummary {
                name: m.name.clone(),
                initial: initial[i],
                final_value: values[i],
                drift,
                flux: flux_total[i],
                corrected_drift: corrected,
                relative: (initial[i].abs() > 1e-12).then(|| corrected / initial[i].abs()),
            }
        })
        .collect();
    let summary = RunSummary {
        grid: problem.grid.clone(),
        f: cfg.f.clone(),
        steps,
        t_final: u.t,
        monitors,
        max_error: max_error(&problem, &u),
        ladder: Vec::new(),
    };
    Ok((summary, series))
}

/// Run the configuration, plus the convergence ladder if one is given.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, NumericsError> {
    if !cfg.ladder.is_empty() && cfg.exact.is_none() {
        return Err(NumericsError::Config(
            "a convergence ladder needs an exact solution".into(),
        ));
    }
    let (mut summary, series) = simulate(cfg, None)?;
    let mut rows: Vec<LadderRow> = Vec::new();
    for &n in &cfg.ladder {
        let light = RunConfig {
            monitors: Vec::new(),
            companion: None,
            ..cfg.clone()
        };
        let (s, _) = simulate(&light, Some(n))?;
        let err = s.max_error.expect("exact solution present");
        let order = rows.last().map(|r| (r.max_error / err).log2());
        rows.push(LadderRow {
            n,
            dt: s.grid.dt,
            max_error: err,
            order,
        });
    }
    summary.ladder = rows;
    Ok(RunOutput { summary, series })
}
