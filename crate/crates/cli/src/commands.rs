use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use viscowave::asymptotic::{h_series, remainder_probe, ProbeSeries};
use viscowave::modal::{green_eps_series, green_wave_images, GreenPoint, MediumParams, SeriesPolicy};
use viscowave::solver::{self, BoundarySignal, OutputGrid, ProblemData};
use viscowave::specfun::QuadratureSpec;
use viscowave::transform::{kv_transform, TimeSignal, WindowSpec};
use viscowave::verify::{run_battery, BatteryConfig, CheckStatus};

use crate::config::{Axis, RunConfig, WallSpec};
use crate::error::CliError;
use crate::table::load_table;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn sink(cfg: &RunConfig) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    let out: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Failure(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out))
}

fn write_rows(cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = sink(cfg)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn axis_or(axis: &Option<Axis>, default: impl FnOnce() -> Vec<f64>) -> Vec<f64> {
    axis.as_ref().map_or_else(default, Axis::points)
}

fn warn(msgs: &[String]) {
    for m in msgs {
        eprintln!("warning: {m}");
    }
}

pub fn green(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let g = &cfg.green;
    let (l, period) = (params.l, params.l / params.c);
    let xs = axis_or(&g.x, || vec![0.25 * l, 0.5 * l, 0.75 * l]);
    let xis = axis_or(&g.xi, || vec![0.5 * l]);
    let ts = axis_or(&g.t, || vec![0.5 * period, period, 2.0 * period]);
    let mut policy = SeriesPolicy::default();
    policy.max_modes = g.max_modes.unwrap_or(policy.max_modes);
    policy.tail_tol = g.tail_tol.unwrap_or(policy.tail_tol);
    policy.validate()?;

    let mut points = Vec::with_capacity(xs.len() * xis.len() * ts.len());
    for &x in &xs {
        for &xi in &xis {
            for &t in &ts {
                let p = GreenPoint::new(x, xi, t);
                p.validate(&params)?;
                points.push(p);
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|p| green_row(&params, p, &policy))
        .collect::<Result<Vec<_>, _>>()?;
    write_rows(cfg, &["x", "xi", "t", "G0", "G_eps", "H", "abs_err"], &rows)
}

fn green_row(params: &MediumParams, p: &GreenPoint, policy: &SeriesPolicy) -> Result<Vec<String>, CliError> {
    let g0 = green_wave_images(params, p)?;
    let (ge, h) = if params.eps == 0.0 {
        (g0, g0)
    } else {
        (green_eps_series(params, p, policy)?.value, h_series(params, p, policy)?.value)
    };
    Ok(vec![num(p.x), num(p.xi), num(p.t), num(g0), num(ge), num(h), num((ge - h).abs())])
}

fn wall(spec: &Option<WallSpec>) -> BoundarySignal {
    match *spec {
        None => BoundarySignal::zero(),
        Some(WallSpec::Constant { value }) => BoundarySignal::constant(value),
        Some(WallSpec::Sine { amplitude, frequency }) => {
            let (a, w) = (amplitude, frequency);
            BoundarySignal::new(move |t| a * (w * t).sin())
                .with_derivatives(move |t| a * w * (w * t).cos(), move |t| -a * w * w * (w * t).sin())
        }
    }
}

pub fn solve(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let s = &cfg.solve;
    let data = match &s.table {
        Some(path) => load_table(path, &params)?,
        None => ProblemData::builtin(s.data.as_deref().unwrap_or("sect5"), &params)?,
    }
    .with_boundary(wall(&s.phi), wall(&s.psi));
    let l = params.l;
    let t_max = 2.0 * l / params.c;
    let xs = axis_or(&s.x, || Axis::Span { start: 0.0, end: l, count: 11 }.points());
    let ts = axis_or(&s.t, || Axis::Span { start: 0.0, end: t_max, count: 11 }.points());
    let grid = OutputGrid::new(xs, ts);
    grid.validate(&params)?;
    let policy = SeriesPolicy {
        max_modes: s.modes.unwrap_or(64),
        ..SeriesPolicy::default()
    };
    let out = solver::solve(&data, &params, &grid, &policy)?;
    warn(&out.warnings);
    let mut rows = Vec::with_capacity(grid.xs.len() * grid.ts.len());
    for (it, &t) in grid.ts.iter().enumerate() {
        for (ix, &x) in grid.xs.iter().enumerate() {
            rows.push(vec![
                num(x),
                num(t),
                num(out.wave.get(ix, it)),
                num(out.viscous.get(ix, it)),
                num(out.approx.get(ix, it)),
            ]);
        }
    }
    write_rows(cfg, &["x", "t", "u0", "u_eps", "u_approx"], &rows)
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let v = &cfg.verify;
    let mut battery = BatteryConfig::new(params);
    battery.tolerance = v.tolerance;
    let defaults = WindowSpec::default();
    battery.window = WindowSpec {
        chi0: v.chi0.unwrap_or(defaults.chi0),
        sigma0: v.sigma0.unwrap_or(defaults.sigma0),
    };
    if let Some(taus) = &v.taus {
        battery.taus = taus.clone();
    }
    if let Some([x, xi, t]) = v.probe_point {
        battery.probe_point = (x, xi, t);
    }
    battery.ladder_rungs = v.ladder_rungs.unwrap_or(battery.ladder_rungs);
    let outcomes = run_battery(&battery);

    let mut text = io::stdout().lock();
    for o in &outcomes {
        writeln!(
            text,
            "{:<7} {:<16} achieved {:<10.3e} tolerance {:<9.2e} {}",
            o.status.label(),
            o.name,
            o.achieved,
            o.tolerance,
            o.note
        )?;
    }
    let count = |s: CheckStatus| outcomes.iter().filter(|o| o.status == s).count();
    let failed: Vec<&str> = outcomes.iter().filter(|o| o.status == CheckStatus::Fail).map(|o| o.name).collect();
    writeln!(
        text,
        "summary: {} passed, {} failed, {} skipped",
        count(CheckStatus::Pass),
        failed.len(),
        count(CheckStatus::Skipped)
    )?;
    text.flush()?;

    if cfg.output.is_some() {
        let rows: Vec<Vec<String>> = outcomes
            .iter()
            .map(|o| {
                vec![
                    o.name.to_string(),
                    o.status.label().to_string(),
                    num(o.achieved),
                    num(o.tolerance),
                    o.note.clone(),
                ]
            })
            .collect();
        write_rows(cfg, &["check", "status", "achieved", "tolerance", "note"], &rows)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("checks failed: {}", failed.join(", "))))
    }
}

fn parse_signal(spec: &str, params: &MediumParams) -> Result<TimeSignal, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("unrecognised signal '{spec}'; use mode:N, sine:OMEGA, constant:V or images:X:XI"));
    let real = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        ["mode", n] => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(TimeSignal::wave_mode(params, n)),
            _ => Err(bad()),
        },
        ["sine", w] => Ok(TimeSignal::sine(real(w)?)),
        ["constant", v] => Ok(TimeSignal::constant(real(v)?)),
        ["images", x, xi] => Ok(TimeSignal::wave_green_images(params, real(x)?, real(xi)?)?),
        _ => Err(bad()),
    }
}

pub fn transform(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    params.require_viscous()?;
    let s = &cfg.transform;
    let signal = parse_signal(s.signal.as_deref().unwrap_or("mode:1"), &params)?;
    let ts = axis_or(&s.t, || vec![params.l / params.c]);
    let spec = QuadratureSpec::new(
        s.abs_tol.unwrap_or(1e-12),
        s.rel_tol.unwrap_or(1e-10),
        s.max_subdivisions.unwrap_or(2000),
    )?;
    let rows = ts
        .par_iter()
        .map(|&t| {
            let r = kv_transform(&signal, &params, t, &spec)?;
            Ok(vec![num(t), num(r.value), num(r.error), r.evaluations.to_string()])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    write_rows(cfg, &["t", "value", "error", "evaluations"], &rows)
}

pub fn probe(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let s = &cfg.probe;
    let (l, period) = (params.l, params.l / params.c);
    let point = GreenPoint::new(s.x.unwrap_or(0.25 * l), s.xi.unwrap_or(0.5 * l), 0.0);
    let t = s.t.unwrap_or(2.5 * period);
    let ladder = s.eps_ladder.clone().unwrap_or_else(|| {
        let e = params.eps;
        vec![e, e / 2.0, e / 4.0, e / 8.0]
    });
    let series = match s.modes {
        Some(n) => ProbeSeries::Modes(n),
        None => ProbeSeries::Converged(SeriesPolicy::default()),
    };
    let r = remainder_probe(&params, &point, &ladder, t, series)?;
    let rows: Vec<Vec<String>> = (0..r.eps_ladder.len())
        .map(|i| {
            let ratio = if i == 0 { f64::NAN } else { r.ratios[i - 1] };
            vec![
                num(r.eps_ladder[i]),
                num(r.tau_grid[i]),
                num(r.g_eps[i]),
                num(r.h[i]),
                num(r.errors[i]),
                num(ratio),
                r.nodal[i].to_string(),
            ]
        })
        .collect();
    write_rows(cfg, &["eps", "tau", "g_eps", "h", "abs_err", "ratio", "nodal"], &rows)
}
