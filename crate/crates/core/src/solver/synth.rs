use std::f64::consts::PI;

use rayon::prelude::*;

use super::data::{lift_boundary, Lift, ProblemData};
use crate::asymptotic::h_convolution;
use crate::error::{domain, Error, Result};
use crate::modal::{Mode, MediumParams, SeriesPolicy};
use crate::signal::{Extension, TimeSignal};
use crate::specfun::QuadratureSpec;

/// Fewest spatial samples used to project data onto the sine modes.
pub const MIN_PROJECTION_POINTS: usize = 4097;
/// Fewest time steps in the source table.
pub const MIN_SOURCE_STEPS: usize = 2048;
/// Largest source-table step, in units of the crossing time `l/c`.
const SOURCE_STEP: f64 = 1e-3;

/// Points `(x, t)` at which a solution is wanted: the tensor product of
/// `xs` and `ts`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
}

impl OutputGrid {
    pub fn new(xs: Vec<f64>, ts: Vec<f64>) -> Self {
        Self { xs, ts }
    }

    /// `nx` equispaced points on `[0, l]` and `nt` on `[0, t_max]`.
    pub fn uniform(params: &MediumParams, nx: usize, t_max: f64, nt: usize) -> Self {
        let lin = |a: f64, b: f64, n: usize| -> Vec<f64> {
            if n <= 1 {
                return vec![a];
            }
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
        };
        Self::new(lin(0.0, params.l, nx), lin(0.0, t_max, nt))
    }

    pub fn validate(&self, params: &MediumParams) -> Result<()> {
        if self.xs.is_empty() || self.ts.is_empty() {
            return Err(Error::Config("output grid is empty".into()));
        }
        if let Some(x) = self.xs.iter().find(|&&x| !(x.is_finite() && (0.0..=params.l).contains(&x))) {
            return Err(domain(format!("x = {x} lies outside [0, {}]", params.l)));
        }
        if let Some(t) = self.ts.iter().find(|&&t| !(t.is_finite() && t >= 0.0)) {
            return Err(domain(format!("time must be finite and >= 0, got {t}")));
        }
        Ok(())
    }

    fn t_max(&self) -> f64 {
        self.ts.iter().copied().fold(0.0, f64::max)
    }
}

/// Values on an [`OutputGrid`], time-major. `NaN` marks points that were not computed.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
}

impl Field {
    fn zeros(grid: &OutputGrid) -> Self {
        Self {
            xs: grid.xs.clone(),
            ts: grid.ts.clone(),
            values: vec![0.0; grid.xs.len() * grid.ts.len()],
        }
    }

    pub fn get(&self, ix: usize, it: usize) -> f64 {
        self.values[it * self.xs.len() + ix]
    }

    fn set(&mut self, ix: usize, it: usize, v: f64) {
        let nx = self.xs.len();
        self.values[it * nx + ix] = v;
    }

    /// Largest pointwise difference, ignoring points missing from either field.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub field: Field,
    pub modes: usize,
    pub warnings: Vec<String>,
}

/// Sine coefficients `(2/l)∫ f sin(nπx/l) dx` of the initial data, `n = 1..`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalCoefficients {
    pub displacement: Vec<f64>,
    pub velocity: Vec<f64>,
}

impl ModalCoefficients {
    pub fn modes(&self) -> usize {
        self.displacement.len()
    }

    pub fn new(data: &ProblemData, params: &MediumParams, n_modes: usize) -> Self {
        let q = Projector::new(params.l, n_modes);
        Self {
            displacement: q.project(|x| (data.f0)(x)),
            velocity: q.project(|x| (data.f1)(x)),
        }
    }
}

/// Composite Simpson projection onto the first `n_modes` sines.
struct Projector {
    l: f64,
    n_modes: usize,
    xs: Vec<f64>,
    weights: Vec<f64>,
}

impl Projector {
    fn new(l: f64, n_modes: usize) -> Self {
        let m = (16 * n_modes + 1).max(MIN_PROJECTION_POINTS) | 1;
        let h = l / (m - 1) as f64;
        let xs = (0..m).map(|i| i as f64 * h).collect();
        let weights = (0..m)
            .map(|i| {
                let w = if i == 0 || i == m - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * h / 3.0 * 2.0 / l
            })
            .collect();
        Self { l, n_modes, xs, weights }
    }

    fn project(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let g: Vec<f64> = self.xs.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        self.project_weighted(&g)
    }

    /// Sines by the three-term recurrence `s_{n+1} = 2cos θ s_n − s_{n−1}`.
    fn project_weighted(&self, g: &[f64]) -> Vec<f64> {
        let m = self.xs.len();
        let two_cos: Vec<f64> = self.xs.iter().map(|&x| 2.0 * (PI * x / self.l).cos()).collect();
        let mut prev = vec![0.0; m];
        let mut cur: Vec<f64> = self.xs.iter().map(|&x| (PI * x / self.l).sin()).collect();
        let mut out = Vec::with_capacity(self.n_modes);
        for n in 1..=self.n_modes {
            out.push(g.iter().zip(&cur).map(|(a, b)| a * b).sum());
            if n < self.n_modes {
                for i in 0..m {
                    let next = two_cos[i] * cur[i] - prev[i];
                    prev[i] = cur[i];
                    cur[i] = next;
                }
            }
        }
        out
    }
}

/// Warn when `|c_n| n²` grows over the upper half of the retained modes.
fn decay_warning(label: &str, coeffs: &[f64]) -> Option<String> {
    let n = coeffs.len();
    if n < 8 {
        return None;
    }
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let weighted = |lo: usize, hi: usize| (lo..hi).map(|i| coeffs[i].abs() * ((i + 1) as f64).powi(2)).fold(0.0, f64::max);
    let upper = weighted(n / 2, n);
    let lower = weighted(n / 4, n / 2);
    let top = coeffs[n / 2..].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if top > 1e-12 * scale && upper > 2.0 * lower {
        Some(format!(
            "{label} coefficients decay slower than 1/n^2 over modes {}..{n}; the series may be under-resolved",
            n / 2 + 1
        ))
    } else {
        None
    }
}

/// Modal source values `f_n(s_j)` on a uniform time table, and the forced
/// mode states `(u, u')` at every table node.
struct ForcedTable {
    step: f64,
    forcing: Vec<Vec<f64>>,
    states: Vec<Vec<(f64, f64)>>,
}

impl ForcedTable {
    fn build(data: &ProblemData, params: &MediumParams, modes: &[Mode], t_max: f64) -> Result<Self> {
        let crossing = params.l / params.c;
        let steps = MIN_SOURCE_STEPS.max((t_max / (SOURCE_STEP * crossing)).ceil() as usize);
        let step = t_max / steps as f64;
        let q = Projector::new(params.l, modes.len());
        let by_time: Vec<Vec<f64>> = (0..=steps)
            .into_par_iter()
            .map(|j| {
                let s = j as f64 * step;
                q.project(|x| (data.f)(x, s))
            })
            .collect();
        if by_time.iter().flatten().any(|v| !v.is_finite()) {
            return Err(domain("source term is not finite on the strip"));
        }
        let forcing: Vec<Vec<f64>> = (0..modes.len()).map(|n| by_time.iter().map(|row| row[n]).collect()).collect();
        let states = modes
            .par_iter()
            .zip(&forcing)
            .map(|(m, g)| {
                let mut st = Vec::with_capacity(steps + 1);
                let mut cur = (0.0, 0.0);
                st.push(cur);
                for j in 0..steps {
                    cur = forced_step(m, cur, g[j], (g[j + 1] - g[j]) / step, step);
                    st.push(cur);
                }
                st
            })
            .collect();
        Ok(Self { step, forcing, states })
    }

    /// Forced state of mode index `k` (0-based) at time `t`.
    fn at(&self, m: &Mode, k: usize, t: f64) -> (f64, f64) {
        let last = self.states[k].len() - 1;
        if last == 0 {
            return self.states[k][0];
        }
        let j = ((t / self.step).floor() as usize).min(last - 1);
        let g = &self.forcing[k];
        let delta = t - j as f64 * self.step;
        forced_step(m, self.states[k][j], g[j], (g[j + 1] - g[j]) / self.step, delta)
    }
}

/// Advance `u'' + 2d u' + a² u = −(α + β τ)` exactly over `[0, h]`.
fn forced_step(m: &Mode, (u, v): (f64, f64), alpha: f64, beta: f64, h: f64) -> (f64, f64) {
    let a2 = m.a * m.a;
    let q = -beta / a2;
    let p = (-alpha - 2.0 * m.decay * q) / a2;
    let (h0, h1) = (u - p, v - q);
    (
        p + q * h + h0 * m.release(h) + h1 * m.impulse(h),
        q + h0 * m.release_rate(h) + h1 * m.impulse_rate(h),
    )
}

fn sine_rows(params: &MediumParams, xs: &[f64], n_modes: usize) -> Vec<Vec<f64>> {
    xs.iter()
        .map(|&x| (1..=n_modes).map(|n| (n as f64 * PI * x / params.l).sin()).collect())
        .collect()
}

struct Prepared {
    coeffs: ModalCoefficients,
    modes: Vec<Mode>,
    table: Option<ForcedTable>,
    warnings: Vec<String>,
}

fn prepare(data: &ProblemData, params: &MediumParams, grid: &OutputGrid, policy: &SeriesPolicy, horizon: f64) -> Result<Prepared> {
    params.validate()?;
    policy.validate()?;
    grid.validate(params)?;
    if !data.homogeneous_walls() {
        return Err(domain("wall data must be lifted first; use `solve`"));
    }
    let n = policy.max_modes;
    let coeffs = ModalCoefficients::new(data, params, n);
    if coeffs.displacement.iter().chain(&coeffs.velocity).any(|v| !v.is_finite()) {
        return Err(domain("initial data is not finite on the strip"));
    }
    let modes: Vec<Mode> = (1..=n).map(|k| Mode::new(params, k)).collect();
    let mut warnings = data.corner_warnings(params);
    warnings.extend(decay_warning("displacement", &coeffs.displacement));
    warnings.extend(decay_warning("velocity", &coeffs.velocity));
    let table = if data.has_source && horizon > 0.0 {
        Some(ForcedTable::build(data, params, &modes, horizon)?)
    } else {
        None
    };
    Ok(Prepared {
        coeffs,
        modes,
        table,
        warnings,
    })
}

fn synthesize(params: &MediumParams, grid: &OutputGrid, mut amplitude: impl FnMut(usize, f64) -> Option<f64>, n: usize) -> Field {
    let rows = sine_rows(params, &grid.xs, n);
    let mut field = Field::zeros(grid);
    let mut amps = vec![0.0; n];
    for (it, &t) in grid.ts.iter().enumerate() {
        let mut missing = false;
        for (k, a) in amps.iter_mut().enumerate() {
            match amplitude(k, t) {
                Some(v) => *a = v,
                None => missing = true,
            }
        }
        for (ix, row) in rows.iter().enumerate() {
            let v = if missing { f64::NAN } else { row.iter().zip(&amps).map(|(s, a)| s * a).sum() };
            field.set(ix, it, v);
        }
    }
    field
}

fn modal_solution(data: &ProblemData, params: &MediumParams, grid: &OutputGrid, policy: &SeriesPolicy) -> Result<Solution> {
    let prep = prepare(data, params, grid, policy, grid.t_max())?;
    let Prepared {
        coeffs,
        modes,
        table,
        warnings,
    } = prep;
    let field = synthesize(
        params,
        grid,
        |k, t| {
            let m = &modes[k];
            let free = coeffs.displacement[k] * m.release(t) + coeffs.velocity[k] * m.impulse(t);
            let forced = table.as_ref().map_or(0.0, |tab| tab.at(m, k, t).0);
            Some(free + forced)
        },
        modes.len(),
    );
    Ok(Solution {
        field,
        modes: modes.len(),
        warnings,
    })
}

/// Pure-wave solution (`ε = 0`) by sine synthesis with `policy.max_modes`
/// modes. Wall data must be homogeneous.
pub fn solve_wave(data: &ProblemData, params: &MediumParams, grid: &OutputGrid, policy: &SeriesPolicy) -> Result<Solution> {
    modal_solution(data, &params.with_eps(0.0), grid, policy)
}

/// Viscous solution by sine synthesis with `policy.max_modes` modes. The
/// source is projected on a uniform time table and integrated exactly for
/// its piecewise-linear interpolant. Wall data must be homogeneous.
pub fn solve_viscous(data: &ProblemData, params: &MediumParams, grid: &OutputGrid, policy: &SeriesPolicy) -> Result<Solution> {
    params.require_viscous()?;
    modal_solution(data, params, grid, policy)
}

/// Slow-time approximation: every mode of the pure-wave solution is
/// averaged over the Gaussian of width `√(εt)/c`. For the free response this
/// is the heat factor `e^{−(nπ/l)²εt/2}`; the forced response (zero before
/// `t = 0`) is convolved numerically. Times `t ≤ ε` lie outside the
/// approximation's range and are left as `NaN`.
pub fn approx_viscous(data: &ProblemData, params: &MediumParams, grid: &OutputGrid, policy: &SeriesPolicy) -> Result<Solution> {
    params.require_viscous()?;
    let wave = params.with_eps(0.0);
    let reach = grid
        .ts
        .iter()
        .map(|&t| t + crate::asymptotic::GAUSSIAN_HALF_WIDTH * (params.eps * t).sqrt() / params.c)
        .fold(0.0, f64::max);
    let prep = prepare(data, &wave, grid, policy, reach)?;
    let Prepared {
        coeffs,
        modes,
        table,
        mut warnings,
    } = prep;
    let table = table.map(std::sync::Arc::new);
    let spec = QuadratureSpec::default();
    let skipped = grid.ts.iter().filter(|&&t| t <= params.eps).count();
    if skipped > 0 {
        warnings.push(format!("{skipped} output times with t <= eps were not approximated"));
    }
    let mut failure = None;
    let field = synthesize(
        params,
        grid,
        |k, t| {
            if t <= params.eps {
                return None;
            }
            let m = modes[k];
            let heat = (-0.5 * params.eps * t * params.wavenumber_sq(m.n)).exp();
            let free = heat * (coeffs.displacement[k] * m.release(t) + coeffs.velocity[k] * m.impulse(t));
            let forced = match &table {
                None => 0.0,
                Some(tab) => {
                    let tab = tab.clone();
                    let signal = TimeSignal::new(move |s| tab.at(&m, k, s).0).with_extension(Extension::Zero);
                    match h_convolution(&signal, params, t, &spec) {
                        Ok(r) => r.value,
                        Err(e) => {
                            failure.get_or_insert(e);
                            f64::NAN
                        }
                    }
                }
            };
            Some(free + forced)
        },
        modes.len(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Solution {
        field,
        modes: modes.len(),
        warnings,
    })
}

/// All three solutions of one problem, with wall data lifted automatically.
#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub wave: Field,
    pub viscous: Field,
    pub approx: Field,
    pub modes: usize,
    pub warnings: Vec<String>,
}

/// Lift the wall data, solve the homogeneous problem three ways and add the
/// lift back to each. With `ε = 0` all three are the wave solution.
pub fn solve(data: &ProblemData, params: &MediumParams, grid: &OutputGrid, policy: &SeriesPolicy) -> Result<SolveOutput> {
    let mut warnings = data.corner_warnings(params);
    let (lifted, lift) = lift_boundary(data, params)?;
    let mut wave = solve_wave(&lifted, params, grid, policy)?;
    let (mut viscous, mut approx) = if params.eps == 0.0 {
        (wave.clone(), wave.clone())
    } else {
        (
            solve_viscous(&lifted, params, grid, policy)?,
            approx_viscous(&lifted, params, grid, policy)?,
        )
    };
    for s in [&mut wave, &mut viscous, &mut approx] {
        add_lift(&mut s.field, &lift);
        for w in s.warnings.drain(..) {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    Ok(SolveOutput {
        wave: wave.field,
        viscous: viscous.field,
        approx: approx.field,
        modes: policy.max_modes,
        warnings,
    })
}

fn add_lift(field: &mut Field, lift: &Lift) {
    if lift.is_zero() {
        return;
    }
    let nx = field.xs.len();
    for (it, &t) in field.ts.iter().enumerate() {
        for (ix, &x) in field.xs.iter().enumerate() {
            field.values[it * nx + ix] += lift.value(x, t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::{green_eps_series, GreenPoint};
    use crate::solver::data::BoundarySignal;
    use crate::specfun::integrate_finite;

    fn policy(n: usize) -> SeriesPolicy {
        SeriesPolicy {
            max_modes: n,
            ..SeriesPolicy::default()
        }
    }

    #[test]
    fn projection_of_single_sine() {
        let p = MediumParams::new(1.0, 2.0, 0.1).unwrap();
        let q = Projector::new(p.l, 8);
        let c = q.project(|x| (3.0 * PI * x / 2.0).sin());
        for (k, v) in c.iter().enumerate() {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-14, "mode {}: {v}", k + 1);
        }
    }

    #[test]
    fn single_mode_wave_is_exact() {
        let p = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let data = ProblemData::builtin("sect5", &p).unwrap();
        let grid = OutputGrid::uniform(&p, 11, 2.0, 9);
        let s = solve_wave(&data, &p, &grid, &policy(32)).unwrap();
        for (it, &t) in grid.ts.iter().enumerate() {
            for (ix, &x) in grid.xs.iter().enumerate() {
                let want = (PI * x).sin() * (PI * t).sin();
                assert!((s.field.get(ix, it) - want).abs() < 1e-13);
            }
        }
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn initial_condition_is_reproduced() {
        let p = MediumParams::new(1.0, 1.0, 0.05).unwrap();
        let data = ProblemData::builtin("smooth", &p).unwrap();
        let grid = OutputGrid::uniform(&p, 21, 0.0, 1);
        let s = solve_viscous(&data, &p, &grid, &policy(64)).unwrap();
        for (ix, &x) in grid.xs.iter().enumerate() {
            assert!((s.field.get(ix, 0) - (data.f0)(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn matches_green_function_superposition() {
        let p = MediumParams::new(1.0, 1.0, 0.05).unwrap();
        let f1 = |x: f64| x * (1.0 - x) * (1.0 + x);
        let data = ProblemData::new(|_| 0.0, f1);
        let (x, t) = (0.3, 0.7);
        let grid = OutputGrid::new(vec![x], vec![t]);
        let s = solve_viscous(&data, &p, &grid, &policy(400)).unwrap();
        let tight = SeriesPolicy {
            tail_tol: 1e-12,
            ..SeriesPolicy::default()
        };
        let spec = QuadratureSpec::new(1e-10, 1e-10, 2000).unwrap();
        let g = |xi: f64| f1(xi) * green_eps_series(&p, &GreenPoint::new(x, xi, t), &tight).unwrap().value;
        let want = integrate_finite(g, 0.0, x, &spec).unwrap().value + integrate_finite(g, x, 1.0, &spec).unwrap().value;
        assert!((s.field.get(0, 0) - want).abs() < 1e-8, "{} vs {want}", s.field.get(0, 0));
    }

    /// Forced mode against a fine RK4 integration of the mode equation.
    #[test]
    fn forced_mode_matches_ode_oracle() {
        let p = MediumParams::new(1.0, 1.0, 0.05).unwrap();
        let data = ProblemData::zero().with_source(|x, t| (PI * x).sin() * (3.0 * t).cos() + t * t * (2.0 * PI * x).sin());
        let grid = OutputGrid::new(vec![0.5, 0.25], vec![1.3]);
        let s = solve_viscous(&data, &p, &grid, &policy(8)).unwrap();

        let rk4 = |m: &Mode, g: &dyn Fn(f64) -> f64, t_end: f64| {
            let rhs = |t: f64, y: [f64; 2]| [y[1], -g(t) - 2.0 * m.decay * y[1] - m.a * m.a * y[0]];
            let steps = 20_000;
            let h = t_end / steps as f64;
            let mut y = [0.0, 0.0];
            for i in 0..steps {
                let t = i as f64 * h;
                let k1 = rhs(t, y);
                let k2 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
                let k3 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
                let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
                for c in 0..2 {
                    y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
                }
            }
            y[0]
        };
        let u1 = rk4(&Mode::new(&p, 1), &|t| (3.0 * t).cos(), 1.3);
        let u2 = rk4(&Mode::new(&p, 2), &|t| t * t, 1.3);
        let want = [u1 + u2 * PI.sin(), u1 * (PI / 4.0).sin() + u2 * (PI / 2.0).sin()];
        for (ix, w) in want.iter().enumerate() {
            assert!((s.field.get(ix, 0) - w).abs() < 1e-7, "{} vs {w}", s.field.get(ix, 0));
        }
    }

    #[test]
    fn approx_matches_heat_factor_for_single_mode() {
        let p = MediumParams::new(1.0, 1.0, 0.01).unwrap();
        let data = ProblemData::builtin("sect5", &p).unwrap();
        let grid = OutputGrid::new(vec![0.5], vec![0.005, 0.5, 3.0]);
        let s = approx_viscous(&data, &p, &grid, &policy(4)).unwrap();
        assert!(s.field.get(0, 0).is_nan());
        assert_eq!(s.warnings.len(), 1);
        for it in 1..3 {
            let t = grid.ts[it];
            let want = (-PI * PI * p.eps * t / 2.0).exp() * (PI * t).sin();
            assert!((s.field.get(0, it) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn approx_of_forced_response_is_close_for_small_eps() {
        let data = ProblemData::builtin("smooth", &MediumParams::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        let grid = OutputGrid::new(vec![0.3, 0.5], vec![1.0, 2.0]);
        let err = |eps: f64| {
            let p = MediumParams::new(1.0, 1.0, eps).unwrap();
            let a = approx_viscous(&data, &p, &grid, &policy(24)).unwrap().field;
            let v = solve_viscous(&data, &p, &grid, &policy(24)).unwrap().field;
            a.max_abs_diff(&v)
        };
        let (e1, e2) = (err(0.02), err(0.01));
        let ratio = e1 / e2;
        assert!(e1 < 1e-2 && (1.5..2.5).contains(&ratio), "{e1} {e2}");
    }

    #[test]
    fn lifted_constant_wall_settles_to_linear_profile() {
        let p = MediumParams::new(1.0, 1.0, 0.5).unwrap();
        let data = ProblemData::new(|x| 1.0 - x, |_| 0.0).with_boundary(BoundarySignal::constant(1.0), BoundarySignal::zero());
        let grid = OutputGrid::uniform(&p, 5, 3.0, 4);
        let out = solve(&data, &p, &grid, &policy(16)).unwrap();
        for it in 0..4 {
            for (ix, &x) in grid.xs.iter().enumerate() {
                assert!((out.viscous.get(ix, it) - (1.0 - x)).abs() < 1e-12);
                assert!((out.wave.get(ix, it) - (1.0 - x)).abs() < 1e-12);
            }
        }
        assert_eq!(out.warnings, vec!["1 output times with t <= eps were not approximated".to_string()]);
    }

    #[test]
    fn rough_data_is_flagged() {
        let p = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let data = ProblemData::new(|_| 0.0, |x| if x < 0.5 { 0.0 } else { 1.0 });
        let grid = OutputGrid::new(vec![0.5], vec![0.1]);
        let s = solve_viscous(&data, &p, &grid, &policy(64)).unwrap();
        assert!(s.warnings.iter().any(|w| w.contains("velocity")), "{:?}", s.warnings);
        let walls = ProblemData::zero().with_boundary(BoundarySignal::constant(1.0), BoundarySignal::zero());
        assert!(solve_viscous(&walls, &p, &grid, &policy(4)).is_err());
    }
}
