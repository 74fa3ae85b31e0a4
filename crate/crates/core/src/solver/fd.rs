use super::data::ProblemData;
use super::synth::Field;
use crate::error::{Error, Result};
use crate::modal::MediumParams;

/// Uniform finite-difference grid: `nx` nodes on `[0, l]` including both
/// walls, time step `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdGrid {
    pub nx: usize,
    pub dt: f64,
}

impl FdGrid {
    pub fn new(nx: usize, dt: f64) -> Self {
        Self { nx, dt }
    }

    /// Grid with `dt = courant · h / c`.
    pub fn with_courant(params: &MediumParams, nx: usize, courant: f64) -> Self {
        let h = params.l / (nx.max(2) - 1) as f64;
        Self::new(nx, courant * h / params.c)
    }

    pub fn spacing(&self, params: &MediumParams) -> f64 {
        params.l / (self.nx - 1) as f64
    }

    pub fn validate(&self, params: &MediumParams) -> Result<()> {
        if self.nx < 8 {
            return Err(Error::Config(format!("need at least 8 grid points, got {}", self.nx)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {}", self.dt)));
        }
        let cfl = params.c * self.dt * self.nx as f64 / params.l;
        if cfl > 1.0 {
            return Err(Error::Config(format!("c·dt·nx/l = {cfl} exceeds 1")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FdSolution {
    /// Displacement at every grid node and every step `0..=steps`.
    pub field: Field,
    /// Discrete energy `½Σ h w² + ½c² Σ h (Δu/h)²` after every step.
    pub energy: Vec<f64>,
}

impl FdSolution {
    /// True when the energy never increases by more than `slack` (relative).
    pub fn energy_monotone(&self, slack: f64) -> bool {
        self.energy.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack) + f64::MIN_POSITIVE)
    }
}

/// Thomas algorithm for a constant symmetric tridiagonal matrix.
fn solve_tridiagonal(diag: f64, off: f64, rhs: &mut [f64], scratch: &mut [f64]) {
    let n = rhs.len();
    let mut denom = diag;
    rhs[0] /= denom;
    for i in 1..n {
        scratch[i - 1] = off / denom;
        denom = diag - off * scratch[i - 1];
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

/// Crank–Nicolson for the first-order system `u_t = w`,
/// `w_t = c² u_xx + ε w_xx − f`, eliminating `u` so each step is one
/// tridiagonal solve for the interior velocities. Second order in `h` and `dt`.
pub fn fd_reference(data: &ProblemData, params: &MediumParams, grid: &FdGrid, t_max: f64) -> Result<FdSolution> {
    params.validate()?;
    grid.validate(params)?;
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::Config(format!("horizon must be finite and >= 0, got {t_max}")));
    }
    let nx = grid.nx;
    let m = nx - 2;
    let h = grid.spacing(params);
    let dt = grid.dt;
    let steps = (t_max / dt).round() as usize;
    let c2 = params.c * params.c;
    let xs: Vec<f64> = (0..nx).map(|i| i as f64 * h).collect();
    let ts: Vec<f64> = (0..=steps).map(|j| j as f64 * dt).collect();

    let mut u: Vec<f64> = xs.iter().map(|&x| (data.f0)(x)).collect();
    let mut w: Vec<f64> = xs.iter().map(|&x| (data.f1)(x)).collect();
    let walls = |t: f64| [data.phi.value(t), data.psi.value(t), data.phi.rate(t), data.psi.rate(t)];
    let b0 = walls(0.0);
    u[0] = b0[0];
    u[nx - 1] = b0[1];
    w[0] = b0[2];
    w[nx - 1] = b0[3];

    let lap = |v: &[f64], i: usize| (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h);
    let k = (0.5 * dt * params.eps + 0.25 * dt * dt * c2) / (h * h);
    let (diag, off) = (1.0 + 2.0 * k, -k);
    let wall_term = |du: f64, rate_new: f64, rate_old: f64| {
        (0.5 * dt * c2 * du + 0.5 * dt * params.eps * rate_new - 0.25 * dt * dt * c2 * rate_old) / (h * h)
    };

    let energy_of = |u: &[f64], w: &[f64]| {
        let kinetic: f64 = w[1..nx - 1].iter().map(|v| v * v).sum::<f64>() * h;
        let strain: f64 = u.windows(2).map(|p| (p[1] - p[0]).powi(2)).sum::<f64>() / h;
        0.5 * kinetic + 0.5 * c2 * strain
    };

    let mut values = Vec::with_capacity((steps + 1) * nx);
    values.extend_from_slice(&u);
    let mut energy = vec![energy_of(&u, &w)];
    let mut rhs = vec![0.0; m];
    let mut scratch = vec![0.0; m];
    let mut src_now: Vec<f64> = xs.iter().map(|&x| (data.f)(x, 0.0)).collect();
    let mut src_next = vec![0.0; nx];
    let mut prev_walls = b0;

    for j in 0..steps {
        let t1 = (j + 1) as f64 * dt;
        let nw = walls(t1);
        for (i, &x) in xs.iter().enumerate() {
            src_next[i] = (data.f)(x, t1);
        }
        for i in 1..nx - 1 {
            let mut r = w[i]
                + (0.5 * dt * params.eps + 0.25 * dt * dt * c2) * lap(&w, i)
                + dt * c2 * lap(&u, i)
                - 0.5 * dt * (src_now[i] + src_next[i]);
            // Wall values enter through the Laplacians at the new level.
            if i == 1 {
                r += wall_term(nw[0] - prev_walls[0], nw[2], prev_walls[2]);
            }
            if i == nx - 2 {
                r += wall_term(nw[1] - prev_walls[1], nw[3], prev_walls[3]);
            }
            rhs[i - 1] = r;
        }
        solve_tridiagonal(diag, off, &mut rhs, &mut scratch);
        for i in 1..nx - 1 {
            let w_new = rhs[i - 1];
            u[i] += 0.5 * dt * (w[i] + w_new);
            w[i] = w_new;
        }
        u[0] = nw[0];
        u[nx - 1] = nw[1];
        w[0] = nw[2];
        w[nx - 1] = nw[3];
        prev_walls = nw;
        std::mem::swap(&mut src_now, &mut src_next);
        values.extend_from_slice(&u);
        energy.push(energy_of(&u, &w));
    }

    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("finite-difference solution is not finite".into()));
    }
    Ok(FdSolution {
        field: Field { xs, ts, values },
        energy,
    })
}
