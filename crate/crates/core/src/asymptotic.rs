//! Slow-time approximant `H`: a Gaussian average of the pure-wave Green
//! function over time, its sine series, the split into forward and backward
//! diffusion waves, their theta-function derivative, and empirical probes of
//! how fast `H` approaches the viscous Green function.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::modal::{green_eps_partial, green_eps_series, GreenPoint, MediumParams, SeriesPolicy, SeriesSum};
use crate::signal::TimeSignal;
use crate::specfun::{partition, theta3, try_integrate_pieces, IntegrationResult, QuadratureSpec};
use crate::transform::linear_fit;

/// Half-width of the Gaussian window in standard deviations.
pub const GAUSSIAN_HALF_WIDTH: f64 = 8.0;

/// Travelling coordinates `x ± ct` and slow time `εt/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlowTimeFrame {
    pub y_plus: f64,
    pub y_minus: f64,
    pub theta: f64,
}

impl SlowTimeFrame {
    pub fn new(params: &MediumParams, x: f64, t: f64) -> Self {
        Self {
            y_plus: x + params.c * t,
            y_minus: x - params.c * t,
            theta: 0.5 * params.eps * t,
        }
    }
}

/// Which travelling-frame component: `Plus` uses `x + ct`, `Minus` uses `x − ct`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

fn gaussian_width(params: &MediumParams, t: f64) -> Result<f64> {
    params.require_viscous()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time must be positive, got {t}")));
    }
    Ok((params.eps * t).sqrt() / params.c)
}

fn normal_density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Numerical mass of the truncated Gaussian weight (before normalisation).
pub fn gaussian_mass(spec: &QuadratureSpec) -> Result<f64> {
    let w = GAUSSIAN_HALF_WIDTH;
    Ok(try_integrate_pieces(|z| Ok(normal_density(z)), &partition(-w, w, [0.0], 4), spec)?.value)
}

/// Gaussian time average
/// `(c/√(2πεt)) ∫ e^{−c²(τ−t)²/(2εt)} s(τ) dτ`,
/// over `|τ − t| ≤ 8√(εt)/c` and divided by the numerical mass of the
/// truncated weight. Negative times use the signal's extension.
pub fn h_convolution(signal: &TimeSignal, params: &MediumParams, t: f64, spec: &QuadratureSpec) -> Result<IntegrationResult> {
    params.validate()?;
    let width = gaussian_width(params, t)?;
    let w = GAUSSIAN_HALF_WIDTH;
    let cuts = signal
        .breakpoints(t - w * width, t + w * width)
        .into_iter()
        .map(|b| (b - t) / width)
        .chain(std::iter::once(0.0));
    let pts = partition(-w, w, cuts, 4);
    let mut r = try_integrate_pieces(|z| Ok(normal_density(z) * signal.eval(t + width * z)?), &pts, spec)?;
    let mass = gaussian_mass(spec)?;
    r.value /= mass;
    r.error /= mass;
    Ok(r)
}

/// `β` such that mode `n` carries the heat factor `e^{−βn²}`.
fn heat_rate(params: &MediumParams, t: f64) -> f64 {
    0.5 * params.eps * t * (PI / params.l).powi(2)
}

/// Bound on `Σ_{m>n} e^{−βm²}/m`.
fn heat_tail(beta: f64, n: usize) -> f64 {
    if beta <= 0.0 {
        return f64::INFINITY;
    }
    let m = n as f64 + 1.0;
    (-beta * m * m).exp() / (m * (1.0 - (-beta * (2.0 * m + 1.0)).exp()))
}

/// Sum `Σ_{n≥1} e^{−βn²} f(n)/n` with `|f| ≤ 1`, stopping once the remaining
/// heat-kernel tail is below `tol / pref`.
fn heat_series(beta: f64, pref: f64, policy: &SeriesPolicy, mut f: impl FnMut(usize) -> f64) -> SeriesSum {
    let mut sum = 0.0;
    let mut used = 0;
    let mut tail = f64::INFINITY;
    for n in 1..=policy.max_modes {
        let nf = n as f64;
        sum += (-beta * nf * nf).exp() * f(n) / nf;
        used = n;
        tail = pref * heat_tail(beta, n);
        if tail < policy.tail_tol {
            break;
        }
    }
    SeriesSum {
        value: pref * sum,
        modes_used: used,
        tail_estimate: tail,
        certified: tail < policy.tail_tol,
    }
}

fn check_inputs(params: &MediumParams, p: &GreenPoint, policy: &SeriesPolicy) -> Result<()> {
    params.validate()?;
    params.require_viscous()?;
    policy.validate()?;
    p.validate(params)
}

/// Sine series of the approximant:
/// `H = (2/(cπ)) Σ (1/n) e^{−(πn/l)²εt/2} sin(πcnt/l) sin(πnx/l) sin(πnξ/l)`.
pub fn h_series(params: &MediumParams, p: &GreenPoint, policy: &SeriesPolicy) -> Result<SeriesSum> {
    check_inputs(params, p, policy)?;
    if p.t == 0.0 {
        return Ok(SeriesSum {
            value: 0.0,
            modes_used: 0,
            tail_estimate: 0.0,
            certified: true,
        });
    }
    let k = PI / params.l;
    let beta = heat_rate(params, p.t);
    Ok(heat_series(beta, 2.0 / (params.c * PI), policy, |n| {
        let nf = n as f64;
        (k * params.c * nf * p.t).sin() * (k * nf * p.x).sin() * (k * nf * p.xi).sin()
    }))
}

/// First `n_modes` terms of [`h_series`].
pub fn h_partial(params: &MediumParams, p: &GreenPoint, n_modes: usize) -> f64 {
    let policy = SeriesPolicy {
        max_modes: n_modes.max(1),
        tail_tol: 0.0,
        ..SeriesPolicy::default()
    };
    let k = PI / params.l;
    let beta = heat_rate(params, p.t);
    heat_series(beta, 2.0 / (params.c * PI), &policy, |n| {
        let nf = n as f64;
        (k * params.c * nf * p.t).sin() * (k * nf * p.x).sin() * (k * nf * p.xi).sin()
    })
    .value
}

/// One travelling component
/// `H^± = (1/(cπ)) Σ (1/n) e^{−(πn/l)²εt/2} sin(πnξ/l) cos(πn(x±ct)/l)`.
fn branch_sum(params: &MediumParams, x: f64, xi: f64, t: f64, which: Branch, policy: &SeriesPolicy) -> SeriesSum {
    let k = PI / params.l;
    let y = x + which.sign() * params.c * t;
    let beta = heat_rate(params, t);
    heat_series(beta, 1.0 / (params.c * PI), policy, |n| {
        let nf = n as f64;
        (k * nf * xi).sin() * (k * nf * y).cos()
    })
}

/// The two travelling components `(H⁻, H⁺)` with `H = H⁻ − H⁺`.
pub fn h_split(params: &MediumParams, p: &GreenPoint, policy: &SeriesPolicy) -> Result<(f64, f64)> {
    check_inputs(params, p, policy)?;
    let minus = branch_sum(params, p.x, p.xi, p.t, Branch::Minus, policy);
    let plus = branch_sum(params, p.x, p.xi, p.t, Branch::Plus, policy);
    Ok((minus.value, plus.value))
}

/// Largest central-difference residual of the diffusion-wave equation
/// obeyed by a travelling component truncated to `n_modes` terms:
/// `(ε/2)v_xx − v_t − cv_x` for `H⁻` and `(ε/2)v_xx − v_t + cv_x` for `H⁺`.
/// Works for `ε = 0` (pure advection).
pub fn diffusion_wave_residual(
    params: &MediumParams,
    which: Branch,
    xi: f64,
    stencil: &[(f64, f64)],
    h: f64,
    n_modes: usize,
) -> Result<f64> {
    params.validate()?;
    if !(h > 0.0) || h * PI * n_modes as f64 / params.l >= 0.5 {
        return Err(domain("step must satisfy 0 < h·πN/l < 0.5"));
    }
    let policy = SeriesPolicy {
        max_modes: n_modes.max(1),
        tail_tol: 0.0,
        ..SeriesPolicy::default()
    };
    let v = |x: f64, t: f64| branch_sum(params, x, xi, t, which, &policy).value;
    let mut worst: f64 = 0.0;
    for &(x, t) in stencil {
        if x - h <= 0.0 || x + h >= params.l || t - h < 0.0 {
            return Err(domain(format!("stencil at ({x}, {t}) touches the boundary")));
        }
        let vxx = (v(x + h, t) - 2.0 * v(x, t) + v(x - h, t)) / (h * h);
        let vx = (v(x + h, t) - v(x - h, t)) / (2.0 * h);
        let vt = (v(x, t + h) - v(x, t - h)) / (2.0 * h);
        let drift = -which.sign() * params.c;
        let res = 0.5 * params.eps * vxx - vt - drift * vx;
        worst = worst.max(res.abs());
    }
    Ok(worst)
}

/// `∂ₓH^±` through Jacobi's theta function:
/// `−(1/(4cl)) [θ₃((y−ξ)/(2l), q) − θ₃((y+ξ)/(2l), q)]`, with `y = x ± ct`,
/// `q = e^{−π²ϑ/l²}` and slow time `ϑ = εt/2`.
pub fn theta_form(params: &MediumParams, p: &GreenPoint, which: Branch) -> Result<f64> {
    params.validate()?;
    p.validate(params)?;
    if !(p.t > 0.0) || params.eps == 0.0 {
        return Err(domain("theta form needs εt > 0"));
    }
    let frame = SlowTimeFrame::new(params, p.x, p.t);
    let y = match which {
        Branch::Plus => frame.y_plus,
        Branch::Minus => frame.y_minus,
    };
    let l = params.l;
    let q = (-PI * PI * frame.theta / (l * l)).exp();
    if q == 0.0 {
        return Ok(0.0);
    }
    let a = theta3((y - p.xi) / (2.0 * l), q)?;
    let b = theta3((y + p.xi) / (2.0 * l), q)?;
    Ok(-(a - b) / (4.0 * params.c * l))
}

/// How the probe sums the two Green functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbeSeries {
    /// Converged series under the given policy.
    Converged(SeriesPolicy),
    /// The first `n` modes of each, summed exactly.
    Modes(usize),
}

/// Distance between the viscous Green function and its slow-time
/// approximant along a ladder of viscosities at fixed `(x, ξ, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderProbe {
    pub eps_ladder: Vec<f64>,
    /// Fast times `t/ε`.
    pub tau_grid: Vec<f64>,
    pub g_eps: Vec<f64>,
    pub h: Vec<f64>,
    /// `|G_ε − H|`.
    pub errors: Vec<f64>,
    /// `E(ε_i)/E(ε_{i+1})`.
    pub ratios: Vec<f64>,
    /// Relative remainder `(G_ε − H)/H`; NaN at nodal rungs.
    pub rho1_estimates: Vec<f64>,
    /// What is left of `E` after removing the fitted `k₁/τ` part.
    pub rho2_estimates: Vec<f64>,
    /// Least-squares `k₁` in `E ≈ k₁/τ`.
    pub fitted_k1: f64,
    /// Slope of `ln E` against `ln(1/τ)`; near 1 under a `1/τ` law.
    pub fitted_order: f64,
    /// `λ²` fitted to `|ρ₂| ≈ k₂e^{−λ²τ^{1/3}}`; NaN when fewer than two usable rungs.
    pub fitted_lambda2: f64,
    /// Rungs where `|H|` is below a tenth of its largest value over one period.
    pub nodal: Vec<bool>,
}

/// Evaluate `E(ε) = |G_ε − H|` along `eps_ladder` (strictly decreasing, with
/// `t/ε > 1` throughout) and fit the decay laws.
pub fn remainder_probe(
    params_base: &MediumParams,
    p: &GreenPoint,
    eps_ladder: &[f64],
    t: f64,
    series: ProbeSeries,
) -> Result<RemainderProbe> {
    params_base.validate()?;
    if eps_ladder.len() < 2 {
        return Err(domain("the probe needs at least two viscosities"));
    }
    if eps_ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(domain("viscosity ladder must be strictly decreasing"));
    }
    let point = GreenPoint { t, ..*p };
    let mut out = RemainderProbe {
        eps_ladder: eps_ladder.to_vec(),
        tau_grid: Vec::new(),
        g_eps: Vec::new(),
        h: Vec::new(),
        errors: Vec::new(),
        ratios: Vec::new(),
        rho1_estimates: Vec::new(),
        rho2_estimates: Vec::new(),
        fitted_k1: f64::NAN,
        fitted_order: f64::NAN,
        fitted_lambda2: f64::NAN,
        nodal: Vec::new(),
    };
    for &eps in eps_ladder {
        let params = params_base.with_eps(eps);
        params.validate()?;
        params.require_viscous()?;
        let tau = t / eps;
        if !(tau > 1.0) {
            return Err(domain(format!("fast time t/ε = {tau} must exceed 1")));
        }
        let (g, h) = match series {
            ProbeSeries::Converged(policy) => (
                green_eps_series(&params, &point, &policy)?.value,
                h_series(&params, &point, &policy)?.value,
            ),
            ProbeSeries::Modes(n) => (green_eps_partial(&params, &point, n), h_partial(&params, &point, n)),
        };
        let period = 2.0 * params.l / params.c;
        let h_scale = (1..=64)
            .map(|j| {
                let s = GreenPoint { t: period * j as f64 / 64.0, ..point };
                match series {
                    ProbeSeries::Converged(policy) => h_series(&params, &s, &policy).map(|r| r.value.abs()),
                    ProbeSeries::Modes(n) => Ok(h_partial(&params, &s, n).abs()),
                }
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let nodal = h.abs() < 0.1 * h_scale;
        out.tau_grid.push(tau);
        out.g_eps.push(g);
        out.h.push(h);
        out.errors.push((g - h).abs());
        out.rho1_estimates.push(if nodal { f64::NAN } else { (g - h) / h });
        out.nodal.push(nodal);
    }
    out.ratios = out.errors.windows(2).map(|w| w[0] / w[1]).collect();

    let inv: Vec<f64> = out.tau_grid.iter().map(|t| 1.0 / t).collect();
    let num: f64 = out.errors.iter().zip(&inv).map(|(e, i)| e * i).sum();
    let den: f64 = inv.iter().map(|i| i * i).sum();
    out.fitted_k1 = num / den;
    out.rho2_estimates = out.errors.iter().zip(&inv).map(|(e, i)| e - out.fitted_k1 * i).collect();

    let usable: Vec<(f64, f64)> = inv
        .iter()
        .zip(&out.errors)
        .filter(|(_, e)| **e > 0.0)
        .map(|(i, e)| (i.ln(), e.ln()))
        .collect();
    if usable.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = usable.into_iter().unzip();
        out.fitted_order = linear_fit(&xs, &ys).0;
    }
    let floor: Vec<(f64, f64)> = out
        .tau_grid
        .iter()
        .zip(&out.rho2_estimates)
        .filter(|(_, r)| r.abs() > 0.0)
        .map(|(t, r)| (t.cbrt(), r.abs().ln()))
        .collect();
    if floor.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = floor.into_iter().unzip();
        out.fitted_lambda2 = -linear_fit(&xs, &ys).0;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::Mode;
    use crate::signal::Extension;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::new(1e-14, 1e-12, 2000).unwrap()
    }

    #[test]
    fn unit_mass_and_constants() {
        assert!((gaussian_mass(&spec()).unwrap() - 1.0).abs() < 1e-12);
        let p = MediumParams::new(1.0, 1.0, 0.3).unwrap();
        let r = h_convolution(&TimeSignal::constant(2.5), &p, 0.7, &spec()).unwrap();
        assert!((r.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn sine_eigenrelation() {
        let p = MediumParams::new(1.0, PI, 0.1).unwrap();
        let r = h_convolution(&TimeSignal::wave_mode(&p, 1), &p, 1.0, &spec()).unwrap();
        assert!((r.value - (-0.05f64).exp() * 1f64.sin()).abs() < 1e-12);
        assert!((r.value - 0.8004319606128645).abs() < 1e-12);
        for n in 1..=5 {
            let r = h_convolution(&TimeSignal::wave_mode(&p, n), &p, 1.7, &spec()).unwrap();
            let nf = n as f64;
            let exact = (-0.5 * nf * nf * p.eps * 1.7).exp() * (nf * 1.7).sin();
            assert!((r.value - exact).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn short_windows_reproduce_the_signal() {
        // Gaussian smoothing error of a smooth signal scales with εt.
        let sig = TimeSignal::new(|t| (3.0 * t).cos() + t * t).with_extension(Extension::Even);
        let t: f64 = 1.3;
        let exact = (3.0 * t).cos() + t * t;
        let errs: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
            .iter()
            .map(|&eps| {
                let p = MediumParams::new(1.0, 1.0, eps).unwrap();
                (h_convolution(&sig, &p, t, &spec()).unwrap().value - exact).abs()
            })
            .collect();
        for w in errs.windows(2) {
            assert!((w[0] / w[1] - 2.0).abs() < 0.05, "{errs:?}");
        }
    }

    #[test]
    fn series_paths_agree() {
        let p = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let gp = GreenPoint::new(0.5, 0.5, 1.0);
        let policy = SeriesPolicy::default();
        let series = h_series(&p, &gp, &policy).unwrap();
        assert!(series.certified);
        let sig = TimeSignal::wave_green_images(&p, 0.5, 0.5).unwrap();
        let conv = h_convolution(&sig, &p, 1.0, &spec()).unwrap();
        assert!((series.value - conv.value).abs() < 1e-8, "{} vs {}", series.value, conv.value);
        assert_eq!(h_series(&p, &GreenPoint::new(0.3, 0.4, 0.0), &policy).unwrap().value, 0.0);
    }

    #[test]
    fn heat_death_bound() {
        let p = MediumParams::new(1.0, 1.0, 0.5).unwrap();
        let t = 4.0;
        let v = h_series(&p, &GreenPoint::new(0.3, 0.8, t), &SeriesPolicy::default()).unwrap();
        assert!(v.value.abs() <= 2.0 / PI * (-PI * PI * p.eps * t / 2.0).exp());
    }

    #[test]
    fn split_reassembles() {
        let p = MediumParams::new(1.3, 0.9, 0.07).unwrap();
        let policy = SeriesPolicy::default();
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let gp = GreenPoint::new(0.9 * next(), 0.9 * next(), 0.05 + 2.0 * next());
            let (m, pl) = h_split(&p, &gp, &policy).unwrap();
            let h = h_series(&p, &gp, &policy).unwrap().value;
            assert!((m - pl - h).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_converges_at_second_order() {
        let p = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let stencil = [(0.3, 0.5), (0.55, 1.1), (0.7, 0.3)];
        for which in [Branch::Minus, Branch::Plus] {
            let r: Vec<f64> = [0.02, 0.01, 0.005]
                .iter()
                .map(|&h| diffusion_wave_residual(&p, which, 0.4, &stencil, h, 3).unwrap())
                .collect();
            for w in r.windows(2) {
                assert!(((w[0] / w[1]).log2() - 2.0).abs() < 0.1, "{which:?}: {r:?}");
            }
        }
        // At c = 1 the time and space truncation errors cancel exactly.
        let wave = MediumParams::new(1.3, 1.0, 0.0).unwrap();
        let r0 = diffusion_wave_residual(&wave, Branch::Minus, 0.4, &stencil, 0.01, 3).unwrap();
        let r1 = diffusion_wave_residual(&wave, Branch::Minus, 0.4, &stencil, 0.005, 3).unwrap();
        assert!(((r0 / r1).log2() - 2.0).abs() < 0.1);
        assert!(diffusion_wave_residual(&p, Branch::Minus, 0.4, &[(0.005, 0.5)], 0.01, 3).is_err());
    }

    #[test]
    fn theta_form_matches_difference_quotient() {
        let p = MediumParams::new(1.0, 1.0, 0.2).unwrap();
        let policy = SeriesPolicy::default();
        let h = 1e-4;
        for which in [Branch::Minus, Branch::Plus] {
            let pick = |x: f64| {
                let (m, pl) = h_split(&p, &GreenPoint::new(x, 0.6, 1.0), &policy).unwrap();
                if which == Branch::Minus { m } else { pl }
            };
            let fd = (pick(0.3 + h) - pick(0.3 - h)) / (2.0 * h);
            let th = theta_form(&p, &GreenPoint::new(0.3, 0.6, 1.0), which).unwrap();
            assert!((fd - th).abs() < 1e-6, "{which:?}: {fd} vs {th}");
        }
        assert_eq!(theta_form(&p, &GreenPoint::new(0.3, 0.0, 1.0), Branch::Plus).unwrap(), 0.0);
        assert!(theta_form(&p, &GreenPoint::new(0.3, 0.6, 0.0), Branch::Plus).is_err());
        let late = theta_form(&p, &GreenPoint::new(0.3, 0.6, 200.0), Branch::Minus).unwrap();
        assert!(late.abs() < 1e-12);
    }

    #[test]
    fn single_mode_probe_matches_closed_form() {
        let base = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let gp = GreenPoint::new(0.5, 0.5, 2.0);
        let ladder = [0.2, 0.1, 0.05, 0.025];
        let probe = remainder_probe(&base, &gp, &ladder, 2.0, ProbeSeries::Modes(1)).unwrap();
        for (i, &eps) in ladder.iter().enumerate() {
            let m = Mode::new(&base.with_eps(eps), 1);
            let d = m.decay;
            let closed = 2.0 / PI * ((-d * 2.0).exp() * (m.a * m.omega * 2.0).sin() / m.omega - (-d * 2.0).exp() * (m.a * 2.0).sin());
            assert!((probe.errors[i] - closed.abs()).abs() < 1e-12);
        }
        assert!(remainder_probe(&base, &gp, &[0.1, 0.2], 2.0, ProbeSeries::Modes(1)).is_err());
        assert!(remainder_probe(&base, &gp, &[3.0, 1.0], 2.0, ProbeSeries::Modes(1)).is_err());
    }

    #[test]
    fn probe_flags_nodal_rungs() {
        let base = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let probe = remainder_probe(
            &base,
            &GreenPoint::new(0.5, 0.5, 2.0),
            &[0.2, 0.1],
            2.0,
            ProbeSeries::Converged(SeriesPolicy::default()),
        )
        .unwrap();
        assert!(probe.nodal.iter().all(|&n| n));
        assert!(probe.h.iter().all(|h| h.abs() < 1e-12));
    }
}
