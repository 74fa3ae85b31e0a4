//! The Bessel-kernel transform that maps a pure-wave time signal to its
//! viscous counterpart, evaluated in the fast-time form where every
//! exponential is non-positive, together with numerical checks of the
//! closed-form integrals behind it and of the window-tail law.
//!
//! With `τ = t/ε`, `U = u/t`, `V = v/t` the transform reads
//!
//! ```text
//! G_ε(t) = (c√τ)³/√π ∫₀^∞ dV ∫₀^V G₀(tU) Ĩ₀(2c²τ√(U(V−U))) e^{−c²τ h(U, V−U)} dU
//! ```
//!
//! where `Ĩ₀(z) = e^{−z} I₀(z)` and `h(u, v) = 1 + (u+v)²/4 − 2√(uv) ≥ 0`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::modal::MediumParams;
use crate::specfun::{
    bessel_i0, i0_scaled_unchecked, partition, try_integrate_pieces, try_integrate_semi_infinite, IntegrationResult,
    QuadratureSpec,
};

pub use crate::signal::TimeSignal;

/// Constants of the window `[1−χ, 1+χ] × [1−σ, 1+σ]` with `χ = χ₀τ^{−1/3}`,
/// `σ = σ₀τ^{−1/3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec {
    pub chi0: f64,
    pub sigma0: f64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { chi0: 0.5, sigma0: 0.5 }
    }
}

impl WindowSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v <= 1.0;
        if ok(self.chi0) && ok(self.sigma0) {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "window constants must lie in (0, 1], got chi0 = {}, sigma0 = {}",
                self.chi0, self.sigma0
            )))
        }
    }

    pub fn chi(&self, tau: f64) -> f64 {
        self.chi0 * tau.powf(-1.0 / 3.0)
    }

    pub fn sigma(&self, tau: f64) -> f64 {
        self.sigma0 * tau.powf(-1.0 / 3.0)
    }
}

/// `h(u, v) = 1 + (u+v)²/4 − 2√(uv)`, evaluated as the sum of squares
/// `¼[(u−1)² + (v−1)² + (√u−1)²(√v+1)² + (√v−1)²(√u+1)²]`.
pub fn gamma_exponent(u: f64, v: f64) -> f64 {
    let (su, sv) = (u.sqrt(), v.sqrt());
    let sq = |x: f64| x * x;
    0.25 * (sq(u - 1.0) + sq(v - 1.0) + sq(su - 1.0) * sq(sv + 1.0) + sq(sv - 1.0) * sq(su + 1.0))
}

/// The transform integrand on the quarter plane.
#[derive(Clone, Debug)]
pub struct GammaIntegrand {
    pub tau: f64,
    pub c: f64,
    pub t: f64,
    pub signal: TimeSignal,
}

impl GammaIntegrand {
    pub fn new(params: &MediumParams, t: f64, signal: TimeSignal) -> Result<Self> {
        params.require_viscous()?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(format!("transform time must be positive, got {t}")));
        }
        Ok(Self {
            tau: params.fast_time(t),
            c: params.c,
            t,
            signal,
        })
    }

    /// `(c√τ)³/√π`.
    pub fn prefactor(&self) -> f64 {
        (self.c * self.tau.sqrt()).powi(3) / PI.sqrt()
    }

    fn rate(&self) -> f64 {
        self.c * self.c * self.tau
    }

    /// Weight with the signal replaced by 1; never exceeds the prefactor.
    pub fn weight(&self, u: f64, v: f64) -> f64 {
        let z = 2.0 * self.rate() * (u * v).sqrt();
        self.prefactor() * i0_scaled_unchecked(z) * (-self.rate() * gamma_exponent(u, v)).exp()
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        if u < 0.0 || v < 0.0 {
            return Err(domain("integrand is defined on u, v >= 0"));
        }
        Ok(self.signal.eval(self.t * u)? * self.weight(u, v))
    }

    /// Inner integrand in `θ` after `U = V sin²θ`, so `V − U = V cos²θ` and
    /// `dU = V sin 2θ dθ`. The exponent becomes `(1 − V/2)² + V(cos θ − sin θ)²`.
    fn along_diagonal(&self, big_v: f64, theta: f64) -> Result<f64> {
        let (s, co) = theta.sin_cos();
        let jac = 2.0 * big_v * s * co;
        if jac <= 0.0 {
            return Ok(0.0);
        }
        let z = self.rate() * jac;
        let expo = (1.0 - 0.5 * big_v).powi(2) + big_v * (co - s).powi(2);
        let w = i0_scaled_unchecked(z) * (-self.rate() * expo).exp();
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(self.signal.eval(self.t * big_v * s * s)? * w * jac)
    }
}

/// Viscous counterpart of a pure-wave time signal at time `t`.
///
/// The outer integral is truncated where the bound
/// `ln(P·M·V·π/2) − c²τ(V−2)²/8` (with `P` the prefactor and `M` the
/// signal bound) stays below `spec.tail_cut_log`. The inner integral is
/// split at the images of the signal's breakpoints. The reported error is
/// the outer quadrature estimate.
pub fn kv_transform(signal: &TimeSignal, params: &MediumParams, t: f64, spec: &QuadratureSpec) -> Result<IntegrationResult> {
    params.validate()?;
    spec.validate()?;
    let bound = signal
        .bound()
        .ok_or_else(|| domain("the transform needs a magnitude bound on the signal"))?;
    let g = GammaIntegrand::new(params, t, signal.clone())?;
    if bound == 0.0 {
        return Ok(IntegrationResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
            roundoff_limited: false,
        });
    }
    let pref = g.prefactor();
    let rate = g.rate();
    let inner_spec = QuadratureSpec {
        abs_tol: 0.1 * spec.abs_tol / pref,
        rel_tol: 0.1 * spec.rel_tol,
        ..*spec
    };
    let decay = |big_v: f64| (pref * bound * big_v * PI / 2.0).ln() - rate * (big_v - 2.0).powi(2) / 8.0;

    let cutoff_guess = crate::specfun::quadrature::find_cutoff(0.0, &decay, spec.tail_cut_log)?;
    if cutoff_guess * t > signal.validity().1 {
        return Err(domain(format!(
            "signal must be valid up to t = {}, only valid to {}",
            cutoff_guess * t,
            signal.validity().1
        )));
    }
    let mut outer_breaks: Vec<f64> = signal.breakpoints(0.0, cutoff_guess * t).into_iter().map(|b| b / t).collect();
    outer_breaks.push(2.0);

    let mut evaluations = 0usize;
    let mut inner = |big_v: f64| -> Result<f64> {
        if big_v <= 0.0 {
            return Ok(0.0);
        }
        let span = t * big_v;
        let thetas = signal
            .breakpoints(0.0, span)
            .into_iter()
            .map(|b| (b / span).sqrt().asin())
            .chain(std::iter::once(PI / 4.0));
        let pts = partition(0.0, PI / 2.0, thetas, 2);
        let r = try_integrate_pieces(|th| g.along_diagonal(big_v, th), &pts, &inner_spec)?;
        evaluations += r.evaluations;
        Ok(pref * r.value)
    };
    let outer = try_integrate_semi_infinite(&mut inner, 0.0, &outer_breaks, spec, decay)?;
    let mut result = outer.integral;
    result.evaluations += evaluations;
    Ok(result)
}

/// Two sides of a closed-form integral identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    /// Quadrature side.
    pub lhs: f64,
    /// Closed-form side.
    pub rhs: f64,
    /// Quadrature error estimate for `lhs`.
    pub quad_error: f64,
}

impl IdentityCheck {
    pub fn abs_deviation(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn rel_deviation(&self) -> f64 {
        let scale = self.rhs.abs();
        if scale == 0.0 {
            self.abs_deviation()
        } else {
            self.abs_deviation() / scale
        }
    }
}

fn half_plane(params: &MediumParams, s: f64) -> Result<f64> {
    params.require_viscous()?;
    let w = params.eps * s + params.c * params.c;
    if w > 0.0 {
        Ok(w)
    } else {
        Err(domain(format!("εs + c² must be positive, got {w}")))
    }
}

/// Laplace transform of the Gaussian kernel,
/// `∫₀^∞ e^{−st} e^{−c²t/ε} e^{−c²v²/(4εt)} / √(πεt) dt = e^{−(c/ε)√(εs+c²) v} / √(εs+c²)`.
///
/// Integrated in `r = √t` to remove the endpoint singularity.
pub fn check_gaussian_laplace(params: &MediumParams, v: f64, s: f64, spec: &QuadratureSpec) -> Result<IdentityCheck> {
    let w = half_plane(params, s)?;
    let (c, eps) = (params.c, params.eps);
    let lam = s + c * c / eps;
    let far = c * c * v * v / (4.0 * eps);
    let amp = 2.0 / (PI * eps).sqrt();
    let f = |r: f64| -> Result<f64> {
        if r == 0.0 {
            return Ok(if far > 0.0 { 0.0 } else { amp });
        }
        let r2 = r * r;
        Ok(amp * (-lam * r2 - far / r2).exp())
    };
    let peak = (far / lam).powf(0.25);
    let r = try_integrate_semi_infinite(f, 0.0, &[peak], spec, |r| amp.ln() - lam * r * r)?;
    Ok(IdentityCheck {
        lhs: r.integral.value,
        rhs: (-(c / eps) * w.sqrt() * v).exp() / w.sqrt(),
        quad_error: r.integral.error,
    })
}

/// Bessel-Laplace integral
/// `∫₀^∞ e^{−(c/ε)√(εs+c²) v} I₀((2c²/ε)√(uv)) dv = (ε/c) e^{(c³u/ε)/√(εs+c²)} / √(εs+c²)`.
///
/// Integrated in `r = √v` with the scaled Bessel function.
pub fn check_bessel_laplace(params: &MediumParams, u: f64, s: f64, spec: &QuadratureSpec) -> Result<IdentityCheck> {
    let w = half_plane(params, s)?;
    if !(u >= 0.0) {
        return Err(domain("u must be >= 0"));
    }
    let (c, eps) = (params.c, params.eps);
    let lam = c / eps * w.sqrt();
    let beta = 2.0 * c * c / eps * u.sqrt();
    let f = |r: f64| -> Result<f64> { Ok(2.0 * r * i0_scaled_unchecked(beta * r) * (beta * r - lam * r * r).exp()) };
    let peak = beta / (2.0 * lam);
    let bound = |r: f64| (2.0 * r).ln() + beta * r - lam * r * r;
    let r = try_integrate_semi_infinite(f, 0.0, &[peak, peak + 1.0 / lam.sqrt()], spec, bound)?;
    Ok(IdentityCheck {
        lhs: r.integral.value,
        rhs: eps / c * (c * c * c * u / eps / w.sqrt()).exp() / w.sqrt(),
        quad_error: r.integral.error,
    })
}

/// `∫₀^{2v} sin(ay) I₀(b√(y(2v−y))) dy = 2 sin(av)·S(v, a²−b²)`, where
/// `S = sin(v√Δ)/√Δ` for `Δ > 0`, `v` for `Δ = 0` and `sinh(v√−Δ)/√−Δ` for `Δ < 0`.
///
/// Integrated in `θ` with `y = 2v sin²θ`.
pub fn check_sine_bessel(a: f64, b: f64, v: f64, spec: &QuadratureSpec) -> Result<IdentityCheck> {
    if !(a.is_finite() && b >= 0.0 && b.is_finite() && v >= 0.0 && v.is_finite()) {
        return Err(domain("identity needs finite a, b >= 0 and v >= 0"));
    }
    let f = |th: f64| -> Result<f64> {
        let (s, co) = th.sin_cos();
        let jac = 4.0 * v * s * co;
        Ok((2.0 * a * v * s * s).sin() * bessel_i0(b * v * 2.0 * s * co)? * jac)
    };
    let r = try_integrate_pieces(f, &partition(0.0, PI / 2.0, [PI / 4.0], 4), spec)?;
    let delta = a * a - b * b;
    let shape = if delta > 0.0 {
        (v * delta.sqrt()).sin() / delta.sqrt()
    } else if delta < 0.0 {
        (v * (-delta).sqrt()).sinh() / (-delta).sqrt()
    } else {
        v
    };
    Ok(IdentityCheck {
        lhs: r.value,
        rhs: 2.0 * (a * v).sin() * shape,
        quad_error: r.error,
    })
}

/// Mass of the bounded transform integrand outside the window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowTail {
    pub tau: f64,
    /// Integral of `|Γ|` over the complement of the window with `|G₀|`
    /// replaced by the signal bound.
    pub tail: f64,
    /// Contributions of `u < 1−χ`, `u > 1+χ`, and the strips `v < 1−σ`,
    /// `v > 1+σ` inside the `u` window.
    pub pieces: [f64; 4],
}

/// Integrate the bounded transform integrand over the complement of the
/// window. Semi-infinite pieces are truncated with the envelope
/// `h(u, v) ≥ ¼[(u−1)² + (v−1)²]`.
pub fn gamma_window_tail(params: &MediumParams, t: f64, window: &WindowSpec, signal_bound: f64) -> Result<WindowTail> {
    params.validate()?;
    params.require_viscous()?;
    window.validate()?;
    let tau = params.fast_time(t);
    if !(tau > 1.0) {
        return Err(domain(format!("fast time t/ε must exceed 1, got {tau}")));
    }
    if !(signal_bound >= 0.0 && signal_bound.is_finite()) {
        return Err(domain("signal bound must be finite and >= 0"));
    }
    let g = GammaIntegrand::new(params, t, TimeSignal::constant(signal_bound))?;
    let spec = QuadratureSpec {
        abs_tol: 1e-14,
        rel_tol: 1e-9,
        ..QuadratureSpec::default()
    };
    let rate = g.rate();
    let pref = g.prefactor() * signal_bound;
    if pref == 0.0 {
        return Ok(WindowTail {
            tau,
            tail: 0.0,
            pieces: [0.0; 4],
        });
    }
    let (chi, sig) = (window.chi(tau), window.sigma(tau));
    let w = |u: f64, v: f64| signal_bound * g.weight(u, v);
    let v_bound = |v: f64| pref.ln() - rate * (v - 1.0).powi(2) / 4.0;

    let over_v_half_line = |u: f64, from: f64| -> Result<f64> {
        let r = try_integrate_semi_infinite(|v| Ok(w(u, v)), from, &[1.0], &spec, v_bound)?;
        Ok(r.integral.value)
    };
    let over_v_finite = |u: f64, lo: f64, hi: f64| -> Result<f64> {
        Ok(try_integrate_pieces(|v| Ok(w(u, v)), &partition(lo, hi, [1.0], 2), &spec)?.value)
    };

    let left = try_integrate_pieces(|u| over_v_half_line(u, 0.0), &partition(0.0, 1.0 - chi, [], 4), &spec)?.value;
    let u_bound = |u: f64| (pref * (4.0 * PI / rate).sqrt()).ln() - rate * (u - 1.0).powi(2) / 4.0;
    let right = try_integrate_semi_infinite(|u| over_v_half_line(u, 0.0), 1.0 + chi, &[], &spec, u_bound)?
        .integral
        .value;
    let window_u = partition(1.0 - chi, 1.0 + chi, [1.0], 2);
    let below = try_integrate_pieces(|u| over_v_finite(u, 0.0, 1.0 - sig), &window_u, &spec)?.value;
    let above = try_integrate_pieces(|u| over_v_half_line(u, 1.0 + sig), &window_u, &spec)?.value;
    let pieces = [left, right, below, above];
    Ok(WindowTail {
        tau,
        tail: pieces.iter().sum(),
        pieces,
    })
}

/// Least-squares fit of `ln(tail) = ln μ − λ² τ^{1/3}` over a sweep of fast times.
#[derive(Clone, Debug, PartialEq)]
pub struct TailLaw {
    pub taus: Vec<f64>,
    pub tails: Vec<f64>,
    pub mu: f64,
    pub lambda2: f64,
    pub r_squared: f64,
}

/// Window tails at each fast time in `taus` (computed in parallel) and the
/// fitted stretched-exponential law. Only `c` and the window enter; the
/// strip length is irrelevant.
pub fn window_tail_law(params: &MediumParams, taus: &[f64], window: &WindowSpec) -> Result<TailLaw> {
    if taus.len() < 2 {
        return Err(domain("the tail law needs at least two fast times"));
    }
    let tails = taus
        .par_iter()
        .map(|&tau| gamma_window_tail(params, tau * params.eps, window, 1.0).map(|w| w.tail))
        .collect::<Result<Vec<f64>>>()?;
    if tails.iter().any(|&t| !(t > 0.0)) {
        return Err(domain("window tail vanished; cannot fit its logarithm"));
    }
    let xs: Vec<f64> = taus.iter().map(|t| t.cbrt()).collect();
    let ys: Vec<f64> = tails.iter().map(|t| t.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(TailLaw {
        taus: taus.to_vec(),
        tails,
        mu: intercept.exp(),
        lambda2: -slope,
        r_squared,
    })
}

/// Ordinary least squares `y ≈ slope·x + intercept`, with the coefficient of determination.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::Mode;
    use proptest::prelude::*;

    fn tight() -> QuadratureSpec {
        QuadratureSpec::new(1e-13, 1e-11, 2000).unwrap()
    }

    #[test]
    fn zero_signal_and_inviscid_medium() {
        let p = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let z = kv_transform(&TimeSignal::constant(0.0), &p, 1.0, &tight()).unwrap();
        assert_eq!(z.value, 0.0);
        assert!(kv_transform(&TimeSignal::sine(1.0), &p.with_eps(0.0), 1.0, &tight()).is_err());
        assert!(kv_transform(&TimeSignal::new(|t| t), &p, 1.0, &tight()).is_err());
    }

    #[test]
    fn first_mode_eigenrelation() {
        let p = MediumParams::new(1.0, PI, 0.1).unwrap();
        let r = kv_transform(&TimeSignal::wave_mode(&p, 1), &p, 1.0, &tight()).unwrap();
        let exact = Mode::new(&p, 1).kernel(1.0);
        assert!((r.value / exact - 1.0).abs() < 1e-8, "{} vs {exact}", r.value);
    }

    #[test]
    fn linearity() {
        let p = MediumParams::new(1.0, 1.0, 0.05).unwrap();
        let f = TimeSignal::sine(2.0);
        let g = TimeSignal::sine(5.0);
        let combo = TimeSignal::new(|t| 2.0 * (2.0 * t).sin() - 0.5 * (5.0 * t).sin())
            .with_extension(crate::signal::Extension::Native)
            .with_validity(f64::NEG_INFINITY, f64::INFINITY)
            .with_bound(2.5);
        let tf = kv_transform(&f, &p, 0.8, &tight()).unwrap().value;
        let tg = kv_transform(&g, &p, 0.8, &tight()).unwrap().value;
        let tc = kv_transform(&combo, &p, 0.8, &tight()).unwrap().value;
        assert!((tc - (2.0 * tf - 0.5 * tg)).abs() < 1e-10);
    }

    #[test]
    fn constant_signal_maps_into_the_unit_interval() {
        // The kernel is a positive measure whose mass tends to one as τ grows.
        let p = MediumParams::new(1.0, 1.0, 0.01).unwrap();
        let r = kv_transform(&TimeSignal::constant(1.0), &p, 1.0, &tight()).unwrap();
        assert!(r.value > 0.9 && r.value < 1.0 + 1e-12, "{}", r.value);
    }

    #[test]
    fn closed_form_identities() {
        let spec = tight();
        let unit = MediumParams::new(1.0, 1.0, 1.0).unwrap();
        let c32 = check_gaussian_laplace(&unit, 0.0, 0.0, &spec).unwrap();
        assert!((c32.lhs - 1.0).abs() < 1e-10);
        let c32 = check_gaussian_laplace(&unit, 1.0, 1.0, &spec).unwrap();
        assert!((c32.rhs - 0.17190949153836188).abs() < 1e-15);
        assert!(c32.rel_deviation() < 1e-9);
        // Doubling c² and εs together.
        let scaled = MediumParams::new(2f64.sqrt(), 1.0, 1.0).unwrap();
        let c32s = check_gaussian_laplace(&scaled, 1.0, 2.0, &spec).unwrap();
        assert!(c32s.rel_deviation() < 1e-9);

        let c34 = check_bessel_laplace(&unit, 0.0, 1.0, &spec).unwrap();
        assert!((c34.rhs - 1.0 / 2f64.sqrt()).abs() < 1e-15 && c34.rel_deviation() < 1e-10);
        let c34 = check_bessel_laplace(&unit, 1.0, 1.0, &spec).unwrap();
        assert!((c34.rhs - 1.434093856548958).abs() < 1e-14);
        assert!(c34.rel_deviation() < 1e-9);
        let lower = check_bessel_laplace(&unit, 0.5, 1.0, &spec).unwrap();
        assert!(lower.lhs < c34.lhs);

        let c38 = check_sine_bessel(2.0, 1.0, 1.0, &spec).unwrap();
        assert!((c38.rhs - 1.0363446436745753).abs() < 1e-15);
        assert!(c38.rel_deviation() < 1e-10);
        let cont = check_sine_bessel(1.0, 2.0, 1.0, &spec).unwrap();
        assert!((cont.rhs - 2.6600354644371462).abs() < 1e-14);
        assert!(cont.rel_deviation() < 1e-10);
        let flat = check_sine_bessel(3.0, 0.0, 0.7, &spec).unwrap();
        assert!((flat.lhs - (1.0 - (4.2f64).cos()) / 3.0).abs() < 1e-12);
        let crit = check_sine_bessel(1.5, 1.5, 0.9, &spec).unwrap();
        assert!(crit.rel_deviation() < 1e-10);
    }

    #[test]
    fn window_tail_decreases_and_scales_with_the_bound() {
        let p = MediumParams::new(1.0, 1.0, 0.1).unwrap();
        let w = WindowSpec::default();
        let a = gamma_window_tail(&p, 0.8, &w, 1.0).unwrap();
        let b = gamma_window_tail(&p, 6.4, &w, 1.0).unwrap();
        assert!(b.tail < a.tail);
        let a3 = gamma_window_tail(&p, 0.8, &w, 3.0).unwrap();
        assert!((a3.tail / a.tail - 3.0).abs() < 1e-8);
        assert!(gamma_window_tail(&p, 0.05, &w, 1.0).is_err());
        assert!(WindowSpec { chi0: 1.5, sigma0: 0.5 }.validate().is_err());
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 0.25 * x).collect();
        let (m, b, r2) = linear_fit(&xs, &ys);
        assert!((m + 0.25).abs() < 1e-15 && (b - 0.5).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn exponent_is_nonnegative_and_bounded_below(u in 0.0f64..6.0, v in 0.0f64..6.0) {
            let h = gamma_exponent(u, v);
            let direct = 1.0 + (u + v).powi(2) / 4.0 - 2.0 * (u * v).sqrt();
            prop_assert!((h - direct).abs() < 1e-12 * (1.0 + direct.abs()));
            prop_assert!(h >= 0.25 * ((u - 1.0).powi(2) + (v - 1.0).powi(2)) - 1e-14);
        }
    }
}
