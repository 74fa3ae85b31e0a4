//! Laplace-domain kernels of the strip problem and the frequency map that
//! carries the pure-wave Green function to the viscous one.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::modal::{Mode, MediumParams};

/// Complex frequency `s`, restricted to the half-plane `Re s > −c²/ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexFreq {
    pub s: Complex64,
}

impl ComplexFreq {
    pub fn new(params: &MediumParams, s: Complex64) -> Result<Self> {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(domain("frequency must be finite"));
        }
        if params.eps > 0.0 && s.re <= -params.c * params.c / params.eps {
            return Err(domain(format!(
                "Re s = {} lies outside the half-plane Re s > {}",
                s.re,
                -params.c * params.c / params.eps
            )));
        }
        Ok(Self { s })
    }

    pub fn real(params: &MediumParams, s: f64) -> Result<Self> {
        Self::new(params, Complex64::new(s, 0.0))
    }
}

fn stiffness(params: &MediumParams, s: Complex64) -> Complex64 {
    params.eps * s + params.c * params.c
}

/// `σ = s/√(εs + c²)` on the principal branch; exactly `s/c` when `ε = 0`.
pub fn sigma_eps(params: &MediumParams, s: ComplexFreq) -> Result<Complex64> {
    if params.eps == 0.0 {
        return Ok(s.s / params.c);
    }
    let w = stiffness(params, s.s);
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(domain("εs + c² lies on the branch cut of the square root"));
    }
    Ok(s.s / w.sqrt())
}

/// The kernel is even in σ; use the root with non-negative real part so
/// every exponential below is bounded.
fn right_sigma(params: &MediumParams, s: ComplexFreq) -> Result<Complex64> {
    let sigma = sigma_eps(params, s)?;
    Ok(if sigma.re < 0.0 { -sigma } else { sigma })
}

fn pole(s: ComplexFreq) -> Error {
    Error::Pole { re: s.s.re, im: s.s.im }
}

/// `ĝ(y, s) = cosh((l−y)σ) / (2(εs+c²)σ sinh(lσ))`, evaluated as
/// `[e^{−yσ} + e^{−(2l−y)σ}] / [2(εs+c²)σ(1 − e^{−2lσ})]`.
pub fn g_hat(params: &MediumParams, y: f64, s: ComplexFreq) -> Result<Complex64> {
    if !(y.is_finite() && (0.0..=2.0 * params.l).contains(&y)) {
        return Err(domain(format!("offset {y} outside [0, 2l]")));
    }
    let sigma = right_sigma(params, s)?;
    let w = stiffness(params, s.s);
    let l = params.l;
    let denom = 2.0 * w * sigma * (1.0 - (-2.0 * l * sigma).exp());
    if denom.norm() <= 1e-300 || (1.0 - (-2.0 * l * sigma).exp()).norm() < 1e-14 {
        return Err(pole(s));
    }
    Ok(((-y * sigma).exp() + (-(2.0 * l - y) * sigma).exp()) / denom)
}

/// `Ĝ(x, ξ, s) = ĝ(|x−ξ|, s) − ĝ(x+ξ, s)`.
///
/// Near `σ = 0` the two images cancel, so there the equivalent product
/// `sinh((l−x₊)σ)·sinh(x₋σ) / ((εs+c²)σ sinh(lσ))` is used instead, with
/// `x₋ = min(x, ξ)` and `x₊ = max(x, ξ)`.
pub fn green_hat(params: &MediumParams, x: f64, xi: f64, s: ComplexFreq) -> Result<Complex64> {
    let l = params.l;
    let inside = |v: f64| v.is_finite() && (0.0..=l).contains(&v);
    if !inside(x) || !inside(xi) {
        return Err(domain(format!("({x}, {xi}) outside the strip [0, {l}]")));
    }
    let sigma = right_sigma(params, s)?;
    if (l * sigma).norm() >= 0.5 {
        return Ok(g_hat(params, (x - xi).abs(), s)? - g_hat(params, x + xi, s)?);
    }
    let w = stiffness(params, s.s);
    let (lo, hi) = (x.min(xi), x.max(xi));
    if sigma == Complex64::new(0.0, 0.0) {
        return Ok(lo * (l - hi) / (w * l));
    }
    let shl = (l * sigma).sinh();
    if shl.norm() < 1e-300 {
        return Err(pole(s));
    }
    Ok(((l - hi) * sigma).sinh() * (lo * sigma).sinh() / (w * sigma * shl))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityReport {
    pub max_rel_deviation: f64,
    pub samples: usize,
    /// Sample with the largest deviation.
    pub worst: Option<Complex64>,
}

/// Compare `Ĝ_ε(s)` with `c²/(εs+c²)·Ĝ₀(cs/√(εs+c²))` at each sample.
///
/// The left side is the viscous kernel; the right side evaluates the
/// pure-wave kernel at the mapped frequency. Samples where either side
/// cannot be evaluated count as infinite deviation.
pub fn check_frequency_map(params: &MediumParams, x: f64, xi: f64, samples: &[ComplexFreq]) -> IdentityReport {
    let wave = params.with_eps(0.0);
    let c = params.c;
    let mut report = IdentityReport {
        max_rel_deviation: 0.0,
        samples: samples.len(),
        worst: None,
    };
    for &s in samples {
        let dev = (|| -> Result<f64> {
            let lhs = green_hat(params, x, xi, s)?;
            let w = stiffness(params, s.s);
            let mapped = ComplexFreq::new(&wave, c * s.s / w.sqrt())?;
            let rhs = c * c / w * green_hat(&wave, x, xi, mapped)?;
            let scale = lhs.norm().max(rhs.norm());
            Ok(if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale })
        })()
        .unwrap_or(f64::INFINITY);
        if report.worst.is_none() || dev > report.max_rel_deviation {
            report.max_rel_deviation = dev;
            report.worst = Some(s.s);
        }
    }
    report
}

/// Locate the pole of `Ĝ_ε` belonging to mode `n` by Newton iteration on
/// `sinh(lσ(s))`, continued in viscosity from the undamped pole `i·πcn/l`.
///
/// For an underdamped mode the root is `−decay + i·a·ω`.
pub fn modal_pole(params: &MediumParams, n: usize) -> Result<Complex64> {
    params.validate()?;
    if n == 0 {
        return Err(domain("mode index starts at 1"));
    }
    const STAGES: usize = 32;
    let mut s = Complex64::new(0.0, Mode::new(params, n).a);
    for stage in 1..=STAGES {
        let eps = params.eps * stage as f64 / STAGES as f64;
        s = newton_pole(&params.with_eps(eps), s)?;
    }
    Ok(s)
}

fn newton_pole(params: &MediumParams, mut s: Complex64) -> Result<Complex64> {
    let l = params.l;
    let c2 = params.c * params.c;
    for _ in 0..100 {
        let w = params.eps * s + c2;
        let rw = w.sqrt();
        let sigma = s / rw;
        let f = (l * sigma).sinh();
        let dsigma = (params.eps * s + 2.0 * c2) / (2.0 * w * rw);
        let df = l * (l * sigma).cosh() * dsigma;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        s -= step;
        if step.norm() <= 1e-15 * s.norm().max(1.0) {
            return Ok(s);
        }
    }
    Err(Error::Convergence {
        estimate: s.norm(),
        error: f64::NAN,
        subdivisions: 100,
    })
}
