//! Per-mode algebra of the damped strip and the exact time-domain Green
//! functions, both as sine series and (for the pure wave) by images.
//!
//! Sign convention: the Green functions are the positive impulse responses,
//! so the velocity-driven solution is `u(x, t) = ∫ f1(ξ) G(x, ξ, t) dξ`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Physical configuration: wave speed `c`, strip length `l`, viscosity `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumParams {
    pub c: f64,
    pub l: f64,
    pub eps: f64,
}

impl MediumParams {
    pub fn new(c: f64, l: f64, eps: f64) -> Result<Self> {
        let p = Self { c, l, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::Config(format!("wave speed must be positive, got {}", self.c)));
        }
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::Config(format!("strip length must be positive, got {}", self.l)));
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(Error::Config(format!("viscosity must be >= 0, got {}", self.eps)));
        }
        Ok(())
    }

    /// Same medium with a different viscosity.
    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..*self }
    }

    /// Mode index at which damping becomes critical, `2cl/(π ε)`; infinite for
    /// the pure wave.
    pub fn critical_index(&self) -> f64 {
        if self.eps == 0.0 {
            f64::INFINITY
        } else {
            2.0 * self.c * self.l / (PI * self.eps)
        }
    }

    /// Spatial eigenvalue `(nπ/l)²`.
    pub fn wavenumber_sq(&self, n: usize) -> f64 {
        let kn = n as f64 * PI / self.l;
        kn * kn
    }

    /// Fast time `t/ε`.
    pub fn fast_time(&self, t: f64) -> f64 {
        t / self.eps
    }

    pub fn require_viscous(&self) -> Result<()> {
        if self.eps > 0.0 {
            Ok(())
        } else {
            Err(domain("operation requires eps > 0"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Underdamped,
    Critical,
    Overdamped,
}

/// Modal data of `sin(nπx/l)`: the mode amplitude obeys
/// `u'' + 2·decay·u' + a²u = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub n: usize,
    /// Undamped angular frequency `πcn/l`.
    pub a: f64,
    /// Damping rate `π²n²ε/(2l²)`.
    pub decay: f64,
    /// `√|1 − (n/k)²|`; zero for a critical mode.
    pub omega: f64,
    pub regime: Regime,
}

/// Relative distance from critical damping below which a mode is treated as critical.
pub const CRITICAL_THRESHOLD: f64 = 1e-8;

pub fn mode(params: &MediumParams, n: usize) -> Result<Mode> {
    if n == 0 {
        return Err(domain("mode index starts at 1"));
    }
    Ok(Mode::new(params, n))
}

impl Mode {
    pub(crate) fn new(params: &MediumParams, n: usize) -> Self {
        let nf = n as f64;
        let a = PI * params.c * nf / params.l;
        if params.eps == 0.0 {
            return Self {
                n,
                a,
                decay: 0.0,
                omega: 1.0,
                regime: Regime::Underdamped,
            };
        }
        let decay = 0.5 * params.eps * params.wavenumber_sq(n);
        let r = nf / params.critical_index();
        let gap = (1.0 - r) * (1.0 + r);
        let (omega, regime) = if gap.abs() < CRITICAL_THRESHOLD {
            (0.0, Regime::Critical)
        } else if gap > 0.0 {
            (gap.sqrt(), Regime::Underdamped)
        } else {
            ((-gap).sqrt(), Regime::Overdamped)
        };
        Self {
            n,
            a,
            decay,
            omega,
            regime,
        }
    }

    /// Oscillation (or hyperbolic) rate `a·ω`.
    fn rate(&self) -> f64 {
        self.a * self.omega
    }

    /// Slowest exponential rate in the free response. For overdamped modes
    /// this is `decay − a|ω| = a²/(decay + a|ω|) > 0`.
    pub fn slowest_decay(&self) -> f64 {
        match self.regime {
            Regime::Overdamped => self.a * self.a / (self.decay + self.rate()),
            _ => self.decay,
        }
    }

    /// Impulse response: `u(0) = 0`, `u'(0) = 1`.
    pub fn impulse(&self, t: f64) -> f64 {
        let d = self.decay;
        match self.regime {
            Regime::Underdamped => {
                let w = self.rate();
                (-d * t).exp() * (w * t).sin() / w
            }
            Regime::Critical => t * (-d * t).exp(),
            Regime::Overdamped => {
                let w = self.rate();
                let slow = self.slowest_decay();
                ((-slow * t).exp() - (-(d + w) * t).exp()) / (2.0 * w)
            }
        }
    }

    /// Release response: `u(0) = 1`, `u'(0) = 0`.
    pub fn release(&self, t: f64) -> f64 {
        let d = self.decay;
        match self.regime {
            Regime::Underdamped => {
                let w = self.rate();
                (-d * t).exp() * ((w * t).cos() + d / w * (w * t).sin())
            }
            Regime::Critical => (1.0 + d * t) * (-d * t).exp(),
            Regime::Overdamped => {
                let w = self.rate();
                let slow = self.slowest_decay();
                0.5 * ((-slow * t).exp() + (-(d + w) * t).exp()) + d * self.impulse(t)
            }
        }
    }

    /// Time derivative of [`Mode::impulse`].
    pub fn impulse_rate(&self, t: f64) -> f64 {
        self.release(t) - 2.0 * self.decay * self.impulse(t)
    }

    /// Time derivative of [`Mode::release`].
    pub fn release_rate(&self, t: f64) -> f64 {
        -self.a * self.a * self.impulse(t)
    }

    /// Time factor of this mode in the viscous Green function, `a·impulse(t)`.
    pub fn kernel(&self, t: f64) -> f64 {
        self.a * self.impulse(t)
    }
}

/// `e^{-decay·t}·sin(aωt)/ω`, continued to `a·t·e^{-decay·t}` at critical
/// damping and to `e^{-decay·t}·sinh(a|ω|t)/|ω|` beyond it.
pub fn g_eps_mode(mode: &Mode, t: f64) -> f64 {
    mode.kernel(t)
}

/// Field point `x`, source point `xi` and time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenPoint {
    pub x: f64,
    pub xi: f64,
    pub t: f64,
}

impl GreenPoint {
    pub fn new(x: f64, xi: f64, t: f64) -> Self {
        Self { x, xi, t }
    }

    pub fn validate(&self, params: &MediumParams) -> Result<()> {
        let inside = |v: f64| v.is_finite() && (0.0..=params.l).contains(&v);
        if !inside(self.x) || !inside(self.xi) {
            return Err(domain(format!(
                "point ({}, {}) lies outside the strip [0, {}]",
                self.x, self.xi, params.l
            )));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(domain(format!("time must be finite and >= 0, got {}", self.t)));
        }
        Ok(())
    }

    fn sines(&self, params: &MediumParams, n: usize) -> f64 {
        let k = n as f64 * PI / params.l;
        (k * self.x).sin() * (k * self.xi).sin()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summation {
    Direct,
    /// Cesàro mean of the partial sums; damps Gibbs ringing at wavefronts.
    Fejer,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPolicy {
    pub max_modes: usize,
    pub tail_tol: f64,
    pub summation: Summation,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            max_modes: 200_000,
            tail_tol: 1e-13,
            summation: Summation::Direct,
        }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_modes == 0 {
            return Err(Error::Config("max_modes must be at least 1".into()));
        }
        if !(self.tail_tol >= 0.0) {
            return Err(Error::Config("tail_tol must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub modes_used: usize,
    pub tail_estimate: f64,
    /// True when the tail estimate is below the policy tolerance.
    pub certified: bool,
}

/// Sine series of the pure-wave Green function, summed over exactly
/// `policy.max_modes` terms.
///
/// The series converges only conditionally (like `1/N`), so the reported
/// tail is a Dirichlet-kernel estimate and rarely certified.
pub fn green_wave_series(params: &MediumParams, p: &GreenPoint, policy: &SeriesPolicy) -> Result<SeriesSum> {
    params.validate()?;
    policy.validate()?;
    p.validate(params)?;
    let n_max = policy.max_modes;
    let pref = 2.0 / (params.c * PI);
    let mut sum = 0.0;
    for n in 1..=n_max {
        let nf = n as f64;
        let weight = match policy.summation {
            Summation::Direct => 1.0,
            Summation::Fejer => 1.0 - nf / (n_max as f64 + 1.0),
        };
        let phase = PI * params.c * nf * p.t / params.l;
        sum += weight * phase.sin() * p.sines(params, n) / nf;
    }
    let tail_estimate = pref * PI / (n_max as f64 + 1.0);
    Ok(SeriesSum {
        value: pref * sum,
        modes_used: n_max,
        tail_estimate,
        certified: tail_estimate <= policy.tail_tol,
    })
}

/// First `n_modes` terms of the pure-wave series, no tail bookkeeping.
pub fn green_wave_partial(params: &MediumParams, p: &GreenPoint, n_modes: usize) -> f64 {
    let mut sum = 0.0;
    for n in 1..=n_modes {
        let nf = n as f64;
        sum += (PI * params.c * nf * p.t / params.l).sin() * p.sines(params, n) / nf;
    }
    2.0 * sum / (params.c * PI)
}

/// First `n_modes` terms of the viscous series, no tail bookkeeping.
pub fn green_eps_partial(params: &MediumParams, p: &GreenPoint, n_modes: usize) -> f64 {
    let mut sum = 0.0;
    for n in 1..=n_modes {
        sum += Mode::new(params, n).kernel(p.t) * p.sines(params, n) / n as f64;
    }
    2.0 * sum / (params.c * PI)
}

/// Value of the images sum for `t >= 0`, half-weighted on wavefronts.
fn images_value(c: f64, l: f64, x: f64, xi: f64, t: f64) -> f64 {
    let period = 2.0 * l / c;
    let t = t.rem_euclid(period);
    let reach = c * t;
    let m_max = (reach / (2.0 * l)).ceil() as i64 + 1;
    let indicator = |dist: f64| {
        if dist < reach {
            1.0
        } else if dist == reach {
            0.5
        } else {
            0.0
        }
    };
    let mut sum = 0.0;
    for m in -m_max..=m_max {
        let shift = 2.0 * m as f64 * l;
        sum += indicator((x - (shift + xi)).abs()) - indicator((x - (shift - xi)).abs());
    }
    sum / (2.0 * c)
}

/// Pure-wave Green function by the method of images: a finite sum of
/// `±1/(2c)` steps from the sources `2ml ± ξ`. Exact.
pub fn green_wave_images(params: &MediumParams, p: &GreenPoint) -> Result<f64> {
    params.validate()?;
    p.validate(params)?;
    Ok(images_value(params.c, params.l, p.x, p.xi, p.t))
}

/// Same as [`green_wave_images`] for any real `t`, extended oddly to `t < 0`
/// (the parity of the sine series).
pub(crate) fn wave_images_odd(params: &MediumParams, x: f64, xi: f64, t: f64) -> f64 {
    if t >= 0.0 {
        images_value(params.c, params.l, x, xi, t)
    } else {
        -images_value(params.c, params.l, x, xi, -t)
    }
}

/// Wavefront arrival times of the pure-wave Green function in `[t0, t1]`,
/// sorted. Between consecutive fronts the function is constant.
pub fn wave_breakpoints(params: &MediumParams, x: f64, xi: f64, t0: f64, t1: f64) -> Vec<f64> {
    let c = params.c;
    let l = params.l;
    let period = 2.0 * l / c;
    let base = [
        (x - xi).abs() / c,
        (x + xi) / c,
        (2.0 * l - x - xi) / c,
        (2.0 * l - (x - xi).abs()) / c,
    ];
    let mut out = Vec::new();
    if !(t1 > t0) {
        return out;
    }
    let first = (t0 / period).floor() as i64 - 1;
    let last = (t1 / period).ceil() as i64 + 1;
    for j in first..=last {
        for b in base {
            for s in [1.0, -1.0] {
                let tb = s * (b + j as f64 * period);
                if tb > t0 && tb < t1 {
                    out.push(tb);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * period);
    out
}

/// `Σ_{n≥1} sin(nπx/l) sin(nπξ/l) / n²` in closed form.
fn sine_pair_zeta2(params: &MediumParams, x: f64, xi: f64) -> f64 {
    let clausen = |theta: f64| PI * PI / 6.0 - PI * theta / 2.0 + theta * theta / 4.0;
    let alpha = (PI * (x - xi) / params.l).abs();
    let beta = PI * (x + xi) / params.l;
    0.5 * (clausen(alpha) - clausen(beta))
}

/// Sine series of the viscous Green function.
///
/// Overdamped terms approach `(k/(2n²))e^{-c²t/ε}·sin·sin`, which sums only
/// like `1/N`. When that family matters at the requested tolerance it is
/// subtracted from every term past `2k` and added back in closed form, which
/// leaves an `O(n⁻⁴)` remainder. Truncation then uses the remainder size,
/// or otherwise an explicit envelope of the form `t·e^{-D_m t}` per mode.
/// At `t = 0` the result is 0 and uncertified.
pub fn green_eps_series(params: &MediumParams, p: &GreenPoint, policy: &SeriesPolicy) -> Result<SeriesSum> {
    params.validate()?;
    params.require_viscous()?;
    policy.validate()?;
    p.validate(params)?;
    if p.t == 0.0 {
        return Ok(SeriesSum {
            value: 0.0,
            modes_used: 0,
            tail_estimate: f64::INFINITY,
            certified: false,
        });
    }

    let c = params.c;
    let t = p.t;
    let k = params.critical_index();
    let pref = 2.0 / (PI * c);
    let slow = (-c * c * t / params.eps).exp();
    let tol = policy.tail_tol;
    let kummer = k / (PI * c) * slow * PI * PI / 6.0 >= tol * 1e-3;
    let n0 = (2.0 * k).floor() as usize + 1;
    let asym = |n: usize| 0.5 * k * slow / (n as f64 * n as f64);

    let envelope_tail = |n: usize| -> f64 {
        // Bound on Σ_{m>n} |term_m| valid when the Kummer correction is off.
        let nf = n as f64;
        let mut bound = 0.0;
        if nf + 1.0 < k {
            let d1 = Mode::new(params, n + 1).decay;
            let d2 = Mode::new(params, n + 2).decay;
            let ratio = (-(d2 - d1) * t).exp();
            bound += 2.0 / params.l * t * (-d1 * t).exp() / (1.0 - ratio).max(f64::MIN_POSITIVE);
        }
        let mid = (2.0 * k).ceil() - nf.max(k.floor() - 1.0);
        if mid > 0.0 {
            bound += 2.0 / params.l * t * slow * (mid + 1.0);
        }
        bound += pref * k * slow / (3f64.sqrt() * nf.max(2.0 * k));
        bound
    };

    let mut sum = 0.0;
    let mut head_zeta = 0.0;
    let mut tail_estimate = f64::INFINITY;
    let mut used = 0;
    for n in 1..=policy.max_modes {
        let nf = n as f64;
        let g = Mode::new(params, n).kernel(t) / nf;
        let s = p.sines(params, n);
        used = n;
        if kummer && n >= n0 {
            let rem = g - asym(n);
            sum += rem * s;
            tail_estimate = pref * rem.abs() * nf / 3.0;
        } else {
            sum += g * s;
            if kummer {
                head_zeta += s / (nf * nf);
                continue;
            }
            tail_estimate = envelope_tail(n);
        }
        if tail_estimate < tol {
            break;
        }
    }
    if kummer {
        let full = sine_pair_zeta2(params, p.x, p.xi);
        sum += 0.5 * k * slow * (full - head_zeta);
    }
    Ok(SeriesSum {
        value: pref * sum,
        modes_used: used,
        tail_estimate,
        certified: tail_estimate < tol,
    })
}
