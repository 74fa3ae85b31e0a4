use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modal::MediumParams;

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SourceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Dirichlet data at one wall, with optional exact derivatives. Missing
/// derivatives are taken by central differences.
#[derive(Clone)]
pub struct BoundarySignal {
    value: TimeFn,
    rate: Option<TimeFn>,
    accel: Option<TimeFn>,
    zero: bool,
}

impl fmt::Debug for BoundarySignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundarySignal")
            .field("zero", &self.zero)
            .field("exact_rate", &self.rate.is_some())
            .field("exact_accel", &self.accel.is_some())
            .finish()
    }
}

const DIFF_STEP: f64 = 1e-4;

impl BoundarySignal {
    pub fn zero() -> Self {
        Self {
            value: Arc::new(|_| 0.0),
            rate: Some(Arc::new(|_| 0.0)),
            accel: Some(Arc::new(|_| 0.0)),
            zero: true,
        }
    }

    pub fn constant(v: f64) -> Self {
        if v == 0.0 {
            return Self::zero();
        }
        Self {
            value: Arc::new(move |_| v),
            rate: Some(Arc::new(|_| 0.0)),
            accel: Some(Arc::new(|_| 0.0)),
            zero: false,
        }
    }

    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(f),
            rate: None,
            accel: None,
            zero: false,
        }
    }

    pub fn with_derivatives(
        mut self,
        rate: impl Fn(f64) -> f64 + Send + Sync + 'static,
        accel: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.rate = Some(Arc::new(rate));
        self.accel = Some(Arc::new(accel));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn rate(&self, t: f64) -> f64 {
        match &self.rate {
            Some(r) => r(t),
            None => (self.value(t + DIFF_STEP) - self.value(t - DIFF_STEP)) / (2.0 * DIFF_STEP),
        }
    }

    pub fn accel(&self, t: f64) -> Result<f64> {
        let v = match &self.accel {
            Some(a) => a(t),
            None => {
                (self.value(t + DIFF_STEP) - 2.0 * self.value(t) + self.value(t - DIFF_STEP)) / (DIFF_STEP * DIFF_STEP)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!(
                "boundary signal is not twice differentiable at t = {t}; supply its derivatives"
            )))
        }
    }
}

/// Data of the strip problem `ε u_xxt + c² u_xx − u_tt = f`:
/// `u(x,0) = f0`, `u_t(x,0) = f1`, `u(0,t) = φ`, `u(l,t) = ψ`.
#[derive(Clone)]
pub struct ProblemData {
    pub f0: SpaceFn,
    pub f1: SpaceFn,
    pub f: SourceFn,
    pub phi: BoundarySignal,
    pub psi: BoundarySignal,
    /// False when `f` is known to vanish, which skips source synthesis.
    pub has_source: bool,
}

impl fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemData")
            .field("has_source", &self.has_source)
            .field("phi", &self.phi)
            .field("psi", &self.psi)
            .finish_non_exhaustive()
    }
}

impl ProblemData {
    /// Initial data only; no source, homogeneous walls.
    pub fn new(f0: impl Fn(f64) -> f64 + Send + Sync + 'static, f1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f0: Arc::new(f0),
            f1: Arc::new(f1),
            f: Arc::new(|_, _| 0.0),
            phi: BoundarySignal::zero(),
            psi: BoundarySignal::zero(),
            has_source: false,
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| 0.0)
    }

    pub fn with_source(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f = Arc::new(f);
        self.has_source = true;
        self
    }

    pub fn without_source(mut self) -> Self {
        self.f = Arc::new(|_, _| 0.0);
        self.has_source = false;
        self
    }

    pub fn with_boundary(mut self, phi: BoundarySignal, psi: BoundarySignal) -> Self {
        self.phi = phi;
        self.psi = psi;
        self
    }

    pub fn homogeneous_walls(&self) -> bool {
        self.phi.is_zero() && self.psi.is_zero()
    }

    /// Every field multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let (f0, f1, f) = (self.f0.clone(), self.f1.clone(), self.f.clone());
        let (phi, psi) = (self.phi.clone(), self.psi.clone());
        let scale_wall = |b: BoundarySignal| {
            if b.is_zero() {
                b
            } else {
                let (v, r, a) = (b.clone(), b.clone(), b);
                BoundarySignal::new(move |t| k * v.value(t))
                    .with_derivatives(move |t| k * r.rate(t), move |t| k * a.accel(t).unwrap_or(f64::NAN))
            }
        };
        Self {
            f0: Arc::new(move |x| k * f0(x)),
            f1: Arc::new(move |x| k * f1(x)),
            f: Arc::new(move |x, t| k * f(x, t)),
            phi: scale_wall(phi),
            psi: scale_wall(psi),
            has_source: self.has_source,
        }
    }

    /// Warnings for initial displacement that disagrees with the wall data at `t = 0`.
    pub fn corner_warnings(&self, params: &MediumParams) -> Vec<String> {
        let mut out = Vec::new();
        let tol = 1e-9;
        let left = (self.f0)(0.0) - self.phi.value(0.0);
        if left.abs() > tol {
            out.push(format!("corner x = 0: f0(0) differs from phi(0) by {left:e}"));
        }
        let right = (self.f0)(params.l) - self.psi.value(0.0);
        if right.abs() > tol {
            out.push(format!("corner x = l: f0(l) differs from psi(0) by {right:e}"));
        }
        out
    }

    /// Named data sets:
    ///
    /// * `zero`: everything zero.
    /// * `sect5`: `f1 = (cπ/l) sin(πx/l)`, whose pure-wave solution is
    ///   `sin(πx/l) sin(πct/l)`.
    /// * `mode:N`: the same with mode `N`.
    /// * `pulse`: a quartic bump `f0 = 16(s(1−s))²` on the middle half of the strip.
    /// * `smooth`: polynomial initial data `f0 = p`, `f1 = r` and source
    ///   `p(x) cos 2t` (in scaled `s = x/l`), all with smooth odd
    ///   continuations across the walls.
    pub fn builtin(name: &str, params: &MediumParams) -> Result<Self> {
        let l = params.l;
        let c = params.c;
        let single = |n: usize| {
            let k = n as f64 * PI / l;
            ProblemData::new(|_| 0.0, move |x| c * k * (k * x).sin())
        };
        match name {
            "zero" => Ok(Self::zero()),
            "sect5" => Ok(single(1)),
            "pulse" => Ok(Self::new(
                move |x| {
                    let s = (x / l - 0.25) * 2.0;
                    if (0.0..=1.0).contains(&s) {
                        16.0 * (s * (1.0 - s)).powi(2)
                    } else {
                        0.0
                    }
                },
                |_| 0.0,
            )),
            "smooth" => Ok(Self::new(move |x| smooth_p(x / l), move |x| smooth_r(x / l))
                .with_source(move |x, t| smooth_p(x / l) * (2.0 * t).cos())),
            other => match other.strip_prefix("mode:").map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 1 => Ok(single(n)),
                _ => Err(Error::Config(format!("unknown built-in data set '{other}'"))),
            },
        }
    }
}

/// `s − 2s³ + s⁴`: vanishes with its second derivative at both ends.
pub fn smooth_p(s: f64) -> f64 {
    s - 2.0 * s.powi(3) + s.powi(4)
}

/// `(7/3)s − (10/3)s³ + s⁵`: vanishes with its second derivative at both ends.
pub fn smooth_r(s: f64) -> f64 {
    7.0 / 3.0 * s - 10.0 / 3.0 * s.powi(3) + s.powi(5)
}

/// Linear interpolant of the wall data, `(x/l)ψ(t) + ((l−x)/l)φ(t)`.
#[derive(Clone, Debug)]
pub struct Lift {
    l: f64,
    phi: BoundarySignal,
    psi: BoundarySignal,
}

impl Lift {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let s = x / self.l;
        s * self.psi.value(t) + (1.0 - s) * self.phi.value(t)
    }

    pub fn rate(&self, x: f64, t: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let s = x / self.l;
        s * self.psi.rate(t) + (1.0 - s) * self.phi.rate(t)
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.psi.is_zero()
    }
}

/// Subtract the linear wall interpolant `w`, leaving homogeneous walls.
///
/// The new source is `f + w_tt`; the new initial data are `f0 − w(·,0)` and
/// `f1 − w_t(·,0)`. The lift is returned so it can be added back.
pub fn lift_boundary(data: &ProblemData, params: &MediumParams) -> Result<(ProblemData, Lift)> {
    params.validate()?;
    let lift = Lift {
        l: params.l,
        phi: data.phi.clone(),
        psi: data.psi.clone(),
    };
    if lift.is_zero() {
        return Ok((data.clone(), lift));
    }
    for t in [0.0, 1.0] {
        data.phi.accel(t)?;
        data.psi.accel(t)?;
    }
    let l = params.l;
    let (f0, f1, f) = (data.f0.clone(), data.f1.clone(), data.f.clone());
    let (l0, l1) = (lift.clone(), lift.clone());
    let (phi, psi) = (data.phi.clone(), data.psi.clone());
    let lifted = ProblemData {
        f0: Arc::new(move |x| f0(x) - l0.value(x, 0.0)),
        f1: Arc::new(move |x| f1(x) - l1.rate(x, 0.0)),
        f: Arc::new(move |x, t| {
            let s = x / l;
            f(x, t) + s * psi.accel(t).unwrap_or(f64::NAN) + (1.0 - s) * phi.accel(t).unwrap_or(f64::NAN)
        }),
        phi: BoundarySignal::zero(),
        psi: BoundarySignal::zero(),
        has_source: data.has_source || !constant_walls(data),
    };
    Ok((lifted, lift))
}

fn constant_walls(data: &ProblemData) -> bool {
    [0.0, 0.37, 1.9, 7.3]
        .iter()
        .all(|&t| data.phi.accel(t).is_ok_and(|a| a == 0.0) && data.psi.accel(t).is_ok_and(|a| a == 0.0))
}
