//! Scalar time signals fed to the Bessel-kernel transform and to the
//! Gaussian slow-time convolution.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::modal::{green_wave_partial, wave_breakpoints, wave_images_odd, GreenPoint, MediumParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// Smooth between the points reported by [`TimeSignal::breakpoints`].
    PiecewiseSmooth,
}

/// How the signal is continued to negative times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// `s(−t) = −s(t)`.
    Odd,
    /// `s(−t) = s(t)`.
    Even,
    /// `s(t) = 0` for `t < 0`.
    Zero,
    /// The evaluator is already valid for negative times.
    Native,
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Breaks = Arc<dyn Fn(f64, f64) -> Vec<f64> + Send + Sync>;

/// A function of time together with the interval where it may be evaluated,
/// its continuation to `t < 0`, optional discontinuity locations and an
/// optional bound on its magnitude.
#[derive(Clone)]
pub struct TimeSignal {
    eval: Eval,
    validity: (f64, f64),
    smoothness: Smoothness,
    extension: Extension,
    breaks: Option<Breaks>,
    bound: Option<f64>,
}

impl fmt::Debug for TimeSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeSignal")
            .field("validity", &self.validity)
            .field("smoothness", &self.smoothness)
            .field("extension", &self.extension)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl TimeSignal {
    /// Smooth signal valid on `[0, ∞)`, extended oddly.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            validity: (0.0, f64::INFINITY),
            smoothness: Smoothness::Smooth,
            extension: Extension::Odd,
            breaks: None,
            bound: None,
        }
    }

    pub fn with_validity(mut self, start: f64, end: f64) -> Self {
        self.validity = (start, end);
        self
    }

    pub fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    /// Declare jump locations; `breaks(a, b)` lists those inside `(a, b)`.
    /// Only non-negative ranges are requested unless the extension is
    /// [`Extension::Native`].
    pub fn with_breakpoints(mut self, breaks: impl Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.breaks = Some(Arc::new(breaks));
        self.smoothness = Smoothness::PiecewiseSmooth;
        self
    }

    pub fn validity(&self) -> (f64, f64) {
        self.validity
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    /// Upper bound on `|s(t)|` over every time the signal can be evaluated.
    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    fn raw(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.validity;
        if !(t >= lo && t <= hi) {
            return Err(domain(format!("signal evaluated at t = {t}, outside [{lo}, {hi}]")));
        }
        let v = (self.eval)(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(format!("signal is not finite at t = {t}")))
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t >= 0.0 || self.extension == Extension::Native {
            return self.raw(t);
        }
        match self.extension {
            Extension::Odd => Ok(-self.raw(-t)?),
            Extension::Even => self.raw(-t),
            Extension::Zero => Ok(0.0),
            Extension::Native => unreachable!(),
        }
    }

    /// Discontinuities inside `(a, b)`, including mirrored ones and the
    /// origin when the continuation to negative times may jump there.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if !(b > a) {
            return out;
        }
        if let Some(breaks) = &self.breaks {
            if self.extension == Extension::Native {
                out.extend(breaks(a, b));
            } else {
                if b > 0.0 {
                    out.extend(breaks(a.max(0.0), b));
                }
                if a < 0.0 {
                    out.extend(breaks((-b).max(0.0), -a).into_iter().map(|t| -t));
                }
            }
        }
        if a < 0.0 && b > 0.0 && self.extension != Extension::Native {
            out.push(0.0);
        }
        out.retain(|&t| t > a && t < b);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `sin(ω t)` on the whole line.
    pub fn sine(omega: f64) -> Self {
        Self::new(move |t| (omega * t).sin())
            .with_validity(f64::NEG_INFINITY, f64::INFINITY)
            .with_extension(Extension::Native)
            .with_bound(1.0)
    }

    /// Time factor `sin(πcnt/l)` of mode `n` of the pure-wave Green function.
    pub fn wave_mode(params: &MediumParams, n: usize) -> Self {
        Self::sine(PI * params.c * n as f64 / params.l)
    }

    pub fn constant(value: f64) -> Self {
        Self::new(move |_| value)
            .with_validity(f64::NEG_INFINITY, f64::INFINITY)
            .with_extension(Extension::Native)
            .with_bound(value.abs())
    }

    /// Pure-wave Green function at `(x, ξ)` as a function of time, by images,
    /// odd in `t`.
    pub fn wave_green_images(params: &MediumParams, x: f64, xi: f64) -> Result<Self> {
        GreenPoint::new(x, xi, 0.0).validate(params)?;
        let p = *params;
        let q = *params;
        Ok(Self::new(move |t| wave_images_odd(&p, x, xi, t))
            .with_validity(f64::NEG_INFINITY, f64::INFINITY)
            .with_extension(Extension::Native)
            .with_bound(0.5 / params.c)
            .with_breakpoints(move |a, b| {
                let mut v = wave_breakpoints(&q, x, xi, 0.0, a.abs().max(b.abs()));
                v.extend(v.clone().into_iter().map(|t| -t));
                v.push(0.0);
                v.retain(|&t| t > a && t < b);
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            }))
    }

    /// First `n_modes` terms of the pure-wave sine series at `(x, ξ)`.
    pub fn wave_green_series(params: &MediumParams, x: f64, xi: f64, n_modes: usize) -> Result<Self> {
        GreenPoint::new(x, xi, 0.0).validate(params)?;
        let p = *params;
        let harmonic: f64 = (1..=n_modes).map(|n| 1.0 / n as f64).sum();
        Ok(
            Self::new(move |t| green_wave_partial(&p, &GreenPoint::new(x, xi, t), n_modes))
                .with_validity(f64::NEG_INFINITY, f64::INFINITY)
                .with_extension(Extension::Native)
                .with_bound(2.0 / (params.c * PI) * harmonic),
        )
    }
}
