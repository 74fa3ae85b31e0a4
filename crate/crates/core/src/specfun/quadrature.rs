//! Adaptive Gauss-Kronrod (G10/K21) integration over finite intervals, and
//! semi-infinite integration driven by a caller-certified decay envelope.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Tolerance and truncation policy shared by every integral in the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Natural log of the envelope level below which a semi-infinite tail is
    /// dropped.
    pub tail_cut_log: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            tail_cut_log: (1e-16_f64).ln(),
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tail_cut_log(mut self, tail_cut_log: f64) -> Self {
        self.tail_cut_log = tail_cut_log;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::Config("abs_tol and rel_tol cannot both be zero".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        if !self.tail_cut_log.is_finite() {
            return Err(Error::Config("tail_cut_log must be finite".into()));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    /// Set when subdivision stopped because every remaining error estimate sat
    /// at the floating-point floor rather than at the requested tolerance.
    pub roundoff_limited: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiInfiniteResult {
    pub integral: IntegrationResult,
    /// Upper limit actually integrated to.
    pub cutoff: f64,
}

// QUADPACK qk21 abscissae and weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sample = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(format!("integrand is not finite at x = {x}")))
        }
    };

    let fc = sample(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut lo = [0.0; 10];
    let mut hi = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = sample(center - dx)?;
        let f2 = sample(center + dx)?;
        lo[j] = f1;
        hi[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((lo[j] - mean).abs() + (hi[j] - mean).abs());
    }

    let abs_half = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;

    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Ok(Panel {
        a,
        b,
        value,
        error: err,
        floor,
    })
}

/// Adaptive integration over a partition given by sorted `breaks`
/// (at least two points). The integrand may fail; its error is propagated.
pub(crate) fn try_integrate_pieces<F>(mut f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegrationResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if breaks.len() < 2 {
        return Err(domain("integration partition needs at least two points"));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] < w[0] {
            return Err(domain("integration limits must be non-decreasing"));
        }
        if w[1] > w[0] {
            heap.push(gk21(&mut f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    if heap.is_empty() {
        return Ok(IntegrationResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
            roundoff_limited: false,
        });
    }

    let mut subdivisions = 0;
    let mut roundoff_limited = false;
    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if error <= spec.target(value) {
            break;
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let width_exhausted = mid <= worst.a || mid >= worst.b;
        if worst.error <= worst.floor * (1.0 + 1e-9) || width_exhausted {
            heap.push(worst);
            roundoff_limited = true;
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            return Err(Error::Convergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        heap.push(gk21(&mut f, worst.a, mid)?);
        heap.push(gk21(&mut f, mid, worst.b)?);
        evaluations += 42;
        subdivisions += 1;
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(IntegrationResult {
        value,
        error,
        evaluations,
        subdivisions,
        roundoff_limited,
    })
}

/// Sorted partition of `[a, b]` containing every interior breakpoint.
pub(crate) fn partition(a: f64, b: f64, interior: impl IntoIterator<Item = f64>, pieces: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=pieces.max(1))
        .map(|i| a + (b - a) * i as f64 / pieces.max(1) as f64)
        .collect();
    pts.extend(interior.into_iter().filter(|&p| p > a && p < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|p, q| (*p - *q).abs() <= 1e-15 * (b - a).abs().max(f64::MIN_POSITIVE));
    *pts.first_mut().unwrap() = a;
    *pts.last_mut().unwrap() = b;
    pts
}

/// Integrate `f` over `[a, b]` adaptively.
///
/// Stops once the summed error estimate is below
/// `max(abs_tol, rel_tol·|value|)`; runs out of subdivisions with
/// [`Error::Convergence`], which carries the best estimate.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("finite integration needs finite limits"));
    }
    if a > b {
        return Err(domain(format!("lower limit {a} exceeds upper limit {b}")));
    }
    try_integrate_pieces(|x| Ok(f(x)), &[a, b], spec)
}

/// Locate an upper limit `V > a` beyond which `decay_bound` stays below
/// `tail_cut_log`.
///
/// The scan moves out geometrically until the envelope first drops below the
/// threshold, then re-checks a run of points further out (up to ~10⁶ times
/// the distance from `a`). Any violation restarts the scan from there.
pub(crate) fn find_cutoff<D>(a: f64, decay_bound: &D, cut: f64) -> Result<f64>
where
    D: Fn(f64) -> f64,
{
    const LIMIT: f64 = 1e15;
    let scale = 1.0 + a.abs();
    let below = |v: f64| {
        let b = decay_bound(v);
        b.is_finite() && b < cut || b == f64::NEG_INFINITY
    };
    let mut step = scale / 64.0;
    let mut v = a + step;
    'scan: loop {
        while !below(v) {
            step *= 1.1;
            v += step;
            if v - a > LIMIT * scale {
                return Err(Error::Truncation { last_checked: v });
            }
        }
        let span = v - a;
        let checks = (1..=64)
            .map(|k| v + span * k as f64 / 8.0)
            .chain((4..=20).map(|m| a + span * f64::powi(2.0, m)));
        for w in checks {
            if !below(w) {
                v = w;
                step = step.max(span / 64.0);
                continue 'scan;
            }
        }
        return Ok(v);
    }
}

pub(crate) fn try_integrate_semi_infinite<F, D>(
    f: F,
    a: f64,
    interior: &[f64],
    spec: &QuadratureSpec,
    decay_bound: D,
) -> Result<SemiInfiniteResult>
where
    F: FnMut(f64) -> Result<f64>,
    D: Fn(f64) -> f64,
{
    spec.validate()?;
    if !a.is_finite() {
        return Err(domain("semi-infinite integration needs a finite lower limit"));
    }
    let cutoff = find_cutoff(a, &decay_bound, spec.tail_cut_log)?;
    let breaks = partition(a, cutoff, interior.iter().copied(), 8);
    let integral = try_integrate_pieces(f, &breaks, spec)?;
    Ok(SemiInfiniteResult { integral, cutoff })
}

/// Integrate `f` over `[a, ∞)`.
///
/// `decay_bound(v)` must bound `ln|f(v)|` from above for `v >= a`. The
/// integral is truncated where the bound falls below `spec.tail_cut_log` for
/// good, so the dropped tail is at most the integral of `exp(decay_bound)`
/// beyond the cutoff.
pub fn integrate_semi_infinite<F, D>(f: F, a: f64, spec: &QuadratureSpec, decay_bound: D) -> Result<SemiInfiniteResult>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), a, &[], spec, decay_bound)
}
