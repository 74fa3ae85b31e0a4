use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Jacobi theta function `θ₃(u, q) = 1 + 2 Σ_{n≥1} q^{n²} cos(2πnu)`.
///
/// The nome `q` must lie in `(0, 1)`. For `q` close to one the direct sum
/// needs many terms, so the dual (Poisson-summed) form
/// `θ₃ = √(π/κ) Σ_m e^{-π²(u+m)²/κ}`, with `κ = -ln q`, is used instead.
pub fn theta3(u: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(format!("theta3 nome must lie in (0, 1), got {q}")));
    }
    if !u.is_finite() {
        return Err(domain("theta3 argument must be finite"));
    }
    let kappa = -q.ln();
    if kappa >= PI {
        Ok(direct_sum(u, kappa))
    } else {
        Ok(dual_sum(u, kappa))
    }
}

fn direct_sum(u: f64, kappa: f64) -> f64 {
    let mut sum = 1.0;
    let mut n = 1.0_f64;
    loop {
        let weight = (-kappa * n * n).exp();
        if weight < 1e-18 {
            break;
        }
        sum += 2.0 * weight * (2.0 * PI * n * u).cos();
        n += 1.0;
    }
    sum
}

fn dual_sum(u: f64, kappa: f64) -> f64 {
    let frac = u - u.round();
    let scale = PI * PI / kappa;
    let mut sum = (-scale * frac * frac).exp();
    let mut m = 1.0_f64;
    loop {
        let a = (-scale * (frac + m) * (frac + m)).exp();
        let b = (-scale * (frac - m) * (frac - m)).exp();
        sum += a + b;
        if a + b < 1e-18 * sum {
            break;
        }
        m += 1.0;
    }
    (PI / kappa).sqrt() * sum
}
