//! Modified Bessel function of the first kind, order zero.
//!
//! Two regimes share a single seam at [`SERIES_ASYMPTOTIC_SEAM`]:
//!
//! * `z <= seam`: the ascending series `Σ (z²/4)^k / (k!)²`. All terms are
//!   positive, so the sum carries no cancellation.
//! * `z > seam`: the large-argument expansion
//!   `I₀(z) = e^z / √(2πz) · Σ_k ((2k-1)!!)² / (k! (8z)^k)`, summed until the
//!   terms stop shrinking. It is applied to the scaled value `e^{-z} I₀(z)`
//!   directly, so nothing is ever exponentiated on that branch.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Argument at which evaluation switches from the power series to the
/// asymptotic expansion. At 20 the divergent expansion still resolves
/// below 1e-16 before its terms turn around.
pub const SERIES_ASYMPTOTIC_SEAM: f64 = 20.0;

fn check_argument(z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(domain(format!("Bessel argument must be finite, got {z}")));
    }
    if z < 0.0 {
        return Err(domain(format!("Bessel argument must be >= 0, got {z}")));
    }
    Ok(())
}

fn power_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// `√(2πz) e^{-z} I₀(z)` from the asymptotic expansion.
fn asymptotic_factor(z: f64) -> f64 {
    let inv8z = 1.0 / (8.0 * z);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0_f64;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = term * odd * odd * inv8z / k;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Modified Bessel function `I₀(z)` for `z >= 0`.
///
/// Overflows to `+inf` just above `z ≈ 713`; use [`bessel_i0_scaled`] when the
/// exponential factor will be cancelled anyway.
pub fn bessel_i0(z: f64) -> Result<f64> {
    check_argument(z)?;
    if z <= SERIES_ASYMPTOTIC_SEAM {
        Ok(power_series(z))
    } else {
        Ok(z.exp() * asymptotic_factor(z) / (2.0 * PI * z).sqrt())
    }
}

/// Exponentially scaled `e^{-z} I₀(z)`, finite for every representable `z >= 0`.
pub fn bessel_i0_scaled(z: f64) -> Result<f64> {
    check_argument(z)?;
    Ok(i0_scaled_unchecked(z))
}

/// Hot-loop variant for callers that already guarantee `z >= 0`.
#[inline]
pub(crate) fn i0_scaled_unchecked(z: f64) -> f64 {
    if z <= SERIES_ASYMPTOTIC_SEAM {
        (-z).exp() * power_series(z)
    } else {
        asymptotic_factor(z) / (2.0 * PI * z).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: I₀(z) = (1/π) ∫₀^π e^{z cos θ} dθ. The integrand is
    // smooth and periodic, so the trapezoid rule converges geometrically.
    fn trapezoid_scaled(z: f64, panels: usize) -> f64 {
        let h = PI / panels as f64;
        let mut sum = 0.5 * (1.0 + (-2.0 * z).exp());
        for j in 1..panels {
            sum += (z * ((j as f64 * h).cos() - 1.0)).exp();
        }
        sum * h / PI
    }

    #[test]
    fn frozen_values() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        assert!((bessel_i0(1.0).unwrap() / 1.2660658777520084 - 1.0).abs() < 1e-14);
        assert!((bessel_i0(10.0).unwrap() / 2815.7166284662544 - 1.0).abs() < 1e-14);
        assert_eq!(bessel_i0_scaled(0.0).unwrap(), 1.0);
        assert!((bessel_i0_scaled(10.0).unwrap() / 0.1278333371634286 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn large_argument_does_not_overflow() {
        let v = bessel_i0_scaled(700.0).unwrap();
        assert!((v / 0.015081295651531358 - 1.0).abs() < 1e-13);
        let far = bessel_i0_scaled(1e300).unwrap();
        assert!(far.is_finite() && far > 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_i0(-1.0).is_err());
        assert!(bessel_i0_scaled(-1e-300).is_err());
        assert!(bessel_i0(f64::NAN).is_err());
        assert!(bessel_i0_scaled(f64::INFINITY).is_err());
    }

    #[test]
    fn matches_trapezoid_oracle() {
        for &z in &[0.1_f64, 0.7, 3.0, 12.5, 19.99, 20.0, 20.01, 27.0, 30.0, 45.0, 120.0] {
            let panels = 64 + (40.0 * z.sqrt()) as usize;
            let oracle = trapezoid_scaled(z, panels);
            let got = bessel_i0_scaled(z).unwrap();
            assert!((got / oracle - 1.0).abs() < 1e-13, "z = {z}: {got} vs {oracle}");
            if z <= 30.0 {
                let unscaled = bessel_i0(z).unwrap();
                assert!((unscaled / (oracle * z.exp()) - 1.0).abs() < 1e-13, "z = {z}");
            }
        }
    }

    #[test]
    fn seam_is_continuous() {
        let below = i0_scaled_unchecked(SERIES_ASYMPTOTIC_SEAM);
        let above = asymptotic_factor(SERIES_ASYMPTOTIC_SEAM) / (2.0 * PI * SERIES_ASYMPTOTIC_SEAM).sqrt();
        assert!((below / above - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_is_below_one_and_decreasing() {
        let mut prev = 1.0;
        for i in 1..=1000 {
            let z = 50.0 * i as f64 / 1000.0;
            let s = bessel_i0_scaled(z).unwrap();
            assert!(s < 1.0 && s > 0.0);
            assert!(s < prev, "not decreasing at z = {z}");
            prev = s;
            let direct = bessel_i0(z).unwrap();
            assert!((s * z.exp() / direct - 1.0).abs() < 1e-12, "z = {z}");
        }
    }
}
