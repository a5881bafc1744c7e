//! Time-domain propagator inside the barrier with hard walls at both edges.
//!
//! The image sum and the mode sum are both absolutely convergent only for
//! `Im t < 0`, so time is complex here (`t = -i tau` is imaginary time).
//! Lengths in `lambda0`, times in `hbar / V0`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::units::BarrierSpec;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const MAX_TERMS: i64 = 100_000;

fn check(b: BarrierSpec, x: f64, xp: f64, t: Complex64) -> Result<()> {
    if !(t.im < 0.0) {
        return domain(format!("propagator sums need Im t < 0, got {t}"));
    }
    for p in [x, xp] {
        if !(p >= b.left() && p <= b.right()) {
            return domain(format!("{p} is outside the barrier"));
        }
    }
    Ok(())
}

/// Free propagator for `hbar = 2m = 1`.
fn free(dx: f64, t: Complex64) -> Complex64 {
    (I * dx * dx / (4.0 * t)).exp() / (4.0 * PI * I * t).sqrt()
}

/// `K^II(x, x', t)` as a sum over mirror images of the source.
pub fn region_ii_propagator(b: BarrierSpec, x: f64, x_prime: f64, t: Complex64) -> Result<Complex64> {
    check(b, x, x_prime, t)?;
    let (a, d) = (b.left(), b.width());
    let pair = |n: i64| {
        let shift = 2.0 * n as f64 * d;
        free(x - x_prime - shift, t) - free(x + x_prime - 2.0 * a - shift, t)
    };
    let mut sum = pair(0);
    for n in 1..MAX_TERMS {
        let add = pair(n) + pair(-n);
        sum += add;
        if add.norm() <= 1e-17 * sum.norm().max(1e-300) && n as f64 * d > 1.0 {
            break;
        }
    }
    Ok(sum)
}

/// `K^II(x, x', t)` as a sum over standing waves of the walled interval.
pub fn region_ii_propagator_modes(b: BarrierSpec, x: f64, x_prime: f64, t: Complex64) -> Result<Complex64> {
    check(b, x, x_prime, t)?;
    let (a, d) = (b.left(), b.width());
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..MAX_TERMS {
        let q = n as f64 * PI / d;
        let decay = (-I * q * q * t).exp();
        sum += 2.0 / d * (q * (x - a)).sin() * (q * (x_prime - a)).sin() * decay;
        if decay.norm() * 2.0 / d < 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    Ok(sum)
}
