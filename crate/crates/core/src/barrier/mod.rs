//! Dissipationless transmission through the rectangular barrier on `[0, d]`.

mod green;
mod oracles;
mod propagator;

pub use green::{green_assembled, green_restricted, GreenFunctionSample, GreenRequest, Region};
pub use oracles::{reflection_series_w, transfer_matrix_w, ReflectionSeries};
pub use propagator::{region_ii_propagator, region_ii_propagator_modes};

use num_complex::Complex64;

use crate::units::{BarrierSpec, EnergyPoint};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this `|kappa d|` the amplitude uses its threshold expansion.
pub const THRESHOLD_KD: f64 = 1e-4;

/// Transmission amplitude, normalized so that `psi = w e^{ikx}` to the right
/// of the barrier for a unit wave incident from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAmplitude(pub Complex64);

impl ComplexAmplitude {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn probability(&self) -> f64 {
        self.0.norm_sqr()
    }
}

/// `kappa` with `Im kappa >= 0` for a complex `kappa^2`.
pub(crate) fn upper_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 {
        -r
    } else {
        r
    }
}

/// Amplitude for outside wave number `k` and interior `kappa^2` (any complex
/// value), width `d`. The expression is even in `kappa`, hence analytic in
/// `kappa^2`; it is evaluated in the scaled form
/// `sin(q) e^{iq}`, `cos(q) e^{iq}` with `Im q >= 0` so nothing overflows.
pub(crate) fn amplitude_raw(k: f64, kappa_sq: Complex64, d: f64) -> Complex64 {
    let a = k * k + kappa_sq;
    let phase = Complex64::new(0.0, -k * d).exp();
    let x2 = kappa_sq * d * d;
    if x2.norm() < THRESHOLD_KD * THRESHOLD_KD {
        // sin(kd)/kappa and cos(kd) as series in (kappa d)^2
        let s = d * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
        let c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
        return 2.0 * I * k * phase / (a * s + 2.0 * I * k * c);
    }
    let kappa = upper_sqrt(kappa_sq);
    let e = (I * kappa * d).exp();
    let e2 = e * e;
    let s = (e2 - 1.0) / (2.0 * I);
    let c = (e2 + 1.0) * 0.5;
    2.0 * I * k * kappa * phase * e / (a * s + 2.0 * I * k * kappa * c)
}

/// `w(eps, d)`.
pub fn amplitude_w(e: EnergyPoint, b: BarrierSpec) -> ComplexAmplitude {
    let eps = e.epsilon();
    ComplexAmplitude(amplitude_raw(eps.sqrt(), Complex64::new(eps - 1.0, 0.0), b.width()))
}

/// `w` for the barrier lowered by `hbar omega`, `omega_hat` in units of
/// `1 / tau*`. Complex `omega_hat` continues analytically off the real axis.
pub fn amplitude_shifted(e: EnergyPoint, b: BarrierSpec, omega_hat: Complex64) -> Complex64 {
    let eps = e.epsilon();
    let d = b.width();
    amplitude_raw(eps.sqrt(), Complex64::new(eps - 1.0, 0.0) + omega_hat * (2.0 / d), d)
}

/// `|w|^2`.
pub fn transmission_prob(e: EnergyPoint, b: BarrierSpec) -> f64 {
    amplitude_w(e, b).probability()
}
