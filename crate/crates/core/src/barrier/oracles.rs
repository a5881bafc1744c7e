//! Independent evaluations of the barrier amplitude.

use num_complex::Complex64;

use super::{upper_sqrt, I};
use crate::error::{domain, Error, Result};
use crate::units::{BarrierSpec, EnergyPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSeries {
    pub value: Complex64,
    /// Ratio of consecutive terms, read off the last two terms.
    pub ratio: Complex64,
    /// Geometric bound on the neglected terms.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Sum over internal reflections: `w = e^{-ikd} t_in t_out e^{i kappa d} sum_n (r^2 e^{2 i kappa d})^n`,
/// truncated after `n_bounces` round trips.
pub fn reflection_series_w(e: EnergyPoint, b: BarrierSpec, n_bounces: usize) -> Result<ReflectionSeries> {
    let eps = e.epsilon();
    let k = eps.sqrt();
    let kappa = upper_sqrt(Complex64::new(eps - 1.0, 0.0));
    let d = b.width();
    let t_in = 2.0 * k / (k + kappa);
    let t_out = 2.0 * kappa / (k + kappa);
    let r = (kappa - k) / (kappa + k);
    let mut term = Complex64::new(0.0, -k * d).exp() * t_in * t_out * (I * kappa * d).exp();
    let round_trip = r * r * (2.0 * I * kappa * d).exp();
    let mut sum = term;
    let mut prev = term;
    for _ in 0..n_bounces {
        prev = term;
        term *= round_trip;
        sum += term;
    }
    // rescale before dividing so tiny late terms do not underflow
    let scale = prev.norm();
    let ratio = if scale > 0.0 { (term / scale) / (prev / scale) } else { round_trip };
    let q = ratio.norm();
    if !(q < 1.0) {
        return Err(Error::NonConvergence { ratio: q });
    }
    Ok(ReflectionSeries {
        value: sum,
        ratio,
        tail_bound: term.norm() * q / (1.0 - q),
        terms: n_bounces + 1,
    })
}

fn layer(q: Complex64, x: f64) -> [[Complex64; 2]; 2] {
    let p = (I * q * x).exp();
    let m = 1.0 / p;
    [[p, m], [I * q * p, -I * q * m]]
}

fn inv2(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

fn apply(m: [[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Transmission and reflection amplitudes by plane-wave matching at both
/// interfaces.
pub(crate) fn transfer_matrix_tr(e: EnergyPoint, b: BarrierSpec) -> Result<(Complex64, Complex64)> {
    let eps = e.epsilon();
    let k = Complex64::new(eps.sqrt(), 0.0);
    let kappa = Complex64::new(eps - 1.0, 0.0).sqrt();
    if kappa.norm() * b.width() < 1e-8 {
        return domain("transfer matrix is singular at the barrier top");
    }
    let (x_a, x_b) = (b.left(), b.right());
    // right region holds a pure outgoing wave with unit coefficient
    let mut c = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    c = apply(inv2(layer(kappa, x_b)), apply(layer(k, x_b), c));
    c = apply(inv2(layer(k, x_a)), apply(layer(kappa, x_a), c));
    Ok((1.0 / c[0], c[1] / c[0]))
}

/// Transfer-matrix transmission amplitude.
pub fn transfer_matrix_w(e: EnergyPoint, b: BarrierSpec) -> Result<Complex64> {
    transfer_matrix_tr(e, b).map(|(t, _)| t)
}
