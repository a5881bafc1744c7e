//! Dimensionless parametrization.
//!
//! Energies are measured in units of the barrier height `V0`, lengths in
//! `lambda0 = hbar / sqrt(2 m V0)` and times in `tau* = d / v0` with
//! `v0 = sqrt(2 V0 / m)`. With `hbar = 2m = lambda0 = 1` this makes
//! `V0 = 1` and `tau* = d_hat / 2`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Barrier of width `d = width_ratio * lambda0`, occupying `[0, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierSpec {
    width_ratio: f64,
}

impl BarrierSpec {
    pub fn new(width_ratio: f64) -> Result<Self> {
        if !(width_ratio.is_finite() && width_ratio > 0.0) {
            return domain(format!("barrier width must be positive and finite, got {width_ratio}"));
        }
        Ok(Self { width_ratio })
    }

    /// `d / lambda0`.
    pub fn width(&self) -> f64 {
        self.width_ratio
    }

    /// Left edge `a`.
    pub fn left(&self) -> f64 {
        0.0
    }

    /// Right edge `b`.
    pub fn right(&self) -> f64 {
        self.width_ratio
    }

    /// `tau*` expressed in natural time units (`hbar / V0`).
    pub fn tau_star(&self) -> f64 {
        0.5 * self.width_ratio
    }
}

/// Energy `E / V0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct EnergyPoint {
    epsilon: f64,
}

impl EnergyPoint {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return domain(format!("energy must be positive and finite, got {epsilon}"));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Damping rate and bath cutoff, both in units of `1 / tau*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DissipationSpec {
    gamma_star: f64,
    omega_star: f64,
}

impl DissipationSpec {
    pub fn new(gamma_star: f64, omega_star: f64) -> Result<Self> {
        if !(gamma_star.is_finite() && gamma_star >= 0.0) {
            return domain(format!("gamma * tau* must be >= 0, got {gamma_star}"));
        }
        if !(omega_star.is_finite() && omega_star > 0.0) {
            return domain(format!("Omega * tau* must be > 0, got {omega_star}"));
        }
        Ok(Self { gamma_star, omega_star })
    }

    pub fn gamma_star(&self) -> f64 {
        self.gamma_star
    }

    pub fn omega_star(&self) -> f64 {
        self.omega_star
    }

    /// `sigma tau* = sqrt(g^2 + (4 g W / pi)^2)` with `g = gamma tau*`, `W = Omega tau*`.
    pub fn sigma_star(&self) -> f64 {
        let g = self.gamma_star;
        let c = 4.0 * g * self.omega_star / PI;
        g.hypot(c)
    }

    pub fn is_dissipationless(&self) -> bool {
        self.gamma_star == 0.0
    }
}

/// `k_hat = sqrt(eps)` and `kappa_hat = sqrt(eps - 1)` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    pub k_hat: f64,
    pub kappa_hat: Complex64,
}

pub fn wave_numbers(e: EnergyPoint) -> WaveNumbers {
    WaveNumbers {
        k_hat: e.epsilon.sqrt(),
        kappa_hat: Complex64::new(e.epsilon - 1.0, 0.0).sqrt(),
    }
}

/// Classical traversal time `d / v` in units of `tau*`.
pub fn classical_time(e: EnergyPoint) -> Result<f64> {
    if e.epsilon <= 1.0 {
        return domain(format!("classical time needs eps > 1, got {}", e.epsilon));
    }
    Ok(1.0 / (e.epsilon - 1.0).sqrt())
}

/// Over-barrier resonances `eps_n = 1 + (n pi / d_hat)^2`, `n = 1..=n_max`.
pub fn resonance_energies(b: BarrierSpec, n_max: usize) -> Vec<EnergyPoint> {
    (1..=n_max)
        .map(|n| {
            let q = n as f64 * PI / b.width_ratio;
            EnergyPoint { epsilon: 1.0 + q * q }
        })
        .collect()
}

/// `hbar omega / V0` for a frequency given in units of `1 / tau*`.
pub fn omega_to_potential_shift(omega_hat: f64, b: BarrierSpec) -> f64 {
    2.0 * omega_hat / b.width_ratio
}

/// Converts a time in natural units to units of `tau*`.
pub fn natural_to_star(t: f64, b: BarrierSpec) -> f64 {
    t / b.tau_star()
}
