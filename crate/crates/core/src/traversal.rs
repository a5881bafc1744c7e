//! Traversal-time amplitude distribution, complex mean traversal time and the
//! cumulative amplitude. Times in units of `tau*`, frequencies in `1 / tau*`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::barrier::amplitude_shifted;
use crate::dissipative::{SpectralSolver, Window};
use crate::error::{domain, Error, Result};
use crate::kernel::DampingKernel;
use crate::numerics::{correlate, trapezoid};
use crate::units::{classical_time, BarrierSpec, EnergyPoint};

/// Complex mean traversal time with the classical reference, both in `tau*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanTraversal {
    pub value: Complex64,
    pub classical: f64,
}

impl MeanTraversal {
    /// `|<tau>| - tau_cl`.
    pub fn deviation(&self) -> f64 {
        self.value.norm() - self.classical
    }
}

fn above_barrier(e: EnergyPoint) -> Result<()> {
    if e.epsilon() <= 1.0 {
        return domain(format!("traversal times need eps > 1, got {}", e.epsilon()));
    }
    Ok(())
}

/// Closed form of `<tau> = (i/w) dw/dV0` for real `kappa`.
pub fn mean_tau_closed(e: EnergyPoint, b: BarrierSpec) -> Result<MeanTraversal> {
    above_barrier(e)?;
    let eps = e.epsilon();
    let d = b.width();
    let k = eps.sqrt();
    let q = (eps - 1.0).sqrt();
    let a = k * k + q * q;
    let bb = k * k - q * q;
    let (s, c) = (q * d).sin_cos();
    let den = bb * bb * s * s + 4.0 * k * k * q * q;
    // m = 1/2, hbar = 1
    let re = (k / q) * (a * q * d - bb * s * c) / den;
    let im = 0.5 * (bb * q * d * c - a * s) * (bb / (q * q)) * s / den;
    let to_star = 1.0 / b.tau_star();
    Ok(MeanTraversal { value: Complex64::new(re, im) * to_star, classical: classical_time(e)? })
}

/// Step in `V0` for the finite-difference route.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// `<tau>` from a Richardson-extrapolated central difference of `ln w` in `V0`.
pub fn mean_tau_derivative(e: EnergyPoint, b: BarrierSpec) -> Result<MeanTraversal> {
    above_barrier(e)?;
    let kappa_sq = e.epsilon() - 1.0;
    let h = DERIVATIVE_STEP;
    if kappa_sq < 4.0 * h {
        return Err(Error::StepUnderflow { kappa_sq });
    }
    // raising V0 by dv is a shift omega_hat = -dv d / 2
    let half_d = 0.5 * b.width();
    let dlog = |h: f64| {
        let up = amplitude_shifted(e, b, Complex64::new(-h * half_d, 0.0));
        let down = amplitude_shifted(e, b, Complex64::new(h * half_d, 0.0));
        (up / down).ln() / (2.0 * h)
    };
    let d1 = dlog(h);
    let d2 = dlog(0.5 * h);
    let deriv = (4.0 * d2 - d1) / 3.0;
    let value = Complex64::new(0.0, 1.0) * deriv / b.tau_star();
    Ok(MeanTraversal { value, classical: classical_time(e)? })
}

/// Grid for the windowed spectral transform behind `F(tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Gaussian window width in `omega`.
    pub window_width: f64,
    pub d_omega: f64,
    /// FFT length, a power of two.
    pub n_points: usize,
    /// Largest `tau` kept.
    pub tau_max: f64,
    /// Allowed `|int F - 1|`.
    pub residual_tolerance: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { window_width: 200.0, d_omega: 0.05, n_points: 1 << 16, tau_max: 60.0, residual_tolerance: 1e-3 }
    }
}

impl SpectralConfig {
    fn validate(&self) -> Result<()> {
        if !(self.window_width > 0.0 && self.d_omega > 0.0 && self.tau_max > 0.0 && self.residual_tolerance > 0.0) {
            return domain("spectral config needs positive window, step, tau_max and tolerance");
        }
        if !self.n_points.is_power_of_two() || self.n_points < 64 {
            return domain(format!("FFT length must be a power of two >= 64, got {}", self.n_points));
        }
        let period = 2.0 * PI / self.d_omega;
        if self.tau_max >= 0.5 * period {
            return domain(format!("tau_max {} exceeds half the period {}", self.tau_max, 0.5 * period));
        }
        if 0.5 * self.n_points as f64 * self.d_omega < 6.0 * self.window_width {
            return domain("frequency grid does not cover six window widths");
        }
        Ok(())
    }

    pub fn d_tau(&self) -> f64 {
        2.0 * PI / (self.n_points as f64 * self.d_omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Bare,
    Dissipative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraversalDistribution {
    pub tau: Vec<f64>,
    pub values: Vec<Complex64>,
    pub kind: DistributionKind,
    /// `|int_0^tau_max F dtau - 1|` of the bare distribution.
    pub normalization_residual: f64,
    /// `int_{tau < 0} |F|` of the windowed transform.
    pub leakage: f64,
    pub window: Window,
    /// `int sqrt(f) F dtau`, the factor `w_D / w`; one for the bare kind.
    pub suppression: Complex64,
}

impl TraversalDistribution {
    pub fn d_tau(&self) -> f64 {
        self.tau[1] - self.tau[0]
    }

    pub fn moment(&self, order: i32) -> Complex64 {
        let v: Vec<Complex64> = self.tau.iter().zip(&self.values).map(|(t, f)| f * t.powi(order)).collect();
        trapezoid(&v, self.d_tau())
    }

    pub fn mean(&self) -> Complex64 {
        self.moment(1)
    }
}

/// `F(tau)` from the windowed transform of `w(E, V0 - hbar omega) / w`.
pub fn distribution_f(e: EnergyPoint, b: BarrierSpec, cfg: &SpectralConfig) -> Result<TraversalDistribution> {
    above_barrier(e)?;
    cfg.validate()?;
    let n = cfg.n_points;
    let w0 = amplitude_shifted(e, b, Complex64::new(0.0, 0.0));
    let sw = cfg.window_width;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| {
            let jj = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
            let om = jj * cfg.d_omega;
            amplitude_shifted(e, b, Complex64::new(om, 0.0)) * (-0.5 * (om / sw).powi(2)).exp() / w0
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = cfg.d_omega / (2.0 * PI);
    let dt = cfg.d_tau();
    let m = (cfg.tau_max / dt).floor() as usize;
    let tau: Vec<f64> = (0..=m).map(|i| i as f64 * dt).collect();
    let values: Vec<Complex64> = buf[..=m].iter().map(|v| v * scale).collect();
    let leakage: f64 = buf[n / 2..].iter().map(|v| v.norm() * scale).sum::<f64>() * dt;
    let residual = (trapezoid(&values, dt) - 1.0).norm();
    if !(residual <= cfg.residual_tolerance) {
        return Err(Error::WindowTooNarrow { residual });
    }
    Ok(TraversalDistribution {
        tau,
        values,
        kind: DistributionKind::Bare,
        normalization_residual: residual,
        leakage,
        window: Window::Gaussian { width: sw },
        suppression: Complex64::new(1.0, 0.0),
    })
}

/// `F_D = sqrt(f) F / int sqrt(f) F`.
pub fn distribution_f_d(e: EnergyPoint, b: BarrierSpec, k: &DampingKernel, cfg: &SpectralConfig) -> Result<TraversalDistribution> {
    let bare = distribution_f(e, b, cfg)?;
    damp(bare, k)
}

fn damp(bare: TraversalDistribution, k: &DampingKernel) -> Result<TraversalDistribution> {
    let weighted: Vec<Complex64> = bare.tau.iter().zip(&bare.values).map(|(&t, f)| f * k.sqrt_f(t)).collect();
    let z = trapezoid(&weighted, bare.d_tau());
    if z.norm() < 1e-12 {
        return Err(Error::DegenerateSuppression);
    }
    Ok(TraversalDistribution {
        values: weighted.iter().map(|v| v / z).collect(),
        kind: DistributionKind::Dissipative,
        suppression: z,
        ..bare
    })
}

/// `w_D` by the factorized route `w * int sqrt(f) F dtau`.
pub fn amplitude_w_d_factorized(e: EnergyPoint, b: BarrierSpec, k: &DampingKernel, cfg: &SpectralConfig) -> Result<Complex64> {
    let fd = distribution_f_d(e, b, k, cfg)?;
    Ok(amplitude_shifted(e, b, Complex64::new(0.0, 0.0)) * fd.suppression)
}

/// Grid for the cumulative amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulativeConfig {
    pub window_width: f64,
    pub d_omega: f64,
    /// Frequency grid half-range in units of `window_width`.
    pub half_range: f64,
    /// Half-range of the remainder convolution.
    pub remainder_range: f64,
}

impl Default for CumulativeConfig {
    fn default() -> Self {
        Self { window_width: 100.0, d_omega: 0.025, half_range: 8.0, remainder_range: 200.0 }
    }
}

/// `C_D(tau)` on demand, built from `w_D(E, V0 - hbar omega)` sampled on a
/// uniform frequency grid.
#[derive(Debug, Clone)]
pub struct CumulativeAmplitude {
    omega: Vec<f64>,
    /// `W(omega) w_D(omega) d_omega / w_D(0)`
    weighted: Vec<Complex64>,
    w_d: Complex64,
}

impl CumulativeAmplitude {
    pub fn new(e: EnergyPoint, b: BarrierSpec, k: &DampingKernel, cfg: &CumulativeConfig) -> Result<Self> {
        if !(cfg.window_width > 0.0 && cfg.d_omega > 0.0 && cfg.half_range > 0.0 && cfg.remainder_range > 0.0) {
            return domain("cumulative config needs positive entries");
        }
        let dw = cfg.d_omega;
        let m = (cfg.half_range * cfg.window_width / dw).ceil() as i64;
        let w_at = |om: f64| amplitude_shifted(e, b, Complex64::new(om, 0.0));
        let omega: Vec<f64> = (-m..=m).map(|i| i as f64 * dw).collect();
        let w_d: Vec<Complex64> = if k.is_dissipationless() {
            omega.iter().map(|&om| w_at(om)).collect()
        } else {
            let solver = SpectralSolver::new(k)?;
            let l = (cfg.remainder_range / dw).ceil() as i64;
            let r: Vec<Complex64> =
                (-l..=l).map(|i| solver.remainder(i as f64 * dw)).collect::<Result<_>>()?;
            let p: Vec<Complex64> = (-(m + l)..=(m + l)).map(|i| w_at(i as f64 * dw)).collect();
            let conv = correlate(&p, &r);
            let (rates, weights) = solver.fit();
            omega
                .iter()
                .zip(conv)
                .map(|(&om, c)| {
                    let exact: Complex64 = rates
                        .iter()
                        .zip(weights)
                        .map(|(&a, &wt)| wt * amplitude_shifted(e, b, Complex64::new(om, a)))
                        .sum();
                    exact + c * dw / (2.0 * PI)
                })
                .collect()
        };
        let w0 = w_d[m as usize];
        let sw = cfg.window_width;
        let weighted = omega
            .iter()
            .zip(&w_d)
            .map(|(&om, v)| v * ((-0.5 * (om / sw).powi(2)).exp() * dw) / w0)
            .collect();
        Ok(Self { omega, weighted, w_d: w0 })
    }

    /// `w_D` at the unshifted barrier, from the same grid.
    pub fn w_d(&self) -> Complex64 {
        self.w_d
    }

    pub fn at(&self, tau: f64) -> Result<Complex64> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return domain(format!("cumulative amplitude needs tau >= 0, got {tau}"));
        }
        Ok(self
            .omega
            .iter()
            .zip(&self.weighted)
            .map(|(&om, v)| {
                let kern = if om == 0.0 { tau / PI } else { (om * tau).sin() / (PI * om) };
                v * kern
            })
            .sum())
    }
}

/// `C_D(tau)` at a single time.
pub fn cumulative_c_d(e: EnergyPoint, b: BarrierSpec, k: &DampingKernel, tau_hat: f64) -> Result<Complex64> {
    CumulativeAmplitude::new(e, b, k, &CumulativeConfig::default())?.at(tau_hat)
}
