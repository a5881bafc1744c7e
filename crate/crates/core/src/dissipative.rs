//! Transmission amplitude with damping,
//! `w_D = (1/2pi) int w(E, V0 - hbar omega) g(omega) d omega`
//! where `g` is the spectrum of `sqrt(f)`.
//!
//! The slowly decaying part of `g` is removed by fitting
//! `sum_j a_j e^{-alpha_j t}` to the Taylor expansion of `sqrt(f)` at `t = 0`.
//! Each exponential integrates against `w` in closed form (it evaluates `w`
//! at `omega = i alpha_j`), and what is left decays like `|omega|^-5`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::barrier::{amplitude_shifted, amplitude_w, ComplexAmplitude};
use crate::error::{domain, Error, Result};
use crate::kernel::DampingKernel;
use crate::numerics::{integrate_adaptive, oscillatory_panel_hint, solve_dense, Domain, Tail};
use crate::units::{BarrierSpec, EnergyPoint};

/// Exponentials in the subtraction, with rates `j * SUBTRACTION_RATE`.
pub const SUBTRACTION_TERMS: usize = 4;
pub const SUBTRACTION_RATE: f64 = 1.0;

/// Beyond this `|omega|` the remainder follows its power-law envelope.
const ENVELOPE_START: f64 = 30.0;
/// Narrowest initial panel near the barrier-top crossing.
const MIN_PANEL: f64 = 0.02;
const MAX_PANEL: f64 = 2.0;

/// Window applied to a spectral integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    None,
    Gaussian { width: f64 },
}

/// Discretization record of a spectral integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub panels: usize,
    pub tail_bound: f64,
    pub window: Window,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeAmplitude {
    pub amplitude: ComplexAmplitude,
    pub error_estimate: f64,
    /// `None` on the dissipationless path.
    pub grid: Option<SpectralGrid>,
}

/// Per-kernel state for the spectral route: the exponential fit and the
/// envelope of what remains.
#[derive(Debug, Clone)]
pub struct SpectralSolver {
    kernel: DampingKernel,
    rates: Vec<f64>,
    weights: Vec<f64>,
    envelope_scale: f64,
}

impl SpectralSolver {
    pub fn new(kernel: &DampingKernel) -> Result<Self> {
        let kernel = kernel.clone();
        if kernel.is_dissipationless() {
            return Ok(Self { kernel, rates: vec![], weights: vec![], envelope_scale: 0.0 });
        }
        let m = SUBTRACTION_TERMS;
        let rates: Vec<f64> = (1..=m).map(|j| j as f64 * SUBTRACTION_RATE).collect();
        // sum_j a_j (-alpha_j)^n / n! = c_n, n < m
        let mut a = vec![vec![0.0; m]; m];
        let mut fact = 1.0;
        for (n, row) in a.iter_mut().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            for (j, v) in row.iter_mut().enumerate() {
                *v = (-rates[j]).powi(n as i32) / fact;
            }
        }
        let c = kernel.sqrt_f_taylor()[..m].to_vec();
        let weights = solve_dense(a, c).ok_or_else(|| Error::Domain("singular subtraction fit".into()))?;
        let mut s = Self { kernel, rates, weights, envelope_scale: 0.0 };
        let mut scale = 0.0f64;
        for x in [1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0] {
            for sgn in [-1.0, 1.0] {
                let om = sgn * x * ENVELOPE_START;
                scale = scale.max(s.remainder(om)?.norm() * om.abs().powi(5));
            }
        }
        s.envelope_scale = 2.0 * scale;
        Ok(s)
    }

    pub fn kernel(&self) -> &DampingKernel {
        &self.kernel
    }

    /// Rates and weights of the exponential fit.
    pub fn fit(&self) -> (&[f64], &[f64]) {
        (&self.rates, &self.weights)
    }

    /// `g(omega)` minus the spectrum of the exponential fit.
    pub fn remainder(&self, omega: f64) -> Result<Complex64> {
        let g = self.kernel.spectrum(omega)?;
        let fit: Complex64 = self
            .rates
            .iter()
            .zip(&self.weights)
            .map(|(&r, &a)| a / Complex64::new(r, omega))
            .sum();
        Ok(g - fit)
    }

    fn envelope_cutoff(&self, tol: f64) -> f64 {
        // int_W^inf s x^-5 dx = s / (4 W^4), one side gets 5% of tol
        let w = (self.envelope_scale / (4.0 * 0.05 * tol)).powf(0.25);
        w.max(ENVELOPE_START)
    }

    /// `w_D` to absolute tolerance `tol`.
    pub fn amplitude(&self, e: EnergyPoint, b: BarrierSpec, tol: f64) -> Result<DissipativeAmplitude> {
        if !(tol > 0.0 && tol <= 1e-3) {
            return domain(format!("tolerance must lie in (0, 1e-3], got {tol}"));
        }
        if self.kernel.is_dissipationless() {
            return Ok(DissipativeAmplitude { amplitude: amplitude_w(e, b), error_estimate: 0.0, grid: None });
        }
        let exact: Complex64 = self
            .rates
            .iter()
            .zip(&self.weights)
            .map(|(&r, &a)| a * amplitude_shifted(e, b, Complex64::new(0.0, r)))
            .sum();

        let big_w = self.envelope_cutoff(tol);
        let d = b.width();
        let eps = e.epsilon();
        // barrier top of the shifted potential
        let crossing = 0.5 * d * (1.0 - eps);
        let mut cuts = vec![0.0];
        if crossing.abs() < big_w {
            cuts.push(crossing);
        }
        // quarter-period caps from the interior phase kappa d
        let mut x = -big_w;
        while x < big_w {
            let kap2 = eps - 1.0 + 2.0 * x / d;
            let phase = if kap2 > 0.0 { 1.0 / kap2.sqrt() } else { 0.0 };
            x += oscillatory_panel_hint(phase, MAX_PANEL).max(MIN_PANEL);
            if x < big_w {
                cuts.push(x);
            }
        }
        let env = Tail::Envelope { exponent: 5.0, scale: self.envelope_scale };
        let dom = Domain::finite(-big_w, big_w).with_tails(env, env).with_breakpoints(cuts);

        let failed = std::cell::Cell::new(None);
        let integrand = |om: f64| match self.remainder(om) {
            Ok(r) => amplitude_shifted(e, b, Complex64::new(om, 0.0)) * r,
            Err(err) => {
                failed.set(Some(err));
                Complex64::new(0.0, 0.0)
            }
        };
        let q = integrate_adaptive(integrand, &dom, 2.0 * PI * tol);
        if let Some(err) = failed.take() {
            return Err(err);
        }
        let q = q.map_err(|err| match err {
            Error::Quadrature { estimate, error_bound } => Error::Quadrature {
                estimate: (exact.norm() + estimate / (2.0 * PI)),
                error_bound: error_bound / (2.0 * PI),
            },
            other => other,
        })?;
        let value = exact + q.value / (2.0 * PI);
        Ok(DissipativeAmplitude {
            amplitude: ComplexAmplitude(value),
            error_estimate: q.error_estimate / (2.0 * PI),
            grid: Some(SpectralGrid {
                omega_min: -big_w,
                omega_max: big_w,
                panels: q.panels_used,
                tail_bound: q.tail_bound / (2.0 * PI),
                window: Window::None,
            }),
        })
    }
}

/// `w_D` by the spectral route.
pub fn amplitude_w_d(e: EnergyPoint, b: BarrierSpec, k: &DampingKernel, tol: f64) -> Result<DissipativeAmplitude> {
    SpectralSolver::new(k)?.amplitude(e, b, tol)
}

/// `|w_D|^2`.
pub fn transmission_prob_d(e: EnergyPoint, b: BarrierSpec, k: &DampingKernel, tol: f64) -> Result<f64> {
    Ok(amplitude_w_d(e, b, k, tol)?.amplitude.probability())
}
