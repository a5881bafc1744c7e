//! Caldeira-Leggett damping kernel. All times in units of `tau*`, rates and
//! frequencies in `1 / tau*`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::numerics::{gauss_legendre, series};
use crate::units::DissipationSpec;

/// Number of Taylor coefficients of `sqrt(f)` kept for the asymptotic
/// spectrum and the subtraction fit.
pub const TAYLOR_TERMS: usize = 40;

/// Terms summed explicitly in the spectral series before the tail estimate.
const SERIES_MIN_TERMS: usize = 128;
const SERIES_MAX_TERMS: usize = 2_000_000;
const TAIL_NODES: usize = 40;

/// Coefficients of the quadratic exponent of the influence-functional
/// propagator, in units of `m / tau*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClCoefficients {
    pub k: f64,
    pub l: f64,
    pub n: f64,
}

#[derive(Debug, Clone)]
pub struct DampingKernel {
    spec: DissipationSpec,
    gamma: f64,
    sigma: f64,
    taylor: Vec<f64>,
    tail_rule: (Vec<f64>, Vec<f64>),
}

/// `x / sinh(x)` for `x >= 0`, with `exp(shift)` folded in to avoid overflow.
fn x_over_sinh_scaled(x: f64, shift: f64) -> f64 {
    if x < 1e-4 {
        shift.exp() * (1.0 - x * x / 6.0)
    } else if x < 20.0 {
        shift.exp() * x / x.sinh()
    } else {
        2.0 * x * (shift - x).exp() / (1.0 - (-2.0 * x).exp())
    }
}

/// `x coth(x)` for `x >= 0`.
fn x_coth(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 + x * x / 3.0
    } else {
        x / x.tanh()
    }
}

impl DampingKernel {
    pub fn new(spec: DissipationSpec) -> Self {
        let gamma = spec.gamma_star();
        let sigma = spec.sigma_star();
        let n = TAYLOR_TERMS;
        let f_series = series::mul(&series::exp_linear(gamma, n), &series::inv(&series::sinhc(sigma, n)));
        let taylor = series::sqrt(&f_series);
        let (x, w) = gauss_legendre(TAIL_NODES);
        // map [-1, 1] onto [0, 1]
        let tail_rule = (x.iter().map(|v| 0.5 * (v + 1.0)).collect(), w.iter().map(|v| 0.5 * v).collect());
        Self { spec, gamma, sigma, taylor, tail_rule }
    }

    pub fn spec(&self) -> DissipationSpec {
        self.spec
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_dissipationless(&self) -> bool {
        self.spec.is_dissipationless()
    }

    /// `f` continued to all real `t` through its closed form.
    pub fn f_analytic(&self, t: f64) -> f64 {
        x_over_sinh_scaled(self.sigma * t.abs(), self.gamma * t)
    }

    /// `sqrt(f)` continued to all real `t`.
    pub fn sqrt_f(&self, t: f64) -> f64 {
        self.f_analytic(t).sqrt()
    }

    /// Taylor coefficients of `sqrt(f)` at `t = 0`.
    pub fn sqrt_f_taylor(&self) -> &[f64] {
        &self.taylor
    }

    /// Decay rate of `sqrt(f)` for large `t`, `(sigma - gamma) / 2`.
    pub fn decay_rate(&self) -> f64 {
        0.5 * (self.sigma - self.gamma)
    }

    /// Spectral series for `sqrt(f)` at frequency `omega`: explicit terms
    /// followed by a midpoint Euler-Maclaurin estimate of the remainder built
    /// on the large-`n` form of the binomial coefficients.
    pub fn spectrum_series(&self, omega: f64) -> Result<Complex64> {
        if self.sigma == 0.0 {
            return Err(Error::DegenerateKernel);
        }
        let s0 = self.decay_rate();
        let b = 2.0 * self.sigma;
        let a = Complex64::new(s0, omega);
        let need = (4.0 * a.norm() / b).ceil();
        if need > SERIES_MAX_TERMS as f64 {
            return Err(Error::NonConvergence { ratio: 1.0 });
        }
        let n_terms = SERIES_MIN_TERMS.max(need as usize);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut c = 1.0;
        for n in 0..n_terms {
            sum += c * (a + b * n as f64).powf(-1.5);
            c *= (2 * n + 1) as f64 / (2 * n + 2) as f64;
        }
        sum += self.series_tail(a, b, n_terms as f64 - 0.5);
        // sqrt(2 sigma) Gamma(3/2)
        Ok(sum * (2.0 * self.sigma).sqrt() * 0.5 * PI.sqrt())
    }

    fn series_tail(&self, a: Complex64, b: f64, x0: f64) -> Complex64 {
        const P: [f64; 5] = [1.0, -1.0 / 8.0, 1.0 / 128.0, 5.0 / 1024.0, -21.0 / 32768.0];
        let coef = |x: f64| {
            let mut p = 0.0;
            let mut dp = 0.0;
            let mut xp = 1.0;
            for (j, pj) in P.iter().enumerate() {
                p += pj * xp;
                dp -= j as f64 * pj * xp / x;
                xp /= x;
            }
            let pre = (PI * x).powf(-0.5);
            (pre * p, pre * (dp - p / (2.0 * x)))
        };
        let term = |x: f64| coef(x).0 * (a + b * x).powf(-1.5);
        let (nodes, weights) = &self.tail_rule;
        // x = x0 / u^2 sends [x0, inf) to (0, 1]
        let integral: Complex64 = nodes
            .iter()
            .zip(weights)
            .map(|(&u, &wt)| term(x0 / (u * u)) * (2.0 * x0 / (u * u * u)) * wt)
            .sum();
        let (c, dc) = coef(x0);
        let z = a + b * x0;
        let deriv = dc * z.powf(-1.5) - 1.5 * b * c * z.powf(-2.5);
        integral + deriv / 24.0
    }

    /// Large-`|omega|` expansion `sum_m m! c_m / (i omega)^{m+1}` at optimal
    /// truncation, with the size of the last retained term as error estimate.
    pub fn spectrum_asymptotic(&self, omega: f64) -> (Complex64, f64) {
        let z = Complex64::new(0.0, omega);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fact = 1.0;
        let mut zp = 1.0 / z;
        let mut last = f64::INFINITY;
        for (m, c) in self.taylor.iter().enumerate() {
            if m > 0 {
                fact *= m as f64;
                zp /= z;
            }
            let t = zp * fact * c;
            let tn = t.norm();
            if tn == 0.0 {
                continue;
            }
            if m > 4 && tn > last {
                break;
            }
            sum += t;
            last = tn;
        }
        (sum, last)
    }

    /// Fourier transform `int_0^inf sqrt(f(t)) e^{-i omega t} dt`.
    pub fn spectrum(&self, omega: f64) -> Result<Complex64> {
        if self.sigma == 0.0 {
            return Err(Error::DegenerateKernel);
        }
        if omega.abs() > 4.0 * self.sigma {
            let (v, err) = self.spectrum_asymptotic(omega);
            if err < 1e-14 * v.norm() {
                return Ok(v);
            }
        }
        self.spectrum_series(omega)
    }
}

/// `f(t) = sigma t e^{gamma t} / sinh(sigma t)`, `t >= 0`.
pub fn f_of_t(k: &DampingKernel, t_hat: f64) -> Result<f64> {
    if !(t_hat >= 0.0 && t_hat.is_finite()) {
        return domain(format!("damping kernel needs t >= 0, got {t_hat}"));
    }
    Ok(k.f_analytic(t_hat))
}

pub fn sqrt_f_spectrum(k: &DampingKernel, omega_hat: f64) -> Result<Complex64> {
    k.spectrum(omega_hat)
}

/// `K = (sigma/2) coth(sigma t)`, `L = (sigma/2) e^{-gamma t} / sinh(sigma t)`,
/// `N = (sigma/2) e^{gamma t} / sinh(sigma t)`.
pub fn cl_coefficients(k: &DampingKernel, t_hat: f64) -> Result<ClCoefficients> {
    if t_hat == 0.0 {
        return Err(Error::Pole("coth(sigma t) diverges at t = 0".into()));
    }
    if !(t_hat > 0.0 && t_hat.is_finite()) {
        return domain(format!("propagator coefficients need t > 0, got {t_hat}"));
    }
    let x = k.sigma * t_hat;
    let inv_t = 0.5 / t_hat;
    Ok(ClCoefficients {
        k: inv_t * x_coth(x),
        l: inv_t * x_over_sinh_scaled(x, -k.gamma * t_hat),
        n: inv_t * x_over_sinh_scaled(x, k.gamma * t_hat),
    })
}

/// Prefactor of the diagonal density matrix, `N(t) / pi` (with `hbar = m = 1`).
pub fn diagonal_density_prefactor(k: &DampingKernel, t_hat: f64) -> Result<f64> {
    Ok(cl_coefficients(k, t_hat)?.n / PI)
}

/// Largest relative violation of `f(t1 + t2) = f(t1) f(t2)` over pairs drawn
/// from `grid`.
pub fn product_rule_deviation(k: &DampingKernel, grid: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &t1 in grid {
        for &t2 in grid {
            let whole = k.f_analytic(t1 + t2);
            let dev = (whole - k.f_analytic(t1) * k.f_analytic(t2)).abs() / whole;
            worst = worst.max(dev);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, oscillatory_panel_hint, Domain, Tail};
    use approx::assert_relative_eq;

    fn kern(g: f64, w: f64) -> DampingKernel {
        DampingKernel::new(DissipationSpec::new(g, w).unwrap())
    }

    pub(crate) fn spectrum_by_quadrature(k: &DampingKernel, omega: f64, tol: f64) -> Complex64 {
        let rate = 0.9 * k.decay_rate();
        let hi = 60.0 / k.decay_rate();
        let d = Domain::finite(0.0, hi)
            .with_tails(Tail::None, Tail::Exponential { rate })
            .with_max_panel(oscillatory_panel_hint(omega, hi).max(0.02));
        integrate_adaptive(|t| k.sqrt_f(t) * Complex64::new(0.0, -omega * t).exp(), &d, tol).unwrap().value
    }

    #[test]
    fn f_basic_values() {
        let k = kern(5e-3, 100.0);
        assert_eq!(f_of_t(&k, 0.0).unwrap(), 1.0);
        assert!(f_of_t(&k, -1.0).is_err());
        let t: f64 = 3.0;
        let s = k.sigma();
        assert_relative_eq!(f_of_t(&k, t).unwrap(), s * t * (5e-3 * t).exp() / (s * t).sinh(), epsilon = 1e-14);
        // no overflow far out
        let far = f_of_t(&k, 5000.0).unwrap();
        assert!(far.is_finite() && far >= 0.0 && far < 1e-100);
    }

    #[test]
    fn dissipationless_kernel_is_one() {
        let k = kern(0.0, 100.0);
        assert_eq!(f_of_t(&k, 7.0).unwrap(), 1.0);
        assert!(matches!(sqrt_f_spectrum(&k, 1.0), Err(Error::DegenerateKernel)));
        let c = cl_coefficients(&k, 2.0).unwrap();
        assert_relative_eq!(c.k, 0.25);
        assert_relative_eq!(c.n, 0.25);
    }

    #[test]
    fn taylor_coefficients() {
        let k = kern(5e-3, 100.0);
        let c = k.sqrt_f_taylor();
        assert_eq!(c[0], 1.0);
        assert_relative_eq!(c[1], 2.5e-3, epsilon = 1e-15);
        assert_relative_eq!(c[2], -3.377_268_62e-2, epsilon = 1e-10);
        assert_relative_eq!(c[3], -8.443_692_39e-5, epsilon = 1e-12);
        assert_relative_eq!(c[4], 1.026_619_33e-3, epsilon = 1e-11);
        let t: f64 = 0.8;
        let poly = c.iter().rev().fold(0.0, |acc, v| acc * t + v);
        assert_relative_eq!(poly, k.sqrt_f(t), epsilon = 1e-13);
    }

    #[test]
    fn f_equals_two_t_n() {
        for (g, w) in [(1e-3, 100.0), (5e-3, 100.0), (0.05, 10.0)] {
            let k = kern(g, w);
            for i in 1..200 {
                let t = i as f64 * 0.37;
                let n = cl_coefficients(&k, t).unwrap().n;
                let f = f_of_t(&k, t).unwrap();
                assert!((2.0 * t * n - f).abs() <= 1e-12 * f.max(1e-300));
                let rho = diagonal_density_prefactor(&k, t).unwrap();
                assert!((rho - f / (2.0 * PI * t)).abs() <= 1e-12 * rho);
            }
        }
    }

    #[test]
    fn spectrum_at_zero_frequency() {
        let k = kern(5e-3, 100.0);
        assert_relative_eq!(sqrt_f_spectrum(&k, 0.0).unwrap().re, 6.102_713_448_698, epsilon = 1e-9);
    }

    #[test]
    fn series_matches_quadrature() {
        for (g, w) in [(1e-3, 100.0), (5e-3, 100.0)] {
            let k = kern(g, w);
            for om in [-20.0, -3.0, -0.4, 0.0, 0.5, 2.0, 11.0, 35.0] {
                let s = k.spectrum_series(om).unwrap();
                let q = spectrum_by_quadrature(&k, om, 1e-11);
                assert!((s - q).norm() < 1e-8, "g {g} om {om}: {s} vs {q}");
            }
        }
    }

    #[test]
    fn asymptotic_agrees_with_series() {
        let k = kern(5e-3, 100.0);
        for om in [25.0, -40.0, 80.0] {
            let (a, err) = k.spectrum_asymptotic(om);
            let s = k.spectrum_series(om).unwrap();
            assert!((a - s).norm() < 1e-11, "om {om}: {a} vs {s}, err {err}");
        }
    }

    #[test]
    fn coefficient_limits() {
        let k = kern(5e-3, 100.0);
        assert!(matches!(cl_coefficients(&k, 0.0), Err(Error::Pole(_))));
        let l1 = cl_coefficients(&k, 1.0).unwrap().l;
        let l50 = cl_coefficients(&k, 50.0).unwrap().l;
        assert!(l50 < 1e-10 * l1);
        let k0 = kern(0.0, 100.0);
        let c = cl_coefficients(&k0, 3.3).unwrap();
        assert_eq!(c.l, c.n);
    }

    #[test]
    fn spectrum_conjugate_symmetry() {
        let k = kern(5e-3, 100.0);
        let a = sqrt_f_spectrum(&k, 1.7).unwrap();
        let b = sqrt_f_spectrum(&k, -1.7).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
        let z = sqrt_f_spectrum(&k, 0.0).unwrap();
        assert!(z.im.abs() < 1e-15 && z.re > 0.0);
    }

    #[test]
    fn product_rule_fails_only_mildly() {
        let k = kern(5e-3, 100.0);
        let grid: Vec<f64> = (0..20).map(|i| i as f64 * 0.5).collect();
        let dev = product_rule_deviation(&k, &grid);
        assert!(dev > 0.0 && dev.is_finite());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn bounded_and_decaying(g in 1e-4f64..0.05, w in 10.0f64..200.0, t in 0.0f64..200.0) {
                let k = kern(g, w);
                let f = f_of_t(&k, t).unwrap();
                prop_assert!(f > 0.0 || t > 50.0);
                // never much above one: the rise near t = 0 is of order gamma^2 / sigma^2
                prop_assert!(f <= 1.0 + 2.0 * g * g / (k.sigma() * k.sigma()) + 1e-15);
                let later = f_of_t(&k, t + 1.0).unwrap();
                prop_assert!(later < f || f < 1e-300 || t < 3.0 * g / (k.sigma() * k.sigma()));
            }

            #[test]
            fn coefficients_positive(g in 0.0f64..0.05, t in 1e-3f64..50.0) {
                let k = kern(g, 100.0);
                let c = cl_coefficients(&k, t).unwrap();
                prop_assert!(c.k > 0.0 && c.l > 0.0 && c.n > 0.0);
                prop_assert!(c.l <= c.n);
            }
        }
    }
}
