//! Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands with
//! certified treatment of infinite tails.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Decay model for the part of the integrand beyond a truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// No tail: the endpoint is exact and finite.
    None,
    /// `|f(x)| <= |f(X)| exp(-rate |x - X|)` beyond `X`.
    Exponential { rate: f64 },
    /// `|f(x)| <= |f(X)| (|X| / |x|)^exponent` beyond `X`, `exponent > 1`.
    Power { exponent: f64 },
    /// Caller-certified envelope `|f(x)| <= scale |x|^-exponent`, `exponent > 1`.
    Envelope { exponent: f64, scale: f64 },
}

/// Integration domain `[lo, hi]`. A finite endpoint paired with a tail model
/// is a truncation point of an integral that continues to infinity; an
/// infinite endpoint lets the integrator choose the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lower_tail: Tail,
    pub upper_tail: Tail,
    /// Upper bound on initial panel widths.
    pub max_panel: Option<f64>,
    /// Extra initial subdivision points.
    pub breakpoints: Vec<f64>,
}

impl Domain {
    pub fn finite(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lower_tail: Tail::None, upper_tail: Tail::None, max_panel: None, breakpoints: Vec::new() }
    }

    pub fn with_tails(mut self, lower: Tail, upper: Tail) -> Self {
        self.lower_tail = lower;
        self.upper_tail = upper;
        self
    }

    pub fn with_max_panel(mut self, width: f64) -> Self {
        self.max_panel = Some(width);
        self
    }

    pub fn with_breakpoints(mut self, pts: Vec<f64>) -> Self {
        self.breakpoints = pts;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Estimated error of the finite part plus `tail_bound`.
    pub error_estimate: f64,
    pub panels_used: usize,
    pub tail_bound: f64,
}

/// Largest panel width that keeps an oscillation with local phase derivative
/// `phase_derivative` to a quarter period. Zero phase derivative leaves the
/// panel uncapped, i.e. returns `domain_width`.
pub fn oscillatory_panel_hint(phase_derivative: f64, domain_width: f64) -> f64 {
    let p = phase_derivative.abs();
    if p == 0.0 || p.is_nan() {
        return domain_width;
    }
    (PI / (2.0 * p)).min(domain_width)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    // Largest error first; ties broken by creation order so subdivision is
    // deterministic.
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then_with(|| o.seq.cmp(&self.seq))
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

const MAX_TAIL_STEPS: usize = 200;

/// Picks a truncation point for an infinite end and returns it with the
/// associated tail bound.
fn truncate<F: Fn(f64) -> Complex64>(f: &F, start: f64, dir: f64, tail: Tail, budget: f64) -> Result<(f64, f64)> {
    let mut x = start;
    let mut step = start.abs().max(1.0);
    for _ in 0..MAX_TAIL_STEPS {
        let bound = tail_bound_at(f, x, tail)?;
        if bound <= budget {
            return Ok((x, bound));
        }
        x += dir * step;
        step *= 1.5;
    }
    Err(Error::Quadrature { estimate: f64::NAN, error_bound: f64::INFINITY })
}

fn tail_bound_at<F: Fn(f64) -> Complex64>(f: &F, x: f64, tail: Tail) -> Result<f64> {
    match tail {
        Tail::None => Ok(0.0),
        Tail::Exponential { rate } => {
            if rate <= 0.0 {
                return domain("exponential tail needs rate > 0");
            }
            Ok(f(x).norm() / rate)
        }
        Tail::Power { exponent } => {
            if exponent <= 1.0 {
                return domain("power tail needs exponent > 1");
            }
            Ok(f(x).norm() * x.abs() / (exponent - 1.0))
        }
        Tail::Envelope { exponent, scale } => {
            if exponent <= 1.0 {
                return domain("envelope tail needs exponent > 1");
            }
            Ok(scale * x.abs().powf(1.0 - exponent) / (exponent - 1.0))
        }
    }
}

/// Maximum number of panels before giving up.
pub const MAX_PANELS: usize = 50_000;

/// Integrates `f` over `domain` to absolute tolerance `tol`.
///
/// Each infinite end gets 5% of the tolerance budget for its tail.
/// Fails with [`Error::Quadrature`] (carrying the best estimate) when the
/// panel budget is exhausted.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(f: F, domain: &Domain, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return crate::error::domain(format!("tolerance must be positive, got {tol}"));
    }
    if domain.lo.is_nan() || domain.hi.is_nan() || domain.lo >= domain.hi {
        return crate::error::domain(format!("empty domain [{}, {}]", domain.lo, domain.hi));
    }
    let tail_budget = 0.05 * tol;
    let (lo, lo_tail) = if domain.lo.is_infinite() {
        if domain.lower_tail == Tail::None {
            return crate::error::domain("infinite lower limit needs a tail model");
        }
        let start = if domain.hi.is_finite() { domain.hi.min(0.0) - 1.0 } else { -1.0 };
        truncate(&f, start, -1.0, domain.lower_tail, tail_budget)?
    } else {
        (domain.lo, tail_bound_at(&f, domain.lo, domain.lower_tail)?)
    };
    let (hi, hi_tail) = if domain.hi.is_infinite() {
        if domain.upper_tail == Tail::None {
            return crate::error::domain("infinite upper limit needs a tail model");
        }
        let start = lo.max(0.0) + 1.0;
        truncate(&f, start, 1.0, domain.upper_tail, tail_budget)?
    } else {
        (domain.hi, tail_bound_at(&f, domain.hi, domain.upper_tail)?)
    };
    let tail = lo_tail + hi_tail;

    let mut cuts = vec![lo];
    let mut bps: Vec<f64> = domain.breakpoints.iter().copied().filter(|&x| x > lo && x < hi).collect();
    bps.sort_by(f64::total_cmp);
    bps.push(hi);
    for &x in &bps {
        let prev = *cuts.last().unwrap();
        if let Some(w) = domain.max_panel {
            let n = ((x - prev) / w).ceil().max(1.0) as usize;
            for i in 1..n {
                cuts.push(prev + (x - prev) * i as f64 / n as f64);
            }
        }
        if x > prev {
            cuts.push(x);
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e, seq });
        seq += 1;
    }
    if !(total.re.is_finite() && total.im.is_finite() && err.is_finite()) {
        return Err(Error::Quadrature { estimate: f64::NAN, error_bound: f64::INFINITY });
    }
    let target = (tol - tail).max(0.5 * tol);
    while err > target {
        if heap.len() >= MAX_PANELS {
            return Err(Error::Quadrature { estimate: total.norm(), error_bound: err + tail });
        }
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            return Err(Error::Quadrature { estimate: total.norm(), error_bound: err + tail });
        }
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1, seq });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2, seq: seq + 1 });
        seq += 2;
        if !(total.re.is_finite() && total.im.is_finite() && err.is_finite()) {
            return Err(Error::Quadrature { estimate: f64::NAN, error_bound: f64::INFINITY });
        }
    }
    // Re-sum to shed accumulated rounding from the running updates.
    let value: Complex64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.err).sum();
    Ok(QuadratureResult { value, error_estimate: err + tail, panels_used: heap.len(), tail_bound: tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn exponential_half_line() {
        let d = Domain::finite(0.0, f64::INFINITY).with_tails(Tail::None, Tail::Exponential { rate: 1.0 });
        let r = integrate_adaptive(re(|x| (-x).exp()), &d, 1e-13).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-12, "{r:?}");
        assert!(r.tail_bound > 0.0);
    }

    #[test]
    fn polynomial_exact_on_one_panel() {
        let r = integrate_adaptive(re(|x| x.powi(10)), &Domain::finite(0.0, 1.0), 1e-14).unwrap();
        assert_relative_eq!(r.value.re, 1.0 / 11.0, epsilon = 1e-15);
        assert_eq!(r.panels_used, 1);
    }

    #[test]
    fn oscillatory_with_panel_cap() {
        let w = 40.0;
        let d = Domain::finite(0.0, PI).with_max_panel(oscillatory_panel_hint(w, PI));
        let r = integrate_adaptive(|x: f64| Complex64::new(0.0, w * x).exp(), &d, 1e-12).unwrap();
        let exact = (Complex64::new(0.0, w * PI).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn power_tail_bound_matches_analytic() {
        // |f| = C |x|^{-3/2} beyond W on each side
        let c = 0.7;
        let w = 50.0;
        let d = Domain::finite(-w, w).with_tails(Tail::Power { exponent: 1.5 }, Tail::Power { exponent: 1.5 });
        let f = move |x: f64| Complex64::new(c * (1.0 + x * x).powf(-0.75), 0.0);
        let r = integrate_adaptive(f, &d, 1e-6).unwrap();
        let analytic = 2.0 * (2.0 * c * w.powf(-0.5));
        assert!(r.tail_bound / analytic > 0.5 && r.tail_bound / analytic < 2.0, "{} vs {}", r.tail_bound, analytic);
    }

    #[test]
    fn envelope_picks_truncation() {
        let d = Domain::finite(1.0, f64::INFINITY).with_tails(Tail::None, Tail::Envelope { exponent: 3.0, scale: 1.0 });
        let r = integrate_adaptive(re(|x| x.powi(-3)), &d, 1e-8).unwrap();
        assert!((r.value.re - 0.5).abs() <= r.error_estimate + 1e-12);
        assert!(r.tail_bound <= 0.05e-8 * 1.0001);
    }

    #[test]
    fn hint_uncapped_for_zero_phase() {
        assert_eq!(oscillatory_panel_hint(0.0, 7.0), 7.0);
        assert_relative_eq!(oscillatory_panel_hint(-2.0, 7.0), PI / 4.0);
    }

    #[test]
    fn reports_failure_with_estimate() {
        let r = integrate_adaptive(re(|x: f64| 1.0 / x.abs().sqrt()), &Domain::finite(-1.0, 1.0), 1e-15);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn deterministic_panel_sequence() {
        let f = |x: f64| Complex64::new((10.0 * x).sin() / (1.0 + x * x), x.cos());
        let d = Domain::finite(-20.0, 30.0);
        let a = integrate_adaptive(f, &d, 1e-10).unwrap();
        let b = integrate_adaptive(f, &d, 1e-10).unwrap();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        assert_eq!(a.panels_used, b.panels_used);
    }
}
