//! Energy-domain Green functions restricted to the three regions, each with
//! Dirichlet walls at the barrier edges, and the composition that rebuilds
//! the full propagator from them.
//!
//! Convention: `(H - E) G(x', x) = delta(x - x')` with `H = -d^2/dx^2 + V`.

use num_complex::Complex64;

use super::{upper_sqrt, I};
use crate::error::{domain, Error, Result};
use crate::units::{BarrierSpec, EnergyPoint};

/// Below this `|sin(kappa d)|` region II is treated as resonant.
const POLE_EPS: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `x <= a`, outgoing to the left.
    I,
    /// `a <= x <= b`, walls at both ends.
    II,
    /// `x >= b`, outgoing to the right.
    III,
}

/// Point pair `x <= x_prime` (lengths in units of `lambda0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenRequest {
    pub region: Region,
    pub x: f64,
    pub x_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenFunctionSample {
    pub region: Region,
    pub x: f64,
    pub x_prime: f64,
    pub value: Complex64,
}

struct Waves {
    k: f64,
    kappa: Complex64,
    sin_kd: Complex64,
    a: f64,
    b: f64,
}

impl Waves {
    fn new(e: EnergyPoint, bar: BarrierSpec) -> Self {
        let eps = e.epsilon();
        let kappa = upper_sqrt(Complex64::new(eps - 1.0, 0.0));
        let d = bar.width();
        Self {
            k: eps.sqrt(),
            kappa,
            sin_kd: (kappa * d).sin(),
            a: bar.left(),
            b: bar.right(),
        }
    }

    fn check_pole(&self) -> Result<()> {
        if self.sin_kd.norm() < POLE_EPS || self.kappa.norm() < POLE_EPS {
            return Err(Error::Pole(format!("sin(kappa d) = {:.3e}", self.sin_kd.norm())));
        }
        Ok(())
    }
}

fn check_region(req: &GreenRequest, a: f64, b: f64) -> Result<()> {
    let GreenRequest { region, x, x_prime } = *req;
    if !(x.is_finite() && x_prime.is_finite()) || x > x_prime {
        return domain(format!("need finite x <= x', got x = {x}, x' = {x_prime}"));
    }
    let ok = match region {
        Region::I => x_prime <= a,
        Region::II => x >= a && x_prime <= b,
        Region::III => x >= b,
    };
    if !ok {
        return domain(format!("points ({x}, {x_prime}) outside region {region:?}"));
    }
    Ok(())
}

/// `G^R(x', x)` for `x <= x'` inside region `R`.
pub fn green_restricted(req: GreenRequest, e: EnergyPoint, bar: BarrierSpec) -> Result<GreenFunctionSample> {
    let w = Waves::new(e, bar);
    check_region(&req, w.a, w.b)?;
    let (x, xp) = (req.x, req.x_prime);
    let k = w.k;
    let value = match req.region {
        Region::I => -Complex64::new(0.0, -k * (x - w.a)).exp() * (k * (xp - w.a)).sin() / k,
        Region::II => {
            w.check_pole()?;
            let kap = w.kappa;
            -(kap * (x - w.a)).sin() * (kap * (xp - w.b)).sin() / (kap * w.sin_kd)
        }
        Region::III => Complex64::new(0.0, k * (xp - w.b)).exp() * (k * (x - w.b)).sin() / k,
    };
    Ok(GreenFunctionSample { region: req.region, x, x_prime: xp, value })
}

/// `d^2 G^R / dx dx'` at `x <= x'`.
fn mixed_derivative(w: &Waves, region: Region, x: f64, xp: f64) -> Complex64 {
    let k = w.k;
    match region {
        Region::I => I * k * Complex64::new(0.0, -k * (x - w.a)).exp() * (k * (xp - w.a)).cos(),
        Region::II => -w.kappa * (w.kappa * (x - w.a)).cos() * (w.kappa * (xp - w.b)).cos() / w.sin_kd,
        Region::III => I * k * (k * (x - w.b)).cos() * Complex64::new(0.0, k * (xp - w.b)).exp(),
    }
}

/// Full `G(x_T, x0)` for `x0 <= a`, `x_T >= b`, glued from the restricted
/// Green functions through their boundary operators. Equals
/// `w * G0(x_T, x0)` with the free `G0 = (i / 2k) e^{ik(x_T - x0)}`.
pub fn green_assembled(e: EnergyPoint, bar: BarrierSpec, x0: f64, x_t: f64) -> Result<Complex64> {
    let w = Waves::new(e, bar);
    if !(x0 <= w.a && x_t >= w.b) {
        return domain(format!("need x0 <= a and x_T >= b, got {x0}, {x_t}"));
    }
    w.check_pole()?;
    let (a, b) = (w.a, w.b);
    // boundary operator: sum over regions of -n_s n_s' d^2 G / dx dx',
    // outward normals +1 at a for I, -1 at a and +1 at b for II, -1 at b for III
    let l_aa = -mixed_derivative(&w, Region::I, a, a) - mixed_derivative(&w, Region::II, a, a);
    let l_bb = -mixed_derivative(&w, Region::II, b, b) - mixed_derivative(&w, Region::III, b, b);
    let l_ab = mixed_derivative(&w, Region::II, a, b);
    let det = l_aa * l_bb - l_ab * l_ab;
    if det.norm() == 0.0 {
        return Err(Error::Pole("singular boundary operator".into()));
    }
    let g_ba = -l_ab / det;
    // Poisson kernels carrying the boundary values out to x0 and x_T
    let p_in = Complex64::new(0.0, -w.k * (x0 - a)).exp();
    let p_out = Complex64::new(0.0, w.k * (x_t - b)).exp();
    Ok(p_out * g_ba * p_in)
}
