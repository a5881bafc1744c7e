//! Parameter sweeps over energy or time, and their CSV / JSON output.
//!
//! Every sweep carries a `g0` baseline column next to one column per
//! requested damping rate. Points are evaluated in parallel and written in
//! input order.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::barrier::{amplitude_w, transmission_prob};
use crate::dissipative::SpectralSolver;
use crate::error::{domain, Error, Result};
use crate::kernel::DampingKernel;
use crate::traversal::{distribution_f_d, mean_tau_closed, mean_tau_derivative, CumulativeAmplitude, CumulativeConfig, SpectralConfig};
use crate::units::{classical_time, resonance_energies, BarrierSpec, DissipationSpec, EnergyPoint};

/// Bumped whenever a header or JSON key changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Inclusive uniform grid `lo..=hi` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return domain(format!("grid needs finite lo < hi, got {lo}:{hi}"));
        }
        if n < 2 {
            return domain(format!("grid needs at least 2 points, got {n}"));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.hi } else { self.lo + i as f64 * step }).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `lo:hi:n`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return domain(format!("expected lo:hi:n, got {s:?}"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad number {p:?} in {s:?}")));
        let n = parts[2].trim().parse::<usize>().map_err(|_| Error::Domain(format!("bad point count in {s:?}")))?;
        Grid::new(num(parts[0])?, num(parts[1])?, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `|w_D|^2` against `eps`.
    Transmission,
    /// `|<tau_D>| - tau_cl` against `eps`.
    MeanTau,
    /// `|C_D(tau)|` against `tau / tau*` at one energy.
    Cumulative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRequest {
    pub quantity: Quantity,
    /// Energies, or times for the cumulative amplitude.
    pub grid: Grid,
    /// Fixed energy of a cumulative sweep.
    pub epsilon: Option<f64>,
    pub d_over_lambda0: f64,
    pub omega_star: f64,
    /// Damping rates besides the `g0` baseline.
    pub gamma_star: Vec<f64>,
    pub tol: f64,
}

impl SweepRequest {
    pub fn validate(&self) -> Result<()> {
        Grid::new(self.grid.lo, self.grid.hi, self.grid.n)?;
        BarrierSpec::new(self.d_over_lambda0)?;
        for &g in &self.gamma_star {
            DissipationSpec::new(g, self.omega_star)?;
        }
        DissipationSpec::new(0.0, self.omega_star)?;
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return domain(format!("tolerance must lie in (0, 1e-3], got {}", self.tol));
        }
        match self.quantity {
            Quantity::Cumulative => {
                let e = self.epsilon.ok_or_else(|| Error::Domain("cumulative sweep needs an energy".into()))?;
                EnergyPoint::new(e)?;
                if self.grid.lo < 0.0 {
                    return domain("cumulative sweep needs tau >= 0");
                }
            }
            Quantity::Transmission => {
                if self.grid.lo <= 0.0 {
                    return domain("energies must be positive");
                }
            }
            Quantity::MeanTau => {
                if self.grid.lo <= 1.0 {
                    return domain("traversal times need eps > 1 on the whole grid");
                }
            }
        }
        Ok(())
    }

    /// `0` first, then the requested rates in order without repeats.
    pub fn series(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        for &g in &self.gamma_star {
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

/// Column name of a damping rate.
pub fn column_name(gamma_star: f64) -> String {
    format!("g{gamma_star}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointFailure {
    pub row: usize,
    pub column: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub abscissa: String,
    pub columns: Vec<String>,
    /// Abscissa first, then one value per column; NaN where a point failed.
    pub rows: Vec<Vec<f64>>,
    /// Per-cell error estimates, NaN where none is available.
    pub error_estimates: Vec<Vec<f64>>,
    pub failures: Vec<PointFailure>,
    pub params: serde_json::Value,
}

impl SweepResult {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j + 1]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.abscissa);
        for c in &self.columns {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write_float(&mut s, *v);
            }
            s.push('\n');
        }
        s
    }

    /// `generated_at` (seconds since the epoch) is left out when `None`.
    pub fn to_json(&self, generated_at: Option<u64>) -> String {
        let nullable = |rows: &[Vec<f64>]| -> Vec<Vec<Option<f64>>> {
            rows.iter().map(|r| r.iter().map(|v| v.is_finite().then_some(*v)).collect()).collect()
        };
        let mut columns = vec![self.abscissa.clone()];
        columns.extend(self.columns.iter().cloned());
        let mut obj = json!({
            "version": SCHEMA_VERSION,
            "code_version": env!("CARGO_PKG_VERSION"),
            "params": self.params,
            "columns": columns,
            "rows": nullable(&self.rows),
            "error_estimates": nullable(&self.error_estimates),
            "failures": self.failures,
        });
        if let Some(t) = generated_at {
            obj["generated_at"] = json!(t);
        }
        let mut s = serde_json::to_string_pretty(&obj).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// 17 significant digits, `NaN` for failed cells.
fn write_float(s: &mut String, v: f64) {
    if v.is_nan() {
        s.push_str("NaN");
    } else {
        write!(s, "{v:.16e}").unwrap();
    }
}

struct Cell {
    value: f64,
    error: f64,
}

type CellResult = Result<Cell>;

fn assemble(req: &SweepRequest, abscissa: &str, xs: &[f64], cells: Vec<Vec<CellResult>>) -> SweepResult {
    let series = req.series();
    let columns: Vec<String> = series.iter().map(|&g| column_name(g)).collect();
    let mut rows = Vec::with_capacity(xs.len());
    let mut errors = Vec::with_capacity(xs.len());
    let mut failures = Vec::new();
    for (i, (x, row)) in xs.iter().zip(cells).enumerate() {
        let mut r = vec![*x];
        let mut e = vec![0.0];
        for (j, c) in row.into_iter().enumerate() {
            match c {
                Ok(c) => {
                    r.push(c.value);
                    e.push(c.error);
                }
                Err(err) => {
                    r.push(f64::NAN);
                    e.push(f64::NAN);
                    failures.push(PointFailure { row: i, column: columns[j].clone(), message: err.to_string() });
                }
            }
        }
        rows.push(r);
        errors.push(e);
    }
    SweepResult {
        abscissa: abscissa.into(),
        columns,
        rows,
        error_estimates: errors,
        failures,
        params: serde_json::to_value(req).expect("request serializes"),
    }
}

/// Runs a validated request on the current rayon pool.
pub fn run(req: &SweepRequest) -> Result<SweepResult> {
    req.validate()?;
    let b = BarrierSpec::new(req.d_over_lambda0)?;
    let series = req.series();
    let kernels: Vec<DampingKernel> = series
        .iter()
        .map(|&g| DissipationSpec::new(g, req.omega_star).map(DampingKernel::new))
        .collect::<Result<_>>()?;
    let xs = req.grid.points();
    match req.quantity {
        Quantity::Transmission => {
            let solvers: Vec<SpectralSolver> = kernels.iter().map(SpectralSolver::new).collect::<Result<_>>()?;
            let cells = xs
                .par_iter()
                .map(|&x| {
                    let e = EnergyPoint::new(x);
                    solvers.iter().map(|s| transmission_cell(s, e.clone()?, b, req.tol)).collect()
                })
                .collect();
            Ok(assemble(req, "epsilon", &xs, cells))
        }
        Quantity::MeanTau => {
            let cfg = SpectralConfig::default();
            let cells = xs
                .par_iter()
                .map(|&x| {
                    let e = EnergyPoint::new(x);
                    kernels.iter().map(|k| mean_tau_cell(k, e.clone()?, b, &cfg)).collect()
                })
                .collect();
            Ok(assemble(req, "epsilon", &xs, cells))
        }
        Quantity::Cumulative => {
            let e = EnergyPoint::new(req.epsilon.expect("validated"))?;
            let cfg = CumulativeConfig::default();
            let amps: Vec<Result<CumulativeAmplitude>> =
                kernels.par_iter().map(|k| CumulativeAmplitude::new(e, b, k, &cfg)).collect();
            let cells = xs
                .par_iter()
                .map(|&t| {
                    amps.iter()
                        .map(|a| match a {
                            Ok(a) => a.at(t).map(|c| Cell { value: c.norm(), error: f64::NAN }),
                            Err(err) => Err(err.clone()),
                        })
                        .collect()
                })
                .collect();
            Ok(assemble(req, "tau_star", &xs, cells))
        }
    }
}

fn transmission_cell(s: &SpectralSolver, e: EnergyPoint, b: BarrierSpec, tol: f64) -> CellResult {
    if s.kernel().is_dissipationless() {
        return Ok(Cell { value: transmission_prob(e, b), error: 0.0 });
    }
    let r = s.amplitude(e, b, tol)?;
    let a = r.amplitude.value().norm();
    Ok(Cell { value: a * a, error: 2.0 * a * r.error_estimate + r.error_estimate.powi(2) })
}

fn mean_tau_cell(k: &DampingKernel, e: EnergyPoint, b: BarrierSpec, cfg: &SpectralConfig) -> CellResult {
    let tau_cl = classical_time(e)?;
    if k.is_dissipationless() {
        let closed = mean_tau_closed(e, b)?;
        // the finite-difference route is the error estimate
        let error = match mean_tau_derivative(e, b) {
            Ok(fd) => (fd.value - closed.value).norm(),
            Err(_) => f64::NAN,
        };
        return Ok(Cell { value: closed.deviation(), error });
    }
    let fd = distribution_f_d(e, b, k, cfg)?;
    Ok(Cell { value: fd.mean().norm() - tau_cl, error: fd.normalization_residual * fd.mean().norm() })
}

/// Over-barrier resonances with the checks printed next to them:
/// `kappa d / pi`, `|w|^2`, `Re <tau>`, `Im <tau>` and `tau_cl`.
pub fn resonance_table(d_over_lambda0: f64, n_max: usize) -> Result<SweepResult> {
    let b = BarrierSpec::new(d_over_lambda0)?;
    if n_max == 0 {
        return domain("need at least one resonance");
    }
    let columns: Vec<String> =
        ["epsilon", "kappa_d_over_pi", "transmission", "re_tau", "im_tau", "tau_cl"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (i, e) in resonance_energies(b, n_max).into_iter().enumerate() {
        let m = mean_tau_closed(e, b)?;
        let kd = (e.epsilon() - 1.0).sqrt() * b.width() / std::f64::consts::PI;
        let p = amplitude_w(e, b).probability();
        rows.push(vec![(i + 1) as f64, e.epsilon(), kd, p, m.value.re, m.value.im, m.classical]);
    }
    let n = rows.len();
    Ok(SweepResult {
        abscissa: "n".into(),
        columns,
        rows,
        error_estimates: vec![vec![0.0; 7]; n],
        failures: vec![],
        params: json!({ "d_over_lambda0": d_over_lambda0, "n_max": n_max }),
    })
}
