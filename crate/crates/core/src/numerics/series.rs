//! Truncated real power series arithmetic.

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

/// Reciprocal; `a[0]` must be nonzero.
pub fn inv(a: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; a.len()];
    r[0] = 1.0 / a[0];
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|i| a[i] * r[k - i]).sum();
        r[k] = -s / a[0];
    }
    r
}

/// Square root with `r[0] = sqrt(a[0])`; `a[0]` must be positive.
pub fn sqrt(a: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; a.len()];
    r[0] = a[0].sqrt();
    for k in 1..a.len() {
        let s: f64 = (1..k).map(|i| r[i] * r[k - i]).sum();
        r[k] = (a[k] - s) / (2.0 * r[0]);
    }
    r
}

/// Taylor coefficients of `exp(c t)`.
pub fn exp_linear(c: f64, n: usize) -> Vec<f64> {
    let mut r = vec![1.0; n];
    for k in 1..n {
        r[k] = r[k - 1] * c / k as f64;
    }
    r
}

/// Taylor coefficients of `sinh(s t) / (s t)`.
pub fn sinhc(s: f64, n: usize) -> Vec<f64> {
    let mut r = vec![0.0; n];
    let mut term = 1.0;
    for k in (0..n).step_by(2) {
        r[k] = term;
        term *= s * s / ((k + 2) * (k + 3)) as f64;
    }
    r
}
