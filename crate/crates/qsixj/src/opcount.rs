//! Global arithmetic-operation counter used by the scaling benchmarks.
//!
//! Hot paths call [`add`] with a small constant per elementary step
//! (quantum-integer evaluation, one summand of the explicit formula, one
//! recurrence step). The counter is a relaxed atomic so instrumented code
//! stays cheap; callers that want a clean measurement should run the
//! instrumented section on a single thread between [`reset`] and [`total`].

use std::sync::atomic::{AtomicU64, Ordering};

static OPS: AtomicU64 = AtomicU64::new(0);

#[inline]
pub fn add(n: u64) {
    OPS.fetch_add(n, Ordering::Relaxed);
}

pub fn reset() {
    OPS.store(0, Ordering::Relaxed);
}

pub fn total() -> u64 {
    OPS.load(Ordering::Relaxed)
}

/// Least-squares slope of ln(ops) against ln(n); the measured scaling exponent.
pub fn fit_exponent(sizes: &[f64], ops: &[f64]) -> f64 {
    assert_eq!(sizes.len(), ops.len());
    let n = sizes.len() as f64;
    let xs: Vec<f64> = sizes.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = ops.iter().map(|o| o.ln()).collect();
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
