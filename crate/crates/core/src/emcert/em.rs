//! First-order Euler–Maclaurin summation,
//! `Σ_{j=m+1}^n f(j) = ∫_m^n f + (f(n) − f(m))/2 + ∫_m^n f'(x) P_1(x) dx`
//! with `P_1(x) = x − ⌊x⌋ − 1/2`.

use serde::Serialize;

use super::{EmError, Result};
use crate::quad::{integrate, QuadOptions};

/// Caller-supplied data for `n = ∞`.
pub struct TailBounds<'a> {
    /// `∫_m^∞ f`.
    pub integral: f64,
    /// `lim_{x→∞} f(x)`.
    pub limit: f64,
    /// A bound on `|∫_N^∞ f'(x) P_1(x) dx|` for integers `N ≥ m`.
    pub bernoulli_tail: &'a dyn Fn(i64) -> f64,
}

pub enum Upper<'a> {
    Finite(i64),
    Infinite(Option<TailBounds<'a>>),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EmDecomposition {
    pub integral: f64,
    /// `(f(n) − f(m)) / 2`.
    pub boundary: f64,
    pub bernoulli: f64,
    /// Quadrature error estimates plus the caller's tail bound.
    pub error_bound: f64,
    /// Last unit interval integrated explicitly when `n = ∞`.
    pub cutoff: Option<i64>,
}

impl EmDecomposition {
    pub fn total(&self) -> f64 {
        self.integral + self.boundary + self.bernoulli
    }
}

const MAX_CUTOFF: i64 = 1 << 22;

/// Unit-interval pieces of the Bernoulli integral over `[m, n]`.
fn bernoulli_sum(f_prime: &dyn Fn(f64) -> f64, m: i64, n: i64, tol: f64) -> (f64, f64) {
    let count = (n - m).max(1) as f64;
    let opts = QuadOptions { abs_tol: tol / (4.0 * count), rel_tol: 1e-14, max_intervals: 200 };
    let mut sum = 0.0;
    let mut err = 0.0;
    for k in m..n {
        let base = k as f64;
        let q = integrate(|s| f_prime(base + s) * (s - 0.5), 0.0, 1.0, opts);
        sum += q.value;
        err += q.error_estimate;
    }
    (sum, err)
}

/// The three terms of the first-order formula for `Σ_{j=m+1}^n f(j)`.
pub fn em_first_order(
    f: &dyn Fn(f64) -> f64,
    f_prime: &dyn Fn(f64) -> f64,
    m: i64,
    n: Upper<'_>,
    tol: f64,
) -> Result<EmDecomposition> {
    if !(tol > 0.0) {
        return Err(EmError::Domain(format!("tolerance {tol} must be positive")));
    }
    match n {
        Upper::Finite(n) => {
            if n < m {
                return Err(EmError::Domain(format!("upper limit {n} below lower limit {m}")));
            }
            let opts = QuadOptions { abs_tol: tol / 4.0, rel_tol: 1e-14, max_intervals: 4000 };
            let int = integrate(f, m as f64, n as f64, opts);
            let (bernoulli, err) = bernoulli_sum(f_prime, m, n, tol);
            Ok(EmDecomposition {
                integral: int.value,
                boundary: (f(n as f64) - f(m as f64)) / 2.0,
                bernoulli,
                error_bound: int.error_estimate + err,
                cutoff: None,
            })
        }
        Upper::Infinite(None) => Err(EmError::TailUnbounded),
        Upper::Infinite(Some(tail)) => {
            let mut cutoff = m + 1;
            while (tail.bernoulli_tail)(cutoff) > tol / 2.0 {
                if cutoff - m > MAX_CUTOFF {
                    return Err(EmError::ToleranceUnreachable { tol, cutoff });
                }
                cutoff = m + 2 * (cutoff - m);
            }
            let tail_bound = (tail.bernoulli_tail)(cutoff);
            let (bernoulli, err) = bernoulli_sum(f_prime, m, cutoff, tol / 2.0);
            Ok(EmDecomposition {
                integral: tail.integral,
                boundary: (tail.limit - f(m as f64)) / 2.0,
                bernoulli,
                error_bound: err + tail_bound,
                cutoff: Some(cutoff),
            })
        }
    }
}
