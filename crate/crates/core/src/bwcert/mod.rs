//! Integral-representation kernels for Θ and the complete-monotonicity
//! evidence built on them.
//!
//! `M(t,q) = g0(t) - g1(t) q + g2(t) q²` is the numerator of the Laplace
//! kernel of `F_q(x) = Θ(x+q, q) - x - 2q + 1/2`. Every function here is
//! evaluated in one of two forms: power series in `t` below [`SERIES_CUTOFF`]
//! (all of `g0`, `g1`, `g2` vanish to third order at 0, so the naive formulas
//! cancel badly) and `e^{-t}`-scaled forms above it.

mod cm;

pub use cm::{
    bw_suite, cm_numeric_certificate, f_q, f_q_with_crosscheck, kernel_certificate,
    phi_below_one_certificate, refutation_certificate, FqEvaluation, DEFAULT_CM_GRID,
    DEFAULT_CM_ORDERS, DEFAULT_PHI_QS,
};

use rug::Float;
use serde::Serialize;

use crate::specialfn::SpecialFnError;

pub const SERIES_CUTOFF: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BwError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("F_q({x}) with q = {q}: Θ route {theta} and quadrature {quadrature} differ by more than {allowed:e}")]
    CrossCheckFailure { x: f64, q: f64, theta: f64, quadrature: f64, allowed: f64 },
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

pub type Result<T> = std::result::Result<T, BwError>;

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(BwError::Domain(format!("kernel functions need t > 0, got {t}")))
    }
}

/// `sum_{n >= start} c(n) t^n / n!`, stopped once terms drop below f64 resolution.
fn exp_series(t: f64, start: u32, c: impl Fn(u32) -> f64) -> f64 {
    let mut term = 1.0;
    for n in 1..=start {
        term *= t / n as f64;
    }
    let mut n = start;
    let mut sum = 0.0;
    loop {
        sum += c(n) * term;
        if term * (n as f64 + 1.0) <= 1e-18 * sum.abs() {
            return sum;
        }
        n += 1;
        term *= t / n as f64;
    }
}

/// The pieces every kernel is assembled from, in the form that is accurate
/// for the given t.
#[derive(Clone, Copy, Debug)]
enum Parts {
    /// Unscaled: `em1 = e^t - 1`, `h0`, `h1`, `ch = cosh t - 1 - t²/2`.
    Small { t: f64, em1: f64, h0: f64, h1: f64, ch: f64 },
    /// Scaled by `e^{-t}`: `a = 1 - e^{-t}`, `h0s = h0 e^{-t}`, `h1s = h1 e^{-t}`,
    /// `ds = (e^t-1)² e^{-2t} - t² e^{-t}`.
    Large { t: f64, u: f64, a: f64, h0s: f64, h1s: f64, ds: f64 },
}

impl Parts {
    fn at(t: f64) -> Self {
        if t < SERIES_CUTOFF {
            Parts::Small {
                t,
                em1: t.exp_m1(),
                h0: exp_series(t, 3, |n| n as f64 - 2.0),
                h1: exp_series(t, 2, |n| n as f64 - 1.0),
                ch: exp_series(t, 4, |n| if n % 2 == 0 { 1.0 } else { 0.0 }),
            }
        } else {
            let u = (-t).exp();
            let a = -(-t).exp_m1();
            Parts::Large {
                t,
                u,
                a,
                h0s: (t - 2.0) + (t + 2.0) * u,
                h1s: (t - 1.0) + u,
                ds: a * a - t * t * u,
            }
        }
    }
}

/// `h0(t) = 2 - 2e^t + t + te^t`, which is also `E(t) = (t-2)e^t + t + 2`.
pub fn h0(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { h0, .. } => h0,
        Parts::Large { t, h0s, .. } => h0s * t.exp(),
    })
}

pub fn e_fn(t: f64) -> Result<f64> {
    h0(t)
}

/// `h1(t) = 1 - e^t + te^t`.
pub fn h1(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { h1, .. } => h1,
        Parts::Large { t, h1s, .. } => h1s * t.exp(),
    })
}

/// `g0(t) = e^t (2 - 2e^t + t + te^t)`.
pub fn g0(t: f64) -> Result<f64> {
    Ok(t.exp() * h0(t)?)
}

/// `g1(t) = 2(e^t - 1)(1 - e^t + te^t)`.
pub fn g1(t: f64) -> Result<f64> {
    Ok(2.0 * t.exp_m1() * h1(t)?)
}

/// `g2(t) = t (e^t - 1)²`.
pub fn g2(t: f64) -> Result<f64> {
    check_t(t)?;
    let e = t.exp_m1();
    Ok(t * e * e)
}

/// `1 - 2e^t + e^{2t} - t² e^t = 2e^t (cosh t - 1 - t²/2)`.
pub fn radicand(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { t, ch, .. } => 2.0 * t.exp() * ch,
        Parts::Large { t, ds, .. } => ds * (2.0 * t).exp(),
    })
}

/// `cosh t - 1 - t²/2`, positive for `t > 0`.
pub fn cosh_remainder(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { ch, .. } => ch,
        Parts::Large { t, .. } => t.cosh() - 1.0 - t * t / 2.0,
    })
}

/// Discriminant of `M(t, ·)` in the factored form `4(e^t-1)² (1 - 2e^t + e^{2t} - t²e^t)`.
pub fn discriminant(t: f64) -> Result<f64> {
    let e = t.exp_m1();
    Ok(4.0 * e * e * radicand(t)?)
}

/// The same discriminant as `g1² - 4 g0 g2`.
pub fn discriminant_from_g(t: f64) -> Result<f64> {
    let (a, b, c) = (g0(t)?, g1(t)?, g2(t)?);
    Ok(b * b - 4.0 * a * c)
}

/// `M(t,q) = g0(t) - g1(t) q + g2(t) q²`.
pub fn m_kernel(t: f64, q: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { t, em1, h0, h1, .. } => {
            t.exp() * h0 - 2.0 * q * em1 * h1 + q * q * t * em1 * em1
        }
        Parts::Large { t, u, .. } => (2.0 * t).exp() * scaled_m(t, u, q),
    })
}

/// `M(t,q) e^{-2t}` as a polynomial in `u = e^{-t}`. Collecting powers of u
/// first keeps e.g. `M(t,1) = E(t)` free of cancellation at large t.
fn scaled_m(t: f64, u: f64, q: f64) -> f64 {
    let p = 1.0 - q;
    let c0 = p * (t * p - 2.0);
    let c1 = (t + 2.0) - q * (4.0 - 2.0 * t) - 2.0 * t * q * q;
    let c2 = q * (2.0 + t * q);
    c0 + u * (c1 + u * c2)
}

/// `M(t,q)` from the unsimplified definition in MPFR at the precision of `t`.
pub fn m_kernel_float(t: &Float, q: &Float) -> Float {
    let p = t.prec();
    let e = Float::with_val(p, t.exp_ref());
    let em1 = Float::with_val(p, &e - 1u32);
    let te = Float::with_val(p, t * &e);
    let g0 = Float::with_val(p, &e * (Float::with_val(p, 2u32 - Float::with_val(p, &e * 2u32)) + t + &te));
    let g1 = Float::with_val(p, &em1 * 2u32) * (Float::with_val(p, 1u32 - &e) + &te);
    let g2 = Float::with_val(p, t * Float::with_val(p, em1.square_ref()));
    g0 - g1 * q + g2 * Float::with_val(p, q.square_ref())
}

/// Leading coefficients of `M(t,q) = c3 t³ + c4 t⁴ + O(t⁵)`.
pub fn m_small_t_coefficients(q: f64) -> (f64, f64) {
    (q * q - q + 1.0 / 6.0, q * q - 7.0 * q / 6.0 + 0.25)
}

/// `M(t,q) / (e^t - 1)³`, the Laplace kernel of `F_q`. Finite as `t → 0`.
pub fn kernel(t: f64, q: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { t, em1, h0, h1, .. } => {
            t.exp() * h0 / (em1 * em1 * em1) - 2.0 * q * h1 / (em1 * em1) + q * q * t / em1
        }
        Parts::Large { t, u, a, .. } => u * scaled_m(t, u, q) / (a * a * a),
    })
}

/// The roots `s1(t) > s2(t)` of `q ↦ M(t,q)`.
///
/// `s2` is taken from `s1 s2 = g0/g2`, which avoids subtracting the
/// square root.
pub fn quadratic_roots(t: f64) -> Result<(f64, f64)> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { t, em1, h0, h1, ch } => {
            let sq = (2.0 * t.exp() * ch).sqrt();
            let s1 = (h1 + sq) / (t * em1);
            let s2 = t.exp() * h0 / (em1 * (h1 + sq));
            (s1, s2)
        }
        Parts::Large { t, a, h0s, h1s, ds, .. } => {
            let sq = ds.sqrt();
            ((h1s + sq) / (t * a), h0s / (a * (h1s + sq)))
        }
    })
}

/// `1 - s1(t) = E(t) / ((e^t-1)(e^t-1-t+sqrt(1-2e^t+e^{2t}-t²e^t)))`.
pub fn one_minus_s1(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match Parts::at(t) {
        Parts::Small { t, em1, h0, ch, .. } => {
            let sq = (2.0 * t.exp() * ch).sqrt();
            let em1_minus_t = exp_series(t, 2, |_| 1.0);
            h0 / (em1 * (em1_minus_t + sq))
        }
        Parts::Large { t, u, a, h0s, ds, .. } => h0s * u / (a * (a - t * u + ds.sqrt())),
    })
}

/// `lim_{t→0} s2(t) = (3 - √3)/6`.
pub fn s2_limit_at_zero() -> f64 {
    (3.0 - 3f64.sqrt()) / 6.0
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KernelFunctions {
    pub t: f64,
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub h0: f64,
    pub h1: f64,
}

impl KernelFunctions {
    pub fn at(t: f64) -> Result<Self> {
        Ok(Self { t, g0: g0(t)?, g1: g1(t)?, g2: g2(t)?, h0: h0(t)?, h1: h1(t)? })
    }

    pub fn m(&self, q: f64) -> f64 {
        self.g0 - self.g1 * q + self.g2 * q * q
    }
}

/// `M(t,·)` at a fixed t as a quadratic in q.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadraticInQ {
    pub kernels: KernelFunctions,
    pub discriminant: f64,
    pub s1: f64,
    pub s2: f64,
}

impl QuadraticInQ {
    pub fn at(t: f64) -> Result<Self> {
        let (s1, s2) = quadratic_roots(t)?;
        Ok(Self { kernels: KernelFunctions::at(t)?, discriminant: discriminant(t)?, s1, s2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_closed_forms_meet_at_cutoff() {
        let below = SERIES_CUTOFF * (1.0 - 1e-12);
        let above = SERIES_CUTOFF;
        for f in [h0, h1, radicand, one_minus_s1] {
            let (a, b) = (f(below).unwrap(), f(above).unwrap());
            assert!(((a - b) / b).abs() < 1e-10);
        }
        let (a, b) = (kernel(below, 0.4).unwrap(), kernel(above, 0.4).unwrap());
        assert!(((a - b) / b).abs() < 1e-10);
    }

    #[test]
    fn rejects_nonpositive_t() {
        assert!(g0(0.0).is_err());
        assert!(m_kernel(-1.0, 0.5).is_err());
        assert!(quadratic_roots(f64::NAN).is_err());
    }
}
