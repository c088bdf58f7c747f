//! Γ, log Γ, ψ and ψ⁽ᵐ⁾ on the positive axis, and the composite functions
//! Φ(r,q), Θ(r,q), each returned with an absolute error radius.
//!
//! Values are carried in MPFR floats at [`precision_bits`] bits. Truncation
//! errors come from enveloping asymptotic series whose remainder is bounded
//! by the first omitted term; rounding errors are accumulated explicitly.

mod bernoulli;
mod bounded;
mod composite;
mod gamma;
mod zeta;

use std::sync::OnceLock;

pub use bernoulli::{bernoulli, bernoulli_float};
pub use bounded::BoundedFloat;
pub(crate) use bounded::{unit, up};
pub use composite::{
    phi, phi_direct, phi_sandwich, phi_with_crosscheck, polygamma_sandwich, theta, theta_bounded, PhiEvaluation,
};
pub use gamma::{gamma, ln_gamma, ln_gamma_bounded};
pub use zeta::{digamma, hurwitz_zeta, hurwitz_zeta_direct, polygamma, polygamma_direct};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MIN_PRECISION_BITS: u32 = 80;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Working precision. `LERAYKIT_PRECISION_BITS` overrides the default; values
/// below the 80-bit floor are raised to it. Read once per process.
pub fn precision_bits() -> u32 {
    static BITS: OnceLock<u32> = OnceLock::new();
    *BITS.get_or_init(|| {
        std::env::var("LERAYKIT_PRECISION_BITS")
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(|b| b.clamp(MIN_PRECISION_BITS, 1024))
            .unwrap_or(DEFAULT_PRECISION_BITS)
    })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialFnError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("tolerance {tol:e} unreachable; best radius at this precision is {achieved:e}")]
    ToleranceUnreachable { tol: f64, achieved: f64 },
    #[error("independent evaluations disagree: {a} vs {b} (allowed {allowed:e})")]
    CrossCheckFailure { a: f64, b: f64, allowed: f64 },
    #[error("r = {r} is within 1e-6 of q = {q}; refusing to extrapolate")]
    NearThreshold { r: f64, q: f64 },
}

pub type Result<T> = std::result::Result<T, SpecialFnError>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(SpecialFnError::Domain(format!("tolerance must be positive, got {tol}")))
    }
}

pub(crate) fn require_tol(v: BoundedFloat, tol: f64) -> Result<BoundedFloat> {
    if v.radius() <= tol {
        Ok(v)
    } else {
        Err(SpecialFnError::ToleranceUnreachable { tol, achieved: v.radius() })
    }
}
