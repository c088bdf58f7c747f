use rug::Float;
use serde::Serialize;

use super::bounded::{unit, up, BoundedFloat};
use super::zeta::hurwitz_zeta_float;
use super::{check_tol, precision_bits, require_tol, Result, SpecialFnError};

const THRESHOLD_GAP: f64 = 1e-6;

fn check_phi_args(r: f64, q: f64) -> Result<()> {
    if !(r.is_finite() && q.is_finite()) {
        return Err(SpecialFnError::Domain(format!("non-finite input r = {r}, q = {q}")));
    }
    if !(r + 1.0 - q > 0.0) {
        return Err(SpecialFnError::Domain(format!("need r + 1 - q > 0, got r = {r}, q = {q}")));
    }
    Ok(())
}

/// `r + 1 - q` in working precision and its rounding radius.
fn shifted_arg(r: f64, q: f64) -> (Float, f64) {
    let prec = precision_bits();
    let mut a = Float::with_val(prec + 64, r);
    a += 1u32;
    a -= q;
    let a = Float::with_val(prec, a);
    let rad = a.to_f64().abs() * unit(prec);
    (a, rad)
}

/// Φ(r,q) together with the independent direct-series evaluation used to
/// cross-check it.
#[derive(Clone, Debug, Serialize)]
pub struct PhiEvaluation {
    pub value: BoundedFloat,
    pub direct: BoundedFloat,
    pub direct_terms: u64,
}

/// `Φ(r,q) = 2r ψ'(r+1-q) + r² ψ''(r+1-q) = sum_{j>=1} 2r(j-q)/(r+j-q)³`.
///
/// Evaluated as `2r ζ(2,a) - 2r² ζ(3,a)` with `a = r+1-q`, and checked
/// against a direct partial sum with an integral bracket on its tail.
pub fn phi(r: f64, q: f64, tol: f64) -> Result<BoundedFloat> {
    phi_with_crosscheck(r, q, tol).map(|e| e.value)
}

pub fn phi_with_crosscheck(r: f64, q: f64, tol: f64) -> Result<PhiEvaluation> {
    check_tol(tol)?;
    check_phi_args(r, q)?;
    if (r - q).abs() < THRESHOLD_GAP {
        return Err(SpecialFnError::NearThreshold { r, q });
    }
    let value = require_tol(phi_zeta(r, q), tol)?;
    let n = default_direct_terms(r, q);
    let direct = phi_direct(r, q, n)?;
    let allowed = up(value.radius() + direct.radius());
    let diff = Float::with_val(value.prec(), value.value() - direct.value()).abs().to_f64();
    if diff > allowed {
        return Err(SpecialFnError::CrossCheckFailure {
            a: value.value_f64(),
            b: direct.value_f64(),
            allowed,
        });
    }
    Ok(PhiEvaluation { value, direct, direct_terms: n })
}

fn phi_zeta(r: f64, q: f64) -> BoundedFloat {
    let (a, a_rad) = shifted_arg(r, q);
    let z2 = hurwitz_zeta_float(2, &a);
    let z3 = hurwitz_zeta_float(3, &a);
    let two_r = BoundedFloat::exact(2.0 * r);
    let two_r2 = BoundedFloat::exact(2.0 * r).mul(&BoundedFloat::exact(r));
    let v = two_r.mul(&z2).sub(&two_r2.mul(&z3));
    // dΦ/da = -4r ζ(3,a) + 6r² ζ(4,a), and ζ(s+1,a) <= ζ(s,a)/a
    let af = a.to_f64();
    let z2f = z2.hi();
    let slope = 4.0 * r.abs() * z2f / af + 6.0 * r * r * z2f / (af * af);
    v.widen(up(slope * a_rad))
}

fn default_direct_terms(r: f64, q: f64) -> u64 {
    (4096.0 + 1.5 * r.abs() + q.abs()).ceil() as u64
}

/// Direct partial sum of `sum_{j=1}^{N} 2r(j-q)/(r+j-q)³` in f64, with the
/// tail enclosed between `int_{N+1}^inf f` and `int_N^inf f`.
///
/// The bracket needs the summand to be positive and decreasing beyond `N`,
/// i.e. `N > q` and `r + N - q > 3r/2`.
pub fn phi_direct(r: f64, q: f64, n_terms: u64) -> Result<BoundedFloat> {
    check_phi_args(r, q)?;
    let n = n_terms as f64;
    if !(n > q && r + n - q > 1.5 * r && r > 0.0) {
        return Err(SpecialFnError::Domain(format!(
            "direct Φ series with N = {n_terms} has no monotone tail at r = {r}, q = {q}"
        )));
    }
    let mut sum = 0.0f64;
    let mut abs_sum = 0.0f64;
    for j in 1..=n_terms {
        let x = j as f64 - q;
        let y = r + x;
        let t = 2.0 * r * x / (y * y * y);
        sum += t;
        abs_sum += t.abs();
    }
    let tail_int = |m: f64| {
        let y = r + m - q;
        2.0 * r * (1.0 / y - r / (2.0 * y * y))
    };
    let upper = tail_int(n);
    let lower = tail_int(n + 1.0);
    let mid = 0.5 * (upper + lower);
    let half = 0.5 * (upper - lower).abs();
    let eps = f64::EPSILON;
    let rounding = (abs_sum + upper.abs()) * eps * (n + 16.0);
    let value = Float::with_val(precision_bits(), sum) + mid;
    Ok(BoundedFloat::new(value, up(half + rounding)))
}

/// `Θ(r,q) = r² ψ'(r+1-q)`, whose r-derivative is Φ(r,q).
pub fn theta(r: f64, q: f64, tol: f64) -> Result<BoundedFloat> {
    check_tol(tol)?;
    check_phi_args(r, q)?;
    if r == 0.0 {
        return Ok(BoundedFloat::exact(0.0));
    }
    let (a, a_rad) = shifted_arg(r, q);
    let z2 = hurwitz_zeta_float(2, &a);
    let r2 = BoundedFloat::exact(r).mul(&BoundedFloat::exact(r));
    let v = r2.mul(&z2);
    // |dζ(2,a)/da| = 2ζ(3,a) <= 2ζ(2,a)/a
    let slope = r * r * 2.0 * z2.hi() / a.to_f64();
    require_tol(v.widen(up(slope * a_rad)), tol)
}

/// Θ(r,q) for arguments carried as enclosures, so that combinations such as
/// `Θ(x+q, q)` need not round `x+q` to f64.
pub fn theta_bounded(r: &BoundedFloat, q: &BoundedFloat) -> Result<BoundedFloat> {
    let a = r.add(&BoundedFloat::exact(1.0)).sub(q);
    if !(a.lo() > 0.0) {
        return Err(SpecialFnError::Domain(format!("need r + 1 - q > 0, got a = {a}")));
    }
    let z2 = hurwitz_zeta_float(2, a.value());
    let slope = 2.0 * z2.hi() / a.lo();
    let z2 = z2.widen(up(slope * a.radius()));
    Ok(r.mul(r).mul(&z2))
}

/// Closed-form bounds
/// `(m-1)!/x^m + m!/(2x^{m+1}) < (-1)^{m+1} ψ⁽ᵐ⁾(x) < (m-1)!/x^m + m!/x^{m+1}`.
pub fn polygamma_sandwich(m: u32, x: f64) -> Result<(f64, f64)> {
    if !(m == 1 || m == 2) {
        return Err(SpecialFnError::Domain(format!("sandwich bounds are provided for m = 1, 2; got {m}")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(SpecialFnError::Domain(format!("polygamma_sandwich requires x > 0, got {x}")));
    }
    // (m-1)! = 1 and m! = m for m in {1, 2}
    let lead = 1.0 / x.powi(m as i32);
    let next = m as f64 / x.powi(m as i32 + 1);
    Ok((lead + next / 2.0, lead + next))
}

/// Rational bounds on Φ(r,q) for `r > max(q-1, 0)`:
/// `(r³+(2-3q)r²+(3-5q+2q²)r)/(r+1-q)³ < Φ < (r³+(4-3q)r²+(4-6q+2q²)r)/(r+1-q)³`.
pub fn phi_sandwich(r: f64, q: f64) -> Result<(f64, f64)> {
    if !(r.is_finite() && q.is_finite() && r > (q - 1.0).max(0.0)) {
        return Err(SpecialFnError::Domain(format!("phi_sandwich needs r > max(q-1, 0), got r = {r}, q = {q}")));
    }
    let d = (r + 1.0 - q).powi(3);
    let lower = (r.powi(3) + (2.0 - 3.0 * q) * r * r + (3.0 - 5.0 * q + 2.0 * q * q) * r) / d;
    let upper = (r.powi(3) + (4.0 - 3.0 * q) * r * r + (4.0 - 6.0 * q + 2.0 * q * q) * r) / d;
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sandwich_at_q_zero_matches_simplified_form() {
        let r = 2.5;
        let (lo, hi) = phi_sandwich(r, 0.0).unwrap();
        let d = (r + 1.0f64).powi(3);
        assert!((lo - (r * r * r + 2.0 * r * r + 3.0 * r) / d).abs() < 1e-15);
        assert!((hi - (r * r * r + 4.0 * r * r + 4.0 * r) / d).abs() < 1e-15);
    }

    #[test]
    fn threshold_is_rejected() {
        assert!(matches!(phi(0.5 + 1e-8, 0.5, 1e-12), Err(SpecialFnError::NearThreshold { .. })));
        assert!(matches!(phi(-2.0, 0.0, 1e-12), Err(SpecialFnError::Domain(_))));
    }

    #[test]
    fn theta_vanishes_at_zero() {
        assert_eq!(theta(0.0, 0.3, 1e-12).unwrap().value_f64(), 0.0);
    }
}
