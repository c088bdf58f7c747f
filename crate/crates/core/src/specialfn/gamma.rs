use rug::Float;

use super::bernoulli::{bernoulli_float, MAX_INDEX};
use super::bounded::{abs_up, unit, up, BoundedFloat};
use super::zeta::shift_target;
use super::{check_tol, precision_bits, require_tol, Result, SpecialFnError};

/// log Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64, tol: f64) -> Result<BoundedFloat> {
    check_tol(tol)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(SpecialFnError::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    require_tol(ln_gamma_float(&Float::with_val(precision_bits(), x)), tol)
}

/// Γ(x) for `x > 0`.
pub fn gamma(x: f64, tol: f64) -> Result<BoundedFloat> {
    check_tol(tol)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(SpecialFnError::Domain(format!("gamma requires x > 0, got {x}")));
    }
    require_tol(ln_gamma_float(&Float::with_val(precision_bits(), x)).exp(), tol)
}

/// log Γ over an interval argument. The extra radius uses
/// `|ψ(t)| <= |ln t| + 1/t` on the interval.
pub fn ln_gamma_bounded(a: &BoundedFloat) -> Result<BoundedFloat> {
    let lo = a.lo();
    if !(lo > 0.0) {
        return Err(SpecialFnError::Domain(format!("ln_gamma needs a positive interval, got {a}")));
    }
    let center = ln_gamma_float(a.value());
    if a.radius() == 0.0 {
        return Ok(center);
    }
    let hi = a.hi();
    let slope = lo.ln().abs().max(hi.ln().abs()) + 1.0 / lo;
    Ok(center.widen(up(slope) * a.radius()))
}

/// Stirling series after shifting the argument above [`shift_target`];
/// for positive arguments the series envelopes log Γ.
pub(crate) fn ln_gamma_float(x: &Float) -> BoundedFloat {
    let prec = x.prec().max(precision_bits());
    let u = unit(prec);
    let target = shift_target(prec);
    let x_f = x.to_f64();
    let n_shift = if x_f < target { (target - x_f).ceil() as u64 } else { 0 };

    let mut y = Float::with_val(prec, x);
    let mut prod = Float::with_val(prec, 1u32);
    for _ in 0..n_shift {
        prod *= &y;
        y += 1u32;
    }
    let ln_y = Float::with_val(prec, y.ln_ref());
    let half_ln_2pi = {
        let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
        two_pi.ln() / 2u32
    };
    let y_minus_half = Float::with_val(prec, &y - 0.5f64);
    let lead = Float::with_val(prec, &y_minus_half * &ln_y);
    let mut acc = Float::with_val(prec, &lead - &y);
    acc += &half_ln_2pi;
    let mut abs_sum = abs_up(&lead) + abs_up(&y) + 1.0;
    if n_shift > 0 {
        let ln_prod = prod.ln();
        abs_sum += abs_up(&ln_prod) + n_shift as f64;
        acc -= ln_prod;
    }

    let y_inv = Float::with_val(prec, y.recip_ref());
    let y_inv2 = Float::with_val(prec, y_inv.square_ref());
    let stop = (abs_up(&acc) + 1.0) * u / 64.0;
    let mut ypow = y_inv;
    let mut n_terms = 0usize;
    let mut k = 1usize;
    let remainder = loop {
        let denom = (2 * k * (2 * k - 1)) as u32;
        let term = Float::with_val(prec, &ypow * bernoulli_float(2 * k, prec)) / denom;
        let mag = abs_up(&term);
        if mag <= stop || 2 * k + 2 > MAX_INDEX {
            break mag;
        }
        acc += &term;
        abs_sum += mag;
        n_terms += 1;
        ypow *= &y_inv2;
        k += 1;
    };
    let rounding = abs_sum * u * (n_shift as f64 + n_terms as f64 + 16.0);
    BoundedFloat::new(acc, up(rounding + remainder))
}
