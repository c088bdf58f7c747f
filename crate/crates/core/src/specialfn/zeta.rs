use rug::{Float, Integer};

use super::bernoulli::{bernoulli_float, MAX_INDEX};
use super::bounded::{abs_up, unit, up, BoundedFloat};
use super::{check_tol, precision_bits, require_tol, Result, SpecialFnError};

/// Arguments below this are shifted up by the recurrence before the
/// asymptotic tail is applied.
pub(crate) fn shift_target(prec: u32) -> f64 {
    (0.4 * prec as f64).max(16.0)
}

fn positive_arg(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(SpecialFnError::Domain(format!("{what} requires a positive argument, got {x}")))
    }
}

/// Hurwitz zeta `sum_{j>=0} (a+j)^(-s)` for integer `s >= 2` and `a > 0`.
///
/// A finite head is summed directly and the tail is replaced by its
/// Euler–Maclaurin expansion. Since `x^(-s)` is completely monotone, the
/// expansion remainder is bounded by the first omitted term.
pub fn hurwitz_zeta(s: u32, a: f64) -> Result<BoundedFloat> {
    positive_arg(a, "hurwitz_zeta")?;
    if s < 2 {
        return Err(SpecialFnError::Domain(format!("hurwitz_zeta needs s >= 2, got {s}")));
    }
    Ok(hurwitz_zeta_float(s, &Float::with_val(precision_bits(), a)))
}

pub(crate) fn hurwitz_zeta_float(s: u32, a: &Float) -> BoundedFloat {
    let prec = a.prec().max(precision_bits());
    let u = unit(prec);
    let target = shift_target(prec);
    let a_f = a.to_f64();
    let n_shift = if a_f < target { (target - a_f).ceil() as u64 } else { 0 };

    let mut head = Float::new(prec);
    let mut abs_sum = 0.0f64;
    let mut x = Float::with_val(prec, a);
    for _ in 0..n_shift {
        let t = Float::with_val(prec, rug::ops::Pow::pow(&x, s)).recip();
        abs_sum += abs_up(&t);
        head += &t;
        x += 1u32;
    }
    let b = x;
    let b_inv = Float::with_val(prec, b.recip_ref());
    let b_pow_s = Float::with_val(prec, rug::ops::Pow::pow(&b_inv, s));

    let mut tail = Float::with_val(prec, &b_pow_s * &b) / (s - 1);
    tail += Float::with_val(prec, &b_pow_s / 2u32);
    abs_sum += abs_up(&tail) * 2.0;

    let total_guess = Float::with_val(prec, &head + &tail).to_f64().abs();
    let stop = total_guess * u / 64.0;
    let b_inv2 = Float::with_val(prec, b_inv.square_ref());
    // c = (s)_{2k-1} / (2k)! * b^(1-2k), starting at k = 1
    let mut c = Float::with_val(prec, s) * &b_inv / 2u32;
    let mut k = 1usize;
    let mut n_terms = 0usize;
    let remainder = loop {
        let term = Float::with_val(prec, &c * &b_pow_s) * bernoulli_float(2 * k, prec);
        let mag = abs_up(&term);
        if mag <= stop || 2 * k + 2 > MAX_INDEX {
            break mag;
        }
        tail += &term;
        abs_sum += mag;
        n_terms += 1;
        let kk = 2 * k as u64;
        c *= (s as u64 + kk - 1) * (s as u64 + kk);
        c /= (kk + 1) * (kk + 2);
        c *= &b_inv2;
        k += 1;
    };

    let value = Float::with_val(prec, &head + &tail);
    let rounding = abs_sum * u * (n_shift as f64 + n_terms as f64 + 16.0);
    BoundedFloat::new(value, up(rounding + remainder))
}

/// Direct partial sum with `n_terms` terms plus the midpoint of the integral
/// bracket `int_N^inf f <= tail <= f(N) + int_N^inf f`.
pub fn hurwitz_zeta_direct(s: u32, a: f64, n_terms: u64) -> Result<BoundedFloat> {
    positive_arg(a, "hurwitz_zeta_direct")?;
    if s < 2 || n_terms == 0 {
        return Err(SpecialFnError::Domain("direct series needs s >= 2 and at least one term".into()));
    }
    let prec = precision_bits();
    let u = unit(prec);
    let mut sum = Float::new(prec);
    let mut abs_sum = 0.0;
    let mut x = Float::with_val(prec, a);
    for _ in 0..n_terms {
        let t = Float::with_val(prec, rug::ops::Pow::pow(&x, s)).recip();
        abs_sum += abs_up(&t);
        sum += t;
        x += 1u32;
    }
    let f_n = Float::with_val(prec, rug::ops::Pow::pow(&x, s)).recip();
    let integral = Float::with_val(prec, &f_n * &x) / (s - 1);
    let half = Float::with_val(prec, &f_n / 2u32);
    sum += integral;
    sum += &half;
    let rounding = (abs_sum + abs_up(&sum)) * u * (n_terms as f64 + 8.0);
    Ok(BoundedFloat::new(sum, up(abs_up(&half) + rounding)))
}

fn factorial_f(m: u32, prec: u32) -> Float {
    Float::with_val(prec, Integer::from(Integer::factorial(m)))
}

/// ψ⁽ᵐ⁾(x). Order 0 is the digamma function.
pub fn polygamma(m: u32, x: f64, tol: f64) -> Result<BoundedFloat> {
    check_tol(tol)?;
    positive_arg(x, "polygamma")?;
    let v = if m == 0 {
        digamma_float(&Float::with_val(precision_bits(), x))
    } else {
        polygamma_float(m, &Float::with_val(precision_bits(), x))
    };
    require_tol(v, tol)
}

pub(crate) fn polygamma_float(m: u32, x: &Float) -> BoundedFloat {
    assert!(m >= 1);
    let z = hurwitz_zeta_float(m + 1, x);
    let mut scale = factorial_f(m, z.prec());
    if m % 2 == 0 {
        scale = -scale;
    }
    z.mul(&BoundedFloat::exact_float(scale))
}

/// ψ⁽ᵐ⁾(x) for `m >= 1` by the defining series truncated after `n_terms`.
pub fn polygamma_direct(m: u32, x: f64, n_terms: u64) -> Result<BoundedFloat> {
    if m == 0 {
        return Err(SpecialFnError::Domain("the direct series needs m >= 1".into()));
    }
    let z = hurwitz_zeta_direct(m + 1, x, n_terms)?;
    let mut scale = factorial_f(m, z.prec());
    if m % 2 == 0 {
        scale = -scale;
    }
    Ok(z.mul(&BoundedFloat::exact_float(scale)))
}

pub fn digamma(x: f64, tol: f64) -> Result<BoundedFloat> {
    polygamma(0, x, tol)
}

/// Recurrence `ψ(x) = ψ(x+N) - sum 1/(x+j)`, then the asymptotic series
/// `ln y - 1/(2y) - sum B_2k / (2k y^2k)`, which envelopes ψ for `y > 0`.
pub(crate) fn digamma_float(x: &Float) -> BoundedFloat {
    let prec = x.prec().max(precision_bits());
    let u = unit(prec);
    let target = shift_target(prec);
    let x_f = x.to_f64();
    let n_shift = if x_f < target { (target - x_f).ceil() as u64 } else { 0 };

    let mut acc = Float::new(prec);
    let mut abs_sum = 0.0;
    let mut y = Float::with_val(prec, x);
    for _ in 0..n_shift {
        let t = Float::with_val(prec, y.recip_ref());
        abs_sum += abs_up(&t);
        acc -= t;
        y += 1u32;
    }
    let ln_y = Float::with_val(prec, y.ln_ref());
    let y_inv = Float::with_val(prec, y.recip_ref());
    let y_inv2 = Float::with_val(prec, y_inv.square_ref());
    acc += &ln_y;
    acc -= Float::with_val(prec, &y_inv / 2u32);
    abs_sum += abs_up(&ln_y) + abs_up(&y_inv);

    let stop = (abs_up(&acc) + 1.0) * u / 64.0;
    let mut ypow = y_inv2.clone();
    let mut n_terms = 0usize;
    let mut k = 1usize;
    let remainder = loop {
        let term = Float::with_val(prec, &ypow * bernoulli_float(2 * k, prec)) / (2 * k as u32);
        let mag = abs_up(&term);
        if mag <= stop || 2 * k + 2 > MAX_INDEX {
            break mag;
        }
        acc -= &term;
        abs_sum += mag;
        n_terms += 1;
        ypow *= &y_inv2;
        k += 1;
    };
    let rounding = abs_sum * u * (n_shift as f64 + n_terms as f64 + 16.0);
    BoundedFloat::new(acc, up(rounding + remainder))
}
