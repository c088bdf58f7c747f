//! Euler–Maclaurin analysis of `Φ(r, 2/3)`: the summand `f_r`, the
//! Bernoulli remainder terms `S(r, N)`, the critical point `Q_r` of `S` and
//! its rational bracket, the lower bound `H(r)` and the Appendix polynomial
//! `P(r)`, each with a certificate.
//!
//! Exact certificates live in [`exact`]; grid and quadrature checks in
//! [`numeric`].

mod em;
pub mod exact;
pub mod numeric;
pub mod tables;

use rug::ops::Pow;
use rug::Float;

use crate::certificate::Certificate;
use crate::exactpoly::{int, ratio, BigRational, BivariatePolynomial, Poly};
use crate::specialfn::SpecialFnError;

pub use em::{em_first_order, EmDecomposition, TailBounds, Upper};
pub use exact::{bracket_certificates, h_pipeline, identity_certificate, s_bound_certificate};
pub use numeric::{
    h_numeric_certificate, integral_certificate, phi_two_thirds_direct, q_root_certificate,
    reconstruction_certificate, s_series_two_thirds,
};

/// The `1/r` coefficient of the bracket `m(r) < Q_r < Mu(r)`.
///
/// The closed-form evaluations `p_r(m(r))` and `p_r(Mu(r))` hold with `3/25`;
/// [`bracket_certificates`] records that `2/25` does not satisfy them.
pub fn bracket_coefficient() -> BigRational {
    ratio(3, 25)
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum EmError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("a sum to infinity needs tail bounds")]
    TailUnbounded,
    #[error("tail bound stays above {tol:e} up to N = {cutoff}")]
    ToleranceUnreachable { tol: f64, cutoff: i64 },
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

pub type Result<T> = std::result::Result<T, EmError>;

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 2.0 / 3.0 {
        Ok(())
    } else {
        Err(EmError::Domain(format!("r = {r} must exceed 2/3")))
    }
}

fn check_rx(r: f64, x: f64) -> Result<()> {
    check_r(r)?;
    if x.is_nan() || x < 0.0 {
        return Err(EmError::Domain(format!("x = {x} must be non-negative")));
    }
    Ok(())
}

/// `f_r(x) = 18r(3x−2)/(3r+3x−2)^3`, the summand of `Φ(r, 2/3)`.
pub fn f_r(r: f64, x: f64) -> Result<f64> {
    check_rx(r, x)?;
    Ok(18.0 * r * (3.0 * x - 2.0) / (3.0 * r + 3.0 * x - 2.0).powi(3))
}

pub fn f_r_prime(r: f64, x: f64) -> Result<f64> {
    check_rx(r, x)?;
    Ok(54.0 * r * (4.0 + 3.0 * r - 6.0 * x) / (3.0 * r + 3.0 * x - 2.0).powi(4))
}

/// `∫_a^∞ f_r(x) dx`.
pub fn f_r_tail_integral(r: f64, a: f64) -> Result<f64> {
    check_rx(r, a)?;
    let y = 3.0 * r + 3.0 * a - 2.0;
    Ok(6.0 * r * (1.0 / y - 1.5 * r / (y * y)))
}

/// `S(r, x) = 81r(9x²−3x−9r²−2) / ((3r+3x+1)^3 (3r+3x−2)^3)`, the integral of
/// `f_r'` against the first periodic Bernoulli function over `[x, x+1]`.
pub fn s_function(r: f64, x: f64) -> Result<f64> {
    check_rx(r, x)?;
    let a = 3.0 * r + 3.0 * x + 1.0;
    let b = 3.0 * r + 3.0 * x - 2.0;
    Ok(81.0 * r * (9.0 * x * x - 3.0 * x - 9.0 * r * r - 2.0) / (a * b).powi(3))
}

/// [`s_function`] in MPFR at the precision of `r`. No domain check.
pub fn s_function_float(r: &Float, x: &Float) -> Float {
    let p = r.prec().max(x.prec());
    let s = Float::with_val(p, r + x) * 3u32;
    let a = Float::with_val(p, &s + 1u32);
    let b = Float::with_val(p, &s - 2u32);
    let x2 = Float::with_val(p, x * x);
    let r2 = Float::with_val(p, r * r);
    let num = Float::with_val(p, (x2 - r2) * 9u32) - Float::with_val(p, x * 3u32) - 2u32;
    let den = Float::with_val(p, a * b).pow(3u32);
    Float::with_val(p, r * num) * 81u32 / den
}

/// Closed form of `∫_2^∞ S(r, x) dx`.
pub fn s_integral_from_two(r: f64) -> Result<f64> {
    check_r(r)?;
    let a = 3.0 * r + 4.0;
    let b = 3.0 * r + 7.0;
    let poly = ((108.0 * r + 594.0) * r + 1035.0) * r + 616.0;
    Ok(3.0 * r * poly / (2.0 * a * a * b * b) - 2.0 * r * (b / a).ln())
}

/// `p_r(x)`, the cubic with `∂S/∂x = 243 r p_r(x) / ((3r+3x+1)^4 (3r+3x−2)^4)`,
/// as a bivariate polynomial in `(r, x)`.
pub fn pr_bivariate() -> BivariatePolynomial {
    let mut p = BivariatePolynomial::zero();
    for (c, i, j) in [
        (-4, 0, 0),
        (39, 1, 0),
        (-36, 2, 0),
        (162, 3, 0),
        (18, 0, 1),
        (18, 1, 1),
        (216, 2, 1),
        (54, 0, 2),
        (-54, 1, 2),
        (-108, 0, 3),
    ] {
        p.add_term(int(c), i, j);
    }
    p
}

/// `p_r` at a fixed rational `r`, as a polynomial in `x`.
pub fn pr_poly(r: &BigRational) -> Poly {
    let p = pr_bivariate();
    Poly::new((0..=3).map(|k| p.coeff_of_y(k).eval(r)).collect())
}

/// `r^3 m(r)` with `m(r) = 3r/2 + 1/6 + c/r − 21/(3125 r^3)`.
pub fn m_bound_numerator(c: &BigRational) -> Poly {
    Poly::new(vec![ratio(-21, 3125), int(0), c.clone(), ratio(1, 6), ratio(3, 2)])
}

/// `r Mu(r)` with `Mu(r) = 3r/2 + 1/6 + c/r`.
pub fn mu_bound_numerator(c: &BigRational) -> Poly {
    Poly::new(vec![c.clone(), ratio(1, 6), ratio(3, 2)])
}

pub fn m_bound_exact(r: &BigRational) -> BigRational {
    let r3 = BigRational::from(r * r) * r;
    m_bound_numerator(&bracket_coefficient()).eval(r) / r3
}

pub fn mu_bound_exact(r: &BigRational) -> BigRational {
    mu_bound_numerator(&bracket_coefficient()).eval(r) / r.clone()
}

pub fn m_bound(r: f64) -> f64 {
    1.5 * r + 1.0 / 6.0 + 0.12 / r - 21.0 / (3125.0 * r * r * r)
}

pub fn mu_bound(r: f64) -> f64 {
    1.5 * r + 1.0 / 6.0 + 0.12 / r
}

/// Exact check of `m(r) < Q_r < Mu(r)` at a rational `r > 2/3`.
///
/// `p_r` is positive on `(0, Q_r)` and negative beyond, so the bracket is
/// equivalent to `p_r(m(r)) > 0 > p_r(Mu(r))`.
pub fn bracket_holds(r: &BigRational) -> bool {
    let p = pr_poly(r);
    p.eval(&m_bound_exact(r)).cmp0().is_gt() && p.eval(&mu_bound_exact(r)).cmp0().is_lt()
}

fn pr_coeffs_f64(r: f64) -> [f64; 4] {
    [
        ((162.0 * r - 36.0) * r + 39.0) * r - 4.0,
        (216.0 * r + 18.0) * r + 18.0,
        54.0 - 54.0 * r,
        -108.0,
    ]
}

/// `|p_r(x)|` divided by the largest term `|c_k x^k|`.
pub fn pr_relative_residual(r: f64, x: f64) -> f64 {
    let c = pr_coeffs_f64(r);
    let terms: Vec<f64> = (0..4).map(|k| c[k] * x.powi(k as i32)).collect();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale
}

/// The unique positive root `Q_r` of `p_r`, where `S(r, ·)` is maximal.
///
/// Cardano's formula followed by one Newton step.
pub fn q_root(r: f64) -> Result<f64> {
    check_r(r)?;
    let disc = (375.0 * r * r + 69.0) * r * r - 3.0;
    let alpha = (125.0 * r * r * r + 36.0 * r - 3.0 * disc.sqrt()).cbrt();
    let q = (3.0 + 25.0 * r * r + (1.0 - r) * alpha + alpha * alpha) / (6.0 * alpha);
    let c = pr_coeffs_f64(r);
    let p = ((c[3] * q + c[2]) * q + c[1]) * q + c[0];
    let dp = (3.0 * c[3] * q + 2.0 * c[2]) * q + c[1];
    Ok(q - p / dp)
}

/// `Q_r` to `prec` bits by Newton iteration from [`q_root`].
pub fn q_root_precise(r: f64, prec: u32) -> Result<Float> {
    let start = q_root(r)?;
    let rf = Float::with_val(prec, r);
    let coeffs: Vec<Float> = pr_bivariate_coeffs().iter().map(|p| p.eval_float(&rf)).collect();
    let mut q = Float::with_val(prec, start);
    for _ in 0..64 {
        let mut p = Float::new(prec);
        let mut dp = Float::new(prec);
        for c in coeffs.iter().rev() {
            dp = Float::with_val(prec, &dp * &q) + &p;
            p = Float::with_val(prec, &p * &q) + c;
        }
        let step = Float::with_val(prec, &p / &dp);
        q -= &step;
        let small = q.clone().abs() >> (prec - 4);
        if step.abs() <= small {
            break;
        }
    }
    Ok(q)
}

fn pr_bivariate_coeffs() -> Vec<Poly> {
    let p = pr_bivariate();
    (0..=3).map(|k| p.coeff_of_y(k)).collect()
}

/// Every Euler–Maclaurin certificate, in a fixed order.
pub fn em_suite() -> Vec<Certificate> {
    vec![
        identity_certificate(),
        bracket_certificates(),
        h_pipeline(),
        s_bound_certificate(),
        q_root_certificate(),
        reconstruction_certificate(),
        integral_certificate(),
        h_numeric_certificate(),
    ]
}
