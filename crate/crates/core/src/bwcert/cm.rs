use rayon::prelude::*;
use rug::Float;
use serde::Serialize;
use serde_json::json;

use super::{kernel, m_kernel, m_kernel_float, quadratic_roots, BwError, Result};
use crate::certificate::{Certificate, Method, Verdict};
use crate::quad::{integrate, QuadOptions};
use crate::specialfn::{phi, phi_sandwich, theta_bounded, BoundedFloat};

pub const DEFAULT_CM_GRID: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
pub const DEFAULT_CM_ORDERS: usize = 4;
pub const DEFAULT_PHI_QS: [f64; 6] = [-5.0, -1.0, 0.0, 1.0, 2.0, 5.0];

#[derive(Clone, Debug, Serialize)]
pub struct FqEvaluation {
    pub value: BoundedFloat,
    pub quadrature: f64,
    pub quadrature_error: f64,
    /// Upper limit of the quadrature; the neglected tail is below `tol/10`.
    pub cutoff: f64,
}

/// `F_q(x) = Θ(x+q, q) - x - 2q + 1/2`, returned from the Θ route after
/// agreeing with the Laplace integral `int_0^∞ M(t,q)/(e^t-1)³ e^{-xt} dt`
/// to within `10·tol`.
pub fn f_q(x: f64, q: f64, tol: f64) -> Result<BoundedFloat> {
    f_q_with_crosscheck(x, q, tol).map(|e| e.value)
}

pub fn f_q_with_crosscheck(x: f64, q: f64, tol: f64) -> Result<FqEvaluation> {
    if !(x.is_finite() && x > 0.0) {
        return Err(BwError::Domain(format!("F_q needs x > 0, got {x}")));
    }
    if !(q.is_finite() && tol.is_finite() && tol > 0.0) {
        return Err(BwError::Domain(format!("bad q = {q} or tol = {tol}")));
    }
    let value = f_q_theta(x, q)?;

    // |M(t,q)| <= (1+|q|)² t e^{2t} for t >= 1, so the integrand is below
    // C t e^{-(1+x)t} / (1-e^{-t})³ there.
    let c = (1.0 + q.abs()).powi(2);
    let tail = |big_t: f64| {
        let s = 1.0 + x;
        c * (-s * big_t).exp() * (big_t / s + 1.0 / (s * s)) / (1.0 - (-big_t).exp()).powi(3)
    };
    let mut cutoff = 1.0;
    while tail(cutoff) > tol / 10.0 {
        cutoff += 1.0;
    }
    let opts = QuadOptions { abs_tol: tol, rel_tol: 1e-15, max_intervals: 4000 };
    let r = integrate(|t| kernel(t, q).unwrap_or(0.0) * (-x * t).exp(), 0.0, cutoff, opts);
    let allowed = 10.0 * tol;
    let diff = (value.value_f64() - r.value).abs();
    if !(diff <= allowed) {
        return Err(BwError::CrossCheckFailure {
            x,
            q,
            theta: value.value_f64(),
            quadrature: r.value,
            allowed,
        });
    }
    Ok(FqEvaluation { value, quadrature: r.value, quadrature_error: r.error_estimate, cutoff })
}

fn f_q_theta(x: f64, q: f64) -> Result<BoundedFloat> {
    let xb = BoundedFloat::exact(x);
    let qb = BoundedFloat::exact(q);
    let th = theta_bounded(&xb.add(&qb), &qb)?;
    Ok(th.sub(&xb).sub(&qb.mul_f64(2.0)).add(&BoundedFloat::exact(0.5)))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Sign {
    Positive,
    Negative,
    Undetermined,
}

/// Finite-difference evidence for complete monotonicity of `x ↦ F_q(x)`.
///
/// A completely monotone function has `(-1)^m Δ_h^m F(x) > 0` for every
/// step `h > 0`, so each grid point is tested with forward differences of
/// step `x/4` up to `orders`. One difference that is certainly of the wrong
/// sign refutes; all certainly right supports; anything else is inconclusive.
/// Either way this is evidence from finitely many samples, not a proof.
pub fn cm_numeric_certificate(q: f64, orders: usize, grid: &[f64]) -> Certificate {
    let tol = 1e-12;
    let mut cert = Certificate::new(
        &format!("bw.cm.q={}", fmt_q(q)),
        Method::NumericEvidence,
        "F_q(x) = Θ(x+q,q) - x - 2q + 1/2 is completely monotone on x > 0",
    )
    .input("q", q)
    .input("orders", orders)
    .input("grid", grid)
    .note("finite-difference samples; evidence, not proof");
    if grid.is_empty() || grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) || orders > 4 {
        cert.check("arguments", false, "grid must be nonempty and positive, orders <= 4");
        return cert.with_verdict(Verdict::Inconclusive);
    }

    let rows: Vec<std::result::Result<Vec<(usize, BoundedFloat)>, String>> = grid
        .par_iter()
        .map(|&x| {
            let h = x / 4.0;
            let vals = (0..=orders)
                .map(|j| f_q(x + j as f64 * h, q, tol))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            Ok((0..=orders)
                .map(|m| {
                    let mut d = BoundedFloat::exact(0.0);
                    for (j, v) in vals.iter().enumerate().take(m + 1) {
                        let c = binomial(m, j) * if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
                        d = d.add(&v.mul_f64(c));
                    }
                    (m, if m % 2 == 0 { d } else { d.neg() })
                })
                .collect())
        })
        .collect();

    let mut any_negative = false;
    let mut all_positive = true;
    for (&x, row) in grid.iter().zip(rows) {
        match row {
            Err(e) => {
                all_positive = false;
                cert.check(&format!("F_q evaluation at x = {x}"), false, e);
            }
            Ok(row) => {
                for (m, v) in row {
                    let sign = if v.is_positive() {
                        Sign::Positive
                    } else if v.is_negative() {
                        Sign::Negative
                    } else {
                        Sign::Undetermined
                    };
                    any_negative |= sign == Sign::Negative;
                    all_positive &= sign == Sign::Positive;
                    cert.check(
                        &format!("(-1)^{m} Δ^{m} F_q at x = {x}"),
                        sign == Sign::Positive,
                        json!({ "x": x, "h": x / 4.0, "value": v.value_f64(), "radius": v.radius(), "sign": sign }),
                    );
                }
            }
        }
    }

    let (t_min, m_min) = min_m_on_grid(q);
    cert.check(
        "M(t,q) > 0 on t grid",
        m_min > 0.0,
        json!({ "argmin_t": t_min, "min_m": m_min }),
    );
    let verdict = if any_negative {
        Verdict::Refutes
    } else if all_positive && m_min > 0.0 {
        Verdict::Supports
    } else {
        Verdict::Inconclusive
    };
    cert.with_verdict(verdict)
}

fn fmt_q(q: f64) -> String {
    if (q - 2.0 / 3.0).abs() < 1e-15 {
        "2/3".to_string()
    } else {
        format!("{q}")
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Minimum of `M(t,q)` over a log grid in `[1e-3, 50]`, with its location.
fn min_m_on_grid(q: f64) -> (f64, f64) {
    log_grid(1e-3, 50.0, 400)
        .into_iter()
        .map(|t| (t, m_kernel(t, q).unwrap_or(f64::NAN)))
        .fold((f64::NAN, f64::INFINITY), |acc, (t, v)| if v < acc.1 { (t, v) } else { acc })
}

/// Wraps the q = 2/3 finite-difference run: verified when a sign violation
/// of `F_{2/3}` is found and `M(t, 2/3) < 0` is confirmed in MPFR at a witness t.
pub fn refutation_certificate() -> Certificate {
    let q = 2.0 / 3.0;
    let cm = cm_numeric_certificate(q, DEFAULT_CM_ORDERS, &DEFAULT_CM_GRID);
    let mut cert = Certificate::new(
        "bw.cm-refuted.q=2/3",
        Method::BoundedNumeric,
        "q=2/3 CM refuted: F_{2/3} is not completely monotone and M(t,2/3) < 0 for some t",
    )
    .input("q", "2/3");
    cert.check("finite differences refute", cm.verdict == Verdict::Refutes, json!({ "verdict": cm.verdict }));
    if let Some(w) = cm.witnesses.iter().find(|w| !w.passed && w.label.starts_with("(-1)")) {
        cert.check(&format!("violation: {}", w.label), true, w.detail.clone());
    }
    let (t, m) = min_m_on_grid(q);
    let prec = 256;
    let tf = Float::with_val(prec, t);
    let qf = Float::with_val(prec, 2u32) / 3u32;
    let mf = m_kernel_float(&tf, &qf);
    // the direct formula loses at most log2(e^{2t}/t³) bits to cancellation
    let lost = (2.0 * t / std::f64::consts::LN_2 - 3.0 * t.log2()).max(0.0);
    let err = (2.0f64).powf(lost - prec as f64 + 8.0) * (2.0 * t).exp();
    cert.check(
        "M(t,2/3) < 0 at witness t",
        mf.to_f64() + err < 0.0,
        json!({ "t": t, "m_series": m, "m_mpfr": mf.to_f64(), "error_bound": err }),
    );
    let (s1, s2) = quadratic_roots(t).unwrap_or((f64::NAN, f64::NAN));
    cert.check("s2(t) < 2/3 < s1(t) at witness t", s2 < q && q < s1, json!({ "s1": s1, "s2": s2 }));
    cert.finish()
}

/// Grid evidence for the kernel facts behind the integral representation.
pub fn kernel_certificate() -> Certificate {
    use super::*;
    let mut cert = Certificate::new(
        "bw.kernels",
        Method::NumericEvidence,
        "g0, g1, g2, E > 0; Δ > 0 in factored form; 0 < s2 < s1 < 1 on t > 0",
    )
    .input("t_grid", "log grid [1e-4, 50], 120 points");
    let grid = log_grid(1e-4, 50.0, 120);
    let mut worst_delta = 0.0f64;
    let mut worst_root = 0.0f64;
    let mut positive = true;
    let mut ordered = true;
    let mut s2_increasing = true;
    let mut prev_s2 = 0.0;
    for &t in &grid {
        let k = KernelFunctions::at(t).expect("t > 0");
        positive &= k.g0 > 0.0 && k.g1 > 0.0 && k.g2 > 0.0 && k.h0 > 0.0 && k.h1 > 0.0;
        positive &= cosh_remainder(t).unwrap() > 0.0;
        let (dg, df) = (discriminant_from_g(t).unwrap(), discriminant(t).unwrap());
        worst_delta = worst_delta.max(((dg - df) / df).abs());
        let (s1, s2) = quadratic_roots(t).unwrap();
        ordered &= 0.0 < s2 && s2 < s1 && s1 <= 1.0 && one_minus_s1(t).unwrap() > 0.0;
        for s in [s1, s2] {
            let scale = k.g0.max(k.g1 * s).max(k.g2 * s * s);
            worst_root = worst_root.max(k.m(s).abs() / scale);
        }
        s2_increasing &= s2 > prev_s2;
        prev_s2 = s2;
    }
    cert.check("g0, g1, g2, E, h1, cosh t - 1 - t²/2 > 0", positive, grid.len());
    cert.check("g1² - 4g0g2 equals the factored Δ (rel 1e-10)", worst_delta < 1e-10, worst_delta);
    cert.check("M(t, s_i(t)) = 0 (rel 1e-8)", worst_root < 1e-8, worst_root);
    cert.check("0 < s2 < s1 < 1", ordered, grid.len());
    let s2_small = quadratic_roots(1e-4).unwrap().1;
    cert.check(
        "s2(1e-4) within 1e-4 of (3-√3)/6",
        (s2_small - s2_limit_at_zero()).abs() < 1e-4,
        json!({ "s2": s2_small, "limit": s2_limit_at_zero() }),
    );
    let gap = one_minus_s1(50.0).unwrap();
    cert.check("1 - 1e-6 < s1(50) < 1", gap > 0.0 && gap < 1e-6, json!({ "one_minus_s1": gap }));
    let cert = cert.note(&format!("s2 increasing on the grid: {s2_increasing} (not claimed in general)"));
    evidence(cert)
}

fn evidence(cert: Certificate) -> Certificate {
    let cert = cert.finish();
    if cert.verdict == Verdict::Verified {
        cert.with_verdict(Verdict::Supports)
    } else {
        cert
    }
}

/// `Φ(r,q) < 1` beyond the error radius on a log grid `r ∈ (max(q,0)+0.01, 10³]`,
/// with the rational sandwich checked at every point.
pub fn phi_below_one_certificate(qs: &[f64], points: usize, tol: f64) -> Certificate {
    let mut cert = Certificate::new(
        "bw.phi-below-one",
        Method::BoundedNumeric,
        "Φ(r,q) < 1 for r > q when q <= 0 or q >= 1",
    )
    .input("q", qs)
    .input("points", points)
    .input("r_max", 1e3);
    for &q in qs {
        let grid = log_grid(q.max(0.0) + 0.01, 1e3, points.max(2));
        let results: Vec<_> = grid
            .par_iter()
            .map(|&r| {
                let v = phi(r, q, tol).map_err(|e| e.to_string())?;
                let sandwich = phi_sandwich(r, q).ok();
                Ok::<_, String>((r, v, sandwich))
            })
            .collect();
        let mut min_margin = f64::INFINITY;
        let mut at = f64::NAN;
        let mut contained = true;
        let mut failure = None;
        for res in results {
            match res {
                Ok((r, v, s)) => {
                    let m = -v.margin_above(1.0);
                    if m < min_margin {
                        min_margin = m;
                        at = r;
                    }
                    if let Some((lo, hi)) = s {
                        contained &= v.certainly_gt_f64(lo) && v.certainly_lt_f64(hi);
                    }
                }
                Err(e) => failure = Some(e),
            }
        }
        cert.check(
            &format!("1 - Φ(r,{q}) exceeds its radius"),
            failure.is_none() && min_margin > 0.0,
            json!({ "min_margin": min_margin, "at_r": at, "error": failure }),
        );
        cert.check(&format!("sandwich bounds contain Φ(r,{q})"), contained, grid.len());
    }
    cert.finish()
}

/// The full set of certificates for this module.
pub fn bw_suite() -> Vec<Certificate> {
    let mut out = vec![kernel_certificate()];
    out.extend(
        [-2.0, 0.0, 1.0, 3.0]
            .iter()
            .map(|&q| cm_numeric_certificate(q, DEFAULT_CM_ORDERS, &DEFAULT_CM_GRID)),
    );
    out.push(refutation_certificate());
    out.push(phi_below_one_certificate(&DEFAULT_PHI_QS, 50, 1e-12));
    out
}
