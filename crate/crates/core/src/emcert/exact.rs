//! Exact certificates. Every check here is an equality or sign test in
//! rational arithmetic.

use serde_json::json;

use super::tables::{self, rational};
use super::{
    bracket_coefficient, m_bound_exact, m_bound_numerator, mu_bound_exact, mu_bound_numerator, pr_bivariate, pr_poly,
};
use crate::certificate::{Certificate, Method};
use crate::exactpoly::{
    descartes_sign_changes, int, ratio, rational_to_string, sign_pattern, BigRational, BivariatePolynomial,
    CoeffSign, Poly, RatFunc, RatLog,
};

fn lin(a: BigRational, b: BigRational) -> Poly {
    Poly::linear(a, b)
}

fn r_lin(a: i64, b: i64) -> Poly {
    Poly::from_i64(&[a, b])
}

fn rf(num: Poly, den: Poly) -> RatFunc {
    RatFunc { num, den }
}

fn constant(c: BigRational) -> RatFunc {
    RatFunc::from_poly(Poly::constant(c))
}

/// `S(r, N)` as a rational function of `r`.
pub fn s_of_r(n: &BigRational) -> RatFunc {
    let nn = BigRational::from(n * n);
    let c = BigRational::from(&nn * 9) - BigRational::from(n * 3) - 2;
    let num = Poly::new(vec![int(0), c * 81, int(0), int(-729)]);
    let three_n = BigRational::from(n * 3);
    let a = lin(BigRational::from(&three_n + 1), int(3));
    let b = lin(three_n - 2, int(3));
    rf(num, &a.pow(3) * &b.pow(3))
}

/// `f_r(N)` as a rational function of `r`.
fn f_of_r(n: &BigRational) -> RatFunc {
    let c: BigRational = BigRational::from(n * 3) - 2;
    let y = lin(c.clone(), int(3));
    rf(Poly::new(vec![int(0), c * 18]), y.pow(3))
}

/// The antiderivative `F(x) = 6r(3r/(2y²) − 1/y)`, `y = 3r+3x−2`, at `x = N`.
fn antiderivative_of_r(n: &BigRational) -> RatFunc {
    let y = lin(BigRational::from(n * 3) - 2, int(3));
    let num = &Poly::from_i64(&[0, 0, 9]) - &(&Poly::from_i64(&[0, 6]) * &y);
    rf(num, y.pow(2))
}

/// `S(r, x)` as a rational function of `x` at fixed `r`.
fn s_of_x(r: &BigRational) -> RatFunc {
    let r2 = BigRational::from(r * r);
    let c0 = BigRational::from(&r2 * -9) - 2;
    let k = BigRational::from(r * 81);
    let num = Poly::new(vec![c0, int(-3), int(9)]).scale(&k);
    let three_r = BigRational::from(r * 3);
    let a = lin(BigRational::from(&three_r + 1), int(3));
    let b = lin(three_r - 2, int(3));
    rf(num, &a.pow(3) * &b.pow(3))
}

fn s_prime_of_x(r: &BigRational) -> RatFunc {
    let three_r = BigRational::from(r * 3);
    let a = lin(BigRational::from(&three_r + 1), int(3));
    let b = lin(three_r - 2, int(3));
    rf(pr_poly(r).scale(&BigRational::from(r * 243)), &a.pow(4) * &b.pow(4))
}

fn f_of_x(r: &BigRational) -> RatFunc {
    let y = lin(BigRational::from(r * 3) - 2, int(3));
    rf(Poly::from_i64(&[-2, 3]).scale(&BigRational::from(r * 18)), y.pow(3))
}

fn f_prime_of_x(r: &BigRational) -> RatFunc {
    let y = lin(BigRational::from(r * 3) - 2, int(3));
    let num = Poly::linear(BigRational::from(r * 3) + 4, int(-6)).scale(&BigRational::from(r * 54));
    rf(num, y.pow(4))
}

fn poly_strings(p: &Poly) -> Vec<String> {
    p.to_strings()
}

/// Coefficient-wise comparison naming the first mismatch as `{name}_{index}`.
fn compare(name: &str, computed: &Poly, expected: &Poly) -> (bool, serde_json::Value) {
    let len = computed.coeffs().len().max(expected.coeffs().len());
    for i in 0..len {
        let (c, e) = (computed.coeff(i), expected.coeff(i));
        if c != e {
            return (
                false,
                json!({
                    "first_mismatch": format!("{name}_{i}"),
                    "computed": rational_to_string(&c),
                    "expected": rational_to_string(&e),
                }),
            );
        }
    }
    (true, json!({ "degree": computed.degree(), "coefficients": len }))
}

fn check_same(cert: &mut Certificate, label: &str, lhs: &RatFunc, rhs: &RatFunc) -> bool {
    let diff = &(&lhs.num * &rhs.den) - &(&rhs.num * &lhs.den);
    let ok = diff.is_zero();
    let detail = if ok { json!("cleared numerators agree") } else { json!({ "difference": poly_strings(&diff) }) };
    cert.check(label, ok, detail)
}

/// Coefficients of `p(a + s)` in `s`; all non-negative with a positive
/// constant term certifies `p > 0` on `(a, ∞)`.
fn positive_beyond(p: &Poly, a: &BigRational) -> bool {
    let shifted = p.compose(&Poly::linear(a.clone(), int(1)));
    shifted.coeffs().first().is_some_and(|c| c.cmp0().is_gt()) && shifted.coeffs().iter().all(|c| c.cmp0().is_ge())
}

/// The displayed rational identities of the Euler–Maclaurin rewrite of
/// `Φ(r, 2/3)`.
pub fn identity_certificate() -> Certificate {
    let mut cert = Certificate::new(
        "em.identities",
        Method::Exact,
        "first-order Euler-Maclaurin rewrite of Phi(r, 2/3): integral, boundary and Bernoulli terms",
    );
    let one = constant(int(1));
    let y0 = r_lin(-2, 3);

    let integral = -&antiderivative_of_r(&int(0));
    let integral_closed = &one - &RatFunc::inverse_power(int(4), &y0, 2);
    check_same(&mut cert, "integral of f_r over (0, inf) = 1 - 4/(3r-2)^2", &integral, &integral_closed);

    let boundary = rf(Poly::from_i64(&[0, 18]), y0.pow(3));
    let half_f0 = &f_of_r(&int(0)) * &constant(ratio(-1, 2));
    check_same(&mut cert, "boundary term -f_r(0)/2 = 18r/(3r-2)^3", &half_f0, &boundary);

    let peeled = &(&integral_closed + &boundary) + &s_of_r(&int(0));
    let peeled_closed = &one + &rf(r_lin(-1, 6), r_lin(1, 3).pow(3));
    check_same(&mut cert, "peeled N = 0 term", &peeled, &peeled_closed);

    let mut unit_ok = true;
    for n in 0..=12 {
        let n0 = int(n);
        let n1 = int(n + 1);
        let trap = &(&f_of_r(&n0) + &f_of_r(&n1)) * &constant(ratio(1, 2));
        let rhs = &trap - &(&antiderivative_of_r(&n1) - &antiderivative_of_r(&n0));
        unit_ok &= s_of_r(&n0).same_value(&rhs);
    }
    cert.check("S(r, N) is the unit Bernoulli integral, N = 0..12", unit_ok, json!({ "n_max": 12 }));

    let s1 = rf(
        Poly::from_i64(&[0, 324, 0, -729]),
        &r_lin(1, 3).pow(3) * &r_lin(4, 3).pow(3),
    );
    check_same(&mut cert, "S(r, 1) displayed form", &s_of_r(&int(1)), &s1);
    let s2 = rf(
        Poly::from_i64(&[0, 2268, 0, -729]),
        &r_lin(4, 3).pow(3) * &r_lin(7, 3).pow(3),
    );
    check_same(&mut cert, "S(r, 2) displayed form", &s_of_r(&int(2)), &s2);

    let s10 = s_of_r(&int(0)).eval(&int(1));
    cert.check(
        "S(1, 0) = -891/64",
        s10 == Some(ratio(-891, 64)),
        json!(s10.map(|v| rational_to_string(&v))),
    );

    let mut deriv_ok = true;
    let mut fprime_ok = true;
    for r in [ratio(7, 10), int(1), int(3), ratio(41, 7)] {
        deriv_ok &= s_of_x(&r).derivative().same_value(&s_prime_of_x(&r));
        fprime_ok &= f_of_x(&r).derivative().same_value(&f_prime_of_x(&r));
    }
    cert.check("dS/dx = 243 r p_r(x) / ((3r+3x+1)^4 (3r+3x-2)^4)", deriv_ok, json!({ "r": ["7/10", "1", "3", "41/7"] }));
    cert.check("f_r'(x) = 54r(4+3r-6x)/(3x+3r-2)^4", fprime_ok, json!({ "r": ["7/10", "1", "3", "41/7"] }));
    cert.finish()
}

/// `5^15 r^9 p_r(m(r)) − 81(12348 + 125r²(1515625r⁴ + 21000r² − 5292))` and
/// `5^6 r^3 p_r(Mu(r)) + 81(36 + 875r²)` for the given `1/r` coefficient.
pub fn bracket_residuals(c: &BigRational) -> (Poly, Poly) {
    let p = pr_bivariate();
    let pm = p.substitute_y_over_power(&m_bound_numerator(c), 3).scale(&BigRational::from(5u64.pow(15)));
    let target_m = (&Poly::from_i64(&[12348]) + &(&Poly::from_i64(&[-5292, 0, 21000, 0, 1515625]) * &Poly::from_i64(&[0, 0, 125])))
        .scale(&int(81));
    let pmu = p.substitute_y_over_power(&mu_bound_numerator(c), 1).scale(&int(15625));
    let target_mu = Poly::from_i64(&[36, 0, 875]).scale(&int(-81));
    (&pm - &target_m, &pmu - &target_mu)
}

/// Sign certificates for `m(r) < Q_r < Mu(r)` and the shape of `p_r`.
pub fn bracket_certificates() -> Certificate {
    let c = bracket_coefficient();
    let mut cert = Certificate::new(
        "em.bracket",
        Method::Exact,
        "critical point Q_r of S(r, .) lies strictly between m(r) and Mu(r)",
    )
    .input("inverse_r_coefficient", rational_to_string(&c));
    let p = pr_bivariate();

    let at = p.substitute_y(&Poly::new(vec![ratio(1, 6), ratio(3, 2)]));
    cert.check("p_r(3r/2 + 1/6) = 81r", at == Poly::from_i64(&[0, 81]), poly_strings(&at));
    let at = p.substitute_y(&Poly::new(vec![ratio(1, 3), ratio(3, 2)]));
    let want = Poly::new(vec![int(4), int(66), ratio(-225, 2)]);
    cert.check("p_r(3r/2 + 1/3) = 4 + 66r - 225r^2/2", at == want, poly_strings(&at));
    let p1 = pr_poly(&int(1));
    cert.check("p_1(x) = 161 + 252x - 108x^3", p1 == Poly::from_i64(&[161, 252, 0, -108]), poly_strings(&p1));

    // For r > 2/3 the coefficients of p_r have signs (+, +, ?, −): one change.
    let two_thirds = ratio(2, 3);
    let c0 = p.coeff_of_y(0);
    let c1 = p.coeff_of_y(1);
    let c3 = p.coeff_of_y(3);
    let shape = positive_beyond(&c0, &two_thirds)
        && positive_beyond(&c1, &two_thirds)
        && c3 == Poly::from_i64(&[-108]);
    cert.check(
        "p_r has exactly one positive root for r > 2/3",
        shape,
        json!({ "c0": poly_strings(&c0), "c1": poly_strings(&c1), "c3": poly_strings(&c3) }),
    );
    let mut counts = Vec::new();
    for r in [ratio(7, 10), int(1), int(3)] {
        counts.push(descartes_sign_changes(&pr_poly(&r)).unwrap_or(usize::MAX));
    }
    cert.check("Descartes count of p_r at r = 7/10, 1, 3", counts.iter().all(|&n| n == 1), &counts);

    let (dm, dmu) = bracket_residuals(&c);
    cert.check(
        "p_r(m(r)) = 81(12348 + 125r^2(1515625r^4 + 21000r^2 - 5292))/(5^15 r^9)",
        dm.is_zero(),
        json!({ "difference": poly_strings(&dm) }),
    );
    cert.check(
        "p_r(Mu(r)) = -81(36 + 875r^2)/(5^6 r^3)",
        dmu.is_zero(),
        json!({ "difference": poly_strings(&dmu) }),
    );

    let alt = ratio(2, 25);
    let (pm, pmu) = bracket_residuals(&alt);
    let mu_alt_at_one = mu_bound_numerator(&alt).eval(&int(1));
    let p1_at = p1.eval(&mu_alt_at_one);
    cert.check(
        "1/r coefficient 2/25 breaks both bracket identities",
        !pm.is_zero() && !pmu.is_zero() && p1_at.cmp0().is_gt(),
        json!({
            "m_difference": poly_strings(&pm),
            "mu_difference": poly_strings(&pmu),
            "p_1(3/2 + 1/6 + 2/25)": rational_to_string(&p1_at),
            "note": "with 2/25 the upper bound at r = 1 lies below Q_1",
        }),
    );

    let g = Poly::from_i64(&[-5292, 0, 21000, 0, 1515625]);
    let g_count = descartes_sign_changes(&g).unwrap_or(usize::MAX);
    let g0 = g.eval(&int(0));
    let g23 = g.eval(&two_thirds);
    cert.check(
        "1515625r^4 + 21000r^2 - 5292 > 0 for r > 2/3",
        g_count == 1 && g0.cmp0().is_lt() && g23.cmp0().is_gt(),
        json!({ "descartes": g_count, "at_0": rational_to_string(&g0), "at_2/3": rational_to_string(&g23) }),
    );
    cert.check(
        "m(r) > 0 for r > 2/3",
        positive_beyond(&m_bound_numerator(&c), &two_thirds),
        poly_strings(&m_bound_numerator(&c)),
    );

    let p23 = pr_poly(&two_thirds);
    let (a, b) = (p23.eval(&m_bound_exact(&two_thirds)), p23.eval(&mu_bound_exact(&two_thirds)));
    cert.check(
        "p_r(m(r)) > 0 > p_r(Mu(r)) at r = 2/3",
        a.cmp0().is_gt() && b.cmp0().is_lt(),
        json!({ "p(m)": rational_to_string(&a), "p(Mu)": rational_to_string(&b) }),
    );
    cert.finish()
}

/// `H(r)`: the rational part and the log term `−2r log((3r+7)/(3r+4))`.
pub fn h_function() -> RatLog {
    let a = r_lin(1, 3);
    let b = r_lin(4, 3);
    let c = r_lin(7, 3);
    let peeled = rf(r_lin(-1, 6), a.pow(3));
    let integral = rf(
        Poly::from_i64(&[0, 616, 1035, 594, 108]).scale(&int(3)),
        (&b.pow(2) * &c.pow(2)).scale(&int(2)),
    );
    let correction = rf(Poly::from_i64(&[-16]), Poly::monomial(int(3125), 3));
    let rational = &(&(&(&peeled + &s_of_r(&int(1))) + &s_of_r(&int(2))) + &integral) + &correction;
    RatLog {
        rational,
        log_coeff: RatFunc::from_poly(Poly::from_i64(&[0, -2])),
        arg_num: c,
        arg_den: b,
    }
}

/// `c r^k ((3r+1)(3r+4)(3r+7))^k`, the denominators of `H`, `H'`, `H''`.
fn h_denominator(c: i64, k: u32) -> Poly {
    let base = &(&r_lin(1, 3) * &r_lin(4, 3)) * &r_lin(7, 3);
    &Poly::monomial(int(c), k as usize) * &base.pow(k)
}

/// Recomputes `F1`, `F2`, `F3` from `H` and certifies the sign facts that
/// make `H` positive on `(2/3, ∞)`.
pub fn h_pipeline() -> Certificate {
    let mut cert = Certificate::new(
        "em.h-pipeline",
        Method::Exact,
        "lower bound H(r) for Phi(r, 2/3) - 1: numerators F1, F2, F3 and the sign of H''",
    );
    let h = h_function();
    let h1 = h.derivative();
    let h2 = h1.derivative();
    let dens = [h_denominator(6250, 3), h_denominator(3125, 4), h_denominator(3125, 5)];
    let parts = [&h.rational, &h1.rational, &h2.rational];
    let expected = tables::f_tables();
    let mut computed = Vec::new();
    for (j, ((part, den), want)) in parts.iter().zip(&dens).zip(&expected).enumerate() {
        let label = format!("F{} matches the reference table", j + 1);
        match part.numerator_over(den) {
            Ok(f) => {
                let (ok, detail) = compare(&format!("c{}", j + 1), &f, want);
                cert.check(&label, ok, detail);
                computed.push(f);
            }
            Err(e) => {
                cert.check(&label, false, json!({ "error": e.to_string() }));
                computed.push(Poly::zero());
            }
        }
    }

    let lead = computed[0].leading().cloned().unwrap_or_default();
    cert.check(
        "F1 leading coefficient 2^2 3^9 5^5",
        lead == int(4 * 19683 * 3125),
        rational_to_string(&lead),
    );
    let lead_den = dens[0].leading().cloned().unwrap_or_default();
    let limit = if lead_den.cmp0().is_eq() { int(0) } else { BigRational::from(&lead / &lead_den) };
    cert.check(
        "rational part of H tends to 2, cancelling 2r log((3r+7)/(3r+4)) -> 2",
        computed[0].degree() == dens[0].degree() && limit == int(2),
        json!({ "limit": rational_to_string(&limit) }),
    );
    cert.check(
        "rational part of H' tends to 0",
        computed[1].degree() < dens[1].degree(),
        json!({ "num_degree": computed[1].degree(), "den_degree": dens[1].degree() }),
    );
    cert.check("H'' is rational", h2.log_coeff.num.is_zero(), poly_strings(&h2.log_coeff.num));

    let f3 = &computed[2];
    let pattern = sign_pattern(f3);
    let shape = pattern.len() == 17
        && pattern.iter().enumerate().all(|(i, s)| *s == if i <= 7 { CoeffSign::Neg } else { CoeffSign::Pos });
    cert.check(
        "F3 negative exactly for exponents 0..7",
        shape,
        pattern.iter().map(|s| s.symbol()).collect::<String>(),
    );
    let count = descartes_sign_changes(f3).unwrap_or(usize::MAX);
    cert.check("F3 Descartes count 1", count == 1, count);

    let v13 = h2.rational.eval(&ratio(1, 3));
    let v23 = h2.rational.eval(&ratio(2, 3));
    let want13 = rational(tables::H2_AT_ONE_THIRD);
    let want23 = rational(tables::H2_AT_TWO_THIRDS);
    cert.check(
        "H''(1/3) exact",
        v13.as_ref() == Some(&want13) && want13.cmp0().is_lt(),
        json!(v13.as_ref().map(rational_to_string)),
    );
    cert.check(
        "H''(2/3) exact",
        v23.as_ref() == Some(&want23) && want23.cmp0().is_gt(),
        json!(v23.as_ref().map(rational_to_string)),
    );
    // One positive root of F3, located in (1/3, 2/3): H'' > 0 beyond 2/3, so
    // H' increases to 0 and H decreases to 0.
    let chain = cert.witnesses.iter().all(|w| w.passed);
    cert.check(
        "H'' > 0, H' < 0 and H > 0 on (2/3, inf)",
        chain,
        "from the single sign change of F3, the two evaluations and the limits",
    );
    cert.finish()
}

/// `W(r, Q) = 2^4 (3r+3Q+1)^3 (3r+3Q−2)^3 − 3^4 5^5 r^4 (9Q²−3Q−9r²−2)`;
/// `W(r, Q_r) > 0` is equivalent to `S(r, Q_r) < 16/(3125 r³)`.
pub fn w_polynomial() -> BivariatePolynomial {
    let mut s = BivariatePolynomial::term(int(3), 1, 0);
    s.add_term(int(3), 0, 1);
    let a = &s + &BivariatePolynomial::constant(int(1));
    let b = &s - &BivariatePolynomial::constant(int(2));
    let cubes = (&a.pow(3) * &b.pow(3)).scale(&int(16));
    let mut inner = BivariatePolynomial::term(int(9), 0, 2);
    inner.add_term(int(-3), 0, 1);
    inner.add_term(int(-9), 2, 0);
    inner.add_term(int(-2), 0, 0);
    let tail = &BivariatePolynomial::term(int(253125), 4, 0) * &inner;
    &cubes - &tail
}

/// `P(r) = r^18 (U(r, m(r)) − V(r, Mu(r)))`.
pub fn p_polynomial(c: &BigRational) -> Poly {
    let (u, v) = w_polynomial().split_by_sign();
    let du = u.degree_y() as usize;
    let dv = v.degree_y() as usize;
    let up = u.substitute_y_over_power(&m_bound_numerator(c), 3).shift(18 - 3 * du);
    let vp = v.substitute_y_over_power(&mu_bound_numerator(c), 1).shift(18 - dv);
    &up - &vp
}

/// Exact certificate for `S(r, Q_r) < 16/(3125 r³)` on `(2/3, ∞)`.
pub fn s_bound_certificate() -> Certificate {
    let c = bracket_coefficient();
    let mut cert = Certificate::new(
        "em.s-bound",
        Method::Exact,
        "maximum of S(r, .) is below 16/(3125 r^3): W split into U - V and the polynomial P(r)",
    )
    .input("inverse_r_coefficient", rational_to_string(&c));
    let w = w_polynomial();
    let (u, v) = w.split_by_sign();
    cert.check("W = U - V", &u - &v == w, json!({ "u_degree_y": u.degree_y(), "v_degree_y": v.degree_y() }));

    let (u_tab, v_tab) = tables::uv_tables();
    let mut u_ok = (true, json!("all u_k match"));
    for (k, want) in u_tab.iter().enumerate() {
        let (ok, detail) = compare(&format!("u{k}"), &u.coeff_of_y(k as u32), want);
        if !ok {
            u_ok = (false, detail);
            break;
        }
    }
    cert.check("u_k match the reference table", u_ok.0 && u.degree_y() == 6, u_ok.1);
    let mut v_ok = (true, json!("all v_k match"));
    for (k, want) in v_tab.iter().enumerate() {
        let (ok, detail) = compare(&format!("v{k}"), &v.coeff_of_y(k as u32), want);
        if !ok {
            v_ok = (false, detail);
            break;
        }
    }
    cert.check("v_k match the reference table", v_ok.0 && v.degree_y() == 5, v_ok.1);

    let p = p_polynomial(&c);
    let (ok, detail) = compare("beta", &p, &tables::p_table());
    cert.check("β_n match the reference table", ok, detail);
    let zeros = p.coeff(1).cmp0().is_eq() && p.coeff(21).cmp0().is_eq();
    cert.check("β_1 = β_21 = 0", zeros, json!([rational_to_string(&p.coeff(1)), rational_to_string(&p.coeff(21))]));
    let pattern: String = sign_pattern(&p).iter().map(|s| s.symbol()).collect();
    cert.check("P sign pattern", pattern == tables::BETA_SIGNS, &pattern);
    let changes = descartes_sign_changes(&p).unwrap_or(usize::MAX);
    cert.check("P has six sign changes", changes == 6, changes);

    let p14 = p.derivative(14);
    let changes14 = descartes_sign_changes(&p14).unwrap_or(usize::MAX);
    cert.check("P^(14) has one sign change", changes14 == 1, changes14);
    let two_thirds = ratio(2, 3);
    let at0 = p14.eval(&int(0));
    let at23 = p14.eval(&two_thirds);
    cert.check(
        "P^(14)(0) exact",
        at0 == rational(tables::P14_AT_ZERO) && at0.cmp0().is_lt(),
        rational_to_string(&at0),
    );
    cert.check(
        "P^(14)(2/3) exact",
        at23 == rational(tables::P14_AT_TWO_THIRDS) && at23.cmp0().is_gt(),
        rational_to_string(&at23),
    );
    let mut first_bad = None;
    for n in 0..=13 {
        if !p.derivative(n).eval(&two_thirds).cmp0().is_gt() {
            first_bad = Some(n);
            break;
        }
    }
    cert.check(
        "P^(n)(2/3) > 0 for n = 0..13",
        first_bad.is_none(),
        json!({ "first_failing_order": first_bad }),
    );
    // P^(14) has its only positive root in (0, 2/3); integrating upward from
    // 2/3 with positive initial values gives P > 0 on [2/3, ∞). U and V have
    // non-negative coefficients, so W(r, Q_r) ≥ r^-18 P(r) for m < Q_r < Mu.
    let chain = cert.witnesses.iter().all(|w| w.passed);
    cert.check(
        "P > 0 on [2/3, inf), hence W(r, Q_r) > 0",
        chain,
        "Taylor chain from the derivative signs",
    );
    cert.finish()
}
