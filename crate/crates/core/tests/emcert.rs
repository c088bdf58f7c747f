use leraykit::certificate::Verdict;
use leraykit::emcert::exact::{bracket_residuals, h_function, p_polynomial, w_polynomial};
use leraykit::emcert::tables::{self, rational};
use leraykit::emcert::{
    bracket_certificates, bracket_holds, em_first_order, em_suite, f_r, f_r_prime, f_r_tail_integral, h_pipeline,
    m_bound, mu_bound, mu_bound_numerator, phi_two_thirds_direct, pr_poly, pr_relative_residual, q_root,
    q_root_precise, s_bound_certificate, s_function, s_integral_from_two, s_series_two_thirds, EmError, TailBounds,
    Upper,
};
use leraykit::exactpoly::{int, ratio, BigRational, Poly};
use leraykit::quad::{integrate, QuadOptions};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

const P: u32 = 256;

fn opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, max_intervals: 400 }
}

#[test]
fn s_is_the_bernoulli_integral_of_f_prime() {
    // S(r, N) = ∫_0^1 f_r'(N + s)(s − 1/2) ds, by quadrature
    for &r in &[0.7, 1.0, 4.5] {
        for n in [0.0, 1.0, 2.0, 7.0, 30.0] {
            let q = integrate(|s| f_r_prime(r, n + s).unwrap() * (s - 0.5), 0.0, 1.0, opts());
            let s = s_function(r, n).unwrap();
            assert!((q.value - s).abs() <= 1e-13 * (1.0 + s.abs()), "r {r} N {n}: {} vs {s}", q.value);
        }
    }
}

#[test]
fn s_examples() {
    assert!((s_function(1.0, 0.0).unwrap() + 891.0 / 64.0).abs() < 1e-13);
    assert!(s_function(3.0, 1e6).unwrap().abs() < 1e-20);
    assert!(matches!(s_function(0.6, 1.0), Err(EmError::Domain(_))));
}

#[test]
fn f_r_integral_and_boundary_at_one() {
    let q = leraykit::quad::integrate_to_infinity(|x| f_r(1.0, x).unwrap(), 0.0, opts());
    assert!((q.value + 3.0).abs() < 1e-10, "{}", q.value);
    assert!((f_r_tail_integral(1.0, 0.0).unwrap() + 3.0).abs() < 1e-14);
    assert_eq!(-f_r(1.0, 0.0).unwrap() / 2.0, 18.0);
}

#[test]
fn em_first_order_examples() {
    let d = em_first_order(&|x| x * x, &|x| 2.0 * x, 0, Upper::Finite(10), 1e-12).unwrap();
    // Σ j² = 385 = 1000/3 + 50 + 10 · (1/6)
    assert!((d.integral - 1000.0 / 3.0).abs() < 1e-10);
    assert_eq!(d.boundary, 50.0);
    assert!((d.bernoulli - 10.0 / 6.0).abs() < 1e-12);
    assert!((d.total() - 385.0).abs() < 1e-10);

    // Σ_{j≥1} 1/j² with exact tail data
    let bound = |n: i64| 1.0 / (n as f64 + 1.0).powi(2);
    let tail = TailBounds { integral: 1.0, limit: 0.0, bernoulli_tail: &bound };
    let d = em_first_order(&|x| 1.0 / (x + 1.0).powi(2), &|x| -2.0 / (x + 1.0).powi(3), 0, Upper::Infinite(Some(tail)), 1e-8)
        .unwrap();
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((d.total() - (zeta2 - 1.0)).abs() <= d.error_bound + 1e-12, "{}", d.total());

    assert!(matches!(
        em_first_order(&|x| x, &|_| 1.0, 0, Upper::Infinite(None), 1e-8),
        Err(EmError::TailUnbounded)
    ));
}

/// Plain f64 summation with an integral tail, independent of the MPFR route.
fn naive_phi_two_thirds(r: f64, n: usize) -> f64 {
    let mut s = 0.0;
    for j in (1..=n).rev() {
        s += f_r(r, j as f64).unwrap();
    }
    s + f_r_tail_integral(r, n as f64 + 0.5).unwrap()
}

#[test]
fn reconstruction_matches_naive_sum() {
    for &r in &[0.7, 2.0, 20.0] {
        let d = phi_two_thirds_direct(r, 1e-13).unwrap();
        let s = s_series_two_thirds(r, 1e-13).unwrap();
        let naive = naive_phi_two_thirds(r, 200_000);
        assert!((d.value_f64() - naive).abs() < 1e-9, "r {r}");
        let gap = Float::with_val(P, d.value() - s.value()).abs().to_f64();
        assert!(gap <= 1e-10 && gap <= d.radius() + s.radius(), "r {r}: gap {gap:e}");
    }
}

#[test]
fn integral_closed_form_against_simpson() {
    for &r in &[1.0, 2.0, 5.0] {
        // x = 2 + t/(1-t), composite Simpson in t
        let n = 200_000;
        let h = 1.0 / n as f64;
        let g = |t: f64| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            s_function(r, 2.0 + t / s).unwrap() / (s * s)
        };
        let mut acc = g(0.0) + g(1.0);
        for i in 1..n {
            acc += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let simpson = acc * h / 3.0;
        let closed = s_integral_from_two(r).unwrap();
        assert!(((simpson - closed) / closed).abs() < 1e-8, "r {r}: {simpson} vs {closed}");
    }
}

#[test]
fn pr_at_one() {
    assert_eq!(pr_poly(&int(1)), Poly::from_i64(&[161, 252, 0, -108]));
}

fn bisect_root(r: f64) -> f64 {
    let p = |x: f64| {
        let c = [
            -4.0 + 39.0 * r - 36.0 * r * r + 162.0 * r.powi(3),
            18.0 + 18.0 * r + 216.0 * r * r,
            54.0 - 54.0 * r,
            -108.0,
        ];
        c[0] + x * (c[1] + x * (c[2] + x * c[3]))
    };
    let (mut lo, mut hi) = (0.0, 10.0 * r + 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn q_root_matches_bisection_and_maximises_s() {
    for &r in &[0.67, 0.8, 1.0, 5.0, 37.0, 900.0] {
        let q = q_root(r).unwrap();
        let b = bisect_root(r);
        assert!((q - b).abs() <= 1e-12 * b, "r {r}: {q} vs {b}");
        let s = s_function(r, q).unwrap();
        for dx in [-1e-3, 1e-3] {
            assert!(s_function(r, q + dx * q).unwrap() < s);
        }
    }
    let r5 = q_root(5.0).unwrap();
    assert!(pr_relative_residual(5.0, r5) < 1e-14);
    assert!(matches!(q_root(2.0 / 3.0), Err(EmError::Domain(_))));
}

#[test]
fn bracket_at_one() {
    let q = q_root(1.0).unwrap();
    assert!(m_bound(1.0) < q && q < mu_bound(1.0), "{} {q} {}", m_bound(1.0), mu_bound(1.0));
    assert!(bracket_holds(&int(1)));
    assert!(s_function(1.0, q).unwrap() < 16.0 / 3125.0);
}

#[test]
fn two_over_twentyfive_breaks_the_bracket() {
    let (a, b) = bracket_residuals(&ratio(3, 25));
    assert!(a.is_zero() && b.is_zero());
    let (a, b) = bracket_residuals(&ratio(2, 25));
    assert!(!a.is_zero() && !b.is_zero());
    // and the resulting upper bound falls below Q_1
    let mu = mu_bound_numerator(&ratio(2, 25)).eval(&int(1)).to_f64();
    assert!(mu < q_root(1.0).unwrap());
}

#[test]
fn taylor_tail_of_q() {
    for &r in &[100.0f64, 1000.0] {
        let q = q_root_precise(r, P).unwrap();
        let lead = Float::with_val(P, 1.5 * r) + Float::with_val(P, 6u32).recip() + 0.12 / r;
        let t = Float::with_val(P, &q - &lead).to_f64() * r.powi(3);
        assert!((t + 21.0 / 3125.0).abs() < 2e-3 * 100.0 / r, "r {r}: {t}");
    }
}

/// `H` from its defining formula in MPFR.
fn h_oracle(r: &Float) -> Float {
    let p = r.prec();
    let lin = |a: u32| Float::with_val(p, r * 3u32) + a;
    let (a, b, c) = (lin(1), lin(4), lin(7));
    let r2 = Float::with_val(p, r * r);
    let t0 = (Float::with_val(p, r * 6u32) - 1u32) / Float::with_val(p, a.clone().pow(3u32));
    let t1 = Float::with_val(p, r * 81u32) * (Float::with_val(p, 4u32) - Float::with_val(p, &r2 * 9u32))
        / Float::with_val(p, Float::with_val(p, &a * &b).pow(3u32));
    let t2 = Float::with_val(p, r * 81u32) * (Float::with_val(p, 28u32) - Float::with_val(p, &r2 * 9u32))
        / Float::with_val(p, Float::with_val(p, &b * &c).pow(3u32));
    let cubic = Float::with_val(p, Float::with_val(p, Float::with_val(p, r * 108u32) + 594u32) * r + 1035u32) * r + 616u32;
    let t3 = Float::with_val(p, r * 3u32) * cubic / (Float::with_val(p, &b * &c).square() * 2u32);
    let lg = Float::with_val(p, r * 2u32) * Float::with_val(p, &c / &b).ln();
    let corr = Float::with_val(p, 16u32) / (Float::with_val(p, r.clone().pow(3u32)) * 3125u32);
    t0 + t1 + t2 + t3 - lg - corr
}

#[test]
fn table_one_against_direct_evaluation_of_h() {
    let [f1, f2, f3] = tables::f_tables();
    for &r in &[0.7, 1.3, 4.0, 55.0] {
        let rf = Float::with_val(P, r);
        let prod = Float::with_val(P, Float::with_val(P, &rf * 3u32) + 1u32)
            * Float::with_val(P, Float::with_val(P, &rf * 3u32) + 4u32)
            * Float::with_val(P, Float::with_val(P, &rf * 3u32) + 7u32);
        let base = Float::with_val(P, &rf * &prod);
        let lg = Float::with_val(P, Float::with_val(P, Float::with_val(P, &rf * 3u32) + 7u32) / Float::with_val(P, Float::with_val(P, &rf * 3u32) + 4u32)).ln();
        let h_tab = f1.eval_float(&rf) / (Float::with_val(P, base.clone().pow(3u32)) * 6250u32) - Float::with_val(P, &rf * 2u32) * &lg;
        let h = h_oracle(&rf);
        let d = Float::with_val(P, &h_tab - &h).abs().to_f64();
        assert!(d < 1e-60, "H at {r}: {d:e}");

        // derivatives by central differences of the oracle
        let e = Float::with_val(P, 1e-25);
        let hp = h_oracle(&Float::with_val(P, &rf + &e));
        let hm = h_oracle(&Float::with_val(P, &rf - &e));
        let d1 = Float::with_val(P, &hp - &hm) / Float::with_val(P, &e * 2u32);
        let d2 = (Float::with_val(P, &hp + &hm) - Float::with_val(P, &h * 2u32)) / Float::with_val(P, &e * &e);
        let h1_tab = f2.eval_float(&rf) / (Float::with_val(P, base.clone().pow(4u32)) * 3125u32) - Float::with_val(P, &lg * 2u32);
        let h2_tab = f3.eval_float(&rf) / (Float::with_val(P, base.pow(5u32)) * 3125u32);
        let e1 = Float::with_val(P, &d1 - &h1_tab).abs().to_f64();
        let e2 = Float::with_val(P, &d2 - &h2_tab).abs().to_f64();
        assert!(e1 < 1e-30 * (1.0 + h1_tab.to_f64().abs()), "H' at {r}: {e1:e}");
        assert!(e2 < 1e-15 * (1.0 + h2_tab.to_f64().abs()), "H'' at {r}: {e2:e}");
    }
}

#[test]
fn h_second_derivative_values() {
    let h2 = h_function().derivative().derivative();
    assert_eq!(h2.rational.eval(&ratio(1, 3)).unwrap(), rational("-437616243/25600000"));
    assert_eq!(h2.rational.eval(&ratio(2, 3)).unwrap(), rational("49618/2278125"));
    assert!(h2.log_coeff.num.is_zero());
}

#[test]
fn table_two_against_w_evaluation() {
    // Σ_k (u_k − v_k) Q^k against W evaluated from its formula
    let (u, v) = tables::uv_tables();
    for (r, q) in [(ratio(7, 10), ratio(3, 2)), (int(2), ratio(10, 3)), (ratio(13, 4), int(5))] {
        let s = BigRational::from(&r * 3) + BigRational::from(&q * 3);
        let a = BigRational::from(&s + 1);
        let b = s - 2;
        let q2 = BigRational::from(&q * &q);
        let inner = BigRational::from(&q2 * 9) - BigRational::from(&q * 3) - BigRational::from(&r * &r) * 9 - 2;
        let r4 = BigRational::from(Pow::pow(&r, 4u32));
        let w: BigRational = BigRational::from(Pow::pow(&(a * b), 3u32)) * 16 - r4 * inner * 253125;
        let mut tab = BigRational::new();
        for k in 0..7 {
            let qk = BigRational::from(Pow::pow(&q, k as u32));
            tab += (u[k].eval(&r) - v[k].eval(&r)) * qk;
        }
        assert_eq!(tab, w);
        assert_eq!(w_polynomial().eval(&r, &q), w);
    }
}

#[test]
fn table_three_against_pointwise_evaluation() {
    let (u, v) = tables::uv_tables();
    let beta = tables::p_table();
    assert_eq!(beta.degree(), Some(22));
    for r in [ratio(2, 3), int(1), ratio(9, 4), int(7)] {
        let r3 = BigRational::from(Pow::pow(&r, 3u32));
        let m = ratio(3, 2) * r.clone() + ratio(1, 6) + ratio(3, 25) / r.clone() - ratio(21, 3125) / r3;
        let mu = ratio(3, 2) * r.clone() + ratio(1, 6) + ratio(3, 25) / r.clone();
        let mut acc = BigRational::new();
        for k in 0..7 {
            acc += u[k].eval(&r) * BigRational::from(Pow::pow(&m, k as u32));
            acc -= v[k].eval(&r) * BigRational::from(Pow::pow(&mu, k as u32));
        }
        acc *= BigRational::from(Pow::pow(&r, 18u32));
        assert_eq!(beta.eval(&r), acc);
        assert_eq!(p_polynomial(&ratio(3, 25)).eval(&r), acc);
    }
    assert_eq!(tables::p_table().coeff(22), ratio(455625, 2));
    assert_eq!(tables::p_table().coeff(0), rational("1000376035344/5^30"));
}

#[test]
fn exact_certificates_verify() {
    for c in [bracket_certificates(), h_pipeline(), s_bound_certificate()] {
        assert_eq!(c.verdict, Verdict::Verified, "{}: {:?}", c.claim_id, c.first_failure());
    }
    let h = h_pipeline();
    assert!(h.witness("H''(1/3) exact").is_some_and(|w| w.passed));
    assert!(s_bound_certificate().witness("β_n match the reference table").is_some_and(|w| w.passed));
    let f3 = h.witness("F3 matches the reference table").unwrap();
    assert_eq!(f3.detail["coefficients"], 17);
}

#[test]
fn exact_certificates_are_deterministic() {
    let a = serde_json::to_string(&s_bound_certificate()).unwrap();
    let b = serde_json::to_string(&s_bound_certificate()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn suite_succeeds() {
    let suite = em_suite();
    assert_eq!(suite.len(), 8);
    for c in &suite {
        assert!(c.verdict.is_success(), "{}: {:?}", c.claim_id, c.first_failure());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bracket_holds_everywhere(num in 1u32..1_000_000, den in 1u32..1000) {
        let r = BigRational::from((num, den));
        prop_assume!(r > ratio(2, 3));
        prop_assert!(bracket_holds(&r));
    }

    #[test]
    fn root_is_unique_and_s_bounded(r in 0.6667f64..1000.0) {
        let q = q_root(r).unwrap();
        prop_assert!(pr_relative_residual(r, q) < 1e-10);
        let qp = q_root_precise(r, P).unwrap();
        let s = leraykit::emcert::s_function_float(&Float::with_val(P, r), &qp);
        let bound = 16.0 / (3125.0 * r.powi(3));
        prop_assert!(s.to_f64() < bound);
        prop_assert!(s_function(r, 0.5 * q).unwrap() < s.to_f64());
    }

    #[test]
    fn s_decay_bound(r in 0.67f64..200.0, n in 1u32..5000) {
        let s = s_function(r, n as f64).unwrap();
        prop_assert!(s.abs() <= r / (n as f64).powi(4) * (1.0 + 1e-12));
    }
}
