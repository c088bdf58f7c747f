use leraykit::specialfn::{
    digamma, gamma, hurwitz_zeta, ln_gamma, phi, phi_direct, phi_sandwich, phi_with_crosscheck,
    polygamma, polygamma_direct, polygamma_sandwich, theta, SpecialFnError,
};
use proptest::prelude::*;
use rug::float::Constant;
use rug::Float;

const TOL: f64 = 1e-12;
const P: u32 = 256;

fn pi() -> Float {
    Float::with_val(P, Constant::Pi)
}

fn dist(a: &Float, b: &Float) -> f64 {
    Float::with_val(P, a - b).abs().to_f64()
}

/// sum_{j=1}^{N} 1/j^2 with the tail enclosed in [1/(N+1), 1/N].
fn zeta2_oracle(n: u64) -> (Float, f64) {
    let mut s = Float::new(P);
    for j in (1..=n).rev() {
        s += Float::with_val(P, j).square().recip();
    }
    let lo = 1.0 / (n as f64 + 1.0);
    let hi = 1.0 / n as f64;
    s += (lo + hi) / 2.0;
    (s, (hi - lo) / 2.0 + 1e-30)
}

#[test]
fn trigamma_at_one_against_direct_summation() {
    let v = polygamma(1, 1.0, TOL).unwrap();
    let (oracle, half) = zeta2_oracle(2_000_000);
    assert!(dist(v.value(), &oracle) <= v.radius() + half);
    let exact = pi().square() / 6u32;
    assert!(dist(v.value(), &exact) <= v.radius());
    assert!(v.radius() <= TOL);
}

#[test]
fn digamma_at_one_against_harmonic_minus_log() {
    // H_n - ln n - 1/(2n) = γ + 1/(12 n^2) + O(n^-4)
    let n = 100_000u64;
    let mut h = Float::new(P);
    for j in (1..=n).rev() {
        h += Float::with_val(P, j).recip();
    }
    let nf = Float::with_val(P, n);
    let gamma_e = h - nf.clone().ln() - Float::with_val(P, 2u32 * &nf).recip();
    let v = digamma(1.0, TOL).unwrap();
    let d = Float::with_val(P, v.value() + &gamma_e).abs().to_f64();
    assert!(d <= v.radius() + 1.0 / (12.0 * (n as f64).powi(2)) * 1.01, "d = {d:e}");
    assert!((v.value_f64() + 0.5772156649015329).abs() < 1e-15);
}

#[test]
fn against_mpfr_oracles() {
    for &x in &[0.01, 0.3, 1.0, 2.5, 17.0, 123.456, 1e5] {
        let xf = Float::with_val(P, x);
        let d = digamma(x, TOL).unwrap();
        assert!(dist(d.value(), &xf.clone().digamma()) <= d.radius(), "ψ({x})");
        let l = ln_gamma(x, TOL).unwrap();
        assert!(dist(l.value(), &xf.clone().ln_gamma()) <= l.radius(), "lnΓ({x})");
    }
    let g = gamma(4.5, TOL).unwrap();
    assert!(dist(g.value(), &Float::with_val(P, 4.5).gamma()) <= g.radius());
    // ζ(s, 1) = ζ(s)
    for s in [2u32, 3, 5, 8] {
        let z = hurwitz_zeta(s, 1.0).unwrap();
        assert!(dist(z.value(), &Float::with_val(P, Float::zeta_u(s))) <= z.radius());
    }
}

#[test]
fn tetragamma_is_negative() {
    for &r in &[0.5, 1.0, 5.0, 50.0] {
        assert!(polygamma(2, r, TOL).unwrap().is_negative());
    }
}

#[test]
fn digamma_shifted_matches_recurrence_exactly() {
    let a = digamma(2.25, TOL).unwrap();
    let b = digamma(3.25, TOL).unwrap();
    assert!((b.value_f64() - a.value_f64() - 1.0 / 2.25).abs() < 1e-15);
}

#[test]
fn domain_and_tolerance_errors() {
    assert!(matches!(polygamma(1, -0.5, TOL), Err(SpecialFnError::Domain(_))));
    assert!(matches!(polygamma(2, 0.0, TOL), Err(SpecialFnError::Domain(_))));
    assert!(matches!(polygamma(1, 1.0, 0.0), Err(SpecialFnError::Domain(_))));
    assert!(matches!(polygamma(1, 1.0, 1e-200), Err(SpecialFnError::ToleranceUnreachable { .. })));
    assert!(matches!(phi(0.0, 1.0, TOL), Err(SpecialFnError::Domain(_))));
    assert!(matches!(theta(-2.0, 0.0, TOL), Err(SpecialFnError::Domain(_))));
    assert!(matches!(phi_sandwich(0.5, 2.0), Err(SpecialFnError::Domain(_))));
    assert!(matches!(polygamma_sandwich(3, 1.0), Err(SpecialFnError::Domain(_))));
    assert!(matches!(polygamma_sandwich(1, 0.0), Err(SpecialFnError::Domain(_))));
}

#[test]
fn phi_tends_to_one() {
    let v = phi(1e6, 0.0, TOL).unwrap();
    assert!((v.value_f64() - 1.0).abs() < 1e-4);
}

#[test]
fn phi_at_one_closed_form() {
    let v = phi(1.0, 0.0, TOL).unwrap();
    let exact = pi().square() / 3u32 - Float::with_val(P, Float::zeta_u(3)) * 2u32;
    assert!(dist(v.value(), &exact) <= v.radius());
    assert!((v.value_f64() - 0.8858).abs() < 1e-4);
}

#[test]
fn phi_two_thirds_exceeds_one() {
    for &r in &[0.7, 1.0, 10.0, 100.0] {
        assert!(phi(r, 2.0 / 3.0, TOL).unwrap().certainly_gt_f64(1.0), "r = {r}");
    }
}

#[test]
fn phi_crosscheck_reports_direct_route() {
    let e = phi_with_crosscheck(3.0, 0.25, TOL).unwrap();
    assert!(e.direct_terms >= 4096);
    let d = Float::with_val(P, e.value.value() - e.direct.value()).abs().to_f64();
    assert!(d <= e.value.radius() + e.direct.radius());
    assert!(e.direct.radius() < 1e-6);
}

#[test]
fn theta_identities() {
    let t = theta(1.0, 0.0, TOL).unwrap();
    let exact = pi().square() / 6u32 - 1u32;
    assert!(dist(t.value(), &exact) <= t.radius());
    assert_eq!(theta(0.0, 0.7, TOL).unwrap().value_f64(), 0.0);
    assert_eq!(theta(0.0, -3.0, TOL).unwrap().value_f64(), 0.0);
}

#[test]
fn theta_derivative_is_phi() {
    let (r, q) = (2.0, 0.5);
    let h = 1e-3;
    let fd = (theta(r + h, q, TOL).unwrap().value_f64() - theta(r - h, q, TOL).unwrap().value_f64()) / (2.0 * h);
    let p = phi(r, q, TOL).unwrap().value_f64();
    // O(h^2) with a modest third derivative
    assert!((fd - p).abs() < 1e-6, "fd {fd} phi {p}");
}

#[test]
fn polygamma_sandwich_examples() {
    let (lo, hi) = polygamma_sandwich(1, 1.0).unwrap();
    assert_eq!((lo, hi), (1.5, 2.0));
    let v = polygamma(1, 1.0, TOL).unwrap().value_f64();
    assert!(lo < v && v < hi);

    let (lo, hi) = polygamma_sandwich(2, 2.0).unwrap();
    assert_eq!((lo, hi), (0.375, 0.5));
    let v = -polygamma(2, 2.0, TOL).unwrap().value_f64();
    let oracle = -polygamma_direct(2, 2.0, 100_000).unwrap().value_f64();
    assert!((v - oracle).abs() < 1e-9);
    assert!(lo < v && v < hi);

    let (lo, hi) = polygamma_sandwich(1, 1e12).unwrap();
    assert!(lo < 1e-11 && hi < 1e-11);
}

#[test]
fn phi_sandwich_examples() {
    let (lo, hi) = phi_sandwich(5.0, 0.0).unwrap();
    let v = phi(5.0, 0.0, TOL).unwrap();
    assert!(v.certainly_gt_f64(lo) && v.certainly_lt_f64(hi));
    let (lo, hi) = phi_sandwich(1e8, 0.3).unwrap();
    assert!((lo - 1.0).abs() < 1e-7 && (hi - 1.0).abs() < 1e-7);
}

#[test]
fn phi_direct_requires_monotone_tail() {
    assert!(phi_direct(100.0, 0.0, 10).is_err());
    assert!(phi_direct(1.0, 0.0, 100).is_ok());
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn monotone_tail_signs_on_log_grid() {
    for &q in &[0.0, 1.0] {
        for r in log_grid(q + 0.01, 1e4, 40) {
            let v = phi(r, q, TOL).unwrap();
            assert!(v.certainly_lt_f64(1.0), "Φ({r}, {q}) = {v}");
        }
    }
    for r in log_grid(2.0 / 3.0 + 0.01, 1e4, 40) {
        let v = phi(r, 2.0 / 3.0, TOL).unwrap();
        assert!(v.certainly_gt_f64(1.0), "Φ({r}, 2/3) = {v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tail_bound_is_sound(m in 1u32..4, x in 0.05f64..40.0, n in 50u64..400) {
        let a = polygamma_direct(m, x, n).unwrap();
        let b = polygamma_direct(m, x, 10 * n).unwrap();
        let d = Float::with_val(P, a.value() - b.value()).abs().to_f64();
        prop_assert!(d <= a.radius() + b.radius());
        let exact = polygamma(m, x, 1e-10).unwrap();
        let d = Float::with_val(P, a.value() - exact.value()).abs().to_f64();
        prop_assert!(d <= a.radius() + exact.radius());
    }

    #[test]
    fn series_matches_polygamma_combination(r in 0.05f64..200.0, q in -3.0f64..3.0) {
        prop_assume!(r + 1.0 - q > 0.05 && (r - q).abs() > 1e-3);
        let v = phi(r, q, TOL).unwrap();
        let a = r + 1.0 - q;
        let p1 = polygamma(1, a, TOL).unwrap();
        let p2 = polygamma(2, a, TOL).unwrap();
        let combo = p1.mul_f64(2.0 * r).add(&p2.mul_f64(r * r));
        let d = Float::with_val(P, v.value() - combo.value()).abs().to_f64();
        prop_assert!(d <= v.radius() + combo.radius() + 1e-14 * combo.value_f64().abs());
    }

    #[test]
    fn sandwich_contains_phi(q in -3.0f64..3.0, t in 0.1f64..500.0) {
        let r = (q - 1.0).max(0.0) + t;
        prop_assume!((r - q).abs() > 1e-3);
        let (lo, hi) = phi_sandwich(r, q).unwrap();
        let v = phi(r, q, TOL).unwrap();
        prop_assert!(v.certainly_gt_f64(lo) && v.certainly_lt_f64(hi), "{} not in ({lo}, {hi})", v);
    }
}
