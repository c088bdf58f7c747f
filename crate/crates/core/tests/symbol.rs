use leraykit::symbol::{
    boundedness_interval, delta, hf_limit, holder_conjugate, holder_partner, leray_norm, log_symbol_value, leray_norm_with,
    monotonicity_scan, sub_leray_norm, sup_over_modes, symbol_value, HolderReparam, MeasureTag, Monotonicity,
    NormMethod, SupOptions, SymbolError, SymbolQuery,
};
use proptest::prelude::*;
use rug::Float;

const TOL: f64 = 1e-12;

/// Direct product form of J with MPFR's Γ, as an independent oracle.
fn j_oracle(d: f64, gamma: f64, k: u64) -> f64 {
    let p = 256;
    let g = Float::with_val(p, gamma);
    let a1 = Float::with_val(p, 2 * k + 1) + d;
    let a1 = a1 / &g;
    let a2 = Float::with_val(p, 2 * k + 2) - &a1;
    let lg = a1.ln_gamma() + a2.clone().ln_gamma() - Float::with_val(p, k + 1).ln_gamma() * 2u32;
    let lg = lg + Float::with_val(p, &g / 2u32).ln() * (2 * k + 2) - a2 * (g - 1u32).ln();
    lg.exp().to_f64()
}

#[test]
fn pairing_value_at_mode_zero() {
    for gamma in [1.5, 3.0, 7.0] {
        let j = symbol_value(&SymbolQuery::new(gamma, gamma - 1.0, 0), TOL).unwrap();
        let want = gamma * gamma / (4.0 * (gamma - 1.0));
        assert!((j.value_f64() - want).abs() < 1e-14, "γ = {gamma}");
    }
    assert!(symbol_value(&SymbolQuery::new(3.0, 2.0, 0), TOL).unwrap().contains(9.0 / 8.0));
}

#[test]
fn agrees_with_mpfr_gamma_oracle() {
    for &(d, gamma, k) in &[(2.0, 5.0, 0), (2.0, 5.0, 17), (-0.5, 1.3, 3), (8.0, 6.0, 250), (0.2, 2.0, 1000)] {
        let j = symbol_value(&SymbolQuery::new(gamma, d, k), TOL).unwrap();
        let o = j_oracle(d, gamma, k);
        assert!(((j.value_f64() - o) / o).abs() < 1e-14, "J({d},{gamma},{k})");
    }
}

#[test]
fn heisenberg_constant() {
    for k in 0..=50 {
        let j = symbol_value(&SymbolQuery::new(2.0, 1.0, k), TOL).unwrap();
        assert!(j.contains(1.0) || (j.value_f64() - 1.0).abs() <= 1e-12);
    }
    assert_eq!(monotonicity_scan(2.0, 1.0, 50, TOL).unwrap(), Monotonicity::Constant);
}

#[test]
fn preferred_profile_increases_towards_limit() {
    let values: Vec<f64> =
        (0..=60).map(|k| symbol_value(&SymbolQuery::new(5.0, 2.0, k), TOL).unwrap().value_f64()).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values[60] < 1.25);
    assert!(1.25 - values[60] < 1e-2);
}

#[test]
fn unbounded_modes_are_reported() {
    let err = symbol_value(&SymbolQuery::new(1.5, 10.0, 0), TOL).unwrap_err();
    assert!(matches!(err, SymbolError::UnboundedMode { k: 0, .. }));
    assert!(err.to_string().contains("I_0(1.5) = (−1, 2)"), "{err}");
    assert!(matches!(symbol_value(&SymbolQuery::new(1.0, 0.0, 0), TOL), Err(SymbolError::Domain(_))));
    assert!(matches!(leray_norm(3.0, MeasureTag::Generic(5.0), TOL), Err(SymbolError::Unbounded { .. })));
}

#[test]
fn interval_examples_and_nesting() {
    let i = boundedness_interval(2.0, 0).unwrap();
    assert_eq!((i.lo, i.hi), (-1.0, 3.0));
    let i = boundedness_interval(7.0, 0).unwrap();
    assert_eq!((i.lo, i.hi), (-1.0, 13.0));
    let i = boundedness_interval(2.0, 1).unwrap();
    assert_eq!((i.lo, i.hi), (-3.0, 5.0));
    for gamma in [1.1, 2.0, 3.7] {
        for k in 0..30 {
            let a = boundedness_interval(gamma, k).unwrap();
            let b = boundedness_interval(gamma, k + 1).unwrap();
            assert!(a.is_subset_of(&b));
        }
    }
}

#[test]
fn holder_partner_examples() {
    let gamma = 3.0;
    let gs = holder_conjugate(gamma).unwrap();
    let (g2, d) = holder_partner(gamma, gamma - 1.0).unwrap();
    assert_eq!(g2, gs);
    assert!((d - (gs - 1.0)).abs() < 1e-15);
    let (_, d) = holder_partner(gamma, (gamma + 1.0) / 3.0).unwrap();
    assert!((d - (gs + 1.0) / 3.0).abs() < 1e-15);
    let (_, d) = holder_partner(gamma, 1.0).unwrap();
    assert_eq!(d, 1.0);
    assert!((holder_conjugate(gs).unwrap() - gamma).abs() < 1e-15);
}

#[test]
fn hf_limit_examples() {
    assert_eq!(hf_limit(2.0).unwrap(), 1.0);
    assert!((hf_limit(5.0).unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
    assert!((hf_limit(3.0).unwrap() - hf_limit(1.5).unwrap()).abs() < 1e-15);
    assert!(hf_limit(0.5).is_err());
}

#[test]
fn norm_closed_forms() {
    let n = leray_norm(2.0, MeasureTag::Generic(0.0), TOL).unwrap();
    assert!((n.value.value_f64() - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-14);
    assert_eq!(n.method.tag(), "closed-form");

    let n = leray_norm(3.0, MeasureTag::Pairing, TOL).unwrap();
    assert!((n.value.value_f64() - 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-14);
    assert!((n.value.value_f64() - 1.06066).abs() < 1e-5);

    let n = leray_norm(4.0, MeasureTag::Preferred, TOL).unwrap();
    assert!((n.value.value_f64() - 1.07457).abs() < 1e-5);
    let n = leray_norm(5.0, MeasureTag::Preferred, TOL).unwrap();
    assert!((n.value.value_f64() - 1.25f64.sqrt()).abs() < 1e-14);

    assert!((leray_norm(2.0, MeasureTag::Pairing, TOL).unwrap().value.value_f64() - 1.0).abs() < 1e-15);
}

#[test]
fn lebesgue_formula_matches_mode_zero() {
    for gamma in [1.2, 1.5, 3.0, 6.0] {
        let n = leray_norm(gamma, MeasureTag::Lebesgue, TOL).unwrap();
        let s = sub_leray_norm(&SymbolQuery::new(gamma, 1.0, 0), TOL).unwrap();
        assert!((n.value.value_f64() - s.value_f64()).abs() < 1e-13, "γ = {gamma}");
    }
    for gamma in [2.0 - 1e-6, 2.0 + 1e-6] {
        let n = leray_norm(gamma, MeasureTag::Lebesgue, TOL).unwrap();
        assert!((n.value.value_f64() - 1.0).abs() < 1e-4);
    }
}

#[test]
fn heisenberg_formula_is_continuous_at_one() {
    for d in [1.0 - 1e-6, 1.0 + 1e-6] {
        let n = leray_norm(2.0, MeasureTag::Generic(d), TOL).unwrap();
        assert!((n.value.value_f64() - 1.0).abs() < 1e-4);
    }
}

#[test]
fn decreasing_regimes_use_mode_zero() {
    for &(gamma, d) in &[(5.0, 0.5), (5.0, 6.0), (1.5, 0.2), (1.5, 1.5), (3.0, 13.0 / 3.0 - 1.0)] {
        let n = leray_norm(gamma, MeasureTag::Generic(d), TOL).unwrap();
        let s0 = sub_leray_norm(&SymbolQuery::new(gamma, d, 0), TOL).unwrap();
        assert!((n.value.value_f64() - s0.value_f64()).abs() < 1e-13);
        let sup = sup_over_modes(gamma, d, 0..=80, TOL).unwrap();
        assert_eq!(sup.argmax_k, 0);
    }
}

#[test]
fn sup_search_between_regimes() {
    // γ = 5, d = 3 lies between the preferred exponent and the pairing one
    let n = leray_norm(5.0, MeasureTag::Generic(3.0), TOL).unwrap();
    match n.method {
        NormMethod::SupSearch { heuristic, cutoff_k, .. } => {
            assert!(heuristic);
            assert!(cutoff_k > 0);
        }
        other => panic!("unexpected method {other:?}"),
    }
    let lim = hf_limit(5.0).unwrap();
    let sup = sup_over_modes(5.0, 3.0, 0..=400, TOL).unwrap();
    assert!(n.value.value_f64() >= sup.max.value_f64() - 1e-12);
    assert!(n.value.value_f64() >= lim - 1e-12);
}

#[test]
fn sup_search_respects_cap() {
    let opts = SupOptions { cutoff_tol: 1e-12, window: 20, k_cap: 300, chunk: 64 };
    let n = leray_norm_with(5.0, MeasureTag::Generic(2.5), TOL, &opts).unwrap();
    match n.method {
        NormMethod::SupSearch { cutoff_reached, cutoff_k, .. } => {
            assert!(!cutoff_reached);
            assert_eq!(cutoff_k, 300);
        }
        other => panic!("unexpected method {other:?}"),
    }
}

#[test]
fn monotonicity_examples() {
    assert_eq!(monotonicity_scan(5.0, 4.0, 60, TOL).unwrap(), Monotonicity::StrictlyDecreasing);
    assert_eq!(monotonicity_scan(5.0, 2.0, 60, TOL).unwrap(), Monotonicity::StrictlyIncreasing);
    assert!(matches!(monotonicity_scan(5.0, 50.0, 3, TOL), Err(SymbolError::UnboundedMode { .. })));
    assert!(monotonicity_scan(5.0, 2.0, 0, TOL).is_err());
}

#[test]
fn heisenberg_reflection() {
    for &d in &[-0.7, 0.0, 0.3, 0.9, 1.6] {
        for k in [0u64, 1, 5, 40] {
            let a = symbol_value(&SymbolQuery::new(2.0, d, k), TOL).unwrap();
            let b = symbol_value(&SymbolQuery::new(2.0, 2.0 - d, k), TOL).unwrap();
            assert!((a.value_f64() - b.value_f64()).abs() <= 1e-13 * a.value_f64(), "d = {d}, k = {k}");
        }
    }
}

#[test]
fn holder_reparam_finiteness() {
    let h = HolderReparam::from_q(0.5);
    assert!(h.all_modes_finite(3.0));
    assert!(!HolderReparam::from_q(4.0).all_modes_finite(3.0));
    assert_eq!(delta(h.a, 3.0), h.d(3.0));
    assert!(matches!(HolderReparam::from_d(2.0, 1.0), Err(SymbolError::DegenerateGamma)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn holder_symmetry(gamma in 1.05f64..4.0, u in -0.95f64..0.95, k in 0u64..=40) {
        prop_assume!((gamma - 2.0).abs() > 1e-3);
        let q = u * gamma / (gamma - 2.0).abs();
        let h = HolderReparam::from_q(q);
        let gs = holder_conjugate(gamma).unwrap();
        let a = symbol_value(&SymbolQuery::new(gamma, h.d(gamma), k), TOL).unwrap();
        let b = symbol_value(&SymbolQuery::new(gs, h.d(gs), k), TOL).unwrap();
        let rel = (a.value_f64() - b.value_f64()).abs() / a.value_f64();
        prop_assert!(rel <= 1e-10, "rel {rel:e}");
    }

    #[test]
    fn positive_wherever_finite(gamma in 1.01f64..8.0, t in 0.001f64..0.999, k in 0u64..200) {
        let i = boundedness_interval(gamma, k).unwrap();
        let d = i.lo + t * (i.hi - i.lo);
        // J may exceed the f64 range, so check it through its logarithm
        let lj = log_symbol_value(&SymbolQuery::new(gamma, d, k)).unwrap();
        prop_assert!(lj.value_f64().is_finite());
        prop_assert!(lj.radius() < 1e-20 * lj.value_f64().abs().max(1.0));
    }
}
