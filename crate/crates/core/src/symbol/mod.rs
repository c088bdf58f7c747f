//! The symbol function
//!
//! `J(d,γ,k) = Γ(a₁)Γ(a₂)/Γ(k+1)² · (γ/2)^(2k+2) · (γ-1)^(-a₂)`,
//! `a₁ = (2k+1+d)/γ`, `a₂ = 2k+2-a₁`,
//!
//! whose square root is the norm of the k-th Fourier-mode operator on
//! `L²(M_γ, μ_d)`, together with its measures, symmetries and sup-norms.

mod norm;
mod scan;

use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::specialfn::{ln_gamma_bounded, precision_bits, BoundedFloat, SpecialFnError};

pub use norm::{leray_norm, leray_norm_with, sup_over_modes, NormMethod, NormReport, SupOptions, SupResult};
pub use scan::{monotonicity_scan, symbol_values, Monotonicity};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolError {
    #[error("{0}")]
    Domain(String),
    #[error("d = {d} ∉ I_{k}({gamma}) = {interval}; the mode-{k} operator is unbounded")]
    UnboundedMode { gamma: f64, d: f64, k: u64, interval: Interval },
    #[error("d = {d} ∉ I_0({gamma}) = {interval}; the transform is unbounded")]
    Unbounded { gamma: f64, d: f64, interval: Interval },
    #[error("γ = 2 has no unique Hölder partner: δ_a(2) = 1 for every a")]
    DegenerateGamma,
    #[error("values at k = {k} and k = {} are not separated by their error radii", k + 1)]
    Inconclusive { k: u64 },
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

pub type Result<T> = std::result::Result<T, SymbolError>;

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_num(self.lo), fmt_num(self.hi))
    }
}

fn fmt_num(x: f64) -> String {
    if x < 0.0 {
        format!("−{}", -x)
    } else {
        format!("{x}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolQuery {
    pub gamma: f64,
    pub d: f64,
    pub k: u64,
}

impl SymbolQuery {
    pub fn new(gamma: f64, d: f64, k: u64) -> Self {
        Self { gamma, d, k }
    }

    pub fn is_finite(&self) -> bool {
        boundedness_interval(self.gamma, self.k).is_ok_and(|i| i.contains(self.d))
    }
}

/// Distinguished measures `μ_d`, or a generic exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "d")]
pub enum MeasureTag {
    Generic(f64),
    /// `d = γ - 1`
    Pairing,
    /// `d = (γ + 1)/3`
    Preferred,
    /// `d = (5γ - 7)/3`
    DualPreferred,
    /// `d = 1`
    Lebesgue,
}

impl MeasureTag {
    pub fn d(&self, gamma: f64) -> f64 {
        match *self {
            MeasureTag::Generic(d) => d,
            MeasureTag::Pairing => gamma - 1.0,
            MeasureTag::Preferred => (gamma + 1.0) / 3.0,
            MeasureTag::DualPreferred => (5.0 * gamma - 7.0) / 3.0,
            MeasureTag::Lebesgue => 1.0,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "pairing" | "sigma" => Some(Self::Pairing),
            "preferred" | "nu" => Some(Self::Preferred),
            "dual-preferred" | "nu-star" => Some(Self::DualPreferred),
            "lebesgue" => Some(Self::Lebesgue),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MeasureTag::Generic(_) => "generic",
            MeasureTag::Pairing => "pairing",
            MeasureTag::Preferred => "preferred",
            MeasureTag::DualPreferred => "dual-preferred",
            MeasureTag::Lebesgue => "lebesgue",
        }
    }
}

/// Exponent written as `d = δ_a(γ) = a(γ-2)+1`, with `q = 1 - a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderReparam {
    pub a: f64,
    pub q: f64,
}

impl HolderReparam {
    pub fn from_a(a: f64) -> Self {
        Self { a, q: 1.0 - a }
    }

    pub fn from_q(q: f64) -> Self {
        Self { a: 1.0 - q, q }
    }

    /// Inverse of `δ_a`; fails at γ = 2 where `δ_a(2) = 1` for all `a`.
    pub fn from_d(gamma: f64, d: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if gamma == 2.0 {
            return Err(SymbolError::DegenerateGamma);
        }
        Ok(Self::from_a((d - 1.0) / (gamma - 2.0)))
    }

    pub fn d(&self, gamma: f64) -> f64 {
        delta(self.a, gamma)
    }

    /// Every mode is finite iff `|q| < γ/|γ-2|`.
    pub fn all_modes_finite(&self, gamma: f64) -> bool {
        gamma == 2.0 || self.q.abs() < gamma / (gamma - 2.0).abs()
    }
}

/// `δ_a(γ) = a(γ-2)+1`
pub fn delta(a: f64, gamma: f64) -> f64 {
    a * (gamma - 2.0) + 1.0
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 1.0 {
        Ok(())
    } else {
        Err(SymbolError::Domain(format!("γ must exceed 1, got {gamma}")))
    }
}

/// `I_k(γ) = (-2k-1, (2k+2)(γ-1)+1)`: `J(d,γ,k)` is finite iff `d ∈ I_k(γ)`.
pub fn boundedness_interval(gamma: f64, k: u64) -> Result<Interval> {
    check_gamma(gamma)?;
    let k = k as f64;
    Ok(Interval { lo: -2.0 * k - 1.0, hi: (2.0 * k + 2.0) * (gamma - 1.0) + 1.0 })
}

/// `γ* = γ/(γ-1)`
pub fn holder_conjugate(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(gamma / (gamma - 1.0))
}

/// The pair `(γ*, δ_a(γ*))` with `a = (d-1)/(γ-2)`, for which
/// `J(d,γ,k) = J(δ_a(γ*),γ*,k)` at every k.
pub fn holder_partner(gamma: f64, d: f64) -> Result<(f64, f64)> {
    let h = HolderReparam::from_d(gamma, d)?;
    let gs = holder_conjugate(gamma)?;
    Ok((gs, h.d(gs)))
}

/// `lim_k ‖L_k‖ = sqrt(γ / (2 sqrt(γ-1)))`
pub fn hf_limit(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok((gamma / (2.0 * (gamma - 1.0).sqrt())).sqrt())
}

pub(crate) fn hf_limit_bounded(gamma: f64) -> BoundedFloat {
    let g = BoundedFloat::exact(gamma);
    let gm1 = g.sub(&BoundedFloat::exact(1.0));
    g.div(&gm1.sqrt().mul_f64(2.0)).sqrt()
}

/// `log J(d,γ,k)`.
pub fn log_symbol_value(q: &SymbolQuery) -> Result<BoundedFloat> {
    let SymbolQuery { gamma, d, k } = *q;
    let interval = boundedness_interval(gamma, k)?;
    if !d.is_finite() {
        return Err(SymbolError::Domain(format!("d must be finite, got {d}")));
    }
    if !interval.contains(d) {
        return Err(SymbolError::UnboundedMode { gamma, d, k, interval });
    }
    let prec = precision_bits();
    let g = BoundedFloat::exact(gamma);
    let kf = Float::with_val(prec, k);
    let two_k_plus_2 = BoundedFloat::exact_float(Float::with_val(prec, &kf * 2u32) + 2u32);
    let num = BoundedFloat::exact_float(Float::with_val(prec, &kf * 2u32) + 1u32).add(&BoundedFloat::exact(d));
    let a1 = num.div(&g);
    let a2 = two_k_plus_2.sub(&a1);
    let lg1 = ln_gamma_bounded(&a1)?;
    let lg2 = ln_gamma_bounded(&a2)?;
    let lgk = ln_gamma_bounded(&BoundedFloat::exact_float(Float::with_val(prec, &kf + 1u32)))?;
    let ln_half_g = g.mul_f64(0.5).ln();
    let ln_gm1 = g.sub(&BoundedFloat::exact(1.0)).ln();
    let v = lg1
        .add(&lg2)
        .sub(&lgk.mul_f64(2.0))
        .add(&two_k_plus_2.mul(&ln_half_g))
        .sub(&a2.mul(&ln_gm1));
    Ok(v)
}

/// `J(d,γ,k) > 0`, computed through log Γ.
pub fn symbol_value(q: &SymbolQuery, tol: f64) -> Result<BoundedFloat> {
    crate::specialfn::check_tol(tol)?;
    let j = log_symbol_value(q)?.exp();
    if j.radius() > tol {
        return Err(SpecialFnError::ToleranceUnreachable { tol, achieved: j.radius() }.into());
    }
    Ok(j)
}

/// `‖L_k‖ = sqrt(J(d,γ,k))`.
pub fn sub_leray_norm(q: &SymbolQuery, tol: f64) -> Result<BoundedFloat> {
    crate::specialfn::check_tol(tol)?;
    let s = log_symbol_value(q)?.mul_f64(0.5).exp();
    if s.radius() > tol {
        return Err(SpecialFnError::ToleranceUnreachable { tol, achieved: s.radius() }.into());
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_examples() {
        assert_eq!(boundedness_interval(2.0, 0).unwrap(), Interval { lo: -1.0, hi: 3.0 });
        assert_eq!(boundedness_interval(2.0, 1).unwrap(), Interval { lo: -3.0, hi: 5.0 });
        assert_eq!(boundedness_interval(1.5, 0).unwrap().to_string(), "(−1, 2)");
        assert!(boundedness_interval(1.0, 0).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(holder_conjugate(2.0).unwrap(), 2.0);
        assert_eq!(holder_conjugate(3.0).unwrap(), 1.5);
        assert!((holder_conjugate(4.0 / 3.0).unwrap() - 4.0).abs() < 1e-15);
        assert!(matches!(holder_partner(2.0, 0.5), Err(SymbolError::DegenerateGamma)));
    }

    #[test]
    fn measure_names_round_trip() {
        for t in [MeasureTag::Pairing, MeasureTag::Preferred, MeasureTag::DualPreferred, MeasureTag::Lebesgue] {
            assert_eq!(MeasureTag::from_name(t.name()), Some(t));
        }
        assert_eq!(MeasureTag::Preferred.d(5.0), 2.0);
        assert_eq!(MeasureTag::DualPreferred.d(4.0), 13.0 / 3.0);
    }

    #[test]
    fn pairing_mode_zero_value() {
        // Γ(1) = Γ(2) = 1 leaves γ²/(4(γ-1))
        let j = symbol_value(&SymbolQuery::new(3.0, 2.0, 0), 1e-12).unwrap();
        assert!(j.contains(9.0 / 8.0));
    }
}
