use std::ops::RangeInclusive;

use rayon::prelude::*;
use rug::float::Constant;
use rug::Float;
use serde::Serialize;

use super::{
    boundedness_interval, check_gamma, hf_limit_bounded, sub_leray_norm, MeasureTag, Result,
    SymbolError, SymbolQuery,
};
use crate::specialfn::{unit, up};
use crate::specialfn::{precision_bits, BoundedFloat};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NormMethod {
    /// One of the closed-form norm formulas.
    ClosedForm { formula: &'static str },
    /// Maximum of `sqrt J` over a head of modes and the high-frequency limit.
    /// The cutoff rule is a heuristic: the limit is known but not its rate.
    SupSearch {
        argmax_k: Option<u64>,
        cutoff_k: u64,
        limit_dominates: bool,
        cutoff_reached: bool,
        heuristic: bool,
    },
}

impl NormMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            NormMethod::ClosedForm { .. } => "closed-form",
            NormMethod::SupSearch { .. } => "sup-search",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub gamma: f64,
    pub d: f64,
    pub measure: MeasureTag,
    pub value: BoundedFloat,
    pub method: NormMethod,
}

#[derive(Clone, Copy, Debug)]
pub struct SupOptions {
    /// Distance to the high-frequency limit below which the search may stop.
    pub cutoff_tol: f64,
    /// Consecutive same-side, non-receding approaches to the limit required.
    pub window: usize,
    pub k_cap: u64,
    pub chunk: u64,
}

impl Default for SupOptions {
    fn default() -> Self {
        Self { cutoff_tol: 1e-4, window: 20, k_cap: 50_000, chunk: 512 }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0)
}

/// On these `(γ,d)` the mode norms decrease in k, so the sup sits at k = 0.
pub fn in_decreasing_regime(gamma: f64, d: f64) -> bool {
    let top = 2.0 * gamma - 1.0;
    if gamma > 2.0 {
        (d > -1.0 && d <= 1.0) || (d >= gamma - 1.0 && d < top)
    } else if gamma < 2.0 {
        (d > -1.0 && d <= gamma - 1.0) || (d >= 1.0 && d < top)
    } else {
        false
    }
}

/// Norm of the full transform on `L²(M_γ, μ_d)`.
pub fn leray_norm(gamma: f64, measure: MeasureTag, tol: f64) -> Result<NormReport> {
    leray_norm_with(gamma, measure, tol, &SupOptions::default())
}

pub fn leray_norm_with(gamma: f64, measure: MeasureTag, tol: f64, opts: &SupOptions) -> Result<NormReport> {
    crate::specialfn::check_tol(tol)?;
    check_gamma(gamma)?;
    let d = measure.d(gamma);
    let i0 = boundedness_interval(gamma, 0)?;
    if !i0.contains(d) {
        return Err(SymbolError::Unbounded { gamma, d, interval: i0 });
    }
    let report = |value: BoundedFloat, method| NormReport { gamma, d, measure, value, method };
    let closed = |value: BoundedFloat, formula| -> Result<NormReport> {
        if value.radius() > tol {
            return Err(crate::specialfn::SpecialFnError::ToleranceUnreachable { tol, achieved: value.radius() }.into());
        }
        Ok(report(value, NormMethod::ClosedForm { formula }))
    };

    if gamma == 2.0 {
        return closed(heisenberg_norm(d), "gamma-2");
    }
    if close(d, 1.0) {
        return closed(lebesgue_norm(gamma), "lebesgue");
    }
    if matches!(measure, MeasureTag::Pairing) || close(d, gamma - 1.0) {
        let g = BoundedFloat::exact(gamma);
        let v = g.div(&g.sub(&BoundedFloat::exact(1.0)).sqrt().mul_f64(2.0));
        return closed(v, "pairing");
    }
    if matches!(measure, MeasureTag::Preferred) || close(d, (gamma + 1.0) / 3.0) {
        return closed(hf_limit_bounded(gamma), "preferred");
    }
    if in_decreasing_regime(gamma, d) {
        let v = sub_leray_norm(&SymbolQuery::new(gamma, d, 0), tol)?;
        return closed(v, "mode-zero");
    }
    let (value, method) = sup_search(gamma, d, tol, opts)?;
    Ok(report(value, method))
}

/// `sqrt(π/2 · (1-d) · sec(dπ/2))`, equal to 1 at d = 1.
fn heisenberg_norm(d: f64) -> BoundedFloat {
    if d == 1.0 {
        return BoundedFloat::exact(1.0);
    }
    let prec = precision_bits();
    let u = unit(prec);
    let pi = Float::with_val(prec, Constant::Pi);
    let x = Float::with_val(prec, &pi * d) / 2u32;
    let c = Float::with_val(prec, x.cos_ref());
    let v = (pi / 2u32 * (1.0 - d) / &c).sqrt();
    // relative error of cos from the argument's rounding, plus a few roundings
    let rel_c = 2.0 * u * x.to_f64().abs() / c.to_f64().abs() + u;
    let rel = 0.5 * (rel_c + 6.0 * u) + 2.0 * u;
    let r = up(v.to_f64().abs() * rel * 2.0);
    BoundedFloat::new(v, r)
}

/// `(γ-1)^(1/γ-1) · sqrt(π/4 · (γ-2) · γ · csc(2π/γ))`.
fn lebesgue_norm(gamma: f64) -> BoundedFloat {
    let prec = precision_bits();
    let u = unit(prec);
    let pi = Float::with_val(prec, Constant::Pi);
    let y = Float::with_val(prec, 2u32 * &pi) / gamma;
    let s = Float::with_val(prec, y.sin_ref());
    let inner = Float::with_val(prec, &pi / 4u32) * (gamma - 2.0) * gamma / &s;
    let gm1 = Float::with_val(prec, gamma - 1.0);
    let expo = Float::with_val(prec, 1.0 / Float::with_val(prec, gamma)) - 1u32;
    let v = rug::ops::Pow::pow(gm1, &expo) * inner.sqrt();
    let rel_s = 2.0 * u * y.to_f64().abs() / s.to_f64().abs() + u;
    let rel = 0.5 * (rel_s + 8.0 * u) + 8.0 * u * (1.0 + (gamma - 1.0).ln().abs());
    let r = up(v.to_f64().abs() * rel * 2.0);
    BoundedFloat::new(v, r)
}

fn sup_search(gamma: f64, d: f64, tol: f64, opts: &SupOptions) -> Result<(BoundedFloat, NormMethod)> {
    let limit = hf_limit_bounded(gamma);
    let lim = limit.value_f64();
    let mut best: Option<(u64, BoundedFloat)> = None;
    let mut run = 0usize;
    let mut last_gap = f64::INFINITY;
    let mut last_side = 0i8;
    let mut k0 = 0u64;
    let mut cutoff = None;
    while cutoff.is_none() && k0 <= opts.k_cap {
        let k1 = (k0 + opts.chunk - 1).min(opts.k_cap);
        let vals: Vec<Result<BoundedFloat>> = (k0..=k1)
            .into_par_iter()
            .map(|k| sub_leray_norm(&SymbolQuery::new(gamma, d, k), tol))
            .collect();
        for (k, v) in (k0..=k1).zip(vals) {
            let v = v?;
            if best.as_ref().is_none_or(|(_, b)| v.value() > b.value()) {
                best = Some((k, v.clone()));
            }
            let gap = v.value_f64() - lim;
            let side = if gap > 0.0 { 1 } else if gap < 0.0 { -1 } else { 0 };
            if side == last_side && gap.abs() <= last_gap {
                run += 1;
            } else {
                run = 1;
            }
            last_side = side;
            last_gap = gap.abs();
            if gap.abs() < opts.cutoff_tol && run >= opts.window {
                cutoff = Some(k);
                break;
            }
        }
        k0 = k1 + 1;
    }
    let (best_k, best_v) = best.expect("at least one mode evaluated");
    let cutoff_reached = cutoff.is_some();
    let cutoff_k = cutoff.unwrap_or(opts.k_cap);
    let limit_dominates = limit.value() >= best_v.value();
    let value = if limit_dominates { limit } else { best_v };
    Ok((
        value,
        NormMethod::SupSearch {
            argmax_k: (!limit_dominates).then_some(best_k),
            cutoff_k,
            limit_dominates,
            cutoff_reached,
            heuristic: true,
        },
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct SupResult {
    pub argmax_k: u64,
    pub max: BoundedFloat,
    pub values: Vec<BoundedFloat>,
    /// Whether the maximum is separated from every other value by the radii.
    pub strict: bool,
}

/// `max sqrt J(d,γ,k)` over a finite range of modes.
pub fn sup_over_modes(gamma: f64, d: f64, ks: RangeInclusive<u64>, tol: f64) -> Result<SupResult> {
    let start = *ks.start();
    let values: Vec<BoundedFloat> = ks
        .into_par_iter()
        .map(|k| sub_leray_norm(&SymbolQuery::new(gamma, d, k), tol))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(SymbolError::Domain("empty range of modes".into()));
    }
    let (i, max) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value().partial_cmp(b.1.value()).expect("finite values"))
        .map(|(i, v)| (i, v.clone()))
        .expect("nonempty");
    let strict = values.iter().enumerate().all(|(j, v)| j == i || v.certainly_lt(&max));
    Ok(SupResult { argmax_k: start + i as u64, max, values, strict })
}
