use rayon::prelude::*;
use serde::Serialize;

use super::{boundedness_interval, symbol_value, Result, SymbolError, SymbolQuery};
use crate::specialfn::BoundedFloat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Monotonicity {
    StrictlyDecreasing,
    StrictlyIncreasing,
    /// `turning_k` is the first interior extremum.
    NonMonotone { turning_k: u64 },
    Constant,
}

/// `J(d,γ,k)` for `k = 0..=k_max`, evaluated in parallel, in order.
pub fn symbol_values(gamma: f64, d: f64, k_max: u64, tol: f64) -> Result<Vec<BoundedFloat>> {
    (0..=k_max)
        .into_par_iter()
        .map(|k| symbol_value(&SymbolQuery::new(gamma, d, k), tol))
        .collect()
}

/// Classifies `k ↦ J(d,γ,k)` on `0..=k_max`; every comparison must be
/// separated by the error radii.
///
/// `Constant` is reported only for γ = 2, d = 1, where every value is 1.
pub fn monotonicity_scan(gamma: f64, d: f64, k_max: u64, tol: f64) -> Result<Monotonicity> {
    if k_max == 0 {
        return Err(SymbolError::Domain("monotonicity needs k_max >= 1".into()));
    }
    // the intervals are nested, so k = 0 is the binding constraint
    let i0 = boundedness_interval(gamma, 0)?;
    if !i0.contains(d) {
        return Err(SymbolError::UnboundedMode { gamma, d, k: 0, interval: i0 });
    }
    let values = symbol_values(gamma, d, k_max, tol)?;
    if gamma == 2.0 && d == 1.0 {
        if let Some(k) = values.iter().position(|v| !v.contains(1.0)) {
            return Err(SymbolError::Inconclusive { k: k as u64 });
        }
        return Ok(Monotonicity::Constant);
    }
    let mut first_dir = None;
    for (k, w) in values.windows(2).enumerate() {
        let dir = if w[0].certainly_lt(&w[1]) {
            1
        } else if w[1].certainly_lt(&w[0]) {
            -1
        } else {
            return Err(SymbolError::Inconclusive { k: k as u64 });
        };
        match first_dir {
            None => first_dir = Some(dir),
            Some(f) if f != dir => return Ok(Monotonicity::NonMonotone { turning_k: k as u64 }),
            _ => {}
        }
    }
    Ok(match first_dir {
        Some(1) => Monotonicity::StrictlyIncreasing,
        _ => Monotonicity::StrictlyDecreasing,
    })
}
