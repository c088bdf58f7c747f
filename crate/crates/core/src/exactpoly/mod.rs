//! Exact rational arithmetic and polynomial algebra.
//!
//! Every coefficient is a [`BigRational`] kept in lowest terms with a positive
//! denominator, so structural equality is value equality. Polynomials are
//! dense in ascending-degree order; bivariate polynomials are sparse.

mod bivariate;
mod poly;
mod ratfunc;
mod signs;

pub use bivariate::BivariatePolynomial;
pub use poly::Poly;
pub use ratfunc::{RatFunc, RatLog};
pub use signs::{descartes_sign_changes, sign_changes, sign_pattern, CoeffSign};

/// Arbitrary-precision rational backed by GMP.
pub type BigRational = rug::Rational;

use rug::Integer;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactPolyError {
    #[error("the zero polynomial has no sign changes")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact; remainder has degree {0}")]
    InexactDivision(usize),
    #[error("malformed rational literal {0:?}")]
    Parse(String),
}

/// Parses `"n"`, `"n/d"` or `"n/b^e"` (the last form for tabulated powers).
pub fn parse_rational(text: &str) -> Result<BigRational, ExactPolyError> {
    let err = || ExactPolyError::Parse(text.to_string());
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (cleaned.as_str(), None),
    };
    let num: Integer = num.parse().map_err(|_| err())?;
    let den: Integer = match den {
        None => Integer::from(1),
        Some(d) => match d.split_once('^') {
            Some((base, exp)) => {
                let base: Integer = base.parse().map_err(|_| err())?;
                let exp: u32 = exp.parse().map_err(|_| err())?;
                Integer::from(rug::ops::Pow::pow(&base, exp))
            }
            None => d.parse().map_err(|_| err())?,
        },
    };
    if den == 0 {
        return Err(err());
    }
    Ok(BigRational::from((num, den)))
}

/// Always renders as `"num/den"`, including integers (`"5/1"`).
pub fn rational_to_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from(n)
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::from((n, d))
}
