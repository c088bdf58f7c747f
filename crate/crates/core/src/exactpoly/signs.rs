use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExactPolyError, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffSign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "-")]
    Neg,
}

impl CoeffSign {
    pub fn of(value: &rug::Rational) -> Self {
        match value.cmp0() {
            std::cmp::Ordering::Greater => Self::Pos,
            std::cmp::Ordering::Equal => Self::Zero,
            std::cmp::Ordering::Less => Self::Neg,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::Pos => '+',
            Self::Zero => '0',
            Self::Neg => '-',
        }
    }

    pub fn parse(c: char) -> Option<Self> {
        match c {
            '+' => Some(Self::Pos),
            '0' => Some(Self::Zero),
            '-' => Some(Self::Neg),
            _ => None,
        }
    }
}

impl fmt::Display for CoeffSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Signs of all coefficients, lowest degree first.
pub fn sign_pattern(p: &Poly) -> Vec<CoeffSign> {
    p.coeffs().iter().map(CoeffSign::of).collect()
}

/// Number of sign alternations in a pattern, skipping zeros.
pub fn sign_changes(pattern: &[CoeffSign]) -> usize {
    let mut last = None;
    let mut count = 0;
    for &s in pattern {
        if s == CoeffSign::Zero {
            continue;
        }
        if last.is_some_and(|l| l != s) {
            count += 1;
        }
        last = Some(s);
    }
    count
}

/// Descartes' rule of signs: an upper bound on the number of positive real
/// roots counted with multiplicity, with the same parity.
pub fn descartes_sign_changes(p: &Poly) -> Result<usize, ExactPolyError> {
    if p.is_zero() {
        return Err(ExactPolyError::ZeroPolynomial);
    }
    Ok(sign_changes(&sign_pattern(p)))
}
