use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, rational_to_string, ExactPolyError};

/// Dense univariate polynomial over Q. Index `n` holds the coefficient of `x^n`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and `coeffs().len() - 1` is the degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::from(1), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::new(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// `a + b x`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::new(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal derivative of the given order; order 0 is the identity.
    pub fn derivative(&self, order: usize) -> Self {
        if order >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = self.coeffs[order..]
            .iter()
            .enumerate()
            .map(|(i, c)| {
                // (i + order)! / i!
                let falling: rug::Integer = ((i + 1)..=(i + order))
                    .map(|v| rug::Integer::from(v))
                    .product();
                Rational::from(c * falling)
            })
            .collect();
        Self::new(coeffs)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn eval_float(&self, x: &rug::Float) -> rug::Float {
        let mut acc = rug::Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `self(inner(x))`
    pub fn compose(&self, inner: &Poly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ExactPolyError> {
        let lead = divisor.leading().ok_or(ExactPolyError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = Rational::from(&rem[i + dd] / lead);
            if c.cmp0().is_ne() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= Rational::from(&c * dc);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, ExactPolyError> {
        let (q, r) = self.div_rem(divisor)?;
        match r.degree() {
            None => Ok(q),
            Some(d) => Err(ExactPolyError::InexactDivision(d)),
        }
    }

    /// Coefficients as `"num/den"` strings, ascending exponent.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_string).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, ExactPolyError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.cmp0().is_eq() {
                continue;
            }
            let neg = c.cmp0().is_lt();
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match n {
                0 => write!(f, "{abs}")?,
                _ if abs == 1 => {}
                _ => write!(f, "{abs}*")?,
            }
            match n {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{n}")?,
            }
        }
        Ok(())
    }
}

fn zip_with(a: &Poly, b: &Poly, op: impl Fn(&Rational, &Rational) -> Rational) -> Poly {
    let zero = Rational::new();
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new(
        (0..n)
            .map(|i| op(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero)))
            .collect(),
    )
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        zip_with(self, rhs, |a, b| Rational::from(a + b))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        zip_with(self, rhs, |a, b| Rational::from(a - b))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        Poly::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, ratio};

    #[test]
    fn difference_of_squares() {
        let p = Poly::from_i64(&[1, 1]);
        let q = Poly::from_i64(&[-1, 1]);
        assert_eq!(&p * &q, Poly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn additive_identity_and_trimming() {
        let p = Poly::from_i64(&[3, 0, -2]);
        assert_eq!(&p + &Poly::zero(), p);
        assert_eq!(Poly::from_i64(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(Poly::from_i64(&[0, 0]).is_zero());
        assert_eq!((&p - &p).degree(), None);
    }

    #[test]
    fn mul_degree_is_additive() {
        let p = Poly::from_i64(&[1, 2, 3]);
        let q = Poly::from_i64(&[0, 0, 0, 5]);
        assert_eq!((&p * &q).degree(), Some(5));
    }

    #[test]
    fn derivative_basics() {
        let x2 = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(x2.derivative(1), Poly::from_i64(&[0, 2]));
        assert_eq!(x2.derivative(0), x2);
        assert!(x2.derivative(3).is_zero());
        let p = Poly::from_i64(&[7, 0, 0, 0, 1]);
        assert_eq!(p.derivative(3), Poly::from_i64(&[0, 24]));
    }

    #[test]
    fn horner_eval() {
        let p = Poly::from_i64(&[-1, 0, 1]);
        assert_eq!(p.eval(&int(1)), int(0));
        assert_eq!(p.eval(&ratio(1, 2)), ratio(-3, 4));
        assert_eq!(Poly::zero().eval(&int(3)), int(0));
    }

    #[test]
    fn compose_and_pow() {
        let p = Poly::from_i64(&[0, 0, 1]);
        let inner = Poly::from_i64(&[1, 1]);
        assert_eq!(p.compose(&inner), Poly::from_i64(&[1, 2, 1]));
        assert_eq!(inner.pow(3), Poly::from_i64(&[1, 3, 3, 1]));
        assert_eq!(inner.pow(0), Poly::one());
    }

    #[test]
    fn division() {
        let p = Poly::from_i64(&[-1, 0, 1]);
        let d = Poly::from_i64(&[-1, 1]);
        assert_eq!(p.exact_div(&d).unwrap(), Poly::from_i64(&[1, 1]));
        let (q, r) = Poly::from_i64(&[1, 0, 1]).div_rem(&d).unwrap();
        assert_eq!(q, Poly::from_i64(&[1, 1]));
        assert_eq!(r, Poly::from_i64(&[2]));
        assert_eq!(
            Poly::from_i64(&[1, 0, 1]).exact_div(&d),
            Err(ExactPolyError::InexactDivision(0))
        );
        assert_eq!(p.div_rem(&Poly::zero()), Err(ExactPolyError::DivisionByZero));
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[-1, 0, 1]).to_string(), "-1 + x^2");
        assert_eq!(Poly::from_i64(&[0, -3, 2]).to_string(), "-3*x + 2*x^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn json_strings() {
        let p = Poly::new(vec![ratio(1, 2), int(0), int(-3)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1/2","0/1","-3/1"]"#);
        let back: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
