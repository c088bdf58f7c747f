use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::{ExactPolyError, Poly};

/// Quotient `num / den` of two rational polynomials. Not reduced by gcd;
/// equality should be tested with [`RatFunc::same_value`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactPolyError> {
        if den.is_zero() {
            return Err(ExactPolyError::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    /// `c / p^n`
    pub fn inverse_power(c: Rational, p: &Poly, n: u32) -> Self {
        Self { num: Poly::constant(c), den: p.pow(n) }
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        Self { num: &self.num * p, den: self.den.clone() }
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative(1) * &self.den) - &(&self.num * &self.den.derivative(1));
        Self { num, den: &self.den * &self.den }
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.cmp0().is_eq() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// The polynomial `self * den`, failing if `den` does not clear the
    /// denominator exactly.
    pub fn numerator_over(&self, den: &Poly) -> Result<Poly, ExactPolyError> {
        (&self.num * den).exact_div(&self.den)
    }

    pub fn same_value(&self, other: &RatFunc) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RatFunc {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

/// `rational + log_coeff * log(arg_num / arg_den)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatLog {
    pub rational: RatFunc,
    pub log_coeff: RatFunc,
    pub arg_num: Poly,
    pub arg_den: Poly,
}

impl RatLog {
    /// Differentiates, folding `d/dx log(a/b) = (a'b - ab')/(ab)` into the
    /// rational part.
    pub fn derivative(&self) -> Self {
        let a = &self.arg_num;
        let b = &self.arg_den;
        let dlog = RatFunc {
            num: &(&a.derivative(1) * b) - &(a * &b.derivative(1)),
            den: a * b,
        };
        RatLog {
            rational: &self.rational.derivative() + &(&self.log_coeff * &dlog),
            log_coeff: self.log_coeff.derivative(),
            arg_num: a.clone(),
            arg_den: b.clone(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let lg = (self.arg_num.eval_f64(x) / self.arg_den.eval_f64(x)).ln();
        self.rational.eval_f64(x) + self.log_coeff.eval_f64(x) * lg
    }

    pub fn eval_float(&self, x: &rug::Float) -> rug::Float {
        let prec = x.prec();
        let ev = |p: &Poly| p.eval_float(x);
        let rat = ev(&self.rational.num) / ev(&self.rational.den);
        let lc = ev(&self.log_coeff.num) / ev(&self.log_coeff.den);
        let lg = (ev(&self.arg_num) / ev(&self.arg_den)).ln();
        rug::Float::with_val(prec, rat + lc * lg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, ratio};

    #[test]
    fn quotient_rule() {
        // 1/(x+1) -> -1/(x+1)^2
        let f = RatFunc::inverse_power(int(1), &Poly::from_i64(&[1, 1]), 1);
        let d = f.derivative();
        let want = RatFunc::inverse_power(int(-1), &Poly::from_i64(&[1, 1]), 2);
        assert!(d.same_value(&want));
        assert_eq!(d.eval(&int(1)).unwrap(), ratio(-1, 4));
    }

    #[test]
    fn log_derivative() {
        // x * log((x+2)/(x+1))
        let g = RatLog {
            rational: RatFunc::zero(),
            log_coeff: RatFunc::from_poly(Poly::x()),
            arg_num: Poly::from_i64(&[2, 1]),
            arg_den: Poly::from_i64(&[1, 1]),
        };
        let d = g.derivative();
        let x = 1.7;
        let h = 1e-5;
        let fd = (g.eval_f64(x + h) - g.eval_f64(x - h)) / (2.0 * h);
        assert!((d.eval_f64(x) - fd).abs() < 1e-8);
    }

    #[test]
    fn numerator_over_clears() {
        let f = &RatFunc::inverse_power(int(1), &Poly::x(), 2)
            + &RatFunc::inverse_power(int(1), &Poly::from_i64(&[1, 1]), 1);
        let den = &Poly::x().pow(2) * &Poly::from_i64(&[1, 1]);
        assert_eq!(f.numerator_over(&den).unwrap(), Poly::from_i64(&[1, 1, 1]));
        assert!(f.numerator_over(&Poly::x()).is_err());
    }
}
