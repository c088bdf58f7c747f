use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::Poly;

/// Sparse polynomial in two variables `(x, y)`, keyed by exponent pairs.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn term(c: Rational, i: u32, j: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(c, i, j);
        out
    }

    pub fn x() -> Self {
        Self::term(Rational::from(1), 1, 0)
    }

    pub fn y() -> Self {
        Self::term(Rational::from(1), 0, 1)
    }

    /// Lift a univariate polynomial in `x`.
    pub fn from_poly_x(p: &Poly) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(c.clone(), i as u32, 0);
        }
        out
    }

    pub fn add_term(&mut self, c: Rational, i: u32, j: u32) {
        if c.cmp0().is_eq() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_default();
        *entry += c;
        if entry.cmp0().is_eq() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(Rational::from(v * c), i, j);
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(Rational::from(1));
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

    /// Splits `self = U - V` where `U` keeps the positive coefficients and
    /// `V` the magnitudes of the negative ones.
    pub fn split_by_sign(&self) -> (Self, Self) {
        let mut u = Self::zero();
        let mut v = Self::zero();
        for (&(i, j), c) in &self.terms {
            if c.cmp0().is_gt() {
                u.add_term(c.clone(), i, j);
            } else {
                v.add_term(Rational::from(-c), i, j);
            }
        }
        (u, v)
    }

    /// The coefficient of `y^k`, as a polynomial in `x`.
    pub fn coeff_of_y(&self, k: u32) -> Poly {
        let mut coeffs = Vec::new();
        for (&(i, j), c) in &self.terms {
            if j == k {
                let i = i as usize;
                if coeffs.len() <= i {
                    coeffs.resize(i + 1, Rational::new());
                }
                coeffs[i] = c.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// `x^(s*D) * B(x, num(x) / x^s)` where `D` is the y-degree of `B`.
    ///
    /// The factor clears all denominators, so the result is a polynomial.
    pub fn substitute_y_over_power(&self, num: &Poly, s: usize) -> Poly {
        let d = self.degree_y();
        let mut acc = Poly::zero();
        let mut num_pow = Poly::one();
        for k in 0..=d {
            let ck = self.coeff_of_y(k);
            if !ck.is_zero() {
                let term = (&ck * &num_pow).shift(s * (d - k) as usize);
                acc = &acc + &term;
            }
            num_pow = &num_pow * num;
        }
        acc
    }

    /// `B(x, p(x))`
    pub fn substitute_y(&self, p: &Poly) -> Poly {
        self.substitute_y_over_power(p, 0)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::new();
        for (&(i, j), c) in &self.terms {
            let xi = Rational::from(rug::ops::Pow::pow(x, i));
            let yj = Rational::from(rug::ops::Pow::pow(y, j));
            acc += Rational::from(c * xi) * yj;
        }
        acc
    }

    pub fn eval_float(&self, x: &rug::Float, y: &rug::Float) -> rug::Float {
        let prec = x.prec().max(y.prec());
        let mut acc = rug::Float::new(prec);
        for (&(i, j), c) in &self.terms {
            let xi = rug::Float::with_val(prec, rug::ops::Pow::pow(x, i));
            let yj = rug::Float::with_val(prec, rug::ops::Pow::pow(y, j));
            acc += rug::Float::with_val(prec, c) * xi * yj;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64() * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(c.clone(), i, j);
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(Rational::from(-c), i, j);
        }
        out
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term(Rational::from(a * b), i1 + i2, j1 + j2);
            }
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        self.scale(&Rational::from(-1))
    }
}
