use std::fmt;

use rug::Float;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::precision_bits;

/// Rounds a non-negative radius estimate outward.
pub(crate) fn up(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (x * (1.0 + 4.0 * f64::EPSILON)).next_up()
}

/// `|v|` as an f64 no smaller than the true magnitude.
pub(crate) fn abs_up(v: &Float) -> f64 {
    up(v.to_f64().abs())
}

/// Relative rounding unit `2^(1-p)` for precision `p`.
pub(crate) fn unit(prec: u32) -> f64 {
    2f64.powi(1 - prec as i32)
}

/// A real number known to lie in `[value - radius, value + radius]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedFloat {
    value: Float,
    radius: f64,
}

impl BoundedFloat {
    pub fn new(value: Float, radius: f64) -> Self {
        assert!(radius >= 0.0 && !radius.is_nan(), "radius must be non-negative");
        Self { value, radius }
    }

    /// An f64 is exactly representable, so the radius is zero.
    pub fn exact(x: f64) -> Self {
        Self::new(Float::with_val(precision_bits(), x), 0.0)
    }

    pub fn exact_float(value: Float) -> Self {
        Self::new(value, 0.0)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    /// Lower end, rounded down.
    pub fn lo(&self) -> f64 {
        let v = Float::with_val(self.prec(), &self.value - self.radius);
        v.to_f64_round(rug::float::Round::Down)
    }

    /// Upper end, rounded up.
    pub fn hi(&self) -> f64 {
        let v = Float::with_val(self.prec(), &self.value + self.radius);
        v.to_f64_round(rug::float::Round::Up)
    }

    pub fn contains(&self, x: f64) -> bool {
        let d = Float::with_val(self.prec(), &self.value - x).abs();
        d <= self.radius
    }

    pub fn is_positive(&self) -> bool {
        self.value > self.radius
    }

    pub fn is_negative(&self) -> bool {
        -self.value.clone() > self.radius
    }

    /// True when every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &BoundedFloat) -> bool {
        let gap = Float::with_val(self.prec().max(other.prec()), &other.value - &self.value);
        gap > up(self.radius + other.radius)
    }

    pub fn certainly_lt_f64(&self, x: f64) -> bool {
        self.certainly_lt(&BoundedFloat::exact(x))
    }

    pub fn certainly_gt_f64(&self, x: f64) -> bool {
        BoundedFloat::exact(x).certainly_lt(self)
    }

    /// Signed distance to `x` minus the radius: positive means `self > x`
    /// with that much room to spare.
    pub fn margin_above(&self, x: f64) -> f64 {
        (Float::with_val(self.prec(), &self.value - x).to_f64()) - self.radius
    }

    pub fn widen(&self, extra: f64) -> Self {
        Self::new(self.value.clone(), up(self.radius + extra))
    }

    fn rounded(value: Float, radius: f64) -> Self {
        let r = radius + abs_up(&value) * unit(value.prec());
        Self::new(value, up(r))
    }

    pub fn add(&self, other: &Self) -> Self {
        let v = Float::with_val(self.prec(), &self.value + &other.value);
        Self::rounded(v, self.radius + other.radius)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let v = Float::with_val(self.prec(), &self.value - &other.value);
        Self::rounded(v, self.radius + other.radius)
    }

    pub fn neg(&self) -> Self {
        Self::new(Float::with_val(self.prec(), -&self.value), self.radius)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let v = Float::with_val(self.prec(), &self.value * &other.value);
        let r = abs_up(&self.value) * other.radius
            + abs_up(&other.value) * self.radius
            + self.radius * other.radius;
        Self::rounded(v, r)
    }

    pub fn mul_f64(&self, c: f64) -> Self {
        self.mul(&Self::exact(c))
    }

    /// Panics if the divisor interval contains zero.
    pub fn div(&self, other: &Self) -> Self {
        let ay = other.value.to_f64().abs() * (1.0 - 4.0 * f64::EPSILON);
        assert!(ay > other.radius, "divisor interval contains zero");
        let v = Float::with_val(self.prec(), &self.value / &other.value);
        let r = (abs_up(&self.value) * other.radius + up(ay) * self.radius) / (ay * (ay - other.radius));
        Self::rounded(v, r)
    }

    pub fn exp(&self) -> Self {
        let v = Float::with_val(self.prec(), self.value.exp_ref());
        let r = abs_up(&v) * self.radius.exp_m1();
        // MPFR rounds transcendental functions correctly
        Self::rounded(v, r)
    }

    /// Panics unless the interval is strictly positive.
    pub fn ln(&self) -> Self {
        let x = self.value.to_f64() * (1.0 - 4.0 * f64::EPSILON);
        assert!(x > self.radius, "logarithm of a non-positive interval");
        let v = Float::with_val(self.prec(), self.value.ln_ref());
        let r = -(-self.radius / x).ln_1p();
        Self::rounded(v, r)
    }

    /// Panics unless the interval is non-negative.
    pub fn sqrt(&self) -> Self {
        let x = self.value.to_f64() * (1.0 - 4.0 * f64::EPSILON);
        assert!(x >= self.radius, "square root of a negative interval");
        let v = Float::with_val(self.prec(), self.value.sqrt_ref());
        let r = if self.radius == 0.0 {
            0.0
        } else {
            // sqrt(x + e) - sqrt(x) <= sqrt(x) - sqrt(x - e) <= e / sqrt(x - e) for x > e
            let lo = (x - self.radius).max(0.0);
            if lo > 0.0 {
                self.radius / lo.sqrt()
            } else {
                (2.0 * self.radius).sqrt()
            }
        };
        Self::rounded(v, r)
    }
}

impl fmt::Display for BoundedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.value.to_string_radix(10, Some(20)), self.radius)
    }
}

impl Serialize for BoundedFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundedFloat", 3)?;
        st.serialize_field("value", &self.value_f64())?;
        st.serialize_field("value_digits", &self.value.to_string_radix(10, Some(30)))?;
        st.serialize_field("error_radius", &self.radius)?;
        st.end()
    }
}
