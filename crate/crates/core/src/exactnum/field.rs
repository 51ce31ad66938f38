use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval::Interval;
use super::rational::Rational;
use crate::error::ExactError;

/// The exact number `a + b·√5` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    a: Rational,
    b: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Shorthand for the rational `n/d` as a field element.
pub fn q(n: i64, d: i64) -> FieldElement {
    FieldElement::from_rational(Rational::new(n, d))
}

/// Shorthand for `(n/d)·√5`.
pub fn q_sqrt5(n: i64, d: i64) -> FieldElement {
    FieldElement::new(Rational::zero(), Rational::new(n, d))
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational) -> Self {
        FieldElement { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        FieldElement {
            a,
            b: Rational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn sqrt5() -> Self {
        q_sqrt5(1, 1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt5_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√5`.
    pub fn conjugate(&self) -> Self {
        FieldElement {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// Field norm `a² − 5b²`.
    pub fn norm(&self) -> Rational {
        let five = Rational::from_integer(5);
        &(&self.a * &self.a) - &(&five * &(&self.b * &self.b))
    }

    /// Exact sign, decided without floating point.
    pub fn signum(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // Opposite signs: |a| vs |b|√5, i.e. a² vs 5b².
        sa * self.norm().signum()
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        let inv = n.recip().ok_or(ExactError::DivisionByZero)?;
        Ok(FieldElement {
            a: &self.a * &inv,
            b: -&(&self.b * &inv),
        })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        if rhs.is_rational() {
            let inv = rhs.a.recip().ok_or(ExactError::DivisionByZero)?;
            return Ok(FieldElement {
                a: &self.a * &inv,
                b: &self.b * &inv,
            });
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        FieldElement {
            a: &self.a * r,
            b: &self.b * r,
        }
    }

    pub fn cube(&self) -> Self {
        &(self * self) * self
    }

    /// Largest bit length among the four integers in the representation.
    pub fn height_bits(&self) -> u64 {
        self.a.height_bits().max(self.b.height_bits())
    }

    /// Nearest-ish float; not directed.
    pub fn to_f64(&self) -> f64 {
        if self.b.is_zero() {
            return self.a.to_f64();
        }
        self.enclose_tight().mid()
    }

    /// Exact value of a finite float.
    pub fn from_f64_exact(v: f64) -> Option<Self> {
        Rational::from_f64_exact(v).map(Self::from_rational)
    }

    /// Enclosure by one-ulp rational bounds on each part; cheap but loose.
    pub fn enclose_fast(&self) -> Interval {
        let (alo, ahi) = self.a.enclose();
        if self.b.is_zero() {
            return Interval::new(alo, ahi);
        }
        let (blo, bhi) = self.b.enclose();
        Interval::new(alo, ahi) + Interval::new(blo, bhi) * sqrt5_interval()
    }

    /// Tightest float enclosure: either a single float or two adjacent ones.
    pub fn enclose_tight(&self) -> Interval {
        let crude = self.enclose_fast();
        if crude.lo == crude.hi {
            return crude;
        }
        let mut lo = crude.lo;
        let mut hi = crude.hi;
        if !lo.is_finite() || !hi.is_finite() {
            return crude;
        }
        for end in [lo, hi] {
            if Self::from_f64_exact(end).as_ref() == Some(self) {
                return Interval::point(end);
            }
        }
        while hi > lo.next_up() {
            let m = ordered_mid(lo, hi);
            let mv = Self::from_f64_exact(m).expect("finite");
            match (&mv - self).signum() {
                0 => return Interval::point(m),
                s if s < 0 => lo = m,
                _ => hi = m,
            }
        }
        Interval::new(lo, hi)
    }

    pub fn to_interval(&self) -> Interval {
        self.enclose_tight()
    }
}

/// Float roughly halfway between two finite floats in ulp distance.
fn ordered_mid(lo: f64, hi: f64) -> f64 {
    fn key(v: f64) -> i64 {
        let b = v.to_bits() as i64;
        if b < 0 {
            i64::MIN - b
        } else {
            b
        }
    }
    fn unkey(k: i64) -> f64 {
        let b = if k < 0 { i64::MIN - k } else { k };
        f64::from_bits(b as u64)
    }
    let (a, b) = (key(lo), key(hi));
    let m = a + (b - a) / 2;
    unkey(m)
}

pub fn sqrt5_interval() -> Interval {
    Interval::point(5.0).sqrt().expect("positive")
}

/// Exact field operation; only division can fail.
pub fn fe_arith(x: &FieldElement, y: &FieldElement, op: FieldOp) -> Result<FieldElement, ExactError> {
    Ok(match op {
        FieldOp::Add => x + y,
        FieldOp::Sub => x - y,
        FieldOp::Mul => x * y,
        FieldOp::Div => x.try_div(y)?,
    })
}

pub fn fe_compare(x: &FieldElement, y: &FieldElement) -> Ordering {
    x.cmp(y)
}

/// Enclosure of `x` whose width is at most `2^(1−precision)·max(1,|x|)`.
/// Floats carry 53 bits, so that is the ceiling.
pub fn enclose(x: &FieldElement, precision: u32) -> Result<Interval, ExactError> {
    if !(8..=53).contains(&precision) {
        return Err(ExactError::InvalidPrecision(precision));
    }
    Ok(x.enclose_tight())
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.b.is_zero() {
            return rhs.scale(&self.a);
        }
        if rhs.b.is_zero() {
            return self.scale(&rhs.a);
        }
        let five = Rational::from_integer(5);
        let bd = &self.b * &rhs.b;
        FieldElement {
            a: &(&self.a * &rhs.a) + &(&five * &bd),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for FieldElement {
    /// Canonical `a_num/a_den + b_num/b_den*sqrt5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt5", self.a, self.b)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FieldElement {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, ExactError> {
        super::parse::parse_field_element(s)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt5_squared_is_five() {
        let r = &FieldElement::sqrt5() * &FieldElement::sqrt5();
        assert_eq!(r, FieldElement::from_integer(5));
    }

    #[test]
    fn golden_conjugates_multiply_to_minus_one() {
        let x = &q(1, 2) + &q_sqrt5(1, 2);
        let y = &q(1, 2) - &q_sqrt5(1, 2);
        assert_eq!(&x * &y, FieldElement::from_integer(-1));
    }

    #[test]
    fn additive_identity() {
        assert_eq!(&FieldElement::one() + &FieldElement::zero(), FieldElement::one());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(fe_compare(&q_sqrt5(1, 2), &q(33, 32)), Ordering::Greater);
        assert_eq!(fe_compare(&q_sqrt5(1, 2), &q_sqrt5(1, 2)), Ordering::Equal);
        assert_eq!(fe_compare(&q_sqrt5(-1, 2), &q(-1, 2)), Ordering::Less);
    }

    #[test]
    fn division_by_zero_is_error() {
        let r = fe_arith(&FieldElement::one(), &FieldElement::zero(), FieldOp::Div);
        assert_eq!(r, Err(ExactError::DivisionByZero));
    }

    #[test]
    fn enclose_examples() {
        assert_eq!(enclose(&FieldElement::zero(), 53).unwrap(), Interval::point(0.0));
        assert_eq!(enclose(&q(1, 2), 53).unwrap(), Interval::point(0.5));
        let s = enclose(&FieldElement::sqrt5(), 53).unwrap();
        assert!(s.width() <= 2f64.powi(-50));
        let lo = Rational::from_f64_exact(s.lo).unwrap();
        let hi = Rational::from_f64_exact(s.hi).unwrap();
        let five = Rational::from_integer(5);
        assert!(&lo * &lo < five && five < &hi * &hi);
        // Leading digits of √5 by long division.
        assert!(s.lo > 2.236_067_977_499 && s.hi < 2.236_067_977_500);
        assert!(enclose(&FieldElement::sqrt5(), 4).is_err());
    }

    #[test]
    fn display_roundtrip() {
        let x = &q(-3, 7) + &q_sqrt5(5, 2);
        let s = x.to_string();
        assert_eq!(s, "-3/7 + 5/2*sqrt5");
        assert_eq!(s.parse::<FieldElement>().unwrap(), x);
    }
}
