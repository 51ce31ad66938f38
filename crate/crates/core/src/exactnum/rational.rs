//! Arbitrary-precision rationals with an inline fast path.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are kept
//! inline and combined through `i128` intermediates; anything larger spills
//! into a [`BigRational`]. The representation is canonical (small whenever
//! it fits), so structural equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// Reduced, `den > 0`, `num != i64::MIN`.
    Small { num: i64, den: i64 },
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_i128_parts(n as i128, 1)
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128_parts(num as i128, den as i128)
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalize_big(BigRational::new(num, den))
    }

    /// Reduces `num / den` (with `den != 0`) and picks the representation.
    fn from_i128_parts(mut num: i128, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            // |num|, |den| < 2^127 for every caller, so negation cannot overflow.
            num = -num;
            den = -den;
        }
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        if num > i64::MIN as i128 && num <= i64::MAX as i128 && den <= i64::MAX as i128 {
            Rational(Repr::Small {
                num: num as i64,
                den: den as i64,
            })
        } else {
            Rational(Repr::Big(BigRational::new_raw(BigInt::from(num), BigInt::from(den))))
        }
    }

    fn normalize_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small { num: n, den: d }),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(r) => match r.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small { num, den } => Self::from_i128_parts(*den as i128, *num as i128),
            Repr::Big(r) => Self::normalize_big(r.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|inv| self * &inv)
    }

    /// Bit length of the larger of numerator and denominator.
    pub fn height_bits(&self) -> u64 {
        match &self.0 {
            Repr::Small { num, den } => {
                let m = num.unsigned_abs().max(*den as u64);
                64 - m.leading_zeros() as u64
            }
            Repr::Big(r) => r.numer().bits().max(r.denom().bits()),
        }
    }

    /// Nearest-ish `f64`; not directed. Use [`Rational::enclose`] when the
    /// rounding direction matters.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(r) => r.to_f64().unwrap_or_else(|| {
                if r.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }),
        }
    }

    /// Exact rational value of a finite `f64`.
    pub fn from_f64_exact(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mut mant, mut exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let tz = mant.trailing_zeros() as i64;
        mant >>= tz;
        exp += tz;
        let mant = if negative { -(mant as i128) } else { mant as i128 };
        if exp >= 0 {
            if exp < 64 {
                return Some(Self::from_i128_parts(mant << exp, 1));
            }
            let n = BigInt::from(mant) << (exp as usize);
            return Some(Self::normalize_big(BigRational::from_integer(n)));
        }
        let shift = (-exp) as u32;
        if shift < 63 {
            Some(Self::from_i128_parts(mant, 1i128 << shift))
        } else {
            let d = BigInt::one() << (shift as usize);
            Some(Self::normalize_big(BigRational::new(BigInt::from(mant), d)))
        }
    }

    /// Tightest `f64` bounds `lo <= self <= hi`.
    pub fn enclose(&self) -> (f64, f64) {
        if let Repr::Small { num, den: 1 } = self.0 {
            if num.unsigned_abs() <= 1u64 << 53 {
                let v = num as f64;
                return (v, v);
            }
        }
        let approx = self.to_f64();
        if approx.is_infinite() {
            return if approx > 0.0 {
                (f64::MAX, f64::INFINITY)
            } else {
                (f64::NEG_INFINITY, f64::MIN)
            };
        }
        let exact = Rational::from_f64_exact(approx).expect("finite");
        match exact.cmp(self) {
            Ordering::Equal => (approx, approx),
            Ordering::Less => {
                let mut lo = approx;
                let mut hi = approx.next_up();
                while Rational::from_f64_exact(hi).is_some_and(|h| h < *self) {
                    lo = hi;
                    hi = hi.next_up();
                }
                if Rational::from_f64_exact(hi).is_some_and(|h| h == *self) {
                    return (hi, hi);
                }
                (lo, hi)
            }
            Ordering::Greater => {
                let mut hi = approx;
                let mut lo = approx.next_down();
                while Rational::from_f64_exact(lo).is_some_and(|l| l > *self) {
                    hi = lo;
                    lo = lo.next_down();
                }
                if Rational::from_f64_exact(lo).is_some_and(|l| l == *self) {
                    return (lo, lo);
                }
                (lo, hi)
            }
        }
    }

    pub fn parse_integer(digits: &str) -> Option<Self> {
        let n: BigInt = digits.parse().ok()?;
        Some(Self::normalize_big(BigRational::from_integer(n)))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    return Rational::from_i128_parts(*a as i128 + *c as i128, *b as i128);
                }
                let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                Rational::from_i128_parts(n, *b as i128 * *d as i128)
            }
            _ => Rational::normalize_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    return Rational::from_i128_parts(*a as i128 - *c as i128, *b as i128);
                }
                let n = *a as i128 * *d as i128 - *c as i128 * *b as i128;
                Rational::from_i128_parts(n, *b as i128 * *d as i128)
            }
            _ => Rational::normalize_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Rational::from_i128_parts(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => {
                if self.is_zero() || rhs.is_zero() {
                    return Rational::zero();
                }
                Rational::normalize_big(self.to_big() * rhs.to_big())
            }
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational(Repr::Small { num: -num, den: *den }),
            Repr::Big(r) => Rational::normalize_big(-r.clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        let r = Rational::new(6, -8);
        assert_eq!(r, Rational::new(-3, 4));
        assert_eq!(r.to_string(), "-3/4");
    }

    #[test]
    fn spills_to_big_and_back() {
        let big = Rational::new(i64::MAX, 1);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = sq.checked_div(&big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));
    }

    #[test]
    fn min_numerator_is_kept_big() {
        let r = Rational::from_i128_parts(i64::MIN as i128, 1);
        assert!(matches!(r.0, Repr::Big(_)));
        assert_eq!(-(-r.clone()), r);
    }

    #[test]
    fn exact_f64_roundtrip() {
        for v in [0.5, -0.1, 1e300, 3.0e-310, 1.0 / 3.0, -7.25] {
            let r = Rational::from_f64_exact(v).unwrap();
            let (lo, hi) = r.enclose();
            assert_eq!(lo, v);
            assert_eq!(hi, v);
        }
    }

    #[test]
    fn enclose_third_is_one_ulp() {
        let r = Rational::new(1, 3);
        let (lo, hi) = r.enclose();
        assert_eq!(hi, lo.next_up());
        assert!(Rational::from_f64_exact(lo).unwrap() < r);
        assert!(Rational::from_f64_exact(hi).unwrap() > r);
    }

    #[test]
    fn ordering_mixed_representations() {
        let small = Rational::new(1, 2);
        let big = Rational::from_big(BigInt::from(1) << 100, (BigInt::from(1) << 101) + 1);
        assert!(big < small);
        assert!(Rational::new(-1, 2) < big);
    }
}
