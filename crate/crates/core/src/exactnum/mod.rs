//! Exact arithmetic in ℚ(√5) and outward-rounded intervals.

mod field;
mod interval;
mod parse;
mod rational;

pub use field::{enclose, fe_arith, fe_compare, q, q_sqrt5, sqrt5_interval, FieldElement, FieldOp};
pub use interval::Interval;
pub use parse::parse_field_element;
pub use rational::Rational;

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::ExactError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn iv_arith(x: Interval, y: Interval, op: IntervalOp) -> Result<Interval, ExactError> {
    Ok(match op {
        IntervalOp::Add => x + y,
        IntervalOp::Sub => x - y,
        IntervalOp::Mul => x * y,
        IntervalOp::Div => x.try_div(&y)?,
    })
}

/// Number types the map can be evaluated over: exact field elements,
/// plain floats and enclosing intervals.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// The rational `n/d`, exactly or enclosed.
    fn ratio(n: i64, d: i64) -> Self;

    fn cube(&self) -> Self {
        self.clone() * self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }

    fn cube(&self) -> Self {
        self * self * self
    }
}

impl Scalar for FieldElement {
    fn ratio(n: i64, d: i64) -> Self {
        q(n, d)
    }

    fn cube(&self) -> Self {
        FieldElement::cube(self)
    }
}

impl Scalar for Interval {
    fn ratio(n: i64, d: i64) -> Self {
        let (lo, hi) = Rational::new(n, d).enclose();
        Interval::new(lo, hi)
    }

    fn cube(&self) -> Self {
        Interval::cube(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..40).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn field_element() -> impl Strategy<Value = FieldElement> {
        (small_rational(), small_rational()).prop_map(|(a, b)| FieldElement::new(a, b))
    }

    fn contains_exact(iv: &Interval, x: &FieldElement) -> bool {
        let lo = FieldElement::from_f64_exact(iv.lo).unwrap();
        let hi = FieldElement::from_f64_exact(iv.hi).unwrap();
        lo <= *x && *x <= hi
    }

    #[test]
    fn interval_examples() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(3.0, 4.0);
        assert_eq!(iv_arith(a, b, IntervalOp::Add).unwrap(), Interval::new(4.0, 6.0));
        let u = Interval::new(-1.0, 1.0);
        assert_eq!(iv_arith(u, u, IntervalOp::Mul).unwrap(), u);
        assert!(iv_arith(a, u, IntervalOp::Div).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn field_axioms(x in field_element(), y in field_element(), z in field_element()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.recip().unwrap(), FieldElement::one());
            }
        }

        #[test]
        fn compare_agrees_with_enclosure(x in field_element(), y in field_element()) {
            let d = &x - &y;
            let iv = enclose(&d, 53).unwrap();
            if !iv.contains_zero() {
                let want = if iv.lo > 0.0 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
                prop_assert_eq!(fe_compare(&x, &y), want);
            }
        }

        #[test]
        fn interval_ops_enclose_exact(x in field_element(), y in field_element()) {
            let ix = enclose(&x, 53).unwrap();
            let iy = enclose(&y, 53).unwrap();
            prop_assert!(contains_exact(&(ix + iy), &(&x + &y)));
            prop_assert!(contains_exact(&(ix - iy), &(&x - &y)));
            prop_assert!(contains_exact(&(ix * iy), &(&x * &y)));
            prop_assert!(contains_exact(&ix.cube(), &x.cube()));
            if !iy.contains_zero() {
                let q = ix.try_div(&iy).unwrap();
                prop_assert!(contains_exact(&q, &x.try_div(&y).unwrap()));
            }
        }

        #[test]
        fn enclose_width_bound(x in field_element()) {
            let iv = enclose(&x, 53).unwrap();
            prop_assert!(contains_exact(&iv, &x));
            let bound = 2f64.powi(-52) * iv.lo.abs().max(iv.hi.abs()).max(1.0);
            prop_assert!(iv.width() <= bound);
        }

        #[test]
        fn serialization_roundtrips(x in field_element()) {
            let s = x.to_string();
            prop_assert_eq!(s.parse::<FieldElement>().unwrap(), x);
        }
    }
}
