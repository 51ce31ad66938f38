//! Closed `f64` intervals with outward rounding.
//!
//! Each endpoint is computed with round-to-nearest and then corrected by
//! the sign of the exact residual (TwoSum / FMA), so results are as tight
//! as directed rounding would give rather than padded by a blanket ulp.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::ExactError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Below this magnitude FMA residuals may lose exactness to underflow.
const TINY: f64 = 1e-290;

fn round_pair(s: f64, err: f64) -> (f64, f64) {
    if err.is_nan() {
        return (s.next_down(), s.next_up());
    }
    let lo = if err < 0.0 { s.next_down() } else { s };
    let hi = if err > 0.0 { s.next_up() } else { s };
    (lo, hi)
}

fn add_round(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if s.is_infinite() && a.is_finite() && b.is_finite() {
        return if s > 0.0 { (f64::MAX, s) } else { (s, f64::MIN) };
    }
    if !s.is_finite() {
        return (s, s);
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    round_pair(s, err)
}

fn mul_round(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if p.is_infinite() && a.is_finite() && b.is_finite() {
        return if p > 0.0 { (f64::MAX, p) } else { (p, f64::MIN) };
    }
    if !p.is_finite() {
        return (p, p);
    }
    if p.abs() < TINY {
        if a == 0.0 || b == 0.0 {
            return (0.0, 0.0);
        }
        return (p.next_down(), p.next_up());
    }
    round_pair(p, a.mul_add(b, -p))
}

fn div_round(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if q.is_infinite() && a.is_finite() {
        return if q > 0.0 { (f64::MAX, q) } else { (q, f64::MIN) };
    }
    if !q.is_finite() {
        return (q, q);
    }
    if q.abs() < TINY || a.abs() < TINY {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        return (q.next_down(), q.next_up());
    }
    // a = q*b + r exactly; the true quotient exceeds q iff r/b > 0.
    let r = (-q).mul_add(b, a);
    round_pair(q, r * b.signum())
}

fn sqrt_round(a: f64) -> (f64, f64) {
    let s = a.sqrt();
    if s == 0.0 || !s.is_finite() {
        return (s, s);
    }
    round_pair(s, (-s).mul_add(s, a))
}

fn cube_up_nonneg(u: f64) -> f64 {
    let sq = mul_round(u, u).1;
    mul_round(sq, u).1
}

fn cube_down_nonneg(u: f64) -> f64 {
    let sq = mul_round(u, u).0;
    mul_round(sq, u).0
}

fn cube_down(v: f64) -> f64 {
    if v >= 0.0 {
        cube_down_nonneg(v)
    } else {
        -cube_up_nonneg(-v)
    }
}

fn cube_up(v: f64) -> f64 {
    if v >= 0.0 {
        cube_up_nonneg(v)
    } else {
        -cube_down_nonneg(-v)
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Panics if `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        add_round(self.hi, -self.lo).1
    }

    pub fn mid(&self) -> f64 {
        let m = self.lo / 2.0 + self.hi / 2.0;
        if m.is_finite() {
            m
        } else {
            0.0
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::new(self.lo, m), Interval::new(m, self.hi))
    }

    pub fn try_div(&self, rhs: &Interval) -> Result<Interval, ExactError> {
        if rhs.contains_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let cands = [
            div_round(self.lo, rhs.lo),
            div_round(self.lo, rhs.hi),
            div_round(self.hi, rhs.lo),
            div_round(self.hi, rhs.hi),
        ];
        Ok(Self::from_candidates(&cands))
    }

    pub fn sqrt(&self) -> Result<Interval, ExactError> {
        if self.lo < 0.0 {
            return Err(ExactError::Domain("sqrt of negative interval"));
        }
        Ok(Interval {
            lo: sqrt_round(self.lo).0,
            hi: sqrt_round(self.hi).1,
        })
    }

    /// Tight square: non-negative even when the interval straddles zero.
    pub fn sqr(&self) -> Interval {
        let a = mul_round(self.lo, self.lo);
        let b = mul_round(self.hi, self.hi);
        if self.contains_zero() {
            Interval {
                lo: 0.0,
                hi: a.1.max(b.1),
            }
        } else {
            Interval {
                lo: a.0.min(b.0),
                hi: a.1.max(b.1),
            }
        }
    }

    /// Monotone cube, tighter than two generic products.
    pub fn cube(&self) -> Interval {
        Interval {
            lo: cube_down(self.lo),
            hi: cube_up(self.hi),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    fn from_candidates(c: &[(f64, f64)]) -> Interval {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(l, h) in c {
            if l.is_nan() || h.is_nan() {
                return Interval::ENTIRE;
            }
            lo = lo.min(l);
            hi = hi.max(h);
        }
        Interval { lo, hi }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_round(self.lo, rhs.lo).0,
            hi: add_round(self.hi, rhs.hi).1,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let cands = [
            mul_round(self.lo, rhs.lo),
            mul_round(self.lo, rhs.hi),
            mul_round(self.hi, rhs.lo),
            mul_round(self.hi, rhs.hi),
        ];
        Interval::from_candidates(&cands)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    fn exact(v: f64) -> Rational {
        Rational::from_f64_exact(v).unwrap()
    }

    #[test]
    fn tenth_plus_fifth_brackets_exact_sum() {
        let a = Interval::point(0.1);
        let b = Interval::point(0.2);
        let s = a + b;
        let truth = exact(0.1) + exact(0.2);
        assert!(exact(s.lo) <= truth && truth <= exact(s.hi));
        assert!(s.hi == s.lo.next_up());
    }

    #[test]
    fn products_bracket_exact_value() {
        let a = Interval::point(1.0 / 3.0);
        let b = Interval::point(3.0);
        let p = a * b;
        let truth = exact(1.0 / 3.0) * exact(3.0);
        assert!(exact(p.lo) <= truth && truth <= exact(p.hi));
    }

    #[test]
    fn division_by_straddling_interval_errors() {
        let num = Interval::new(1.0, 2.0);
        let den = Interval::new(-1.0, 1.0);
        assert_eq!(num.try_div(&den), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn sqr_straddling_zero_is_nonnegative() {
        let s = Interval::new(-1.0, 2.0).sqr();
        assert_eq!(s.lo, 0.0);
        assert_eq!(s.hi, 4.0);
    }

    #[test]
    fn cube_encloses_third() {
        let c = Interval::point(1.0 / 3.0).cube();
        let t = exact(1.0 / 3.0);
        let truth = &(&t * &t) * &t;
        assert!(exact(c.lo) <= truth && truth <= exact(c.hi));
    }

    #[test]
    fn sqrt_five_is_tight() {
        let s = Interval::point(5.0).sqrt().unwrap();
        assert_eq!(s.hi, s.lo.next_up());
        assert!(s.lo * s.lo <= 5.0);
    }
}
