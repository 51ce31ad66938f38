//! The map `f(x, y) = (y, x/2 + g(y))` with `g(y) = −y³ + ¾y`, its inverse,
//! the symmetry `σ(x, y) = (−x, −y)` and derivatives.

mod periodic;

pub use periodic::{
    catalogue_entry, find_periodic, periodic_catalogue, periodic_census, FindReport, PeriodicPoint, SaddleId, Stability,
};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::exactnum::{FieldElement, Interval, Scalar};

/// A planar point over any scalar type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Coords<T> {
    pub x: T,
    pub y: T,
}

pub type ExactPoint = Coords<FieldElement>;
pub type FloatPoint = Coords<f64>;
pub type IntervalBox = Coords<Interval>;

impl<T> Coords<T> {
    pub const fn new(x: T, y: T) -> Self {
        Coords { x, y }
    }
}

impl FloatPoint {
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, o: &FloatPoint) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn max_norm(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl ExactPoint {
    pub fn to_float(&self) -> FloatPoint {
        Coords::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn to_interval(&self) -> IntervalBox {
        Coords::new(self.x.to_interval(), self.y.to_interval())
    }

    pub fn height_bits(&self) -> u64 {
        self.x.height_bits().max(self.y.height_bits())
    }

    /// Parses `"x,y"` with each coordinate in the exact grammar.
    pub fn parse(text: &str) -> Result<Self, crate::ExactError> {
        let (xs, ys) = text.split_once(',').ok_or_else(|| crate::ExactError::Parse {
            input: text.to_string(),
            reason: "expected \"x,y\"".into(),
        })?;
        Ok(Coords::new(xs.trim().parse()?, ys.trim().parse()?))
    }
}

impl std::fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point in one of the two representations. Maps preserve the mode; the
/// modes never mix implicitly.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Exact(ExactPoint),
    Float(FloatPoint),
}

impl Point {
    pub fn exact(x: FieldElement, y: FieldElement) -> Self {
        Point::Exact(Coords::new(x, y))
    }

    pub fn float(x: f64, y: f64) -> Self {
        Point::Float(Coords::new(x, y))
    }

    pub fn to_float(&self) -> FloatPoint {
        match self {
            Point::Exact(p) => p.to_float(),
            Point::Float(p) => *p,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactPoint> {
        match self {
            Point::Exact(p) => Some(p),
            Point::Float(_) => None,
        }
    }
}

/// The cubic `g(y) = −y³ + ¾y`.
pub fn g<T: Scalar>(y: &T) -> T {
    T::ratio(3, 4) * y.clone() - y.cube()
}

/// `f(x, y) = (y, x/2 + g(y))`.
pub fn forward<T: Scalar>(q: &Coords<T>) -> Coords<T> {
    Coords::new(q.y.clone(), T::ratio(1, 2) * q.x.clone() + g(&q.y))
}

/// `f⁻¹(x, y) = (2x³ − 3x/2 + 2y, x)`.
pub fn inverse<T: Scalar>(q: &Coords<T>) -> Coords<T> {
    let two = T::ratio(2, 1);
    let x = two.clone() * q.x.cube() - T::ratio(3, 2) * q.x.clone() + two * q.y.clone();
    Coords::new(x, q.x.clone())
}

pub fn sigma<T: Scalar>(q: &Coords<T>) -> Coords<T> {
    Coords::new(-q.x.clone(), -q.y.clone())
}

/// `f^n` for `n ≥ 0`, `f^{-|n|}` otherwise.
pub fn iterate<T: Scalar>(q: &Coords<T>, n: i32) -> Coords<T> {
    let mut p = q.clone();
    for _ in 0..n.unsigned_abs() {
        p = if n > 0 { forward(&p) } else { inverse(&p) };
    }
    p
}

pub fn apply_f(q: &Point) -> Point {
    match q {
        Point::Exact(p) => Point::Exact(forward(p)),
        Point::Float(p) => Point::Float(forward(p)),
    }
}

pub fn apply_f_inverse(q: &Point) -> Point {
    match q {
        Point::Exact(p) => Point::Exact(inverse(p)),
        Point::Float(p) => Point::Float(inverse(p)),
    }
}

pub fn reflect(q: &Point) -> Point {
    match q {
        Point::Exact(p) => Point::Exact(sigma(p)),
        Point::Float(p) => Point::Float(sigma(p)),
    }
}

/// Row-major 2×2 matrix over a scalar type.
pub type Mat2<T> = [[T; 2]; 2];

fn mat_mul<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `Df(x, y) = [[0, 1], [1/2, 3/4 − 3y²]]`.
pub fn df<T: Scalar>(q: &Coords<T>) -> Mat2<T> {
    let y2 = q.y.clone() * q.y.clone();
    [
        [T::ratio(0, 1), T::ratio(1, 1)],
        [T::ratio(1, 2), T::ratio(3, 4) - T::ratio(3, 1) * y2],
    ]
}

/// `Df⁻¹(x, y) = [[6x² − 3/2, 2], [1, 0]]`.
pub fn df_inverse<T: Scalar>(q: &Coords<T>) -> Mat2<T> {
    let x2 = q.x.clone() * q.x.clone();
    [
        [T::ratio(6, 1) * x2 - T::ratio(3, 2), T::ratio(2, 1)],
        [T::ratio(1, 1), T::ratio(0, 1)],
    ]
}

/// `D(f^power)(q)` by the chain rule along the orbit. `power` must be nonzero.
pub fn jacobian_generic<T: Scalar>(q: &Coords<T>, power: i32) -> Mat2<T> {
    assert!(power != 0, "jacobian power must be nonzero");
    let mut p = q.clone();
    let mut acc: Option<Mat2<T>> = None;
    for _ in 0..power.unsigned_abs() {
        let step = if power > 0 { df(&p) } else { df_inverse(&p) };
        acc = Some(match acc {
            None => step,
            Some(m) => mat_mul(&step, &m),
        });
        p = if power > 0 { forward(&p) } else { inverse(&p) };
    }
    acc.expect("power nonzero")
}

pub fn det<T: Scalar>(m: &Mat2<T>) -> T {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

/// Float Jacobian of `f^power` at `q`.
pub fn jacobian(q: &Point, power: i32) -> Matrix2<f64> {
    let m = match q {
        Point::Exact(p) => {
            let e = jacobian_generic(p, power);
            [[e[0][0].to_f64(), e[0][1].to_f64()], [e[1][0].to_f64(), e[1][1].to_f64()]]
        }
        Point::Float(p) => jacobian_generic(p, power),
    };
    Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}
