//! Named planar regions with exact, float and interval membership.
//!
//! Every region is a boolean combination of convex pieces cut out by affine
//! inequalities `a·x + b·y + c ≥ 0` (or `> 0`) with coefficients in ℚ(√5).

mod sample;
mod table;

pub use sample::{coverage_check, CoverageReport, Sampler};
pub use table::{region, region_names, region_table, regions_json};

use serde::Serialize;

use crate::exactnum::{FieldElement, Interval};
use crate::henon::{Coords, ExactPoint, FloatPoint, IntervalBox, Point};

/// Three-valued answer for interval boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    /// Every point of the box is a member.
    Yes,
    /// No point of the box is a member.
    No,
    Unknown,
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

/// `a·x + b·y + c ≥ 0`, or `> 0` when `strict`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub strict: bool,
    fa: f64,
    fb: f64,
    fc: f64,
    ia: Interval,
    ib: Interval,
    ic: Interval,
}

impl Constraint {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, strict: bool) -> Self {
        Constraint {
            fa: a.to_f64(),
            fb: b.to_f64(),
            fc: c.to_f64(),
            ia: a.to_interval(),
            ib: b.to_interval(),
            ic: c.to_interval(),
            a,
            b,
            c,
            strict,
        }
    }

    pub fn value(&self, q: &ExactPoint) -> FieldElement {
        let mut v = self.c.clone();
        if !self.a.is_zero() {
            v = &v + &(&self.a * &q.x);
        }
        if !self.b.is_zero() {
            v = &v + &(&self.b * &q.y);
        }
        v
    }

    pub fn holds(&self, q: &ExactPoint) -> bool {
        let s = self.value(q).signum();
        if self.strict {
            s > 0
        } else {
            s >= 0
        }
    }

    pub fn holds_f64(&self, q: &FloatPoint) -> bool {
        let v = self.fa * q.x + self.fb * q.y + self.fc;
        if self.strict {
            v > 0.0
        } else {
            v >= 0.0
        }
    }

    pub fn holds_box(&self, q: &IntervalBox) -> Tri {
        let v = self.ia * q.x + self.ib * q.y + self.ic;
        let yes = if self.strict { v.lo > 0.0 } else { v.lo >= 0.0 };
        let no = if self.strict { v.hi <= 0.0 } else { v.hi < 0.0 };
        if yes {
            Tri::Yes
        } else if no {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    /// The constraint describing the σ-image.
    pub fn reflected(&self) -> Constraint {
        Constraint::new(-&self.a, -&self.b, self.c.clone(), self.strict)
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    Convex(Vec<Constraint>),
    Union(Vec<Shape>),
    Difference(Box<Shape>, Box<Shape>),
    Complement(Box<Shape>),
    Points(Vec<ExactPoint>),
}

impl Shape {
    pub fn contains(&self, q: &ExactPoint) -> bool {
        match self {
            Shape::Convex(cs) => cs.iter().all(|c| c.holds(q)),
            Shape::Union(parts) => parts.iter().any(|s| s.contains(q)),
            Shape::Difference(a, b) => a.contains(q) && !b.contains(q),
            Shape::Complement(a) => !a.contains(q),
            Shape::Points(ps) => ps.iter().any(|p| p == q),
        }
    }

    pub fn contains_f64(&self, q: &FloatPoint) -> bool {
        match self {
            Shape::Convex(cs) => cs.iter().all(|c| c.holds_f64(q)),
            Shape::Union(parts) => parts.iter().any(|s| s.contains_f64(q)),
            Shape::Difference(a, b) => a.contains_f64(q) && !b.contains_f64(q),
            Shape::Complement(a) => !a.contains_f64(q),
            Shape::Points(ps) => ps.iter().any(|p| p.to_float() == *q),
        }
    }

    pub fn contains_box(&self, q: &IntervalBox) -> Tri {
        match self {
            Shape::Convex(cs) => {
                let mut all = true;
                for c in cs {
                    match c.holds_box(q) {
                        Tri::No => return Tri::No,
                        Tri::Unknown => all = false,
                        Tri::Yes => {}
                    }
                }
                if all {
                    Tri::Yes
                } else {
                    Tri::Unknown
                }
            }
            Shape::Union(parts) => {
                let mut none = true;
                for s in parts {
                    match s.contains_box(q) {
                        Tri::Yes => return Tri::Yes,
                        Tri::Unknown => none = false,
                        Tri::No => {}
                    }
                }
                if none {
                    Tri::No
                } else {
                    Tri::Unknown
                }
            }
            Shape::Difference(a, b) => match (a.contains_box(q), b.contains_box(q)) {
                (Tri::No, _) | (_, Tri::Yes) => Tri::No,
                (Tri::Yes, Tri::No) => Tri::Yes,
                _ => Tri::Unknown,
            },
            Shape::Complement(a) => a.contains_box(q).not(),
            Shape::Points(ps) => {
                let hit = ps.iter().any(|p| {
                    let f = p.to_interval();
                    f.x.hi >= q.x.lo && f.x.lo <= q.x.hi && f.y.hi >= q.y.lo && f.y.lo <= q.y.hi
                });
                if hit {
                    Tri::Unknown
                } else {
                    Tri::No
                }
            }
        }
    }

    pub fn reflected(&self) -> Shape {
        match self {
            Shape::Convex(cs) => Shape::Convex(cs.iter().map(Constraint::reflected).collect()),
            Shape::Union(parts) => Shape::Union(parts.iter().map(Shape::reflected).collect()),
            Shape::Difference(a, b) => Shape::Difference(Box::new(a.reflected()), Box::new(b.reflected())),
            Shape::Complement(a) => Shape::Complement(Box::new(a.reflected())),
            Shape::Points(ps) => Shape::Points(ps.iter().map(crate::henon::sigma).collect()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Region {
    pub name: String,
    pub shape: Shape,
}

impl Region {
    pub fn new(name: impl Into<String>, shape: Shape) -> Self {
        Region {
            name: name.into(),
            shape,
        }
    }

    pub fn contains(&self, q: &ExactPoint) -> bool {
        self.shape.contains(q)
    }

    pub fn contains_f64(&self, q: &FloatPoint) -> bool {
        self.shape.contains_f64(q)
    }

    pub fn contains_box(&self, q: &IntervalBox) -> Tri {
        self.shape.contains_box(q)
    }

    pub fn union(name: impl Into<String>, parts: &[&Region]) -> Region {
        Region::new(name, Shape::Union(parts.iter().map(|r| r.shape.clone()).collect()))
    }

    pub fn minus(&self, name: impl Into<String>, other: &Region) -> Region {
        Region::new(name, Shape::Difference(Box::new(self.shape.clone()), Box::new(other.shape.clone())))
    }
}

/// Exact membership for exact points, float predicates for float points.
pub fn membership(q: &Point, r: &Region) -> bool {
    match q {
        Point::Exact(p) => r.contains(p),
        Point::Float(p) => r.contains_f64(p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pseudonorm {
    /// `|y − x/2|`
    YMinusHalfX,
    /// `|y + x/2|`
    YPlusHalfX,
    /// `max(|x|, |y|)`
    MaxNorm,
}

pub fn pseudonorm_value(q: &ExactPoint, kind: Pseudonorm) -> FieldElement {
    let half = crate::exactnum::q(1, 2);
    match kind {
        Pseudonorm::YMinusHalfX => (&q.y - &(&half * &q.x)).abs(),
        Pseudonorm::YPlusHalfX => (&q.y + &(&half * &q.x)).abs(),
        Pseudonorm::MaxNorm => {
            let (ax, ay) = (q.x.abs(), q.y.abs());
            if ax >= ay {
                ax
            } else {
                ay
            }
        }
    }
}

pub fn pseudonorm_f64(q: &FloatPoint, kind: Pseudonorm) -> f64 {
    match kind {
        Pseudonorm::YMinusHalfX => (q.y - q.x / 2.0).abs(),
        Pseudonorm::YPlusHalfX => (q.y + q.x / 2.0).abs(),
        Pseudonorm::MaxNorm => q.max_norm(),
    }
}

pub(crate) fn fe_point(x: FieldElement, y: FieldElement) -> ExactPoint {
    Coords::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, q_sqrt5};
    use crate::henon::sigma;
    use proptest::prelude::*;

    fn ep(x: FieldElement, y: FieldElement) -> ExactPoint {
        Coords::new(x, y)
    }

    #[test]
    fn membership_examples() {
        let p = ep(q_sqrt5(-1, 2), q_sqrt5(1, 2));
        assert!(region("Q3").unwrap().contains(&p));
        assert!(region("S").unwrap().contains(&ep(q(0, 1), q(0, 1))));
        assert!(!region("Q4'").unwrap().contains(&ep(q_sqrt5(1, 2), q(-33, 32))));
        let a = ep(q_sqrt5(1, 2), q(-1, 3));
        assert!(region("dR").unwrap().contains(&a));
        assert!(region("R").unwrap().contains(&a));
        assert!(!region("intR").unwrap().contains(&a));
    }

    #[test]
    fn r_is_not_convex() {
        let r = region("R").unwrap();
        let u = ep(q(0, 1), q_sqrt5(1, 2));
        let v = ep(q_sqrt5(1, 2), q(0, 1));
        assert!(r.contains(&u) && r.contains(&v));
        // The midpoint lies beyond the reflex corner p₊.
        assert!(!r.contains(&ep(q_sqrt5(1, 4), q_sqrt5(1, 4))));
        assert!(region("dR").unwrap().contains(&ep(q(1, 2), q(1, 2))));
    }

    #[test]
    fn pseudonorm_examples() {
        let v = pseudonorm_value(&ep(q(-2, 1), q(2, 1)), Pseudonorm::YMinusHalfX);
        assert_eq!(v, q(3, 1));
        let p = ep(q_sqrt5(-1, 2), q_sqrt5(1, 2));
        assert_eq!(pseudonorm_value(&p, Pseudonorm::MaxNorm), q_sqrt5(1, 2));
        assert_eq!(pseudonorm_value(&ep(q(0, 1), q(0, 1)), Pseudonorm::YPlusHalfX), q(0, 1));
    }

    #[test]
    fn t2_excludes_antidiagonal() {
        let t2 = region("T2").unwrap();
        let t1 = region("T1").unwrap();
        let on_diag = ep(q(-3, 4), q(3, 4));
        assert!(!t2.contains(&on_diag));
        assert!(t1.contains(&on_diag));
    }

    #[test]
    fn box_membership_is_conservative() {
        let s = region("S").unwrap();
        let inside = Coords::new(Interval::new(-0.4, 0.4), Interval::new(-0.1, 0.1));
        assert_eq!(s.contains_box(&inside), Tri::Yes);
        let straddle = Coords::new(Interval::new(0.4, 0.6), Interval::new(0.0, 0.1));
        assert_eq!(s.contains_box(&straddle), Tri::Unknown);
        let outside = Coords::new(Interval::new(0.6, 0.7), Interval::new(0.0, 0.1));
        assert_eq!(s.contains_box(&outside), Tri::No);
    }

    fn coord() -> impl Strategy<Value = FieldElement> {
        prop_oneof![
            (-80i64..80, 1i64..32).prop_map(|(n, d)| q(n, d)),
            (-3i64..3, 1i64..4, -20i64..20, 1i64..64).prop_map(|(a, b, c, d)| &q_sqrt5(a, b) + &q(c, d)),
            Just(q(1, 2)),
            Just(q(-1, 2)),
            Just(q_sqrt5(1, 2)),
            Just(q_sqrt5(-1, 2)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn sigma_pairing(x in coord(), y in coord()) {
            let pt = ep(x, y);
            let s = sigma(&pt);
            for base in ["Q1", "Q2", "Q3", "Q4", "T1", "T2", "T3", "S1", "S2"] {
                let a = region(base).unwrap();
                let b = region(&format!("{base}'")).unwrap();
                prop_assert_eq!(a.contains(&pt), b.contains(&s), "{}", base);
            }
            for name in ["R", "S", "T", "intR"] {
                let r = region(name).unwrap();
                prop_assert_eq!(r.contains(&pt), r.contains(&s));
            }
        }

        #[test]
        fn t_pieces_cover_r_minus_s(x in coord(), y in coord()) {
            let pt = ep(x, y);
            let in_t = region("T").unwrap().contains(&pt);
            let pieces = ["T1", "T2", "T3", "T1'", "T2'", "T3'"]
                .iter()
                .any(|n| region(n).unwrap().contains(&pt));
            prop_assert_eq!(in_t, pieces);
        }

        #[test]
        fn pseudonorms_sigma_invariant(x in coord(), y in coord()) {
            let pt = ep(x, y);
            for k in [Pseudonorm::YMinusHalfX, Pseudonorm::YPlusHalfX, Pseudonorm::MaxNorm] {
                prop_assert_eq!(pseudonorm_value(&pt, k), pseudonorm_value(&sigma(&pt), k));
            }
            let m = pseudonorm_value(&pt, Pseudonorm::MaxNorm);
            prop_assert_eq!(m.is_zero(), pt.x.is_zero() && pt.y.is_zero());
        }

        #[test]
        fn float_membership_agrees_off_boundary(x in -3.0f64..3.0, y in -3.0f64..3.0) {
            let pf = Coords::new(x, y);
            let pe = ep(FieldElement::from_f64_exact(x).unwrap(), FieldElement::from_f64_exact(y).unwrap());
            for name in region_names() {
                let r = region(name).unwrap();
                prop_assert_eq!(r.contains(&pe), r.contains_f64(&pf), "{}", name);
            }
        }
    }
}
