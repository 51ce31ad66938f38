//! Random exact points drawn from a region.
//!
//! Each convex piece is clipped to a truncation box, its vertices are found
//! exactly by intersecting boundary lines, and points are drawn from a fan
//! triangulation with dyadic barycentric weights. A share of the draws is
//! placed on edges and at vertices so closed boundaries get exercised.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{region, Constraint, Shape};
use crate::exactnum::{q, q_sqrt5, FieldElement, Rational};
use crate::henon::{Coords, ExactPoint};

const WEIGHT_BITS: u32 = 16;

#[derive(Clone, Debug)]
enum Piece {
    Polygon { verts: Vec<ExactPoint>, cum_area: Vec<f64> },
    Segment(ExactPoint, ExactPoint),
    Point(ExactPoint),
}

#[derive(Clone, Debug)]
pub struct Sampler {
    pieces: Vec<Piece>,
    filter: Shape,
    clip: Vec<Constraint>,
}

fn box_constraints(bx: [f64; 4]) -> Vec<Constraint> {
    let fe = |v: f64| FieldElement::from_f64_exact(v).expect("finite box");
    let one = q(1, 1);
    let mone = q(-1, 1);
    let zero = q(0, 1);
    vec![
        Constraint::new(one.clone(), zero.clone(), -fe(bx[0]), false),
        Constraint::new(mone.clone(), zero.clone(), fe(bx[1]), false),
        Constraint::new(zero.clone(), one, -fe(bx[2]), false),
        Constraint::new(zero, mone, fe(bx[3]), false),
    ]
}

fn relaxed_holds(c: &Constraint, p: &ExactPoint) -> bool {
    c.value(p).signum() >= 0
}

/// Vertices of `{all constraints, non-strict}`, in angular order.
fn vertices(cs: &[Constraint]) -> Vec<ExactPoint> {
    let mut pts: Vec<ExactPoint> = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let (ci, cj) = (&cs[i], &cs[j]);
            let det = &(&ci.a * &cj.b) - &(&cj.a * &ci.b);
            if det.is_zero() {
                continue;
            }
            let x = (&(&ci.b * &cj.c) - &(&cj.b * &ci.c)).try_div(&det).expect("nonzero");
            let y = (&(&ci.c * &cj.a) - &(&cj.c * &ci.a)).try_div(&det).expect("nonzero");
            let p = Coords::new(x, y);
            if cs.iter().all(|c| relaxed_holds(c, &p)) && !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    if pts.len() > 2 {
        let n = pts.len() as f64;
        let cx = pts.iter().map(|p| p.x.to_f64()).sum::<f64>() / n;
        let cy = pts.iter().map(|p| p.y.to_f64()).sum::<f64>() / n;
        pts.sort_by(|a, b| {
            let ta = (a.y.to_f64() - cy).atan2(a.x.to_f64() - cx);
            let tb = (b.y.to_f64() - cy).atan2(b.x.to_f64() - cx);
            ta.partial_cmp(&tb).expect("finite angles")
        });
    }
    pts
}

fn piece_from(cs: &[Constraint], clip: &[Constraint]) -> Option<Piece> {
    let mut all: Vec<Constraint> = cs.to_vec();
    all.extend(clip.iter().cloned());
    let v = vertices(&all);
    match v.len() {
        0 => None,
        1 => Some(Piece::Point(v[0].clone())),
        2 => Some(Piece::Segment(v[0].clone(), v[1].clone())),
        _ => {
            let f: Vec<(f64, f64)> = v.iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
            let mut cum = Vec::with_capacity(v.len() - 2);
            let mut total = 0.0;
            for k in 1..v.len() - 1 {
                let (ax, ay) = (f[k].0 - f[0].0, f[k].1 - f[0].1);
                let (bx, by) = (f[k + 1].0 - f[0].0, f[k + 1].1 - f[0].1);
                total += (ax * by - ay * bx).abs() / 2.0;
                cum.push(total);
            }
            if total == 0.0 {
                // Collinear vertices: keep the extreme pair.
                return Some(Piece::Segment(v[0].clone(), v[v.len() - 1].clone()));
            }
            Some(Piece::Polygon { verts: v, cum_area: cum })
        }
    }
}

fn collect(shape: &Shape, clip: &[Constraint], out: &mut Vec<Piece>) {
    match shape {
        Shape::Convex(cs) => out.extend(piece_from(cs, clip)),
        Shape::Union(parts) => parts.iter().for_each(|s| collect(s, clip, out)),
        Shape::Difference(a, _) => collect(a, clip, out),
        Shape::Complement(_) => out.extend(piece_from(&[], clip)),
        Shape::Points(ps) => out.extend(ps.iter().cloned().map(Piece::Point)),
    }
}

fn dyadic(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(0..=(1i64 << WEIGHT_BITS)), 1 << WEIGHT_BITS)
}

fn lerp(a: &ExactPoint, b: &ExactPoint, t: &Rational) -> ExactPoint {
    Coords::new(
        &a.x + &(&b.x - &a.x).scale(t),
        &a.y + &(&b.y - &a.y).scale(t),
    )
}

impl Sampler {
    /// Sampler for `shape ∩ box`.
    pub fn new(shape: &Shape, bx: [f64; 4]) -> Self {
        let clip = box_constraints(bx);
        let mut pieces = Vec::new();
        collect(shape, &clip, &mut pieces);
        Sampler {
            pieces,
            filter: shape.clone(),
            clip,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> ExactPoint {
        let piece = &self.pieces[rng.random_range(0..self.pieces.len())];
        match piece {
            Piece::Point(p) => p.clone(),
            Piece::Segment(a, b) => {
                if rng.random_bool(0.05) {
                    if rng.random_bool(0.5) {
                        a.clone()
                    } else {
                        b.clone()
                    }
                } else {
                    lerp(a, b, &dyadic(rng))
                }
            }
            Piece::Polygon { verts, cum_area } => {
                let roll: f64 = rng.random();
                if roll < 0.03 {
                    return verts[rng.random_range(0..verts.len())].clone();
                }
                if roll < 0.2 {
                    let i = rng.random_range(0..verts.len());
                    let j = (i + 1) % verts.len();
                    return lerp(&verts[i], &verts[j], &dyadic(rng));
                }
                let total = *cum_area.last().expect("nonempty fan");
                let pick = rng.random::<f64>() * total;
                let k = cum_area.iter().position(|&c| pick <= c).unwrap_or(cum_area.len() - 1) + 1;
                let (v0, v1, v2) = (&verts[0], &verts[k], &verts[k + 1]);
                let mut u = dyadic(rng);
                let mut w = dyadic(rng);
                let one = Rational::one();
                if &u + &w > one {
                    u = &one - &u;
                    w = &one - &w;
                }
                Coords::new(
                    &(&v0.x + &(&v1.x - &v0.x).scale(&u)) + &(&v2.x - &v0.x).scale(&w),
                    &(&v0.y + &(&v1.y - &v0.y).scale(&u)) + &(&v2.y - &v0.y).scale(&w),
                )
            }
        }
    }

    /// A point of the region inside the box, or `None` after repeated
    /// rejections.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Option<ExactPoint> {
        if self.pieces.is_empty() {
            return None;
        }
        for _ in 0..1000 {
            let p = self.draw(rng);
            if self.filter.contains(&p) && self.clip.iter().all(|c| c.holds(&p)) {
                return Some(p);
            }
        }
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    pub samples: usize,
    pub checked: usize,
    pub excluded_interior: usize,
    pub violations: Vec<String>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn coverage_coord(rng: &mut ChaCha8Rng, bound: &Rational) -> FieldElement {
    let roll: f64 = rng.random();
    if roll < 0.15 {
        let specials = [q(1, 2), q(-1, 2), q_sqrt5(1, 2), q_sqrt5(-1, 2)];
        return specials[rng.random_range(0..specials.len())].clone();
    }
    let t = Rational::new(rng.random_range(-(1i64 << 20)..=(1i64 << 20)), 1 << 20);
    let base = FieldElement::from_rational(&t * bound);
    if roll < 0.25 {
        // Near a √5 line, on either side.
        let side = if rng.random_bool(0.5) { q_sqrt5(1, 2) } else { q_sqrt5(-1, 2) };
        let eps = FieldElement::from_rational(Rational::new(rng.random_range(-64..=64), 1 << 12));
        return &side + &eps;
    }
    base
}

/// Checks that every sampled point of `[−bound, bound]² \ int R` lies in
/// one of the eight closed quadrants.
pub fn coverage_check(samples: usize, bound: f64, seed: u64) -> CoverageReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound_q = Rational::from_f64_exact(bound).expect("finite bound");
    let int_r = region("intR").expect("table");
    let quads: Vec<_> = ["Q1", "Q2", "Q3", "Q4", "Q1'", "Q2'", "Q3'", "Q4'"]
        .iter()
        .map(|n| region(n).expect("table"))
        .collect();
    let mut rep = CoverageReport {
        samples,
        checked: 0,
        excluded_interior: 0,
        violations: Vec::new(),
    };
    for _ in 0..samples {
        let p = Coords::new(coverage_coord(&mut rng, &bound_q), coverage_coord(&mut rng, &bound_q));
        if int_r.contains(&p) {
            rep.excluded_interior += 1;
            continue;
        }
        rep.checked += 1;
        if !quads.iter().any(|r| r.contains(&p)) && rep.violations.len() < 20 {
            rep.violations.push(p.to_string());
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_in_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["R", "T1", "T2", "Q3", "S1'", "l1", "yaxis_pos", "dS", "Cycle", "Ext"] {
            let r = region(name).unwrap();
            let s = Sampler::new(&r.shape, [-8.0, 8.0, -8.0, 8.0]);
            for _ in 0..200 {
                let p = s.sample(&mut rng).unwrap_or_else(|| panic!("{name} starved"));
                assert!(r.contains(&p), "{name}: {p}");
            }
        }
    }

    #[test]
    fn t1_vertices_are_exact() {
        let r = region("T1").unwrap();
        let Shape::Convex(cs) = &r.shape else { panic!() };
        let v = vertices(cs);
        assert_eq!(v.len(), 4);
        assert!(v.contains(&Coords::new(q_sqrt5(-1, 2), q_sqrt5(1, 2))));
        assert!(v.contains(&Coords::new(q(-1, 2), q(1, 2))));
    }

    #[test]
    fn boundary_points_are_drawn() {
        let r = region("Sbar").unwrap();
        let s = Sampler::new(&r.shape, [-8.0, 8.0, -8.0, 8.0]);
        let open = region("S").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let on_edge = (0..500).filter(|_| !open.contains(&s.sample(&mut rng).unwrap())).count();
        assert!(on_edge > 20);
    }

    #[test]
    fn coverage_has_no_violations() {
        let rep = coverage_check(20_000, 5.0, 3);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(rep.excluded_interior > 0 && rep.checked > 0);
    }
}
