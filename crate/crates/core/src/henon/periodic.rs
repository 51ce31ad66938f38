use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::{forward, iterate, jacobian, Coords, ExactPoint, FloatPoint, Point};
use crate::error::{Error, Result};
use crate::exactnum::{q, q_sqrt5};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Attracting,
    Saddle,
}

/// The two saddle orbits that carry manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SaddleId {
    Origin,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub name: String,
    pub location: ExactPoint,
    pub period: u32,
    pub stability: Stability,
    /// Eigenvalues of `D(f^period)`, largest modulus first.
    pub eigenvalues: (f64, f64),
    /// Unit vectors; present only for saddles.
    pub unstable_direction: Option<[f64; 2]>,
    pub stable_direction: Option<[f64; 2]>,
}

impl PeriodicPoint {
    pub fn float_location(&self) -> FloatPoint {
        self.location.to_float()
    }
}

fn eigen(m: &Matrix2<f64>) -> (f64, f64) {
    let tr = m.trace();
    let det = m.determinant();
    let disc = (tr * tr - 4.0 * det).sqrt();
    let a = (tr + disc) / 2.0;
    let b = (tr - disc) / 2.0;
    if a.abs() >= b.abs() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Unit eigenvector for `lambda`, oriented so that `orient · v > 0`.
fn eigvec(m: &Matrix2<f64>, lambda: f64, orient: [f64; 2]) -> [f64; 2] {
    let c1 = Vector2::new(m[(0, 1)], lambda - m[(0, 0)]);
    let c2 = Vector2::new(lambda - m[(1, 1)], m[(1, 0)]);
    let mut v = if c1.norm() >= c2.norm() { c1 } else { c2 };
    v /= v.norm();
    if v.x * orient[0] + v.y * orient[1] < 0.0 {
        v = -v;
    }
    [v.x, v.y]
}

fn build(name: &str, loc: ExactPoint, period: u32, orient_u: [f64; 2], orient_s: [f64; 2]) -> PeriodicPoint {
    let m = jacobian(&Point::Exact(loc.clone()), period as i32);
    let (l1, l2) = eigen(&m);
    let saddle = l1.abs() > 1.0 && l2.abs() < 1.0;
    PeriodicPoint {
        name: name.to_string(),
        location: loc,
        period,
        stability: if saddle {
            Stability::Saddle
        } else {
            Stability::Attracting
        },
        eigenvalues: (l1, l2),
        unstable_direction: saddle.then(|| eigvec(&m, l1, orient_u)),
        stable_direction: saddle.then(|| eigvec(&m, l2, orient_s)),
    }
}

/// The five real periodic points.
///
/// Orientation conventions: at the origin both eigenvectors point to
/// `x > 0` (the unstable one into S₁′, the stable one into S₂′); at `p` the
/// unstable vector points into Q₃ and the stable one to `x > 0`; `p′`
/// carries the σ-images.
pub fn periodic_catalogue() -> Vec<PeriodicPoint> {
    let zero = q(0, 1);
    vec![
        build("0", Coords::new(zero.clone(), zero), 1, [1.0, 0.0], [1.0, 0.0]),
        build("p+", Coords::new(q(1, 2), q(1, 2)), 1, [1.0, 0.0], [1.0, 0.0]),
        build("p-", Coords::new(q(-1, 2), q(-1, 2)), 1, [1.0, 0.0], [1.0, 0.0]),
        build("p", Coords::new(q_sqrt5(-1, 2), q_sqrt5(1, 2)), 2, [-1.0, 1.0], [1.0, 0.0]),
        build("p'", Coords::new(q_sqrt5(1, 2), q_sqrt5(-1, 2)), 2, [1.0, -1.0], [-1.0, 0.0]),
    ]
}

pub fn catalogue_entry(name: &str) -> PeriodicPoint {
    periodic_catalogue()
        .into_iter()
        .find(|p| p.name == name)
        .expect("catalogue name")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FindReport {
    pub roots: Vec<[f64; 2]>,
    pub seeds: usize,
    pub converged: usize,
    pub dropped: usize,
}

/// Newton's method on `f^period − id` from a `grid × grid` lattice of seeds.
///
/// Roots within 1e-6 of each other are merged; a root is kept only if its
/// residual is below 1e-10 and it lies in the search box.
pub fn find_periodic(period: u32, bx: [f64; 4], grid: usize) -> Result<FindReport> {
    if !(1..=4).contains(&period) {
        return Err(Error::InvalidParam(format!("period {period} outside 1..=4")));
    }
    if grid < 16 {
        return Err(Error::InvalidParam(format!("grid {grid} below 16")));
    }
    let [xmin, xmax, ymin, ymax] = bx;
    let n = period as i32;
    let mut report = FindReport::default();
    for i in 0..grid {
        for j in 0..grid {
            report.seeds += 1;
            let x0 = xmin + (xmax - xmin) * i as f64 / (grid - 1) as f64;
            let y0 = ymin + (ymax - ymin) * j as f64 / (grid - 1) as f64;
            match newton(Coords::new(x0, y0), n) {
                Some(r) if r.x >= xmin && r.x <= xmax && r.y >= ymin && r.y <= ymax => {
                    report.converged += 1;
                    if !report.roots.iter().any(|s| (s[0] - r.x).hypot(s[1] - r.y) < 1e-6) {
                        report.roots.push([r.x, r.y]);
                    }
                }
                _ => report.dropped += 1,
            }
        }
    }
    report.roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(report)
}

fn residual(q0: &FloatPoint, n: i32) -> f64 {
    let img = iterate(q0, n);
    (img.x - q0.x).hypot(img.y - q0.y)
}

fn newton(mut z: FloatPoint, n: i32) -> Option<FloatPoint> {
    for _ in 0..100 {
        let img = iterate(&z, n);
        let fval = Vector2::new(img.x - z.x, img.y - z.y);
        if fval.norm() < 1e-14 {
            break;
        }
        let jac = jacobian(&Point::Float(z), n) - Matrix2::identity();
        let step = jac.try_inverse()? * fval;
        z = Coords::new(z.x - step.x, z.y - step.y);
        if !z.x.is_finite() || !z.y.is_finite() || z.max_norm() > 1e3 {
            return None;
        }
        if step.norm() < 1e-15 {
            break;
        }
    }
    (residual(&z, n) < 1e-10).then_some(z)
}

/// Union of `find_periodic` over periods `1..=max_period`, deduplicated.
pub fn periodic_census(max_period: u32, bx: [f64; 4], grid: usize) -> Result<Vec<[f64; 2]>> {
    let mut all: Vec<[f64; 2]> = Vec::new();
    for period in 1..=max_period {
        for r in find_periodic(period, bx, grid)?.roots {
            if !all.iter().any(|s| (s[0] - r[0]).hypot(s[1] - r[1]) < 1e-6) {
                all.push(r);
            }
        }
    }
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(all)
}

impl PeriodicPoint {
    /// True iff `f^period` fixes the location exactly.
    pub fn is_exactly_periodic(&self) -> bool {
        iterate(&self.location, self.period as i32) == self.location
    }

    pub fn image(&self) -> ExactPoint {
        forward(&self.location)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_has_five_exact_points() {
        let cat = periodic_catalogue();
        assert_eq!(cat.len(), 5);
        for p in &cat {
            assert!(p.is_exactly_periodic(), "{}", p.name);
            let m = jacobian(&Point::Exact(p.location.clone()), p.period as i32);
            let prod = p.eigenvalues.0 * p.eigenvalues.1;
            assert!((prod - m.determinant()).abs() < 1e-12);
        }
        assert_eq!(cat[3].image(), cat[4].location);
    }

    #[test]
    fn origin_eigenvalues() {
        let o = catalogue_entry("0");
        let s41 = 41f64.sqrt();
        assert!((o.eigenvalues.0 - (3.0 + s41) / 8.0).abs() < 1e-14);
        assert!((o.eigenvalues.1 - (3.0 - s41) / 8.0).abs() < 1e-14);
        assert_eq!(o.stability, Stability::Saddle);
    }

    #[test]
    fn attracting_eigenvalues() {
        let pp = catalogue_entry("p+");
        assert_eq!(pp.stability, Stability::Attracting);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((pp.eigenvalues.0.abs() - r).abs() < 1e-14);
        assert!((pp.eigenvalues.0 + pp.eigenvalues.1).abs() < 1e-14);
    }

    #[test]
    fn cycle_unstable_direction() {
        let p = catalogue_entry("p");
        let u = p.unstable_direction.unwrap();
        let ratio = u[0] / u[1];
        assert!((ratio - (3.0 - 11f64.sqrt())).abs() < 1e-12);
        assert!(u[0] < 0.0 && u[1] > 0.0);
        let pp = catalogue_entry("p'");
        assert_eq!(pp.unstable_direction.unwrap(), [-u[0], -u[1]]);
    }

    #[test]
    fn fixed_points_found() {
        let r = find_periodic(1, [-2.0, 2.0, -2.0, 2.0], 64).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert!(find_periodic(5, [-2.0, 2.0, -2.0, 2.0], 64).is_err());
        assert!(find_periodic(1, [-2.0, 2.0, -2.0, 2.0], 8).is_err());
    }

    #[test]
    fn catalogue_json_uses_exact_strings() {
        let js = serde_json::to_string(&periodic_catalogue()).unwrap();
        assert!(js.contains("\"0/1 + -1/2*sqrt5\""));
    }
}
