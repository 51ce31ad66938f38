//! Orbit fates with checkable certificates.
//!
//! Forward: entering S₁′ (resp. S₁) puts the point in the basin of p₊
//! (resp. p₋); entering (Q₃ ∪ Q₃′) ∖ {p, p′} means escape. Backward:
//! entering N = Q₁ ∪ Q₂ ∪ Q₄′ or P = σ(N), minus the periodic points, means
//! escape. Certificates found while the orbit is still computed exactly are
//! rigorous; later ones rest on float iteration.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::henon::{catalogue_entry, forward, inverse, Coords, ExactPoint, FloatPoint, Point};
use crate::regions::{membership, region, Region};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Maximum number of iterations.
    pub budget: u32,
    /// Max-norm beyond which a forward orbit is taken to escape (heuristic).
    pub escape_radius: f64,
    /// Maximum number of iterations done in exact arithmetic.
    pub exact_steps: u32,
    /// Exact iteration also stops once a coefficient needs this many bits.
    pub exact_bit_limit: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            budget: 2000,
            escape_radius: 10.0,
            exact_steps: 64,
            exact_bit_limit: 4096,
        }
    }
}

impl ClassifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget < 1 {
            return Err(Error::InvalidParam("budget must be at least 1".into()));
        }
        if !(self.escape_radius > 5f64.sqrt() / 2.0) {
            return Err(Error::InvalidParam(format!(
                "escape radius {} must exceed sqrt5/2",
                self.escape_radius
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// Forward verdicts: `BasinPlus`, `BasinMinus`, `StableZeroCandidate`,
/// `Escape`, `PeriodicOnCycle`, `Undecided`. Backward verdicts:
/// `UnstableZero`, `UnstablePPrime`, `Escape`, `PeriodicFixed`, `Undecided`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Undecided,
    BasinPlus,
    BasinMinus,
    StableZeroCandidate,
    Escape,
    PeriodicOnCycle,
    UnstableZero,
    UnstablePPrime,
    PeriodicFixed,
}

impl Verdict {
    pub const ALL: [Verdict; 9] = [
        Verdict::Undecided,
        Verdict::BasinPlus,
        Verdict::BasinMinus,
        Verdict::StableZeroCandidate,
        Verdict::Escape,
        Verdict::PeriodicOnCycle,
        Verdict::UnstableZero,
        Verdict::UnstablePPrime,
        Verdict::PeriodicFixed,
    ];

    /// One-byte code used in raster output.
    pub fn code(self) -> u8 {
        Verdict::ALL.iter().position(|&v| v == self).expect("listed") as u8
    }

    pub fn from_code(c: u8) -> Option<Verdict> {
        Verdict::ALL.get(c as usize).copied()
    }

    /// The verdict of the σ-image.
    pub fn mirrored(self) -> Verdict {
        match self {
            Verdict::BasinPlus => Verdict::BasinMinus,
            Verdict::BasinMinus => Verdict::BasinPlus,
            v => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Undecided => "Undecided",
            Verdict::BasinPlus => "BasinPlus",
            Verdict::BasinMinus => "BasinMinus",
            Verdict::StableZeroCandidate => "StableZeroCandidate",
            Verdict::Escape => "Escape",
            Verdict::PeriodicOnCycle => "PeriodicOnCycle",
            Verdict::UnstableZero => "UnstableZero",
            Verdict::UnstablePPrime => "UnstablePPrime",
            Verdict::PeriodicFixed => "PeriodicFixed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The iterate lies in the named region.
    InRegion { region: &'static str },
    /// The iterate's max-norm exceeds the radius.
    Radius { radius: f64 },
    /// The point itself is periodic.
    Periodic { name: &'static str, period: u32 },
    /// The iterate is within `tol` of the named point.
    NearPoint { name: &'static str, tol: f64 },
    /// The iterate is within `tol` of the local unstable manifold of the named saddle.
    LocalManifold { saddle: &'static str, tol: f64 },
    /// Budget exhausted.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    /// Number of map applications to reach the witness iterate.
    pub step: u32,
    pub evidence: Evidence,
    pub rigorous: bool,
    /// Leading steps done in exact arithmetic before the float handoff.
    pub exact_steps: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fate {
    pub direction: Direction,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub steps_used: u32,
}

impl Certificate {
    fn describe(&self, dir: Direction) -> String {
        let it = match dir {
            Direction::Forward => format!("f^{}", self.step),
            Direction::Backward => format!("f^-{}", self.step),
        };
        let body = match &self.evidence {
            Evidence::InRegion { region } => format!("{it} in {region}"),
            Evidence::Radius { radius } => format!("|{it}| > {radius}"),
            Evidence::Periodic { name, period } => format!("{name} has period {period}"),
            Evidence::NearPoint { name, tol } => format!("{it} within {tol:e} of {name}"),
            Evidence::LocalManifold { saddle, tol } => {
                format!("{it} within {tol:e} of the local unstable manifold of {saddle}")
            }
            Evidence::Exhausted => format!("no witness within {} steps", self.step),
        };
        let tag = if self.rigorous { "rigorous" } else { "heuristic" };
        format!("{body}, {tag}")
    }
}

impl fmt::Display for Fate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.verdict, &self.certificate.evidence) {
            (Verdict::PeriodicOnCycle | Verdict::PeriodicFixed, Evidence::Periodic { period, .. }) => {
                let what = if *period == 1 { "fixed point" } else { "period-2 cycle" };
                write!(f, "{} ({what})", self.verdict)
            }
            (Verdict::Undecided | Verdict::StableZeroCandidate, _) => {
                write!(f, "{}, {}", self.verdict, self.certificate.describe(self.direction))
            }
            _ => write!(
                f,
                "{}, certificate: {}",
                self.verdict,
                self.certificate.describe(self.direction)
            ),
        }
    }
}

struct Tables {
    s1: &'static Region,
    s1p: &'static Region,
    q3: &'static Region,
    q3p: &'static Region,
    cycle: &'static Region,
    attractors: &'static Region,
    back: [(&'static str, &'static Region); 6],
    periodic: Vec<(&'static str, u32, ExactPoint)>,
    origin_basis: Basis,
    cycle_basis: Basis,
    p_float: FloatPoint,
}

/// Coordinates in an eigenbasis `(e_u, e_s)`.
#[derive(Clone, Copy)]
struct Basis {
    eu: [f64; 2],
    es: [f64; 2],
}

impl Basis {
    fn coords(&self, d: (f64, f64)) -> (f64, f64) {
        let det = self.eu[0] * self.es[1] - self.eu[1] * self.es[0];
        let u = (d.0 * self.es[1] - d.1 * self.es[0]) / det;
        let s = (self.eu[0] * d.1 - self.eu[1] * d.0) / det;
        (u, s)
    }
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let r = |n: &str| region(n).expect("region table");
        let o = catalogue_entry("0");
        let p = catalogue_entry("p");
        let names: [&'static str; 5] = ["0", "p+", "p-", "p", "p'"];
        Tables {
            s1: r("S1"),
            s1p: r("S1'"),
            q3: r("Q3"),
            q3p: r("Q3'"),
            cycle: r("Cycle"),
            attractors: r("Attractors"),
            back: [
                ("Q1", r("Q1")),
                ("Q2", r("Q2")),
                ("Q4'", r("Q4'")),
                ("Q1'", r("Q1'")),
                ("Q2'", r("Q2'")),
                ("Q4", r("Q4")),
            ],
            periodic: names
                .iter()
                .map(|&n| {
                    let e = catalogue_entry(n);
                    (n, e.period, e.location)
                })
                .collect(),
            origin_basis: Basis {
                eu: o.unstable_direction.expect("saddle"),
                es: o.stable_direction.expect("saddle"),
            },
            cycle_basis: Basis {
                eu: p.unstable_direction.expect("saddle"),
                es: p.stable_direction.expect("saddle"),
            },
            p_float: p.float_location(),
        }
    })
}

/// Which backward-invariant escape set a quadrant belongs to.
pub fn escape_side(quadrant: &str) -> Option<char> {
    match quadrant {
        "Q1" | "Q2" | "Q4'" => Some('N'),
        "Q1'" | "Q2'" | "Q4" => Some('P'),
        _ => None,
    }
}

const HALF_SQRT5: f64 = 1.118_033_988_749_895;
const NEAR_TOL: f64 = 1e-9;
const ORIGIN_LOCAL_RADIUS: f64 = 1e-4;
const CYCLE_LOCAL_RADIUS: f64 = 1e-6;
const BACKWARD_OVERFLOW: f64 = 1e150;

fn periodic_match(q: &Point) -> Option<(&'static str, u32)> {
    let t = tables();
    match q {
        Point::Exact(e) => t.periodic.iter().find(|(_, _, loc)| loc == e).map(|(n, k, _)| (*n, *k)),
        Point::Float(f) => t
            .periodic
            .iter()
            .filter(|(_, _, loc)| loc.x.is_rational())
            .find(|(_, _, loc)| loc.to_float() == *f)
            .map(|(n, k, _)| (*n, *k)),
    }
}

fn cert(step: u32, evidence: Evidence, rigorous: bool, exact_steps: u32) -> Certificate {
    Certificate {
        step,
        evidence,
        rigorous,
        exact_steps,
    }
}

enum Step {
    Done(Verdict, Evidence),
    Continue,
}

fn forward_check_exact(q: &ExactPoint, radius: f64) -> Step {
    let t = tables();
    if t.s1p.contains(q) {
        return Step::Done(Verdict::BasinPlus, Evidence::InRegion { region: "S1'" });
    }
    if t.s1.contains(q) {
        return Step::Done(Verdict::BasinMinus, Evidence::InRegion { region: "S1" });
    }
    if !t.cycle.contains(q) {
        if t.q3.contains(q) {
            return Step::Done(Verdict::Escape, Evidence::InRegion { region: "Q3" });
        }
        if t.q3p.contains(q) {
            return Step::Done(Verdict::Escape, Evidence::InRegion { region: "Q3'" });
        }
    }
    let beyond = |v: &crate::exactnum::FieldElement| {
        let i = v.enclose_fast();
        i.lo > radius || i.hi < -radius
    };
    if beyond(&q.x) || beyond(&q.y) {
        return Step::Done(Verdict::Escape, Evidence::Radius { radius });
    }
    Step::Continue
}

fn forward_check_float(q: &FloatPoint, radius: f64) -> Step {
    let (x, y) = (q.x, q.y);
    if x > 0.0 && x < 0.5 && y > 0.0 && y < 0.5 {
        return Step::Done(Verdict::BasinPlus, Evidence::InRegion { region: "S1'" });
    }
    if x < 0.0 && x > -0.5 && y < 0.0 && y > -0.5 {
        return Step::Done(Verdict::BasinMinus, Evidence::InRegion { region: "S1" });
    }
    if x <= -HALF_SQRT5 && y >= HALF_SQRT5 {
        return Step::Done(Verdict::Escape, Evidence::InRegion { region: "Q3" });
    }
    if x >= HALF_SQRT5 && y <= -HALF_SQRT5 {
        return Step::Done(Verdict::Escape, Evidence::InRegion { region: "Q3'" });
    }
    if !(q.max_norm() <= radius) {
        return Step::Done(Verdict::Escape, Evidence::Radius { radius });
    }
    if (x - 0.5).hypot(y - 0.5) < NEAR_TOL {
        return Step::Done(Verdict::BasinPlus, Evidence::NearPoint { name: "p+", tol: NEAR_TOL });
    }
    if (x + 0.5).hypot(y + 0.5) < NEAR_TOL {
        return Step::Done(Verdict::BasinMinus, Evidence::NearPoint { name: "p-", tol: NEAR_TOL });
    }
    // Inside this ball the rest of a float orbit is decided by rounding.
    if x.hypot(y) < NEAR_TOL {
        return Step::Done(Verdict::StableZeroCandidate, Evidence::NearPoint { name: "0", tol: NEAR_TOL });
    }
    Step::Continue
}

fn backward_check_exact(q: &ExactPoint) -> Step {
    let t = tables();
    if t.cycle.contains(q) || t.attractors.contains(q) {
        return Step::Continue;
    }
    for (name, r) in &t.back {
        if r.contains(q) {
            return Step::Done(Verdict::Escape, Evidence::InRegion { region: name });
        }
    }
    Step::Continue
}

fn backward_check_float(q: &FloatPoint) -> Step {
    let t = tables();
    let (x, y) = (q.x, q.y);
    let r = HALF_SQRT5;
    let attractor = (x == 0.5 && y == 0.5) || (x == -0.5 && y == -0.5);
    if !attractor {
        let hit = if x <= -0.5 && y <= -0.5 {
            Some("Q1")
        } else if x <= -r && y <= r {
            Some("Q2")
        } else if x <= r && y <= -r {
            Some("Q4'")
        } else if x >= 0.5 && y >= 0.5 {
            Some("Q1'")
        } else if x >= r && y >= -r {
            Some("Q2'")
        } else if x >= -r && y >= r {
            Some("Q4")
        } else {
            None
        };
        if let Some(region) = hit {
            return Step::Done(Verdict::Escape, Evidence::InRegion { region });
        }
    }
    if !(q.max_norm() <= BACKWARD_OVERFLOW) {
        return Step::Done(Verdict::Escape, Evidence::Radius { radius: BACKWARD_OVERFLOW });
    }
    let n = q.norm();
    if n < NEAR_TOL {
        return Step::Done(Verdict::UnstableZero, Evidence::NearPoint { name: "0", tol: NEAR_TOL });
    }
    if n <= ORIGIN_LOCAL_RADIUS {
        let (_, s) = t.origin_basis.coords((x, y));
        if s.abs() <= NEAR_TOL {
            return Step::Done(
                Verdict::UnstableZero,
                Evidence::LocalManifold { saddle: "0", tol: NEAR_TOL },
            );
        }
    }
    for (name, sign) in [("p", 1.0), ("p'", -1.0)] {
        let d = (x - sign * t.p_float.x, y - sign * t.p_float.y);
        let dn = d.0.hypot(d.1);
        if dn < NEAR_TOL {
            return Step::Done(Verdict::UnstablePPrime, Evidence::NearPoint { name, tol: NEAR_TOL });
        }
        if dn <= CYCLE_LOCAL_RADIUS {
            let (_, s) = t.cycle_basis.coords((sign * d.0, sign * d.1));
            if s.abs() <= NEAR_TOL {
                return Step::Done(
                    Verdict::UnstablePPrime,
                    Evidence::LocalManifold { saddle: name, tol: NEAR_TOL },
                );
            }
        }
    }
    Step::Continue
}

/// Float continuation of an exact orbit. The float phase is heuristic, so
/// the midpoint of the cheap enclosure stands in for correct rounding,
/// which costs a bisection over thousand-bit numbers.
fn handoff(e: &ExactPoint) -> FloatPoint {
    let (x, y) = (e.x.enclose_fast(), e.y.enclose_fast());
    let finite = [x.lo, x.hi, y.lo, y.hi].iter().all(|v| v.is_finite());
    if finite {
        Coords::new(x.mid(), y.mid())
    } else {
        e.to_float()
    }
}

fn run(q: &Point, cfg: &ClassifyConfig, dir: Direction) -> Fate {
    let periodic_verdict = match dir {
        Direction::Forward => Verdict::PeriodicOnCycle,
        Direction::Backward => Verdict::PeriodicFixed,
    };
    if let Some((name, period)) = periodic_match(q) {
        return Fate {
            direction: dir,
            verdict: periodic_verdict,
            certificate: cert(0, Evidence::Periodic { name, period }, matches!(q, Point::Exact(_)), 0),
            steps_used: 0,
        };
    }
    let mut exact_steps = 0u32;
    let done = |verdict, step, evidence, rigorous, exact_steps| Fate {
        direction: dir,
        verdict,
        certificate: cert(step, evidence, rigorous, exact_steps),
        steps_used: step,
    };
    let mut step = 0u32;
    let mut fq = match q {
        Point::Exact(e) => {
            let mut e = e.clone();
            loop {
                let check = match dir {
                    Direction::Forward => forward_check_exact(&e, cfg.escape_radius),
                    Direction::Backward => backward_check_exact(&e),
                };
                if let Step::Done(v, ev) = check {
                    let rigorous = matches!(ev, Evidence::InRegion { .. });
                    return done(v, step, ev, rigorous, step);
                }
                if step >= cfg.budget || step >= cfg.exact_steps || e.height_bits() > cfg.exact_bit_limit {
                    break;
                }
                e = match dir {
                    Direction::Forward => forward(&e),
                    Direction::Backward => inverse(&e),
                };
                step += 1;
            }
            exact_steps = step;
            handoff(&e)
        }
        Point::Float(f) => *f,
    };
    loop {
        let check = match dir {
            Direction::Forward => forward_check_float(&fq, cfg.escape_radius),
            Direction::Backward => backward_check_float(&fq),
        };
        if let Step::Done(v, ev) = check {
            return done(v, step, ev, false, exact_steps);
        }
        if step >= cfg.budget {
            break;
        }
        fq = match dir {
            Direction::Forward => forward(&fq),
            Direction::Backward => inverse(&fq),
        };
        step += 1;
    }
    done(Verdict::Undecided, step, Evidence::Exhausted, false, exact_steps)
}

pub fn forward_fate(q: &Point, cfg: &ClassifyConfig) -> Fate {
    run(q, cfg, Direction::Forward)
}

pub fn backward_fate(q: &Point, cfg: &ClassifyConfig) -> Fate {
    run(q, cfg, Direction::Backward)
}

/// Re-derives a certificate: iterates `step` times along the same path as
/// the classifier (exact prefix, then floats) and re-checks the claimed
/// membership, exactly when the whole path was exact.
pub fn replay_certificate(q: &Point, fate: &Fate) -> bool {
    let c = &fate.certificate;
    let sign = if fate.direction == Direction::Forward { 1 } else { -1 };
    let witness = match q {
        Point::Exact(e) => {
            let img = crate::henon::iterate(e, sign * c.exact_steps.min(c.step) as i32);
            if c.exact_steps >= c.step {
                Point::Exact(img)
            } else {
                let f = handoff(&img);
                Point::Float(crate::henon::iterate(&f, sign * (c.step - c.exact_steps) as i32))
            }
        }
        Point::Float(f) => Point::Float(crate::henon::iterate(f, sign * c.step as i32)),
    };
    match &c.evidence {
        Evidence::InRegion { region: name } => region(name).map(|r| membership(&witness, r)).unwrap_or(false),
        Evidence::Periodic { .. } => periodic_match(q).is_some(),
        Evidence::Radius { radius } => match &witness {
            Point::Exact(e) => {
                let far = |v: &crate::exactnum::FieldElement| {
                    let i = v.enclose_fast();
                    i.lo > *radius || i.hi < -*radius
                };
                far(&e.x) || far(&e.y)
            }
            Point::Float(f) => !(f.max_norm() <= *radius),
        },
        _ => true,
    }
}

/// Fates for every pixel center, row-major from the top-left pixel.
#[derive(Clone, Debug)]
pub struct FateGrid {
    pub grid: Grid,
    pub direction: Direction,
    pub fates: Vec<Fate>,
}

impl FateGrid {
    pub fn verdict(&self, i: usize, j: usize) -> Verdict {
        self.fates[self.grid.index(i, j)].verdict
    }

    /// One verdict code per pixel.
    pub fn codes(&self) -> Vec<u8> {
        self.fates.iter().map(|f| f.verdict.code()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,col,row,x,y,verdict,steps,certificate\n");
        for (k, fate) in self.fates.iter().enumerate() {
            let (i, j) = (k % self.grid.res.nx, k / self.grid.res.nx);
            let c = self.grid.center(i, j);
            out.push_str(&format!(
                "{k},{i},{j},{:.17e},{:.17e},{},{},\"{}\"\n",
                c.x,
                c.y,
                fate.verdict,
                fate.steps_used,
                fate.certificate.describe(fate.direction)
            ));
        }
        out
    }
}

/// Classifies every pixel center of `grid` in float mode. The result does
/// not depend on the number of workers.
pub fn classify_grid_with(
    grid: &Grid,
    cfg: &ClassifyConfig,
    dir: Direction,
    threads: Option<usize>,
) -> Result<FateGrid> {
    cfg.validate()?;
    let fates = crate::parallel::install(threads, || {
        (0..grid.len())
            .into_par_iter()
            .map(|k| run(&Point::Float(grid.center_of_index(k)), cfg, dir))
            .collect::<Vec<_>>()
    });
    Ok(FateGrid {
        grid: *grid,
        direction: dir,
        fates,
    })
}

/// Fates of arbitrary float points, in input order.
pub fn classify_points(
    points: &[FloatPoint],
    cfg: &ClassifyConfig,
    dir: Direction,
    threads: Option<usize>,
) -> Result<Vec<Fate>> {
    cfg.validate()?;
    Ok(crate::parallel::install(threads, || {
        points.par_iter().map(|q| run(&Point::Float(*q), cfg, dir)).collect()
    }))
}

pub fn classify_grid(grid: &Grid, cfg: &ClassifyConfig) -> Result<FateGrid> {
    classify_grid_with(grid, cfg, Direction::Forward, None)
}

pub fn point(x: f64, y: f64) -> Point {
    Point::Float(Coords::new(x, y))
}
