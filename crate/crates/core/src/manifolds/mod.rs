//! Stable and unstable manifolds of the two saddle orbits, grown as
//! polylines.
//!
//! A branch is parametrized by `(k, r)` with `r ∈ [0, 1]`: the point is
//! `F^k(s + δ·λ^r·e)` where `s` is the saddle, `e` the eigen-direction, `λ`
//! the expanding eigenvalue of the growth map `F` and `δ` the seed offset.
//! `F` is `f^m` for unstable and `f^-m` for stable manifolds, with `m` chosen
//! so that `λ > 0`. Each fundamental domain `k` is the image of domain `k−1`,
//! refined by bisecting `r` wherever consecutive vertices are farther apart
//! than `max_step`.
//!
//! Curves of the period-2 cycle are grown at `p` and reflected to `p′`.

mod index;

use serde::{Deserialize, Serialize};

pub use index::SegmentIndex;

use crate::error::{Error, Result};
use crate::grid::Window;
use crate::henon::{catalogue_entry, forward, inverse, sigma, Coords, FloatPoint, SaddleId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Stable,
    Unstable,
}

/// `Plus` leaves the saddle along the catalogue eigenvector, `Minus` along
/// its negative. For the origin, `Plus` points into `x > 0`; for `p`, the
/// unstable `Plus` branch points into Q₃ and the stable one into `x > −√5/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowParams {
    pub seed_offset: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub tube_tol: f64,
    pub max_points: usize,
    /// Number of fundamental domains after which growth stops.
    pub max_domains: u32,
    /// Only vertices inside the arena are kept.
    pub arena: Window,
    /// Points beyond this max-norm are dropped for good. Outside R, orbits in
    /// the escaping quadrants never come back, so nothing is lost.
    pub dead_radius: f64,
}

impl Default for GrowParams {
    fn default() -> Self {
        GrowParams {
            seed_offset: 1e-7,
            min_step: 1e-5,
            max_step: 5e-3,
            tube_tol: 1e-6,
            max_points: 200_000,
            max_domains: 200,
            arena: Window::new(-3.0, 3.0, -3.0, 3.0),
            dead_radius: 8.0,
        }
    }
}

impl GrowParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParam(m.to_string()));
        if !(self.min_step > 0.0 && self.min_step < self.max_step && self.max_step.is_finite()) {
            return bad("need 0 < min_step < max_step");
        }
        if !(self.seed_offset > 0.0 && self.seed_offset < self.min_step) {
            return bad("need 0 < seed_offset < min_step");
        }
        if !(self.tube_tol > 0.0) {
            return bad("tube_tol must be positive");
        }
        if self.max_points < 2 || self.max_domains < 1 {
            return bad("max_points must be at least 2 and max_domains at least 1");
        }
        self.arena.validate()?;
        let a = &self.arena;
        let reach = [a.xmin, a.xmax, a.ymin, a.ymax].iter().fold(0f64, |m, v| m.max(v.abs()));
        if !(self.dead_radius >= reach) {
            return bad("dead_radius must cover the arena");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The curve reached a limit point.
    Converged,
    /// Every remaining point went beyond the dead radius.
    Escaped,
    MaxPoints,
    MaxDomains,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    /// Name of the periodic point the curve emanates from.
    pub at: String,
    pub saddle: SaddleId,
    pub kind: Kind,
    pub branch: Branch,
    pub map_power: u32,
    pub points: Vec<FloatPoint>,
    /// Fundamental domain of each vertex.
    pub domain: Vec<u32>,
    /// Indices `i` such that `points[i-1]` and `points[i]` are not joined.
    pub breaks: Vec<usize>,
    pub params: GrowParams,
    pub termination: Termination,
    /// Places where the parameter ran out of precision before the spacing
    /// came under `max_step`; the curve is broken there.
    pub gaps: usize,
    pub warnings: Vec<String>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Joined pairs of consecutive vertices.
    pub fn segments(&self) -> impl Iterator<Item = (usize, FloatPoint, FloatPoint)> + '_ {
        let mut b = self.breaks.iter().peekable();
        (1..self.points.len()).filter_map(move |i| {
            while b.peek().is_some_and(|&&j| j < i) {
                b.next();
            }
            if b.peek() == Some(&&i) {
                None
            } else {
                Some((i, self.points[i - 1], self.points[i]))
            }
        })
    }

    /// The σ-image, emanating from the σ-image of the saddle.
    pub fn mirrored(&self) -> Polyline {
        let mut m = self.clone();
        m.points = self.points.iter().map(sigma).collect();
        m.at = match self.at.as_str() {
            "p" => "p'".to_string(),
            "p'" => "p".to_string(),
            other => other.to_string(),
        };
        if self.saddle == SaddleId::Origin {
            m.branch = match self.branch {
                Branch::Plus => Branch::Minus,
                Branch::Minus => Branch::Plus,
            };
        }
        m
    }

    /// The growth map applied once: `f^m` or `f^-m`.
    pub fn growth_map(&self, q: &FloatPoint) -> FloatPoint {
        step_map(self.kind, self.map_power, q)
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            Kind::Stable => "s",
            Kind::Unstable => "u",
        };
        let b = match self.branch {
            Branch::Plus => "+",
            Branch::Minus => "-",
        };
        format!("W{k}{b}({})", self.at)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,piece,x,y\n");
        let mut piece = 0;
        let mut b = self.breaks.iter().peekable();
        for (t, q) in self.points.iter().enumerate() {
            if b.peek() == Some(&&t) {
                piece += 1;
                b.next();
            }
            out.push_str(&format!("{t},{piece},{:.17e},{:.17e}\n", q.x, q.y));
        }
        out
    }

    /// Metadata without the vertex list.
    pub fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "curve": self.label(),
            "at": self.at,
            "saddle": self.saddle,
            "kind": self.kind,
            "branch": self.branch,
            "map_power": self.map_power,
            "vertices": self.points.len(),
            "pieces": self.breaks.len() + usize::from(!self.points.is_empty()),
            "domains": self.domain.last().map_or(0, |d| d + 1),
            "termination": self.termination,
            "gaps": self.gaps,
            "warnings": self.warnings,
            "params": self.params,
        })
    }
}

fn step_map(kind: Kind, power: u32, q: &FloatPoint) -> FloatPoint {
    let mut z = *q;
    for _ in 0..power {
        z = match kind {
            Kind::Unstable => forward(&z),
            Kind::Stable => inverse(&z),
        };
    }
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Live,
    /// Beyond the dead radius; stays there.
    Dead,
    /// Within `ABSORB_TOL` of an attracting point, which it never leaves.
    /// The position is frozen; `fresh` marks the domain where this happened.
    Absorbed { fresh: bool },
}

#[derive(Clone, Copy, Debug)]
struct Vertex {
    r: f64,
    q: FloatPoint,
    state: State,
    /// The pair ending at this vertex could not be resolved.
    gap_before: bool,
}

impl Vertex {
    fn live(&self) -> bool {
        self.state == State::Live
    }

    fn dead(&self) -> bool {
        self.state == State::Dead
    }
}

const ABSORB_TOL: f64 = 1e-9;
const ATTRACTORS: [(f64, f64); 2] = [(0.5, 0.5), (-0.5, -0.5)];

struct Grower {
    base: FloatPoint,
    dir: [f64; 2],
    lambda: f64,
    kind: Kind,
    power: u32,
    p: GrowParams,
}

impl Grower {
    fn seed(&self, r: f64) -> FloatPoint {
        let s = self.p.seed_offset * self.lambda.powf(r);
        Coords::new(self.base.x + s * self.dir[0], self.base.y + s * self.dir[1])
    }

    fn classify(&self, q: &FloatPoint) -> State {
        if !(q.max_norm() <= self.p.dead_radius) {
            return State::Dead;
        }
        if self.kind == Kind::Unstable
            && ATTRACTORS.iter().any(|&(x, y)| (q.x - x).hypot(q.y - y) < ABSORB_TOL)
        {
            return State::Absorbed { fresh: true };
        }
        State::Live
    }

    /// Advances a vertex by one domain.
    fn advance(&self, v: Vertex) -> Vertex {
        match v.state {
            State::Live => {
                let q = step_map(self.kind, self.power, &v.q);
                Vertex {
                    q,
                    state: self.classify(&q),
                    ..v
                }
            }
            State::Absorbed { .. } => Vertex {
                state: State::Absorbed { fresh: false },
                ..v
            },
            State::Dead => v,
        }
    }

    /// Domain-`k` point at parameter `r`, computed from the seed.
    fn eval(&self, k: u32, r: f64) -> Vertex {
        let q = self.seed(r);
        let mut v = Vertex {
            r,
            q,
            state: self.classify(&q),
            gap_before: false,
        };
        for _ in 0..k {
            if v.dead() {
                break;
            }
            v = self.advance(v);
        }
        v
    }

    fn needs_split(&self, a: &Vertex, b: &Vertex) -> bool {
        match (a.state, b.state) {
            (State::Live, State::Live) => a.q.dist(&b.q) > self.p.max_step,
            (State::Dead, State::Dead) => false,
            (State::Dead, _) => b.q.max_norm() < self.p.dead_radius - self.p.max_step,
            (_, State::Dead) => a.q.max_norm() < self.p.dead_radius - self.p.max_step,
            // At least one absorbed: two points absorbed by the same attractor
            // bound an arc that stays in its basin.
            _ => a.q.dist(&b.q) > self.p.max_step,
        }
    }

    /// Bisects `r` until consecutive placed vertices are within `max_step`.
    /// Next to a dead vertex, bisection continues until the placed side is
    /// within `max_step` of the dead radius.
    fn refine(&self, k: u32, list: Vec<Vertex>, gaps: &mut usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(list.len());
        let mut it = list.into_iter();
        let Some(first) = it.next() else { return out };
        out.push(first);
        for b in it {
            let mut stack = vec![b];
            while let Some(top) = stack.pop() {
                let a = *out.last().expect("nonempty");
                if top.gap_before || !self.needs_split(&a, &top) {
                    out.push(top);
                    continue;
                }
                let m = 0.5 * (a.r + top.r);
                if !(m > a.r && m < top.r) {
                    *gaps += 1;
                    out.push(Vertex {
                        gap_before: true,
                        ..top
                    });
                    continue;
                }
                stack.push(top);
                stack.push(self.eval(k, m));
            }
        }
        out
    }

    /// Drops interior vertices of dead or absorbed runs, and live vertices
    /// closer than `min_step` to the previous kept one when the chord to the
    /// next vertex stays within `max_step` and passes within `tube_tol/10`.
    fn coarsen(&self, list: Vec<Vertex>) -> Vec<Vertex> {
        let n = list.len();
        let mut out: Vec<Vertex> = Vec::with_capacity(n);
        for j in 0..n {
            let v = list[j];
            let Some(last) = out.last().copied() else {
                out.push(v);
                continue;
            };
            if j + 1 == n || v.gap_before || list[j + 1].gap_before {
                out.push(v);
                continue;
            }
            let next = list[j + 1];
            let same = |a: &Vertex| match (a.state, v.state) {
                (State::Dead, State::Dead) => true,
                (State::Absorbed { fresh: false }, State::Absorbed { fresh: false }) => {
                    a.q.dist(&v.q) < 2.0 * ABSORB_TOL
                }
                _ => false,
            };
            if !v.live() {
                if !(same(&last) && same(&next)) {
                    out.push(v);
                }
                continue;
            }
            if !last.live() || !next.live() {
                out.push(v);
                continue;
            }
            let keep = last.q.dist(&v.q) >= self.p.min_step
                || last.q.dist(&next.q) > self.p.max_step
                || index::point_segment_distance(&v.q, &last.q, &next.q) > 0.1 * self.p.tube_tol;
            if keep {
                out.push(v);
            }
        }
        out
    }
}

fn saddle_data(saddle: SaddleId, kind: Kind) -> (&'static str, FloatPoint, [f64; 2], f64, u32) {
    let name = match saddle {
        SaddleId::Origin => "0",
        SaddleId::Cycle => "p",
    };
    let e = catalogue_entry(name);
    let (lu, ls) = e.eigenvalues;
    let period = e.period;
    let (dir, lambda, power) = match kind {
        Kind::Unstable if lu > 0.0 => (e.unstable_direction, lu, period),
        Kind::Unstable => (e.unstable_direction, lu * lu, 2 * period),
        Kind::Stable if ls > 0.0 => (e.stable_direction, 1.0 / ls, period),
        Kind::Stable => (e.stable_direction, 1.0 / (ls * ls), 2 * period),
    };
    (name, e.float_location(), dir.expect("saddle"), lambda, power)
}

/// Grows one branch of a stable or unstable manifold.
pub fn grow(saddle: SaddleId, kind: Kind, branch: Branch, params: &GrowParams) -> Result<Polyline> {
    params.validate()?;
    let (name, base, dir, lambda, power) = saddle_data(saddle, kind);
    let s = branch.sign();
    let g = Grower {
        base,
        dir: [s * dir[0], s * dir[1]],
        lambda,
        kind,
        power,
        p: *params,
    };
    let mut line = Polyline {
        at: name.to_string(),
        saddle,
        kind,
        branch,
        map_power: power,
        points: Vec::new(),
        domain: Vec::new(),
        breaks: Vec::new(),
        params: *params,
        termination: Termination::MaxDomains,
        gaps: 0,
        warnings: Vec::new(),
    };
    let list_cap = 8 * params.max_points;

    let mut list = vec![g.eval(0, 0.0), g.eval(0, 1.0)];
    // Whether the last stored vertex joins the next stored one.
    let mut joined = false;
    for k in 0..params.max_domains {
        if k > 0 {
            list = list.into_iter().map(|v| g.advance(v)).collect();
        }
        let mut gaps = 0;
        list = g.refine(k, list, &mut gaps);
        list = g.coarsen(list);
        line.gaps += gaps;

        for (j, v) in list.iter().enumerate() {
            let store = match v.state {
                State::Live => params.arena.contains(&v.q),
                State::Absorbed { fresh } => fresh && params.arena.contains(&v.q),
                State::Dead => false,
            };
            if !store {
                // Old absorbed vertices sit at the end of arcs already stored.
                joined = false;
                continue;
            }
            if let Some(&last) = line.points.last() {
                let linked = joined && !(j > 0 && v.gap_before);
                // Skip near-duplicates when the following vertex stays in reach.
                if linked && v.live() && last.dist(&v.q) < params.min_step {
                    let next_ok = list.get(j + 1).is_some_and(|n| {
                        n.live()
                            && !n.gap_before
                            && last.dist(&n.q) <= params.max_step
                            && index::point_segment_distance(&v.q, &last, &n.q) <= 0.1 * params.tube_tol
                    });
                    if next_ok {
                        continue;
                    }
                }
                if !linked {
                    line.breaks.push(line.points.len());
                }
            }
            line.points.push(v.q);
            line.domain.push(k);
            joined = true;
        }
        if !list.iter().any(Vertex::live) {
            line.termination = if list.iter().any(|v| matches!(v.state, State::Absorbed { .. })) {
                Termination::Converged
            } else {
                Termination::Escaped
            };
            break;
        }
        if line.points.len() >= params.max_points {
            line.points.truncate(params.max_points);
            line.domain.truncate(params.max_points);
            line.breaks.retain(|&b| b < params.max_points);
            line.termination = Termination::MaxPoints;
            line.warnings.push(format!("stopped at {} vertices", params.max_points));
            break;
        }
        if list.len() > list_cap {
            line.termination = Termination::MaxPoints;
            line.warnings.push(format!("parameter list exceeded {list_cap} entries"));
            break;
        }
    }
    if line.gaps > 0 {
        line.warnings.push(format!(
            "{} place(s) where the seed parameter ran out of precision; curve broken there",
            line.gaps
        ));
    }
    Ok(line)
}

pub fn grow_unstable(saddle: SaddleId, branch: Branch, params: &GrowParams) -> Result<Polyline> {
    grow(saddle, Kind::Unstable, branch, params)
}

pub fn grow_stable(saddle: SaddleId, branch: Branch, params: &GrowParams) -> Result<Polyline> {
    grow(saddle, Kind::Stable, branch, params)
}

/// Both branches of a manifold of a saddle orbit, including the σ-images for
/// the cycle.
pub fn grow_all(saddle: SaddleId, kind: Kind, params: &GrowParams) -> Result<Vec<Polyline>> {
    let plus = grow(saddle, kind, Branch::Plus, params)?;
    let minus = grow(saddle, kind, Branch::Minus, params)?;
    Ok(match saddle {
        SaddleId::Origin => vec![plus, minus],
        SaddleId::Cycle => {
            let (mp, mm) = (plus.mirrored(), minus.mirrored());
            vec![plus, minus, mp, mm]
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub curve: String,
    pub checked: usize,
    /// Vertices whose image lies outside the arena or past the last domain.
    pub skipped: usize,
    pub max_deviation: f64,
    pub worst_vertex: Option<usize>,
    pub tube_tol: f64,
    pub passed: bool,
}

/// Distance from each vertex's image under the growth map to the polyline.
/// Deviations below `tube_tol/1000` are reported as upper bounds.
pub fn manifold_invariance_check(c: &Polyline) -> InvarianceReport {
    let mut rep = InvarianceReport {
        curve: c.label(),
        checked: 0,
        skipped: 0,
        max_deviation: 0.0,
        worst_vertex: None,
        tube_tol: c.params.tube_tol,
        passed: true,
    };
    if c.points.is_empty() {
        return rep;
    }
    let last_domain = *c.domain.last().expect("parallel to points");
    let index = SegmentIndex::new(c, c.params.max_step);
    for (i, q) in c.points.iter().enumerate() {
        let img = c.growth_map(q);
        if c.domain[i] >= last_domain || !c.params.arena.contains(&img) {
            rep.skipped += 1;
            continue;
        }
        rep.checked += 1;
        let d = index.distance_above(&img, 1e-3 * c.params.tube_tol);
        if d > rep.max_deviation {
            rep.max_deviation = d;
            rep.worst_vertex = Some(i);
        }
    }
    rep.passed = rep.max_deviation <= c.params.tube_tol;
    rep
}

/// Symmetric Hausdorff distance between two vertex sets, measured from
/// vertices to the other curve's segments.
pub fn hausdorff(a: &Polyline, b: &Polyline) -> f64 {
    let ia = SegmentIndex::new(a, a.params.max_step);
    let ib = SegmentIndex::new(b, b.params.max_step);
    let one = |from: &Polyline, to: &SegmentIndex| {
        from.points.iter().map(|q| to.distance(q)).fold(0f64, f64::max)
    };
    one(a, &ib).max(one(b, &ia))
}

#[cfg(test)]
mod tests;
