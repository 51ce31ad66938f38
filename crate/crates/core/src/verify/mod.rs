//! Machine checks of the region inclusions, pseudonorm identities and sign
//! conditions behind the escape and basin arguments.
//!
//! Every claim is checked by exact sampling over its source region (cut to
//! `[−8, 8]²` when unbounded). Identities are also checked exactly on a
//! product grid, which proves them as polynomial identities. Listed compact
//! boxes are certified by interval subdivision; an inclusion certified this
//! way lands in the closure of the target, so boundary strictness is left to
//! the exact tier.

mod claims;

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{q, FieldElement, Interval, Scalar};
use crate::henon::{g, iterate, Coords, ExactPoint, IntervalBox};
use crate::regions::{pseudonorm_value, Constraint, Pseudonorm, Region, Sampler, Shape, Tri};

pub use claims::boxes as builtin_boxes;
pub use claims::builtin as builtin_claims;

/// Unbounded source regions are sampled inside `[−R, R]²`.
pub const TRUNCATION_RADIUS: f64 = 8.0;

pub const IDENTITY_ARGUMENT: &str = "Both sides are polynomials of degree at most 3 in each variable. \
A polynomial of degree at most 9 in each variable that vanishes on a 10x10 product grid of distinct \
rationals is zero, so exact agreement on the grid proves the identity of the signed forms.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Inclusion,
    Identity,
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    NonNegative,
    NonPositive,
}

impl Sign {
    fn holds(self, s: i32) -> bool {
        match self {
            Sign::Positive => s > 0,
            Sign::Negative => s < 0,
            Sign::NonNegative => s >= 0,
            Sign::NonPositive => s <= 0,
        }
    }

    fn holds_on(self, v: Interval) -> bool {
        match self {
            Sign::Positive => v.lo > 0.0,
            Sign::Negative => v.hi < 0.0,
            Sign::NonNegative => v.lo >= 0.0,
            Sign::NonPositive => v.hi <= 0.0,
        }
    }

    /// Distance from the wrong side, positive when the sign holds.
    fn slack(self, v: f64) -> f64 {
        match self {
            Sign::Positive | Sign::NonNegative => v,
            Sign::Negative | Sign::NonPositive => -v,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "> 0",
            Sign::Negative => "< 0",
            Sign::NonNegative => ">= 0",
            Sign::NonPositive => "<= 0",
        }
    }
}

/// Polynomials in `(x, y)` used by sign and identity claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expr {
    Zero,
    /// `y(y² − 5/4)`
    YCubeMinus54Y,
    /// `x/4 − x³ = −x(x² − 1/4)`
    QuarterXMinusXCube,
    /// `−2x³ + 3x/2 − y`
    MaxNormStep,
    /// `y/4 − y³ = −y(y² − 1/4)`
    QuarterYMinusYCube,
    /// `x³ − 5x/4`
    XCubeMinus54X,
    /// `1/4 − g(y)`
    QuarterMinusG,
    /// `g(y) + 1/4`
    GPlusQuarter,
}

impl Expr {
    pub fn eval<T: Scalar>(self, p: &Coords<T>) -> T {
        let (x, y) = (p.x.clone(), p.y.clone());
        match self {
            Expr::Zero => T::ratio(0, 1),
            Expr::YCubeMinus54Y => y.cube() - T::ratio(5, 4) * y,
            Expr::QuarterXMinusXCube => T::ratio(1, 4) * x.clone() - x.cube(),
            Expr::MaxNormStep => T::ratio(3, 2) * x.clone() - T::ratio(2, 1) * x.cube() - y,
            Expr::QuarterYMinusYCube => T::ratio(1, 4) * y.clone() - y.cube(),
            Expr::XCubeMinus54X => x.cube() - T::ratio(5, 4) * x,
            Expr::QuarterMinusG => T::ratio(1, 4) - g(&y),
            Expr::GPlusQuarter => g(&y) + T::ratio(1, 4),
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            Expr::Zero => "0",
            Expr::YCubeMinus54Y => "y(y^2 - 5/4)",
            Expr::QuarterXMinusXCube => "-x(x^2 - 1/4)",
            Expr::MaxNormStep => "-2x^3 + 3x/2 - y",
            Expr::QuarterYMinusYCube => "-y(y^2 - 1/4)",
            Expr::XCubeMinus54X => "x^3 - 5x/4",
            Expr::QuarterMinusG => "1/4 - g(y)",
            Expr::GPlusQuarter => "g(y) + 1/4",
        }
    }
}

/// A linear form whose absolute value is the pseudonorm on some region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    YMinusHalfX,
    YPlusHalfX,
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedForm {
    pub form: Form,
    pub negated: bool,
}

impl SignedForm {
    pub fn eval<T: Scalar>(self, p: &Coords<T>) -> T {
        let v = match self.form {
            Form::YMinusHalfX => p.y.clone() - T::ratio(1, 2) * p.x.clone(),
            Form::YPlusHalfX => p.y.clone() + T::ratio(1, 2) * p.x.clone(),
            Form::X => p.x.clone(),
            Form::Y => p.y.clone(),
        };
        if self.negated {
            -v
        } else {
            v
        }
    }
}

#[derive(Clone, Debug)]
pub enum Body {
    /// `f^power(source) ⊂ target`.
    Inclusion { power: i32, target: Region },
    /// `expr` has the given sign on the source.
    Sign { expr: Expr, sign: Sign },
    /// `|f^power(q)| − |q| = expr(q)` for `q` in the source with
    /// `f^power(q)` in `guard`. On that set `|q| = before(q)` and
    /// `|f^power(q)| = after(f^power(q))`.
    Identity {
        power: i32,
        norm: Pseudonorm,
        before: SignedForm,
        after: SignedForm,
        guard: Option<Region>,
        expr: Expr,
    },
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub id: String,
    /// Short topic label used in the traceability table.
    pub anchor: String,
    pub source: Region,
    pub body: Body,
    /// Exact points checked before random samples.
    pub witnesses: Vec<ExactPoint>,
}

fn map_name(power: i32) -> String {
    match power {
        1 => "f".into(),
        -1 => "f^-1".into(),
        n => format!("f^{n}"),
    }
}

impl Claim {
    pub fn kind(&self) -> ClaimKind {
        match self.body {
            Body::Inclusion { .. } => ClaimKind::Inclusion,
            Body::Sign { .. } => ClaimKind::Sign,
            Body::Identity { .. } => ClaimKind::Identity,
        }
    }

    pub fn statement(&self) -> String {
        let src = &self.source.name;
        match &self.body {
            Body::Inclusion { power, target } => format!("{}({src}) ⊂ {}", map_name(*power), target.name),
            Body::Sign { expr, sign } => format!("{} {} on {src}", expr.text(), sign.symbol()),
            Body::Identity {
                power, norm, guard, expr, ..
            } => {
                let n = match norm {
                    Pseudonorm::YMinusHalfX => "|y - x/2|",
                    Pseudonorm::YPlusHalfX => "|y + x/2|",
                    Pseudonorm::MaxNorm => "max(|x|, |y|)",
                };
                let m = map_name(*power);
                let when = guard.as_ref().map(|g| format!(" with {m}(q) in {}", g.name)).unwrap_or_default();
                format!("|{m}(q)| - |q| = {} on {src}{when}, |.| = {n}", expr.text())
            }
        }
    }
}

/// A rectangle with exact corners.
#[derive(Clone, Debug)]
pub struct ExactBox {
    pub x: (FieldElement, FieldElement),
    pub y: (FieldElement, FieldElement),
}

impl ExactBox {
    fn inflate(&self, m: &FieldElement) -> ExactBox {
        ExactBox {
            x: (&self.x.0 - m, &self.x.1 + m),
            y: (&self.y.0 - m, &self.y.1 + m),
        }
    }

    fn corners(&self) -> Vec<ExactPoint> {
        let (x, y) = (&self.x, &self.y);
        let cx = (&x.0 + &x.1).scale(&crate::exactnum::Rational::new(1, 2));
        let cy = (&y.0 + &y.1).scale(&crate::exactnum::Rational::new(1, 2));
        vec![
            Coords::new(x.0.clone(), y.0.clone()),
            Coords::new(x.0.clone(), y.1.clone()),
            Coords::new(x.1.clone(), y.0.clone()),
            Coords::new(x.1.clone(), y.1.clone()),
            Coords::new(cx, cy),
        ]
    }

    /// Outward float enclosure.
    fn enclosure(&self) -> IntervalBox {
        let hull = |a: &FieldElement, b: &FieldElement| a.to_interval().hull(&b.to_interval());
        Coords::new(hull(&self.x.0, &self.x.1), hull(&self.y.0, &self.y.1))
    }
}

impl std::fmt::Display for ExactBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let b = self.enclosure();
        write!(f, "[{:.4}, {:.4}] x [{:.4}, {:.4}]", b.x.lo, b.x.hi, b.y.lo, b.y.hi)
    }
}

#[derive(Clone, Debug)]
pub struct IntervalJob {
    pub claim: String,
    pub bx: ExactBox,
    pub margin: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactSample,
    ExactGrid,
    IntervalSubdivision,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ExactSample => "exact-sample",
            Method::ExactGrid => "exact-grid",
            Method::IntervalSubdivision => "interval-subdivision",
        }
    }
}

/// One check of one claim.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub claim: String,
    pub kind: ClaimKind,
    pub statement: String,
    pub anchor: String,
    pub mutant: bool,
    pub method: Method,
    pub status: Status,
    /// Exact points checked (samples, witnesses or grid points).
    pub samples: usize,
    /// Sub-boxes certified.
    pub boxes: usize,
    /// Samples outside an identity's guard.
    pub skipped: usize,
    pub worst_margin: Option<f64>,
    pub counterexample: Option<String>,
    pub note: Option<String>,
}

impl Entry {
    fn new(c: &Claim, method: Method) -> Self {
        Entry {
            claim: c.id.clone(),
            kind: c.kind(),
            statement: c.statement(),
            anchor: c.anchor.clone(),
            mutant: false,
            method,
            status: Status::Pass,
            samples: 0,
            boxes: 0,
            skipped: 0,
            worst_margin: None,
            counterexample: None,
            note: None,
        }
    }

    fn fail(&mut self, p: &ExactPoint) {
        self.status = Status::Fail;
        self.counterexample = Some(p.to_string());
    }
}

/// FNV-1a of the claim id, mixed with the suite seed.
fn claim_seed(seed: u64, id: &str) -> u64 {
    let h = id
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn approx(v: &FieldElement) -> f64 {
    v.enclose_fast().mid()
}

/// How far inside `shape` the point is; negative outside. Float and rough.
fn slack(shape: &Shape, p: &ExactPoint) -> f64 {
    match shape {
        Shape::Convex(cs) => cs.iter().map(|c| approx(&c.value(p))).fold(f64::INFINITY, f64::min),
        Shape::Union(parts) => parts.iter().map(|s| slack(s, p)).fold(f64::NEG_INFINITY, f64::max),
        Shape::Difference(a, b) => slack(a, p).min(-slack(b, p)),
        Shape::Complement(a) => -slack(a, p),
        Shape::Points(ps) => {
            if ps.contains(p) {
                0.0
            } else {
                -1.0
            }
        }
    }
}

enum Outcome {
    Holds(Option<f64>),
    Skipped,
    Fails,
}

fn check_point(c: &Claim, p: &ExactPoint) -> Outcome {
    match &c.body {
        Body::Inclusion { power, target } => {
            let img = iterate(p, *power);
            if target.contains(&img) {
                Outcome::Holds(Some(slack(&target.shape, &img)))
            } else {
                Outcome::Fails
            }
        }
        Body::Sign { expr, sign } => {
            let v = expr.eval(p);
            if sign.holds(v.signum()) {
                Outcome::Holds(Some(sign.slack(approx(&v))))
            } else {
                Outcome::Fails
            }
        }
        Body::Identity {
            power,
            norm,
            guard,
            expr,
            ..
        } => {
            let img = iterate(p, *power);
            if guard.as_ref().is_some_and(|g| !g.contains(&img)) {
                return Outcome::Skipped;
            }
            let lhs = &pseudonorm_value(&img, *norm) - &pseudonorm_value(p, *norm);
            if lhs == expr.eval(p) {
                Outcome::Holds(None)
            } else {
                Outcome::Fails
            }
        }
    }
}

/// Checks `c` at `n` exact points drawn from its source region, after its
/// witness points. Stops at the first counterexample.
pub fn check_claim_sampled(c: &Claim, n: usize, seed: u64) -> Result<Entry> {
    if n == 0 {
        return Err(Error::InvalidParam("sample count must be at least 1".into()));
    }
    let mut e = Entry::new(c, Method::ExactSample);
    let t = TRUNCATION_RADIUS;
    let sampler = Sampler::new(&c.source.shape, [-t, t, -t, t]);
    let mut rng = ChaCha8Rng::seed_from_u64(claim_seed(seed, &c.id));
    let mut worst: Option<f64> = None;
    let witnesses = c.witnesses.iter().filter(|w| c.source.contains(w)).cloned();
    let draws = (0..n).map_while(|_| sampler.sample(&mut rng));
    for p in witnesses.chain(draws) {
        e.samples += 1;
        match check_point(c, &p) {
            Outcome::Holds(m) => {
                if let Some(m) = m {
                    worst = Some(worst.map_or(m, |w| w.min(m)));
                }
            }
            Outcome::Skipped => e.skipped += 1,
            Outcome::Fails => {
                e.fail(&p);
                return Ok(e);
            }
        }
    }
    e.worst_margin = worst;
    let witnessed = c.witnesses.iter().filter(|w| c.source.contains(w)).count();
    if e.samples < n + witnessed {
        e.status = Status::Inconclusive;
        e.note = Some(format!("sampler starved after {} points", e.samples));
    } else if e.skipped == e.samples {
        e.status = Status::Inconclusive;
        e.note = Some("no sample met the guard".into());
    }
    Ok(e)
}

/// The 10×10 grid of points `(i/3 − 3/2, j/3 − 3/2)`.
fn identity_grid() -> Vec<ExactPoint> {
    let v: Vec<FieldElement> = (0..10).map(|i| q(2 * i - 9, 6)).collect();
    v.iter()
        .flat_map(|x| v.iter().map(move |y| Coords::new(x.clone(), y.clone())))
        .collect()
}

/// Proves the signed-form version of an identity claim by exact agreement
/// on a product grid.
pub fn check_identity_grid(c: &Claim) -> Result<Entry> {
    let Body::Identity {
        power,
        before,
        after,
        expr,
        ..
    } = &c.body
    else {
        return Err(Error::InvalidParam(format!("{} is not an identity claim", c.id)));
    };
    let mut e = Entry::new(c, Method::ExactGrid);
    e.note = Some(IDENTITY_ARGUMENT.into());
    for p in identity_grid() {
        e.samples += 1;
        let lhs = &after.eval(&iterate(&p, *power)) - &before.eval(&p);
        if lhs != expr.eval(&p) {
            e.fail(&p);
            break;
        }
    }
    Ok(e)
}

/// A shape inside the closure of `s`: strict inequalities of convex pieces
/// are relaxed, other pieces kept as they are.
fn closed_part(s: &Shape) -> Shape {
    match s {
        Shape::Convex(cs) => Shape::Convex(cs.iter().map(|c| with_strict(c, false)).collect()),
        Shape::Union(parts) => Shape::Union(parts.iter().map(closed_part).collect()),
        other => other.clone(),
    }
}

fn with_strict(c: &Constraint, strict: bool) -> Constraint {
    Constraint::new(c.a.clone(), c.b.clone(), c.c.clone(), strict)
}

/// A shape containing the closure of `s`, for the box precondition.
fn relax(s: &Shape) -> Shape {
    match s {
        Shape::Convex(cs) => Shape::Convex(cs.iter().map(|c| with_strict(c, false)).collect()),
        Shape::Union(parts) => Shape::Union(parts.iter().map(relax).collect()),
        Shape::Difference(a, b) => Shape::Difference(Box::new(relax(a)), Box::new(tighten(b))),
        Shape::Complement(a) => Shape::Complement(Box::new(tighten(a))),
        Shape::Points(ps) => Shape::Points(ps.clone()),
    }
}

/// A shape inside the interior of `s`.
fn tighten(s: &Shape) -> Shape {
    match s {
        Shape::Convex(cs) => Shape::Convex(cs.iter().map(|c| with_strict(c, true)).collect()),
        Shape::Union(parts) => Shape::Union(parts.iter().map(tighten).collect()),
        Shape::Difference(a, b) => Shape::Difference(Box::new(tighten(a)), Box::new(relax(b))),
        Shape::Complement(a) => Shape::Complement(Box::new(relax(a))),
        Shape::Points(_) => Shape::Union(Vec::new()),
    }
}

/// Axis-parallel boundary lines of convex pieces at float-exact positions.
fn axis_cuts(s: &Shape, xs: &mut Vec<f64>, ys: &mut Vec<f64>) {
    match s {
        Shape::Convex(cs) => {
            for c in cs {
                let at = |coef: &FieldElement| {
                    let v = (-&c.c).try_div(coef).ok()?;
                    let f = v.to_f64();
                    (FieldElement::from_f64_exact(f).as_ref() == Some(&v)).then_some(f)
                };
                if c.b.is_zero() && !c.a.is_zero() {
                    xs.extend(at(&c.a));
                } else if c.a.is_zero() && !c.b.is_zero() {
                    ys.extend(at(&c.b));
                }
            }
        }
        Shape::Union(parts) => parts.iter().for_each(|p| axis_cuts(p, xs, ys)),
        Shape::Difference(a, b) => {
            axis_cuts(a, xs, ys);
            axis_cuts(b, xs, ys);
        }
        Shape::Complement(a) => axis_cuts(a, xs, ys),
        Shape::Points(_) => {}
    }
}

fn split_at(iv: Interval, v: f64) -> (Interval, Interval) {
    (Interval::new(iv.lo, v), Interval::new(v, iv.hi))
}

/// Whether the box is covered by `shape`, splitting the box along the
/// shape's own axis-parallel edges first.
fn covers(shape: &Shape, cuts: &(Vec<f64>, Vec<f64>), b: &IntervalBox, depth: u32) -> bool {
    match shape.contains_box(b) {
        Tri::Yes => return true,
        Tri::No => return false,
        Tri::Unknown if depth == 0 => return false,
        Tri::Unknown => {}
    }
    let inside = |iv: Interval, v: f64| iv.lo < v && v < iv.hi;
    let mid = |iv: Interval| iv.mid();
    let pick = |vs: &[f64], iv: Interval| {
        vs.iter()
            .copied()
            .filter(|&v| inside(iv, v))
            .min_by(|a, b| (a - mid(iv)).abs().total_cmp(&(b - mid(iv)).abs()))
    };
    let (lo, hi) = if let Some(v) = pick(&cuts.0, b.x) {
        let (l, h) = split_at(b.x, v);
        (Coords::new(l, b.y), Coords::new(h, b.y))
    } else if let Some(v) = pick(&cuts.1, b.y) {
        let (l, h) = split_at(b.y, v);
        (Coords::new(b.x, l), Coords::new(b.x, h))
    } else {
        halves(b)
    };
    covers(shape, cuts, &lo, depth - 1) && covers(shape, cuts, &hi, depth - 1)
}

fn halves(b: &IntervalBox) -> (IntervalBox, IntervalBox) {
    if b.x.width() >= b.y.width() {
        let (l, h) = b.x.split();
        (Coords::new(l, b.y), Coords::new(h, b.y))
    } else {
        let (l, h) = b.y.split();
        (Coords::new(b.x, l), Coords::new(b.x, h))
    }
}

const COVER_DEPTH: u32 = 12;

/// Certifies `c` on `bx` by adaptive bisection with interval arithmetic.
/// `bx` grown by `margin` must lie in the closure of the source region.
/// A sub-box left uncertified at `max_depth` makes the result INCONCLUSIVE.
pub fn check_claim_interval(c: &Claim, bx: &ExactBox, margin: &FieldElement, max_depth: u32) -> Result<Entry> {
    if margin.signum() < 0 {
        return Err(Error::InvalidParam("negative margin".into()));
    }
    if matches!(c.body, Body::Identity { .. }) {
        return Err(Error::InvalidParam(format!("{}: identities are proved on the grid", c.id)));
    }
    if (&bx.x.0 - &bx.x.1).signum() > 0 || (&bx.y.0 - &bx.y.1).signum() > 0 {
        return Err(Error::InvalidParam(format!("empty box {bx}")));
    }
    let outer = relax(&c.source.shape);
    if let Some(p) = bx.inflate(margin).corners().iter().find(|p| !outer.contains(p)) {
        return Err(Error::InvalidParam(format!(
            "box {bx} grown by the margin leaves {}: {p}",
            c.source.name
        )));
    }
    let mut e = Entry::new(c, Method::IntervalSubdivision);
    e.note = Some(format!("box {bx}, margin {:.4}", approx(margin)));
    let target = match &c.body {
        Body::Inclusion { target, .. } => {
            let shape = closed_part(&target.shape);
            let mut cuts = (Vec::new(), Vec::new());
            axis_cuts(&shape, &mut cuts.0, &mut cuts.1);
            Some((shape, cuts))
        }
        _ => None,
    };
    let mut worst = f64::INFINITY;
    let mut stack = vec![(bx.enclosure(), 0u32)];
    while let Some((b, depth)) = stack.pop() {
        let ok = match (&c.body, &target) {
            (Body::Inclusion { power, .. }, Some((shape, cuts))) => covers(shape, cuts, &iterate(&b, *power), COVER_DEPTH),
            (Body::Sign { expr, sign }, _) => {
                let v = expr.eval(&b);
                let ok = sign.holds_on(v);
                if ok {
                    worst = worst.min(sign.slack(if matches!(sign, Sign::Positive | Sign::NonNegative) {
                        v.lo
                    } else {
                        v.hi
                    }));
                }
                ok
            }
            _ => unreachable!("identities rejected above"),
        };
        if ok {
            e.boxes += 1;
            continue;
        }
        if depth >= max_depth {
            e.status = Status::Inconclusive;
            e.note = Some(format!(
                "box {bx}: sub-box [{}, {}] x [{}, {}] not certified at depth {max_depth}",
                b.x.lo, b.x.hi, b.y.lo, b.y.hi
            ));
            return Ok(e);
        }
        let (l, h) = halves(&b);
        stack.push((h, depth + 1));
        stack.push((l, depth + 1));
    }
    if worst.is_finite() {
        e.worst_margin = Some(worst);
    }
    Ok(e)
}

/// Wrong claims used as fault injection; each must FAIL.
pub fn mutant_ids() -> Vec<String> {
    claims::mutants().into_iter().map(|c| c.id).collect()
}

pub fn mutant(id: &str) -> Result<Claim> {
    claims::mutants()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

pub fn claim(id: &str) -> Result<Claim> {
    builtin_claims()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_depth: u32,
    /// Mutant ids appended to the suite.
    pub mutants: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            samples: 100_000,
            max_depth: 24,
            mutants: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples_per_claim: usize,
    pub max_depth: u32,
    pub truncation_radius: f64,
    pub completeness_gap: String,
    pub identity_argument: String,
    pub claims: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub entries: Vec<Entry>,
}

fn claim_entries(c: &Claim, mutant: bool, jobs: &[IntervalJob], cfg: &SuiteConfig) -> Result<Vec<Entry>> {
    let mut out = vec![check_claim_sampled(c, cfg.samples, cfg.seed)?];
    if c.kind() == ClaimKind::Identity {
        out.push(check_identity_grid(c)?);
    }
    for j in jobs.iter().filter(|j| j.claim == c.id) {
        out.push(check_claim_interval(c, &j.bx, &j.margin, cfg.max_depth)?);
    }
    for e in &mut out {
        e.mutant = mutant;
    }
    Ok(out)
}

/// Runs every builtin claim, plus the requested mutants, through all tiers.
/// Claims run in parallel; the report does not depend on the worker count.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerifyReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParam("sample count must be at least 1".into()));
    }
    let mut all: Vec<(Claim, bool)> = builtin_claims().into_iter().map(|c| (c, false)).collect();
    for id in &cfg.mutants {
        all.push((mutant(id)?, true));
    }
    let jobs = builtin_boxes();
    let per_claim: Vec<Vec<Entry>> = all
        .par_iter()
        .map(|(c, m)| claim_entries(c, *m, &jobs, cfg))
        .collect::<Result<_>>()?;
    let claims = per_claim.len();
    let (mut passed, mut failed, mut inconclusive) = (0, 0, 0);
    for es in &per_claim {
        if es.iter().any(|e| e.status == Status::Fail) {
            failed += 1;
        } else if es.iter().any(|e| e.status == Status::Inconclusive) {
            inconclusive += 1;
        } else {
            passed += 1;
        }
    }
    Ok(VerifyReport {
        seed: cfg.seed,
        samples_per_claim: cfg.samples,
        max_depth: cfg.max_depth,
        truncation_radius: TRUNCATION_RADIUS,
        completeness_gap: format!(
            "unbounded source regions are sampled only inside [-{t}, {t}]^2; interval boxes cover compact margin-shrunk pieces and certify inclusion in the closure of the target",
            t = TRUNCATION_RADIUS
        ),
        identity_argument: IDENTITY_ARGUMENT.into(),
        claims,
        passed,
        failed,
        inconclusive,
        entries: per_claim.into_iter().flatten().collect(),
    })
}

impl VerifyReport {
    pub fn has_failure(&self) -> bool {
        self.failed > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "seed {}  samples/claim {}  claims {}  pass {}  fail {}  inconclusive {}",
            self.seed, self.samples_per_claim, self.claims, self.passed, self.failed, self.inconclusive
        );
        let _ = writeln!(s, "{:<28} {:<21} {:<12} {:>7} {:>7} {:>12}  statement", "claim", "method", "status", "points", "boxes", "margin");
        for e in &self.entries {
            let margin = e.worst_margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "-".into());
            let id = if e.mutant { format!("{} (mutant)", e.claim) } else { e.claim.clone() };
            let _ = writeln!(
                s,
                "{:<28} {:<21} {:<12} {:>7} {:>7} {:>12}  {}",
                id,
                e.method.label(),
                e.status.label(),
                e.samples,
                e.boxes,
                margin,
                e.statement
            );
            if let Some(c) = &e.counterexample {
                let _ = writeln!(s, "    counterexample {c}");
            }
            if e.status == Status::Inconclusive {
                if let Some(n) = &e.note {
                    let _ = writeln!(s, "    {n}");
                }
            }
        }
        let _ = writeln!(s, "\ntraceability");
        let mut seen: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !seen.contains(&e.claim.as_str()) {
                seen.push(&e.claim);
                let _ = writeln!(s, "  {:<28} {:<36} {}", e.claim, e.anchor, e.statement);
            }
        }
        let _ = writeln!(s, "\nnotes\n  {}\n  {}", self.completeness_gap, self.identity_argument);
        s
    }
}

#[cfg(test)]
mod tests;
