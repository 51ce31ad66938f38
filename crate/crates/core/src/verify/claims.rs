//! The claim catalogue, fault-injection mutants and the compact boxes used
//! for interval certification.

use super::{Body, Claim, ExactBox, Expr, Form, IntervalJob, Sign, SignedForm};
use crate::exactnum::{q, q_sqrt5, FieldElement};
use crate::henon::{Coords, ExactPoint};
use crate::regions::{region, Constraint, Pseudonorm, Region, Shape};

fn r(name: &str) -> Region {
    region(name).expect("region table").clone()
}

fn union(names: &[&str]) -> Region {
    let parts: Vec<&Region> = names.iter().map(|n| region(n).expect("region table")).collect();
    Region::union(names.join(" ∪ "), &parts)
}

fn minus(a: &str, b: &str) -> Region {
    r(a).minus(format!("{a} \\ {b}"), region(b).expect("region table"))
}

/// `base ∩ {a·x + b·y + c > 0}`.
fn cut(base: &str, label: &str, a: FieldElement, b: FieldElement, c: FieldElement) -> Region {
    let base_shape = r(base).shape;
    let half = Shape::Convex(vec![Constraint::new(a, b, c, true)]);
    let inter = Shape::Difference(Box::new(base_shape), Box::new(Shape::Complement(Box::new(half))));
    Region::new(format!("{base} ∩ {{{label}}}"), inter)
}

fn pt(x: FieldElement, y: FieldElement) -> ExactPoint {
    Coords::new(x, y)
}

fn inclusion(id: &str, anchor: &str, source: Region, power: i32, target: Region) -> Claim {
    Claim {
        id: id.into(),
        anchor: anchor.into(),
        source,
        body: Body::Inclusion { power, target },
        witnesses: Vec::new(),
    }
}

fn sign(id: &str, anchor: &str, source: Region, expr: Expr, sign: Sign) -> Claim {
    Claim {
        id: id.into(),
        anchor: anchor.into(),
        source,
        body: Body::Sign { expr, sign },
        witnesses: Vec::new(),
    }
}

#[allow(clippy::too_many_arguments)]
fn identity(
    id: &str,
    anchor: &str,
    source: Region,
    power: i32,
    norm: Pseudonorm,
    before: SignedForm,
    after: SignedForm,
    guard: Option<Region>,
    expr: Expr,
) -> Claim {
    Claim {
        id: id.into(),
        anchor: anchor.into(),
        source,
        body: Body::Identity {
            power,
            norm,
            before,
            after,
            guard,
            expr,
        },
        witnesses: Vec::new(),
    }
}

fn pos(form: Form) -> SignedForm {
    SignedForm { form, negated: false }
}

fn neg(form: Form) -> SignedForm {
    SignedForm { form, negated: true }
}

const QUAD: &str = "quadrant mapping";
const SINV: &str = "forward invariance of S";
const DS: &str = "boundary of S after two steps";
const TMAP: &str = "images of T-pieces";
const SMAP: &str = "images and preimages of S-pieces";
const AXES: &str = "axes of S after at most two steps";
const GROWTH: &str = "pseudonorm difference";
const GBOUND: &str = "bound on g";

pub fn builtin() -> Vec<Claim> {
    let zero = || q(0, 1);
    let one = || q(1, 1);
    let y_above_r = cut("Q3", "y > √5/2", zero(), one(), q_sqrt5(-1, 2));
    let x_below_half = cut("Q1", "x < -1/2", q(-1, 1), zero(), q(-1, 2));
    let q4p_strict = {
        let base = minus("Q4'", "Q1");
        let half = Shape::Convex(vec![Constraint::new(zero(), q(-1, 1), q_sqrt5(-1, 2), true)]);
        let shape = Shape::Difference(Box::new(base.shape), Box::new(Shape::Complement(Box::new(half))));
        Region::new("Q4' \\ Q1 ∩ {y < -√5/2}", shape)
    };

    let mut out = vec![
        inclusion("q1_backward", QUAD, r("Q1"), -1, r("Q1")),
        inclusion("q2_backward", QUAD, r("Q2"), -1, r("Q4'")),
        inclusion("q3_forward", QUAD, r("Q3"), 1, r("Q3'")),
        inclusion("q4_backward", QUAD, r("Q4"), -1, r("Q2'")),
        inclusion("s_forward", SINV, r("S"), 1, r("S")),
        inclusion("sbar_forward", SINV, r("Sbar"), 1, r("Sbar")),
        inclusion("ds_two_steps", DS, r("dS"), 2, union(&["S", "Attractors"])),
        inclusion("l1_forward", DS, r("l1"), 1, r("l4_upper")),
        inclusion("t1_forward", TMAP, minus("T1", "Cycle"), 1, union(&["T2'", "T3'"])),
        inclusion("t2_forward", TMAP, r("T2"), 1, union(&["T2'", "T3'"])),
        inclusion("t3_forward", TMAP, r("T3"), 1, union(&["S", "T1'", "l4"])),
        inclusion("s1_forward", SMAP, r("S1"), 1, r("S1")),
        inclusion("s2_forward", SMAP, r("S2"), 1, union(&["S1'", "S2'", "xaxis_pos"])),
        inclusion("s1_backward", SMAP, r("S1"), -1, union(&["S1", "S2'", "T3", "yaxis_neg"])),
        inclusion("s2_backward", SMAP, r("S2"), -1, union(&["S2'", "T3'", "Ext"])),
        inclusion("yaxis_pos_forward", AXES, r("yaxis_pos"), 1, r("S1'")),
        inclusion("yaxis_neg_forward", AXES, r("yaxis_neg"), 1, r("S1")),
        inclusion("xaxis_pos_two_steps", AXES, r("xaxis_pos"), 2, r("S1'")),
        inclusion("xaxis_neg_two_steps", AXES, r("xaxis_neg"), 2, r("S1")),
        identity(
            "q3_norm_growth",
            GROWTH,
            r("Q3"),
            1,
            Pseudonorm::YMinusHalfX,
            pos(Form::YMinusHalfX),
            neg(Form::YMinusHalfX),
            Some(r("Q3'")),
            Expr::YCubeMinus54Y,
        ),
        sign("q3_growth_positive", GROWTH, y_above_r, Expr::YCubeMinus54Y, Sign::Positive),
        identity(
            "q1_backward_norm_growth",
            GROWTH,
            r("Q1"),
            -1,
            Pseudonorm::YPlusHalfX,
            neg(Form::YPlusHalfX),
            neg(Form::YPlusHalfX),
            Some(r("Q1")),
            Expr::QuarterXMinusXCube,
        ),
        sign("q1_growth_positive", GROWTH, x_below_half, Expr::QuarterXMinusXCube, Sign::Positive),
        identity(
            "q2_backward_norm_preserved",
            GROWTH,
            minus("Q2", "Q1"),
            -1,
            Pseudonorm::MaxNorm,
            neg(Form::X),
            neg(Form::Y),
            Some(minus("Q4'", "Q1")),
            Expr::Zero,
        ),
        identity(
            "q4p_backward_norm_growth",
            GROWTH,
            minus("Q4'", "Q1"),
            -1,
            Pseudonorm::MaxNorm,
            neg(Form::Y),
            neg(Form::X),
            Some(minus("Q2", "Q1")),
            Expr::MaxNormStep,
        ),
        sign("q4p_growth_positive", GROWTH, q4p_strict, Expr::MaxNormStep, Sign::Positive),
        identity(
            "s1p_norm_growth",
            GROWTH,
            r("S1'"),
            1,
            Pseudonorm::YPlusHalfX,
            pos(Form::YPlusHalfX),
            pos(Form::YPlusHalfX),
            Some(r("S1'")),
            Expr::QuarterYMinusYCube,
        ),
        sign("s1p_growth_positive", GROWTH, r("S1'"), Expr::QuarterYMinusYCube, Sign::Positive),
        identity(
            "s2_norm_shrink",
            GROWTH,
            r("S2"),
            1,
            Pseudonorm::YMinusHalfX,
            pos(Form::YMinusHalfX),
            neg(Form::YMinusHalfX),
            Some(r("S2'")),
            Expr::YCubeMinus54Y,
        ),
        sign("s2_shrink_negative", GROWTH, r("S2"), Expr::YCubeMinus54Y, Sign::Negative),
        identity(
            "s1_backward_norm_shrink",
            GROWTH,
            r("S1"),
            -1,
            Pseudonorm::YPlusHalfX,
            neg(Form::YPlusHalfX),
            neg(Form::YPlusHalfX),
            None,
            Expr::QuarterXMinusXCube,
        ),
        sign("s1_backward_negative", GROWTH, r("S1"), Expr::QuarterXMinusXCube, Sign::Negative),
        identity(
            "s2_backward_norm_growth",
            GROWTH,
            r("S2"),
            -1,
            Pseudonorm::YMinusHalfX,
            pos(Form::YMinusHalfX),
            neg(Form::YMinusHalfX),
            None,
            Expr::XCubeMinus54X,
        ),
        sign("s2_backward_positive", GROWTH, r("S2"), Expr::XCubeMinus54X, Sign::Positive),
        sign("g_upper_bound", GBOUND, r("Sbar"), Expr::QuarterMinusG, Sign::NonNegative),
        sign("g_lower_bound", GBOUND, r("Sbar"), Expr::GPlusQuarter, Sign::NonNegative),
    ];

    let witness = |out: &mut Vec<Claim>, id: &str, p: ExactPoint| {
        out.iter_mut().find(|c| c.id == id).expect("claim id").witnesses.push(p);
    };
    witness(&mut out, "q3_forward", pt(q(-2, 1), q(2, 1)));
    witness(&mut out, "s1_forward", pt(q(-1, 4), q(-1, 4)));
    witness(&mut out, "g_upper_bound", pt(q(0, 1), q(1, 2)));
    witness(&mut out, "g_lower_bound", pt(q(0, 1), q(-1, 2)));
    // Points where the image lands on an axis or on the edge x = 1/2.
    witness(&mut out, "s2_forward", pt(q(-59, 125), q(2, 5)));
    witness(&mut out, "s1_backward", pt(q(-2, 5), q(-59, 250)));
    witness(&mut out, "t3_forward", pt(q(-1, 1), q(1, 2)));
    out
}

/// Deliberately wrong claims; each must FAIL.
pub fn mutants() -> Vec<Claim> {
    let mut out = vec![
        inclusion("f_q3_subset_q3", QUAD, r("Q3"), 1, r("Q3")),
        inclusion("swapped_target_q2", QUAD, r("Q2"), -1, r("Q4")),
        sign(
            "flipped_sign_q3",
            GROWTH,
            cut("Q3", "y > √5/2", q(0, 1), q(1, 1), q_sqrt5(-1, 2)),
            Expr::YCubeMinus54Y,
            Sign::Negative,
        ),
        identity(
            "wrong_identity_q3",
            GROWTH,
            r("Q3"),
            1,
            Pseudonorm::YMinusHalfX,
            pos(Form::YMinusHalfX),
            neg(Form::YMinusHalfX),
            Some(r("Q3'")),
            Expr::QuarterYMinusYCube,
        ),
        // Literal statements that miss a null set of the image.
        inclusion("literal_s2_forward", SMAP, r("S2"), 1, union(&["S1'", "S2'"])),
        inclusion("literal_s1_backward", SMAP, r("S1"), -1, union(&["S1", "S2'", "T3"])),
        inclusion("literal_t3_forward", TMAP, r("T3"), 1, union(&["S", "T1'"])),
    ];
    let w = [
        ("literal_s2_forward", pt(q(-59, 125), q(2, 5))),
        ("literal_s1_backward", pt(q(-2, 5), q(-59, 250))),
        ("literal_t3_forward", pt(q(-1, 1), q(1, 2))),
    ];
    for (id, p) in w {
        out.iter_mut().find(|c| c.id == id).expect("mutant id").witnesses.push(p);
    }
    out
}

fn bx(x0: FieldElement, x1: FieldElement, y0: FieldElement, y1: FieldElement) -> ExactBox {
    ExactBox { x: (x0, x1), y: (y0, y1) }
}

fn job(claim: &str, b: ExactBox) -> IntervalJob {
    IntervalJob {
        claim: claim.into(),
        bx: b,
        margin: q(1, 100),
    }
}

/// Compact, margin-shrunk boxes certified by interval subdivision.
pub fn boxes() -> Vec<IntervalJob> {
    let c = |n: i64| q(n, 100);
    let r_in = || &q_sqrt5(1, 2) + &q(1, 100);
    let r_out = || &q_sqrt5(1, 2) - &q(1, 100);
    vec![
        job("q1_backward", bx(c(-300), c(-51), c(-300), c(-51))),
        job("q2_backward", bx(c(-300), -r_in(), c(-300), r_out())),
        job("q3_forward", bx(c(-300), -r_in(), r_in(), c(300))),
        job("q4_backward", bx(-r_out(), c(300), r_in(), c(300))),
        job("s_forward", bx(c(-49), c(49), c(-49), c(49))),
        job("sbar_forward", bx(c(-49), c(49), c(-49), c(49))),
        job("t2_forward", bx(-r_out(), c(-62), c(51), c(60))),
        job("t2_forward", bx(-r_out(), c(-100), c(51), c(98))),
        job("t3_forward", bx(-r_out(), c(-51), c(-49), c(49))),
        job("s1_forward", bx(c(-49), c(-1), c(-49), c(-1))),
        job("s2_forward", bx(c(-49), c(-1), c(1), c(49))),
        job("s1_backward", bx(c(-49), c(-1), c(-49), c(-1))),
        job("q3_growth_positive", bx(c(-300), -r_in(), r_in(), c(300))),
        job("q1_growth_positive", bx(c(-300), c(-51), c(-300), c(-51))),
        job("q4p_growth_positive", bx(c(-49), r_out(), c(-300), -r_in())),
        job("s1p_growth_positive", bx(c(1), c(49), c(1), c(49))),
        job("s2_shrink_negative", bx(c(-49), c(-1), c(1), c(49))),
        job("s1_backward_negative", bx(c(-49), c(-1), c(-49), c(-1))),
        job("s2_backward_positive", bx(c(-49), c(-1), c(1), c(49))),
        job("g_upper_bound", bx(c(-45), c(45), c(-45), c(45))),
        job("g_lower_bound", bx(c(-45), c(45), c(-45), c(45))),
    ]
}
