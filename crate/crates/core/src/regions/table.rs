use std::sync::OnceLock;

use serde_json::{json, Value};

use super::{fe_point, Constraint, Region, Shape};
use crate::error::{Error, Result};
use crate::exactnum::{q, q_sqrt5, FieldElement};

fn zero() -> FieldElement {
    q(0, 1)
}

fn one() -> FieldElement {
    q(1, 1)
}

fn neg_one() -> FieldElement {
    q(-1, 1)
}

fn x_ge(c: FieldElement) -> Constraint {
    Constraint::new(one(), zero(), -c, false)
}
fn x_gt(c: FieldElement) -> Constraint {
    Constraint::new(one(), zero(), -c, true)
}
fn x_le(c: FieldElement) -> Constraint {
    Constraint::new(neg_one(), zero(), c, false)
}
fn x_lt(c: FieldElement) -> Constraint {
    Constraint::new(neg_one(), zero(), c, true)
}
fn y_ge(c: FieldElement) -> Constraint {
    Constraint::new(zero(), one(), -c, false)
}
fn y_gt(c: FieldElement) -> Constraint {
    Constraint::new(zero(), one(), -c, true)
}
fn y_le(c: FieldElement) -> Constraint {
    Constraint::new(zero(), neg_one(), c, false)
}
fn y_lt(c: FieldElement) -> Constraint {
    Constraint::new(zero(), neg_one(), c, true)
}

fn convex(cs: Vec<Constraint>) -> Shape {
    Shape::Convex(cs)
}

fn build() -> Vec<Region> {
    let h = q(1, 2);
    let mh = q(-1, 2);
    let r = q_sqrt5(1, 2);
    let mr = q_sqrt5(-1, 2);
    let mut out: Vec<Region> = Vec::new();
    let push = |name: &str, shape: Shape, out: &mut Vec<Region>| out.push(Region::new(name, shape));

    // R is the union of two overlapping rectangles; it is not convex
    // (p₊ and p₋ are reflex corners).
    let rect_a = convex(vec![x_ge(mr.clone()), x_le(h.clone()), y_ge(mh.clone()), y_le(r.clone())]);
    let rect_b = convex(vec![x_ge(mh.clone()), x_le(r.clone()), y_ge(mr.clone()), y_le(h.clone())]);
    let open_a = convex(vec![x_gt(mr.clone()), x_lt(h.clone()), y_gt(mh.clone()), y_lt(r.clone())]);
    let open_b = convex(vec![x_gt(mh.clone()), x_lt(r.clone()), y_gt(mr.clone()), y_lt(h.clone())]);
    let r_shape = Shape::Union(vec![rect_a, rect_b]);
    let int_r = Shape::Union(vec![open_a, open_b]);
    push("R", r_shape.clone(), &mut out);
    push("intR", int_r.clone(), &mut out);
    push(
        "dR",
        Shape::Difference(Box::new(r_shape.clone()), Box::new(int_r.clone())),
        &mut out,
    );
    push("Ext", Shape::Complement(Box::new(r_shape.clone())), &mut out);

    let quads = [
        ("Q1", convex(vec![x_le(mh.clone()), y_le(mh.clone())])),
        ("Q2", convex(vec![x_le(mr.clone()), y_le(r.clone())])),
        ("Q3", convex(vec![x_le(mr.clone()), y_ge(r.clone())])),
        ("Q4", convex(vec![x_ge(mr.clone()), y_ge(r.clone())])),
    ];
    for (name, shape) in quads {
        let refl = shape.reflected();
        push(name, shape, &mut out);
        push(&format!("{name}'"), refl, &mut out);
    }

    let s = convex(vec![x_gt(mh.clone()), x_lt(h.clone()), y_gt(mh.clone()), y_lt(h.clone())]);
    let sbar = convex(vec![x_ge(mh.clone()), x_le(h.clone()), y_ge(mh.clone()), y_le(h.clone())]);
    push("S", s.clone(), &mut out);
    push("Sbar", sbar.clone(), &mut out);
    push(
        "dS",
        Shape::Difference(Box::new(sbar.clone()), Box::new(s.clone())),
        &mut out,
    );
    push(
        "T",
        Shape::Difference(Box::new(r_shape.clone()), Box::new(s.clone())),
        &mut out,
    );

    let s1 = convex(vec![x_gt(mh.clone()), x_lt(zero()), y_gt(mh.clone()), y_lt(zero())]);
    let s2 = convex(vec![x_gt(mh.clone()), x_lt(zero()), y_gt(zero()), y_lt(h.clone())]);
    for (name, shape) in [("S1", s1), ("S2", s2)] {
        let refl = shape.reflected();
        push(name, shape, &mut out);
        push(&format!("{name}'"), refl, &mut out);
    }

    // T₁ = {−y ≤ x ≤ ½, ½ ≤ y ≤ √5/2}
    let t1 = convex(vec![
        Constraint::new(one(), one(), zero(), false),
        x_le(h.clone()),
        y_ge(h.clone()),
        y_le(r.clone()),
    ]);
    // T₂ = {−√5/2 ≤ x ≤ −y, ½ ≤ y < −x}, strict edge kept as written.
    let t2 = convex(vec![
        x_ge(mr.clone()),
        Constraint::new(neg_one(), neg_one(), zero(), false),
        y_ge(h.clone()),
        Constraint::new(neg_one(), neg_one(), zero(), true),
    ]);
    let t3 = convex(vec![x_ge(mr.clone()), x_le(mh.clone()), y_ge(mh.clone()), y_le(h.clone())]);
    for (name, shape) in [("T1", t1), ("T2", t2), ("T3", t3)] {
        let refl = shape.reflected();
        push(name, shape, &mut out);
        push(&format!("{name}'"), refl, &mut out);
    }

    let eq_x = |c: FieldElement| vec![x_ge(c.clone()), x_le(c)];
    let eq_y = |c: FieldElement| vec![y_ge(c.clone()), y_le(c)];
    let mut l1 = eq_y(h.clone());
    l1.extend([x_ge(mh.clone()), x_le(h.clone())]);
    let mut l2 = eq_y(mh.clone());
    l2.extend([x_ge(mh.clone()), x_le(h.clone())]);
    let mut l3 = eq_x(mh.clone());
    l3.extend([y_ge(mh.clone()), y_le(h.clone())]);
    let mut l4 = eq_x(h.clone());
    l4.extend([y_ge(mh.clone()), y_le(h.clone())]);
    let mut l4u = eq_x(h.clone());
    l4u.extend([y_ge(zero()), y_le(h.clone())]);
    push("l1", convex(l1), &mut out);
    push("l2", convex(l2), &mut out);
    push("l3", convex(l3), &mut out);
    push("l4", convex(l4), &mut out);
    // {(½, y) : 0 ≤ y ≤ ½}; not the σ-image of ℓ₄.
    push("l4_upper", convex(l4u), &mut out);

    let mut ypos = eq_x(zero());
    ypos.extend([y_gt(zero()), y_lt(h.clone())]);
    let mut xpos = eq_y(zero());
    xpos.extend([x_gt(zero()), x_lt(h.clone())]);
    let ypos = convex(ypos);
    let xpos = convex(xpos);
    push("yaxis_pos", ypos.clone(), &mut out);
    push("yaxis_neg", ypos.reflected(), &mut out);
    push("xaxis_pos", xpos.clone(), &mut out);
    push("xaxis_neg", xpos.reflected(), &mut out);

    let p = fe_point(mr.clone(), r.clone());
    let pp = fe_point(r.clone(), mr.clone());
    let pplus = fe_point(h.clone(), h.clone());
    let pminus = fe_point(mh.clone(), mh.clone());
    push("Cycle", Shape::Points(vec![p, pp]), &mut out);
    push("Attractors", Shape::Points(vec![pplus, pminus]), &mut out);

    let find = |out: &Vec<Region>, n: &str| out.iter().find(|r| r.name == n).unwrap().shape.clone();
    let n_set = Shape::Union(vec![find(&out, "Q1"), find(&out, "Q2"), find(&out, "Q4'")]);
    let p_set = n_set.reflected();
    push("N", n_set, &mut out);
    push("P", p_set, &mut out);
    out
}

static TABLE: OnceLock<Vec<Region>> = OnceLock::new();

pub fn region_table() -> &'static [Region] {
    TABLE.get_or_init(build)
}

pub fn region_names() -> Vec<&'static str> {
    region_table().iter().map(|r| r.name.as_str()).collect()
}

pub fn region(name: &str) -> Result<&'static Region> {
    region_table()
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::UnknownRegion(name.to_string()))
}

fn shape_json(s: &Shape) -> Value {
    match s {
        Shape::Convex(cs) => json!({
            "convex": cs.iter().map(|c| json!({
                "a": c.a.to_string(),
                "b": c.b.to_string(),
                "c": c.c.to_string(),
                "op": if c.strict { ">" } else { ">=" },
            })).collect::<Vec<_>>()
        }),
        Shape::Union(parts) => json!({ "union": parts.iter().map(shape_json).collect::<Vec<_>>() }),
        Shape::Difference(a, b) => json!({ "difference": [shape_json(a), shape_json(b)] }),
        Shape::Complement(a) => json!({ "complement": shape_json(a) }),
        Shape::Points(ps) => json!({
            "points": ps.iter().map(|p| [p.x.to_string(), p.y.to_string()]).collect::<Vec<_>>()
        }),
    }
}

/// The region table with each inequality written as `a·x + b·y + c op 0`.
pub fn regions_json() -> Value {
    Value::Array(
        region_table()
            .iter()
            .map(|r| json!({ "name": r.name, "shape": shape_json(&r.shape) }))
            .collect(),
    )
}
