use super::*;
use crate::henon::SaddleId::{Cycle, Origin};
use crate::henon::Point;
use crate::regions::region;

fn params() -> GrowParams {
    GrowParams::default()
}

#[test]
fn origin_unstable_plus_stays_in_s1_prime_and_reaches_p_plus() {
    let c = grow_unstable(Origin, Branch::Plus, &params()).unwrap();
    let s1p = region("S1'").unwrap();
    for q in &c.points {
        assert!(q.norm() <= 1e-5 || s1p.contains_f64(q), "{q:?}");
    }
    assert_eq!(c.termination, Termination::Converged);
    let end = c.points.last().unwrap();
    assert!(end.dist(&Coords::new(0.5, 0.5)) < 1e-6, "{end:?}");
    assert!(c.points[0].norm() <= c.params.seed_offset * (1.0 + 1e-12));
    let rep = manifold_invariance_check(&c);
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn origin_branches_are_sigma_images() {
    let p = grow_unstable(Origin, Branch::Plus, &params()).unwrap();
    let m = grow_unstable(Origin, Branch::Minus, &params()).unwrap();
    assert!(hausdorff(&p.mirrored(), &m) <= 2.0 * p.params.max_step);
}

#[test]
fn cycle_unstable_plus_stays_in_q3_with_growing_pseudonorm() {
    let c = grow_unstable(Cycle, Branch::Plus, &params()).unwrap();
    let q3 = region("Q3").unwrap();
    let p = catalogue_entry("p").float_location();
    for q in &c.points {
        assert!(q.dist(&p) <= 1e-5 || q3.contains_f64(q), "{q:?}");
    }
    // |y − x/2| increases along the branch once it leaves the seed ball.
    let pn: Vec<f64> = c.points.iter().map(|q| (q.y - q.x / 2.0).abs()).collect();
    assert!(pn.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(!q3.contains_f64(&Coords::new(0.0, 0.0)));
}

#[test]
fn cycle_stable_avoids_int_r() {
    let int_r = region("intR").unwrap();
    let p = catalogue_entry("p").float_location();
    for b in [Branch::Plus, Branch::Minus] {
        let c = grow_stable(Cycle, b, &params()).unwrap();
        for q in &c.points {
            assert!(q.dist(&p) <= 1e-5 || !int_r.contains_f64(q), "{b:?} {q:?}");
        }
        assert!(manifold_invariance_check(&c).passed);
    }
}

#[test]
fn origin_stable_meets_s_only_in_s2() {
    let s = region("S").unwrap();
    let s2 = region("S2").unwrap();
    let s2p = region("S2'").unwrap();
    let c = grow_stable(Origin, Branch::Plus, &params()).unwrap();
    for q in c.points.iter().filter(|q| s.contains_f64(q)) {
        assert!(s2.contains_f64(q) || s2p.contains_f64(q), "{q:?}");
    }
}

#[test]
fn perturbed_vertex_fails_invariance() {
    let mut c = grow_unstable(Origin, Branch::Plus, &params()).unwrap();
    assert!(manifold_invariance_check(&c).passed);
    let k = c.points.len() / 2;
    c.points[k].x += 1e-3;
    let rep = manifold_invariance_check(&c);
    assert!(!rep.passed);
}

#[test]
fn empty_polyline_passes() {
    let mut c = grow_unstable(Origin, Branch::Plus, &params()).unwrap();
    c.points.clear();
    c.domain.clear();
    c.breaks.clear();
    assert!(manifold_invariance_check(&c).passed);
}

#[test]
fn bad_params_rejected() {
    let p = GrowParams {
        min_step: 1e-2,
        ..params()
    };
    assert!(grow_stable(Origin, Branch::Plus, &p).is_err());
}

#[test]
fn cycle_unstable_minus_stays_in_r() {
    let r = region("R").unwrap();
    let p = catalogue_entry("p").float_location();
    let c = grow_unstable(Cycle, Branch::Minus, &params()).unwrap();
    assert_eq!(c.termination, Termination::Converged);
    for q in &c.points {
        assert!(q.dist(&p) <= 1e-5 || r.contains_f64(q), "{q:?}");
    }
}

#[test]
fn seed_is_on_the_eigen_direction() {
    for (saddle, kind) in [(Origin, Kind::Unstable), (Origin, Kind::Stable), (Cycle, Kind::Unstable), (Cycle, Kind::Stable)] {
        let c = grow(saddle, kind, Branch::Plus, &params()).unwrap();
        let (_, base, dir, _, _) = saddle_data(saddle, kind);
        let q = c.points[0];
        let (dx, dy) = (q.x - base.x, q.y - base.y);
        assert!(dx.hypot(dy) <= c.params.seed_offset * (1.0 + 1e-6), "{}", c.label());
        let cos = (dx * dir[0] + dy * dir[1]) / (dx.hypot(dy) * dir[0].hypot(dir[1]));
        assert!(cos >= 1f64.to_radians().cos(), "{} cos {cos}", c.label());
    }
}

#[test]
fn spacing_stays_below_max_step_off_gaps() {
    for c in [
        grow_unstable(Origin, Branch::Plus, &params()).unwrap(),
        grow_stable(Cycle, Branch::Plus, &params()).unwrap(),
    ] {
        for (_, a, b) in c.segments() {
            assert!(a.dist(&b) <= c.params.max_step * (1.0 + 1e-9), "{}", c.label());
        }
    }
}

#[test]
fn halving_the_seed_offset_barely_moves_the_curve() {
    let a = grow_unstable(Origin, Branch::Plus, &params()).unwrap();
    let half = GrowParams {
        seed_offset: params().seed_offset / 2.0,
        ..params()
    };
    let b = grow_unstable(Origin, Branch::Plus, &half).unwrap();
    // Shared arc: drop the stretch inside the larger seed ball.
    let trim = |c: &Polyline| {
        let mut t = c.clone();
        let keep: Vec<bool> = t.points.iter().map(|q| q.norm() > params().seed_offset).collect();
        let mut k = keep.iter();
        t.points.retain(|_| *k.next().unwrap());
        let mut k = keep.iter();
        t.domain.retain(|_| *k.next().unwrap());
        t.breaks.clear();
        t
    };
    let d = hausdorff(&trim(&a), &trim(&b));
    assert!(d <= 10.0 * params().tube_tol, "{d:e}");
}

#[test]
fn stable_origin_vertices_are_boundary_candidates() {
    use crate::classify::{forward_fate, ClassifyConfig, Verdict};
    let cfg = ClassifyConfig::default();
    let c = grow_stable(Origin, Branch::Plus, &params()).unwrap();
    let step = (c.points.len() / 300).max(1);
    for q in c.points.iter().step_by(step) {
        let f = forward_fate(&Point::Float(*q), &cfg);
        assert!(
            matches!(f.verdict, Verdict::StableZeroCandidate | Verdict::Undecided),
            "{q:?}: {f}"
        );
    }
}
