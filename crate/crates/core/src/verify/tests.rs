use super::*;
use crate::exactnum::q_sqrt5;
use crate::henon::forward;
use crate::regions::region;

fn pt(x: FieldElement, y: FieldElement) -> ExactPoint {
    Coords::new(x, y)
}

fn fbox(x0: FieldElement, x1: FieldElement, y0: FieldElement, y1: FieldElement) -> ExactBox {
    ExactBox { x: (x0, x1), y: (y0, y1) }
}

#[test]
fn catalogue_is_large_and_ids_are_unique() {
    let cs = builtin_claims();
    assert!(cs.len() >= 20, "{}", cs.len());
    let mut ids: Vec<&str> = cs.iter().map(|c| c.id.as_str()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), cs.len());
    for kind in [ClaimKind::Inclusion, ClaimKind::Identity, ClaimKind::Sign] {
        assert!(cs.iter().any(|c| c.kind() == kind));
    }
    assert!(cs.iter().all(|c| !c.anchor.is_empty()));
}

#[test]
fn jobs_and_witnesses_refer_to_their_claims() {
    let cs = builtin_claims();
    for j in builtin_boxes() {
        assert!(cs.iter().any(|c| c.id == j.claim), "{}", j.claim);
    }
    for c in cs.iter().chain(claims::mutants().iter()) {
        for w in &c.witnesses {
            assert!(c.source.contains(w), "{}: {w}", c.id);
        }
    }
}

#[test]
fn q3_example_point() {
    // f(−2, 2) = (2, −1 + 3/2 − 8) = (2, −15/2).
    let p = pt(q(-2, 1), q(2, 1));
    let img = forward(&p);
    assert_eq!(img, pt(q(2, 1), q(-15, 2)));
    assert!(region("Q3'").unwrap().contains(&img));
    assert!(matches!(check_point(&claim("q3_forward").unwrap(), &p), Outcome::Holds(_)));
}

#[test]
fn s1_example_point() {
    // y₁ = −1/8 + g(−1/4) = −1/8 − 3/16 + 1/64 = −19/64.
    let p = pt(q(-1, 4), q(-1, 4));
    let img = forward(&p);
    assert_eq!(img, pt(q(-1, 4), q(-19, 64)));
    assert!(matches!(check_point(&claim("s1_forward").unwrap(), &p), Outcome::Holds(_)));
}

#[test]
fn g_bound_is_attained_at_one_half() {
    let c = claim("g_upper_bound").unwrap();
    let p = pt(q(0, 1), q(1, 2));
    assert!(Expr::QuarterMinusG.eval(&p).is_zero());
    assert!(matches!(check_point(&c, &p), Outcome::Holds(Some(m)) if m == 0.0));
}

#[test]
fn zero_samples_is_rejected() {
    let c = claim("q3_forward").unwrap();
    assert!(matches!(check_claim_sampled(&c, 0, 1), Err(Error::InvalidParam(_))));
    let cfg = SuiteConfig {
        samples: 0,
        ..SuiteConfig::default()
    };
    assert!(run_suite(&cfg).is_err());
}

#[test]
fn every_claim_passes_a_small_sample() {
    for c in builtin_claims() {
        let e = check_claim_sampled(&c, 2000, 42).unwrap();
        assert_eq!(e.status, Status::Pass, "{}: {:?}", c.id, e);
        assert!(e.samples >= 2000);
    }
}

#[test]
fn identities_hold_on_the_grid() {
    for c in builtin_claims().iter().filter(|c| c.kind() == ClaimKind::Identity) {
        let e = check_identity_grid(c).unwrap();
        assert_eq!(e.status, Status::Pass, "{}", c.id);
        assert_eq!(e.samples, 100);
    }
    assert!(check_identity_grid(&claim("q3_forward").unwrap()).is_err());
}

#[test]
fn identity_guards_are_mostly_met() {
    for c in builtin_claims().iter().filter(|c| c.kind() == ClaimKind::Identity) {
        let e = check_claim_sampled(c, 500, 3).unwrap();
        assert!(e.skipped < e.samples, "{}", c.id);
    }
}

#[test]
fn every_mutant_fails_with_a_counterexample() {
    for id in mutant_ids() {
        let c = mutant(&id).unwrap();
        let e = if c.kind() == ClaimKind::Identity {
            check_identity_grid(&c).unwrap()
        } else {
            check_claim_sampled(&c, 10_000, 42).unwrap()
        };
        assert_eq!(e.status, Status::Fail, "{id}");
        assert!(e.counterexample.is_some());
    }
    assert!(mutant("nope").is_err());
}

#[test]
fn literal_statements_fail_only_at_their_witnesses() {
    for id in ["literal_s2_forward", "literal_s1_backward"] {
        let mut c = mutant(id).unwrap();
        let w = c.witnesses.remove(0);
        let e = check_claim_sampled(&c, 2000, 42).unwrap();
        assert_eq!(e.status, Status::Pass, "{id}: random points miss the null set");
        c.witnesses.push(w.clone());
        let e = check_claim_sampled(&c, 10, 42).unwrap();
        assert_eq!(e.counterexample, Some(w.to_string()));
    }
    // The T3 counterexamples fill a whole edge, which the sampler draws from.
    let mut c = mutant("literal_t3_forward").unwrap();
    c.witnesses.clear();
    assert_eq!(check_claim_sampled(&c, 10_000, 42).unwrap().status, Status::Fail);
}

#[test]
fn interval_certifies_q3_growth_off_the_line() {
    let c = claim("q3_growth_positive").unwrap();
    let r = q_sqrt5(1, 2);
    let m = q(1, 100);
    let b = fbox(q(-3, 1), &(-&r) - &m, &r + &m, q(3, 1));
    let e = check_claim_interval(&c, &b, &m, 24).unwrap();
    assert_eq!(e.status, Status::Pass, "{:?}", e.note);
    assert!(e.worst_margin.unwrap() > 0.0);
}

#[test]
fn interval_is_inconclusive_on_the_equality_line() {
    let c = claim("q3_growth_positive").unwrap();
    let r = q_sqrt5(1, 2);
    let b = fbox(q(-3, 1), -&r, r.clone(), q(3, 1));
    let e = check_claim_interval(&c, &b, &q(0, 1), 16).unwrap();
    assert_eq!(e.status, Status::Inconclusive);
}

#[test]
fn interval_certifies_s1_invariance() {
    let c = claim("s1_forward").unwrap();
    let b = fbox(q(-49, 100), q(-1, 100), q(-49, 100), q(-1, 100));
    let e = check_claim_interval(&c, &b, &q(1, 100), 24).unwrap();
    assert_eq!(e.status, Status::Pass, "{:?}", e.note);
}

#[test]
fn interval_rejects_boxes_outside_the_source() {
    let c = claim("s1_forward").unwrap();
    let b = fbox(q(-49, 100), q(1, 100), q(-49, 100), q(-1, 100));
    assert!(check_claim_interval(&c, &b, &q(1, 100), 8).is_err());
    let id = claim("q3_norm_growth").unwrap();
    assert!(check_claim_interval(&id, &b, &q(0, 1), 8).is_err());
}

#[test]
fn covering_splits_along_shared_edges() {
    // [0, ½] × [−½, ½] is the union of two closed squares but neither alone.
    let u = region("S1'").unwrap().shape.clone();
    let d = region("S2'").unwrap().shape.clone();
    let shape = closed_part(&Shape::Union(vec![u, d]));
    let mut cuts = (Vec::new(), Vec::new());
    axis_cuts(&shape, &mut cuts.0, &mut cuts.1);
    let b = Coords::new(Interval::new(0.1, 0.4), Interval::new(-0.4, 0.4));
    assert_eq!(shape.contains_box(&b), Tri::Unknown);
    assert!(covers(&shape, &cuts, &b, 4));
}

#[test]
fn every_listed_box_certifies() {
    let cs = builtin_claims();
    for j in builtin_boxes() {
        let c = cs.iter().find(|c| c.id == j.claim).unwrap();
        let e = check_claim_interval(c, &j.bx, &j.margin, 24).unwrap();
        assert_eq!(e.status, Status::Pass, "{}: {:?}", j.claim, e.note);
    }
}

#[test]
fn suite_is_deterministic_and_counts_mutants() {
    let cfg = SuiteConfig {
        samples: 300,
        mutants: vec!["f_q3_subset_q3".into()],
        ..SuiteConfig::default()
    };
    let a = run_suite(&cfg).unwrap();
    let b = crate::parallel::install(Some(2), || run_suite(&cfg).unwrap());
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.failed, 1);
    assert!(a.has_failure());
    assert_eq!(a.passed, builtin_claims().len());
}

#[test]
fn claim_seeds_differ_per_claim() {
    assert_ne!(claim_seed(42, "q1_backward"), claim_seed(42, "q2_backward"));
    assert_ne!(claim_seed(1, "q1_backward"), claim_seed(2, "q1_backward"));
}
