use bieberbach::classify::{backward_fate, forward_fate, point, replay_certificate, ClassifyConfig, Verdict};
use bieberbach::henon::{forward, sigma, Coords, FloatPoint, Point};
use bieberbach::regions::{pseudonorm_f64, region, Pseudonorm, Sampler};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const R: f64 = 1.118_033_988_749_895;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn forward_fate_is_sigma_equivariant(x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let cfg = ClassifyConfig::default();
        let q = Coords::new(x, y);
        let a = forward_fate(&Point::Float(q), &cfg);
        let b = forward_fate(&Point::Float(sigma(&q)), &cfg);
        prop_assert_eq!(b.verdict, a.verdict.mirrored());
        prop_assert_eq!(a.steps_used, b.steps_used);
        prop_assert_eq!(a.certificate.step, b.certificate.step);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn backward_fate_is_sigma_equivariant(x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let cfg = ClassifyConfig::default();
        let q = Coords::new(x, y);
        let a = backward_fate(&Point::Float(q), &cfg);
        let b = backward_fate(&Point::Float(sigma(&q)), &cfg);
        prop_assert_eq!(b.verdict, a.verdict.mirrored());
        prop_assert_eq!(a.certificate.step, b.certificate.step);
    }

    #[test]
    fn float_certificates_replay(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let cfg = ClassifyConfig::default();
        let q = point(x, y);
        for fate in [forward_fate(&q, &cfg), backward_fate(&q, &cfg)] {
            prop_assert!(replay_certificate(&q, &fate), "{}", fate);
        }
    }

    // The pseudonorm |y − x/2| grows by y(y² − 5/4) on Q₃, and f swaps Q₃ and Q₃′.
    #[test]
    fn escape_from_q3_is_monotone(dx in 0.0f64..2.0, dy in 1e-6f64..2.0, mirror in any::<bool>()) {
        let mut q: FloatPoint = Coords::new(-R - dx, R + dy);
        if mirror {
            q = sigma(&q);
        }
        let mut prev = pseudonorm_f64(&q, Pseudonorm::YMinusHalfX);
        for _ in 0..20 {
            q = forward(&q);
            let n = pseudonorm_f64(&q, Pseudonorm::YMinusHalfX);
            if !n.is_finite() {
                break;
            }
            prop_assert!(n > prev, "{prev} -> {n}");
            prev = n;
        }
    }
}

#[test]
fn exact_points_of_r_never_escape_forward() {
    // A lower height cap keeps 10⁴ exact orbits cheap; verdicts are unaffected.
    let cfg = ClassifyConfig {
        exact_bit_limit: 1024,
        ..ClassifyConfig::default()
    };
    let sampler = Sampler::new(&region("R").unwrap().shape, [-2.0, 2.0, -2.0, 2.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut undecided = 0;
    for _ in 0..10_000 {
        let e = sampler.sample(&mut rng).expect("R is nonempty");
        let q = Point::Exact(e);
        let fate = forward_fate(&q, &cfg);
        match fate.verdict {
            Verdict::BasinPlus | Verdict::BasinMinus | Verdict::PeriodicOnCycle => {}
            Verdict::Undecided | Verdict::StableZeroCandidate => undecided += 1,
            v => panic!("{q:?} -> {v:?}"),
        }
        assert!(replay_certificate(&q, &fate), "{fate}");
    }
    // Undecided points sit on stable manifolds, a null set.
    assert!(undecided < 100, "{undecided} undecided");
}
