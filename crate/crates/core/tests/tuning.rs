use fracroot::presets::EXAMPLE_1;
use fracroot::solvers::{run_solver, Method, SolverParams, Status};
use fracroot::tuning::{
    adaptive_solve, classify_alpha, features_from_lambda1, select_alpha, trailing_slope, AlphaCandidate,
    Classification, ProfileFeatures, SelectionCriteria, Watch,
};
use fracroot::C64;
use proptest::prelude::*;

/// Start on x³ − 1 where INVM with α = 0 wanders without converging.
fn unstable_start() -> Vec<C64> {
    vec![C64::new(0.25, 0.0), C64::new(-0.5, 2.25), C64::new(2.0, -0.5)]
}

#[test]
fn single_candidate_matches_plain_run() {
    let f = EXAMPLE_1.polynomial();
    let p = SolverParams::new(3.0, 1.0).with_max_iters(60);
    for x0 in [unstable_start(), EXAMPLE_1.base(2).unwrap()] {
        let plain = run_solver(&f, &x0, &p, Method::Invm).unwrap();
        let ad = adaptive_solve(&f, &x0, &p, &[3.0], &Watch::default()).unwrap();
        assert_eq!(ad.trace, plain);
        assert!(ad.switches.is_empty());
    }
}

#[test]
fn converging_run_never_switches() {
    let f = EXAMPLE_1.polynomial();
    let x0 = [C64::new(1.01, 0.0), C64::new(-0.5, 0.87), C64::new(-0.5, -0.87)];
    let ad = adaptive_solve(&f, &x0, &SolverParams::new(3.0, 1.0), &[3.0, 0.0], &Watch::default()).unwrap();
    assert_eq!(ad.trace.status, Status::Converged);
    assert!(ad.switches.is_empty());
}

#[test]
fn negative_log_slope_means_no_switch() {
    let s: Vec<f64> = (1..=8).map(|k| (-(k as f64)).exp()).collect();
    assert!(trailing_slope(&s, 1e-300) < 0.0);
}

#[test]
fn switching_rescues_unstable_start() {
    let f = EXAMPLE_1.polynomial();
    let p = SolverParams::new(0.0, 1.0).with_max_iters(60);
    let baseline = run_solver(&f, &unstable_start(), &p, Method::Invm).unwrap();
    let ad = adaptive_solve(&f, &unstable_start(), &p, &[0.0, 3.0], &Watch::default()).unwrap();
    assert!(!ad.switches.is_empty());
    assert_eq!(ad.switches[0].to, 3.0);
    assert!(ad.trace.final_residual().unwrap() < baseline.final_residual().unwrap());
    assert_eq!(ad.trace.step_norms.len(), ad.trace.residual_norms.len());
}

#[test]
fn rejects_empty_candidates() {
    let f = EXAMPLE_1.polynomial();
    assert!(adaptive_solve(
        &f,
        &unstable_start(),
        &SolverParams::new(0.0, 1.0),
        &[],
        &Watch::default()
    )
    .is_err());
}

fn features() -> impl Strategy<Value = ProfileFeatures> {
    (0.0f64..=1.0, 0usize..=41, 0.0f64..2.0, -3.0f64..1.0).prop_map(|(nf, t, e, m)| ProfileFeatures {
        negative_fraction: nf,
        transient_end_index: t,
        max_excursion: e,
        mean_late_lambda1: m,
        len: 41,
    })
}

proptest! {
    #[test]
    fn classification_is_monotone(f in features(), dn in 0.0f64..0.5, dt in 0usize..10, de in 0.0f64..1.0) {
        let c = SelectionCriteria::default();
        if classify_alpha(&f, &c) == Classification::WellBehaved {
            let better = ProfileFeatures {
                negative_fraction: (f.negative_fraction + dn).min(1.0),
                transient_end_index: f.transient_end_index.saturating_sub(dt),
                max_excursion: (f.max_excursion - de).max(0.0),
                ..f
            };
            prop_assert_eq!(classify_alpha(&better, &c), Classification::WellBehaved);
        }
    }

    #[test]
    fn negation_swaps_negative_fraction(l in prop::collection::vec(prop_oneof![-2.0f64..-1e-6, 1e-6f64..2.0], 1..50)) {
        let neg: Vec<f64> = l.iter().map(|v| -v).collect();
        let a = features_from_lambda1(&l, 0.5).unwrap();
        let b = features_from_lambda1(&neg, 0.5).unwrap();
        prop_assert!((a.negative_fraction + b.negative_fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selection_ignores_candidate_order(fs in prop::collection::vec(features(), 1..7), rot in 0usize..7) {
        let cands: Vec<AlphaCandidate> = fs
            .iter()
            .enumerate()
            .map(|(i, f)| AlphaCandidate { alpha: i as f64, profiles: vec![*f] })
            .collect();
        let mut shuffled = cands.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        let c = SelectionCriteria::default();
        let a = select_alpha(&cands, &c, vec![], vec![]).unwrap();
        let b = select_alpha(&shuffled, &c, vec![], vec![]).unwrap();
        prop_assert_eq!(a.selected_alpha, b.selected_alpha);
        prop_assert_eq!(a.fallback, b.fallback);
    }
}

#[test]
fn combined_profiles_need_all_well_behaved() {
    let good = features_from_lambda1(&[-1.0; 10], 0.5).unwrap();
    let bad = features_from_lambda1(&[1.0; 10], 0.5).unwrap();
    let c = SelectionCriteria::default();
    let cands = [
        AlphaCandidate {
            alpha: 0.0,
            profiles: vec![good, bad],
        },
        AlphaCandidate {
            alpha: 3.0,
            profiles: vec![good, good],
        },
    ];
    let r = select_alpha(&cands, &c, vec!["sk".into(), "rk".into()], vec!["1".into()]).unwrap();
    assert_eq!(r.per_alpha[0].classification, Classification::Poor);
    assert_eq!(r.selected_alpha, 3.0);
}
