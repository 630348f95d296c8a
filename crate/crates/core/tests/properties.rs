use fbl_bounds::bounds::{bler_from_radius, decision_radius, evaluate, p_pair};
use fbl_bounds::distance::{dmin_upper, hamming_volume_exact, hamming_volume_log};
use fbl_bounds::sim::RateEstimate;
use fbl_bounds::{EnergySpec, SystemConfig};
use num_traits::ToPrimitive;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radius_round_trips_through_tail(n in 1u32..300, eps in 1e-6f64..0.9, sigma in 0.1f64..5.0) {
        let r = decision_radius(n, sigma, eps).unwrap();
        let back = bler_from_radius(n, sigma, r).unwrap().value();
        prop_assert!(((back - eps) / eps).abs() < 1e-9, "n={n} eps={eps} back={back}");
    }

    #[test]
    fn radius_grows_as_budget_shrinks(n in 1u32..300, eps in 1e-6f64..0.5) {
        let a = decision_radius(n, 1.0, eps).unwrap();
        let b = decision_radius(n, 1.0, eps * 0.5).unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn pair_probability_falls_with_distance(n in 1u32..64, f in 2.0f64..4.0, step in 0.01f64..0.5) {
        let r = decision_radius(n, 1.0, 0.05).unwrap();
        let near = p_pair(n, 1.0, r, f * r).unwrap().probability;
        let far = p_pair(n, 1.0, r, (f + step) * r).unwrap().probability;
        prop_assert!(near.value() <= 1.0);
        prop_assert!(far.log_value() < near.log_value(), "n={n} f={f}");
    }

    #[test]
    fn pair_probability_is_a_probability(n in 1u32..64, r in 0.1f64..10.0, d in 0.01f64..30.0) {
        let p = p_pair(n, 1.0, r, d).unwrap().probability.value();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&p), "n={n} r={r} d={d} p={p}");
    }

    #[test]
    fn largest_distance_nondecreasing_in_blocklength(m in 2u32..6, k in 1u32..40, n in 1u32..120) {
        let n = n.max(k);
        let a = dmin_upper(m, n, k).unwrap();
        let b = dmin_upper(m, n + 1, k).unwrap();
        prop_assert!(b >= a);
        prop_assert!(a >= 2);
    }

    #[test]
    fn log_volume_matches_exact(m in 2u32..9, n in 1u32..200, t in 0u32..200) {
        let t = t.min(n);
        let exact = hamming_volume_exact(m, n, t).unwrap().to_f64().unwrap();
        let log = hamming_volume_log(m, n, t).unwrap();
        prop_assert!((log - exact.ln()).abs() < 1e-12 * exact.ln().abs().max(1.0));
    }

    #[test]
    fn erasure_bounds_sit_below_budget(n in 17u32..96, db in -3.0f64..10.0, eps in 0.001f64..0.2) {
        let cfg = SystemConfig::new(2, n, 16, eps, 0.5, EnergySpec::EbN0Db(db)).unwrap();
        let op = evaluate(&cfg).unwrap();
        let r = op.rates;
        prop_assert!(r.pers_lb.value() <= eps && r.pers_ub.value() <= eps);
        prop_assert!(r.pers_lb.value() >= 0.0);
        if r.ordered() {
            prop_assert!(r.pers_lb.value() <= r.pers_ub.value());
        }
        prop_assert!(op.distance.dmin_min >= 1);
        prop_assert_eq!(op.distance.feasible, op.distance.dmin_min <= op.distance.dmin_max);
    }

    #[test]
    fn wilson_interval_brackets_rate(trials in 1u64..1_000_000, frac in 0.0f64..=1.0) {
        let count = ((trials as f64) * frac).floor() as u64;
        let est = RateEstimate::wilson(count, trials);
        prop_assert!(0.0 <= est.lower && est.lower <= est.rate);
        prop_assert!(est.rate <= est.upper && est.upper <= 1.0);
    }
}

#[test]
fn upper_bound_steps_up_at_distance_change() {
    let cfg = SystemConfig::new(2, 32, 16, 0.05, 0.5, EnergySpec::Total(1.0)).unwrap();
    let r = cfg.radius().unwrap();
    for i in 2..=10u64 {
        let ei = 4.0 * r * r / i as f64;
        let at = evaluate(&cfg.with_energy(EnergySpec::Total(ei))).unwrap();
        let left = evaluate(&cfg.with_energy(EnergySpec::Total(ei * (1.0 - 1e-12)))).unwrap();
        assert_eq!(at.distance.dmin_min, i);
        assert_eq!(left.distance.dmin_min, i + 1);
        assert!(at.rates.pcon_ub.log_value() > left.rates.pcon_ub.log_value());
    }
}
