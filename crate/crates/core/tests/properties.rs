use proptest::prelude::*;

use srwalk::moments::{erw_fourth_moment, erw_law};
use srwalk::percolation::grow_and_percolate;
use srwalk::weights::{bayesian_gaps, gen_weights, WeightScheme};
use srwalk::{cdf_stable, classify_regime, simulate_walk, stream_rng, RandomnessTape, Regime, Stream, StepSource, WalkParams};

fn prob() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_tape_same_path(seed in any::<u64>(), n in 1usize..400, p in prob(), r in prob()) {
        let tape = RandomnessTape::sample(n, p, r, &mut stream_rng(seed, 0, Stream::Tape)).unwrap();
        let a = simulate_walk(&StepSource::Gaussian, n, &tape, &mut stream_rng(seed, 0, Stream::Steps)).unwrap();
        let b = simulate_walk(&StepSource::Gaussian, n, &tape, &mut stream_rng(seed, 0, Stream::Steps)).unwrap();
        prop_assert_eq!(a.sums, b.sums);
    }

    #[test]
    fn endpoint_is_weighted_sum_of_fresh_steps(seed in any::<u64>(), n in 1usize..400, p in prob(), r in prob()) {
        let tape = RandomnessTape::sample(n, p, r, &mut stream_rng(seed, 1, Stream::Tape)).unwrap();
        let walk = simulate_walk(&StepSource::Rademacher, n, &tape, &mut stream_rng(seed, 1, Stream::Steps)).unwrap();
        let (_, forest) = grow_and_percolate(n, &tape).unwrap();
        prop_assert_eq!(forest.weighted_sum(&walk.step_values).unwrap(), walk.last());
    }

    #[test]
    fn components_partition_the_vertices(seed in any::<u64>(), n in 1usize..400, p in prob(), r in prob()) {
        let tape = RandomnessTape::sample(n, p, r, &mut stream_rng(seed, 2, Stream::Tape)).unwrap();
        let (_, forest) = grow_and_percolate(n, &tape).unwrap();
        let total: u32 = forest.component_sizes.iter().sum();
        prop_assert_eq!(total as usize, n);
        let by_nu: usize = forest.nu().iter().map(|(k, c)| k * c).sum();
        prop_assert_eq!(by_nu, n);
        for k in forest.roots() {
            let w = forest.weights[k - 1];
            let size = forest.component_sizes[k - 1] as i64;
            prop_assert!(w.abs() <= size && (size - w) % 2 == 0);
        }
    }

    #[test]
    fn efron_weights_sum_to_n(seed in any::<u64>(), n in 1usize..500) {
        let w = gen_weights(&WeightScheme::Efron, n, &mut stream_rng(seed, 0, Stream::Weights)).unwrap();
        prop_assert_eq!(w.iter().sum::<f64>(), n as f64);
    }

    #[test]
    fn bayesian_gaps_sum_to_one(seed in any::<u64>(), n in 1usize..500) {
        let d = bayesian_gaps(n, &mut stream_rng(seed, 0, Stream::Weights));
        prop_assert!(d.iter().all(|&x| x >= 0.0));
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stable_cdf_is_symmetric_and_monotone(alpha in 0.3f64..=2.0, x in 0.0f64..50.0, dx in 0.01f64..5.0) {
        let f = cdf_stable(alpha, x).unwrap();
        let g = cdf_stable(alpha, -x).unwrap();
        prop_assert!((f + g - 1.0).abs() < 1e-9);
        prop_assert!(cdf_stable(alpha, x + dx).unwrap() >= f - 1e-12);
    }

    #[test]
    fn erw_moments_satisfy_cauchy_schwarz(r in prob(), n in 1usize..300) {
        let t = erw_fourth_moment(r, n).unwrap();
        for k in 1..=n {
            prop_assert!(t.fourth_at(k) >= t.second_at(k).powi(2) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn erw_law_is_a_probability(r in prob(), n in 1usize..200) {
        let law = erw_law(r, n).unwrap();
        let mass: f64 = law.iter().map(|&(_, q)| q).sum();
        prop_assert!((mass - 1.0).abs() < 1e-10);
        prop_assert!(law.iter().all(|&(t, _)| (t - n as i64) % 2 == 0 && t.abs() <= n as i64));
    }

    #[test]
    fn regime_follows_a(p in prob(), r in prob()) {
        let params = WalkParams::gaussian(p, r).unwrap();
        let a = (2.0 * r - 1.0) * p;
        let (regime, _) = classify_regime(&params).unwrap();
        let expected = if a < 0.5 { Regime::Subcritical } else if a == 0.5 { Regime::Critical } else { Regime::Supercritical };
        prop_assert_eq!(regime, expected);
    }
}
