use cppok::orderk::{
    cppok_mean, cppok_variance, pok_pmf, pok_pmf_auto, pok_pmf_enum, sample_cppok_grid, sample_cppok_path,
};
use cppok::stats::replicate_rng;
use cppok::timechange::sample_z1;
use cppok::{Clock, JumpLaw, MtssParams, OrderKParams, TimeChangedSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pmf_is_a_distribution(k in 1u32..6, lambda in 0.05f64..3.0, t in 0.0f64..4.0) {
        let table = pok_pmf_auto(&OrderKParams::new(k, lambda).unwrap(), t).unwrap();
        prop_assert!(table.probs.iter().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!((table.total_mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn recursion_matches_enumeration(k in 1u32..5, lambda in 0.1f64..2.0, t in 0.1f64..2.0) {
        let params = OrderKParams::new(k, lambda).unwrap();
        let table = pok_pmf(&params, t, 12).unwrap();
        for n in 0..=12u64 {
            let direct = pok_pmf_enum(&params, t, n).unwrap();
            prop_assert!((table.probs[n as usize] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn pmf_mean_matches_moment_formula(k in 1u32..5, lambda in 0.1f64..2.0, t in 0.1f64..3.0) {
        let params = OrderKParams::new(k, lambda).unwrap();
        let table = pok_pmf_auto(&params, t).unwrap();
        let mean: f64 = table.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        let want = cppok_mean(&params, &JumpLaw::dirac(1.0).unwrap(), t).unwrap();
        prop_assert!((mean - want).abs() < 1e-8 * want.max(1.0));
    }

    #[test]
    fn variance_exceeds_mean_for_unit_jumps(k in 1u32..6, lambda in 0.1f64..3.0, t in 0.1f64..3.0) {
        let params = OrderKParams::new(k, lambda).unwrap();
        let law = JumpLaw::dirac(1.0).unwrap();
        let (m, v) = (cppok_mean(&params, &law, t).unwrap(), cppok_variance(&params, &law, t).unwrap());
        if k == 1 {
            prop_assert!((v - m).abs() < 1e-12 * m.max(1.0));
        } else {
            prop_assert!(v > m);
        }
    }

    #[test]
    fn compound_paths_never_decrease(seed in any::<u64>(), k in 1u32..5, horizon in 0.1f64..20.0) {
        let params = OrderKParams::new(k, 1.0).unwrap();
        let law = JumpLaw::exponential(0.5).unwrap();
        let mut rng = replicate_rng(seed, 0);
        let path = sample_cppok_path(&params, &law, horizon, &mut rng).unwrap();
        prop_assert!(path.is_non_decreasing());
        prop_assert!(path.times.iter().all(|&s| s > 0.0 && s <= horizon));

        let grid: Vec<f64> = (1..=10).map(|i| horizon * f64::from(i) / 10.0).collect();
        let values = sample_cppok_grid(&params, &law, &grid, &mut rng).unwrap();
        prop_assert!(values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn time_changed_paths_never_decrease(seed in any::<u64>(), alpha in 0.2f64..0.9, mu in 0.0f64..2.0) {
        let spec = TimeChangedSpec::new(
            OrderKParams::new(2, 1.0).unwrap(),
            JumpLaw::dirac(1.0).unwrap(),
            Clock::Mtss(MtssParams::single(alpha, mu).unwrap()),
        )
        .unwrap();
        let grid = [0.5, 1.0, 1.5, 3.0];
        let path = sample_z1(&spec, &grid, &mut replicate_rng(seed, 1)).unwrap();
        prop_assert!(path.is_non_decreasing());
        let values: Vec<f64> = grid.iter().map(|&t| path.value_at(t).unwrap()).collect();
        prop_assert!(values.iter().all(|v| v.fract() == 0.0));
    }
}
