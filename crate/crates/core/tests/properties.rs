mod common;

use common::*;
use proptest::prelude::*;
use sympindex::angle::UnitPoint;
use sympindex::indexiter::{iterate_indices, mean_index, mu_minus_iter};
use sympindex::json::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn first_iterate_is_base_index(seed in any::<u64>()) {
        let p = random_profile(&mut rng(seed), 5, 0.4);
        prop_assert_eq!(mu_minus_iter(&p, 1).unwrap(), p.base_index);
    }

    #[test]
    fn upper_index_spans_nullity(seed in any::<u64>(), m in 1u64..300) {
        let p = random_profile(&mut rng(seed), 4, 0.4);
        let ix = iterate_indices(&p, m).unwrap();
        prop_assert_eq!(ix.mu_plus, ix.mu_minus + ix.nu as i64);
    }

    #[test]
    fn indices_grow_along_multiples(seed in any::<u64>(), m in 1u64..100, k in 2u64..5) {
        let p = random_profile(&mut rng(seed), 4, 0.4);
        let d = p.d() as i64;
        let a = mu_minus_iter(&p, m).unwrap();
        let b = mu_minus_iter(&p, k * m).unwrap();
        let mean = mean_index(&p).to_f64();
        let drift = (b - a) as f64 - (k - 1) as f64 * m as f64 * mean;
        prop_assert!(drift.abs() <= 2.0 * d as f64 + 1e-9);
    }

    #[test]
    fn splitting_numbers_are_conjugation_symmetric(seed in any::<u64>()) {
        let p = random_profile(&mut rng(seed), 5, 0.4);
        for w in p.dec.eigen_points() {
            let s = p.dec.splitting_numbers(&w);
            let c = p.dec.splitting_numbers(&w.conj());
            prop_assert_eq!(s.s_plus, c.s_minus);
            prop_assert!(s.s_plus <= p.dec.nullity_at(&w));
        }
        let one = p.dec.splitting_numbers(&UnitPoint::One);
        prop_assert_eq!(one.s_plus, one.s_minus);
    }

    #[test]
    fn profile_json_round_trips(seed in any::<u64>()) {
        let p = random_profile(&mut rng(seed), 5, 0.4);
        let text = to_pretty(&profile_to_json(&p));
        let back = profile_from_json(&parse_json(&text).unwrap(), &ParseOptions::default()).unwrap();
        prop_assert_eq!(to_pretty(&profile_to_json(&back)), text);
        for m in [1u64, 7, 40] {
            prop_assert_eq!(mu_minus_iter(&back, m).unwrap(), mu_minus_iter(&p, m).unwrap());
        }
    }
}
