//! Property tests over randomly drawn inputs.

use egyfrac::arith::{gcd, FactoredInteger, SpfTable};
use egyfrac::characters::CharacterGroup;
use egyfrac::egyptian::{r_bruteforce, r_character_formula, r_divisor_method, r_general};
use egyfrac::moments::{scan, ScanOptions};
use egyfrac::par::Execution;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn methods_agree(n in 1u64..200_000, a in 1u64..60) {
        let table = SpfTable::new(n).unwrap();
        let brute = r_bruteforce(n, a, true).unwrap();
        prop_assert_eq!(r_general(n, a, &table).unwrap(), brute.count);
        for s in brute.solutions.as_ref().unwrap() {
            prop_assert!(s.satisfies(n, a));
        }
        // swapping pairs off every solution except x = y = 2n/a
        prop_assert_eq!(brute.count % 2, u64::from(2 * n % a == 0));
        if gcd(n, a) == 1 {
            let fi = FactoredInteger::by_trial_division(n).unwrap();
            let group = CharacterGroup::new(a).unwrap();
            prop_assert_eq!(r_divisor_method(&fi, a).unwrap(), brute.count);
            prop_assert_eq!(r_character_formula(&fi, &group).unwrap(), brute.count);
        }
    }

    #[test]
    fn characters_are_multiplicative(a in 1u64..200, m in 0u64..10_000, n in 0u64..10_000) {
        for chi in CharacterGroup::new(a).unwrap().all_characters() {
            prop_assert_eq!(chi.evaluate(m * n), chi.evaluate(m).mul(chi.evaluate(n)));
        }
    }

    #[test]
    fn checkpoints_do_not_change_totals(a in 1u64..40, n_max in 10u64..20_000, cut in 1u64..20_000) {
        let cut = cut.min(n_max);
        let whole = scan(a, n_max, &ScanOptions { checkpoints: vec![n_max], ..Default::default() }).unwrap();
        let split = scan(
            a,
            n_max,
            &ScanOptions { checkpoints: vec![cut, n_max], exec: Execution::Sequential, ..Default::default() },
        )
        .unwrap();
        prop_assert_eq!(whole.checkpoints.last(), split.checkpoints.last());
    }
}
