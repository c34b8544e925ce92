mod common;

use proptest::prelude::*;
use rhobock_core::{run_bockstein, seed_rules, Catalog, EngineOptions, Window};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn page_turns_match_the_dense_oracle(max_stem in 2i64..=9, lo in -2i64..=0, hi in 0i64..=2) {
        let c = Catalog::default();
        let rules = seed_rules(&c).unwrap();
        let run = run_bockstein(&c, &rules, Window::new(max_stem, (lo, hi)).unwrap(), &EngineOptions::default()).unwrap();
        prop_assert!(run.dd_failures.is_empty(), "{:?}", run.dd_failures);
        prop_assert!(run.conflicts.is_empty());
        let fails = common::page_turn_failures(&run, i64::MAX);
        prop_assert!(fails.is_empty(), "{:#?}", fails);
    }
}

#[test]
fn oracle_rank_and_solve() {
    let rows = vec![
        vec![true, true, false],
        vec![false, true, true],
        vec![true, false, true],
    ];
    assert_eq!(common::rank(&rows), 2);
    assert_eq!(
        common::solve(&rows[..2], &[true, false, true]),
        Some(vec![true, true])
    );
    assert_eq!(common::solve(&rows[..1], &[false, false, true]), None);
}

#[test]
fn oracle_detects_a_dropped_differential() {
    let c = Catalog::default();
    let rules = seed_rules(&c).unwrap();
    let mut run = run_bockstein(
        &c,
        &rules,
        Window::new(6, (-1, 1)).unwrap(),
        &EngineOptions::default(),
    )
    .unwrap();
    assert!(common::page_turn_failures(&run, i64::MAX).is_empty());
    let page = run.pages.iter_mut().find(|p| !p.images.is_empty()).unwrap();
    let d = *page.images.keys().next().unwrap();
    page.images.remove(&d);
    assert!(!common::page_turn_failures(&run, i64::MAX).is_empty());
}
