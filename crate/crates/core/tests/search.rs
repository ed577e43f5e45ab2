use proptest::prelude::*;
use rankcover::codes::Code;
use rankcover::search::{
    exhaustive_cost_estimate, exhaustive_lower_bound, jsl_construct, linear_exhaustive, local_search, CoverState,
    JslOptions, SearchBudget,
};

fn naive_radius(code: &Code) -> u32 {
    let s = code.space();
    (0..s.size()).map(|x| code.words().iter().map(|&c| s.distance(x, c)).min().unwrap()).max().unwrap()
}

#[test]
fn smallest_case_is_settled() {
    assert!(exhaustive_lower_bound(2, 2, 2, 1, 2, 1e6).unwrap());
    let code = jsl_construct(2, 2, 2, 1, &JslOptions::default()).unwrap();
    assert_eq!(code.len(), 3);
    assert_eq!(naive_radius(&code), 1);
}

#[test]
fn exhaustive_search_results() {
    // K_R(2^3, 3, 2) = 4
    assert!(exhaustive_lower_bound(2, 3, 3, 2, 3, 1e8).unwrap());
    assert!(!exhaustive_lower_bound(2, 3, 3, 2, 4, 1e8).unwrap());
    assert!(exhaustive_lower_bound(2, 3, 2, 1, 3, 1e8).unwrap());
    assert!(exhaustive_lower_bound(2, 4, 4, 1, 30, 1e3).is_err());
    assert!(exhaustive_cost_estimate(2, 4, 4, 1, 30) > 1e3);
}

#[test]
fn jsl_codes_verify_independently() {
    for (m, n, rho, at_most) in [(3, 3, 1, 24), (4, 3, 2, 7), (4, 4, 2, 16), (3, 2, 1, 4)] {
        let code = jsl_construct(2, m, n, rho, &JslOptions::default()).unwrap();
        assert!(code.len() <= at_most, "({m},{n},{rho}): {}", code.len());
        assert!(naive_radius(&code) <= rho);
    }
}

#[test]
fn searches_are_deterministic() {
    let opts = JslOptions { restarts: 3, seed: 11, ..Default::default() };
    let a = jsl_construct(2, 3, 3, 1, &opts).unwrap();
    let b = jsl_construct(2, 3, 3, 1, &opts).unwrap();
    assert_eq!(a.words(), b.words());
    let budget = SearchBudget { random_seed: 5, ..Default::default() };
    let a = local_search(2, 3, 3, 1, 20, &budget).unwrap().expect("20 words suffice");
    let b = local_search(2, 3, 3, 1, 20, &budget).unwrap().unwrap();
    assert_eq!(a.words(), b.words());
    assert!(naive_radius(&a) <= 1);
}

#[test]
fn local_search_respects_lower_bound() {
    // two words never cover GF(4)^2 with radius 1
    let budget = SearchBudget { max_iterations: 200, max_restarts: 5, ..Default::default() };
    assert!(local_search(2, 2, 2, 1, 2, &budget).unwrap().is_none());
    let three = local_search(2, 2, 2, 1, 3, &budget).unwrap().unwrap();
    assert_eq!(naive_radius(&three), 1);
}

#[test]
fn linear_search() {
    // no 1-dimensional linear code over GF(16)^4 has radius 2, a Gabidulin code of dimension 2 does
    assert!(linear_exhaustive(2, 4, 4, 2, 1, 1e9).unwrap());
    assert!(!linear_exhaustive(2, 4, 4, 2, 2, 1e9).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cover_state_counts(xs in proptest::collection::vec(0u64..500, 0..200)) {
        let mut st = CoverState::new(500);
        let mut seen = std::collections::HashSet::new();
        for &x in &xs {
            prop_assert_eq!(st.cover(x), seen.insert(x));
            prop_assert!(st.is_covered(x));
        }
        prop_assert_eq!(st.count_uncovered(), 500 - seen.len() as u64);
        prop_assert_eq!(st.recount(), st.count_uncovered());
        let first = (0..500).find(|x| !seen.contains(x));
        prop_assert_eq!(st.first_uncovered(), first);
    }
}
