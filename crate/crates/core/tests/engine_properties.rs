use lastsuccess::engine::{
    equal_p_value, lsp_best_threshold, lsp_odds_value, parity_odd_convolution,
    parity_odd_probability, reciprocal_n_limit, reciprocal_n_value, solve_dp, threshold_index,
    win_probability, GameSpec,
};
use lastsuccess::oracle::lsp_brute_force;
use proptest::prelude::*;

fn params(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![3 => 0.0..=1.0f64, 1 => (0..=8u32).prop_map(|i| i as f64 / 8.0)],
        1..=max_len,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dp_matches_parity_route(p in params(30)) {
        let spec = GameSpec::new(p).unwrap();
        let dp = solve_dp(&spec).v1();
        prop_assert!((dp - win_probability(&spec)).abs() <= 1e-12);
    }

    #[test]
    fn parity_forms_agree(p in prop::collection::vec(0.0..=1.0f64, 0..60)) {
        prop_assert!((parity_odd_probability(&p) - parity_odd_convolution(&p)).abs() <= 1e-12);
    }

    #[test]
    fn value_table_shape(p in params(30)) {
        let spec = GameSpec::new(p).unwrap();
        let t = solve_dp(&spec);
        let n = spec.len();
        prop_assert_eq!(t.len(), n);
        prop_assert_eq!(t.value(n), spec.p(n));
        prop_assert!(t.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn threshold_is_last_half_or_above(p in params(20), r_seed in 0usize..100) {
        let spec = GameSpec::new(p).unwrap();
        let n = spec.len();
        let r = 1 + r_seed % n;
        let t = threshold_index(&spec, r).unwrap().threshold;
        prop_assert!(t >= r && t <= n);
        prop_assert!((t + 1..=n).all(|k| spec.p(k) < 0.5));
        prop_assert!(spec.p(t) >= 0.5 || (r..=n).all(|k| spec.p(k) < 0.5) && t == r);
    }

    #[test]
    fn holder_keeps_exactly_before_threshold(p in params(20)) {
        let spec = GameSpec::new(p).unwrap();
        let n = spec.len();
        let table = solve_dp(&spec);
        let u = threshold_index(&spec, 1).unwrap().threshold;
        for k in 1..n {
            prop_assert_eq!(table.keeps_after_success(k), k < u);
        }
    }

    #[test]
    fn game_beats_single_player_stopping(p in prop::collection::vec(0.0..0.99f64, 1..=12)) {
        let spec = GameSpec::new(p).unwrap();
        let lsp = lsp_odds_value(&spec).unwrap().win_probability;
        prop_assert!(solve_dp(&spec).v1() >= lsp - 1e-12);
    }

    #[test]
    fn odds_rule_matches_brute_force(p in prop::collection::vec(0.0..0.99f64, 1..=10)) {
        let spec = GameSpec::new(p).unwrap();
        let odds = lsp_odds_value(&spec).unwrap();
        let brute = lsp_brute_force(&spec).unwrap();
        prop_assert!((odds.win_probability - brute).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&odds.win_probability));
        if spec.total_odds() >= 1.0 {
            prop_assert!(odds.win_probability > (-1.0f64).exp());
        } else {
            prop_assert_eq!(odds.stop_index, 1);
        }
    }

    #[test]
    fn fallback_matches_brute_force_with_certain_trials(mut p in prop::collection::vec(0.0..=1.0f64, 1..=10), at in 0usize..10) {
        let i = at % p.len();
        p[i] = 1.0;
        let spec = GameSpec::new(p).unwrap();
        let brute = lsp_brute_force(&spec).unwrap();
        prop_assert!((lsp_best_threshold(&spec).win_probability - brute).abs() <= 1e-12);
    }
}

#[test]
fn equal_p_long_products() {
    for &(p, n) in &[
        (0.3f64, 1_000_000u64),
        (0.4999999, 1_000_000),
        (1e-6, 1_000_000),
        (0.25, 12345),
    ] {
        let closed = equal_p_value(p, n);
        let convolved = parity_odd_convolution(&vec![p; n as usize]);
        assert!((closed - convolved).abs() <= 1e-9, "p = {p}, n = {n}");
    }
}

#[test]
fn reciprocal_values_decrease_to_limit() {
    let limit: f64 = reciprocal_n_limit();
    let mut prev = reciprocal_n_value::<f64>(2);
    for n in 3..=5000 {
        let v = reciprocal_n_value::<f64>(n);
        assert!(v < prev, "n = {n}");
        assert!(v > limit, "n = {n}");
        prev = v;
    }
    let far = reciprocal_n_value::<f64>(1_000_000);
    assert!((far - limit).abs() < 1e-6);
}

#[test]
fn reciprocal_matches_dp() {
    for n in 1..=60usize {
        let spec = GameSpec::<f64>::reciprocal(n).unwrap();
        assert!(
            (solve_dp(&spec).v1() - reciprocal_n_value::<f64>(n as u64)).abs() <= 1e-12,
            "n = {n}"
        );
    }
}
