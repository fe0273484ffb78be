mod common;

use proptest::prelude::*;

use mvmnl::lp::{
    build_lp, random_round, sign_pattern_violations, solve_lp, solve_vertex_simplex, Label,
};
use mvmnl::oracle::brute_force;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn vertex_is_half_integral_and_feasible(n in 1usize..12, m in 1usize..12, seed: u64, w in 0u8..4) {
        let inst = common::instance(n, m, seed, w);
        let model = build_lp(&inst);
        let sol = solve_lp(&inst).unwrap();
        for (&v, &l) in sol.x.iter().zip(&sol.lx).chain(sol.y.iter().zip(&sol.ly)) {
            prop_assert_eq!(v, l.value());
        }
        for i in 1..=n {
            for j in 1..=m {
                prop_assert_eq!(sol.z(i, j), sol.z_label(i, j).value());
            }
        }
        let scale = inst.p()[1] + inst.q()[1] + 1.0;
        prop_assert!(sol.max_violation(&model) <= 1e-9 * scale);
        prop_assert!((sol.raw_objective(&model) - sol.r_star).abs() <= 1e-9 * scale);
        prop_assert!(sign_pattern_violations(&inst, &sol).is_empty());
    }

    #[test]
    fn relaxation_bounds_the_optimum(n in 1usize..7, m in 1usize..7, seed: u64, w in 0u8..4) {
        let inst = common::instance(n, m, seed, w);
        let sol = solve_lp(&inst).unwrap();
        let (_, pi) = brute_force(&inst).unwrap();
        prop_assert!(sol.r_star >= pi - 1e-9);
        if sol.is_integral() {
            let v = inst.revenue(&sol.support()).unwrap();
            prop_assert!((v - sol.r_star).abs() <= 1e-9 * sol.r_star.max(1.0));
        }
    }

    #[test]
    fn simplex_route_agrees(n in 1usize..7, m in 1usize..7, seed: u64, w in 0u8..4) {
        let inst = common::instance(n, m, seed, w);
        let a = solve_lp(&inst).unwrap();
        let b = solve_vertex_simplex(&build_lp(&inst)).unwrap();
        prop_assert!((a.r_star - b.r_star).abs() <= 1e-9 * a.r_star.max(1.0));
    }
}

#[test]
fn rounding_baseline_frequencies() {
    let (_, sol) = common::nonintegral(10, 10, 0);
    let half: Vec<usize> = (0..sol.lx.len()).filter(|&i| sol.lx[i] == Label::Half).collect();
    assert!(!half.is_empty() || sol.ly.contains(&Label::Half));
    let trials = 4000;
    let mut counts = vec![0usize; sol.lx.len()];
    for s in 0..trials {
        let a = random_round(&sol, s);
        for (k, &l) in sol.lx.iter().enumerate() {
            match l {
                Label::One => assert!(a.x[k]),
                Label::Zero => assert!(!a.x[k]),
                Label::Half => counts[k] += usize::from(a.x[k]),
            }
        }
    }
    for &k in &half {
        let f = counts[k] as f64 / trials as f64;
        assert!((f - 0.5).abs() < 0.05, "frequency {f}");
    }
    assert_eq!(random_round(&sol, 7), random_round(&sol, 7));
}

#[test]
fn lp_text_lists_every_row() {
    let inst = common::instance(2, 2, 3, 1);
    let model = build_lp(&inst);
    let text = model.to_lp_text();
    assert!(text.starts_with("Maximize"));
    let bounds = inst.n() + inst.m();
    assert_eq!(text.matches("<= 0").count(), model.num_constraints() - 1 + bounds);
    assert!(text.contains("norm:"));
}

#[test]
fn json_dump_shape() {
    let (_, sol) = common::nonintegral(6, 6, 0);
    let v = sol.to_json();
    for key in ["w", "r_star", "x", "y", "z", "labels"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}
