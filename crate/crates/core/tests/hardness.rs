use proptest::prelude::*;
use rayon::prelude::*;

use mvmnl::hardness::{
    aro_worst_record, aro_worstcase, bdks_capacitated_record, bdks_generalprice_record,
    gap_instance, gap_record, max_dicut_record, reduce_bdks_capacitated, reduce_bdks_generalprice,
    reduce_max_dicut, Produced,
};
use mvmnl::lp::solve_lp;
use mvmnl::oracle::{
    bdks_brute, brute_force, brute_force_capacitated, brute_force_general, max_dicut_brute,
    BipartiteGraph, WeightedDigraph,
};

fn dag() -> impl Strategy<Value = WeightedDigraph> {
    (2usize..7)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let len = pairs.len();
            (Just(n), Just(pairs), prop::collection::vec(0u64..4, len))
        })
        .prop_map(|(n, pairs, w)| {
            let edges = pairs.into_iter().zip(w).filter(|(_, w)| *w > 0).map(|((i, j), w)| (i, j, w)).collect();
            WeightedDigraph::new(n, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dicut_threshold_matches_revenue_threshold(g in dag(), dt in 0u64..3) {
        let (_, c) = max_dicut_brute(&g).unwrap();
        let t = (c + dt).max(1);
        let red = reduce_max_dicut(&g, t).unwrap();
        prop_assert!(red.instance.validate().is_empty());
        prop_assert!(red.scale * t >= 2 * g.n as u64);
        let (_, cs) = max_dicut_brute(&red.scaled_graph).unwrap();
        prop_assert_eq!(cs, c * red.scale);
        let (_, pi) = brute_force(&red.instance).unwrap();
        let ts = red.scaled_t as f64;
        prop_assert_eq!(pi >= ts * (1.0 - 1e-9), cs >= red.scaled_t);
    }
}

#[test]
fn single_edge_maps_to_known_instance() {
    let g = WeightedDigraph::new(2, vec![(1, 2, 1)]).unwrap();
    let red = reduce_max_dicut(&g, 1).unwrap();
    assert_eq!(red.scale, 4);
    assert_eq!(red.scaled_t, 4);
    let (_, pi) = brute_force(&red.instance).unwrap();
    assert!((pi - 4.0).abs() < 1e-9, "{pi}");
}

#[test]
fn gap_ratio_decreases_toward_three_quarters() {
    let mut last = f64::INFINITY;
    for m in [1e2, 1e3, 1e4] {
        let inst = gap_instance(m).unwrap();
        assert!(inst.validate().is_empty());
        let sol = solve_lp(&inst).unwrap();
        let (_, pi) = brute_force(&inst).unwrap();
        let ratio = pi / sol.r_star;
        assert!(ratio <= last + 1e-3, "M={m}: {ratio} after {last}");
        assert!(ratio >= 0.75 - 1e-9);
        last = ratio;
    }
    assert!(last <= 0.75 + 1e-3);
}

#[test]
fn aro_family_validates() {
    for m in [3.0, 10.0, 1e6] {
        assert!(aro_worstcase(m).unwrap().validate().is_empty());
    }
    assert!(aro_worstcase(2.0).is_err());
    assert!(gap_instance(1.0).is_err());
}

fn all_graphs(left: usize, right: usize) -> impl ParallelIterator<Item = BipartiteGraph> {
    let cells: Vec<(usize, usize)> =
        (1..=left).flat_map(|i| (1..=right).map(move |j| (i, j))).collect();
    (0u32..1 << cells.len()).into_par_iter().map(move |mask| {
        let edges = cells.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        BipartiteGraph::new(left, right, edges).unwrap()
    })
}

#[test]
fn bdks_bounds_hold_exhaustively() {
    for left in 1..=4 {
        for right in 1..=4 {
            let bad: usize = all_graphs(left, right)
                .map(|g| {
                    let mut bad = 0;
                    for kappa in 1..=2.min(left).min(right) {
                        let (_, _, e) = bdks_brute(&g, kappa).unwrap();
                        let e = e as f64;
                        let g3 = ((left + right) as f64).powi(3);
                        let (inst, k1, k2) = reduce_bdks_capacitated(&g, kappa).unwrap();
                        let (_, cap) = brute_force_capacitated(&inst, k1 as i64, k2 as i64).unwrap();
                        if cap < e / (2.0 * g3) - 1e-15 || cap > e / g3 + 1e-15 {
                            bad += 1;
                        }
                        let gp = reduce_bdks_generalprice(&g, kappa).unwrap();
                        let (_, pi) = brute_force_general(&gp).unwrap();
                        if e > 4.0 * (kappa * kappa) as f64 * pi + 1e-12 {
                            bad += 1;
                        }
                    }
                    bad
                })
                .sum();
            assert_eq!(bad, 0, "{left}x{right}");
        }
    }
}

#[test]
fn bdks_rejects_large_kappa() {
    let g = BipartiteGraph::new(2, 3, vec![(1, 1)]).unwrap();
    assert!(reduce_bdks_capacitated(&g, 3).is_err());
    assert!(reduce_bdks_generalprice(&g, 0).is_err());
}

#[test]
fn records_serialize() {
    let dg = WeightedDigraph::new(3, vec![(1, 2, 2), (2, 3, 1)]).unwrap();
    let bg = BipartiteGraph::new(2, 2, vec![(1, 2), (2, 1)]).unwrap();
    let recs = [
        max_dicut_record(&dg, 2).unwrap(),
        bdks_capacitated_record(&bg, 1).unwrap(),
        bdks_generalprice_record(&bg, 2).unwrap(),
        gap_record(100.0).unwrap(),
        aro_worst_record(10.0).unwrap(),
    ];
    let names: Vec<&str> = recs.iter().map(|r| r.reduction.as_str()).collect();
    assert_eq!(names, ["maxdicut", "bdks-cap", "bdks-gp", "gap", "aro-worst"]);
    for r in &recs {
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["reduction", "source", "threshold", "params"] {
            assert!(v.get(key).is_some(), "{key} missing in {}", r.reduction);
        }
        match &r.instance {
            Produced::Standard(i) => assert!(i.validate().is_empty()),
            Produced::General(i) => assert!(i.validate().is_empty()),
        }
    }
    let v: serde_json::Value = serde_json::from_str(&recs[0].to_json()).unwrap();
    assert_eq!(v["params"]["scale"], 3);
    assert_eq!(v["threshold"], 6.0);
    assert_eq!(v["source"]["edges"][0], serde_json::json!([1, 2, 2]));
}
