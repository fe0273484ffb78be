mod common;

use proptest::prelude::*;

use mvmnl::aro::{aro_best, solve_zero_p, solve_zero_q, ZeroedCategory};
use mvmnl::hardness::aro_worstcase;
use mvmnl::oracle::brute_force;
use mvmnl::Instance;

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn zeroed_cases_are_exact(n in 1usize..8, m in 1usize..8, seed: u64, w in 0u8..4) {
        let inst = common::instance(n, m, seed, w);
        let zq = solve_zero_q(&inst);
        let (_, want) = brute_force(&inst.zero_q()).unwrap();
        prop_assert!((zq.value - want).abs() <= 1e-12 * want.max(1.0));
        prop_assert_eq!(zq.which, ZeroedCategory::ZeroQ);
        let zp = solve_zero_p(&inst);
        let (_, want) = brute_force(&inst.zero_p()).unwrap();
        prop_assert!((zp.value - want).abs() <= 1e-12 * want.max(1.0));
        let stored = inst.zero_p().revenue(&zp.assortment).unwrap();
        prop_assert!((stored - zp.value).abs() <= 1e-9);
    }

    #[test]
    fn half_guarantee(n in 1usize..8, m in 1usize..8, seed: u64, w in 0u8..4) {
        let inst = common::instance(n, m, seed, w);
        let r = aro_best(&inst);
        let (_, pi) = brute_force(&inst).unwrap();
        prop_assert!(r.value >= 0.5 * pi - 1e-9);
        prop_assert!(r.value >= r.pi_p.max(r.pi_q) - 1e-9);
        prop_assert!((inst.revenue(&r.assortment).unwrap() - r.value).abs() <= 1e-12);
    }
}

#[test]
fn worst_case_family_values() {
    let m = 10.0;
    let eps = 2.0 / m;
    let inst = aro_worstcase(m).unwrap();
    let zq = solve_zero_q(&inst);
    assert!((zq.value - m * (1.0 + eps) / (m + 1.0)).abs() < 1e-12);
    assert_eq!((zq.assortment.x_indices(), zq.assortment.y_indices()), (vec![1], vec![3]));
    let zp = solve_zero_p(&inst);
    assert!((zp.value - m * (1.0 + eps) / (m + 1.0)).abs() < 1e-12);
    let (_, pi) = brute_force(&inst).unwrap();
    assert!((aro_best(&inst).value / pi - 0.6).abs() < 1e-9);
}

#[test]
fn exact_when_one_category_is_free() {
    for seed in 0..20 {
        let inst = common::instance(5, 5, seed, 1).zero_q();
        let (_, pi) = brute_force(&inst).unwrap();
        assert!((aro_best(&inst).value - pi).abs() < 1e-12);
    }
}

#[test]
fn symmetric_instance_has_equal_halves() {
    let p = vec![0.0, 3.0, 2.0, 1.0];
    let u = vec![
        vec![1.0, 0.5, 0.2, 0.7],
        vec![0.5, 2.0, 1.0, 0.3],
        vec![0.2, 1.0, 0.1, 4.0],
        vec![0.7, 0.3, 4.0, 0.9],
    ];
    let inst = Instance::new(p.clone(), p, u).unwrap();
    let r = aro_best(&inst);
    assert!((r.pi_p - r.pi_q).abs() < 1e-12);
}
