mod common;

use proptest::prelude::*;

use mvmnl::instance::{
    gen_random, instance_from_json, instance_to_json, normalize, read_assortment, read_instance,
    write_instance, Dist, Violation,
};
use mvmnl::{Assortment, Error, Instance};

fn raw_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(0.0f64..10.0, n),
            prop::collection::vec(0.0f64..10.0, m),
            prop::collection::vec(prop::collection::vec(0.0f64..5.0, m + 1), n + 1),
        )
            .prop_map(|(p, q, mut u)| {
                u[0][0] = 1.0;
                (p, q, u)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn json_round_trip_is_exact(n in 1usize..8, m in 1usize..8, seed: u64, w in 0u8..4) {
        let inst = common::instance(n, m, seed, w);
        let text = instance_to_json(&inst, None);
        let back = instance_from_json(&text, std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn normalized_revenue_matches_raw((p, q, u) in raw_strategy(), xmask: u16, ymask: u16) {
        let (inst, perm) = normalize(&p, &q, &u).unwrap();
        prop_assert!(inst.validate().is_empty());
        let (n, m) = (p.len(), q.len());
        let raw = Assortment {
            x: (0..n).map(|k| xmask >> k & 1 == 1).collect(),
            y: (0..m).map(|k| ymask >> k & 1 == 1).collect(),
        };
        let norm = perm.from_original(&raw);
        let p_full: Vec<f64> = std::iter::once(0.0).chain(p.iter().copied()).collect();
        let q_full: Vec<f64> = std::iter::once(0.0).chain(q.iter().copied()).collect();
        let want = common::revenue_naive(&p_full, &q_full, &u, &raw.x_indices(), &raw.y_indices());
        let got = inst.revenue(&norm).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
        prop_assert_eq!(perm.to_original(&norm), raw);
    }

    #[test]
    fn revenue_is_bounded_by_top_prices(n in 1usize..7, m in 1usize..7, seed: u64, xmask: u8, ymask: u8) {
        let inst = common::instance(n, m, seed, 1);
        let a = Assortment {
            x: (0..n).map(|k| xmask >> k & 1 == 1).collect(),
            y: (0..m).map(|k| ymask >> k & 1 == 1).collect(),
        };
        let r = inst.revenue(&a).unwrap();
        prop_assert!(r >= 0.0 && r <= inst.p()[1] + inst.q()[1] + 1e-12);
    }

    #[test]
    fn transpose_keeps_revenue(n in 1usize..6, m in 1usize..6, seed: u64, xmask: u8, ymask: u8) {
        let inst = common::instance(n, m, seed, 2);
        let a = Assortment {
            x: (0..n).map(|k| xmask >> k & 1 == 1).collect(),
            y: (0..m).map(|k| ymask >> k & 1 == 1).collect(),
        };
        let t = inst.transpose();
        prop_assert!((inst.revenue(&a).unwrap() - t.revenue(&a.transpose()).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn default_draws_stay_in_unit_interval() {
    let inst = gen_random(25, 25, 42, Dist::default(), Dist::default());
    assert!(inst.p().iter().chain(inst.q()).all(|&x| (0.0..=1.0).contains(&x)));
    for i in 0..=25 {
        for j in 0..=25 {
            assert!((0.0..=1.0).contains(&inst.u(i, j)));
        }
    }
    assert_eq!(inst.u(0, 0), 1.0);
    assert_eq!(gen_random(25, 25, 42, Dist::default(), Dist::default()), inst);
    assert_ne!(gen_random(25, 25, 43, Dist::default(), Dist::default()), inst);
}

#[test]
fn file_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let inst = common::instance(4, 3, 9, 1);
    write_instance(&inst, &path).unwrap();
    assert_eq!(read_instance(&path).unwrap(), inst);

    let missing = dir.path().join("nope.json");
    let err = read_instance(&missing).unwrap_err();
    assert!(err.to_string().contains("nope.json"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":1,"m":1,"p":[1.0],"q":[1.0,2.0],"u":[[1,0],[0,1]]}"#).unwrap();
    let err = read_instance(&bad).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }), "{err}");

    let unsorted = dir.path().join("unsorted.json");
    std::fs::write(
        &unsorted,
        r#"{"n":2,"m":1,"p":[1.0,2.0],"q":[1.0],"u":[[1,0],[0,1],[0,1]]}"#,
    )
    .unwrap();
    match read_instance(&unsorted) {
        Err(Error::Validation(v)) => assert!(matches!(v[0], Violation::PriceNotNonincreasing { category: 1, index: 2 })),
        other => panic!("{other:?}"),
    }

    let a = dir.path().join("a.json");
    std::fs::write(&a, r#"{"x":[1,3],"y":[2]}"#).unwrap();
    let asst = read_assortment(&a, 4, 3).unwrap();
    assert_eq!((asst.x_indices(), asst.y_indices()), (vec![1, 3], vec![2]));
    assert!(read_assortment(&a, 2, 3).is_err());
}

#[test]
fn anchor_weight_is_enforced() {
    let err = Instance::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![vec![0.0, 1.0], vec![1.0, 1.0]])
        .unwrap_err();
    assert!(err.to_string().contains("u00 must equal 1"), "{err}");
}
