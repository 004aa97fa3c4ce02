use hps_core::dataset::{
    apply_log_transform, denormalize_target, load_table, normalize, read_table, save_table, write_table,
};
use hps_core::DataSet;
use hps_testkit::Rng;
use proptest::prelude::*;

fn random_set(seed: u64, n: usize, k: usize) -> DataSet {
    let mut rng = Rng::new(seed);
    DataSet::new(
        (0..n).map(|i| format!("CID{}", 1000 + i)).collect(),
        (0..n).map(|_| (0..k).map(|_| rng.range(-50.0, 50.0)).collect()).collect(),
        (0..n).map(|_| rng.range(-8.0, 3.5)).collect(),
        (0..k).map(|j| format!("desc_{j}")).collect(),
    )
    .unwrap()
}

fn to_bytes(ds: &DataSet) -> Vec<u8> {
    let mut out = Vec::new();
    write_table(ds, &mut out).unwrap();
    out
}

#[test]
fn file_round_trip_is_equal_and_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.csv");
    let ds = random_set(1, 25, 4);
    save_table(&ds, &path).unwrap();
    let back = load_table(&path).unwrap();
    assert_eq!(back, ds);
    assert_eq!(to_bytes(&back), std::fs::read(&path).unwrap());
}

#[test]
fn row_order_and_count_preserved() {
    let text = "id,a,x\nz,1,2\na,3,4\nm,5,6\n";
    let ds = read_table(text.as_bytes()).unwrap();
    assert_eq!(ds.ids, vec!["z", "a", "m"]);
    assert_eq!(ds.features, vec![vec![2.0], vec![4.0], vec![6.0]]);
}

#[test]
fn errors_name_row_and_column() {
    let err = read_table("id,a,x,y\n1,0.5,0.1,0.2\n2,0.3,abc,0.1\n".as_bytes()).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("row 2") && msg.contains("column x") && msg.contains("abc"), "{msg}");
    let err = read_table("id,a,x\n1,0.5,0.1\n2,0.3\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains("row 2"), "{err}");
    let err = read_table("id,a,x\nq,0.5,0.1\nq,0.3,0.2\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains("\"q\""), "{err}");
}

#[test]
fn vp_offset_maps_zero_to_log_of_offset() {
    let ds = DataSet::new(vec!["a".into(), "b".into()], vec![vec![0.0], vec![1.0]], vec![0.0, 1.0], vec!["x".into()])
        .unwrap();
    let t = apply_log_transform(&ds, 1e-8).unwrap();
    assert_eq!(t.targets[0], 1e-8f64.ln());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_bytes_stable(seed in any::<u64>(), n in 1usize..20, k in 0usize..6) {
        let ds = random_set(seed, n, k);
        let first = to_bytes(&ds);
        let back = read_table(first.as_slice()).unwrap();
        prop_assert_eq!(&back, &ds);
        prop_assert_eq!(to_bytes(&back), first);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>(), n in 2usize..30, k in 1usize..5) {
        let (once, _) = normalize(&random_set(seed, n, k)).unwrap();
        let (twice, _) = normalize(&once).unwrap();
        for (r1, r2) in once.features.iter().zip(&twice.features) {
            for (a, b) in r1.iter().zip(r2) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
        for (a, b) in once.targets.iter().zip(&twice.targets) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalized_columns_span_unit_interval(seed in any::<u64>(), n in 2usize..30) {
        let (norm, rec) = normalize(&random_set(seed, n, 3)).unwrap();
        for j in 0..3 {
            let col: Vec<f64> = norm.features.iter().map(|r| r[j]).collect();
            prop_assert_eq!(col.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
            prop_assert_eq!(col.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0);
        }
        prop_assert!(rec.constant_features().is_empty());
    }

    #[test]
    fn target_round_trip(seed in any::<u64>(), v in 0.0f64..=1.0, log in any::<bool>()) {
        let mut ds = random_set(seed, 6, 1);
        if log {
            ds.targets.iter_mut().for_each(|a| *a = a.abs() + 0.1);
            ds = apply_log_transform(&ds, 0.0).unwrap();
        }
        let (norm, rec) = normalize(&ds).unwrap();
        let raw = denormalize_target(v, &rec).unwrap();
        prop_assert!((rec.normalize_raw_target(raw).unwrap() - v).abs() <= 1e-9);
        for (i, a) in norm.targets.iter().enumerate() {
            let back = denormalize_target(*a, &rec).unwrap();
            let orig = if log { ds.targets[i].exp() } else { ds.targets[i] };
            prop_assert!((back - orig).abs() <= 1e-9 * orig.abs().max(1.0));
        }
    }
}
