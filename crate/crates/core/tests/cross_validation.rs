use hps_core::evaluation::{
    cross_validate, evaluate_hps_cv, kfold_partition, kfold_partition_run, median, r_squared, FoldOutcome,
};
use hps_core::regression::MethodSpec;
use hps_core::splitter::{default_grid, predict_hps, scan_thresholds, split_by, train_hps};
use hps_core::{DataSet, Hyperplane, LinearModel, NormalizationRecord};
use hps_testkit::fixtures::{piecewise, two_regime, Planted};
use hps_testkit::Rng;
use proptest::prelude::*;

fn data(p: &Planted) -> DataSet {
    let k = p.rows[0].len();
    DataSet::new(
        (0..p.rows.len()).map(|i| format!("c{i}")).collect(),
        p.rows.clone(),
        p.targets.clone(),
        (0..k).map(|j| format!("d{j}")).collect(),
    )
    .unwrap()
}

#[test]
fn noiseless_linear_mlr_median_is_one() {
    let mut rng = Rng::new(1);
    let rows: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.unit(), rng.unit()]).collect();
    let t: Vec<f64> = rows.iter().map(|r| 0.3 + 0.5 * r[0] - 0.2 * r[1]).collect();
    let rep = cross_validate(&data(&Planted { rows, targets: t }), &MethodSpec::Mlr, 5, 3, 9).unwrap();
    assert!((rep.median.unwrap() - 1.0).abs() < 1e-9);
}

// targets are independent uniform noise: a single descriptor cannot predict them
#[test]
fn pure_noise_scores_low() {
    let mut rng = Rng::new(2);
    let rows: Vec<Vec<f64>> = (0..100).map(|_| vec![rng.unit()]).collect();
    let t: Vec<f64> = (0..100).map(|_| rng.unit()).collect();
    let rep = cross_validate(&data(&Planted { rows, targets: t }), &MethodSpec::Mlr, 5, 10, 4).unwrap();
    assert!(rep.median.unwrap() < 0.2, "{:?}", rep.median);
}

#[test]
fn score_count_is_runs_times_folds() {
    let ds = data(&piecewise(10, 3));
    let rep = cross_validate(&ds, &MethodSpec::Mlr, 5, 1, 0).unwrap();
    assert_eq!(rep.scores.len(), 5);
    let rep = cross_validate(&ds, &MethodSpec::Mlr, 5, 10, 0).unwrap();
    assert_eq!(rep.scores.len(), 50);
}

#[test]
fn constant_test_folds_are_counted_not_scored() {
    // eight compounds share one value, so some test folds are constant
    let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 9.0]).collect();
    let mut t = vec![0.5; 10];
    t[0] = 0.0;
    t[9] = 1.0;
    let rep = cross_validate(&data(&Planted { rows, targets: t }), &MethodSpec::Mlr, 5, 4, 1).unwrap();
    assert_eq!(rep.scores.len(), 20);
    assert!(rep.undefined > 0);
    let defined = rep.scores.iter().filter(|s| matches!(s.outcome, FoldOutcome::Score(_))).count();
    assert_eq!(defined + rep.undefined + rep.failed, 20);
}

#[test]
fn too_few_compounds_rejected() {
    let ds = data(&Planted { rows: vec![vec![0.0], vec![1.0]], targets: vec![0.0, 1.0] });
    assert!(cross_validate(&ds, &MethodSpec::Mlr, 5, 1, 0).is_err());
}

#[test]
fn reports_are_byte_reproducible() {
    let ds = data(&two_regime(60, 5, 0.01, 3));
    let a = serde_json::to_string(&cross_validate(&ds, &MethodSpec::Auto, 5, 2, 42).unwrap()).unwrap();
    let b = serde_json::to_string(&cross_validate(&ds, &MethodSpec::Auto, 5, 2, 42).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn two_regime_hps_beats_single_mlr() {
    let ds = data(&two_regime(400, 5, 0.01, 2024));
    let split = scan_thresholds(&ds, &default_grid(), 0.25).unwrap().best;
    let hps = evaluate_hps_cv(&ds, &split, [MethodSpec::Mlr, MethodSpec::Mlr], 5, 10, 7).unwrap();
    let mlr = cross_validate(&ds, &MethodSpec::Mlr, 5, 10, 7).unwrap();
    let (h, m) = (hps.combined.median.unwrap(), mlr.median.unwrap());
    eprintln!("theta {} sizes {:?} hps {h} mlr {m}", split.theta, split.sizes());
    assert!(h >= 0.95 && m <= 0.80);
}

// six compounds, both sides fit by constant means: the combined prediction is
// a two-level step whose R² is checked by hand.
#[test]
fn step_function_r2_by_hand() {
    let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 / 5.0]).collect();
    let t = vec![0.0, 0.2, 0.1, 0.9, 1.0, 0.8];
    let ds = data(&Planted { rows, targets: t.clone() });
    let split = split_by(&ds, 0.5, Hyperplane::new(vec![1.0], 0.5), 0.0).unwrap();
    let mut model = train_hps(&ds, &split, [MethodSpec::Mlr, MethodSpec::Mlr], &NormalizationRecord::identity(1), 0)
        .unwrap();
    // side ranges [0, 0.2] and [0.8, 1]; both side means rescale to 0.5
    model.sub_models = [LinearModel::constant(0.5, 1), LinearModel::constant(0.5, 1)];
    let preds: Vec<f64> = ds.features.iter().map(|x| predict_hps(&model, x).unwrap()).collect();
    for (p, want) in preds.iter().zip([0.1, 0.1, 0.1, 0.9, 0.9, 0.9]) {
        assert!((p - want).abs() < 1e-15);
    }
    // SSE = 4 · 0.01 = 0.04, SST = 0.25 + 0.09 + 0.16 + 0.16 + 0.25 + 0.09 = 1
    assert!((r_squared(&preds, &t).unwrap() - 0.96).abs() < 1e-12);
}

#[test]
fn hps_cv_on_planted_data() {
    let ds = data(&piecewise(20, 8));
    let split = scan_thresholds(&ds, &default_grid(), 0.25).unwrap().best;
    let rep = evaluate_hps_cv(&ds, &split, [MethodSpec::Mlr, MethodSpec::Mlr], 5, 4, 1).unwrap();
    assert!(rep.combined.median.unwrap() >= 0.99);
    assert_eq!(rep.combined.scores.len(), 20);
    assert_eq!(rep.sides[0].scores.len(), 20);
}

#[test]
fn median_matches_sort_oracle() {
    let mut rng = Rng::new(6);
    for len in 1..40 {
        let v: Vec<f64> = (0..len).map(|_| rng.unit()).collect();
        let mut s = v.clone();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(median(&v), Some(s[(len - 1) / 2]));
    }
}

#[test]
fn partitions_balanced_up_to_ten_thousand() {
    for n in 5..=10_000 {
        let p = kfold_partition(n, 5, n as u64).unwrap();
        let sizes: Vec<usize> = p.iter().map(Vec::len).collect();
        let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        assert!(hi - lo <= 1);
        assert_eq!(sizes.iter().sum::<usize>(), n);
    }
}

proptest! {
    #[test]
    fn partition_is_disjoint_cover(n in 1usize..500, k in 1usize..20, seed in any::<u64>(), run in 0u64..5) {
        prop_assume!(k <= n);
        let p = kfold_partition_run(n, k, seed, run).unwrap();
        let mut all: Vec<usize> = p.concat();
        all.sort();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        let sizes: Vec<usize> = p.iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn r2_affine_invariant(seed in any::<u64>(), scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        let mut rng = Rng::new(seed);
        let t: Vec<f64> = (0..12).map(|_| rng.unit()).collect();
        let p: Vec<f64> = t.iter().map(|v| v + 0.2 * rng.normal()).collect();
        let map = |v: &[f64]| v.iter().map(|x| scale * x + shift).collect::<Vec<f64>>();
        let (a, b) = (r_squared(&p, &t).unwrap(), r_squared(&map(&p), &map(&t)).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }
}
