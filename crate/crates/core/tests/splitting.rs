use hps_core::dataset::{normalize, NormalizationRecord};
use hps_core::lp::{solve_lp, LpStatus};
use hps_core::regression::{predict, MethodSpec};
use hps_core::splitter::{
    build_split_lp, default_grid, find_hyperplane, model_from_json, model_to_json, predict_hps,
    scan_thresholds, side_of, split_by, train_hps, SplitError,
};
use hps_core::{DataSet, Hyperplane};
use hps_testkit::fixtures::{piecewise, separable, Planted};
use hps_testkit::lp::{Rel, SmallLp};
use hps_testkit::{r2, Rng};
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

fn mlr2() -> [MethodSpec; 2] {
    [MethodSpec::Mlr, MethodSpec::Mlr]
}

// 5-point line x = a at θ = 0.5; the threshold LP is solved by vertex
// enumeration with the same ±1e4 box.
#[test]
fn five_point_line_matches_vertex_oracle() {
    let a = [0.0, 0.25, 0.5, 0.75, 1.0];
    let ds = data(&Planted { rows: a.iter().map(|&v| vec![v]).collect(), targets: a.to_vec() });
    let lp = build_split_lp(&ds, 0.5).unwrap();
    let n = lp.num_vars;
    let mut lower = vec![0.0; n];
    let mut upper = vec![10.0; n];
    lower[0] = -1e4;
    lower[1] = -1e4;
    upper[0] = 1e4;
    upper[1] = 1e4;
    let small = SmallLp {
        objective: lp.objective.clone(),
        rows: lp
            .constraints
            .iter()
            .map(|c| {
                let rel = match c.relation {
                    hps_core::Relation::Le => Rel::Le,
                    hps_core::Relation::Ge => Rel::Ge,
                    hps_core::Relation::Eq => Rel::Eq,
                };
                (c.coeffs.clone(), rel, c.rhs)
            })
            .collect(),
        lower,
        upper,
    };
    let oracle = small.brute_force().unwrap();
    assert!(oracle.abs() < 1e-9);
    let s = find_hyperplane(&ds, 0.5).unwrap();
    assert!((s.lp_objective - oracle).abs() < 1e-9);
    assert_eq!(s.subset1, vec![0, 1, 2]);
    assert!(s.a_max_1 <= 0.5 && 0.5 < s.a_min_2);
}

#[test]
fn zero_hyperplane_bounds_the_objective() {
    let mut rng = Rng::new(9);
    let n = 30;
    let mut rows: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.unit(), rng.unit()]).collect();
    let mut t: Vec<f64> = (0..n).map(|_| rng.unit()).collect();
    hps_testkit::minmax(&mut rows, &mut t);
    let ds = data(&Planted { rows, targets: t.clone() });
    for theta in [0.2, 0.5, 0.8] {
        let lp = build_split_lp(&ds, theta).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        let bound: f64 = t.iter().map(|a| (a - theta) * (a - theta)).sum();
        assert!(sol.objective_value <= bound + 1e-9);
    }
}

#[test]
fn separable_fixture_split_and_scan() {
    let ds = data(&separable(200, 3, 17));
    let s = find_hyperplane(&ds, 0.3).unwrap();
    assert!(s.lp_objective < 1e-6, "objective {}", s.lp_objective);
    let expected: Vec<usize> = (0..ds.len()).filter(|&i| ds.targets[i] <= 0.3).collect();
    assert_eq!(s.subset1, expected);
    let scan = scan_thresholds(&ds, &default_grid(), 0.2).unwrap();
    assert_eq!(scan.best.theta, 0.3);
    assert!(scan.best.gap() <= 0.0);
}

#[test]
fn planted_piecewise_recovery() {
    let ds = data(&piecewise(20, 2));
    let scan = scan_thresholds(&ds, &default_grid(), 0.25).unwrap();
    let split = scan.best;
    let model = train_hps(&ds, &split, mlr2(), &NormalizationRecord::identity(3), 0).unwrap();
    for (j, idx) in [&split.subset1, &split.subset2].into_iter().enumerate() {
        let (lo, hi) = model.sub_ranges[j];
        let pred: Vec<f64> = idx.iter().map(|&i| predict(&model.sub_models[j], &ds.features[i]).unwrap()).collect();
        let t: Vec<f64> = idx.iter().map(|&i| (ds.targets[i] - lo) / (hi - lo)).collect();
        assert!(r2(&pred, &t) >= 0.999);
    }
    for (x, a) in ds.features.iter().zip(&ds.targets) {
        assert!((predict_hps(&model, x).unwrap() - a).abs() <= 1e-6);
    }
}

#[test]
fn constant_side_uses_constant_model() {
    // side 2 has a single observed value
    let rows = vec![vec![0.0], vec![0.2], vec![0.4], vec![0.8], vec![1.0]];
    let targets = vec![0.0, 0.3, 0.5, 1.0, 1.0];
    let ds = data(&Planted { rows, targets });
    let split = split_by(&ds, 0.6, Hyperplane::new(vec![1.0], 0.6), 0.0).unwrap();
    let model = train_hps(&ds, &split, mlr2(), &NormalizationRecord::identity(1), 0).unwrap();
    assert_eq!(model.warnings.len(), 1);
    assert_eq!(predict_hps(&model, &[0.9]).unwrap(), 1.0);
    assert_eq!(predict_hps(&model, &[1.0]).unwrap(), 1.0);
}

#[test]
fn tiny_side_rejected() {
    let rows = vec![vec![0.0], vec![0.5], vec![1.0]];
    let ds = data(&Planted { rows, targets: vec![0.0, 0.5, 1.0] });
    let split = split_by(&ds, 0.6, Hyperplane::new(vec![1.0], 0.6), 0.0).unwrap();
    let err = train_hps(&ds, &split, mlr2(), &NormalizationRecord::identity(1), 0).unwrap_err();
    assert!(matches!(err, SplitError::SubsetTooSmall { side: 2, size: 1 }));
}

#[test]
fn model_file_round_trip_on_random_vectors() {
    let raw = piecewise(15, 5);
    let mut ds = data(&raw);
    ds.targets.iter_mut().for_each(|a| *a = 3.0 + 40.0 * *a);
    let (norm, rec) = normalize(&ds).unwrap();
    let split = scan_thresholds(&norm, &default_grid(), 0.25).unwrap().best;
    let methods = [MethodSpec::Rlr { budget: 3 }, MethodSpec::Lasso { lambda: 1e-3 }];
    let model = train_hps(&norm, &split, methods, &rec, 0).unwrap();
    let back = model_from_json(&model_to_json(&model)).unwrap();
    let mut rng = Rng::new(77);
    for _ in 0..1000 {
        let x: Vec<f64> = (0..3).map(|_| rng.range(-0.2, 1.2)).collect();
        let (a, b) = (predict_hps(&model, &x).unwrap(), predict_hps(&back, &x).unwrap());
        assert!((a - b).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_compound_on_exactly_one_side(seed in any::<u64>(), theta in 0.1f64..0.9) {
        let mut rng = Rng::new(seed);
        let n = 25;
        let mut rows: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.unit(), rng.unit(), rng.unit()]).collect();
        let mut t: Vec<f64> = rows.iter().map(|r| r[0] * 0.6 + r[1] * r[2] * 0.4 + 0.1 * rng.unit()).collect();
        hps_testkit::minmax(&mut rows, &mut t);
        let ds = data(&Planted { rows, targets: t });
        if let Ok(s) = find_hyperplane(&ds, theta) {
            prop_assert_eq!(s.subset1.len() + s.subset2.len(), n);
            for i in 0..n {
                let on1 = s.subset1.contains(&i);
                prop_assert!(on1 != s.subset2.contains(&i));
                prop_assert_eq!(on1, side_of(&s.hyperplane, &ds.features[i]) == 0);
            }
            prop_assert_eq!(s.a_max_1, s.subset1.iter().map(|&i| ds.targets[i]).fold(f64::MIN, f64::max));
            prop_assert_eq!(s.a_min_2, s.subset2.iter().map(|&i| ds.targets[i]).fold(f64::MAX, f64::min));
        }
    }

    #[test]
    fn range_inversion_is_monotone(y1 in -1.0f64..2.0, y2 in -1.0f64..2.0) {
        let ds = data(&piecewise(6, 1));
        let split = split_by(&ds, 0.5, Hyperplane::new(vec![0.0, 1.0, 0.0], 0.5), 0.0).unwrap();
        let mut model = train_hps(&ds, &split, mlr2(), &NormalizationRecord::identity(3), 0).unwrap();
        let x = [0.3, 0.9, 0.1];
        let mut at = |y: f64| {
            model.sub_models[1] = hps_core::LinearModel::constant(y, 3);
            predict_hps(&model, &x).unwrap()
        };
        let (p1, p2) = (at(y1), at(y2));
        prop_assert_eq!(y1 <= y2, p1 <= p2);
    }
}
