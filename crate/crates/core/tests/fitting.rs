use hps_core::linalg::{lasso_fit, lasso_fit_traced, lasso_objective, least_squares};
use hps_core::regression::{
    augment_quadratic, fit_alr, fit_lasso, fit_mlr, fit_rlr, predict_all, quadratic_count,
    reduce_descriptors, solve_alr, Descriptor,
};
use hps_core::DataSet;
use hps_testkit::search::{lasso_grid_k2, lasso_value, AlrProblem};
use hps_testkit::{r2, Rng};
use proptest::prelude::*;

fn data(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> DataSet {
    let k = rows[0].len();
    DataSet::new(
        (0..rows.len()).map(|i| format!("c{i}")).collect(),
        rows,
        targets,
        (0..k).map(|j| format!("d{j}")).collect(),
    )
    .unwrap()
}

fn random_rows(rng: &mut Rng, n: usize, k: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..k).map(|_| rng.unit()).collect()).collect()
}

fn train_r2(ds: &DataSet, model: &hps_core::LinearModel) -> f64 {
    r2(&predict_all(model, &ds.features).unwrap(), &ds.targets)
}

#[test]
fn least_squares_recovers_planted_plane() {
    let mut rng = Rng::new(3);
    let x = random_rows(&mut rng, 5, 3);
    let (w_true, b_true) = ([0.7, -1.3, 2.1], 0.45);
    let y: Vec<f64> = x.iter().map(|r| r.iter().zip(&w_true).map(|(a, c)| a * c).sum::<f64>() + b_true).collect();
    let (w, b) = least_squares(&x, &y).unwrap();
    for (got, want) in w.iter().zip(&w_true) {
        assert!((got - want).abs() < 1e-8, "{w:?}");
    }
    assert!((b - b_true).abs() < 1e-8);
    let m = fit_mlr(&data(x, y)).unwrap();
    assert!((m.hyperplane.b - b_true).abs() < 1e-8);
}

// 4×2 instance with λ = 0.1; the oracle is a nested grid refined down to 1e-8.
#[test]
fn lasso_matches_grid_search() {
    let x = vec![vec![0.0, 1.0], vec![0.5, 0.2], vec![1.0, 0.7], vec![0.3, 0.0]];
    let y = [0.1, 0.6, 0.9, 0.4];
    let (best, ..) = lasso_grid_k2(&x, &y, 0.1);
    let (w, b) = lasso_fit(&x, &y, 0.1).unwrap();
    let ours = lasso_value(&x, &y, &w, b, 0.1);
    assert!((ours - best).abs() <= 1e-4, "{ours} vs {best}");
    assert!((lasso_objective(&x, &y, &w, b, 0.1) - ours).abs() < 1e-15);
}

#[test]
fn lasso_without_penalty_is_least_squares() {
    let mut rng = Rng::new(8);
    let x = random_rows(&mut rng, 12, 3);
    let y: Vec<f64> = x.iter().map(|r| 0.3 * r[0] - 0.5 * r[1] + 0.2 * r[2] + 0.1 * rng.unit()).collect();
    let (wl, bl) = lasso_fit(&x, &y, 0.0).unwrap();
    let (ws, bs) = least_squares(&x, &y).unwrap();
    for (a, b) in wl.iter().zip(&ws) {
        assert!((a - b).abs() < 1e-6);
    }
    assert!((bl - bs).abs() < 1e-6);
    let m = fit_lasso(&data(x.clone(), y.clone()), 0.0).unwrap();
    assert_eq!(m.descriptors.len(), 3);
}

// the 6-point target x(1)² fixture: the LP optimum is below the objective at
// the least-squares line, and agrees with a grid oracle.
#[test]
fn alr_square_fixture() {
    let xs = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    let rows: Vec<Vec<f64>> = xs.iter().map(|&v| vec![v]).collect();
    let targets: Vec<f64> = xs.iter().map(|v| v * v).collect();
    let lambda = 0.01;
    let ds = data(rows.clone(), targets.clone());
    let sol = solve_alr(&ds, lambda).unwrap();
    let (w, b) = least_squares(&rows, &targets).unwrap();
    let prob = AlrProblem::new(&rows, &targets, lambda);
    let at_mlr = prob.value([1.0, 0.0, 0.0], &[[w[0], 0.0, 0.0]], b);
    assert!(sol.objective <= at_mlr + 1e-12, "{} vs {at_mlr}", sol.objective);
    let oracle = prob.minimize(1);
    assert!(sol.objective <= oracle + 1e-9);
    assert!(oracle <= sol.objective * 1.05 + 1e-9, "{} vs {oracle}", sol.objective);
}

#[test]
fn alr_identity_descriptor_fits_perfectly() {
    let xs = [0.0, 0.1, 0.35, 0.5, 0.9, 1.0];
    let ds = data(xs.iter().map(|&v| vec![v]).collect(), xs.to_vec());
    let m = fit_alr(&ds, 0.0).unwrap();
    assert!(train_r2(&ds, &m) >= 1.0 - 1e-6);
}

#[test]
fn quadratic_columns_in_unit_interval() {
    let mut rng = Rng::new(4);
    let ds = data(random_rows(&mut rng, 7, 4), (0..7).map(|i| i as f64 / 6.0).collect());
    let aug = augment_quadratic(&ds).unwrap();
    assert_eq!(aug.num_descriptors(), 4 + quadratic_count(4));
    assert!(aug.features.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn rlr_recovers_two_planted_quadratic_terms() {
    let mut rng = Rng::new(21);
    let rows = random_rows(&mut rng, 80, 4);
    let targets: Vec<f64> = rows.iter().map(|r| 0.7 * r[0] * r[2] + 0.3 * r[1] * (1.0 - r[3])).collect();
    let ds = data(rows, targets);
    let aug = augment_quadratic(&ds).unwrap();
    let tags = hps_core::regression::quadratic_descriptors(4);
    let picked: Vec<Descriptor> = reduce_descriptors(&aug, 2).unwrap().iter().map(|&c| tags[c]).collect();
    assert!(picked.contains(&Descriptor::Prod(0, 2)), "{picked:?}");
    assert!(picked.contains(&Descriptor::ProdCompl(1, 3)), "{picked:?}");
    let m = fit_rlr(&ds, 2).unwrap();
    assert!(train_r2(&ds, &m) > 1.0 - 1e-9);
}

#[test]
fn rlr_no_worse_than_mlr_on_linear_target() {
    let mut rng = Rng::new(5);
    let rows = random_rows(&mut rng, 30, 3);
    let targets: Vec<f64> = rows.iter().map(|r| 0.5 * r[0] + 0.2 * r[1] - 0.4 * r[2] + 0.05 * rng.unit()).collect();
    let ds = data(rows, targets);
    let mlr = train_r2(&ds, &fit_mlr(&ds).unwrap());
    for budget in [3, 3 + quadratic_count(3)] {
        let rlr = train_r2(&ds, &fit_rlr(&ds, budget).unwrap());
        assert!(rlr >= mlr - 1e-9, "budget {budget}: {rlr} < {mlr}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residual_orthogonal_to_columns(seed in any::<u64>(), n in 2usize..20, k in 1usize..6) {
        let mut rng = Rng::new(seed);
        let x = random_rows(&mut rng, n, k);
        let y: Vec<f64> = (0..n).map(|_| rng.range(-2.0, 2.0)).collect();
        let (w, b) = least_squares(&x, &y).unwrap();
        let r: Vec<f64> = x.iter().zip(&y).map(|(row, t)| t - row.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>() - b).collect();
        prop_assert!(r.iter().sum::<f64>().abs() < 1e-7);
        for j in 0..k {
            prop_assert!(x.iter().zip(&r).map(|(row, e)| row[j] * e).sum::<f64>().abs() < 1e-7);
        }
    }

    #[test]
    fn lasso_objective_never_increases(seed in any::<u64>(), lambda in 0.0f64..0.2) {
        let mut rng = Rng::new(seed);
        let x = random_rows(&mut rng, 10, 3);
        let y: Vec<f64> = (0..10).map(|_| rng.unit()).collect();
        let mut last = f64::INFINITY;
        let mut ok = true;
        lasso_fit_traced(&x, &y, lambda, |_, w, b| {
            let v = lasso_objective(&x, &y, w, b, lambda);
            ok &= v <= last + 1e-12;
            last = v;
        }).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn mlr_fits_training_data_at_least_as_well_as_lasso(seed in any::<u64>(), lambda in 1e-4f64..0.5) {
        let mut rng = Rng::new(seed);
        let rows = random_rows(&mut rng, 12, 3);
        let targets: Vec<f64> = rows.iter().map(|r| r[0] - 0.5 * r[1] + 0.3 * rng.unit()).collect();
        let ds = data(rows, targets);
        prop_assert!(train_r2(&ds, &fit_mlr(&ds).unwrap()) >= train_r2(&ds, &fit_lasso(&ds, lambda).unwrap()) - 1e-9);
    }

    #[test]
    fn alr_sign_rule_and_simplex(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let rows = random_rows(&mut rng, 8, 3);
        let targets: Vec<f64> = rows.iter().map(|r| r[0] - r[1] + 0.2 * rng.unit()).collect();
        let ds = data(rows, targets);
        let sol = solve_alr(&ds, 0.01).unwrap();
        prop_assert!((sol.c.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for ((w, pos), wd) in sol.recovered_weights().iter().zip(&sol.positive).zip(&sol.w) {
            if wd[0] <= 1e-12 {
                prop_assert_eq!(*w, 0.0);
            } else if *pos {
                prop_assert!(*w > 0.0);
            } else {
                prop_assert!(*w < 0.0);
            }
        }
    }

    #[test]
    fn augmentation_count_formula(k in 1usize..=50) {
        let ds = data(vec![vec![0.0; k], vec![1.0; k]], vec![0.0, 1.0]);
        let aug = augment_quadratic(&ds).unwrap();
        prop_assert_eq!(aug.num_descriptors() - k, (3 * k * k + k) / 2);
    }
}
