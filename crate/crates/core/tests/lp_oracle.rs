use hps_core::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use hps_testkit::lp::{random_lp, Rel, SmallLp};
use hps_testkit::Rng;
use proptest::prelude::*;

fn to_program(s: &SmallLp) -> LinearProgram {
    let mut lp = LinearProgram::with_objective(s.objective.clone());
    for (j, (l, u)) in s.lower.iter().zip(&s.upper).enumerate() {
        lp.set_bounds(j, *l, *u);
    }
    for (a, rel, rhs) in &s.rows {
        let r = match rel {
            Rel::Le => Relation::Le,
            Rel::Ge => Relation::Ge,
            Rel::Eq => Relation::Eq,
        };
        lp.add_constraint(a.clone(), r, *rhs);
    }
    lp
}

#[test]
fn matches_vertex_enumeration() {
    let mut rng = Rng::new(0x5eed);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..400 {
        let small = random_lp(&mut rng);
        let sol = solve_lp(&to_program(&small)).unwrap();
        match small.brute_force() {
            Some(best) => {
                assert_eq!(sol.status, LpStatus::Optimal, "case {case}: {small:?}");
                assert!((sol.objective_value - best).abs() <= 1e-6, "case {case}: {} vs {best}", sol.objective_value);
                assert!(small.feasible(&sol.values, 1e-7));
                optimal += 1;
            }
            None => {
                assert_eq!(sol.status, LpStatus::Infeasible, "case {case}: {small:?}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 300 && infeasible > 0, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn deterministic_for_fixed_instance() {
    let mut rng = Rng::new(11);
    for _ in 0..20 {
        let lp = to_program(&random_lp(&mut rng));
        assert_eq!(solve_lp(&lp).unwrap(), solve_lp(&lp).unwrap());
    }
}

#[test]
fn mismatched_row_is_malformed() {
    let mut lp = LinearProgram::new(2);
    lp.add_constraint(vec![1.0], Relation::Le, 1.0);
    assert!(solve_lp(&lp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn optimum_is_locally_optimal(seed in any::<u64>()) {
        let small = random_lp(&mut Rng::new(seed));
        let lp = to_program(&small);
        let sol = solve_lp(&lp).unwrap();
        if sol.status == LpStatus::Optimal {
            let obj = |z: &[f64]| lp.objective.iter().zip(z).map(|(c, v)| c * v).sum::<f64>();
            prop_assert!((obj(&sol.values) - sol.objective_value).abs() <= 1e-7);
            prop_assert!(lp.max_violation(&sol.values) <= 1e-7);
            for j in 0..lp.num_vars {
                for step in [1e-3, -1e-3] {
                    let mut z = sol.values.clone();
                    z[j] += step;
                    if small.feasible(&z, 1e-9) {
                        prop_assert!(obj(&z) >= sol.objective_value - 1e-6);
                    }
                }
            }
        }
    }
}
