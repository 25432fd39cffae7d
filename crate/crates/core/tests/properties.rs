use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use spincollapse_core::{
    born_up, brute_force_oracle, constraint_residual, eigenpair, is_eigenstate, overlap,
    s_down, s_up, simulate, solve, spin_operator, Axis, EntropyBase, Mode, OracleQuery,
    OutcomeRule, PureState, SimConfig, SolverConfig, SpinOperator, SphereGrid, Vec3,
};

const TOL: f64 = 1e-12;

fn any_axis() -> impl Strategy<Value = Axis> {
    (-1.0f64..=1.0, 0.0..TAU).prop_map(|(z, phi)| Axis::new(z.acos(), phi).unwrap())
}

fn any_state() -> impl Strategy<Value = PureState> {
    (0.0f64..=1.0, 0.0..TAU).prop_map(|(rho, tau)| PureState::new(rho, tau).unwrap())
}

/// A (state, axis) pair that is not an eigenstate pair.
fn collapsing_pair() -> impl Strategy<Value = (PureState, Axis)> {
    (any_state(), any_axis()).prop_filter("eigenstate", |(s, a)| {
        let p = born_up(s, a);
        p > 1e-6 && p < 1.0 - 1e-6
    })
}

fn rotation(axis: usize, angle: f64) -> impl Fn(Vec3) -> Vec3 {
    let (s, c) = angle.sin_cos();
    move |v: Vec3| {
        let [x, y, z] = v.0;
        match axis {
            0 => Vec3::new(x, c * y - s * z, s * y + c * z),
            1 => Vec3::new(c * x + s * z, y, -s * x + c * z),
            _ => Vec3::new(c * x - s * y, s * x + c * y, z),
        }
    }
}

fn same_set(a: &[Axis], b: &[Axis], tol: f64) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| x.angle_to(y) <= tol))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn spin_operator_squares_to_identity(a in any_axis()) {
        let op = spin_operator(&a);
        prop_assert!(op.matmul(&op).max_abs_diff(&SpinOperator::identity()) <= TOL);
        prop_assert!(op.is_hermitian(TOL));
        prop_assert!(op.trace().norm() <= TOL);
        prop_assert!((op.determinant() + 1.0).norm() <= TOL);
    }

    #[test]
    fn eigen_relations(a in any_axis()) {
        let op = spin_operator(&a);
        let (up, down) = eigenpair(&a);
        let [u0, u1] = op.apply(&up);
        let [d0, d1] = op.apply(&down);
        prop_assert!((u0 - up.up_component()).norm().hypot((u1 - up.down_component()).norm()) <= TOL);
        prop_assert!((d0 + down.up_component()).norm().hypot((d1 + down.down_component()).norm()) <= TOL);
        prop_assert!(overlap(&up, &down).norm() <= TOL);
    }

    #[test]
    fn born_formula_matches_overlap(state in any_state(), a in any_axis()) {
        let (up, _) = eigenpair(&a);
        let direct = overlap(&up, &state.amplitudes()).norm_sqr();
        let p = born_up(&state, &a);
        prop_assert!((p - direct).abs() <= TOL);
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn born_geometric_form(state in any_state(), a in any_axis()) {
        let geometric = (1.0 + a.unit_vector().dot(state.bloch_vector())) / 2.0;
        prop_assert!((born_up(&state, &a) - geometric).abs() <= TOL);
    }

    #[test]
    fn antipodal_probabilities_are_complementary(state in any_state(), a in any_axis()) {
        prop_assert!((born_up(&state, &a) + born_up(&state, &a.antipode()) - 1.0).abs() <= TOL);
    }

    #[test]
    fn state_invariants(state in any_state()) {
        prop_assert!((state.amplitudes().norm_sqr() - 1.0).abs() <= TOL);
        prop_assert!((state.bloch_vector().norm() - 1.0).abs() <= TOL);
    }

    #[test]
    fn axis_invariants(t in -10.0f64..10.0, p in -20.0f64..20.0) {
        let a = Axis::new(t, p).unwrap();
        prop_assert!((0.0..=PI).contains(&a.theta()));
        prop_assert!((0.0..TAU).contains(&a.phi()));
        prop_assert!((a.unit_vector().norm() - 1.0).abs() <= TOL);
        let raw = Vec3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos());
        prop_assert!((a.unit_vector() - raw).norm() <= TOL);
    }

    #[test]
    fn overlaps_complete(ai in any_axis(), af in any_axis()) {
        let (up_i, down_i) = eigenpair(&ai);
        let (up_f, _) = eigenpair(&af);
        let total = overlap(&up_f, &up_i).norm_sqr() + overlap(&up_f, &down_i).norm_sqr();
        prop_assert!((total - 1.0).abs() <= TOL);
        prop_assert!((s_up(&ai, &af, EntropyBase::Nats) - s_down(&ai, &af, EntropyBase::Nats)).abs() <= TOL);
    }

    #[test]
    fn minimizers_satisfy_constraint((state, ai) in collapsing_pair()) {
        let cfg = SolverConfig::default();
        for mode in [Mode::Strict, Mode::Reflective] {
            let sol = solve(&state, &ai, mode, &cfg);
            prop_assert!(!sol.no_collapse);
            let p_i = born_up(&state, &ai);
            for m in &sol.minimizers {
                prop_assert!(constraint_residual(&state, &ai, m, cfg.base).abs() <= 1e-9);
                prop_assert!((sol.objective - s_up(&ai, m, cfg.base)).abs() <= 1e-9);
                let p = born_up(&state, m);
                prop_assert!((p - p_i).abs() <= 1e-9 || (p - (1.0 - p_i)).abs() <= 1e-9);
            }
            for w in sol.minimizers.windows(2) {
                prop_assert!(w[0].tie_break_cmp(&w[1], cfg.angle_tol).is_le());
            }
        }
    }

    #[test]
    fn strict_never_worse_than_reflective((state, ai) in collapsing_pair()) {
        let cfg = SolverConfig::default();
        let strict = solve(&state, &ai, Mode::Strict, &cfg);
        let reflective = solve(&state, &ai, Mode::Reflective, &cfg);
        prop_assert!(strict.objective <= reflective.objective);
    }

    #[test]
    fn extrema_lie_in_the_plane_of_m_and_n_i((state, ai) in collapsing_pair()) {
        let sol = solve(&state, &ai, Mode::Strict, &SolverConfig::default());
        let (m, n) = (state.bloch_vector(), ai.unit_vector());
        for e in &sol.extrema {
            prop_assert!(Vec3::triple(m, n, e.axis.unit_vector()).abs() <= 1e-9);
        }
    }

    #[test]
    fn rotational_covariance(
        (state, ai) in collapsing_pair(),
        which in 0usize..3,
        angle in 0.0..TAU,
    ) {
        let rot = rotation(which, angle);
        let cfg = SolverConfig::default();
        let rotated_state = PureState::from_bloch(rot(state.bloch_vector())).unwrap();
        let rotated_axis = Axis::from_vector(rot(ai.unit_vector())).unwrap();
        for mode in [Mode::Strict, Mode::Reflective] {
            let before = solve(&state, &ai, mode, &cfg);
            let after = solve(&rotated_state, &rotated_axis, mode, &cfg);
            let moved: Vec<Axis> = before
                .minimizers
                .iter()
                .map(|a| Axis::from_vector(rot(a.unit_vector())).unwrap())
                .collect();
            prop_assert!(same_set(&moved, &after.minimizers, 1e-9), "{moved:?} vs {:?}", after.minimizers);
            prop_assert!((before.objective - after.objective).abs() <= 1e-9);
        }
    }

    #[test]
    fn minimizers_do_not_depend_on_entropy_base((state, ai) in collapsing_pair()) {
        for mode in [Mode::Strict, Mode::Reflective] {
            let nats = solve(&state, &ai, mode, &SolverConfig::with_base(EntropyBase::Nats));
            let bits = solve(&state, &ai, mode, &SolverConfig::with_base(EntropyBase::Bits));
            prop_assert_eq!(nats.minimizers.len(), bits.minimizers.len());
            for (a, b) in nats.minimizers.iter().zip(&bits.minimizers) {
                prop_assert!(a.angle_to(b) <= 1e-9);
            }
        }
    }

    #[test]
    fn eigenstate_detection_matches_zero_entropy(state in any_state(), a in any_axis()) {
        let zero = spincollapse_core::s_i(&state, &a, EntropyBase::Nats) <= 1e-10;
        if is_eigenstate(&state, &a, 1e-12) {
            prop_assert!(zero);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_are_reproducible(
        (state, ai) in collapsing_pair(),
        seed in any::<u64>(),
        reflective in any::<bool>(),
    ) {
        let mode = if reflective { Mode::Reflective } else { Mode::Strict };
        let cfg = SimConfig::new(20, mode, OutcomeRule::Born { seed });
        let a = serde_json::to_string(&simulate(&state, &ai, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&simulate(&state, &ai, &cfg).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn strict_mode_is_absorbed_after_one_step((state, ai) in collapsing_pair(), seed in any::<u64>()) {
        let cfg = SimConfig::new(6, Mode::Strict, OutcomeRule::Born { seed });
        let traj = simulate(&state, &ai, &cfg).unwrap();
        prop_assert!(!traj[0].no_collapse);
        prop_assert!(traj[1..].iter().all(|s| s.no_collapse));
    }
}

/// Over 10³ random instances the unrestricted oracle never beats the strict
/// analytic objective by more than the entropy step of one grid cell.
#[test]
fn strict_objective_bounded_by_coarse_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let grid = SphereGrid::new(48, 96);
    // S_↑ one grid cell away from n_i: H((1 + cos δ)/2).
    let resolution = spincollapse_core::binary_entropy((1.0 + grid.resolution().cos()) / 2.0).unwrap();
    let query = OracleQuery::new(grid, 5e-2);
    let cfg = SolverConfig::default();
    let mut checked = 0;
    while checked < 1000 {
        let state = PureState::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..TAU)).unwrap();
        let ai = Axis::new(rng.gen_range(-1.0f64..=1.0).acos(), rng.gen_range(0.0..TAU)).unwrap();
        if is_eigenstate(&state, &ai, 1e-6) {
            continue;
        }
        let sol = solve(&state, &ai, Mode::Strict, &cfg);
        match brute_force_oracle(&state, &ai, &query) {
            Ok(res) => assert!(sol.objective <= res.objective + resolution, "{res:?}"),
            Err(spincollapse_core::Error::Infeasible { .. }) => {}
            Err(e) => panic!("{e}"),
        }
        checked += 1;
    }
}
