mod common;

use common::strategies::{connected, connected_uniform};
use hypersync::analysis::{
    continuous_global_check, diameter_bound, eigenvalue_interval_check, global_discrete, global_discrete_feqg,
    lyapunov_discrete_check, sigma_estimate, uniform_upper_bound_bm, NormSpec,
};
use hypersync::dynamics::{simulate_discrete, DiscreteConfig, MapSpec, State, Termination};
use hypersync::matrix::Matrix;
use hypersync::operators::{build_c, build_lw};
use hypersync::spectra::{eig_sym, operator_norm, ZERO_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bounded_map(max: f64) -> impl Strategy<Value = MapSpec> {
    prop_oneof![
        (0.05..max).prop_map(MapSpec::Sine),
        (0.05..max).prop_map(MapSpec::Cosine),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn global_discrete_guarantee_is_sound(
        g in connected(10, 6, 5),
        f in bounded_map(1.5),
        gm in bounded_map(0.8),
        frac in 0.05f64..0.9,
        seed in any::<u64>(),
    ) {
        let lw = build_lw(&g);
        let norm = operator_norm(&lw).unwrap();
        let (k_f, k_g) = (f.lipschitz_constant(), gm.lipschitz_constant());
        let eps = frac * (1.0 - k_g) / (k_f * norm);
        let check = global_discrete(k_f, k_g, eps, norm);
        prop_assert!(check.is_guaranteed());
        let mut cfg = DiscreteConfig::new(f, gm, eps);
        cfg.max_steps = 20_000;
        cfg.sample_every = cfg.max_steps;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let x0 = State::scalar((0..g.n_vertices()).map(|_| rng.random_range(-3.0..3.0)).collect());
            let traj = simulate_discrete(&x0, &cfg, &lw);
            prop_assert_eq!(traj.termination, Termination::Converged, "steps {}", traj.steps);
        }
    }
}

proptest! {
    #[test]
    fn scalar_lyapunov_matches_interval(
        g in connected(10, 6, 5),
        a in prop_oneof![-3.0f64..-0.05, 0.05f64..3.0],
        eps in 0.01f64..1.5,
    ) {
        let spec = eig_sym(&build_lw(&g)).unwrap();
        let scale = spec.max_abs();
        let nonzero: Vec<f64> = spec.eigenvalues().iter().copied().filter(|l| l.abs() > ZERO_TOL * scale).collect();
        let map = MapSpec::Linear(a);
        let sigma = sigma_estimate(&map, &map, &[1.0], &NormSpec::identity(1), 0, 10).unwrap();
        prop_assert!((sigma - a.abs().ln()).abs() < 1e-12);
        let interval = eigenvalue_interval_check(sigma, eps, spec.eigenvalues(), ZERO_TOL, None).unwrap();
        let j = Matrix::scalar(1, a);
        let lyap = lyapunov_discrete_check(&j, &j, eps, &nonzero, &Matrix::identity(1)).unwrap();
        prop_assert_eq!(interval.verdict, lyap.verdict);
        prop_assert_eq!(lyap.get("schur_agrees"), Some(1.0));
    }

    #[test]
    fn diameter_bound_holds(g in connected(14, 8, 6)) {
        let spec = eig_sym(&build_c(&g)).unwrap();
        let b = diameter_bound(&g, &spec).unwrap();
        prop_assert!(b.holds, "diam {} < bound {}", b.actual, b.bound);
    }

    #[test]
    fn bm_bound_holds_for_m_at_least_3(g in connected_uniform(3..=5, 5, 6)) {
        let b = uniform_upper_bound_bm(&g).unwrap();
        prop_assert!(b.holds, "b_m {} < {}", b.b_m, b.lambda_max_abs);
    }

    #[test]
    fn global_margin_flips_with_verdict(k_f in 0.01f64..3.0, k_g in 0.0f64..1.5, norm in 0.1f64..100.0) {
        let top = 3.0 / (k_f * norm);
        let reports: Vec<_> = (0..=200).map(|i| global_discrete(k_f, k_g, top * i as f64 / 200.0, norm)).collect();
        for r in &reports {
            prop_assert_eq!(r.is_guaranteed(), r.margin > 1e-12);
        }
        for w in reports.windows(2) {
            prop_assert!(w[1].margin < w[0].margin);
            prop_assert!(w[0].is_guaranteed() || !w[1].is_guaranteed());
        }
    }

    #[test]
    fn feqg_margin_flips_with_verdict(g in connected(8, 4, 4), eps in 0.01f64..1.0) {
        let lw = build_lw(&g);
        let reports: Vec<_> = (1..=100)
            .map(|i| global_discrete_feqg(0.05 * i as f64, eps, &lw).unwrap())
            .collect();
        for r in &reports {
            prop_assert_eq!(r.is_guaranteed(), r.margin > 1e-12);
        }
        for w in reports.windows(2) {
            prop_assert!(w[1].margin < w[0].margin);
            prop_assert!(w[0].is_guaranteed() || !w[1].is_guaranteed());
        }
    }

    #[test]
    fn interval_margin_flips_with_verdict(g in connected(10, 6, 5), sigma in -1.0f64..2.0) {
        let spec = eig_sym(&build_lw(&g)).unwrap();
        for i in 1..=100 {
            let eps = 0.02 * i as f64;
            let r = eigenvalue_interval_check(sigma, eps, spec.eigenvalues(), ZERO_TOL, None).unwrap();
            prop_assert_eq!(r.is_guaranteed(), r.margin >= -1e-12);
        }
    }

    #[test]
    fn lyapunov_margin_flips_with_verdict(g in connected(8, 4, 4), a in 0.1f64..2.0, b in -2.0f64..2.0) {
        let spec = eig_sym(&build_lw(&g)).unwrap();
        let (jg, jf) = (Matrix::scalar(1, a), Matrix::scalar(1, b));
        for i in 1..=50 {
            let eps = 0.02 * i as f64;
            let r = lyapunov_discrete_check(&jg, &jf, eps, spec.eigenvalues(), &Matrix::identity(1)).unwrap();
            if r.is_guaranteed() {
                prop_assert!(r.margin > 0.0);
            } else {
                prop_assert!(r.margin <= 1e-9 * (1.0 + (a.abs() + eps * b.abs() * spec.max_abs()).powi(2)));
            }
        }
    }

    #[test]
    fn continuous_margin_flips_with_verdict(g in connected(8, 4, 4)) {
        let lw = build_lw(&g);
        let reports: Vec<_> = (0..=100)
            .map(|i| continuous_global_check(&MapSpec::Linear(-1.0 + 0.02 * i as f64), 1, &lw).unwrap())
            .collect();
        for r in &reports {
            if r.is_guaranteed() {
                prop_assert!(r.margin > 0.0);
            } else {
                prop_assert!(r.margin <= 1e-10 * (1.0 + lw.norm_inf()));
            }
        }
        for w in reports.windows(2) {
            prop_assert!(w[1].margin < w[0].margin);
            prop_assert!(w[0].is_guaranteed() || !w[1].is_guaranteed());
        }
    }
}
