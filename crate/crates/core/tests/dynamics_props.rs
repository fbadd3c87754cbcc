mod common;

use common::strategies::{connected, with_vector};
use hypersync::dynamics::{
    step_continuous_rk4, step_discrete, sync_error, MapSpec, State,
};
use hypersync::hypergraph::Hypergraph;
use hypersync::operators::{build_lw, PointwiseOperator};
use hypersync::spectra::operator_norm;
use proptest::prelude::*;

fn deviation(x: &[f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
}

fn map() -> impl Strategy<Value = MapSpec> {
    prop_oneof![
        (0.1f64..2.0).prop_map(MapSpec::Sine),
        (0.1f64..2.0).prop_map(MapSpec::Cosine),
        (0.1f64..1.0).prop_map(MapSpec::ExpSin),
        (0.5f64..4.0).prop_map(MapSpec::Logistic),
        Just(MapSpec::Identity),
    ]
}

proptest! {
    #[test]
    fn discrete_diffusion_conserves_sum((g, x) in with_vector(connected(15, 8, 6), 5.0), frac in 0.05f64..0.95) {
        let lw = build_lw(&g);
        let eps = frac * 2.0 / operator_norm(&lw).unwrap();
        let mut s = State::scalar(x);
        let total = s.sum()[0];
        for _ in 0..50 {
            let next = step_discrete(&s, &MapSpec::Identity, &MapSpec::Identity, eps, &lw).unwrap();
            let scale = next.data().iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!((next.sum()[0] - s.sum()[0]).abs() <= 1e-9 * scale);
            s = next;
        }
        prop_assert!((s.sum()[0] - total).abs() <= 50.0 * 1e-9 * (total.abs() + 5.0 * g.n_vertices() as f64));
    }

    #[test]
    fn continuous_diffusion_conserves_sum((g, x) in with_vector(connected(15, 8, 6), 5.0)) {
        let lw = build_lw(&g);
        let dt = 0.5 / operator_norm(&lw).unwrap();
        let mut s = State::scalar(x);
        for _ in 0..50 {
            let next = step_continuous_rk4(&s, &MapSpec::Zero, &MapSpec::Identity, &lw, dt).unwrap();
            let scale = next.data().iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!((next.sum()[0] - s.sum()[0]).abs() <= 1e-9 * scale);
            s = next;
        }
    }

    #[test]
    fn sync_manifold_is_invariant(
        g in connected(15, 8, 6),
        f in map(),
        gm in map(),
        eps in 0.0f64..2.0,
        s0 in prop::collection::vec(0.05f64..0.95, 1..=3),
    ) {
        let op = PointwiseOperator::new(&g);
        let mut x = State::synchronized(g.n_vertices(), &s0);
        for _ in 0..100 {
            x = step_discrete(&x, &f, &gm, eps, &op).unwrap();
            prop_assert_eq!(sync_error(&x), 0.0);
        }
        let mut y = State::synchronized(g.n_vertices(), &s0);
        for _ in 0..50 {
            y = step_continuous_rk4(&y, &f, &gm, &op, 0.01).unwrap();
            prop_assert_eq!(sync_error(&y), 0.0);
        }
    }

    #[test]
    fn diffusion_contracts_deviation((g, x) in with_vector(connected(15, 8, 6), 5.0), frac in 0.01f64..0.99) {
        let lw = build_lw(&g);
        let eps = frac * 2.0 / operator_norm(&lw).unwrap();
        let mut s = State::scalar(x);
        let mut prev = deviation(s.data());
        for _ in 0..100 {
            s = step_discrete(&s, &MapSpec::Identity, &MapSpec::Identity, eps, &lw).unwrap();
            let d = deviation(s.data());
            prop_assert!(d <= prev * (1.0 + 1e-12) + 1e-15, "{} after {}", d, prev);
            prev = d;
        }
    }

    #[test]
    fn diffusion_contracts_sync_error_when_stochastic((g, x) in with_vector(connected(15, 8, 6), 5.0), frac in 0.01f64..1.0) {
        // I + εL_w is entrywise non-negative, hence an averaging operator
        let lw = build_lw(&g);
        let diag = (0..g.n_vertices()).map(|u| lw.get(u, u).abs()).fold(0.0, f64::max);
        let eps = frac / diag;
        let mut s = State::scalar(x);
        let mut prev = sync_error(&s);
        for _ in 0..100 {
            s = step_discrete(&s, &MapSpec::Identity, &MapSpec::Identity, eps, &lw).unwrap();
            let e = sync_error(&s);
            prop_assert!(e <= prev * (1.0 + 1e-12) + 1e-15, "{} after {}", e, prev);
            prev = e;
        }
    }

    #[test]
    fn translation_equivariance(
        (g, x) in with_vector(connected(12, 6, 6), 2.0),
        a in -1.2f64..1.2,
        b in -1.2f64..1.2,
        c in -5.0f64..5.0,
        eps in 0.0f64..0.3,
    ) {
        let lw = build_lw(&g);
        let (f, gm) = (MapSpec::Linear(b), MapSpec::Linear(a));
        let mut base = State::scalar(x.clone());
        let mut moved = State::scalar(x.iter().map(|v| v + c).collect());
        let mut shift = c;
        for _ in 0..30 {
            base = step_discrete(&base, &f, &gm, eps, &lw).unwrap();
            moved = step_discrete(&moved, &f, &gm, eps, &lw).unwrap();
            shift *= a;
            let scale = base.max_abs().max(moved.max_abs()).max(1.0);
            for (p, q) in base.data().iter().zip(moved.data()) {
                prop_assert!((q - p - shift).abs() <= 1e-9 * scale);
            }
        }
    }
}

#[test]
fn sync_error_can_grow_below_the_stability_limit() {
    // path on four vertices, |λ_max| = 2 + √2, so 2/|λ_max| ≈ 0.586
    let g = Hypergraph::from_edges(4, &[&[0, 1], &[1, 2], &[2, 3]]).unwrap();
    let lw = build_lw(&g);
    let eps = 0.55;
    assert!(eps < 2.0 / operator_norm(&lw).unwrap());
    let x = State::scalar(vec![-1.0, 1.0, -1.0, 1.0]);
    let y = step_discrete(&x, &MapSpec::Identity, &MapSpec::Identity, eps, &lw).unwrap();
    assert!((sync_error(&x) - 1.0).abs() < 1e-15);
    assert!((sync_error(&y) - 1.2).abs() < 1e-12);
    assert!(deviation(y.data()) < deviation(x.data()));
}
