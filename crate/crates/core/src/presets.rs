//! Named end-to-end scenarios with deterministic `key=value` reports.
//!
//! Each preset is a pure function of its seed, which only drives the initial
//! states (and the synthetic instance for the Lipschitz presets).

use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis::{self, AnalysisError};
use crate::dynamics::{simulate_discrete, Coupling, DiscreteConfig, MapSpec, State, Termination};
use crate::hypergraph::Hypergraph;
use crate::io::{generate_connected, IoError, RunConfig};
use crate::matrix::SymMatrix;
use crate::operators::{build_lw, clique_laplacian};
use crate::spectra::{eig_sym, operator_norm, SpectraError, ZERO_TOL};

pub const PRESET_NAMES: [&str; 4] = ["triangle-vs-clique", "eight-vertex", "lipschitz-sine", "expsin"];

/// `‖L_w‖` of the reference interaction network the Lipschitz presets
/// are scaled to.
pub const REFERENCE_LW_NORM: f64 = 87.6182;

/// Budget for the nonlinear presets.
const MAP_STEPS: usize = 3_000;

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("unknown preset `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Io(#[from] IoError),
}

/// Ordered `key=value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn uniform_state(n: usize, seed: u64) -> State {
    RunConfig { seed, ..Default::default() }.initial_state(n)
}

/// The triangle as a single 3-edge.
pub fn triangle() -> Hypergraph {
    Hypergraph::from_edges(3, &[&[0, 1, 2]]).expect("valid")
}

/// Edges {v1..v4}, {v2,v5,v6}, {v3,v7,v8}, zero-indexed.
pub fn eight_vertex() -> Hypergraph {
    Hypergraph::from_edges(8, &[&[0, 1, 2, 3], &[1, 4, 5], &[2, 6, 7]])
        .expect("valid")
        .with_labels((1..=8).map(|i| format!("v{i}")).collect())
        .expect("distinct")
}

/// Runs `x' = x + ε M x` and records the spectrum of `I + εM`, the
/// eigenvalue-interval verdict (σ = 0 for the identity map) and the outcome.
fn diffusion_scenario(
    report: &mut Report,
    name: &str,
    operator: &str,
    m: &SymMatrix,
    eps: f64,
    x0: &State,
    max_steps: usize,
) -> Result<Termination, PresetError> {
    let shifted = eig_sym(&m.affine(1.0, eps))?;
    let spec = eig_sym(m)?;
    let check = analysis::eigenvalue_interval_check(0.0, eps, spec.eigenvalues(), ZERO_TOL, None)?;
    let mut cfg = DiscreteConfig::diffusion(eps);
    cfg.max_steps = max_steps;
    cfg.sample_every = max_steps;
    let traj = simulate_discrete(x0, &cfg, m);
    report.push(format!("{name}.operator"), operator);
    report.push(format!("{name}.epsilon"), eps);
    report.push(format!("{name}.shifted_eigenvalues"), join(shifted.eigenvalues()));
    report.push(format!("{name}.criterion"), check.verdict.as_str());
    report.push(format!("{name}.termination"), traj.termination);
    report.push(format!("{name}.steps"), traj.steps);
    report.push(format!("{name}.final_sync_error"), traj.final_sync_error());
    Ok(traj.termination)
}

pub fn triangle_vs_clique(seed: u64) -> Result<Report, PresetError> {
    let g = triangle();
    let x0 = uniform_state(3, seed);
    let mut r = Report::default();
    r.push("preset", "triangle-vs-clique");
    r.push("seed", seed);
    r.push("initial_state", join(x0.data()));
    diffusion_scenario(&mut r, "disH", "lw", &build_lw(&g), 1.0, &x0, 200)?;
    diffusion_scenario(&mut r, "disL", "clique", &clique_laplacian(&g), 1.0, &x0, 200)?;
    Ok(r)
}

pub fn eight_vertex_preset(seed: u64) -> Result<Report, PresetError> {
    let g = eight_vertex();
    let x0 = uniform_state(8, seed);
    let mut r = Report::default();
    r.push("preset", "eight-vertex");
    r.push("seed", seed);
    r.push("initial_state", join(x0.data()));
    diffusion_scenario(&mut r, "disC2", "lw", &build_lw(&g), 0.75, &x0, 10_000)?;
    diffusion_scenario(&mut r, "disL2", "clique", &clique_laplacian(&g), 0.75, &x0, 10_000)?;
    Ok(r)
}

/// Connected random hypergraph (120 vertices, 100 edges of size 2 to 6)
/// with weights rescaled so that `‖L_w‖` equals `target_norm`.
pub fn scaled_synthetic(seed: u64, target_norm: f64) -> Result<(Hypergraph, SymMatrix), PresetError> {
    let g = generate_connected(120, 100, 2, 6, seed)?;
    let norm = operator_norm(&build_lw(&g))?;
    let g = g.scaled(target_norm / norm);
    let lw = build_lw(&g);
    Ok((g, lw))
}

fn map_scenario(
    report: &mut Report,
    name: &str,
    f: MapSpec,
    g: MapSpec,
    eps: f64,
    x0: &State,
    l: &dyn Coupling,
) -> Termination {
    let mut cfg = DiscreteConfig::new(f.clone(), g.clone(), eps);
    cfg.max_steps = MAP_STEPS;
    cfg.sample_every = MAP_STEPS;
    let traj = simulate_discrete(x0, &cfg, l);
    report.push(format!("{name}.f"), f);
    report.push(format!("{name}.g"), g);
    report.push(format!("{name}.termination"), traj.termination);
    report.push(format!("{name}.steps"), traj.steps);
    report.push(format!("{name}.final_sync_error"), traj.final_sync_error());
    traj.termination
}

/// `f̄(x) = q sin(−x)`, `ḡ(x) = p cos(−x)`, `ε = 1/88`, checked against
/// `k_g + ε‖L_w‖k_f < 1` with the reference norm.
pub fn lipschitz_sine(seed: u64) -> Result<Report, PresetError> {
    let eps = 1.0 / 88.0;
    let (g, lw) = scaled_synthetic(seed, REFERENCE_LW_NORM)?;
    let x0 = uniform_state(g.n_vertices(), seed);
    let mut r = Report::default();
    r.push("preset", "lipschitz-sine");
    r.push("seed", seed);
    r.push("vertices", g.n_vertices());
    r.push("edges", g.n_edges());
    r.push("lw_norm", operator_norm(&lw)?);
    r.push("epsilon", eps);
    for (name, p, q) in [("sync", 0.4, 0.5), ("async", 1.0, 1.53), ("sync_ne", 1.0, 1.52)] {
        let (f, gm) = (MapSpec::Sine(q), MapSpec::Cosine(p));
        let check = analysis::global_discrete(f.lipschitz_constant(), gm.lipschitz_constant(), eps, REFERENCE_LW_NORM);
        r.push(format!("{name}.p"), p);
        r.push(format!("{name}.q"), q);
        r.push(format!("{name}.value"), check.get("value").unwrap_or(f64::NAN));
        r.push(format!("{name}.criterion"), check.verdict.as_str());
        map_scenario(&mut r, name, f, gm, eps, &x0, &lw);
    }
    Ok(r)
}

/// `f̄ = ḡ = q e^{sin x}`, `ε = 1/45`, checked against `‖I + εL_w‖ < 1/k_f`.
pub fn expsin(seed: u64) -> Result<Report, PresetError> {
    let eps = 1.0 / 45.0;
    let (g, lw) = scaled_synthetic(seed, REFERENCE_LW_NORM)?;
    let x0 = uniform_state(g.n_vertices(), seed);
    let mut r = Report::default();
    r.push("preset", "expsin");
    r.push("seed", seed);
    r.push("vertices", g.n_vertices());
    r.push("epsilon", eps);
    r.push("shifted_norm", operator_norm(&lw.affine(1.0, eps))?);
    r.push("slope_bound", crate::dynamics::expsin_slope_bound());
    for (name, d) in [("q2_8", 2.8), ("q1_47", 1.47), ("q1_15", 1.15), ("q1_2", 1.2)] {
        let m = MapSpec::ExpSin(1.0 / d);
        let check = analysis::global_discrete_feqg(m.lipschitz_constant(), eps, &lw)?;
        r.push(format!("{name}.q"), 1.0 / d);
        r.push(format!("{name}.k_f"), m.lipschitz_constant());
        r.push(format!("{name}.criterion"), check.verdict.as_str());
        map_scenario(&mut r, name, m.clone(), m, eps, &x0, &lw);
    }
    Ok(r)
}

pub fn run_preset(name: &str, seed: u64) -> Result<Report, PresetError> {
    match name {
        "triangle-vs-clique" => triangle_vs_clique(seed),
        "eight-vertex" => eight_vertex_preset(seed),
        "lipschitz-sine" => lipschitz_sine(seed),
        "expsin" => expsin(seed),
        other => Err(PresetError::Unknown(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffusion_presets() {
        let r = triangle_vs_clique(0).unwrap();
        assert_eq!(r.get("disH.termination"), Some("converged"));
        assert_eq!(r.get("disL.termination"), Some("diverged"));
        assert_eq!(r.get("disH.criterion"), Some("guaranteed"));
        assert_eq!(r.get("disL.criterion"), Some("not_guaranteed"));

        let r = eight_vertex_preset(0).unwrap();
        assert_eq!(r.get("disC2.termination"), Some("converged"));
        assert_ne!(r.get("disL2.termination"), Some("converged"));
        assert_eq!(r.get("disL2.criterion"), Some("not_guaranteed"));
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(
            triangle_vs_clique(9).unwrap().to_key_value(),
            triangle_vs_clique(9).unwrap().to_key_value()
        );
        assert!(matches!(run_preset("nope", 0), Err(PresetError::Unknown(_))));
    }
}
