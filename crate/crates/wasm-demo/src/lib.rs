//! Browser bindings: shifted spectra, diffusion runs and coupling windows for
//! a hypergraph pasted as an edge list.
//!
//! Every exported function returns a flat `Float64Array`; the layouts are
//! documented per function. The `*_impl` functions hold the logic and are
//! usable natively.

use hypersync::analysis::{coupling_interval, structural_coupling_window};
use hypersync::dynamics::{step_discrete, sync_error, MapSpec, State};
use hypersync::hypergraph::Hypergraph;
use hypersync::io::{parse_edge_list, RunConfig};
use hypersync::matrix::SymMatrix;
use hypersync::operators::{build_lw, clique_laplacian};
use hypersync::spectra::{eig_sym, nonzero_extremes, ZERO_TOL};
use wasm_bindgen::prelude::*;

fn load(edge_list: &str) -> Result<Hypergraph, String> {
    parse_edge_list(edge_list).map(|p| p.hypergraph).map_err(|e| e.to_string())
}

fn operator(g: &Hypergraph, name: &str) -> Result<SymMatrix, String> {
    match name {
        "lw" => Ok(build_lw(g)),
        "clique" => Ok(clique_laplacian(g)),
        other => Err(format!("unknown operator `{other}`")),
    }
}

/// `[n, eig(I + εL_w)…, eig(I + εL)…]`, each block ascending.
pub fn shifted_spectra_impl(edge_list: &str, eps: f64) -> Result<Vec<f64>, String> {
    let g = load(edge_list)?;
    let mut out = vec![g.n_vertices() as f64];
    for m in [build_lw(&g), clique_laplacian(&g)] {
        let spec = eig_sym(&m.affine(1.0, eps)).map_err(|e| e.to_string())?;
        out.extend_from_slice(spec.eigenvalues());
    }
    Ok(out)
}

/// Sync error after each step of `x' = x + εMx`, starting with the initial
/// state; stops early once the error leaves `[1e-300, 1e150]`.
pub fn sync_series_impl(
    edge_list: &str,
    eps: f64,
    op: &str,
    steps: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let g = load(edge_list)?;
    let m = operator(&g, op)?;
    let mut x: State = RunConfig { seed, ..Default::default() }.initial_state(g.n_vertices());
    let mut out = Vec::with_capacity(steps + 1);
    out.push(sync_error(&x));
    for _ in 0..steps {
        x = match step_discrete(&x, &MapSpec::Identity, &MapSpec::Identity, eps, &m) {
            Ok(next) => next,
            Err(_) => break,
        };
        let e = sync_error(&x);
        out.push(e);
        if !(1e-300..=1e150).contains(&e) {
            break;
        }
    }
    Ok(out)
}

/// `[lower, upper, λ_min, λ_max, s_lower, s_upper]`: the eigenvalue coupling
/// interval of `L_w` for exponent `σ`, the nonzero `|λ|` extremes, and the
/// structural window (NaN unless the hypergraph is uniform). Disconnected
/// input is an error.
pub fn coupling_window_impl(edge_list: &str, sigma: f64) -> Result<Vec<f64>, String> {
    let g = load(edge_list)?;
    if !g.is_connected() {
        return Err("hypergraph is disconnected".into());
    }
    let spec = eig_sym(&build_lw(&g)).map_err(|e| e.to_string())?;
    let ext = nonzero_extremes(&spec, ZERO_TOL).map_err(|e| e.to_string())?;
    let iv = coupling_interval(sigma, ext.lambda_min_abs, ext.lambda_max_abs).map_err(|e| e.to_string())?;
    let (s_lo, s_hi) = match structural_coupling_window(&g, sigma) {
        Ok(w) => (w.lower_clamped, w.upper),
        Err(_) => (f64::NAN, f64::NAN),
    };
    Ok(vec![iv.lower, iv.upper, ext.lambda_min_abs, ext.lambda_max_abs, s_lo, s_hi])
}

#[wasm_bindgen]
pub fn shifted_spectra(edge_list: &str, eps: f64) -> Result<Vec<f64>, JsValue> {
    shifted_spectra_impl(edge_list, eps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sync_series(edge_list: &str, eps: f64, op: &str, steps: usize, seed: u64) -> Result<Vec<f64>, JsValue> {
    sync_series_impl(edge_list, eps, op, steps, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn coupling_window(edge_list: &str, sigma: f64) -> Result<Vec<f64>, JsValue> {
    coupling_window_impl(edge_list, sigma).map_err(|e| JsValue::from_str(&e))
}
