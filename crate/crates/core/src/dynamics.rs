//! Coupled dynamics on a hypergraph.
//!
//! Discrete time: `x(n+1) = g(x(n)) + ε L_w f(x(n))`.
//! Continuous time: `ẋ = f(x) + L_w g(x)`, integrated with fixed-step RK4.
//!
//! States are `n × k` row-major: row `u` is the `k`-dimensional state of
//! vertex `u`. Vertex maps act componentwise unless they are a
//! [`MapSpec::Matrix`], which acts on the row vector as `x ↦ x·A`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::{Matrix, SymMatrix};
use crate::operators::PointwiseOperator;

pub const DEFAULT_CONV_TOL: f64 = 1e-9;
pub const DEFAULT_DIV_TOL: f64 = 1e12;
pub const DEFAULT_MAX_STEPS: usize = 100_000;
pub const DEFAULT_DT: f64 = 1e-2;

/// `max_x |cos x · e^{sin x}|`, attained where `sin x = (√5 − 1)/2`.
pub fn expsin_slope_bound() -> f64 {
    let s = (5f64.sqrt() - 1.0) / 2.0;
    (1.0 - s * s).sqrt() * s.exp()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("state became non-finite")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid map specification `{0}`")]
    InvalidMap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// A vertex-local map `ℝ^k → ℝ^k`.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Identity,
    Zero,
    /// `x ↦ a·x`
    Linear(f64),
    /// `x ↦ x·A` for a `k × k` matrix `A`.
    Matrix(Matrix),
    /// `x ↦ q·sin(−x)`
    Sine(f64),
    /// `x ↦ p·cos(−x)`
    Cosine(f64),
    /// `x ↦ q·e^{sin x}`
    ExpSin(f64),
    /// `x ↦ r·x·(1 − x)`
    Logistic(f64),
}

impl MapSpec {
    fn scalar(&self, x: f64) -> f64 {
        match *self {
            MapSpec::Identity => x,
            MapSpec::Zero => 0.0,
            MapSpec::Linear(a) => a * x,
            MapSpec::Sine(q) => q * (-x).sin(),
            MapSpec::Cosine(p) => p * (-x).cos(),
            MapSpec::ExpSin(q) => q * x.sin().exp(),
            MapSpec::Logistic(r) => r * x * (1.0 - x),
            MapSpec::Matrix(_) => unreachable!("matrix maps are not scalar"),
        }
    }

    /// Derivative of the scalar map.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            MapSpec::Identity => 1.0,
            MapSpec::Zero => 0.0,
            MapSpec::Linear(a) => a,
            MapSpec::Sine(q) => -q * x.cos(),
            MapSpec::Cosine(p) => -p * x.sin(),
            MapSpec::ExpSin(q) => q * x.cos() * x.sin().exp(),
            MapSpec::Logistic(r) => r * (1.0 - 2.0 * x),
            MapSpec::Matrix(ref a) => {
                assert_eq!(a.rows(), 1, "derivative() needs a 1x1 matrix map");
                a.get(0, 0)
            }
        }
    }

    /// Applies the map to one vertex state.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        match self {
            MapSpec::Matrix(a) => out.copy_from_slice(&a.left_mul_vec(x)),
            _ => {
                for (o, &v) in out.iter_mut().zip(x) {
                    *o = self.scalar(v);
                }
            }
        }
    }

    /// Jacobian at `s` in the row-vector convention `f(s + e) ≈ f(s) + e·J`.
    pub fn jacobian(&self, s: &[f64]) -> Matrix {
        match self {
            MapSpec::Matrix(a) => a.clone(),
            _ => Matrix::diagonal(&s.iter().map(|&v| self.derivative(v)).collect::<Vec<_>>()),
        }
    }

    /// Global Lipschitz constant (Euclidean). For the logistic map the bound
    /// holds on its invariant interval `[0, 1]` only.
    pub fn lipschitz_constant(&self) -> f64 {
        match self {
            MapSpec::Identity => 1.0,
            MapSpec::Zero => 0.0,
            MapSpec::Linear(a) => a.abs(),
            MapSpec::Sine(q) => q.abs(),
            MapSpec::Cosine(p) => p.abs(),
            MapSpec::ExpSin(q) => q.abs() * expsin_slope_bound(),
            MapSpec::Logistic(r) => r.abs(),
            MapSpec::Matrix(a) => {
                // spectral norm = sqrt(λ_max(AᵀA))
                let ata = a.transpose().mul(a).sym_part();
                crate::spectra::max_eigenvalue(&ata).map(|v| v.max(0.0).sqrt()).unwrap_or(f64::INFINITY)
            }
        }
    }

    /// One-sided slope bound `sup f̄′` used by the continuous global criteria.
    /// Matrix maps return their symmetric part.
    pub fn slope_bound(&self, k: usize) -> Matrix {
        let s = match self {
            MapSpec::Identity => 1.0,
            MapSpec::Zero => 0.0,
            MapSpec::Linear(a) => *a,
            MapSpec::Sine(q) | MapSpec::Cosine(q) => q.abs(),
            MapSpec::ExpSin(q) => q.abs() * expsin_slope_bound(),
            MapSpec::Logistic(r) => r.abs(),
            MapSpec::Matrix(a) => return a.sym_part().to_matrix(),
        };
        Matrix::scalar(k, s)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, MapSpec::Identity)
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Identity => write!(f, "identity"),
            MapSpec::Zero => write!(f, "zero"),
            MapSpec::Linear(a) => write!(f, "linear:{a}"),
            MapSpec::Sine(q) => write!(f, "sine:{q}"),
            MapSpec::Cosine(p) => write!(f, "cosine:{p}"),
            MapSpec::ExpSin(q) => write!(f, "expsin:{q}"),
            MapSpec::Logistic(r) => write!(f, "logistic:{r}"),
            MapSpec::Matrix(a) => {
                write!(f, "matrix:{}:", a.rows())?;
                let parts: Vec<String> = a.as_slice().iter().map(|v| v.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for MapSpec {
    type Err = DynamicsError;

    /// `identity`, `zero`, `linear:a`, `sine:q`, `cosine:p`, `expsin:q`,
    /// `logistic:r`, or `matrix:k:a11,a12,...` (row-major).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DynamicsError::InvalidMap(s.to_string());
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r.trim())),
            None => (s.trim(), None),
        };
        let param = || -> Result<f64, DynamicsError> {
            let v: f64 = rest.ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if v.is_finite() { Ok(v) } else { Err(bad()) }
        };
        Ok(match kind {
            "identity" if rest.is_none() => MapSpec::Identity,
            "zero" if rest.is_none() => MapSpec::Zero,
            "linear" => MapSpec::Linear(param()?),
            "sine" => MapSpec::Sine(param()?),
            "cosine" => MapSpec::Cosine(param()?),
            "expsin" => MapSpec::ExpSin(param()?),
            "logistic" => MapSpec::Logistic(param()?),
            "matrix" => {
                let (k, vals) = rest.and_then(|r| r.split_once(':')).ok_or_else(bad)?;
                let k: usize = k.parse().map_err(|_| bad())?;
                let vals: Vec<f64> = vals
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                MapSpec::Matrix(Matrix::from_row_major(k, k, vals).map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        })
    }
}

/// Linear operator coupling the vertices (one scalar per vertex).
pub trait Coupling {
    fn dim(&self) -> usize;
    fn apply_into(&self, x: &[f64], out: &mut [f64]);
}

impl Coupling for SymMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.mul_vec_into(x, out);
    }
}

impl Coupling for PointwiseOperator {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        PointwiseOperator::apply_into(self, x, out);
    }
}

/// Per-vertex `k`-dimensional network state at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    n: usize,
    k: usize,
    data: Vec<f64>,
    time: f64,
}

impl State {
    pub fn new(n: usize, k: usize, data: Vec<f64>) -> Result<Self, DynamicsError> {
        if data.len() != n * k {
            return Err(DynamicsError::DimensionMismatch { expected: n * k, got: data.len() });
        }
        Ok(Self { n, k, data, time: 0.0 })
    }

    pub fn scalar(values: Vec<f64>) -> Self {
        Self { n: values.len(), k: 1, data: values, time: 0.0 }
    }

    /// Every vertex set to `s`.
    pub fn synchronized(n: usize, s: &[f64]) -> Self {
        let k = s.len();
        let data = (0..n).flat_map(|_| s.iter().copied()).collect();
        Self { n, k, data, time: 0.0 }
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn vertex(&self, u: usize) -> &[f64] {
        &self.data[u * self.k..(u + 1) * self.k]
    }

    /// Column `j`: component `j` of every vertex.
    pub fn component(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|u| self.data[u * self.k + j]).collect()
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.k];
        for u in 0..self.n {
            for (mj, v) in m.iter_mut().zip(self.vertex(u)) {
                *mj += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= self.n as f64);
        m
    }

    pub fn sum(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.mean().into_iter().map(|v| v * n).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn map(&self, f: &MapSpec) -> Vec<f64> {
        let mut out = vec![0.0; self.data.len()];
        for u in 0..self.n {
            f.apply(self.vertex(u), &mut out[u * self.k..(u + 1) * self.k]);
        }
        out
    }
}

/// Applies the coupling columnwise to an `n × k` buffer.
fn couple(l: &dyn Coupling, n: usize, k: usize, x: &[f64]) -> Vec<f64> {
    if k == 1 {
        let mut out = vec![0.0; n];
        l.apply_into(x, &mut out);
        return out;
    }
    let mut out = vec![0.0; n * k];
    let mut col = vec![0.0; n];
    let mut res = vec![0.0; n];
    for j in 0..k {
        for u in 0..n {
            col[u] = x[u * k + j];
        }
        l.apply_into(&col, &mut res);
        for u in 0..n {
            out[u * k + j] = res[u];
        }
    }
    out
}

/// `max_u ‖x(u) − x̄‖₂`; zero exactly on the synchronization manifold.
pub fn sync_error(state: &State) -> f64 {
    if state.n == 0 {
        return 0.0;
    }
    // x̄ − x(0) from offsets, so identical vertices give exact zeros
    let k = state.k;
    let first = state.vertex(0);
    let mut offset = vec![0.0; k];
    for u in 0..state.n {
        for ((o, v), f) in offset.iter_mut().zip(state.vertex(u)).zip(first) {
            *o += v - f;
        }
    }
    offset.iter_mut().for_each(|o| *o /= state.n as f64);
    (0..state.n)
        .map(|u| {
            state
                .vertex(u)
                .iter()
                .zip(first)
                .zip(&offset)
                .map(|((a, f), o)| {
                    let d = (a - f) - o;
                    d * d
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn check_dims(state: &State, l: &dyn Coupling) -> Result<(), DynamicsError> {
    if l.dim() != state.n {
        return Err(DynamicsError::DimensionMismatch { expected: state.n, got: l.dim() });
    }
    Ok(())
}

/// One step of `x' = g(x) + ε L_w f(x)`.
pub fn step_discrete(
    state: &State,
    f: &MapSpec,
    g: &MapSpec,
    eps: f64,
    l: &dyn Coupling,
) -> Result<State, DynamicsError> {
    check_dims(state, l)?;
    let gx = state.map(g);
    let fx = state.map(f);
    let lf = couple(l, state.n, state.k, &fx);
    let data: Vec<f64> = gx.iter().zip(&lf).map(|(a, b)| a + eps * b).collect();
    let next = State { n: state.n, k: state.k, data, time: state.time + 1.0 };
    if !next.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    Ok(next)
}

fn rhs(state: &State, f: &MapSpec, g: &MapSpec, l: &dyn Coupling) -> Vec<f64> {
    let fx = state.map(f);
    let gx = state.map(g);
    let lg = couple(l, state.n, state.k, &gx);
    fx.iter().zip(&lg).map(|(a, b)| a + b).collect()
}

/// One classical RK4 step of `ẋ = f(x) + L_w g(x)`.
pub fn step_continuous_rk4(
    state: &State,
    f: &MapSpec,
    g: &MapSpec,
    l: &dyn Coupling,
    dt: f64,
) -> Result<State, DynamicsError> {
    if !(dt > 0.0) {
        return Err(DynamicsError::InvalidParameter("dt must be positive"));
    }
    check_dims(state, l)?;
    let shifted = |k: &[f64], h: f64| State {
        n: state.n,
        k: state.k,
        data: state.data.iter().zip(k).map(|(x, d)| x + h * d).collect(),
        time: state.time,
    };
    let k1 = rhs(state, f, g, l);
    let k2 = rhs(&shifted(&k1, dt / 2.0), f, g, l);
    let k3 = rhs(&shifted(&k2, dt / 2.0), f, g, l);
    let k4 = rhs(&shifted(&k3, dt), f, g, l);
    let data: Vec<f64> = (0..state.data.len())
        .map(|i| state.data[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    let next = State { n: state.n, k: state.k, data, time: state.time + dt };
    if !next.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    Diverged,
    Budget,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Converged => "converged",
            Termination::Diverged => "diverged",
            Termination::Budget => "budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub state: State,
    pub sync_error: f64,
}

/// Sampled states of a run, strictly increasing in time. The initial and
/// final states are always sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    pub fn final_sync_error(&self) -> f64 {
        self.last().sync_error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteConfig {
    pub f: MapSpec,
    pub g: MapSpec,
    pub eps: f64,
    pub max_steps: usize,
    pub conv_tol: f64,
    pub div_tol: f64,
    pub sample_every: usize,
}

impl DiscreteConfig {
    /// Pure diffusion `x' = x + ε M x`.
    pub fn diffusion(eps: f64) -> Self {
        Self::new(MapSpec::Identity, MapSpec::Identity, eps)
    }

    pub fn new(f: MapSpec, g: MapSpec, eps: f64) -> Self {
        Self {
            f,
            g,
            eps,
            max_steps: DEFAULT_MAX_STEPS,
            conv_tol: DEFAULT_CONV_TOL,
            div_tol: DEFAULT_DIV_TOL,
            sample_every: 1,
        }
    }
}

// Shared loop: `advance` returns Err on non-finite output.
fn run(
    x0: &State,
    max_steps: usize,
    conv_tol: f64,
    div_tol: f64,
    sample_every: usize,
    mut advance: impl FnMut(&State, usize) -> Result<State, DynamicsError>,
) -> Trajectory {
    let sample_every = sample_every.max(1);
    let e0 = sync_error(x0);
    let mut samples = vec![Sample { state: x0.clone(), sync_error: e0 }];
    let diverged = |s: &State| !s.is_finite() || s.max_abs() >= div_tol;
    if diverged(x0) {
        return Trajectory { samples, termination: Termination::Diverged, steps: 0 };
    }
    if e0 <= conv_tol {
        return Trajectory { samples, termination: Termination::Converged, steps: 0 };
    }
    let mut current = x0.clone();
    for step in 1..=max_steps {
        let next = match advance(&current, step) {
            Ok(s) => s,
            Err(_) => {
                return Trajectory { samples, termination: Termination::Diverged, steps: step };
            }
        };
        let err = sync_error(&next);
        let outcome = if diverged(&next) {
            Some(Termination::Diverged)
        } else if err <= conv_tol {
            Some(Termination::Converged)
        } else if step == max_steps {
            Some(Termination::Budget)
        } else {
            None
        };
        if outcome.is_some() || step % sample_every == 0 {
            samples.push(Sample { state: next.clone(), sync_error: err });
        }
        if let Some(termination) = outcome {
            return Trajectory { samples, termination, steps: step };
        }
        current = next;
    }
    Trajectory { samples, termination: Termination::Budget, steps: max_steps }
}

/// Iterates [`step_discrete`] until convergence, divergence or budget.
pub fn simulate_discrete(x0: &State, cfg: &DiscreteConfig, l: &dyn Coupling) -> Trajectory {
    run(x0, cfg.max_steps.max(1), cfg.conv_tol, cfg.div_tol, cfg.sample_every, |s, _| {
        step_discrete(s, &cfg.f, &cfg.g, cfg.eps, l)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousConfig {
    pub f: MapSpec,
    pub g: MapSpec,
    pub dt: f64,
    pub t_max: f64,
    pub conv_tol: f64,
    pub div_tol: f64,
    pub sample_every: usize,
}

impl ContinuousConfig {
    pub fn new(f: MapSpec, g: MapSpec, dt: f64, t_max: f64) -> Self {
        Self {
            f,
            g,
            dt,
            t_max,
            conv_tol: DEFAULT_CONV_TOL,
            div_tol: DEFAULT_DIV_TOL,
            sample_every: 1,
        }
    }

    /// Pure diffusion `ẋ = L_w x`.
    pub fn diffusion(dt: f64, t_max: f64) -> Self {
        Self::new(MapSpec::Zero, MapSpec::Identity, dt, t_max)
    }

    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round().max(1.0) as usize
    }
}

/// Fixed-step RK4 loop with the same termination semantics as the discrete case.
pub fn simulate_continuous(
    x0: &State,
    cfg: &ContinuousConfig,
    l: &dyn Coupling,
) -> Result<Trajectory, DynamicsError> {
    if !(cfg.dt > 0.0) || !(cfg.t_max > 0.0) {
        return Err(DynamicsError::InvalidParameter("dt and t_max must be positive"));
    }
    let t0 = x0.time;
    Ok(run(x0, cfg.n_steps(), cfg.conv_tol, cfg.div_tol, cfg.sample_every, |s, step| {
        // recompute time from the step count to avoid drift
        step_continuous_rk4(s, &cfg.f, &cfg.g, l, cfg.dt)
            .map(|next| next.with_time(t0 + step as f64 * cfg.dt))
    }))
}

/// `s_{n+1} = ḡ(s_n)`: the orbit of a synchronized trajectory. Returns
/// `len` points starting at `s0`.
pub fn sync_orbit(g: &MapSpec, s0: &[f64], len: usize) -> Result<Vec<Vec<f64>>, DynamicsError> {
    let mut orbit = Vec::with_capacity(len);
    let mut s = s0.to_vec();
    for _ in 0..len {
        orbit.push(s.clone());
        let mut next = vec![0.0; s.len()];
        g.apply(&s, &mut next);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite);
        }
        s = next;
    }
    Ok(orbit)
}

/// Jacobians of `map` along an orbit.
pub fn jacobian_sequence(map: &MapSpec, orbit: &[Vec<f64>]) -> Vec<Matrix> {
    orbit.iter().map(|s| map.jacobian(s)).collect()
}

/// Per-mode linearized perturbation dynamics
/// `η(n+1)(i) = η(n)(i) · (J_g(n) + ε λ_i J_f(n))`.
///
/// `eta1` holds one `k`-row per eigenvalue. The result has `n_steps + 1`
/// entries, each a list of mode rows; entry 0 is `eta1`.
pub fn variational_discrete(
    eta1: &[Vec<f64>],
    eigenvalues: &[f64],
    jf_seq: &[Matrix],
    jg_seq: &[Matrix],
    eps: f64,
    n_steps: usize,
) -> Result<Vec<Vec<Vec<f64>>>, DynamicsError> {
    if eta1.len() != eigenvalues.len() {
        return Err(DynamicsError::DimensionMismatch { expected: eigenvalues.len(), got: eta1.len() });
    }
    if jf_seq.len() < n_steps || jg_seq.len() < n_steps {
        return Err(DynamicsError::DimensionMismatch {
            expected: n_steps,
            got: jf_seq.len().min(jg_seq.len()),
        });
    }
    let k = eta1.first().map_or(0, Vec::len);
    for j in jf_seq[..n_steps].iter().chain(&jg_seq[..n_steps]) {
        if j.rows() != k || j.cols() != k {
            return Err(DynamicsError::DimensionMismatch { expected: k, got: j.rows() });
        }
    }
    if let Some(bad) = eta1.iter().find(|r| r.len() != k) {
        return Err(DynamicsError::DimensionMismatch { expected: k, got: bad.len() });
    }
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(eta1.to_vec());
    for step in 0..n_steps {
        let prev = &out[step];
        let next: Vec<Vec<f64>> = prev
            .iter()
            .zip(eigenvalues)
            .map(|(row, &lam)| {
                let m = jg_seq[step].add(&jf_seq[step].scale(eps * lam));
                m.left_mul_vec(row)
            })
            .collect();
        out.push(next);
    }
    Ok(out)
}
