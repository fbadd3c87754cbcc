//! Synchronization criteria.
//!
//! Every check returns a [`CriterionReport`]: the inputs it was given, the
//! intermediate quantities it computed, a verdict, and a signed margin that is
//! positive on the guaranteed side of the threshold. All criteria are
//! sufficient conditions only; `NotGuaranteed` does not predict desynchrony.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dynamics::{jacobian_sequence, sync_orbit, DynamicsError, MapSpec};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::matrix::{Matrix, SymMatrix};
use crate::operators::build_c;
use crate::spectra::{self, eig_sym, nonzero_extremes, SpectraError, Spectrum, ZERO_TOL};

/// Strict inequalities must hold by at least this much.
pub const STRICT_TOL: f64 = 1e-12;
/// Definiteness tolerance, relative to `‖M‖_∞`.
pub const DEFINITENESS_TOL: f64 = 1e-10;

pub const DEFAULT_BURN_IN: usize = 1_000;
pub const DEFAULT_HORIZON: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("A is not positive definite")]
    ANotPositiveDefinite,
    #[error("P is not positive definite")]
    PNotPositiveDefinite,
    #[error("synchronized orbit left the finite range")]
    NonFinite,
    #[error("Jacobian norm vanished at orbit step {0}; log is undefined")]
    ZeroDerivative(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

impl From<DynamicsError> for AnalysisError {
    fn from(_: DynamicsError) -> Self {
        AnalysisError::NonFinite
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Guaranteed,
    NotGuaranteed,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok { Verdict::Guaranteed } else { Verdict::NotGuaranteed }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Guaranteed => "guaranteed",
            Verdict::NotGuaranteed => "not_guaranteed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub criterion: String,
    pub inputs: Vec<(String, f64)>,
    pub quantities: Vec<(String, f64)>,
    pub verdict: Verdict,
    pub margin: f64,
}

impl CriterionReport {
    fn new(criterion: &str) -> Self {
        Self {
            criterion: criterion.to_string(),
            inputs: Vec::new(),
            quantities: Vec::new(),
            verdict: Verdict::NotGuaranteed,
            margin: f64::NAN,
        }
    }

    fn input(mut self, name: &str, v: f64) -> Self {
        self.inputs.push((name.to_string(), v));
        self
    }

    fn quantity(mut self, name: &str, v: f64) -> Self {
        self.quantities.push((name.to_string(), v));
        self
    }

    fn decide(mut self, margin: f64, ok: bool) -> Self {
        self.margin = margin;
        self.verdict = Verdict::from_bool(ok);
        self
    }

    pub fn is_guaranteed(&self) -> bool {
        self.verdict == Verdict::Guaranteed
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.quantities.iter().chain(&self.inputs).find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// One `key=value` per line.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "criterion={}", self.criterion);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "input.{k}={v}");
        }
        for (k, v) in &self.quantities {
            let _ = writeln!(s, "{k}={v}");
        }
        let _ = writeln!(s, "verdict={}", self.verdict.as_str());
        let _ = writeln!(s, "margin={}", self.margin);
        s
    }
}

fn neg_def_tol(m: &SymMatrix) -> f64 {
    DEFINITENESS_TOL * m.norm_inf()
}

/// Largest eigenvalue and whether the matrix is negative definite at tolerance.
fn negative_definite(m: &SymMatrix) -> Result<(f64, bool), SpectraError> {
    let top = spectra::max_eigenvalue(m)?;
    Ok((top, top < -neg_def_tol(m)))
}

fn negative_semidefinite(m: &SymMatrix) -> Result<(f64, bool), SpectraError> {
    let top = spectra::max_eigenvalue(m)?;
    Ok((top, top <= neg_def_tol(m)))
}

fn positive_definite(m: &Matrix) -> Result<bool, SpectraError> {
    if !m.is_square() {
        return Ok(false);
    }
    // symmetric input required
    let s = m.sym_part();
    if s.to_matrix().sub(m).as_slice().iter().any(|v| v.abs() > 1e-12 * s.norm_inf().max(1.0)) {
        return Ok(false);
    }
    let low = spectra::min_eigenvalue(&s)?;
    Ok(low > DEFINITENESS_TOL * s.norm_inf())
}

/// Positive-definite `k × k` matrix `A` defining `‖x‖_A² = x A xᵀ`.
///
/// Matrix norms are the operator norms induced by `√(x A xᵀ)` for the row
/// action `x ↦ x J`; with `A = I` this is the largest singular value.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    a: Matrix,
    chol: Matrix,
}

impl NormSpec {
    pub fn new(a: Matrix) -> Result<Self, AnalysisError> {
        if !positive_definite(&a)? {
            return Err(AnalysisError::ANotPositiveDefinite);
        }
        let chol = a.cholesky().ok_or(AnalysisError::ANotPositiveDefinite)?;
        Ok(Self { a, chol })
    }

    pub fn identity(k: usize) -> Self {
        Self { a: Matrix::identity(k), chol: Matrix::identity(k) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// `x A xᵀ`.
    pub fn quadratic(&self, x: &[f64]) -> f64 {
        let xa = self.a.left_mul_vec(x);
        xa.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `sup_x √(xJAJᵀxᵀ / xAxᵀ)`.
    pub fn induced_norm(&self, j: &Matrix) -> Result<f64, AnalysisError> {
        let l_inv = self.chol.inverse().map_err(|_| AnalysisError::ANotPositiveDefinite)?;
        let m = l_inv.mul(j).mul(&self.a).mul(&j.transpose()).mul(&l_inv.transpose());
        let top = spectra::max_eigenvalue(&m.sym_part())?;
        Ok(top.max(0.0).sqrt())
    }
}

/// Global discrete criterion: `k_g + ε ‖L_w‖ k_f < 1`.
///
/// Passing `λ_max = max|λ_i(L_w)|` as `lw_norm` gives the eigenvalue form.
pub fn global_discrete(k_f: f64, k_g: f64, eps: f64, lw_norm: f64) -> CriterionReport {
    let value = k_g + eps * lw_norm * k_f;
    let margin = 1.0 - value;
    CriterionReport::new("global-discrete")
        .input("k_f", k_f)
        .input("k_g", k_g)
        .input("epsilon", eps)
        .input("lw_norm", lw_norm)
        .quantity("value", value)
        .decide(margin, margin > STRICT_TOL)
}

/// Global discrete criterion for `f = g`: `‖I + εL_w‖ < 1/k_f`.
pub fn global_discrete_feqg(k_f: f64, eps: f64, lw: &SymMatrix) -> Result<CriterionReport, AnalysisError> {
    if !(k_f > 0.0) {
        return Err(AnalysisError::InvalidInput("k_f must be positive"));
    }
    let norm = spectra::operator_norm(&lw.affine(1.0, eps))?;
    let margin = 1.0 / k_f - norm;
    Ok(CriterionReport::new("global-discrete-feqg")
        .input("k_f", k_f)
        .input("epsilon", eps)
        .quantity("shifted_norm", norm)
        .quantity("threshold", 1.0 / k_f)
        .decide(margin, margin > STRICT_TOL))
}

/// `Δ = Q √(−Λ) Qᵀ`, the square root with `Δ² = −L_w` (negative eigenvalues
/// of `L_w` clipped at zero).
pub fn diffusion_square_root(lw: &SymMatrix) -> Result<SymMatrix, SpectraError> {
    let spec = eig_sym(lw)?;
    let n = lw.n();
    let mut data = vec![0.0; n * n];
    for (k, &lam) in spec.eigenvalues().iter().enumerate() {
        let r = (-lam).max(0.0).sqrt();
        let v = spec.eigenvector(k);
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] += r * v[i] * v[j];
            }
        }
    }
    // symmetrize by averaging
    for i in 0..n {
        for j in i + 1..n {
            let a = 0.5 * (data[i * n + j] + data[j * n + i]);
            data[i * n + j] = a;
            data[j * n + i] = a;
        }
    }
    Ok(SymMatrix::from_row_major(n, data).expect("finite symmetric"))
}

/// Variant of the global criterion phrased through `Δ` with `Δ² = −L_w`.
///
/// `k_f`, `k_g` must satisfy the growth and commutation hypotheses
/// (`‖f(x)‖ ≤ k_f‖x‖`, `‖Δ f(x)‖ ≤ ‖f(Δx)‖`, same for `g`); those are the
/// caller's responsibility and are not verified here.
pub fn global_discrete_delta(
    k_f: f64,
    k_g: f64,
    eps: f64,
    lw: &SymMatrix,
) -> Result<CriterionReport, AnalysisError> {
    let delta = diffusion_square_root(lw)?;
    let sq = delta.to_matrix().mul(&delta.to_matrix());
    let residual = sq
        .as_slice()
        .iter()
        .zip(lw.as_slice())
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max);
    let base = global_discrete(k_f, k_g, eps, spectra::operator_norm(lw)?);
    let value = base.get("value").unwrap_or(f64::NAN);
    Ok(CriterionReport::new("global-discrete-delta")
        .input("k_f", k_f)
        .input("k_g", k_g)
        .input("epsilon", eps)
        .quantity("delta_residual", residual)
        .quantity("value", value)
        .decide(base.margin, base.is_guaranteed()))
}

/// `σ = mean over r ∈ (burn_in, horizon] of log ‖J_f(s_r)‖_A` along the
/// synchronized orbit `s_{r+1} = ḡ(s_r)` started at `s0`.
pub fn sigma_estimate(
    f: &MapSpec,
    g: &MapSpec,
    s0: &[f64],
    norm: &NormSpec,
    burn_in: usize,
    horizon: usize,
) -> Result<f64, AnalysisError> {
    if horizon <= burn_in {
        return Err(AnalysisError::InvalidInput("horizon must exceed burn_in"));
    }
    if s0.len() != norm.k() {
        return Err(AnalysisError::InvalidInput("orbit dimension differs from A"));
    }
    let orbit = sync_orbit(g, s0, horizon + 1)?;
    let jacobians = jacobian_sequence(f, &orbit[burn_in + 1..]);
    let mut total = 0.0;
    for (offset, j) in jacobians.iter().enumerate() {
        let nrm = norm.induced_norm(j)?;
        if nrm == 0.0 {
            return Err(AnalysisError::ZeroDerivative(burn_in + 1 + offset));
        }
        total += nrm.ln();
    }
    let sigma = total / jacobians.len() as f64;
    if !sigma.is_finite() {
        return Err(AnalysisError::NonFinite);
    }
    Ok(sigma)
}

/// Checks `(1−e^{−σ})/ε ≤ |λ_i| ≤ (1+e^{−σ})/ε` for every nonzero eigenvalue.
///
/// Zero eigenvalues (relative tolerance `tol`) are skipped: for a connected
/// hypergraph their mode lies along the synchronization manifold. Modes with
/// `exclude[i] == true` (zero initial perturbation component) are skipped as
/// well.
pub fn eigenvalue_interval_check(
    sigma: f64,
    eps: f64,
    eigenvalues: &[f64],
    tol: f64,
    exclude: Option<&[bool]>,
) -> Result<CriterionReport, AnalysisError> {
    if !(eps > 0.0) {
        return Err(AnalysisError::InvalidInput("epsilon must be positive"));
    }
    if exclude.is_some_and(|m| m.len() != eigenvalues.len()) {
        return Err(AnalysisError::InvalidInput("mask length differs from spectrum"));
    }
    let decay = (-sigma).exp();
    let lo = (1.0 - decay) / eps;
    let hi = (1.0 + decay) / eps;
    let scale = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut report = CriterionReport::new("eigenvalue-interval")
        .input("sigma", sigma)
        .input("epsilon", eps)
        .quantity("interval_lower", lo)
        .quantity("interval_upper", hi);
    let mut margin = f64::INFINITY;
    let mut checked = 0;
    for (i, &lam) in eigenvalues.iter().enumerate() {
        if lam.abs() <= tol * scale || exclude.is_some_and(|m| m[i]) {
            continue;
        }
        let a = lam.abs();
        let m = (a - lo).min(hi - a);
        report = report.quantity(&format!("mode.{i}.margin"), m);
        margin = margin.min(m);
        checked += 1;
    }
    report = report.quantity("modes_checked", checked as f64);
    Ok(report.decide(margin, margin >= -STRICT_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingInterval {
    pub lower: f64,
    pub upper: f64,
    pub is_empty: bool,
}

/// `ε ∈ [(1−e^{−σ})/λ_min, (1+e^{−σ})/λ_max]` over nonzero `|λ|`.
pub fn coupling_interval(
    sigma: f64,
    lambda_min_abs: f64,
    lambda_max_abs: f64,
) -> Result<CouplingInterval, AnalysisError> {
    if !(lambda_min_abs > 0.0 && lambda_max_abs > 0.0) {
        return Err(AnalysisError::InvalidInput("eigenvalue magnitudes must be positive"));
    }
    let decay = (-sigma).exp();
    let lower = (1.0 - decay) / lambda_min_abs;
    let upper = (1.0 + decay) / lambda_max_abs;
    Ok(CouplingInterval { lower, upper, is_empty: lower > upper })
}

/// Lyapunov check: `(J_g + ελ_i J_f) A (J_g + ελ_i J_f)ᵀ − A < 0` for every
/// given eigenvalue. The equivalent block form
/// `[[A, M], [Mᵀ, A⁻¹]] > 0` is evaluated alongside and its agreement
/// recorded as `schur_agrees`.
pub fn lyapunov_discrete_check(
    jg: &Matrix,
    jf: &Matrix,
    eps: f64,
    eigenvalues: &[f64],
    a: &Matrix,
) -> Result<CriterionReport, AnalysisError> {
    if !positive_definite(a)? {
        return Err(AnalysisError::ANotPositiveDefinite);
    }
    let k = a.rows();
    if jg.rows() != k || jf.rows() != k || !jg.is_square() || !jf.is_square() {
        return Err(AnalysisError::InvalidInput("Jacobians must be k x k like A"));
    }
    let a_inv = a.inverse().map_err(|_| AnalysisError::ANotPositiveDefinite)?;
    let mut report = CriterionReport::new("lyapunov-discrete").input("epsilon", eps);
    let mut worst = f64::NEG_INFINITY;
    let mut all_pass = true;
    let mut schur_all = true;
    for (i, &lam) in eigenvalues.iter().enumerate() {
        let m = jg.add(&jf.scale(eps * lam));
        let s = m.mul(a).mul(&m.transpose()).sub(a).sym_part();
        let (top, nd) = negative_definite(&s)?;
        let block = Matrix::block(a, &m, &m.transpose(), &a_inv).sym_part();
        let low = spectra::min_eigenvalue(&block)?;
        let schur_pd = low > DEFINITENESS_TOL * block.norm_inf();
        report = report.quantity(&format!("mode.{i}.max_eig"), top);
        worst = worst.max(top);
        all_pass &= nd;
        schur_all &= schur_pd;
    }
    report = report.quantity("schur_agrees", if schur_all == all_pass { 1.0 } else { 0.0 });
    let margin = if eigenvalues.is_empty() { f64::INFINITY } else { -worst };
    Ok(report.decide(margin, all_pass))
}

/// Continuous local criterion: `[J_f(t) + μ_i J_g(t) + bI]P` negative
/// semidefinite (symmetric part) for every sampled time and every `μ_i`.
pub fn continuous_local_check(
    jf_samples: &[Matrix],
    jg_samples: &[Matrix],
    mus: &[f64],
    b: f64,
    p: &Matrix,
) -> Result<CriterionReport, AnalysisError> {
    if !positive_definite(p)? {
        return Err(AnalysisError::PNotPositiveDefinite);
    }
    if !(b > 0.0) {
        return Err(AnalysisError::InvalidInput("b must be positive"));
    }
    if jf_samples.len() != jg_samples.len() {
        return Err(AnalysisError::InvalidInput("Jacobian sample counts differ"));
    }
    let k = p.rows();
    let shift = Matrix::scalar(k, b);
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    for (jf, jg) in jf_samples.iter().zip(jg_samples) {
        for &mu in mus {
            let m = jf.add(&jg.scale(mu)).add(&shift).mul(p).sym_part();
            let (top, nsd) = negative_semidefinite(&m)?;
            worst = worst.max(top);
            ok &= nsd;
        }
    }
    let margin = if worst.is_finite() { -worst } else { f64::INFINITY };
    Ok(CriterionReport::new("continuous-local")
        .input("b", b)
        .quantity("max_eig", worst)
        .decide(margin, ok))
}

/// Kronecker form: `J_f ⊗ I_N + J_g ⊗ D_L` negative definite (symmetric part),
/// with `D_L = diag(μ)`.
pub fn kronecker_check(jf: &Matrix, jg: &Matrix, mus: &[f64]) -> Result<CriterionReport, AnalysisError> {
    let big = jf
        .kron(&Matrix::identity(mus.len()))
        .add(&jg.kron(&Matrix::diagonal(mus)))
        .sym_part();
    let (top, nd) = negative_definite(&big)?;
    Ok(CriterionReport::new("continuous-kronecker").quantity("max_eig", top).decide(-top, nd))
}

/// Continuous global criterion with `g` the identity: the Kronecker sum
/// `K ⊗ I_N + I_k ⊗ L_w` must be negative definite, where `K = sup f̄′` is
/// the slope bound of `f`. For `k = 1` this is `a·I + L_w`.
pub fn continuous_global_check(
    f: &MapSpec,
    k: usize,
    lw: &SymMatrix,
) -> Result<CriterionReport, AnalysisError> {
    let slope = f.slope_bound(k);
    let (top, scale) = if k == 1 {
        let m = lw.affine(slope.get(0, 0), 1.0);
        (spectra::max_eigenvalue(&m)?, m.norm_inf())
    } else {
        let ks = slope.sym_part();
        (
            spectra::max_eigenvalue(&ks)? + spectra::max_eigenvalue(lw)?,
            ks.norm_inf() + lw.norm_inf(),
        )
    };
    let nd = top < -DEFINITENESS_TOL * scale;
    Ok(CriterionReport::new("continuous-global")
        .input("k", k as f64)
        .quantity("slope_bound_max_eig", spectra::max_eigenvalue(&slope.sym_part())?)
        .quantity("max_eig", top)
        .decide(-top, nd))
}

/// Variant with a diagonal positive-definite `P`: the one-sided bound matrix
/// `k(P, f̄)` must be negative definite.
pub fn continuous_global_check_p(k_pf: &Matrix, p: &Matrix) -> Result<CriterionReport, AnalysisError> {
    let diagonal = (0..p.rows()).all(|i| (0..p.cols()).all(|j| i == j || p.get(i, j) == 0.0));
    if !diagonal || !positive_definite(p)? {
        return Err(AnalysisError::PNotPositiveDefinite);
    }
    let (top, nd) = negative_definite(&k_pf.sym_part())?;
    Ok(CriterionReport::new("continuous-global-p").quantity("max_eig", top).decide(-top, nd))
}

/// Scalar-state (`k = 1`) variant: `k_(P,f) + k_(P,L_w,g) + bP` negative
/// definite for an `N × N` positive-definite `P`.
pub fn continuous_global_check_k1(
    k_pf: &SymMatrix,
    k_plg: &SymMatrix,
    b: f64,
    p: &SymMatrix,
) -> Result<CriterionReport, AnalysisError> {
    if !positive_definite(&p.to_matrix())? {
        return Err(AnalysisError::PNotPositiveDefinite);
    }
    if !(b > 0.0) {
        return Err(AnalysisError::InvalidInput("b must be positive"));
    }
    let m = k_pf.add(k_plg).add(&p.scale(b));
    let (top, nd) = negative_definite(&m)?;
    Ok(CriterionReport::new("continuous-global-k1")
        .input("b", b)
        .quantity("max_eig", top)
        .decide(-top, nd))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterBound {
    pub bound: f64,
    pub actual: usize,
    pub holds: bool,
}

/// `diam(G) ≥ 4 / (|V| (m_max − 1) λ_min)` with `λ_min` the smallest nonzero
/// `|λ|` of `spectrum` (the spectrum of the unweighted operator `C`).
pub fn diameter_bound(g: &Hypergraph, spectrum: &Spectrum) -> Result<DiameterBound, AnalysisError> {
    let actual = g.diameter()?;
    let lam = nonzero_extremes(spectrum, ZERO_TOL)?.lambda_min_abs;
    let denom = g.n_vertices() as f64 * (g.rank() as f64 - 1.0) * lam;
    let bound = 4.0 / denom;
    Ok(DiameterBound { bound, actual, holds: actual as f64 >= bound * (1.0 - 1e-12) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmBound {
    pub b_m: f64,
    pub lambda_max_abs: f64,
    pub holds: bool,
}

/// Combinatorial upper bound `b_m` on the largest Laplacian eigenvalue of a
/// connected `m`-uniform hypergraph:
///
/// `max_i [2d_i(m−1) − 1 + √(4(m−1)² d_i m_i D_max² − 2d_i(m−1) + 1)] / (2(m−1))`
///
/// with `m_i = Σ_{j∼i} d_j / (d_i(m−1))` and `D_max` the maximum codegree.
/// Both `d(i)` and `d_i` denote the degree of vertex `i`. For `m = 2` the expression can fall below the
/// true maximum (the 3-vertex path gives `(3+√5)/2 < 3`); `holds` reports
/// this rather than asserting.
pub fn bm_value(g: &Hypergraph) -> Result<f64, AnalysisError> {
    let m = g.uniformity().ok_or(HypergraphError::NotUniform)?;
    if !g.is_connected() {
        return Err(HypergraphError::DisconnectedHypergraph.into());
    }
    let deg = g.degrees();
    let nbrs = g.neighbors();
    let dmax = g.max_codegree() as f64;
    let mm1 = m as f64 - 1.0;
    let mut best = f64::NEG_INFINITY;
    for (i, &di) in deg.iter().enumerate() {
        let d = di as f64;
        let mi = nbrs[i].iter().map(|&j| deg[j] as f64).sum::<f64>() / (d * mm1);
        let rad = 4.0 * mm1 * mm1 * d * mi * dmax * dmax - 2.0 * d * mm1 + 1.0;
        let val = (2.0 * d * mm1 - 1.0 + rad.sqrt()) / (2.0 * mm1);
        best = best.max(val);
    }
    Ok(best)
}

/// Evaluates [`bm_value`] and compares with `max|λ|` of `C`.
pub fn uniform_upper_bound_bm(g: &Hypergraph) -> Result<BmBound, AnalysisError> {
    let b_m = bm_value(g)?;
    let lambda_max_abs = spectra::operator_norm(&build_c(g))?;
    Ok(BmBound { b_m, lambda_max_abs, holds: lambda_max_abs <= b_m * (1.0 + 1e-12) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralWindow {
    pub lower: f64,
    /// `max(lower, 0)`: coupling strengths are positive.
    pub lower_clamped: f64,
    pub upper: f64,
    pub is_empty: bool,
}

/// `ε ∈ [N(m−1)·diam(G)·(1−e^{−σ})/4, (1+e^{−σ})/b_m]` from combinatorial
/// data only (no eigensolve).
pub fn structural_coupling_window(g: &Hypergraph, sigma: f64) -> Result<StructuralWindow, AnalysisError> {
    if !sigma.is_finite() {
        return Err(AnalysisError::InvalidInput("sigma must be finite"));
    }
    let m = g.uniformity().ok_or(HypergraphError::NotUniform)?;
    let b_m = bm_value(g)?;
    let diam = g.diameter()? as f64;
    let decay = (-sigma).exp();
    let lower = g.n_vertices() as f64 * (m as f64 - 1.0) * diam * (1.0 - decay) / 4.0;
    let upper = (1.0 + decay) / b_m;
    let lower_clamped = lower.max(0.0);
    Ok(StructuralWindow { lower, lower_clamped, upper, is_empty: lower_clamped > upper })
}
