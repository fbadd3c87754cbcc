//! Symmetric eigendecomposition by cyclic Jacobi rotations, plus the
//! spectral diagnostics consumed by the synchronization criteria.

use thiserror::Error;

use crate::matrix::{Matrix, SymMatrix};

/// Default zero tolerance, relative to the matrix scale.
pub const ZERO_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal norm {off})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("every eigenvalue is zero at the given tolerance")]
    AllZero,
}

/// Ascending eigenvalues with an orthonormal set of aligned eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    // eigenvector i occupies vectors[i*n..(i+1)*n]
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.vectors[i * n..(i + 1) * n]
    }

    /// Largest `|λ|`.
    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Matrix whose columns are the eigenvectors.
    pub fn eigenvector_matrix(&self) -> Matrix {
        let n = self.len();
        let mut q = Matrix::zeros(n, n);
        for i in 0..n {
            for (r, &v) in self.eigenvector(i).iter().enumerate() {
                q.set(r, i, v);
            }
        }
        q
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.len();
        let mut data = vec![0.0; n * n];
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvector(k);
            for i in 0..n {
                let vi = lam * v[i];
                for j in 0..n {
                    data[i * n + j] += vi * v[j];
                }
            }
        }
        SymMatrix::symmetrized(n, data)
    }

    /// Coordinates of `x` in the eigenbasis: `c_i = ⟨v_i, x⟩`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|i| dot(self.eigenvector(i), x)).collect()
    }

    /// Inverse of [`Spectrum::project`].
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut x = vec![0.0; n];
        for (i, &c) in coeffs.iter().enumerate() {
            for (xr, v) in x.iter_mut().zip(self.eigenvector(i)) {
                *xr += c * v;
            }
        }
        x
    }

    /// Number of eigenvalues with `|λ| ≤ tol · max|λ|`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        let cut = tol * self.max_abs();
        self.eigenvalues.iter().filter(|v| v.abs() <= cut).count()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Cyclic Jacobi sweeps on a private copy until the off-diagonal Frobenius
/// norm drops below `1e-12 · ‖M‖_F`. Eigenvalues come out ascending; each
/// eigenvector has its first non-negligible component positive, and vectors
/// inside a degenerate cluster are re-orthonormalized.
pub fn eig_sym(m: &SymMatrix) -> Result<Spectrum, SpectraError> {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = OFF_DIAG_TOL * m.frobenius();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                // A <- Jᵀ A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off > target {
            return Err(SpectraError::NoConvergence { sweeps: MAX_SWEEPS, off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &col in &order {
        vectors.extend((0..n).map(|r| v[r * n + col]));
    }

    let scale = eigenvalues.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= ZERO_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            orthonormalize(&mut vectors, n, start, end);
        }
        start = end;
    }
    for i in 0..n {
        let vec = &mut vectors[i * n..(i + 1) * n];
        if let Some(&first) = vec.iter().find(|x| x.abs() > 1e-12) {
            if first < 0.0 {
                vec.iter_mut().for_each(|x| *x = -*x);
            }
        }
    }
    Ok(Spectrum { eigenvalues, vectors })
}

// Modified Gram–Schmidt over eigenvectors start..end.
fn orthonormalize(vectors: &mut [f64], n: usize, start: usize, end: usize) {
    for i in start..end {
        for j in start..i {
            let (head, tail) = vectors.split_at_mut(i * n);
            let vj = &head[j * n..(j + 1) * n];
            let vi = &mut tail[..n];
            let d = dot(vi, vj);
            vi.iter_mut().zip(vj).for_each(|(a, b)| *a -= d * b);
        }
        let vi = &mut vectors[i * n..(i + 1) * n];
        let norm = dot(vi, vi).sqrt();
        if norm > 0.0 {
            vi.iter_mut().for_each(|a| *a /= norm);
        }
    }
}

/// Decomposes a general dense matrix after checking exact symmetry.
pub fn eig_sym_dense(m: &Matrix) -> Result<Spectrum, SpectraError> {
    if !m.is_square() {
        return Err(SpectraError::NotSymmetric { i: m.rows(), j: m.cols() });
    }
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            if m.get(i, j) != m.get(j, i) {
                return Err(SpectraError::NotSymmetric { i, j });
            }
        }
    }
    eig_sym(&m.sym_part())
}

/// Operator 2-norm of a symmetric matrix: `max |λ_i|`.
pub fn operator_norm(m: &SymMatrix) -> Result<f64, SpectraError> {
    Ok(eig_sym(m)?.max_abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionReport {
    pub is_diffusion: bool,
    pub zero_multiplicity: usize,
    pub has_ones_kernel: bool,
}

/// Checks the diffusion-matrix property: a simple eigenvalue 0 with
/// eigenvector `𝟙`, every other eigenvalue strictly negative. `tol` is
/// relative to `‖M‖_∞`.
pub fn is_diffusion_matrix(m: &SymMatrix, tol: f64) -> Result<DiffusionReport, SpectraError> {
    let n = m.n();
    let spec = eig_sym(m)?;
    let cut = tol * m.norm_inf();
    let zero_idx: Vec<usize> =
        (0..n).filter(|&i| spec.eigenvalues()[i].abs() <= cut).collect();
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    // squared length of the projection of 𝟙/√n onto the zero eigenspace
    let proj: f64 = zero_idx
        .iter()
        .map(|&i| {
            let c = spec.eigenvector(i).iter().sum::<f64>() * inv_sqrt_n;
            c * c
        })
        .sum();
    let has_ones_kernel = !zero_idx.is_empty() && proj.sqrt() >= 1.0 - 1e-9;
    let others_negative = (0..n)
        .filter(|i| !zero_idx.contains(i))
        .all(|i| spec.eigenvalues()[i] < -cut);
    Ok(DiffusionReport {
        is_diffusion: zero_idx.len() == 1 && has_ones_kernel && others_negative,
        zero_multiplicity: zero_idx.len(),
        has_ones_kernel,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonzeroExtremes {
    pub lambda_min_abs: f64,
    pub lambda_max_abs: f64,
}

/// Smallest and largest `|λ|` over eigenvalues with `|λ| > tol · max|λ|`.
pub fn nonzero_extremes(spec: &Spectrum, tol: f64) -> Result<NonzeroExtremes, SpectraError> {
    let cut = tol * spec.max_abs();
    let mut it = spec.eigenvalues().iter().map(|v| v.abs()).filter(|&a| a > cut);
    let first = it.next().ok_or(SpectraError::AllZero)?;
    let (lo, hi) = it.fold((first, first), |(lo, hi), a| (lo.min(a), hi.max(a)));
    Ok(NonzeroExtremes { lambda_min_abs: lo, lambda_max_abs: hi })
}

/// Largest eigenvalue of a symmetric matrix; 0 for an empty matrix.
pub fn max_eigenvalue(m: &SymMatrix) -> Result<f64, SpectraError> {
    Ok(eig_sym(m)?.eigenvalues().last().copied().unwrap_or(0.0))
}

/// Smallest eigenvalue of a symmetric matrix; 0 for an empty matrix.
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64, SpectraError> {
    Ok(eig_sym(m)?.eigenvalues().first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::operators::{build_lw, clique_laplacian};

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn triangle_spectra() {
        let t = Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap();
        let s = eig_sym(&clique_laplacian(&t).affine(1.0, 1.0)).unwrap();
        assert_close(s.eigenvalues(), &[-2.0, -2.0, 1.0], 1e-12);
        let s = eig_sym(&build_lw(&t).affine(1.0, 1.0)).unwrap();
        assert_close(s.eigenvalues(), &[-0.5, -0.5, 1.0], 1e-12);
        assert!((operator_norm(&build_lw(&t)).unwrap() - 1.5).abs() < 1e-12);
        assert!((operator_norm(&clique_laplacian(&t)).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(operator_norm(&SymMatrix::zeros(4)).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_gives_standard_basis() {
        let s = eig_sym(&SymMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.eigenvector(0), &[0.0, 1.0, 0.0]);
        assert_eq!(s.eigenvector(1), &[0.0, 0.0, 1.0]);
        assert_eq!(s.eigenvector(2), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn sign_convention() {
        let m = SymMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        let s = eig_sym(&m).unwrap();
        for i in 0..2 {
            assert!(s.eigenvector(i)[0] > 0.0);
        }
    }

    #[test]
    fn diffusion_detection() {
        let conn = Hypergraph::from_edges(4, &[&[0, 1, 2], &[2, 3]]).unwrap();
        let r = is_diffusion_matrix(&build_lw(&conn), ZERO_TOL).unwrap();
        assert!(r.is_diffusion && r.has_ones_kernel);
        assert_eq!(r.zero_multiplicity, 1);

        let split = Hypergraph::from_edges(4, &[&[0, 1], &[2, 3]]).unwrap();
        let r = is_diffusion_matrix(&build_lw(&split), ZERO_TOL).unwrap();
        assert!(!r.is_diffusion);
        assert_eq!(r.zero_multiplicity, 2);
        assert!(r.has_ones_kernel);

        let r = is_diffusion_matrix(&SymMatrix::identity(3), ZERO_TOL).unwrap();
        assert!(!r.is_diffusion);
        assert_eq!(r.zero_multiplicity, 0);
    }

    #[test]
    fn extremes() {
        let t = Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap();
        let e = nonzero_extremes(&eig_sym(&build_lw(&t)).unwrap(), ZERO_TOL).unwrap();
        assert!((e.lambda_min_abs - 1.5).abs() < 1e-12 && (e.lambda_max_abs - 1.5).abs() < 1e-12);
        let e = nonzero_extremes(&eig_sym(&SymMatrix::diagonal(&[0.0, -2.0, -5.0])).unwrap(), ZERO_TOL)
            .unwrap();
        assert_eq!((e.lambda_min_abs, e.lambda_max_abs), (2.0, 5.0));
        let z = eig_sym(&SymMatrix::zeros(3)).unwrap();
        assert_eq!(nonzero_extremes(&z, ZERO_TOL), Err(SpectraError::AllZero));
    }

    #[test]
    fn dense_entry_point_checks_symmetry() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(eig_sym_dense(&m), Err(SpectraError::NotSymmetric { .. })));
    }
}
