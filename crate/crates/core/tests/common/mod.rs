//! Reference computations that share no code with the library: Sylvester
//! inertia bisection, Faddeev-LeVerrier characteristic polynomial, and a
//! Taylor scaling-and-squaring matrix exponential.
#![allow(dead_code)]

pub mod strategies;

use hypersync::hypergraph::Hypergraph;
use rand::seq::index;
use rand::Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn inf_norm(m: &Dense) -> f64 {
    m.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Number of eigenvalues of symmetric `m` strictly below `x`, from the signs
/// of the pivots of an unpivoted LDLᵀ of `m − xI`.
pub fn count_below(m: &Dense, x: f64) -> usize {
    let n = m.len();
    let mut a: Dense = m.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= x;
    }
    let tiny = f64::EPSILON * (inf_norm(m) + x.abs()).max(1e-300);
    let mut negatives = 0;
    for k in 0..n {
        let mut p = a[k][k];
        if p.abs() < tiny {
            p = -tiny;
            a[k][k] = p;
        }
        if p < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let l = a[i][k] / p;
            for j in k + 1..n {
                a[i][j] -= l * a[k][j];
            }
        }
    }
    negatives
}

/// Eigenvalues (ascending) by bisection on [`count_below`].
pub fn bisection_eigenvalues(m: &Dense) -> Vec<f64> {
    let n = m.len();
    let r = inf_norm(m) + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-r, r);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(m, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-15 * r {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            let aik = a[i][k];
            for j in 0..m {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// Coefficients `c[0..=n]` of `det(xI − M) = Σ c_j x^j` (`c[n] = 1`).
pub fn char_poly(m: &Dense) -> Vec<f64> {
    let n = m.len();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk: Dense = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = M (M_{k-1} + c_{n-k+1} I)
        let mut inner = mk.clone();
        for (i, row) in inner.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        mk = matmul(m, &inner);
        let trace: f64 = (0..n).map(|i| mk[i][i]).sum();
        c[n - k] = -trace / k as f64;
    }
    c
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// `exp(t M)` by scaling and squaring with a 30-term Taylor series.
pub fn expm(m: &Dense, t: f64) -> Dense {
    let n = m.len();
    let norm = inf_norm(m) * t.abs();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scale = t / 2f64.powi(s);
    let a: Dense = m.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
    let mut result: Dense = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut term = result.clone();
    for k in 1..30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

pub fn mat_vec(m: &Dense, x: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Random hypergraph on `n` vertices; connectivity not enforced.
pub fn random_hypergraph<R: Rng>(
    rng: &mut R,
    n: usize,
    n_edges: usize,
    sizes: (usize, usize),
    max_weight: f64,
) -> Hypergraph {
    let edges: Vec<(Vec<usize>, f64)> = (0..n_edges)
        .map(|_| {
            let size = rng.random_range(sizes.0..=sizes.1.min(n));
            let w = max_weight * (1.0 - rng.random::<f64>()); // (0, max]
            (index::sample(rng, n, size).into_vec(), w)
        })
        .collect();
    Hypergraph::from_weighted_edges(n, &edges).unwrap()
}
