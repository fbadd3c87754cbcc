//! Multi-body diffusion operators of a hypergraph.
//!
//! All builders return matrices that are *negatives* of Laplacians: they are
//! negative semidefinite and annihilate the all-ones vector.
//!
//! * `H_e = |e|/(|e|-1) · ((1/|e|) χ_e χ_eᵀ − D_e)`, one per hyperedge
//! * `L_w = Σ_e w(e) H_e`, the weighted operator
//! * `C`, the same sum with unit weights, equal to `Σ_m m/(m-1) B_m`
//! * `B_m = (1/m) χ χᵀ − D` over the `m`-edges only
//! * the negative graph Laplacian of the clique expansion
//!
//! For the single 3-edge, `L_w` coincides with the negative normalized
//! Laplacian of the triangle graph; no separate normalized operator is
//! provided.

use crate::hypergraph::{Hyperedge, Hypergraph};
use crate::matrix::{MatrixError, SymMatrix};

/// Vertex × edge 0/1 incidence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix {
    n_vertices: usize,
    n_edges: usize,
    data: Vec<u8>,
}

impl IncidenceMatrix {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn get(&self, u: usize, e: usize) -> u8 {
        self.data[u * self.n_edges + e]
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.n_edges)
            .map(|e| (0..self.n_vertices).map(|u| self.get(u, e) as usize).sum())
            .collect()
    }

    /// `χ χᵀ` as a dense symmetric matrix: entry `(u, v)` counts shared edges.
    pub fn gram(&self) -> SymMatrix {
        let n = self.n_vertices;
        let mut data = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                data[u * n + v] =
                    (0..self.n_edges).map(|e| (self.get(u, e) * self.get(v, e)) as f64).sum();
            }
        }
        SymMatrix::symmetrized(n, data)
    }
}

pub fn incidence(g: &Hypergraph) -> IncidenceMatrix {
    let (n, m) = (g.n_vertices(), g.n_edges());
    let mut data = vec![0u8; n * m];
    for (e, edge) in g.edges().iter().enumerate() {
        for &u in edge.vertices() {
            data[u * m + e] = 1;
        }
    }
    IncidenceMatrix { n_vertices: n, n_edges: m, data }
}

// Adds w·H_e into a dense row-major buffer: −w on the diagonal of e,
// w/(|e|−1) between distinct members of e.
fn accumulate_edge(data: &mut [f64], n: usize, vertices: &[usize], w: f64) {
    let off = w / (vertices.len() as f64 - 1.0);
    for &u in vertices {
        for &v in vertices {
            if u == v {
                data[u * n + u] -= w;
            } else {
                data[u * n + v] += off;
            }
        }
    }
}

/// `H_e` embedded in an `n × n` matrix.
pub fn edge_operator(edge: &Hyperedge, n: usize) -> SymMatrix {
    assert!(edge.len() >= 2 && edge.vertices().iter().all(|&u| u < n));
    let mut data = vec![0.0; n * n];
    accumulate_edge(&mut data, n, edge.vertices(), 1.0);
    SymMatrix::symmetrized(n, data)
}

/// `L_w = Σ_e w(e) H_e`, accumulated sequentially in edge order.
pub fn build_lw(g: &Hypergraph) -> SymMatrix {
    let n = g.n_vertices();
    let mut data = vec![0.0; n * n];
    for e in g.edges() {
        accumulate_edge(&mut data, n, e.vertices(), e.weight());
    }
    SymMatrix::symmetrized(n, data)
}

/// Unweighted operator `C`; weights of `g` are ignored.
pub fn build_c(g: &Hypergraph) -> SymMatrix {
    build_lw(&g.with_unit_weights())
}

/// `B_m = (1/m) χ χᵀ − D` over the `m`-edges of `g` (others are dropped).
pub fn build_bm(g: &Hypergraph, m: usize) -> SymMatrix {
    assert!(m >= 2, "B_m needs m >= 2");
    let gm = g.edges_of_size(m);
    let chi = incidence(&gm);
    let degrees = gm.degrees();
    let gram = chi.gram();
    let n = g.n_vertices();
    let inv_m = 1.0 / m as f64;
    let mut data: Vec<f64> = gram.as_slice().iter().map(|v| v * inv_m).collect();
    for (u, &d) in degrees.iter().enumerate() {
        data[u * n + u] -= d as f64;
    }
    SymMatrix::symmetrized(n, data)
}

/// Negative graph Laplacian of the clique expansion: 1 on adjacency, −deg on the diagonal.
pub fn clique_laplacian(g: &Hypergraph) -> SymMatrix {
    let n = g.n_vertices();
    let mut data = vec![0.0; n * n];
    for e in g.clique_expansion().edges() {
        let (u, v) = (e.vertices()[0], e.vertices()[1]);
        data[u * n + v] = 1.0;
        data[v * n + u] = 1.0;
        data[u * n + u] -= 1.0;
        data[v * n + v] -= 1.0;
    }
    SymMatrix::symmetrized(n, data)
}

/// `L_w x` computed edge by edge without forming the matrix:
/// `(L_w x)(u) = Σ_{e∋u} w(e)/(|e|−1) Σ_{v∈e} (x(v) − x(u))`.
pub fn apply_pointwise(g: &Hypergraph, x: &[f64]) -> Result<Vec<f64>, MatrixError> {
    check_len(g, x)?;
    let mut out = vec![0.0; x.len()];
    PointwiseOperator::new(g).apply_into(x, &mut out);
    Ok(out)
}

/// `Σ_e w(e)/(|e|−1) Σ_{{u,v}⊂e} (x(v) − x(u))²`.
///
/// This equals `−⟨x, L_w x⟩`. The sum of squares is non-negative while
/// `L_w` is negative semidefinite, so the identity carries a minus sign.
pub fn dirichlet_energy(g: &Hypergraph, x: &[f64]) -> Result<f64, MatrixError> {
    check_len(g, x)?;
    let mut total = 0.0;
    for e in g.edges() {
        let vs = e.vertices();
        let mut s = 0.0;
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                let d = x[v] - x[u];
                s += d * d;
            }
        }
        total += e.weight() / (vs.len() as f64 - 1.0) * s;
    }
    Ok(total)
}

fn check_len(g: &Hypergraph, x: &[f64]) -> Result<(), MatrixError> {
    if x.len() != g.n_vertices() {
        return Err(MatrixError::DimensionMismatch { expected: g.n_vertices(), got: x.len() });
    }
    Ok(())
}

/// Matrix-free `L_w` for large hypergraphs; costs `O(Σ|e|)` per product.
#[derive(Debug, Clone)]
pub struct PointwiseOperator {
    n: usize,
    edges: Vec<(Vec<usize>, f64)>,
}

impl PointwiseOperator {
    pub fn new(g: &Hypergraph) -> Self {
        Self {
            n: g.n_vertices(),
            edges: g.edges().iter().map(|e| (e.vertices().to_vec(), e.weight())).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (vs, w) in &self.edges {
            let m = vs.len() as f64;
            let c = w / (m - 1.0);
            // offsets from the first member vanish exactly on constant input
            let x0 = x[vs[0]];
            let sum: f64 = vs.iter().map(|&v| x[v] - x0).sum();
            for &u in vs {
                out[u] += c * (sum - m * (x[u] - x0));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Hypergraph {
        Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap()
    }

    #[test]
    fn incidence_shapes() {
        let chi = incidence(&triangle());
        assert_eq!(chi.column_sums(), vec![3]);
        let two = Hypergraph::from_edges(4, &[&[0, 1], &[2, 3]]).unwrap();
        let chi = incidence(&two);
        assert_eq!((chi.n_vertices(), chi.n_edges()), (4, 2));
        assert_eq!(chi.column_sums(), vec![2, 2]);
        assert_eq!((chi.get(0, 0), chi.get(0, 1), chi.get(3, 1)), (1, 0, 1));
        let g = Hypergraph::from_edges(8, &[&[0, 1, 2, 3], &[1, 4, 5], &[2, 6, 7]]).unwrap();
        assert_eq!(incidence(&g).column_sums(), vec![4, 3, 3]);
    }

    #[test]
    fn edge_operator_triangle_and_pair() {
        let h = edge_operator(&triangle().edges()[0], 3);
        assert_eq!(
            h.to_rows(),
            vec![vec![-1.0, 0.5, 0.5], vec![0.5, -1.0, 0.5], vec![0.5, 0.5, -1.0]]
        );
        let pair = Hypergraph::from_edges(2, &[&[0, 1]]).unwrap();
        assert_eq!(edge_operator(&pair.edges()[0], 2).to_rows(), vec![vec![-1.0, 1.0], vec![1.0, -1.0]]);
        let g = Hypergraph::from_edges(4, &[&[1, 2]]).unwrap();
        let h = edge_operator(&g.edges()[0], 4);
        for i in 0..4 {
            for j in 0..4 {
                if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
                    assert_eq!(h.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn bm_single_three_edge() {
        let b = build_bm(&triangle(), 3);
        let third = 1.0 / 3.0;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { third - 1.0 } else { third };
                assert!((b.get(i, j) - expect).abs() < 1e-15);
            }
        }
        assert_eq!(build_bm(&triangle(), 2), SymMatrix::zeros(3));
    }

    #[test]
    fn c_ignores_weights_and_empty_is_zero() {
        let g = Hypergraph::from_weighted_edges(3, &[(vec![0, 1, 2], 3.5)]).unwrap();
        assert_eq!(build_c(&g), build_lw(&triangle()));
        assert_eq!(build_lw(&g), build_lw(&triangle()).scale(3.5));
        let empty = Hypergraph::from_weighted_edges(3, &[]).unwrap();
        assert_eq!(build_c(&empty), SymMatrix::zeros(3));
    }

    #[test]
    fn clique_laplacian_small() {
        let l = clique_laplacian(&triangle());
        assert_eq!(
            l.to_rows(),
            vec![vec![-2.0, 1.0, 1.0], vec![1.0, -2.0, 1.0], vec![1.0, 1.0, -2.0]]
        );
        let pair = Hypergraph::from_edges(2, &[&[0, 1]]).unwrap();
        assert_eq!(clique_laplacian(&pair).to_rows(), vec![vec![-1.0, 1.0], vec![1.0, -1.0]]);
    }

    #[test]
    fn pointwise_and_energy_small_cases() {
        let t = triangle();
        assert_eq!(apply_pointwise(&t, &[2.0, 2.0, 2.0]).unwrap(), vec![0.0, 0.0, 0.0]);
        assert_eq!(apply_pointwise(&t, &[1.0, 0.0, 0.0]).unwrap(), vec![-1.0, 0.5, 0.5]);
        assert!(apply_pointwise(&t, &[1.0]).is_err());

        assert_eq!(dirichlet_energy(&t, &[4.0, 4.0, 4.0]).unwrap(), 0.0);
        let pair = Hypergraph::from_weighted_edges(2, &[(vec![0, 1], 2.5)]).unwrap();
        let (a, b) = (1.5, -0.5);
        assert!((dirichlet_energy(&pair, &[a, b]).unwrap() - 2.5 * (a - b) * (a - b)).abs() < 1e-14);
    }

    #[test]
    fn c_matches_sum_of_scaled_bm() {
        let g = Hypergraph::from_edges(8, &[&[0, 1, 2, 3], &[1, 4, 5], &[2, 6, 7], &[0, 7]]).unwrap();
        let mut sum = SymMatrix::zeros(8);
        for m in 2..=g.rank() {
            sum = sum.add(&build_bm(&g, m).scale(m as f64 / (m as f64 - 1.0)));
        }
        assert!(sum.max_abs_diff(&build_c(&g)) < 1e-14);
    }
}
