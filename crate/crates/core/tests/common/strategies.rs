//! Proptest strategies for hypergraphs and symmetric matrices.

use hypersync::hypergraph::Hypergraph;
use hypersync::matrix::SymMatrix;
use proptest::prelude::*;
use proptest::sample::{subsequence, Index};

fn edge(n: usize, max_size: usize) -> impl Strategy<Value = (Vec<usize>, f64)> {
    (subsequence((0..n).collect::<Vec<_>>(), 2..=max_size.min(n)), 0.05f64..5.0)
}

/// Weighted hypergraph; may be disconnected.
pub fn hypergraph(n_max: usize, max_edges: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=n_max).prop_flat_map(move |n| {
        prop::collection::vec(edge(n, max_size), 1..=max_edges)
            .prop_map(move |edges| Hypergraph::from_weighted_edges(n, &edges).unwrap())
    })
}

/// Weighted connected hypergraph: a random spanning tree of 2-edges plus
/// random extra edges.
pub fn connected(n_max: usize, max_extra: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=n_max).prop_flat_map(move |n| {
        let tree = prop::collection::vec((any::<Index>(), 0.05f64..5.0), n - 1);
        let extra = prop::collection::vec(edge(n, max_size), 0..=max_extra);
        (tree, extra).prop_map(move |(tree, extra)| {
            let mut edges: Vec<(Vec<usize>, f64)> = tree
                .iter()
                .enumerate()
                .map(|(i, (p, w))| (vec![p.index(i + 1), i + 1], *w))
                .collect();
            edges.extend(extra);
            Hypergraph::from_weighted_edges(n, &edges).unwrap()
        })
    })
}

/// Connected `m`-uniform hypergraph with unit weights: a hypertree where
/// each new edge shares one old vertex, plus extra `m`-edges.
pub fn connected_uniform(m_range: std::ops::RangeInclusive<usize>, max_tree: usize, max_extra: usize) -> impl Strategy<Value = Hypergraph> {
    (m_range, 1..=max_tree).prop_flat_map(move |(m, t)| {
        let n = 1 + t * (m - 1);
        let anchors = prop::collection::vec(any::<Index>(), t);
        let extra = prop::collection::vec(subsequence((0..n).collect::<Vec<_>>(), m), 0..=max_extra);
        (anchors, extra).prop_map(move |(anchors, extra)| {
            let mut edges: Vec<Vec<usize>> = Vec::new();
            let mut next = 1;
            for a in anchors {
                let mut e = vec![a.index(next)];
                e.extend(next..next + m - 1);
                next += m - 1;
                edges.push(e);
            }
            edges.extend(extra);
            let refs: Vec<&[usize]> = edges.iter().map(|e| e.as_slice()).collect();
            Hypergraph::from_edges(n, &refs).unwrap()
        })
    })
}

/// Dense symmetric matrix with entries in `[-scale, scale]`.
pub fn symmetric(n_range: std::ops::RangeInclusive<usize>, scale: f64) -> impl Strategy<Value = SymMatrix> {
    n_range.prop_flat_map(move |n| {
        prop::collection::vec(-scale..=scale, n * n).prop_map(move |raw| {
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    data[i * n + j] = raw[a * n + b];
                }
            }
            SymMatrix::from_row_major(n, data).unwrap()
        })
    })
}

/// Hypergraph together with a vector on its vertices.
pub fn with_vector(g: impl Strategy<Value = Hypergraph>, range: f64) -> impl Strategy<Value = (Hypergraph, Vec<f64>)> {
    g.prop_flat_map(move |g| {
        let n = g.n_vertices();
        (Just(g), prop::collection::vec(-range..=range, n))
    })
}
