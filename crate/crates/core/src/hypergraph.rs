//! Finite weighted hypergraphs and their combinatorial queries.
//!
//! Vertices carry string labels externally and dense `0..n` indices
//! internally. Every matrix in the crate is indexed by the internal index.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypergraphError {
    #[error("hypergraph must have at least one vertex")]
    NoVertices,
    #[error("edge {edge} has {size} vertices, at least 2 are required")]
    EmptyEdge { edge: usize, size: usize },
    #[error("edge {edge} lists vertex `{vertex}` more than once")]
    DuplicateVertexInEdge { edge: usize, vertex: String },
    #[error("edge {edge} references unknown vertex `{label}`")]
    UnknownVertexLabel { edge: usize, label: String },
    #[error("edge {edge} references vertex index {index} outside 0..{n}")]
    VertexOutOfRange { edge: usize, index: usize, n: usize },
    #[error("edge {edge} has non-positive weight {weight}")]
    NonpositiveWeight { edge: usize, weight: f64 },
    #[error("vertex label `{0}` is declared twice")]
    DuplicateLabel(String),
    #[error("hypergraph is disconnected")]
    DisconnectedHypergraph,
    #[error("hypergraph is not uniform")]
    NotUniform,
}

/// A hyperedge: a sorted, duplicate-free vertex set of size at least two.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    vertices: Vec<usize>,
    weight: f64,
}

impl Hyperedge {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.vertices.binary_search(&u).is_ok()
    }
}

/// Weighted hypergraph `G = (V, E, w)` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    labels: Vec<String>,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Validates labelled input. Each raw edge is a list of labels plus a weight.
    pub fn validate<S: AsRef<str>>(
        raw_vertices: &[S],
        raw_edges: &[(Vec<S>, f64)],
    ) -> Result<Self, HypergraphError> {
        if raw_vertices.is_empty() {
            return Err(HypergraphError::NoVertices);
        }
        let mut index = HashMap::with_capacity(raw_vertices.len());
        let mut labels = Vec::with_capacity(raw_vertices.len());
        for (i, v) in raw_vertices.iter().enumerate() {
            let v = v.as_ref();
            if index.insert(v.to_string(), i).is_some() {
                return Err(HypergraphError::DuplicateLabel(v.to_string()));
            }
            labels.push(v.to_string());
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (e, (members, weight)) in raw_edges.iter().enumerate() {
            let mut ids = Vec::with_capacity(members.len());
            for m in members {
                let m = m.as_ref();
                let &id = index.get(m).ok_or_else(|| HypergraphError::UnknownVertexLabel {
                    edge: e,
                    label: m.to_string(),
                })?;
                ids.push(id);
            }
            edges.push(make_edge(e, ids, *weight, &labels)?);
        }
        Ok(Self { labels, edges })
    }

    /// Builds a hypergraph on vertices `0..n` labelled by their index.
    pub fn from_weighted_edges(
        n: usize,
        raw_edges: &[(Vec<usize>, f64)],
    ) -> Result<Self, HypergraphError> {
        if n == 0 {
            return Err(HypergraphError::NoVertices);
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (e, (members, weight)) in raw_edges.iter().enumerate() {
            if let Some(&bad) = members.iter().find(|&&u| u >= n) {
                return Err(HypergraphError::VertexOutOfRange { edge: e, index: bad, n });
            }
            edges.push(make_edge(e, members.clone(), *weight, &labels)?);
        }
        Ok(Self { labels, edges })
    }

    /// Unit-weight convenience constructor.
    pub fn from_edges(n: usize, raw_edges: &[&[usize]]) -> Result<Self, HypergraphError> {
        let raw: Vec<(Vec<usize>, f64)> = raw_edges.iter().map(|e| (e.to_vec(), 1.0)).collect();
        Self::from_weighted_edges(n, &raw)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, HypergraphError> {
        assert_eq!(labels.len(), self.labels.len(), "label count mismatch");
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(HypergraphError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Number of hyperedges containing `u`.
    pub fn degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(u)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices()];
        for e in &self.edges {
            for &u in &e.vertices {
                d[u] += 1;
            }
        }
        d
    }

    /// Largest hyperedge cardinality, 0 for an edgeless hypergraph.
    pub fn rank(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).max().unwrap_or(0)
    }

    /// `Some(m)` when every hyperedge has exactly `m` vertices.
    pub fn uniformity(&self) -> Option<usize> {
        let m = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == m).then_some(m)
    }

    /// Same hypergraph with every weight set to one.
    pub fn with_unit_weights(&self) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = 1.0;
        }
        g
    }

    /// Multiplies every weight by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite(), "scale factor must be positive");
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= factor;
        }
        g
    }

    /// Sub-hypergraph keeping only edges of cardinality `m`.
    pub fn edges_of_size(&self, m: usize) -> Self {
        Self {
            labels: self.labels.clone(),
            edges: self.edges.iter().filter(|e| e.len() == m).cloned().collect(),
        }
    }

    /// Incidence lists: for each vertex, the indices of edges containing it.
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_vertices()];
        for (i, e) in self.edges.iter().enumerate() {
            for &u in &e.vertices {
                inc[u].push(i);
            }
        }
        inc
    }

    /// Sorted neighbour sets of the hyperedge-adjacency relation.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.n_vertices()];
        for e in &self.edges {
            for &u in &e.vertices {
                for &v in &e.vertices {
                    if u != v {
                        adj[u].insert(v);
                    }
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Maximum over vertex pairs of the number of edges containing both.
    pub fn max_codegree(&self) -> usize {
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.edges {
            for (a, &u) in e.vertices.iter().enumerate() {
                for &v in &e.vertices[a + 1..] {
                    *counts.entry((u, v)).or_default() += 1;
                }
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// BFS distances from `source` over the vertex–edge incidence structure;
    /// `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let inc = self.incident_edges();
        self.bfs_with(&inc, source)
    }

    fn bfs_with(&self, inc: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
        let n = self.n_vertices();
        let mut dist = vec![None; n];
        let mut edge_seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &ei in &inc[u] {
                if edge_seen[ei] {
                    continue;
                }
                edge_seen[ei] = true;
                for &v in &self.edges[ei].vertices {
                    if dist[v].is_none() {
                        dist[v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let inc = self.incident_edges();
        let n = self.n_vertices();
        let mut comp_of = vec![usize::MAX; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let members: Vec<usize> = self
                .bfs_with(&inc, s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            for &v in &members {
                comp_of[v] = id;
            }
            comps.push(members);
        }
        comps
    }

    /// Largest shortest-path length between any two vertices.
    pub fn diameter(&self) -> Result<usize, HypergraphError> {
        let inc = self.incident_edges();
        let mut diam = 0;
        for s in 0..self.n_vertices() {
            for d in self.bfs_with(&inc, s) {
                diam = diam.max(d.ok_or(HypergraphError::DisconnectedHypergraph)?);
            }
        }
        Ok(diam)
    }

    /// Simple graph joining every co-occurring pair, unit weights, no multi-edges.
    pub fn clique_expansion(&self) -> Self {
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            for (a, &u) in e.vertices.iter().enumerate() {
                for &v in &e.vertices[a + 1..] {
                    pairs.insert((u, v));
                }
            }
        }
        Self {
            labels: self.labels.clone(),
            edges: pairs
                .into_iter()
                .map(|(u, v)| Hyperedge { vertices: vec![u, v], weight: 1.0 })
                .collect(),
        }
    }

    /// Induced sub-hypergraph on the largest component together with the map
    /// from new index to original index. Ties go to the component holding the
    /// smallest original vertex index.
    pub fn largest_connected_component(&self) -> (Self, Vec<usize>) {
        let comps = self.components();
        let mut best = &comps[0];
        for c in &comps[1..] {
            if c.len() > best.len() {
                best = c;
            }
        }
        let mut new_index = vec![usize::MAX; self.n_vertices()];
        for (i, &v) in best.iter().enumerate() {
            new_index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.vertices.iter().all(|&u| new_index[u] != usize::MAX))
            .map(|e| Hyperedge {
                vertices: e.vertices.iter().map(|&u| new_index[u]).collect(),
                weight: e.weight,
            })
            .collect();
        let labels = best.iter().map(|&v| self.labels[v].clone()).collect();
        (Self { labels, edges }, best.clone())
    }
}

fn make_edge(
    e: usize,
    mut ids: Vec<usize>,
    weight: f64,
    labels: &[String],
) -> Result<Hyperedge, HypergraphError> {
    if ids.len() < 2 {
        return Err(HypergraphError::EmptyEdge { edge: e, size: ids.len() });
    }
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(HypergraphError::DuplicateVertexInEdge {
            edge: e,
            vertex: labels[w[0]].clone(),
        });
    }
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(HypergraphError::NonpositiveWeight { edge: e, weight });
    }
    Ok(Hyperedge { vertices: ids, weight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eight_vertex() -> Hypergraph {
        Hypergraph::from_edges(8, &[&[0, 1, 2, 3], &[1, 4, 5], &[2, 6, 7]]).unwrap()
    }

    #[test]
    fn validate_minimal_and_errors() {
        let g = Hypergraph::validate(&["a", "b", "c"], &[(vec!["a", "b", "c"], 1.0)]).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (3, 1));

        let dup = Hypergraph::validate(&["a", "b"], &[(vec!["a", "a", "b"], 1.0)]);
        assert!(matches!(dup, Err(HypergraphError::DuplicateVertexInEdge { .. })));

        let neg = Hypergraph::validate(&["a", "b"], &[(vec!["a", "b"], -1.0)]);
        assert!(matches!(neg, Err(HypergraphError::NonpositiveWeight { .. })));

        let small = Hypergraph::validate(&["a", "b"], &[(vec!["a"], 1.0)]);
        assert!(matches!(small, Err(HypergraphError::EmptyEdge { .. })));

        let unknown = Hypergraph::validate(&["a", "b"], &[(vec!["a", "z"], 1.0)]);
        assert!(matches!(unknown, Err(HypergraphError::UnknownVertexLabel { .. })));
    }

    #[test]
    fn connectivity() {
        assert!(Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap().is_connected());
        assert!(!Hypergraph::from_edges(4, &[&[0, 1], &[2, 3]]).unwrap().is_connected());
        assert!(eight_vertex().is_connected());
    }

    #[test]
    fn degrees() {
        let g = eight_vertex();
        // v2 in the figure is index 1
        assert_eq!(g.degree(1), 2);
        assert_eq!(Hypergraph::from_edges(3, &[&[0, 1]]).unwrap().degree(2), 0);
        let t = Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap();
        assert!((0..3).all(|u| t.degree(u) == 1));
        assert_eq!(g.degrees(), vec![1, 2, 2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn clique_expansion_counts() {
        let t = Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap().clique_expansion();
        assert_eq!(t.n_edges(), 3);
        assert_eq!(eight_vertex().clique_expansion().n_edges(), 12);
        let path = Hypergraph::from_edges(3, &[&[0, 1], &[1, 2]]).unwrap();
        assert_eq!(path.clique_expansion(), path);
    }

    #[test]
    fn diameters() {
        assert_eq!(Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap().diameter(), Ok(1));
        assert_eq!(Hypergraph::from_edges(3, &[&[0, 1], &[1, 2]]).unwrap().diameter(), Ok(2));
        assert_eq!(eight_vertex().diameter(), Ok(3));
        assert_eq!(
            Hypergraph::from_edges(4, &[&[0, 1], &[2, 3]]).unwrap().diameter(),
            Err(HypergraphError::DisconnectedHypergraph)
        );
    }

    #[test]
    fn largest_component_selection() {
        let g = Hypergraph::from_weighted_edges(5, &[(vec![3, 4], 2.0), (vec![0, 1, 2], 1.5)]).unwrap();
        let (lcc, map) = g.largest_connected_component();
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(lcc.n_edges(), 1);
        assert_eq!(lcc.edges()[0].weight(), 1.5);

        // tie: {0,3} vs {1,2}; the one with vertex 0 wins
        let tie = Hypergraph::from_edges(4, &[&[1, 2], &[0, 3]]).unwrap();
        let (lcc, map) = tie.largest_connected_component();
        assert_eq!(map, vec![0, 3]);
        assert_eq!(lcc.edges()[0].vertices(), &[0, 1]);
        assert_eq!(lcc.labels(), &["0".to_string(), "3".to_string()]);
    }

    #[test]
    fn codegree_and_uniformity() {
        let g = Hypergraph::from_edges(4, &[&[0, 1, 2], &[0, 1, 3]]).unwrap();
        assert_eq!(g.max_codegree(), 2);
        assert_eq!(g.uniformity(), Some(3));
        assert_eq!(eight_vertex().uniformity(), None);
        assert_eq!(eight_vertex().rank(), 4);
    }
}
