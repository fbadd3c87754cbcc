//! File formats: edge lists, trajectory and matrix CSV, run configurations,
//! and a seeded generator of synthetic hypergraphs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::{
    ContinuousConfig, DiscreteConfig, DynamicsError, MapSpec, State, Trajectory, DEFAULT_CONV_TOL,
    DEFAULT_DIV_TOL, DEFAULT_DT, DEFAULT_MAX_STEPS,
};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::matrix::SymMatrix;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input contains no data lines")]
    EmptyFile,
    #[error("line {line}: {source}")]
    Validation { line: usize, source: HypergraphError },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("label `{0}` cannot be written to an edge list")]
    UnrepresentableLabel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEdgeList {
    pub hypergraph: Hypergraph,
    /// Data lines naming a single vertex; the vertex is kept, the edge is not.
    pub dropped_singletons: usize,
}

/// Parses the edge-list format.
///
/// One hyperedge per line as whitespace-separated vertex labels, optionally
/// preceded by `w:<weight>`. Text after `#` is a comment. Labels are unified
/// across lines; vertex order is order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList, IoError> {
    let mut labels: Vec<&str> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut edges: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    let mut dropped = 0;
    let mut data_lines = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        data_lines += 1;
        let mut weight = 1.0;
        if let Some(w) = tokens.peek().and_then(|t| t.strip_prefix("w:")) {
            weight = w
                .parse::<f64>()
                .map_err(|_| parse_err(line_no, format!("invalid weight `{w}`")))?;
            if !(weight.is_finite() && weight > 0.0) {
                return Err(parse_err(line_no, format!("weight must be positive, got `{w}`")));
            }
            tokens.next();
        }
        let mut members = Vec::new();
        for t in tokens {
            let id = *index.entry(t).or_insert_with(|| {
                labels.push(t);
                labels.len() - 1
            });
            if members.contains(&id) {
                return Err(IoError::Validation {
                    line: line_no,
                    source: HypergraphError::DuplicateVertexInEdge { edge: edges.len(), vertex: t.to_string() },
                });
            }
            members.push(id);
        }
        match members.len() {
            0 => return Err(parse_err(line_no, "weight without vertices")),
            1 => dropped += 1,
            _ => {
                edges.push((members, weight));
                edge_lines.push(line_no);
            }
        }
    }
    if data_lines == 0 {
        return Err(IoError::EmptyFile);
    }
    let labels: Vec<String> = labels.into_iter().map(str::to_string).collect();
    let hypergraph = Hypergraph::from_weighted_edges(labels.len(), &edges)
        .map_err(|e| match e {
            HypergraphError::EmptyEdge { edge, .. }
            | HypergraphError::NonpositiveWeight { edge, .. }
            | HypergraphError::DuplicateVertexInEdge { edge, .. } => {
                IoError::Validation { line: edge_lines[edge], source: e }
            }
            other => IoError::Hypergraph(other),
        })?
        .with_labels(labels)?;
    Ok(ParsedEdgeList { hypergraph, dropped_singletons: dropped })
}

pub fn read_edge_list(path: &Path) -> Result<ParsedEdgeList, IoError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Serializes to the edge-list format. Vertices in no edge are written as
/// singleton lines so they survive a round trip.
pub fn write_edge_list(g: &Hypergraph) -> Result<String, IoError> {
    for l in g.labels() {
        if l.is_empty() || l.contains(char::is_whitespace) || l.contains('#') || l.starts_with("w:") {
            return Err(IoError::UnrepresentableLabel(l.clone()));
        }
    }
    let labels = g.labels();
    let mut out = String::new();
    for e in g.edges() {
        if e.weight() != 1.0 {
            let _ = write!(out, "w:{} ", e.weight());
        }
        let names: Vec<&str> = e.vertices().iter().map(|&u| labels[u].as_str()).collect();
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    for (u, d) in g.degrees().into_iter().enumerate() {
        if d == 0 {
            out.push_str(&labels[u]);
            out.push('\n');
        }
    }
    Ok(out)
}

pub const TRAJECTORY_HEADER: &str = "time,vertex,component,value,sync_error";

/// One row per sampled scalar, ordered by (time, vertex, component).
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * traj.samples.len());
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &traj.samples {
        let st = &s.state;
        for u in 0..st.n() {
            for (j, v) in st.vertex(u).iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{},{}", st.time(), u, j, v, s.sync_error);
            }
        }
    }
    out
}

pub fn export_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), IoError> {
    fs::write(path, trajectory_csv(traj))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub time: f64,
    pub vertex: usize,
    pub component: usize,
    pub value: f64,
    pub sync_error: f64,
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<CsvRow>, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TRAJECTORY_HEADER => {}
        Some(_) => return Err(parse_err(1, "unexpected header")),
        None => return Err(IoError::EmptyFile),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            let bad = || parse_err(i + 1, "malformed row");
            if f.len() != 5 {
                return Err(bad());
            }
            Ok(CsvRow {
                time: f[0].parse().map_err(|_| bad())?,
                vertex: f[1].parse().map_err(|_| bad())?,
                component: f[2].parse().map_err(|_| bad())?,
                value: f[3].parse().map_err(|_| bad())?,
                sync_error: f[4].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Row-per-line CSV without a header.
pub fn matrix_csv(m: &SymMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Discrete,
    Continuous,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Discrete => "discrete",
            Mode::Continuous => "continuous",
        }
    }
}

/// Parameters of one simulation run, stored as `key=value` lines.
///
/// The initial state is drawn uniformly from `[init_low, init_high)` by a
/// ChaCha8 generator seeded with `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub mode: Mode,
    pub hypergraph: Option<String>,
    pub output: Option<String>,
    pub epsilon: f64,
    pub f: MapSpec,
    pub g: MapSpec,
    pub k: usize,
    pub dt: f64,
    pub t_max: f64,
    pub max_steps: usize,
    pub conv_tol: f64,
    pub div_tol: f64,
    pub sample_every: usize,
    pub seed: u64,
    pub init_low: f64,
    pub init_high: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: "run".to_string(),
            mode: Mode::Discrete,
            hypergraph: None,
            output: None,
            epsilon: 0.1,
            f: MapSpec::Identity,
            g: MapSpec::Identity,
            k: 1,
            dt: DEFAULT_DT,
            t_max: 10.0,
            max_steps: DEFAULT_MAX_STEPS,
            conv_tol: DEFAULT_CONV_TOL,
            div_tol: DEFAULT_DIV_TOL,
            sample_every: 1,
            seed: 0,
            init_low: 0.0,
            init_high: 1.0,
        }
    }
}

impl RunConfig {
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario={}", self.scenario);
        let _ = writeln!(s, "mode={}", self.mode.as_str());
        if let Some(h) = &self.hypergraph {
            let _ = writeln!(s, "hypergraph={h}");
        }
        if let Some(o) = &self.output {
            let _ = writeln!(s, "output={o}");
        }
        let _ = writeln!(s, "epsilon={}", self.epsilon);
        let _ = writeln!(s, "f={}", self.f);
        let _ = writeln!(s, "g={}", self.g);
        let _ = writeln!(s, "k={}", self.k);
        let _ = writeln!(s, "dt={}", self.dt);
        let _ = writeln!(s, "t_max={}", self.t_max);
        let _ = writeln!(s, "max_steps={}", self.max_steps);
        let _ = writeln!(s, "conv_tol={}", self.conv_tol);
        let _ = writeln!(s, "div_tol={}", self.div_tol);
        let _ = writeln!(s, "sample_every={}", self.sample_every);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "init_low={}", self.init_low);
        let _ = writeln!(s, "init_high={}", self.init_high);
        s
    }

    /// Missing keys take their default; unknown keys are an error.
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, "expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || parse_err(line_no, format!("invalid value for `{key}`: `{value}`"));
            let map = |v: &str| v.parse::<MapSpec>().map_err(|e: DynamicsError| parse_err(line_no, e.to_string()));
            match key {
                "scenario" => c.scenario = value.to_string(),
                "mode" => {
                    c.mode = match value {
                        "discrete" => Mode::Discrete,
                        "continuous" => Mode::Continuous,
                        _ => return Err(bad()),
                    }
                }
                "hypergraph" => c.hypergraph = Some(value.to_string()),
                "output" => c.output = Some(value.to_string()),
                "epsilon" => c.epsilon = value.parse().map_err(|_| bad())?,
                "f" => c.f = map(value)?,
                "g" => c.g = map(value)?,
                "k" => c.k = value.parse().map_err(|_| bad())?,
                "dt" => c.dt = value.parse().map_err(|_| bad())?,
                "t_max" => c.t_max = value.parse().map_err(|_| bad())?,
                "max_steps" => c.max_steps = value.parse().map_err(|_| bad())?,
                "conv_tol" => c.conv_tol = value.parse().map_err(|_| bad())?,
                "div_tol" => c.div_tol = value.parse().map_err(|_| bad())?,
                "sample_every" => c.sample_every = value.parse().map_err(|_| bad())?,
                "seed" => c.seed = value.parse().map_err(|_| bad())?,
                "init_low" => c.init_low = value.parse().map_err(|_| bad())?,
                "init_high" => c.init_high = value.parse().map_err(|_| bad())?,
                _ => return Err(parse_err(line_no, format!("unknown key `{key}`"))),
            }
        }
        if c.k == 0 {
            return Err(parse_err(0, "k must be at least 1"));
        }
        if !(c.init_low <= c.init_high) {
            return Err(parse_err(0, "init_low must not exceed init_high"));
        }
        Ok(c)
    }

    pub fn initial_state(&self, n: usize) -> State {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let data = (0..n * self.k)
            .map(|_| {
                if self.init_low == self.init_high {
                    self.init_low
                } else {
                    rng.random_range(self.init_low..self.init_high)
                }
            })
            .collect();
        State::new(n, self.k, data).expect("sizes agree")
    }

    pub fn discrete(&self) -> DiscreteConfig {
        DiscreteConfig {
            f: self.f.clone(),
            g: self.g.clone(),
            eps: self.epsilon,
            max_steps: self.max_steps,
            conv_tol: self.conv_tol,
            div_tol: self.div_tol,
            sample_every: self.sample_every,
        }
    }

    pub fn continuous(&self) -> ContinuousConfig {
        ContinuousConfig {
            f: self.f.clone(),
            g: self.g.clone(),
            dt: self.dt,
            t_max: self.t_max,
            conv_tol: self.conv_tol,
            div_tol: self.div_tol,
            sample_every: self.sample_every,
        }
    }
}

/// Sizes of the synthetic stand-in for the reference interaction network.
pub const MATCHED_VERTICES: usize = 1808;
pub const MATCHED_EDGES: usize = 1431;

/// Connected random hypergraph with unit weights.
///
/// Edge sizes are uniform on `size_min..=size_max`. The first edges form a
/// spanning hypertree (each joins one covered vertex to fresh ones), the rest
/// are uniform random subsets. Fails if `n_edges` cannot cover `n` vertices.
pub fn generate_connected(
    n: usize,
    n_edges: usize,
    size_min: usize,
    size_max: usize,
    seed: u64,
) -> Result<Hypergraph, IoError> {
    let invalid = |m: &str| parse_err(0, m.to_string());
    if size_min < 2 || size_max < size_min || size_max > n {
        return Err(invalid("edge sizes must satisfy 2 <= min <= max <= n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges: Vec<(Vec<usize>, f64)> = Vec::with_capacity(n_edges);
    let mut covered = 1;
    while covered < n {
        if edges.len() == n_edges {
            return Err(invalid("too few edges to connect all vertices"));
        }
        let size = rng.random_range(size_min..=size_max);
        let fresh = (size - 1).min(n - covered);
        let mut e = vec![order[rng.random_range(0..covered)]];
        e.extend_from_slice(&order[covered..covered + fresh]);
        covered += fresh;
        // pad with covered vertices when fewer fresh ones remain
        while e.len() < size {
            let v = order[rng.random_range(0..covered)];
            if !e.contains(&v) {
                e.push(v);
            }
        }
        edges.push((e, 1.0));
    }
    while edges.len() < n_edges {
        let size = rng.random_range(size_min..=size_max);
        edges.push((index::sample(&mut rng, n, size).into_vec(), 1.0));
    }
    Ok(Hypergraph::from_weighted_edges(n, &edges)?)
}

/// Matched-size synthetic instance: 1808 vertices, 1431 edges of size 2 to 6.
pub fn generate_matched(seed: u64) -> Result<Hypergraph, IoError> {
    generate_connected(MATCHED_VERTICES, MATCHED_EDGES, 2, 6, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate_discrete, DiscreteConfig};
    use crate::operators::build_lw;

    #[test]
    fn parse_basic_examples() {
        let p = parse_edge_list("a b c\n").unwrap();
        assert_eq!(p.hypergraph.n_vertices(), 3);
        assert_eq!(p.hypergraph.n_edges(), 1);
        assert_eq!(p.hypergraph.edges()[0].weight(), 1.0);

        let p = parse_edge_list("w:2.5 a b\n# note\nb c d\n").unwrap();
        let w: Vec<f64> = p.hypergraph.edges().iter().map(|e| e.weight()).collect();
        assert_eq!(w, vec![2.5, 1.0]);
        assert_eq!(p.hypergraph.labels(), ["a", "b", "c", "d"]);

        let p = parse_edge_list("a\nb c\n").unwrap();
        assert_eq!(p.dropped_singletons, 1);
        assert_eq!(p.hypergraph.n_edges(), 1);
        assert_eq!(p.hypergraph.n_vertices(), 3);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_edge_list(""), Err(IoError::EmptyFile)));
        assert!(matches!(parse_edge_list("# only\n\n"), Err(IoError::EmptyFile)));
        assert!(matches!(parse_edge_list("a b\nw:x c d\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("a b\n\nw:-1 c d\n"), Err(IoError::Parse { line: 3, .. })));
        assert!(matches!(parse_edge_list("w:2\n"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("a b\na c a\n"), Err(IoError::Validation { line: 2, .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "w:0.1 x y z\nz q\nlonely\nw:3 q x\n";
        let p = parse_edge_list(text).unwrap();
        let back = parse_edge_list(&write_edge_list(&p.hypergraph).unwrap()).unwrap();
        assert_eq!(back.hypergraph, p.hypergraph);
        assert_eq!(back.dropped_singletons, 1);
    }

    #[test]
    fn trajectory_csv_rows_and_parse() {
        let g = Hypergraph::from_edges(3, &[&[0, 1, 2]]).unwrap();
        let mut cfg = DiscreteConfig::diffusion(0.1);
        cfg.max_steps = 1;
        let t = simulate_discrete(&State::scalar(vec![1.0, 0.0, 0.0]), &cfg, &build_lw(&g));
        let csv = trajectory_csv(&t);
        assert_eq!(csv.lines().count(), 7);
        let rows = parse_trajectory_csv(&csv).unwrap();
        assert_eq!(rows[3].time, 1.0);
        assert_eq!(rows[3].sync_error, t.samples[1].sync_error);
        assert_eq!(trajectory_csv(&t), csv);
    }

    #[test]
    fn run_config_round_trip() {
        let mut c = RunConfig::default();
        c.epsilon = 1.0 / 88.0;
        c.f = MapSpec::Sine(0.4);
        c.g = MapSpec::Cosine(1.0 / 3.0);
        c.mode = Mode::Continuous;
        c.output = Some("out.csv".into());
        c.seed = 17;
        assert_eq!(RunConfig::parse(&c.to_key_value()).unwrap(), c);
        c.f = "matrix:2:0.1,0.2,0.30000000000000004,-1e-7".parse().unwrap();
        c.k = 2;
        assert_eq!(RunConfig::parse(&c.to_key_value()).unwrap(), c);
        assert!(RunConfig::parse("bogus=1\n").is_err());
        assert!(RunConfig::parse("epsilon\n").is_err());
    }

    #[test]
    fn initial_state_is_seeded() {
        let c = RunConfig { seed: 5, init_low: -1.0, init_high: 1.0, ..Default::default() };
        let a = c.initial_state(10);
        assert_eq!(a, c.initial_state(10));
        assert!(a.data().iter().all(|v| (-1.0..1.0).contains(v)));
        assert_ne!(a, RunConfig { seed: 6, ..c }.initial_state(10));
    }

    #[test]
    fn generator_is_connected_and_deterministic() {
        let g = generate_connected(50, 30, 2, 5, 3).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.n_edges(), 30);
        assert_eq!(g, generate_connected(50, 30, 2, 5, 3).unwrap());
        let u = generate_connected(20, 15, 3, 3, 1).unwrap();
        assert_eq!(u.uniformity(), Some(3));
        assert!(u.is_connected());
        assert!(generate_connected(50, 3, 2, 3, 0).is_err());
    }
}
