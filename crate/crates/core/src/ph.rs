//! 0-dimensional persistence of sublevel filtrations on vertex-weighted graphs.
//!
//! Vertices enter the filtration at their own value and edges at the larger
//! of their endpoint values. Components are tracked with a union-find; on a
//! merge the younger component dies (elder rule).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::diagram::{Cornerpoint, PersistenceDiagram};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredGraph {
    values: Vec<f64>,
    edges: Vec<[usize; 2]>,
}

impl FilteredGraph {
    pub fn new(values: Vec<f64>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let graph = Self { values, edges };
        graph.validate()?;
        Ok(graph)
    }

    pub fn path(values: Vec<f64>) -> Result<Self> {
        let edges = (1..values.len()).map(|i| [i - 1, i]).collect();
        Self::new(values, edges)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGraph(format!("vertex {i} has a non-finite value")));
        }
        let n = self.values.len();
        for &[a, b] in &self.edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let graph: Self = serde_json::from_str(text)?;
        graph.validate()?;
        Ok(graph)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.values.len()];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Sorted, deduplicated list of the distinct vertex values.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = if self.rank[a] < self.rank[b] { (b, a) } else { (a, b) };
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        a
    }
}

/// Computes the 0-dimensional persistence diagram of the sublevel filtration.
///
/// Every connected component of the whole graph yields one cornerline born at
/// its minimum value. Zero-persistence pairs are discarded. When two merging
/// components were born at the same level, the one whose oldest vertex has
/// the smaller index survives.
pub fn zero_dim_persistence(graph: &FilteredGraph) -> Result<PersistenceDiagram> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let values = graph.values();
    let adj = graph.adjacency();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut uf = UnionFind::new(n);
    let mut added = vec![false; n];
    // oldest vertex of the component, indexed by union-find root
    let mut oldest: Vec<usize> = (0..n).collect();
    let mut points = Vec::new();

    let older = |a: usize, b: usize| -> bool { values[a] < values[b] || (values[a] == values[b] && a < b) };

    for &v in &order {
        added[v] = true;
        let level = values[v];
        for &w in &adj[v] {
            if !added[w] {
                continue;
            }
            let (rv, rw) = (uf.find(v), uf.find(w));
            if rv == rw {
                continue;
            }
            let (ov, ow) = (oldest[rv], oldest[rw]);
            let (survivor, victim) = if older(ov, ow) { (ov, ow) } else { (ow, ov) };
            let birth = values[victim];
            if birth < level {
                points.push(Cornerpoint {
                    birth,
                    death: level,
                    multiplicity: 1,
                });
            }
            let root = uf.union(rv, rw);
            oldest[root] = survivor;
        }
    }

    for v in 0..n {
        if uf.find(v) == v {
            points.push(Cornerpoint {
                birth: values[oldest[v]],
                death: f64::INFINITY,
                multiplicity: 1,
            });
        }
    }
    Ok(PersistenceDiagram::new(points))
}

/// Component id of every vertex in the sublevel set at `level`.
fn component_labels(graph: &FilteredGraph, adj: &[Vec<usize>], level: f64) -> Vec<Option<usize>> {
    let values = graph.values();
    let mut label = vec![None; values.len()];
    let mut next = 0;
    for start in 0..values.len() {
        if values[start] > level || label[start].is_some() {
            continue;
        }
        label[start] = Some(next);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if values[y] <= level && label[y].is_none() {
                    label[y] = Some(next);
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Persistent Betti number: components of the sublevel set at `u` that are
/// still distinct in the sublevel set at `v`.
///
/// Computed by breadth-first search, independently of the union-find sweep.
pub fn persistent_betti_0(graph: &FilteredGraph, u: f64, v: f64) -> Result<usize> {
    if !(u < v) {
        return Err(Error::InvalidPair { u, v });
    }
    let adj = graph.adjacency();
    Ok(betti_with_adjacency(graph, &adj, u, v))
}

fn betti_with_adjacency(graph: &FilteredGraph, adj: &[Vec<usize>], u: f64, v: f64) -> usize {
    let outer = component_labels(graph, adj, v);
    let mut seen: Vec<usize> = graph
        .values()
        .iter()
        .zip(&outer)
        .filter(|(&x, _)| x <= u)
        .filter_map(|(_, l)| *l)
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Multiplicity of `(u, v)` from the inclusion-exclusion of four persistent
/// Betti numbers at `u ± epsilon`, `v ± epsilon`.
pub fn multiplicity_oracle(graph: &FilteredGraph, u: f64, v: f64, epsilon: f64) -> Result<i64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(format!("epsilon {epsilon} must be positive")));
    }
    if !(u + epsilon < v - epsilon) {
        return Err(Error::InvalidEpsilon(format!(
            "u + epsilon ({}) must be below v - epsilon ({})",
            u + epsilon,
            v - epsilon
        )));
    }
    let distinct = graph.distinct_values();
    let min_gap = distinct.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if !(2.0 * epsilon < min_gap) {
        return Err(Error::InvalidEpsilon(format!(
            "epsilon {epsilon} must be below half the minimal value gap {min_gap}"
        )));
    }
    let adj = graph.adjacency();
    let b = |x: f64, y: f64| betti_with_adjacency(graph, &adj, x, y) as i64;
    Ok(
        b(u + epsilon, v - epsilon) - b(u - epsilon, v - epsilon) - b(u + epsilon, v + epsilon)
            + b(u - epsilon, v + epsilon),
    )
}

/// Row-major 2-D grid of filtration values.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension {
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// Reads a CSV of rows of decimal floats. `#` lines are comments.
    pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let row = record
                .iter()
                .map(|f| {
                    f.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid number `{f}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

/// Averages over `block × block` squares; border blocks are truncated and
/// averaged over the cells they actually contain.
pub fn downsample_blocks(grid: &Grid, block: usize) -> Result<Grid> {
    if block == 0 {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    let rows = grid.rows.div_ceil(block);
    let cols = grid.cols.div_ceil(block);
    let mut data = Vec::with_capacity(rows * cols);
    for br in 0..rows {
        for bc in 0..cols {
            let r_end = ((br + 1) * block).min(grid.rows);
            let c_end = ((bc + 1) * block).min(grid.cols);
            let mut sum = 0.0;
            let mut cells = 0usize;
            for r in br * block..r_end {
                for c in bc * block..c_end {
                    sum += grid.get(r, c);
                    cells += 1;
                }
            }
            data.push(sum / cells as f64);
        }
    }
    Grid::new(rows, cols, data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "8")]
    Eight,
}

impl std::str::FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4" => Ok(Self::Four),
            "8" => Ok(Self::Eight),
            other => Err(Error::InvalidArgument(format!(
                "connectivity must be 4 or 8, got `{other}`"
            ))),
        }
    }
}

/// One vertex per cell (row-major index), edges between adjacent cells.
pub fn grid_to_graph(grid: &Grid, connectivity: Connectivity) -> Result<FilteredGraph> {
    if grid.data.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (rows, cols) = (grid.rows, grid.cols);
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push([idx(r, c), idx(r, c + 1)]);
            }
            if r + 1 < rows {
                edges.push([idx(r, c), idx(r + 1, c)]);
                if connectivity == Connectivity::Eight {
                    if c + 1 < cols {
                        edges.push([idx(r, c), idx(r + 1, c + 1)]);
                    }
                    if c > 0 {
                        edges.push([idx(r, c), idx(r + 1, c - 1)]);
                    }
                }
            }
        }
    }
    FilteredGraph::new(grid.data.clone(), edges)
}
