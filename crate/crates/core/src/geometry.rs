//! Subdiffusive distances, edge geometrization and shortest paths.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use nalgebra::DMatrix;

use crate::error::{check_alpha, Error, Result};
use crate::fractional::ml_operator;
use crate::graph::Graph;
use crate::par;
use crate::soe::{soe_operator, SoeScheme};
use crate::special::gamma;
use crate::spectral::{SpectralLaplacian, SymEig};

pub const GEODESIC_CAP: usize = 10_000;
const NEG_CLAMP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Exact,
    Soe(usize),
}

impl std::fmt::Display for SourceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceKind::Exact => write!(f, "exact"),
            SourceKind::Soe(j) => write!(f, "soe{j}"),
        }
    }
}

/// Where the Gram operator comes from.
#[derive(Debug, Clone, Copy)]
pub enum GramSource<'a> {
    Exact,
    Soe(&'a SoeScheme),
}

impl GramSource<'_> {
    pub fn kind(&self) -> SourceKind {
        match self {
            GramSource::Exact => SourceKind::Exact,
            GramSource::Soe(s) => SourceKind::Soe(s.j),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubdiffusiveMetric {
    pub alpha: f64,
    pub t: f64,
    /// Squared distances.
    pub d: DMatrix<f64>,
    pub gram: DMatrix<f64>,
    pub source: SourceKind,
}

impl SubdiffusiveMetric {
    pub fn distance(&self, v: usize, w: usize) -> f64 {
        self.d[(v, w)].sqrt()
    }

    /// Smallest eigenvalue of the Gram operator.
    pub fn gram_min_eigenvalue(&self) -> f64 {
        SymEig::new(&self.gram).eigenvalues[0]
    }
}

fn metric_from_gram(alpha: f64, t: f64, gram: DMatrix<f64>, source: SourceKind) -> SubdiffusiveMetric {
    let n = gram.nrows();
    let mut d = DMatrix::zeros(n, n);
    for v in 0..n {
        for w in v + 1..n {
            let x = gram[(v, v)] + gram[(w, w)] - 2.0 * gram[(v, w)];
            // tiny negatives are rounding
            let x = if (-NEG_CLAMP..0.0).contains(&x) { 0.0 } else { x };
            d[(v, w)] = x;
            d[(w, v)] = x;
        }
    }
    SubdiffusiveMetric {
        alpha,
        t,
        d,
        gram,
        source,
    }
}

pub fn subdiff_distance(
    alpha: f64,
    t: f64,
    spec: &SpectralLaplacian,
    source: GramSource,
) -> Result<SubdiffusiveMetric> {
    let gram = match source {
        GramSource::Exact => ml_operator(alpha, t, spec)?.matrix,
        GramSource::Soe(s) => {
            if s.alpha != alpha {
                return Err(Error::param(format!(
                    "scheme order {} does not match alpha = {alpha}",
                    s.alpha
                )));
            }
            soe_operator(s, t, spec)?.matrix
        }
    };
    Ok(metric_from_gram(alpha, t, gram, source.kind()))
}

/// A graph with a positive weight on every edge.
#[derive(Debug, Clone)]
pub struct WeightedPathGraph {
    pub base: Graph,
    /// Aligned with `base.edges()`.
    pub weights: Vec<f64>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedPathGraph {
    pub fn new(base: Graph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != base.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: base.edge_count(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::param(format!(
                "edge weight {w} is not a finite non-negative number"
            )));
        }
        let mut adj = vec![Vec::new(); base.n()];
        for (&(u, v), &w) in base.edges().iter().zip(&weights) {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for row in &mut adj {
            row.sort_by_key(|&(v, _)| v);
        }
        Ok(Self { base, weights, adj })
    }

    pub fn uniform(base: Graph, w: f64) -> Result<Self> {
        let weights = vec![w; base.edge_count()];
        Self::new(base, weights)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj
            .get(u)?
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|k| self.adj[u][k].1)
    }
}

pub fn geometrize(metric: &SubdiffusiveMetric, graph: &Graph) -> Result<WeightedPathGraph> {
    if metric.d.nrows() != graph.n() {
        return Err(Error::DimensionMismatch {
            expected: graph.n(),
            got: metric.d.nrows(),
        });
    }
    let weights = graph.edges().iter().map(|&(u, v)| metric.distance(u, v)).collect();
    WeightedPathGraph::new(graph.clone(), weights)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPath {
    pub vertices: Vec<usize>,
}

impl VertexPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self { vertices }
    }

    /// Edges as ordered pairs `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.vertices
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_walk_in(&self, g: &Graph) -> bool {
        self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    pub fn joined(&self) -> String {
        self.vertices
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn distances_from(wg: &WeightedPathGraph, src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; wg.base.n()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Item(0.0, src));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &wg.adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    dist
}

fn check_vertex(g: &Graph, v: usize) -> Result<()> {
    if v < g.n() {
        Ok(())
    } else {
        Err(Error::param(format!("vertex {v} out of range for n = {}", g.n())))
    }
}

/// Minimum-weight path; among equal-weight paths the lexicographically
/// smallest vertex sequence wins.
///
/// Runs Dijkstra from both ends, then walks forward from `src` always taking
/// the smallest neighbour that stays on some optimal path.
pub fn dijkstra(wg: &WeightedPathGraph, src: usize, dst: usize) -> Result<(VertexPath, f64)> {
    check_vertex(&wg.base, src)?;
    check_vertex(&wg.base, dst)?;
    let from_src = distances_from(wg, src);
    let total = from_src[dst];
    if !total.is_finite() {
        return Err(Error::Unreachable { src, dst });
    }
    let to_dst = distances_from(wg, dst);
    let tol = 1e-12 * total.max(1.0);
    let mut path = vec![src];
    let mut u = src;
    while u != dst {
        let next = wg.adj[u]
            .iter()
            .find(|&&(v, w)| {
                (from_src[u] + w - from_src[v]).abs() <= tol
                    && (from_src[v] + to_dst[v] - total).abs() <= tol
                    && !path.contains(&v)
            })
            .map(|&(v, _)| v);
        match next {
            Some(v) => {
                path.push(v);
                u = v;
            }
            None => return Err(Error::Unreachable { src, dst }),
        }
    }
    Ok((VertexPath::new(path), total))
}

/// Every geodesic (fewest-edge path) from `src` to `dst`, lexicographic order.
pub fn all_geodesics(graph: &Graph, src: usize, dst: usize) -> Result<Vec<VertexPath>> {
    check_vertex(graph, src)?;
    check_vertex(graph, dst)?;
    let ds = graph.bfs_distances(src);
    let dt = graph.bfs_distances(dst);
    let Some(len) = ds[dst] else {
        return Err(Error::Unreachable { src, dst });
    };
    let mut out = Vec::new();
    let mut stack = vec![src];
    fn walk(
        g: &Graph,
        ds: &[Option<usize>],
        dt: &[Option<usize>],
        len: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<VertexPath>,
    ) -> Result<()> {
        let u = *stack.last().unwrap();
        if stack.len() == len + 1 {
            if out.len() == GEODESIC_CAP {
                return Err(Error::GeodesicCap(GEODESIC_CAP));
            }
            out.push(VertexPath::new(stack.clone()));
            return Ok(());
        }
        let step = stack.len();
        for &v in g.neighbors(u) {
            if ds[v] == Some(step) && dt[v] == Some(len - step) {
                stack.push(v);
                walk(g, ds, dt, len, stack, out)?;
                stack.pop();
            }
        }
        Ok(())
    }
    walk(graph, &ds, &dt, len, &mut stack, &mut out)?;
    Ok(out)
}

/// `δ_e = d_u + d_v - 2`.
pub fn edge_degree(graph: &Graph, e: (usize, usize)) -> Result<usize> {
    if !graph.has_edge(e.0, e.1) {
        return Err(Error::param(format!("({}, {}) is not an edge", e.0, e.1)));
    }
    Ok(graph.degree(e.0) + graph.degree(e.1) - 2)
}

pub fn edge_degree_sum(graph: &Graph, p: &VertexPath) -> Result<usize> {
    p.edges().into_iter().map(|e| edge_degree(graph, e)).sum()
}

/// First-order small-time path weight, summed edge by edge:
/// `√2 - (√2/4) s (d_v + d_w + 2)` with `s = t^α/Γ(α+1)`.
pub fn path_weight_expansion(alpha: f64, t: f64, graph: &Graph, p: &VertexPath) -> Result<f64> {
    check_alpha(alpha, true)?;
    if !p.is_walk_in(graph) {
        return Err(Error::param("path uses a non-edge"));
    }
    let s = t.powf(alpha) / gamma(alpha + 1.0);
    let r2 = std::f64::consts::SQRT_2;
    Ok(p.edges()
        .iter()
        .map(|&(v, w)| r2 - 0.25 * r2 * s * (graph.degree(v) + graph.degree(w) + 2) as f64)
        .sum())
}

/// Edit distance between the edge sequences of two paths.
pub fn levenshtein_paths(p1: &VertexPath, p2: &VertexPath) -> usize {
    strsim::generic_levenshtein(&p1.edges(), &p2.edges())
}

#[derive(Debug, Clone)]
pub struct PathRecord {
    pub t: f64,
    pub path: VertexPath,
    pub weight: f64,
    pub levenshtein_to_geodesic: usize,
    pub is_geodesic: bool,
}

#[derive(Debug, Clone)]
pub struct PathExperiment {
    pub source: SourceKind,
    pub records: Vec<PathRecord>,
    pub geodesics: Vec<VertexPath>,
    /// Number of grid times each edge appears on the selected path.
    pub edge_usage: HashMap<(usize, usize), usize>,
}

impl PathExperiment {
    pub fn mean_levenshtein(&self) -> f64 {
        let n = self.records.len().max(1) as f64;
        self.records
            .iter()
            .map(|r| r.levenshtein_to_geodesic as f64)
            .sum::<f64>()
            / n
    }
}

/// Subdiffusive shortest paths across a time grid, compared to the geodesics.
pub fn path_experiment(
    graph: &Graph,
    spec: &SpectralLaplacian,
    alpha: f64,
    source: GramSource,
    times: &[f64],
    src: usize,
    dst: usize,
) -> Result<PathExperiment> {
    let geodesics = all_geodesics(graph, src, dst)?;
    let records: Vec<Result<PathRecord>> = par::map(times, |&t| {
        let metric = subdiff_distance(alpha, t, spec, source)?;
        let wg = geometrize(&metric, graph)?;
        let (path, weight) = dijkstra(&wg, src, dst)?;
        let lev = geodesics
            .iter()
            .map(|g| levenshtein_paths(&path, g))
            .min()
            .unwrap_or(usize::MAX);
        Ok(PathRecord {
            t,
            is_geodesic: lev == 0,
            levenshtein_to_geodesic: lev,
            path,
            weight,
        })
    });
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    let mut edge_usage = HashMap::new();
    for r in &records {
        for e in r.path.edges() {
            *edge_usage.entry(e).or_insert(0) += 1;
        }
    }
    Ok(PathExperiment {
        source: source.kind(),
        records,
        geodesics,
        edge_usage,
    })
}

/// `((E_α(-t^α L))_ij, t^{αd}/Γ(αd+1) (A^d)_ij)` with `d = d(i, j)`.
pub fn small_t_entry_check(
    alpha: f64,
    t: f64,
    spec: &SpectralLaplacian,
    graph: &Graph,
    i: usize,
    j: usize,
) -> Result<(f64, f64)> {
    check_vertex(graph, i)?;
    check_vertex(graph, j)?;
    let d = graph.bfs_distances(i)[j].ok_or(Error::Unreachable { src: i, dst: j })?;
    let lhs = ml_operator(alpha, t, spec)?.matrix[(i, j)];
    let a = graph.adjacency();
    let mut ad = DMatrix::identity(graph.n(), graph.n());
    for _ in 0..d {
        ad = &ad * &a;
    }
    let ad_ = alpha * d as f64;
    let rhs = t.powf(ad_) / gamma(ad_ + 1.0) * ad[(i, j)];
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::laplacian;

    #[test]
    fn zero_time_metric() {
        let g = Graph::cycle(5);
        let spec = laplacian(&g).unwrap();
        let m = subdiff_distance(0.5, 0.0, &spec, GramSource::Exact).unwrap();
        for v in 0..5 {
            for w in 0..5 {
                let want = if v == w { 0.0 } else { 2.0 };
                assert!((m.d[(v, w)] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lexicographic_tie_break() {
        // two equal routes 0-1-3 and 0-2-3
        let g = Graph::new(4, [(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        let wg = WeightedPathGraph::uniform(g, 1.0).unwrap();
        let (p, w) = dijkstra(&wg, 0, 3).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 3]);
        assert_eq!(w, 2.0);
        let (p, _) = dijkstra(&wg, 3, 0).unwrap();
        assert_eq!(p.vertices, vec![3, 1, 0]);
    }

    #[test]
    fn unreachable() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let wg = WeightedPathGraph::uniform(g.clone(), 1.0).unwrap();
        assert!(matches!(dijkstra(&wg, 0, 2), Err(Error::Unreachable { .. })));
        assert!(matches!(all_geodesics(&g, 0, 2), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn geodesic_cap() {
        // chain of 14 diamonds has 2^14 geodesics
        let k = 14;
        let mut edges = Vec::new();
        for i in 0..k {
            let (a, x, y, b) = (3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3);
            edges.extend([(a, x), (a, y), (x, b), (y, b)]);
        }
        let g = Graph::new(3 * k + 1, edges).unwrap();
        assert!(matches!(all_geodesics(&g, 0, 3 * k), Err(Error::GeodesicCap(_))));
    }

    #[test]
    fn levenshtein_is_on_edges() {
        let a = VertexPath::new(vec![0, 1, 2]);
        let b = VertexPath::new(vec![2, 1, 0]);
        // same edges, reversed order
        assert_eq!(levenshtein_paths(&a, &b), 2);
        assert_eq!(levenshtein_paths(&a, &a), 0);
    }
}
