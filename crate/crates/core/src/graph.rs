//! Simple undirected graphs, random generators and edge-list I/O.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const ER_MAX_ATTEMPTS: usize = 1000;
const GABRIEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    /// Canonical edges `(u, v)` with `u < v`, sorted lexicographically.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    coords: Option<Vec<[f64; 2]>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canon = Vec::new();
        let mut seen = HashSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            canon.push(e);
        }
        canon.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Self {
            n,
            edges: canon,
            adj,
            coords: None,
        })
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 2]>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: coords.len(),
            });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Hop distances from `src`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Common named graphs used throughout the tests and the CLI.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star graph is simple")
    }
}

/// Uniform random simple graph with exactly `m` edges.
pub fn gen_erdos_renyi(n: usize, m: usize, seed: u64, require_connected: bool) -> Result<Graph> {
    let max_edges = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max_edges {
        return Err(Error::Unsatisfiable(format!(
            "{m} edges requested but {n} vertices allow at most {max_edges}"
        )));
    }
    if require_connected && n > 1 && m < n - 1 {
        return Err(Error::Unsatisfiable(format!("{m} edges cannot connect {n} vertices")));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    for attempt in 0..ER_MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut chosen = HashSet::with_capacity(m);
        while chosen.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                chosen.insert((u.min(v), u.max(v)));
            }
        }
        let g = Graph::new(n, chosen)?;
        if !require_connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryBudget(ER_MAX_ATTEMPTS))
}

/// Gabriel graph of `n` uniform points in the rectangle `[0, 2] × [0, 1]`.
pub fn gen_gabriel(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param("a Gabriel graph needs at least two points"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|_| [2.0 * rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    gabriel_from_points(&pts)
}

/// An edge `vw` exists iff no third point lies in the closed disk with
/// diameter `vw` (boundary ties suppress the edge).
pub fn gabriel_from_points(pts: &[[f64; 2]]) -> Result<Graph> {
    let n = pts.len();
    let mut edges = Vec::new();
    for v in 0..n {
        for w in v + 1..n {
            if gabriel_edge_ok(pts, v, w) {
                edges.push((v, w));
            }
        }
    }
    Graph::new(n, edges)?.with_coords(pts.to_vec())
}

pub fn gabriel_edge_ok(pts: &[[f64; 2]], v: usize, w: usize) -> bool {
    let mid = [(pts[v][0] + pts[w][0]) / 2.0, (pts[v][1] + pts[w][1]) / 2.0];
    let r2 = sq_dist(pts[v], pts[w]) / 4.0;
    !pts.iter()
        .enumerate()
        .any(|(u, &p)| u != v && u != w && sq_dist(p, mid) <= r2 + GABRIEL_TOL)
}

fn sq_dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Serializes as "u v" lines preceded by a `# n <count>` comment, so that
/// isolated trailing vertices survive a round trip.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("# n {}\n", g.n);
    for &(u, v) in &g.edges {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut declared_n = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            let mut it = c.split_whitespace();
            if it.next() == Some("n") {
                if let Some(Ok(n)) = it.next().map(str::parse::<usize>) {
                    declared_n = Some(n);
                }
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_err(lineno, format!("expected \"u v\", got {raw:?}")));
        }
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("not a vertex index: {s:?}")))
        };
        let (u, v) = (idx(fields[0])?, idx(fields[1])?);
        if u == v {
            return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(lineno, format!("duplicate edge ({u}, {v})")));
        }
        if let Some(n) = declared_n {
            if u >= n || v >= n {
                return Err(parse_err(lineno, format!("vertex index out of range for n = {n}")));
            }
        }
        edges.push((u, v));
    }
    let max_idx = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = declared_n.unwrap_or(max_idx);
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Graph::new(n, edges)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_edge_list(&text, path)
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, to_edge_list(g)).map_err(io_err(path))
}

pub fn to_coords_csv(coords: &[[f64; 2]]) -> String {
    let mut s = String::from("vertex,x,y\n");
    for (i, p) in coords.iter().enumerate() {
        let _ = writeln!(s, "{i},{:.16e},{:.16e}", p[0], p[1]);
    }
    s
}

pub fn parse_coords_csv(text: &str, n: usize, path: &Path) -> Result<Vec<[f64; 2]>> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    };
    let mut out: Vec<Option<[f64; 2]>> = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("vertex")) {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(parse_err(i + 1, format!("expected vertex,x,y, got {raw:?}")));
        }
        let v: usize = f[0]
            .parse()
            .map_err(|_| parse_err(i + 1, format!("bad vertex {:?}", f[0])))?;
        if v >= n {
            return Err(parse_err(i + 1, format!("vertex {v} out of range")));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_err(i + 1, format!("bad coordinate {s:?}")))
        };
        out[v] = Some([num(f[1])?, num(f[2])?]);
    }
    out.into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| parse_err(0, format!("missing coordinates for vertex {v}"))))
        .collect()
}
