//! Browser bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function so the numerics can be
//! tested natively; `JsError` only exists on the wasm side of the boundary.

use subdiff::geometry::{dijkstra, geometrize, subdiff_distance, GramSource};
use subdiff::graph::{gen_gabriel, Graph};
use subdiff::soe::{soe_scalar, SoeScheme};
use subdiff::special::mittag_leffler;
use subdiff::spectral::{laplacian, SpectralLaplacian};
use wasm_bindgen::prelude::*;

fn js(e: subdiff::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Flattened `(t, exact, soe)` triples on a log grid of `points` times.
pub fn curve(
    alpha: f64,
    lambda: f64,
    epsilon: f64,
    j: usize,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> subdiff::Result<Vec<f64>> {
    let sc = SoeScheme::certified(alpha, epsilon, j)?;
    if !(t_min > 0.0 && t_max > t_min) || points < 2 {
        return Err(subdiff::Error::Parameter(
            "need 0 < t_min < t_max and two points".into(),
        ));
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let t = (a + (b - a) * i as f64 / (points - 1) as f64).exp();
        out.push(t);
        out.push(mittag_leffler(alpha, -t.powf(alpha) * lambda)?);
        out.push(soe_scalar(&sc, t, lambda));
    }
    Ok(out)
}

/// Flattened `(a_j, b_j)` pairs in node order.
pub fn coefficients(alpha: f64, epsilon: f64, j: usize) -> subdiff::Result<Vec<f64>> {
    let sc = SoeScheme::certified(alpha, epsilon, j)?;
    Ok(sc.weights.iter().zip(&sc.nodes).flat_map(|(&a, &b)| [a, b]).collect())
}

#[wasm_bindgen]
pub fn relaxation_curve(
    alpha: f64,
    lambda: f64,
    epsilon: f64,
    j: usize,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    curve(alpha, lambda, epsilon, j, t_min, t_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn soe_coefficients(alpha: f64, epsilon: f64, j: usize) -> Result<Vec<f64>, JsError> {
    coefficients(alpha, epsilon, j).map_err(js)
}

/// A Gabriel graph with its spectral decomposition, kept alive between
/// path queries.
#[wasm_bindgen]
pub struct PathDemo {
    graph: Graph,
    spec: SpectralLaplacian,
}

impl PathDemo {
    pub fn build(n: usize, seed: u32) -> subdiff::Result<Self> {
        let graph = gen_gabriel(n, u64::from(seed))?;
        let spec = laplacian(&graph)?;
        Ok(Self { graph, spec })
    }

    /// `j = 0` uses the exact Mittag-Leffler kernel.
    pub fn path(
        &self,
        alpha: f64,
        t: f64,
        j: usize,
        epsilon: f64,
        src: usize,
        dst: usize,
    ) -> subdiff::Result<Vec<u32>> {
        let scheme;
        let source = if j == 0 {
            GramSource::Exact
        } else {
            scheme = SoeScheme::certified(alpha, epsilon, j)?;
            GramSource::Soe(&scheme)
        };
        let metric = subdiff_distance(alpha, t, &self.spec, source)?;
        let (p, _) = dijkstra(&geometrize(&metric, &self.graph)?, src, dst)?;
        Ok(p.vertices.iter().map(|&v| v as u32).collect())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

#[wasm_bindgen]
impl PathDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, seed: u32) -> Result<PathDemo, JsError> {
        Self::build(n, seed).map_err(js)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    /// Flattened `(x, y)` per vertex.
    pub fn coords(&self) -> Vec<f64> {
        self.graph
            .coords()
            .unwrap_or(&[])
            .iter()
            .flat_map(|p| [p[0], p[1]])
            .collect()
    }

    /// Flattened `(u, v)` per edge.
    pub fn edges(&self) -> Vec<u32> {
        self.graph
            .edges()
            .iter()
            .flat_map(|&(u, v)| [u as u32, v as u32])
            .collect()
    }

    /// Hop distance, or -1 when unreachable.
    pub fn hops(&self, src: usize, dst: usize) -> i32 {
        self.graph
            .bfs_distances(src)
            .get(dst)
            .copied()
            .flatten()
            .map_or(-1, |d| d as i32)
    }

    pub fn shortest_path(
        &self,
        alpha: f64,
        t: f64,
        j: usize,
        epsilon: f64,
        src: usize,
        dst: usize,
    ) -> Result<Vec<u32>, JsError> {
        self.path(alpha, t, j, epsilon, src, dst).map_err(js)
    }
}
