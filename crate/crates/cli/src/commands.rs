use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use subdiff::ctrw::{conditional_geodesic_prob, inverse_subordinator_mean, occupation, waiting_survival};
use subdiff::fractional::{fde_time_derivative, ml_operator};
use subdiff::geometry::{edge_degree_sum, path_experiment, GramSource};
use subdiff::graph::{gen_erdos_renyi, gen_gabriel, read_edge_list, to_coords_csv, to_edge_list, Graph};
use subdiff::memory::{convexity_profile, memory_bias, Role};
use subdiff::soe::{
    exact_on_grid, operator_error, probe_errors, random_probes, scalar_error_on, select_window, spectral_grid,
    SoeScheme, WindowMode,
};
use subdiff::special::{gamma, mittag_leffler};
use subdiff::spectral::laplacian;
use subdiff::volterra::{
    build_supra_laplacian, caputo_volterra_check, g_hat_soe, k_hat_from, multiplex_diffuse, multiplicative_residual,
    resolvent_gap, resolvent_identity_residual,
};
use subdiff::waiting::{hazard_soe, pdf_soe, survival_exact, survival_soe, TimeForm, WaitingLaw};
use subdiff::Error;

use crate::output::{emit, num, write_atomic, Csv};
use crate::{
    Clock, CtrwArgs, GenGraphArgs, GraphArgs, HeatmapArgs, MemoryArgs, PathsArgs, SoeTableArgs, SurvivalArgs,
    VolterraArgs, WindowTableArgs,
};

/// Bad flag combination or value that clap cannot see.
#[derive(Debug)]
pub struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Category label and exit code for an error chain.
pub fn categorize(e: &anyhow::Error) -> (&'static str, u8) {
    if e.downcast_ref::<Usage>().is_some() {
        return ("usage", 2);
    }
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::Parameter(_) | Error::DimensionMismatch { .. }) => ("parameter", 3),
        Some(Error::Parse { .. } | Error::InvalidGraph(_) | Error::EmptyGraph) => ("input", 4),
        Some(Error::Io { .. }) => ("io", 5),
        Some(Error::Unsatisfiable(_) | Error::RetryBudget(_)) => ("generator", 6),
        Some(Error::Unreachable { .. } | Error::GeodesicCap(_)) => ("graph", 7),
        Some(Error::SingularDerivative | Error::Conditioning(_)) => ("numeric", 8),
        None => ("io", 5),
    }
}

enum DefaultGraph {
    Er(usize, usize),
    Gabriel(usize),
    Path(usize),
}

fn load_graph(args: &GraphArgs, seed: u64, default: DefaultGraph) -> Result<Graph> {
    let g = if let Some(p) = &args.graph {
        read_edge_list(p)?
    } else if let Some(nm) = &args.er {
        gen_erdos_renyi(nm[0], nm[1], seed, true)?
    } else if let Some(n) = args.gabriel {
        gen_gabriel(n, seed)?
    } else {
        match default {
            DefaultGraph::Er(n, m) => gen_erdos_renyi(n, m, seed, true)?,
            DefaultGraph::Gabriel(n) => gen_gabriel(n, seed)?,
            DefaultGraph::Path(n) => Graph::path(n),
        }
    };
    Ok(g)
}

/// `steps` log-spaced points from `lo` to `hi` inclusive.
fn log_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || steps == 0 || (steps == 1 && hi != lo) {
        return Err(usage(format!(
            "time grid needs 0 < t-lo <= t-hi and t-steps >= 1 (got {lo}, {hi}, {steps})"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..steps)
        .map(|i| match i {
            0 => lo,
            _ if i == steps - 1 => hi,
            _ => (a + (b - a) * i as f64 / (steps - 1) as f64).exp(),
        })
        .collect())
}

fn farthest_from(g: &Graph, src: usize) -> Result<usize> {
    if src >= g.n() {
        return Err(usage(format!("source vertex {src} out of range for n = {}", g.n())));
    }
    let d = g.bfs_distances(src);
    let best = d.iter().flatten().copied().max().unwrap_or(0);
    if best == 0 {
        bail!(Error::InvalidGraph(format!("vertex {src} has no reachable neighbour")));
    }
    Ok(d.iter().position(|&x| x == Some(best)).unwrap())
}

pub fn gen_graph(a: &GenGraphArgs) -> Result<()> {
    let g = load_graph(&a.graph, a.seed, DefaultGraph::Er(250, 1000))?;
    emit(a.out.as_deref(), &to_edge_list(&g))?;
    if let Some(p) = &a.coords {
        let coords = g
            .coords()
            .ok_or_else(|| usage("--coords needs a generator with coordinates (--gabriel)"))?;
        write_atomic(p, &to_coords_csv(coords))?;
    }
    Ok(())
}

pub fn window_table(a: &WindowTableArgs) -> Result<()> {
    let mut csv = Csv::new(&["alpha", "epsilon", "theta_min", "y_min", "theta_max", "y_max"]);
    for &alpha in &a.alpha {
        for &eps in &a.epsilon {
            let w = select_window(alpha, eps, WindowMode::General)?;
            csv.row(&[
                num(alpha),
                num(eps),
                num(w.theta_min),
                num(w.y_min()),
                num(w.theta_max),
                num(w.y_max()),
            ]);
        }
    }
    emit(a.out.as_deref(), &csv.into_string())
}

pub fn soe_table(a: &SoeTableArgs) -> Result<()> {
    let sc = SoeScheme::certified(a.alpha, a.epsilon, a.j)?;
    let mut idx: Vec<usize> = (0..sc.j).collect();
    idx.sort_by(|&x, &y| sc.weights[y].total_cmp(&sc.weights[x]).then(x.cmp(&y)));
    let mut csv = Csv::new(&["rank", "index", "a", "b", "raw_weight", "mass_win"]);
    for (rank, &i) in idx.iter().take(a.top.unwrap_or(sc.j)).enumerate() {
        csv.row(&[
            (rank + 1).to_string(),
            i.to_string(),
            num(sc.weights[i]),
            num(sc.nodes[i]),
            num(sc.raw_weights[i]),
            num(sc.mass_win),
        ]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}

pub fn error_heatmap(a: &HeatmapArgs) -> Result<()> {
    let g = load_graph(&a.graph, a.seed, DefaultGraph::Er(250, 1000))?;
    let spec = laplacian(&g)?;
    let js = a.j.clone().unwrap_or_else(|| {
        let step = if a.full { 2 } else { 5 };
        (1..=120 / step).map(|k| k * step).collect()
    });
    let steps = a.t_steps.unwrap_or(if a.full { 300 } else { 30 });
    let times = log_grid(a.t_lo, a.t_hi, steps)?;
    let eig: Vec<f64> = spec.eigenvalues().iter().copied().collect();
    let lmax = eig.iter().copied().fold(0.0, f64::max);
    let grid = spectral_grid(lmax, a.grid_size, &eig);
    let probe = random_probes(g.n(), 1, a.seed).remove(0);
    let mut header = vec!["alpha", "t", "j", "log10_scalar_error", "mass_error", "rel_error"];
    if a.operator {
        header.push("operator_error");
    }
    let mut csv = Csv::new(&header);
    for &alpha in &a.alpha {
        let schemes = js
            .iter()
            .map(|&j| SoeScheme::certified(alpha, a.epsilon, j))
            .collect::<subdiff::Result<Vec<_>>>()?;
        let rows: Vec<Result<Vec<Vec<String>>>> = times
            .par_iter()
            .map(|&t| {
                let exact = exact_on_grid(alpha, t, &grid);
                schemes
                    .iter()
                    .map(|sc| {
                        let err = scalar_error_on(sc, t, &grid, &exact);
                        let (rel, mass) = probe_errors(sc, t, &spec, &probe)?;
                        let mut row = vec![
                            num(alpha),
                            num(t),
                            sc.j.to_string(),
                            num(err.log10()),
                            num(mass),
                            num(rel),
                        ];
                        if a.operator {
                            row.push(num(operator_error(sc, t, &spec, 200, 1e-10)?.value));
                        }
                        Ok(row)
                    })
                    .collect()
            })
            .collect();
        for block in rows {
            for r in block? {
                csv.row(&r);
            }
        }
    }
    emit(a.out.as_deref(), &csv.into_string())
}

pub fn survival(a: &SurvivalArgs) -> Result<()> {
    let form = match a.clock {
        Clock::Fractional => TimeForm::Fractional,
        Clock::Linear => TimeForm::Linear,
    };
    let times = log_grid(a.t_lo, a.t_hi, a.t_steps)?;
    let mut csv = Csv::new(&["alpha", "degree", "t", "s_exact", "s_soe", "pdf_soe", "hazard_soe"]);
    for &alpha in &a.alpha {
        let sc = SoeScheme::certified(alpha, a.epsilon, a.j)?;
        for &d in &a.degree {
            let law = WaitingLaw::new(alpha, d)?;
            for &t in &times {
                csv.row(&[
                    num(alpha),
                    d.to_string(),
                    num(t),
                    num(survival_exact(&law, t)?),
                    num(survival_soe(&sc, &law, t, form)?),
                    num(pdf_soe(&sc, &law, t, form)?),
                    num(hazard_soe(&sc, &law, t, form)?),
                ]);
            }
        }
    }
    emit(a.out.as_deref(), &csv.into_string())
}

pub fn paths(a: &PathsArgs) -> Result<()> {
    let g = load_graph(&a.graph, a.seed, DefaultGraph::Gabriel(if a.full { 600 } else { 120 }))?;
    let spec = laplacian(&g)?;
    let dst = match a.dst {
        Some(d) => d,
        None => farthest_from(&g, a.src)?,
    };
    let times = log_grid(a.t_lo, a.t_hi, a.t_steps)?;
    std::fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;

    let mut paths = Csv::new(&[
        "alpha",
        "source",
        "t",
        "path_vertices",
        "path_weight",
        "levenshtein_to_nearest_geodesic",
        "is_geodesic",
    ]);
    let mut usage_csv = Csv::new(&["alpha", "source", "u", "v", "count"]);
    let mut summary = Csv::new(&["alpha", "source", "mean_levenshtein", "geodesic_fraction"]);
    let mut geodesics = None;
    for &alpha in &a.alpha {
        let schemes =
            a.j.iter()
                .map(|&j| SoeScheme::certified(alpha, a.epsilon, j))
                .collect::<subdiff::Result<Vec<_>>>()?;
        let mut sources: Vec<GramSource> = schemes.iter().map(GramSource::Soe).collect();
        sources.push(GramSource::Exact);
        for src in sources {
            let exp = path_experiment(&g, &spec, alpha, src, &times, a.src, dst)?;
            let name = exp.source.to_string();
            for r in &exp.records {
                paths.row(&[
                    num(alpha),
                    name.clone(),
                    num(r.t),
                    r.path.joined(),
                    num(r.weight),
                    r.levenshtein_to_geodesic.to_string(),
                    r.is_geodesic.to_string(),
                ]);
            }
            let mut used: Vec<_> = exp.edge_usage.iter().collect();
            used.sort();
            for (&(u, v), &c) in used {
                usage_csv.row(&[num(alpha), name.clone(), u.to_string(), v.to_string(), c.to_string()]);
            }
            let frac = exp.records.iter().filter(|r| r.is_geodesic).count() as f64 / exp.records.len() as f64;
            summary.row(&[num(alpha), name, num(exp.mean_levenshtein()), num(frac)]);
            geodesics.get_or_insert(exp.geodesics);
        }
    }
    let mut geo = Csv::new(&["index", "hops", "edge_degree_sum", "path"]);
    for (i, p) in geodesics.unwrap_or_default().iter().enumerate() {
        geo.row(&[
            i.to_string(),
            p.len().saturating_sub(1).to_string(),
            edge_degree_sum(&g, p)?.to_string(),
            p.joined(),
        ]);
    }
    write_atomic(&a.out.join("paths.csv"), &paths.into_string())?;
    write_atomic(&a.out.join("edge_usage.csv"), &usage_csv.into_string())?;
    write_atomic(&a.out.join("geodesics.csv"), &geo.into_string())?;
    write_atomic(&a.out.join("summary.csv"), &summary.into_string())?;
    write_atomic(&a.out.join("graph.txt"), &to_edge_list(&g))?;
    if let Some(c) = g.coords() {
        write_atomic(&a.out.join("coords.csv"), &to_coords_csv(c))?;
    }
    Ok(())
}

fn unit(n: usize, v: usize) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_fn(n, |i, _| if i == v { 1.0 } else { 0.0 })
}

pub fn memory_report(a: &MemoryArgs) -> Result<()> {
    let g = load_graph(&a.graph, a.seed, DefaultGraph::Er(20, 40))?;
    let spec = laplacian(&g)?;
    if a.src >= g.n() {
        return Err(usage(format!("source vertex {} out of range for n = {}", a.src, g.n())));
    }
    let times = log_grid(a.t_lo, a.t_hi, a.t_steps)?;
    let e = unit(g.n(), a.src);
    let mut csv = Csv::new(&[
        "alpha",
        "t",
        "vertex",
        "role",
        "x_prime",
        "x_double_prime",
        "prediction_holds",
        "late_half_bias",
    ]);
    for &alpha in &a.alpha {
        for r in convexity_profile(alpha, &spec, a.src, &times)? {
            // bias over [t/2, t], away from the t^{α-1} blow-up at 0
            let half = r.t / 2.0;
            let d = |s: f64| fde_time_derivative(alpha, half + s, &spec, &e).map(|x| x[r.vertex]);
            d(0.0)?;
            let bias = memory_bias(half, a.k, |s| d(s).unwrap_or(f64::NAN))?;
            csv.row(&[
                num(alpha),
                num(r.t),
                r.vertex.to_string(),
                match r.role {
                    Role::Source => "source".into(),
                    Role::Neighbor => "neighbor".into(),
                },
                num(r.d1),
                num(r.d2),
                r.matches_prediction().to_string(),
                bias.to_string(),
            ]);
        }
    }
    emit(a.out.as_deref(), &csv.into_string())
}

pub fn ctrw(a: &CtrwArgs) -> Result<()> {
    let g = load_graph(&a.graph, a.seed, DefaultGraph::Path(3))?;
    let dst = match a.dst {
        Some(d) => d,
        None => farthest_from(&g, a.src)?,
    };
    if a.src >= g.n() || dst >= g.n() {
        return Err(usage("--src/--dst out of range"));
    }
    let spec = laplacian(&g)?;
    let times = log_grid(a.t_lo, a.t_hi, a.t_steps)?;
    let degree = g.degree(a.src) as f64;
    let mut csv = Csv::new(&["quantity", "alpha", "t", "n_samples", "estimate", "stderr", "reference"]);
    let n = a.samples;
    for &alpha in &a.alpha {
        for (k, &t) in times.iter().enumerate() {
            let seed = a.seed.wrapping_add(k as u64);
            let w = waiting_survival(alpha, degree, t, n, seed)?;
            let w_ref = mittag_leffler(alpha, -degree * t.powf(alpha))?;
            let e = inverse_subordinator_mean(alpha, t, n, seed)?;
            let e_ref = t.powf(alpha) / gamma(1.0 + alpha);
            let occ = occupation(&g, alpha, t, a.src, n, seed)?;
            let p = occ[dst];
            let p_ref = ml_operator(alpha, t, &spec)?.matrix[(a.src, dst)];
            let geo = conditional_geodesic_prob(&g, alpha, t, a.src, dst, n, seed)?;
            let rows = [
                (w.quantity, w.estimate, w.stderr, w_ref, n),
                (e.quantity, e.estimate, e.stderr, e_ref, n),
                (
                    format!("occupation_{dst}"),
                    p,
                    (p * (1.0 - p) / n as f64).sqrt(),
                    p_ref,
                    n,
                ),
                (
                    "geodesic_probability".into(),
                    geo.estimate.unwrap_or(f64::NAN),
                    geo.stderr,
                    f64::NAN,
                    geo.events,
                ),
            ];
            for (q, est, se, r, count) in rows {
                csv.row(&[q, num(alpha), num(t), count.to_string(), num(est), num(se), num(r)]);
            }
        }
    }
    emit(a.out.as_deref(), &csv.into_string())
}

/// Rates of the first five nodes of a small scheme: distinct and well scaled.
fn multiplicative_case(alpha: f64, epsilon: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let sc = SoeScheme::certified(alpha, epsilon, 10)?;
    let pick: Vec<usize> = (0..5).map(|i| 5 + i).collect();
    Ok((
        pick.iter().map(|&i| sc.nodes[i]).collect(),
        pick.iter().map(|&i| sc.weights[i]).collect(),
    ))
}

pub fn volterra_check(a: &VolterraArgs) -> Result<()> {
    let g = load_graph(&a.graph, a.seed, DefaultGraph::Er(30, 90))?;
    let spec = laplacian(&g)?;
    let lambda2 = spec.lambda2().unwrap_or(1.0);
    let mut csv = Csv::new(&["kind", "check", "alpha", "s", "j", "value", "bound", "within_bound"]);
    let mut residual = |check: &str, alpha: f64, s: f64, j: String, value: f64, bound: f64| {
        csv.row(&[
            "residual".into(),
            check.into(),
            num(alpha),
            num(s),
            j,
            num(value),
            num(bound),
            (value <= bound).to_string(),
        ]);
    };
    let mut diagnostics = Vec::new();
    for &alpha in &a.alpha {
        for &s in &a.s {
            let cv = spec
                .eigenvalues()
                .iter()
                .map(|&l| caputo_volterra_check(alpha, l, s))
                .collect::<subdiff::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            residual("caputo_volterra", alpha, s, String::new(), cv, 1e-14);
            for &j in &a.j {
                let sc = SoeScheme::certified(alpha, a.epsilon, j)?;
                let gs = g_hat_soe(&sc.weights, &sc.nodes, s, &spec)?;
                let (k, _) = k_hat_from(&gs, &spec)?;
                let r = resolvent_identity_residual(&gs, &k, &spec)?;
                residual("resolvent_identity", alpha, s, j.to_string(), r, 1e-10);
                let gap = resolvent_gap(alpha, &sc.weights, &sc.nodes, s, &spec)?;
                diagnostics.push((alpha, s, j, gap));
            }
        }
        let (betas, gammas) = multiplicative_case(alpha, a.epsilon)?;
        let m = multiplicative_residual(&betas, &gammas, lambda2, 1.0)?;
        residual("multiplicative", alpha, f64::NAN, betas.len().to_string(), m, 1e-12);
        let j = a.j.iter().copied().min().unwrap_or(10);
        let sc = SoeScheme::certified(alpha, a.epsilon, j)?;
        let t = 1.0;
        let supra = build_supra_laplacian(&spec, &sc.nodes, 0.0)?;
        let phi = unit(g.n(), 0);
        let agg = multiplex_diffuse(&supra, &sc.weights, &phi, t)?.aggregate;
        let direct = subdiff::soe::soe_operator(&sc, t, &spec)?.matrix * &phi;
        residual(
            "multiplex_decoupled",
            alpha,
            f64::NAN,
            j.to_string(),
            (agg - direct).amax(),
            1e-12,
        );
    }
    for (alpha, s, j, gap) in diagnostics {
        csv.row(&[
            "diagnostic".into(),
            "resolvent_gap".into(),
            num(alpha),
            num(s),
            j.to_string(),
            num(gap),
            num(f64::NAN),
            String::new(),
        ]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}
