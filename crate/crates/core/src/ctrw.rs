//! Monte-Carlo simulation of the time-changed walk.
//!
//! Each vertex holds the walker for a Mittag-Leffler time with rate equal to
//! its degree, then the walker jumps to a uniform neighbour. Every walk or
//! sample index gets its own ChaCha stream under one master seed, so the
//! output does not depend on the thread schedule.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{check_alpha, Error, Result};
use crate::graph::Graph;
use crate::par;

/// Independent generator for sample `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One-sided stable variate with `E[e^{-sS}] = e^{-s^α}` (Kanter's formula).
pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    // open interval keeps sin(u) away from zero
    let u = PI * rng.random::<f64>().max(f64::MIN_POSITIVE);
    let e: f64 = Exp1.sample(rng);
    // log form: the 1/(1-α) power overflows as α → 1
    let r = (1.0 - alpha) / alpha;
    let ln_s = ((alpha * u).sin() / u.sin()).ln() / alpha + r * (((1.0 - alpha) * u).sin() / (alpha * u).sin()).ln()
        - r * e.ln();
    ln_s.exp()
}

/// Waiting time with survival `E_α(-d t^α)`: `d^{-1/α} E^{1/α} S_α`.
pub fn sample_ml_waiting<R: Rng + ?Sized>(alpha: f64, rate: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha, true)?;
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::param(format!("rate = {rate} must be positive")));
    }
    let e: f64 = Exp1.sample(rng);
    if alpha == 1.0 {
        return Ok(e / rate);
    }
    let s = sample_stable(alpha, rng);
    Ok((e / rate).powf(1.0 / alpha) * s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start: usize,
    pub jump_times: Vec<f64>,
    pub visited: Vec<usize>,
    pub horizon: f64,
}

impl Trajectory {
    pub fn position(&self) -> usize {
        *self.visited.last().unwrap()
    }

    pub fn jumps(&self) -> usize {
        self.jump_times.len()
    }
}

pub fn simulate_walk<R: Rng + ?Sized>(
    graph: &Graph,
    alpha: f64,
    horizon: f64,
    start: usize,
    rng: &mut R,
) -> Result<Trajectory> {
    if start >= graph.n() {
        return Err(Error::param(format!("start vertex {start} out of range")));
    }
    if graph.degree(start) == 0 {
        return Err(Error::param(format!("start vertex {start} is isolated")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::param(format!("horizon = {horizon} must be non-negative")));
    }
    let mut traj = Trajectory {
        start,
        jump_times: Vec::new(),
        visited: vec![start],
        horizon,
    };
    let mut now = 0.0;
    let mut v = start;
    loop {
        let nb = graph.neighbors(v);
        now += sample_ml_waiting(alpha, nb.len() as f64, rng)?;
        if now > horizon {
            return Ok(traj);
        }
        v = nb[rng.random_range(0..nb.len())];
        traj.jump_times.push(now);
        traj.visited.push(v);
    }
}

/// `E_t = inf{τ : S_τ > t}` from stable increments of size `dt^{1/α} S`,
/// linearly interpolated across the crossing step.
pub fn sample_inverse_subordinator<R: Rng + ?Sized>(alpha: f64, t: f64, dt: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha, true)?;
    if !(dt > 0.0) {
        return Err(Error::param(format!("dt = {dt} must be positive")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param(format!("t = {t} must be non-negative")));
    }
    let scale = dt.powf(1.0 / alpha);
    let (mut tau, mut s) = (0.0, 0.0);
    loop {
        let next = s + scale * sample_stable(alpha, rng);
        if next > t {
            return Ok(tau + dt * (t - s) / (next - s));
        }
        s = next;
        tau += dt;
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub quantity: String,
    pub alpha: f64,
    pub t: f64,
    pub n_samples: usize,
    pub estimate: f64,
    pub stderr: f64,
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::param("need at least two samples"))
    } else {
        Ok(())
    }
}

pub fn waiting_samples(alpha: f64, rate: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    par::map_range(n, |i| sample_ml_waiting(alpha, rate, &mut stream_rng(seed, i as u64)))
        .into_iter()
        .collect()
}

/// Kolmogorov distance between the samples and a survival function.
pub fn survival_sup_distance<F: Fn(f64) -> f64>(samples: &[f64], survival: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - survival(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Empirical law of the walker's position at `t`.
pub fn occupation(graph: &Graph, alpha: f64, t: f64, start: usize, walks: usize, seed: u64) -> Result<Vec<f64>> {
    let ends: Vec<Result<usize>> = par::map_range(walks, |i| {
        simulate_walk(graph, alpha, t, start, &mut stream_rng(seed, i as u64)).map(|w| w.position())
    });
    let mut counts = vec![0.0; graph.n()];
    for e in ends {
        counts[e?] += 1.0;
    }
    Ok(counts.into_iter().map(|c| c / walks as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicEstimate {
    /// `None` when no walk ended at the target.
    pub estimate: Option<f64>,
    pub stderr: f64,
    pub events: usize,
    pub n_samples: usize,
}

/// `P(N(t) = d(i, j) | X(t) = j, X(0) = i)`.
pub fn conditional_geodesic_prob(
    graph: &Graph,
    alpha: f64,
    t: f64,
    i: usize,
    j: usize,
    n_samples: usize,
    seed: u64,
) -> Result<GeodesicEstimate> {
    if i == j {
        return Err(Error::param("source and target must differ"));
    }
    let d = graph
        .bfs_distances(i)
        .get(j)
        .copied()
        .flatten()
        .ok_or(Error::Unreachable { src: i, dst: j })?;
    let outcomes: Vec<Result<Option<bool>>> = par::map_range(n_samples, |k| {
        let w = simulate_walk(graph, alpha, t, i, &mut stream_rng(seed, k as u64))?;
        Ok((w.position() == j).then_some(w.jumps() == d))
    });
    let (mut events, mut hits) = (0usize, 0usize);
    for o in outcomes {
        if let Some(h) = o? {
            events += 1;
            hits += h as usize;
        }
    }
    let (estimate, stderr) = if events == 0 {
        (None, f64::NAN)
    } else {
        let p = hits as f64 / events as f64;
        (Some(p), (p * (1.0 - p) / events as f64).sqrt())
    };
    Ok(GeodesicEstimate {
        estimate,
        stderr,
        events,
        n_samples,
    })
}

pub fn inverse_subordinator_samples(alpha: f64, t: f64, dt: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    par::map_range(n, |i| {
        sample_inverse_subordinator(alpha, t, dt, &mut stream_rng(seed, i as u64))
    })
    .into_iter()
    .collect()
}

/// Sample mean of `E_t`, default step `dt = t/1000`.
pub fn inverse_subordinator_mean(alpha: f64, t: f64, n: usize, seed: u64) -> Result<Estimate> {
    check_samples(n)?;
    let xs = inverse_subordinator_samples(alpha, t, t / 1000.0, n, seed)?;
    let (estimate, stderr) = mean_stderr(&xs);
    Ok(Estimate {
        quantity: "inverse_subordinator_mean".into(),
        alpha,
        t,
        n_samples: n,
        estimate,
        stderr,
    })
}

/// Empirical `P(T > t)` for rate-`d` waiting times.
pub fn waiting_survival(alpha: f64, rate: f64, t: f64, n: usize, seed: u64) -> Result<Estimate> {
    check_samples(n)?;
    let xs = waiting_samples(alpha, rate, n, seed)?;
    let p = xs.iter().filter(|&&x| x > t).count() as f64 / n as f64;
    Ok(Estimate {
        quantity: format!("waiting_survival_d{rate}"),
        alpha,
        t,
        n_samples: n,
        estimate: p,
        stderr: (p * (1.0 - p) / n as f64).sqrt(),
    })
}
