use subdiff::ctrw::{
    conditional_geodesic_prob, inverse_subordinator_mean, inverse_subordinator_samples, occupation, sample_stable,
    simulate_walk, stream_rng, survival_sup_distance, waiting_samples, waiting_survival,
};
use subdiff::fractional::ml_operator;
use subdiff::graph::Graph;
use subdiff::special::{gamma, mittag_leffler};
use subdiff::spectral::laplacian;

#[test]
fn stable_laplace_transform() {
    for a in [0.3, 0.7] {
        let mut rng = stream_rng(21, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| sample_stable(a, &mut rng)).collect();
        for s in [0.5f64, 1.0, 2.0] {
            let mc = xs.iter().map(|x| (-s * x).exp()).sum::<f64>() / xs.len() as f64;
            assert!((mc - (-s.powf(a)).exp()).abs() < 0.01, "a={a} s={s}");
        }
    }
}

#[test]
fn exponential_limit() {
    let xs = waiting_samples(1.0, 2.0, 100_000, 4).unwrap();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    // sd of the mean is 0.5/√n
    assert!((mean - 0.5).abs() < 3.0 * 0.5 / (1e5f64).sqrt());
}

#[test]
fn survival_at_one() {
    let e = waiting_survival(0.5, 1.0, 1.0, 100_000, 8).unwrap();
    assert!((e.estimate - 0.4276).abs() < 0.01, "{}", e.estimate);
}

#[test]
fn waiting_law_sup_distance() {
    let xs = waiting_samples(0.6, 3.0, 100_000, 5).unwrap();
    let d = survival_sup_distance(&xs, |t| mittag_leffler(0.6, -3.0 * t.powf(0.6)).unwrap());
    assert!(d < 0.01, "{d}");
}

#[test]
fn rate_scaling() {
    // rate-d samples equal d^{-1/α} times rate-1 samples in law
    let a = 0.7;
    let mut x1 = waiting_samples(a, 1.0, 10_000, 10).unwrap();
    let mut x4: Vec<f64> = waiting_samples(a, 4.0, 10_000, 11)
        .unwrap()
        .into_iter()
        .map(|x| x * 4f64.powf(1.0 / a))
        .collect();
    x1.sort_by(f64::total_cmp);
    x4.sort_by(f64::total_cmp);
    // two-sample KS distance on the paired quantiles
    let d = survival_sup_distance(&x4, |t| {
        let k = x1.partition_point(|&x| x <= t);
        1.0 - k as f64 / x1.len() as f64
    });
    assert!(d < 0.02, "{d}");
}

#[test]
fn kernel_on_triangle() {
    let g = Graph::complete(3);
    let spec = laplacian(&g).unwrap();
    let exact = ml_operator(0.5, 1.0, &spec).unwrap().matrix;
    let occ = occupation(&g, 0.5, 1.0, 0, 200_000, 3).unwrap();
    assert!((occ.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    for j in 0..3 {
        assert!(
            (occ[j] - exact[(0, j)]).abs() < 0.01,
            "j={j}: {} vs {}",
            occ[j],
            exact[(0, j)]
        );
    }
}

#[test]
fn walks_respect_the_graph() {
    let g = Graph::star(5);
    let mut rng = stream_rng(2, 7);
    let w = simulate_walk(&g, 0.4, 30.0, 3, &mut rng).unwrap();
    assert!(w.visited.windows(2).all(|p| g.has_edge(p[0], p[1])));
    assert_eq!(w.visited.len(), w.jump_times.len() + 1);
}

#[test]
fn inverse_subordinator_moments() {
    let (a, t) = (0.5, 1.0);
    let xs = inverse_subordinator_samples(a, t, t / 1000.0, 40_000, 12).unwrap();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let want_mean = 1.0 / gamma(1.5);
    let want_var = 2.0 / gamma(2.0) - 1.0 / gamma(1.5).powi(2);
    assert!((mean - want_mean).abs() < 0.02, "{mean}");
    assert!((var / want_var - 1.0).abs() < 0.05, "{var} vs {want_var}");
}

#[test]
fn degenerate_clock_near_one() {
    let e = inverse_subordinator_mean(0.999, 2.0, 2_000, 1).unwrap();
    assert!((e.estimate / 2.0 - 1.0).abs() < 0.01, "{}", e.estimate);
}

#[test]
fn subordination_identity() {
    let xs = inverse_subordinator_samples(0.5, 1.0, 1e-3, 40_000, 33).unwrap();
    for lam in [0.5, 2.0] {
        let mc = xs.iter().map(|e| (-e * lam).exp()).sum::<f64>() / xs.len() as f64;
        let want = mittag_leffler(0.5, -lam).unwrap();
        assert!((mc - want).abs() < 0.01, "lambda={lam}");
    }
}

#[test]
fn hazard_of_pooled_waits_decreases() {
    let xs = waiting_samples(0.5, 1.0, 200_000, 41).unwrap();
    let edges: Vec<f64> = (0..=10).map(|i| 10f64.powf(-2.0 + 0.4 * i as f64)).collect();
    let hazards: Vec<f64> = edges
        .windows(2)
        .map(|w| {
            let at_risk = xs.iter().filter(|&&x| x > w[0]).count() as f64;
            let events = xs.iter().filter(|&&x| x > w[0] && x <= w[1]).count() as f64;
            events / at_risk / (w[1] - w[0])
        })
        .collect();
    assert!(hazards.windows(2).all(|p| p[1] < p[0]), "{hazards:?}");
}

#[test]
fn geodesic_probability_trend() {
    let g = Graph::path(3);
    let mut prev = 0.0;
    for t in [0.5, 0.1, 0.02] {
        let e = conditional_geodesic_prob(&g, 0.5, t, 0, 2, 100_000, 5).unwrap();
        let p = e.estimate.unwrap();
        assert!(p > prev, "t={t}: {p}");
        prev = p;
    }
    assert!(prev >= 0.95);
    // classical baseline shares the limit
    let c = conditional_geodesic_prob(&g, 1.0, 0.02, 0, 2, 100_000, 6).unwrap();
    assert!(c.estimate.unwrap() >= 0.95);
}

#[test]
fn adjacent_pair_at_tiny_time() {
    let e = conditional_geodesic_prob(&Graph::path(2), 0.5, 1e-8, 0, 1, 20_000, 2).unwrap();
    if let Some(p) = e.estimate {
        assert_eq!(p, 1.0);
    }
    let none = conditional_geodesic_prob(&Graph::path(3), 0.5, 0.0, 0, 2, 100, 2).unwrap();
    assert_eq!(none.estimate, None);
    assert_eq!(none.events, 0);
}
