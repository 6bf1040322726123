use subdiff_web::{coefficients, curve, PathDemo};

#[test]
fn curve_tracks_exact_values() {
    let c = curve(0.5, 1.0, 1e-10, 80, 1e-2, 1e2, 20).unwrap();
    assert_eq!(c.len(), 60);
    for tri in c.chunks(3) {
        assert!((tri[1] - tri[2]).abs() < 1e-6, "t={}", tri[0]);
    }
    assert!((c[0] - 1e-2).abs() < 1e-15 && (c[57] - 1e2).abs() < 1e-10);
    assert!(curve(0.5, 1.0, 1e-10, 80, 1.0, 1.0, 20).is_err());
}

#[test]
fn coefficients_are_normalized() {
    let c = coefficients(0.85, 1e-12, 111).unwrap();
    assert_eq!(c.len(), 222);
    let mass: f64 = c.iter().step_by(2).sum();
    assert!((mass - 1.0).abs() < 1e-12);
    assert!(coefficients(1.2, 1e-12, 10).is_err());
}

#[test]
fn demo_paths_are_walks() {
    let demo = PathDemo::build(60, 3).unwrap();
    let g = demo.graph();
    let p = demo.path(0.85, 1e-3, 0, 1e-12, 0, 59).unwrap();
    assert_eq!(p.first(), Some(&0));
    assert_eq!(p.last(), Some(&59));
    assert!(p.windows(2).all(|w| g.has_edge(w[0] as usize, w[1] as usize)));
    // small time picks a topological geodesic
    assert_eq!(p.len() as i32 - 1, demo.hops(0, 59));
    let q = demo.path(0.85, 1e-3, 10, 1e-12, 0, 59).unwrap();
    assert_eq!(q.len(), p.len());
    assert_eq!(demo.coords().len(), 120);
    assert_eq!(demo.edges().len(), 2 * g.edge_count());
}
