use planar_spectra_web::{hkd_sequence, paschke_curve, tessellation_layout};

#[test]
fn hkd_sequence_grows_toward_limit() {
    let seq = hkd_sequence(2, 8, 4, 0.57).unwrap();
    assert_eq!(seq.steps.len(), 5);
    for w in seq.steps.windows(2) {
        assert!(w[1].n > w[0].n);
        assert!(w[1].upper >= w[0].lower - 1e-9);
    }
    for s in &seq.steps {
        assert!(s.upper <= seq.limit + 1e-9);
        assert!(s.rayleigh <= s.upper + 1e-9);
    }
}

#[test]
fn hkd_sequence_stops_at_budget() {
    let seq = hkd_sequence(2, 8, 40, 0.5).unwrap();
    assert!(seq.steps.len() < 41);
    assert!(hkd_sequence(5, 4, 2, 0.5).is_err());
}

#[test]
fn layout_places_every_vertex() {
    let lay = tessellation_layout(4, 5, 3).unwrap();
    let n = lay.positions.len();
    assert_eq!(lay.layer.len(), n);
    assert!(lay.passed);
    assert!(lay.rho_upper <= lay.tessellation_bound);
    for &[x, y] in &lay.positions {
        assert!(x.is_finite() && y.is_finite() && x * x + y * y <= 1.0 + 1e-9);
    }
    assert!(lay.edges.iter().all(|&(u, v)| u < n && v < n));
}

#[test]
fn paschke_curve_minimum_under_samples() {
    let c = paschke_curve(4, 5, 400).unwrap();
    assert_eq!(c.s.len(), 400);
    let sampled = c.objective.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(c.minimum <= sampled + 1e-9);
    assert!(c.minimum >= c.tree - 1e-9);
    assert!(c.minimum <= c.tessellation.unwrap());
}

#[test]
fn json_exports_round_trip() {
    let s = planar_spectra_web::paschke_curve_js(5, 4, 10).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["objective"].as_array().unwrap().len(), 10);
}
