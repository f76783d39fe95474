//! Surface headers and grid samples survive a serialization round trip.

use singular_flat::surfaces::{
    extend_boundary_complete, BoundaryCurve, GraphSurface, GridField, HeightField, SamplingGrid, SurfaceKind,
    CERTIFICATE_MIN_RATIO,
};
use singular_flat::{ConeAngle, Exec};

fn boundary() -> BoundaryCurve {
    BoundaryCurve::new(0.2, vec![0.3, -0.1], vec![0.5, 0.05]).unwrap()
}

#[test]
fn closed_form_header_round_trip() {
    let s = extend_boundary_complete(&boundary(), 1.0).unwrap();
    let h = s.header();
    assert_eq!(h.kind, SurfaceKind::ClosedForm);
    let text = serde_json::to_string(&h).unwrap();
    assert!(text.contains("\"R\":1.0"));
    let back = GraphSurface::from_parts(&serde_json::from_str(&text).unwrap(), None).unwrap();
    assert_eq!(back, s);
}

#[test]
fn grid_surface_round_trip_keeps_heights() {
    let s = extend_boundary_complete(&boundary(), 1.0).unwrap();
    let field = GridField::sample(&s.field, 0.05, 1.0, 96, 128).unwrap();
    let g = GraphSurface::annulus(ConeAngle::BTZ, 0.05, 1.0, HeightField::Grid(field)).unwrap();
    let h = g.header();
    assert_eq!(h.kind, SurfaceKind::Grid);
    assert!(h.field.is_none());
    let triples: Vec<(f64, f64, f64)> = match &g.field {
        HeightField::Grid(f) => f.triples().collect(),
        _ => unreachable!(),
    };
    let json = serde_json::to_string(&h).unwrap();
    let back = GraphSurface::from_parts(&serde_json::from_str(&json).unwrap(), Some(&triples)).unwrap();
    for (r, th) in [(0.1, 0.3), (0.5, 2.0), (0.99, 6.0)] {
        assert!((back.height(r, th).unwrap() - g.height(r, th).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn tabulated_surface_is_still_spacelike() {
    let s = extend_boundary_complete(&boundary(), 1.0).unwrap();
    let field = GridField::sample(&s.field, 0.1, 1.0, 256, 256).unwrap();
    let g = GraphSurface::annulus(ConeAngle::BTZ, 0.1, 1.0, HeightField::Grid(field)).unwrap();
    let min = g
        .spacelike_check(&SamplingGrid::uniform(64, 64), Exec::Sequential)
        .unwrap();
    assert!(min.value > 0.0, "{min:?}");
    let exact = s.completeness_certificate(
        &SamplingGrid::geometric(64, 32, CERTIFICATE_MIN_RATIO),
        Exec::Sequential,
    );
    assert!(exact.unwrap().unwrap() >= 1.0);
}
