//! The sequential and rayon paths must agree exactly.

use singular_flat::causality::{MeasureConfig, VolumeSampler};
use singular_flat::model::TubeRegion;
use singular_flat::surfaces::{extend_boundary_cap, extend_boundary_complete, BoundaryCurve, SamplingGrid};
use singular_flat::verify::{developing_residuals, modular_statistics, surgery_statistics};
use singular_flat::{ConeAngle, Exec, ModelPoint};

#[test]
fn volume_time_is_path_independent() {
    let region = TubeRegion::new(ConeAngle::BTZ, 1.0, Some(0.0), Some(2.0)).unwrap();
    let cfg = MeasureConfig::new(1.0, 0.5, 50_000, 11).unwrap();
    let seq = VolumeSampler::with_exec(&region, &cfg, Exec::Sequential).unwrap();
    let par = VolumeSampler::with_exec(&region, &cfg, Exec::Parallel).unwrap();
    for (tau, r, th) in [(1.0, 0.0, 0.0), (0.7, 0.3, 2.0), (1.4, 0.9, 5.0)] {
        let p = ModelPoint::btz(tau, r, th).unwrap();
        assert_eq!(seq.counts(&p), par.counts(&p));
        assert_eq!(seq.evaluate(&p).unwrap(), par.evaluate(&p).unwrap());
    }
}

#[test]
fn scans_are_path_independent() {
    let b = BoundaryCurve::new(0.1, vec![0.7, 0.2], vec![-0.4, 0.3]).unwrap();
    let s = extend_boundary_complete(&b, 1.5).unwrap();
    let g = SamplingGrid::uniform(64, 48);
    assert_eq!(
        s.spacelike_check(&g, Exec::Sequential).unwrap(),
        s.spacelike_check(&g, Exec::Parallel).unwrap()
    );
    let cap = SamplingGrid::uniform(64, 64);
    assert_eq!(
        extend_boundary_cap(&b, 1.5, &cap, Exec::Sequential).unwrap(),
        extend_boundary_cap(&b, 1.5, &cap, Exec::Parallel).unwrap()
    );
}

#[test]
fn statistics_are_path_independent() {
    assert_eq!(
        developing_residuals(500, 3, 1e-4, Exec::Sequential),
        developing_residuals(500, 3, 1e-4, Exec::Parallel)
    );
    assert_eq!(
        surgery_statistics(5, 3, 32, Exec::Sequential).unwrap(),
        surgery_statistics(5, 3, 32, Exec::Parallel).unwrap()
    );
    assert_eq!(
        modular_statistics(200, 2.0, 3, Exec::Sequential).unwrap(),
        modular_statistics(200, 2.0, 3, Exec::Parallel).unwrap()
    );
}
