//! Verification suites and the independent oracles they compare against.
//!
//! Every measurement helper here is seeded and deterministic; sequential and
//! parallel execution give identical numbers.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::causality::{
    btz_causal_future, random_btz_causal_curve, validate_causal, CurveSample, CurveVerdict, FutureMembership,
    MeasureConfig, PiecewiseCurve, VolumeSampler, DEFAULT_SECANT_TOL,
};
use crate::developing::{
    btz_holonomy_generator, develop_btz, develop_btz_jacobian, develop_jacobian_fd, develop_massive_jacobian,
    equivariance_residual, pullback_residual, CoverPoint, BTZ_NULL_LINE,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::extensions::{adjoin_btz, chain_membership, is_monotone, remove_btz, TubeChart};
use crate::lorentz::{classify_isometry, eta, IsometryClass, LorentzIsometry};
use crate::model::{metric_coefficients, omega_metric_at, omega_transform, ConeAngle, ModelPoint, TubeRegion};
use crate::modular::{
    build_complex, polyhedral_cauchy_surface, random_sector_ray, ray_intersection_count, relation_residuals,
    special_rays, LineKind, Vertex,
};
use crate::report::{Measure, Report, ReportRecord, SuiteRecorder};
use crate::surfaces::{
    delta_from_jet, extend_boundary_cap, extend_boundary_complete, induced_metric_from_jet, is_positive_definite,
    BoundaryCurve, GraphSurface, HeightField, SamplingGrid, CERTIFICATE_MIN_RATIO,
};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform cover point with `τ ∈ [−5, 5]`, `r ∈ [10⁻², 5]`, `θ̃ ∈ [−10, 10]`.
pub fn random_cover_point<R: Rng>(rng: &mut R) -> CoverPoint {
    CoverPoint::new(
        rng.random_range(-5.0..5.0),
        rng.random_range(1e-2..5.0),
        rng.random_range(-10.0..10.0),
    )
    .expect("r > 0")
}

/// Random trigonometric polynomial of degree `1..=max_degree` with
/// coefficients in `[−1, 1]`.
pub fn random_boundary<R: Rng>(rng: &mut R, max_degree: usize) -> BoundaryCurve {
    let d = rng.random_range(1..=max_degree.max(1));
    let mut coef = || rng.random_range(-1.0..=1.0);
    let a0 = coef();
    let cos = (0..d).map(|_| coef()).collect();
    let sin = (0..d).map(|_| coef()).collect();
    BoundaryCurve { a0, cos, sin }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DevelopResiduals {
    pub btz_exact: f64,
    pub massive_exact: f64,
    pub btz_fd: f64,
    pub massive_fd: f64,
}

/// Worst metric-pullback residuals of the developing maps, with exact and
/// central-difference Jacobians. Massive angles are uniform in `(10⁻², 4π)`.
pub fn developing_residuals(n: usize, seed: u64, fd_step: f64, exec: Exec) -> DevelopResiduals {
    let rows = exec.map_range(n, |i| {
        let mut rng = rng_for(seed, i as u64);
        let p = random_cover_point(&mut rng);
        let alpha = ConeAngle::new(rng.random_range(1e-2..2.0 * TAU)).expect("positive");
        [
            pullback_residual(ConeAngle::BTZ, &p, &develop_btz_jacobian(&p)),
            pullback_residual(alpha, &p, &develop_massive_jacobian(alpha, &p)),
            pullback_residual(ConeAngle::BTZ, &p, &develop_jacobian_fd(ConeAngle::BTZ, &p, fd_step)),
            pullback_residual(alpha, &p, &develop_jacobian_fd(alpha, &p, fd_step)),
        ]
    });
    let mut m = [0.0f64; 4];
    for r in rows {
        for k in 0..4 {
            m[k] = m[k].max(r[k]);
        }
    }
    DevelopResiduals {
        btz_exact: m[0],
        massive_exact: m[1],
        btz_fd: m[2],
        massive_fd: m[3],
    }
}

/// Worst `‖D(τ, r, θ̃ + 2π) − γ D(τ, r, θ̃)‖` for the BTZ development.
pub fn btz_equivariance_max(n: usize, seed: u64) -> f64 {
    (0..n)
        .map(|i| equivariance_residual(ConeAngle::BTZ, &random_cover_point(&mut rng_for(seed, i as u64))))
        .fold(0.0, f64::max)
}

/// `(|tr γ − 3|, ‖γ·(1,1,0) − (1,1,0)‖)` for the BTZ holonomy.
pub fn btz_generator_residuals() -> (f64, f64) {
    let g = btz_holonomy_generator();
    (
        (g.trace() - 3.0).abs(),
        (g.apply_linear(&BTZ_NULL_LINE) - BTZ_NULL_LINE).euclidean_norm(),
    )
}

/// Worst `|(t − x) − r|` over developed BTZ points with `θ̃ ∈ [−4π, 4π]`.
pub fn image_law_max(n: usize, seed: u64) -> f64 {
    (0..n)
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let p = CoverPoint::new(
                rng.random_range(-10.0..10.0),
                rng.random_range(1e-3..10.0),
                rng.random_range(-2.0 * TAU..2.0 * TAU),
            )
            .expect("r > 0");
            let d = develop_btz(&p);
            ((d.t - d.x) - p.r).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaResiduals {
    /// Worst pullback residual over random `(α, t, r)`.
    pub pullback: f64,
    /// `‖g_{ω=0} − diag(−1, 1, r²)‖` over the sampled radii.
    pub minkowski: f64,
    /// `‖g_{ω=1} − g_BTZ‖` over the sampled radii.
    pub btz: f64,
}

pub fn omega_residuals(n: usize, seed: u64) -> Result<OmegaResiduals> {
    let mut out = OmegaResiduals {
        pullback: 0.0,
        minkowski: 0.0,
        btz: 0.0,
    };
    for i in 0..n {
        let mut rng = rng_for(seed, i as u64);
        let alpha = ConeAngle::new(TAU * (1.0 - rng.random::<f64>()))?;
        let t = rng.random_range(-10.0..10.0);
        let r = rng.random_range(1e-3..10.0);
        out.pullback = out.pullback.max(omega_transform(alpha)?.pullback_residual(t, r)?);
        let minkowski = Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, 1.0, r * r));
        out.minkowski = out.minkowski.max((omega_metric_at(0.0, r)? - minkowski).amax());
        out.btz = out
            .btz
            .max((omega_metric_at(1.0, r)? - metric_coefficients(ConeAngle::BTZ, r)).amax());
    }
    Ok(out)
}

/// Random jets `(r, θ, ∂_rτ, ∂_θτ)` on which `δ > 0` and eigenvalue
/// positivity disagree.
pub fn jet_disagreements(n: usize, seed: u64) -> usize {
    (0..n)
        .filter(|&i| {
            let mut rng = rng_for(seed, i as u64);
            let r = rng.random_range(1e-3..10.0);
            let _theta: f64 = rng.random_range(0.0..TAU);
            let tr = rng.random_range(-3.0..3.0);
            let tt = rng.random_range(-3.0..3.0);
            (delta_from_jet(r, tr, tt) > 0.0) != is_positive_definite(&induced_metric_from_jet(r, tr, tt))
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurgeryStats {
    pub boundaries: usize,
    /// Smallest grid value of `r²δ` over all complete extensions.
    pub min_r2_delta: f64,
    /// Largest `|τ_Σ(R, θ) − τ^R(θ)|`.
    pub boundary_mismatch: f64,
    /// Largest jump of a cap across `r = R/2`.
    pub cap_jump: f64,
    /// Smallest certified `δ` over the outer cap branches.
    pub min_cap_delta: f64,
    pub cap_failures: usize,
}

/// Both surgeries on `n` random boundaries of degree ≤ 5, radius 1.
pub fn surgery_statistics(n: usize, seed: u64, grid: usize, exec: Exec) -> Result<SurgeryStats> {
    let mut s = SurgeryStats {
        boundaries: n,
        min_r2_delta: f64::INFINITY,
        boundary_mismatch: 0.0,
        cap_jump: 0.0,
        min_cap_delta: f64::INFINITY,
        cap_failures: 0,
    };
    let r2 = SamplingGrid::uniform(grid, grid);
    let cap_grid = SamplingGrid::uniform(2 * grid, 2 * grid);
    for i in 0..n {
        let b = random_boundary(&mut rng_for(seed, i as u64), 5);
        let surf = extend_boundary_complete(&b, 1.0)?;
        s.min_r2_delta = s.min_r2_delta.min(surf.scan(&r2, |r| r * r, exec)?.value);
        for (th, tau) in surf.boundary_trace(1.0, grid)? {
            s.boundary_mismatch = s.boundary_mismatch.max((tau - b.value(th)).abs());
        }
        match extend_boundary_cap(&b, 1.0, &cap_grid, exec) {
            Ok((cap, min)) => {
                s.min_cap_delta = s.min_cap_delta.min(min.value);
                for j in 0..grid {
                    let th = TAU * j as f64 / grid as f64;
                    let inner = cap.height(0.5 * (1.0 - f64::EPSILON), th)?;
                    let outer = cap.height(0.5 * (1.0 + f64::EPSILON), th)?;
                    s.cap_jump = s.cap_jump.max((inner - outer).abs());
                }
            }
            Err(Error::CertificationFailure(_)) => s.cap_failures += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapBenchmark {
    /// Worst `|δ − 1/r²| · r²` on the sample grid.
    pub delta_error: f64,
    pub certificate: Option<f64>,
    /// `|length(r: 1 → ε) − ln(1/ε)|`.
    pub length_error: f64,
    pub epsilon: f64,
}

/// The hyperboloid graph `τ = (1 + r²)/(2r)`.
pub fn hyperbolic_cap_benchmark(grid: usize, exec: Exec) -> Result<CapBenchmark> {
    let s = GraphSurface::new(ConeAngle::BTZ, 1.0, true, HeightField::HyperbolicCap)?;
    let mut delta_error: f64 = 0.0;
    for i in 0..grid {
        let r = 10f64.powf(-6.0 * i as f64 / (grid - 1).max(1) as f64);
        for j in 0..8 {
            let d = s.delta(r, TAU * j as f64 / 8.0)?;
            delta_error = delta_error.max((d - 1.0 / (r * r)).abs() * r * r);
        }
    }
    let certificate = s.completeness_certificate(&SamplingGrid::geometric(grid, 16, CERTIFICATE_MIN_RATIO), exec)?;
    let epsilon: f64 = 1e-4;
    let n = 400;
    let path: Vec<(f64, f64)> = (0..=n).map(|i| (epsilon.powf(i as f64 / n as f64), 0.3)).collect();
    let length_error = (s.surface_length(&path)? - (1.0 / epsilon).ln()).abs();
    Ok(CapBenchmark {
        delta_error,
        certificate,
        length_error,
        epsilon,
    })
}

pub mod oracle {
    //! Breadth-first reachability on a lattice of `E^{1,2}_0`.
    //!
    //! Nodes sit at `τ = τ₀ + i h`, `r = 2 j h`, `θ = 2πk/n_θ`; every node
    //! with `j = 0` is the same point of the line. Edges join nodes whose
    //! coordinate secant is future causal for the metric
    //! `−2dτdr + dr² + r²dθ²` evaluated at the midpoint radius, with the
    //! angle increment dropped when an endpoint is on the line.

    use std::collections::VecDeque;
    use std::f64::consts::TAU;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct TubeLattice {
        pub n_tau: usize,
        pub n_r: usize,
        pub n_theta: usize,
        pub tau0: f64,
        pub h: f64,
    }

    impl TubeLattice {
        pub fn standard() -> Self {
            Self {
                n_tau: 41,
                n_r: 41,
                n_theta: 17,
                tau0: 0.0,
                h: 0.05,
            }
        }

        pub fn tau(&self, i: usize) -> f64 {
            self.tau0 + i as f64 * self.h
        }

        pub fn r(&self, j: usize) -> f64 {
            2.0 * self.h * j as f64
        }

        pub fn theta(&self, k: usize) -> f64 {
            TAU * k as f64 / self.n_theta as f64
        }

        pub fn len(&self) -> usize {
            self.n_tau * self.n_r * self.n_theta
        }

        pub fn is_empty(&self) -> bool {
            self.len() == 0
        }

        /// Canonical index; line nodes use `k = 0`.
        pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
            let k = if j == 0 { 0 } else { k };
            (i * self.n_r + j) * self.n_theta + k
        }

        fn secant_causal(&self, j0: usize, j1: usize, di: usize, dk: i64) -> bool {
            let dtau = di as f64 * self.h;
            if j0 == 0 && j1 == 0 {
                return dtau > 0.0;
            }
            let dr = self.r(j1) - self.r(j0);
            let dth = if j0 == 0 || j1 == 0 {
                0.0
            } else {
                TAU * dk as f64 / self.n_theta as f64
            };
            let rm = 0.5 * (self.r(j0) + self.r(j1));
            let q = -2.0 * dtau * dr + dr * dr + rm * rm * dth * dth;
            let norm2 = dtau * dtau + dr * dr + dth * dth;
            dtau > 0.0 && q <= 1e-9 * norm2
        }

        /// Nodes reachable from the line node at time index `i0`.
        pub fn reachable_from_line(&self, i0: usize) -> Vec<bool> {
            let mut seen = vec![false; self.len()];
            let start = self.index(i0, 0, 0);
            seen[start] = true;
            let mut queue = VecDeque::from([(i0, 0usize, 0usize)]);
            while let Some((i, j, k)) = queue.pop_front() {
                for di in 0..=2usize {
                    let ni = i + di;
                    if ni >= self.n_tau {
                        continue;
                    }
                    for dj in -1i64..=1 {
                        let nj = j as i64 + dj;
                        if nj < 0 || nj >= self.n_r as i64 {
                            continue;
                        }
                        let nj = nj as usize;
                        // a line node connects to every angle
                        let targets: Vec<(usize, i64)> = if j == 0 {
                            (0..self.n_theta).map(|nk| (nk, 0)).collect()
                        } else {
                            (-1i64..=1)
                                .map(|dk| (((k as i64 + dk).rem_euclid(self.n_theta as i64)) as usize, dk))
                                .collect()
                        };
                        for (nk, dk) in targets {
                            if !self.secant_causal(j, nj, di, dk) {
                                continue;
                            }
                            let idx = self.index(ni, nj, nk);
                            if !seen[idx] {
                                seen[idx] = true;
                                queue.push_back((ni, nj, if nj == 0 { 0 } else { nk }));
                            }
                        }
                    }
                }
            }
            seen
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityAgreement {
    pub base_index: usize,
    pub nodes: usize,
    pub agree: usize,
}

/// Compare `J⁺` of line points with lattice reachability at every node.
pub fn future_vs_lattice(base_indices: &[usize]) -> Result<Vec<ReachabilityAgreement>> {
    let lat = oracle::TubeLattice::standard();
    base_indices
        .iter()
        .map(|&i0| {
            if i0 >= lat.n_tau {
                return Err(Error::OutOfRange(format!("base index {i0} outside the lattice")));
            }
            let reach = lat.reachable_from_line(i0);
            let p = ModelPoint::btz(lat.tau(i0), 0.0, 0.0)?;
            let (mut nodes, mut agree) = (0, 0);
            for i in 0..lat.n_tau {
                for j in 0..lat.n_r {
                    for k in 0..if j == 0 { 1 } else { lat.n_theta } {
                        let q = ModelPoint::btz(lat.tau(i), lat.r(j), lat.theta(k))?;
                        let inside = btz_causal_future(&p, &q)? != FutureMembership::Outside;
                        nodes += 1;
                        agree += (inside == reach[lat.index(i, j, k)]) as usize;
                    }
                }
            }
            Ok(ReachabilityAgreement {
                base_index: i0,
                nodes,
                agree,
            })
        })
        .collect()
}

/// Over `n` random causal curves: `(rejected by the validator, with a
/// decrease of r)`.
pub fn random_curve_statistics(n: usize, seed: u64, steps: usize) -> (usize, usize) {
    let mut invalid = 0;
    let mut decreasing = 0;
    for i in 0..n {
        let c = random_btz_causal_curve(&mut rng_for(seed, i as u64), steps);
        if !validate_causal(&c, DEFAULT_SECANT_TOL).is_valid() {
            invalid += 1;
            continue;
        }
        let rs: Vec<f64> = c.points().map(|p| p.r).collect();
        if rs.windows(2).any(|w| w[1] < w[0]) {
            decreasing += 1;
        }
    }
    (invalid, decreasing)
}

/// Move a curve into the tube `{r ≤ 0.6, τ ∈ [0.5, 1.1]}` by a translation
/// in τ and a homothety, both of which preserve causality.
pub fn fit_curve(curve: &PiecewiseCurve) -> Result<PiecewiseCurve> {
    let pts: Vec<&ModelPoint> = curve.points().collect();
    let t0 = pts[0].time;
    let span = pts.iter().map(|p| p.time - t0).fold(0.0, f64::max);
    let rmax = pts.iter().map(|p| p.r).fold(0.0, f64::max);
    let lambda = (0.6 / span.max(1e-9)).min(0.6 / rmax.max(1e-9)).min(1.0);
    let samples = curve
        .samples
        .iter()
        .map(|c| {
            Ok(CurveSample {
                s: c.s,
                point: ModelPoint::btz(0.5 + lambda * (c.point.time - t0), lambda * c.point.r, c.point.theta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseCurve::new(curve.alpha, samples)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeTimeStats {
    pub curves: usize,
    pub evaluations: usize,
    pub samples: usize,
    /// Largest `(T(pₖ) − T(pₖ₊₁)) / √(seₖ² + seₖ₊₁²)` along the curves.
    pub worst_standardized_drop: f64,
    /// Consecutive pairs with a drop beyond three standard errors.
    pub violations: usize,
    /// Sample points in `J⁻` of a line point (weight on the line zero).
    pub line_past_count: u64,
    /// Whether volume time then reports a degenerate past measure.
    pub line_reports_degenerate: bool,
    /// Volume time at `τ = 0.5, 1, 1.5` on the line with line weight 1.
    pub line_values: [f64; 3],
}

/// Volume time in the tube `{r ≤ 1, τ ∈ [0, 2]}` of `E^{1,2}_0` along
/// random causal curves, and its behaviour on the singular line.
pub fn volume_time_statistics(
    curves: usize,
    points_per_curve: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<VolumeTimeStats> {
    let region = TubeRegion::new(ConeAngle::BTZ, 1.0, Some(0.0), Some(2.0))?;
    let weighted = MeasureConfig::new(1.0, 1.0, samples, seed)?;
    let sampler = VolumeSampler::with_exec(&region, &weighted, exec)?;
    let steps = 3 * points_per_curve.max(2);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut violations = 0;
    let mut evaluations = 0;
    for c in 0..curves {
        let raw = random_btz_causal_curve(&mut rng_for(seed ^ 0x5eed, c as u64), steps);
        let curve = fit_curve(&raw)?;
        if let CurveVerdict::Violation { index, reason } = validate_causal(&curve, DEFAULT_SECANT_TOL) {
            return Err(Error::InvalidCurve(format!(
                "fitted curve {c} fails at {index}: {reason}"
            )));
        }
        let idx: Vec<usize> = (0..points_per_curve.max(2))
            .map(|k| k * (curve.samples.len() - 1) / (points_per_curve.max(2) - 1))
            .collect();
        let reports = idx
            .iter()
            .map(|&i| sampler.evaluate(&curve.samples[i].point))
            .collect::<Result<Vec<_>>>()?;
        evaluations += reports.len();
        for w in reports.windows(2) {
            let se = (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt();
            let drop = w[0].value - w[1].value;
            let z = if se > 0.0 {
                drop / se
            } else if drop > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            worst = worst.max(z);
            if drop > 3.0 * se {
                violations += 1;
            }
        }
    }
    let unweighted = MeasureConfig::new(1.0, 0.0, samples, seed)?;
    let plain = VolumeSampler::with_exec(&region, &unweighted, exec)?;
    let line_point = ModelPoint::btz(1.0, 0.0, 0.0)?;
    let (line_past_count, _) = plain.counts(&line_point);
    let line_reports_degenerate = matches!(
        plain.evaluate(&line_point),
        Err(Error::DegenerateMeasure { side: "past" })
    );
    let mut line_values = [0.0; 3];
    for (v, tau) in line_values.iter_mut().zip([0.5, 1.0, 1.5]) {
        *v = sampler.evaluate(&ModelPoint::btz(tau, 0.0, 0.0)?)?.value;
    }
    Ok(VolumeTimeStats {
        curves,
        evaluations,
        samples: sampler.len(),
        worst_standardized_drop: worst,
        violations,
        line_past_count,
        line_reports_degenerate,
        line_values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularStats {
    pub s_squared: f64,
    pub st_cubed: f64,
    /// Worst error of the singular-line cone angles `π`, `2π/3`.
    pub cone_angle_error: f64,
    pub classification_ok: bool,
    pub vef: (usize, usize, usize),
    pub cone_angle_sum: f64,
    pub curvature_sum: f64,
    pub edge_length_residual: f64,
    pub rays: usize,
    /// Rays not meeting the surface exactly once.
    pub bad_rays: usize,
}

pub fn modular_statistics(n_rays: usize, t0: f64, seed: u64, exec: Exec) -> Result<ModularStats> {
    let (s_squared, st_cubed) = relation_residuals();
    let complex = build_complex()?;
    let cycle = |v: Vertex| complex.cycles.iter().find(|c| c.vertices.contains(&v));
    let mut err: f64 = 0.0;
    let mut ok = complex.cycles.len() == 3;
    for (v, expected) in [(Vertex::B, PI), (Vertex::A, 2.0 * PI / 3.0)] {
        match cycle(v).map(|c| (c.kind, c.holonomy_class)) {
            Some((LineKind::Massive { cone_angle }, IsometryClass::Elliptic { angle })) => {
                err = err.max((cone_angle - expected).abs()).max((angle - expected).abs());
            }
            _ => ok = false,
        }
    }
    ok &= cycle(Vertex::Infinity).map(|c| c.kind) == Some(LineKind::ExtremeBtz);
    ok &= cycle(Vertex::A).map(|c| c.vertices.clone()) == Some(vec![Vertex::A, Vertex::C]);
    let surface = polyhedral_cauchy_surface(&complex, t0)?;
    let mut bad = exec.sum_range(n_rays, |i| {
        let ray = random_sector_ray(&mut rng_for(seed, i as u64));
        (ray_intersection_count(&surface, &ray) != 1) as u64
    }) as usize;
    bad += special_rays()
        .iter()
        .filter(|(_, r)| ray_intersection_count(&surface, r) != 1)
        .count();
    Ok(ModularStats {
        s_squared,
        st_cubed,
        cone_angle_error: err,
        classification_ok: ok,
        vef: (surface.vertex_count, surface.edge_count, surface.face_count),
        cone_angle_sum: surface.cone_angle_sum(),
        curvature_sum: surface.curvature_sum(),
        edge_length_residual: surface.edge_length_residual.max(complex.edge_length_residual),
        rays: n_rays + special_rays().len(),
        bad_rays: bad,
    })
}

/// `(non-monotone points among n random ones, wrong example classifications)`.
pub fn chain_statistics(n: usize, seed: u64) -> Result<(usize, usize)> {
    let mut bad = 0;
    for i in 0..n {
        let mut rng = rng_for(seed, i as u64);
        let on_line = rng.random_bool(0.2);
        let tau = rng.random_range(-3.0..3.0);
        let r = if on_line { 0.0 } else { rng.random_range(0.0..3.0) };
        let q = ModelPoint::btz(tau, r, rng.random_range(0.0..TAU))?;
        if !is_monotone(&chain_membership(&q)?) {
            bad += 1;
        }
    }
    let examples = [
        ((-1.0, 0.0), [false, false, true, true]),
        ((-1.0, 1.0), [true, true, true, true]),
        ((1.0, 1.0), [false, false, false, true]),
    ];
    let mut wrong = 0;
    for ((tau, r), expected) in examples {
        if chain_membership(&ModelPoint::btz(tau, r, 0.0)?)? != expected {
            wrong += 1;
        }
    }
    Ok((bad, wrong))
}

/// Named groups of checks, run in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lorentz,
    Model,
    Developing,
    Causality,
    Surfaces,
    Extensions,
    Modular,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lorentz,
        Suite::Model,
        Suite::Developing,
        Suite::Causality,
        Suite::Surfaces,
        Suite::Extensions,
        Suite::Modular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lorentz => "lorentz",
            Suite::Model => "model",
            Suite::Developing => "developing",
            Suite::Causality => "causality",
            Suite::Surfaces => "surfaces",
            Suite::Extensions => "extensions",
            Suite::Modular => "modular",
        }
    }

    /// Parse a suite name; `all` expands to every suite.
    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|s| s.name() == name).map(|s| vec![*s])
    }
}

/// Settings shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Grid resolution for surface scans.
    pub grid: usize,
    pub tol: Option<f64>,
    pub timing: bool,
    pub exec: Exec,
    /// Monte Carlo sample size for volume time.
    pub volume_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            grid: 256,
            tol: None,
            timing: true,
            exec: Exec::default(),
            volume_samples: 1_000_000,
        }
    }
}

fn residual(value: f64, tolerance: f64) -> Result<(Measure, Option<String>)> {
    Ok((Measure::Residual { value, tolerance }, None))
}

fn failures(n: usize, detail: Option<String>) -> Result<(Measure, Option<String>)> {
    Ok((Measure::Failures(n), detail))
}

fn run_lorentz(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    rec.check("isometries_preserve_form", || {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let mut rng = rng_for(cfg.seed, i);
            let g = LorentzIsometry::rotation(rng.random_range(0.0..TAU))
                .compose(&LorentzIsometry::boost_x(rng.random_range(-3.0..3.0)))
                .compose(&LorentzIsometry::rotation(rng.random_range(0.0..TAU)));
            let l = g.linear();
            worst = worst.max((l.transpose() * eta() * l - eta()).amax() / (1.0 + l.amax().powi(2)));
        }
        residual(worst, 1e-12)
    });
    rec.check("classification_examples", || {
        let cases = [
            (LorentzIsometry::identity(), IsometryClass::Identity),
            (LorentzIsometry::rotation(PI), IsometryClass::Elliptic { angle: PI }),
            (btz_holonomy_generator(), IsometryClass::Parabolic),
        ];
        let wrong = cases
            .iter()
            .filter(|(g, c)| classify_isometry(g).ok() != Some(*c))
            .count();
        let boost = matches!(
            classify_isometry(&LorentzIsometry::boost_x(1.0)),
            Ok(IsometryClass::Hyperbolic { .. })
        );
        failures(wrong + (!boost) as usize, None)
    });
    rec.check("class_is_conjugation_invariant", || {
        let mut bad = 0;
        for i in 0..1000 {
            let mut rng = rng_for(cfg.seed ^ 1, i);
            let h = LorentzIsometry::boost_towards(rng.random_range(0.0..TAU), rng.random_range(-2.0..2.0));
            let g = match i % 3 {
                0 => LorentzIsometry::rotation(rng.random_range(0.1..3.0)),
                1 => btz_holonomy_generator(),
                _ => LorentzIsometry::boost_x(rng.random_range(0.5..2.0)),
            };
            let (a, b) = (classify_isometry(&g)?, classify_isometry(&g.conjugate_by(&h))?);
            let same = match (a, b) {
                (IsometryClass::Elliptic { angle: x }, IsometryClass::Elliptic { angle: y }) => (x - y).abs() < 1e-9,
                (IsometryClass::Hyperbolic { eigenvalue: x }, IsometryClass::Hyperbolic { eigenvalue: y }) => {
                    (x - y).abs() < 1e-9 * x
                }
                (x, y) => x == y,
            };
            bad += (!same) as usize;
        }
        failures(bad, None)
    });
}

fn run_model(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    rec.check("signature_and_determinant", || {
        let mut bad = 0;
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let mut rng = rng_for(cfg.seed, i);
            let alpha = if i % 2 == 0 {
                ConeAngle::BTZ
            } else {
                ConeAngle::new(rng.random_range(1e-2..4.0 * PI))?
            };
            let r = rng.random_range(1e-3..10.0);
            let g = metric_coefficients(alpha, r);
            bad += (crate::model::signature(&g) != (1, 2)) as usize;
            let k = if alpha.is_btz() { 1.0 } else { alpha.ratio() };
            worst = worst.max((g.determinant() + k * k * r * r).abs() / (1.0 + r * r));
        }
        Ok((
            if bad > 0 {
                Measure::Failures(bad)
            } else {
                Measure::Residual {
                    value: worst,
                    tolerance: 1e-12,
                }
            },
            None,
        ))
    });
    rec.check("omega_pullback", || {
        residual(omega_residuals(1000, cfg.seed)?.pullback, 1e-9)
    });
    rec.check("omega_zero_is_minkowski", || {
        residual(omega_residuals(100, cfg.seed)?.minkowski, 0.0)
    });
    rec.check("omega_one_is_btz", || {
        residual(omega_residuals(100, cfg.seed)?.btz, 0.0)
    });
    rec.check("circumference", || {
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let mut rng = rng_for(cfg.seed ^ 2, i);
            let alpha = ConeAngle::new(rng.random_range(1e-2..TAU))?;
            let r0 = rng.random_range(1e-2..5.0);
            let l = crate::model::circle_length(alpha, r0, 64);
            worst = worst.max((l - alpha.value() * r0).abs() / (alpha.value() * r0));
        }
        residual(worst, 1e-12)
    });
}

fn run_developing(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    let dev = developing_residuals(10_000, cfg.seed, 1e-4, cfg.exec);
    rec.check("btz_pullback_exact", || residual(dev.btz_exact, 1e-9));
    rec.check("massive_pullback_exact", || residual(dev.massive_exact, 1e-9));
    rec.check("btz_pullback_finite_difference", || residual(dev.btz_fd, 1e-5));
    rec.check("massive_pullback_finite_difference", || residual(dev.massive_fd, 1e-5));
    rec.check("btz_equivariance", || {
        residual(btz_equivariance_max(1000, cfg.seed), 1e-9)
    });
    let (trace, fix) = btz_generator_residuals();
    rec.check("btz_holonomy_trace", || residual(trace, 1e-12));
    rec.check("btz_holonomy_fixes_null_line", || residual(fix, 1e-12));
    rec.check("btz_image_law", || residual(image_law_max(10_000, cfg.seed), 1e-12));
    rec.check("massive_equivariance", || {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let mut rng = rng_for(cfg.seed ^ 3, i);
            let alpha = ConeAngle::new(rng.random_range(1e-2..2.0 * TAU))?;
            worst = worst.max(equivariance_residual(alpha, &random_cover_point(&mut rng)));
        }
        residual(worst, 1e-9)
    });
}

fn run_causality(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    rec.check("future_matches_lattice_reachability", || {
        let rows = future_vs_lattice(&[0, 4, 10, 20, 35])?;
        let miss: usize = rows.iter().map(|r| r.nodes - r.agree).sum();
        let nodes: usize = rows.iter().map(|r| r.nodes).sum();
        failures(miss, Some(format!("{} base points, {nodes} lattice nodes", rows.len())))
    });
    rec.check("random_curves_valid_and_r_nondecreasing", || {
        let (invalid, decreasing) = random_curve_statistics(10_000, cfg.seed, 12);
        failures(
            invalid + decreasing,
            Some(format!("{invalid} rejected, {decreasing} with decreasing r")),
        )
    });
    let stats = volume_time_statistics(100, 4, cfg.volume_samples, cfg.seed, cfg.exec);
    match stats {
        Ok(s) => {
            rec.check("volume_time_monotone_along_curves", || {
                failures(
                    s.violations,
                    Some(format!(
                        "{} evaluations, N = {}, worst standardized drop {:.3}",
                        s.evaluations, s.samples, s.worst_standardized_drop
                    )),
                )
            });
            rec.check("volume_time_line_without_weight_degenerate", || {
                failures(
                    (s.line_past_count != 0) as usize + (!s.line_reports_degenerate) as usize,
                    Some(format!("{} samples in the past of a line point", s.line_past_count)),
                )
            });
            rec.check("volume_time_increasing_on_line", || {
                let v = s.line_values;
                failures(
                    (!(v[0] < v[1] && v[1] < v[2])) as usize,
                    Some(format!("values {:.6} {:.6} {:.6}", v[0], v[1], v[2])),
                )
            });
        }
        Err(e) => rec.check("volume_time", || Err(e)),
    }
}

fn run_surfaces(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    rec.check("delta_iff_positive_definite", || {
        failures(jet_disagreements(10_000, cfg.seed), None)
    });
    match surgery_statistics(100, cfg.seed, cfg.grid, cfg.exec) {
        Ok(s) => {
            rec.check("complete_surgery_r2_delta_above_one", || {
                Ok((
                    Measure::Above {
                        value: s.min_r2_delta,
                        bound: 1.0,
                    },
                    None,
                ))
            });
            rec.check("complete_surgery_boundary_match", || residual(s.boundary_mismatch, 0.0));
            rec.check("cap_continuity", || residual(s.cap_jump, 1e-12));
            rec.check("cap_certified", || {
                if s.cap_failures > 0 {
                    failures(s.cap_failures, None)
                } else {
                    Ok((
                        Measure::Above {
                            value: s.min_cap_delta,
                            bound: 1e-9,
                        },
                        None,
                    ))
                }
            });
        }
        Err(e) => rec.check("surgery", || Err(e)),
    }
    match hyperbolic_cap_benchmark(cfg.grid, cfg.exec) {
        Ok(b) => {
            rec.check("hyperbolic_cap_delta", || residual(b.delta_error, 1e-9));
            rec.check("hyperbolic_cap_certificate", || match b.certificate {
                Some(c) => residual((c - 1.0).abs(), 1e-6),
                None => failures(1, Some("no certificate".into())),
            });
            rec.check("hyperbolic_cap_radial_length", || residual(b.length_error, 1e-6));
        }
        Err(e) => rec.check("hyperbolic_cap", || Err(e)),
    }
    rec.check("constant_graph_not_complete", || {
        let s = GraphSurface::new(ConeAngle::BTZ, 1.0, true, HeightField::constant(0.0))?;
        let cert =
            s.completeness_certificate(&SamplingGrid::geometric(cfg.grid, 16, CERTIFICATE_MIN_RATIO), cfg.exec)?;
        failures(cert.is_some() as usize + s.divergence_check(16)? as usize, None)
    });
}

fn run_extensions(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    rec.check("chain_membership", || {
        let (bad, wrong) = chain_statistics(10_000, cfg.seed)?;
        failures(
            bad + wrong,
            Some(format!("{bad} non-monotone, {wrong} examples misclassified")),
        )
    });
    rec.check("adjoin_idempotent_and_boost_equivariant", || {
        let c = TubeChart::model(ConeAngle::BTZ, 1.0, Some(-1.0), Some(1.0), false)?;
        let once = adjoin_btz(&c)?;
        let mut bad = (adjoin_btz(&once)? != once) as usize;
        for i in 0..100 {
            let mu = rng_for(cfg.seed, i).random_range(-3.0..3.0);
            bad += (adjoin_btz(&c.boost_conjugated(mu)?)? != once.boost_conjugated(mu)?) as usize;
        }
        let massive = TubeChart::model(ConeAngle::new(PI)?, 1.0, None, None, false)?;
        bad += !matches!(adjoin_btz(&massive), Err(Error::NotBtzExtendable(_))) as usize;
        failures(bad, None)
    });
    rec.check("remove_yields_certified_surface", || {
        let e = adjoin_btz(&TubeChart::model(ConeAngle::BTZ, 1.0, None, None, false)?)?;
        let grid = SamplingGrid::geometric(64, 64, CERTIFICATE_MIN_RATIO);
        let mut bad = 0;
        for i in 0..20 {
            let b = random_boundary(&mut rng_for(cfg.seed ^ 4, i), 5);
            let (reg, s) = remove_btz(&e, &b)?;
            bad += reg.has_singular_line as usize;
            bad += !matches!(s.completeness_certificate(&grid, cfg.exec)?, Some(c) if c >= 1.0) as usize;
        }
        failures(bad, None)
    });
}

fn run_modular(rec: &mut SuiteRecorder, cfg: &VerifyConfig) {
    match modular_statistics(1000, 1.0, cfg.seed, cfg.exec) {
        Ok(m) => {
            rec.check("relation_s_squared", || residual(m.s_squared, 1e-9));
            rec.check("relation_st_cubed", || residual(m.st_cubed, 1e-9));
            rec.check("singular_line_classification", || {
                if m.classification_ok {
                    residual(m.cone_angle_error, 1e-9)
                } else {
                    failures(1, Some("classes differ from {massive π, massive 2π/3, BTZ}".into()))
                }
            });
            rec.check("polyhedral_combinatorics", || {
                failures((m.vef != (3, 3, 2)) as usize, Some(format!("V, E, F = {:?}", m.vef)))
            });
            rec.check("cone_angle_sum", || residual((m.cone_angle_sum - TAU).abs(), 1e-6));
            rec.check("gauss_bonnet", || residual((m.curvature_sum - 2.0 * TAU).abs(), 1e-6));
            rec.check("glued_edge_lengths", || residual(m.edge_length_residual, 1e-9));
            rec.check("rays_meet_surface_once", || {
                failures(m.bad_rays, Some(format!("{} rays", m.rays)))
            });
        }
        Err(e) => rec.check("modular", || Err(e)),
    }
}

/// Run the given suites in declaration order.
pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Report {
    let mut records: Vec<ReportRecord> = Vec::new();
    for &suite in Suite::ALL.iter().filter(|s| suites.contains(s)) {
        let mut rec = SuiteRecorder::new(suite.name(), cfg.seed, cfg.timing, cfg.tol);
        match suite {
            Suite::Lorentz => run_lorentz(&mut rec, cfg),
            Suite::Model => run_model(&mut rec, cfg),
            Suite::Developing => run_developing(&mut rec, cfg),
            Suite::Causality => run_causality(&mut rec, cfg),
            Suite::Surfaces => run_surfaces(&mut rec, cfg),
            Suite::Extensions => run_extensions(&mut rec, cfg),
            Suite::Modular => run_modular(&mut rec, cfg),
        }
        records.extend(rec.finish());
    }
    Report::new(cfg.seed, records)
}
