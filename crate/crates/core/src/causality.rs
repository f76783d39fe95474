//! Causal structure of the model spaces.
//!
//! In `E^{1,2}_0` a future causal tangent `(τ', r', θ')` satisfies
//! `2τ'r' ≥ r'² + r²θ'²`, so `r` never decreases along a causal curve and a
//! curve that leaves the BTZ line never returns to it. Integrating from a
//! line point `p` gives the closed form `J⁺(p) = {τ − τ_p ≥ r/2}`. For a
//! regular base point the developing map identifies the universal cover with
//! the convex half-space `{t − x > 0}` of Minkowski space, and the Minkowski
//! interval between developed points reduces to
//!
//! ```text
//! Q = −Δr (2Δτ − Δr) + r_p r_q Δθ²,
//! ```
//!
//! minimised over lifts by taking `Δθ ∈ [−π, π]`. These formulas are exact;
//! the grid reachability oracle in [`crate::verify::oracle`] checks them.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lorentz::{classify_by_sign, minkowski_causal, CausalRelation, LorentzVector, VectorClass};
use crate::model::{metric_at, quadratic_form, ConeAngle, ModelPoint, TubeRegion};

/// Default secant tolerance: a secant `v` counts as causal when
/// `q(v) ≤ tol·‖v‖²`.
pub const DEFAULT_SECANT_TOL: f64 = 1e-9;
/// Relative tolerance for boundary decisions of the closed-form futures.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Causal class of a coordinate tangent vector `v = (time, r, θ)` at `p`.
/// Future orientation is given by the chart's own time coordinate.
pub fn tangent_class(alpha: ConeAngle, p: &ModelPoint, v: [f64; 3]) -> Result<VectorClass> {
    let g = metric_at(alpha, p)?;
    let vv = nalgebra::Vector3::from(v);
    let q = vv.dot(&(g * vv));
    Ok(classify_by_sign(q, v[0], v == [0.0; 3]))
}

/// Angular difference `b − a` in `[−π, π]` for angles already in `[0, 2π)`.
#[inline]
fn reduced_angle_diff(a: f64, b: f64) -> f64 {
    let d = b - a;
    if d > PI {
        d - TAU
    } else if d < -PI {
        d + TAU
    } else {
        d
    }
}

/// A curve sampled at increasing parameters, all in one model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseCurve {
    pub alpha: ConeAngle,
    pub samples: Vec<CurveSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub point: ModelPoint,
}

impl PiecewiseCurve {
    pub fn new(alpha: ConeAngle, samples: Vec<CurveSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidCurve("no samples".into()));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].s > w[0].s) {
                return Err(Error::InvalidCurve(format!(
                    "parameters not strictly increasing at sample {}",
                    i + 1
                )));
            }
        }
        if let Some(bad) = samples.iter().position(|c| c.point.alpha != alpha) {
            return Err(Error::InvalidCurve(format!(
                "sample {bad} lives in a different model space"
            )));
        }
        Ok(Self { alpha, samples })
    }

    /// Build from `(s, time, r, θ)` tuples.
    pub fn from_coords(alpha: ConeAngle, coords: &[(f64, f64, f64, f64)]) -> Result<Self> {
        let samples = coords
            .iter()
            .map(|&(s, time, r, theta)| {
                Ok(CurveSample {
                    s,
                    point: ModelPoint::new(alpha, time, r, theta)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alpha, samples)
    }

    pub fn points(&self) -> impl Iterator<Item = &ModelPoint> {
        self.samples.iter().map(|c| &c.point)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CurveVerdict {
    ValidCausal,
    ValidChronological,
    /// Index of the first failing segment (between samples `index` and
    /// `index + 1`).
    Violation {
        index: usize,
        reason: String,
    },
}

impl CurveVerdict {
    pub fn is_valid(&self) -> bool {
        !matches!(self, CurveVerdict::Violation { .. })
    }
}

/// Check every segment's secant.
///
/// Regular segments need a future causal secant (timelike for
/// chronological). Segments lying on a singular line need strictly
/// increasing time; they are null for BTZ lines and timelike for massive
/// lines. In `E^{1,2}_0` a regular segment must also have `Δr ≥ 0` exactly.
pub fn validate_causal(curve: &PiecewiseCurve, tol: f64) -> CurveVerdict {
    let alpha = curve.alpha;
    let mut chronological = true;
    for (index, w) in curve.samples.windows(2).enumerate() {
        let (a, b) = (&w[0].point, &w[1].point);
        let dt = b.time - a.time;
        let dr = b.r - a.r;
        let violation = |reason: String| CurveVerdict::Violation { index, reason };
        if a.is_singular() && b.is_singular() {
            if !(dt > 0.0) {
                return violation(format!("time not increasing along the singular line (Δ = {dt})"));
            }
            if alpha.is_btz() {
                chronological = false;
            }
            continue;
        }
        if alpha.is_btz() && dr < 0.0 {
            return violation(format!("r decreases on a regular BTZ segment (Δr = {dr})"));
        }
        let dth = if a.is_on_line() || b.is_on_line() {
            0.0
        } else {
            reduced_angle_diff(a.theta, b.theta)
        };
        let v = [dt, dr, dth];
        let norm2 = dt * dt + dr * dr + dth * dth;
        if norm2 == 0.0 {
            return violation("stationary segment".into());
        }
        let q = quadratic_form(alpha, 0.5 * (a.r + b.r), v);
        if !(dt > 0.0) {
            return violation(format!("secant is not future directed (Δtime = {dt})"));
        }
        if q > tol * norm2 {
            return violation(format!("secant is spacelike (q = {q:e})"));
        }
        if q >= -tol * norm2 {
            chronological = false;
        }
    }
    if chronological {
        CurveVerdict::ValidChronological
    } else {
        CurveVerdict::ValidCausal
    }
}

/// Split a causal curve of `E^{1,2}_0` into its singular prefix and regular
/// suffix.
pub fn decompose_btz(curve: &PiecewiseCurve) -> Result<(Vec<CurveSample>, Vec<CurveSample>)> {
    if !curve.alpha.is_btz() {
        return Err(Error::Unsupported("BTZ decomposition needs α = 0".into()));
    }
    let split = curve
        .samples
        .iter()
        .position(|c| !c.point.is_on_line())
        .unwrap_or(curve.samples.len());
    if let Some(late) = curve.samples[split..].iter().position(|c| c.point.is_on_line()) {
        return Err(Error::MalformedDecomposition {
            first_regular: split,
            late_singular: split + late,
        });
    }
    Ok((curve.samples[..split].to_vec(), curve.samples[split..].to_vec()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FutureMembership {
    InJPlus,
    OnBoundary,
    Outside,
}

/// Membership of `q` in `J⁺(p)` for `p` on the BTZ line: `τ_q − τ_p ≥ r_q/2`.
pub fn btz_causal_future(p: &ModelPoint, q: &ModelPoint) -> Result<FutureMembership> {
    btz_causal_future_tol(p, q, BOUNDARY_TOL)
}

pub fn btz_causal_future_tol(p: &ModelPoint, q: &ModelPoint, tol: f64) -> Result<FutureMembership> {
    if !p.alpha.is_btz() || !q.alpha.is_btz() {
        return Err(Error::Unsupported("closed-form future needs α = 0".into()));
    }
    if !p.is_on_line() {
        return Err(Error::Precondition("base point must lie on the BTZ line".into()));
    }
    let gap = (q.time - p.time) - 0.5 * q.r;
    let scale = 1.0 + (q.time - p.time).abs() + q.r;
    Ok(if gap.abs() <= tol * scale {
        FutureMembership::OnBoundary
    } else if gap > 0.0 {
        FutureMembership::InJPlus
    } else {
        FutureMembership::Outside
    })
}

/// Causal relation of `q` to `p` in `E^{1,2}_0` (exact closed forms).
///
/// The open future ray of a line point is in `J⁺` but not `I⁺`, so it is
/// reported as [`CausalRelation::Causal`].
pub fn btz_relation(p: &ModelPoint, q: &ModelPoint) -> CausalRelation {
    btz_relation_raw(p.time, p.r, p.theta, q.time, q.r, q.theta, BOUNDARY_TOL)
}

#[inline]
fn btz_relation_raw(tp: f64, rp: f64, thp: f64, tq: f64, rq: f64, thq: f64, tol: f64) -> CausalRelation {
    let dtau = tq - tp;
    if rp == 0.0 {
        let gap = dtau - 0.5 * rq;
        let scale = 1.0 + dtau.abs() + rq;
        return if rq > 0.0 && gap > tol * scale {
            CausalRelation::Chronological
        } else if gap >= -tol * scale && (rq > 0.0 || dtau >= 0.0) {
            CausalRelation::Causal
        } else {
            CausalRelation::None
        };
    }
    let dr = rq - rp;
    if dr < 0.0 {
        return CausalRelation::None;
    }
    let dth = reduced_angle_diff(thp, thq);
    if dr == 0.0 {
        return if dth == 0.0 && dtau >= 0.0 {
            CausalRelation::Causal
        } else {
            CausalRelation::None
        };
    }
    let q = -dr * (2.0 * dtau - dr) + rp * rq * dth * dth;
    let scale = dr * (2.0 * dtau.abs() + dr) + rp * rq * dth * dth;
    if q < -tol * scale {
        CausalRelation::Chronological
    } else if q <= tol * scale {
        CausalRelation::Causal
    } else {
        CausalRelation::None
    }
}

/// Cartesian position of a point of `E^{1,2}_{2π}` (Minkowski space).
fn minkowski_cartesian(p: &ModelPoint) -> LorentzVector {
    let (s, c) = p.theta.sin_cos();
    LorentzVector::new(p.time, p.r * c, p.r * s)
}

/// Causal relation of `q` to `p` in the supported model spaces: the BTZ
/// space (`α = 0`) and Minkowski space (`α = 2π`).
pub fn causal_relation(p: &ModelPoint, q: &ModelPoint) -> Result<CausalRelation> {
    if p.alpha != q.alpha {
        return Err(Error::InvalidRegion("points lie in different model spaces".into()));
    }
    if p.alpha.is_btz() {
        Ok(btz_relation(p, q))
    } else if !p.alpha.is_singular() {
        Ok(minkowski_causal(&minkowski_cartesian(p), &minkowski_cartesian(q)))
    } else {
        Err(Error::Unsupported(format!(
            "causal futures are implemented for α = 0 and α = 2π, not α = {}",
            p.alpha.value()
        )))
    }
}

/// Weights of the measure `μ = w₃·vol + w₁·length|_line`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub weight_volume: f64,
    pub weight_line: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MeasureConfig {
    pub fn new(weight_volume: f64, weight_line: f64, samples: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            weight_volume,
            weight_line,
            samples,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.weight_volume >= 0.0
            && self.weight_line >= 0.0
            && self.weight_volume + self.weight_line > 0.0
            && self.samples >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "measure needs non-negative weights with positive sum and N ≥ 1, got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeTimeReport {
    /// `ln μ(J⁻(p)) / μ(J⁺(p))` within the region.
    pub value: f64,
    pub past_measure: f64,
    pub future_measure: f64,
    /// Monte Carlo standard error of `value` (delta method).
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Points per Monte Carlo batch; each batch owns one RNG stream.
const BATCH: usize = 4096;

/// Monte Carlo sample of a finite tube, reused across many base points.
///
/// Points are drawn uniformly for the Riemannian volume (density `∝ r`) in
/// antithetic pairs `(τ, r, θ)`, `(a + b − τ, r, θ)`. Batch `i` draws from
/// the ChaCha stream `i` of the configured seed, so the sample is identical
/// for sequential and parallel execution.
#[derive(Debug, Clone)]
pub struct VolumeSampler {
    region: TubeRegion,
    config: MeasureConfig,
    /// `(time, r, θ)` with antithetic partners adjacent.
    points: Vec<[f64; 3]>,
    exec: Exec,
}

impl VolumeSampler {
    pub fn new(region: &TubeRegion, config: &MeasureConfig) -> Result<Self> {
        Self::with_exec(region, config, Exec::default())
    }

    pub fn with_exec(region: &TubeRegion, config: &MeasureConfig, exec: Exec) -> Result<Self> {
        config.validate()?;
        region.validate()?;
        let (a, b) = region.finite_interval()?;
        if region.angle.is_singular() && !region.angle.is_btz() {
            return Err(Error::Unsupported(
                "volume time is implemented for α = 0 and α = 2π".into(),
            ));
        }
        let pairs = config.samples.div_ceil(2);
        let n_batches = pairs.div_ceil(BATCH / 2);
        let radius = region.radius;
        let batches = exec.map_range(n_batches, |bi| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(bi as u64);
            let lo = bi * (BATCH / 2);
            let hi = (lo + BATCH / 2).min(pairs);
            let mut out = Vec::with_capacity(2 * (hi - lo));
            for _ in lo..hi {
                let tau = rng.random_range(a..b);
                let r = radius * rng.random::<f64>().sqrt();
                let theta = rng.random_range(0.0..TAU);
                out.push([tau, r, theta]);
                out.push([a + b - tau, r, theta]);
            }
            out
        });
        Ok(Self {
            region: *region,
            config: *config,
            points: batches.concat(),
            exec,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn relation(&self, from: [f64; 3], to: [f64; 3]) -> bool {
        if self.region.angle.is_btz() {
            btz_relation_raw(from[0], from[1], from[2], to[0], to[1], to[2], BOUNDARY_TOL) != CausalRelation::None
        } else {
            let cart = |p: [f64; 3]| {
                let (s, c) = p[2].sin_cos();
                LorentzVector::new(p[0], p[1] * c, p[1] * s)
            };
            minkowski_causal(&cart(from), &cart(to)) != CausalRelation::None
        }
    }

    /// Length of the singular-line part of `J⁻(p)` and `J⁺(p)` inside the
    /// region (coordinate length in τ).
    fn line_lengths(&self, p: &ModelPoint) -> (f64, f64) {
        if !self.region.angle.is_btz() {
            return (0.0, 0.0);
        }
        let (a, b) = self.region.finite_interval().expect("validated");
        let past_top = (p.time - 0.5 * p.r).clamp(a, b);
        let past = past_top - a;
        let future = if p.is_on_line() { b - p.time.clamp(a, b) } else { 0.0 };
        (past, future)
    }

    /// Numbers of sample points in `J⁻(p)` and `J⁺(p)`.
    pub fn counts(&self, p: &ModelPoint) -> (u64, u64) {
        let base = [p.time, p.r, p.theta];
        let past = self
            .exec
            .sum_range(self.points.len(), |i| self.relation(self.points[i], base) as u64);
        let future = self
            .exec
            .sum_range(self.points.len(), |i| self.relation(base, self.points[i]) as u64);
        (past, future)
    }

    /// Volume time of `p` with its standard error.
    pub fn evaluate(&self, p: &ModelPoint) -> Result<VolumeTimeReport> {
        if p.alpha != self.region.angle {
            return Err(Error::InvalidRegion("point and region angles differ".into()));
        }
        let base = [p.time, p.r, p.theta];
        let n_pairs = self.points.len() / 2;
        // per-pair counts in {0,1,2}: sums, squares and cross products
        let n_chunks = n_pairs.div_ceil(BATCH / 2);
        let stats = self.exec.map_range(n_chunks, |ci| {
            let lo = ci * (BATCH / 2);
            let hi = (lo + BATCH / 2).min(n_pairs);
            let mut acc = [0u64; 5];
            for k in lo..hi {
                let (s0, s1) = (self.points[2 * k], self.points[2 * k + 1]);
                let past = self.relation(s0, base) as u64 + self.relation(s1, base) as u64;
                let fut = self.relation(base, s0) as u64 + self.relation(base, s1) as u64;
                acc[0] += past;
                acc[1] += fut;
                acc[2] += past * past;
                acc[3] += fut * fut;
                acc[4] += past * fut;
            }
            acc
        });
        let mut tot = [0u64; 5];
        for s in stats {
            for i in 0..5 {
                tot[i] += s[i];
            }
        }
        let np = n_pairs as f64;
        let volume = self.region.volume()?;
        // mean fraction per point, and pair-level moments of the fractions
        let (mp, mf) = (tot[0] as f64 / (2.0 * np), tot[1] as f64 / (2.0 * np));
        let var = |s2: u64, m: f64| (s2 as f64 / (4.0 * np) - m * m).max(0.0);
        let (vp, vf) = (var(tot[2], mp), var(tot[3], mf));
        let cov = tot[4] as f64 / (4.0 * np) - mp * mf;

        let w3 = self.config.weight_volume;
        let w1 = self.config.weight_line;
        let (line_past, line_future) = self.line_lengths(p);
        let past_measure = w3 * volume * mp + w1 * line_past;
        let future_measure = w3 * volume * mf + w1 * line_future;
        if past_measure == 0.0 {
            return Err(Error::DegenerateMeasure { side: "past" });
        }
        if future_measure == 0.0 {
            return Err(Error::DegenerateMeasure { side: "future" });
        }
        // delta method on ln(μ⁻/μ⁺); the line terms are exact
        let (cp, cf) = (w3 * volume / past_measure, w3 * volume / future_measure);
        let var_t = (cp * cp * vp + cf * cf * vf - 2.0 * cp * cf * cov).max(0.0) / np;
        Ok(VolumeTimeReport {
            value: (past_measure / future_measure).ln(),
            past_measure,
            future_measure,
            std_error: var_t.sqrt(),
            samples: self.points.len(),
            seed: self.config.seed,
        })
    }
}

/// Monte Carlo volume time `ln μ(J⁻(p)) / μ(J⁺(p))` restricted to `region`.
///
/// The causal past and future are used; they differ from `I^∓` by sets of
/// zero volume, except on a BTZ line, where the past singular ray is exactly
/// the part of the past that the line weight is meant to see.
pub fn volume_time(region: &TubeRegion, p: &ModelPoint, cfg: &MeasureConfig) -> Result<VolumeTimeReport> {
    VolumeSampler::new(region, cfg)?.evaluate(p)
}

pub fn volume_time_with(
    region: &TubeRegion,
    p: &ModelPoint,
    cfg: &MeasureConfig,
    exec: Exec,
) -> Result<VolumeTimeReport> {
    VolumeSampler::with_exec(region, cfg, exec)?.evaluate(p)
}

/// Draw a random future causal curve of `E^{1,2}_0`.
///
/// With probability one half the curve starts on the BTZ line, runs along it
/// and then leaves it. Regular steps pick `r' ≥ 0` and `θ'` and then a `τ'`
/// at or above the light-cone bound `(r'² + r²θ'²)/(2r')`.
pub fn random_btz_causal_curve<R: Rng>(rng: &mut R, steps: usize) -> PiecewiseCurve {
    let alpha = ConeAngle::BTZ;
    let mut s = 0.0;
    let mut tau = rng.random_range(-1.0..1.0);
    let start_on_line = rng.random_bool(0.5);
    let mut r: f64 = if start_on_line {
        0.0
    } else {
        rng.random_range(0.05..1.0)
    };
    let mut theta = rng.random_range(0.0..TAU);
    let mut out = Vec::with_capacity(steps + 1);
    let push = |out: &mut Vec<CurveSample>, s: f64, tau: f64, r: f64, theta: f64| {
        out.push(CurveSample {
            s,
            point: ModelPoint::btz(tau, r, theta).expect("finite coordinates"),
        });
    };
    push(&mut out, s, tau, r, theta);
    let line_steps = if start_on_line {
        rng.random_range(0..steps.max(1))
    } else {
        0
    };
    for i in 0..steps {
        s += 1.0;
        if i < line_steps {
            tau += rng.random_range(0.01..0.2);
        } else {
            let dr = rng.random_range(0.0..0.1);
            let dth = if r == 0.0 || dr == 0.0 {
                0.0
            } else {
                rng.random_range(-0.5..0.5)
            };
            let r_mid = r + 0.5 * dr;
            let bound = if dr > 0.0 {
                (dr * dr + r_mid * r_mid * dth * dth) / (2.0 * dr)
            } else {
                0.0
            };
            // slack keeps secants strictly inside the cone after rounding
            let dtau = bound * (1.0 + 1e-9)
                + if rng.random_bool(0.3) {
                    0.0
                } else {
                    rng.random_range(0.0..0.1)
                };
            let dtau = if dtau > 0.0 { dtau } else { 1e-3 };
            tau += dtau;
            r += dr;
            theta += dth;
        }
        push(&mut out, s, tau, r, theta);
    }
    PiecewiseCurve::new(alpha, out).expect("increasing parameters")
}

/// Section `{d(time) = 1}` of the future causal cone in coordinates
/// `(d(time), dr, dθ)` at radius `r`.
///
/// Off the line this is the ellipse bounded by the null generators. On the
/// line (`r = 0`) it is read off the closed-form causal future of a line
/// point: the admissible radial speeds, with the angle unconstrained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSection {
    pub r: f64,
    pub on_line: bool,
    pub dr_min: f64,
    pub dr_max: f64,
    /// Largest `|dθ|`; infinite on the line.
    pub theta_halfwidth: f64,
    /// Class of the line direction `∂_time` (on the line: of the line itself).
    pub line_direction: VectorClass,
    /// Null generators `(1, dr, dθ)`; empty on the line.
    pub generators: Vec<[f64; 3]>,
}

/// Cone sections at each radius, with `n` generators per regular radius.
pub fn cone_sections(alpha: ConeAngle, radii: &[f64], n: usize) -> Result<Vec<ConeSection>> {
    radii
        .iter()
        .map(|&r| {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::OutOfRange(format!("radius {r} must be finite and ≥ 0")));
            }
            let btz = alpha.is_btz();
            if r == 0.0 {
                // J⁺ of a line point: τ ≥ r/2 (BTZ), t ≥ r (massive)
                let (dr_max, line_direction) = if btz {
                    (2.0, VectorClass::LightlikeFuture)
                } else {
                    (1.0, VectorClass::TimelikeFuture)
                };
                return Ok(ConeSection {
                    r,
                    on_line: true,
                    dr_min: 0.0,
                    dr_max,
                    theta_halfwidth: f64::INFINITY,
                    line_direction,
                    generators: Vec::new(),
                });
            }
            let p = ModelPoint::new(alpha, 0.0, r, 0.0)?;
            let scale = if btz { r } else { alpha.ratio() * r };
            let generators = (0..n)
                .map(|i| {
                    let (s, c) = (TAU * i as f64 / n as f64).sin_cos();
                    let dr = if btz { 1.0 + c } else { c };
                    [1.0, dr, s / scale]
                })
                .collect();
            Ok(ConeSection {
                r,
                on_line: false,
                dr_min: if btz { 0.0 } else { -1.0 },
                dr_max: if btz { 2.0 } else { 1.0 },
                theta_halfwidth: 1.0 / scale,
                line_direction: tangent_class(alpha, &p, [1.0, 0.0, 0.0])?,
                generators,
            })
        })
        .collect()
}
