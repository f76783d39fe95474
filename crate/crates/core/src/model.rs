//! Model spaces `E^{1,2}_α`.
//!
//! For `α > 0` the metric in cylindrical coordinates `(t, r, θ)` is
//! `−dt² + dr² + (α/2π)² r² dθ²`, a timelike cone line of total angle `α`
//! (a massive particle). For `α = 0` the BTZ white-hole metric
//! `−2 dτ dr + dr² + r² dθ²` is used, whose singular line `{r = 0}` is
//! lightlike. Both metrics are singular on `{r = 0}`.
//!
//! The ω-family interpolates between the two: for `|ω| < 1` it is a massive
//! particle of angle `2π√(1−ω²)` written in coordinates adapted to a boost,
//! and `ω = 1` is exactly the BTZ metric.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to decide `α = 2π`.
pub const REGULAR_ANGLE_TOL: f64 = 1e-12;

/// Total angle around a singular line. `2π` is regular, `0` is extreme BTZ.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ConeAngle(f64);

impl TryFrom<f64> for ConeAngle {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        ConeAngle::new(v)
    }
}

impl From<ConeAngle> for f64 {
    fn from(a: ConeAngle) -> f64 {
        a.0
    }
}

impl ConeAngle {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha >= 0.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidConeAngle(alpha))
        }
    }

    pub const BTZ: ConeAngle = ConeAngle(0.0);
    pub const REGULAR: ConeAngle = ConeAngle(TAU);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_btz(self) -> bool {
        self.0 == 0.0
    }

    pub fn is_singular(self) -> bool {
        (self.0 - TAU).abs() > REGULAR_ANGLE_TOL
    }

    /// `α / 2π`.
    pub fn ratio(self) -> f64 {
        self.0 / TAU
    }
}

/// Reduce an angle into `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed angular difference `b − a` reduced into `[−π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = reduce_angle(b - a);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// A point of `E^{1,2}_α` in cylindrical coordinates. `time` is `t` for
/// `α > 0` and `τ` for `α = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub alpha: ConeAngle,
    pub time: f64,
    pub r: f64,
    pub theta: f64,
}

impl ModelPoint {
    pub fn new(alpha: ConeAngle, time: f64, r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() || !time.is_finite() || !theta.is_finite() {
            return Err(Error::OutOfRange(format!(
                "model point needs finite time/θ and r ≥ 0, got time={time}, r={r}, θ={theta}"
            )));
        }
        Ok(Self {
            alpha,
            time,
            r,
            theta: reduce_angle(theta),
        })
    }

    /// A point of the BTZ model space `E^{1,2}_0`.
    pub fn btz(tau: f64, r: f64, theta: f64) -> Result<Self> {
        Self::new(ConeAngle::BTZ, tau, r, theta)
    }

    pub fn is_on_line(&self) -> bool {
        self.r == 0.0
    }

    /// On the line and the line is singular.
    pub fn is_singular(&self) -> bool {
        self.is_on_line() && self.alpha.is_singular()
    }
}

/// Metric coefficients of `E^{1,2}_α` in the basis `(time, r, θ)` at radius `r`.
pub fn metric_coefficients(alpha: ConeAngle, r: f64) -> Matrix3<f64> {
    if alpha.is_btz() {
        Matrix3::new(0.0, -1.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, r * r)
    } else {
        let k = alpha.ratio();
        Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, k * k * r * r)
    }
}

/// Metric tensor at `p`. Undefined on the line `r = 0`.
pub fn metric_at(alpha: ConeAngle, p: &ModelPoint) -> Result<Matrix3<f64>> {
    if p.r == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(metric_coefficients(alpha, p.r))
}

/// `√|det g|` per unit `d(time) dr dθ`: `r` for BTZ, `(α/2π) r` otherwise.
pub fn volume_density(alpha: ConeAngle, r: f64) -> f64 {
    if alpha.is_btz() {
        r
    } else {
        alpha.ratio() * r
    }
}

/// `v ᵀ g v` for the metric of `E^{1,2}_α` at radius `r`.
pub fn quadratic_form(alpha: ConeAngle, r: f64, v: [f64; 3]) -> f64 {
    let [dt, dr, dth] = v;
    if alpha.is_btz() {
        -2.0 * dt * dr + dr * dr + r * r * dth * dth
    } else {
        let k = alpha.ratio();
        -dt * dt + dr * dr + k * k * r * r * dth * dth
    }
}

/// Eigenvalues of a symmetric 3×3 array, sorted ascending.
pub fn sorted_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let e = SymmetricEigen::new(*m).eigenvalues;
    let mut v = [e[0], e[1], e[2]];
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// `(negative, positive)` eigenvalue counts.
pub fn signature(m: &Matrix3<f64>) -> (usize, usize) {
    let e = sorted_eigenvalues(m);
    (
        e.iter().filter(|&&v| v < 0.0).count(),
        e.iter().filter(|&&v| v > 0.0).count(),
    )
}

/// Length of the coordinate circle `{time = c, r = r0}` by midpoint
/// quadrature of the induced line element (the metric does not depend on θ).
pub fn circle_length(alpha: ConeAngle, r0: f64, samples: usize) -> f64 {
    let n = samples.max(1);
    let h = TAU / n as f64;
    (0..n)
        .map(|_| quadratic_form(alpha, r0, [0.0, 0.0, 1.0]).sqrt() * h)
        .sum()
}

/// The ω-parametrised metric
/// `−(1−ω²) dτ² − 2ω dτ d𝔯 + d𝔯² + 𝔯² dθ²` in the basis `(τ, 𝔯, θ)`.
pub fn omega_metric_at(omega: f64, r: f64) -> Result<Matrix3<f64>> {
    if !(omega.abs() <= 1.0) {
        return Err(Error::OutOfRange(format!("|ω| must be ≤ 1, got {omega}")));
    }
    if !(r > 0.0) {
        return Err(Error::SingularPoint);
    }
    Ok(omega_metric_parts(omega, 1.0 - omega * omega, r))
}

/// ω-metric with `1 − ω²` supplied separately; near `ω = 1` it cannot be
/// recovered accurately from `ω`.
fn omega_metric_parts(omega: f64, one_minus_omega_sq: f64, r: f64) -> Matrix3<f64> {
    Matrix3::new(-one_minus_omega_sq, -omega, 0.0, -omega, 1.0, 0.0, 0.0, 0.0, r * r)
}

/// A member of the ω-family of coordinate charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaChart {
    pub omega: f64,
}

impl OmegaChart {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.abs() <= 1.0 {
            Ok(Self { omega })
        } else {
            Err(Error::OutOfRange(format!("|ω| must be ≤ 1, got {omega}")))
        }
    }

    /// `β = artanh ω`, undefined at `|ω| = 1`.
    pub fn beta(&self) -> Option<f64> {
        (self.omega.abs() < 1.0).then(|| self.omega.atanh())
    }

    /// Cone angle `2π√(1−ω²)` described by this chart.
    pub fn alpha(&self) -> f64 {
        TAU * (1.0 - self.omega * self.omega).max(0.0).sqrt()
    }

    pub fn metric_at(&self, r: f64) -> Result<Matrix3<f64>> {
        omega_metric_at(self.omega, r)
    }
}

/// Coordinate change `(t, r, θ) ↦ (τ, 𝔯, θ)` from a massive particle chart
/// of angle `α = 2π / cosh β` to the ω-chart with `ω = tanh β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaTransform {
    pub alpha: ConeAngle,
    pub beta: f64,
    pub omega: f64,
    cosh_b: f64,
    sinh_b: f64,
    /// `1 − ω² = (α/2π)²`, kept exact for small α.
    one_minus_omega_sq: f64,
}

pub fn omega_transform(alpha: ConeAngle) -> Result<OmegaTransform> {
    let a = alpha.value();
    if !(a > 0.0 && a <= TAU) {
        return Err(Error::OutOfRange(format!("ω-transform needs 0 < α ≤ 2π, got {a}")));
    }
    let cosh_b = TAU / a;
    let beta = cosh_b.acosh();
    // ω = tanh β = √(1 − (α/2π)²) and sinh β = ω cosh β, both from α directly
    let k = alpha.ratio();
    let omega = (1.0 - k * k).max(0.0).sqrt();
    Ok(OmegaTransform {
        alpha,
        beta,
        omega,
        cosh_b,
        sinh_b: cosh_b * omega,
        one_minus_omega_sq: k * k,
    })
}

impl OmegaTransform {
    pub fn chart(&self) -> OmegaChart {
        OmegaChart { omega: self.omega }
    }

    /// Image `(τ, 𝔯, θ)` of `(t, r, θ)`.
    pub fn apply(&self, t: f64, r: f64, theta: f64) -> [f64; 3] {
        [t * self.cosh_b - r * self.sinh_b, r / self.cosh_b, theta]
    }

    /// Jacobian `∂(τ, 𝔯, θ) / ∂(t, r, θ)`; constant in the point.
    pub fn jacobian(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.cosh_b,
            -self.sinh_b,
            0.0,
            0.0,
            1.0 / self.cosh_b,
            0.0,
            0.0,
            0.0,
            1.0,
        )
    }

    /// `Jᵀ G_ω(𝔯) J` at a point with `r > 0`.
    pub fn pullback_metric(&self, t: f64, r: f64) -> Result<Matrix3<f64>> {
        let [_, rr, _] = self.apply(t, r, 0.0);
        if !(rr > 0.0) {
            return Err(Error::SingularPoint);
        }
        let j = self.jacobian();
        Ok(j.transpose() * omega_metric_parts(self.omega, self.one_minus_omega_sq, rr) * j)
    }

    /// `‖Jᵀ G_ω J − G_α‖_∞` at `(t, r)`.
    pub fn pullback_residual(&self, t: f64, r: f64) -> Result<f64> {
        let pulled = self.pullback_metric(t, r)?;
        Ok((pulled - metric_coefficients(self.alpha, r)).amax())
    }
}

/// A tube `{r ≤ R, time ∈ [a, b]}` of a model space. `None` bounds are
/// infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeRegion {
    pub angle: ConeAngle,
    pub radius: f64,
    pub start: Option<f64>,
    pub end: Option<f64>,
    /// Whether `r = R` belongs to the region.
    pub closed_radius: bool,
    /// Whether finite time endpoints belong to the region.
    pub closed_time: bool,
}

impl TubeRegion {
    pub fn new(angle: ConeAngle, radius: f64, start: Option<f64>, end: Option<f64>) -> Result<Self> {
        let reg = Self {
            angle,
            radius,
            start,
            end,
            closed_radius: true,
            closed_time: true,
        };
        reg.validate()?;
        Ok(reg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::InvalidRegion(format!("radius {} must be > 0", self.radius)));
        }
        if let (Some(a), Some(b)) = (self.start, self.end) {
            if !(a < b) {
                return Err(Error::InvalidRegion(format!("empty time interval [{a}, {b}]")));
            }
        }
        Ok(())
    }

    pub fn with_flags(mut self, closed_radius: bool, closed_time: bool) -> Self {
        self.closed_radius = closed_radius;
        self.closed_time = closed_time;
        self
    }

    /// Finite `(start, end)` or an error for unbounded tubes.
    pub fn finite_interval(&self) -> Result<(f64, f64)> {
        match (self.start, self.end) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidRegion("time interval must be finite".into())),
        }
    }

    pub fn contains_time(&self, time: f64) -> bool {
        let lower = match self.start {
            None => true,
            Some(a) if self.closed_time => time >= a,
            Some(a) => time > a,
        };
        let upper = match self.end {
            None => true,
            Some(b) if self.closed_time => time <= b,
            Some(b) => time < b,
        };
        lower && upper
    }

    /// Riemannian volume `∫ √|det g|` of a finite tube.
    pub fn volume(&self) -> Result<f64> {
        let (a, b) = self.finite_interval()?;
        let area = PI * self.radius * self.radius;
        let k = if self.angle.is_btz() { 1.0 } else { self.angle.ratio() };
        Ok((b - a) * area * k)
    }
}

pub fn in_region(reg: &TubeRegion, p: &ModelPoint) -> Result<bool> {
    if reg.angle != p.alpha {
        return Err(Error::InvalidRegion(format!(
            "point angle {} differs from region angle {}",
            p.alpha.value(),
            reg.angle.value()
        )));
    }
    let radial = if reg.closed_radius {
        p.r <= reg.radius
    } else {
        p.r < reg.radius
    };
    Ok(radial && reg.contains_time(p.time))
}
