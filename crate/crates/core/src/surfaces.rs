//! Graph surfaces `time = τ_Σ(r, θ)` over discs and annuli in a tube.
//!
//! In `E^{1,2}_0` the pulled-back metric of a graph is
//! `(1 − 2τ_r) dr² − 2τ_θ dr dθ + r² dθ²`, with determinant `r² δ` where
//! `δ = 1 − 2τ_r − (τ_θ/r)²`; the surface is spacelike iff `δ > 0`. In a
//! massive ambient with `k = α/2π` the same computation gives
//! `δ_α = 1 − τ_r² − (τ_θ/(k r))²`.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{metric_coefficients, reduce_angle, ConeAngle};

/// Threshold below which a grid infimum of `r²δ` does not certify anything.
pub const CERTIFICATE_FLOOR: f64 = 1e-6;
/// Smallest radius, relative to `R`, probed by certificates.
pub const CERTIFICATE_MIN_RATIO: f64 = 1e-6;
/// Tolerance for matching boundary traces.
pub const BOUNDARY_MATCH_TOL: f64 = 1e-9;
/// Strict-positivity margin for the cap search.
pub const CAP_MARGIN: f64 = 1e-9;
/// Largest multiplier tried by the cap search.
pub const CAP_M_MAX: f64 = 1152921504606846976.0; // 2^60

/// A real trigonometric polynomial `a0 + Σ cₖ cos kθ + sₖ sin kθ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct BoundaryCurve {
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl BoundaryCurve {
    pub fn constant(c: f64) -> Self {
        Self {
            a0: c,
            ..Self::default()
        }
    }

    pub fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let b = Self { a0, cos, sin };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.a0.is_finite() && self.cos.iter().chain(&self.sin).all(|c| c.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::OutOfRange("boundary coefficients must be finite".into()))
        }
    }

    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    /// `d^order/dθ^order` of the curve.
    pub fn derivative(&self, theta: f64, order: u32) -> f64 {
        let mut acc = if order == 0 { self.a0 } else { 0.0 };
        for k in 1..=self.degree() {
            let c = self.cos.get(k - 1).copied().unwrap_or(0.0);
            let s = self.sin.get(k - 1).copied().unwrap_or(0.0);
            let kf = k as f64;
            let (sn, cs) = (kf * theta).sin_cos();
            // d/dθ rotates (cos, sin) → (−sin, cos) with a factor k
            let (fc, fs) = match order % 4 {
                0 => (cs, sn),
                1 => (-sn, cs),
                2 => (-cs, -sn),
                _ => (sn, -cs),
            };
            acc += kf.powi(order as i32) * (c * fc + s * fs);
        }
        acc
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.derivative(theta, 0)
    }

    /// `max_θ |dτ/dθ|`, located by sampling and refined by Newton steps on
    /// the second derivative.
    pub fn max_abs_derivative(&self) -> f64 {
        let deg = self.degree();
        if deg == 0 {
            return 0.0;
        }
        let n = 64 * deg.max(4);
        let (mut best_theta, mut best) = (0.0, -1.0);
        for i in 0..n {
            let th = TAU * i as f64 / n as f64;
            let v = self.derivative(th, 1).abs();
            if v > best {
                best = v;
                best_theta = th;
            }
        }
        let mut th = best_theta;
        for _ in 0..8 {
            let d3 = self.derivative(th, 3);
            if d3 == 0.0 {
                break;
            }
            let step = self.derivative(th, 2) / d3;
            if !step.is_finite() || step.abs() > TAU / n as f64 {
                break;
            }
            th -= step;
        }
        best.max(self.derivative(th, 1).abs())
    }
}

/// A tabulated height field on a polar lattice, periodic in θ.
///
/// Partials are central differences at the nodes (second-order one-sided
/// differences on the radial ends); values and partials are bilinearly
/// interpolated between nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    /// Row-major: `values[i * n_theta + j]` at `(r_i, θ_j)`.
    pub values: Vec<f64>,
    #[serde(skip)]
    partials: Option<(Vec<f64>, Vec<f64>)>,
}

impl GridField {
    pub fn new(r_min: f64, r_max: f64, n_r: usize, n_theta: usize, values: Vec<f64>) -> Result<Self> {
        if !(r_min >= 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::OutOfRange(format!("grid radii [{r_min}, {r_max}]")));
        }
        if n_r < 3 || n_theta < 3 {
            return Err(Error::OutOfRange("grid needs at least 3×3 nodes".into()));
        }
        if values.len() != n_r * n_theta {
            return Err(Error::OutOfRange(format!(
                "grid has {} values, expected {}",
                values.len(),
                n_r * n_theta
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutOfRange("grid values must be finite".into()));
        }
        let mut g = Self {
            r_min,
            r_max,
            n_r,
            n_theta,
            values,
            partials: None,
        };
        g.partials = Some(g.node_partials());
        Ok(g)
    }

    /// Tabulate a closed-form field.
    pub fn sample(field: &HeightField, r_min: f64, r_max: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        let hr = (r_max - r_min) / (n_r.max(2) - 1) as f64;
        let mut values = Vec::with_capacity(n_r * n_theta);
        for i in 0..n_r {
            for j in 0..n_theta {
                values.push(field.value(r_min + i as f64 * hr, TAU * j as f64 / n_theta as f64)?);
            }
        }
        Self::new(r_min, r_max, n_r, n_theta, values)
    }

    /// Rebuild from `(r, θ, τ)` triples on a complete lattice in any order.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        let mut rs: Vec<f64> = triples.iter().map(|t| t.0).collect();
        let mut ths: Vec<f64> = triples.iter().map(|t| reduce_angle(t.1)).collect();
        let dedup = |v: &mut Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
        };
        dedup(&mut rs);
        dedup(&mut ths);
        let (n_r, n_theta) = (rs.len(), ths.len());
        if n_r * n_theta != triples.len() || n_r < 3 || n_theta < 3 {
            return Err(Error::OutOfRange("samples do not form a complete polar lattice".into()));
        }
        let (r_min, r_max) = (rs[0], rs[n_r - 1]);
        let hr = (r_max - r_min) / (n_r - 1) as f64;
        let ht = TAU / n_theta as f64;
        let mut values = vec![f64::NAN; n_r * n_theta];
        for &(r, th, tau) in triples {
            let i = ((r - r_min) / hr).round() as usize;
            let jr = (reduce_angle(th) / ht).round();
            let j = jr as usize % n_theta;
            let on_lattice = (r - (r_min + i as f64 * hr)).abs() <= 1e-9 * (1.0 + r.abs())
                && (reduce_angle(th) - jr * ht).abs() <= 1e-9;
            if i >= n_r || !on_lattice {
                return Err(Error::OutOfRange(format!(
                    "sample ({r}, {th}) is not on a uniform lattice"
                )));
            }
            values[i * n_theta + j] = tau;
        }
        Self::new(r_min, r_max, n_r, n_theta, values)
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.hr()
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_theta as f64
    }

    pub fn triples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.n_r).flat_map(move |i| {
            (0..self.n_theta).map(move |j| (self.radius(i), self.angle(j), self.values[i * self.n_theta + j]))
        })
    }

    fn hr(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_r - 1) as f64
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_theta + j % self.n_theta]
    }

    /// Finite-difference partials `(∂_r τ, ∂_θ τ)` at every node.
    pub fn node_partials(&self) -> (Vec<f64>, Vec<f64>) {
        let (nr, nt) = (self.n_r, self.n_theta);
        let (hr, ht) = (self.hr(), TAU / nt as f64);
        let mut dr = vec![0.0; nr * nt];
        let mut dth = vec![0.0; nr * nt];
        for i in 0..nr {
            for j in 0..nt {
                dr[i * nt + j] = if i == 0 {
                    (-3.0 * self.at(0, j) + 4.0 * self.at(1, j) - self.at(2, j)) / (2.0 * hr)
                } else if i == nr - 1 {
                    (3.0 * self.at(i, j) - 4.0 * self.at(i - 1, j) + self.at(i - 2, j)) / (2.0 * hr)
                } else {
                    (self.at(i + 1, j) - self.at(i - 1, j)) / (2.0 * hr)
                };
                dth[i * nt + j] = (self.at(i, j + 1) - self.at(i, j + nt - 1)) / (2.0 * ht);
            }
        }
        (dr, dth)
    }

    fn interpolate(&self, data: &[f64], r: f64, theta: f64) -> Result<f64> {
        let tol = 1e-12 * (1.0 + self.r_max);
        if !(r >= self.r_min - tol && r <= self.r_max + tol) {
            return Err(Error::OutOfRange(format!(
                "r = {r} outside the grid [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        let x = ((r - self.r_min) / self.hr()).clamp(0.0, (self.n_r - 1) as f64);
        let i = (x.floor() as usize).min(self.n_r - 2);
        let fx = x - i as f64;
        let y = reduce_angle(theta) / (TAU / self.n_theta as f64);
        let j = (y.floor() as usize).min(self.n_theta - 1);
        let fy = y - j as f64;
        let nt = self.n_theta;
        let v = |ii: usize, jj: usize| data[ii * nt + jj % nt];
        Ok((1.0 - fx) * ((1.0 - fy) * v(i, j) + fy * v(i, j + 1))
            + fx * ((1.0 - fy) * v(i + 1, j) + fy * v(i + 1, j + 1)))
    }

    fn partials_cache(&self) -> std::borrow::Cow<'_, (Vec<f64>, Vec<f64>)> {
        match &self.partials {
            Some(p) => std::borrow::Cow::Borrowed(p),
            None => std::borrow::Cow::Owned(self.node_partials()),
        }
    }
}

/// Height field of a graph surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum HeightField {
    /// `Σₖ rᵏ bₖ(θ)`.
    Polar {
        terms: Vec<BoundaryCurve>,
    },
    /// `(1 + r²)/(2r)`, the hyperboloid `H²` in BTZ coordinates.
    HyperbolicCap,
    /// `b(θ) + M (1/r − 1/R)`.
    SurgeryComplete {
        boundary: BoundaryCurve,
        radius: f64,
        m: f64,
    },
    /// `((2r − R)/R)² b(θ) + M (1/r − 1/R)` for `r ≥ R/2`, `M/R` inside.
    SurgeryCap {
        boundary: BoundaryCurve,
        radius: f64,
        m: f64,
    },
    Grid(GridField),
}

impl HeightField {
    pub fn constant(c: f64) -> Self {
        HeightField::Polar {
            terms: vec![BoundaryCurve::constant(c)],
        }
    }

    /// `c + slope·r`.
    pub fn linear(c: f64, slope: f64) -> Self {
        HeightField::Polar {
            terms: vec![BoundaryCurve::constant(c), BoundaryCurve::constant(slope)],
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, HeightField::Grid(_))
    }

    /// Smallest radius at which the field is defined (exclusive for `0` when
    /// the field blows up there).
    pub fn min_radius(&self) -> f64 {
        match self {
            HeightField::Grid(g) => g.r_min,
            _ => 0.0,
        }
    }

    fn needs_positive_r(&self) -> bool {
        matches!(self, HeightField::HyperbolicCap | HeightField::SurgeryComplete { .. })
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if !r.is_finite() || r < 0.0 || (r == 0.0 && self.needs_positive_r()) {
            return Err(Error::OutOfRange(format!("height field undefined at r = {r}")));
        }
        Ok(())
    }

    pub fn value(&self, r: f64, theta: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(match self {
            HeightField::Polar { terms } => {
                let mut acc = 0.0;
                let mut rk = 1.0;
                for b in terms {
                    acc += rk * b.value(theta);
                    rk *= r;
                }
                acc
            }
            HeightField::HyperbolicCap => (1.0 + r * r) / (2.0 * r),
            HeightField::SurgeryComplete { boundary, radius, m } => {
                boundary.value(theta) + m * (1.0 / r - 1.0 / radius)
            }
            HeightField::SurgeryCap { boundary, radius, m } => {
                if r <= 0.5 * radius {
                    m / radius
                } else {
                    let s = (2.0 * r - radius) / radius;
                    s * s * boundary.value(theta) + m * (1.0 / r - 1.0 / radius)
                }
            }
            HeightField::Grid(g) => g.interpolate(&g.values, r, theta)?,
        })
    }

    /// `(∂_r τ, ∂_θ τ)`. For the piecewise cap the outer branch is used at
    /// `r = R/2` itself.
    pub fn partials(&self, r: f64, theta: f64) -> Result<(f64, f64)> {
        self.check_r(r)?;
        Ok(match self {
            HeightField::Polar { terms } => {
                let (mut dr, mut dth) = (0.0, 0.0);
                let mut rk = 1.0;
                for (k, b) in terms.iter().enumerate() {
                    dth += rk * b.derivative(theta, 1);
                    if k > 0 {
                        dr += k as f64 * r.powi(k as i32 - 1) * b.value(theta);
                    }
                    rk *= r;
                }
                (dr, dth)
            }
            HeightField::HyperbolicCap => (0.5 - 0.5 / (r * r), 0.0),
            HeightField::SurgeryComplete { boundary, m, .. } => (-m / (r * r), boundary.derivative(theta, 1)),
            HeightField::SurgeryCap { boundary, radius, m } => {
                if r < 0.5 * radius {
                    (0.0, 0.0)
                } else {
                    let s = (2.0 * r - radius) / radius;
                    (
                        4.0 * s / radius * boundary.value(theta) - m / (r * r),
                        s * s * boundary.derivative(theta, 1),
                    )
                }
            }
            HeightField::Grid(g) => {
                let p = g.partials_cache();
                (g.interpolate(&p.0, r, theta)?, g.interpolate(&p.1, r, theta)?)
            }
        })
    }
}

/// `δ = 1 − 2∂_rτ − (∂_θτ / r)²` from a jet.
#[inline]
pub fn delta_from_jet(r: f64, tau_r: f64, tau_theta: f64) -> f64 {
    let a = tau_theta / r;
    1.0 - 2.0 * tau_r - a * a
}

/// `1 − (∂_rτ)² − (∂_θτ / (k r))²` with `k = α/2π`.
#[inline]
pub fn massive_delta_from_jet(alpha: ConeAngle, r: f64, tau_r: f64, tau_theta: f64) -> f64 {
    let a = tau_theta / (alpha.ratio() * r);
    1.0 - tau_r * tau_r - a * a
}

/// Induced metric of a graph in `E^{1,2}_0` from a jet, basis `(dr, dθ)`.
pub fn induced_metric_from_jet(r: f64, tau_r: f64, tau_theta: f64) -> Matrix2<f64> {
    Matrix2::new(1.0 - 2.0 * tau_r, -tau_theta, -tau_theta, r * r)
}

/// Induced metric for any ambient angle: `Jᵀ g J` with `J` the graph
/// embedding's Jacobian.
pub fn pullback_from_jet(alpha: ConeAngle, r: f64, tau_r: f64, tau_theta: f64) -> Matrix2<f64> {
    let g: Matrix3<f64> = metric_coefficients(alpha, r);
    let j = nalgebra::Matrix3x2::new(tau_r, tau_theta, 1.0, 0.0, 0.0, 1.0);
    j.transpose() * g * j
}

/// Strict positive-definiteness via eigenvalues.
pub fn is_positive_definite(m: &Matrix2<f64>) -> bool {
    let e = SymmetricEigen::new(*m).eigenvalues;
    e[0] > 0.0 && e[1] > 0.0
}

/// A graph surface over `{r_in ≤ r ≤ R}` (or `0 < r` when punctured).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSurface {
    pub ambient: ConeAngle,
    pub radius: f64,
    /// Inner radius of an annular domain; `0` for a disc.
    #[serde(default)]
    pub inner_radius: f64,
    pub punctured: bool,
    pub field: HeightField,
}

/// Minimum of a scalar over a sampling grid, with its location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMinimum {
    pub value: f64,
    pub r: f64,
    pub theta: f64,
    pub samples: usize,
}

/// Radial placement of grid samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadialSampling {
    /// `n_r` equally spaced radii ending at `R`, excluding the inner end
    /// when it is 0 or a puncture.
    Uniform,
    /// `n_r` geometrically spaced radii from `R` down to `R·min_ratio`.
    Geometric { min_ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub radial: RadialSampling,
}

impl SamplingGrid {
    pub fn uniform(n_r: usize, n_theta: usize) -> Self {
        Self {
            n_r,
            n_theta,
            radial: RadialSampling::Uniform,
        }
    }

    pub fn geometric(n_r: usize, n_theta: usize, min_ratio: f64) -> Self {
        Self {
            n_r,
            n_theta,
            radial: RadialSampling::Geometric { min_ratio },
        }
    }

    fn radii(&self, lo: f64, hi: f64, include_lo: bool) -> Vec<f64> {
        let n = self.n_r.max(1);
        match self.radial {
            RadialSampling::Uniform => {
                if include_lo {
                    let d = n.max(2) - 1;
                    (0..n.max(2)).map(|i| lo + (hi - lo) * i as f64 / d as f64).collect()
                } else {
                    (1..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
                }
            }
            RadialSampling::Geometric { min_ratio } => {
                let bottom = (hi * min_ratio).max(lo);
                if n == 1 || bottom >= hi {
                    return vec![hi];
                }
                let q = (bottom / hi).powf(1.0 / (n - 1) as f64);
                (0..n)
                    .map(|i| if i == n - 1 { bottom } else { hi * q.powi(i as i32) })
                    .collect()
            }
        }
    }
}

impl GraphSurface {
    pub fn new(ambient: ConeAngle, radius: f64, punctured: bool, field: HeightField) -> Result<Self> {
        let s = Self {
            ambient,
            radius,
            inner_radius: 0.0,
            punctured,
            field,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn annulus(ambient: ConeAngle, inner_radius: f64, radius: f64, field: HeightField) -> Result<Self> {
        let s = Self {
            ambient,
            radius,
            inner_radius,
            punctured: false,
            field,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "disc radius {} must be positive",
                self.radius
            )));
        }
        if !(self.inner_radius >= 0.0 && self.inner_radius < self.radius) {
            return Err(Error::OutOfRange(format!(
                "inner radius {} must lie in [0, R)",
                self.inner_radius
            )));
        }
        if !self.punctured && self.inner_radius == 0.0 && self.field.needs_positive_r() {
            return Err(Error::OutOfRange(
                "field is undefined at r = 0; use a punctured disc".into(),
            ));
        }
        if let HeightField::Grid(g) = &self.field {
            let tol = 1e-12 * (1.0 + self.radius);
            if g.r_max < self.radius - tol {
                return Err(Error::OutOfRange("grid does not cover the outer radius".into()));
            }
        }
        if let HeightField::Polar { terms } = &self.field {
            terms.iter().try_for_each(BoundaryCurve::validate)?;
        }
        Ok(())
    }

    /// Inner end of the sampled domain.
    fn sample_floor(&self) -> f64 {
        self.inner_radius.max(self.field.min_radius())
    }

    fn require_btz(&self) -> Result<()> {
        if self.ambient.is_btz() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "δ-criterion applies to α = 0, surface lives in α = {}",
                self.ambient.value()
            )))
        }
    }

    pub fn height(&self, r: f64, theta: f64) -> Result<f64> {
        self.field.value(r, theta)
    }

    /// `δ(r, θ)` for a surface in `E^{1,2}_0`.
    pub fn delta(&self, r: f64, theta: f64) -> Result<f64> {
        self.require_btz()?;
        if !(r > 0.0) {
            return Err(Error::SingularPoint);
        }
        let (tr, tt) = self.field.partials(r, theta)?;
        Ok(delta_from_jet(r, tr, tt))
    }

    /// Spacelike discriminant for a massive ambient.
    pub fn massive_delta(&self, r: f64, theta: f64) -> Result<f64> {
        if self.ambient.is_btz() {
            return Err(Error::Unsupported("massive criterion needs α > 0".into()));
        }
        if !(r > 0.0) {
            return Err(Error::SingularPoint);
        }
        let (tr, tt) = self.field.partials(r, theta)?;
        Ok(massive_delta_from_jet(self.ambient, r, tr, tt))
    }

    /// Induced metric in the basis `(dr, dθ)`.
    pub fn induced_metric(&self, r: f64, theta: f64) -> Result<Matrix2<f64>> {
        if !(r > 0.0) {
            return Err(Error::SingularPoint);
        }
        let (tr, tt) = self.field.partials(r, theta)?;
        Ok(if self.ambient.is_btz() {
            induced_metric_from_jet(r, tr, tt)
        } else {
            pullback_from_jet(self.ambient, r, tr, tt)
        })
    }

    /// Spacelike discriminant appropriate to the ambient.
    pub fn discriminant(&self, r: f64, theta: f64) -> Result<f64> {
        if self.ambient.is_btz() {
            self.delta(r, theta)
        } else {
            self.massive_delta(r, theta)
        }
    }

    /// Minimum of `weight(r)·discriminant` over a sampling grid.
    pub fn scan(&self, grid: &SamplingGrid, weight: fn(f64) -> f64, exec: Exec) -> Result<GridMinimum> {
        let floor = self.sample_floor();
        let include_lo = floor > 0.0 && !(self.punctured && floor == self.inner_radius);
        let radii = self.radii_for(grid, floor, include_lo);
        let nt = grid.n_theta.max(1);
        let rows = exec.map_range(radii.len(), |i| -> Result<(f64, f64, f64)> {
            let r = radii[i];
            let mut best = (f64::INFINITY, r, 0.0);
            for j in 0..nt {
                let th = TAU * j as f64 / nt as f64;
                let v = weight(r) * self.discriminant(r, th)?;
                if v < best.0 || v.is_nan() {
                    best = (v, r, th);
                    if v.is_nan() {
                        break;
                    }
                }
            }
            Ok(best)
        });
        let mut out = GridMinimum {
            value: f64::INFINITY,
            r: self.radius,
            theta: 0.0,
            samples: radii.len() * nt,
        };
        for row in rows {
            let (v, r, th) = row?;
            if v.is_nan() {
                return Err(Error::OutOfRange(format!("discriminant undefined at r = {r}")));
            }
            if v < out.value {
                out.value = v;
                out.r = r;
                out.theta = th;
            }
        }
        Ok(out)
    }

    fn radii_for(&self, grid: &SamplingGrid, floor: f64, include_lo: bool) -> Vec<f64> {
        let mut rs = grid.radii(floor, self.radius, include_lo);
        rs.retain(|&r| r > 0.0);
        rs
    }

    /// Minimum of the discriminant on a grid; spacelike iff positive.
    pub fn spacelike_check(&self, grid: &SamplingGrid, exec: Exec) -> Result<GridMinimum> {
        self.scan(grid, |_| 1.0, exec)
    }

    /// Largest `C` with `δ ≥ C²/r²` on a geometric grid reaching
    /// `R·10⁻⁶`, or `None` when `min r²δ < 10⁻⁶`.
    pub fn completeness_certificate(&self, grid: &SamplingGrid, exec: Exec) -> Result<Option<f64>> {
        self.require_btz()?;
        if !self.punctured {
            return Err(Error::Precondition(
                "completeness certificate needs a punctured disc".into(),
            ));
        }
        let grid = SamplingGrid {
            radial: RadialSampling::Geometric {
                min_ratio: CERTIFICATE_MIN_RATIO,
            },
            ..*grid
        };
        let m = self.scan(&grid, |r| r * r, exec)?;
        Ok((m.value >= CERTIFICATE_FLOOR).then(|| m.value.sqrt()))
    }

    /// Whether `min_θ τ(r, ·)` grows without bound along `r = R·2⁻ᵏ`.
    ///
    /// The tail of the sequence must be strictly increasing and its
    /// increments must not decay geometrically: a bounded increasing
    /// sequence has summable increments, while `1/r` doubles them and
    /// `−ln r` keeps them constant.
    pub fn divergence_check(&self, n_theta: usize) -> Result<bool> {
        self.require_btz()?;
        if !self.punctured {
            return Err(Error::Precondition("divergence check needs a punctured disc".into()));
        }
        let floor = self.sample_floor();
        let mut mins = Vec::new();
        let mut r = self.radius;
        while r > floor && mins.len() < 48 {
            let m = (0..n_theta.max(1))
                .map(|j| self.height(r, TAU * j as f64 / n_theta.max(1) as f64))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            mins.push(m);
            r *= 0.5;
        }
        if mins.len() < 8 {
            return Err(Error::OutOfRange("field does not reach small enough radii".into()));
        }
        let tail = &mins[mins.len() / 2..];
        let inc: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
        let increasing = inc.iter().all(|&d| d > 0.0);
        Ok(increasing && inc[inc.len() - 1] >= 0.5 * inc[0])
    }

    /// Length of a polyline in `(r, θ)` under the induced metric, with
    /// 5-point Gauss–Legendre quadrature on each segment. Angles are
    /// interpolated linearly without reduction.
    pub fn surface_length(&self, path: &[(f64, f64)]) -> Result<f64> {
        const NODES: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        if path.len() < 2 {
            return Err(Error::InvalidCurve("path needs at least two points".into()));
        }
        let floor = self.sample_floor();
        let mut total = 0.0;
        for w in path.windows(2) {
            let ((r0, t0), (r1, t1)) = (w[0], w[1]);
            for &r in &[r0, r1] {
                if !(r > 0.0 && r >= floor && r <= self.radius * (1.0 + 1e-12)) {
                    return Err(Error::OutOfRange(format!("path point r = {r} outside the domain")));
                }
            }
            let v = nalgebra::Vector2::new(r1 - r0, t1 - t0);
            for (x, wt) in NODES.iter().zip(WEIGHTS) {
                let s = 0.5 * (1.0 + x);
                let g = self.induced_metric(r0 + s * (r1 - r0), t0 + s * (t1 - t0))?;
                let q = v.dot(&(g * v));
                if q < 0.0 {
                    return Err(Error::Precondition(format!(
                        "path is not spacelike on the surface (q = {q:e})"
                    )));
                }
                total += 0.5 * wt * q.sqrt();
            }
        }
        Ok(total)
    }

    /// `τ(R, θ)` at `n` equally spaced angles.
    pub fn boundary_trace(&self, at_radius: f64, n: usize) -> Result<Vec<(f64, f64)>> {
        (0..n)
            .map(|j| {
                let th = TAU * j as f64 / n as f64;
                Ok((th, self.height(at_radius, th)?))
            })
            .collect()
    }
}

/// Complete spacelike extension of boundary data inside the punctured disc:
/// `τ = b(θ) + M(1/r − 1/R)`, `M = 1 + max|b′|²`, so that
/// `r²δ = r² + 2M − b′² > 1`.
pub fn extend_boundary_complete(boundary: &BoundaryCurve, radius: f64) -> Result<GraphSurface> {
    boundary.validate()?;
    let md = boundary.max_abs_derivative();
    GraphSurface::new(
        ConeAngle::BTZ,
        radius,
        true,
        HeightField::SurgeryComplete {
            boundary: boundary.clone(),
            radius,
            m: 1.0 + md * md,
        },
    )
}

/// Spacelike extension across the BTZ line. `M` doubles from 1 until the
/// outer branch has `δ > 10⁻⁹` on a uniform grid of `(R/2, R]`.
pub fn extend_boundary_cap(
    boundary: &BoundaryCurve,
    radius: f64,
    grid: &SamplingGrid,
    exec: Exec,
) -> Result<(GraphSurface, GridMinimum)> {
    boundary.validate()?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutOfRange(format!("disc radius {radius} must be positive")));
    }
    let nt = grid.n_theta.max(1);
    let nr = grid.n_r.max(1);
    let columns: Vec<(f64, f64, f64)> = (0..nt)
        .map(|j| {
            let th = TAU * j as f64 / nt as f64;
            (th, boundary.value(th), boundary.derivative(th, 1))
        })
        .collect();
    let mut m = 1.0;
    while m <= CAP_M_MAX {
        let rows = exec.map_range(nr, |i| {
            let r = 0.5 * radius * (1.0 + (i + 1) as f64 / nr as f64);
            let s = (2.0 * r - radius) / radius;
            let mut best = (f64::INFINITY, r, 0.0);
            for &(th, b, db) in &columns {
                let d = delta_from_jet(r, 4.0 * s / radius * b - m / (r * r), s * s * db);
                if !(d >= best.0) {
                    best = (d, r, th);
                }
            }
            best
        });
        let (value, r, theta) = rows
            .into_iter()
            .fold((f64::INFINITY, radius, 0.0), |a, b| if !(b.0 >= a.0) { b } else { a });
        if value > CAP_MARGIN {
            let surface = GraphSurface::new(
                ConeAngle::BTZ,
                radius,
                false,
                HeightField::SurgeryCap {
                    boundary: boundary.clone(),
                    radius,
                    m,
                },
            )?;
            return Ok((
                surface,
                GridMinimum {
                    value,
                    r,
                    theta,
                    samples: nr * nt,
                },
            ));
        }
        m *= 2.0;
    }
    Err(Error::CertificationFailure(format!(
        "no M ≤ 2^60 makes the cap spacelike on a {nr}×{nt} grid"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeSurface {
    pub radius: f64,
    pub boundary_deviation: f64,
    pub inner_spacelike: bool,
    pub outer_spacelike: bool,
    pub inner_min_delta: f64,
    pub outer_min_delta: f64,
    /// Whether the inner piece is defined on the singular line itself.
    pub crosses_line: bool,
    pub trace: Vec<(f64, f64)>,
}

/// Glue an inner piece on `r ≤ R` to an outer annulus starting at `R`.
pub fn assemble_cauchy(
    outer: &GraphSurface,
    inner: &GraphSurface,
    grid: &SamplingGrid,
    exec: Exec,
) -> Result<CompositeSurface> {
    let radius = inner.radius;
    if (outer.inner_radius - radius).abs() > BOUNDARY_MATCH_TOL * (1.0 + radius) {
        return Err(Error::Precondition(format!(
            "outer piece starts at r = {}, inner piece ends at r = {radius}",
            outer.inner_radius
        )));
    }
    if outer.ambient != inner.ambient {
        return Err(Error::Precondition("pieces live in different ambients".into()));
    }
    let n = grid.n_theta.max(16);
    let inner_trace = inner.boundary_trace(radius, n)?;
    let outer_trace = outer.boundary_trace(radius, n)?;
    let deviation = inner_trace
        .iter()
        .zip(&outer_trace)
        .map(|(a, b)| (a.1 - b.1).abs())
        .fold(0.0, f64::max);
    if deviation > BOUNDARY_MATCH_TOL {
        return Err(Error::BoundaryMismatch {
            deviation,
            tolerance: BOUNDARY_MATCH_TOL,
        });
    }
    let uniform = SamplingGrid {
        radial: RadialSampling::Uniform,
        ..*grid
    };
    let inner_scan = if inner.punctured {
        inner.spacelike_check(&uniform, exec)?
    } else {
        // the constant core is flat; only the outer branch can fail
        let outer_branch = match &inner.field {
            HeightField::SurgeryCap { .. } => GraphSurface {
                inner_radius: 0.5 * radius,
                punctured: true,
                ..inner.clone()
            },
            _ => GraphSurface {
                punctured: true,
                ..inner.clone()
            },
        };
        outer_branch.spacelike_check(&uniform, exec)?
    };
    let outer_scan = outer.spacelike_check(&uniform, exec)?;
    Ok(CompositeSurface {
        radius,
        boundary_deviation: deviation,
        inner_spacelike: inner_scan.value > 0.0,
        outer_spacelike: outer_scan.value > 0.0,
        inner_min_delta: inner_scan.value,
        outer_min_delta: outer_scan.value,
        crosses_line: !inner.punctured && inner.inner_radius == 0.0,
        trace: inner_trace,
    })
}

/// Header of a surface file; grid values travel in a companion CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceHeader {
    #[serde(rename = "R")]
    pub radius: f64,
    pub punctured: bool,
    pub alpha: ConeAngle,
    pub kind: SurfaceKind,
    #[serde(default)]
    pub inner_radius: f64,
    /// Present for closed-form surfaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<HeightField>,
    /// Lattice shape for grid surfaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridShape>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    ClosedForm,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl GraphSurface {
    pub fn header(&self) -> SurfaceHeader {
        let (kind, field, grid) = match &self.field {
            HeightField::Grid(g) => (
                SurfaceKind::Grid,
                None,
                Some(GridShape {
                    r_min: g.r_min,
                    r_max: g.r_max,
                    n_r: g.n_r,
                    n_theta: g.n_theta,
                }),
            ),
            f => (SurfaceKind::ClosedForm, Some(f.clone()), None),
        };
        SurfaceHeader {
            radius: self.radius,
            punctured: self.punctured,
            alpha: self.ambient,
            kind,
            inner_radius: self.inner_radius,
            field,
            grid,
        }
    }

    /// Rebuild from a header and, for grid surfaces, the CSV triples.
    pub fn from_parts(header: &SurfaceHeader, triples: Option<&[(f64, f64, f64)]>) -> Result<Self> {
        let field = match (header.kind, &header.field, triples) {
            (SurfaceKind::ClosedForm, Some(f), _) => f.clone(),
            (SurfaceKind::Grid, _, Some(t)) => HeightField::Grid(GridField::from_triples(t)?),
            (SurfaceKind::ClosedForm, None, _) => {
                return Err(Error::OutOfRange("closed-form header without a field".into()))
            }
            (SurfaceKind::Grid, _, None) => return Err(Error::OutOfRange("grid surface without samples".into())),
        };
        let s = Self {
            ambient: header.alpha,
            radius: header.radius,
            inner_radius: header.inner_radius,
            punctured: header.punctured,
            field,
        };
        s.validate()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn btz_surface(field: HeightField) -> GraphSurface {
        GraphSurface::new(ConeAngle::BTZ, 1.0, true, field).unwrap()
    }

    #[test]
    fn delta_examples() {
        let c = btz_surface(HeightField::constant(2.0));
        assert_eq!(c.delta(0.3, 1.0).unwrap(), 1.0);
        let h = btz_surface(HeightField::HyperbolicCap);
        for r in [0.1, 0.5, 1.0] {
            assert_abs_diff_eq!(h.delta(r, 0.0).unwrap(), 1.0 / (r * r), epsilon = 1e-12 / (r * r));
        }
        let cone = btz_surface(HeightField::linear(0.0, 1.0));
        assert_eq!(cone.delta(0.7, 2.0).unwrap(), -1.0);
        assert!(
            cone.spacelike_check(&SamplingGrid::uniform(8, 8), Exec::Sequential)
                .unwrap()
                .value
                < 0.0
        );
    }

    #[test]
    fn induced_metric_examples() {
        let c = btz_surface(HeightField::constant(0.0));
        assert_eq!(c.induced_metric(1.0, 0.3).unwrap(), Matrix2::identity());
        let h = btz_surface(HeightField::HyperbolicCap);
        assert_eq!(h.induced_metric(1.0, 0.3).unwrap(), Matrix2::identity());
    }

    #[test]
    fn generic_pullback_matches_closed_form() {
        for (r, a, b) in [(0.5, 0.1, -0.2), (2.0, -1.0, 3.0)] {
            assert_abs_diff_eq!(
                pullback_from_jet(ConeAngle::BTZ, r, a, b),
                induced_metric_from_jet(r, a, b),
                epsilon = 1e-14
            );
            let alpha = ConeAngle::new(1.0).unwrap();
            let g = pullback_from_jet(alpha, r, a, b);
            let k = alpha.ratio();
            assert_abs_diff_eq!(
                g.determinant(),
                k * k * r * r * massive_delta_from_jet(alpha, r, a, b),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn lengths() {
        let c = btz_surface(HeightField::constant(1.0));
        assert_abs_diff_eq!(
            c.surface_length(&[(1.0, 0.2), (1e-9, 0.2)]).unwrap(),
            1.0 - 1e-9,
            epsilon = 1e-15
        );
        let circle: Vec<_> = (0..=64).map(|i| (0.5, TAU * i as f64 / 64.0)).collect();
        assert_abs_diff_eq!(c.surface_length(&circle).unwrap(), TAU * 0.5, epsilon = 1e-12);
        let h = btz_surface(HeightField::HyperbolicCap);
        let eps: f64 = 1e-3;
        let path: Vec<_> = (0..=200).map(|i| (eps.powf(i as f64 / 200.0), 0.0)).collect();
        assert_abs_diff_eq!(h.surface_length(&path).unwrap(), (1.0 / eps).ln(), epsilon = 1e-8);
    }

    #[test]
    fn certificates_and_divergence() {
        let g = SamplingGrid::geometric(128, 32, CERTIFICATE_MIN_RATIO);
        let h = btz_surface(HeightField::HyperbolicCap);
        assert_abs_diff_eq!(
            h.completeness_certificate(&g, Exec::Sequential).unwrap().unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert!(h.divergence_check(16).unwrap());
        let c = btz_surface(HeightField::constant(0.0));
        assert_eq!(c.completeness_certificate(&g, Exec::Sequential).unwrap(), None);
        assert!(!c.divergence_check(16).unwrap());
        let disc = GraphSurface::new(ConeAngle::BTZ, 1.0, false, HeightField::constant(0.0)).unwrap();
        assert!(disc.completeness_certificate(&g, Exec::Sequential).is_err());
    }

    #[test]
    fn surgery_constant_boundary() {
        let s = extend_boundary_complete(&BoundaryCurve::constant(1.0), 1.0).unwrap();
        let HeightField::SurgeryComplete { m, .. } = s.field else {
            panic!()
        };
        assert_eq!(m, 1.0);
        for r in [0.01, 0.3, 1.0] {
            assert_abs_diff_eq!(s.height(r, 0.0).unwrap(), 1.0 + 1.0 / r - 1.0, epsilon = 1e-12);
            // r²δ = r² + 2M − τ′²
            assert_abs_diff_eq!(s.delta(r, 0.0).unwrap(), 1.0 + 2.0 / (r * r), epsilon = 1e-9 / (r * r));
        }
        let g = SamplingGrid::geometric(64, 16, CERTIFICATE_MIN_RATIO);
        assert!(s.completeness_certificate(&g, Exec::Sequential).unwrap().unwrap() >= 1.0);
        assert!(s.divergence_check(16).unwrap());
    }

    #[test]
    fn surgery_sine_boundary() {
        let b = BoundaryCurve::new(0.0, vec![], vec![1.0]).unwrap();
        let s = extend_boundary_complete(&b, 1.0).unwrap();
        let HeightField::SurgeryComplete { m, .. } = s.field else {
            panic!()
        };
        assert_abs_diff_eq!(m, 2.0, epsilon = 1e-15);
        let min = s
            .scan(&SamplingGrid::uniform(256, 256), |r| r * r, Exec::Sequential)
            .unwrap();
        assert!(min.value > 1.0);
        for (th, tau) in s.boundary_trace(1.0, 64).unwrap() {
            assert_eq!(tau, b.value(th));
        }
    }

    #[test]
    fn cap_examples() {
        let grid = SamplingGrid::uniform(512, 512);
        let (zero, _) = extend_boundary_cap(&BoundaryCurve::constant(0.0), 1.0, &grid, Exec::Sequential).unwrap();
        let HeightField::SurgeryCap { m, .. } = zero.field else {
            panic!()
        };
        assert_eq!(m, 1.0);
        let b = BoundaryCurve::new(0.0, vec![1.0], vec![]).unwrap();
        let (cap, min) = extend_boundary_cap(&b, 1.0, &grid, Exec::Sequential).unwrap();
        let HeightField::SurgeryCap { m, .. } = cap.field else {
            panic!()
        };
        assert_eq!(m, 4.0);
        assert!(min.value > CAP_MARGIN);
        let outer = GraphSurface {
            inner_radius: 0.5,
            punctured: true,
            ..cap.clone()
        };
        let generic = outer.spacelike_check(&grid, Exec::Sequential).unwrap();
        assert_abs_diff_eq!(generic.value, min.value, epsilon = 1e-12);
        for th in [0.0, 1.0, 3.0] {
            let inner = cap.height(0.5 - 1e-15, th).unwrap();
            let outer = cap.height(0.5 + 1e-15, th).unwrap();
            assert!((inner - outer).abs() < 1e-12);
            assert_eq!(cap.height(0.0, th).unwrap(), 4.0);
        }
    }

    #[test]
    fn assemble() {
        let b = BoundaryCurve::constant(1.0);
        let outer = GraphSurface::annulus(ConeAngle::BTZ, 1.0, 2.0, HeightField::constant(1.0)).unwrap();
        let grid = SamplingGrid::uniform(64, 64);
        let inner = extend_boundary_complete(&b, 1.0).unwrap();
        let rep = assemble_cauchy(&outer, &inner, &grid, Exec::Sequential).unwrap();
        assert!(rep.inner_spacelike && rep.outer_spacelike && !rep.crosses_line);
        assert_eq!(rep.boundary_deviation, 0.0);
        let (cap, _) = extend_boundary_cap(&b, 1.0, &grid, Exec::Sequential).unwrap();
        let rep = assemble_cauchy(&outer, &cap, &grid, Exec::Sequential).unwrap();
        assert!(rep.crosses_line && rep.inner_spacelike);
        let shifted = GraphSurface::annulus(ConeAngle::BTZ, 1.0, 2.0, HeightField::constant(1.5)).unwrap();
        assert!(matches!(
            assemble_cauchy(&shifted, &inner, &grid, Exec::Sequential),
            Err(Error::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn grid_partials_converge_quadratically() {
        let b = BoundaryCurve::new(0.3, vec![0.5, -0.2], vec![0.1, 0.4]).unwrap();
        let field = HeightField::Polar {
            terms: vec![b.clone(), b.clone(), BoundaryCurve::constant(-0.7)],
        };
        let err = |n: usize| {
            let g = GridField::sample(&field, 0.2, 1.0, n + 1, 4 * n).unwrap();
            let (dr, dth) = g.node_partials();
            let mut e: f64 = 0.0;
            for i in 1..n {
                for j in 0..4 * n {
                    let (r, th) = (g.radius(i), g.angle(j));
                    let (er, et) = field.partials(r, th).unwrap();
                    e = e
                        .max((dr[i * 4 * n + j] - er).abs())
                        .max((dth[i * 4 * n + j] - et).abs());
                }
            }
            e
        };
        let ratio = err(32) / err(64);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn grid_roundtrip_through_triples() {
        let g = GridField::sample(&HeightField::HyperbolicCap, 0.1, 1.0, 10, 12).unwrap();
        let t: Vec<_> = g.triples().collect();
        let back = GridField::from_triples(&t).unwrap();
        assert_eq!(back.values, g.values);
        let s = GraphSurface::new(ConeAngle::BTZ, 1.0, true, HeightField::Grid(g)).unwrap();
        let s2 = GraphSurface::from_parts(&s.header(), Some(&t)).unwrap();
        assert_eq!(s2.height(0.55, 1.0).unwrap(), s.height(0.55, 1.0).unwrap());
    }

    #[test]
    fn grid_certificate_near_hyperbolic_cap() {
        let g = GridField::sample(&HeightField::HyperbolicCap, 0.05, 1.0, 400, 8).unwrap();
        let s = GraphSurface::new(ConeAngle::BTZ, 1.0, true, HeightField::Grid(g)).unwrap();
        let c = s
            .completeness_certificate(&SamplingGrid::geometric(64, 8, 1e-6), Exec::Sequential)
            .unwrap()
            .unwrap();
        assert!((c - 1.0).abs() < 1e-2, "{c}");
    }

    #[test]
    fn boundary_derivatives() {
        let b = BoundaryCurve::new(1.0, vec![0.0, 2.0], vec![3.0]).unwrap();
        let th = 0.7;
        let h = 1e-5;
        for k in 0..3 {
            let fd = (b.derivative(th + h, k) - b.derivative(th - h, k)) / (2.0 * h);
            assert_abs_diff_eq!(fd, b.derivative(th, k + 1), epsilon = 1e-6);
        }
        let sampled = (0..100_000)
            .map(|i| b.derivative(TAU * i as f64 / 100_000.0, 1).abs())
            .fold(0.0, f64::max);
        assert!(b.max_abs_derivative() >= sampled - 1e-9);
    }

    fn trig(coeffs: &[f64]) -> BoundaryCurve {
        let d = coeffs.len() / 2;
        BoundaryCurve::new(coeffs[0], coeffs[1..=d].to_vec(), coeffs[d + 1..].to_vec()).unwrap()
    }

    proptest! {
        #[test]
        fn delta_iff_positive_definite(r in 1e-3f64..10.0, tr in -5.0f64..5.0, tt in -5.0f64..5.0) {
            let d = delta_from_jet(r, tr, tt);
            let g = induced_metric_from_jet(r, tr, tt);
            prop_assert_eq!(d > 0.0, is_positive_definite(&g));
        }

        #[test]
        fn massive_radial_length_bounded(slope in -0.99f64..0.99, c in -1.0f64..1.0, amp in 0.0f64..0.2, alpha in 0.1f64..6.0) {
            let field = HeightField::Polar {
                terms: vec![BoundaryCurve::constant(c), BoundaryCurve::constant(slope), trig(&[0.0, 0.0, amp])],
            };
            let s = GraphSurface::new(ConeAngle::new(alpha).unwrap(), 1.0, false, field).unwrap();
            let path: Vec<_> = (0..=32).map(|i| (0.01 + 0.99 * i as f64 / 32.0, 0.4)).collect();
            if let Ok(len) = s.surface_length(&path) {
                prop_assert!(len <= 0.99 + 1e-12);
            }
        }

        #[test]
        fn btz_radial_length_bound(coeffs in proptest::collection::vec(-1.0f64..1.0, 5), th in 0.0f64..TAU) {
            let s = extend_boundary_complete(&trig(&coeffs), 1.0).unwrap();
            let r0: f64 = 1e-3;
            let path: Vec<_> = (0..=100).map(|i| (r0.powf(1.0 - i as f64 / 100.0), th)).collect();
            let len = s.surface_length(&path).unwrap();
            let rise = s.height(1.0, th).unwrap() - s.height(r0, th).unwrap();
            prop_assert!(len <= (1.0 - r0) - rise + 1e-9);
            prop_assert!(len <= 2.0 * (1.0 - r0) - 2.0 * rise + 1e-9);
        }

        #[test]
        fn certificate_implies_divergence(coeffs in proptest::collection::vec(-1.0f64..1.0, 7), cap in any::<bool>()) {
            let s = if cap {
                btz_surface(HeightField::HyperbolicCap)
            } else {
                extend_boundary_complete(&trig(&coeffs), 1.0).unwrap()
            };
            let g = SamplingGrid::geometric(48, 24, CERTIFICATE_MIN_RATIO);
            let c = s.completeness_certificate(&g, Exec::Sequential).unwrap();
            prop_assert!(c.is_some());
            prop_assert!(c.unwrap() >= 1.0 - 1e-12);
            prop_assert!(s.divergence_check(24).unwrap());
        }
    }
}
