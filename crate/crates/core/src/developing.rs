//! Developing maps and holonomies of the regular loci.
//!
//! The universal cover of `Reg(E^{1,2}_α)` is parametrised by
//! `(time, r, θ̃)` with `r > 0` and an unwrapped angle `θ̃`. The deck
//! transformation is `θ̃ ↦ θ̃ + 2π`.
//!
//! For the BTZ model space the development is
//! `D(τ, r, θ̃) = (τ + rθ̃²/2, τ + rθ̃²/2 − r, −rθ̃)`, an injective local
//! isometry onto the half-space `{t − x > 0} = I⁺(Δ)` with `Δ = ℝ·(1,1,0)`.
//! Its holonomy is the parabolic element [`btz_parabolic`]`(2π)`.

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{classify_isometry, eta, IsometryClass, LorentzIsometry, LorentzVector};
use crate::model::{metric_coefficients, ConeAngle};

/// Null direction fixed by the BTZ holonomy.
pub const BTZ_NULL_LINE: LorentzVector = LorentzVector::new(1.0, 1.0, 0.0);

/// A point of the universal cover of the regular locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverPoint {
    pub time: f64,
    pub r: f64,
    /// Unwrapped angle, not reduced mod 2π.
    pub theta: f64,
}

impl CoverPoint {
    pub fn new(time: f64, r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !time.is_finite() || !theta.is_finite() {
            return Err(Error::OutOfRange(format!(
                "cover point needs r > 0 and finite coordinates, got ({time}, {r}, {theta})"
            )));
        }
        Ok(Self { time, r, theta })
    }

    /// Image under the deck transformation `θ̃ ↦ θ̃ + 2π·turns`.
    pub fn deck(&self, turns: i32) -> Self {
        Self {
            theta: self.theta + TAU * turns as f64,
            ..*self
        }
    }
}

/// Holonomy of the generator of `π₁(Reg(E^{1,2}_α)) ≅ ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Holonomy {
    pub generator: LorentzIsometry,
}

impl Holonomy {
    /// Parabolic holonomy for `α = 0`, rotation by `α` otherwise.
    pub fn for_angle(alpha: ConeAngle) -> Self {
        let generator = if alpha.is_btz() {
            btz_holonomy_generator()
        } else {
            LorentzIsometry::rotation(alpha.value())
        };
        Self { generator }
    }

    pub fn class(&self) -> Result<IsometryClass> {
        classify_isometry(&self.generator)
    }

    /// Check that the holonomy class is the one a chart of angle `alpha`
    /// must carry: parabolic for `α = 0`, rotation by `α mod 2π` otherwise.
    pub fn matches_angle(&self, alpha: ConeAngle) -> Result<bool> {
        let class = self.class()?;
        if alpha.is_btz() {
            return Ok(class == IsometryClass::Parabolic);
        }
        let phi = alpha.value().rem_euclid(TAU);
        let folded = phi.min(TAU - phi);
        Ok(match class {
            IsometryClass::Identity => folded < 1e-9,
            IsometryClass::Elliptic { angle } => (angle - folded).abs() < 1e-9,
            _ => false,
        })
    }
}

/// Developing map of the BTZ model space.
pub fn develop_btz(p: &CoverPoint) -> LorentzVector {
    let CoverPoint { time: tau, r, theta } = *p;
    let t = tau + 0.5 * r * theta * theta;
    LorentzVector::new(t, t - r, -r * theta)
}

/// Exact Jacobian `∂(t, x, y) / ∂(τ, r, θ̃)` of [`develop_btz`].
pub fn develop_btz_jacobian(p: &CoverPoint) -> Matrix3<f64> {
    let (r, th) = (p.r, p.theta);
    let half = 0.5 * th * th;
    Matrix3::new(
        1.0,
        half,
        r * th, //
        1.0,
        half - 1.0,
        r * th, //
        0.0,
        -th,
        -r,
    )
}

/// Linear parabolic isometry fixing `(1,1,0)` pointwise with
/// `D(τ, r, θ̃ + period) = γ · D(τ, r, θ̃)`.
pub fn btz_parabolic(period: f64) -> LorentzIsometry {
    let a = period;
    let h = 0.5 * a * a;
    let m = Matrix3::new(
        1.0 + h,
        -h,
        -a, //
        h,
        1.0 - h,
        -a, //
        -a,
        a,
        1.0,
    );
    LorentzIsometry::linear_only(m).expect("parabolic matrix lies in SO₀(1,2)")
}

/// Holonomy of the deck generator `θ̃ ↦ θ̃ + 2π` for [`develop_btz`].
pub fn btz_holonomy_generator() -> LorentzIsometry {
    btz_parabolic(TAU)
}

/// Developing map of `E^{1,2}_α`, `α > 0`:
/// `(t, r, θ̃) ↦ (t, r cos(kθ̃), r sin(kθ̃))` with `k = α/2π`.
pub fn develop_massive(alpha: ConeAngle, p: &CoverPoint) -> Result<LorentzVector> {
    if alpha.is_btz() {
        return Err(Error::OutOfRange("massive development needs α > 0".into()));
    }
    let (s, c) = (alpha.ratio() * p.theta).sin_cos();
    Ok(LorentzVector::new(p.time, p.r * c, p.r * s))
}

pub fn develop_massive_jacobian(alpha: ConeAngle, p: &CoverPoint) -> Matrix3<f64> {
    let k = alpha.ratio();
    let (s, c) = (k * p.theta).sin_cos();
    Matrix3::new(
        1.0,
        0.0,
        0.0, //
        0.0,
        c,
        -p.r * k * s, //
        0.0,
        s,
        p.r * k * c,
    )
}

/// Developing map of `E^{1,2}_α` for any `α ≥ 0`.
pub fn develop(alpha: ConeAngle, p: &CoverPoint) -> LorentzVector {
    if alpha.is_btz() {
        develop_btz(p)
    } else {
        develop_massive(alpha, p).expect("α > 0")
    }
}

pub fn develop_jacobian(alpha: ConeAngle, p: &CoverPoint) -> Matrix3<f64> {
    if alpha.is_btz() {
        develop_btz_jacobian(p)
    } else {
        develop_massive_jacobian(alpha, p)
    }
}

/// Central-difference Jacobian of the development with step `h`.
pub fn develop_jacobian_fd(alpha: ConeAngle, p: &CoverPoint, h: f64) -> Matrix3<f64> {
    let mut j = Matrix3::zeros();
    for col in 0..3 {
        let shift = |s: f64| {
            let mut q = *p;
            match col {
                0 => q.time += s,
                1 => q.r += s,
                _ => q.theta += s,
            }
            develop(alpha, &q).to_vector3()
        };
        let d = (shift(h) - shift(-h)) / (2.0 * h);
        j.set_column(col, &d);
    }
    j
}

/// `‖Jᵀ η J − g_α‖_∞` for a given Jacobian of the development at `p`.
pub fn pullback_residual(alpha: ConeAngle, p: &CoverPoint, jacobian: &Matrix3<f64>) -> f64 {
    (jacobian.transpose() * eta() * jacobian - metric_coefficients(alpha, p.r)).amax()
}

/// `‖D(g·p) − hol·D(p)‖` for the deck generator.
pub fn equivariance_residual(alpha: ConeAngle, p: &CoverPoint) -> f64 {
    let hol = Holonomy::for_angle(alpha).generator;
    (develop(alpha, &p.deck(1)) - hol.apply(&develop(alpha, p))).euclidean_norm()
}

/// Outcome of checking that `(τ, r, θ̃) ↦ (τ, r, λθ̃)` pulls the BTZ metric
/// back to `−2dτdr + dr² + λ²r²dθ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleReport {
    pub lambda: f64,
    /// Angular coefficient `λ²r²` of the pulled-back metric at `r = 1`.
    pub angular_coefficient_at_unit_radius: f64,
    /// Worst pullback residual over the sample points.
    pub pullback_residual: f64,
    /// Rapidity `ln λ` of the boost realising the rescaling on holonomies.
    pub boost_rapidity: f64,
    /// `‖h γ h⁻¹ − γ_λ‖` where `γ_λ` is the holonomy of the rescaled chart.
    pub holonomy_residual: f64,
    /// Worst `‖D(τ,r,λ(θ̃+2π)) − γ_λ D(τ,r,λθ̃)‖` over the samples.
    pub equivariance_residual: f64,
}

/// BTZ metric with angular coefficient `λ² r²`.
pub fn btz_lambda_metric(lambda: f64, r: f64) -> Matrix3<f64> {
    let mut g = metric_coefficients(ConeAngle::BTZ, r);
    g[(2, 2)] = lambda * lambda * r * r;
    g
}

/// Verify the λ-rescaling of the BTZ model space at the given sample points.
pub fn rescale_btz(lambda: f64, samples: &[CoverPoint]) -> Result<RescaleReport> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::OutOfRange(format!("λ must be > 0, got {lambda}")));
    }
    let jac = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, lambda));
    let g_lambda = |r: f64| jac.transpose() * metric_coefficients(ConeAngle::BTZ, r) * jac;
    let pullback_residual = samples
        .iter()
        .map(|p| (g_lambda(p.r) - btz_lambda_metric(lambda, p.r)).amax())
        .fold(0.0, f64::max);

    let rapidity = lambda.ln();
    let h = LorentzIsometry::boost_x(rapidity);
    let gamma_lambda = btz_parabolic(TAU * lambda);
    let holonomy_residual = btz_holonomy_generator().conjugate_by(&h).distance(&gamma_lambda);

    let scaled = |p: &CoverPoint| CoverPoint {
        theta: lambda * p.theta,
        ..*p
    };
    let equivariance_residual = samples
        .iter()
        .map(|p| {
            let lhs = develop_btz(&scaled(&p.deck(1)));
            let rhs = gamma_lambda.apply(&develop_btz(&scaled(p)));
            (lhs - rhs).euclidean_norm()
        })
        .fold(0.0, f64::max);

    Ok(RescaleReport {
        lambda,
        angular_coefficient_at_unit_radius: g_lambda(1.0)[(2, 2)],
        pullback_residual,
        boost_rapidity: rapidity,
        holonomy_residual,
        equivariance_residual,
    })
}

/// Future-pointing null direction fixed by a parabolic linear isometry,
/// normalised to `t = 1`.
pub fn fixed_null_direction(g: &LorentzIsometry) -> Result<LorentzVector> {
    if classify_isometry(g)? != IsometryClass::Parabolic {
        return Err(Error::Precondition("isometry is not parabolic".into()));
    }
    let d = g.linear() - Matrix3::identity();
    let rows = [d.row(0).transpose(), d.row(1).transpose(), d.row(2).transpose()];
    // (g − I) has rank 2; its kernel is the cross product of independent rows
    let v = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| rows[i].cross(&rows[j]))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("three candidates");
    let v = LorentzVector::from_vector3(&v);
    if v.t == 0.0 {
        return Err(Error::Precondition("fixed direction is not null future".into()));
    }
    Ok((1.0 / v.t) * v)
}

/// Conjugate a parabolic `γ` by the boost with eigenvalue `e^μ` on its fixed
/// null line.
pub fn boost_conjugate(gamma: &LorentzIsometry, rapidity: f64) -> Result<LorentzIsometry> {
    let n = fixed_null_direction(gamma)?;
    let phi = n.y.atan2(n.x);
    let h = LorentzIsometry::boost_towards(phi, rapidity);
    Ok(gamma.conjugate_by(&h))
}

/// Whether a punctured neighbourhood of a singular point of angle `alpha`
/// can be isometrically matched with one of angle `beta`: only when the
/// angles agree.
pub fn match_cone_charts(alpha: ConeAngle, beta: ConeAngle) -> Result<bool> {
    if !alpha.is_singular() {
        return Err(Error::Precondition("the first chart must be singular (α ≠ 2π)".into()));
    }
    // BTZ and massive holonomies are never conjugate
    if alpha.is_btz() != beta.is_btz() {
        return Ok(false);
    }
    let scale = alpha.value().max(beta.value()).max(1.0);
    Ok((alpha.value() - beta.value()).abs() <= 1e-12 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cp(t: f64, r: f64, th: f64) -> CoverPoint {
        CoverPoint::new(t, r, th).unwrap()
    }

    #[test]
    fn btz_development_examples() {
        assert_eq!(develop_btz(&cp(1.0, 1.0, 0.0)), LorentzVector::new(1.0, 0.0, 0.0));
        let v = develop_btz(&cp(0.0, 1.0, TAU));
        let two_pi_sq = 2.0 * PI * PI;
        assert_abs_diff_eq!(v.t, two_pi_sq, epsilon = 1e-12);
        assert_abs_diff_eq!(v.x, two_pi_sq - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.y, -TAU, epsilon = 1e-12);
        assert!(CoverPoint::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn btz_holonomy_properties() {
        let g = btz_holonomy_generator();
        assert_eq!(g.apply(&BTZ_NULL_LINE), BTZ_NULL_LINE);
        assert_abs_diff_eq!(g.trace(), 3.0, epsilon = 1e-12);
        assert_eq!(classify_isometry(&g).unwrap(), IsometryClass::Parabolic);
        assert!(equivariance_residual(ConeAngle::BTZ, &cp(0.3, 0.7, 1.1)) < 1e-9);
        // the normalisation that sends (0,0,1) to (1,1,1) is the period −1 element
        let unit = btz_parabolic(-1.0);
        let img = unit.apply(&LorentzVector::new(0.0, 0.0, 1.0));
        assert!((img - LorentzVector::new(1.0, 1.0, 1.0)).euclidean_norm() < 1e-15);
    }

    #[test]
    fn holonomy_matrix_by_solving_from_developed_frames() {
        // oracle: γ = [D(θ̃+2π) frame][D(θ̃) frame]⁻¹ from three developed points
        let pts = [cp(0.2, 0.5, 0.3), cp(-0.4, 1.7, -0.8), cp(1.1, 0.9, 2.0)];
        let before = Matrix3::from_columns(&pts.map(|p| develop_btz(&p).to_vector3()));
        let after = Matrix3::from_columns(&pts.map(|p| develop_btz(&p.deck(1)).to_vector3()));
        let solved = after * before.try_inverse().unwrap();
        assert!((solved - btz_holonomy_generator().linear()).amax() < 1e-9);
    }

    #[test]
    fn massive_development_examples() {
        let v = develop_massive(ConeAngle::REGULAR, &cp(0.0, 1.0, PI / 2.0)).unwrap();
        assert!((v - LorentzVector::new(0.0, 0.0, 1.0)).euclidean_norm() < 1e-15);
        let half = ConeAngle::new(PI).unwrap();
        let p = cp(0.5, 2.0, 0.4);
        let rotated = LorentzIsometry::rotation(PI).apply(&develop_massive(half, &p).unwrap());
        assert!((develop_massive(half, &p.deck(1)).unwrap() - rotated).euclidean_norm() < 1e-9);
        assert!(develop_massive(ConeAngle::BTZ, &p).is_err());
    }

    #[test]
    fn rescale_examples() {
        let samples = [cp(0.1, 1.0, 0.5), cp(-2.0, 3.0, 4.0)];
        let id = rescale_btz(1.0, &samples).unwrap();
        assert_eq!(id.pullback_residual, 0.0);
        assert_eq!(id.boost_rapidity, 0.0);
        let two = rescale_btz(2.0, &samples).unwrap();
        assert_abs_diff_eq!(two.angular_coefficient_at_unit_radius, 4.0, epsilon = 1e-15);
        assert!(two.holonomy_residual < 1e-9 && two.equivariance_residual < 1e-9);
        let third = rescale_btz(1.0 / 3.0, &samples).unwrap();
        assert_abs_diff_eq!(btz_lambda_metric(1.0 / 3.0, 3.0)[(2, 2)], 1.0, epsilon = 1e-15);
        assert!(third.pullback_residual < 1e-15 && third.holonomy_residual < 1e-9);
        assert!(rescale_btz(0.0, &samples).is_err());
    }

    #[test]
    fn boost_conjugation() {
        let g = btz_holonomy_generator();
        assert!(boost_conjugate(&g, 0.0).unwrap().distance(&g) < 1e-12);
        for mu in [-1.5, 0.3, 2.0] {
            let c = boost_conjugate(&g, mu).unwrap();
            assert_abs_diff_eq!(c.trace(), 3.0, epsilon = 1e-9);
            let img = c.apply(&BTZ_NULL_LINE);
            assert!((img - BTZ_NULL_LINE).euclidean_norm() < 1e-9);
            assert_eq!(classify_isometry(&c).unwrap(), IsometryClass::Parabolic);
        }
        // a parabolic element fixing a different null line
        let rot = LorentzIsometry::rotation(1.2);
        let other = g.conjugate_by(&rot);
        let n = fixed_null_direction(&other).unwrap();
        let expected = LorentzVector::new(1.0, 1.2f64.cos(), 1.2f64.sin());
        assert!((n - expected).euclidean_norm() < 1e-9);
        let c = boost_conjugate(&other, 0.8).unwrap();
        assert!((c.apply(&n) - n).euclidean_norm() < 1e-9);
        assert!(boost_conjugate(&LorentzIsometry::rotation(1.0), 0.5).is_err());
    }

    #[test]
    fn chart_matching() {
        let a = |v: f64| ConeAngle::new(v).unwrap();
        assert!(match_cone_charts(a(PI), a(PI)).unwrap());
        assert!(!match_cone_charts(a(PI), a(2.0 * PI / 3.0)).unwrap());
        assert!(!match_cone_charts(ConeAngle::BTZ, a(PI)).unwrap());
        assert!(match_cone_charts(ConeAngle::BTZ, ConeAngle::BTZ).unwrap());
        assert!(match_cone_charts(ConeAngle::REGULAR, a(PI)).is_err());
    }

    #[test]
    fn holonomy_classes_match_angles() {
        for v in [0.0, 0.5, PI, 4.0, 9.0, 2.0 * TAU] {
            let alpha = ConeAngle::new(v).unwrap();
            assert!(Holonomy::for_angle(alpha).matches_angle(alpha).unwrap(), "α = {v}");
        }
        let btz = Holonomy::for_angle(ConeAngle::BTZ);
        assert!(!btz.matches_angle(ConeAngle::new(PI).unwrap()).unwrap());
    }

    fn arb_cover() -> impl Strategy<Value = CoverPoint> {
        (-5.0..5.0f64, 1e-2..5.0f64, -10.0..10.0f64).prop_map(|(t, r, th)| cp(t, r, th))
    }

    proptest! {
        #[test]
        fn developments_are_local_isometries(p in arb_cover(), alpha in 1e-2..15.0f64) {
            let a = ConeAngle::new(alpha).unwrap();
            let jb = develop_btz_jacobian(&p);
            prop_assert!(pullback_residual(ConeAngle::BTZ, &p, &jb) < 1e-9);
            prop_assert!(pullback_residual(a, &p, &develop_massive_jacobian(a, &p)) < 1e-9);
            let fd = develop_jacobian_fd(ConeAngle::BTZ, &p, 1e-4);
            prop_assert!(pullback_residual(ConeAngle::BTZ, &p, &fd) < 1e-5);
        }

        #[test]
        fn btz_image_is_chronological_future_of_line(p in arb_cover()) {
            let v = develop_btz(&p);
            prop_assert!((v.t - v.x - p.r).abs() <= 1e-12 * (1.0 + v.t.abs()));
            prop_assert!(v.t - v.x > 0.0);
        }

        #[test]
        fn equivariance(p in arb_cover(), alpha in 1e-2..15.0f64) {
            prop_assert!(equivariance_residual(ConeAngle::BTZ, &p) < 1e-9);
            prop_assert!(equivariance_residual(ConeAngle::new(alpha).unwrap(), &p) < 1e-9);
        }
    }
}
