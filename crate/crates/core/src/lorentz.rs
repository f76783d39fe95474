//! Minkowski space `E^{1,2}` with the quadratic form `−t² + x² + y²`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Lᵀ η L = η`, relative to the squared size of `L`.
pub const ISOMETRY_TOL: f64 = 1e-12;
/// Width of the trace window around 3 separating parabolic elements from
/// the identity and from hyperbolic elements.
pub const TRACE_TOL: f64 = 1e-9;

/// The Gram matrix `diag(−1, 1, 1)`.
pub fn eta() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0))
}

/// A vector (or point) of `E^{1,2}` in coordinates `(t, x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct LorentzVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 3]> for LorentzVector {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<LorentzVector> for [f64; 3] {
    fn from(v: LorentzVector) -> Self {
        [v.t, v.x, v.y]
    }
}

impl LorentzVector {
    pub const fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }

    pub fn to_vector3(self) -> Vector3<f64> {
        Vector3::new(self.t, self.x, self.y)
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite()
    }

    /// Minkowski bilinear form `−t t' + x x' + y y'`.
    pub fn dot(&self, other: &Self) -> f64 {
        -self.t * other.t + self.x * other.x + self.y * other.y
    }

    /// Euclidean norm of the coordinate triple.
    pub fn euclidean_norm(&self) -> f64 {
        (self.t * self.t + self.x * self.x + self.y * self.y).sqrt()
    }
}

impl Add for LorentzVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.t + o.t, self.x + o.x, self.y + o.y)
    }
}

impl Sub for LorentzVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.t - o.t, self.x - o.x, self.y - o.y)
    }
}

impl Neg for LorentzVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.t, -self.x, -self.y)
    }
}

impl Mul<f64> for LorentzVector {
    type Output = LorentzVector;
    fn mul(self, s: f64) -> LorentzVector {
        s * self
    }
}

impl Mul<LorentzVector> for f64 {
    type Output = LorentzVector;
    fn mul(self, v: LorentzVector) -> LorentzVector {
        LorentzVector::new(self * v.t, self * v.x, self * v.y)
    }
}

/// `q(u) = −t² + x² + y²`.
pub fn q_form(u: &LorentzVector) -> f64 {
    u.dot(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorClass {
    Zero,
    Spacelike,
    LightlikeFuture,
    LightlikePast,
    TimelikeFuture,
    TimelikePast,
}

impl VectorClass {
    pub fn is_causal_future(self) -> bool {
        matches!(self, VectorClass::LightlikeFuture | VectorClass::TimelikeFuture)
    }

    pub fn is_timelike_future(self) -> bool {
        self == VectorClass::TimelikeFuture
    }

    /// Swap future and past; fixes zero and spacelike.
    pub fn time_reversed(self) -> Self {
        use VectorClass::*;
        match self {
            LightlikeFuture => LightlikePast,
            LightlikePast => LightlikeFuture,
            TimelikeFuture => TimelikePast,
            TimelikePast => TimelikeFuture,
            other => other,
        }
    }
}

/// Classify by the sign of `q` and of the time component.
///
/// Classification is exact in floating point: a vector is lightlike only when
/// `q` evaluates to exactly zero.
pub fn classify_vector(u: &LorentzVector) -> VectorClass {
    classify_by_sign(q_form(u), u.t, u.t == 0.0 && u.x == 0.0 && u.y == 0.0)
}

/// Shared decision table for vector classification given `q`, the time
/// component and whether the vector vanishes.
pub(crate) fn classify_by_sign(q: f64, time: f64, zero: bool) -> VectorClass {
    if zero {
        VectorClass::Zero
    } else if q > 0.0 {
        VectorClass::Spacelike
    } else if q == 0.0 {
        if time > 0.0 {
            VectorClass::LightlikeFuture
        } else {
            VectorClass::LightlikePast
        }
    } else if time > 0.0 {
        VectorClass::TimelikeFuture
    } else {
        VectorClass::TimelikePast
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalRelation {
    Chronological,
    Causal,
    None,
}

/// Relation of `q` to `p`: chronological iff `q − p` is timelike future,
/// causal iff `q − p` is causal future or zero.
pub fn minkowski_causal(p: &LorentzVector, q: &LorentzVector) -> CausalRelation {
    match classify_vector(&(*q - *p)) {
        VectorClass::TimelikeFuture => CausalRelation::Chronological,
        VectorClass::LightlikeFuture | VectorClass::Zero => CausalRelation::Causal,
        _ => CausalRelation::None,
    }
}

/// Point of the upper hyperboloid sheet `{q = −1, t > 0}` on the ray through
/// `(1, x, y)`, where `(x, y)` are Klein coordinates in the open unit disc.
pub fn hyperboloid_embed(x: f64, y: f64) -> Result<LorentzVector> {
    let rho2 = x * x + y * y;
    if !(rho2 < 1.0) {
        return Err(Error::OutOfRange(format!(
            "Klein point ({x}, {y}) is not in the open unit disc"
        )));
    }
    let s = 1.0 / (1.0 - rho2).sqrt();
    Ok(LorentzVector::new(s, s * x, s * y))
}

/// Element of `Isom(E^{1,2})` whose linear part lies in `SO₀(1,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsometryRepr", into = "IsometryRepr")]
pub struct LorentzIsometry {
    linear: Matrix3<f64>,
    translation: LorentzVector,
}

#[derive(Serialize, Deserialize)]
struct IsometryRepr {
    linear: [[f64; 3]; 3],
    translation: LorentzVector,
}

impl TryFrom<IsometryRepr> for LorentzIsometry {
    type Error = Error;
    fn try_from(r: IsometryRepr) -> Result<Self> {
        let m = Matrix3::from_fn(|i, j| r.linear[i][j]);
        LorentzIsometry::new(m, r.translation)
    }
}

impl From<LorentzIsometry> for IsometryRepr {
    fn from(g: LorentzIsometry) -> Self {
        let mut linear = [[0.0; 3]; 3];
        for (i, row) in linear.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = g.linear[(i, j)];
            }
        }
        IsometryRepr {
            linear,
            translation: g.translation,
        }
    }
}

impl LorentzIsometry {
    /// Validating constructor: `Lᵀ η L = η`, `det L = 1` and `L₀₀ ≥ 1`.
    pub fn new(linear: Matrix3<f64>, translation: LorentzVector) -> Result<Self> {
        if !translation.is_finite() || linear.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidIsometry("non-finite entries".into()));
        }
        let scale = 1.0 + linear.amax().powi(2);
        let residual = (linear.transpose() * eta() * linear - eta()).amax();
        if residual > ISOMETRY_TOL * scale {
            return Err(Error::InvalidIsometry(format!(
                "form not preserved, residual {residual:e}"
            )));
        }
        let det = linear.determinant();
        if (det - 1.0).abs() > ISOMETRY_TOL * scale * linear.amax() {
            return Err(Error::InvalidIsometry(format!("determinant {det}")));
        }
        if linear[(0, 0)] < 1.0 - ISOMETRY_TOL {
            return Err(Error::InvalidIsometry(format!(
                "reverses time orientation, L00 = {}",
                linear[(0, 0)]
            )));
        }
        Ok(Self { linear, translation })
    }

    pub fn linear_only(linear: Matrix3<f64>) -> Result<Self> {
        Self::new(linear, LorentzVector::default())
    }

    pub fn identity() -> Self {
        Self {
            linear: Matrix3::identity(),
            translation: LorentzVector::default(),
        }
    }

    /// Rotation by `angle` about the `t`-axis.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            linear: Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
            translation: LorentzVector::default(),
        }
    }

    /// Boost of the given rapidity in the `x` direction. Fixes the spacelike
    /// line `ℝ·(0,0,1)` and scales `(1,1,0)` by `e^rapidity`.
    pub fn boost_x(rapidity: f64) -> Self {
        let (c, s) = (rapidity.cosh(), rapidity.sinh());
        Self {
            linear: Matrix3::new(c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            translation: LorentzVector::default(),
        }
    }

    /// Boost with eigenvalue `e^rapidity` on the future null direction
    /// `(1, cos φ, sin φ)`.
    pub fn boost_towards(phi: f64, rapidity: f64) -> Self {
        let r = Self::rotation(phi);
        r.compose(&Self::boost_x(rapidity)).compose(&r.inverse())
    }

    pub fn linear(&self) -> &Matrix3<f64> {
        &self.linear
    }

    pub fn translation(&self) -> LorentzVector {
        self.translation
    }

    pub fn trace(&self) -> f64 {
        self.linear.trace()
    }

    pub fn apply(&self, u: &LorentzVector) -> LorentzVector {
        LorentzVector::from_vector3(&(self.linear * u.to_vector3())) + self.translation
    }

    /// Linear part applied to a vector (translations ignored).
    pub fn apply_linear(&self, u: &LorentzVector) -> LorentzVector {
        LorentzVector::from_vector3(&(self.linear * u.to_vector3()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: self.linear * other.linear,
            translation: self.apply(&other.translation),
        }
    }

    /// Inverse computed as `η Lᵀ η`, exact for elements of `O(1,2)`.
    pub fn inverse(&self) -> Self {
        let inv = eta() * self.linear.transpose() * eta();
        let t = -LorentzVector::from_vector3(&(inv * self.translation.to_vector3()));
        Self {
            linear: inv,
            translation: t,
        }
    }

    /// `h self h⁻¹`.
    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.compose(self).compose(&h.inverse())
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Max-abs distance between linear parts and translations.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.linear - other.linear)
            .amax()
            .max((self.translation - other.translation).euclidean_norm())
    }
}

impl fmt::Display for LorentzIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.linear)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum IsometryClass {
    Identity,
    /// Rotation angle in `[0, π]`.
    Elliptic {
        angle: f64,
    },
    Parabolic,
    /// Eigenvalue `λ > 1`.
    Hyperbolic {
        eigenvalue: f64,
    },
}

impl IsometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic { .. } => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

/// Trace classification of the linear part of `g`. The translation must vanish.
pub fn classify_isometry(g: &LorentzIsometry) -> Result<IsometryClass> {
    if g.translation.euclidean_norm() != 0.0 {
        return Err(Error::InvalidIsometry(
            "classification needs a linear isometry (zero translation)".into(),
        ));
    }
    let tr = g.trace();
    if (tr - 3.0).abs() <= TRACE_TOL {
        let off = (g.linear - Matrix3::identity()).amax();
        return Ok(if off <= TRACE_TOL {
            IsometryClass::Identity
        } else {
            IsometryClass::Parabolic
        });
    }
    if tr < 3.0 {
        // tr ≥ −1 on SO₀(1,2); clamp rounding below it.
        let c = ((tr - 1.0) / 2.0).clamp(-1.0, 1.0);
        Ok(IsometryClass::Elliptic { angle: c.acos() })
    } else {
        let s = tr - 1.0;
        Ok(IsometryClass::Hyperbolic {
            eigenvalue: (s + (s * s - 4.0).sqrt()) / 2.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn q_form_examples() {
        assert_eq!(q_form(&LorentzVector::new(1.0, 0.0, 0.0)), -1.0);
        assert_eq!(q_form(&LorentzVector::new(1.0, 1.0, 0.0)), 0.0);
        assert_eq!(q_form(&LorentzVector::new(3.0, 4.0, 0.0)), 7.0);
    }

    #[test]
    fn vector_classes() {
        use VectorClass::*;
        assert_eq!(classify_vector(&LorentzVector::new(2.0, 1.0, 0.0)), TimelikeFuture);
        assert_eq!(classify_vector(&LorentzVector::new(0.0, 1.0, 1.0)), Spacelike);
        assert_eq!(classify_vector(&LorentzVector::new(-1.0, 1.0, 0.0)), LightlikePast);
        assert_eq!(classify_vector(&LorentzVector::default()), Zero);
    }

    #[test]
    fn minkowski_relations() {
        let o = LorentzVector::default();
        assert_eq!(
            minkowski_causal(&o, &LorentzVector::new(1.0, 0.0, 0.0)),
            CausalRelation::Chronological
        );
        assert_eq!(
            minkowski_causal(&o, &LorentzVector::new(1.0, 1.0, 0.0)),
            CausalRelation::Causal
        );
        assert_eq!(
            minkowski_causal(&o, &LorentzVector::new(0.0, 1.0, 0.0)),
            CausalRelation::None
        );
        assert_eq!(minkowski_causal(&o, &o), CausalRelation::Causal);
    }

    #[test]
    fn hyperboloid_points() {
        assert_eq!(hyperboloid_embed(0.0, 0.0).unwrap(), LorentzVector::new(1.0, 0.0, 0.0));
        let p = hyperboloid_embed(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(p.t, 2.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.x, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(p.y, 0.0);
        assert!(hyperboloid_embed(0.8, 0.6).is_err());
    }

    #[test]
    fn classification_examples() {
        let rot = LorentzIsometry::rotation(PI);
        assert_abs_diff_eq!(rot.trace(), -1.0, epsilon = 1e-15);
        match classify_isometry(&rot).unwrap() {
            IsometryClass::Elliptic { angle } => assert_abs_diff_eq!(angle, PI, epsilon = 1e-7),
            c => panic!("{c:?}"),
        }
        let b = LorentzIsometry::boost_x(1.0);
        assert_abs_diff_eq!(b.trace(), 1.0 + 2.0 * 1f64.cosh(), epsilon = 1e-14);
        match classify_isometry(&b).unwrap() {
            IsometryClass::Hyperbolic { eigenvalue } => {
                assert_abs_diff_eq!(eigenvalue, 1f64.exp(), epsilon = 1e-12)
            }
            c => panic!("{c:?}"),
        }
        assert_eq!(
            classify_isometry(&LorentzIsometry::identity()).unwrap(),
            IsometryClass::Identity
        );
        let translated = LorentzIsometry::new(Matrix3::identity(), LorentzVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!(classify_isometry(&translated).is_err());
    }

    #[test]
    fn constructor_rejects_non_isometries() {
        let scale = Matrix3::identity() * 2.0;
        assert!(LorentzIsometry::linear_only(scale).is_err());
        // time reversal composed with a reflection has det +1 but flips the cone
        let flip = Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0));
        assert!(LorentzIsometry::linear_only(flip).is_err());
        // reflection: det −1
        let refl = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0));
        assert!(LorentzIsometry::linear_only(refl).is_err());
    }

    #[test]
    fn repr_conversion_validates() {
        let g = LorentzIsometry::boost_towards(0.3, 0.7);
        let back = LorentzIsometry::try_from(IsometryRepr::from(g)).unwrap();
        assert_eq!(back, g);
        let bad = IsometryRepr {
            linear: [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: LorentzVector::default(),
        };
        assert!(LorentzIsometry::try_from(bad).is_err());
    }

    fn arb_isometry() -> impl Strategy<Value = LorentzIsometry> {
        (-PI..PI, -2.0..2.0f64, -PI..PI, -PI..PI).prop_map(|(a, r, phi, b)| {
            LorentzIsometry::rotation(a)
                .compose(&LorentzIsometry::boost_towards(phi, r))
                .compose(&LorentzIsometry::rotation(b))
        })
    }

    proptest! {
        #[test]
        fn isometries_preserve_q(g in arb_isometry(), t in -5.0..5.0f64, x in -5.0..5.0f64, y in -5.0..5.0f64) {
            let u = LorentzVector::new(t, x, y);
            let gu = g.apply_linear(&u);
            prop_assert!((q_form(&gu) - q_form(&u)).abs() < 1e-9 * (1.0 + u.euclidean_norm().powi(2)));
            prop_assert!(LorentzIsometry::linear_only(*g.linear()).is_ok());
        }

        #[test]
        fn classification_is_conjugation_invariant(h in arb_isometry(), angle in 0.1..3.0f64, rap in 0.1..2.0f64) {
            for g in [LorentzIsometry::rotation(angle), LorentzIsometry::boost_x(rap)] {
                let a = classify_isometry(&g).unwrap();
                let b = classify_isometry(&g.conjugate_by(&h)).unwrap();
                match (a, b) {
                    (IsometryClass::Elliptic { angle: x }, IsometryClass::Elliptic { angle: y }) => prop_assert!((x - y).abs() < 1e-9),
                    (IsometryClass::Hyperbolic { eigenvalue: x }, IsometryClass::Hyperbolic { eigenvalue: y }) => prop_assert!((x - y).abs() < 1e-9),
                    _ => prop_assert!(false, "{:?} vs {:?}", a, b),
                }
            }
        }

        #[test]
        fn time_reversal_swaps_classes(t in -3.0..3.0f64, x in -3.0..3.0f64, y in -3.0..3.0f64) {
            let u = LorentzVector::new(t, x, y);
            prop_assert_eq!(classify_vector(&(-u)), classify_vector(&u).time_reversed());
        }
    }
}
