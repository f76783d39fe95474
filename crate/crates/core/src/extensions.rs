//! Tube charts, adjoining and removing BTZ lines, and the mixed-extension
//! example chain.

use serde::{Deserialize, Serialize};

use crate::causality::{btz_causal_future, FutureMembership};
use crate::developing::{boost_conjugate, Holonomy};
use crate::error::{Error, Result};
use crate::lorentz::IsometryClass;
use crate::model::{in_region, ConeAngle, ModelPoint, TubeRegion};
use crate::surfaces::{extend_boundary_complete, BoundaryCurve, GraphSurface};

/// A tube neighbourhood of a (possibly removed) singular line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeChart {
    pub angle: ConeAngle,
    pub radius: f64,
    pub start: Option<f64>,
    pub end: Option<f64>,
    pub has_singular_line: bool,
    pub holonomy: Holonomy,
}

impl TubeChart {
    pub fn new(
        angle: ConeAngle,
        radius: f64,
        start: Option<f64>,
        end: Option<f64>,
        has_singular_line: bool,
        holonomy: Holonomy,
    ) -> Result<Self> {
        let c = Self {
            angle,
            radius,
            start,
            end,
            has_singular_line,
            holonomy,
        };
        c.validate()?;
        Ok(c)
    }

    /// Chart with the model holonomy of its angle.
    pub fn model(
        angle: ConeAngle,
        radius: f64,
        start: Option<f64>,
        end: Option<f64>,
        has_singular_line: bool,
    ) -> Result<Self> {
        Self::new(angle, radius, start, end, has_singular_line, Holonomy::for_angle(angle))
    }

    pub fn validate(&self) -> Result<()> {
        self.region()?;
        if self.has_singular_line && !self.angle.is_singular() {
            return Err(Error::InvalidChart("a regular angle (2π) has no singular line".into()));
        }
        if self.angle.is_singular() && !self.holonomy.matches_angle(self.angle)? {
            return Err(Error::InvalidChart(format!(
                "holonomy of class {} does not match cone angle {}",
                self.holonomy.class()?.name(),
                self.angle.value()
            )));
        }
        Ok(())
    }

    pub fn region(&self) -> Result<TubeRegion> {
        Ok(TubeRegion::new(self.angle, self.radius, self.start, self.end)?.with_flags(false, false))
    }

    /// Whether `p` lies in the chart's image: the open tube, minus the
    /// line when the chart is regular.
    pub fn contains(&self, p: &ModelPoint) -> Result<bool> {
        let inside = in_region(&self.region()?, p)?;
        Ok(inside && (self.has_singular_line || !p.is_on_line()))
    }

    /// The same chart with holonomy conjugated by a boost of the given
    /// rapidity along its fixed null direction.
    pub fn boost_conjugated(&self, rapidity: f64) -> Result<Self> {
        let generator = boost_conjugate(&self.holonomy.generator, rapidity)?;
        Self::new(
            self.angle,
            self.radius,
            self.start,
            self.end,
            self.has_singular_line,
            Holonomy { generator },
        )
    }
}

/// Adjoin the BTZ line `{r = 0}` to a regular BTZ tube. Idempotent.
pub fn adjoin_btz(chart: &TubeChart) -> Result<TubeChart> {
    chart.validate()?;
    let class = chart.holonomy.class()?;
    if class != IsometryClass::Parabolic {
        return Err(Error::NotBtzExtendable(format!(
            "holonomy is {}, a BTZ line needs parabolic holonomy",
            class.name()
        )));
    }
    if !chart.angle.is_btz() {
        return Err(Error::NotBtzExtendable(format!(
            "cone angle {} is not 0",
            chart.angle.value()
        )));
    }
    Ok(TubeChart {
        has_singular_line: true,
        ..*chart
    })
}

/// Remove the BTZ line and return the regular chart with a complete
/// spacelike surface replacing the part of a Cauchy surface inside the tube.
pub fn remove_btz(chart: &TubeChart, boundary: &BoundaryCurve) -> Result<(TubeChart, GraphSurface)> {
    chart.validate()?;
    if !chart.has_singular_line || !chart.angle.is_btz() {
        return Err(Error::Precondition("chart has no BTZ line to remove".into()));
    }
    let regular = TubeChart {
        has_singular_line: false,
        ..*chart
    };
    Ok((regular, extend_boundary_complete(boundary, chart.radius)?))
}

/// The regions `M₀ ⊂ M₁ ⊂ M₂ ⊂ M₃` of `E^{1,2}_0`, built around the line
/// point `p = (τ = 0, r = 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChainRegion {
    /// `{τ < 0, r > 0}`.
    M0,
    /// `{r > 0} ∖ J⁺(p)`.
    M1,
    /// `E^{1,2}_0 ∖ J⁺(p)`.
    M2,
    /// `E^{1,2}_0`.
    M3,
}

impl ChainRegion {
    pub const ALL: [ChainRegion; 4] = [ChainRegion::M0, ChainRegion::M1, ChainRegion::M2, ChainRegion::M3];

    pub fn name(self) -> &'static str {
        match self {
            ChainRegion::M0 => "M0",
            ChainRegion::M1 => "M1",
            ChainRegion::M2 => "M2",
            ChainRegion::M3 => "M3",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ChainRegion::M0 => "past half tube {tau < 0, r > 0}",
            ChainRegion::M1 => "regular part minus J+(p)",
            ChainRegion::M2 => "E_0 minus J+(p)",
            ChainRegion::M3 => "E_0",
        }
    }
}

/// A named region of `E^{1,2}_0` with a membership predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpacetime {
    pub region: ChainRegion,
    pub base_point: ModelPoint,
}

impl RegionSpacetime {
    pub fn name(&self) -> &'static str {
        self.region.name()
    }

    pub fn contains(&self, q: &ModelPoint) -> Result<bool> {
        if !q.alpha.is_btz() {
            return Err(Error::InvalidRegion("chain regions live in E_0".into()));
        }
        let in_future = || -> Result<bool> { Ok(btz_causal_future(&self.base_point, q)? != FutureMembership::Outside) };
        Ok(match self.region {
            ChainRegion::M0 => q.time < self.base_point.time && !q.is_on_line(),
            ChainRegion::M1 => !q.is_on_line() && !in_future()?,
            ChainRegion::M2 => !in_future()?,
            ChainRegion::M3 => true,
        })
    }
}

pub fn mixed_extension_chain() -> [RegionSpacetime; 4] {
    let base_point = ModelPoint::btz(0.0, 0.0, 0.0).expect("origin is a valid point");
    ChainRegion::ALL.map(|region| RegionSpacetime { region, base_point })
}

/// Membership of `q` in each region of the chain, in order.
pub fn chain_membership(q: &ModelPoint) -> Result<[bool; 4]> {
    let chain = mixed_extension_chain();
    Ok([
        chain[0].contains(q)?,
        chain[1].contains(q)?,
        chain[2].contains(q)?,
        chain[3].contains(q)?,
    ])
}

/// Monotone along the chain: once a point is in `Mᵢ` it is in every later
/// region.
pub fn is_monotone(m: &[bool; 4]) -> bool {
    m.windows(2).all(|w| !w[0] || w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::LorentzIsometry;
    use crate::surfaces::{SamplingGrid, CERTIFICATE_MIN_RATIO};
    use crate::Exec;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn regular_btz() -> TubeChart {
        TubeChart::model(ConeAngle::BTZ, 1.0, Some(-1.0), Some(1.0), false).unwrap()
    }

    #[test]
    fn adjoin_examples() {
        let c = regular_btz();
        let once = adjoin_btz(&c).unwrap();
        assert!(once.has_singular_line);
        assert_eq!(adjoin_btz(&once).unwrap(), once);
        let massive = TubeChart::model(ConeAngle::new(PI).unwrap(), 1.0, None, None, false).unwrap();
        assert!(matches!(adjoin_btz(&massive), Err(Error::NotBtzExtendable(_))));
    }

    #[test]
    fn chart_validation() {
        assert!(TubeChart::model(ConeAngle::REGULAR, 1.0, None, None, true).is_err());
        let wrong = Holonomy {
            generator: LorentzIsometry::rotation(1.0),
        };
        assert!(TubeChart::new(ConeAngle::BTZ, 1.0, None, None, false, wrong).is_err());
        assert!(TubeChart::model(ConeAngle::BTZ, -1.0, None, None, false).is_err());
    }

    #[test]
    fn complement_of_image_is_the_line() {
        let c = regular_btz();
        let e = adjoin_btz(&c).unwrap();
        for (tau, r) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.3), (-0.9, 0.99)] {
            let p = ModelPoint::btz(tau, r, 1.0).unwrap();
            let added = e.contains(&p).unwrap() && !c.contains(&p).unwrap();
            assert_eq!(added, r == 0.0);
        }
        let outside = ModelPoint::btz(0.0, 2.0, 0.0).unwrap();
        assert!(!e.contains(&outside).unwrap());
    }

    #[test]
    fn remove_examples() {
        let e = adjoin_btz(&regular_btz()).unwrap();
        let (reg, surf) = remove_btz(&e, &BoundaryCurve::constant(1.0)).unwrap();
        assert_eq!(reg, regular_btz());
        for r in [0.1, 0.5, 1.0] {
            assert!((surf.height(r, 0.3).unwrap() - (1.0 + 1.0 / r - 1.0)).abs() < 1e-12);
        }
        assert_eq!(adjoin_btz(&reg).unwrap(), e);
        assert!(matches!(
            remove_btz(&reg, &BoundaryCurve::constant(1.0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chain_examples() {
        let m = |tau, r| chain_membership(&ModelPoint::btz(tau, r, 0.0).unwrap()).unwrap();
        assert_eq!(m(-1.0, 0.0), [false, false, true, true]);
        assert_eq!(m(-1.0, 1.0), [true, true, true, true]);
        assert_eq!(m(1.0, 1.0), [false, false, false, true]);
    }

    proptest! {
        #[test]
        fn chain_is_monotone(tau in -3.0f64..3.0, r in 0.0f64..3.0, on_line in any::<bool>(), th in 0.0f64..std::f64::consts::TAU) {
            let r = if on_line { 0.0 } else { r };
            let q = ModelPoint::btz(tau, r, th).unwrap();
            prop_assert!(is_monotone(&chain_membership(&q).unwrap()));
        }

        #[test]
        fn adjoin_commutes_with_boost_conjugation(mu in -3.0f64..3.0) {
            let c = regular_btz();
            let a = adjoin_btz(&c.boost_conjugated(mu).unwrap()).unwrap();
            let b = adjoin_btz(&c).unwrap().boost_conjugated(mu).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn removal_surface_is_certified(coeffs in proptest::collection::vec(-1.0f64..1.0, 5)) {
            let e = adjoin_btz(&regular_btz()).unwrap();
            let b = BoundaryCurve::new(coeffs[0], coeffs[1..3].to_vec(), coeffs[3..].to_vec()).unwrap();
            let (_, s) = remove_btz(&e, &b).unwrap();
            let c = s
                .completeness_certificate(&SamplingGrid::geometric(48, 32, CERTIFICATE_MIN_RATIO), Exec::Sequential)
                .unwrap();
            prop_assert!(c.unwrap() >= 1.0);
        }
    }
}
