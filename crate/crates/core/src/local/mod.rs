//! Plane curve germs and map germs at the origin, resolved by iterated
//! blowups.
//!
//! Every resolution runs through one walker ([`walk`]) that owns the
//! exceptional-curve bookkeeping (which coordinate axes are exceptional, hence
//! which new points are satellites) and the dynamic-evaluation retries when an
//! optimistically adjoined direction turns out to be reducible.

mod intersect;
mod pullback;
mod resolvers;
mod through;
mod walk;

use serde::{Deserialize, Serialize};

pub use intersect::{intersection_multiplicity, resultant_y};
pub use pullback::{pullback_cluster, unit_excess_weights, PreparedCluster};
pub use resolvers::{base_points, blowup_trace, local_degree, mult_cluster, shared_cluster, BasePoints};
pub use through::{curves_through, CurvePair};
pub use walk::ChartDescriptor;

use crate::error::{Error, Result};
use crate::field::{BiPoly, Elem, Tower};

/// A plane curve germ at the origin given by a polynomial equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    eq: BiPoly,
    tower: Tower,
}

impl Germ {
    pub fn new(eq: BiPoly, tower: Tower) -> Result<Self> {
        if eq.is_zero() {
            return Err(Error::InvalidGerm("zero equation".into()));
        }
        if !tower.is_zero(&eq.at_origin())? {
            return Err(Error::InvalidGerm("equation does not vanish at the origin".into()));
        }
        Ok(Germ { eq, tower })
    }

    pub fn rational(eq: BiPoly) -> Result<Self> {
        Germ::new(eq, Tower::rational())
    }

    pub fn equation(&self) -> &BiPoly {
        &self.eq
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Multiplicity at the origin.
    pub fn mult(&self) -> Result<u32> {
        Ok(self.eq.order(&self.tower)?.expect("nonzero germ"))
    }
}

pub fn germ_mult(g: &Germ) -> Result<u32> {
    g.mult()
}

/// One of the two standard charts of the blowup at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `y = x·(y₁ + t)`: the direction of slope `t`.
    Slope(Elem),
    /// `x = x₁·y`: the direction `x = 0`.
    Vertical,
}

/// Strict transform in the given chart: substitute, then divide by the
/// exceptional factor to the power of the multiplicity. Coordinates of the
/// result are `(x, y₁)` for [`Chart::Slope`] and `(x₁, y)` for
/// [`Chart::Vertical`].
pub fn strict_transform(g: &Germ, chart: &Chart) -> Result<BiPoly> {
    let m = g.mult()?;
    let t = &g.tower;
    Ok(match chart {
        Chart::Slope(root) => g.eq.subst_chart_x(root, t).div_x_pow(m),
        Chart::Vertical => g.eq.subst_chart_y().div_y_pow(m),
    }
    .expect("multiplicity divides the total transform"))
}

/// A map germ `(f1, f2)` at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMap {
    f1: BiPoly,
    f2: BiPoly,
    tower: Tower,
}

impl LocalMap {
    /// Both components must vanish at the origin and the map must be dominant.
    pub fn new(f1: BiPoly, f2: BiPoly, tower: Tower) -> Result<Self> {
        for (name, f) in [("f1", &f1), ("f2", &f2)] {
            if f.is_zero() {
                return Err(Error::InvalidMap(format!("{name} is zero")));
            }
            if !tower.is_zero(&f.at_origin())? {
                return Err(Error::InvalidMap(format!("{name} does not vanish at the origin")));
            }
        }
        let m = LocalMap { f1, f2, tower };
        let (_, r1, r2) = m.split_fixed()?;
        if r1.is_constant() && r2.is_constant() {
            return Err(Error::InvalidMap("components are proportional".into()));
        }
        Ok(m)
    }

    pub fn rational(f1: BiPoly, f2: BiPoly) -> Result<Self> {
        LocalMap::new(f1, f2, Tower::rational())
    }

    /// The monomial map `(x^a, y^b)`.
    pub fn monomial(a: u32, b: u32) -> Self {
        let one = Elem::one();
        LocalMap::rational(BiPoly::monomial(a, 0, one.clone()), BiPoly::monomial(0, b, one))
            .expect("monomial maps are dominant")
    }

    pub fn components(&self) -> (&BiPoly, &BiPoly) {
        (&self.f1, &self.f2)
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    fn split_fixed(&self) -> Result<(BiPoly, BiPoly, BiPoly)> {
        let t = &self.tower;
        let d = self.f1.gcd(&self.f2, t)?;
        let r1 = self.f1.div_exact(&d, t)?.expect("gcd divides");
        let r2 = self.f2.div_exact(&d, t)?.expect("gcd divides");
        Ok((d, r1, r2))
    }

    /// Composition `g ∘ self` for `g = (g1, g2)`.
    pub fn compose_after(&self, g1: &BiPoly, g2: &BiPoly) -> (BiPoly, BiPoly) {
        let t = &self.tower;
        (g1.compose(&self.f1, &self.f2, t), g2.compose(&self.f1, &self.f2, t))
    }
}

/// `ν(f) = min(ord f1, ord f2)`.
pub fn map_multiplicity(f: &LocalMap) -> Result<u32> {
    let t = &f.tower;
    let a = f.f1.order(t)?.expect("nonzero");
    let b = f.f2.order(t)?.expect("nonzero");
    Ok(a.min(b))
}

/// The contracted curve `F = gcd(f1, f2)` (`None` when it is a unit at the
/// origin) and the reduced pencil `(f1/d, f2/d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPart {
    pub curve: Option<BiPoly>,
    pub gcd: BiPoly,
    pub reduced: (BiPoly, BiPoly),
}

pub fn fixed_part(f: &LocalMap) -> Result<FixedPart> {
    let (d, r1, r2) = f.split_fixed()?;
    let through = !d.is_constant() && f.tower.is_zero(&d.at_origin())?;
    Ok(FixedPart { curve: through.then(|| d.clone()), gcd: d, reduced: (r1, r2) })
}

/// Serializable summary of a map germ's local data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSummary {
    pub multiplicity: u32,
    pub local_degree: u64,
    pub contracted: bool,
}
