//! Plane curve configurations described combinatorially: degree, component
//! summary and the weighted clusters of their marked points, each tagged with
//! where it sits relative to the coordinate triangle.

mod families;
mod klein;
mod kummer;
pub mod sweeps;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cluster::{ClusterJson, WeightedCluster};
use crate::error::{Error, Result};
use crate::field::Rational;

pub use families::{
    fermat, klein_lines, klein_polars, theorem_b_family, theorem_b_formula, three_concurrent_lines, wiman,
    wiman_vertex_triples,
};
pub use klein::{
    klein_closed_forms, klein_h_formula, klein_recursion, klein_s_cluster, klein_term_comparison, KleinBound,
    KleinFamily, KleinState, TermComparison,
};
pub use kummer::{
    h_bound_gap, kummer_pullback, pullback_theorem_check, strict_gap_demo, GapDemo, GapVariant, HBoundGap,
    KummerSpec, TheoremCheck,
};

/// Position of a marked point relative to the coordinate triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Generic,
    CoordinateVertex(u8),
    CoordinateLine(u8),
}

/// `count` components of degree `deg`, each through `vertices` coordinate
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub deg: u64,
    pub count: u64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub vertices: u8,
}

fn is_zero(v: &u8) -> bool {
    *v == 0
}

impl Component {
    pub fn new(deg: u64, count: u64) -> Self {
        Component { deg, count, vertices: 0 }
    }

    pub fn through_vertex(deg: u64, count: u64) -> Self {
        Component { deg, count, vertices: 1 }
    }
}

/// `count` points with the same local cluster and placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingEntry {
    pub cluster: WeightedCluster,
    pub count: u64,
    pub placement: Placement,
}

impl SingEntry {
    pub fn generic(cluster: WeightedCluster, count: u64) -> Self {
        SingEntry { cluster, count, placement: Placement::Generic }
    }

    pub fn at_vertex(cluster: WeightedCluster, vertex: u8) -> Self {
        SingEntry { cluster, count: 1, placement: Placement::CoordinateVertex(vertex) }
    }
}

/// A reduced plane curve `C` with a multi-cluster of marked points. Marked
/// points of multiplicity 1 are allowed (they locate coordinate vertices on
/// smooth points); [`h_index`] only uses points of multiplicity ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlaneConfigJson", into = "PlaneConfigJson")]
pub struct PlaneConfig {
    degree: u64,
    components: Vec<Component>,
    sing: Vec<SingEntry>,
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

impl PlaneConfig {
    pub fn new(degree: u64, components: Vec<Component>, sing: Vec<SingEntry>) -> Result<Self> {
        let c = PlaneConfig { degree, components, sing };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.degree == 0 {
            return bad("degree must be positive".into());
        }
        if !self.components.is_empty() {
            let total: u64 = self.components.iter().map(|c| c.deg * c.count).sum();
            if total != self.degree {
                return bad(format!("components add up to degree {total}, not {}", self.degree));
            }
        }
        if let Some(c) = self.components.iter().find(|c| c.deg == 0 || c.count == 0) {
            return bad(format!("empty component group {c:?}"));
        }
        if self.components.iter().any(|c| c.deg == 1 && c.vertices > 1) {
            return bad("a line through two vertices is a coordinate line".into());
        }
        let mut vertex_used = [false; 3];
        for s in &self.sing {
            if s.count == 0 || s.cluster.is_empty() {
                return bad("empty singular entry".into());
            }
            s.cluster.require_consistent()?;
            if s.cluster.forest().roots().count() != 1 {
                return bad("each entry must be a cluster at one proper point".into());
            }
            if s.cluster.weight(0) as u64 > self.degree {
                return bad(format!("multiplicity {} exceeds the degree", s.cluster.weight(0)));
            }
            match s.placement {
                Placement::Generic => {}
                Placement::CoordinateVertex(i) => {
                    if i > 2 || vertex_used[i as usize] {
                        return Err(Error::PlacementConflict(format!("vertex {i} used twice or out of range")));
                    }
                    if s.count != 1 {
                        return Err(Error::PlacementConflict(format!("vertex {i} holds {} points", s.count)));
                    }
                    vertex_used[i as usize] = true;
                }
                Placement::CoordinateLine(i) if i > 2 => {
                    return Err(Error::PlacementConflict(format!("coordinate line {i} out of range")));
                }
                Placement::CoordinateLine(_) => {}
            }
        }
        if self.is_line_arrangement() {
            if self.sing.iter().any(|s| s.cluster.len() != 1) {
                return bad("points of a line arrangement are ordinary".into());
            }
            let used: u64 = self.sing.iter().map(|s| s.count * pairs(s.cluster.weight(0) as u64)).sum();
            if used != pairs(self.degree) {
                return bad(format!("points account for {used} line pairs, expected {}", pairs(self.degree)));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn sing(&self) -> &[SingEntry] {
        &self.sing
    }

    pub fn is_line_arrangement(&self) -> bool {
        !self.components.is_empty() && self.components.iter().all(|c| c.deg == 1)
    }

    pub fn line_count(&self) -> u64 {
        self.components.iter().filter(|c| c.deg == 1).map(|c| c.count).sum()
    }

    pub fn self_intersection(&self) -> i64 {
        (self.degree * self.degree) as i64
    }

    /// Σ count·𝒦² over all marked points.
    pub fn marked_square(&self) -> i64 {
        self.sing.iter().map(|s| s.count as i64 * s.cluster.self_intersection()).sum()
    }

    /// Σ count·|K| over all marked points.
    pub fn marked_size(&self) -> u64 {
        self.sing.iter().map(|s| s.count * s.cluster.point_count()).sum()
    }

    /// Number of proper marked points.
    pub fn proper_points(&self) -> u64 {
        self.sing.iter().map(|s| s.count).sum()
    }

    /// Entries restricted to points of multiplicity ≥ 2; entries with no such
    /// point are dropped.
    pub fn mult(&self) -> Result<Vec<SingEntry>> {
        let mut out = Vec::new();
        for s in &self.sing {
            let k = s.cluster.with_weight_at_least(2)?;
            if !k.is_empty() {
                out.push(SingEntry { cluster: k, ..s.clone() });
            }
        }
        Ok(out)
    }

    pub fn with_sing(&self, sing: Vec<SingEntry>) -> Result<Self> {
        PlaneConfig::new(self.degree, self.components.clone(), sing)
    }
}

fn ratio(num: i64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn constant(c2: i64, entries: &[SingEntry]) -> Result<Rational> {
    let size: u64 = entries.iter().map(|s| s.count * s.cluster.point_count()).sum();
    if size == 0 {
        return Err(Error::EmptyCluster);
    }
    let sq: i64 = entries.iter().map(|s| s.count as i64 * s.cluster.self_intersection()).sum();
    Ok(ratio(c2 - sq, size))
}

/// `H(C, K)` with `K` all marked points of the configuration.
pub fn harbourne_h(c: &PlaneConfig) -> Result<Rational> {
    constant(c.self_intersection(), &c.sing)
}

/// `h(C) = H(C, Mult(C))`.
pub fn h_index(c: &PlaneConfig) -> Result<Rational> {
    constant(c.self_intersection(), &c.mult()?)
}

#[derive(Serialize, Deserialize)]
struct SingJson {
    cluster: ClusterJson,
    count: u64,
    #[serde(default = "generic")]
    placement: Placement,
}

fn generic() -> Placement {
    Placement::Generic
}

#[derive(Serialize, Deserialize)]
struct PlaneConfigJson {
    degree: u64,
    #[serde(default)]
    components: Vec<Component>,
    sing: Vec<SingJson>,
}

impl TryFrom<PlaneConfigJson> for PlaneConfig {
    type Error = Error;

    fn try_from(j: PlaneConfigJson) -> Result<Self> {
        let sing = j
            .sing
            .into_iter()
            .map(|s| Ok(SingEntry { cluster: s.cluster.to_cluster()?, count: s.count, placement: s.placement }))
            .collect::<Result<Vec<_>>>()?;
        PlaneConfig::new(j.degree, j.components, sing)
    }
}

impl From<PlaneConfig> for PlaneConfigJson {
    fn from(c: PlaneConfig) -> Self {
        PlaneConfigJson {
            degree: c.degree,
            components: c.components,
            sing: c
                .sing
                .iter()
                .map(|s| SingJson { cluster: ClusterJson::from_cluster(&s.cluster), count: s.count, placement: s.placement })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    #[test]
    fn klein_lines_index() {
        let c = klein_lines();
        assert_eq!(h_index(&c).unwrap(), q(-3, 1));
        assert_eq!(c.marked_square(), 588);
    }

    #[test]
    fn line_budget_is_enforced() {
        let bad = PlaneConfig::new(4, vec![Component::new(1, 4)], vec![SingEntry::generic(WeightedCluster::single(3), 1)]);
        assert!(matches!(bad, Err(Error::InvalidConfig(_))));
        // three concurrent lines plus a fourth through none of them: 1 triple + 3 doubles
        let ok = PlaneConfig::new(
            4,
            vec![Component::new(1, 4)],
            vec![SingEntry::generic(WeightedCluster::single(3), 1), SingEntry::generic(WeightedCluster::single(2), 3)],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn vertex_conflicts() {
        let s = vec![
            SingEntry::generic(WeightedCluster::single(3), 1),
            SingEntry::at_vertex(WeightedCluster::single(1), 0),
            SingEntry::at_vertex(WeightedCluster::single(1), 0),
        ];
        assert!(matches!(
            PlaneConfig::new(3, vec![Component::through_vertex(1, 3)], s),
            Err(Error::PlacementConflict(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = wiman_vertex_triples();
        let s = serde_json::to_string(&c).unwrap();
        let back: PlaneConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let j = r#"{"degree": 45, "components": [{"deg": 1, "count": 45}], "sing": [
            {"cluster": {"nodes": [{"id": "p", "mult": 3}]}, "count": 120, "placement": "generic"},
            {"cluster": {"nodes": [{"id": "p", "mult": 4}]}, "count": 45},
            {"cluster": {"nodes": [{"id": "p", "mult": 5}]}, "count": 36}]}"#;
        let w: PlaneConfig = serde_json::from_str(j).unwrap();
        assert_eq!(w, wiman());
        assert!(serde_json::from_str::<PlaneConfig>(&j.replace("120", "121")).is_err());
    }
}
