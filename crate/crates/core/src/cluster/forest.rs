use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Unvalidated description of one infinitely near point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub parent: Option<String>,
    pub second_proximity: Option<String>,
    pub orbit: u64,
}

impl NodeSpec {
    pub fn root(id: impl Into<String>) -> Self {
        NodeSpec { id: id.into(), parent: None, second_proximity: None, orbit: 1 }
    }

    pub fn free(id: impl Into<String>, parent: impl Into<String>) -> Self {
        NodeSpec { id: id.into(), parent: Some(parent.into()), second_proximity: None, orbit: 1 }
    }

    pub fn satellite(id: impl Into<String>, parent: impl Into<String>, second: impl Into<String>) -> Self {
        NodeSpec {
            id: id.into(),
            parent: Some(parent.into()),
            second_proximity: Some(second.into()),
            orbit: 1,
        }
    }

    pub fn with_orbit(mut self, orbit: u64) -> Self {
        self.orbit = orbit;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    DuplicateId,
    UnknownParent,
    UnknownSecondProximity,
    Cycle,
    /// second_proximity equal to the parent.
    DuplicateProximity,
    /// second_proximity on a root, or not a strict ancestor of the parent.
    SecondProximityNotAncestor,
    /// A satellite must lie on the exceptional curve its parent is proximate
    /// to: second_proximity ∈ {parent of parent, second_proximity of parent}.
    SecondProximityNotInherited,
    ZeroOrbit,
    OrbitNotMultipleOfParent,
    /// Satellites are unique given (parent, second_proximity) and rational
    /// over their parent.
    SatelliteOrbit,
    DuplicateSatellite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub node: String,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {}", self.rule, self.node)
    }
}

/// All invariant violations of a node list; empty iff it describes a valid
/// Enriques forest.
pub fn validate_forest(nodes: &[NodeSpec]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut v = |node: &str, rule| out.push(Violation { node: node.to_string(), rule });
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(&n.id, i).is_some() {
            v(&n.id, Rule::DuplicateId);
        }
    }
    let parent: Vec<Option<usize>> =
        nodes.iter().map(|n| n.parent.as_deref().and_then(|p| index.get(p).copied())).collect();
    for n in nodes {
        if n.orbit == 0 {
            v(&n.id, Rule::ZeroOrbit);
        }
        if let Some(p) = &n.parent {
            if !index.contains_key(p.as_str()) {
                v(&n.id, Rule::UnknownParent);
            }
        }
        if let Some(s) = &n.second_proximity {
            if !index.contains_key(s.as_str()) {
                v(&n.id, Rule::UnknownSecondProximity);
            }
        }
    }
    // Cycle detection: follow parents for at most len steps.
    let mut cyclic = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        let mut cur = parent[i];
        let mut steps = 0;
        while let Some(c) = cur {
            if c == i || steps > nodes.len() {
                cyclic[i] = true;
                v(&nodes[i].id, Rule::Cycle);
                break;
            }
            cur = parent[c];
            steps += 1;
        }
    }
    let ancestors = |i: usize| -> Vec<usize> {
        let mut a = Vec::new();
        let mut cur = parent[i];
        while let Some(c) = cur {
            if a.contains(&c) {
                break;
            }
            a.push(c);
            cur = parent[c];
        }
        a
    };
    let mut satellites: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if cyclic[i] {
            continue;
        }
        if let Some(p) = parent[i] {
            let (po, o) = (nodes[p].orbit, n.orbit);
            if po != 0 && o != 0 && o % po != 0 {
                v(&n.id, Rule::OrbitNotMultipleOfParent);
            }
        }
        let Some(s) = n.second_proximity.as_deref().and_then(|s| index.get(s).copied()) else {
            continue;
        };
        let Some(p) = parent[i] else {
            v(&n.id, Rule::SecondProximityNotAncestor);
            continue;
        };
        if s == p {
            v(&n.id, Rule::DuplicateProximity);
            continue;
        }
        if !ancestors(p).contains(&s) {
            v(&n.id, Rule::SecondProximityNotAncestor);
            continue;
        }
        let parent_second =
            nodes[p].second_proximity.as_deref().and_then(|x| index.get(x).copied());
        if parent[p] != Some(s) && parent_second != Some(s) {
            v(&n.id, Rule::SecondProximityNotInherited);
        }
        if n.orbit != nodes[p].orbit {
            v(&n.id, Rule::SatelliteOrbit);
        }
        if satellites.insert((p, s), i).is_some() {
            v(&n.id, Rule::DuplicateSatellite);
        }
    }
    out
}

/// A validated Enriques forest, stored in canonical ancestor-first order
/// (topological order, ties broken by id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    ids: Vec<String>,
    parent: Vec<Option<usize>>,
    second: Vec<Option<usize>>,
    orbit: Vec<u64>,
    index: BTreeMap<String, usize>,
}

impl Forest {
    pub fn empty() -> Self {
        Forest::new(Vec::new()).expect("empty forest is valid")
    }

    pub fn new(nodes: Vec<NodeSpec>) -> Result<Self, Vec<Violation>> {
        let violations = validate_forest(&nodes);
        if !violations.is_empty() {
            return Err(violations);
        }
        let pos: BTreeMap<&str, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        let mut heap = BinaryHeap::new();
        for (i, n) in nodes.iter().enumerate() {
            match &n.parent {
                Some(p) => children[pos[p.as_str()]].push(i),
                None => heap.push(Reverse((n.id.clone(), i))),
            }
        }
        let mut order = Vec::with_capacity(nodes.len());
        while let Some(Reverse((_, i))) = heap.pop() {
            order.push(i);
            for &c in &children[i] {
                heap.push(Reverse((nodes[c].id.clone(), c)));
            }
        }
        let index: BTreeMap<String, usize> =
            order.iter().enumerate().map(|(k, &i)| (nodes[i].id.clone(), k)).collect();
        let look = |x: &Option<String>| x.as_ref().map(|s| index[s]);
        Ok(Forest {
            ids: order.iter().map(|&i| nodes[i].id.clone()).collect(),
            parent: order.iter().map(|&i| look(&nodes[i].parent)).collect(),
            second: order.iter().map(|&i| look(&nodes[i].second_proximity)).collect(),
            orbit: order.iter().map(|&i| nodes[i].orbit).collect(),
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn second_proximity(&self, i: usize) -> Option<usize> {
        self.second[i]
    }

    pub fn orbit(&self, i: usize) -> u64 {
        self.orbit[i]
    }

    pub fn is_satellite(&self, i: usize) -> bool {
        self.second[i].is_some()
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.parent[i].is_none())
    }

    pub fn children(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (i + 1..self.len()).filter(move |&c| self.parent[c] == Some(i))
    }

    /// Points `q` is proximate to (its parent, and the second proximity if any).
    pub fn proximate_to(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent[q].into_iter().chain(self.second[q])
    }

    /// Points proximate to `p`.
    pub fn proximates_of(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (p + 1..self.len()).filter(move |&q| self.parent[q] == Some(p) || self.second[q] == Some(p))
    }

    pub fn depth(&self, i: usize) -> usize {
        let mut d = 0;
        let mut cur = self.parent[i];
        while let Some(c) = cur {
            d += 1;
            cur = self.parent[c];
        }
        d
    }

    pub fn is_ancestor(&self, a: usize, mut q: usize) -> bool {
        while let Some(p) = self.parent[q] {
            if p == a {
                return true;
            }
            q = p;
        }
        false
    }

    /// Σ orbit sizes: the number of actual points.
    pub fn point_count(&self) -> u64 {
        self.orbit.iter().sum()
    }

    pub fn specs(&self) -> Vec<NodeSpec> {
        (0..self.len())
            .map(|i| NodeSpec {
                id: self.ids[i].clone(),
                parent: self.parent[i].map(|p| self.ids[p].clone()),
                second_proximity: self.second[i].map(|p| self.ids[p].clone()),
                orbit: self.orbit[i],
            })
            .collect()
    }

    /// Sub-forest on a predecessor-closed subset (given as a mask over
    /// indices).
    pub fn restrict(&self, keep: &[bool]) -> Forest {
        let specs = self.specs().into_iter().enumerate().filter(|(i, _)| keep[*i]).map(|(_, s)| s).collect();
        Forest::new(specs).expect("restriction of a predecessor-closed subset is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(nodes: &[NodeSpec]) -> Vec<Rule> {
        validate_forest(nodes).into_iter().map(|v| v.rule).collect()
    }

    #[test]
    fn single_root_is_valid() {
        assert!(rules(&[NodeSpec::root("p")]).is_empty());
    }

    #[test]
    fn second_equal_to_parent() {
        let n = [NodeSpec::root("p"), NodeSpec::satellite("q", "p", "p")];
        assert_eq!(rules(&n), vec![Rule::DuplicateProximity]);
    }

    #[test]
    fn legal_satellite_chain() {
        let n = [NodeSpec::root("p"), NodeSpec::free("q", "p"), NodeSpec::satellite("r", "q", "p")];
        assert!(rules(&n).is_empty());
    }

    #[test]
    fn structural_violations() {
        let n = [
            NodeSpec::root("p"),
            NodeSpec::free("a", "b"),
            NodeSpec::free("b", "a"),
            NodeSpec::free("c", "zz"),
            NodeSpec::root("p"),
        ];
        let r = rules(&n);
        assert!(r.contains(&Rule::DuplicateId));
        assert!(r.contains(&Rule::Cycle));
        assert!(r.contains(&Rule::UnknownParent));
    }

    #[test]
    fn satellite_must_follow_exceptional_curve() {
        // r's parent q is free over p; r cannot be proximate to o.
        let n = [
            NodeSpec::root("o"),
            NodeSpec::free("p", "o"),
            NodeSpec::free("q", "p"),
            NodeSpec::satellite("r", "q", "o"),
        ];
        assert_eq!(rules(&n), vec![Rule::SecondProximityNotInherited]);
        // but after a satellite at p proximate to o, the next satellite may be.
        let n = [
            NodeSpec::root("o"),
            NodeSpec::free("p", "o"),
            NodeSpec::satellite("q", "p", "o"),
            NodeSpec::satellite("r", "q", "o"),
        ];
        assert!(rules(&n).is_empty());
    }

    #[test]
    fn orbit_rules() {
        let n = [NodeSpec::root("p").with_orbit(2), NodeSpec::free("q", "p").with_orbit(3)];
        assert_eq!(rules(&n), vec![Rule::OrbitNotMultipleOfParent]);
        let n = [
            NodeSpec::root("p"),
            NodeSpec::free("q", "p").with_orbit(2),
            NodeSpec::satellite("r", "q", "p").with_orbit(4),
        ];
        assert_eq!(rules(&n), vec![Rule::SatelliteOrbit]);
    }

    #[test]
    fn canonical_order_is_ancestor_first() {
        let f = Forest::new(vec![
            NodeSpec::free("c", "b"),
            NodeSpec::free("b", "a"),
            NodeSpec::root("a"),
            NodeSpec::root("0"),
        ])
        .unwrap();
        let ids: Vec<&str> = (0..f.len()).map(|i| f.id(i)).collect();
        assert_eq!(ids, ["0", "a", "b", "c"]);
        assert_eq!(f.parent(3), Some(2));
        assert_eq!(f.depth(3), 2);
    }
}
