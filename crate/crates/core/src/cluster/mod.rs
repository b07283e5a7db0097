//! Enriques forests of infinitely near points and weighted multi-clusters.
//!
//! Conjugate points are stored once, with an orbit size. Every count and sum
//! below is orbit-weighted, so `|K|` is the number of actual points.

mod forest;
mod json;
mod proximity;

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;

pub use forest::{validate_forest, Forest, NodeSpec, Rule, Violation};
pub use json::{ClusterJson, NodeJson};
pub use proximity::{expand_orbits, expanded_system, ProximityMatrix};

use crate::error::{Error, Result};
use crate::field::Rational;

/// A forest with one integer weight per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCluster {
    forest: Forest,
    weights: Vec<i64>,
}

impl WeightedCluster {
    /// Weights are given in the forest's canonical order and must be ≥ 0.
    pub fn new(forest: Forest, weights: Vec<i64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| w < 0) {
            return Err(Error::NegativeWeight(forest.id(i).to_string()));
        }
        Ok(Self::new_signed(forest, weights))
    }

    /// Internal constructor for strict-transform bookkeeping; no sign check.
    pub(crate) fn new_signed(forest: Forest, weights: Vec<i64>) -> Self {
        assert_eq!(forest.len(), weights.len(), "one weight per node");
        WeightedCluster { forest, weights }
    }

    /// Build from unordered `(node, weight)` pairs.
    pub fn from_nodes(nodes: Vec<(NodeSpec, i64)>) -> Result<Self> {
        let w: BTreeMap<String, i64> = nodes.iter().map(|(s, w)| (s.id.clone(), *w)).collect();
        let forest =
            Forest::new(nodes.into_iter().map(|(s, _)| s).collect()).map_err(Error::InvalidForest)?;
        let weights = (0..forest.len()).map(|i| w[forest.id(i)]).collect();
        Self::new(forest, weights)
    }

    pub fn empty() -> Self {
        WeightedCluster { forest: Forest::empty(), weights: Vec::new() }
    }

    pub fn single(weight: i64) -> Self {
        Self::from_nodes(vec![(NodeSpec::root("p"), weight)]).expect("valid")
    }

    /// Chain of free points `p0 ← p1 ← …` with the given weights.
    pub fn free_chain(weights: &[i64]) -> Result<Self> {
        let nodes = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let id = format!("p{i}");
                let spec = if i == 0 { NodeSpec::root(id) } else { NodeSpec::free(id, format!("p{}", i - 1)) };
                (spec, w)
            })
            .collect();
        Self::from_nodes(nodes)
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn weight_of(&self, id: &str) -> Option<i64> {
        self.forest.index_of(id).map(|i| self.weights[i])
    }

    pub fn len(&self) -> usize {
        self.forest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forest.is_empty()
    }

    /// `|K|`, counting conjugate points and weight-0 points.
    pub fn point_count(&self) -> u64 {
        self.forest.point_count()
    }

    /// `ρ_q = ν_q − Σ_{q' → q} ν_{q'}·(o_{q'}/o_q)` per node.
    pub fn excesses(&self) -> Vec<i64> {
        let f = &self.forest;
        (0..f.len())
            .map(|p| {
                let pulled: i64 = f
                    .proximates_of(p)
                    .map(|q| self.weights[q] * (f.orbit(q) / f.orbit(p)) as i64)
                    .sum();
                self.weights[p] - pulled
            })
            .collect()
    }

    pub fn excess_map(&self) -> Vec<(String, i64)> {
        let e = self.excesses();
        (0..self.len()).map(|i| (self.forest.id(i).to_string(), e[i])).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.excesses().iter().all(|&r| r >= 0)
    }

    pub fn require_consistent(&self) -> Result<()> {
        match self.excesses().iter().position(|&r| r < 0) {
            Some(i) => Err(Error::InconsistentCluster(self.forest.id(i).to_string())),
            None => Ok(()),
        }
    }

    /// `𝒦² = Σ o_q ν_q²`
    pub fn self_intersection(&self) -> i64 {
        self.orbit_sum(|w| w * w)
    }

    /// `Σ o_q ν_q(ν_q+1)/2`
    pub fn virtual_codimension(&self) -> i64 {
        self.orbit_sum(|w| w * (w + 1) / 2)
    }

    /// `Σ o_q ν_q`
    pub fn weight_sum(&self) -> i64 {
        self.orbit_sum(|w| w)
    }

    fn orbit_sum(&self, g: impl Fn(i64) -> i64) -> i64 {
        (0..self.len()).map(|i| self.forest.orbit(i) as i64 * g(self.weights[i])).sum()
    }

    pub fn scaled(&self, m: i64) -> Self {
        WeightedCluster { forest: self.forest.clone(), weights: self.weights.iter().map(|w| w * m).collect() }
    }

    /// Nodes of positive weight (a predecessor-closed subset when weights are
    /// non-increasing along chains).
    pub fn support(&self) -> Result<Self> {
        let keep: Vec<bool> = self.weights.iter().map(|&w| w > 0).collect();
        for i in 0..self.len() {
            if keep[i] && self.forest.parent(i).is_some_and(|p| !keep[p]) {
                return Err(Error::PreconditionViolated(format!(
                    "positive weight at {} below a weight-0 point",
                    self.forest.id(i)
                )));
            }
        }
        Ok(self.restrict(&keep))
    }

    /// Restriction to a predecessor-closed mask.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let forest = self.forest.restrict(keep);
        let weights = (0..forest.len()).map(|j| self.weight_of(forest.id(j)).unwrap()).collect();
        WeightedCluster { forest, weights }
    }

    /// Nodes with weight at least `m`, provided they form a predecessor-closed
    /// set.
    pub fn with_weight_at_least(&self, m: i64) -> Result<Self> {
        let keep: Vec<bool> = self.weights.iter().map(|&w| w >= m).collect();
        if (0..self.len()).any(|i| keep[i] && self.forest.parent(i).is_some_and(|p| !keep[p])) {
            return Err(Error::PreconditionViolated(format!("weights ≥ {m} not predecessor-closed")));
        }
        Ok(self.restrict(&keep))
    }
}

/// `codim(m𝒦) − 𝒦² m²/2` must be linear in `m` for `m = 1..k_max`; checked
/// through vanishing second differences (computed doubled to stay integral).
pub fn hilbert_samuel_check(k: &WeightedCluster, k_max: u32) -> Result<bool> {
    k.require_consistent()?;
    let k2 = k.self_intersection() as i128;
    let vals: Vec<i128> = (1..=k_max as i128)
        .map(|m| 2 * k.scaled(m as i64).virtual_codimension() as i128 - k2 * m * m)
        .collect();
    Ok(vals.windows(3).all(|w| w[0] - 2 * w[1] + w[2] == 0))
}

/// `Σ o_q ν_q μ_q` over points present in both clusters (identified by id).
pub fn noether_intersection(a: &WeightedCluster, b: &WeightedCluster) -> Result<i64> {
    let (fa, fb) = (a.forest(), b.forest());
    let mut total = 0;
    for i in 0..fa.len() {
        let Some(j) = fb.index_of(fa.id(i)) else { continue };
        let same = fa.parent(i).map(|p| fa.id(p)) == fb.parent(j).map(|p| fb.id(p))
            && fa.second_proximity(i).map(|p| fa.id(p)) == fb.second_proximity(j).map(|p| fb.id(p))
            && fa.orbit(i) == fb.orbit(j);
        if !same {
            return Err(Error::IncompatibleForests(fa.id(i).to_string()));
        }
        total += fa.orbit(i) as i64 * a.weight(i) * b.weight(j);
    }
    Ok(total)
}

fn ratio(num: i64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `H(C, K) = (C² − Σ mult_q(C)²)/|K|`.
pub fn harbourne_constant(c_self_int: i64, mults: &WeightedCluster) -> Result<Rational> {
    let n = mults.point_count();
    if n == 0 {
        return Err(Error::EmptyCluster);
    }
    Ok(ratio(c_self_int - mults.self_intersection(), n))
}

/// `(C² − 𝒦²)/|K|`, an upper bound for `H(C, K)` when `C` passes through
/// the consistent cluster `𝒦`.
pub fn h_passing_bound(c_self_int: i64, k: &WeightedCluster) -> Result<Rational> {
    k.require_consistent()?;
    harbourne_constant(c_self_int, k)
}

const H4_MAX_EXTRA: usize = 24;

/// For every predecessor-closed `J` between `k` and `full` with `H(C,J) ≥ −4`
/// and every point `q` addable to `J`, check `H(C, J ∪ {q}) ≤ H(C, J)`.
pub fn remark_h4_monotone(c_self_int: i64, k: &WeightedCluster, full: &WeightedCluster) -> Result<bool> {
    let f = full.forest();
    let mut in_k = vec![false; f.len()];
    for i in 0..k.len() {
        let id = k.forest().id(i);
        let j = f
            .index_of(id)
            .ok_or_else(|| Error::PreconditionViolated(format!("{id} missing from the full cluster")))?;
        let parent_ok = k.forest().parent(i).map(|p| k.forest().id(p)) == f.parent(j).map(|p| f.id(p));
        if !parent_ok || k.forest().orbit(i) != f.orbit(j) {
            return Err(Error::IncompatibleForests(id.to_string()));
        }
        in_k[j] = true;
    }
    let extra: Vec<usize> = (0..f.len()).filter(|&j| !in_k[j]).collect();
    if let Some(&j) = extra.iter().find(|&&j| full.weight(j) < 2) {
        return Err(Error::PreconditionViolated(format!("extra point {} has weight < 2", f.id(j))));
    }
    if extra.len() > H4_MAX_EXTRA {
        return Err(Error::PreconditionViolated(format!(
            "{} extra points exceed the exhaustive limit {H4_MAX_EXTRA}",
            extra.len()
        )));
    }
    let base_n: u64 = (0..k.len()).map(|i| k.forest().orbit(i)).sum();
    let base_s = k.self_intersection();
    let state_h = |mask: u64| -> Option<Rational> {
        let mut n = base_n;
        let mut s = base_s;
        for (b, &j) in extra.iter().enumerate() {
            if mask >> b & 1 == 1 {
                n += f.orbit(j);
                s += f.orbit(j) as i64 * full.weight(j).pow(2);
            }
        }
        (n > 0).then(|| ratio(c_self_int - s, n))
    };
    let present = |mask: u64, j: usize| in_k[j] || extra.iter().position(|&e| e == j).is_some_and(|b| mask >> b & 1 == 1);
    let minus_four = Rational::from_integer(BigInt::from(-4));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([0u64]);
    seen.insert(0u64);
    while let Some(mask) = queue.pop_front() {
        let h = state_h(mask);
        for (b, &j) in extra.iter().enumerate() {
            if mask >> b & 1 == 1 || f.parent(j).is_some_and(|p| !present(mask, p)) {
                continue;
            }
            let next = mask | 1 << b;
            if let Some(h) = &h {
                if h >= &minus_four && state_h(next).unwrap() > *h {
                    return Ok(false);
                }
            }
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn chain_with_satellite() -> WeightedCluster {
        WeightedCluster::from_nodes(vec![
            (NodeSpec::root("p"), 1),
            (NodeSpec::free("q", "p"), 1),
            (NodeSpec::satellite("r", "q", "p"), 1),
        ])
        .unwrap()
    }

    #[test]
    fn excess_examples() {
        assert_eq!(WeightedCluster::single(3).excesses(), vec![3]);
        assert_eq!(WeightedCluster::free_chain(&[2, 1]).unwrap().excesses(), vec![1, 1]);
        let k = chain_with_satellite();
        assert_eq!(k.excesses(), vec![-1, 0, 1]);
        assert!(!k.is_consistent());
        let k = WeightedCluster::from_nodes(vec![
            (NodeSpec::root("p"), 3),
            (NodeSpec::free("q1", "p"), 2),
            (NodeSpec::free("q2", "p"), 1),
        ])
        .unwrap();
        assert!(k.is_consistent());
        assert_eq!(k.excesses()[0], 0);
    }

    #[test]
    fn orbit_weighted_excess() {
        // two conjugate free points of weight 1 over a double point
        let k = WeightedCluster::from_nodes(vec![
            (NodeSpec::root("p"), 2),
            (NodeSpec::free("q", "p").with_orbit(2), 1),
        ])
        .unwrap();
        assert_eq!(k.excesses(), vec![0, 1]);
        assert_eq!(k.self_intersection(), 6);
        assert_eq!(k.point_count(), 3);
    }

    #[test]
    fn squares_and_codimension() {
        let k = WeightedCluster::from_nodes(vec![(NodeSpec::root("p").with_orbit(2), 3)]).unwrap();
        assert_eq!(k.self_intersection(), 18);
        assert_eq!(WeightedCluster::single(3).virtual_codimension(), 6);
        assert_eq!(WeightedCluster::free_chain(&[2, 1, 1]).unwrap().virtual_codimension(), 5);
        assert_eq!(WeightedCluster::empty().virtual_codimension(), 0);
    }

    #[test]
    fn hilbert_samuel() {
        assert!(hilbert_samuel_check(&WeightedCluster::single(2), 5).unwrap());
        assert!(hilbert_samuel_check(&WeightedCluster::free_chain(&[3, 1]).unwrap(), 5).unwrap());
        assert!(matches!(
            hilbert_samuel_check(&chain_with_satellite(), 5),
            Err(Error::InconsistentCluster(_))
        ));
    }

    #[test]
    fn noether_examples() {
        let a = WeightedCluster::free_chain(&[2, 1]).unwrap();
        let b = WeightedCluster::free_chain(&[1]).unwrap();
        assert_eq!(noether_intersection(&a, &b).unwrap(), 2);
        let m = WeightedCluster::single(4);
        assert_eq!(noether_intersection(&m, &m).unwrap(), 16);
        let other = WeightedCluster::from_nodes(vec![(NodeSpec::root("z"), 5)]).unwrap();
        assert_eq!(noether_intersection(&m, &other).unwrap(), 0);
    }

    #[test]
    fn harbourne_examples() {
        assert_eq!(harbourne_constant(9, &WeightedCluster::single(3)).unwrap(), q(0, 1));
        assert_eq!(harbourne_constant(4, &WeightedCluster::single(0)).unwrap(), q(4, 1));
        assert_eq!(harbourne_constant(4, &WeightedCluster::empty()), Err(Error::EmptyCluster));
        assert_eq!(h_passing_bound(0, &WeightedCluster::single(1)).unwrap(), q(-1, 1));
    }

    #[test]
    fn h4_examples() {
        let k = WeightedCluster::single(3);
        assert!(remark_h4_monotone(9, &k, &k).unwrap());
        let full = WeightedCluster::free_chain(&[3, 2]).unwrap();
        let k = WeightedCluster::free_chain(&[3]).unwrap();
        assert!(remark_h4_monotone(9, &k, &full).unwrap());
        // H = -5 before the step: hypothesis fails, vacuous
        assert!(remark_h4_monotone(4, &k, &full).unwrap());
        let low = WeightedCluster::free_chain(&[3, 1]).unwrap();
        assert!(remark_h4_monotone(9, &k, &low).is_err());
    }
}
