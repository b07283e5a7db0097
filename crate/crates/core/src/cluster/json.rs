use serde::{Deserialize, Serialize};

use super::{NodeSpec, WeightedCluster};
use crate::error::Result;

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: String,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default)]
    pub second_proximity: Option<String>,
    #[serde(default = "one")]
    pub orbit: u64,
    pub mult: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ClusterJson {
    pub nodes: Vec<NodeJson>,
}

impl ClusterJson {
    /// Canonical (ancestor-first) serialization.
    pub fn from_cluster(k: &WeightedCluster) -> Self {
        let nodes = k
            .forest()
            .specs()
            .into_iter()
            .zip(k.weights())
            .map(|(s, &w)| NodeJson {
                id: s.id,
                parent: s.parent,
                second_proximity: s.second_proximity,
                orbit: s.orbit,
                mult: w,
            })
            .collect();
        ClusterJson { nodes }
    }

    pub fn node_specs(&self) -> Vec<NodeSpec> {
        self.nodes
            .iter()
            .map(|n| NodeSpec {
                id: n.id.clone(),
                parent: n.parent.clone(),
                second_proximity: n.second_proximity.clone(),
                orbit: n.orbit,
            })
            .collect()
    }

    pub fn to_cluster(&self) -> Result<WeightedCluster> {
        WeightedCluster::from_nodes(self.node_specs().into_iter().zip(self.nodes.iter().map(|n| n.mult)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reorder() {
        let s = r#"{"nodes":[
            {"id":"r","parent":"q","second_proximity":"p","orbit":1,"mult":1},
            {"id":"q","parent":"p","mult":1},
            {"id":"p","parent":null,"second_proximity":null,"orbit":1,"mult":2}]}"#;
        let j: ClusterJson = serde_json::from_str(s).unwrap();
        let k = j.to_cluster().unwrap();
        assert_eq!(k.weights(), &[2, 1, 1]);
        let out = serde_json::to_string(&ClusterJson::from_cluster(&k)).unwrap();
        assert!(out.starts_with(r#"{"nodes":[{"id":"p","parent":null"#));
    }
}
