use super::{Forest, NodeSpec, WeightedCluster};

/// Materialize every conjugate point: the result has orbit 1 everywhere.
/// Returns the expanded forest and, per expanded node, the index of the node
/// it copies.
pub fn expand_orbits(f: &Forest) -> (Forest, Vec<usize>) {
    let mut specs: Vec<NodeSpec> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();
    // copies[i] = indices in `specs` of the copies of node i
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); f.len()];
    let name = |i: usize, k: usize, total: u64| {
        if total == 1 {
            f.id(i).to_string()
        } else {
            format!("{}#{}", f.id(i), k)
        }
    };
    let mut ancestors_of: Vec<Vec<usize>> = Vec::new();
    for i in 0..f.len() {
        let total = f.orbit(i);
        match f.parent(i) {
            None => {
                for k in 0..total as usize {
                    copies[i].push(specs.len());
                    ancestors_of.push(Vec::new());
                    specs.push(NodeSpec::root(name(i, k, total)));
                    origin.push(i);
                }
            }
            Some(p) => {
                let per = f.orbit(i) / f.orbit(p);
                let mut k = 0;
                for &pc in &copies[p].clone() {
                    for _ in 0..per {
                        let second = f.second_proximity(i).map(|s| {
                            let sc = ancestors_of[pc]
                                .iter()
                                .copied()
                                .find(|&a| origin[a] == s)
                                .expect("second proximity is an ancestor");
                            specs[sc].id.clone()
                        });
                        let mut anc = ancestors_of[pc].clone();
                        anc.push(pc);
                        copies[i].push(specs.len());
                        ancestors_of.push(anc);
                        specs.push(NodeSpec {
                            id: name(i, k, total),
                            parent: Some(specs[pc].id.clone()),
                            second_proximity: second,
                            orbit: 1,
                        });
                        origin.push(i);
                        k += 1;
                    }
                }
            }
        }
    }
    let forest = Forest::new(specs.clone()).expect("expansion of a valid forest is valid");
    let origin = (0..forest.len())
        .map(|j| origin[specs.iter().position(|s| s.id == forest.id(j)).unwrap()])
        .collect();
    (forest, origin)
}

/// Proximity matrix of an orbit-free forest in ancestor-first order:
/// `P[q][q] = 1`, `P[q][p] = -1` when `q` is proximate to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityMatrix {
    rows: Vec<Vec<i64>>,
}

impl ProximityMatrix {
    pub fn new(f: &Forest) -> Self {
        let n = f.len();
        let mut rows = vec![vec![0; n]; n];
        for (q, row) in rows.iter_mut().enumerate() {
            row[q] = 1;
            for p in f.proximate_to(q) {
                row[p] = -1;
            }
        }
        ProximityMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `P c`
    pub fn apply(&self, c: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(c).map(|(a, b)| a * b).sum()).collect()
    }

    /// `Pᵀ v`; on multiplicities this is the excess vector.
    pub fn apply_transpose(&self, v: &[i64]) -> Vec<i64> {
        let n = self.size();
        (0..n).map(|p| (0..n).map(|q| self.rows[q][p] * v[q]).sum()).collect()
    }

    /// Solve `P c = v` by forward substitution (P is unit lower-triangular).
    pub fn solve(&self, v: &[i64]) -> Vec<i64> {
        let mut c = vec![0; v.len()];
        for q in 0..v.len() {
            let s: i64 = (0..q).map(|p| self.rows[q][p] * c[p]).sum();
            c[q] = v[q] - s;
        }
        c
    }

    /// `cᵀ Pᵀ P c`
    pub fn gram_form(&self, c: &[i64]) -> i64 {
        self.apply(c).iter().map(|x| x * x).sum()
    }

    pub fn is_unit_lower_triangular(&self) -> bool {
        self.rows.iter().enumerate().all(|(q, r)| {
            r[q] == 1
                && r[q + 1..].iter().all(|&x| x == 0)
                && r[..q].iter().filter(|&&x| x != 0).count() <= 2
                && r[..q].iter().all(|&x| x == 0 || x == -1)
        })
    }
}

/// Expanded multiplicities and the proximity matrix of the expanded forest.
pub fn expanded_system(k: &WeightedCluster) -> (ProximityMatrix, Vec<i64>) {
    let (f, origin) = expand_orbits(k.forest());
    let nu = origin.iter().map(|&i| k.weight(i)).collect();
    (ProximityMatrix::new(&f), nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satellite_row_has_two_entries() {
        let f = Forest::new(vec![
            NodeSpec::root("p"),
            NodeSpec::free("q", "p"),
            NodeSpec::satellite("r", "q", "p"),
        ])
        .unwrap();
        let m = ProximityMatrix::new(&f);
        assert_eq!(m.rows(), &[vec![1, 0, 0], vec![-1, 1, 0], vec![-1, -1, 1]]);
        assert!(m.is_unit_lower_triangular());
        assert_eq!(m.apply_transpose(&[1, 1, 1]), vec![-1, 0, 1]);
    }

    #[test]
    fn expansion_counts_points() {
        let f = Forest::new(vec![
            NodeSpec::root("p"),
            NodeSpec::free("q", "p").with_orbit(2),
            NodeSpec::satellite("r", "q", "p").with_orbit(2),
            NodeSpec::free("s", "r").with_orbit(6),
        ])
        .unwrap();
        let (e, origin) = expand_orbits(&f);
        assert_eq!(e.len(), 1 + 2 + 2 + 6);
        assert!(e.roots().count() == 1);
        for j in 0..e.len() {
            if f.is_satellite(origin[j]) {
                assert_eq!(e.second_proximity(j), Some(0));
            }
        }
    }
}
