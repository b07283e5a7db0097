use super::resolvers::{transform, PencilResolver, ROOT_ID};
use super::through::curves_through;
use super::walk::{resolve, to_cluster, Branch, Resolver, Visit};
use super::{fixed_part, LocalMap};
use crate::cluster::WeightedCluster;
use crate::error::{Error, Result};
use crate::field::{BiPoly, Tower};

/// Weights with excess exactly 1 at every point of the forest of `k`:
/// `μ_q = 1 + Σ_{p → q} μ_p`, filled in from the leaves.
pub fn unit_excess_weights(k: &WeightedCluster) -> Vec<i64> {
    let f = k.forest();
    let mut mu = vec![0i64; f.len()];
    for q in (0..f.len()).rev() {
        let o = f.orbit(q) as i64;
        let s: i64 = f.proximates_of(q).map(|p| mu[p] * f.orbit(p) as i64).sum();
        mu[q] = 1 + s / o;
    }
    mu
}

/// Walks the pullback of an auxiliary pencil whose base points are all of
/// `K` (so its pullback visits every point of `f*K`), reading weights off the
/// pullback of a pencil through `(K, ν)`.
struct PullbackResolver {
    aux: (BiPoly, BiPoly),
    primary: Option<(BiPoly, BiPoly)>,
}

impl Resolver for PullbackResolver {
    fn visit(&self, t: &Tower) -> Result<Visit> {
        let (nu_aux, branches) = PencilResolver::pencil_visit(&self.aux.0, &self.aux.1, t)?;
        if nu_aux == 0 {
            return Ok(Visit::stop());
        }
        let nu = match &self.primary {
            None => 0,
            Some((g1, g2)) => PencilResolver::pencil_visit(g1, g2, t)?.0,
        };
        Ok(Visit { record: true, weight: nu as i64, extra: vec![nu_aux as i64], branches })
    }

    fn blow_up(&self, v: &Visit, b: &Branch) -> Result<Self> {
        let e = v.extra[0] as u32;
        let nu = v.weight as u32;
        Ok(PullbackResolver {
            aux: (transform(&self.aux.0, e, b), transform(&self.aux.1, e, b)),
            primary: match (&self.primary, nu) {
                (Some((g1, g2)), n) if n > 0 => Some((transform(g1, n, b), transform(g2, n, b))),
                _ => None,
            },
        })
    }
}

/// `f*(𝒦)` for a finite map germ and a consistent cluster with one proper
/// point and no conjugate orbits, from the base points of `(w∘f, z∘f)` with
/// `w, z` general curves through `𝒦`. Points of the pullback that no curve
/// through `𝒦` is forced through carry weight 0.
pub fn pullback_cluster(f: &LocalMap, k: &WeightedCluster, seed: u64) -> Result<WeightedCluster> {
    PreparedCluster::new(k, seed)?.pull(f)
}

/// A cluster together with certified curves through it, reusable across
/// maps.
#[derive(Clone, Debug)]
pub struct PreparedCluster {
    aux: Option<(BiPoly, BiPoly)>,
    primary: Option<(BiPoly, BiPoly)>,
}

impl PreparedCluster {
    pub fn new(k: &WeightedCluster, seed: u64) -> Result<Self> {
        k.require_consistent()?;
        if k.is_empty() {
            return Ok(PreparedCluster { aux: None, primary: None });
        }
        let aux_k = WeightedCluster::new(k.forest().clone(), unit_excess_weights(k))?;
        let aux = curves_through(&aux_k, seed)?;
        let primary = if k.weight(0) > 0 {
            let pair = curves_through(k, seed)?;
            Some((pair.w.equation().clone(), pair.z.equation().clone()))
        } else {
            None
        };
        Ok(PreparedCluster { aux: Some((aux.w.equation().clone(), aux.z.equation().clone())), primary })
    }

    pub fn pull(&self, f: &LocalMap) -> Result<WeightedCluster> {
        if let Some(c) = fixed_part(f)?.curve {
            return Err(Error::ContractedCurvePresent(c.render(f.tower())));
        }
        if f.tower().depth() > 0 {
            return Err(Error::PreconditionViolated("map must have rational coefficients".into()));
        }
        let Some((a1, a2)) = &self.aux else {
            return Ok(WeightedCluster::empty());
        };
        let aux = f.compose_after(a1, a2);
        let primary = self.primary.as_ref().map(|(g1, g2)| f.compose_after(g1, g2));
        let p = resolve(PullbackResolver { aux, primary }, f.tower())?;
        Ok(to_cluster(ROOT_ID, p.as_ref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::NodeSpec;
    use crate::local::local_degree;

    #[test]
    fn unit_excess() {
        let k = WeightedCluster::free_chain(&[3, 1, 1]).unwrap();
        assert_eq!(unit_excess_weights(&k), vec![3, 2, 1]);
        let k = WeightedCluster::from_nodes(vec![
            (NodeSpec::root("p"), 2),
            (NodeSpec::free("q", "p"), 1),
            (NodeSpec::satellite("r", "q", "p"), 1),
        ])
        .unwrap();
        let mu = unit_excess_weights(&k);
        assert_eq!(mu, vec![4, 2, 1]);
        let aux = WeightedCluster::new(k.forest().clone(), mu).unwrap();
        assert!(aux.excesses().iter().all(|&e| e == 1));
    }

    #[test]
    fn squares_map() {
        let f = LocalMap::monomial(2, 2);
        for m in 1..=3 {
            let k = WeightedCluster::single(m);
            let pb = pullback_cluster(&f, &k, 0).unwrap();
            assert_eq!(pb.weights(), &[2 * m]);
            assert_eq!(pb.self_intersection(), 4 * m * m);
        }
    }

    #[test]
    fn identity_map_preserves_cluster() {
        let f = LocalMap::monomial(1, 1);
        let k = WeightedCluster::free_chain(&[2, 1, 1]).unwrap();
        let pb = pullback_cluster(&f, &k, 0).unwrap();
        assert_eq!(pb.weights(), k.weights());
        assert_eq!(pb.self_intersection(), k.self_intersection());
    }

    #[test]
    fn multiplicative_on_a_chain() {
        let f = LocalMap::monomial(2, 3);
        let k = WeightedCluster::free_chain(&[2, 1]).unwrap();
        let pb = pullback_cluster(&f, &k, 5).unwrap();
        assert!(pb.is_consistent());
        assert_eq!(pb.self_intersection(), local_degree(&f).unwrap() as i64 * k.self_intersection());
    }

    #[test]
    fn contracted_curve_rejected() {
        let f = LocalMap::rational(BiPoly::from_int_terms(&[(2, 0, 1)]), BiPoly::from_int_terms(&[(1, 1, 1)])).unwrap();
        assert!(matches!(
            pullback_cluster(&f, &WeightedCluster::single(1), 0),
            Err(Error::ContractedCurvePresent(_))
        ));
    }
}
