use super::walk::{branches, flatten, resolve, to_cluster, Branch, Point, Resolver, Visit};
use super::{fixed_part, Chart, ChartDescriptor, Germ, LocalMap};
use crate::cluster::WeightedCluster;
use crate::error::{Error, Result};
use crate::field::{BiPoly, Tower, UniPoly};

pub(crate) const ROOT_ID: &str = "p";

/// Degree of `p`, with the leading coefficient checked to be a unit.
pub(crate) fn checked_degree(p: &UniPoly, t: &Tower) -> Result<Option<usize>> {
    if let Some(lc) = p.lc() {
        t.is_zero(lc)?;
    }
    Ok(p.degree())
}

/// Order at the origin; `u32::MAX` stands for the zero polynomial.
pub(crate) fn ord(p: &BiPoly, t: &Tower) -> Result<u32> {
    Ok(p.order(t)?.unwrap_or(u32::MAX))
}

/// Tangent data of `p` in degree `m`: `L(1, t)` and whether `x` divides `L`.
pub(crate) fn tangent(p: &BiPoly, m: u32, t: &Tower) -> Result<(UniPoly, bool)> {
    let l = p.homogeneous_part(m).dehomogenize_x();
    let x_divides = match checked_degree(&l, t)? {
        None => true,
        Some(d) => (d as u32) < m,
    };
    Ok((l, x_divides))
}

/// Strict (or virtual, for `e` below the order) transform by `e` in the chart
/// of `b`, returned in coordinates where the exceptional curve is `x = 0`.
pub(crate) fn transform(p: &BiPoly, e: u32, b: &Branch) -> BiPoly {
    match &b.chart {
        Chart::Slope(root) => p.subst_chart_x(root, &b.tower).div_x_pow(e),
        Chart::Vertical => p.subst_chart_y().div_y_pow(e).map(|q| q.swap()),
    }
    .expect("order bounds the exceptional power")
}

struct MultResolver {
    g: BiPoly,
}

impl Resolver for MultResolver {
    fn visit(&self, t: &Tower) -> Result<Visit> {
        let m = ord(&self.g, t)?;
        if m < 2 {
            return Ok(Visit::stop());
        }
        let (l, vertical) = tangent(&self.g, m, t)?;
        let e = m - checked_degree(&l, t)?.unwrap_or(0) as u32;
        let branches = branches(&l, 2, vertical && e >= 2, t)?;
        Ok(Visit { record: true, weight: m as i64, extra: Vec::new(), branches })
    }

    fn blow_up(&self, v: &Visit, b: &Branch) -> Result<Self> {
        Ok(MultResolver { g: transform(&self.g, v.weight as u32, b) })
    }
}

fn check_reduced(g: &Germ) -> Result<()> {
    let t = g.tower();
    let p = g.equation();
    let d = p.gcd(&p.derivative_x(t).gcd(&p.derivative_y(t), t)?, t)?;
    if !d.is_constant() && t.is_zero(&d.at_origin())? {
        return Err(Error::NonReducedGerm(d.render(t)));
    }
    Ok(())
}

fn mult_point(g: &Germ) -> Result<Option<Point>> {
    check_reduced(g)?;
    resolve(MultResolver { g: g.equation().clone() }, g.tower())
}

/// `Mult_p(C)`: all infinitely near points of multiplicity ≥ 2, weighted by
/// multiplicity. Empty for a smooth germ.
pub fn mult_cluster(g: &Germ) -> Result<WeightedCluster> {
    Ok(to_cluster(ROOT_ID, mult_point(g)?.as_ref()))
}

/// Chart steps taken while computing [`mult_cluster`].
pub fn blowup_trace(g: &Germ) -> Result<Vec<ChartDescriptor>> {
    Ok(match mult_point(g)? {
        None => Vec::new(),
        Some(p) => flatten(ROOT_ID, &p).trace,
    })
}

struct SharedResolver {
    a: BiPoly,
    b: BiPoly,
}

impl Resolver for SharedResolver {
    fn visit(&self, t: &Tower) -> Result<Visit> {
        let (ma, mb) = (ord(&self.a, t)?, ord(&self.b, t)?);
        if ma == 0 || mb == 0 {
            return Ok(Visit::stop());
        }
        let (la, va) = tangent(&self.a, ma, t)?;
        let (lb, vb) = tangent(&self.b, mb, t)?;
        let common = la.gcd(&lb, t)?;
        Ok(Visit {
            record: true,
            weight: ma as i64,
            extra: vec![mb as i64],
            branches: branches(&common, 1, va && vb, t)?,
        })
    }

    fn blow_up(&self, v: &Visit, b: &Branch) -> Result<Self> {
        Ok(SharedResolver {
            a: transform(&self.a, v.weight as u32, b),
            b: transform(&self.b, v.extra[0] as u32, b),
        })
    }
}

/// All points shared by two germs without common component, with both
/// multiplicity sequences: `(cluster weighted by a, cluster weighted by b)`.
pub fn shared_cluster(a: &Germ, b: &Germ) -> Result<(WeightedCluster, WeightedCluster)> {
    let t = a.tower();
    let g = a.equation().gcd(b.equation(), t)?;
    if !g.is_constant() && t.is_zero(&g.at_origin())? {
        return Err(Error::PreconditionViolated("germs share a component".into()));
    }
    let p = resolve(SharedResolver { a: a.equation().clone(), b: b.equation().clone() }, t)?;
    let wa = to_cluster(ROOT_ID, p.as_ref());
    let wb = match &p {
        None => WeightedCluster::empty(),
        Some(p) => {
            let flat = flatten(ROOT_ID, p);
            WeightedCluster::from_nodes(flat.nodes.into_iter().map(|(s, _, e)| (s, e[0])).collect())?
        }
    };
    Ok((wa, wb))
}

pub(crate) struct PencilResolver {
    pub g1: BiPoly,
    pub g2: BiPoly,
    pub f: BiPoly,
}

impl PencilResolver {
    /// Base-point multiplicity and common tangent branches.
    pub(crate) fn pencil_visit(g1: &BiPoly, g2: &BiPoly, t: &Tower) -> Result<(u32, Vec<Branch>)> {
        let nu = ord(g1, t)?.min(ord(g2, t)?);
        if nu == 0 {
            return Ok((0, Vec::new()));
        }
        let (l1, v1) = tangent(g1, nu, t)?;
        let (l2, v2) = tangent(g2, nu, t)?;
        let common = l1.gcd(&l2, t)?;
        Ok((nu, branches(&common, 1, v1 && v2, t)?))
    }
}

impl Resolver for PencilResolver {
    fn visit(&self, t: &Tower) -> Result<Visit> {
        let (nu, branches) = Self::pencil_visit(&self.g1, &self.g2, t)?;
        if nu == 0 {
            return Ok(Visit::stop());
        }
        let mf = if self.f.is_constant() { 0 } else { ord(&self.f, t)? };
        Ok(Visit { record: true, weight: nu as i64, extra: vec![mf as i64], branches })
    }

    fn blow_up(&self, v: &Visit, b: &Branch) -> Result<Self> {
        let nu = v.weight as u32;
        Ok(PencilResolver {
            g1: transform(&self.g1, nu, b),
            g2: transform(&self.g2, nu, b),
            f: if self.f.is_constant() { self.f.clone() } else { transform(&self.f, v.extra[0] as u32, b) },
        })
    }
}

/// Base points of a map germ with the contracted curve's multiplicity at
/// each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoints {
    pub cluster: WeightedCluster,
    /// `mult_q(F)` in the cluster's canonical order.
    pub f_mults: Vec<i64>,
    pub trace: Vec<ChartDescriptor>,
}

impl BasePoints {
    /// `Σ o_q (ν_q² + ν_q·mult_q F)`.
    pub fn local_degree(&self) -> u64 {
        let k = &self.cluster;
        (0..k.len())
            .map(|i| {
                let nu = k.weight(i);
                k.forest().orbit(i) as i64 * (nu * nu + nu * self.f_mults[i])
            })
            .sum::<i64>() as u64
    }
}

pub(crate) fn pencil_base_points(g1: &BiPoly, g2: &BiPoly, f: &BiPoly, t: &Tower) -> Result<BasePoints> {
    let p = resolve(PencilResolver { g1: g1.clone(), g2: g2.clone(), f: f.clone() }, t)?;
    let Some(p) = p else {
        return Ok(BasePoints { cluster: WeightedCluster::empty(), f_mults: Vec::new(), trace: Vec::new() });
    };
    let flat = flatten(ROOT_ID, &p);
    let fm: std::collections::BTreeMap<String, i64> =
        flat.nodes.iter().map(|(s, _, e)| (s.id.clone(), e[0])).collect();
    let cluster = WeightedCluster::from_nodes(flat.nodes.into_iter().map(|(s, w, _)| (s, w)).collect())?;
    let f_mults = (0..cluster.len()).map(|i| fm[cluster.forest().id(i)]).collect();
    Ok(BasePoints { cluster, f_mults, trace: flat.trace })
}

/// `BP_p(f)`: base points of the pencil `α f1/d + β f2/d`.
pub fn base_points(f: &LocalMap) -> Result<BasePoints> {
    let fp = fixed_part(f)?;
    let t = f.tower();
    let (r1, r2) = &fp.reduced;
    let curve = fp.curve.clone().unwrap_or_else(BiPoly::one);
    pencil_base_points(r1, r2, &curve, t)
}

/// `deg_p(f) = Σ (ν_q² + ν_q·mult_q F)` over the base points.
pub fn local_degree(f: &LocalMap) -> Result<u64> {
    Ok(base_points(f)?.local_degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(terms)
    }

    fn germ(terms: &[(u32, u32, i64)]) -> Germ {
        Germ::rational(p(terms)).unwrap()
    }

    #[test]
    fn mult_cluster_examples() {
        assert_eq!(mult_cluster(&germ(&[(1, 1, 1)])).unwrap().weights(), &[2]);
        let tac = mult_cluster(&germ(&[(0, 2, 1), (4, 0, -1)])).unwrap();
        assert_eq!(tac.weights(), &[2, 2]);
        assert!(!tac.forest().is_satellite(1));
        // xy(x+y)
        assert_eq!(mult_cluster(&germ(&[(2, 1, 1), (1, 2, 1)])).unwrap().weights(), &[3]);
        assert!(mult_cluster(&germ(&[(0, 1, 1), (2, 0, 1)])).unwrap().is_empty());
        assert!(matches!(mult_cluster(&germ(&[(0, 2, 1)])), Err(Error::NonReducedGerm(_))));
    }

    #[test]
    fn conjugate_directions_are_orbits() {
        // y^2 - 2x^2 plus higher terms: two conjugate tangents, node
        let k = mult_cluster(&germ(&[(0, 2, 1), (2, 0, -2), (3, 0, 1)])).unwrap();
        assert_eq!(k.weights(), &[2]);
        // (y^2 - 2x^2)^2 + x^6: a tacnode along each conjugate tangent
        let t = Tower::rational();
        let q = p(&[(0, 2, 1), (2, 0, -2)]);
        let g = q.mul(&q, &t).add(&p(&[(6, 0, 1)]), &t);
        let k = mult_cluster(&Germ::rational(g).unwrap()).unwrap();
        assert_eq!(k.weights()[0], 4);
        assert_eq!(k.forest().orbit(1), 2);
        assert_eq!(k.weights()[1], 2);
        assert!(k.is_consistent());
    }

    #[test]
    fn cusp_has_satellite_after_two_blowups() {
        // y^2 = x^5: points of multiplicity 2, 2 (free), then smooth
        let k = mult_cluster(&germ(&[(0, 2, 1), (5, 0, -1)])).unwrap();
        assert_eq!(k.weights(), &[2, 2]);
        // y^3 = x^4: mult 3, then 1 -> only root
        let k = mult_cluster(&germ(&[(0, 3, 1), (4, 0, -1)])).unwrap();
        assert_eq!(k.weights(), &[3]);
    }

    #[test]
    fn base_points_examples() {
        let bp = base_points(&LocalMap::monomial(1, 1)).unwrap();
        assert_eq!(bp.cluster.weights(), &[1]);
        let bp = base_points(&LocalMap::monomial(1, 2)).unwrap();
        assert_eq!(bp.cluster.weights(), &[1, 1]);
        assert!(!bp.cluster.forest().is_satellite(1));
        let bp = base_points(&LocalMap::monomial(2, 3)).unwrap();
        let k = &bp.cluster;
        assert_eq!(k.weights(), &[2, 1, 1]);
        assert!(!k.forest().is_satellite(1));
        assert_eq!(k.forest().second_proximity(2), Some(0));
        assert_eq!(bp.local_degree(), 6);
        assert_eq!(local_degree(&LocalMap::monomial(2, 2)).unwrap(), 4);
        for k in 1..=5 {
            assert_eq!(local_degree(&LocalMap::monomial(k, 1)).unwrap(), k as u64);
        }
    }

    #[test]
    fn contracted_curve_contributes() {
        let t = Tower::rational();
        let d = p(&[(1, 0, 1), (0, 1, 1)]);
        let f = LocalMap::rational(p(&[(1, 0, 1)]).mul(&d, &t), p(&[(0, 1, 1)]).mul(&d, &t)).unwrap();
        let bp = base_points(&f).unwrap();
        assert_eq!(bp.cluster.weights(), &[1]);
        assert_eq!(bp.f_mults, vec![1]);
        assert_eq!(bp.local_degree(), 2);
    }

    #[test]
    fn shared_points_of_tangent_parabolas() {
        let (a, b) = shared_cluster(&germ(&[(0, 1, 1), (2, 0, -1)]), &germ(&[(0, 1, 1), (2, 0, 1)])).unwrap();
        assert_eq!(a.weights(), &[1, 1]);
        assert_eq!(crate::cluster::noether_intersection(&a, &b).unwrap(), 2);
    }
}
