use num_bigint::BigInt;
use num_traits::Pow;

use crate::cluster::WeightedCluster;
use crate::error::{Error, Result};
use crate::field::Rational;

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn pow(b: u64, e: u32) -> BigInt {
    Pow::pow(big(b), e)
}

/// `S_{p,k}`: a chain of free points with weights `k+1`, `k`, then
/// `4·3^{k−m−1}` points of weight `m` for `m = k−1, …, 2`.
pub fn klein_s_cluster(k: u32) -> Result<WeightedCluster> {
    if k < 2 {
        return Err(Error::PreconditionViolated(format!("S_{{p,k}} needs k ≥ 2, got {k}")));
    }
    let mut w = vec![k as i64 + 1, k as i64];
    for m in (2..k).rev() {
        let n = 4 * 3usize.pow(k - m - 1);
        w.extend(std::iter::repeat(m as i64).take(n));
    }
    WeightedCluster::free_chain(&w)
}

/// One family of points of the Klein multi-cluster. `square` and
/// `size_bound` are totals over the `count` points the family is made of;
/// `cluster` is the common local cluster when it is known explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinFamily {
    pub name: String,
    pub count: u64,
    pub cluster: Option<WeightedCluster>,
    pub size_bound: BigInt,
    pub square: BigInt,
}

impl KleinFamily {
    fn explicit(name: String, count: u64, cluster: WeightedCluster) -> Self {
        let square = big(count) * big(cluster.self_intersection() as u64);
        let size_bound = big(count) * big(cluster.point_count());
        KleinFamily { name, count, cluster: Some(cluster), size_bound, square }
    }
}

/// The multi-cluster `𝒦_k` through which the `k`-th iterated pullback of
/// Klein's arrangement passes, as a list of families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinState {
    pub level: u32,
    pub families: Vec<KleinFamily>,
}

const NODES: u64 = 42;
/// Σ of local degrees of the gradient map over the preimages of one node
/// other than the node itself.
const X_DEGREE: u64 = 6;
const MAP_DEGREE: u64 = 9;

impl KleinState {
    /// `𝒦_1 = Mult` of the reducible polars, split into the nodes `S` and
    /// the triple and quadruple points `T`.
    pub fn initial() -> Self {
        KleinState {
            level: 1,
            families: vec![
                KleinFamily::explicit("S_1".into(), NODES, WeightedCluster::single(2)),
                KleinFamily::explicit("T3".into(), 252, WeightedCluster::single(3)),
                KleinFamily::explicit("T4".into(), 189, WeightedCluster::single(4)),
            ],
        }
    }

    /// `𝒦_{k+1}` from `𝒦_k`: the nodes get the new chains `S_{k+1}`, the
    /// part of `f*(S_k)` away from the nodes is kept as `S_k^X`, and every
    /// other family is pulled back once more.
    pub fn step(&self) -> Result<Self> {
        let k = self.level;
        let mut families = vec![KleinFamily::explicit(format!("S_{}", k + 1), NODES, klein_s_cluster(k + 1)?)];
        for f in &self.families {
            if f.name == format!("S_{k}") {
                families.push(KleinFamily {
                    name: format!("S_{k}^X"),
                    count: f.count * X_DEGREE,
                    cluster: None,
                    size_bound: &f.size_bound * big(X_DEGREE),
                    square: &f.square * big(X_DEGREE),
                });
            } else {
                families.push(KleinFamily {
                    name: format!("f*({})", f.name),
                    count: f.count * MAP_DEGREE,
                    cluster: None,
                    size_bound: &f.size_bound * big(MAP_DEGREE),
                    square: &f.square * big(MAP_DEGREE),
                });
            }
        }
        Ok(KleinState { level: k + 1, families })
    }

    pub fn at(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::PreconditionViolated("Klein level starts at 1".into()));
        }
        let mut s = KleinState::initial();
        while s.level < k {
            s = s.step()?;
        }
        Ok(s)
    }

    pub fn square(&self) -> BigInt {
        self.families.iter().map(|f| &f.square).sum()
    }

    pub fn size_bound(&self) -> BigInt {
        self.families.iter().map(|f| &f.size_bound).sum()
    }

    /// Degree of the `k`-th iterated pullback, `21·3^k`.
    pub fn degree(&self) -> BigInt {
        big(21) * pow(3, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinBound {
    pub k: u32,
    pub k2: BigInt,
    pub size_bound: BigInt,
    pub degree: BigInt,
    /// `(d² − 𝒦_k²)/|𝒦_k|`, an upper bound for `h` of the arrangement.
    pub h_bound: Rational,
    pub state: KleinState,
}

pub fn klein_recursion(k: u32) -> Result<KleinBound> {
    if k < 2 {
        return Err(Error::PreconditionViolated(format!("Klein bound needs k ≥ 2, got {k}")));
    }
    let state = KleinState::at(k)?;
    let (k2, size_bound, degree) = (state.square(), state.size_bound(), state.degree());
    let h_bound = Rational::new(&degree * &degree - &k2, size_bound.clone());
    Ok(KleinBound { k, k2, size_bound, degree, h_bound, state })
}

/// `−(1283·9^k − 81)/(410·9^k)`.
pub fn klein_h_formula(k: u32) -> Rational {
    let n = pow(9, k);
    Rational::new(-(big(1283) * &n - big(81)), big(410) * n)
}

/// The alternative closed forms `(21/2)(53·9^k + 3) − 196·3^{k+1}` for `𝒦_k²`
/// and `84·9^k − 28·3^{k+1}` for `|𝒦_k|`, evaluated as written.
pub fn klein_closed_forms(k: u32) -> (Rational, Rational) {
    let r = |b: BigInt| Rational::from_integer(b);
    let k2 = Rational::new(big(21), big(2)) * r(big(53) * pow(9, k) + big(3)) - r(big(196) * pow(3, k + 1));
    let size = r(big(84) * pow(9, k) - big(28) * pow(3, k + 1));
    (k2, size)
}

/// Per-term comparison of `((f^{k−ℓ−1})*(S_ℓ^X))²` for `ℓ = 2, …, k−1`
/// between the recursion and the closed form `1176·3^{k+ℓ−4} − 28·9^{ℓ−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermComparison {
    pub l: u32,
    pub recursion: BigInt,
    pub closed_form: BigInt,
}

pub fn klein_term_comparison(k: u32) -> Result<Vec<TermComparison>> {
    let state = KleinState::at(k)?;
    let mut out = Vec::new();
    for l in 2..k {
        let name_x = format!("S_{l}^X");
        let fam = state
            .families
            .iter()
            .find(|f| f.name.trim_start_matches("f*(").trim_end_matches(')') == name_x)
            .expect("every S_l^X with l < k is present");
        let closed_form = big(1176) * pow(3, k + l - 4) - big(28) * pow(9, l - 1);
        out.push(TermComparison { l, recursion: fam.square.clone(), closed_form });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_cluster_shapes() {
        assert_eq!(klein_s_cluster(2).unwrap().weights(), &[3, 2]);
        assert_eq!(klein_s_cluster(3).unwrap().weights(), &[4, 3, 2, 2, 2, 2]);
        for k in 2..=8 {
            let s = klein_s_cluster(k).unwrap();
            assert_eq!(s.len(), 2 * 3usize.pow(k - 2));
            assert!(s.is_consistent());
            assert_eq!(42 * s.self_intersection(), 588 * 3i64.pow(k - 2) - 42);
        }
    }

    #[test]
    fn level_two_components() {
        let b = klein_recursion(2).unwrap();
        let sq: Vec<_> = b.state.families.iter().map(|f| f.square.clone()).collect();
        assert_eq!(sq, vec![big(546), big(1008), big(20412), big(27216)]);
        assert_eq!(b.k2, big(49182));
        assert_eq!(b.size_bound, big(4305));
        assert_eq!(b.h_bound, klein_h_formula(2));
    }

    #[test]
    fn h_bound_formula_for_small_k() {
        for k in 2..=8 {
            let b = klein_recursion(k).unwrap();
            assert_eq!(b.h_bound, klein_h_formula(k), "k = {k}");
            // (98385·9^{k−2} − 21)/2 and 4305·9^{k−2}
            assert_eq!(b.k2, (big(98385) * pow(9, k - 2) - 21) / 2);
            assert_eq!(b.size_bound, big(4305) * pow(9, k - 2));
        }
    }

    #[test]
    fn closed_forms_disagree() {
        let (k2, size) = klein_closed_forms(2);
        assert_eq!(k2, Rational::from_integer(big(39816)));
        assert_eq!(size, Rational::from_integer(big(6048)));
        assert_eq!(klein_closed_forms(3).0, Rational::from_integer(big(389844)));
        assert_ne!(k2, Rational::from_integer(klein_recursion(2).unwrap().k2));
    }

    #[test]
    fn closed_form_terms_are_reversed() {
        for k in 3..=8 {
            let t = klein_term_comparison(k).unwrap();
            let a: BigInt = t.iter().map(|x| &x.recursion).sum();
            let b: BigInt = t.iter().map(|x| &x.closed_form).sum();
            assert_eq!(a, b);
            for x in &t {
                let mirror = t.iter().find(|y| y.l == k + 1 - x.l).unwrap();
                assert_eq!(x.recursion, mirror.closed_form);
            }
        }
        assert!(klein_term_comparison(5).unwrap().iter().any(|x| x.recursion != x.closed_form));
    }
}
