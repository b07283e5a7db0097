use num_bigint::BigInt;

use super::{h_index, kummer_pullback, Component, KummerSpec, PlaneConfig, SingEntry};
use crate::cluster::WeightedCluster;
use crate::error::Result;
use crate::field::Rational;

fn point(m: i64) -> WeightedCluster {
    WeightedCluster::single(m)
}

/// Three concurrent lines, each through one coordinate vertex (a smooth
/// point of the curve), with the triple point off the triangle.
pub fn three_concurrent_lines() -> PlaneConfig {
    let sing = vec![
        SingEntry::generic(point(3), 1),
        SingEntry::at_vertex(point(1), 0),
        SingEntry::at_vertex(point(1), 1),
        SingEntry::at_vertex(point(1), 2),
    ];
    PlaneConfig::new(3, vec![Component::through_vertex(1, 3)], sing).expect("valid")
}

/// The `k`-th Fermat arrangement, as the Kummer pullback of
/// [`three_concurrent_lines`].
pub fn fermat(k: u32, seed: u64) -> Result<PlaneConfig> {
    kummer_pullback(&three_concurrent_lines(), KummerSpec::new(k)?, seed)
}

/// Wiman's arrangement: 45 lines with 120 triple, 45 quadruple and 36
/// quintuple points, all ordinary.
pub fn wiman() -> PlaneConfig {
    let sing = vec![
        SingEntry::generic(point(3), 120),
        SingEntry::generic(point(4), 45),
        SingEntry::generic(point(5), 36),
    ];
    PlaneConfig::new(45, vec![Component::new(1, 45)], sing).expect("valid")
}

/// Wiman's arrangement with the coordinate vertices at three triple points
/// and no coordinate line in the arrangement: 9 lines pass through a vertex.
pub fn wiman_vertex_triples() -> PlaneConfig {
    let sing = vec![
        SingEntry::at_vertex(point(3), 0),
        SingEntry::at_vertex(point(3), 1),
        SingEntry::at_vertex(point(3), 2),
        SingEntry::generic(point(3), 117),
        SingEntry::generic(point(4), 45),
        SingEntry::generic(point(5), 36),
    ];
    PlaneConfig::new(45, vec![Component::through_vertex(1, 9), Component::new(1, 36)], sing).expect("valid")
}

/// `h` of the Kummer pullback of [`wiman_vertex_triples`].
pub fn theorem_b_family(k: u32, seed: u64) -> Result<Rational> {
    h_index(&kummer_pullback(&wiman_vertex_triples(), KummerSpec::new(k)?, seed)?)
}

/// `−(225/67)·201k²/(198k² + 3)`.
pub fn theorem_b_formula(k: u32) -> Rational {
    let k2 = BigInt::from(k as u64).pow(2);
    Rational::new(BigInt::from(-225), BigInt::from(67))
        * Rational::new(BigInt::from(201) * &k2, BigInt::from(198) * &k2 + 3)
}

/// Klein's arrangement of 21 lines: 21 quadruple and 28 triple points.
pub fn klein_lines() -> PlaneConfig {
    let sing = vec![SingEntry::generic(point(4), 21), SingEntry::generic(point(3), 28)];
    PlaneConfig::new(21, vec![Component::new(1, 21)], sing).expect("valid")
}

/// The 21 reducible polars of Klein's quartic (21 lines and 21 conics): 42
/// nodes, 252 ordinary triple and 189 ordinary quadruple points.
pub fn klein_polars() -> PlaneConfig {
    let sing = vec![
        SingEntry::generic(point(2), 42),
        SingEntry::generic(point(3), 252),
        SingEntry::generic(point(4), 189),
    ];
    PlaneConfig::new(63, vec![Component::new(1, 21), Component::new(2, 21)], sing).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;
    use crate::plane::Placement;

    fn fermat_formula(k: i64) -> Rational {
        q(-3 * k * k, k * k + 3)
    }

    #[test]
    fn triangle_index_is_zero() {
        assert_eq!(h_index(&three_concurrent_lines()).unwrap(), q(0, 1));
    }

    #[test]
    fn fermat_data() {
        for k in 2..=6u32 {
            let c = fermat(k, 0).unwrap();
            let k = k as u64;
            assert_eq!(c.line_count(), 3 * k);
            assert_eq!(c.degree(), 3 * k);
            let triples: u64 = c.sing().iter().filter(|e| e.placement == Placement::Generic).map(|e| e.count).sum();
            assert_eq!(triples, k * k);
            for e in c.sing().iter().filter(|e| e.placement != Placement::Generic) {
                assert_eq!(e.cluster.weights(), &[k as i64]);
            }
            assert_eq!(h_index(&c).unwrap(), fermat_formula(k as i64));
        }
        assert_eq!(h_index(&fermat(3, 0).unwrap()).unwrap(), q(-9, 4));
        assert_eq!(h_index(&fermat(5, 0).unwrap()).unwrap(), q(-75, 28));
    }

    #[test]
    fn wiman_data() {
        let w = wiman();
        assert_eq!(w.proper_points(), 201);
        assert_eq!(w.marked_square(), 2700);
        assert_eq!(h_index(&w).unwrap(), q(-225, 67));
        assert_eq!(h_index(&wiman_vertex_triples()).unwrap(), q(-225, 67));
    }

    #[test]
    fn theorem_b_small() {
        assert_eq!(theorem_b_family(2, 0).unwrap(), q(-180, 53));
        assert_eq!(theorem_b_formula(2), q(-12060, 3551));
        for k in 2..=5 {
            assert_eq!(theorem_b_family(k, 0).unwrap(), theorem_b_formula(k));
        }
    }

    #[test]
    fn polars() {
        let c = klein_polars();
        assert_eq!(c.marked_square(), 5460);
        assert_eq!(c.proper_points(), 483);
        assert_eq!(h_index(&c).unwrap(), q(-71, 23));
        let t: i64 = c.sing().iter().filter(|e| e.cluster.weight(0) > 2).map(|e| e.count as i64 * e.cluster.self_intersection()).sum();
        assert_eq!(t, 5292);
    }
}
