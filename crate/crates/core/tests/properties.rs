use std::collections::BTreeSet;

use harbourne::cluster::{
    expanded_system, h_passing_bound, harbourne_constant, noether_intersection, remark_h4_monotone, NodeSpec,
    WeightedCluster,
};
use harbourne::field::{split_directions, BiPoly, Elem, Tower, UniPoly};
use harbourne::local::{local_degree, mult_cluster, pullback_cluster, Germ, LocalMap};
use harbourne::plane::{
    fermat, kummer_pullback, pullback_theorem_check, three_concurrent_lines, wiman, wiman_vertex_triples,
    KummerSpec, PlaneConfig,
};
use proptest::prelude::*;

/// Node `i` hangs off an earlier node; with `sat` it is also proximate to a
/// point its parent is proximate to. Unusable satellite choices fall back
/// to free points.
fn forest(shape: &[(usize, u8)]) -> Vec<NodeSpec> {
    let mut specs: Vec<NodeSpec> = vec![NodeSpec { id: "n0".into(), parent: None, second_proximity: None, orbit: 1 }];
    let mut used = BTreeSet::new();
    for (i, &(pc, sat)) in shape.iter().enumerate() {
        let id = format!("n{}", i + 1);
        let p = pc % specs.len();
        let parent = &specs[p];
        let options: Vec<String> = [parent.parent.clone(), parent.second_proximity.clone()].into_iter().flatten().collect();
        let spec = match sat as usize {
            s if s > 0 && s <= options.len() && used.insert((p, options[s - 1].clone())) => {
                NodeSpec::satellite(id, parent.id.clone(), options[s - 1].clone())
            }
            _ => NodeSpec::free(id, parent.id.clone()),
        };
        specs.push(spec);
    }
    specs
}

fn shape(max: usize) -> impl Strategy<Value = Vec<(usize, u8)>> {
    prop::collection::vec((any::<usize>(), 0u8..3), 0..max)
}

/// Multiplicities with the given non-negative excesses: `ν_q = ρ_q + Σ ν`
/// over the points proximate to `q`, filled from the leaves up.
fn from_excesses(specs: &[NodeSpec], rho: &[i64]) -> Vec<i64> {
    let mut nu = rho.to_vec();
    for q in (0..specs.len()).rev() {
        let id = &specs[q].id;
        let s: i64 = (q + 1..specs.len())
            .filter(|&r| specs[r].parent.as_ref() == Some(id) || specs[r].second_proximity.as_ref() == Some(id))
            .map(|r| nu[r])
            .sum();
        nu[q] += s;
    }
    nu
}

fn consistent(max: usize) -> impl Strategy<Value = WeightedCluster> {
    shape(max).prop_flat_map(|s| {
        let n = s.len() + 1;
        (Just(s), prop::collection::vec(0i64..3, n))
    })
    .prop_map(|(s, rho)| {
        let specs = forest(&s);
        let nu = from_excesses(&specs, &rho);
        WeightedCluster::from_nodes(specs.into_iter().zip(nu).collect()).expect("generated forests are valid")
    })
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0)).prop_map(|c| UniPoly::from_ints(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverses_in_quadratic_extension(a in -20i64..20, b in -20i64..20) {
        prop_assume!(a != 0 || b != 0);
        let t = Tower::rational().extend("t", &UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        let x = t.add(&Elem::int(a), &t.mul(&Elem::int(b), &t.generator(1)));
        let y = t.inv(&x).unwrap();
        prop_assert!(t.mul(&x, &y).is_one());
    }

    #[test]
    fn gcd_divides_both(a in small_poly(5), b in small_poly(5), c in small_poly(2)) {
        let t = Tower::rational();
        let (a, b) = (a.mul(&c, &t), b.mul(&c, &t));
        let g = a.gcd(&b, &t).unwrap();
        prop_assert!(a.div_exact(&g, &t).unwrap().is_some());
        prop_assert!(b.div_exact(&g, &t).unwrap().is_some());
        prop_assert!(g.degree().unwrap() >= c.degree().unwrap());
    }

    #[test]
    fn directions_account_for_degree(p in small_poly(5)) {
        prop_assume!(p.degree().unwrap() > 0);
        let d = split_directions(&p, &Tower::rational()).unwrap();
        let total: u64 = d.iter().map(|x| x.orbit * x.multiplicity as u64).sum();
        prop_assert_eq!(total, p.degree().unwrap() as u64);
    }

    #[test]
    fn generated_clusters_are_consistent(k in consistent(12)) {
        prop_assert!(k.is_consistent());
        prop_assert!(k.excesses().iter().all(|&e| e >= 0));
    }

    #[test]
    fn self_intersection_is_noether_with_itself(k in consistent(12)) {
        let sq: i64 = k.weights().iter().map(|w| w * w).sum();
        prop_assert_eq!(k.self_intersection(), sq);
        prop_assert_eq!(noether_intersection(&k, &k).unwrap(), sq);
    }

    #[test]
    fn proximity_matrix_bookkeeping(k in consistent(12)) {
        let (p, nu) = expanded_system(&k);
        prop_assert!(p.is_unit_lower_triangular());
        let c = p.solve(&nu);
        prop_assert_eq!(p.apply(&c), nu.clone());
        prop_assert_eq!(p.gram_form(&c), nu.iter().map(|x| x * x).sum::<i64>());
        prop_assert_eq!(p.apply_transpose(&nu), k.excesses());
    }

    #[test]
    fn passing_bound_is_attained(k in consistent(8), c2 in -50i64..200) {
        prop_assume!(k.point_count() > 0);
        prop_assert_eq!(harbourne_constant(c2, &k).unwrap(), h_passing_bound(c2, &k).unwrap());
    }

    #[test]
    fn h4_monotone_on_chains(s in shape(7), w in prop::collection::vec(2i64..5, 8), cut in 1usize..8, c2 in -40i64..80) {
        let specs = forest(&s);
        let n = specs.len();
        let full = WeightedCluster::from_nodes(specs.into_iter().zip(w[..n].iter().copied()).collect()).unwrap();
        let keep: Vec<bool> = (0..n).map(|i| i < cut.min(n)).collect();
        let k = full.restrict(&keep);
        prop_assert!(remark_h4_monotone(c2, &k, &full).unwrap());
    }
}

fn branch_poly(kind: u8, c: i64) -> BiPoly {
    match kind {
        0 => BiPoly::from_int_terms(&[(1, 0, c), (0, 1, 1)]),
        1 => BiPoly::from_int_terms(&[(0, 1, 1), (2, 0, c)]),
        2 => BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, c)]),
        _ => BiPoly::from_int_terms(&[(0, 2, 1), (5, 0, c)]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplicity_clusters_are_consistent(parts in prop::collection::vec((0u8..4, 1i64..4, any::<bool>()), 1..4)) {
        let t = Tower::rational();
        let mut g = BiPoly::one();
        for (kind, c, swap) in parts {
            let b = branch_poly(kind, c);
            g = g.mul(&if swap { b.swap() } else { b }, &t);
        }
        match mult_cluster(&Germ::rational(g).unwrap()) {
            Ok(k) => prop_assert!(k.is_consistent()),
            Err(harbourne::Error::NonReducedGerm(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn local_degree_is_multiplicative_under_composition(a in 1u32..4, b in 1u32..4, kind in 0u8..3) {
        // finite maps f followed by the monomial map g = (x^a, y^b)
        let f = match kind {
            0 => (BiPoly::from_int_terms(&[(1, 0, 1)]), BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)])),
            1 => (BiPoly::from_int_terms(&[(2, 0, 1)]), BiPoly::from_int_terms(&[(0, 1, 1), (2, 0, 1)])),
            _ => (BiPoly::from_int_terms(&[(1, 0, 1), (0, 1, 1)]), BiPoly::from_int_terms(&[(0, 3, 1)])),
        };
        let fm = LocalMap::rational(f.0.clone(), f.1.clone()).unwrap();
        let g = LocalMap::monomial(a, b);
        let (h1, h2) = g.compose_after(&f.0, &f.1);
        let gf = LocalMap::rational(h1, h2).unwrap();
        prop_assert_eq!(local_degree(&gf).unwrap(), local_degree(&g).unwrap() * local_degree(&fm).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pullback_is_multiplicative(k in consistent(3), a in 1u32..=3, b in 1u32..=3, seed in 0u64..4) {
        prop_assume!(k.weight(0) >= 1 && k.weights().iter().all(|&w| w <= 3));
        let f = LocalMap::monomial(a, b);
        let pk = pullback_cluster(&f, &k, seed).unwrap();
        let deg = (a * b) as i64;
        prop_assert_eq!(pk.self_intersection(), deg * k.self_intersection());
        prop_assert!(pk.point_count() as i64 <= deg * k.point_count() as i64);
        if a.min(b) > 1 {
            prop_assert!((pk.point_count() as i64) < deg * k.point_count() as i64);
        }
    }

    #[test]
    fn kummer_scales_degree_and_square(which in 0usize..4, k in 2u32..6) {
        let c: PlaneConfig = match which {
            0 => three_concurrent_lines(),
            1 => wiman(),
            2 => wiman_vertex_triples(),
            _ => fermat(2, 0).unwrap(),
        };
        let s = KummerSpec::new(k).unwrap();
        let p = kummer_pullback(&c, s, 0).unwrap();
        prop_assert_eq!(p.degree(), k as u64 * c.degree());
        prop_assert_eq!(p.self_intersection(), (k * k) as i64 * c.self_intersection());
        let check = pullback_theorem_check(&c, s, 0).unwrap();
        prop_assert!(check.lhs <= check.rhs);
        prop_assert!(check.holds);
    }
}
