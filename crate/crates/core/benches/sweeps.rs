use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use harbourne::cluster::WeightedCluster;
use harbourne::exec::{self, Mode};
use harbourne::field::BiPoly;
use harbourne::local::{mult_cluster, Germ, LocalMap, PreparedCluster};
use harbourne::plane::sweeps::{fermat_sweep, klein_sweep, theorem_b_sweep};

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweeps");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("theorem_b_2_50", name), &mode, |b, &m| {
            b.iter(|| theorem_b_sweep((2..=50).collect(), m, 0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("fermat_2_10", name), &mode, |b, &m| {
            b.iter(|| fermat_sweep((2..=10).collect(), m, 0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("klein_2_8", name), &mode, |b, &m| b.iter(|| klein_sweep(8, m).unwrap()));
    }
    g.finish();
}

/// Chains and a satellite cluster pulled back under every `(x^a, y^b)`,
/// `a ≤ b ≤ 3`.
fn property_grid(c: &mut Criterion) {
    let clusters = vec![
        WeightedCluster::single(2),
        WeightedCluster::free_chain(&[2, 1]).unwrap(),
        WeightedCluster::free_chain(&[2, 2, 1]).unwrap(),
        WeightedCluster::free_chain(&[3, 1, 1]).unwrap(),
    ];
    let maps: Vec<(u32, u32)> = (1..=3).flat_map(|a| (a..=3).map(move |b| (a, b))).collect();
    let mut g = c.benchmark_group("property_grid");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("pullbacks", name), &mode, |b, &m| {
            b.iter(|| {
                exec::try_map(m, clusters.clone(), |k| {
                    let p = PreparedCluster::new(&k, 0)?;
                    maps.iter().map(|&(a, b)| p.pull(&LocalMap::monomial(a, b))).collect::<Result<Vec<_>, _>>()
                })
                .unwrap()
            })
        });
    }
    g.finish();
}

fn germ_batch() -> Vec<Germ> {
    let t = harbourne::field::Tower::rational();
    let mut out = Vec::new();
    for c in 1..=4 {
        let cusp = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -c)]);
        let line = BiPoly::from_int_terms(&[(0, 1, 1), (1, 0, c)]);
        let tac = BiPoly::from_int_terms(&[(0, 2, 1), (4, 0, -c * c)]);
        for g in [cusp.mul(&line, &t), tac.mul(&line, &t), cusp.mul(&tac.swap(), &t), cusp.clone()] {
            out.push(Germ::rational(g).unwrap());
        }
    }
    out
}

fn germ_batches(c: &mut Criterion) {
    let germs = germ_batch();
    let mut g = c.benchmark_group("germ_batches");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("mult_cluster", name), &mode, |b, &m| {
            b.iter(|| exec::try_map(m, black_box(germs.clone()), |g| mult_cluster(&g)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps, property_grid, germ_batches);
criterion_main!(benches);
