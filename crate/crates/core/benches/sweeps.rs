use capregion::corpus::{gen_corpus, CorpusSpec};
use capregion::gf::Field;
use capregion::lincode::WeightTable;
use capregion::network::fixtures;
use capregion::rational::{int, ratio};
use capregion::reconstruct::sample_rays_2d;
use capregion::routing::{build_routing_polytope, GkConfig};
use capregion::Exec;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ray_sweep(c: &mut Criterion) {
    let poly = build_routing_polytope(&fixtures::butterfly(), Exec::Sequential).unwrap();
    let mut g = c.benchmark_group("ray_sweep");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 64), &exec, |b, &exec| {
            b.iter(|| sample_rays_2d(&poly, black_box(64), exec).unwrap())
        });
    }
    g.finish();
}

fn weight_table(c: &mut Criterion) {
    let net = fixtures::butterfly();
    let mut g = c.benchmark_group("weight_table");
    for q in [2u32, 3] {
        let f = Field::new(q).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, q), &exec, |b, &exec| {
                b.iter(|| WeightTable::build(black_box(&net), f, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn corpus_gk(c: &mut Criterion) {
    let nets = gen_corpus(&CorpusSpec {
        count: 8,
        ..CorpusSpec::default()
    })
    .unwrap();
    let polys: Vec<_> = nets
        .iter()
        .map(|n| build_routing_polytope(n, Exec::Sequential).unwrap())
        .collect();
    let cfg = GkConfig::with_omega(ratio(1, 4));
    let q = [int(1), int(1)];
    let mut g = c.benchmark_group("corpus_gk");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| exec.map(&polys, |p| p.ray_gk(&q, &cfg).unwrap().lambda))
        });
    }
    g.finish();
}

criterion_group!(benches, ray_sweep, weight_table, corpus_gk);
criterion_main!(benches);
