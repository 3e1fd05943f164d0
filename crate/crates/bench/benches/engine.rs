use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use multispread_core::diffusion::Engine;
use multispread_core::{
    LayerSelector, MultiplexNetwork, NetworkBuilder, Recording, SimulationConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two random layers with about `degree` neighbours per node.
fn random_multiplex(n: usize, degree: f64, seed: u64) -> MultiplexNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = NetworkBuilder::new();
    for i in 0..n {
        b.add_node(&format!("w{i}"));
    }
    let p = degree / n as f64;
    for name in ["phonological", "semantic"] {
        let l = b.add_layer(name).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    b.add_edge(l, &format!("w{u}"), &format!("w{v}"), 1.0)
                        .unwrap();
                }
            }
        }
    }
    b.build()
}

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for n in [500, 4000] {
        let net = random_multiplex(n, 6.0, 7);
        let cfg = SimulationConfig::new(0.5, 1).with_seed("w0", LayerSelector::All, 1.0);
        let engine = Engine::new(&net, &cfg).unwrap();
        let state = engine.seed().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &state, |b, s| {
            b.iter(|| engine.step(black_box(s)))
        });
    }
    group.finish();
}

fn run(c: &mut Criterion) {
    let net = random_multiplex(4000, 6.0, 7);
    let cfg = SimulationConfig::new(0.5, 50)
        .with_seed("w0", LayerSelector::Named("phonological".into()), 1.0)
        .with_seed("w1", LayerSelector::Named("phonological".into()), 1.0);
    let engine = Engine::new(&net, &cfg).unwrap();
    let targets = Recording::Nodes(vec![net.node("w2").unwrap()]);
    c.bench_function("run_4000x2_T50", |b| {
        b.iter(|| engine.run(black_box(&targets)).unwrap())
    });
}

criterion_group!(benches, step, run);
criterion_main!(benches);
