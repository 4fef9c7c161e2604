use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use wsat_core::bounds::gamma_subgraph;
use wsat_core::canonical::canonical_key;
use wsat_core::constructions::clique;
use wsat_core::count_polymatroid::{CountParams, CountPolymatroid};
use wsat_core::rhosat::{solve_rhosat, SolveMode};
use wsat_core::wsat::{closure, wsat_exact, Family, WsatOptions};
use wsat_core::{Caps, Hypergraph};

fn kernels(c: &mut Criterion) {
    let caps = Caps::default();
    let k3 = clique(3, 2);
    let fam = Family::single(&k3).unwrap();

    let star = Hypergraph::new(12, 2, (1..12).map(|v| vec![0, v])).unwrap();
    c.bench_function("closure star n=12 K3", |b| {
        b.iter(|| closure(black_box(&star), &fam, &caps).unwrap())
    });

    let k4 = Family::single(&clique(4, 2)).unwrap();
    c.bench_function("wsat_exact n=6 K4", |b| {
        b.iter(|| wsat_exact(6, &k4, &WsatOptions::default(), &caps).unwrap())
    });

    let g = clique(7, 2);
    c.bench_function("canonical_key K7", |b| b.iter(|| canonical_key(7, black_box(g.edges()))));

    let k5 = clique(5, 2);
    c.bench_function("gamma_subgraph K5", |b| b.iter(|| gamma_subgraph(black_box(&k5), 2, &caps).unwrap()));

    let params = CountParams::from_integers(2, &[-3, 2, 0]).unwrap();
    let poly = CountPolymatroid::new(5, params, &caps).unwrap();
    c.bench_function("count polymatroid subset table K5", |b| {
        b.iter(|| poly.rho_all_subsets(black_box(k5.edges())).unwrap())
    });

    c.bench_function("rhosat exact n=5 K3", |b| {
        b.iter(|| solve_rhosat(&k3, 5, SolveMode::Exact, &caps).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = kernels
}
criterion_main!(benches);
