use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jackson_core::nevanlinna::{sweep, MeroModel, RadialGrid};
use jackson_core::qcore::QParam;
use jackson_core::qspecial::etilde_q;
use jackson_core::Exec;
use std::hint::black_box;

fn models() -> Vec<(&'static str, MeroModel)> {
    let qp = QParam::real(2.0).unwrap();
    vec![
        ("etilde_product", MeroModel::etilde_product(qp).unwrap()),
        (
            "etilde_series",
            MeroModel::series(etilde_q(&qp, 60)).unwrap().with_q(qp),
        ),
    ]
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    for (name, model) in models() {
        for nodes in [1024, 8192] {
            let grid = RadialGrid::log_spaced(10.0, 1e4, 13, nodes).unwrap();
            for exec in [Exec::Sequential, Exec::Parallel] {
                let g = grid.clone().with_exec(exec);
                let id = BenchmarkId::new(format!("{name}/{exec:?}"), nodes);
                group.bench_with_input(id, &g, |b, g| b.iter(|| sweep(black_box(&model), g).unwrap()));
            }
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
