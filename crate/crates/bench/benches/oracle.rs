use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tingdof::{
    gdof_bounds_ibc, oracle::DEFAULT_BUDGET, oracle_max_sum, DecodingOrder, GridSpec, Power,
    Rational, Scalar, Side, UserMap,
};
use tingdof_bench::two_cell;

fn strategy_bounds(c: &mut Criterion) {
    let net = two_cell::<Rational>();
    let order = DecodingOrder::identity(net.shape());
    let power = UserMap::filled(net.shape(), Power::Level(Rational::from_ratio(-1, 5)));
    c.bench_function("gdof_bounds_ibc/exact", |b| {
        b.iter(|| gdof_bounds_ibc(black_box(&net), black_box(&order), black_box(&power)).unwrap())
    });
}

fn grid_search(c: &mut Criterion) {
    let net = two_cell::<f64>();
    let grid = GridSpec::new(0.1, net.max_strength() + 1.0).unwrap();
    let ones = UserMap::filled(net.shape(), 1.0);
    let mut group = c.benchmark_group("oracle_max_sum");
    group.sample_size(10);
    for side in [Side::Ibc, Side::Imac] {
        group.bench_function(format!("{side}/step0.1"), |b| {
            b.iter(|| oracle_max_sum(&net, side, &grid, &ones, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, strategy_bounds, grid_search);
criterion_main!(benches);
