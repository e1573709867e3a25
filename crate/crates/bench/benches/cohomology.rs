use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use cupcone::cyclo::{irregular_indices, synthetic_table_csv, validate_pairing_table, PairingTable};
use cupcone::groupcoh::{cochain_complex, FiniteGroup, GModule, DEFAULT_MAX_CELLS};
use cupcone::harness::{run_suites, RunConfig, SuiteName};
use cupcone::site::instances::two_point_z3;
use cupcone::FinAbModule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn group_cohomology(c: &mut Criterion) {
    let g = Arc::new(FiniteGroup::symmetric3());
    let m = GModule::trivial(g, FinAbModule::new(vec![3, 9]).unwrap());
    c.bench_function("H^0..2(S3, Z/3 + Z/9)", |b| {
        b.iter(|| {
            let cx = cochain_complex(&m, 3, DEFAULT_MAX_CELLS).unwrap();
            (0..3).map(|i| cx.cohomology(i).unwrap().module().order()).product::<u128>()
        })
    });
}

fn compact(c: &mut Criterion) {
    let site = two_point_z3();
    let r1 = site.r1();
    c.bench_function("H_c two-point Z/3", |b| b.iter(|| site.compact_complex(&r1, 4, DEFAULT_MAX_CELLS).unwrap().invariants(3).unwrap()));
}

fn suites(c: &mut Criterion) {
    let mut cfg = RunConfig::new(1, vec![SuiteName::Cup, SuiteName::Dual], 4);
    cfg.pool.groups = vec!["Z/3".into(), "Z2xZ2".into()];
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("cup + dual, 4 trials", |b| b.iter(|| run_suites(&cfg).unwrap().hash));
    g.finish();
}

fn cyclo(c: &mut Criterion) {
    c.bench_function("irregular 293", |b| b.iter(|| irregular_indices(293).unwrap()));
    let csv = synthetic_table_csv(100, &mut ChaCha8Rng::seed_from_u64(0));
    let t = PairingTable::from_csv(csv.as_bytes()).unwrap();
    c.bench_function("validate 100 rows", |b| b.iter(|| validate_pairing_table(&t).hash));
}

criterion_group!(benches, group_cohomology, compact, suites, cyclo);
criterion_main!(benches);
