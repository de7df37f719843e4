use criterion::{black_box, criterion_group, criterion_main, Criterion};
use surfcalc::automorphism::DEFAULT_NODE_BUDGET;
use surfcalc::config::{self, AdeType, CurveConfig, DEFAULT_CYCLE_BUDGET};
use surfcalc::cubic27::{self, CubicLattice};
use surfcalc::exact;
use surfcalc::fibration::{self, FibrationSpec};
use surfcalc::scroll::{self, ScrollDivisor, ScrollSpec};

fn cubic(c: &mut Criterion) {
    let l = CubicLattice::new();
    c.bench_function("enumerate_lines", |b| b.iter(|| cubic27::enumerate_lines(black_box(&l)).unwrap()));
    let s = cubic27::enumerate_lines(&l).unwrap();
    let g = cubic27::incidence_graph(&l, &s);
    c.bench_function("incidence_automorphism_order", |b| {
        b.iter(|| cubic27::incidence_automorphism_order(black_box(&g), DEFAULT_NODE_BUDGET).unwrap())
    });
}

fn configs(c: &mut Criterion) {
    let e8 = CurveConfig::dynkin(AdeType::E8);
    c.bench_function("numerical_cycle_e8", |b| b.iter(|| config::numerical_cycle(black_box(&e8)).unwrap()));
    c.bench_function("classify_singularity_e8", |b| {
        b.iter(|| config::classify_singularity(black_box(&e8), &exact::int(3), DEFAULT_CYCLE_BUDGET).unwrap())
    });
    let d10 = CurveConfig::dynkin(AdeType::D(10));
    c.bench_function("negative_definite_d10", |b| b.iter(|| black_box(&d10).is_negative_definite()));
}

fn plurigenera(c: &mut Criterion) {
    let d = fibration::delta_of(&FibrationSpec::tame_rational(&[2, 3, 7])).unwrap();
    c.bench_function("plurigenus_champion_1_to_100", |b| {
        b.iter(|| (1..=100).map(|m| fibration::plurigenus(black_box(&d), m).unwrap().lo()).sum::<u64>())
    });
    c.bench_function("p12_le1_multisets", |b| b.iter(fibration::p12_le1_multisets));
}

fn scrolls(c: &mut Criterion) {
    let f = ScrollSpec::new(vec![0, 2, 3, 6]).unwrap();
    c.bench_function("h0_scroll", |b| b.iter(|| scroll::h0(black_box(&f), ScrollDivisor::new(-5, 4))));
    c.bench_function("base_multiplicity", |b| {
        b.iter(|| scroll::base_multiplicity(black_box(&f), ScrollDivisor::new(-7, 3), 2).unwrap())
    });
    c.bench_function("base_multiplicity_oracle", |b| {
        b.iter(|| scroll::base_multiplicity_oracle(black_box(&f), ScrollDivisor::new(-7, 3), 2).unwrap())
    });
}

criterion_group!(benches, cubic, configs, plurigenera, scrolls);
criterion_main!(benches);
