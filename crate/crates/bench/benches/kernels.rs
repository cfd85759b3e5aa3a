use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use critlab_core::rational::big;
use critlab_core::reduction::{detect_sturmian_reduction, kemperman_reduce, kneser_reduce, DEFAULT_STURMIAN_BUDGET};
use critlab_core::sweep::{count_pairs, MaskGroup};
use critlab_core::torus::{arc_sumset, is_stable_pair, twisted_product, ArcSet, TwistedSet};
use critlab_core::{parse_group, GroupRef, GroupSubset, PairTag};

fn group(spec: &str) -> GroupRef {
    Arc::new(parse_group(spec).unwrap())
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("pair_sweep");
    g.sample_size(10);
    for spec in ["Z8", "D4", "Z2xZ5"] {
        let grp = group(spec);
        let n = grp.order();
        g.bench_with_input(BenchmarkId::from_parameter(spec), &grp, |b, grp| {
            b.iter(|| {
                count_pairs(grp, |a, bb, ab| {
                    PairTag::from_counts(a.count_ones() as usize, bb.count_ones() as usize, ab.count_ones() as usize, n)
                        == PairTag::CriticalSum
                })
                .unwrap()
            })
        });
    }
    g.finish();

    let grp = group("A4");
    let mg = MaskGroup::new(&grp).unwrap();
    c.bench_function("products_with_all/A4", |b| b.iter(|| mg.products_with_all(black_box(0b1011_0001_0110))));
}

fn reductions(c: &mut Criterion) {
    let z12 = group("Z12");
    let a = GroupSubset::parse(z12.clone(), "0,1,4,5,8,9").unwrap();
    let b = GroupSubset::parse(z12.clone(), "0,4").unwrap();
    c.bench_function("kneser_reduce/Z12", |bn| bn.iter(|| kneser_reduce(&a, &b).unwrap()));

    let d6 = group("D6");
    let a = GroupSubset::parse(d6.clone(), "(0,0),(0,1),(3,0),(3,1)").unwrap();
    let b = GroupSubset::parse(d6.clone(), "(0,0),(3,0)").unwrap();
    c.bench_function("kemperman_reduce/D6", |bn| bn.iter(|| kemperman_reduce(&a, &b).unwrap()));

    let z2z6 = group("Z2xZ6");
    let a = GroupSubset::parse(z2z6.clone(), "(0,0),(0,1),(1,3),(1,4)").unwrap();
    let b = GroupSubset::parse(z2z6.clone(), "(0,0),(0,3),(1,0),(1,3)").unwrap();
    c.bench_function("detect_sturmian/Z2xZ6", |bn| {
        bn.iter(|| detect_sturmian_reduction(&a, &b, DEFAULT_STURMIAN_BUDGET).unwrap())
    });
}

fn circle(c: &mut Criterion) {
    let i = ArcSet::interval(big(0, 1), big(1, 7))
        .unwrap()
        .union(&ArcSet::interval(big(1, 3), big(5, 11)).unwrap())
        .unwrap();
    let j = ArcSet::interval(big(2, 9), big(3, 8)).unwrap();
    c.bench_function("arc_sumset", |b| b.iter(|| arc_sumset(&i, &j).unwrap()));
    c.bench_function("is_stable_pair", |b| b.iter(|| is_stable_pair(&i, &j).unwrap()));
    let ti = TwistedSet::tilde(&ArcSet::symmetric(&big(1, 8)).unwrap());
    let tj = TwistedSet::tilde(&ArcSet::symmetric(&big(1, 5)).unwrap());
    c.bench_function("twisted_product", |b| b.iter(|| twisted_product(&ti, &tj).unwrap()));
}

criterion_group!(benches, sweeps, reductions, circle);
criterion_main!(benches);
