use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bellcone_core::cone::dual_vrep_to_hrep;
use bellcone_core::fixtures;
use bellcone_core::scenario::{bell_cone, ns_cone};
use bellcone_core::symmetry::classify_orbits;

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(20);

    let ns2 = ns_cone(2).unwrap();
    group.bench_function("ns_cone_rays_n2", |b| {
        b.iter(|| black_box(&ns2).enumerate_rays().unwrap())
    });

    let b2_dual = dual_vrep_to_hrep(&bell_cone(2).unwrap()).unwrap();
    group.bench_function("bell_cone_facets_n2", |b| {
        b.iter(|| black_box(&b2_dual).enumerate_rays().unwrap())
    });

    group.finish();
}

fn membership(c: &mut Criterion) {
    let mut group = c.benchmark_group("membership");
    let b2 = bell_cone(2).unwrap();
    let b3 = bell_cone(3).unwrap();
    let pr = fixtures::pr_box();
    let gyni = bellcone_core::lifting::gyni_box();
    group.bench_function("pr_in_bell_cone_lp", |b| {
        b.iter(|| black_box(&b2).contains(pr.entries()).unwrap())
    });
    group.bench_function("gyni_in_bell_cone_lp", |b| {
        b.iter(|| black_box(&b3).contains(gyni.entries()).unwrap())
    });
    let ns3 = ns_cone(3).unwrap();
    group.bench_function("gyni_in_ns_cone_scan", |b| {
        b.iter(|| black_box(&ns3).contains(gyni.entries()).unwrap())
    });
    group.finish();
}

fn orbits(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbits");
    group.sample_size(20);
    let rays = ns_cone(2).unwrap().enumerate_rays().unwrap();
    group.bench_function("classify_ns2_rays", |b| {
        b.iter(|| classify_orbits(black_box(&rays), 2).unwrap())
    });
    group.finish();
}

criterion_group!(benches, enumeration, membership, orbits);
criterion_main!(benches);
