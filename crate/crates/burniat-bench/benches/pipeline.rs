//! Benchmarks for the heavy parts of the pipeline: group generation, ray
//! orbit enumeration, the rank-3 fan completion, and the full suite.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use burniat_core::cases::{build_case_fan, case_rays, case_spec, rank3_seed_cones, relabeling_group, CaseId};
use burniat_core::fans::{complete_from_seed, RayOrbits};
use burniat_core::groups::gamma6;
use burniat_core::verify::run_verification;

fn bench_group_generation(c: &mut Criterion) {
    c.bench_function("generate_relabeling_group", |b| {
        b.iter(|| black_box(gamma6().order()))
    });
}

fn bench_ray_orbits(c: &mut Criterion) {
    let group = gamma6();
    c.bench_function("enumerate_42_ray_orbits", |b| {
        b.iter(|| black_box(RayOrbits::new(&group).all_rays().len()))
    });
}

fn bench_rank3_completion(c: &mut Criterion) {
    let spec = case_spec(CaseId::Deg5);
    let rays = case_rays(&spec).unwrap();
    let group = relabeling_group(CaseId::Deg5).unwrap().group;
    let seeds = rank3_seed_cones();
    c.bench_function("complete_degree_5_fan", |b| {
        b.iter(|| {
            let fan = complete_from_seed(&spec.sublattice, &rays, &seeds, &group).unwrap();
            black_box(fan.max_cones.len())
        })
    });
}

fn bench_case_fans(c: &mut Criterion) {
    c.bench_function("build_all_case_fans", |b| {
        b.iter(|| {
            for id in CaseId::ALL {
                black_box(build_case_fan(id).unwrap().max_cones.len());
            }
        })
    });
}

fn bench_full_verification(c: &mut Criterion) {
    c.bench_function("full_verification_suite", |b| {
        b.iter(|| black_box(run_verification(None, None).unwrap().summary.pass))
    });
}

criterion_group!(
    benches,
    bench_group_generation,
    bench_ray_orbits,
    bench_rank3_completion,
    bench_case_fans,
    bench_full_verification
);
criterion_main!(benches);
