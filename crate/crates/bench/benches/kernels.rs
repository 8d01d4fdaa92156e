use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qtele_core::resource::random_density;
use qtele_core::{
    ent_fidelity_lambda, haar_pure, haar_unitary, hs_mixed, simulate_protocol, standard_protocol,
    uhlmann_fidelity, RngState, TeleportChannel,
};

fn channel_apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("channel_apply");
    for d in [2usize, 3, 4, 8] {
        let ch = TeleportChannel::from_resource(&random_density(d, 1).unwrap()).unwrap();
        let rho = hs_mixed(d, &mut RngState::new(2, 0).rng()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| black_box(ch.apply(&rho).unwrap()))
        });
    }
    group.finish();
}

fn lambda_fidelity(c: &mut Criterion) {
    let mut group = c.benchmark_group("ent_fidelity_lambda");
    for d in [2usize, 3, 4] {
        let ch = TeleportChannel::from_resource(&random_density(d, 1).unwrap()).unwrap();
        let phi = haar_pure(d * d, &mut RngState::new(3, 0).rng()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| black_box(ent_fidelity_lambda(&phi, &ch).unwrap()))
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_unitary");
    for d in [2usize, 4, 8] {
        let mut rng = RngState::new(4, 0).rng();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| black_box(haar_unitary(d, &mut rng).unwrap()))
        });
    }
    group.finish();
}

fn protocol(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_protocol");
    for d in [2usize, 3] {
        let chi = random_density(d, 5).unwrap();
        let rho = hs_mixed(d, &mut RngState::new(6, 0).rng()).unwrap();
        let proto = standard_protocol(d).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| black_box(simulate_protocol(&chi, &rho, &proto).unwrap()))
        });
    }
    group.finish();
}

fn fidelity(c: &mut Criterion) {
    let mut rng = RngState::new(7, 0).rng();
    let rho = hs_mixed(4, &mut rng).unwrap();
    let sigma = hs_mixed(4, &mut rng).unwrap();
    c.bench_function("uhlmann_fidelity d=4", |b| {
        b.iter(|| black_box(uhlmann_fidelity(&rho, &sigma).unwrap()))
    });
}

criterion_group!(benches, channel_apply, lambda_fidelity, sampling, protocol, fidelity);
criterion_main!(benches);
