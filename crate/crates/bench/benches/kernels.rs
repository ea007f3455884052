use criterion::{criterion_group, criterion_main, Criterion};
use noisyvqe::analysis::delta_e_at;
use noisyvqe::sim::{SimOptions, HARD_DENSITY_LIMIT};
use noisyvqe::{NoiseModel, NoiseScheme, QuantumState};
use noisyvqe_bench::h4_qeb;

fn kernels(c: &mut Criterion) {
    let (problem, circuit) = h4_qeb();
    let n = problem.n_qubits;
    let mut rho = QuantumState::basis_density(n, problem.reference.bits, HARD_DENSITY_LIMIT).unwrap();
    c.bench_function("depolarizing_8q", |b| b.iter(|| rho.apply_depolarizing(3, 1e-4).unwrap()));
    c.bench_function("expectation_h4_density", |b| b.iter(|| rho.expectation(&problem.hamiltonian).unwrap()));

    let mut g = c.benchmark_group("h4_qeb_energy");
    g.sample_size(10);
    let sim = SimOptions::default();
    for scheme in [NoiseScheme::GateByGate, NoiseScheme::ElementByElement] {
        let noise = NoiseModel::new(1e-4, scheme);
        g.bench_function(scheme.as_str(), |b| {
            b.iter(|| delta_e_at(&problem, &circuit.ansatz, &circuit.params, &noise, &sim).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
