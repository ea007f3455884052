use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use noisyvqe::adapt::{pool_gradients, pool_gradients_fd};
use noisyvqe::ansatz::{build_qubit_pool, reference_excitations, Pool, PoolKind};
use noisyvqe::operators::{jordan_wigner, number_operator, Pauli};
use noisyvqe::sim::apply_element_exact;
use noisyvqe::{bundled, NoiseModel, QuantumState};

// Independent count: X/Y strings of weight 2 or 4 with an odd number of Ys.
fn parity_enumeration(n: usize) -> usize {
    let mut count = 0;
    for code in 0..3usize.pow(n as u32) {
        let (mut c, mut weight, mut ys) = (code, 0, 0);
        for _ in 0..n {
            match c % 3 {
                1 => weight += 1,
                2 => {
                    weight += 1;
                    ys += 1
                }
                _ => {}
            }
            c /= 3;
        }
        if (weight == 2 || weight == 4) && ys % 2 == 1 {
            count += 1;
        }
    }
    count
}

#[test]
fn qubit_pool_matches_parity_enumeration() {
    for n in [4, 6, 8] {
        let pool = build_qubit_pool(n).unwrap();
        assert_eq!(pool.len(), parity_enumeration(n), "n = {n}");
        for e in pool.elements() {
            let (p, _) = e.generator().terms().next().unwrap();
            assert!(matches!(p.weight(), 2 | 4));
            assert_eq!(p.y_count() % 2, 1);
            assert!(p.factors().iter().all(|(_, f)| *f != Pauli::Z));
        }
    }
    assert_eq!(parity_enumeration(4), 20);
}

#[test]
fn excitation_pools_conserve_particle_number() {
    let n = 8;
    let number = jordan_wigner(&number_operator(n), n).unwrap();
    for kind in [PoolKind::Fermionic, PoolKind::Qeb] {
        let pool = Pool::build(kind, n, 4).unwrap();
        assert_eq!(pool.len(), reference_excitations(n, 4).unwrap().len());
        for e in pool.elements() {
            assert!(e.generator().is_anti_hermitian(1e-12));
            let c = e.generator().commutator(&number).unwrap();
            assert!(c.is_empty(), "{} changes the particle number", e.label());
        }
    }
}

fn random_reachable_state(rng: &mut ChaCha8Rng, problem: &noisyvqe::MolecularProblem, pool: &Pool) -> QuantumState {
    let mut s = QuantumState::basis_vector(problem.n_qubits, problem.reference.bits).unwrap();
    for _ in 0..4 {
        let e = &pool.elements()[rng.random_range(0..pool.len())];
        apply_element_exact(&mut s, e, rng.random::<f64>() - 0.5).unwrap();
    }
    s
}

#[test]
fn commutator_gradients_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for problem in [bundled::h2(), bundled::h4()] {
        for kind in [PoolKind::Fermionic, PoolKind::Qeb, PoolKind::QubitPauli] {
            let pool = Pool::build(kind, problem.n_qubits, problem.n_electrons).unwrap();
            let state = random_reachable_state(&mut rng, &problem, &pool);
            let exact = pool_gradients(&state, &problem.hamiltonian, &pool).unwrap();
            let fd = pool_gradients_fd(&state, &problem.hamiltonian, &pool, &NoiseModel::noiseless(), 1e-4).unwrap();
            for (i, (a, b)) in exact.iter().zip(&fd).enumerate() {
                assert!((a - b).abs() < 1e-6, "{} {kind:?} element {i}: {a} vs {b}", problem.label);
            }
        }
    }
}

#[test]
fn hartree_fock_gradients_select_a_double() {
    let problem = bundled::h2();
    let state = QuantumState::basis_vector(4, problem.reference.bits).unwrap();
    for kind in [PoolKind::Fermionic, PoolKind::Qeb] {
        let pool = Pool::build(kind, 4, 2).unwrap();
        let g = pool_gradients(&state, &problem.hamiltonian, &pool).unwrap();
        // singles vanish on a Hartree-Fock reference (Brillouin)
        let (best, _) = g
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        assert!(pool.elements()[best].label().contains("d("), "{}", pool.elements()[best].label());
        assert!(g[best].abs() > 0.1);
    }
}
