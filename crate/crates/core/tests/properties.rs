//! Property tests for the linear-algebra substrate and entropy invariants,
//! driven by seeded random states so every failure is reproducible.

use num_complex::Complex64;
use proptest::prelude::*;

use entroq::{
    classical_correlation, conditional_entropy, eigh, post_measurement_state, purify,
    quantum_discord, sample_haar_pure_stream, sample_random_mixed_stream, tensor,
    uncertainty_report, von_neumann_entropy, ComplexMatrix, DensityMatrix, HilbertSpace,
    ObservablePair, PureState,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Deterministic pseudo-random Hermitian matrix from a seed.
fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0xdeadbeef);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let raw = ComplexMatrix::from_fn(dim, dim, |_, _| c(next(), next()));
    raw.add(&raw.adjoint()).scale(0.5)
}

/// Haar-ish random unitary: orthonormalized Gaussian columns.
fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for k in 0..dim {
        let g = sample_haar_pure_stream(&[dim], seed, k as u64).unwrap();
        let mut v: Vec<Complex64> = g.amplitudes().to_vec();
        for prev in &cols {
            let overlap: Complex64 = prev.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, pi) in v.iter_mut().zip(prev.iter()) {
                *vi -= overlap * pi;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigh_reconstructs_random_hermitians(seed in 0u64..1_000_000, dim in 2usize..=16) {
        let h = random_hermitian(dim, seed);
        let e = eigh(&h).unwrap();
        let mut diag = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            diag[(i, i)] = c(e.values[i], 0.0);
        }
        let back = e.vectors.mul(&diag).mul(&e.vectors.adjoint());
        prop_assert!(back.max_abs_diff(&h) < 1e-8);
        let gram = e.vectors.adjoint().mul(&e.vectors);
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity(seed in 0u64..1_000_000) {
        let rho = sample_random_mixed_stream(&[2, 2, 2], 6, seed, 0).unwrap();
        for keep in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
            let reduced = rho.partial_trace(&keep).unwrap();
            prop_assert!((reduced.matrix().trace().re - 1.0).abs() < 1e-10);
            // Construction re-validates positivity; the clipped spectrum is
            // nonnegative by contract.
            prop_assert!(reduced.spectrum().iter().all(|&l| l >= 0.0));
        }
    }

    #[test]
    fn tensor_then_partial_trace_is_identity(seed in 0u64..1_000_000) {
        let a = sample_random_mixed_stream(&[2], 2, seed, 0).unwrap();
        let b = sample_random_mixed_stream(&[2], 2, seed, 1).unwrap();
        let joint = DensityMatrix::new(
            HilbertSpace::qubits(2).unwrap(),
            tensor(a.matrix(), b.matrix()),
        )
        .unwrap();
        let back = joint.partial_trace(&[0]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(a.matrix()) < 1e-10);
    }

    #[test]
    fn purification_round_trip(seed in 0u64..1_000_000, rank in 1usize..=4) {
        let rho = sample_random_mixed_stream(&[2, 2], rank, seed, 0).unwrap();
        let psi = purify(&rho);
        prop_assert_eq!(psi.space().dims().len(), 3);
        let back = psi.partial_trace(&[0, 1]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-8);
    }

    #[test]
    fn entropy_bounds_hold(seed in 0u64..1_000_000, rank in 1usize..=8) {
        let rho = sample_random_mixed_stream(&[2, 2, 2], rank, seed, 0).unwrap();
        let s = von_neumann_entropy(&rho);
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= 3.0 + 1e-9);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in 0u64..1_000_000) {
        let rho = sample_random_mixed_stream(&[2, 2], 4, seed, 0).unwrap();
        let u = random_unitary(4, seed.wrapping_add(1));
        let rotated = u.mul(rho.matrix()).mul(&u.adjoint());
        let rotated = DensityMatrix::new(HilbertSpace::qubits(2).unwrap(), rotated).unwrap();
        prop_assert!((von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs() < 1e-9);
    }

    #[test]
    fn araki_lieb_on_random_states(seed in 0u64..1_000_000, rank in 1usize..=4) {
        let rho = sample_random_mixed_stream(&[2, 2], rank, seed, 0).unwrap();
        let s_a = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap());
        let s_b = von_neumann_entropy(&rho.partial_trace(&[1]).unwrap());
        let s_ab = von_neumann_entropy(&rho);
        prop_assert!(s_ab >= (s_a - s_b).abs() - 1e-9);
    }

    #[test]
    fn dephasing_kills_coherences_and_keeps_trace(seed in 0u64..1_000_000) {
        let rho = sample_random_mixed_stream(&[2, 2], 4, seed, 0).unwrap();
        let obs = ObservablePair::pauli_zx();
        let dephased = post_measurement_state(&rho, obs.basis_r()).unwrap();
        prop_assert!((dephased.matrix().trace().re - 1.0).abs() < 1e-10);
        // Coherences between distinct outcomes vanish: project back and
        // compare against the dephased state.
        let again = post_measurement_state(&dephased, obs.basis_r()).unwrap();
        prop_assert!(again.matrix().max_abs_diff(dephased.matrix()) < 1e-10);
        // Off-diagonal blocks in the measurement eigenbasis are zero; check
        // through the X-basis representation of a 2x2 block sum.
        let plus = &obs.basis_r()[0];
        let minus = &obs.basis_r()[1];
        for bi in 0..2usize {
            for bj in 0..2usize {
                let mut cross = c(0.0, 0.0);
                for (ai, a) in plus.iter().enumerate() {
                    for (aj, b) in minus.iter().enumerate() {
                        cross += a.conj()
                            * dephased.matrix()[(ai * 2 + bi, aj * 2 + bj)]
                            * b;
                    }
                }
                prop_assert!(cross.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn conditional_entropy_stays_in_range(seed in 0u64..1_000_000, rank in 1usize..=4) {
        let rho = sample_random_mixed_stream(&[2, 2], rank, seed, 0).unwrap();
        let s = conditional_entropy(&rho, &[0], &[1]).unwrap();
        let s_a = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap());
        prop_assert!(s >= -s_a - 1e-9);
        prop_assert!(s <= s_a + 1e-9);
    }

    #[test]
    fn uncertainty_relation_on_random_two_qubit_states(seed in 0u64..1_000_000) {
        let obs = ObservablePair::pauli_zx();
        let pure = sample_haar_pure_stream(&[2, 2], seed, 0).unwrap().density();
        prop_assert!(uncertainty_report(&pure, &obs).unwrap().slack >= -1e-7);
        let mixed = sample_random_mixed_stream(&[2, 2], 4, seed, 1).unwrap();
        prop_assert!(uncertainty_report(&mixed, &obs).unwrap().slack >= -1e-7);
    }

    #[test]
    fn discord_and_classical_correlation_are_nonnegative(seed in 0u64..1_000_000) {
        let rho = sample_random_mixed_stream(&[2, 2], 2, seed, 0).unwrap();
        let j = classical_correlation(&rho).unwrap();
        let d = quantum_discord(&rho).unwrap();
        prop_assert!(j.value >= -2e-3);
        prop_assert!(d.value >= -2e-3);
        // Refinement never worsens the direction of the objective.
        prop_assert!(j.value >= j.grid_value - 1e-12);
        prop_assert!(d.value <= d.grid_value + 1e-12);
    }

    #[test]
    fn pure_tripartite_conditional_entropies_balance(seed in 0u64..1_000_000) {
        let psi = sample_haar_pure_stream(&[2, 2, 2], seed, 0).unwrap();
        let rho = psi.density();
        let s_ab = conditional_entropy(&rho, &[0], &[1]).unwrap();
        let s_ac = conditional_entropy(&rho, &[0], &[2]).unwrap();
        prop_assert!((s_ab + s_ac).abs() < 1e-9);
    }

    #[test]
    fn phase_convention_is_idempotent(seed in 0u64..1_000_000) {
        let psi = sample_haar_pure_stream(&[2, 2], seed, 0).unwrap();
        let again = PureState::new(psi.space().clone(), psi.amplitudes().to_vec()).unwrap();
        prop_assert_eq!(psi.amplitudes(), again.amplitudes());
    }
}
