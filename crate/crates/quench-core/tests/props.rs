//! Property-based invariants over randomized couplings, states, and times.

use proptest::prelude::*;
use quench_core::evolve::{build_hamiltonian, evolve, Model};
use quench_core::ising::{commuting_bound, ising_correlation, ising_magnetization};
use quench_core::{C64, CouplingMatrix};

fn arb_alpha() -> impl Strategy<Value = f64> {
    0.1f64..3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_law_couplings_decrease_with_separation(n in 3usize..12, alpha in arb_alpha()) {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        for r in 2..n {
            prop_assert!(j.separation_mean(r) < j.separation_mean(r - 1));
        }
    }

    #[test]
    fn shape_fit_recovers_generating_exponent(n in 4usize..12, alpha in arb_alpha(), j0 in 0.2f64..3.0) {
        let j = CouplingMatrix::power_law(n, j0, alpha).unwrap();
        let fit = quench_core::coupling::fit_power_law(&j).unwrap();
        prop_assert!((fit.alpha_hat - alpha).abs() < 1e-8);
        prop_assert!((fit.j0_hat - j0).abs() / j0 < 1e-8);
    }

    #[test]
    fn ising_correlation_is_even_in_time(n in 2usize..7, alpha in arb_alpha(), t in 0.0f64..3.0) {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        for i in 0..n {
            for jj in (i + 1)..n {
                let plus = ising_correlation(&j, i, jj, t).unwrap();
                let minus = ising_correlation(&j, i, jj, -t).unwrap();
                prop_assert!((plus - minus).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ising_correlation_bounded_by_commuting_cut(n in 2usize..7, alpha in arb_alpha(), t in 0.0f64..2.0) {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        for i in 0..n {
            for jj in (i + 1)..n {
                let c = ising_correlation(&j, i, jj, t).unwrap().abs();
                let b = commuting_bound(&j, i, jj, t).unwrap();
                prop_assert!(c <= b + 1e-12);
            }
        }
    }

    #[test]
    fn magnetization_stays_in_range(n in 2usize..8, alpha in arb_alpha(), t in 0.0f64..5.0) {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        for i in 0..n {
            let m = ising_magnetization(&j, i, t).unwrap();
            prop_assert!((-1.0..=1.0).contains(&m));
        }
    }
}

proptest! {
    // State-vector cases cost more per case.
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn krylov_preserves_norm_and_hermiticity(
        n in 2usize..6,
        alpha in arb_alpha(),
        t in 0.01f64..2.0,
        model_ix in 0usize..2,
    ) {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        let model = [Model::Ising, Model::Xy][model_ix];
        let h = build_hamiltonian(&j, model, 0.0).unwrap();
        let traj = evolve(&h, &[0.0, t]).unwrap();
        prop_assert!((traj.norms[1] - 1.0).abs() < 1e-9);

        // ⟨φ|Hψ⟩ = ⟨Hφ|ψ⟩ for the final state against a shifted copy.
        let dim = 1usize << n;
        let psi = &traj.states[1];
        let mut phi = psi.clone();
        phi.rotate_right(1);
        let mut hpsi = vec![C64::new(0.0, 0.0); dim];
        let mut hphi = vec![C64::new(0.0, 0.0); dim];
        h.apply(psi, &mut hpsi);
        h.apply(&phi, &mut hphi);
        let lhs: C64 = phi.iter().zip(&hpsi).map(|(a, b)| a.conj() * b).sum();
        let rhs: C64 = hphi.iter().zip(psi).map(|(a, b)| a.conj() * b).sum();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn ising_state_vector_agrees_with_closed_form(n in 2usize..6, alpha in arb_alpha(), t in 0.0f64..1.5) {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        let h = build_hamiltonian(&j, Model::Ising, 0.0).unwrap();
        let times = if t > 0.0 { vec![0.0, t] } else { vec![0.0] };
        let field = quench_core::evolve::correlation_field_evolved(&h, &times).unwrap();
        let k = times.len() - 1;
        for i in 0..n {
            for jj in (i + 1)..n {
                let exact = ising_correlation(&j, i, jj, times[k]).unwrap();
                prop_assert!((field.get(k, i, jj) - exact).abs() < 1e-8);
            }
        }
    }
}
