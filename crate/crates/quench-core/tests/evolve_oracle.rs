//! Krylov state-vector evolution checked against dense
//! eigendecomposition/matrix-exponential propagation of the same
//! Hamiltonians.

use nalgebra::DVector;
use num_complex::Complex64;
use quench_core::evolve::{
    build_hamiltonian, connected_correlations, correlation_field_evolved, evolve, total_sy, Model,
};
use quench_core::ising::ising_correlation_field;
use quench_core::{C64, CouplingMatrix};

fn fidelity(a: &[C64], b: &DVector<Complex64>) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        s += Complex64::new(x.re, -x.im) * y;
    }
    s.norm()
}

#[test]
fn xy_states_match_ed() {
    let n = 6;
    let j = CouplingMatrix::power_law(n, 1.0, 1.19).unwrap();
    let h = build_hamiltonian(&j, Model::Xy, 0.0).unwrap();
    let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.25).collect();
    let traj = evolve(&h, &times).unwrap();
    let hd = spin_ed::dense_h_xy(j.rows(), n);
    for (k, &t) in times.iter().enumerate() {
        let psi_ed = spin_ed::propagator_real(&hd, t) * spin_ed::all_down_state(n);
        let f = fidelity(&traj.states[k], &psi_ed);
        assert!(f >= 1.0 - 1e-9, "t = {t}: fidelity {f}");
    }
    let field = connected_correlations(&traj).unwrap();
    for (k, &t) in times.iter().enumerate() {
        let psi_ed = spin_ed::propagator_real(&hd, t) * spin_ed::all_down_state(n);
        let ed = spin_ed::correlation_matrix(&psi_ed, n);
        for i in 0..n {
            for jj in 0..n {
                assert!((field.get(k, i, jj) - ed[i * n + jj]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn ising_states_match_closed_form_and_ed() {
    let n = 6;
    let j = CouplingMatrix::power_law(n, 1.0, 0.63).unwrap();
    let h = build_hamiltonian(&j, Model::Ising, 0.0).unwrap();
    let times: Vec<f64> = (0..8).map(|k| k as f64 * 0.3).collect();
    let field = correlation_field_evolved(&h, &times).unwrap();
    let exact = ising_correlation_field(&j, &times).unwrap();
    for k in 0..times.len() {
        for i in 0..n {
            for jj in 0..n {
                assert!(
                    (field.get(k, i, jj) - exact.get(k, i, jj)).abs() < 1e-9,
                    "k={k} ({i},{jj})"
                );
            }
        }
    }
}

#[test]
fn transverse_field_states_match_pade_exponential() {
    let n = 5;
    let b = 0.8;
    let j = CouplingMatrix::power_law(n, 1.0, 1.19).unwrap();
    let h = build_hamiltonian(&j, Model::IsingField, b).unwrap();
    let times: Vec<f64> = (0..7).map(|k| k as f64 * 0.3).collect();
    let traj = evolve(&h, &times).unwrap();
    let hd = spin_ed::dense_h_ising_field(j.rows(), n, b);
    for (k, &t) in times.iter().enumerate() {
        let psi_ed = spin_ed::propagator_complex(&hd, t) * spin_ed::all_down_state(n);
        let f = fidelity(&traj.states[k], &psi_ed);
        assert!(f >= 1.0 - 1e-8, "t = {t}: fidelity {f}");
    }
}

#[test]
fn strong_field_rephases_at_pi_over_b() {
    // A strong σ^y field dominates; at t = π/B the field factor of the
    // propagator returns to ±1 and correlations collapse toward the pure-XY
    // value — here just check the state is close to the B-less evolution at
    // the rephasing instant and far from it in between.
    let n = 4;
    let b = 40.0;
    let j = CouplingMatrix::power_law(n, 1.0, 1.19).unwrap();
    let hf = build_hamiltonian(&j, Model::IsingField, b).unwrap();
    let t_re = std::f64::consts::PI / b;
    let times = vec![0.0, 0.5 * t_re, t_re];
    let traj = evolve(&hf, &times).unwrap();
    let hd = spin_ed::dense_h_ising_field(j.rows(), n, b);
    for (k, &t) in times.iter().enumerate() {
        let psi_ed = spin_ed::propagator_complex(&hd, t) * spin_ed::all_down_state(n);
        assert!(fidelity(&traj.states[k], &psi_ed) >= 1.0 - 1e-8);
    }
}

#[test]
fn short_time_xy_is_perturbative() {
    // C_ij(t) → (J_ij t)² as t → 0. The ratio has corrections of O(t²), so
    // Richardson extrapolation over t and t/2 cancels them:
    // (4·r(t/2) − r(t))/3 = 1 + O(t⁴).
    let n = 6;
    let j = CouplingMatrix::power_law(n, 1.0, 1.19).unwrap();
    let h = build_hamiltonian(&j, Model::Xy, 0.0).unwrap();
    let jmax = j.j_max();
    let t = 0.02 / jmax;
    let times = vec![0.0, t / 2.0, t];
    let field = correlation_field_evolved(&h, &times).unwrap();
    for i in 0..n {
        for jj in (i + 1)..n {
            let p_half = quench_core::analysis::perturbative_xy(&j, i, jj, t / 2.0).unwrap();
            let p_full = quench_core::analysis::perturbative_xy(&j, i, jj, t).unwrap();
            let r_half = field.get(1, i, jj) / p_half;
            let r_full = field.get(2, i, jj) / p_full;
            let extrap = (4.0 * r_half - r_full) / 3.0;
            assert!((extrap - 1.0).abs() < 1e-4, "pair ({i},{jj}): {extrap}");
        }
    }
}

#[test]
fn conserved_quantities_on_larger_chain() {
    let n = 10;
    let j = CouplingMatrix::power_law(n, 1.0, 1.19).unwrap();
    let h = build_hamiltonian(&j, Model::Xy, 0.0).unwrap();
    let times: Vec<f64> = (0..6).map(|k| k as f64 * 0.3).collect();
    let traj = evolve(&h, &times).unwrap();
    let e0 = quench_core::evolve::energy(&h, &traj.states[0]);
    for (k, st) in traj.states.iter().enumerate() {
        assert!((traj.norms[k] - 1.0).abs() < 1e-9);
        assert!((quench_core::evolve::energy(&h, st) - e0).abs() < 1e-8);
        assert!(total_sy(st, n).abs() < 1e-8);
    }
}

#[test]
fn ed_total_sy_agrees() {
    let n = 5;
    let j = CouplingMatrix::power_law(n, 1.0, 0.9).unwrap();
    let b = 1.1;
    let h = build_hamiltonian(&j, Model::IsingField, b).unwrap();
    let traj = evolve(&h, &[0.0, 0.4]).unwrap();
    let hd = spin_ed::dense_h_ising_field(j.rows(), n, b);
    let psi_ed = spin_ed::propagator_complex(&hd, 0.4) * spin_ed::all_down_state(n);
    let ours = total_sy(&traj.states[1], n);
    let theirs = spin_ed::total_sy(&psi_ed, n);
    assert!((ours - theirs).abs() < 1e-8, "{ours} vs {theirs}");
}
