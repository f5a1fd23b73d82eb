//! Closed-form Ising results checked against brute-force exact
//! diagonalization. The reference implementation shares no code with the
//! crate: dense Kronecker-product Hamiltonians, full eigendecomposition.

use quench_core::ising::{commuting_bound, ising_correlation, ising_correlation_field, ising_magnetization};
use quench_core::CouplingMatrix;

fn ed_correlations(j: &CouplingMatrix, t: f64) -> Vec<f64> {
    let n = j.n();
    let h = spin_ed::dense_h_ising(j.rows(), n);
    let u = spin_ed::propagator_real(&h, t);
    let psi = u * spin_ed::all_down_state(n);
    spin_ed::correlation_matrix(&psi, n)
}

#[test]
fn closed_form_matches_ed_power_law() {
    for &(n, alpha) in &[(5usize, 0.63), (6, 1.19), (7, 2.0)] {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        for &t in &[0.15, 0.7, 1.9] {
            let ed = ed_correlations(&j, t);
            for i in 0..n {
                for jj in (i + 1)..n {
                    let c = ising_correlation(&j, i, jj, t).unwrap();
                    assert!(
                        (c - ed[i * n + jj]).abs() < 1e-12,
                        "n={n} α={alpha} t={t} pair=({i},{jj}): {} vs {}",
                        c,
                        ed[i * n + jj]
                    );
                }
            }
        }
    }
}

#[test]
fn closed_form_matches_ed_nearest_neighbor() {
    // The sparse-coupling spectrum is heavily degenerate, which costs the
    // reference eigensolver a couple of digits; the tolerance reflects the
    // oracle, not the closed form.
    let j = CouplingMatrix::nearest_neighbor(6, 0.8).unwrap();
    for &t in &[0.3, 1.1] {
        let ed = ed_correlations(&j, t);
        for i in 0..6 {
            for jj in (i + 1)..6 {
                let c = ising_correlation(&j, i, jj, t).unwrap();
                assert!((c - ed[i * 6 + jj]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn magnetization_matches_ed() {
    let n = 6;
    let j = CouplingMatrix::power_law(n, 1.0, 0.63).unwrap();
    let h = spin_ed::dense_h_ising(j.rows(), n);
    for &t in &[0.0, 0.4, 1.3] {
        let u = spin_ed::propagator_real(&h, t);
        let psi = u * spin_ed::all_down_state(n);
        for i in 0..n {
            let m = ising_magnetization(&j, i, t).unwrap();
            let ed = spin_ed::sz_expectation(&psi, i);
            assert!((m - ed).abs() < 1e-12, "site {i} t {t}");
        }
    }
}

#[test]
fn field_grid_matches_ed_grid() {
    let n = 5;
    let j = CouplingMatrix::power_law(n, 0.9, 1.19).unwrap();
    let times: Vec<f64> = (0..12).map(|k| k as f64 * 0.2).collect();
    let field = ising_correlation_field(&j, &times).unwrap();
    for (k, &t) in times.iter().enumerate() {
        let ed = ed_correlations(&j, t);
        for i in 0..n {
            for jj in 0..n {
                assert!((field.get(k, i, jj) - ed[i * n + jj]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn ed_correlations_respect_commuting_bound() {
    // The cut bound is loose but must never be violated by the exact
    // dynamics it constrains.
    let n = 6;
    for &alpha in &[0.63, 1.19, 3.0] {
        let j = CouplingMatrix::power_law(n, 1.0, alpha).unwrap();
        for &t in &[0.1, 0.5, 1.5] {
            let ed = ed_correlations(&j, t);
            for i in 0..n {
                for jj in (i + 1)..n {
                    let b = commuting_bound(&j, i, jj, t).unwrap();
                    assert!(
                        ed[i * n + jj].abs() <= b + 1e-12,
                        "bound violated at α={alpha} t={t} ({i},{jj})"
                    );
                }
            }
        }
    }
}

#[test]
fn disconnected_supports_stay_uncorrelated_in_ed() {
    // Two bonds 0–1 and 2–3, nothing linking the halves: the exact dynamics
    // keeps C_02 = C_03 = C_12 = C_13 = 0 at all times even though both
    // operators evolve nontrivially.
    let n = 4;
    let mut rows = vec![0.0; n * n];
    rows[1] = 1.0; // J_01
    rows[n] = 1.0;
    rows[2 * n + 3] = 0.7; // J_23
    rows[3 * n + 2] = 0.7;
    let j = CouplingMatrix::from_rows(n, rows).unwrap();
    let support = quench_core::ising::multi_hop_support(&j, 0, 2).unwrap();
    assert!(!support.can_correlate);
    for &t in &[0.3, 0.9, 2.7] {
        let ed = ed_correlations(&j, t);
        for (i, jj) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(ed[i * n + jj].abs() < 1e-13, "t={t} pair=({i},{jj})");
            let c = ising_correlation(&j, i, jj, t).unwrap();
            assert!(c.abs() < 1e-13);
        }
        // while the connected halves do correlate
        assert!(ed[1].abs() > 1e-3 || t < 0.1);
    }
}
