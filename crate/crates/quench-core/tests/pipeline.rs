//! End-to-end runs on small chains: evolve, reduce, trace the cone, fit,
//! and sample — the same path the command-line driver takes.

use quench_core::analysis::{
    extract_light_cone, fit_boundary_linear, fit_boundary_power_law, fit_spatial_decay,
    propagation_velocity, FitForm,
};
use quench_core::evolve::{build_hamiltonian, correlation_field_evolved, evolve, Model};
use quench_core::ising::ising_correlation_field;
use quench_core::sample::{correlations_from_shots, sample_measurements};
use quench_core::{CouplingMatrix, Reduce};

#[test]
fn nearest_neighbor_xy_cone_is_roughly_linear() {
    let n = 10;
    let j = CouplingMatrix::nearest_neighbor(n, 1.0).unwrap();
    let h = build_hamiltonian(&j, Model::Xy, 0.0).unwrap();
    let times: Vec<f64> = (0..120).map(|k| k as f64 * 0.025).collect();
    let field = correlation_field_evolved(&h, &times).unwrap();
    let b = extract_light_cone(&field, 0.04, Reduce::Max).unwrap();
    assert!(b.points.len() >= 5, "front reached only {} separations", b.points.len());
    // Arrival times increase with separation.
    for w in b.points.windows(2) {
        assert!(w[1].t_star > w[0].t_star);
    }
    // Short-distance point reflects immediate quadratic growth rather than
    // transport, so the shape fit starts at r = 2.
    let fit = fit_boundary_power_law(&b, Some((2, n - 1))).unwrap();
    let beta = fit.params[1];
    assert!((0.7..=1.4).contains(&beta), "β = {beta}");
    let vc = propagation_velocity(&fit, &b, j.j_max()).unwrap();
    assert!(vc.v.iter().all(|&v| v > 0.0));
    assert!(vc.v_lr > 0.0);
    // The observed front is far slower than the worst-case bound velocity.
    assert!(vc.v.iter().all(|&v| v < vc.v_lr));
}

#[test]
fn outside_cone_tails_follow_the_coupling_range() {
    // With power-law couplings the far tail is dominated by the direct
    // (J_ij t)² term — itself a power law in r — so the power-law form must
    // win the residual comparison. With nearest-neighbor couplings there is
    // no direct term beyond r = 1 and only multi-hop processes remain, so
    // the tail collapses at least exponentially and the exponential form
    // wins.
    let n = 12;
    let j = CouplingMatrix::power_law(n, 1.0, 3.0).unwrap();
    let times: Vec<f64> = (0..80).map(|k| k as f64 * 0.02).collect();
    let field = ising_correlation_field(&j, &times).unwrap();
    let b = extract_light_cone(&field, 0.04, Reduce::Max).unwrap();
    assert!(!b.is_empty());
    let exp_fit = fit_spatial_decay(&field, 0.5, &b, FitForm::Exponential).unwrap();
    assert!(exp_fit.params[1] > 0.0); // positive decay length regardless
    let pow_fit = fit_spatial_decay(&field, 0.5, &b, FitForm::PowerLaw).unwrap();
    assert!(
        pow_fit.rms_residual < exp_fit.rms_residual,
        "direct-coupling tail: power rms {} should beat exp rms {}",
        pow_fit.rms_residual,
        exp_fit.rms_residual
    );
    // α ≈ 2·(coupling exponent) from the perturbative term.
    assert!((pow_fit.params[1] - 6.0).abs() < 1.5, "tail exponent {}", pow_fit.params[1]);

    let nj = CouplingMatrix::nearest_neighbor(10, 1.0).unwrap();
    let h = build_hamiltonian(&nj, Model::Xy, 0.0).unwrap();
    let ntimes: Vec<f64> = (0..60).map(|k| k as f64 * 0.02).collect();
    let nfield = correlation_field_evolved(&h, &ntimes).unwrap();
    let nb = extract_light_cone(&nfield, 0.04, Reduce::Max).unwrap();
    let nexp = fit_spatial_decay(&nfield, 0.6, &nb, FitForm::Exponential).unwrap();
    let npow = fit_spatial_decay(&nfield, 0.6, &nb, FitForm::PowerLaw).unwrap();
    assert!(
        nexp.rms_residual < npow.rms_residual,
        "multi-hop tail: exp rms {} should beat power rms {}",
        nexp.rms_residual,
        npow.rms_residual
    );
}

#[test]
fn shallow_power_law_ising_cone_bends() {
    // α = 0.63: the fixed contour accelerates outward — a power law with
    // exponent well below 1.
    let n = 11;
    let j = CouplingMatrix::power_law(n, 1.0, 0.63).unwrap();
    let times: Vec<f64> = (0..150).map(|k| k as f64 * 0.01).collect();
    let field = ising_correlation_field(&j, &times).unwrap();
    let b = extract_light_cone(&field, 0.04, Reduce::Max).unwrap();
    assert_eq!(b.points.len(), n - 1, "every separation crossed");
    let fit = fit_boundary_power_law(&b, None).unwrap();
    assert!(fit.params[1] < 0.7, "β = {} not sublinear", fit.params[1]);
    // A concave (sublinear) arrival curve leaves a linear chord fit with a
    // positive intercept.
    let lin = fit_boundary_linear(&b, None).unwrap();
    assert!(lin.params[0] > 0.0, "chord intercept {}", lin.params[0]);
}

#[test]
fn sampled_correlations_track_exact_ones() {
    let n = 6;
    let j = CouplingMatrix::power_law(n, 1.0, 1.19).unwrap();
    let h = build_hamiltonian(&j, Model::Xy, 0.0).unwrap();
    let times = vec![0.0, 0.5, 1.0];
    let traj = evolve(&h, &times).unwrap();
    let exact = quench_core::evolve::connected_correlations(&traj).unwrap();
    let rec = sample_measurements(&traj, 3000, 17).unwrap();
    let noisy = correlations_from_shots(&rec).unwrap();
    assert!(noisy.has_stderr());
    for k in 1..times.len() {
        for i in 0..n {
            for jj in (i + 1)..n {
                let c = noisy.get(k, i, jj);
                let se = noisy.stderr(k, i, jj).unwrap();
                let truth = exact.get(k, i, jj);
                assert!(se > 0.0);
                assert!(
                    (c - truth).abs() < 6.0 * se.max(1e-3),
                    "k={k} ({i},{jj}): {c} vs {truth} ± {se}"
                );
            }
        }
    }
}

#[test]
fn sampling_is_reproducible_across_reruns() {
    let n = 5;
    let j = CouplingMatrix::power_law(n, 1.0, 0.63).unwrap();
    let h = build_hamiltonian(&j, Model::Ising, 0.0).unwrap();
    let times = vec![0.0, 0.7];
    let t1 = evolve(&h, &times).unwrap();
    let t2 = evolve(&h, &times).unwrap();
    let a = sample_measurements(&t1, 200, 99).unwrap();
    let b = sample_measurements(&t2, 200, 99).unwrap();
    assert_eq!(a.outcomes, b.outcomes);
}
