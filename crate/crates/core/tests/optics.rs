use std::f64::consts::{FRAC_PI_2, PI};

use gup_oscillator::fock_algebra::build_ladder;
use gup_oscillator::optics::{
    coherent_overlap, coherent_state, min_dim, mode_energy, mode_energy_report, number_statistics,
    poisson_probabilities, quadrature_mean_closed_form, quadrature_operator,
    quadrature_second_moment_closed_form, quadrature_stats, CoherentSpec, ModeSpec,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// exp(−|α|² + 2n ln|α| − ln n!), summed in log space.
fn poisson_log_oracle(alpha: Complex64, n: usize) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-mean + n as f64 * mean.ln() - ln_factorial(n)).exp()
}

#[test]
fn photon_statistics_at_alpha_two() {
    let spec = CoherentSpec::new(c(2.0, 0.0), 64).unwrap();
    let state = coherent_state(&spec).unwrap();
    let (mean, var) = number_statistics(&state).unwrap();
    assert!((mean - 4.0).abs() <= 1e-10, "{mean}");
    assert!((var - 4.0).abs() <= 1e-8, "{var}");
    let probs = state.probabilities();
    let p4 = (-4.0f64).exp() * 256.0 / 24.0;
    assert!((probs[4] - p4).abs() <= 1e-12);
}

#[test]
fn fock_probabilities_are_poisson() {
    for alpha in [c(2.0, 0.0), c(0.3, -1.1), c(-2.5, 2.5), c(0.0, 0.0)] {
        let spec = CoherentSpec::new(alpha, 64.max(min_dim(alpha))).unwrap();
        let numeric = coherent_state(&spec).unwrap().probabilities();
        let library = poisson_probabilities(alpha, spec.dim);
        for n in 0..spec.dim {
            let oracle = poisson_log_oracle(alpha, n);
            if oracle >= 1e-14 {
                assert!((numeric[n] - oracle).abs() <= 1e-12, "α={alpha} n={n}");
                assert!((library[n] - oracle).abs() <= 1e-12, "α={alpha} n={n}");
            }
        }
    }
}

#[test]
fn coherent_state_norm_and_eigenrelation() {
    for alpha in [c(1.0, 0.0), c(-0.7, 2.2), c(3.0, -1.5)] {
        let spec = CoherentSpec::new(alpha, 64).unwrap();
        let state = coherent_state(&spec).unwrap();
        assert!((state.norm() - 1.0).abs() <= 1e-10);
        let (a, _) = build_ladder(64).unwrap();
        let applied = a.apply(&state).unwrap();
        let residual = (applied - state.amplitudes() * alpha).norm();
        assert!(residual <= 1e-8, "α={alpha}: {residual}");
    }
}

#[test]
fn overlap_at_one_and_i() {
    let o = coherent_overlap(c(1.0, 0.0), c(0.0, 1.0));
    assert!((o.norm_sqr() - (-2.0f64).exp()).abs() <= 1e-15);
    let direct = coherent_state(&CoherentSpec::new(c(1.0, 0.0), 64).unwrap())
        .unwrap()
        .inner(&coherent_state(&CoherentSpec::new(c(0.0, 1.0), 64).unwrap()).unwrap())
        .unwrap();
    assert!((direct.norm_sqr() - (-2.0f64).exp()).abs() <= 1e-8);
}

proptest! {
    #[test]
    fn overlap_closed_form_matches_inner_product(
        ra in 0.0f64..3.0, ta in 0.0f64..6.3, rb in 0.0f64..3.0, tb in 0.0f64..6.3,
    ) {
        let a = Complex64::from_polar(ra, ta);
        let b = Complex64::from_polar(rb, tb);
        let sa = coherent_state(&CoherentSpec::new(a, 64).unwrap()).unwrap();
        let sb = coherent_state(&CoherentSpec::new(b, 64).unwrap()).unwrap();
        let direct = sa.inner(&sb).unwrap();
        prop_assert!((direct - coherent_overlap(a, b)).norm() <= 1e-8);
    }

    #[test]
    fn quadrature_moments_match_closed_form(r in 0.0f64..3.0, t in 0.0f64..6.3, lambda in -PI..PI) {
        let alpha = Complex64::from_polar(r, t);
        let spec = CoherentSpec::new(alpha, 64).unwrap();
        let stats = quadrature_stats(&spec, lambda).unwrap();
        prop_assert!((stats.second_moment - quadrature_second_moment_closed_form(alpha, lambda)).abs() <= 1e-8);
        prop_assert!((stats.mean - quadrature_mean_closed_form(alpha, lambda)).abs() <= 1e-8);
        prop_assert!((stats.variance - 0.5).abs() <= 1e-8);
    }

    #[test]
    fn mode_energy_is_additive(
        ks in proptest::collection::btree_set(1u32..1000, 1..8),
        n in proptest::collection::vec(0u64..50, 8),
        split in 0usize..8,
    ) {
        let modes: Vec<ModeSpec> = ks
            .iter()
            .zip(&n)
            .enumerate()
            .map(|(i, (&k, &occ))| ModeSpec::new(k as f64 * 0.25, 1 + (i % 2) as u8, occ).unwrap())
            .collect();
        let split = split.min(modes.len());
        let (left, right) = modes.split_at(split);
        let whole = mode_energy(&modes, 1.3, 2.0).unwrap();
        let parts = mode_energy(left, 1.3, 2.0).unwrap() + mode_energy(right, 1.3, 2.0).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.abs());
        let direct: f64 = modes.iter().map(|m| 1.3 * 2.0 * m.k * (m.occupancy as f64 + 0.5)).sum();
        prop_assert!((whole - direct).abs() <= 1e-12 * whole.abs());
    }
}

#[test]
fn quadrature_variance_is_phase_independent() {
    let spec = CoherentSpec::new(c(1.3, 0.4), 64).unwrap();
    let variances: Vec<f64> = (0..16)
        .map(|k| {
            quadrature_stats(&spec, k as f64 * PI / 8.0)
                .unwrap()
                .variance
        })
        .collect();
    for v in &variances {
        assert!((v - 0.5).abs() <= 1e-8);
    }
    let lambda = 0.7;
    let dx = quadrature_stats(&spec, lambda).unwrap().variance.sqrt();
    let dy = quadrature_stats(&spec, lambda + FRAC_PI_2)
        .unwrap()
        .variance
        .sqrt();
    assert!((dx * dy - 0.5).abs() <= 1e-8);
}

#[test]
fn quadrature_is_hermitian() {
    let x = quadrature_operator(32, 0.7).unwrap();
    assert!(x.hermiticity_defect() <= 1e-15);
}

#[test]
fn tail_rule_leaves_negligible_mass() {
    for i in 0..=40 {
        let r = 0.1 * i as f64;
        for t in [0.0, 1.0, 2.5] {
            let alpha = Complex64::from_polar(r, t);
            let dim = min_dim(alpha);
            // Σ_{n ≥ dim} P(n) accumulated term by term from the log oracle
            let mut tail = 0.0;
            let mut n = dim;
            loop {
                let p = poisson_log_oracle(alpha, n);
                tail += p;
                if p < 1e-30 && n > dim + 10 {
                    break;
                }
                n += 1;
            }
            assert!(tail < 1e-10, "|α|={r}: tail {tail} at dim {dim}");
        }
    }
}

#[test]
fn truncation_below_rule_is_rejected() {
    let alpha = c(2.0, 0.0);
    assert!(CoherentSpec::new(alpha, min_dim(alpha) - 1).is_err());
    assert!(CoherentSpec::minimal(alpha).is_ok());
}

#[test]
fn mode_report_lists_contributions() {
    let modes = [
        ModeSpec::new(1.0, 1, 0).unwrap(),
        ModeSpec::new(1.0, 2, 3).unwrap(),
    ];
    let r = mode_energy_report(&modes, 1.0, 1.0).unwrap();
    assert_eq!(r.modes.len(), 2);
    assert_eq!(r.modes[0].energy_contribution, 0.5);
    assert_eq!(r.modes[1].energy_contribution, 3.5);
    assert_eq!(r.total, 4.0);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["modes"][1]["lambda"], 2);
    assert_eq!(json["modes"][1]["n"], 3);
}
