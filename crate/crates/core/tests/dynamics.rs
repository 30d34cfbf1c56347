use std::f64::consts::TAU;

use gup_oscillator::dynamics::{
    canonical_exact, evolve_annihilation, heisenberg_a_evolution, heisenberg_residual, integrate,
    poisson_bracket_fd, vector_field,
};
use gup_oscillator::fock_algebra::{build_hamiltonian, build_ladder};
use gup_oscillator::momentum_map::momentum_forward;
use gup_oscillator::operator::max_abs;
use gup_oscillator::{HamiltonianForm, Method, OscillatorParams, PhasePoint};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn natural(beta: f64) -> OscillatorParams {
    OscillatorParams::natural(beta).unwrap()
}

/// exp(M) by scaling and squaring with a 30-term Taylor series.
fn expm_taylor(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = max_abs(m) * m.nrows() as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let a = m.unscale(2f64.powi(squarings as i32));
    let n = m.nrows();
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut acc = term.clone();
    for k in 1..30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        acc += &term;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

#[test]
fn deformed_trajectory_maps_onto_canonical() {
    for (beta, q0, p0) in [(0.2, 1.0, 1.0), (1.0, -0.5, 2.0), (0.05, 0.3, -4.0)] {
        let params = natural(beta);
        let t_end = 10.0 * params.period();
        let dt = params.period() / 1000.0;
        let start = PhasePoint::deformed(q0, p0);
        let deformed = integrate(start, &params, t_end, dt, Method::Rk4).unwrap();
        let canonical =
            integrate(start.to_canonical(&params), &params, t_end, dt, Method::Rk4).unwrap();
        let mapped = deformed.to_canonical();
        for (a, b) in mapped.points.iter().zip(&canonical.points) {
            assert!((a.q - b.q).abs() <= 1e-6 && (a.momentum - b.momentum).abs() <= 1e-6);
        }
        // the mapped path solves Ṗ = −mω²q: it follows the closed-form solution
        for (t, pt) in mapped.times.iter().zip(&mapped.points) {
            let exact = canonical_exact(start, &params, *t);
            assert!((pt.q - exact.q).abs() <= 1e-6 && (pt.momentum - exact.momentum).abs() <= 1e-6);
        }
    }
}

#[test]
fn undeformed_charts_coincide() {
    let params = natural(0.0);
    let t_end = 3.0 * TAU;
    let a = integrate(
        PhasePoint::deformed(0.4, 1.1),
        &params,
        t_end,
        TAU / 1000.0,
        Method::Rk4,
    )
    .unwrap();
    let b = integrate(
        PhasePoint::canonical(0.4, 1.1),
        &params,
        t_end,
        TAU / 1000.0,
        Method::Rk4,
    )
    .unwrap();
    for (x, y) in a.points.iter().zip(&b.points) {
        assert_eq!((x.q, x.momentum), (y.q, y.momentum));
    }
}

#[test]
fn rk4_energy_drift() {
    for (params, start) in [
        (natural(0.0), PhasePoint::canonical(1.0, 0.0)),
        (natural(0.2), PhasePoint::deformed(1.0, 1.0)),
        (
            OscillatorParams::new(0.5, 2.0, 3.0, 0.7).unwrap(),
            PhasePoint::deformed(-0.2, 1.5),
        ),
    ] {
        let tr = integrate(
            start,
            &params,
            10.0 * params.period(),
            params.period() / 1000.0,
            Method::Rk4,
        )
        .unwrap();
        assert!(
            tr.max_relative_energy_drift() <= 1e-8,
            "{}",
            tr.max_relative_energy_drift()
        );
    }
}

#[test]
fn leapfrog_secular_drift() {
    let params = OscillatorParams::new(1.0, 0.8, 1.9, 0.3).unwrap();
    let tr = integrate(
        PhasePoint::canonical(0.7, 0.2),
        &params,
        10.0 * params.period(),
        params.period() / 1000.0,
        Method::Leapfrog,
    )
    .unwrap();
    assert!(tr.secular_energy_drift() <= 1e-10);
}

#[test]
fn chain_rule_along_deformed_path() {
    let params = natural(0.5);
    let dt = params.period() / 4000.0;
    let tr = integrate(
        PhasePoint::deformed(0.8, 1.4),
        &params,
        2.0 * params.period(),
        dt,
        Method::Rk4,
    )
    .unwrap();
    let big_p: Vec<f64> = tr
        .points
        .iter()
        .map(|pt| momentum_forward(pt.momentum, &params))
        .collect();
    let h = tr.step;
    for i in 1..tr.len() - 1 {
        let d = (big_p[i + 1] - big_p[i - 1]) / (2.0 * h);
        let expected = -params.mass() * params.omega().powi(2) * tr.points[i].q;
        assert!((d - expected).abs() <= 1e-5, "i={i}: {d} vs {expected}");
    }
}

#[test]
fn period_independent_of_amplitude_and_beta() {
    for omega in [1.0, 2.5] {
        for beta in [0.0, 0.2, 1.0] {
            for (q0, p0) in [(0.1, 0.0), (1.0, 1.0), (3.0, -2.0)] {
                let params = OscillatorParams::new(1.0, 1.3, omega, beta).unwrap();
                let start = PhasePoint::deformed(q0, p0).to_canonical(&params);
                let tr = integrate(
                    start,
                    &params,
                    10.0 * params.period(),
                    params.period() / 1000.0,
                    Method::Rk4,
                )
                .unwrap();
                let period = tr.period_estimate().unwrap();
                assert!(
                    (period - TAU / omega).abs() <= 1e-6,
                    "ω={omega} β={beta}: {period}"
                );
            }
        }
    }
}

#[test]
fn poisson_brackets_match_vector_field() {
    let params = OscillatorParams::new(1.0, 1.7, 0.6, 0.4).unwrap();
    let h = |q: f64, big_p: f64| params.energy(q, big_p);
    for (q, big_p) in [(0.0, 0.0), (1.0, -0.5), (-2.0, 3.0)] {
        let (dq, dp) = vector_field(&PhasePoint::canonical(q, big_p), &params);
        let qdot = poisson_bracket_fd(|q, _| q, h, q, big_p, 1e-5);
        let pdot = poisson_bracket_fd(|_, p| p, h, q, big_p, 1e-5);
        assert!((qdot - dq).abs() <= 1e-8);
        assert!((pdot - dp).abs() <= 1e-8);
    }
}

#[test]
fn heisenberg_conjugation_matches_phase() {
    let params = natural(0.0);
    for t in [0.37, 1.0, 2.9] {
        assert!(heisenberg_residual(&params, 16, t).unwrap() <= 1e-9);
    }
    let params = OscillatorParams::new(0.8, 1.2, 2.0, 0.1).unwrap();
    assert!(heisenberg_residual(&params, 16, 0.37 / params.omega()).unwrap() <= 1e-9);
}

#[test]
fn heisenberg_against_taylor_exponential() {
    let params = natural(0.0);
    let dim = 16;
    let t = 0.37;
    let h = build_hamiltonian(&params, dim, HamiltonianForm::Quadratic).unwrap();
    let (a, _) = build_ladder(dim).unwrap();
    let u = expm_taylor(&(h.matrix() * Complex64::new(0.0, -t / params.hbar())));
    let oracle = u.adjoint() * a.matrix() * &u;
    let lib = evolve_annihilation(&params, dim, t).unwrap();
    assert!(max_abs(&(lib.matrix() - &oracle)) <= 1e-12);
    let expected = a.matrix() * heisenberg_a_evolution(&params, t);
    let k = dim - 1;
    let d = oracle.view((0, 0), (k, k)) - expected.view((0, 0), (k, k));
    assert!(max_abs(&d.into_owned()) <= 1e-9);
}

proptest! {
    #[test]
    fn deformed_field_is_chain_rule_of_canonical(q in -5.0f64..5.0, p in -20.0f64..20.0, beta in 0.0f64..3.0) {
        let params = natural(beta);
        let (dq_d, dp_d) = vector_field(&PhasePoint::deformed(q, p), &params);
        let c = PhasePoint::deformed(q, p).to_canonical(&params);
        let (dq_c, dbig_c) = vector_field(&c, &params);
        prop_assert!((dq_d - dq_c).abs() <= 1e-14 * (1.0 + dq_c.abs()));
        // dP/dt = ṗ/(1 + βp²)
        prop_assert!((dp_d / (1.0 + beta * p * p) - dbig_c).abs() <= 1e-13 * (1.0 + dbig_c.abs()));
    }
}

#[test]
fn orbit_leaving_momentum_range_is_rejected() {
    // mω q₀ = 2.5 alone exceeds π/2 at β = 1
    let params = OscillatorParams::new(1.0, 1.0, 2.5, 1.0).unwrap();
    let start = PhasePoint::deformed(1.0, 1.0);
    let err = integrate(
        start,
        &params,
        params.period(),
        params.period() / 100.0,
        Method::Rk4,
    )
    .unwrap_err();
    assert!(err.is_domain_exceeded());
    assert_eq!(err.module(), "dynamics");
    // the same physical orbit is fine in the canonical chart
    assert!(integrate(
        start.to_canonical(&params),
        &params,
        params.period(),
        0.01,
        Method::Rk4
    )
    .is_ok());
}
