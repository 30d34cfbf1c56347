use gup_oscillator::liouville::{
    divergence, ensemble_volume, finite_difference_jacobian, jacobian_field, predicted_ratio,
    tangent_integrate, volume_table, Ensemble, FD_STEP,
};
use gup_oscillator::{OscillatorParams, PhasePoint};
use proptest::prelude::*;

fn natural(beta: f64) -> OscillatorParams {
    OscillatorParams::natural(beta).unwrap()
}

#[test]
fn canonical_volume_preserved_over_ten_periods() {
    for beta in [0.0, 0.2, 0.9] {
        let params = OscillatorParams::new(1.0, 1.4, 0.8, beta).unwrap();
        for start in [
            PhasePoint::canonical(1.0, 0.0),
            PhasePoint::canonical(-0.3, 2.0),
        ] {
            let tf = tangent_integrate(
                start,
                &params,
                10.0 * params.period(),
                params.period() / 1000.0,
            )
            .unwrap();
            for d in tf.determinants() {
                assert!((d - 1.0).abs() <= 1e-8, "{d}");
            }
        }
    }
}

#[test]
fn undeformed_chart_is_volume_preserving() {
    let params = natural(0.0);
    let tf = tangent_integrate(
        PhasePoint::deformed(1.0, 1.0),
        &params,
        10.0 * params.period(),
        params.period() / 1000.0,
    )
    .unwrap();
    assert!(tf.determinants().iter().all(|d| (d - 1.0).abs() <= 1e-8));
}

#[test]
fn deformed_determinant_quarter_period() {
    let params = natural(0.2);
    let t = params.period() / 4.0;
    let tf = tangent_integrate(
        PhasePoint::deformed(1.0, 1.0),
        &params,
        t,
        params.period() / 1000.0,
    )
    .unwrap();
    let p_t = tf.base.points.last().unwrap().momentum;
    let det = *tf.determinants().last().unwrap();
    let expected = (1.0 + 0.2 * p_t * p_t) / 1.2;
    assert!((det - expected).abs() <= 1e-6, "{det} vs {expected}");
    // the determinant has moved away from 1, so this is a real check
    assert!((det - 1.0).abs() > 1e-2);
}

#[test]
fn deformed_determinant_follows_ratio_over_ten_periods() {
    let params = natural(0.2);
    let tf = tangent_integrate(
        PhasePoint::deformed(1.0, 1.0),
        &params,
        10.0 * params.period(),
        params.period() / 1000.0,
    )
    .unwrap();
    assert!(tf.max_determinant_error() <= 1e-6);
    assert!(tf.determinants().iter().all(|d| *d > 0.0));
}

#[test]
fn log_determinant_rate_equals_divergence() {
    // d/dt ln det J = tr A, checked by central differences along the path
    let params = natural(0.4);
    let tf = tangent_integrate(
        PhasePoint::deformed(0.6, -1.3),
        &params,
        params.period(),
        params.period() / 4000.0,
    )
    .unwrap();
    let logs: Vec<f64> = tf.determinants().iter().map(|d| d.ln()).collect();
    let h = tf.base.step;
    for i in 1..logs.len() - 1 {
        let rate = (logs[i + 1] - logs[i - 1]) / (2.0 * h);
        let tr = divergence(&tf.base.points[i], &params);
        assert!((rate - tr).abs() <= 1e-5, "i={i}: {rate} vs {tr}");
    }
}

#[test]
fn predicted_ratio_is_one_without_deformation() {
    assert_eq!(predicted_ratio(&natural(0.0), 3.0, -7.0), 1.0);
}

proptest! {
    #[test]
    fn divergence_closed_form_matches_jacobians(q in -3.0f64..3.0, p in -5.0f64..5.0, beta in 0.0f64..2.0) {
        let params = natural(beta);
        let pt = PhasePoint::deformed(q, p);
        let analytic = jacobian_field(&pt, &params);
        prop_assert!((analytic.trace() - divergence(&pt, &params)).abs() <= 1e-12 * (1.0 + analytic.trace().abs()));
        let fd = finite_difference_jacobian(&pt, &params, FD_STEP);
        for (a, b) in analytic.iter().zip(fd.iter()) {
            prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{a} vs {b}");
        }
        let c = PhasePoint::canonical(q, p);
        prop_assert_eq!(jacobian_field(&c, &params).trace(), 0.0);
        prop_assert!(finite_difference_jacobian(&c, &params, FD_STEP).trace().abs() <= 1e-6);
    }
}

fn ensemble_ratios(beta: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let params = natural(beta);
    let center = PhasePoint::deformed(1.0, 1.0);
    let ens = Ensemble::disc(center, 0.05, 128, 11).unwrap();
    let t_end = 5.0 * params.period();
    let dt = params.period() / 1000.0;
    let vol = ensemble_volume(&ens, &params, t_end, dt).unwrap();
    let tf = tangent_integrate(center, &params, t_end, dt).unwrap();
    (
        vol.canonical_ratios(),
        vol.deformed_ratios(),
        tf.determinants(),
    )
}

#[test]
fn undeformed_disc_areas_constant() {
    let (c, d, _) = ensemble_ratios(0.0);
    assert!(c.iter().all(|r| (r - 1.0).abs() <= 0.01));
    assert!(d.iter().all(|r| (r - 1.0).abs() <= 0.01));
}

#[test]
fn deformed_disc_areas_follow_tangent_map() {
    let (c, d, det) = ensemble_ratios(0.3);
    assert!(c.iter().all(|r| (r - 1.0).abs() <= 0.01));
    for (r, j) in d.iter().zip(&det) {
        assert!((r / j - 1.0).abs() <= 0.02, "{r} vs {j}");
    }
    // the deformed area does change
    let spread = d.iter().fold(0.0f64, |m, r| m.max((r - 1.0).abs()));
    assert!(spread > 0.05);
}

#[test]
fn ensemble_result_independent_of_threads() {
    let params = natural(0.3);
    let ens = Ensemble::disc(PhasePoint::deformed(0.5, -0.7), 0.05, 64, 3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                ensemble_volume(&ens, &params, params.period(), params.period() / 500.0).unwrap()
            })
    };
    let one = run(1);
    let many = run(4);
    assert_eq!(one, many);
    assert_eq!(one, run(1));
}

#[test]
fn volume_table_columns() {
    let params = natural(0.2);
    let rows = volume_table(
        PhasePoint::deformed(1.0, 1.0),
        &params,
        params.period(),
        params.period() / 200.0,
        0.05,
        64,
        5,
    )
    .unwrap();
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0].det_j_canonical, 1.0);
    assert_eq!(rows[0].det_j_deformed, 1.0);
    assert_eq!(rows[0].predicted_ratio, 1.0);
    for r in &rows {
        assert!((r.det_j_deformed - r.predicted_ratio).abs() < 1e-5);
        assert!(r.hull_area_canonical > 0.0 && r.hull_area_deformed > 0.0);
    }
}
