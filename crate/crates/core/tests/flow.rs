mod common;

use common::{random_metric, unit_self_dual, O};
use proptest::prelude::*;
use spin7_core::exterior::{norm, transform};
use spin7_core::flow::{
    eigen_residual, flow_run, flow_run_indexed, flow_step, run_restarts, BasinStats, Classification, FlowConfig,
    FlowReport, Start, StepRule, Subspace, EIGEN_TOL,
};
use spin7_core::potential::potential_value;
use spin7_core::random::{rng, rotation};
use spin7_core::spin7::{canonical_cayley, decompose_4form, is_conformal_spin7, DEFAULT_TOL};
use spin7_core::{Metric8, SQRT14};

fn perturbed(eps: f64, subspace: Subspace, seed: u64) -> FlowConfig {
    FlowConfig { seed, start: Start::PerturbedCayley { eps, subspace }, ..FlowConfig::default() }
}

/// Invariants every report must satisfy.
fn check_report(r: &FlowReport, h: &Metric8) {
    assert_eq!(r.hessian_spectrum.len(), 35);
    assert_eq!(r.trajectory_W.len(), r.iterations + 1);
    assert!((norm(&r.final_form, h) - SQRT14).abs() <= 1e-9);
    match r.classification {
        Classification::Spin7Cone => {
            assert!(r.verdict.metric);
            assert!(r.verdict.quadratic_residual <= 1e-8);
            let ev = &r.hessian_spectrum;
            assert!(ev[..8].iter().all(|x| x.abs() <= 1e-6), "{ev:?}");
            assert!(ev[8..].iter().all(|x| (x - 16.0 * SQRT14).abs() <= 1e-4), "{ev:?}");
        }
        Classification::OtherCritical => {
            assert!(!r.verdict.metric);
            assert!(eigen_residual(&r.final_form, h).unwrap() <= EIGEN_TOL);
        }
        Classification::NotConverged => {}
    }
}

#[test]
fn basin_of_the_cayley_form() {
    let h = Metric8::identity();
    for subspace in [Subspace::TwentySeven, Subspace::Seven, Subspace::Mixed] {
        let r = flow_run(&perturbed(0.3, subspace, 3), &h).unwrap();
        check_report(&r, &h);
        assert_eq!(r.classification, Classification::Spin7Cone, "{subspace:?}");
        assert!(r.final_W <= 1e-10 && r.final_grad_norm <= 1e-10);
    }
}

#[test]
fn general_metric_run() {
    let h = random_metric(&mut rng(30, 0), 0.3);
    let r = flow_run(&perturbed(0.3, Subspace::TwentySeven, 4), &h).unwrap();
    check_report(&r, &h);
    assert_eq!(r.classification, Classification::Spin7Cone);
}

#[test]
fn one_step_decreases_w() {
    let h = Metric8::identity();
    let phi = canonical_cayley();
    let q = unit_self_dual(&mut rng(31, 0), &h);
    let q27 = decompose_4form(&phi, &q, &h, O, DEFAULT_TOL).unwrap().q27;
    let mut start = phi.clone();
    start.axpy(1e-2 / norm(&q27, &h), &q27);
    let start = &start * (SQRT14 / norm(&start, &h));
    let next = flow_step(&start, &h, 0.01).unwrap();
    assert!(potential_value(&next, &h, O).unwrap() < potential_value(&start, &h, O).unwrap());
    assert!((norm(&next, &h) - SQRT14).abs() <= 1e-12);
}

#[test]
fn fixed_rule_runs() {
    let h = Metric8::identity();
    let config = FlowConfig { step: 0.01, step_rule: StepRule::Fixed, ..perturbed(0.3, Subspace::TwentySeven, 5) };
    let r = flow_run(&config, &h).unwrap();
    check_report(&r, &h);
    assert_eq!(r.classification, Classification::Spin7Cone);
}

#[test]
fn exhaustion_is_not_converged() {
    let h = Metric8::identity();
    let config = FlowConfig { max_iters: 2, ..perturbed(0.3, Subspace::TwentySeven, 6) };
    let r = flow_run(&config, &h).unwrap();
    assert_eq!(r.iterations, 2);
    assert_eq!(r.classification, Classification::NotConverged);
}

#[test]
fn random_sphere_restarts() {
    let h = Metric8::identity();
    let config = FlowConfig { seed: 2024, restarts: 64, ..FlowConfig::default() };
    let reports = run_restarts(&config, &h).unwrap();
    assert_eq!(reports.len(), 64);
    for r in &reports {
        check_report(r, &h);
        assert!(r.trajectory_W.windows(2).all(|w| w[1] <= w[0]));
    }
    assert_eq!(reports[17], flow_run_indexed(&config, &h, 17, DEFAULT_TOL).unwrap());
    let stats = BasinStats::of(&reports);
    println!("basin statistics over 64 random starts: {stats:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn iterates_stay_on_the_sphere(seed: u64, step in 1e-4f64..0.1) {
        let h = Metric8::identity();
        let mut phi = unit_self_dual(&mut rng(seed, 0), &h) * SQRT14;
        for _ in 0..20 {
            phi = flow_step(&phi, &h, step).unwrap();
            prop_assert!((norm(&phi, &h) - SQRT14).abs() <= 1e-12);
        }
    }

    #[test]
    fn rotated_cayley_is_fixed(seed: u64) {
        let h = Metric8::identity();
        let phi = transform(&rotation(&mut rng(seed, 0)), &canonical_cayley());
        prop_assert!((&flow_step(&phi, &h, 0.1).unwrap() - &phi).max_abs() <= 1e-12);
    }

    #[test]
    fn runs_are_monotone_and_deterministic(seed: u64) {
        let h = Metric8::identity();
        let config = FlowConfig { seed, max_iters: 300, ..FlowConfig::default() };
        let a = flow_run(&config, &h).unwrap();
        prop_assert!(a.trajectory_W.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(&a, &flow_run(&config, &h).unwrap());
        if a.classification == Classification::Spin7Cone {
            prop_assert!(is_conformal_spin7(&a.final_form, &h, O, DEFAULT_TOL).unwrap().metric);
        }
    }
}
