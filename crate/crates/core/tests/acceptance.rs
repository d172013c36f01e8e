//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{random_metric, rel_err, unit_plus, unit_self_dual, O};
use nalgebra::DMatrix;
use spin7_core::clifford::{frobenius_pairing, ka_trace, CliffordRep};
use spin7_core::exterior::{delta, geometric_product, hodge, inner, norm, rank4_matrix, transform, volume_form};
use spin7_core::flow::{flow_run, Classification, FlowConfig, Start, Subspace};
use spin7_core::linalg::{sym_eigenvalues, Mat8};
use spin7_core::potential::{
    metric_directional_derivative, metric_gradient, pair_potential, potential_gradient, potential_hessian,
    potential_value, three_index_contraction, two_index_contraction, SymTensor8,
};
use spin7_core::random::{gaussian, gaussian_polyform, rng, rotation};
use spin7_core::spin7::{canonical_cayley, is_conformal_spin7, self_dual_basis, stabilizer_dimension, DEFAULT_TOL};
use spin7_core::square::{alpha_from_cayley, cayley_from_spinor, check_square_conditions, recover_spinor, signed_square};
use spin7_core::{Metric8, Polyform, Sign, SQRT14};

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(t: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, || format!("{what} took {:.2} s (limit {limit} s)", t.as_secs_f64()))
}

fn cayley_constants() -> Result<String, String> {
    let h = Metric8::identity();
    let phi = canonical_cayley();
    let n2 = inner(&phi, &phi, &h);
    let wedge = (&phi.wedge(&phi) - &(volume_form(&h, O) * 14.0)).max_abs();
    let dual = (&hodge(&phi, &h, O) - &phi).max_abs();
    ensure((n2 - 14.0).abs() <= 1e-12, || format!("|Φ₀|² = {n2}"))?;
    ensure(wedge <= 1e-12, || format!("Φ₀∧Φ₀ − 14ν₀ = {wedge:e}"))?;
    ensure(dual <= 1e-12, || format!("*Φ₀ − Φ₀ = {dual:e}"))?;
    Ok(format!("|Φ₀|² − 14 = {:.1e}, wedge defect {wedge:.1e}, duality defect {dual:.1e}", n2 - 14.0))
}

fn quadratic_criterion() -> Result<String, String> {
    let h = Metric8::identity();
    let phi = canonical_cayley();
    let defect = |p: &Polyform| {
        let mut d = delta(p, p, 2, &h);
        d.axpy(12.0, p);
        d.max_abs()
    };
    let base = defect(&phi);
    ensure(base <= 1e-12, || format!("Φ₀Δ₂Φ₀ + 12Φ₀ = {base:e}"))?;
    let mut r = rng(2, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        worst = worst.max(defect(&transform(&rotation(&mut r), &phi)));
    }
    ensure(worst <= 1e-9, || format!("rotated defect {worst:e}"))?;
    Ok(format!("defect {base:.1e}; worst over 100 rotations {worst:.1e}"))
}

fn spectrum() -> Result<String, String> {
    let start = Instant::now();
    let h = Metric8::identity();
    let phi = canonical_cayley();
    let m = rank4_matrix(|w| delta(&phi, w, 2, &h));
    let ev = sym_eigenvalues(&m);
    let t = start.elapsed();
    let mut counts = [0usize; 4];
    for &x in &ev {
        if let Some(i) = [-12.0, -6.0, 2.0, 0.0].iter().position(|&c| (x - c).abs() <= 1e-9) {
            counts[i] += 1;
        }
    }
    ensure(counts == [1, 7, 27, 35], || format!("multiplicities {counts:?}"))?;
    within(t, 1.0, "spectrum")?;
    Ok(format!("multiplicities of −12, −6, 2, 0: {counts:?} in {:.3} s", t.as_secs_f64()))
}

fn potential_at_cayley() -> Result<String, String> {
    let h = Metric8::identity();
    let phi = canonical_cayley();
    let w = potential_value(&phi, &h, O).map_err(|e| e.to_string())?;
    let g = potential_gradient(&phi, &h).max_abs();
    let ev = sym_eigenvalues(&potential_hessian(&phi, &h, O).map_err(|e| e.to_string())?);
    ensure(w.abs() <= 1e-10, || format!("W(Φ₀) = {w:e}"))?;
    ensure(g <= 1e-10, || format!("grad W(Φ₀) = {g:e}"))?;
    let zero = ev[..8].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let top = ev[8..].iter().fold(0.0f64, |m, x| m.max((x - 16.0 * SQRT14).abs()));
    ensure(zero <= 1e-8 && top <= 1e-8, || format!("Hessian spectrum {ev:?}"))?;
    Ok(format!("W = {w:.1e}, |grad| = {g:.1e}, eigenvalue defects {zero:.1e} (×8 at 0), {top:.1e} (×27 at 16√14)"))
}

fn spinor_pipeline() -> Result<String, String> {
    let rep = CliffordRep::build().map_err(|e| e.to_string())?;
    let h = Metric8::identity();
    let mut r = rng(5, 0);
    let (mut norm_err, mut bnorm_err, mut round_trip): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let xi = unit_plus(&mut r, &rep);
        let phi = cayley_from_spinor(&xi, &h, &rep).map_err(|e| e.to_string())?;
        let v = is_conformal_spin7(&phi, &h, O, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(v.metric, || format!("spinor square not metric: {v:?}"))?;
        let n = norm(&phi, &h);
        norm_err = norm_err.max((n - SQRT14).abs());
        bnorm_err = bnorm_err.max((xi.dot(&xi) - n / SQRT14).abs());
        let a = signed_square(&xi, Sign::Plus, &h, &rep);
        let back = recover_spinor(&a, &h, O, &rep, 1e-9).map_err(|e| e.to_string())?;
        let (x, y) = (back.vector(), xi.vector());
        round_trip = round_trip.max((x - y).amax().min((x + y).amax()));
    }
    ensure(norm_err <= 1e-8, || format!("|Φ| − √14 = {norm_err:e}"))?;
    ensure(bnorm_err <= 1e-10, || format!("ℬ(ξ,ξ) − |Φ|/√14 = {bnorm_err:e}"))?;
    ensure(round_trip <= 1e-8, || format!("recover∘square defect {round_trip:e}"))?;
    Ok(format!("100 spinors: |Φ| defect {norm_err:.1e}, ℬ defect {bnorm_err:.1e}, round trip {round_trip:.1e}"))
}

fn square_conditions() -> Result<String, String> {
    let h = Metric8::identity();
    let alpha = alpha_from_cayley(&canonical_cayley(), &h, O);
    let rep = check_square_conditions(&alpha, &h, O, 1e-10);
    ensure(rep.is_square, || format!("{rep:?}"))?;
    ensure(rep.kappa == Sign::Plus && rep.mu == Sign::Plus, || format!("κ, μ = {:?}, {:?}", rep.kappa, rep.mu))?;
    let s = ka_trace(&alpha);
    ensure((s - 1.0).abs() <= 1e-10, || format!("S(α) = {s}"))?;
    Ok(format!("residuals {:.1e} {:.1e} {:.1e}, κ = μ = +1, S(α) = {s}", rep.residuals[0], rep.residuals[1], rep.residuals[2]))
}

fn trace_identities() -> Result<String, String> {
    let id = Metric8::identity();
    let s1 = ka_trace(&Polyform::scalar(1.0));
    ensure(s1 == 16.0, || format!("S(1) = {s1}"))?;
    let mut r = rng(7, 0);
    let (mut q_err, mut cyc): (f64, f64) = (0.0, 0.0);
    for i in 0..500 {
        let h = if i % 2 == 0 { id.clone() } else { random_metric(&mut r, 0.3) };
        let a = gaussian_polyform(&mut r, 0x1ff);
        let b = gaussian_polyform(&mut r, 0x1ff);
        let scale = norm(&a, &h) * norm(&b, &h);
        let q = frobenius_pairing(&a, &b, &h);
        q_err = q_err.max((q - 16.0 * inner(&a, &b, &h)).abs() / scale);
        let ab = ka_trace(&geometric_product(&a, &b, &id));
        let ba = ka_trace(&geometric_product(&b, &a, &id));
        cyc = cyc.max((ab - ba).abs() / scale);
    }
    ensure(q_err <= 1e-9, || format!("Q − 16⟨,⟩ relative {q_err:e}"))?;
    ensure(cyc <= 1e-9, || format!("cyclicity residual {cyc:e}"))?;
    let mut ratio: f64 = 0.0;
    for _ in 0..1000 {
        let a = gaussian_polyform(&mut r, 0x1ff);
        let b = gaussian_polyform(&mut r, 0x1ff);
        ratio = ratio.max(norm(&geometric_product(&a, &b, &id), &id) / (norm(&a, &id) * norm(&b, &id)));
    }
    ensure(ratio <= 4.0, || format!("|a◇b| / |a||b| reached {ratio}"))?;
    let mut strict: f64 = 0.0;
    for _ in 0..1000 {
        let w = unit_self_dual(&mut r, &id);
        strict = strict.max(norm(&delta(&w, &w, 2, &id), &id));
    }
    ensure(strict < SQRT14, || format!("|ωΔ₂ω| / |ω|² reached {strict}"))?;
    Ok(format!("S(1) = 16; Q defect {q_err:.1e}; cyclicity {cyc:.1e}; max |a◇b|/|a||b| = {ratio:.3}; max |ωΔ₂ω|/|ω|² = {strict:.4}"))
}

const FD_STEP: f64 = 1e-5;
const FD_TOL: f64 = 1e-5;

fn coords(basis: &[Polyform], x: &Polyform, h: &Metric8) -> Vec<f64> {
    basis.iter().map(|b| inner(b, x, h)).collect()
}

fn derivative_oracles() -> Result<String, String> {
    let mut r = rng(8, 0);
    let (mut eg, mut eh, mut e2, mut em): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..50 {
        let h = random_metric(&mut r, 0.3);
        let basis = self_dual_basis(&h, O);
        let q = unit_self_dual(&mut r, &h);
        let w = |x: &Polyform| pair_potential(&h, x);
        let shifted = |b: &Polyform, s: f64| {
            let mut x = q.clone();
            x.axpy(s, b);
            x
        };

        let an = coords(&basis, &potential_gradient(&q, &h), &h);
        let fd: Vec<f64> =
            basis.iter().map(|b| (w(&shifted(b, FD_STEP)) - w(&shifted(b, -FD_STEP))) / (2.0 * FD_STEP)).collect();
        eg = eg.max(rel_err(&fd, &an));

        let hess = potential_hessian(&q, &h, O).map_err(|e| e.to_string())?;
        let mut fdh = DMatrix::zeros(35, 35);
        for (j, b) in basis.iter().enumerate() {
            let mut d = potential_gradient(&shifted(b, FD_STEP), &h);
            d -= &potential_gradient(&shifted(b, -FD_STEP), &h);
            for (i, x) in coords(&basis, &d, &h).into_iter().enumerate() {
                fdh[(i, j)] = x / (2.0 * FD_STEP);
            }
        }
        eh = eh.max(rel_err(fdh.as_slice(), hess.as_slice()));

        let v = unit_self_dual(&mut r, &h);
        let vc = nalgebra::DVector::from_vec(coords(&basis, &v, &h));
        let second = (w(&shifted(&v, FD_STEP)) - 2.0 * w(&q) + w(&shifted(&v, -FD_STEP))) / (FD_STEP * FD_STEP);
        let quad = (vc.transpose() * &hess * &vc)[(0, 0)];
        e2 = e2.max((second - quad).abs() / hess.norm());

        let phi = gaussian_polyform(&mut r, 1 << 4);
        let g = metric_gradient(&h, &phi);
        let k = SymTensor8::symmetrized(&Mat8::from_fn(|_, _| gaussian(&mut r)));
        let plus = Metric8::from_matrix(h.matrix() + k.0 * FD_STEP).map_err(|e| e.to_string())?;
        let minus = Metric8::from_matrix(h.matrix() - k.0 * FD_STEP).map_err(|e| e.to_string())?;
        let fdm = (pair_potential(&plus, &phi) - pair_potential(&minus, &phi)) / (2.0 * FD_STEP);
        let anm = metric_directional_derivative(&h, &g, &k);
        let scale = g.0.norm() * (h.inverse() * k.0 * h.inverse()).norm();
        em = em.max((fdm - anm).abs() / scale);
    }
    ensure(eg <= FD_TOL, || format!("gradient relative error {eg:e}"))?;
    ensure(eh <= FD_TOL, || format!("Hessian relative error {eh:e}"))?;
    ensure(e2 <= FD_TOL, || format!("second difference relative error {e2:e}"))?;
    ensure(em <= FD_TOL, || format!("metric gradient relative error {em:e}"))?;
    Ok(format!("50 random metrics: gradient {eg:.1e}, Hessian {eh:.1e} (second difference {e2:.1e}), metric gradient {em:.1e}"))
}

fn metric_criticality() -> Result<String, String> {
    let h = Metric8::identity();
    let phi = canonical_cayley();
    let g = metric_gradient(&h, &phi).max_abs();
    ensure(g <= 1e-9, || format!("metric gradient {g:e}"))?;
    let two = two_index_contraction(&h, &phi);
    let t = common::Tensor4::of(&phi);
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                for l in 0..8 {
                    let expected = 6.0 * (d(i, k) * d(j, l) - d(i, l) * d(j, k)) - 4.0 * t.get(i, j, k, l);
                    worst = worst.max((two[((i * 8 + j) * 8 + k) * 8 + l] - expected).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-10, || format!("two-index identity defect {worst:e}"))?;
    let three = (three_index_contraction(&h, &phi) - Mat8::identity() * 42.0).amax();
    ensure(three <= 1e-10, || format!("three-index identity defect {three:e}"))?;
    Ok(format!("|G| = {g:.1e}; 6hh − 6hh − 4Φ defect {worst:.1e}; 42h defect {three:.1e}"))
}

fn stabilizers() -> Result<String, String> {
    let h = Metric8::identity();
    let d0 = stabilizer_dimension(&canonical_cayley(), &h).map_err(|e| e.to_string())?;
    ensure(d0 == 21, || format!("dim stab(Φ₀) = {d0}"))?;
    let q = unit_self_dual(&mut rng(10, 0), &h);
    let dq = stabilizer_dimension(&q, &h).map_err(|e| e.to_string())?;
    ensure(dq == 0, || format!("dim stab(random) = {dq}"))?;
    Ok(format!("Φ₀ → {d0}, random self-dual → {dq}"))
}

fn flow() -> Result<String, String> {
    let h = Metric8::identity();
    let config = FlowConfig {
        seed: 11,
        start: Start::PerturbedCayley { eps: 0.3, subspace: Subspace::TwentySeven },
        ..FlowConfig::default()
    };
    let start = Instant::now();
    let a = flow_run(&config, &h).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let b = flow_run(&config, &h).map_err(|e| e.to_string())?;
    ensure(a.classification == Classification::Spin7Cone, || format!("classified {:?}", a.classification))?;
    ensure(a.final_W <= 1e-10, || format!("final W {}", a.final_W))?;
    ensure(a.final_grad_norm <= 1e-10, || format!("final gradient norm {:e}", a.final_grad_norm))?;
    ensure(a.iterations <= 5000, || format!("{} iterations", a.iterations))?;
    within(t, 10.0, "flow")?;
    ensure(a == b, || "two runs with the same seed differ".into())?;
    Ok(format!(
        "spin7_cone after {} iterations in {:.2} s, W = {:.1e}, |grad| = {:.1e}, reproducible",
        a.iterations,
        t.as_secs_f64(),
        a.final_W,
        a.final_grad_norm
    ))
}

fn scaling() -> Result<String, String> {
    let h = Metric8::identity();
    let mut r = rng(12, 0);
    let mut w_err: f64 = 0.0;
    for _ in 0..20 {
        let q = unit_self_dual(&mut r, &h);
        let w1 = potential_value(&q, &h, O).map_err(|e| e.to_string())?;
        for lambda in [0.1, 10.0] {
            let wl = potential_value(&(&q * lambda), &h, O).map_err(|e| e.to_string())?;
            w_err = w_err.max((wl - lambda.powi(3) * w1).abs() / (lambda.powi(3) * w1.abs()));
        }
    }
    ensure(w_err <= 1e-9, || format!("W(λq) vs λ³W(q) relative {w_err:e}"))?;
    let mut v_err: f64 = 0.0;
    for phi in [canonical_cayley(), transform(&rotation(&mut r), &canonical_cayley()), unit_self_dual(&mut r, &h)] {
        let v1 = is_conformal_spin7(&phi, &h, O, DEFAULT_TOL).map_err(|e| e.to_string())?;
        for lambda in [0.1, 10.0] {
            let vl = is_conformal_spin7(&(&phi * lambda), &h, O, DEFAULT_TOL).map_err(|e| e.to_string())?;
            ensure(vl.conformal == v1.conformal, || format!("conformal flag changed at λ = {lambda}"))?;
            v_err = v_err.max((vl.residual - v1.residual).abs() / v1.residual.max(1.0));
            let cc = vl.conformal_constant / (v1.conformal_constant * lambda.sqrt());
            v_err = v_err.max((cc - 1.0).abs());
        }
    }
    ensure(v_err <= 1e-9, || format!("verdict relative change {v_err:e}"))?;
    Ok(format!("homogeneity defect {w_err:.1e}; verdict change {v_err:.1e}"))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 12] = [
        ("Cayley constants", cayley_constants),
        ("quadratic criterion", quadratic_criterion),
        ("ΦΔ₂ spectrum", spectrum),
        ("potential at Φ₀", potential_at_cayley),
        ("spinor pipeline", spinor_pipeline),
        ("square conditions", square_conditions),
        ("trace and pairing identities", trace_identities),
        ("derivative oracles", derivative_oracles),
        ("metric criticality", metric_criticality),
        ("stabilizer dimension", stabilizers),
        ("flow", flow),
        ("scaling laws", scaling),
    ];
    let mut failed = 0;
    for (n, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2} s]", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{t:.2} s]", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
