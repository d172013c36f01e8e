//! Projected gradient descent for `W_h` on the sphere `|Φ|_h = √14` in `Λ⁴₊`.
//!
//! Runs are carried out in the `h`-orthonormal frame, where the fast
//! orthonormal products apply, and the limit is mapped back.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{delta, inner, norm};
use crate::linalg::sym_eigenvalues;
use crate::potential::{potential_gradient, potential_hessian};
use crate::random::{gaussian_self_dual, rng, self_dual_on_sphere};
use crate::spin7::{self, canonical_cayley, is_conformal_spin7, Spin7Verdict};
use crate::{Metric8, Orientation, Polyform, CAYLEY_NORM_SQ, SQRT14};

pub const STEP_CAP: f64 = 0.1;
pub const ARMIJO: f64 = 1e-4;
pub const SHRINK: f64 = 0.5;
pub const DEFAULT_GRAD_TOL: f64 = 1e-10;
/// Sphere membership tolerance for [`flow_step`].
pub const SPHERE_TOL: f64 = 1e-9;
/// Relative residual of `ΦΔ₂Φ = cΦ` accepted for `other_critical`.
pub const EIGEN_TOL: f64 = 1e-6;
const MIN_DENOMINATOR: f64 = 1e-12;
/// Backtracking gives up once the trial step falls below this.
const MIN_STEP: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StepRule {
    Fixed,
    Backtracking,
}

/// Component of `Λ⁴₊` used to perturb the Cayley form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subspace {
    Seven,
    TwentySeven,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Start {
    RandomSphere,
    PerturbedCayley { eps: f64, subspace: Subspace },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct FlowConfig {
    pub seed: u64,
    pub max_iters: usize,
    pub step: f64,
    pub step_rule: StepRule,
    pub grad_tol: f64,
    pub start: Start,
    pub restarts: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_iters: 5000,
            step: STEP_CAP,
            step_rule: StepRule::Backtracking,
            grad_tol: DEFAULT_GRAD_TOL,
            start: Start::RandomSphere,
            restarts: 1,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig("step must be positive"));
        }
        if !(self.grad_tol.is_finite() && self.grad_tol > 0.0) {
            return Err(Error::InvalidConfig("grad_tol must be positive"));
        }
        if let Start::PerturbedCayley { eps, .. } = self.start {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(Error::InvalidConfig("eps must be non-negative"));
            }
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Classification {
    Spin7Cone,
    OtherCritical,
    NotConverged,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(non_snake_case)]
pub struct FlowReport {
    pub final_form: Polyform,
    pub iterations: usize,
    pub final_grad_norm: f64,
    pub final_W: f64,
    pub verdict: Spin7Verdict,
    pub hessian_spectrum: Vec<f64>,
    pub classification: Classification,
    /// `W` at the start and after every step; increments are evaluated
    /// from the step itself rather than by subtracting two values of `W`.
    pub trajectory_W: Vec<f64>,
}

/// Counts of the classifications over a set of restarts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BasinStats {
    pub spin7_cone: usize,
    pub other_critical: usize,
    pub not_converged: usize,
}

impl BasinStats {
    pub fn of(reports: &[FlowReport]) -> Self {
        let mut s = Self::default();
        for r in reports {
            match r.classification {
                Classification::Spin7Cone => s.spin7_cone += 1,
                Classification::OtherCritical => s.other_critical += 1,
                Classification::NotConverged => s.not_converged += 1,
            }
        }
        s
    }
}

/// `g − (⟨g,Φ⟩/14) Φ`.
pub fn tangential(g: &Polyform, phi: &Polyform, h: &Metric8) -> Polyform {
    let mut t = g.clone();
    t.axpy(-inner(g, phi, h) / CAYLEY_NORM_SQ, phi);
    t
}

fn retract(phi: &Polyform, gt: &Polyform, step: f64, h: &Metric8) -> Result<Polyform> {
    let mut y = phi.clone();
    y.axpy(-step, gt);
    let n = norm(&y, h);
    if n < MIN_DENOMINATOR {
        return Err(Error::StepTooLarge);
    }
    Ok(y * (SQRT14 / n))
}

fn require_on_sphere(phi: &Polyform, h: &Metric8) -> Result<()> {
    phi.require_rank(4)?;
    let n = norm(phi, h);
    if (n - SQRT14).abs() > SPHERE_TOL {
        return Err(Error::OffSphere(n));
    }
    Ok(())
}

/// One projected gradient step followed by radial retraction to the sphere.
pub fn flow_step(phi: &Polyform, h: &Metric8, step: f64) -> Result<Polyform> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidConfig("step must be positive"));
    }
    require_on_sphere(phi, h)?;
    let gt = tangential(&potential_gradient(phi, h), phi, h);
    retract(phi, &gt, step, h)
}

/// `W(Φ + d) − W(Φ)` in the orthonormal frame, given `∇W(Φ)`.
///
/// Expanding the cubic keeps the result accurate when both values of `W`
/// are large compared with their difference.
fn increment(phi: &Polyform, grad: &Polyform, d: &Polyform) -> f64 {
    let id = Metric8::identity();
    let n0 = phi.coeff_norm();
    let d2 = d.coeff_dot(d);
    let pd = delta(phi, d, 2, &id);
    let ddd = delta(d, d, 2, &id);
    let x = (2.0 * phi.coeff_dot(d) + d2) / (n0 * n0);
    let cubic = libm::expm1(1.5 * libm::log1p(x)) - 1.5 * x;
    grad.coeff_dot(d)
        + SQRT14 * pd.coeff_dot(d)
        + SQRT14 / 3.0 * ddd.coeff_dot(d)
        + 4.0 * n0 * n0 * n0 * cubic
        + 6.0 * n0 * d2
}

/// `|ΦΔ₂Φ − cΦ| / |Φ|²` with `c = ⟨ΦΔ₂Φ, Φ⟩/|Φ|²`.
pub fn eigen_residual(phi: &Polyform, h: &Metric8) -> Result<f64> {
    let n = norm(phi, h);
    if n == 0.0 {
        return Err(Error::ZeroForm);
    }
    let d = delta(phi, phi, 2, h);
    let c = inner(&d, phi, h) / (n * n);
    let mut r = d;
    r.axpy(-c, phi);
    Ok(norm(&r, h) / (n * n))
}

fn start_form<R: Rng>(start: Start, rng: &mut R, o: Orientation) -> Result<Polyform> {
    let id = Metric8::identity();
    match start {
        Start::RandomSphere => Ok(self_dual_on_sphere(rng, &id, o, SQRT14)),
        Start::PerturbedCayley { eps, subspace } => {
            let phi = canonical_cayley();
            if eps == 0.0 {
                return Ok(phi);
            }
            loop {
                let q = gaussian_self_dual(rng, &id, o);
                let parts = spin7::decompose_4form(&phi, &q, &id, o, spin7::DEFAULT_TOL)?;
                let u = match subspace {
                    Subspace::Seven => parts.q7,
                    Subspace::TwentySeven => parts.q27,
                    Subspace::Mixed => &parts.q7 + &parts.q27,
                };
                let n = u.coeff_norm();
                if n > 1e-12 {
                    let mut p = phi.clone();
                    p.axpy(eps / n, &u);
                    let np = p.coeff_norm();
                    return Ok(p * (SQRT14 / np));
                }
            }
        }
    }
}

/// Runs restart `index` of `config` (random stream `index` of `config.seed`)
/// and classifies the limit with verdict tolerance `tol`.
pub fn flow_run_indexed(config: &FlowConfig, h: &Metric8, index: u64, tol: f64) -> Result<FlowReport> {
    config.validate()?;
    let o = Orientation::STANDARD;
    let id = Metric8::identity();
    let mut r = rng(config.seed, index);
    let mut phi = start_form(config.start, &mut r, o)?;
    let step0 = config.step.min(STEP_CAP);

    let mut grad = potential_gradient(&phi, &id);
    let mut w = phi.coeff_dot(&grad) / 3.0;
    let mut trajectory = alloc::vec![w];
    let mut iterations = 0;
    let mut converged = false;
    loop {
        let gt = tangential(&grad, &phi, &id);
        let gn = gt.coeff_norm();
        if gn <= config.grad_tol {
            converged = true;
            break;
        }
        if iterations == config.max_iters {
            break;
        }
        let mut t = step0;
        let accepted = loop {
            let next = retract(&phi, &gt, t, &id)?;
            let dw = increment(&phi, &grad, &(&next - &phi));
            if config.step_rule == StepRule::Fixed || dw <= -ARMIJO * t * gn * gn {
                break Some((next, dw));
            }
            t *= SHRINK;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((next, dw)) = accepted else { break };
        phi = next;
        grad = potential_gradient(&phi, &id);
        w += dw;
        trajectory.push(w);
        iterations += 1;
    }

    let gt = tangential(&grad, &phi, &id);
    let final_form = h.from_frame(&phi);
    let verdict = is_conformal_spin7(&final_form, h, o, tol)?;
    let hessian_spectrum = sym_eigenvalues(&potential_hessian(&final_form, h, o)?);
    let classification = if !converged {
        Classification::NotConverged
    } else if verdict.metric {
        Classification::Spin7Cone
    } else if eigen_residual(&phi, &id)? <= EIGEN_TOL {
        Classification::OtherCritical
    } else {
        Classification::NotConverged
    };
    Ok(FlowReport {
        final_form,
        iterations,
        final_grad_norm: gt.coeff_norm(),
        final_W: phi.coeff_dot(&grad) / 3.0,
        verdict,
        hessian_spectrum,
        classification,
        trajectory_W: trajectory,
    })
}

/// The first restart of `config`.
pub fn flow_run(config: &FlowConfig, h: &Metric8) -> Result<FlowReport> {
    flow_run_indexed(config, h, 0, spin7::DEFAULT_TOL)
}

/// All restarts, in index order.
pub fn run_restarts(config: &FlowConfig, h: &Metric8) -> Result<Vec<FlowReport>> {
    (0..config.restarts as u64).map(|i| flow_run_indexed(config, h, i, spin7::DEFAULT_TOL)).collect()
}

#[cfg(feature = "serde")]
mod subspace_serde {
    use super::Subspace;
    use core::fmt;
    use serde::de::{self, Visitor};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Subspace {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(match self {
                Subspace::Seven => "7",
                Subspace::TwentySeven => "27",
                Subspace::Mixed => "mixed",
            })
        }
    }

    struct V;

    impl Visitor<'_> for V {
        type Value = Subspace;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("7, 27 or \"mixed\"")
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Subspace, E> {
            match v {
                7 => Ok(Subspace::Seven),
                27 => Ok(Subspace::TwentySeven),
                _ => Err(E::invalid_value(de::Unexpected::Unsigned(v), &self)),
            }
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Subspace, E> {
            match u64::try_from(v) {
                Ok(u) => self.visit_u64(u),
                Err(_) => Err(E::invalid_value(de::Unexpected::Signed(v), &self)),
            }
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Subspace, E> {
            match v {
                "7" => Ok(Subspace::Seven),
                "27" => Ok(Subspace::TwentySeven),
                "mixed" => Ok(Subspace::Mixed),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }

    impl<'de> Deserialize<'de> for Subspace {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            d.deserialize_any(V)
        }
    }
}
