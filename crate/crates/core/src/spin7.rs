//! Cayley forms, the quadratic Spin(7) criterion, the operator
//! `Λ_Φ = 2 Φ Δ_2 ·` and the `1 ⊕ 7 ⊕ 27 ⊕ 35` splitting of `Λ⁴`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::blade;
use crate::error::{Error, Result};
use crate::exterior::{self, delta, hodge, inner, norm};
use crate::linalg::{kernel_dimension, Mat8};
use crate::{Metric8, Orientation, Polyform, Sign, CAYLEY_NORM_SQ, SQRT14};

/// Default tolerance for the verdict, relative to `|Φ|²`.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Relative singular-value cutoff used by [`stabilizer_dimension`].
pub const KERNEL_CUTOFF: f64 = 1e-8;
/// Largest admissible minimal-polynomial residual in [`decompose_4form`].
const DRIFT_TOL: f64 = 1e-6;

const CAYLEY_TERMS: [([usize; 4], f64); 14] = [
    ([1, 2, 3, 4], 1.0),
    ([1, 2, 5, 6], 1.0),
    ([1, 2, 7, 8], 1.0),
    ([1, 3, 5, 7], 1.0),
    ([1, 3, 6, 8], -1.0),
    ([1, 4, 5, 8], -1.0),
    ([1, 4, 6, 7], -1.0),
    ([5, 6, 7, 8], 1.0),
    ([3, 4, 7, 8], 1.0),
    ([3, 4, 5, 6], 1.0),
    ([2, 4, 6, 8], 1.0),
    ([2, 4, 5, 7], -1.0),
    ([2, 3, 5, 8], -1.0),
    ([2, 3, 6, 7], -1.0),
];

/// The canonical Cayley form `Φ₀` on `R^8`: self-dual, 14 unit terms,
/// `Φ₀Δ₂Φ₀ = −12Φ₀`.
///
/// With the product conventions of this crate the usual table starting
/// `+e^{1234} + e^{1256} + …` ([`cayley_table_form`]) satisfies
/// `ΦΔ₂Φ = +12Φ` instead, so `Φ₀` is its negative.
pub fn canonical_cayley() -> Polyform {
    -cayley_table_form()
}

/// The form `e^{1234} + e^{1256} + e^{1278} + e^{1357} − e^{1368} − …`
/// (14 terms). Self-dual, but it lies in the orbit of `−Φ₀`.
pub fn cayley_table_form() -> Polyform {
    let mut p = Polyform::zero();
    for (ix, s) in CAYLEY_TERMS {
        let (mask, sign) = blade::from_indices(&ix).expect("valid indices");
        p[mask] = s * sign as f64;
    }
    p
}

/// The anti-self-dual mirror of `Φ₀`: its image under `x⁸ ↦ −x⁸`.
pub fn canonical_cayley_minus() -> Polyform {
    let mut r = Mat8::identity();
    r[(7, 7)] = -1.0;
    exterior::transform(&r, &canonical_cayley())
}

/// Outcome of [`is_conformal_spin7`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spin7Verdict {
    pub conformal: bool,
    pub metric: bool,
    /// `α_Φ = 14^{-1/4} |Φ|_h^{1/2}`, the factor with `h_Φ = α_Φ h`.
    pub conformal_constant: f64,
    /// Larger of the two residuals below.
    pub residual: f64,
    pub chirality_branch: Sign,
    /// `|*Φ − μΦ|_h / |Φ|_h` for the chosen branch `μ`.
    pub duality_residual: f64,
    /// `|√14 ΦΔ₂Φ + 12|Φ|Φ|_h / |Φ|_h²`.
    pub quadratic_residual: f64,
}

/// `√14 ΦΔ₂Φ + 12|Φ|Φ`.
pub fn quadratic_defect(phi: &Polyform, h: &Metric8) -> Polyform {
    let n = norm(phi, h);
    let mut d = delta(phi, phi, 2, h) * SQRT14;
    d.axpy(12.0 * n, phi);
    d
}

fn require_nonzero_rank4(phi: &Polyform, h: &Metric8) -> Result<f64> {
    phi.require_rank(4)?;
    let n = norm(phi, h);
    if n == 0.0 {
        return Err(Error::ZeroForm);
    }
    Ok(n)
}

/// Decides whether `phi` is a conformal Spin(7) form on `(V, h)`, with the
/// branch picked by the sign of duality (`+1`: self-dual, Spin(7)₊).
pub fn is_conformal_spin7(phi: &Polyform, h: &Metric8, o: Orientation, tol: f64) -> Result<Spin7Verdict> {
    let n = require_nonzero_rank4(phi, h)?;
    let plus = exterior::duality_residual(phi, 1.0, h, o);
    let minus = exterior::duality_residual(phi, -1.0, h, o);
    let (branch, dual) = if plus <= minus { (Sign::Plus, plus) } else { (Sign::Minus, minus) };
    let quad = norm(&quadratic_defect(phi, h), h) / (n * n);
    let conformal = dual <= tol && quad <= tol;
    let metric = conformal && (n - SQRT14).abs() <= tol * SQRT14;
    Ok(Spin7Verdict {
        conformal,
        metric,
        conformal_constant: libm::pow(CAYLEY_NORM_SQ, -0.25) * libm::sqrt(n),
        residual: dual.max(quad),
        chirality_branch: branch,
        duality_residual: dual,
        quadratic_residual: quad,
    })
}

/// `h_Φ = 14^{-1/4} |Φ|_h^{1/2} h`.
pub fn induced_metric(phi: &Polyform, h: &Metric8, o: Orientation, tol: f64) -> Result<Metric8> {
    let v = is_conformal_spin7(phi, h, o, tol)?;
    if !v.conformal {
        return Err(Error::NotSpin7(v.residual));
    }
    h.scaled(v.conformal_constant)
}

/// The 70×70 matrix of `Λ_Φ(ω) = 2 ΦΔ₂ω` in the rank-4 blade basis.
pub fn lambda_operator(phi: &Polyform, h: &Metric8) -> Result<DMatrix<f64>> {
    phi.require_rank(4)?;
    Ok(exterior::rank4_matrix(|w| delta(phi, w, 2, h) * 2.0))
}

/// Components of a 4-form along `Λ⁴₁ ⊕ Λ⁴₇ ⊕ Λ⁴₂₇ ⊕ Λ⁴₃₅`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionResult {
    pub q1: Polyform,
    pub q7: Polyform,
    pub q27: Polyform,
    pub q35: Polyform,
}

impl DecompositionResult {
    pub fn parts(&self) -> [&Polyform; 4] {
        [&self.q1, &self.q7, &self.q27, &self.q35]
    }

    pub fn sum(&self) -> Polyform {
        let mut s = self.q1.clone();
        s += &self.q7;
        s += &self.q27;
        s += &self.q35;
        s
    }
}

/// Splits `q` relative to the conformal Spin(7) form `phi_ref`.
///
/// `q35` is the part of duality opposite to `phi_ref`. On the remaining
/// part `ΦΔ₂·` has eigenvalues `−12s, −6s, 2s` with `s = |Φ|/√14`, and the
/// other three components are taken by the matching Lagrange projectors.
pub fn decompose_4form(phi_ref: &Polyform, q: &Polyform, h: &Metric8, o: Orientation, tol: f64) -> Result<DecompositionResult> {
    q.require_rank(4)?;
    let v = is_conformal_spin7(phi_ref, h, o, tol)?;
    if !v.conformal {
        return Err(Error::NotSpin7(v.residual));
    }
    let mu = v.chirality_branch.value();
    let star = hodge(q, h, o);
    let qs = (q + &(&star * mu)) * 0.5;
    let q35 = (q - &(&star * mu)) * 0.5;

    let n = norm(phi_ref, h);
    let s = n / SQRT14;
    let t = |w: &Polyform| delta(phi_ref, w, 2, h);
    let shift = |w: &Polyform, c: f64| {
        let mut r = t(w);
        r.axpy(c * s, w);
        r
    };

    let q1 = phi_ref * (inner(q, phi_ref, h) / (n * n));
    // (T + 12s)(T - 2s) / (-48 s²)
    let q7 = shift(&shift(&qs, -2.0), 12.0) * (-1.0 / (48.0 * s * s));
    // (T + 12s)(T + 6s) / (112 s²)
    let a = shift(&qs, 6.0);
    let q27 = shift(&a, 12.0) * (1.0 / (112.0 * s * s));

    let qn = norm(&qs, h);
    if qn > 0.0 {
        let minimal = shift(&shift(&a, 12.0), -2.0);
        let drift = norm(&minimal, h) / (qn * s * s * s * 144.0);
        if drift > DRIFT_TOL {
            return Err(Error::SpectralDrift(drift));
        }
    }
    Ok(DecompositionResult { q1, q7, q27, q35 })
}

/// An orthonormal basis of `Λ⁴_μ` for `(h, o)`: the forms
/// `(f^I + μ *f^I)/√2` for the 35 increasing `I ∋ 1` in the
/// `h`-orthonormal coframe `f`, in lexicographic order.
pub fn duality_basis(h: &Metric8, o: Orientation, mu: Sign) -> Vec<Polyform> {
    let id = Metric8::identity();
    blade::of_rank(4)
        .iter()
        .filter(|&&m| m & 1 != 0)
        .map(|&m| {
            let f = Polyform::blade(m, 1.0);
            let mut b = &f + &(hodge(&f, &id, o) * mu.value());
            b *= core::f64::consts::FRAC_1_SQRT_2;
            h.from_frame(&b)
        })
        .collect()
}

/// `Λ⁴₊` basis of [`duality_basis`].
pub fn self_dual_basis(h: &Metric8, o: Orientation) -> Vec<Polyform> {
    duality_basis(h, o, Sign::Plus)
}

/// Dimension of `{A ∈ so(V, h) : ρ(A)Φ = 0}` for the derivation action.
pub fn stabilizer_dimension(phi: &Polyform, h: &Metric8) -> Result<usize> {
    require_nonzero_rank4(phi, h)?;
    let f = h.to_frame(phi);
    let f = &f * (1.0 / f.coeff_norm());
    let basis = blade::of_rank(4);
    let mut m = DMatrix::zeros(70, 28);
    let mut col = 0;
    for i in 0..8 {
        for j in (i + 1)..8 {
            let mut a = Mat8::zeros();
            a[(i, j)] = 1.0;
            a[(j, i)] = -1.0;
            let img = exterior::derivation(&a, &f);
            for (r, &mask) in basis.iter().enumerate() {
                m[(r, col)] = img[mask];
            }
            col += 1;
        }
    }
    Ok(kernel_dimension(&m, KERNEL_CUTOFF))
}
