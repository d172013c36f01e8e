//! Signed spinor squares `ℰ^κ(ξ)` and their inversion.

use nalgebra::DMatrix;

use crate::clifford::{CliffordRep, Mat16, Spinor16};
use crate::error::{Error, Result};
use crate::exterior::{geometric_product, norm, volume_form};
use crate::linalg::sym_eigen;
use crate::{Metric8, Orientation, Polyform, Sign, SQRT14};

/// Default tolerance for [`check_square_conditions`].
pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest admissible `|λ_i| / λ_1` for the other eigenvalues of `κΨ(α)`.
pub const RANK_ONE_RATIO: f64 = 1e-7;

/// Outcome of [`check_square_conditions`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SquareReport {
    pub is_square: bool,
    /// Sign of `α^{(0)}`.
    pub kappa: Sign,
    /// Duality sign minimizing the third residual.
    pub mu: Sign,
    /// `ℬ(ξ, ξ) = 16|α^{(0)}|`.
    pub spinor_norm: f64,
    /// `|α◇α − 16α^{(0)}α| / |α|²`, `|τ(α) − α| / |α|` and
    /// `|ν◇α − μα| / |α|` (all zero for `α = 0`).
    pub residuals: [f64; 3],
}

/// `ℰ^κ(ξ) = (κ/16) Σ_A ℬ(γ^A ξ, ξ) e^A` with the blades `e^A` taken in
/// the `h`-orthonormal frame. Its image under [`CliffordRep::represent`]
/// is `κ ξξᵀ`.
pub fn signed_square(xi: &Spinor16, kappa: Sign, h: &Metric8, rep: &CliffordRep) -> Polyform {
    let v = xi.vector();
    let outer: Mat16 = v * v.transpose() * kappa.value();
    rep.dequantize(&outer, h)
}

/// The 4-form `Φ = 16 ℰ^+(ξ)^{(4)}` of a nonzero chiral spinor; it is
/// self-dual for positive chirality and anti-self-dual for negative.
pub fn cayley_from_spinor(xi: &Spinor16, h: &Metric8, rep: &CliffordRep) -> Result<Polyform> {
    let tagged = xi.clone().tagged(rep)?;
    if let Some(mu) = xi.chirality {
        if Some(mu) != tagged.chirality {
            return Err(Error::NotChiral(1.0));
        }
    }
    Ok(signed_square(xi, Sign::Plus, h, rep).rank_part(4) * 16.0)
}

/// The polyform `(1/16)[|Φ|/√14 + Φ + (|Φ|/√14) ν_h]` attached to a 4-form.
pub fn alpha_from_cayley(phi: &Polyform, h: &Metric8, o: Orientation) -> Polyform {
    let s = norm(phi, h) / SQRT14;
    let mut a = phi.clone();
    a[0] += s;
    a.axpy(s, &volume_form(h, o));
    a * (1.0 / 16.0)
}

/// Tests the three conditions characterizing signed squares of chiral
/// spinors: `α◇α = 16α^{(0)}α`, `τ(α) = α`, `ν◇α = μα`.
pub fn check_square_conditions(a: &Polyform, h: &Metric8, o: Orientation, tol: f64) -> SquareReport {
    let kappa = Sign::of(a.scalar_part());
    let spinor_norm = 16.0 * a.scalar_part().abs();
    let n = norm(a, h);
    if n == 0.0 {
        return SquareReport { is_square: true, kappa, mu: Sign::Plus, spinor_norm, residuals: [0.0; 3] };
    }
    let mut sq = geometric_product(a, a, h);
    sq.axpy(-16.0 * a.scalar_part(), a);
    let r1 = norm(&sq, h) / (n * n);
    let r2 = norm(&(&a.reversion() - a), h) / n;
    let nu_a = geometric_product(&volume_form(h, o), a, h);
    let plus = norm(&(&nu_a - a), h) / n;
    let minus = norm(&(&nu_a + a), h) / n;
    let (mu, r3) = if plus <= minus { (Sign::Plus, plus) } else { (Sign::Minus, minus) };
    let residuals = [r1, r2, r3];
    SquareReport { is_square: residuals.iter().all(|&r| r <= tol), kappa, mu, spinor_norm, residuals }
}

/// Recovers `ξ` (up to sign) from `α = ℰ^κ(ξ)`. The sign is fixed by
/// making the largest-magnitude component positive.
pub fn recover_spinor(a: &Polyform, h: &Metric8, o: Orientation, rep: &CliffordRep, tol: f64) -> Result<Spinor16> {
    let report = check_square_conditions(a, h, o, tol);
    if !report.is_square {
        return Err(Error::NotSquare(report.residuals.iter().fold(0.0, |m: f64, &r| m.max(r))));
    }
    if a.is_zero() {
        return Ok(Spinor16::zero());
    }
    let m = rep.represent(a, h) * report.kappa.value();
    let dm = DMatrix::from_column_slice(16, 16, m.as_slice());
    let (values, vectors) = sym_eigen(&dm);
    let top = values[15];
    let rest = values[..15].iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
    if top <= 0.0 || rest > RANK_ONE_RATIO * top {
        return Err(Error::NotSquare(if top > 0.0 { rest / top } else { f64::INFINITY }));
    }
    let scale = libm::sqrt(top);
    let mut c = [0.0; 16];
    for (i, x) in c.iter_mut().enumerate() {
        *x = scale * vectors[(i, 15)];
    }
    let lead = c.iter().fold(0.0, |best: f64, &x| if x.abs() > best.abs() { x } else { best });
    if lead < 0.0 {
        for x in c.iter_mut() {
            *x = -*x;
        }
    }
    let xi = Spinor16::new(c);
    Ok(xi.clone().tagged(rep).unwrap_or(xi))
}
