//! The cubic potential `W(h, Φ) = (√14/3)⟨ΦΔ₂Φ, Φ⟩_h + 4|Φ|_h³`, its
//! derivatives in `Φ` and `h`, and the cubic bounds.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::blade;
use crate::error::{Error, Result};
use crate::exterior::{delta, duality_residual, inner, norm};
use crate::linalg::{sym_eigenvalues, Mat8};
use crate::spin7::{self, self_dual_basis};
use crate::{Metric8, Orientation, Polyform, SQRT14};

/// Relative duality residual tolerated by the `Λ⁴₊`-only entry points.
pub const SELF_DUAL_TOL: f64 = 1e-9;

/// A symmetric 8×8 tensor: a metric perturbation `k_{ab}` or a metric
/// gradient.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "[[f64; 8]; 8]", from = "[[f64; 8]; 8]"))]
pub struct SymTensor8(pub Mat8);

impl SymTensor8 {
    pub fn symmetrized(m: &Mat8) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

impl From<SymTensor8> for [[f64; 8]; 8] {
    fn from(t: SymTensor8) -> Self {
        crate::linalg::rows8(&t.0)
    }
}

impl From<[[f64; 8]; 8]> for SymTensor8 {
    fn from(rows: [[f64; 8]; 8]) -> Self {
        SymTensor8::symmetrized(&crate::linalg::mat8(&rows))
    }
}

fn require_self_dual(phi: &Polyform, h: &Metric8, o: Orientation) -> Result<()> {
    phi.require_rank(4)?;
    let r = duality_residual(phi, 1.0, h, o);
    if r > SELF_DUAL_TOL {
        return Err(Error::NotSelfDual(r));
    }
    Ok(())
}

/// `W(h, Φ)` for an arbitrary 4-form.
pub fn pair_potential(h: &Metric8, phi: &Polyform) -> f64 {
    let n = norm(phi, h);
    SQRT14 / 3.0 * inner(&delta(phi, phi, 2, h), phi, h) + 4.0 * n * n * n
}

/// `W_h(Φ)` on self-dual 4-forms.
pub fn potential_value(phi: &Polyform, h: &Metric8, o: Orientation) -> Result<f64> {
    require_self_dual(phi, h, o)?;
    Ok(pair_potential(h, phi))
}

/// `∇W = √14 ΦΔ₂Φ + 12|Φ|Φ`, extended by `0` at `Φ = 0`.
pub fn potential_gradient(phi: &Polyform, h: &Metric8) -> Polyform {
    if phi.is_zero() {
        return Polyform::zero();
    }
    spin7::quadratic_defect(phi, h)
}

/// The Hessian of `W_h` at a nonzero self-dual `Φ`, in the basis of
/// [`self_dual_basis`]:
///
/// `H(q₁, q₂) = √14⟨q₁Δ₂q₂ + q₂Δ₂q₁, Φ⟩ + 12|Φ|⟨q₁,q₂⟩ + (12/|Φ|)⟨q₁,Φ⟩⟨Φ,q₂⟩`.
pub fn potential_hessian(phi: &Polyform, h: &Metric8, o: Orientation) -> Result<DMatrix<f64>> {
    require_self_dual(phi, h, o)?;
    if phi.is_zero() {
        return Err(Error::ZeroForm);
    }
    // evaluate in the orthonormal frame, where the basis is sparse
    let id = Metric8::identity();
    let f = h.to_frame(phi);
    let basis = self_dual_basis(&id, o);
    let n = f.coeff_norm();
    let along: Vec<f64> = basis.iter().map(|b| inner(b, &f, &id)).collect();
    let mut m = DMatrix::zeros(35, 35);
    for i in 0..35 {
        for j in i..35 {
            let mut q = delta(&basis[i], &basis[j], 2, &id);
            q += &delta(&basis[j], &basis[i], 2, &id);
            let mut v = SQRT14 * inner(&q, &f, &id) + 12.0 / n * along[i] * along[j];
            if i == j {
                v += 12.0 * n;
            }
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// Spectrum of the Hessian and its coupling across the `1/7/27` split.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HessianBlockReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Frobenius norms of the `(1,7)`, `(1,27)` and `(7,27)` blocks.
    pub block_norms: [f64; 3],
}

/// Hessian eigenvalues at `phi`, with off-diagonal block norms measured
/// against the splitting of `Λ⁴₊` defined by `phi` itself (which must be
/// a conformal Spin(7)₊ form).
pub fn hessian_blocks(phi: &Polyform, h: &Metric8, o: Orientation, tol: f64) -> Result<HessianBlockReport> {
    let hess = potential_hessian(phi, h, o)?;
    let basis = self_dual_basis(h, o);
    // columns: coordinates of the 1, 7, 27 components of each basis form
    let mut proj = [DMatrix::zeros(35, 35), DMatrix::zeros(35, 35), DMatrix::zeros(35, 35)];
    for (j, b) in basis.iter().enumerate() {
        let d = spin7::decompose_4form(phi, b, h, o, tol)?;
        for (p, part) in proj.iter_mut().zip([&d.q1, &d.q7, &d.q27]) {
            for (i, bi) in basis.iter().enumerate() {
                p[(i, j)] = inner(bi, part, h);
            }
        }
    }
    let block = |a: usize, b: usize| (&proj[a] * &hess * &proj[b]).norm();
    Ok(HessianBlockReport {
        eigenvalues: sym_eigenvalues(&hess),
        block_norms: [block(0, 1), block(0, 2), block(1, 2)],
    })
}

/// Dense tensor `Φ_{ijkl}` (fully antisymmetric), indexed `((i·8+j)·8+k)·8+l`.
pub fn four_tensor(phi: &Polyform) -> Vec<f64> {
    let mut t = vec![0.0; 4096];
    for &m in blade::of_rank(4) {
        let x = phi[m];
        if x == 0.0 {
            continue;
        }
        let ix: Vec<usize> = blade::indices(m).map(|i| i - 1).collect();
        for p in PERMS4 {
            let (s, q) = (p.0, p.1);
            let at = ((ix[q[0]] * 8 + ix[q[1]]) * 8 + ix[q[2]]) * 8 + ix[q[3]];
            t[at] = s * x;
        }
    }
    t
}

const PERMS4: [(f64, [usize; 4]); 24] = {
    let mut out = [(0.0, [0usize; 4]); 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    let p = [a, b, c, d];
                    let mut inv = 0;
                    let mut i = 0;
                    while i < 4 {
                        let mut j = i + 1;
                        while j < 4 {
                            if p[i] > p[j] {
                                inv += 1;
                            }
                            j += 1;
                        }
                        i += 1;
                    }
                    out[n] = (if inv % 2 == 0 { 1.0 } else { -1.0 }, p);
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

/// Raises all four indices with `h^{-1}`.
fn raise_all(t: &[f64], h: &Metric8) -> Vec<f64> {
    let inv = h.inverse();
    let mut cur = t.to_vec();
    for slot in 0..4 {
        let stride = 8usize.pow(3 - slot as u32);
        let mut next = vec![0.0; 4096];
        for (at, out) in next.iter_mut().enumerate() {
            let a = (at / stride) % 8;
            let base = at - a * stride;
            *out = (0..8).map(|b| inv[(a, b)] * cur[base + b * stride]).sum();
        }
        cur = next;
    }
    cur
}

/// `Φ_{i1 i2 i3 i4} Φ_{j1 j2 j3 j4} h^{i3 j3} h^{i4 j4}`, indexed
/// `((i1·8+i2)·8+j1)·8+j2`.
pub fn two_index_contraction(h: &Metric8, phi: &Polyform) -> Vec<f64> {
    let t = four_tensor(phi);
    let up = raise_all(&t, h);
    let lower2 = lower_first_two(&up, h);
    // lower2 = Φ_{i1 i2}^{i3 i4}
    let mut out = vec![0.0; 4096];
    for a in 0..64 {
        for b in 0..64 {
            let mut s = 0.0;
            for c in 0..64 {
                s += lower2[a * 64 + c] * t[b * 64 + c];
            }
            out[a * 64 + b] = s;
        }
    }
    out
}

fn lower_first_two(up: &[f64], h: &Metric8) -> Vec<f64> {
    let g = h.matrix();
    let mut cur = up.to_vec();
    for slot in 0..2 {
        let stride = 8usize.pow(3 - slot as u32);
        let mut next = vec![0.0; 4096];
        for (at, out) in next.iter_mut().enumerate() {
            let a = (at / stride) % 8;
            let base = at - a * stride;
            *out = (0..8).map(|b| g[(a, b)] * cur[base + b * stride]).sum();
        }
        cur = next;
    }
    cur
}

/// `Φ_{a i j k} Φ_{b i' j' k'} h^{ii'} h^{jj'} h^{kk'}`.
pub fn three_index_contraction(h: &Metric8, phi: &Polyform) -> Mat8 {
    let t = four_tensor(phi);
    let up = raise_all(&t, h);
    // Φ_b^{ijk} = h_{bc} Φ^{cijk}
    let g = h.matrix();
    let mut out = Mat8::zeros();
    for a in 0..8 {
        for b in 0..8 {
            let mut s = 0.0;
            for c in 0..8 {
                let gbc = g[(b, c)];
                if gbc == 0.0 {
                    continue;
                }
                for r in 0..512 {
                    s += t[a * 512 + r] * gbc * up[c * 512 + r];
                }
            }
            out[(a, b)] = s;
        }
    }
    out
}

/// The metric gradient `G` of `W(h, Φ)`:
///
/// `G_{ab} = −(√14/4) Φ_{a i2 i3 i4} Φ^{i3 i4 k3 k4} Φ_{b k2 k3 k4} h^{i2 k2} − |Φ|_h Φ_{a ijk} Φ_b^{ijk}`.
///
/// For a perturbation `h → h + t k` the derivative is
/// `Σ_{ab} G_{ab} (h^{-1} k h^{-1})_{ab}`, see [`metric_directional_derivative`].
pub fn metric_gradient(h: &Metric8, phi: &Polyform) -> SymTensor8 {
    let t = four_tensor(phi);
    let up = raise_all(&t, h);
    let inv = h.inverse();
    // m[(a, i2), (k3, k4)] = Σ_{i3 i4} Φ_{a i2 i3 i4} Φ^{i3 i4 k3 k4}
    let mut m = vec![0.0; 4096];
    for ai in 0..64 {
        for kk in 0..64 {
            let mut s = 0.0;
            for c in 0..64 {
                s += t[ai * 64 + c] * up[c * 64 + kk];
            }
            m[ai * 64 + kk] = s;
        }
    }
    let mut t1 = Mat8::zeros();
    for a in 0..8 {
        for b in 0..8 {
            let mut s = 0.0;
            for i2 in 0..8 {
                for k2 in 0..8 {
                    let w = inv[(i2, k2)];
                    if w == 0.0 {
                        continue;
                    }
                    let row = &m[(a * 8 + i2) * 64..(a * 8 + i2) * 64 + 64];
                    let col = &t[(b * 8 + k2) * 64..(b * 8 + k2) * 64 + 64];
                    s += w * row.iter().zip(col).map(|(x, y)| x * y).sum::<f64>();
                }
            }
            t1[(a, b)] = s;
        }
    }
    let t2 = three_index_contraction(h, phi);
    let n = norm(phi, h);
    SymTensor8::symmetrized(&(t1 * (-SQRT14 / 4.0) - t2 * n))
}

/// `d/dt W(h + t k, Φ)` at `t = 0` from the metric gradient.
pub fn metric_directional_derivative(h: &Metric8, g: &SymTensor8, k: &SymTensor8) -> f64 {
    let raised = h.inverse() * k.0 * h.inverse();
    g.0.component_mul(&raised).sum()
}

/// Quantities of the cubic bounds for a nonzero self-dual `Φ`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CubicBound {
    /// `f = ⅓⟨Φ, ΦΔ₂Φ⟩`.
    pub f_value: f64,
    /// `⅓|Φ||ΦΔ₂Φ| − |f| ≥ 0`.
    pub bound_gap: f64,
    /// `(√14/3)|Φ|³ − ⅓|Φ||ΦΔ₂Φ| > 0`.
    pub strict_gap: f64,
    /// `(26/3)|Φ|³ − W > 0`.
    pub w_gap: f64,
    /// Whether `ΦΔ₂Φ = cΦ` to `tol·|Φ|²`.
    pub saturated: bool,
    /// `c = 3f/|Φ|²`.
    pub c: f64,
}

pub fn cubic_bound_check(phi: &Polyform, h: &Metric8, o: Orientation, tol: f64) -> Result<CubicBound> {
    require_self_dual(phi, h, o)?;
    let n = norm(phi, h);
    if n == 0.0 {
        return Err(Error::ZeroForm);
    }
    let d = delta(phi, phi, 2, h);
    let dn = norm(&d, h);
    let f = inner(phi, &d, h) / 3.0;
    let c = 3.0 * f / (n * n);
    let mut resid = d.clone();
    resid.axpy(-c, phi);
    let w = SQRT14 * f + 4.0 * n * n * n;
    Ok(CubicBound {
        f_value: f,
        bound_gap: n * dn / 3.0 - f.abs(),
        strict_gap: SQRT14 / 3.0 * n * n * n - n * dn / 3.0,
        w_gap: 26.0 / 3.0 * n * n * n - w,
        saturated: norm(&resid, h) <= tol * n * n,
        c,
    })
}
