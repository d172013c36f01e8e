//! Metric operations on `ΛV*`: generalized products `Δ_k`, the geometric
//! product `◇`, the Hodge star and the inner product.
//!
//! When the metric is the identity every product goes through the
//! bitmask sign tables in [`crate::blade`]. Other metrics are handled by
//! moving to an `h`-orthonormal frame and back. The explicit expansion
//! from the minors of `h^{-1}`,
//!
//! `e^A Δ_k e^B = Σ_{A'⊆A, B'⊆B, |A'|=|B'|=k} det(h^{-1}[A',B']) (ι_{A'} e^A) ∧ (ι_{B'} e^B)`,
//!
//! with `◇` the signed sum `Σ_k (-1)^{[(k+1)/2] + kp} Δ_k`, is available as
//! [`delta_general`] and [`geometric_general`].

use nalgebra::DMatrix;

use crate::blade::{self, CONTRACTION_SIGNS, GEOMETRIC_SIGNS, RANK_SIZES};
use crate::error::{Error, Result};
use crate::linalg::Mat8;
use crate::{Metric8, Orientation, Polyform};

/// Sign of `Δ_k` in the expansion of `◇` for a left factor of rank `p`.
#[inline]
pub const fn expansion_sign(k: usize, p: usize) -> f64 {
    if ((k + 1) / 2 + k * p) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `a Δ_k^h b`. Fails for `k > 8`.
pub fn generalized_product(a: &Polyform, b: &Polyform, k: usize, h: &Metric8) -> Result<Polyform> {
    if k > 8 {
        return Err(Error::InvalidOrder(k));
    }
    Ok(delta(a, b, k, h))
}

/// `a Δ_k^h b` for `k ≤ 8` (zero for larger `k`).
pub fn delta(a: &Polyform, b: &Polyform, k: usize, h: &Metric8) -> Polyform {
    delta_via_frame(a, b, k, h)
}

fn delta_orthonormal(a: &Polyform, b: &Polyform, k: usize) -> Polyform {
    let mut out = Polyform::zero();
    if k > 8 {
        return out;
    }
    let bt: alloc::vec::Vec<(u8, f64)> = b.terms().collect();
    for (ma, x) in a.terms() {
        let row = &CONTRACTION_SIGNS[ma as usize];
        for &(mb, y) in &bt {
            if (ma & mb).count_ones() as usize == k {
                out[ma ^ mb] += row[mb as usize] as f64 * x * y;
            }
        }
    }
    out
}

/// `a Δ_k^h b` through the explicit minor expansion, ignoring the
/// orthonormal flag.
pub fn delta_general(a: &Polyform, b: &Polyform, k: usize, h: &Metric8) -> Polyform {
    let mut out = Polyform::zero();
    if k > 8 {
        return out;
    }
    let bt: alloc::vec::Vec<(u8, f64)> = b.terms().filter(|&(m, _)| blade::rank(m) >= k).collect();
    for (ma, x) in a.terms() {
        if blade::rank(ma) < k {
            continue;
        }
        for &(mb, y) in &bt {
            accumulate_delta(&mut out, ma, mb, k, x * y, h);
        }
    }
    out
}

#[inline]
fn accumulate_delta(out: &mut Polyform, ma: u8, mb: u8, k: usize, xy: f64, h: &Metric8) {
    for sa in blade::submasks_of_rank(ma, k) {
        let ra = ma & !sa;
        let s_a = blade::multi_interior_sign(sa, ma) as f64;
        for sb in blade::submasks_of_rank(mb, k) {
            let rb = mb & !sb;
            if ra & rb != 0 {
                continue;
            }
            let d = h.inverse_minor(sa, sb);
            if d == 0.0 {
                continue;
            }
            let s = s_a * blade::multi_interior_sign(sb, mb) as f64 * GEOMETRIC_SIGNS[ra as usize][rb as usize] as f64;
            out[ra | rb] += s * d * xy;
        }
    }
}

/// The geometric (Kähler-Atiyah) product `a ◇_h b`.
pub fn geometric_product(a: &Polyform, b: &Polyform, h: &Metric8) -> Polyform {
    geometric_via_frame(a, b, h)
}

fn geometric_orthonormal(a: &Polyform, b: &Polyform) -> Polyform {
    let mut out = Polyform::zero();
    let bt: alloc::vec::Vec<(u8, f64)> = b.terms().collect();
    for (ma, x) in a.terms() {
        let row = &GEOMETRIC_SIGNS[ma as usize];
        for &(mb, y) in &bt {
            out[ma ^ mb] += row[mb as usize] as f64 * x * y;
        }
    }
    out
}

/// `a ◇_h b` as the signed sum of explicit generalized products, ignoring
/// the orthonormal flag.
pub fn geometric_general(a: &Polyform, b: &Polyform, h: &Metric8) -> Polyform {
    let mut out = Polyform::zero();
    let bt: alloc::vec::Vec<(u8, f64)> = b.terms().collect();
    for (ma, x) in a.terms() {
        let p = blade::rank(ma);
        for &(mb, y) in &bt {
            let kmax = p.min(blade::rank(mb));
            for k in 0..=kmax {
                accumulate_delta(&mut out, ma, mb, k, expansion_sign(k, p) * x * y, h);
            }
        }
    }
    out
}

/// `a ◇_h b` computed in the `h`-orthonormal frame.
pub fn geometric_via_frame(a: &Polyform, b: &Polyform, h: &Metric8) -> Polyform {
    if h.is_orthonormal() {
        return geometric_orthonormal(a, b);
    }
    h.from_frame(&geometric_orthonormal(&h.to_frame(a), &h.to_frame(b)))
}

/// `a Δ_k^h b` computed in the `h`-orthonormal frame.
pub fn delta_via_frame(a: &Polyform, b: &Polyform, k: usize, h: &Metric8) -> Polyform {
    if h.is_orthonormal() {
        return delta_orthonormal(a, b, k);
    }
    h.from_frame(&delta_orthonormal(&h.to_frame(a), &h.to_frame(b), k))
}

/// `⟨a, b⟩_h`, block diagonal across ranks.
pub fn inner(a: &Polyform, b: &Polyform, h: &Metric8) -> f64 {
    if h.is_orthonormal() {
        return a.coeff_dot(b);
    }
    let minors = h.inverse_minors();
    let mut total = 0.0;
    for k in 0..=8 {
        let n = RANK_SIZES[k];
        let rows = blade::of_rank(k);
        let block = minors.block(k);
        for (i, &ma) in rows.iter().enumerate() {
            let x = a[ma];
            if x == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for (j, &mb) in rows.iter().enumerate() {
                acc += block[i * n + j] * b[mb];
            }
            total += x * acc;
        }
    }
    total
}

/// `|a|_h`.
pub fn norm(a: &Polyform, h: &Metric8) -> f64 {
    libm::sqrt(inner(a, a, h).max(0.0))
}

/// The volume form `ν_h = o·√det(h)·e^1∧…∧e^8`.
pub fn volume_form(h: &Metric8, o: Orientation) -> Polyform {
    Polyform::blade(0xff, o.sign.value() * libm::sqrt(h.det()))
}

/// `*_h a = τ(a) ◇_h ν_h`.
pub fn hodge(a: &Polyform, h: &Metric8, o: Orientation) -> Polyform {
    let nu = volume_form(h, o);
    if h.is_orthonormal() {
        geometric_orthonormal(&a.reversion(), &nu)
    } else {
        // ◇ with the top form only involves the full contraction
        geometric_via_frame(&a.reversion(), &nu, h)
    }
}

/// Splits a 4-form into its self-dual and anti-self-dual parts.
pub fn self_dual_split(w: &Polyform, h: &Metric8, o: Orientation) -> Result<(Polyform, Polyform)> {
    w.require_rank(4)?;
    let star = hodge(w, h, o);
    let plus = (w + &star) * 0.5;
    let minus = (w - &star) * 0.5;
    Ok((plus, minus))
}

/// `|*a - s·a|_h / |a|_h` for `s = ±1` (zero for `a = 0`).
pub fn duality_residual(a: &Polyform, s: f64, h: &Metric8, o: Orientation) -> f64 {
    let n = norm(a, h);
    if n == 0.0 {
        return 0.0;
    }
    let star = hodge(a, h, o);
    norm(&(&star - &(a * s)), h) / n
}

/// Derivation action of `A ∈ gl(8)` on polyforms,
/// `ρ(A)α = Σ_{b,c} A_{cb} e^c ∧ ι_{e_b} α`, the infinitesimal form of
/// acting on one-form coefficients by `v ↦ (I + tA) v`.
pub fn derivation(m: &Mat8, a: &Polyform) -> Polyform {
    let mut out = Polyform::zero();
    for (mask, x) in a.terms() {
        for b in blade::indices(mask).map(|i| i - 1) {
            let s = blade::interior_sign(b, mask) as f64;
            let rest = mask & !(1 << b);
            for c in 0..8 {
                let acb = m[(c, b)];
                if acb == 0.0 || rest & (1 << c) != 0 {
                    continue;
                }
                let w = GEOMETRIC_SIGNS[1 << c][rest as usize] as f64;
                out[rest | (1 << c)] += acb * s * w * x;
            }
        }
    }
    out
}

/// Pushes a polyform forward along the one-form map `v ↦ M v`.
pub fn transform(m: &Mat8, a: &Polyform) -> Polyform {
    crate::linalg::Compound::new(m).apply(a)
}

/// The 70×70 matrix of a linear map on `Λ⁴` in the [`blade::of_rank`]
/// basis.
pub fn rank4_matrix(f: impl Fn(&Polyform) -> Polyform) -> DMatrix<f64> {
    let basis = blade::of_rank(4);
    let mut m = DMatrix::zeros(70, 70);
    for (j, &mb) in basis.iter().enumerate() {
        let img = f(&Polyform::blade(mb, 1.0));
        for (i, &ma) in basis.iter().enumerate() {
            m[(i, j)] = img[ma];
        }
    }
    m
}
