//! Seeded sampling of forms, spinors and rotations.
//!
//! All generators are `ChaCha8Rng` streams; `rng(seed, stream)` gives
//! independent reproducible streams for restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::clifford::{CliffordRep, Spinor16};
use crate::linalg::Mat8;
use crate::spin7::self_dual_basis;
use crate::{Metric8, Orientation, Polyform, Sign};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard Gaussian coefficients on every blade of the ranks in `ranks`
/// (a bit set, bit `k` for rank `k`).
pub fn gaussian_polyform<R: Rng + ?Sized>(rng: &mut R, ranks: u16) -> Polyform {
    let mut p = Polyform::zero();
    for m in 0..=255u8 {
        if ranks & (1 << m.count_ones()) != 0 {
            p[m] = gaussian(rng);
        }
    }
    p
}

/// Standard Gaussian in `Λ⁴₊` with respect to its orthonormal basis.
pub fn gaussian_self_dual<R: Rng + ?Sized>(rng: &mut R, h: &Metric8, o: Orientation) -> Polyform {
    let mut p = Polyform::zero();
    for b in self_dual_basis(h, o) {
        p.axpy(gaussian(rng), &b);
    }
    p
}

/// Uniform on the sphere of radius `radius` in `Λ⁴₊`.
pub fn self_dual_on_sphere<R: Rng + ?Sized>(rng: &mut R, h: &Metric8, o: Orientation, radius: f64) -> Polyform {
    loop {
        let p = gaussian_self_dual(rng, h, o);
        let n = crate::exterior::norm(&p, h);
        if n > 1e-12 {
            return p * (radius / n);
        }
    }
}

/// Haar-distributed element of `SO(8)`.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat8 {
    let g = Mat8::from_fn(|_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..8 {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    if q.determinant() < 0.0 {
        let mut col = q.column_mut(0);
        col *= -1.0;
    }
    q
}

/// An `h`-unit one-form.
pub fn unit_one_form<R: Rng + ?Sized>(rng: &mut R, h: &Metric8) -> [f64; 8] {
    loop {
        let v: [f64; 8] = core::array::from_fn(|_| gaussian(rng));
        let n = libm::sqrt(h.inner_one_forms(&v, &v));
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

pub fn spinor<R: Rng + ?Sized>(rng: &mut R) -> Spinor16 {
    Spinor16::new(core::array::from_fn(|_| gaussian(rng)))
}

/// A unit spinor of chirality `mu`, tagged.
pub fn unit_chiral_spinor<R: Rng + ?Sized>(rng: &mut R, rep: &CliffordRep, mu: Sign) -> Spinor16 {
    loop {
        let p = rep.project(&spinor(rng), mu);
        let n = p.norm();
        if n > 1e-12 {
            let mut s = Spinor16::new(p.components.map(|x| x / n));
            s.chirality = Some(mu);
            return s;
        }
    }
}
