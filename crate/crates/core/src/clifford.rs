//! A real irreducible representation of `Cl(V*, h*)` on `Σ = R^16`.
//!
//! The generators are assembled from left multiplication by the
//! imaginary octonions acting on `O ⊕ O`: with `L_i` the matrix of
//! `x ↦ e_i x`,
//!
//! ```text
//! γ^1 = [[0, I], [I, 0]],   γ^{i+1} = [[0, L_iᵀ], [L_i, 0]]   (i = 1..7)
//! ```
//!
//! Each `γ^a` is a symmetric signed permutation matrix. The admissible
//! pairing `ℬ` is the dot product on `R^16`.

use alloc::vec::Vec;

use nalgebra::{SMatrix, SVector};

use crate::blade;
use crate::error::{Error, Result};
use crate::exterior;
use crate::linalg::Mat8;
use crate::{Metric8, Polyform, Sign};

pub type Mat16 = SMatrix<f64, 16, 16>;

/// Oriented triples `(i, j, k)` with `e_i e_j = e_k` for the imaginary
/// octonion units `e_1..e_7`.
const FANO: [[usize; 3]; 7] = [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

/// Tolerance of the structural checks run by [`CliffordRep::build`].
const BUILD_TOL: f64 = 1e-12;
/// Tolerance for chirality and unit-length preconditions.
const TAG_TOL: f64 = 1e-10;

/// A spinor in `Σ = R^16`, optionally tagged with its chirality.
#[derive(Clone, Debug, PartialEq)]
pub struct Spinor16 {
    pub components: [f64; 16],
    pub chirality: Option<Sign>,
}

impl Spinor16 {
    pub fn new(components: [f64; 16]) -> Self {
        Self { components, chirality: None }
    }

    pub fn zero() -> Self {
        Self::new([0.0; 16])
    }

    pub fn from_vector(v: &SVector<f64, 16>) -> Self {
        let mut c = [0.0; 16];
        c.copy_from_slice(v.as_slice());
        Self::new(c)
    }

    pub fn vector(&self) -> SVector<f64, 16> {
        SVector::from_column_slice(&self.components)
    }

    /// `ℬ(ξ, η)`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&x| x == 0.0)
    }

    /// Tags the spinor with its chirality, or fails when it is not
    /// chiral to `1e-10` (relative to its norm).
    pub fn tagged(mut self, rep: &CliffordRep) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroSpinor);
        }
        let v = self.vector();
        let g = rep.chirality() * v;
        let n = v.norm();
        let plus = (g - v).norm() / n;
        let minus = (g + v).norm() / n;
        let (sign, res) = if plus <= minus { (Sign::Plus, plus) } else { (Sign::Minus, minus) };
        if res > TAG_TOL {
            return Err(Error::NotChiral(res));
        }
        self.chirality = Some(sign);
        Ok(self)
    }
}

impl core::ops::Neg for Spinor16 {
    type Output = Spinor16;

    fn neg(mut self) -> Spinor16 {
        for x in self.components.iter_mut() {
            *x = -*x;
        }
        self
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Spinor16 {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            self.components.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Spinor16 {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            <[f64; 16]>::deserialize(d).map(Spinor16::new)
        }
    }
}

/// The matrices `γ^1..γ^8` together with the images of all 256 blades.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    gammas: [Mat16; 8],
    chirality: Mat16,
    proj_plus: Mat16,
    proj_minus: Mat16,
    images: Vec<Mat16>,
}

fn octonion_left(i: usize) -> Mat8 {
    // product table on basis indices 0..8, index 0 = 1
    let mut l = Mat8::zeros();
    l[(i, 0)] = 1.0;
    l[(0, i)] = -1.0;
    for t in FANO {
        for r in 0..3 {
            let (a, b, c) = (t[r], t[(r + 1) % 3], t[(r + 2) % 3]);
            // e_a e_b = e_c, e_b e_a = -e_c
            if a == i {
                l[(c, b)] = 1.0;
            }
            if b == i {
                l[(c, a)] = -1.0;
            }
        }
    }
    l
}

fn block_offdiag(upper: &Mat8, lower: &Mat8) -> Mat16 {
    let mut m = Mat16::zeros();
    m.fixed_view_mut::<8, 8>(0, 8).copy_from(upper);
    m.fixed_view_mut::<8, 8>(8, 0).copy_from(lower);
    m
}

impl CliffordRep {
    /// Builds the representation and checks the Clifford relations,
    /// symmetry of the generators, chirality properties and orthogonality
    /// of the blade images.
    pub fn build() -> Result<Self> {
        let mut gammas = [Mat16::zeros(); 8];
        gammas[0] = block_offdiag(&Mat8::identity(), &Mat8::identity());
        for i in 1..8 {
            let l = octonion_left(i);
            gammas[i] = block_offdiag(&l.transpose(), &l);
        }

        let mut images = alloc::vec![Mat16::identity(); 256];
        for m in 1..=255u8 {
            let low = m.trailing_zeros() as usize;
            images[m as usize] = gammas[low] * images[(m & !(1 << low)) as usize];
        }
        let chirality = images[255];
        let id = Mat16::identity();
        let rep = Self {
            gammas,
            chirality,
            proj_plus: (id + chirality) * 0.5,
            proj_minus: (id - chirality) * 0.5,
            images,
        };
        rep.check()?;
        Ok(rep)
    }

    fn check(&self) -> Result<()> {
        let id = Mat16::identity();
        for (i, gi) in self.gammas.iter().enumerate() {
            if (gi - gi.transpose()).amax() > BUILD_TOL {
                return Err(Error::Representation("generator not symmetric"));
            }
            if (gi * self.chirality + self.chirality * gi).amax() > BUILD_TOL {
                return Err(Error::Representation("generator does not anticommute with chirality"));
            }
            for (j, gj) in self.gammas.iter().enumerate() {
                let expect = if i == j { id * 2.0 } else { Mat16::zeros() };
                if (gi * gj + gj * gi - expect).amax() > BUILD_TOL {
                    return Err(Error::Representation("Clifford relation violated"));
                }
            }
        }
        if (self.chirality * self.chirality - id).amax() > BUILD_TOL || self.chirality.trace().abs() > BUILD_TOL {
            return Err(Error::Representation("chirality operator malformed"));
        }
        // distinct blade images are trace-orthogonal, so they span all 16×16 matrices
        for a in 0..256 {
            for b in a..256 {
                let t = self.images[a].dot(&self.images[b]);
                let expect = if a == b { 16.0 } else { 0.0 };
                if (t - expect).abs() > BUILD_TOL {
                    return Err(Error::Representation("blade images not orthogonal"));
                }
            }
        }
        Ok(())
    }

    /// `γ^{i}` for `i` in `1..=8`.
    pub fn gamma(&self, i: usize) -> &Mat16 {
        &self.gammas[i - 1]
    }

    pub fn gammas(&self) -> &[Mat16; 8] {
        &self.gammas
    }

    /// `γ(ν) = γ^1 ⋯ γ^8`.
    pub fn chirality(&self) -> &Mat16 {
        &self.chirality
    }

    pub fn proj_plus(&self) -> &Mat16 {
        &self.proj_plus
    }

    pub fn proj_minus(&self) -> &Mat16 {
        &self.proj_minus
    }

    pub fn projector(&self, mu: Sign) -> &Mat16 {
        match mu {
            Sign::Plus => &self.proj_plus,
            Sign::Minus => &self.proj_minus,
        }
    }

    /// `γ^{i1} ⋯ γ^{ik}` for the blade `mask`.
    pub fn blade_image(&self, mask: u8) -> &Mat16 {
        &self.images[mask as usize]
    }

    /// The image of `a` for the identity metric.
    pub fn represent_orthonormal(&self, a: &Polyform) -> Mat16 {
        let mut m = Mat16::zeros();
        for (mask, x) in a.terms() {
            m += self.images[mask as usize] * x;
        }
        m
    }

    /// `Ψ_h(a)`: the image of `a`, where `γ^a` is assigned to the `a`-th
    /// covector of the `h`-orthonormal frame of [`Metric8::to_frame`].
    pub fn represent(&self, a: &Polyform, h: &Metric8) -> Mat16 {
        self.represent_orthonormal(&h.to_frame(a))
    }

    /// Inverse of [`represent`](Self::represent).
    pub fn dequantize(&self, m: &Mat16, h: &Metric8) -> Polyform {
        let mut p = Polyform::zero();
        for mask in 0..=255u8 {
            // tr(γ_Aᵀ M) / 16 picks the coefficient of γ_A
            p[mask] = self.images[mask as usize].component_mul(m).sum() / 16.0;
        }
        h.from_frame(&p)
    }

    /// `Σ`-chiral part of `ξ`.
    pub fn project(&self, xi: &Spinor16, mu: Sign) -> Spinor16 {
        Spinor16::from_vector(&(self.projector(mu) * xi.vector()))
    }
}

/// `S(a) = 16 a^{(0)}`.
pub fn ka_trace(a: &Polyform) -> f64 {
    16.0 * a.scalar_part()
}

/// `Q(a, b) = S(τ(a) ◇_h b)`.
pub fn frobenius_pairing(a: &Polyform, b: &Polyform, h: &Metric8) -> f64 {
    // only the scalar part of the product is needed
    let ta = a.reversion();
    if h.is_orthonormal() {
        let s: f64 = ta
            .terms()
            .map(|(m, x)| blade::geometric_sign(m, m) as f64 * x * b[m])
            .sum();
        return 16.0 * s;
    }
    ka_trace(&exterior::geometric_via_frame(&ta, b, h))
}

/// The spinor matrix `Ψ(u_1) ⋯ Ψ(u_n)` and the rotation `ρ_{u_1} ∘ … ∘ ρ_{u_n}`
/// of one-form coefficients it covers, for an even number of `h`-unit
/// one-forms. `ρ_u(v) = v − 2 h^{-1}(u, v) u`.
pub fn spin_action(units: &[[f64; 8]], h: &Metric8, rep: &CliffordRep) -> Result<(Mat16, Mat8)> {
    if units.len() % 2 != 0 {
        return Err(Error::OddCount(units.len()));
    }
    for (index, u) in units.iter().enumerate() {
        let norm = libm::sqrt(h.inner_one_forms(u, u).max(0.0));
        if (norm - 1.0).abs() > TAG_TOL {
            return Err(Error::NotUnit { index, norm });
        }
    }
    let mut spin = Mat16::identity();
    let mut rot = Mat8::identity();
    for u in units {
        spin *= rep.represent(&Polyform::one_form(u), h);
        let uv = SVector::<f64, 8>::from_column_slice(u);
        let us = SVector::<f64, 8>::from_column_slice(&h.sharp(u));
        rot *= Mat8::identity() - uv * us.transpose() * 2.0;
    }
    Ok((spin, rot))
}
