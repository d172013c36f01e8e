//! Euclidean metrics on `V = R^8` and orientations.

use alloc::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{mat8, rows8, Compound, Mat8};
use crate::{Polyform, Sign};

/// Asymmetry tolerated before a metric is rejected (relative to its size).
const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue.
const EIGEN_FLOOR: f64 = 1e-10;

/// Orientation of `V`, relative to `e^1∧…∧e^8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Orientation {
    pub sign: Sign,
}

impl Orientation {
    pub const STANDARD: Orientation = Orientation { sign: Sign::Plus };
    pub const REVERSED: Orientation = Orientation { sign: Sign::Minus };
}

impl Default for Orientation {
    fn default() -> Self {
        Self::STANDARD
    }
}

#[derive(Debug)]
struct Derived {
    /// Minors of `h^{-1}`, used by the generalized products.
    inv_minors: Compound,
    /// Blade action of `Lᵀ` where `h^{-1} = L Lᵀ`: coefficients in `e` to
    /// coefficients in the orthonormal coframe `f = L^{-1} e`.
    to_frame: Compound,
    from_frame: Compound,
    /// `Lᵀ` itself (one-form change of basis into the frame).
    lt: Mat8,
}

/// A symmetric positive-definite bilinear form `h_{ab}` on `V`.
///
/// Cloning is cheap: the inverse minors and the orthonormal frame are
/// computed once and shared.
#[derive(Clone, Debug)]
pub struct Metric8 {
    h: Mat8,
    inv: Mat8,
    det: f64,
    orthonormal: bool,
    derived: Arc<Derived>,
}

impl PartialEq for Metric8 {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}

impl Metric8 {
    /// The standard Euclidean metric `h₀`.
    pub fn identity() -> Self {
        Self::build(Mat8::identity()).expect("identity is a metric")
    }

    /// Validates symmetry and positivity of `rows` (row-major `h_{ab}`).
    pub fn new(rows: [[f64; 8]; 8]) -> Result<Self> {
        Self::from_matrix(mat8(&rows))
    }

    pub fn from_matrix(h: Mat8) -> Result<Self> {
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteMetric);
        }
        let scale = h.amax().max(1.0);
        let asym = (h - h.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::AsymmetricMetric(asym));
        }
        let h = (h + h.transpose()) * 0.5;
        let min_eig = h.symmetric_eigenvalues().min();
        if min_eig <= EIGEN_FLOOR {
            return Err(Error::DegenerateMetric(min_eig));
        }
        Self::build(h)
    }

    fn build(h: Mat8) -> Result<Self> {
        let orthonormal = h == Mat8::identity();
        let inv = if orthonormal {
            Mat8::identity()
        } else {
            let chol = h.cholesky().ok_or(Error::DegenerateMetric(0.0))?;
            let inv = chol.inverse();
            (inv + inv.transpose()) * 0.5
        };
        let (l, lt) = if orthonormal {
            (Mat8::identity(), Mat8::identity())
        } else {
            let l = inv.cholesky().ok_or(Error::DegenerateMetric(0.0))?.unpack();
            (l, l.transpose())
        };
        let lt_inv = l.try_inverse().ok_or(Error::DegenerateMetric(0.0))?.transpose();
        let derived = Derived {
            inv_minors: Compound::new(&inv),
            to_frame: Compound::new(&lt),
            from_frame: Compound::new(&lt_inv),
            lt,
        };
        Ok(Self {
            det: h.determinant(),
            h,
            inv,
            orthonormal,
            derived: Arc::new(derived),
        })
    }

    /// `c · h` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_matrix(self.h * c)
    }

    /// Whether this is exactly the identity, enabling the bitmask fast path.
    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn matrix(&self) -> &Mat8 {
        &self.h
    }

    /// `h^{ab}`.
    pub fn inverse(&self) -> &Mat8 {
        &self.inv
    }

    pub fn rows(&self) -> [[f64; 8]; 8] {
        rows8(&self.h)
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `det(h^{-1}[A, B])` for blades of equal rank.
    #[inline]
    pub fn inverse_minor(&self, a: u8, b: u8) -> f64 {
        self.derived.inv_minors.minor(a, b)
    }

    pub(crate) fn inverse_minors(&self) -> &Compound {
        &self.derived.inv_minors
    }

    /// Rewrites `a` in the `h`-orthonormal, positively oriented coframe
    /// `f = L^{-1} e` (`h^{-1} = L Lᵀ`).
    pub fn to_frame(&self, a: &Polyform) -> Polyform {
        if self.orthonormal {
            a.clone()
        } else {
            self.derived.to_frame.apply(a)
        }
    }

    /// Inverse of [`to_frame`](Self::to_frame).
    pub fn from_frame(&self, a: &Polyform) -> Polyform {
        if self.orthonormal {
            a.clone()
        } else {
            self.derived.from_frame.apply(a)
        }
    }

    /// One-form coefficients in the orthonormal coframe.
    pub fn one_form_to_frame(&self, v: &[f64; 8]) -> [f64; 8] {
        let w = self.derived.lt * nalgebra::SVector::<f64, 8>::from_column_slice(v);
        let mut out = [0.0; 8];
        out.copy_from_slice(w.as_slice());
        out
    }

    /// `h^{-1}(u, v)` for one-forms.
    pub fn inner_one_forms(&self, u: &[f64; 8], v: &[f64; 8]) -> f64 {
        let mut s = 0.0;
        for a in 0..8 {
            for b in 0..8 {
                s += u[a] * self.inv[(a, b)] * v[b];
            }
        }
        s
    }

    /// Raises the index of a one-form: `(h^{-1} u)`.
    pub fn sharp(&self, u: &[f64; 8]) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (a, o) in out.iter_mut().enumerate() {
            *o = (0..8).map(|b| self.inv[(a, b)] * u[b]).sum();
        }
        out
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use alloc::format;
    use alloc::vec::Vec;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Metric8 {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            self.rows().serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Metric8 {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let raw: Vec<Vec<f64>> = Vec::deserialize(d)?;
            if raw.len() != 8 || raw.iter().any(|r| r.len() != 8) {
                return Err(D::Error::custom("metric: expected an 8x8 row-major array"));
            }
            let mut rows = [[0.0; 8]; 8];
            for (r, row) in raw.iter().enumerate() {
                rows[r].copy_from_slice(row);
            }
            Metric8::new(rows).map_err(|e| D::Error::custom(format!("metric: {e}")))
        }
    }
}
