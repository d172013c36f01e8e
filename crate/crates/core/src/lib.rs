#![no_std]

//! Algebra of Spin(7) forms on an oriented Euclidean 8-space.
//!
//! The crate models the exterior algebra `ΛV*` of `V = R^8` as a dense
//! 256-component [`Polyform`] and equips it with the metric-dependent
//! geometric (Kähler-Atiyah) product. On top of that it provides:
//!
//! * a real irreducible Clifford representation on `R^16` ([`clifford`]),
//! * signed spinor squares and their inversion ([`square`]),
//! * the quadratic criterion for conformal Spin(7) forms together with the
//!   `1 ⊕ 7 ⊕ 27 ⊕ 35` splitting of 4-forms ([`spin7`]),
//! * the cubic potential `W` with its derivatives ([`potential`]),
//! * a projected gradient flow on the radius-`√14` sphere of self-dual
//!   4-forms ([`flow`]).
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the companion `spin7` crate.
//!
//! Coefficients use the det convention: for an orthonormal coframe
//! `e^{i1}∧…∧e^{ik}` (increasing indices) has unit norm. Blade `mask` bit
//! `i` stands for `e^{i+1}`.

extern crate alloc;

pub mod blade;
pub mod clifford;
mod error;
pub mod exterior;
pub mod flow;
pub mod linalg;
pub mod metric;
mod polyform;
pub mod potential;
pub mod random;
pub mod spin7;
pub mod square;

pub use clifford::{CliffordRep, Mat16, Spinor16};
pub use error::{Error, Result};
pub use metric::{Metric8, Orientation};
pub use polyform::Polyform;

/// Dimension of the underlying vector space.
pub const DIM: usize = 8;
/// Number of blades of `ΛV*`.
pub const BLADES: usize = 256;
/// `|Φ|²` of a metric Spin(7) form.
pub const CAYLEY_NORM_SQ: f64 = 14.0;
/// `√14`, the norm of a metric Spin(7) form.
pub const SQRT14: f64 = 3.741_657_386_773_941_4;

/// A sign `±1`, used for chirality `μ`, the squaring sign `κ` and the
/// Spin(7)± branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "i8", try_from = "i8"))]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Sign of `x`, with `0` mapped to `Plus`.
    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = &'static str;

    fn try_from(v: i8) -> core::result::Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err("sign must be +1 or -1"),
        }
    }
}

impl core::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}
