use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::blade::{self, GEOMETRIC_SIGNS};
use crate::error::{Error, Result};
use crate::BLADES;

/// Which grade involution to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Involution {
    /// `π`: `(-1)^k` on rank `k`.
    Parity,
    /// `τ`: `(-1)^{k(k-1)/2}` on rank `k`.
    Reversion,
}

/// An element of `ΛV*`, stored densely by blade mask.
#[derive(Clone, PartialEq)]
pub struct Polyform {
    c: [f64; BLADES],
}

impl Default for Polyform {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for Polyform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (mask, x) in self.terms() {
            m.entry(&BladeLabel(mask), &x);
        }
        m.finish()
    }
}

struct BladeLabel(u8);

impl fmt::Debug for BladeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("e")?;
        if self.0 == 0 {
            return f.write_str("0");
        }
        for i in blade::indices(self.0) {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl Polyform {
    pub const fn zero() -> Self {
        Self { c: [0.0; BLADES] }
    }

    pub fn scalar(x: f64) -> Self {
        Self::blade(0, x)
    }

    pub fn blade(mask: u8, x: f64) -> Self {
        let mut p = Self::zero();
        p.c[mask as usize] = x;
        p
    }

    /// `x · e^{i1}∧…∧e^{ik}` for 1-based indices in any order.
    pub fn from_indices(indices: &[usize], x: f64) -> Result<Self> {
        let (mask, sign) = parse_indices(indices)?;
        Ok(Self::blade(mask, sign as f64 * x))
    }

    /// The one-form `Σ v_i e^{i+1}`.
    pub fn one_form(v: &[f64; 8]) -> Self {
        let mut p = Self::zero();
        for (i, &x) in v.iter().enumerate() {
            p.c[1 << i] = x;
        }
        p
    }

    pub fn from_coeffs(c: [f64; BLADES]) -> Self {
        Self { c }
    }

    pub fn coeffs(&self) -> &[f64; BLADES] {
        &self.c
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64; BLADES] {
        &mut self.c
    }

    /// Coefficient on `e^{i1}∧…∧e^{ik}`, with the sign of the sorting
    /// permutation applied.
    pub fn get_indices(&self, indices: &[usize]) -> Result<f64> {
        let (mask, sign) = parse_indices(indices)?;
        Ok(sign as f64 * self.c[mask as usize])
    }

    /// Nonzero `(mask, coefficient)` pairs in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u8, f64)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(m, &x)| (m as u8, x))
    }

    pub fn scalar_part(&self) -> f64 {
        self.c[0]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// The rank-`k` component.
    pub fn rank_part(&self, k: usize) -> Self {
        let mut p = Self::zero();
        if k <= 8 {
            for &m in blade::of_rank(k) {
                p.c[m as usize] = self.c[m as usize];
            }
        }
        p
    }

    /// Coefficients of the rank-`k` component in [`blade::of_rank`] order.
    pub fn rank_vector(&self, k: usize) -> alloc::vec::Vec<f64> {
        blade::of_rank(k).iter().map(|&m| self.c[m as usize]).collect()
    }

    /// Inverse of [`rank_vector`](Self::rank_vector).
    pub fn from_rank_vector(k: usize, v: &[f64]) -> Self {
        let mut p = Self::zero();
        for (&m, &x) in blade::of_rank(k).iter().zip(v) {
            p.c[m as usize] = x;
        }
        p
    }

    /// Largest absolute coefficient outside rank `k`.
    pub fn off_rank_max(&self, k: usize) -> f64 {
        self.terms()
            .filter(|&(m, _)| blade::rank(m) != k)
            .fold(0.0, |acc, (_, x)| acc.max(x.abs()))
    }

    /// Fails unless every coefficient outside rank `k` vanishes.
    pub fn require_rank(&self, k: usize) -> Result<()> {
        if self.off_rank_max(k) == 0.0 {
            Ok(())
        } else {
            Err(Error::MixedRank { expected: k })
        }
    }

    /// Ranks carrying a nonzero coefficient, as a bit set.
    pub fn ranks(&self) -> u16 {
        self.terms().fold(0, |acc, (m, _)| acc | 1 << blade::rank(m))
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Euclidean norm of the coefficient vector (the `h`-norm when `h`
    /// is the identity).
    pub fn coeff_norm(&self) -> f64 {
        libm::sqrt(self.coeff_dot(self))
    }

    pub fn coeff_dot(&self, other: &Self) -> f64 {
        self.c.iter().zip(&other.c).map(|(a, b)| a * b).sum()
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += s * b;
        }
    }

    pub fn map(&self, f: impl Fn(u8, f64) -> f64) -> Self {
        let mut p = Self::zero();
        for (m, x) in p.c.iter_mut().enumerate() {
            *x = f(m as u8, self.c[m]);
        }
        p
    }

    pub fn involution(&self, kind: Involution) -> Self {
        self.map(|m, x| {
            let k = blade::rank(m);
            let odd = match kind {
                Involution::Parity => k % 2 == 1,
                Involution::Reversion => (k * (k.saturating_sub(1)) / 2) % 2 == 1,
            };
            if odd {
                -x
            } else {
                x
            }
        })
    }

    pub fn parity(&self) -> Self {
        self.involution(Involution::Parity)
    }

    pub fn reversion(&self) -> Self {
        self.involution(Involution::Reversion)
    }

    /// Exterior product. Metric independent.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.terms() {
            let row = &GEOMETRIC_SIGNS[a as usize];
            for (b, y) in other.terms() {
                if a & b == 0 {
                    out.c[(a | b) as usize] += row[b as usize] as f64 * x * y;
                }
            }
        }
        out
    }

    /// Interior product `ι_v` with the vector `v = Σ v^i e_{i+1}`.
    pub fn interior(&self, v: &[f64; 8]) -> Self {
        let mut out = Self::zero();
        for (b, y) in self.terms() {
            for (i, &vi) in v.iter().enumerate() {
                if vi == 0.0 {
                    continue;
                }
                let s = blade::interior_sign(i, b);
                if s != 0 {
                    out.c[(b & !(1 << i)) as usize] += s as f64 * vi * y;
                }
            }
        }
        out
    }

    /// `ι_{e_{i+1}}` for a bit index `i`.
    pub fn interior_basis(&self, i: usize) -> Self {
        let mut v = [0.0; 8];
        v[i] = 1.0;
        self.interior(&v)
    }
}

fn parse_indices(indices: &[usize]) -> Result<(u8, i8)> {
    if let Some(&bad) = indices.iter().find(|&&i| !(1..=8).contains(&i)) {
        return Err(Error::BadIndex(bad));
    }
    blade::from_indices(indices).ok_or(Error::RepeatedIndex)
}

impl Index<u8> for Polyform {
    type Output = f64;

    fn index(&self, mask: u8) -> &f64 {
        &self.c[mask as usize]
    }
}

impl IndexMut<u8> for Polyform {
    fn index_mut(&mut self, mask: u8) -> &mut f64 {
        &mut self.c[mask as usize]
    }
}

impl AddAssign<&Polyform> for Polyform {
    fn add_assign(&mut self, rhs: &Polyform) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&Polyform> for Polyform {
    fn sub_assign(&mut self, rhs: &Polyform) {
        self.axpy(-1.0, rhs);
    }
}

impl MulAssign<f64> for Polyform {
    fn mul_assign(&mut self, s: f64) {
        for x in self.c.iter_mut() {
            *x *= s;
        }
    }
}

impl Add<&Polyform> for &Polyform {
    type Output = Polyform;

    fn add(self, rhs: &Polyform) -> Polyform {
        let mut p = self.clone();
        p += rhs;
        p
    }
}

impl Sub<&Polyform> for &Polyform {
    type Output = Polyform;

    fn sub(self, rhs: &Polyform) -> Polyform {
        let mut p = self.clone();
        p -= rhs;
        p
    }
}

impl Add for Polyform {
    type Output = Polyform;

    fn add(mut self, rhs: Polyform) -> Polyform {
        self += &rhs;
        self
    }
}

impl Sub for Polyform {
    type Output = Polyform;

    fn sub(mut self, rhs: Polyform) -> Polyform {
        self -= &rhs;
        self
    }
}

impl Mul<f64> for &Polyform {
    type Output = Polyform;

    fn mul(self, s: f64) -> Polyform {
        let mut p = self.clone();
        p *= s;
        p
    }
}

impl Mul<f64> for Polyform {
    type Output = Polyform;

    fn mul(mut self, s: f64) -> Polyform {
        self *= s;
        self
    }
}

impl Mul<&Polyform> for f64 {
    type Output = Polyform;

    fn mul(self, p: &Polyform) -> Polyform {
        p * self
    }
}

impl Mul<Polyform> for f64 {
    type Output = Polyform;

    fn mul(self, p: Polyform) -> Polyform {
        p * self
    }
}

impl Neg for &Polyform {
    type Output = Polyform;

    fn neg(self) -> Polyform {
        self * -1.0
    }
}

impl Neg for Polyform {
    type Output = Polyform;

    fn neg(self) -> Polyform {
        self * -1.0
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::string::String;
    use alloc::vec::Vec;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize)]
    struct Out {
        dim: usize,
        coeffs: BTreeMap<Key, f64>,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        dim: usize,
        coeffs: BTreeMap<String, f64>,
    }

    /// Sorts blades by rank, then lexicographically, like `BLADES_BY_RANK`.
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Key(usize, usize, String);

    impl Serialize for Key {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            s.serialize_str(&self.2)
        }
    }

    pub(super) fn label(mask: u8) -> String {
        let parts: Vec<String> = blade::indices(mask).map(|i| alloc::format!("{i}")).collect();
        parts.join(",")
    }

    impl Serialize for Polyform {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            let coeffs = self
                .terms()
                .map(|(m, x)| {
                    let key = Key(blade::rank(m), blade::INDEX_IN_RANK[m as usize] as usize, label(m));
                    (key, x)
                })
                .collect();
            Out { dim: 8, coeffs }.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Polyform {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let raw = In::deserialize(d)?;
            if raw.dim != 8 {
                return Err(D::Error::custom(alloc::format!(
                    "field `dim`: expected 8, got {}",
                    raw.dim
                )));
            }
            let mut p = Polyform::zero();
            for (key, x) in raw.coeffs {
                let mask = parse_key(&key).ok_or_else(|| {
                    D::Error::custom(alloc::format!(
                        "field `coeffs`: key {key:?} is not a strictly increasing list of indices in 1..=8"
                    ))
                })?;
                if !x.is_finite() {
                    return Err(D::Error::custom(alloc::format!(
                        "field `coeffs`: value for {key:?} is not finite"
                    )));
                }
                p.c[mask as usize] = x;
            }
            Ok(p)
        }
    }

    fn parse_key(key: &str) -> Option<u8> {
        let key = key.trim();
        if key.is_empty() {
            return Some(0);
        }
        let mut mask = 0u8;
        let mut last = 0usize;
        for part in key.split(',') {
            let i: usize = part.trim().parse().ok()?;
            if !(1..=8).contains(&i) || i <= last {
                return None;
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Some(mask)
    }
}
