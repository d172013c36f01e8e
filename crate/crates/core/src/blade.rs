//! Bitmask bookkeeping for basis blades `e^{i1}∧…∧e^{ik}`.
//!
//! A blade is a `u8` whose bit `i` marks the covector `e^{i+1}`; indices in
//! a blade are always read in increasing order. All sign tables below are
//! for an orthonormal coframe.

use crate::BLADES;

/// Rank (degree) of a blade.
#[inline]
pub const fn rank(mask: u8) -> usize {
    mask.count_ones() as usize
}

/// Number of transpositions needed to sort the concatenation of `a` and
/// `b` (both increasing), i.e. the number of pairs `i ∈ a, j ∈ b` with
/// `i > j`.
const fn crossings(a: u8, b: u8) -> u32 {
    let mut a = (a as u16) >> 1;
    let b = b as u16;
    let mut n = 0;
    while a != 0 {
        n += (a & b).count_ones();
        a >>= 1;
    }
    n
}

const fn parity(n: u32) -> i8 {
    if n & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of `e^A ◇ e^B = ± e^{A xor B}` in an orthonormal coframe.
#[inline]
pub const fn geometric_sign(a: u8, b: u8) -> i8 {
    parity(crossings(a, b))
}

/// Sign of `e^A ∧ e^B`, or `0` when the blades overlap.
#[inline]
pub const fn wedge_sign(a: u8, b: u8) -> i8 {
    if a & b != 0 {
        0
    } else {
        parity(crossings(a, b))
    }
}

/// Sign `s` with `ι_{e_i} e^B = s · e^{B \ i}`, or `0` when `i ∉ B`.
/// `i` is a bit index (`0..8`).
#[inline]
pub const fn interior_sign(i: usize, b: u8) -> i8 {
    let bit = 1u8 << i;
    if b & bit == 0 {
        return 0;
    }
    parity((b & (bit - 1)).count_ones())
}

/// Sign `s` with `ι_{s1} ι_{s2} … ι_{sk} e^B = s · e^{B \ S}` where
/// `s1 < … < sk` are the elements of `S` (the innermost, `ι_{sk}`, acts
/// first). Returns `0` unless `S ⊆ B`.
pub const fn multi_interior_sign(s: u8, b: u8) -> i8 {
    if s & b != s {
        return 0;
    }
    let mut sign = 1i8;
    let mut rest = b;
    let mut i = 8;
    while i > 0 {
        i -= 1;
        if s & (1 << i) != 0 {
            sign *= interior_sign(i, rest);
            rest &= !(1 << i);
        }
    }
    sign
}

/// Sign `s` with `(ι_S e^A) ∧ (ι_S e^B) = s · e^{A xor B}` for
/// `S = A ∩ B`. This is the only nonzero term of the orthonormal
/// generalized product `e^A Δ_k e^B` (with `k = |A ∩ B|`).
pub const fn contraction_sign(a: u8, b: u8) -> i8 {
    let s = a & b;
    let sa = multi_interior_sign(s, a);
    let sb = multi_interior_sign(s, b);
    sa * sb * wedge_sign(a & !s, b & !s)
}

const fn build_table(kind: u8) -> [[i8; BLADES]; BLADES] {
    let mut t = [[0i8; BLADES]; BLADES];
    let mut a = 0;
    while a < BLADES {
        let mut b = 0;
        while b < BLADES {
            t[a][b] = if kind == 0 {
                geometric_sign(a as u8, b as u8)
            } else {
                contraction_sign(a as u8, b as u8)
            };
            b += 1;
        }
        a += 1;
    }
    t
}

/// `GEOMETRIC_SIGNS[A][B]` = [`geometric_sign`]`(A, B)`.
#[allow(long_running_const_eval)]
pub static GEOMETRIC_SIGNS: [[i8; BLADES]; BLADES] = build_table(0);
/// `CONTRACTION_SIGNS[A][B]` = [`contraction_sign`]`(A, B)`.
#[allow(long_running_const_eval)]
pub static CONTRACTION_SIGNS: [[i8; BLADES]; BLADES] = build_table(1);

/// Number of blades of each rank, `C(8, k)`.
pub const RANK_SIZES: [usize; 9] = [1, 8, 28, 56, 70, 56, 28, 8, 1];
/// Start of each rank in [`BLADES_BY_RANK`].
pub const RANK_OFFSETS: [usize; 10] = [0, 1, 9, 37, 93, 163, 219, 247, 255, 256];

const fn build_by_rank() -> ([u8; BLADES], [u8; BLADES]) {
    let mut order = [0u8; BLADES];
    let mut index = [0u8; BLADES];
    let mut k = 0;
    let mut pos = 0;
    while k <= 8 {
        let mut m = 0;
        let mut within = 0;
        while m < BLADES {
            if rank(m as u8) == k {
                order[pos] = m as u8;
                index[m] = within;
                pos += 1;
                within += 1;
            }
            m += 1;
        }
        k += 1;
    }
    (order, index)
}

const BY_RANK: ([u8; BLADES], [u8; BLADES]) = build_by_rank();

/// All blades sorted by rank, then by mask value.
pub const BLADES_BY_RANK: [u8; BLADES] = BY_RANK.0;
/// Position of a blade within its rank block of [`BLADES_BY_RANK`].
pub const INDEX_IN_RANK: [u8; BLADES] = BY_RANK.1;

/// Blades of rank `k`, in increasing mask order.
#[inline]
pub fn of_rank(k: usize) -> &'static [u8] {
    &BLADES_BY_RANK[RANK_OFFSETS[k]..RANK_OFFSETS[k + 1]]
}

/// Builds a blade mask from 1-based indices. Returns the mask and the
/// sign of the permutation sorting `indices`, or `None` on a repeat or an
/// index outside `1..=8`.
pub fn from_indices(indices: &[usize]) -> Option<(u8, i8)> {
    let mut mask = 0u8;
    let mut sign = 1i8;
    for &i in indices {
        if !(1..=8).contains(&i) {
            return None;
        }
        let bit = 1u8 << (i - 1);
        if mask & bit != 0 {
            return None;
        }
        // moving e^i left past every larger index already present
        if (mask & !(bit | (bit - 1))).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// 1-based increasing indices of a blade.
pub fn indices(mask: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| mask & (1 << i) != 0).map(|i| i + 1)
}

/// Iterates the sub-masks of `mask` having exactly `k` bits.
pub fn submasks_of_rank(mask: u8, k: usize) -> impl Iterator<Item = u8> {
    let mut sub = mask as u16;
    let mut done = false;
    core::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let cur = sub as u8;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask as u16;
        }
        if rank(cur) == k {
            return Some(cur);
        }
    })
}
