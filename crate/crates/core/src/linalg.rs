//! Small dense linear algebra helpers on top of `nalgebra`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SMatrix};

use crate::blade::{self, INDEX_IN_RANK, RANK_SIZES};
use crate::Polyform;

pub type Mat8 = SMatrix<f64, 8, 8>;

/// All minors `det(M[R, C])` of an 8×8 matrix, grouped by size.
///
/// Acting with `M` on one-form coefficients (`v ↦ M v`) extends to
/// polyforms as `(M·a)_R = Σ_C det(M[R, C]) a_C`; [`Compound::apply`]
/// does exactly that.
#[derive(Clone, Debug, PartialEq)]
pub struct Compound {
    blocks: [Vec<f64>; 9],
}

impl Compound {
    pub fn new(m: &Mat8) -> Self {
        let mut blocks: [Vec<f64>; 9] = Default::default();
        blocks[0] = vec![1.0];
        for k in 1..=8 {
            let n = RANK_SIZES[k];
            let mut block = vec![0.0; n * n];
            for (ri, &r) in blade::of_rank(k).iter().enumerate() {
                let r0 = r.trailing_zeros() as usize;
                let r_rest = r & !(1 << r0);
                let prev_row = INDEX_IN_RANK[r_rest as usize] as usize;
                let prev = &blocks[k - 1];
                let np = RANK_SIZES[k - 1];
                for (ci, &c) in blade::of_rank(k).iter().enumerate() {
                    // Laplace expansion along row r0
                    let mut det = 0.0;
                    let mut sign = 1.0;
                    for j in blade::indices(c) {
                        let col = j - 1;
                        let c_rest = c & !(1 << col);
                        let minor = prev[prev_row * np + INDEX_IN_RANK[c_rest as usize] as usize];
                        det += sign * m[(r0, col)] * minor;
                        sign = -sign;
                    }
                    block[ri * n + ci] = det;
                }
            }
            blocks[k] = block;
        }
        Self { blocks }
    }

    /// `det(M[R, C])`; zero when the ranks differ.
    #[inline]
    pub fn minor(&self, r: u8, c: u8) -> f64 {
        let k = blade::rank(r);
        if k != blade::rank(c) {
            return 0.0;
        }
        let n = RANK_SIZES[k];
        self.blocks[k][INDEX_IN_RANK[r as usize] as usize * n + INDEX_IN_RANK[c as usize] as usize]
    }

    /// Row-major `C(8,k) × C(8,k)` block of rank-`k` minors.
    pub fn block(&self, k: usize) -> &[f64] {
        &self.blocks[k]
    }

    pub fn apply(&self, a: &Polyform) -> Polyform {
        let mut out = Polyform::zero();
        for k in 0..=8 {
            let n = RANK_SIZES[k];
            let rows = blade::of_rank(k);
            let block = &self.blocks[k];
            for (ci, &c) in rows.iter().enumerate() {
                let x = a[c];
                if x == 0.0 {
                    continue;
                }
                for (ri, &r) in rows.iter().enumerate() {
                    out[r] += block[ri * n + ci] * x;
                }
            }
        }
        out
    }
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues ascending;
/// eigenvectors are the matching columns.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Dimension of the null space of `m` (as a map on its columns), counting
/// singular values at most `cutoff · max(1, σ_max)` as zero.
pub fn kernel_dimension(m: &DMatrix<f64>, cutoff: f64) -> usize {
    let s = singular_values(m);
    let scale = s.first().copied().unwrap_or(0.0).max(1.0);
    let rank = s.iter().filter(|&&x| x > cutoff * scale).count();
    m.ncols() - rank
}

pub fn mat8(rows: &[[f64; 8]; 8]) -> Mat8 {
    Mat8::from_fn(|r, c| rows[r][c])
}

pub fn rows8(m: &Mat8) -> [[f64; 8]; 8] {
    let mut out = [[0.0; 8]; 8];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m[(r, c)];
        }
    }
    out
}
