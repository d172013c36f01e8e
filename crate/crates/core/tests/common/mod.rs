#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use spin7_core::clifford::{CliffordRep, Spinor16};
use spin7_core::exterior::norm;
use spin7_core::linalg::Mat8;
use spin7_core::random::{gaussian, gaussian_self_dual, unit_chiral_spinor};
use spin7_core::{Metric8, Orientation, Polyform, Sign};

pub const O: Orientation = Orientation::STANDARD;

/// `h = I + A Aᵀ` with `A` of entry size `scale`.
pub fn random_metric(r: &mut ChaCha8Rng, scale: f64) -> Metric8 {
    let a = Mat8::from_fn(|_, _| scale * gaussian(r));
    Metric8::from_matrix(Mat8::identity() + a * a.transpose()).unwrap()
}

pub fn unit_self_dual(r: &mut ChaCha8Rng, h: &Metric8) -> Polyform {
    let q = gaussian_self_dual(r, h, O);
    let n = norm(&q, h);
    q * (1.0 / n)
}

pub fn unit_plus(r: &mut ChaCha8Rng, rep: &CliffordRep) -> Spinor16 {
    unit_chiral_spinor(r, rep, Sign::Plus)
}

/// Relative closeness of two vectors in the Euclidean norm.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let s: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    d / s.max(1e-300)
}

/// Dense antisymmetric tensor of a 4-form, built index by index from the
/// blade coefficients.
pub struct Tensor4(pub Vec<f64>);

fn at(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * 8 + j) * 8 + k) * 8 + l
}

impl Tensor4 {
    pub fn of(a: &Polyform) -> Self {
        let mut t = vec![0.0; 4096];
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    for l in 0..8 {
                        let ix = [i, j, k, l];
                        if (0..4).any(|p| (p + 1..4).any(|q| ix[p] == ix[q])) {
                            continue;
                        }
                        let mut inversions = 0;
                        for p in 0..4 {
                            for q in p + 1..4 {
                                if ix[p] > ix[q] {
                                    inversions += 1;
                                }
                            }
                        }
                        let mut sorted = ix.map(|x| x + 1);
                        sorted.sort();
                        let c = a.get_indices(&sorted).unwrap();
                        t[at(i, j, k, l)] = if inversions % 2 == 0 { c } else { -c };
                    }
                }
            }
        }
        Tensor4(t)
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[at(i, j, k, l)]
    }

    /// Contracts slot `slot` with the matrix `m`: `T'_{..a..} = m_{ab} T_{..b..}`.
    pub fn apply(&self, slot: usize, m: &Mat8) -> Self {
        let mut out = vec![0.0; 4096];
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    for l in 0..8 {
                        let mut ix = [i, j, k, l];
                        let a = ix[slot];
                        let mut s = 0.0;
                        for b in 0..8 {
                            ix[slot] = b;
                            s += m[(a, b)] * self.0[at(ix[0], ix[1], ix[2], ix[3])];
                        }
                        out[at(i, j, k, l)] = s;
                    }
                }
            }
        }
        Tensor4(out)
    }

    pub fn raised(&self, h: &Metric8, slots: &[usize]) -> Self {
        let mut t = Tensor4(self.0.clone());
        for &s in slots {
            t = t.apply(s, h.inverse());
        }
        t
    }
}

/// `(1/24) a_{ijkl} b^{ijkl}`.
pub fn inner4(a: &Polyform, b: &Polyform, h: &Metric8) -> f64 {
    let ta = Tensor4::of(a);
    let tb = Tensor4::of(b).raised(h, &[0, 1, 2, 3]);
    ta.0.iter().zip(&tb.0).map(|(x, y)| x * y).sum::<f64>() / 24.0
}

/// `⟨aΔ₂b, c⟩ = (1/8) a^{ijmn} b_{klmn} c_{ij}^{kl}`.
pub fn trilinear(a: &Polyform, b: &Polyform, c: &Polyform, h: &Metric8) -> f64 {
    let ta = Tensor4::of(a).raised(h, &[0, 1, 2, 3]);
    let tb = Tensor4::of(b);
    let tc = Tensor4::of(c).raised(h, &[2, 3]);
    let mut s = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            for m in 0..8 {
                for n in 0..8 {
                    let x = ta.get(i, j, m, n);
                    if x == 0.0 {
                        continue;
                    }
                    for k in 0..8 {
                        for l in 0..8 {
                            s += x * tb.get(k, l, m, n) * tc.get(i, j, k, l);
                        }
                    }
                }
            }
        }
    }
    s / 8.0
}

/// `W` from the index formula.
pub fn potential_by_indices(q: &Polyform, h: &Metric8) -> f64 {
    let n = inner4(q, q, h).sqrt();
    14f64.sqrt() / 3.0 * trilinear(q, q, q, h) + 4.0 * n * n * n
}
