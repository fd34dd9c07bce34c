//! Real symmetric tridiagonal eigensolvers.
//!
//! Bisection on Sturm counts gives eigenvalues one at a time without forming
//! dense matrices. Singular values of a bidiagonal chain use the zero-diagonal
//! Golub-Kahan form, which keeps relative accuracy for tiny values.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, hypot, sqrt};
use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;

fn sq(x: f64) -> f64 {
    x * x
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off.len()` must be `diag.len() - 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            !diag.is_empty() && off.len() + 1 == diag.len(),
            "tridiagonal shape mismatch"
        );
        Self { diag, off }
    }

    /// Dimension.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Always false; the constructor rejects empty matrices.
    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Main diagonal.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// First off-diagonal.
    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { abs(self.off[i - 1]) } else { 0.0 };
            let right = if i + 1 < n { abs(self.off[i]) } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let emax = self.off.iter().fold(1.0f64, |m, &e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if abs(q) < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let count = count.min(self.len());
        let (glo, ghi) = self.gershgorin();
        let scale = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
        let pad = 2.0 * EPS * scale + 2.0 * self.pivmin();
        let (glo, ghi) = (glo - pad, ghi + pad);
        (0..count)
            .map(|k| {
                let (mut lo, mut hi) = (glo, ghi);
                for _ in 0..256 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if hi - lo <= 2.0 * EPS * lo.abs().max(hi.abs()) {
                        break;
                    }
                    if self.sturm_count(mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    /// Unit eigenvector for the eigenvalue approximation `lambda`, by inverse
    /// iteration. `previous` holds eigenvectors to orthogonalize against.
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.len();
        let (glo, ghi) = self.gershgorin();
        let tiny = EPS * glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
        let lu = TridiagonalLu::factor(&self.diag, &self.off, lambda, tiny);
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * crate::math::sin(0.618_033_988_749_895 * (i as f64 + 1.0) * 7.0))
            .collect();
        for _ in 0..4 {
            for p in previous {
                let dot: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= dot * pi);
            }
            lu.solve(&mut x);
            let norm = sqrt(x.iter().map(|v| v * v).sum());
            x.iter_mut().for_each(|v| *v /= norm);
        }
        for p in previous {
            let dot: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= dot * pi);
        }
        let norm = sqrt(x.iter().map(|v| v * v).sum());
        x.iter_mut().for_each(|v| *v /= norm);
        let lead = x.iter().fold(0.0f64, |m, &v| if abs(v) > abs(m) { v } else { m });
        if lead < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// All eigenvalues (ascending) and the first component of each unit
    /// eigenvector, by implicit QL.
    pub fn eigen_first_components(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = vec![0.0; n];
        e[..n - 1].copy_from_slice(&self.off);
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = abs(d[m]) + abs(d[m + 1]);
                    if abs(e[m]) <= EPS * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence("implicit QL exceeded 60 sweeps"));
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut underflow = false;
                let mut i = m;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = hypot(f, g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    let zf = z[i + 1];
                    z[i + 1] = s * z[i] + c * zf;
                    z[i] = c * z[i] - s * zf;
                }
                if underflow {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect()))
    }
}

struct TridiagonalLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    dl: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut du = off.to_vec();
        let mut dl = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if abs(d[i]) >= abs(dl[i]) {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for v in d.iter_mut() {
            if abs(*v) < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            d,
            du,
            du2,
            dl,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Nonnegative bidiagonal chain of shape `(cols + 1) x cols`.
///
/// `path` lists the nonzero magnitudes in the order
/// `B[0][0], B[1][0], B[1][1], B[2][1], ..., B[cols][cols-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalChain {
    path: Vec<f64>,
}

impl BidiagonalChain {
    /// Requires an even, nonzero number of nonnegative entries.
    pub fn new(path: Vec<f64>) -> Self {
        assert!(
            !path.is_empty() && path.len().is_multiple_of(2),
            "chain length must be 2 * cols"
        );
        assert!(path.iter().all(|v| *v >= 0.0), "chain entries must be nonnegative");
        Self { path }
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.path.len() / 2
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.cols() + 1
    }

    /// `B[c][c]`.
    fn upper(&self, c: usize) -> f64 {
        self.path[2 * c]
    }

    /// `B[c+1][c]`.
    fn lower(&self, c: usize) -> f64 {
        self.path[2 * c + 1]
    }

    fn golub_kahan_count(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.path.iter().fold(1.0f64, |m, &t| m.max(t * t));
        let mut count = 0;
        let mut q = -x;
        if abs(q) < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for &t in &self.path {
            q = -x - t * t / q;
            if abs(q) < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Number of singular values strictly below `x > 0`.
    pub fn singular_count(&self, x: f64) -> usize {
        self.golub_kahan_count(x).saturating_sub(self.rows())
    }

    /// The `count` smallest singular values, each to high relative accuracy.
    pub fn lowest_singular_values(&self, count: usize) -> Vec<f64> {
        let count = count.min(self.cols());
        let top = 2.0 * self.path.iter().fold(0.0f64, |m, &t| m.max(t)) + f64::MIN_POSITIVE;
        (0..count)
            .map(|k| {
                let (mut lo, mut hi) = (0.0f64, top);
                for _ in 0..2200 {
                    if hi < 1e-300 || hi - lo <= 4.0 * EPS * hi {
                        break;
                    }
                    let mid = if lo > 0.0 && hi > 8.0 * lo {
                        sqrt(lo) * sqrt(hi)
                    } else {
                        0.5 * (lo + hi)
                    };
                    if self.singular_count(mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    /// `B^T B` as a `cols x cols` tridiagonal matrix.
    pub fn gram(&self) -> SymTridiagonal {
        let n = self.cols();
        let diag = (0..n).map(|c| sq(self.upper(c)) + sq(self.lower(c))).collect();
        let off = (0..n - 1).map(|c| self.lower(c) * self.upper(c + 1)).collect();
        SymTridiagonal::new(diag, off)
    }

    /// `B B^T` as a `rows x rows` tridiagonal matrix.
    pub fn cogram(&self) -> SymTridiagonal {
        let n = self.cols();
        let diag = (0..=n)
            .map(|r| {
                let up = if r < n { sq(self.upper(r)) } else { 0.0 };
                let lo = if r > 0 { sq(self.lower(r - 1)) } else { 0.0 };
                up + lo
            })
            .collect();
        let off = (0..n).map(|r| self.upper(r) * self.lower(r)).collect();
        SymTridiagonal::new(diag, off)
    }
}
