//! Symmetric tridiagonal eigenproblems.
//!
//! Every matrix in this crate that needs eigenvalues is symmetric
//! tridiagonal: the Mathieu recurrence, the Jacobi matrices behind Gauss
//! rules and the finite-difference radial operator. Eigenvalues are located
//! by Sturm-sequence bisection, which addresses them by index in O(n) per
//! probe; eigenvectors come from inverse iteration with a pivoted
//! tridiagonal LU factorization.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
}

impl SymTridiag {
    /// `off[i]` couples rows `i` and `i + 1`, so `off.len() + 1 == diag.len()`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty tridiagonal matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        let max_e2 = off.iter().map(|e| e * e).fold(1.0_f64, f64::max);
        Self {
            diag,
            off,
            pivmin: f64::MIN_POSITIVE * max_e2,
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < self.pivmin {
            q = -self.pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (g_lo, g_hi) = self.gershgorin();
        let pad = f64::EPSILON * (g_lo.abs() + g_hi.abs()) + self.pivmin;
        let (mut lo, mut hi) = (g_lo - pad, g_hi + pad);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.len())).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for an (accurate) eigenvalue, with its largest
    /// component made positive.
    pub fn eigenvector(&self, eigenvalue: f64) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 1 {
            return Ok(vec![1.0]);
        }
        let lu = TridiagLu::factor(&self.diag, &self.off, eigenvalue);
        // Deterministic start vector with no special alignment.
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract())
            .collect();
        normalize(&mut v);
        for _ in 0..4 {
            lu.solve(&mut v);
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::Numeric("inverse iteration diverged".into()));
            }
            normalize(&mut v);
        }
        let (imax, _) = v
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, &x)| if x.abs() > acc.1 { (i, x.abs()) } else { acc });
        if v[imax] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }

    /// `max_i |(T v - λ v)_i|`.
    pub fn residual(&self, eigenvalue: f64, v: &[f64]) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = (self.diag[i] - eigenvalue) * v[i];
                if i > 0 {
                    r += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    r += self.off[i] * v[i + 1];
                }
                r.abs()
            })
            .fold(0.0, f64::max)
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// LU factorization of `T - shift I` with partial pivoting (LAPACK gttrf layout).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64) -> Self {
        let n = diag.len();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let scale = diag.iter().map(|x| x.abs()).fold(0.0, f64::max)
            + off.iter().map(|x| x.abs()).fold(0.0, f64::max)
            + shift.abs();
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = if *x < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
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
