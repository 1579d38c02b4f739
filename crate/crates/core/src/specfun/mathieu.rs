//! Characteristic numbers a_ν(b) of the even Mathieu solutions of fractional order.
//!
//! The equation is Φ″ + (a − 2b cos 2z)Φ = 0 with Floquet solutions
//! Φ(z) = Σ_k c_k cos((ν + 2k)z), ν = 2·m_eff.

use crate::error::{Error, Result, Warning};
use crate::tridiag::SymTridiag;

pub const DEFAULT_TRUNCATION: usize = 25;
const MAX_TRUNCATION: usize = 3200;
const TAIL_TOL: f64 = 1e-12;
const SINGULAR_ORDERS: [f64; 3] = [0.5, 1.0, 1.5];
const SINGULAR_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub warning: Option<Warning>,
}

/// Largest admissible b for the truncated series at this order, and whether
/// the bound itself is admissible.
pub fn series_validity_limit(m_eff: f64) -> (f64, bool) {
    if m_eff < 2.0 {
        (1.0, false)
    } else {
        (20.0, true)
    }
}

/// Four-term power series for a_{2m}(b) through b⁶.
pub fn mathieu_char_series(m_eff: f64, b: f64) -> Result<SeriesValue> {
    if !(m_eff >= 0.0) || !(b >= 0.0) || !m_eff.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "Mathieu series needs m_eff >= 0 and b >= 0, got m_eff = {m_eff}, b = {b}"
        )));
    }
    let m2 = m_eff * m_eff;
    if b == 0.0 {
        return Ok(SeriesValue { value: 4.0 * m2, warning: None });
    }
    if SINGULAR_ORDERS.iter().any(|s| (m_eff - s).abs() < SINGULAR_RADIUS) {
        return Err(Error::SeriesSingular { m_eff });
    }
    let l = 4.0 * m2 - 1.0;
    let b2 = b * b;
    let b4 = b2 * b2;
    let b6 = b4 * b2;
    let value = 4.0 * m2
        + b2 / (2.0 * l)
        + (20.0 * m2 + 7.0) * b4 / (32.0 * l.powi(3) * (l - 3.0))
        + (36.0 * m2 * m2 + 232.0 * m2 + 29.0) * b6 / (64.0 * l.powi(5) * (l - 3.0) * (l - 8.0));
    let (limit, inclusive) = series_validity_limit(m_eff);
    let inside = if inclusive { b <= limit } else { b < limit };
    let warning = (!inside).then_some(Warning::Validity { m_eff, b, limit });
    Ok(SeriesValue { value, warning })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MathieuEvenSolution {
    /// ν = 2·m_eff.
    pub order: f64,
    pub b: f64,
    pub char_number: f64,
    /// c_k for k = −K..=K, unit Euclidean norm.
    pub coeffs: Vec<f64>,
    pub truncation: usize,
}

impl MathieuEvenSolution {
    fn wavenumber(&self, i: usize) -> f64 {
        self.order + 2.0 * (i as f64 - self.truncation as f64)
    }

    /// Σ c_k cos((ν + 2k) z).
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (self.wavenumber(i) * z).cos())
            .sum()
    }

    /// dΦ/dz.
    pub fn eval_derivative(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let w = self.wavenumber(i);
                -c * w * (w * z).sin()
            })
            .sum()
    }

    /// Largest relative residual of (a − (ν+2k)²)c_k = b(c_{k−1} + c_{k+1}) over interior k.
    pub fn recurrence_residual(&self) -> f64 {
        let c = &self.coeffs;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 1..c.len() - 1 {
            let w = self.wavenumber(i);
            let lhs = (self.char_number - w * w) * c[i];
            let rhs = self.b * (c[i - 1] + c[i + 1]);
            worst = worst.max((lhs - rhs).abs());
            scale = scale.max(lhs.abs() + self.b * (c[i - 1].abs() + c[i + 1].abs()));
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// max(|c_{−K}|, |c_K|) / max_k |c_k|.
    pub fn tail_ratio(&self) -> f64 {
        let peak = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let edge = self.coeffs[0].abs().max(self.coeffs[self.coeffs.len() - 1].abs());
        edge / peak
    }
}

fn integer_order(nu: f64) -> Option<usize> {
    let r = nu.round();
    ((nu - r).abs() < 1e-12 && r >= 0.0).then_some(r as usize)
}

/// Tridiagonal eigen-solution at fixed truncation K (≥ 10).
pub fn mathieu_char_matrix(m_eff: f64, b: f64, truncation: usize) -> Result<MathieuEvenSolution> {
    if !(m_eff >= 0.0) || !(b >= 0.0) || !m_eff.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "Mathieu matrix needs m_eff >= 0 and b >= 0, got m_eff = {m_eff}, b = {b}"
        )));
    }
    if truncation < 10 {
        return Err(Error::domain(format!("truncation K must be at least 10, got {truncation}")));
    }
    let nu = 2.0 * m_eff;
    let size = 2 * truncation + 1;
    if b == 0.0 {
        let mut coeffs = vec![0.0; size];
        coeffs[truncation] = 1.0;
        return Ok(MathieuEvenSolution {
            order: nu,
            b,
            char_number: nu * nu,
            coeffs,
            truncation,
        });
    }

    let (char_number, coeffs) = match integer_order(nu) {
        Some(p) => solve_integer_order(p, b, truncation)?,
        None => solve_fractional_order(nu, b, truncation)?,
    };
    let sol = MathieuEvenSolution {
        order: nu,
        b,
        char_number,
        coeffs,
        truncation,
    };
    let tail = sol.tail_ratio();
    if !(tail < TAIL_TOL) {
        return Err(Error::Truncation(format!(
            "tail ratio {tail:e} >= {TAIL_TOL:e} at K = {truncation} (m_eff = {m_eff}, b = {b})"
        )));
    }
    let res = sol.recurrence_residual();
    if !(res < 1e-10) {
        return Err(Error::Truncation(format!(
            "recurrence residual {res:e} at K = {truncation} (m_eff = {m_eff}, b = {b})"
        )));
    }
    Ok(sol)
}

/// Matrix method with K = 25 doubled until the tail criterion holds.
pub fn mathieu_even_solution(m_eff: f64, b: f64) -> Result<MathieuEvenSolution> {
    let mut k = DEFAULT_TRUNCATION;
    loop {
        match mathieu_char_matrix(m_eff, b, k) {
            Err(Error::Truncation(_)) if k < MAX_TRUNCATION => k *= 2,
            other => return other,
        }
    }
}

fn solve_fractional_order(nu: f64, b: f64, truncation: usize) -> Result<(f64, Vec<f64>)> {
    let kmax = truncation as i64;
    let diag: Vec<f64> = (-kmax..=kmax)
        .map(|k| {
            let w = nu + 2.0 * k as f64;
            w * w
        })
        .collect();
    let target = nu * nu;
    let index = diag.iter().filter(|&&d| d < target).count();
    let t = SymTridiag::new(diag, vec![b; 2 * truncation]);
    let a = t.eigenvalue(index);
    let v = t.eigenvector(a)?;
    Ok((a, v))
}

/// Integer ν: solve the reduced cosine problem, where ce and se no longer
/// share one two-sided matrix, then expand c_k = c_{−ν−k}.
fn solve_integer_order(p: usize, b: f64, truncation: usize) -> Result<(f64, Vec<f64>)> {
    let parity = p % 2;
    let top = p + 2 * truncation;
    let len = (top - parity) / 2 + 1;
    let mut diag: Vec<f64> = (0..len)
        .map(|j| {
            let w = (2 * j + parity) as f64;
            w * w
        })
        .collect();
    let mut off = vec![b; len - 1];
    if parity == 0 {
        off[0] = std::f64::consts::SQRT_2 * b;
    } else {
        diag[0] += b;
    }
    let t = SymTridiag::new(diag, off);
    let a = t.eigenvalue(p / 2);
    let y = t.eigenvector(a)?;

    let kmax = truncation as i64;
    let mut coeffs: Vec<f64> = (-kmax..=kmax)
        .map(|k| {
            let w = (p as i64 + 2 * k).unsigned_abs() as usize;
            let j = (w - parity) / 2;
            if parity == 0 && j == 0 {
                y[0]
            } else {
                y[j] / std::f64::consts::SQRT_2
            }
        })
        .collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    coeffs.iter_mut().for_each(|c| *c /= norm);
    Ok((a, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn series_leading_term() {
        for m in [0.0, 0.5, 1.0, 2.2, 7.0] {
            let v = mathieu_char_series(m, 0.0).unwrap();
            assert_eq!(v.value, 4.0 * m * m);
            assert!(v.warning.is_none());
        }
    }

    #[test]
    fn series_order_zero() {
        let v = mathieu_char_series(0.0, 0.4).unwrap();
        let two_terms = -0.08 + 7.0 * 0.4f64.powi(4) / 128.0;
        assert!((v.value + 0.078_651_555_6).abs() < 1e-9);
        assert!((v.value - two_terms).abs() < 1e-4);
    }

    #[test]
    fn series_singular_orders() {
        for m in [0.5, 1.0, 1.5, 1.0005] {
            assert!(matches!(
                mathieu_char_series(m, 0.3),
                Err(Error::SeriesSingular { .. })
            ));
        }
        assert!(mathieu_char_series(1.002, 0.3).is_ok());
    }

    #[test]
    fn series_validity_warning() {
        assert!(mathieu_char_series(0.2, 0.99).unwrap().warning.is_none());
        assert!(mathieu_char_series(0.2, 1.0).unwrap().warning.is_some());
        assert!(mathieu_char_series(2.2, 20.0).unwrap().warning.is_none());
        assert!(mathieu_char_series(2.2, 20.5).unwrap().warning.is_some());
    }

    #[test]
    fn matrix_reference_values() {
        let a = mathieu_char_matrix(2.2, 0.4, 25).unwrap().char_number;
        assert!((a - 19.364_358_172_881_74).abs() < 1e-11);
        let a0 = mathieu_char_matrix(0.0, 0.4, 25).unwrap().char_number;
        assert!((a0 + 0.078_649_287_797_488_89).abs() < 1e-12);
    }

    #[test]
    fn matrix_truncation_converged() {
        let a25 = mathieu_char_matrix(2.2, 0.4, 25).unwrap().char_number;
        let a50 = mathieu_char_matrix(2.2, 0.4, 50).unwrap().char_number;
        assert!((a25 - a50).abs() < 1e-12);
    }

    #[test]
    fn matrix_b_zero_exact() {
        let s = mathieu_char_matrix(1.3, 0.0, 12).unwrap();
        assert_eq!(s.char_number, 2.6 * 2.6);
        assert_eq!(s.coeffs.iter().filter(|c| **c != 0.0).count(), 1);
    }

    #[test]
    fn integer_orders_follow_classical_values() {
        // a_1(q) ≈ 1 + q − q²/8, a_2(q) ≈ 4 + 5q²/12 for small q.
        let q = 0.01;
        let a1 = mathieu_char_matrix(0.5, q, 25).unwrap().char_number;
        assert!((a1 - (1.0 + q - q * q / 8.0)).abs() < 1e-6);
        let a2 = mathieu_char_matrix(1.0, q, 25).unwrap().char_number;
        assert!((a2 - (4.0 + 5.0 * q * q / 12.0)).abs() < 1e-8);
        // a_0(1) from standard tables.
        let a0 = mathieu_char_matrix(0.0, 1.0, 25).unwrap().char_number;
        assert!((a0 + 0.455_138_604_107_414_3).abs() < 1e-10);
    }

    #[test]
    fn large_parameter_needs_auto_truncation() {
        assert!(matches!(
            mathieu_char_matrix(0.2, 5000.0, 10),
            Err(Error::Truncation(_))
        ));
        let s = mathieu_even_solution(0.2, 5000.0).unwrap();
        assert!(s.truncation > 25);
        assert!(s.tail_ratio() < 1e-12);
    }

    #[test]
    fn rejects_small_truncation() {
        assert!(mathieu_char_matrix(1.0, 0.1, 9).is_err());
    }

    proptest! {
        #[test]
        fn solutions_satisfy_invariants(m in 0.0f64..4.0, b in 0.0f64..20.0) {
            let s = mathieu_even_solution(m, b).unwrap();
            prop_assert!(s.recurrence_residual() < 1e-10);
            prop_assert!(s.tail_ratio() < 1e-12);
            let norm: f64 = s.coeffs.iter().map(|c| c * c).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }

        #[test]
        fn integer_orders_continuous_with_neighbours(p in 0usize..6, b in 0.05f64..5.0) {
            let m = p as f64 / 2.0;
            let at = mathieu_even_solution(m, b).unwrap().char_number;
            let near = mathieu_even_solution(m + 1e-7, b).unwrap().char_number;
            prop_assert!((at - near).abs() < 1e-5 * (1.0 + at.abs()));
        }
    }
}
