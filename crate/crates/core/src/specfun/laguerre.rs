//! Generalized Laguerre polynomials L_n^{(α)}(x).

use super::gamma::ln_gamma_pos;
use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::domain(format!("Laguerre parameter alpha must exceed -1, got {alpha}")));
    }
    Ok(())
}

/// L_n^{(α)}(x) by the upward three-term recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(laguerre_unchecked(n, alpha, x))
}

/// Recurrence without the parameter check, for hot loops with validated input.
pub fn laguerre_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `(L_n^{(α)}(x), d/dx L_n^{(α)}(x))`, using d/dx L_n^{(α)} = −L_{n−1}^{(α+1)}.
pub fn laguerre_with_derivative(n: u32, alpha: f64, x: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let value = laguerre_unchecked(n, alpha, x);
    let slope = if n == 0 {
        0.0
    } else {
        -laguerre_unchecked(n - 1, alpha + 1.0, x)
    };
    Ok((value, slope))
}

/// √(Γ(n+1)/Γ(α+n+1)) · L_n^{(α)}(x), orthonormal against x^α e^{−x}.
pub fn laguerre_orthonormal(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let nf = n as f64;
    let scale = (0.5 * (ln_gamma_pos(nf + 1.0) - ln_gamma_pos(alpha + nf + 1.0))).exp();
    Ok(scale * laguerre_unchecked(n, alpha, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn explicit(n: u32, a: f64, x: f64) -> f64 {
        match n {
            0 => 1.0,
            1 => a + 1.0 - x,
            2 => (a + 1.0) * (a + 2.0) / 2.0 - (a + 2.0) * x + x * x / 2.0,
            3 => {
                (a + 1.0) * (a + 2.0) * (a + 3.0) / 6.0 - (a + 2.0) * (a + 3.0) * x / 2.0
                    + (a + 3.0) * x * x / 2.0
                    - x * x * x / 6.0
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn low_orders() {
        assert_eq!(laguerre(0, 3.3, 7.0).unwrap(), 1.0);
        assert_eq!(laguerre(1, 0.5, 1.0).unwrap(), 0.5);
        assert!((laguerre(2, 0.5, 1.0).unwrap() + 0.125).abs() < 1e-15);
    }

    #[test]
    fn rejects_alpha_at_minus_one() {
        assert!(laguerre(2, -1.0, 1.0).is_err());
        assert!(laguerre_orthonormal(2, -1.5, 1.0).is_err());
        assert!(laguerre_with_derivative(2, -2.0, 1.0).is_err());
    }

    #[test]
    fn orthonormal_l0() {
        let a = 0.5_f64;
        let want = 1.0 / ln_gamma_pos(a + 1.0).exp().sqrt();
        assert!((laguerre_orthonormal(0, a, 2.0).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let (n, a, x) = (5, 1.7, 2.3);
        let h = 1e-6;
        let fd = (laguerre(n, a, x + h).unwrap() - laguerre(n, a, x - h).unwrap()) / (2.0 * h);
        let (_, d) = laguerre_with_derivative(n, a, x).unwrap();
        assert!((fd - d).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn recurrence_matches_explicit(n in 0u32..4, a in -0.99f64..10.0, x in 0.0f64..20.0) {
            let got = laguerre(n, a, x).unwrap();
            let want = explicit(n, a, x);
            let scale = (2.0 + a.abs() + x).powi(n as i32);
            prop_assert!((got - want).abs() <= 1e-13 * scale);
        }
    }
}
