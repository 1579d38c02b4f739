//! Log-gamma, digamma, Pochhammer symbols and double factorials.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_8;

/// ζ(k) − 1 for k = 2..=30.
const ZETA_MINUS_ONE: [f64; 29] = [
    6.4493406684822643647e-1,
    2.020569031595942854e-1,
    8.2323233711138191516e-2,
    3.6927755143369926331e-2,
    1.7343061984449139715e-2,
    8.3492773819228268398e-3,
    4.0773561979443393787e-3,
    2.0083928260822144179e-3,
    9.9457512781808533715e-4,
    4.941886041194645587e-4,
    2.4608655330804829864e-4,
    1.2271334757848914675e-4,
    6.1248135058704829259e-5,
    3.0588236307020493552e-5,
    1.5282259408651871733e-5,
    7.6371976378997622736e-6,
    3.8172932649998398565e-6,
    1.9082127165539389257e-6,
    9.5396203387279611315e-7,
    4.7693298678780646312e-7,
    2.3845050272773299e-7,
    1.1921992596531107307e-7,
    5.9608189051259479612e-8,
    2.9803503514652280186e-8,
    1.4901554828365041235e-8,
    7.450711789835429492e-9,
    3.7253340247884570548e-9,
    1.8626597235130490064e-9,
    9.3132743241966818287e-10,
];

/// B_{2k} / (2k (2k − 1)) for k = 1..=8 (Stirling series).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// B_{2k} / (2k) for k = 1..=8 (digamma asymptotic series).
const DIGAMMA_ASYM: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// ln Γ(x) for x > 0.
///
/// Uses the Stirling series for x ≥ 8, a Taylor expansion about 2 on
/// [1.5, 2.5] (which keeps relative accuracy near the zeros at 1 and 2) and
/// the recurrence Γ(x + 1) = x Γ(x) in between.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x >= 8.0 {
        return stirling(x);
    }
    if x < 0.5 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        // x − 1 is exact here, so ln x keeps full relative accuracy near 1.
        return taylor_about_two(x + 1.0 - 2.0) - (x - 1.0).ln_1p();
    }
    if x <= 2.5 {
        return taylor_about_two(x - 2.0);
    }
    let mut y = x;
    let mut acc = 0.0;
    while y > 2.5 {
        y -= 1.0;
        acc += y.ln();
    }
    taylor_about_two(y - 2.0) + acc
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr
}

/// ln Γ(2 + z) for |z| ≤ 0.5.
fn taylor_about_two(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zk = -z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        zk *= -z;
        sum += c * zk / k;
    }
    (1.0 - EULER_GAMMA) * z + sum
}

/// Ψ(x) = Γ′(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(x: f64) -> f64 {
    let mut y = x;
    let mut shift = 0.0;
    while y < 8.0 {
        shift += 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut p = inv2;
    let mut series = 0.0;
    for c in DIGAMMA_ASYM {
        series += c * p;
        p *= inv2;
    }
    y.ln() - 0.5 / y - series - shift
}

/// Rising factorial (a)_k by direct product, exact for zero and negative-integer `a`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).map(|j| a + j as f64).product()
}

/// Generalized binomial coefficient C(n + β, n) = (β + 1)_n / n!.
pub fn binomial_real(top_shift: f64, n: u32) -> f64 {
    (1..=n).map(|j| (top_shift + j as f64) / j as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DoubleFactorial {
    Exact(u64),
    Approx(f64),
}

impl DoubleFactorial {
    pub fn as_f64(self) -> f64 {
        match self {
            DoubleFactorial::Exact(v) => v as f64,
            DoubleFactorial::Approx(v) => v,
        }
    }
}

/// k!! for odd k ≥ 1: exact up to 33!!, floating point beyond.
pub fn double_factorial(k: i64) -> Result<DoubleFactorial> {
    if k < 1 || k % 2 == 0 {
        return Err(Error::domain(format!(
            "double_factorial requires an odd positive integer, got {k}"
        )));
    }
    if k <= 33 {
        let v = (1..=k as u64).step_by(2).product();
        return Ok(DoubleFactorial::Exact(v));
    }
    // (2j − 1)!! = 2^j Γ(j + 1/2) / √π with j = (k + 1)/2
    let j = ((k + 1) / 2) as f64;
    let ln = j * std::f64::consts::LN_2 + ln_gamma_pos(j + 0.5) - 0.5 * PI.ln();
    Ok(DoubleFactorial::Approx(ln.exp()))
}
