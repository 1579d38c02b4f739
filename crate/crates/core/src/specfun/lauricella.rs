//! The degenerate Lauricella coefficient γ₀ that linearizes ∫ x^{q(2λ−1)+1} e^{−qx} [L_n^{2λ−1}(x)]^{2q} dx.

use num_bigint::{BigInt, Sign};

use super::gamma::{binomial_real, ln_gamma_pos};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Gamma0 {
    pub ln_abs: f64,
    pub sign: f64,
    /// Σ|terms| / |F| for the finite Lauricella sum F.
    pub ratio: f64,
}

impl Gamma0 {
    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }
}

/// x = M·2^E for finite positive x.
fn dyadic(x: f64) -> (BigInt, i64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let tz = m.trailing_zeros().min(63);
    m >>= tz;
    e += tz as i64;
    (BigInt::from(m), e)
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64_digits().1.first().copied().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn convolve(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i + j] += xi * yj;
        }
    }
    out
}

/// γ₀ = Γ(a) · C(2λ+n−1, n)^{2q} · F with a = q(2λ−1) + 2.
///
/// F = Σ (a)_{k₁+…+k_{2q}} Π_i (−n)_{k_i} / ((2λ)_{k_i} k_i! q^{k_i}) over
/// k_i ∈ [0, n]. Grouping terms by K = Σk_i turns the inner sum into the
/// z^K coefficient of (Σ_k c_k z^k)^{2q}. The terms alternate in sign and
/// cancel by up to ~30 orders of magnitude, so F is summed exactly: 2λ is a
/// dyadic rational, hence so is every term, and the sum is carried out over
/// a common integer denominator.
pub fn gamma0(q: u32, n: u32, lambda: f64) -> Result<Gamma0> {
    if q < 1 {
        return Err(Error::domain("gamma0 requires q >= 1"));
    }
    if !(lambda > 0.5) || !lambda.is_finite() {
        return Err(Error::domain(format!("gamma0 requires lambda > 1/2, got {lambda}")));
    }
    let (m2l, e2l) = dyadic(2.0 * lambda);
    // 2λ = L / 2^s
    let (l, s) = if e2l >= 0 { (m2l << e2l as u64, 0u64) } else { (m2l, (-e2l) as u64) };
    let unit = BigInt::from(1) << s;
    let qb = BigInt::from(q);
    // a = A / 2^s
    let a_int = &qb * (&l - &unit) + (&unit << 1u64);

    let nn = n as usize;
    let shifted: Vec<BigInt> = (0..nn).map(|j| &l + &unit * BigInt::from(j)).collect();
    // c_k a^k over the common denominator Π_{j<n}(L + j 2^s) · n! · q^n
    let base: Vec<BigInt> = (0..=nn)
        .map(|k| {
            let mut v = BigInt::from(1);
            for i in 0..k {
                v *= BigInt::from(i as i64 - n as i64);
                v *= &a_int;
            }
            for f in &shifted[k..] {
                v *= f;
            }
            for j in k + 1..=nn {
                v *= BigInt::from(j);
            }
            for _ in k..nn {
                v *= &qb;
            }
            v
        })
        .collect();
    let mut denom = shifted.iter().fold(BigInt::from(1), |acc, f| acc * f);
    for j in 1..=nn {
        denom *= BigInt::from(j);
    }
    for _ in 0..nn {
        denom *= &qb;
    }

    let base_abs: Vec<BigInt> = base.iter().map(|b| b.magnitude().clone().into()).collect();
    let mut poly = base.clone();
    let mut poly_abs = base_abs.clone();
    for _ in 1..2 * q {
        poly = convolve(&poly, &base);
        poly_abs = convolve(&poly_abs, &base_abs);
    }
    let kmax = poly.len() - 1;

    // (a)_K / a^K = R_K / A^K, brought to the common denominator A^{Kmax}
    let mut a_pow = vec![BigInt::from(1); kmax + 1];
    for k in 1..=kmax {
        a_pow[k] = &a_pow[k - 1] * &a_int;
    }
    let mut num = BigInt::from(0);
    let mut num_abs = BigInt::from(0);
    let mut rising = BigInt::from(1);
    for k in 0..=kmax {
        if k > 0 {
            rising *= &a_int + &unit * BigInt::from(k - 1);
        }
        let w = &rising * &a_pow[kmax - k];
        num += &poly[k] * &w;
        num_abs += &poly_abs[k] * &w;
    }
    if num.sign() == Sign::NoSign {
        return Err(Error::Numeric(format!(
            "Lauricella sum vanished for q = {q}, n = {n}, lambda = {lambda}"
        )));
    }
    let sign = if num.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let num_mag: BigInt = num.magnitude().clone().into();
    let ln_num = ln_big(&num_mag);
    let ln_den = 2.0 * q as f64 * ln_big(&denom) + ln_big(&a_pow[kmax]);
    let ratio = (ln_big(&num_abs) - ln_num).exp();

    let a = q as f64 * (2.0 * lambda - 1.0) + 2.0;
    let ln_binom = binomial_real(2.0 * lambda - 1.0, n).ln();
    let ln_abs = ln_gamma_pos(a) + 2.0 * q as f64 * ln_binom + ln_num - ln_den;
    Ok(Gamma0 { ln_abs, sign, ratio })
}
