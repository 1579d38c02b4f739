//! Closed-form Fisher, Shannon, Tsallis and Rényi measures of a solved state.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::gamma::{digamma_pos, ln_gamma_pos};
use crate::specfun::{double_factorial, gamma0, Gamma0};
use crate::system::{SolvedState, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherResult {
    pub i: f64,
    pub i1: f64,
    pub i2: f64,
}

/// Printed closed form: I = 2β²/(n+λ)·[4n + 4m²/(2λ−1) − (2λ−1)] + 4β².
pub fn fisher_closed(_params: &SystemParams, solved: &SolvedState) -> FisherResult {
    let (n, m) = (solved.spec.n as f64, solved.spec.m as f64);
    let (lam, b2) = (solved.lambda, solved.beta * solved.beta);
    let alpha = 2.0 * lam - 1.0;
    let i1 = 2.0 * b2 / (n + lam) * (4.0 * n - alpha) + 4.0 * b2;
    let i2 = fisher_angular(n, m, lam, b2);
    FisherResult { i: i1 + i2, i1, i2 }
}

/// Radial part from the Laguerre moments, I₁ = 2β²(2n+1)/(n+λ); agrees
/// with [`fisher_closed`] only at n = 0.
pub fn fisher_exact(_params: &SystemParams, solved: &SolvedState) -> FisherResult {
    let (n, m) = (solved.spec.n as f64, solved.spec.m as f64);
    let (lam, b2) = (solved.lambda, solved.beta * solved.beta);
    let i1 = 2.0 * b2 * (2.0 * n + 1.0) / (n + lam);
    let i2 = fisher_angular(n, m, lam, b2);
    FisherResult { i: i1 + i2, i1, i2 }
}

fn fisher_angular(n: f64, m: f64, lam: f64, b2: f64) -> f64 {
    8.0 * m * m * b2 / ((n + lam) * (2.0 * lam - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShannonResult {
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
    /// S4 is a large-n expansion with its remainder dropped.
    pub asymptotic: bool,
}

/// S1..S4 with the cosine angular constant π(1 − 2 ln 2).
pub fn shannon_closed(_params: &SystemParams, solved: &SolvedState) -> ShannonResult {
    let n = solved.spec.n as f64;
    let lam = solved.lambda;
    let b2 = solved.beta * solved.beta;
    let s1 = 2.0 * LN_2 - 1.0;
    let s2 = -(2.0 * b2 / ((n + lam) * PI)).ln();
    let s3 = (n + 2.0 * lam)
        * (-(2.0 * lam - 1.0) * digamma_pos(n + 2.0 * lam + 1.0) + 2.0 * n + 2.0 * lam + 1.0)
        / (2.0 * (n + lam));
    let n_ln_n = if n > 0.0 { n * n.ln() } else { 0.0 };
    let s4 = -(-6.0 * n * n + 4.0 * lam * n_ln_n + 2.0 * n * ((2.0 * PI).ln() - 4.0 * lam - 2.0))
        / (2.0 * (n + lam));
    ShannonResult {
        s: s1 + s2 + s3 + s4,
        s1,
        s2,
        s3,
        s4,
        asymptotic: true,
    }
}

/// Radial measure denominator of W_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum MomentPrefactor {
    /// N^{2q}/(4β²), consistent with dV = x dx dθ/(4β²).
    #[default]
    FourBetaSquared,
    /// N^{2q}/(2β²) as printed in the first display of W_q.
    TwoBetaSquared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropicMoment {
    pub q: u32,
    pub wq: f64,
    pub ln_wq: f64,
    pub gamma0: Gamma0,
}

/// W_q = N^{2q}/(4β²) · (2q−1)!!·2π/(2^q q!) · q^{−(q(2λ−1)+2)} · γ₀.
///
/// The angular factor is the cosine value for every m, including m = 0.
/// q = 1 is accepted as a normalization diagnostic.
pub fn wq_closed(params: &SystemParams, solved: &SolvedState, q: u32) -> Result<EntropicMoment> {
    wq_closed_with(params, solved, q, MomentPrefactor::default())
}

pub fn wq_closed_with(
    _params: &SystemParams,
    solved: &SolvedState,
    q: u32,
    prefactor: MomentPrefactor,
) -> Result<EntropicMoment> {
    if q < 1 {
        return Err(Error::domain("closed-form W_q needs integer q >= 1"));
    }
    let qf = q as f64;
    let lam = solved.lambda;
    let g = gamma0(q, solved.spec.n, lam)?;
    let denom = match prefactor {
        MomentPrefactor::FourBetaSquared => 4.0,
        MomentPrefactor::TwoBetaSquared => 2.0,
    } * solved.beta
        * solved.beta;
    let ln_angular = double_factorial(2 * q as i64 - 1)?.as_f64().ln() + (2.0 * PI).ln()
        - qf * LN_2
        - ln_gamma_pos(qf + 1.0);
    let ln_wq = qf * solved.ln_norm_sq - denom.ln() + ln_angular
        - (qf * (2.0 * lam - 1.0) + 2.0) * qf.ln()
        + g.ln_abs;
    if g.sign < 0.0 {
        return Err(Error::Numeric(format!(
            "negative Lauricella sum for q = {q}, n = {}",
            solved.spec.n
        )));
    }
    Ok(EntropicMoment {
        q,
        wq: ln_wq.exp(),
        ln_wq,
        gamma0: g,
    })
}

pub fn tsallis_from_moment(wq: f64, q: f64) -> f64 {
    (1.0 - wq) / (q - 1.0)
}

pub fn renyi_from_ln_moment(ln_wq: f64, q: f64) -> f64 {
    ln_wq / (1.0 - q)
}

fn check_order(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("closed-form Tsallis/Renyi need integer q >= 2, got {q}")));
    }
    Ok(())
}

/// T_q = (1 − W_q)/(q − 1).
pub fn tsallis(params: &SystemParams, solved: &SolvedState, q: u32) -> Result<f64> {
    check_order(q)?;
    let w = wq_closed(params, solved, q)?;
    Ok(tsallis_from_moment(w.wq, q as f64))
}

/// R_q = ln W_q/(1 − q).
pub fn renyi(params: &SystemParams, solved: &SolvedState, q: u32) -> Result<f64> {
    check_order(q)?;
    let w = wq_closed(params, solved, q)?;
    Ok(renyi_from_ln_moment(w.ln_wq, q as f64))
}
