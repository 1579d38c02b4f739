//! Measures computed directly from the density by quadrature.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use super::quadrature::{gauss_laguerre_rule, tanh_sinh, AngularGrid};
use crate::error::{Error, Result};
use crate::measures::FisherResult;
use crate::specfun::gamma::ln_gamma_pos;
use crate::specfun::laguerre_unchecked;
use crate::system::{AngularFunction, AngularMode, SolvedState, SystemParams};

const BASE_POINTS: usize = 32;
const GAUSS_AGREEMENT: f64 = 1e-10;
const SHANNON_PIECE_TOL: f64 = 1e-12;
const SHANNON_TARGET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularIntegrals {
    /// ∫Φ² dθ
    pub i2norm: f64,
    /// ∫(Φ′)² dθ
    pub ideriv: f64,
    /// ∫Φ² ln Φ² dθ
    pub ilog: f64,
    /// ∫Φ^{2q} dθ
    pub ipow: f64,
}

fn angular_for(params: &SystemParams, solved: &SolvedState, mode: AngularMode) -> Result<AngularFunction> {
    if mode == solved.mode {
        Ok(solved.angular.clone())
    } else {
        AngularFunction::new(params, solved.spec.m, mode)
    }
}

fn grid_for(params: &SystemParams, m: u32, mode: AngularMode) -> AngularGrid {
    AngularGrid::new(crate::system::angular_periodic(params, m, mode))
}

fn x_log_x(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Angular integrals on the uniform (periodic) or Gauss–Legendre grid.
pub fn angular_integrals_numeric(
    params: &SystemParams,
    m: u32,
    mode: AngularMode,
    q: f64,
) -> Result<AngularIntegrals> {
    let f = AngularFunction::new(params, m, mode)?;
    Ok(angular_integrals_of(&f, &grid_for(params, m, mode), q))
}

fn angular_integrals_of(f: &AngularFunction, grid: &AngularGrid, q: f64) -> AngularIntegrals {
    let mut out = AngularIntegrals {
        i2norm: 0.0,
        ideriv: 0.0,
        ilog: 0.0,
        ipow: 0.0,
    };
    for (&t, &w) in grid.nodes.iter().zip(&grid.weights) {
        let p2 = f.value(t).powi(2);
        let d = f.derivative(t);
        out.i2norm += w * p2;
        out.ideriv += w * d * d;
        out.ilog += w * x_log_x(p2);
        out.ipow += w * p2.powf(q);
    }
    out
}

/// I₁ = N²·∫Φ²·∫x^{2λ−2}e^{−x}[(2λ−1−x)L_n^{2λ−1} − 2x L_{n−1}^{2λ}]² dx and
/// I₂ = 4N²·∫Φ′²·∫x^{2λ−2}e^{−x}[L_n^{2λ−1}]² dx.
pub fn fisher_numeric(params: &SystemParams, solved: &SolvedState, mode: AngularMode) -> Result<FisherResult> {
    let (ia, ida) = match mode {
        AngularMode::PaperCosine => {
            let m = solved.spec.m as f64;
            (PI, m * m * PI)
        }
        AngularMode::MathieuNumeric => {
            let f = angular_for(params, solved, mode)?;
            let a = angular_integrals_of(&f, &grid_for(params, solved.spec.m, mode), 1.0);
            (a.i2norm, a.ideriv)
        }
    };
    let n = solved.spec.n;
    let alpha = solved.alpha();
    let k1 = BASE_POINTS.max(n as usize + 2);
    let radial = |k: usize| -> Result<(f64, f64)> {
        let rule = gauss_laguerre_rule(alpha - 1.0, k)?;
        let g1 = rule.mean(|x| {
            let l = laguerre_unchecked(n, alpha, x);
            let lp = if n == 0 { 0.0 } else { laguerre_unchecked(n - 1, alpha + 1.0, x) };
            let t = (alpha - x) * l - 2.0 * x * lp;
            t * t
        });
        let g2 = rule.mean(|x| laguerre_unchecked(n, alpha, x).powi(2));
        let scale = (solved.ln_norm_sq + rule.ln_mass).exp();
        Ok((ia * scale * g1, 4.0 * ida * scale * g2))
    };
    let (a1, a2) = radial(k1)?;
    let (b1, b2) = radial(2 * k1)?;
    let total = b1 + b2;
    let diff = ((a1 + a2) - total).abs() / total.abs().max(f64::MIN_POSITIVE);
    if !(diff < GAUSS_AGREEMENT) {
        return Err(Error::Accuracy {
            what: "Fisher radial quadrature".into(),
            achieved: diff,
            target: GAUSS_AGREEMENT,
        });
    }
    Ok(FisherResult { i: total, i1: b1, i2: b2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShannonNumeric {
    pub s: f64,
    /// Estimated absolute quadrature error.
    pub error: f64,
    /// ∫ρ dV by the same radial pieces.
    pub mass: f64,
}

/// Breakpoints 0 = x₀ < … < x_k covering the radial mass: the Laguerre
/// roots, then evenly spaced points out to where the weight is e^{−80} below its peak.
fn radial_breakpoints(n: u32, alpha: f64, power: f64) -> Result<Vec<f64>> {
    let mut pts = vec![0.0];
    if n > 0 {
        pts.extend(gauss_laguerre_rule(alpha, n as usize)?.nodes);
    }
    // log of x^{power·α+1} e^{−power·x} L^{2power}, up to constants
    let log_w = |x: f64| {
        let l = laguerre_unchecked(n, alpha, x).abs().max(1e-300);
        (power * alpha + 1.0) * x.ln() - power * x + 2.0 * power * l.ln()
    };
    let mode = (power * alpha + 1.0) / power + 2.0 * n as f64;
    let width = ((power * alpha + 2.0 + 2.0 * n as f64).sqrt() / power).max(1.0);
    let last = *pts.last().unwrap();
    let peak = log_w(mode.max(last + width)).max(log_w(mode));
    let mut x = mode.max(last) + width;
    while log_w(x) > peak - 80.0 {
        x += width;
    }
    let mut out = Vec::with_capacity(pts.len() + 64);
    pts.push(x);
    let step = 2.0 * width;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pieces = ((b - a) / step).ceil().max(1.0) as usize;
        for i in 0..pieces {
            out.push(a + (b - a) * i as f64 / pieces as f64);
        }
    }
    out.push(x);
    Ok(out)
}

/// S = −∫ρ ln ρ dV, split as −(J_r·∫Φ² + I_r·∫Φ² ln Φ²) with adaptive
/// tanh-sinh radial pieces between consecutive Laguerre roots.
pub fn shannon_numeric_detail(
    params: &SystemParams,
    solved: &SolvedState,
    mode: AngularMode,
) -> Result<ShannonNumeric> {
    let (ia, ja) = match mode {
        AngularMode::PaperCosine => {
            if solved.spec.m == 0 {
                (PI, -PI * LN_2)
            } else {
                (PI, PI * (1.0 - 2.0 * LN_2))
            }
        }
        AngularMode::MathieuNumeric => {
            let f = angular_for(params, solved, mode)?;
            let a = angular_integrals_of(&f, &grid_for(params, solved.spec.m, mode), 1.0);
            (a.i2norm, a.ilog)
        }
    };
    let n = solved.spec.n;
    let alpha = solved.alpha();
    let ln_n2 = solved.ln_norm_sq;
    let ln_pref = ln_n2 - (4.0 * solved.beta * solved.beta).ln();
    let pts = radial_breakpoints(n, alpha, 1.0)?;

    let mut ir = 0.0;
    let mut jr = 0.0;
    let mut err = 0.0;
    for w in pts.windows(2) {
        let e_mass = tanh_sinh(
            |x, _, _| {
                let l = laguerre_unchecked(n, alpha, x);
                (ln_pref + (alpha + 1.0) * x.ln() - x).exp() * l * l
            },
            w[0],
            w[1],
            SHANNON_PIECE_TOL,
        );
        let e_log = tanh_sinh(
            |x, _, _| {
                let l = laguerre_unchecked(n, alpha, x);
                if l == 0.0 {
                    return 0.0;
                }
                let l2 = l * l;
                let lx = x.ln();
                (ln_pref + (alpha + 1.0) * lx - x).exp() * l2 * (ln_n2 + alpha * lx - x + l2.ln())
            },
            w[0],
            w[1],
            SHANNON_PIECE_TOL,
        );
        ir += e_mass.value;
        jr += e_log.value;
        err += e_log.error * ia + e_mass.error * ja.abs();
    }
    let s = -(jr * ia + ir * ja);
    if !(err < SHANNON_TARGET) || !s.is_finite() {
        return Err(Error::Accuracy {
            what: "Shannon radial quadrature".into(),
            achieved: err,
            target: SHANNON_TARGET,
        });
    }
    Ok(ShannonNumeric { s, error: err, mass: ir * ia })
}

pub fn shannon_numeric(params: &SystemParams, solved: &SolvedState, mode: AngularMode) -> Result<f64> {
    shannon_numeric_detail(params, solved, mode).map(|r| r.s)
}

/// W_q = ∫ρ^q dV; Gauss–Laguerre in u = qx for integer q, tanh-sinh otherwise.
pub fn wq_numeric(params: &SystemParams, solved: &SolvedState, q: f64, mode: AngularMode) -> Result<f64> {
    ln_wq_numeric(params, solved, q, mode).map(f64::exp)
}

pub fn ln_wq_numeric(params: &SystemParams, solved: &SolvedState, q: f64, mode: AngularMode) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(format!("W_q needs q > 0, got {q}")));
    }
    let f = angular_for(params, solved, mode)?;
    let ang = angular_integrals_of(&f, &grid_for(params, solved.spec.m, mode), q).ipow;
    let n = solved.spec.n;
    let alpha = solved.alpha();
    let ln_common = q * solved.ln_norm_sq - (4.0 * solved.beta * solved.beta).ln() + ang.ln();

    if q.fract() == 0.0 {
        let au = q * alpha + 1.0;
        let k1 = BASE_POINTS.max((q as usize) * n as usize + 2);
        let radial = |k: usize| -> Result<f64> {
            let rule = gauss_laguerre_rule(au, k)?;
            let mean = rule.mean(|u| laguerre_unchecked(n, alpha, u / q).powi(2 * q as i32));
            Ok(rule.ln_mass + mean.ln() - (au + 1.0) * q.ln())
        };
        let a = radial(k1)?;
        let b = radial(2 * k1)?;
        let diff = (a - b).abs();
        if !(diff < GAUSS_AGREEMENT) {
            return Err(Error::Accuracy {
                what: "W_q radial quadrature".into(),
                achieved: diff,
                target: GAUSS_AGREEMENT,
            });
        }
        return Ok(ln_common + b);
    }

    let pts = radial_breakpoints(n, alpha, q)?;
    let log_integrand = |x: f64| {
        let l = laguerre_unchecked(n, alpha, x).abs();
        (q * alpha + 1.0) * x.ln() - q * x + 2.0 * q * l.ln()
    };
    // Shift by the value near the peak so the summands stay representable.
    let shift = pts
        .iter()
        .skip(1)
        .map(|&x| log_integrand(x))
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    let mut err = 0.0;
    for w in pts.windows(2) {
        let e = tanh_sinh(|x, _, _| (log_integrand(x) - shift).exp(), w[0], w[1], 1e-14);
        total += e.value;
        err += e.error;
    }
    if !(err < 1e-10 * total) {
        return Err(Error::Accuracy {
            what: "W_q radial quadrature (real q)".into(),
            achieved: err / total,
            target: 1e-10,
        });
    }
    Ok(ln_common + shift + total.ln())
}

/// ∫ρ dV = W₁.
pub fn normalization_numeric(params: &SystemParams, solved: &SolvedState, mode: AngularMode) -> Result<f64> {
    wq_numeric(params, solved, 1.0, mode)
}

/// Γ(α+1) moments used by tests and diagnostics.
pub fn ln_gamma_weight(alpha: f64) -> f64 {
    ln_gamma_pos(alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{fisher_closed, fisher_exact, shannon_closed, wq_closed};
    use crate::system::{make_params, solve, AngularMethod, SolveOptions, StateSpec};

    fn unit_state(n: u32, m: u32, delta: f64) -> (SystemParams, SolvedState) {
        let p = make_params(1.0, 1.0, 0.0, delta, 1.0).unwrap();
        let s = solve(&p, StateSpec::new(n, m), SolveOptions::default()).unwrap();
        (p, s)
    }

    #[test]
    fn cosine_angular_integrals() {
        let p = make_params(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let a = angular_integrals_numeric(&p, 2, AngularMode::PaperCosine, 2.0).unwrap();
        assert!((a.i2norm - PI).abs() < 1e-12);
        assert!((a.ideriv - 4.0 * PI).abs() < 1e-11);
        assert!((a.ilog - PI * (1.0 - 2.0 * LN_2)).abs() < 1e-8);
        assert!((a.ipow - 0.75 * PI).abs() < 1e-12);
        let a = angular_integrals_numeric(&p, 0, AngularMode::PaperCosine, 2.0).unwrap();
        assert!((a.i2norm - PI).abs() < 1e-12);
        assert!(a.ideriv.abs() < 1e-15);
        assert!((a.ilog + PI * LN_2).abs() < 1e-12);
        assert!((a.ipow - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn mathieu_angular_integrals_near_cosine_values() {
        let p = make_params(1.0, 1.0, 0.1, 0.2, 1.0).unwrap();
        let a = angular_integrals_numeric(&p, 2, AngularMode::MathieuNumeric, 2.0).unwrap();
        assert!((a.i2norm - PI).abs() < 1e-10);
        for (got, want) in [
            (a.ideriv, 4.0 * PI),
            (a.ilog, PI * (1.0 - 2.0 * LN_2)),
            (a.ipow, 0.75 * PI),
        ] {
            assert!(((got - want) / want).abs() < 0.25, "{got} vs {want}");
        }
    }

    #[test]
    fn fisher_sample_state() {
        let (p, s) = unit_state(0, 0, 0.0);
        let f = fisher_numeric(&p, &s, AngularMode::PaperCosine).unwrap();
        assert!((f.i - 1.140_561_795_397_428).abs() < 1e-12);
        assert!(f.i2.abs() < 1e-12);
    }

    #[test]
    fn fisher_quadrature_matches_laguerre_moments() {
        for (n, m, delta) in [(1, 0, 0.0), (3, 1, 0.2), (8, 2, 0.5)] {
            let (p, s) = unit_state(n, m, delta);
            let num = fisher_numeric(&p, &s, AngularMode::PaperCosine).unwrap();
            let exact = fisher_exact(&p, &s);
            assert!(((num.i - exact.i) / exact.i).abs() < 1e-11, "n = {n}");
            assert!(((num.i2 - exact.i2) / exact.i2.max(1e-300)).abs() < 1e-11 || m == 0);
        }
        let (p, s) = unit_state(1, 0, 0.0);
        let num = fisher_numeric(&p, &s, AngularMode::PaperCosine).unwrap();
        assert!((num.i - 0.969_721_705_602_544).abs() < 1e-12);
        assert!((fisher_closed(&p, &s).i - 2.262_683_979_739_27).abs() < 1e-12);
    }

    #[test]
    fn shannon_sample_state() {
        let (p, s) = unit_state(0, 0, 0.0);
        let r = shannon_numeric_detail(&p, &s, AngularMode::PaperCosine).unwrap();
        assert!((r.s - 3.964_817_006_787_331_85).abs() < 1e-9, "{}", r.s);
        assert!((r.mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shannon_excited_states() {
        for (n, want) in [(5, 8.813_481_921_802_48), (20, 13.124_957_269_890_7)] {
            let (p, s) = unit_state(n, 1, 0.0);
            let got = shannon_numeric(&p, &s, AngularMode::PaperCosine).unwrap();
            assert!((got - want).abs() < 1e-8, "n = {n}: {got}");
            let closed = shannon_closed(&p, &s);
            assert!(closed.s.is_finite());
        }
    }

    #[test]
    fn moments_and_normalization() {
        let (p, s) = unit_state(0, 1, 0.0);
        let w2 = wq_numeric(&p, &s, 2.0, AngularMode::PaperCosine).unwrap();
        assert!((w2 - 0.022_298_799_960_110_03).abs() < 1e-14);
        for (n, m) in [(0, 0), (4, 1), (8, 2)] {
            let (p, s) = unit_state(n, m, 0.2);
            let w1 = normalization_numeric(&p, &s, AngularMode::PaperCosine).unwrap();
            assert!((w1 - 1.0).abs() < 1e-12);
            for q in [2u32, 3] {
                if m == 0 {
                    continue;
                }
                let a = wq_numeric(&p, &s, q as f64, AngularMode::PaperCosine).unwrap();
                let b = wq_closed(&p, &s, q).unwrap().wq;
                assert!(((a - b) / b).abs() < 1e-10, "n {n} m {m} q {q} {a} {b}");
            }
        }
    }

    #[test]
    fn real_order_moments() {
        let (p, s) = unit_state(0, 0, 0.0);
        let ln_w = ln_wq_numeric(&p, &s, 1.01, AngularMode::PaperCosine).unwrap();
        let r = ln_w / (1.0 - 1.01);
        assert!((r - 3.959_797_345_964_762_26).abs() < 1e-8, "{r}");
        let smooth = ln_wq_numeric(&p, &s, 2.0, AngularMode::PaperCosine).unwrap();
        assert!((-smooth - 3.675_654_744_106_580_77).abs() < 1e-12);
        for (q, want) in [(3.0, 3.554_578_525_255_886_57), (4.0, 3.485_553_327_764_763_07)] {
            let r = ln_wq_numeric(&p, &s, q, AngularMode::PaperCosine).unwrap() / (1.0 - q);
            assert!((r - want).abs() < 1e-12, "{q} {r}");
        }
        // Real-q path against the Gauss path at an integer order.
        let a = ln_wq_numeric(&p, &s, 2.0 + 1e-9, AngularMode::PaperCosine).unwrap();
        assert!((a - smooth).abs() < 1e-7);
    }

    #[test]
    fn mathieu_mode_normalization() {
        for (dm, delta, m, n) in [(0.1, 0.2, 2, 3), (0.1, 0.0, 1, 0), (0.1, 0.5, 0, 8)] {
            let p = make_params(3.0, 1.0, dm, delta, 1.0).unwrap();
            let opts = SolveOptions { method: AngularMethod::Matrix, mode: AngularMode::MathieuNumeric };
            let s = solve(&p, StateSpec::new(n, m), opts).unwrap();
            let w1 = normalization_numeric(&p, &s, AngularMode::MathieuNumeric).unwrap();
            assert!((w1 - 1.0).abs() < 1e-10);
        }
    }
}
