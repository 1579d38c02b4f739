//! Gauss rules from Jacobi matrices, tanh-sinh, and the angular grids.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::specfun::{laguerre_unchecked, log_gamma};
use crate::tridiag::SymTridiag;

/// Generalized Gauss–Laguerre rule for the weight x^α e^{−x}.
///
/// For large α the true weights overflow, so `rel_weights` (summing to one)
/// and `ln_mass = ln Γ(α+1)` are the primary data; `weights` holds their
/// product where it is representable.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub rel_weights: Vec<f64>,
    pub ln_mass: f64,
}

impl QuadratureRule {
    /// Σ w_i f(x_i) / Γ(α+1).
    pub fn mean<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.rel_weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.mean(f) * self.ln_mass.exp()
    }
}

pub fn gauss_laguerre_rule(alpha: f64, points: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("Gauss-Laguerre needs alpha > -1, got {alpha}")));
    }
    if points == 0 {
        return Err(Error::domain("Gauss-Laguerre needs at least one node"));
    }
    let k = points;
    let diag: Vec<f64> = (0..k).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..k)
        .map(|j| -((j as f64) * (j as f64 + alpha)).sqrt())
        .collect();
    let t = SymTridiag::new(diag, off);
    let mut nodes = t.lowest(k);
    for x in nodes.iter_mut() {
        *x = polish_laguerre_root(k as u32, alpha, *x);
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) || !(nodes[0] > 0.0) {
        return Err(Error::Numeric(format!(
            "Gauss-Laguerre nodes not strictly increasing for alpha = {alpha}, K = {k}"
        )));
    }
    let rel_weights: Vec<f64> = nodes.iter().map(|&x| christoffel_laguerre(k, alpha, x)).collect();
    let ln_mass = log_gamma(alpha + 1.0)?;
    let mass = ln_mass.exp();
    let weights = rel_weights.iter().map(|w| w * mass).collect();
    Ok(QuadratureRule {
        alpha,
        nodes,
        weights,
        rel_weights,
        ln_mass,
    })
}

fn polish_laguerre_root(k: u32, alpha: f64, mut x: f64) -> f64 {
    for _ in 0..3 {
        let l = laguerre_unchecked(k, alpha, x);
        let dl = -laguerre_unchecked(k - 1, alpha + 1.0, x);
        if dl == 0.0 || !l.is_finite() || !dl.is_finite() {
            break;
        }
        let step = l / dl;
        if !(step.abs() < 1e-6 * x.max(1e-300)) {
            break;
        }
        x -= step;
    }
    x
}

/// 1 / Σ_{j<K} p_j(x)², with p_j orthonormal for x^α e^{−x} / Γ(α+1).
fn christoffel_laguerre(k: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 1.0;
    let mut ln_scale = 0.0;
    for j in 0..k - 1 {
        let jf = j as f64;
        let a = ((jf + 1.0) * (jf + 1.0 + alpha)).sqrt();
        let b = (jf * (jf + alpha)).sqrt();
        let next = ((2.0 * jf + alpha + 1.0 - x) * cur - b * prev) / a;
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
            sum *= 1e-200;
            ln_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    (-(sum.ln() + ln_scale)).exp()
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(points > 0);
    let diag = vec![0.0; points];
    let off: Vec<f64> = (1..points)
        .map(|j| {
            let j = j as f64;
            j / (4.0 * j * j - 1.0).sqrt()
        })
        .collect();
    let t = SymTridiag::new(diag, off);
    let mut nodes = t.lowest(points);
    let mut weights = Vec::with_capacity(points);
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = legendre_with_derivative(points, *x);
            *x -= p / dp;
        }
        let (_, dp) = legendre_with_derivative(points, *x);
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 1..n {
        let j = j as f64;
        let p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights on [0, 2π): trapezoid when the integrand is
/// 2π-periodic, composite Gauss–Legendre otherwise.
#[derive(Debug, Clone)]
pub struct AngularGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub periodic: bool,
}

pub const ANGULAR_POINTS: usize = 4096;
const LEGENDRE_PANELS: usize = 128;
const LEGENDRE_PER_PANEL: usize = 32;

impl AngularGrid {
    pub fn new(periodic: bool) -> Self {
        if periodic {
            let h = 2.0 * PI / ANGULAR_POINTS as f64;
            let nodes = (0..ANGULAR_POINTS).map(|i| i as f64 * h).collect();
            let weights = vec![h; ANGULAR_POINTS];
            return Self { nodes, weights, periodic };
        }
        let (gx, gw) = gauss_legendre(LEGENDRE_PER_PANEL);
        let width = 2.0 * PI / LEGENDRE_PANELS as f64;
        let mut nodes = Vec::with_capacity(LEGENDRE_PANELS * LEGENDRE_PER_PANEL);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in 0..LEGENDRE_PANELS {
            let mid = (p as f64 + 0.5) * width;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Self { nodes, weights, periodic }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

/// Integral estimate with the difference between the last two levels.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const TANH_SINH_TMAX: f64 = 4.0;
const TANH_SINH_LEVELS: u32 = 10;

/// Tanh-sinh quadrature on [a, b], halving the step until two successive
/// levels agree to `tol` (absolute).
///
/// `f` receives (x, distance to a, distance to b) so integrands with
/// endpoint behaviour can use the accurate distances.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Estimate {
    let half = 0.5 * (b - a);
    if half <= 0.0 {
        return Estimate { value: 0.0, error: 0.0 };
    }
    let eval = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let c = s.cosh();
        let w = FRAC_PI_2 * t.cosh() / (c * c);
        // 1 − tanh(s) and 1 + tanh(s) without cancellation.
        let e = (-2.0 * s.abs()).exp();
        let small = 2.0 * e / (1.0 + e);
        let (da, db) = if s >= 0.0 {
            (half * (2.0 - small), half * small)
        } else {
            (half * small, half * (2.0 - small))
        };
        if da <= 0.0 || db <= 0.0 {
            return 0.0;
        }
        let x = if da < db { a + da } else { b - db };
        let v = f(x, da, db);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };

    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > TANH_SINH_TMAX {
            break;
        }
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut value = half * h * sum;
    let mut error = f64::INFINITY;
    for _ in 0..TANH_SINH_LEVELS {
        h *= 0.5;
        let mut add = 0.0;
        let mut j = 1;
        loop {
            let t = j as f64 * h;
            if t > TANH_SINH_TMAX {
                break;
            }
            add += eval(t) + eval(-t);
            j += 2;
        }
        sum += add;
        let next = half * h * sum;
        error = (next - value).abs();
        value = next;
        if error <= tol {
            break;
        }
    }
    Estimate { value, error }
}
