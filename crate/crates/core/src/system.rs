//! Physical parameters, the angular and radial eigenproblems, and the
//! normalized probability density.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::oracle::quadrature::AngularGrid;
use crate::specfun::{
    laguerre_unchecked, mathieu_char_series, mathieu_even_solution, MathieuEvenSolution,
};
use crate::specfun::gamma::ln_gamma_pos;

/// Inputs in Hartree atomic units plus the Kratzer coefficients
/// V(r) = A/r + B/r² + C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub de: f64,
    pub re: f64,
    pub dm: f64,
    pub delta: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SystemParams {
    pub fn new(de: f64, re: f64, dm: f64, delta: f64, mu: f64) -> Result<Self> {
        let positive = [("De", de), ("re", re), ("mu", mu)];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        for (name, v) in [("D", dm), ("delta", delta)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be non-negative and finite, got {v}")));
            }
        }
        Ok(Self {
            de,
            re,
            dm,
            delta,
            mu,
            a: -2.0 * re * de,
            b: re * re * de,
            c: de,
        })
    }

    /// Mathieu parameter b = 4μD.
    pub fn mathieu_b(&self) -> f64 {
        4.0 * self.mu * self.dm
    }

    pub fn m_eff(&self, m: u32) -> f64 {
        m as f64 + self.delta
    }
}

pub fn make_params(de: f64, re: f64, dm: f64, delta: f64, mu: f64) -> Result<SystemParams> {
    SystemParams::new(de, re, dm, delta, mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateSpec {
    pub n: u32,
    pub m: u32,
}

impl StateSpec {
    pub fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AngularMode {
    /// Φ = cos(mθ), or 1/√2 for m = 0.
    #[default]
    PaperCosine,
    /// Φ from the even Mathieu solution of order 2(m+δ), scaled to ∫Φ² = π.
    MathieuNumeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AngularMethod {
    /// Truncated power series; fails at its singular orders.
    Series,
    /// Tridiagonal eigenproblem.
    Matrix,
    /// Series inside its validity window, matrix elsewhere and at singular orders.
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularEigen {
    pub e_theta: f64,
    pub char_number: f64,
    pub method: AngularMethod,
    pub warning: Option<Warning>,
}

/// E_θ = δ² − a_{2(m+δ)}(b)/4.
pub fn angular_eigen(params: &SystemParams, m: u32, method: AngularMethod) -> Result<AngularEigen> {
    let m_eff = params.m_eff(m);
    let b = params.mathieu_b();
    let (char_number, used, warning) = match method {
        AngularMethod::Matrix => (mathieu_even_solution(m_eff, b)?.char_number, AngularMethod::Matrix, None),
        AngularMethod::Series => {
            let s = mathieu_char_series(m_eff, b)?;
            (s.value, AngularMethod::Series, s.warning)
        }
        AngularMethod::Auto => match mathieu_char_series(m_eff, b) {
            Ok(s) if s.warning.is_none() => (s.value, AngularMethod::Series, None),
            Ok(s) => (mathieu_even_solution(m_eff, b)?.char_number, AngularMethod::Matrix, s.warning),
            Err(Error::SeriesSingular { .. }) => {
                (mathieu_even_solution(m_eff, b)?.char_number, AngularMethod::Matrix, None)
            }
            Err(e) => return Err(e),
        },
    };
    Ok(AngularEigen {
        e_theta: params.delta * params.delta - 0.25 * char_number,
        char_number,
        method: used,
        warning,
    })
}

pub fn angular_eigenvalue(params: &SystemParams, m: u32, method: AngularMethod) -> Result<f64> {
    angular_eigen(params, m, method).map(|e| e.e_theta)
}

/// Radicand −E_θ + 2μB + δ² of λ − 1/2.
pub fn lambda_radicand(params: &SystemParams, e_theta: f64) -> f64 {
    -e_theta + 2.0 * params.mu * params.b + params.delta * params.delta
}

/// λ = 1/2 + √(−E_θ + 2μB + δ²).
pub fn lambda_param(params: &SystemParams, m: u32, e_theta: f64) -> Result<f64> {
    let radicand = lambda_radicand(params, e_theta);
    if !(radicand > 0.0) {
        return Err(Error::UnboundAngular { m, radicand });
    }
    Ok(0.5 + radicand.sqrt())
}

/// β = −μA/(n + λ).
pub fn beta_param(params: &SystemParams, spec: StateSpec, lambda: f64) -> Result<f64> {
    if !(lambda > 0.5) {
        return Err(Error::domain(format!("lambda must exceed 1/2, got {lambda}")));
    }
    Ok(-params.mu * params.a / (spec.n as f64 + lambda))
}

/// E = −μA²/(2(n+λ)²).
pub fn energy(params: &SystemParams, solved: &SolvedState) -> f64 {
    let s = solved.spec.n as f64 + solved.lambda;
    -params.mu * params.a * params.a / (2.0 * s * s)
}

/// ln N² with N² = 2β² n! / (Γ(n+2λ)(n+λ)π).
pub fn ln_norm_squared(n: u32, lambda: f64, beta: f64) -> f64 {
    let nf = n as f64;
    (2.0 * beta * beta).ln() + ln_gamma_pos(nf + 1.0)
        - ln_gamma_pos(nf + 2.0 * lambda)
        - ((nf + lambda) * PI).ln()
}

pub fn normalization(solved: &SolvedState) -> f64 {
    (0.5 * ln_norm_squared(solved.spec.n, solved.lambda, solved.beta)).exp()
}

/// The angular factor Φ(θ) of a solved state.
#[derive(Debug, Clone, PartialEq)]
pub enum AngularFunction {
    Cosine { m: u32 },
    Mathieu {
        solution: MathieuEvenSolution,
        scale: f64,
    },
}

impl AngularFunction {
    pub fn new(params: &SystemParams, m: u32, mode: AngularMode) -> Result<Self> {
        match mode {
            AngularMode::PaperCosine => Ok(AngularFunction::Cosine { m }),
            AngularMode::MathieuNumeric => {
                let solution = mathieu_even_solution(params.m_eff(m), params.mathieu_b())?;
                let grid = AngularGrid::new(angular_periodic(params, m, mode));
                let raw = grid.integrate(|t| solution.eval(0.5 * t).powi(2));
                if !(raw > 0.0) {
                    return Err(Error::Numeric(format!("angular norm vanished for m = {m}")));
                }
                let mut f = AngularFunction::Mathieu {
                    scale: (PI / raw).sqrt(),
                    solution,
                };
                if f.value(0.0) < 0.0 {
                    if let AngularFunction::Mathieu { scale, .. } = &mut f {
                        *scale = -*scale;
                    }
                }
                Ok(f)
            }
        }
    }

    pub fn value(&self, theta: f64) -> f64 {
        match self {
            AngularFunction::Cosine { m: 0 } => std::f64::consts::FRAC_1_SQRT_2,
            AngularFunction::Cosine { m } => (*m as f64 * theta).cos(),
            AngularFunction::Mathieu { solution, scale } => scale * solution.eval(0.5 * theta),
        }
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        match self {
            AngularFunction::Cosine { m: 0 } => 0.0,
            AngularFunction::Cosine { m } => {
                let m = *m as f64;
                -m * (m * theta).sin()
            }
            AngularFunction::Mathieu { solution, scale } => {
                0.5 * scale * solution.eval_derivative(0.5 * theta)
            }
        }
    }
}

/// Whether Φ is 2π-periodic, which decides the angular quadrature rule.
pub fn angular_periodic(params: &SystemParams, m: u32, mode: AngularMode) -> bool {
    match mode {
        AngularMode::PaperCosine => true,
        AngularMode::MathieuNumeric => {
            let nu = 2.0 * params.m_eff(m);
            (nu - nu.round()).abs() < 1e-12
        }
    }
}

pub fn angular_function(params: &SystemParams, m: u32, mode: AngularMode, theta: f64) -> Result<f64> {
    Ok(AngularFunction::new(params, m, mode)?.value(theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub method: AngularMethod,
    pub mode: AngularMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolvedState {
    pub spec: StateSpec,
    pub b: f64,
    pub e_theta: f64,
    pub char_number: f64,
    pub lambda: f64,
    pub beta: f64,
    pub energy: f64,
    /// E + C.
    pub energy_total: f64,
    pub norm: f64,
    pub ln_norm_sq: f64,
    pub mode: AngularMode,
    pub method: AngularMethod,
    pub angular: AngularFunction,
    pub warnings: Vec<Warning>,
}

impl SolvedState {
    pub fn alpha(&self) -> f64 {
        2.0 * self.lambda - 1.0
    }

    pub fn periodic(&self, params: &SystemParams) -> bool {
        angular_periodic(params, self.spec.m, self.mode)
    }

    /// x = 2βr.
    pub fn scaled_radius(&self, r: f64) -> f64 {
        2.0 * self.beta * r
    }

    /// ρ(r, θ) = N² x^{2λ−1} e^{−x} Φ(θ)² [L_n^{2λ−1}(x)]².
    pub fn density(&self, r: f64, theta: f64) -> f64 {
        let x = self.scaled_radius(r);
        let phi = self.angular.value(theta);
        let l = laguerre_unchecked(self.spec.n, self.alpha(), x);
        if x == 0.0 {
            return if self.alpha() == 0.0 { (self.ln_norm_sq).exp() * phi * phi * l * l } else { 0.0 };
        }
        (self.ln_norm_sq + self.alpha() * x.ln() - x).exp() * phi * phi * l * l
    }
}

pub fn solve(params: &SystemParams, spec: StateSpec, opts: SolveOptions) -> Result<SolvedState> {
    let ang = angular_eigen(params, spec.m, opts.method)?;
    let lambda = lambda_param(params, spec.m, ang.e_theta)?;
    let beta = beta_param(params, spec, lambda)?;
    let angular = AngularFunction::new(params, spec.m, opts.mode)?;
    let ln_norm_sq = ln_norm_squared(spec.n, lambda, beta);
    let mut solved = SolvedState {
        spec,
        b: params.mathieu_b(),
        e_theta: ang.e_theta,
        char_number: ang.char_number,
        lambda,
        beta,
        energy: 0.0,
        energy_total: 0.0,
        norm: (0.5 * ln_norm_sq).exp(),
        ln_norm_sq,
        mode: opts.mode,
        method: ang.method,
        angular,
        warnings: ang.warning.into_iter().collect(),
    };
    solved.energy = energy(params, &solved);
    solved.energy_total = solved.energy + params.c;
    Ok(solved)
}

pub fn density(solved: &SolvedState, r: f64, theta: f64) -> f64 {
    solved.density(r, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> SystemParams {
        make_params(1.0, 1.0, 0.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn kratzer_coefficients() {
        let p = unit();
        assert_eq!((p.a, p.b, p.c), (-2.0, 1.0, 1.0));
        let p = make_params(3.0, 1.0, 0.4, 0.2, 1.0).unwrap();
        assert_eq!((p.a, p.b, p.c), (-6.0, 3.0, 3.0));
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(make_params(0.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(make_params(1.0, -1.0, 0.0, 0.0, 1.0).is_err());
        assert!(make_params(1.0, 1.0, -0.1, 0.0, 1.0).is_err());
        assert!(make_params(1.0, 1.0, 0.0, -0.2, 1.0).is_err());
        assert!(make_params(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn angular_eigenvalues() {
        let p = unit();
        assert_eq!(angular_eigenvalue(&p, 1, AngularMethod::Series).unwrap(), -1.0);
        let p = make_params(1.0, 1.0, 0.0, 0.3, 1.0).unwrap();
        let e = angular_eigenvalue(&p, 2, AngularMethod::Matrix).unwrap();
        assert!((e - (0.09 - 2.3 * 2.3)).abs() < 1e-14);
        let p = make_params(3.0, 1.0, 0.1, 0.2, 1.0).unwrap();
        let e = angular_eigenvalue(&p, 2, AngularMethod::Matrix).unwrap();
        assert!((e + 4.801_089_543_220_435).abs() < 1e-11);
    }

    #[test]
    fn auto_method_falls_back_at_singular_orders() {
        let p = make_params(1.0, 1.0, 0.1, 0.0, 1.0).unwrap();
        assert!(angular_eigenvalue(&p, 1, AngularMethod::Series).is_err());
        let e = angular_eigen(&p, 1, AngularMethod::Auto).unwrap();
        assert_eq!(e.method, AngularMethod::Matrix);
    }

    #[test]
    fn sample_state() {
        let s = solve(&unit(), StateSpec::new(0, 0), SolveOptions::default()).unwrap();
        assert!((s.lambda - 1.914_213_562_373_095).abs() < 1e-14);
        assert!((s.beta - 1.044_815_499_854_965_8).abs() < 1e-14);
        assert!((s.energy + 0.545_819_714_368_591).abs() < 1e-14);
        assert!((s.energy_total - (s.energy + 1.0)).abs() < 1e-15);
        let n2 = 2.0 * s.beta.powi(2) / (ln_gamma_pos(2.0 * s.lambda).exp() * s.lambda * PI);
        assert!((s.norm * s.norm - n2).abs() < 1e-14 * n2);
    }

    #[test]
    fn dipole_chain() {
        let p = make_params(3.0, 1.0, 0.1, 0.2, 1.0).unwrap();
        let opts = SolveOptions { method: AngularMethod::Matrix, mode: AngularMode::PaperCosine };
        let s = solve(&p, StateSpec::new(2, 2), opts).unwrap();
        assert!((s.e_theta + 4.801_089_543_220_435).abs() < 1e-11);
        assert!((s.lambda - 3.792_580_985_066_341).abs() < 1e-11);
        assert!((s.beta - 1.035_807_702_208_808).abs() < 1e-11);
        assert!((s.energy + 0.536_448_797_977_545_5).abs() < 1e-11);
    }

    #[test]
    fn unbound_state_is_rejected() {
        let p = make_params(1e-6, 1e-3, 50.0, 0.0, 1.0).unwrap();
        let r = solve(&p, StateSpec::new(0, 0), SolveOptions { method: AngularMethod::Matrix, ..Default::default() });
        assert!(matches!(r, Err(Error::UnboundAngular { .. })), "{r:?}");
    }

    #[test]
    fn lambda_one_normalization() {
        let s = 3.0_f64;
        let ln = ln_norm_squared(2, 1.0, s);
        assert!((ln.exp() - 2.0 * s * s / (9.0 * PI)).abs() < 1e-13);
    }

    #[test]
    fn cosine_angular_function() {
        let p = unit();
        assert_eq!(angular_function(&p, 2, AngularMode::PaperCosine, 0.0).unwrap(), 1.0);
        let v = angular_function(&p, 0, AngularMode::PaperCosine, 1.234).unwrap();
        assert!((v - 0.707_106_8).abs() < 1e-7);
    }

    #[test]
    fn mathieu_angular_function_at_zero_coupling() {
        let p = make_params(1.0, 1.0, 0.0, 0.2, 1.0).unwrap();
        let f = AngularFunction::new(&p, 2, AngularMode::MathieuNumeric).unwrap();
        let ratio = f.value(0.0);
        for t in [0.3, 1.1, 2.5, 4.0] {
            assert!((f.value(t) - ratio * (2.2 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn mathieu_angular_norm() {
        for (dm, delta, m) in [(0.1, 0.2, 2), (0.1, 0.0, 1), (0.05, 0.5, 0)] {
            let p = make_params(1.0, 1.0, dm, delta, 1.0).unwrap();
            let f = AngularFunction::new(&p, m, AngularMode::MathieuNumeric).unwrap();
            let g = AngularGrid::new(angular_periodic(&p, m, AngularMode::MathieuNumeric));
            let v = g.integrate(|t| f.value(t).powi(2));
            assert!((v - PI).abs() < 1e-10);
        }
    }

    #[test]
    fn density_has_radial_nodes() {
        let s = solve(&unit(), StateSpec::new(2, 1), SolveOptions::default()).unwrap();
        let rule = crate::oracle::quadrature::gauss_laguerre_rule(s.alpha(), 2).unwrap();
        for x in rule.nodes {
            let r = x / (2.0 * s.beta);
            assert!(s.density(r, 0.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn quantization_and_energy_identities(
            de in 0.2f64..5.0, re in 0.5f64..2.0, delta in 0.0f64..0.6, n in 0u32..9, m in 0u32..3
        ) {
            let p = make_params(de, re, 0.0, delta, 1.0).unwrap();
            let s = solve(&p, StateSpec::new(n, m), SolveOptions::default()).unwrap();
            prop_assert!((s.beta * (n as f64 + s.lambda) + p.mu * p.a).abs() <= 1e-12 * p.a.abs());
            let alt = -s.beta * s.beta / (2.0 * p.mu);
            prop_assert!(((s.energy - alt) / alt).abs() < 1e-12);
            let want = 0.5 + ((m as f64 + delta).powi(2) + 2.0 * p.b).sqrt();
            prop_assert!((s.lambda - want).abs() < 1e-12 * want);
            let next = solve(&p, StateSpec::new(n + 1, m), SolveOptions::default()).unwrap();
            prop_assert!(next.energy > s.energy);
            prop_assert!(s.density(0.7, 0.3) >= 0.0);
        }
    }
}
