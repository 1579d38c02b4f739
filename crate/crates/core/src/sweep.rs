//! Measure evaluation at one parameter point and one-dimensional sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{fisher_closed, fisher_exact, shannon_closed, tsallis_from_moment, wq_closed};
use crate::oracle::numeric::{fisher_numeric, ln_wq_numeric, shannon_numeric};
use crate::system::{solve, SolveOptions, StateSpec, SystemParams};
use crate::tables::format_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Bound-state energy E (without the constant C).
    Energy,
    /// Closed-form Fisher information as printed.
    Fisher,
    /// Closed-form Fisher information with the Laguerre-moment radial part.
    FisherExact,
    /// Fisher information by quadrature.
    FisherNumeric,
    /// Closed-form Shannon entropy S1+S2+S3+S4.
    Shannon,
    /// Shannon entropy by quadrature.
    ShannonNumeric,
    /// Closed-form Tsallis entropy of order q.
    Tsallis,
    /// Closed-form Rényi entropy of order q.
    Renyi,
    /// Tsallis entropy from the numeric moment.
    TsallisNumeric,
    /// Rényi entropy from the numeric moment.
    RenyiNumeric,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Energy => "energy",
            Measure::Fisher => "fisher",
            Measure::FisherExact => "fisher-exact",
            Measure::FisherNumeric => "fisher-numeric",
            Measure::Shannon => "shannon",
            Measure::ShannonNumeric => "shannon-numeric",
            Measure::Tsallis => "tsallis",
            Measure::Renyi => "renyi",
            Measure::TsallisNumeric => "tsallis-numeric",
            Measure::RenyiNumeric => "renyi-numeric",
        }
    }

    fn needs_integer_q(self) -> bool {
        matches!(self, Measure::Tsallis | Measure::Renyi)
    }
}

/// Value of `measure` for one state; `q` is used by the Tsallis/Rényi entries.
pub fn evaluate(params: &SystemParams, spec: StateSpec, measure: Measure, q: f64, opts: SolveOptions) -> Result<f64> {
    if measure.needs_integer_q() && (q.fract() != 0.0 || q < 2.0) {
        return Err(Error::Usage(format!("closed-form {} needs integer q >= 2, got {q}", measure.name())));
    }
    if matches!(measure, Measure::TsallisNumeric | Measure::RenyiNumeric) && (!(q > 0.0) || q == 1.0) {
        return Err(Error::Usage(format!("{} needs q > 0 and q != 1, got {q}", measure.name())));
    }
    let solved = solve(params, spec, opts)?;
    let mode = opts.mode;
    Ok(match measure {
        Measure::Energy => solved.energy,
        Measure::Fisher => fisher_closed(params, &solved).i,
        Measure::FisherExact => fisher_exact(params, &solved).i,
        Measure::FisherNumeric => fisher_numeric(params, &solved, mode)?.i,
        Measure::Shannon => shannon_closed(params, &solved).s,
        Measure::ShannonNumeric => shannon_numeric(params, &solved, mode)?,
        Measure::Tsallis => tsallis_from_moment(wq_closed(params, &solved, q as u32)?.wq, q),
        Measure::Renyi => wq_closed(params, &solved, q as u32)?.ln_wq / (1.0 - q),
        Measure::TsallisNumeric => tsallis_from_moment(ln_wq_numeric(params, &solved, q, mode)?.exp(), q),
        Measure::RenyiNumeric => ln_wq_numeric(params, &solved, q, mode)? / (1.0 - q),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum SweepVar {
    #[value(name = "De")]
    #[serde(rename = "De")]
    De,
    #[value(name = "D")]
    #[serde(rename = "D")]
    D,
    #[value(name = "delta")]
    #[serde(rename = "delta")]
    Delta,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::De => "De",
            SweepVar::D => "D",
            SweepVar::Delta => "delta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub var: SweepVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Flux values; ignored (the swept value is used) when `var` is δ.
    pub deltas: Vec<f64>,
    pub measures: Vec<Measure>,
    pub spec: StateSpec,
    pub q: f64,
    pub opts: SolveOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub var: f64,
    pub value: f64,
    pub measure: Measure,
    pub delta: f64,
    pub n: u32,
    pub m: u32,
}

/// `steps` equally spaced points from `from` to `to` inclusive.
pub fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| if i + 1 == steps { to } else { from + (to - from) * i as f64 / (steps - 1) as f64 })
        .collect()
}

/// Rows ordered by swept value, then δ, then measure in the given order.
pub fn run_sweep(s: &SweepSpec) -> Result<Vec<SweepRow>> {
    if !(s.from < s.to) || !s.from.is_finite() || !s.to.is_finite() {
        return Err(Error::Usage(format!("sweep needs from < to, got {} and {}", s.from, s.to)));
    }
    if s.steps < 2 {
        return Err(Error::Usage(format!("sweep needs steps >= 2, got {}", s.steps)));
    }
    if s.measures.is_empty() {
        return Err(Error::Usage("no measure selected".into()));
    }
    let mut deltas = if s.var == SweepVar::Delta { vec![f64::NAN] } else { s.deltas.clone() };
    if deltas.is_empty() {
        deltas.push(s.base.delta);
    }
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let points: Vec<(f64, f64, Measure)> = grid(s.from, s.to, s.steps)
        .into_iter()
        .flat_map(|v| deltas.iter().flat_map(move |&d| s.measures.iter().map(move |&m| (v, d, m))))
        .collect();
    points
        .par_iter()
        .map(|&(v, d, measure)| {
            let b = &s.base;
            let (de, dm, delta) = match s.var {
                SweepVar::De => (v, b.dm, d),
                SweepVar::D => (b.de, v, d),
                SweepVar::Delta => (b.de, b.dm, v),
            };
            let params = SystemParams::new(de, b.re, dm, delta, b.mu)?;
            let value = evaluate(&params, s.spec, measure, s.q, s.opts)?;
            Ok(SweepRow { var: v, value, measure, delta, n: s.spec.n, m: s.spec.m })
        })
        .collect()
}

pub const SWEEP_HEADER: &str = "var,value,measure,delta,n,m";

pub fn render_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_sig(r.var, 10),
            format_sig(r.value, 10),
            r.measure.name(),
            format_sig(r.delta, 10),
            r.n,
            r.m
        ));
    }
    out
}
