//! Fisher/Shannon and Tsallis/Rényi tables for the molecule presets, the
//! published reference values, and a scan over unit and mass conventions.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{fisher_closed, fisher_exact, shannon_closed, tsallis_from_moment, wq_closed};
use crate::molecules::{amu_to_electron_masses, find_preset, to_atomic_units, MoleculePreset};
use crate::oracle::numeric::shannon_numeric;
use crate::system::{solve, AngularMethod, AngularMode, SolveOptions, StateSpec, SystemParams};

pub const TABLE_N: [u32; 5] = [1, 2, 4, 6, 8];
pub const TABLE_M: [u32; 3] = [0, 1, 2];
pub const TABLE_MOLECULES: [&str; 3] = ["Cs2", "Li2", "SiSn"];
pub const TABLE_DELTA: f64 = 0.2;
pub const TABLE_DIPOLE: f64 = 0.4;
pub const SCAN_Q: [u32; 4] = [2, 3, 4, 5];
/// The scan skips numeric Shannon entropies above this λ (series far outside its window).
pub const SCAN_LAMBDA_LIMIT: f64 = 1e6;

/// One published row; `first`/`second` are ordered Cs2, Li2, SiSn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub n: u32,
    pub m: u32,
    pub first: [f64; 3],
    pub second: [f64; 3],
}

const fn row(n: u32, m: u32, first: [f64; 3], second: [f64; 3]) -> ReferenceRow {
    ReferenceRow { n, m, first, second }
}

/// Fisher information I and Shannon entropy S.
pub const REFERENCE_FISHER_SHANNON: [ReferenceRow; 15] = [
    row(1, 0, [1.20, 3.01, 6.32], [6.2815, 5.3274, 4.6874]),
    row(1, 1, [1.15, 2.86, 6.46], [6.3875, 5.4561, 4.7559]),
    row(1, 2, [1.13, 2.75, 6.52], [6.5810, 5.6816, 4.8837]),
    row(2, 0, [1.39, 3.34, 8.20], [6.9706, 6.0591, 5.2857]),
    row(2, 1, [1.32, 3.14, 7.80], [7.0611, 6.1641, 5.3459]),
    row(2, 2, [1.25, 2.91, 7.73], [7.2296, 6.3581, 5.4591]),
    row(4, 0, [1.25, 2.84, 8.11], [8.0276, 7.1660, 6.2181]),
    row(4, 1, [1.18, 2.74, 7.84], [8.0971, 7.2455, 6.2676]),
    row(4, 2, [1.10, 2.52, 7.61], [8.2311, 7.3980, 6.3601]),
    row(6, 0, [0.998, 2.27, 7.08], [8.8416, 8.0125, 6.9510]),
    row(6, 1, [0.958, 2.17, 6.74], [8.8981, 8.0750, 6.9925]),
    row(6, 2, [0.910, 2.01, 6.66], [9.0096, 8.2010, 7.0710]),
    row(8, 0, [0.798, 1.77, 5.95], [9.5087, 8.7020, 7.5595]),
    row(8, 1, [0.770, 1.70, 5.76], [9.5562, 8.7525, 7.5960]),
    row(8, 2, [0.733, 1.58, 5.63], [9.6512, 8.8600, 7.6640]),
];

/// Tsallis entropy T and Rényi entropy R.
pub const REFERENCE_TSALLIS_RENYI: [ReferenceRow; 15] = [
    row(1, 0, [0.99751, 0.99350, 0.98784], [5.9954, 5.0362, 4.4098]),
    row(1, 1, [0.99777, 0.99430, 0.98866], [6.1056, 5.1670, 4.4792]),
    row(1, 2, [0.99816, 0.99547, 0.99003], [6.2992, 5.3962, 4.6084]),
    row(2, 0, [0.99876, 0.996882, 0.99336], [6.6897, 5.7715, 5.0144]),
    row(2, 1, [0.99887, 0.99722, 0.99375], [6.7849, 5.8848, 5.0756]),
    row(2, 2, [0.99904, 0.99771, 0.99443], [6.9526, 6.0812, 5.1898]),
    row(4, 0, [0.99957, 0.99898, 0.99740], [7.7518, 6.8894, 5.9541]),
    row(4, 1, [0.99960, 0.99907, 0.99753], [7.8273, 6.9778, 6.0038]),
    row(4, 2, [0.99965, 0.99920, 0.99775], [7.9600, 7.1311, 6.0969]),
    row(6, 0, [0.99981, 0.99957, 0.99876], [8.5686, 7.7410, 6.6907]),
    row(6, 1, [0.99982, 0.99960, 0.99881], [8.6316, 7.8141, 6.7326]),
    row(6, 2, [0.99984, 0.99964, 0.99890], [8.7413, 7.9400, 6.8115]),
    row(8, 0, [0.99990, 0.99978, 0.99933], [9.2367, 8.4331, 7.3023]),
    row(8, 1, [0.99991, 0.99980, 0.99935], [9.2909, 8.4956, 7.3386]),
    row(8, 2, [0.99992, 0.99982, 0.99939], [9.3847, 8.6028, 7.4069]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    /// I and S.
    #[value(name = "1")]
    FisherShannon,
    /// T_q and R_q.
    #[value(name = "2")]
    TsallisRenyi,
}

/// How the preset De, re and D enter the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum UnitConvention {
    /// De and re converted from eV and Å to Hartree atomic units.
    #[default]
    Atomic,
    /// The eV and Å numbers used as they are.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MassConvention {
    /// Preset reduced mass in electron masses.
    #[default]
    NistAtomic,
    /// Preset reduced mass in amu, used as a bare number.
    AmuNumber,
    /// μ = 1.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FisherForm {
    #[default]
    Printed,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ShannonForm {
    /// Quadrature of −∫ρ ln ρ.
    #[default]
    Numeric,
    /// S1 + S2 + S3 + S4.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub units: UnitConvention,
    pub mass: MassConvention,
    /// Replaces the convention's μ for every molecule.
    pub mu_override: Option<f64>,
    pub q: u32,
    pub fisher: FisherForm,
    pub shannon: ShannonForm,
    pub method: AngularMethod,
    pub mode: AngularMode,
    pub delta: f64,
    pub dm: f64,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            units: UnitConvention::Atomic,
            mass: MassConvention::NistAtomic,
            mu_override: None,
            q: 2,
            fisher: FisherForm::Printed,
            shannon: ShannonForm::Numeric,
            method: AngularMethod::Auto,
            mode: AngularMode::PaperCosine,
            delta: TABLE_DELTA,
            dm: TABLE_DIPOLE,
        }
    }
}

impl TableConfig {
    pub fn label(&self) -> String {
        let mu = match self.mu_override {
            Some(mu) => format!("mu={mu}"),
            None => format!("mass={}", value_name(self.mass)),
        };
        format!(
            "units={} {mu} q={} fisher={} shannon={} angular={}",
            value_name(self.units),
            self.q,
            value_name(self.fisher),
            value_name(self.shannon),
            value_name(self.method)
        )
    }
}

fn value_name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

pub fn preset_mu(preset: &MoleculePreset, cfg: &TableConfig) -> f64 {
    match (cfg.mu_override, cfg.mass) {
        (Some(mu), _) => mu,
        (None, MassConvention::NistAtomic) => amu_to_electron_masses(preset.mu_amu),
        (None, MassConvention::AmuNumber) => preset.mu_amu,
        (None, MassConvention::Unit) => 1.0,
    }
}

pub fn preset_params(preset: &MoleculePreset, cfg: &TableConfig) -> Result<SystemParams> {
    let mu = preset_mu(preset, cfg);
    match cfg.units {
        UnitConvention::Atomic => to_atomic_units(preset, cfg.dm, cfg.delta, Some(mu)),
        UnitConvention::Raw => SystemParams::new(preset.de_ev, preset.re_angstrom, cfg.dm, cfg.delta, mu),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellValues {
    pub fisher: f64,
    pub shannon: f64,
    pub tsallis: f64,
    pub renyi: f64,
}

impl CellValues {
    fn get(&self, kind: TableKind, second: bool) -> f64 {
        match (kind, second) {
            (TableKind::FisherShannon, false) => self.fisher,
            (TableKind::FisherShannon, true) => self.shannon,
            (TableKind::TsallisRenyi, false) => self.tsallis,
            (TableKind::TsallisRenyi, true) => self.renyi,
        }
    }

    fn as_array(&self) -> [f64; 4] {
        [self.fisher, self.shannon, self.tsallis, self.renyi]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub values: Option<CellValues>,
    pub error: Option<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub m: u32,
    /// One cell per molecule, in the order of [`Table::molecules`].
    pub cells: Vec<TableCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub config: TableConfig,
    pub molecules: Vec<String>,
    pub mu: Vec<f64>,
    pub rows: Vec<TableRow>,
}

/// All four measures of one state, with the configured Fisher and Shannon forms.
pub fn compute_cell(params: &SystemParams, spec: StateSpec, cfg: &TableConfig) -> Result<(CellValues, Vec<String>)> {
    let solved = solve(params, spec, SolveOptions { method: cfg.method, mode: cfg.mode })?;
    let fisher = match cfg.fisher {
        FisherForm::Printed => fisher_closed(params, &solved).i,
        FisherForm::Exact => fisher_exact(params, &solved).i,
    };
    let shannon = match cfg.shannon {
        ShannonForm::Numeric => shannon_numeric(params, &solved, cfg.mode)?,
        ShannonForm::Closed => shannon_closed(params, &solved).s,
    };
    let w = wq_closed(params, &solved, cfg.q)?;
    let q = cfg.q as f64;
    let values = CellValues {
        fisher,
        shannon,
        tsallis: tsallis_from_moment(w.wq, q),
        renyi: w.ln_wq / (1.0 - q),
    };
    Ok((values, solved.warnings.iter().map(|w| w.to_string()).collect()))
}

pub fn generate_table(presets: &[MoleculePreset], cfg: &TableConfig) -> Result<Table> {
    if presets.is_empty() {
        return Err(Error::Usage("preset list is empty".into()));
    }
    if cfg.q < 2 {
        return Err(Error::Usage(format!("table q must be >= 2, got {}", cfg.q)));
    }
    let params: Vec<SystemParams> = presets.iter().map(|p| preset_params(p, cfg)).collect::<Result<_>>()?;
    let specs: Vec<StateSpec> = TABLE_N
        .iter()
        .flat_map(|&n| TABLE_M.iter().map(move |&m| StateSpec::new(n, m)))
        .collect();
    let cells: Vec<TableCell> = specs
        .par_iter()
        .flat_map_iter(|&spec| params.iter().map(move |p| (spec, p)))
        .map(|(spec, p)| match compute_cell(p, spec, cfg) {
            Ok((values, warnings)) => TableCell { values: Some(values), error: None, warnings },
            Err(e) => TableCell { values: None, error: Some(e.to_string()), warnings: Vec::new() },
        })
        .collect();
    let rows = specs
        .iter()
        .zip(cells.chunks(presets.len()))
        .map(|(spec, chunk)| TableRow { n: spec.n, m: spec.m, cells: chunk.to_vec() })
        .collect();
    Ok(Table {
        config: *cfg,
        molecules: presets.iter().map(|p| p.name.clone()).collect(),
        mu: presets.iter().map(|p| preset_mu(p, cfg)).collect(),
        rows,
    })
}

fn headers(kind: TableKind, q: u32) -> (String, String) {
    match kind {
        TableKind::FisherShannon => ("I".into(), "S".into()),
        TableKind::TsallisRenyi => (format!("T{q}"), format!("R{q}")),
    }
}

fn cell_text(cell: &TableCell, kind: TableKind, second: bool) -> String {
    match &cell.values {
        Some(v) => format_sig(v.get(kind, second), 6),
        None => "n/a".into(),
    }
}

fn footer(table: &Table) -> Vec<String> {
    let mut lines = Vec::new();
    let mu: Vec<String> = table
        .molecules
        .iter()
        .zip(&table.mu)
        .map(|(name, mu)| format!("{name} {}", format_sig(*mu, 10)))
        .collect();
    lines.push(format!("mu (a.u.): {}", mu.join(", ")));
    lines.push(format!(
        "q = {}, delta = {}, D = {}, {}",
        table.config.q,
        table.config.delta,
        table.config.dm,
        table.config.label()
    ));
    for row in &table.rows {
        for (name, cell) in table.molecules.iter().zip(&row.cells) {
            if let Some(e) = &cell.error {
                lines.push(format!("n={} m={} {name}: {e}", row.n, row.m));
            }
        }
    }
    lines
}

pub fn render_markdown(table: &Table, kind: TableKind) -> String {
    let (a, b) = headers(kind, table.config.q);
    let mut cols = vec!["n".to_string(), "m".to_string()];
    cols.extend(table.molecules.iter().map(|name| format!("{a} {name}")));
    cols.extend(table.molecules.iter().map(|name| format!("{b} {name}")));
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", cols.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(cols.len()));
    for row in &table.rows {
        let mut cells = vec![row.n.to_string(), row.m.to_string()];
        cells.extend(row.cells.iter().map(|c| cell_text(c, kind, false)));
        cells.extend(row.cells.iter().map(|c| cell_text(c, kind, true)));
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out.push('\n');
    for line in footer(table) {
        let _ = writeln!(out, "{line}  ");
    }
    out
}

pub fn render_csv(table: &Table, kind: TableKind) -> String {
    let (a, b) = headers(kind, table.config.q);
    let mut cols = vec!["n".to_string(), "m".to_string()];
    cols.extend(table.molecules.iter().map(|name| format!("{a}_{name}")));
    cols.extend(table.molecules.iter().map(|name| format!("{b}_{name}")));
    let mut out = cols.join(",");
    out.push('\n');
    let full = |c: &TableCell, second: bool| match &c.values {
        Some(v) => format_sig(v.get(kind, second), 10),
        None => "nan".into(),
    };
    for row in &table.rows {
        let mut cells = vec![row.n.to_string(), row.m.to_string()];
        cells.extend(row.cells.iter().map(|c| full(c, false)));
        cells.extend(row.cells.iter().map(|c| full(c, true)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for line in footer(table) {
        let _ = writeln!(out, "# {line}");
    }
    out
}

/// C `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Measures I, S, T, R per molecule (Cs2, Li2, SiSn) for one table row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub n: u32,
    pub m: u32,
    pub values: [[f64; 4]; 3],
}

pub fn reference_grid() -> Vec<GridRow> {
    REFERENCE_FISHER_SHANNON
        .iter()
        .zip(REFERENCE_TSALLIS_RENYI.iter())
        .map(|(a, b)| GridRow {
            n: a.n,
            m: a.m,
            values: std::array::from_fn(|k| [a.first[k], a.second[k], b.first[k], b.second[k]]),
        })
        .collect()
}

/// Rows of a table whose molecules are exactly Cs2, Li2, SiSn (in any order);
/// failed cells become NaN.
pub fn table_grid(table: &Table) -> Result<Vec<GridRow>> {
    let index: Vec<usize> = TABLE_MOLECULES
        .iter()
        .map(|name| {
            table
                .molecules
                .iter()
                .position(|m| m.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::Usage(format!("table lacks molecule {name}")))
        })
        .collect::<Result<_>>()?;
    Ok(table
        .rows
        .iter()
        .map(|row| GridRow {
            n: row.n,
            m: row.m,
            values: std::array::from_fn(|k| {
                row.cells[index[k]].values.map(|v| v.as_array()).unwrap_or([f64::NAN; 4])
            }),
        })
        .collect())
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OrderingReport {
    /// I(SiSn) > I(Li2) > I(Cs2) on every row.
    pub fisher_across_molecules: bool,
    /// S(Cs2) > S(Li2) > S(SiSn) on every row.
    pub shannon_across_molecules: bool,
    /// S, T, R strictly increasing in n at fixed m for every molecule.
    pub entropies_increasing_in_n: bool,
    /// I decreasing in m at fixed n for every molecule.
    pub fisher_decreasing_in_m: bool,
    pub violations: Vec<String>,
}

impl OrderingReport {
    pub fn all(&self) -> bool {
        self.fisher_across_molecules
            && self.shannon_across_molecules
            && self.entropies_increasing_in_n
            && self.fisher_decreasing_in_m
    }
}

pub fn check_ordering(grid: &[GridRow]) -> OrderingReport {
    let mut report = OrderingReport {
        fisher_across_molecules: true,
        shannon_across_molecules: true,
        entropies_increasing_in_n: true,
        fisher_decreasing_in_m: true,
        violations: Vec::new(),
    };
    let find = |n: u32, m: u32| grid.iter().find(|r| r.n == n && r.m == m);
    for r in grid {
        let i: Vec<f64> = r.values.iter().map(|v| v[0]).collect();
        if !(i[2] > i[1] && i[1] > i[0]) {
            report.fisher_across_molecules = false;
            report.violations.push(format!("n={} m={}: I = {:?} not SiSn > Li2 > Cs2", r.n, r.m, i));
        }
        let s: Vec<f64> = r.values.iter().map(|v| v[1]).collect();
        if !(s[0] > s[1] && s[1] > s[2]) {
            report.shannon_across_molecules = false;
            report.violations.push(format!("n={} m={}: S = {:?} not Cs2 > Li2 > SiSn", r.n, r.m, s));
        }
    }
    let names = ["S", "T", "R"];
    for &m in &TABLE_M {
        for pair in TABLE_N.windows(2) {
            let (Some(lo), Some(hi)) = (find(pair[0], m), find(pair[1], m)) else { continue };
            for (k, molecule) in TABLE_MOLECULES.iter().enumerate() {
                for (j, name) in names.iter().enumerate() {
                    if !(hi.values[k][j + 1] > lo.values[k][j + 1]) {
                        report.entropies_increasing_in_n = false;
                        report.violations.push(format!(
                            "{molecule} m={m}: {name} not increasing from n={} to n={}",
                            pair[0], pair[1]
                        ));
                    }
                }
            }
        }
    }
    for &n in &TABLE_N {
        for pair in TABLE_M.windows(2) {
            let (Some(lo), Some(hi)) = (find(n, pair[0]), find(n, pair[1])) else { continue };
            for (k, molecule) in TABLE_MOLECULES.iter().enumerate() {
                if !(hi.values[k][0] < lo.values[k][0]) {
                    report.fisher_decreasing_in_m = false;
                    report.violations.push(format!(
                        "{molecule} n={n}: I not decreasing from m={} to m={}",
                        pair[0], pair[1]
                    ));
                }
            }
        }
    }
    report
}

/// Largest |computed/reference − 1| per measure (I, S, T, R) and overall.
pub fn max_relative_deviation(grid: &[GridRow]) -> ([f64; 4], f64) {
    let reference = reference_grid();
    let mut per = [0.0_f64; 4];
    for r in &reference {
        let computed = grid.iter().find(|g| g.n == r.n && g.m == r.m);
        for k in 0..3 {
            for j in 0..4 {
                let dev = match computed {
                    Some(g) => (g.values[k][j] / r.values[k][j] - 1.0).abs(),
                    None => f64::INFINITY,
                };
                per[j] = if dev.is_nan() { f64::INFINITY } else { per[j].max(dev) };
            }
        }
    }
    (per, per.iter().cloned().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub config: TableConfig,
    pub per_measure: [f64; 4],
    pub max_deviation: f64,
    pub failed_cells: usize,
}

#[derive(Debug, Clone, Copy)]
struct RawCell {
    fisher: [f64; 2],
    shannon: [f64; 2],
    ln_wq: [f64; 4],
}

fn raw_cell(params: &SystemParams, spec: StateSpec, method: AngularMethod) -> Option<RawCell> {
    let solved = solve(params, spec, SolveOptions { method, mode: AngularMode::PaperCosine }).ok()?;
    let s_num = if solved.lambda <= SCAN_LAMBDA_LIMIT {
        shannon_numeric(params, &solved, AngularMode::PaperCosine).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    let mut ln_wq = [f64::NAN; 4];
    for (slot, &q) in ln_wq.iter_mut().zip(SCAN_Q.iter()) {
        if let Ok(w) = wq_closed(params, &solved, q) {
            *slot = w.ln_wq;
        }
    }
    Some(RawCell {
        fisher: [fisher_closed(params, &solved).i, fisher_exact(params, &solved).i],
        shannon: [s_num, shannon_closed(params, &solved).s],
        ln_wq,
    })
}

/// Every combination of units, μ convention, q ∈ {2..5}, Fisher form,
/// Shannon form and E_θ method (series, matrix), sorted by the largest
/// relative deviation from the published tables.
pub fn reproduction_scan(presets: &[MoleculePreset]) -> Result<Vec<ScanEntry>> {
    let molecules: Vec<&MoleculePreset> =
        TABLE_MOLECULES.iter().map(|name| find_preset(presets, name)).collect::<Result<_>>()?;
    let mut bases = Vec::new();
    for units in [UnitConvention::Atomic, UnitConvention::Raw] {
        for mass in [MassConvention::NistAtomic, MassConvention::AmuNumber, MassConvention::Unit] {
            for method in [AngularMethod::Series, AngularMethod::Matrix] {
                bases.push(TableConfig { units, mass, method, ..TableConfig::default() });
            }
        }
    }
    let jobs: Vec<(usize, StateSpec, usize)> = (0..bases.len())
        .flat_map(|b| {
            TABLE_N.iter().flat_map(move |&n| {
                TABLE_M.iter().flat_map(move |&m| (0..3).map(move |k| (b, StateSpec::new(n, m), k)))
            })
        })
        .collect();
    let raw: Vec<Option<RawCell>> = jobs
        .par_iter()
        .map(|&(b, spec, k)| {
            let params = preset_params(molecules[k], &bases[b]).ok()?;
            raw_cell(&params, spec, bases[b].method)
        })
        .collect();
    let per_base = TABLE_N.len() * TABLE_M.len() * 3;

    let mut entries = Vec::new();
    for (b, base) in bases.iter().enumerate() {
        let cells = &raw[b * per_base..(b + 1) * per_base];
        for (qi, &q) in SCAN_Q.iter().enumerate() {
            for (fi, fisher) in [FisherForm::Printed, FisherForm::Exact].into_iter().enumerate() {
                for (si, shannon) in [ShannonForm::Numeric, ShannonForm::Closed].into_iter().enumerate() {
                    let qf = q as f64;
                    let mut failed = 0;
                    let grid: Vec<GridRow> = TABLE_N
                        .iter()
                        .flat_map(|&n| TABLE_M.iter().map(move |&m| (n, m)))
                        .enumerate()
                        .map(|(r, (n, m))| GridRow {
                            n,
                            m,
                            values: std::array::from_fn(|k| match cells[3 * r + k] {
                                Some(c) => {
                                    let ln_w = c.ln_wq[qi];
                                    [c.fisher[fi], c.shannon[si], tsallis_from_moment(ln_w.exp(), qf), ln_w / (1.0 - qf)]
                                }
                                None => [f64::NAN; 4],
                            }),
                        })
                        .collect();
                    failed += grid
                        .iter()
                        .flat_map(|g| g.values.iter())
                        .filter(|v| v.iter().any(|x| !x.is_finite()))
                        .count();
                    let (per_measure, max_deviation) = max_relative_deviation(&grid);
                    entries.push(ScanEntry {
                        config: TableConfig { q, fisher, shannon, ..*base },
                        per_measure,
                        max_deviation,
                        failed_cells: failed,
                    });
                }
            }
        }
    }
    entries.sort_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation));
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecules::list_presets;

    #[test]
    fn sig_format() {
        assert_eq!(format_sig(1.0, 10), "1");
        assert_eq!(format_sig(0.1, 10), "0.1");
        assert_eq!(format_sig(1234567.891, 10), "1234567.891");
        assert_eq!(format_sig(12345678901.0, 10), "1.23456789e+10");
        assert_eq!(format_sig(0.000012345, 10), "1.2345e-05");
        assert_eq!(format_sig(0.00012345, 10), "0.00012345");
        assert_eq!(format_sig(-2.5, 10), "-2.5");
        assert_eq!(format_sig(1.0 / 3.0, 10), "0.3333333333");
        assert_eq!(format_sig(9.99999999999, 10), "10");
    }

    #[test]
    fn reference_tables_are_consistent() {
        let grid = reference_grid();
        assert_eq!(grid.len(), 15);
        let report = check_ordering(&grid);
        assert!(report.fisher_across_molecules);
        assert!(report.shannon_across_molecules);
        assert!(report.entropies_increasing_in_n);
        // SiSn at n = 1 rises from m = 0 to m = 2 in the published data.
        assert!(!report.fisher_decreasing_in_m);
        assert!(report.violations.iter().all(|v| v.starts_with("SiSn n=1")));
        assert_eq!(max_relative_deviation(&grid).1, 0.0);
    }

    #[test]
    fn table_layout() {
        let cfg = TableConfig {
            units: UnitConvention::Raw,
            mass: MassConvention::Unit,
            method: AngularMethod::Series,
            ..TableConfig::default()
        };
        let presets = list_presets();
        let table = generate_table(&presets, &cfg).unwrap();
        assert_eq!(table.rows.len(), 15);
        assert!(table.rows.iter().all(|r| r.cells.iter().all(|c| c.values.is_some())));
        let cs = table.rows[0].cells[0].values.unwrap();
        assert!((cs.fisher - 1.2167).abs() < 1e-4, "{}", cs.fisher);
        assert!((cs.tsallis - 0.99746).abs() < 1e-5, "{}", cs.tsallis);
        assert!((cs.renyi - 5.9764).abs() < 1e-4, "{}", cs.renyi);

        let md = render_markdown(&table, TableKind::FisherShannon);
        assert!(md.starts_with("| n | m | I Cs2 | I Li2 | I SiSn | S Cs2 | S Li2 | S SiSn |"));
        assert!(md.contains("q = 2"));
        let csv = render_csv(&table, TableKind::TsallisRenyi);
        assert_eq!(csv.lines().next().unwrap(), "n,m,T2_Cs2,T2_Li2,T2_SiSn,R2_Cs2,R2_Li2,R2_SiSn");
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 16);
    }

    #[test]
    fn empty_presets_rejected() {
        assert!(matches!(generate_table(&[], &TableConfig::default()), Err(Error::Usage(_))));
    }
}
