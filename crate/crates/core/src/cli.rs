//! Command-line front end: `compute`, `table`, `sweep` and `validate`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::measures::{fisher_closed, fisher_exact, shannon_closed, tsallis_from_moment, wq_closed};
use crate::molecules::{find_preset, load_presets, to_atomic_units, MoleculePreset};
use crate::oracle::numeric::{fisher_numeric, ln_wq_numeric, shannon_numeric};
use crate::sweep::{render_sweep_csv, run_sweep, Measure, SweepRow, SweepSpec, SweepVar};
use crate::system::{solve, AngularMethod, AngularMode, SolveOptions, SolvedState, StateSpec, SystemParams};
use crate::tables::{
    format_sig, generate_table, render_csv, render_markdown, reproduction_scan, FisherForm, MassConvention,
    ShannonForm, TableConfig, TableKind, UnitConvention,
};
use crate::validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "kratzer-info", version, about = "Bound states and information measures of a 2D Kratzer-plus-dipole system with an Aharonov-Bohm flux")]
pub struct Cli {
    /// JSON run configuration with the same field names as the flags; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and measures of single states.
    Compute(ComputeArgs),
    /// Fisher/Shannon (1) and Tsallis/Renyi (2) tables for molecule presets.
    Table(TableArgs),
    /// One-parameter sweep written as CSV.
    Sweep(SweepArgs),
    /// Closed forms against the numerical oracles; exit status 0 iff every check passes.
    Validate(ValidateArgs),
}

/// Flags shared by every command that solves states.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Dissociation energy (hartree).
    #[arg(long = "De")]
    pub de: Option<f64>,
    /// Equilibrium bond length (bohr).
    #[arg(long)]
    pub re: Option<f64>,
    /// Reduced mass (electron masses); overrides a preset mass.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Aharonov-Bohm flux ratio.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Dipole moment D.
    #[arg(long = "D")]
    pub dm: Option<f64>,
    /// Radial quantum numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Magnetic quantum numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u32>>,
    /// Measures, comma separated (energy, fisher, shannon, tsallis, renyi, all, or a sweep measure name).
    #[arg(long, value_delimiter = ',')]
    pub measure: Option<Vec<String>>,
    /// Order of the Tsallis and Renyi entropies.
    #[arg(long)]
    pub q: Option<f64>,
    /// Angular function.
    #[arg(long)]
    pub mode: Option<AngularMode>,
    /// Mathieu characteristic-number method.
    #[arg(long)]
    pub angular: Option<AngularMethod>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Molecule preset (De, re and mu from the preset, in atomic units).
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON file with presets merged over the built-ins.
    #[arg(long = "presets-file", value_name = "PATH")]
    pub presets_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    /// Tables to emit, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub tables: Option<Vec<TableKind>>,
    /// Presets forming the columns, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub presets: Option<Vec<String>>,
    /// How the preset De and re enter the solver.
    #[arg(long)]
    pub units: Option<UnitConvention>,
    /// Reduced-mass convention (ignored when --mu is given).
    #[arg(long)]
    pub mass: Option<MassConvention>,
    #[arg(long)]
    pub fisher: Option<FisherForm>,
    #[arg(long)]
    pub shannon: Option<ShannonForm>,
    /// Rank unit/mass/q/form combinations by their deviation from the reference tables.
    #[arg(long)]
    pub scan: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub var: Option<SweepVar>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Flux values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Skip the informational checks.
    #[arg(long)]
    pub primary_only: bool,
    /// Also run the molecule-table check.
    #[arg(long)]
    pub tables: bool,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// JSON counterpart of the command-line flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "De")]
    de: Option<f64>,
    re: Option<f64>,
    mu: Option<f64>,
    delta: Option<f64>,
    #[serde(rename = "D")]
    dm: Option<f64>,
    n: Option<OneOrMany<u32>>,
    m: Option<OneOrMany<u32>>,
    measure: Option<OneOrMany<String>>,
    q: Option<f64>,
    mode: Option<AngularMode>,
    angular: Option<AngularMethod>,
    format: Option<Format>,
    output: Option<PathBuf>,
    preset: Option<String>,
    #[serde(rename = "presets-file")]
    presets_file: Option<PathBuf>,
    tables: Option<OneOrMany<u8>>,
    presets: Option<OneOrMany<String>>,
    units: Option<UnitConvention>,
    mass: Option<MassConvention>,
    fisher: Option<FisherForm>,
    shannon: Option<ShannonForm>,
    var: Option<SweepVar>,
    from: Option<f64>,
    to: Option<f64>,
    steps: Option<usize>,
    deltas: Option<OneOrMany<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }

    fn fill_common(&self, c: &mut Common) {
        let cfg = self.clone();
        c.de = c.de.or(cfg.de);
        c.re = c.re.or(cfg.re);
        c.mu = c.mu.or(cfg.mu);
        c.delta = c.delta.or(cfg.delta);
        c.dm = c.dm.or(cfg.dm);
        c.n = c.n.take().or(cfg.n.map(OneOrMany::into_vec));
        c.m = c.m.take().or(cfg.m.map(OneOrMany::into_vec));
        c.measure = c.measure.take().or(cfg.measure.map(OneOrMany::into_vec));
        c.q = c.q.or(cfg.q);
        c.mode = c.mode.or(cfg.mode);
        c.angular = c.angular.or(cfg.angular);
        c.format = c.format.or(cfg.format);
        c.output = c.output.take().or(cfg.output);
        c.preset = c.preset.take().or(cfg.preset);
        c.presets_file = c.presets_file.take().or(cfg.presets_file);
    }

    fn fill_table(&self, t: &mut TableArgs) -> Result<()> {
        self.fill_common(&mut t.common);
        if t.tables.is_none() {
            if let Some(list) = self.tables.clone() {
                t.tables = Some(
                    list.into_vec()
                        .into_iter()
                        .map(|k| match k {
                            1 => Ok(TableKind::FisherShannon),
                            2 => Ok(TableKind::TsallisRenyi),
                            _ => Err(Error::Usage(format!("unknown table {k}"))),
                        })
                        .collect::<Result<_>>()?,
                );
            }
        }
        t.presets = t.presets.take().or(self.presets.clone().map(OneOrMany::into_vec));
        t.units = t.units.or(self.units);
        t.mass = t.mass.or(self.mass);
        t.fisher = t.fisher.or(self.fisher);
        t.shannon = t.shannon.or(self.shannon);
        Ok(())
    }

    fn fill_sweep(&self, s: &mut SweepArgs) {
        self.fill_common(&mut s.common);
        s.var = s.var.or(self.var);
        s.from = s.from.or(self.from);
        s.to = s.to.or(self.to);
        s.steps = s.steps.or(self.steps);
        s.deltas = s.deltas.take().or(self.deltas.clone().map(OneOrMany::into_vec));
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Domain(_) | Error::Json(_) => 2,
        _ => 1,
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => Some(RunConfig::load(path)?),
        None => None,
    };
    match cli.command {
        Command::Compute(mut a) => {
            if let Some(c) = &config {
                c.fill_common(&mut a.common);
            }
            cmd_compute(&a, out, err)
        }
        Command::Table(mut a) => {
            if let Some(c) = &config {
                c.fill_table(&mut a)?;
            }
            cmd_table(&a, out, err)
        }
        Command::Sweep(mut a) => {
            if let Some(c) = &config {
                c.fill_sweep(&mut a);
            }
            cmd_sweep(&a, out, err)
        }
        Command::Validate(a) => cmd_validate(&a, out),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn presets_of(c: &Common) -> Result<Vec<MoleculePreset>> {
    load_presets(c.presets_file.as_deref())
}

/// Parameters from a preset or from explicit values (defaults De = re = μ = 1, δ = D = 0).
pub fn resolve_params(c: &Common) -> Result<SystemParams> {
    let dm = c.dm.unwrap_or(0.0);
    let delta = c.delta.unwrap_or(0.0);
    match &c.preset {
        Some(name) => {
            if c.de.is_some() || c.re.is_some() {
                return Err(Error::Usage("--preset cannot be combined with --De or --re".into()));
            }
            let presets = presets_of(c)?;
            to_atomic_units(find_preset(&presets, name)?, dm, delta, c.mu)
        }
        None => SystemParams::new(
            c.de.unwrap_or(1.0),
            c.re.unwrap_or(1.0),
            dm,
            delta,
            c.mu.unwrap_or(1.0),
        ),
    }
}

fn solve_options(c: &Common) -> SolveOptions {
    SolveOptions { method: c.angular.unwrap_or_default(), mode: c.mode.unwrap_or_default() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Report {
    Energy,
    Fisher,
    Shannon,
    Tsallis,
    Renyi,
}

fn compute_reports(c: &Common) -> Result<Vec<Report>> {
    let names = c.measure.clone().unwrap_or_else(|| vec!["all".into()]);
    let mut out = Vec::new();
    for name in names {
        let add: &[Report] = match name.trim().to_ascii_lowercase().as_str() {
            "all" => &[Report::Energy, Report::Fisher, Report::Shannon, Report::Tsallis, Report::Renyi],
            "energy" => &[Report::Energy],
            "fisher" => &[Report::Fisher],
            "shannon" => &[Report::Shannon],
            "tsallis" => &[Report::Tsallis],
            "renyi" => &[Report::Renyi],
            other => return Err(Error::Usage(format!("unknown measure '{other}' for compute"))),
        };
        for r in add {
            if !out.contains(r) {
                out.push(*r);
            }
        }
    }
    Ok(out)
}

fn state_quantities(
    params: &SystemParams,
    solved: &SolvedState,
    reports: &[Report],
    q: f64,
) -> Result<Vec<(String, f64)>> {
    let mode = solved.mode;
    let mut rows = vec![
        ("lambda".to_string(), solved.lambda),
        ("beta".to_string(), solved.beta),
        ("E_theta".to_string(), solved.e_theta),
        ("a_mathieu".to_string(), solved.char_number),
    ];
    let integer_q = q.fract() == 0.0 && q >= 2.0;
    for r in reports {
        match r {
            Report::Energy => {
                rows.push(("E".into(), solved.energy));
                rows.push(("E_total".into(), solved.energy_total));
            }
            Report::Fisher => {
                let f = fisher_closed(params, solved);
                let x = fisher_exact(params, solved);
                rows.push(("I".into(), f.i));
                rows.push(("I1".into(), f.i1));
                rows.push(("I2".into(), f.i2));
                rows.push(("I_exact".into(), x.i));
                rows.push(("I1_exact".into(), x.i1));
                rows.push(("I_numeric".into(), fisher_numeric(params, solved, mode)?.i));
            }
            Report::Shannon => {
                let s = shannon_closed(params, solved);
                rows.push(("S".into(), s.s));
                rows.push(("S1".into(), s.s1));
                rows.push(("S2".into(), s.s2));
                rows.push(("S3".into(), s.s3));
                rows.push(("S4".into(), s.s4));
                rows.push(("S_numeric".into(), shannon_numeric(params, solved, mode)?));
            }
            Report::Tsallis | Report::Renyi => {
                let tsallis = *r == Report::Tsallis;
                let tag = if tsallis { "T" } else { "R" };
                let qs = format_sig(q, 6);
                if integer_q {
                    let w = wq_closed(params, solved, q as u32)?;
                    let v = if tsallis { tsallis_from_moment(w.wq, q) } else { w.ln_wq / (1.0 - q) };
                    rows.push((format!("{tag}_{qs}"), v));
                }
                let ln_w = ln_wq_numeric(params, solved, q, mode)?;
                let v = if tsallis { tsallis_from_moment(ln_w.exp(), q) } else { ln_w / (1.0 - q) };
                rows.push((format!("{tag}_{qs}_numeric"), v));
            }
        }
    }
    Ok(rows)
}

pub fn cmd_compute(a: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let c = &a.common;
    let params = resolve_params(c)?;
    let reports = compute_reports(c)?;
    let q = c.q.unwrap_or(2.0);
    if !(q > 0.0) || q == 1.0 {
        return Err(Error::Usage(format!("q must be positive and different from 1, got {q}")));
    }
    let ns = c.n.clone().unwrap_or_else(|| vec![0]);
    let ms = c.m.clone().unwrap_or_else(|| vec![0]);
    if ns.is_empty() || ms.is_empty() {
        return Err(Error::Usage("empty n or m list".into()));
    }
    let opts = solve_options(c);
    let format = c.format.unwrap_or(Format::Markdown);
    let mut text = String::new();
    if format == Format::Csv {
        text.push_str("n,m,quantity,value\n");
    }
    for &n in &ns {
        for &m in &ms {
            let solved = solve(&params, StateSpec::new(n, m), opts)?;
            for w in &solved.warnings {
                let _ = writeln!(err, "warning: n={n} m={m}: {w}; E_theta from the {:?} method", solved.method);
            }
            let rows = state_quantities(&params, &solved, &reports, q)?;
            match format {
                Format::Csv => {
                    for (k, v) in rows {
                        let _ = writeln!(text, "{n},{m},{k},{}", format_sig(v, 10));
                    }
                }
                Format::Markdown => {
                    let _ = writeln!(text, "### n = {n}, m = {m}\n");
                    let _ = writeln!(text, "| quantity | value |\n|---|---|");
                    for (k, v) in rows {
                        let _ = writeln!(text, "| {k} | {} |", format_sig(v, 10));
                    }
                    let _ = writeln!(
                        text,
                        "\nmode {:?}, E_theta method {:?}, b = {}, De = {}, re = {}, mu = {}, delta = {}, D = {}\n",
                        solved.mode,
                        solved.method,
                        format_sig(solved.b, 10),
                        format_sig(params.de, 10),
                        format_sig(params.re, 10),
                        format_sig(params.mu, 10),
                        params.delta,
                        params.dm
                    );
                }
            }
        }
    }
    emit(&text, c.output.as_deref(), out)?;
    Ok(0)
}

pub fn cmd_table(a: &TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let c = &a.common;
    if c.de.is_some() || c.re.is_some() || c.preset.is_some() {
        return Err(Error::Usage("table takes its parameters from --presets".into()));
    }
    let all = presets_of(c)?;
    let names = a
        .presets
        .clone()
        .unwrap_or_else(|| vec!["Cs2".into(), "Li2".into(), "SiSn".into()]);
    let names: Vec<&str> = names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(Error::Usage("preset list is empty".into()));
    }
    let presets: Vec<MoleculePreset> =
        names.iter().map(|n| find_preset(&all, n).cloned()).collect::<Result<_>>()?;
    let q = c.q.unwrap_or(2.0);
    if q.fract() != 0.0 || q < 2.0 {
        return Err(Error::Usage(format!("table needs integer q >= 2, got {q}")));
    }
    let cfg = TableConfig {
        units: a.units.unwrap_or_default(),
        mass: a.mass.unwrap_or_default(),
        mu_override: c.mu,
        q: q as u32,
        fisher: a.fisher.unwrap_or_default(),
        shannon: a.shannon.unwrap_or_default(),
        method: c.angular.unwrap_or_default(),
        mode: c.mode.unwrap_or_default(),
        delta: c.delta.unwrap_or(crate::tables::TABLE_DELTA),
        dm: c.dm.unwrap_or(crate::tables::TABLE_DIPOLE),
    };
    let kinds = a.tables.clone().unwrap_or_else(|| vec![TableKind::FisherShannon, TableKind::TsallisRenyi]);
    if kinds.is_empty() {
        return Err(Error::Usage("no table selected".into()));
    }
    let format = c.format.unwrap_or(Format::Markdown);
    let table = generate_table(&presets, &cfg)?;
    let mut warned = std::collections::BTreeSet::new();
    for row in &table.rows {
        for (name, cell) in table.molecules.iter().zip(&row.cells) {
            for w in &cell.warnings {
                if warned.insert((name.clone(), row.m)) {
                    let _ = writeln!(err, "warning: {name} m={}: {w}", row.m);
                }
            }
            if let Some(e) = &cell.error {
                let _ = writeln!(err, "warning: {name} n={} m={}: {e}", row.n, row.m);
            }
        }
    }
    let mut text = String::new();
    for (i, kind) in kinds.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        match format {
            Format::Markdown => {
                let title = match kind {
                    TableKind::FisherShannon => "Fisher information and Shannon entropy",
                    TableKind::TsallisRenyi => "Tsallis and Renyi entropies",
                };
                let _ = writeln!(text, "## {title}\n");
                text.push_str(&render_markdown(&table, *kind));
            }
            Format::Csv => text.push_str(&render_csv(&table, *kind)),
        }
    }
    if a.scan {
        let entries = reproduction_scan(&all)?;
        text.push_str("\nrank,max_deviation,I,S,T,R,failed_cells,configuration\n");
        for (i, e) in entries.iter().take(10).enumerate() {
            let _ = writeln!(
                text,
                "{},{},{},{},{},{},{},{}",
                i + 1,
                format_sig(e.max_deviation, 6),
                format_sig(e.per_measure[0], 6),
                format_sig(e.per_measure[1], 6),
                format_sig(e.per_measure[2], 6),
                format_sig(e.per_measure[3], 6),
                e.failed_cells,
                e.config.label()
            );
        }
    }
    emit(&text, c.output.as_deref(), out)?;
    let failed = table.rows.iter().any(|r| r.cells.iter().any(|c| c.error.is_some()));
    Ok(if failed { 1 } else { 0 })
}

fn sweep_measures(c: &Common) -> Result<Vec<Measure>> {
    let names = c.measure.clone().unwrap_or_else(|| vec!["fisher".into()]);
    names
        .iter()
        .map(|n| {
            Measure::from_str(n.trim(), true).map_err(|_| Error::Usage(format!("unknown measure '{n}' for sweep")))
        })
        .collect()
}

fn sweep_markdown(rows: &[SweepRow]) -> String {
    let mut text = String::from("| var | value | measure | delta | n | m |\n|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            text,
            "| {} | {} | {} | {} | {} | {} |",
            format_sig(r.var, 10),
            format_sig(r.value, 10),
            r.measure.name(),
            format_sig(r.delta, 10),
            r.n,
            r.m
        );
    }
    text
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let c = &a.common;
    let var = a.var.ok_or_else(|| Error::Usage("sweep needs --var".into()))?;
    let (from, to) = match (a.from, a.to) {
        (Some(f), Some(t)) => (f, t),
        _ => return Err(Error::Usage("sweep needs --from and --to".into())),
    };
    let steps = a.steps.ok_or_else(|| Error::Usage("sweep needs --steps".into()))?;
    let single = |v: &Option<Vec<u32>>, name: &str| -> Result<u32> {
        match v.as_deref() {
            None => Ok(0),
            Some([x]) => Ok(*x),
            Some(_) => Err(Error::Usage(format!("sweep takes a single --{name}"))),
        }
    };
    let spec = StateSpec::new(single(&c.n, "n")?, single(&c.m, "m")?);
    let mut base_common = c.clone();
    match var {
        SweepVar::De if c.preset.is_none() => base_common.de = Some(from.max(f64::MIN_POSITIVE)),
        SweepVar::D => base_common.dm = Some(0.0),
        SweepVar::Delta => base_common.delta = Some(0.0),
        _ => {}
    }
    let base = resolve_params(&base_common)?;
    let sweep = SweepSpec {
        base,
        var,
        from,
        to,
        steps,
        deltas: a.deltas.clone().unwrap_or_else(|| vec![c.delta.unwrap_or(0.0)]),
        measures: sweep_measures(c)?,
        spec,
        q: c.q.unwrap_or(2.0),
        opts: solve_options(c),
    };
    let rows = run_sweep(&sweep)?;
    if sweep.opts.method == AngularMethod::Series {
        let limit = crate::specfun::series_validity_limit(base.m_eff(spec.m)).0;
        let b_max = 4.0 * base.mu * if var == SweepVar::D { to } else { base.dm };
        if b_max > limit {
            let _ = writeln!(err, "warning: b reaches {} beyond the series window b <= {limit}", format_sig(b_max, 6));
        }
    }
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => render_sweep_csv(&rows),
        Format::Markdown => sweep_markdown(&rows),
    };
    emit(&text, c.output.as_deref(), out)?;
    Ok(0)
}

pub fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let mut reports = validate::run_all(!a.primary_only);
    if a.tables {
        reports.push(validate::check_tables(&crate::molecules::list_presets()));
    }
    let mut text = String::new();
    for r in &reports {
        let _ = write!(text, "{r}");
    }
    let ok = validate::all_passed(&reports) && reports.iter().filter(|r| r.criterion == 7).all(|r| r.passed());
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.supplementary && !r.passed())
        .map(|r| r.criterion.to_string())
        .collect();
    if ok {
        text.push_str("validate: all checks passed\n");
    } else {
        let _ = writeln!(text, "validate: failed checks {}", failed.join(", "));
    }
    emit(&text, a.output.as_deref(), out)?;
    Ok(if ok { 0 } else { 1 })
}
