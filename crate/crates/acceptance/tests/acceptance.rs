use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use kratzer_info::measures::{fisher_closed, fisher_exact, shannon_closed, wq_closed_with, MomentPrefactor};
use kratzer_info::molecules::list_presets;
use kratzer_info::oracle::numeric::{fisher_numeric, ln_wq_numeric, normalization_numeric, shannon_numeric, wq_numeric};
use kratzer_info::oracle::radial::radial_fd_eigen;
use kratzer_info::specfun::{mathieu_char_series, mathieu_even_solution};
use kratzer_info::sweep::{evaluate, grid, Measure};
use kratzer_info::system::{make_params, solve, AngularMethod, AngularMode, SolveOptions, StateSpec, SystemParams};
use kratzer_info::tables::{
    check_ordering, generate_table, reference_grid, reproduction_scan, table_grid, TableConfig,
};
use kratzer_info_acceptance::*;

struct Outcome {
    id: &'static str,
    name: &'static str,
    passed: bool,
    summary: String,
    notes: Vec<String>,
}

const OPTS: SolveOptions = SolveOptions { method: AngularMethod::Auto, mode: AngularMode::PaperCosine };

fn params_grid(dipoles: &[f64]) -> Vec<SystemParams> {
    let mut out = Vec::new();
    for de in [1.0, 3.0] {
        for delta in [0.0, 0.2, 0.5] {
            for &dm in dipoles {
                out.push(make_params(de, 1.0, dm, delta, 1.0).unwrap());
            }
        }
    }
    out
}

fn states(n_max: u32, ms: &[u32]) -> Vec<StateSpec> {
    (0..=n_max).flat_map(|n| ms.iter().map(move |&m| StateSpec::new(n, m))).collect()
}

fn worst(params: &[SystemParams], specs: &[StateSpec], f: impl Fn(&SystemParams, StateSpec) -> f64) -> f64 {
    let mut w = 0.0_f64;
    for p in params {
        for &s in specs {
            let v = f(p, s);
            w = if v.is_nan() { f64::INFINITY } else { w.max(v) };
        }
    }
    w
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let a = worst(&params_grid(&[0.0, 0.1]), &states(8, &[0, 1, 2]), |p, s| {
        let solved = solve(p, s, OPTS).unwrap();
        (normalization_numeric(p, &solved, OPTS.mode).unwrap_or(f64::NAN) - 1.0).abs()
    });
    let secs = t.elapsed().as_secs_f64();
    Outcome {
        id: "1",
        name: "normalization",
        passed: a <= NORMALIZATION_TOL && secs < NORMALIZATION_SECONDS,
        summary: format!("max |W1 - 1| = {a:.2e} (tol {NORMALIZATION_TOL:e}), {secs:.2} s (limit {NORMALIZATION_SECONDS} s)"),
        notes: vec![],
    }
}

fn fisher_gaps(exact: bool) -> (f64, f64, f64) {
    let t = Instant::now();
    let specs = states(8, &[0, 1, 2]);
    let gap = |p: &SystemParams, s: StateSpec| {
        let solved = solve(p, s, OPTS).unwrap();
        let closed = if exact { fisher_exact(p, &solved).i } else { fisher_closed(p, &solved).i };
        rel(closed, fisher_numeric(p, &solved, OPTS.mode).map(|f| f.i).unwrap_or(f64::NAN))
    };
    let a = worst(&params_grid(&[0.0]), &specs, gap);
    let b = worst(&params_grid(&[0.1]), &specs, gap);
    (a, b, t.elapsed().as_secs_f64())
}

fn criterion_2() -> Outcome {
    let (a, b, secs) = fisher_gaps(false);
    let (xa, xb, _) = fisher_gaps(true);
    Outcome {
        id: "2",
        name: "Fisher closed form vs quadrature",
        passed: a <= FISHER_TOL_NO_DIPOLE && b <= FISHER_TOL_DIPOLE && secs < FISHER_SECONDS,
        summary: format!(
            "max rel diff D=0: {a:.2e} (tol {FISHER_TOL_NO_DIPOLE:e}), D=0.1: {b:.2e} (tol {FISHER_TOL_DIPOLE:e}), {secs:.2} s"
        ),
        notes: vec![format!(
            "INFO  radial part 2 beta^2 (2n+1)/(n+lambda): max rel diff D=0: {xa:.2e}, D=0.1: {xb:.2e}"
        )],
    }
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let params = params_grid(&[0.0, 0.1]);
    let specs = states(4, &[1, 2]);
    let mut four = 0.0_f64;
    let mut two_min = f64::INFINITY;
    let mut ratio_dev = 0.0_f64;
    for q in [2u32, 3] {
        for p in &params {
            for &s in &specs {
                let solved = solve(p, s, OPTS).unwrap();
                let numeric = wq_numeric(p, &solved, q as f64, OPTS.mode).unwrap_or(f64::NAN);
                let a = wq_closed_with(p, &solved, q, MomentPrefactor::FourBetaSquared).map_or(f64::NAN, |w| w.wq);
                let b = wq_closed_with(p, &solved, q, MomentPrefactor::TwoBetaSquared).map_or(f64::NAN, |w| w.wq);
                four = if a.is_nan() || numeric.is_nan() { f64::INFINITY } else { four.max(rel(a, numeric)) };
                two_min = two_min.min(rel(b, numeric));
                ratio_dev = ratio_dev.max(rel(b / numeric, 2.0));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let mutant_fails = two_min > MOMENT_TOL && ratio_dev <= MOMENT_TOL;
    Outcome {
        id: "3",
        name: "entropic moments closed form vs quadrature",
        passed: four <= MOMENT_TOL && mutant_fails && secs < MOMENT_SECONDS,
        summary: format!(
            "4 beta^2: max rel diff {four:.2e} (tol {MOMENT_TOL:e}); 2 beta^2: min rel diff {two_min:.3}, ratio off 2 by {ratio_dev:.2e}; {secs:.2} s"
        ),
        notes: vec![],
    }
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let gap = |m_eff: f64, b_max: f64| {
        grid(0.0, b_max, 201)
            .into_iter()
            .map(|b| match (mathieu_char_series(m_eff, b), mathieu_even_solution(m_eff, b)) {
                (Ok(s), Ok(m)) => (s.value - m.char_number).abs(),
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    };
    let a = gap(0.2, MATHIEU_SMALL_B);
    let b = gap(2.2, MATHIEU_SMALL_B);
    let c = gap(2.2, MATHIEU_LARGE_B);
    let secs = t.elapsed().as_secs_f64();
    Outcome {
        id: "4",
        name: "Mathieu series vs matrix",
        passed: a <= MATHIEU_TOL_SMALL_B && b <= MATHIEU_TOL_SMALL_B && c <= MATHIEU_TOL_LARGE_B && secs < MATHIEU_SECONDS,
        summary: format!(
            "b<=1: m_eff 0.2 {a:.2e}, m_eff 2.2 {b:.2e} (tol {MATHIEU_TOL_SMALL_B:e}); b<=20: m_eff 2.2 {c:.2e} (tol {MATHIEU_TOL_LARGE_B:e}); {secs:.2} s"
        ),
        notes: vec![],
    }
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut w = 0.0_f64;
    for p in params_grid(&[0.0]) {
        for m in 0..3 {
            match radial_fd_eigen(&p, m, 3) {
                Ok(levels) => {
                    for (n, fd) in levels.iter().enumerate() {
                        let s = solve(&p, StateSpec::new(n as u32, m), OPTS).unwrap();
                        w = w.max(rel(*fd, s.energy));
                    }
                }
                Err(_) => w = f64::INFINITY,
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Outcome {
        id: "5",
        name: "finite-difference spectrum",
        passed: w <= SPECTRUM_TOL && secs < SPECTRUM_SECONDS,
        summary: format!("max rel diff, 3 lowest states: {w:.2e} (tol {SPECTRUM_TOL:e}), {secs:.2} s"),
        notes: vec![],
    }
}

fn strictly(values: &[f64], increasing: bool) -> usize {
    values
        .windows(2)
        .filter(|w| if increasing { !(w[1] > w[0]) } else { !(w[1] < w[0]) })
        .count()
}

fn trend_violations(measures: [Measure; 4]) -> (usize, Vec<String>) {
    let deltas = [0.0, 0.3, 0.6];
    let labels = ["I", "S", "T2", "R2"];
    let mut total = 0;
    let mut notes = Vec::new();
    let des = grid(0.5, 5.0, TREND_POINTS);
    let fig1 = StateSpec::new(2, 0);
    for (k, &measure) in measures.iter().enumerate() {
        let rows: Vec<Vec<f64>> = deltas
            .iter()
            .map(|&d| {
                des.iter()
                    .map(|&de| {
                        let p = make_params(de, 1.0, 0.0, d, 1.0).unwrap();
                        evaluate(&p, fig1, measure, 2.0, OPTS).unwrap_or(f64::NAN)
                    })
                    .collect()
            })
            .collect();
        let v: usize = rows.iter().map(|r| strictly(r, k == 0)).sum();
        if v > 0 {
            notes.push(format!("{}: {v} violations in De", labels[k]));
        }
        total += v;
        if k == 0 {
            let v: usize = (0..des.len())
                .map(|i| strictly(&rows.iter().map(|r| r[i]).collect::<Vec<_>>(), false))
                .sum();
            if v > 0 {
                notes.push(format!("I: {v} violations in delta"));
            }
            total += v;
        }
    }
    let ds = grid(0.0, 20.0 / 4.0, TREND_POINTS);
    let fig2 = StateSpec::new(2, 2);
    for (k, &measure) in measures.iter().enumerate() {
        let mut v = 0;
        for &d in &deltas {
            let row: Vec<f64> = ds
                .iter()
                .map(|&dm| {
                    let p = make_params(3.0, 1.0, dm, d, 1.0).unwrap();
                    evaluate(&p, fig2, measure, 2.0, OPTS).unwrap_or(f64::NAN)
                })
                .collect();
            v += strictly(&row, k != 0);
        }
        if v > 0 {
            notes.push(format!("{}: {v} violations in D", labels[k]));
        }
        total += v;
    }
    (total, notes)
}

fn criterion_6() -> Outcome {
    let (v, notes) =
        trend_violations([Measure::FisherExact, Measure::ShannonNumeric, Measure::Tsallis, Measure::Renyi]);
    let (pv, pnotes) = trend_violations([Measure::Fisher, Measure::Shannon, Measure::Tsallis, Measure::Renyi]);
    let mut all = notes;
    all.push(format!(
        "INFO  closed forms as printed: {pv} violations{}",
        if pnotes.is_empty() { String::new() } else { format!(" ({})", pnotes.join("; ")) }
    ));
    Outcome {
        id: "6",
        name: "trends in De, delta and D",
        passed: v == 0,
        summary: format!("{v} monotonicity violations on {TREND_POINTS}-point grids"),
        notes: all,
    }
}

fn criterion_7() -> Outcome {
    let presets = list_presets();
    let table = generate_table(&presets, &TableConfig::default()).unwrap();
    let report = check_ordering(&table_grid(&table).unwrap());
    let published = check_ordering(&reference_grid());
    let scan = reproduction_scan(&presets).unwrap();
    let best = &scan[0];
    let mut notes: Vec<String> = report.violations.iter().take(3).map(|v| format!("preset masses: {v}")).collect();
    notes.extend(published.violations.iter().map(|v| format!("published values: {v}")));
    notes.push(format!(
        "closest configuration: max rel deviation {:.4} ({} {}), {}",
        best.max_deviation,
        if best.max_deviation <= TABLE_REPRODUCTION { "within" } else { "outside" },
        TABLE_REPRODUCTION,
        best.config.label()
    ));
    Outcome {
        id: "7",
        name: "molecule table orderings",
        passed: report.all(),
        summary: format!(
            "preset masses: I across {}, S across {}, S/T/R rising in n {}, I falling in m {}",
            report.fisher_across_molecules,
            report.shannon_across_molecules,
            report.entropies_increasing_in_n,
            report.fisher_decreasing_in_m
        ),
        notes,
    }
}

fn criterion_8() -> Outcome {
    let p = make_params(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
    let gap = |n: u32| {
        let solved = solve(&p, StateSpec::new(n, 0), OPTS).unwrap();
        (shannon_closed(&p, &solved).s - shannon_numeric(&p, &solved, OPTS.mode).unwrap_or(f64::NAN)).abs()
    };
    let (g5, g20) = (gap(5), gap(20));
    Outcome {
        id: "8",
        name: "Shannon asymptotics",
        passed: g20 < g5,
        summary: format!("|S_closed - S_numeric|: n=5 {g5:.6}, n=20 {g20:.6}"),
        notes: vec![],
    }
}

fn criterion_9() -> Outcome {
    let p = make_params(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
    let solved = solve(&p, StateSpec::new(0, 0), OPTS).unwrap();
    let r = ln_wq_numeric(&p, &solved, RENYI_Q, OPTS.mode).unwrap_or(f64::NAN) / (1.0 - RENYI_Q);
    let s = shannon_numeric(&p, &solved, OPTS.mode).unwrap_or(f64::NAN);
    let d = (r - s).abs();
    Outcome {
        id: "9",
        name: "Renyi limit",
        passed: d <= RENYI_TOL,
        summary: format!("R_1.01 = {r:.8}, S = {s:.8}, |diff| = {d:.2e} (tol {RENYI_TOL})"),
        notes: vec![],
    }
}

fn binary() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let name = format!("kratzer-info{}", std::env::consts::EXE_SUFFIX);
    let path = dir.join(name);
    path.exists().then_some(path)
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let (code, how) = match binary() {
        Some(path) => {
            let out = Command::new(&path).arg("validate").output();
            (out.ok().and_then(|o| o.status.code()).unwrap_or(-1), path.display().to_string())
        }
        None => {
            let mut sink = Vec::new();
            let mut err = Vec::new();
            (kratzer_info::cli::run(["kratzer-info", "validate"], &mut sink, &mut err), "in-process".to_string())
        }
    };
    let secs = t.elapsed().as_secs_f64();
    Outcome {
        id: "10",
        name: "validate command",
        passed: code == 0 && secs < VALIDATE_SECONDS,
        summary: format!("exit status {code}, {secs:.2} s (limit {VALIDATE_SECONDS} s)"),
        notes: vec![format!("ran {how}")],
    }
}

fn main() {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut passed = 0;
    for c in criteria {
        let o = c();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} {}: {}", o.id, o.name, o.summary);
        for n in &o.notes {
            println!("      {n}");
        }
        passed += o.passed as usize;
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
