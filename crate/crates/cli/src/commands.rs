use std::fmt::Write as _;
use std::path::Path;

use expinv_core::funcsolve::{self, sequence_report};
use expinv_core::pade::pade as pade_approximant;
use expinv_core::picard::{run_orbit, ContractionCheck, PicardOrbit};
use expinv_core::rational::to_string as rat;
use expinv_core::rungekutta::{quadratic_benchmark, BenchmarkRow};
use expinv_core::{EquationKind, RationalFunction, SequenceReport, TruncatedSeries};
use serde::Serialize;

use crate::output::{self, to_json, CliError, CliResult};
use crate::{Format, Kind, PadeArgs, PicardArgs, Problem, RkArgs, SequenceArgs, SeriesSource, SolveArgs};

fn equation(source: &SeriesSource) -> CliResult<EquationKind> {
    Ok(match source.kind {
        Kind::ExpInverse => EquationKind::ExpInverse,
        Kind::ExpSelfcomp => EquationKind::ExpSelfComp,
        Kind::AffineSelfcomp => EquationKind::AffineSelfComp,
        Kind::GeneralSelfcomp => {
            let path = source
                .rhs
                .as_deref()
                .ok_or_else(|| CliError::Usage("general-selfcomp needs --rhs FILE".into()))?;
            EquationKind::general(read_series(path)?)?
        }
    })
}

fn solved(source: &SeriesSource) -> CliResult<(EquationKind, TruncatedSeries)> {
    let order = source.order.ok_or_else(|| CliError::Usage("--order is required".into()))?;
    let kind = equation(source)?;
    let s = funcsolve::solve(&kind, order as usize)?;
    Ok((kind, s))
}

pub fn read_series(path: &Path) -> CliResult<TruncatedSeries> {
    let text = output::read_file(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn series_from(source: &SeriesSource, input: Option<&Path>) -> CliResult<TruncatedSeries> {
    match input {
        Some(path) => read_series(path),
        None => solved(source).map(|(_, s)| s),
    }
}

fn report_csv(report: &SequenceReport) -> String {
    let mut out = String::from("n,a,c,egf,root_test,integral\n");
    for row in &report.rows {
        let c = row.c.as_ref().map(ToString::to_string).unwrap_or_default();
        let root = row.root_test.map(|v| v.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{c},{},{root},{}", row.n, rat(&row.a), rat(&row.egf), row.integral).unwrap();
    }
    out
}

#[derive(Serialize)]
struct SolveJson<'a> {
    kind: &'a str,
    series: &'a TruncatedSeries,
    report: &'a SequenceReport,
}

pub fn solve(args: &SolveArgs) -> CliResult {
    let (kind, s) = solved(&args.source)?;
    let report = sequence_report(&s);
    if let Some(dir) = &args.out {
        output::write_file(dir, "series.json", &to_json(&s))?;
        return match args.format {
            Format::Json => output::write_file(dir, "report.json", &to_json(&report)),
            Format::Csv => output::write_file(dir, "report.csv", &report_csv(&report)),
        };
    }
    match args.format {
        Format::Json => output::print(&to_json(&SolveJson { kind: kind.name(), series: &s, report: &report })),
        Format::Csv => output::print(&report_csv(&report)),
    }
}

pub fn sequence(args: &SequenceArgs) -> CliResult {
    let s = series_from(&args.source, args.input.as_deref())?;
    let report = sequence_report(&s);
    let (name, text) = match args.format {
        Format::Json => ("report.json", to_json(&report)),
        Format::Csv => ("report.csv", report_csv(&report)),
    };
    match &args.out {
        Some(dir) => output::write_file(dir, name, &text),
        None => output::print(&text),
    }
}

#[derive(Serialize)]
struct PicardParams {
    iterations: u32,
    xmax: f64,
    grid: u32,
}

#[derive(Serialize)]
struct PicardSummary<'a> {
    gaps: &'a [f64],
    contraction: &'a [ContractionCheck],
    interleaving_ok: bool,
    interleaving_tolerance: f64,
    interleaving_violations: usize,
    strict_ordering: bool,
    params: PicardParams,
}

fn iterates_csv(orbit: &PicardOrbit) -> String {
    let mut out = String::from("x");
    for k in 1..=orbit.iterates.len() {
        write!(out, ",f_{k}").unwrap();
    }
    out.push('\n');
    let first = &orbit.iterates[0];
    for (i, x) in first.nodes().enumerate() {
        write!(out, "{x}").unwrap();
        for f in &orbit.iterates {
            write!(out, ",{}", f.values()[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn picard(args: &PicardArgs) -> CliResult {
    let orbit = run_orbit(args.iterations as usize, args.xmax, args.grid as usize)?;
    let summary = PicardSummary {
        gaps: &orbit.gaps,
        contraction: &orbit.phi_checks,
        interleaving_ok: orbit.interleaving_ok(),
        interleaving_tolerance: orbit.tolerance,
        interleaving_violations: orbit.violations.len(),
        strict_ordering: orbit.strict_ok,
        params: PicardParams { iterations: args.iterations, xmax: args.xmax, grid: args.grid },
    };
    match &args.out {
        Some(dir) => {
            output::write_file(dir, "iterates.csv", &iterates_csv(&orbit))?;
            output::write_file(dir, "summary.json", &to_json(&summary))
        }
        None => match args.format {
            Format::Json => output::print(&to_json(&summary)),
            Format::Csv => output::print(&iterates_csv(&orbit)),
        },
    }
}

#[derive(Serialize)]
struct RkRow {
    step: usize,
    t: f64,
    v: f64,
    w: f64,
}

fn rk_table_csv(rows: &[BenchmarkRow]) -> String {
    let mut out = String::from("step,t,v,w\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.step, r.t, r.v, r.w).unwrap();
    }
    out
}

fn rk_plot(rows: &[BenchmarkRow]) -> String {
    let mut out = String::from("t,v\n");
    for r in rows {
        writeln!(out, "{},{}", r.t, r.v).unwrap();
    }
    out
}

pub fn rk(args: &RkArgs) -> CliResult {
    let rows = match args.problem {
        Problem::VQuadratic => quadratic_benchmark(args.step, args.steps as usize)?,
    };
    let table = match args.format {
        Format::Csv => rk_table_csv(&rows),
        Format::Json => {
            let json: Vec<RkRow> = rows.iter().map(|r| RkRow { step: r.step, t: r.t, v: r.v, w: r.w }).collect();
            to_json(&json)
        }
    };
    match &args.out {
        Some(dir) => {
            let name = if args.format == Format::Csv { "table.csv" } else { "table.json" };
            output::write_file(dir, name, &table)?;
            output::write_file(dir, "plot.csv", &rk_plot(&rows))
        }
        None => output::print(&table),
    }
}

fn pade_csv(r: &RationalFunction) -> String {
    let mut out = String::from("degree,num,den\n");
    for k in 0..=r.num_degree().max(r.den_degree()) {
        let cell = |c: &[_]| c.get(k).map(rat).unwrap_or_default();
        writeln!(out, "{k},{},{}", cell(r.numerator()), cell(r.denominator())).unwrap();
    }
    out
}

pub fn pade(args: &PadeArgs) -> CliResult {
    let (l, m) = (args.num as usize, args.den as usize);
    let s = match (&args.input, args.source.order) {
        (Some(path), _) => read_series(path)?,
        // default to the smallest order that determines [L/M]
        (None, None) => funcsolve::solve(&equation(&args.source)?, (l + m).max(1))?,
        (None, Some(_)) => solved(&args.source)?.1,
    };
    let r = pade_approximant(&s, l, m)?;
    let (name, text) = match args.format {
        Format::Json => ("pade.json", to_json(&r)),
        Format::Csv => ("pade.csv", pade_csv(&r)),
    };
    match &args.out {
        Some(dir) => output::write_file(dir, name, &text),
        None => output::print(&text),
    }
}
