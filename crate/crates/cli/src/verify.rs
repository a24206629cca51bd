use std::thread;

use expinv_core::funcsolve::{self, inverse_equation_check, negation_conjugacy_check, picard_step_formal, residual, sequence_report};
use expinv_core::pade::pade;
use expinv_core::picard::run_orbit;
use expinv_core::rational::{self, Rational};
use expinv_core::rungekutta::{format_table_value, quadratic_benchmark, reference_benchmark};
use expinv_core::{EquationKind, TruncatedSeries};

use crate::golden::Golden;
use crate::output::{CliError, CliResult};
use crate::VerifyArgs;

type Check = fn(&Golden) -> Result<String, String>;

pub const SUITE_NAMES: [&str; 11] = [
    "coefficients",
    "sequence",
    "inverse-equation",
    "conjugacy",
    "fixed-point",
    "residuals",
    "picard",
    "interleaving",
    "contraction",
    "rk",
    "pade",
];

const SUITES: [Check; 11] = [
    coefficients,
    sequence,
    inverse_equation,
    conjugacy,
    fixed_point,
    residuals,
    picard_closed_forms,
    interleaving,
    contraction,
    rk_table,
    pade_congruence,
];

pub fn run(args: &VerifyArgs) -> CliResult {
    let golden = Golden::load(args.golden.as_deref())?;
    let selected: Vec<(&str, Check)> = SUITE_NAMES
        .iter()
        .zip(SUITES)
        .filter(|(name, _)| args.only.as_deref().is_none_or(|only| only == **name))
        .map(|(name, check)| (*name, check))
        .collect();

    // suites are independent; results are reported in table order
    let results: Vec<Result<String, String>> = thread::scope(|scope| {
        let handles: Vec<_> = selected.iter().map(|(_, check)| scope.spawn(|| check(&golden))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("check panicked".into())))
            .collect()
    });

    let mut failed = Vec::new();
    for ((name, _), result) in selected.iter().zip(&results) {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name.to_string());
            }
        }
    }
    println!("{} of {} checks passed", results.len() - failed.len(), results.len());
    if failed.is_empty() { Ok(()) } else { Err(CliError::Verification(failed)) }
}

fn core<T>(r: expinv_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn parse_all(items: &[String]) -> Result<Vec<Rational>, String> {
    items.iter().map(|s| rational::parse(s).map_err(|e| e.to_string())).collect()
}

/// First index where `computed` and `expected` differ, as a message.
fn first_mismatch(what: &str, computed: &[Rational], expected: &[Rational]) -> Result<(), String> {
    if computed.len() < expected.len() {
        return Err(format!("{what}: expected {} terms, computed {}", expected.len(), computed.len()));
    }
    match computed.iter().zip(expected).position(|(c, e)| c != e) {
        None => Ok(()),
        Some(k) => Err(format!(
            "{what} {k} mismatch: reference {}, computed {}",
            rational::to_string(&expected[k]),
            rational::to_string(&computed[k])
        )),
    }
}

fn coefficients(golden: &Golden) -> Result<String, String> {
    let reference = golden.exp_inverse()?.series;
    let s = core(funcsolve::solve(&EquationKind::ExpInverse, reference.order()))?;
    first_mismatch("coefficient a_n, n =", s.coeffs(), reference.coeffs())?;
    Ok(format!("a_0..a_{} match", reference.order()))
}

fn sequence(golden: &Golden) -> Result<String, String> {
    let c10 = golden.exp_inverse()?.c10;
    let s = core(funcsolve::solve(&EquationKind::ExpInverse, 100))?;
    let report = sequence_report(&s);
    let got = report.rows[10].c.as_ref().map(ToString::to_string);
    if got.as_deref() != Some(c10.as_str()) {
        return Err(format!("c_10 mismatch: reference {c10}, computed {got:?}"));
    }
    let failures = report.nonnegative_integer_failures(2..=100);
    if !failures.is_empty() {
        return Err(format!("c_n not a nonnegative integer at n = {failures:?}"));
    }
    Ok(format!("c_10 = {c10}; c_2..c_100 nonnegative integers"))
}

fn inverse_equation(golden: &Golden) -> Result<String, String> {
    let expected = parse_all(&golden.inverse_egf()?.egf)?;
    let (ok, h) = core(inverse_equation_check(30))?;
    if !ok {
        return Err("solution of h' = exp(-h(h)) differs from the reversion at N = 30".into());
    }
    first_mismatch("inverse EGF term", &h.egf_coeffs(), &expected)?;
    Ok(format!("h' = exp(-h(h)) solved by the reversion at N = 30; EGF prefix of {} terms", expected.len()))
}

fn conjugacy(golden: &Golden) -> Result<String, String> {
    let reference = golden.selfcomp()?;
    let egf = parse_all(&reference.egf)?;
    let g = core(funcsolve::solve(&EquationKind::ExpSelfComp, egf.len().max(reference.prefix.order())))?;
    first_mismatch("self-composition coefficient", g.coeffs(), reference.prefix.coeffs())?;
    first_mismatch("self-composition EGF term", &g.egf_coeffs()[1..], &egf)?;
    if !core(negation_conjugacy_check(50))? {
        return Err("g(x) != -h(-x) at N = 50".into());
    }
    Ok("g(x) = -h(-x) through N = 50; prefix and EGF match".into())
}

fn fixed_point(_: &Golden) -> Result<String, String> {
    let s = core(funcsolve::solve(&EquationKind::ExpInverse, 25))?;
    if core(picard_step_formal(&s))? != s {
        return Err("formal Picard map moves the solution at N = 25".into());
    }
    Ok("formal Picard map fixes the solution at N = 25".into())
}

fn residuals(_: &Golden) -> Result<String, String> {
    let rhs = TruncatedSeries::from_ints(&[1, 1, 0, 3], 20);
    let kinds = [
        EquationKind::ExpInverse,
        EquationKind::ExpSelfComp,
        EquationKind::AffineSelfComp,
        core(EquationKind::general(rhs))?,
    ];
    for kind in &kinds {
        let s = core(funcsolve::solve(kind, 20))?;
        if !core(residual(kind, &s))?.is_zero() {
            return Err(format!("nonzero residual for {}", kind.name()));
        }
    }
    Ok("exact zero residual for all four equations at N = 20".into())
}

fn picard_closed_forms(_: &Golden) -> Result<String, String> {
    let orbit = core(run_orbit(4, 1.0, 1000))?;
    let closed: [(usize, fn(f64) -> f64); 3] = [
        (2, f64::exp_m1),
        (3, |x| x + x * x / 2.0),
        (4, |x| {
            let r = (1.0 + 2.0 * x).sqrt() - 1.0;
            r.exp() * r
        }),
    ];
    for (n, f) in closed {
        let it = orbit.iterate(n);
        let err = it.nodes().zip(it.values()).map(|(x, v)| (v - f(x)).abs()).fold(0.0, f64::max);
        if err > 5e-4 {
            return Err(format!("f_{n} sup error {err:e} exceeds 5e-4"));
        }
    }
    Ok("f_2, f_3, f_4 within 5e-4 of their closed forms on [0, 1]".into())
}

fn interleaving(_: &Golden) -> Result<String, String> {
    let orbit = core(run_orbit(8, 1.0, 1000))?;
    if !orbit.interleaving_ok() {
        let v = &orbit.violations[0];
        return Err(format!(
            "{} violations; first f_{} > f_{} at node {} by {:e}",
            orbit.violations.len(),
            v.lower,
            v.upper,
            v.node,
            v.excess
        ));
    }
    if !orbit.gaps.windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("gaps not decreasing: {:?}", orbit.gaps));
    }
    Ok(format!("f_1 <= f_3 <= ... <= f_4 <= f_2 for K = 8, M = 1000 (tolerance {:e})", orbit.tolerance))
}

fn contraction(_: &Golden) -> Result<String, String> {
    let orbit = core(run_orbit(8, 1.0, 1000))?;
    if let Some(c) = orbit.phi_checks.iter().find(|c| !c.ok) {
        return Err(format!("n = {}: lhs {} > rhs {}", c.n, c.lhs, c.rhs));
    }
    Ok(format!("{} contraction inequalities hold at T = 1", orbit.phi_checks.len()))
}

fn rk_table(golden: &Golden) -> Result<String, String> {
    let reference = golden.rk_table()?;
    let rows = reference_benchmark();
    if rows.len() != reference.len() {
        return Err(format!("RK table: reference {} rows, computed {}", reference.len(), rows.len()));
    }
    for (row, (t, v)) in rows.iter().zip(&reference) {
        let got = (format_table_value(row.t), format_table_value(row.v));
        if (&got.0, &got.1) != (t, v) {
            return Err(format!("RK table row {} mismatch: reference ({t}, {v}), computed ({}, {})", row.step, got.0, got.1));
        }
    }
    let fine = core(quadratic_benchmark(0.05, 20))?;
    let end = fine.last().expect("21 rows").v;
    if (end - 2.5).abs() > 1e-12 {
        return Err(format!("v(1) = {end} with h = 0.05"));
    }
    Ok(format!("{} rows match; v(1) = 2.5 with h = 0.05", rows.len()))
}

fn pade_congruence(_: &Golden) -> Result<String, String> {
    let s = core(funcsolve::solve(&EquationKind::ExpInverse, 6))?;
    let r = core(pade(&s, 3, 3))?;
    let q = TruncatedSeries::from_prefix(r.denominator(), 6);
    let p = TruncatedSeries::from_prefix(r.numerator(), 6);
    if !core(q.multiply(&s).and_then(|qs| qs.sub(&p)))?.is_zero() {
        return Err("Q S - P is not O(x^7) for [3/3]".into());
    }
    Ok("[3/3] of the exp-inverse series satisfies Q S - P = O(x^7)".into())
}
