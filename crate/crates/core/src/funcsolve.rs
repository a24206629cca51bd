//! Degree-by-degree formal solvers for `f' = exp(f^-1)` and the
//! self-composition equations `g' = Phi(g∘g)`, plus the coefficient
//! diagnostics built on top of them.
//!
//! Every equation here has the shape `S' = R(S)` where coefficient `n` of
//! the right-hand side depends only on `S[1..=n]`, so `S[n+1] = R[n] / (n+1)`
//! determines the solution uniquely once `S[0] = 0` is fixed.
//!
//! The solvers advance the right-hand side online (power tables for
//! reversion/composition, the `E' = u' E` recurrence for `exp`), giving
//! `O(N^3)` coefficient operations instead of recomputing everything per
//! degree. [`solve_by_recomputation`] keeps the direct scheme for
//! cross-checking.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fps::{ExpAccumulator, Reverter, TruncatedSeries};
use crate::powers::PowerTable;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum EquationKind {
    /// `f' = exp(f^-1)`
    ExpInverse,
    /// `g' = exp(g∘g)`
    ExpSelfComp,
    /// `g' = 1 + g∘g`
    AffineSelfComp,
    /// `g' = F(g∘g)` with `F[0] = 1`.
    GeneralSelfComp(TruncatedSeries),
}

impl EquationKind {
    pub fn general(rhs: TruncatedSeries) -> Result<Self> {
        if !rhs.coeff(0).is_one() {
            return Err(Error::Argument("F must satisfy F(0) = 1".into()));
        }
        Ok(Self::GeneralSelfComp(rhs))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::ExpInverse => "exp-inverse",
            Self::ExpSelfComp => "exp-selfcomp",
            Self::AffineSelfComp => "affine-selfcomp",
            Self::GeneralSelfComp(_) => "general-selfcomp",
        }
    }
}

/// Outer function `Phi` of a self-composition equation `g' = Phi(g∘g)`.
#[derive(Debug, Clone)]
enum Outer<'a> {
    /// `exp(sign * u)`
    Exp { negate: bool },
    /// `1 + u`
    Affine,
    Series(&'a TruncatedSeries),
}

impl Outer<'_> {
    /// `Phi(u)` on a whole series with zero constant term.
    fn apply(&self, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        match self {
            Self::Exp { negate: false } => u.exp_series(),
            Self::Exp { negate: true } => u.scale(&-Rational::one()).exp_series(),
            Self::Affine => TruncatedSeries::one(u.order()).add(u),
            Self::Series(f) => f.truncate(u.order())?.compose(u),
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < 1 {
        return Err(Error::Argument("order must be at least 1".into()));
    }
    Ok(())
}

/// The unique series with `S[0] = 0` solving the chosen equation through
/// `order`. `S[1] = 1` in every case.
pub fn solve(kind: &EquationKind, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    match kind {
        EquationKind::ExpInverse => Ok(solve_exp_inverse(order)),
        EquationKind::ExpSelfComp => Ok(solve_self_composition(&Outer::Exp { negate: false }, order)),
        EquationKind::AffineSelfComp => Ok(solve_self_composition(&Outer::Affine, order)),
        EquationKind::GeneralSelfComp(f) => {
            if !f.coeff(0).is_one() {
                return Err(Error::Argument("F must satisfy F(0) = 1".into()));
            }
            if f.order() < order {
                return Err(Error::Argument(format!(
                    "F has order {} but the solve needs order {order}",
                    f.order()
                )));
            }
            Ok(solve_self_composition(&Outer::Series(f), order))
        }
    }
}

fn solve_exp_inverse(order: usize) -> TruncatedSeries {
    let mut s = vec![Rational::zero(), Rational::one()];
    let mut inverse = Reverter::new(Rational::one());
    let mut exp = ExpAccumulator::new();
    for n in 1..order {
        inverse.next(&s);
        let e = exp.next(inverse.coeffs());
        s.push(e / Rational::from_integer(BigInt::from(n + 1)));
    }
    TruncatedSeries::new(s).expect("nonempty")
}

fn solve_self_composition(outer: &Outer<'_>, order: usize) -> TruncatedSeries {
    let mut s = vec![Rational::zero()];
    // arg = the series fed to exp, +-(s∘s)
    let mut s_powers = PowerTable::new();
    let mut u_powers = PowerTable::new();
    let mut arg = vec![Rational::zero()];
    let mut exp = ExpAccumulator::new();
    for n in 0..order {
        let rhs = if n == 0 {
            match outer {
                Outer::Series(f) => f.coeff(0),
                _ => Rational::one(),
            }
        } else {
            s_powers.advance(s[n].clone());
            let un = s_powers.compose_coeff(&s, n);
            match outer {
                Outer::Exp { negate } => {
                    arg.push(if *negate { -un } else { un });
                    exp.next(&arg).clone()
                }
                Outer::Affine => un,
                Outer::Series(f) => {
                    u_powers.advance(un);
                    u_powers.compose_coeff(f.coeffs(), n)
                }
            }
        };
        s.push(rhs / Rational::from_integer(BigInt::from(n + 1)));
    }
    TruncatedSeries::new(s).expect("nonempty")
}

/// Direct scheme: at every degree rebuild the whole right-hand side from
/// the current prefix with the public series operations.
pub fn solve_by_recomputation(kind: &EquationKind, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    let mut coeffs = vec![Rational::zero(), Rational::one()];
    for n in 1..order {
        let s = TruncatedSeries::new(coeffs.clone())?;
        let rhs = rhs_series(kind, &s)?;
        coeffs.push(rhs.coeff(n) / Rational::from_integer(BigInt::from(n + 1)));
    }
    TruncatedSeries::new(coeffs)
}

/// Right-hand side of the equation evaluated on `s`, same order as `s`.
fn rhs_series(kind: &EquationKind, s: &TruncatedSeries) -> Result<TruncatedSeries> {
    match kind {
        EquationKind::ExpInverse => s.revert()?.exp_series(),
        EquationKind::ExpSelfComp => Outer::Exp { negate: false }.apply(&s.compose(s)?),
        EquationKind::AffineSelfComp => Outer::Affine.apply(&s.compose(s)?),
        EquationKind::GeneralSelfComp(f) => Outer::Series(f).apply(&s.compose(s)?),
    }
}

fn check_domain(s: &TruncatedSeries) -> Result<()> {
    if s.order() < 1 || !s.coeff(0).is_zero() || s.coeff(1).is_zero() {
        return Err(Error::Domain("expected S[0] = 0 and S[1] != 0 at order >= 1".into()));
    }
    Ok(())
}

/// Defect of the defining equation on a candidate series.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// `S' - R(S)`, order `N - 1`.
    pub equation: TruncatedSeries,
    /// For `ExpInverse` only: `S'' * S'(S^-1) - S'`, order `N - 2`
    /// (present when `N >= 2`).
    pub derivative_form: Option<TruncatedSeries>,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.equation.is_zero() && self.derivative_form.as_ref().is_none_or(TruncatedSeries::is_zero)
    }
}

pub fn residual(kind: &EquationKind, s: &TruncatedSeries) -> Result<Residual> {
    check_domain(s)?;
    let n = s.order();
    let ds = s.differentiate()?;
    let rhs = match kind {
        EquationKind::GeneralSelfComp(f) if f.order() < n => {
            return Err(Error::Domain(format!("F has order {} below {n}", f.order())));
        }
        _ => rhs_series(kind, s)?,
    };
    let equation = ds.sub(&rhs.truncate(n - 1)?)?;
    let derivative_form = match kind {
        EquationKind::ExpInverse if n >= 2 => {
            let d2s = ds.differentiate()?;
            let inv = s.revert()?.truncate(n - 1)?;
            let shifted = ds.compose(&inv)?.truncate(n - 2)?;
            Some(d2s.multiply(&shifted)?.sub(&ds.truncate(n - 2)?)?)
        }
        _ => None,
    };
    Ok(Residual { equation, derivative_form })
}

/// Solves `H' = exp(-H∘H)`, `H(0) = 0`, and reports whether `H` equals the
/// reversion of the `ExpInverse` solution through `order`.
pub fn inverse_equation_check(order: usize) -> Result<(bool, TruncatedSeries)> {
    if order < 2 {
        return Err(Error::Argument("order must be at least 2".into()));
    }
    let h = solve_self_composition(&Outer::Exp { negate: true }, order);
    let inverse = solve_exp_inverse(order).revert()?;
    Ok((h == inverse, h))
}

/// Checks `solve(ExpSelfComp) = -H(-x)` with `H` the reversion of the
/// `ExpInverse` solution.
pub fn negation_conjugacy_check(order: usize) -> Result<bool> {
    check_order(order)?;
    let g = solve_self_composition(&Outer::Exp { negate: false }, order);
    let h = solve_exp_inverse(order).revert()?;
    let conjugate = h.negate_argument().scale(&-Rational::one());
    Ok(g == conjugate)
}

/// One Picard map on formal series: `∫ exp(S^-1)`, truncated to the order
/// of `S`.
pub fn picard_step_formal(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_domain(s)?;
    s.revert()?.exp_series()?.antidifferentiate().truncate(s.order())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRow {
    pub n: usize,
    pub a: Rational,
    /// `(-1)^n n! a_n` when that is an integer.
    pub c: Option<BigInt>,
    pub egf: Rational,
    /// `|a_n|^(-1/n)` for `n >= 1` and `a_n != 0`.
    pub root_test: Option<f64>,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SequenceReport {
    pub rows: Vec<SequenceRow>,
}

impl SequenceReport {
    pub fn a(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.a.clone()).collect()
    }

    pub fn c(&self) -> Vec<Option<BigInt>> {
        self.rows.iter().map(|r| r.c.clone()).collect()
    }

    pub fn egf(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.egf.clone()).collect()
    }

    pub fn root_test(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.root_test).collect()
    }

    /// Indices in `range` whose `c_n` is not a nonnegative integer.
    pub fn nonnegative_integer_failures(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| range.contains(&r.n))
            .filter(|r| !matches!(&r.c, Some(c) if !c.is_negative()))
            .map(|r| r.n)
            .collect()
    }
}

pub fn sequence_report(s: &TruncatedSeries) -> SequenceReport {
    let rows = s
        .coeffs()
        .iter()
        .zip(s.egf_coeffs())
        .enumerate()
        .map(|(n, (a, egf))| {
            let integral = egf.is_integer();
            let c = integral.then(|| {
                let v = egf.to_integer();
                if n % 2 == 1 { -v } else { v }
            });
            let root_test =
                (n >= 1 && !a.is_zero()).then(|| (-rational::ln_abs(a) / n as f64).exp());
            SequenceRow { n, a: a.clone(), c, egf, root_test, integral }
        })
        .collect();
    SequenceReport { rows }
}

#[derive(Serialize)]
struct RowJson {
    n: usize,
    a: String,
    c: Option<String>,
    egf: String,
    root_test: Option<f64>,
    integral: bool,
}

impl Serialize for SequenceRow {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RowJson {
            n: self.n,
            a: rational::to_string(&self.a),
            c: self.c.as_ref().map(ToString::to_string),
            egf: rational::to_string(&self.egf),
            root_test: self.root_test,
            integral: self.integral,
        }
        .serialize(serializer)
    }
}

impl Serialize for SequenceReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse, rat};

    const REFERENCE: [&str; 14] = [
        "0", "1", "1/2", "0", "1/24", "-1/20", "13/180", "-197/1680", "2101/10080",
        "-48203/120960", "2938057/3628800", "-23059441/13305600", "74408941/19160064",
        "-9409883317/1037836800",
    ];

    fn reference() -> Vec<Rational> {
        REFERENCE.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn exp_inverse_matches_reference_coefficients() {
        let s = solve(&EquationKind::ExpInverse, 13).unwrap();
        assert_eq!(s.coeffs(), &reference()[..]);
    }

    #[test]
    fn first_step_is_forced() {
        let s = solve(&EquationKind::ExpInverse, 2).unwrap();
        assert_eq!(s.coeffs(), &[int(0), int(1), rat(1, 2)]);
        assert_eq!(solve(&EquationKind::ExpInverse, 1).unwrap(), TruncatedSeries::x(1));
    }

    #[test]
    fn order_zero_is_rejected() {
        assert!(matches!(solve(&EquationKind::ExpInverse, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn self_composition_prefixes() {
        let g = solve(&EquationKind::ExpSelfComp, 4).unwrap();
        assert_eq!(g.coeffs(), &[int(0), int(1), rat(1, 2), rat(1, 2), rat(2, 3)]);
        let g = solve(&EquationKind::AffineSelfComp, 4).unwrap();
        assert_eq!(g.coeffs(), &[int(0), int(1), rat(1, 2), rat(1, 3), rat(7, 24)]);
        let egf: Vec<Rational> = g.egf_coeffs()[1..].to_vec();
        assert_eq!(egf, vec![int(1), int(1), int(2), int(7)]);
    }

    #[test]
    fn online_solvers_match_recomputation() {
        let f = TruncatedSeries::from_prefix(&[int(1), int(2), rat(1, 3), int(-1)], 12);
        let kinds = [
            EquationKind::ExpInverse,
            EquationKind::ExpSelfComp,
            EquationKind::AffineSelfComp,
            EquationKind::general(f).unwrap(),
        ];
        for kind in &kinds {
            let fast = solve(kind, 12).unwrap();
            let slow = solve_by_recomputation(kind, 12).unwrap();
            assert_eq!(fast, slow, "{}", kind.name());
        }
    }

    #[test]
    fn general_with_exp_rhs_matches_exp_selfcomp() {
        let f = TruncatedSeries::x(15).exp_series().unwrap();
        let kind = EquationKind::general(f).unwrap();
        assert_eq!(solve(&kind, 15).unwrap(), solve(&EquationKind::ExpSelfComp, 15).unwrap());
    }

    #[test]
    fn general_rejects_bad_rhs() {
        let f = TruncatedSeries::from_ints(&[2, 1], 5);
        assert!(EquationKind::general(f.clone()).is_err());
        assert!(solve(&EquationKind::GeneralSelfComp(f), 3).is_err());
        let short = TruncatedSeries::one(2);
        assert!(solve(&EquationKind::general(short).unwrap(), 5).is_err());
    }

    #[test]
    fn residuals_vanish_on_solutions() {
        let s = solve(&EquationKind::ExpInverse, 13).unwrap();
        let r = residual(&EquationKind::ExpInverse, &s).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.equation.order(), 12);
        assert_eq!(r.derivative_form.as_ref().unwrap().order(), 11);

        for kind in [EquationKind::ExpSelfComp, EquationKind::AffineSelfComp] {
            let g = solve(&kind, 20).unwrap();
            assert!(residual(&kind, &g).unwrap().is_zero());
        }
    }

    #[test]
    fn residual_of_identity() {
        let r = residual(&EquationKind::ExpInverse, &TruncatedSeries::x(3)).unwrap();
        assert_eq!(r.equation.coeffs(), &[int(0), int(-1), rat(-1, 2)]);
        // S'' = 0, so the second form is just -S'
        assert_eq!(r.derivative_form.unwrap().coeffs(), &[int(-1), int(0)]);
    }

    #[test]
    fn residual_domain_errors() {
        let bad = TruncatedSeries::from_ints(&[1, 1], 3);
        assert!(matches!(residual(&EquationKind::ExpInverse, &bad), Err(Error::Domain(_))));
        let flat = TruncatedSeries::from_ints(&[0, 0, 1], 3);
        assert!(matches!(residual(&EquationKind::ExpInverse, &flat), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_equation_examples() {
        let (ok, h) = inverse_equation_check(7).unwrap();
        assert!(ok);
        let egf: Vec<Rational> = h.egf_coeffs()[..7].to_vec();
        let expected: Vec<Rational> = [0, 1, -1, 3, -16, 126, -1333].iter().map(|&v| int(v)).collect();
        assert_eq!(egf, expected);

        let (ok, h) = inverse_equation_check(2).unwrap();
        assert!(ok);
        assert_eq!(h.coeffs(), &[int(0), int(1), rat(-1, 2)]);

        assert!(inverse_equation_check(30).unwrap().0);
        assert!(inverse_equation_check(1).is_err());
    }

    #[test]
    fn negation_conjugacy() {
        assert!(negation_conjugacy_check(1).unwrap());
        assert!(negation_conjugacy_check(4).unwrap());
        assert!(negation_conjugacy_check(50).unwrap());
    }

    #[test]
    fn sequence_report_examples() {
        let s = solve(&EquationKind::ExpInverse, 10).unwrap();
        let report = sequence_report(&s);
        let c: Vec<BigInt> = report.c()[2..].iter().map(|c| c.clone().unwrap()).collect();
        let expected: Vec<BigInt> = [1, 0, 1, 6, 52, 591, 8404, 144609, 2938057]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(c, expected);
        assert!(report.nonnegative_integer_failures(2..=10).is_empty());
        assert_eq!(report.rows[3].root_test, None);
        assert!(report.rows[4].root_test.unwrap() > 0.0);

        let r = sequence_report(&TruncatedSeries::x(5));
        assert_eq!(r.rows[1].c, Some(BigInt::from(-1)));
        assert!(r.rows[2..].iter().all(|row| row.c == Some(BigInt::zero())));

        let egf = sequence_report(&solve(&EquationKind::ExpInverse, 6).unwrap()).egf();
        let expected: Vec<Rational> = [0, 1, 1, 0, 1, -6, 52].iter().map(|&v| int(v)).collect();
        assert_eq!(egf, expected);
    }

    #[test]
    fn non_integral_egf_is_flagged() {
        let s = TruncatedSeries::new(vec![int(0), int(1), rat(1, 3)]).unwrap();
        let report = sequence_report(&s);
        assert!(!report.rows[2].integral);
        assert_eq!(report.rows[2].c, None);
        assert_eq!(report.nonnegative_integer_failures(2..=2), vec![2]);
    }

    #[test]
    fn sequence_row_json() {
        let report = sequence_report(&TruncatedSeries::new(vec![int(0), int(1), rat(1, 3)]).unwrap());
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json[0]["c"], serde_json::json!("0"));
        assert_eq!(json[0]["root_test"], serde_json::Value::Null);
        assert_eq!(json[2]["c"], serde_json::Value::Null);
        assert_eq!(json[2]["egf"], serde_json::json!("2/3"));
        assert_eq!(json[1]["root_test"], serde_json::json!(1.0));
    }

    #[test]
    fn picard_formal_examples() {
        let f2 = picard_step_formal(&TruncatedSeries::x(8)).unwrap();
        assert_eq!(f2, TruncatedSeries::exp_minus_one(8));
        let f3 = picard_step_formal(&f2).unwrap();
        assert_eq!(f3.coeffs(), TruncatedSeries::from_prefix(&[int(0), int(1), rat(1, 2)], 8).coeffs());
        let s = solve(&EquationKind::ExpInverse, 10).unwrap();
        assert_eq!(picard_step_formal(&s).unwrap(), s);
    }
}
