//! Fixed-step explicit Runge-Kutta integration with an exact-rational
//! Butcher tableau.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, rat, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    // binary64 copies used while integrating
    a_f: Vec<Vec<f64>>,
    b_f: Vec<f64>,
    c_f: Vec<f64>,
}

impl ButcherTableau {
    /// Validates an explicit tableau: `a` strictly lower triangular,
    /// `sum(b) = 1`, `c[0] = 0` and `c[i] = sum_j a[i][j]`.
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        let s = b.len();
        if s == 0 {
            return Err(Error::Tableau("no stages".into()));
        }
        if a.len() != s || c.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(Error::Tableau(format!("expected a {s}x{s} matrix and {s} nodes")));
        }
        for (i, row) in a.iter().enumerate() {
            if row[i..].iter().any(|v| !v.is_zero()) {
                return Err(Error::Tableau(format!("row {i} is not strictly lower triangular")));
            }
            let sum: Rational = row.iter().sum();
            if sum != c[i] {
                return Err(Error::Tableau(format!(
                    "c[{i}] = {} but row sum is {}",
                    rational::to_string(&c[i]),
                    rational::to_string(&sum)
                )));
            }
        }
        if !b.iter().sum::<Rational>().is_one() {
            return Err(Error::Tableau("weights do not sum to 1".into()));
        }
        let a_f = a.iter().map(|row| row.iter().map(rational::to_f64).collect()).collect();
        let b_f = b.iter().map(rational::to_f64).collect();
        let c_f = c.iter().map(rational::to_f64).collect();
        Ok(Self { a, b, c, a_f, b_f, c_f })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }
}

/// The classical fourth-order method.
pub fn classical_rk4() -> ButcherTableau {
    let z = Rational::zero;
    let a = vec![
        vec![z(), z(), z(), z()],
        vec![rat(1, 2), z(), z(), z()],
        vec![z(), rat(1, 2), z(), z()],
        vec![z(), z(), rat(1, 1), z()],
    ];
    let b = vec![rat(1, 6), rat(1, 3), rat(1, 3), rat(1, 6)];
    let c = vec![z(), rat(1, 2), rat(1, 2), rat(1, 1)];
    ButcherTableau::new(a, b, c).expect("classical RK4 tableau is valid")
}

/// First-order system `y' = rhs(t, y)`, `y(t0) = y0`.
pub struct IvpSystem<F> {
    pub t0: f64,
    pub y0: Vec<f64>,
    pub rhs: F,
}

impl<F> IvpSystem<F>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    pub fn new(t0: f64, y0: Vec<f64>, rhs: F) -> Self {
        Self { t0, y0, rhs }
    }

    pub fn dimension(&self) -> usize {
        self.y0.len()
    }
}

/// Integrates `nsteps` fixed steps of size `h`; returns all `nsteps + 1`
/// states including the initial one. Step `n` sits at `t0 + n * h`.
pub fn rk_integrate<F>(
    tab: &ButcherTableau,
    sys: &IvpSystem<F>,
    h: f64,
    nsteps: usize,
) -> Result<Vec<(f64, Vec<f64>)>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Argument(format!("step must be positive, got {h}")));
    }
    let d = sys.dimension();
    let s = tab.stages();
    let mut out = Vec::with_capacity(nsteps + 1);
    let mut y = sys.y0.clone();
    out.push((sys.t0, y.clone()));

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; d]; s];
    let mut stage = vec![0.0; d];
    for n in 0..nsteps {
        let t = sys.t0 + n as f64 * h;
        for i in 0..s {
            stage.copy_from_slice(&y);
            for j in 0..i {
                let aij = tab.a_f[i][j];
                if aij != 0.0 {
                    for (st, kj) in stage.iter_mut().zip(&k[j]) {
                        *st += h * aij * kj;
                    }
                }
            }
            let ti = t + tab.c_f[i] * h;
            let ki = (sys.rhs)(ti, &stage);
            if ki.len() != d {
                return Err(Error::Argument(format!(
                    "rhs returned {} components, expected {d}",
                    ki.len()
                )));
            }
            if ki.iter().any(|v| !v.is_finite()) {
                return Err(Error::IntegrationFailure { t: ti });
            }
            k[i] = ki;
        }
        for i in 0..s {
            let bi = tab.b_f[i];
            for (yv, ki) in y.iter_mut().zip(&k[i]) {
                *yv += h * bi * ki;
            }
        }
        out.push((sys.t0 + (n + 1) as f64 * h, y.clone()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkRow {
    pub step: usize,
    pub t: f64,
    pub v: f64,
    pub w: f64,
}

/// `v'' v' - v' = 0`, `v(0) = 0`, `v'(0) = 2`.
///
/// Factoring gives `v' (v'' - 1) = 0`; `v'` starts at 2 and stays positive,
/// so the integrated system is `v' = w`, `w' = 1`.
pub fn quadratic_benchmark(h: f64, nsteps: usize) -> Result<Vec<BenchmarkRow>> {
    let sys = IvpSystem::new(0.0, vec![0.0, 2.0], |_t, y: &[f64]| vec![y[1], 1.0]);
    let states = rk_integrate(&classical_rk4(), &sys, h, nsteps)?;
    Ok(states
        .into_iter()
        .enumerate()
        .map(|(step, (t, y))| BenchmarkRow { step, t, v: y[0], w: y[1] })
        .collect())
}

/// The benchmark with `h = 1/10` over ten steps.
pub fn reference_benchmark() -> Vec<BenchmarkRow> {
    quadratic_benchmark(0.1, 10).expect("fixed benchmark parameters are valid")
}

/// Table formatting: at most three decimals, trailing zeros dropped, a
/// bare trailing point for whole numbers (`0.`, `1.`, `2.5`, `0.205`).
pub fn format_table_value(x: f64) -> String {
    let s = format!("{:.3}", x);
    let s = s.trim_end_matches('0');
    if s == "-0." { "0.".to_string() } else { s.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_tableau_shape() {
        let t = classical_rk4();
        assert_eq!(t.stages(), 4);
        assert_eq!(t.c(), &[rat(0, 1), rat(1, 2), rat(1, 2), rat(1, 1)]);
        assert_eq!(t.b().iter().sum::<Rational>(), rat(1, 1));
    }

    #[test]
    fn tableau_validation() {
        let z = Rational::zero;
        // c does not match the row sums
        let bad_c = ButcherTableau::new(
            vec![vec![z(), z()], vec![rat(1, 2), z()]],
            vec![z(), rat(1, 1)],
            vec![z(), rat(1, 3)],
        );
        assert!(matches!(bad_c, Err(Error::Tableau(_))));
        // implicit entry on the diagonal
        let implicit = ButcherTableau::new(
            vec![vec![rat(1, 2), z()], vec![rat(1, 2), z()]],
            vec![z(), rat(1, 1)],
            vec![rat(1, 2), rat(1, 2)],
        );
        assert!(matches!(implicit, Err(Error::Tableau(_))));
        let unweighted = ButcherTableau::new(vec![vec![z()]], vec![rat(1, 2)], vec![z()]);
        assert!(matches!(unweighted, Err(Error::Tableau(_))));
        // midpoint rule is fine
        assert!(ButcherTableau::new(
            vec![vec![z(), z()], vec![rat(1, 2), z()]],
            vec![z(), rat(1, 1)],
            vec![z(), rat(1, 2)],
        )
        .is_ok());
    }

    #[test]
    fn trivial_systems() {
        let tab = classical_rk4();
        let constant = IvpSystem::new(0.0, vec![7.0], |_, _: &[f64]| vec![0.0]);
        let out = rk_integrate(&tab, &constant, 0.1, 5).unwrap();
        assert!(out.iter().all(|(_, y)| y[0] == 7.0));

        let linear = IvpSystem::new(0.0, vec![0.0], |_, _: &[f64]| vec![1.0]);
        let out = rk_integrate(&tab, &linear, 0.1, 10).unwrap();
        assert_eq!(out.len(), 11);
        assert!((out[10].1[0] - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn integration_failure_reports_time() {
        let sys = IvpSystem::new(0.0, vec![1.0], |t, _: &[f64]| vec![if t > 0.25 { f64::NAN } else { 1.0 }]);
        match rk_integrate(&classical_rk4(), &sys, 0.1, 10) {
            Err(Error::IntegrationFailure { t }) => assert!(t > 0.25 && t <= 0.3 + 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let ok = IvpSystem::new(0.0, vec![1.0], |_, _: &[f64]| vec![1.0]);
        assert!(rk_integrate(&classical_rk4(), &ok, 0.0, 3).is_err());
    }

    #[test]
    fn fourth_order_on_exponential() {
        let tab = classical_rk4();
        let sys = IvpSystem::new(0.0, vec![1.0], |_, y: &[f64]| vec![y[0]]);
        let err = |h: f64, n: usize| {
            let out = rk_integrate(&tab, &sys, h, n).unwrap();
            (out[n].1[0] - std::f64::consts::E).abs()
        };
        let coarse = err(0.1, 10);
        let fine = err(0.05, 20);
        assert!(coarse < 3e-6);
        let ratio = coarse / fine;
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn benchmark_table() {
        let rows = reference_benchmark();
        assert_eq!(rows.len(), 11);
        assert_eq!(format_table_value(rows[5].v), "1.125");
        assert_eq!(format_table_value(rows[10].v), "2.5");
        assert_eq!(format_table_value(rows[0].v), "0.");
        assert_eq!(format_table_value(rows[10].t), "1.");
        for r in &rows {
            assert!((r.v - (2.0 * r.t + r.t * r.t / 2.0)).abs() <= 1e-12);
        }
        assert_eq!(quadratic_benchmark(0.1, 0).unwrap().len(), 1);
    }

    #[test]
    fn deterministic() {
        let a = reference_benchmark();
        let b = reference_benchmark();
        assert!(a.iter().zip(&b).all(|(x, y)| x.v.to_bits() == y.v.to_bits()));
    }
}
