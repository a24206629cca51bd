//! Numerical Picard iteration `f_{n+1}(x) = ∫_0^x exp(f_n^-1(t)) dt` on a
//! uniform grid over `[0, xmax]`.
//!
//! Grid functions are piecewise linear between nodes, which keeps them
//! strictly monotone and makes inversion closed-form on each cell.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for the `f(x) >= x` invariant.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Slack allowed in the `Phi(F, G, T) <= ∫ e^t Phi(f, g, t) dt` check.
pub const CONTRACTION_TOL: f64 = 1e-6;

/// Strictly increasing function sampled at `x_i = i * xmax / M`, with
/// `f(0) = 0` and `f(x) >= x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xmax: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(xmax: f64, values: Vec<f64>) -> Result<Self> {
        if !(xmax.is_finite() && xmax > 0.0) {
            return Err(Error::Argument(format!("xmax must be positive, got {xmax}")));
        }
        if values.len() < 2 {
            return Err(Error::Argument("a grid function needs at least two nodes".into()));
        }
        let f = Self { xmax, values };
        f.validate()?;
        Ok(f)
    }

    pub fn from_fn(xmax: f64, cells: usize, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Argument("grid needs at least one cell".into()));
        }
        let values = (0..=cells).map(|i| f(node(xmax, cells, i))).collect();
        Self::new(xmax, values)
    }

    pub fn identity(xmax: f64, cells: usize) -> Result<Self> {
        Self::from_fn(xmax, cells, |x| x)
    }

    fn validate(&self) -> Result<()> {
        if self.values[0] != 0.0 {
            return Err(Error::Domain(format!("f(0) = {} but must be 0", self.values[0])));
        }
        let m = self.cells();
        for i in 0..m {
            let (a, b) = (self.values[i], self.values[i + 1]);
            if !(b > a) || !b.is_finite() {
                return Err(Error::Domain(format!("not strictly increasing at node {}", i + 1)));
            }
        }
        for i in 0..=m {
            if self.values[i] < self.node(i) - IDENTITY_TOL {
                return Err(Error::Domain(format!("f(x) < x at node {i}")));
            }
        }
        Ok(())
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    /// Number of cells `M`.
    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.xmax / self.cells() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        node(self.xmax, self.cells(), i)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.cells()).map(|i| self.node(i))
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.xmax == other.xmax && self.values.len() == other.values.len()
    }

    /// Piecewise-linear evaluation on `[0, xmax]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=self.xmax).contains(&x) {
            return Err(Error::Range { t: x, max: self.xmax });
        }
        let m = self.cells();
        let i = ((x / self.step()) as usize).min(m - 1);
        let (x0, x1) = (self.node(i), self.node(i + 1));
        let w = (x - x0) / (x1 - x0);
        Ok(self.values[i] + w * (self.values[i + 1] - self.values[i]))
    }

    /// The unique `s` with `f(s) = t`, for `0 <= t <= f(xmax)`.
    pub fn invert(&self, t: f64) -> Result<f64> {
        let top = self.values[self.cells()];
        if !(0.0..=top).contains(&t) {
            return Err(Error::Range { t, max: top });
        }
        // first node with value > t, then step back into its cell
        let upper = self.values.partition_point(|&v| v <= t);
        if upper > self.cells() {
            return Ok(self.xmax);
        }
        let i = upper - 1;
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (x0, x1) = (self.node(i), self.node(i + 1));
        Ok(x0 + (x1 - x0) * (t - v0) / (v1 - v0))
    }
}

fn node(xmax: f64, cells: usize, i: usize) -> f64 {
    if i == cells {
        xmax
    } else {
        xmax * i as f64 / cells as f64
    }
}

/// `F(x_i) = ∫_0^{x_i} exp(f^-1(t)) dt`, composite Simpson with four
/// subintervals per cell.
pub fn picard_step(f: &GridFunction) -> Result<GridFunction> {
    f.validate()?;
    let m = f.cells();
    if f.values[m] < f.xmax {
        return Err(Error::Domain("f(xmax) < xmax: inverse undefined on [0, xmax]".into()));
    }
    let integrand = |t: f64| f.invert(t).map(f64::exp);
    let mut values = Vec::with_capacity(m + 1);
    values.push(0.0);
    let mut acc = 0.0;
    let mut left = integrand(0.0)?;
    for i in 0..m {
        let (a, b) = (f.node(i), f.node(i + 1));
        let d = (b - a) / 4.0;
        let g1 = integrand(a + d)?;
        let g2 = integrand(a + 2.0 * d)?;
        let g3 = integrand(a + 3.0 * d)?;
        let right = integrand(b)?;
        acc += (b - a) / 12.0 * (left + 4.0 * g1 + 2.0 * g2 + 4.0 * g3 + right);
        values.push(acc);
        left = right;
    }
    GridFunction::new(f.xmax, values)
}

/// Trapezoid integral of node samples over `[0, t]`, interpolating
/// linearly inside the last partial cell.
fn integrate_to(grid: &GridFunction, samples: &[f64], t: f64) -> f64 {
    let h = grid.step();
    let m = grid.cells();
    let full = ((t / h) as usize).min(m);
    let mut acc = 0.0;
    for i in 0..full {
        acc += 0.5 * (samples[i] + samples[i + 1]) * (grid.node(i + 1) - grid.node(i));
    }
    let x0 = grid.node(full);
    if full < m && t > x0 {
        let w = (t - x0) / (grid.node(full + 1) - x0);
        let at_t = samples[full] + w * (samples[full + 1] - samples[full]);
        acc += 0.5 * (samples[full] + at_t) * (t - x0);
    }
    acc
}

fn check_pair(f: &GridFunction, g: &GridFunction, t: f64) -> Result<()> {
    if !f.same_grid(g) {
        return Err(Error::Argument("grid functions live on different grids".into()));
    }
    if !(t > 0.0 && t <= f.xmax) {
        return Err(Error::Range { t, max: f.xmax });
    }
    Ok(())
}

/// `Phi(f, g, T) = ∫_0^T |f - g|`, trapezoid rule.
pub fn phi(f: &GridFunction, g: &GridFunction, t: f64) -> Result<f64> {
    check_pair(f, g, t)?;
    let diff: Vec<f64> = f.values.iter().zip(&g.values).map(|(a, b)| (a - b).abs()).collect();
    Ok(integrate_to(f, &diff, t))
}

/// One instance of the contraction inequality for the pair `(f_n, f_{n+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionCheck {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `lhs = Phi(F, G, T)` against `rhs = ∫_0^T e^t Phi(f, g, t) dt`, where
/// `F`, `G` are the Picard images of `f`, `g`.
pub fn contraction_pair(
    f: &GridFunction,
    g: &GridFunction,
    big_f: &GridFunction,
    big_g: &GridFunction,
    t: f64,
) -> Result<(f64, f64)> {
    check_pair(f, g, t)?;
    check_pair(big_f, big_g, t)?;
    check_pair(f, big_f, t)?;
    let lhs = phi(big_f, big_g, t)?;
    // running Phi(f, g, x_i) at every node
    let mut running = Vec::with_capacity(f.values.len());
    let mut acc = 0.0;
    running.push(0.0);
    for i in 0..f.cells() {
        let d0 = (f.values[i] - g.values[i]).abs();
        let d1 = (f.values[i + 1] - g.values[i + 1]).abs();
        acc += 0.5 * (d0 + d1) * (f.node(i + 1) - f.node(i));
        running.push(acc);
    }
    let weighted: Vec<f64> = running.iter().zip(f.nodes()).map(|(p, x)| x.exp() * p).collect();
    Ok((lhs, integrate_to(f, &weighted, t)))
}

/// Contraction checks over every consecutive pair `(f_n, f_{n+1})` whose
/// images `(f_{n+1}, f_{n+2})` are in `iterates`.
pub fn contraction_check(iterates: &[GridFunction], t: f64) -> Result<Vec<ContractionCheck>> {
    iterates
        .windows(3)
        .enumerate()
        .map(|(i, w)| {
            let (lhs, rhs) = contraction_pair(&w[0], &w[1], &w[1], &w[2], t)?;
            Ok(ContractionCheck { n: i + 1, lhs, rhs, ok: lhs <= rhs + CONTRACTION_TOL })
        })
        .collect()
}

/// A node where the interleaving `f_1 <= f_3 <= ... <= f_4 <= f_2` fails
/// by more than the tolerance: `f_lower(x) - f_upper(x) = excess`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterleavingViolation {
    pub node: usize,
    pub lower: usize,
    pub upper: usize,
    pub excess: f64,
}

#[derive(Debug, Clone)]
pub struct PicardOrbit {
    /// `f_1 = identity, f_2, ..., f_K`.
    pub iterates: Vec<GridFunction>,
    /// `gaps[k - 1] = max_i |f_{2k}(x_i) - f_{2k-1}(x_i)|`.
    pub gaps: Vec<f64>,
    /// Contraction checks at `T = xmax`.
    pub phi_checks: Vec<ContractionCheck>,
    pub violations: Vec<InterleavingViolation>,
    /// Whether `f_{2k-1}(x) < f_{2k}(x)` strictly at every node `x > h`.
    pub strict_ok: bool,
    /// Tolerance used for the interleaving checks.
    pub tolerance: f64,
}

impl PicardOrbit {
    pub fn interleaving_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contraction_ok(&self) -> bool {
        self.phi_checks.iter().all(|c| c.ok)
    }

    /// `f_n`, 1-based.
    pub fn iterate(&self, n: usize) -> &GridFunction {
        &self.iterates[n - 1]
    }
}

/// Interleaving tolerance `1e-9 + h^2` for grid step `h`.
pub fn interleaving_tolerance(step: f64) -> f64 {
    1e-9 + step * step
}

/// Runs `K` Picard iterates from the identity on `[0, xmax]` with `M` cells.
pub fn run_orbit(iterations: usize, xmax: f64, cells: usize) -> Result<PicardOrbit> {
    if iterations < 2 {
        return Err(Error::Argument("need at least 2 iterates".into()));
    }
    if cells < 10 {
        return Err(Error::Argument("need at least 10 grid cells".into()));
    }
    let mut iterates = vec![GridFunction::identity(xmax, cells)?];
    while iterates.len() < iterations {
        let next = picard_step(iterates.last().expect("nonempty"))?;
        iterates.push(next);
    }

    let gaps = iterates
        .chunks_exact(2)
        .map(|pair| {
            pair[0]
                .values
                .iter()
                .zip(&pair[1].values)
                .map(|(a, b)| (b - a).abs())
                .fold(0.0, f64::max)
        })
        .collect();

    let tolerance = interleaving_tolerance(iterates[0].step());
    let (violations, strict_ok) = interleaving(&iterates, tolerance);
    let phi_checks = contraction_check(&iterates, xmax)?;
    Ok(PicardOrbit { iterates, gaps, phi_checks, violations, strict_ok, tolerance })
}

/// Chain `f_1 <= f_3 <= f_5 <= ... <= f_6 <= f_4 <= f_2`, checked link by link.
fn interleaving(iterates: &[GridFunction], tol: f64) -> (Vec<InterleavingViolation>, bool) {
    let odd: Vec<usize> = (1..=iterates.len()).step_by(2).collect();
    let even: Vec<usize> = (2..=iterates.len()).step_by(2).collect();
    let mut chain = odd.clone();
    chain.extend(even.iter().rev());

    let mut violations = Vec::new();
    for link in chain.windows(2) {
        let (lo, hi) = (&iterates[link[0] - 1], &iterates[link[1] - 1]);
        for (node, (a, b)) in lo.values.iter().zip(&hi.values).enumerate() {
            if a - b > tol {
                violations.push(InterleavingViolation {
                    node,
                    lower: link[0],
                    upper: link[1],
                    excess: a - b,
                });
            }
        }
    }

    let strict_ok = odd.iter().zip(&even).all(|(&o, &e)| {
        let (lo, hi) = (&iterates[o - 1], &iterates[e - 1]);
        lo.values.iter().zip(&hi.values).skip(2).all(|(a, b)| a < b)
    });
    (violations, strict_ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_closed(x: f64) -> f64 {
        let r = (1.0 + 2.0 * x).sqrt() - 1.0;
        r.exp() * r
    }

    #[test]
    fn rejects_invalid_grids() {
        assert!(GridFunction::new(1.0, vec![0.1, 1.0]).is_err());
        assert!(GridFunction::new(1.0, vec![0.0, 0.5, 0.4]).is_err());
        assert!(GridFunction::new(1.0, vec![0.0, 0.2, 0.9]).is_err());
        assert!(GridFunction::new(0.0, vec![0.0, 1.0]).is_err());
        assert!(GridFunction::identity(1.0, 0).is_err());
    }

    #[test]
    fn invert_examples() {
        let id = GridFunction::identity(1.0, 100).unwrap();
        assert!((id.invert(0.5).unwrap() - 0.5).abs() < 1e-15);

        let e = GridFunction::from_fn(1.0, 1000, f64::exp_m1).unwrap();
        let s = e.invert(std::f64::consts::E - 1.0).unwrap();
        assert!((s - 1.0).abs() < 1e-6);
        let mid = e.invert(0.3).unwrap();
        assert!((mid - 1.3f64.ln()).abs() < 1e-6);

        for i in [0, 1, 17, 999, 1000] {
            assert_eq!(e.invert(e.values()[i]).unwrap(), e.node(i));
        }
    }

    #[test]
    fn invert_round_trip_tolerance() {
        let f = GridFunction::from_fn(1.0, 333, |x| x + x * x / 2.0).unwrap();
        for k in 0..=200 {
            let t = 1.5 * k as f64 / 200.0;
            let s = f.invert(t).unwrap();
            assert!((f.eval(s).unwrap() - t).abs() <= 1e-14 * t.max(1.0));
        }
    }

    #[test]
    fn invert_out_of_range() {
        let id = GridFunction::identity(1.0, 10).unwrap();
        assert!(matches!(id.invert(1.5), Err(Error::Range { .. })));
        assert!(matches!(id.invert(-0.1), Err(Error::Range { .. })));
    }

    #[test]
    fn picard_steps_follow_closed_forms() {
        let f1 = GridFunction::identity(1.0, 1000).unwrap();
        let f2 = picard_step(&f1).unwrap();
        assert!((f2.values()[1000] - (std::f64::consts::E - 1.0)).abs() < 1e-6);
        let f3 = picard_step(&f2).unwrap();
        assert!((f3.values()[1000] - 1.5).abs() < 5e-4);
        let f4 = picard_step(&f3).unwrap();
        assert!((f4.values()[1000] - f4_closed(1.0)).abs() < 5e-4);
    }

    #[test]
    fn picard_step_requires_domain() {
        // f(xmax) < xmax is impossible for a valid grid; short of it the
        // constructor already refuses
        assert!(GridFunction::new(1.0, vec![0.0, 0.4, 0.8]).is_err());
    }

    #[test]
    fn phi_examples() {
        let id = GridFunction::identity(1.0, 1000).unwrap();
        let q = GridFunction::from_fn(1.0, 1000, |x| x + x * x / 2.0).unwrap();
        assert_eq!(phi(&id, &id, 1.0).unwrap(), 0.0);
        assert!((phi(&id, &q, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-6);
        assert_eq!(phi(&id, &q, 0.37).unwrap(), phi(&q, &id, 0.37).unwrap());
        assert!((phi(&id, &q, 0.5).unwrap() - 0.125 / 6.0).abs() < 1e-6);
        assert!(phi(&id, &q, 1.5).is_err());
        assert!(phi(&id, &q, 0.0).is_err());
        let other = GridFunction::identity(1.0, 10).unwrap();
        assert!(phi(&id, &other, 0.5).is_err());
    }

    #[test]
    fn contraction_of_identical_pair_is_zero() {
        let id = GridFunction::identity(1.0, 100).unwrap();
        let img = picard_step(&id).unwrap();
        let (lhs, rhs) = contraction_pair(&id, &id, &img, &img, 1.0).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn short_orbit() {
        let orbit = run_orbit(4, 1.0, 1000).unwrap();
        let at_one: Vec<f64> = orbit.iterates.iter().map(|f| f.values()[1000]).collect();
        assert_eq!(at_one[0], 1.0);
        assert!((at_one[1] - (std::f64::consts::E - 1.0)).abs() < 1e-6);
        assert!((at_one[2] - 1.5).abs() < 5e-4);
        assert!((at_one[3] - f4_closed(1.0)).abs() < 5e-4);
        assert!(at_one[0] <= at_one[2] && at_one[2] <= at_one[3] && at_one[3] <= at_one[1]);
        assert!((orbit.gaps[0] - (std::f64::consts::E - 2.0)).abs() < 1e-6);
        assert_eq!(orbit.gaps.len(), 2);
        assert!(orbit.interleaving_ok());
        assert!(orbit.contraction_ok());
        assert_eq!(orbit.phi_checks.len(), 2);

        let two = run_orbit(2, 1.0, 50).unwrap();
        assert_eq!(two.iterates.len(), 2);
        assert_eq!(two.gaps.len(), 1);
        assert!(two.phi_checks.is_empty());
    }

    #[test]
    fn orbit_argument_checks() {
        assert!(run_orbit(1, 1.0, 100).is_err());
        assert!(run_orbit(4, 1.0, 9).is_err());
        assert!(run_orbit(4, -1.0, 100).is_err());
    }

    #[test]
    fn interleaving_detects_violation() {
        let a = GridFunction::identity(1.0, 10).unwrap();
        let b = GridFunction::from_fn(1.0, 10, |x| x + x * x).unwrap();
        // f_1 above f_2 everywhere except 0
        let (v, strict) = interleaving(&[b, a], 1e-9);
        assert_eq!(v.len(), 10);
        assert!(!strict);
    }
}
