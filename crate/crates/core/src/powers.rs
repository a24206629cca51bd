//! Incrementally built table of coefficients of the powers of a series with
//! zero constant term.
//!
//! For `u = u[1] x + u[2] x^2 + ...`, entry `(j, m)` holds `[x^m] u^j`.
//! Entries with `j >= 2` at degree `m` only involve `u[1..m-1]`, so the
//! table can advance one degree before `u[m]` is known. That is what makes
//! degree-by-degree reversion and composition solvers cheap.

use num_traits::Zero;

use crate::rational::Rational;

#[derive(Debug, Clone, Default)]
pub(crate) struct PowerTable {
    /// `rows[j - 1][m] = [x^m] u^j`; every row has the same length.
    rows: Vec<Vec<Rational>>,
    /// Number of degrees (0..degrees) for which `u` is known.
    degrees: usize,
}

impl PowerTable {
    pub(crate) fn new() -> Self {
        // u[0] = 0
        Self { rows: Vec::new(), degrees: 1 }
    }

    /// Degree whose base coefficient is pushed next.
    pub(crate) fn next_degree(&self) -> usize {
        self.degrees
    }

    /// `[x^m] u^j`, zero outside the computed range.
    #[cfg(test)]
    pub(crate) fn get(&self, j: usize, m: usize) -> Rational {
        if j == 0 {
            return if m == 0 { Rational::from_integer(1.into()) } else { Rational::zero() };
        }
        self.rows
            .get(j - 1)
            .and_then(|row| row.get(m))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `[x^m] u^j` for every `2 <= j <= m`, where `m = next_degree()`.
    /// Only needs the coefficients already pushed.
    pub(crate) fn higher_powers_at_next(&self) -> Vec<Rational> {
        let m = self.degrees;
        (2..=m)
            .map(|j| {
                // u^j = u * u^(j-1); valuation of u^(j-1) is j-1
                let prev = &self.rows[j - 2];
                let mut acc = Rational::zero();
                for i in 1..=(m + 1 - j) {
                    let a = &self.rows[0][i];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &prev[m - i];
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Records `u[m]` for `m = next_degree()` together with the higher
    /// powers computed by [`higher_powers_at_next`](Self::higher_powers_at_next).
    pub(crate) fn push(&mut self, coeff: Rational, higher: Vec<Rational>) {
        let m = self.degrees;
        debug_assert_eq!(higher.len(), m.saturating_sub(1));
        if self.rows.len() < m {
            // new row u^m, zero below degree m
            self.rows.push(vec![Rational::zero(); m]);
        }
        self.rows[0].push(coeff);
        for (offset, value) in higher.into_iter().enumerate() {
            self.rows[offset + 1].push(value);
        }
        self.degrees += 1;
        debug_assert!(self.rows.iter().all(|r| r.len() == self.degrees));
    }

    /// Computes the higher powers and records `u[m]` in one go.
    pub(crate) fn advance(&mut self, coeff: Rational) {
        let higher = self.higher_powers_at_next();
        self.push(coeff, higher);
    }

    /// `[x^m] outer(u) - outer[0]` restricted to `j >= 1`, for `m` already in
    /// the table.
    pub(crate) fn compose_coeff(&self, outer: &[Rational], m: usize) -> Rational {
        let mut acc = Rational::zero();
        for j in 1..=m.min(outer.len().saturating_sub(1)) {
            let o = &outer[j];
            if o.is_zero() {
                continue;
            }
            let p = &self.rows[j - 1][m];
            if !p.is_zero() {
                acc += o * p;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn powers_of_geometric_tail() {
        // u = x + x^2 + x^3 + ..., u^2 = x^2 + 2x^3 + 3x^4 + ...
        let mut t = PowerTable::new();
        for _ in 1..=6 {
            t.advance(int(1));
        }
        for m in 2..=6 {
            assert_eq!(t.get(2, m), int(m as i64 - 1));
        }
        assert_eq!(t.get(3, 3), int(1));
        assert_eq!(t.get(3, 4), int(3));
        assert_eq!(t.get(6, 6), int(1));
        assert_eq!(t.get(0, 0), int(1));
    }
}
