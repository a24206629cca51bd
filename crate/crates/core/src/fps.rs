//! Exact truncated formal power series over arbitrary-precision rationals.
//!
//! A series of order `N` stores exactly the coefficients of `x^0..=x^N`.
//! Binary operations require equal orders; callers truncate explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::powers::PowerTable;
use crate::rational::{self, factorial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Argument("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// Pads `coeffs` with zeros (or truncates) to the given order.
    pub fn from_prefix(coeffs: &[Rational], order: usize) -> Self {
        let mut c: Vec<Rational> = coeffs.iter().take(order + 1).cloned().collect();
        c.resize(order + 1, Rational::zero());
        Self { coeffs: c }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let c: Vec<Rational> = coeffs.iter().map(|&n| rational::int(n)).collect();
        Self::from_prefix(&c, order)
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rational::one(), 0, order)
    }

    /// The identity series `x` (just `0` at order 0).
    pub fn x(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    pub fn monomial(c: Rational, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// `exp(x) - 1`, i.e. `sum_{k>=1} x^k / k!`.
    pub fn exp_minus_one(order: usize) -> Self {
        let mut s = Self::zero(order);
        for k in 1..=order {
            s.coeffs[k] = Rational::new(BigInt::one(), factorial(k));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`; zero above the order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Index of the first nonzero coefficient, `order + 1` for the zero series.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Argument(format!(
                "cannot truncate a series of order {} to order {order}",
                self.order()
            )));
        }
        Ok(Self { coeffs: self.coeffs[..=order].to_vec() })
    }

    /// `n! * coeff(n)` for every n: the exponential generating function view.
    pub fn egf_coeffs(&self) -> Vec<Rational> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= n;
                }
                c * Rational::from_integer(fact.clone())
            })
            .collect()
    }

    /// Series whose coefficient `n` is `egf[n] / n!`.
    pub fn from_egf(egf: &[Rational]) -> Result<Self> {
        let mut fact = BigInt::one();
        let coeffs = egf
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= n;
                }
                c / Rational::from_integer(fact.clone())
            })
            .collect();
        Self::new(coeffs)
    }

    /// `S(-x)`.
    pub fn negate_argument(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self { coeffs }
    }

    fn check_orders(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    /// `alpha * s + beta * t`.
    pub fn linear_combine(alpha: &Rational, s: &Self, beta: &Rational, t: &Self) -> Result<Self> {
        s.check_orders(t)?;
        let coeffs = s
            .coeffs
            .iter()
            .zip(&t.coeffs)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Rational::one();
        Self::linear_combine(&one, self, &one, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::linear_combine(&Rational::one(), self, &-Rational::one(), other)
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| alpha * c).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// `self ∘ inner` by Horner evaluation in the series ring.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_orders(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionDomain);
        }
        let n = self.order();
        let mut acc = Self::monomial(self.coeffs[n].clone(), 0, n);
        for k in (0..n).rev() {
            acc = acc.multiply(inner)?;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse, solved degree by degree from
    /// `[x^k] self(R) = 0` for `k >= 2`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.coeff(1).is_zero() {
            return Err(Error::NonInvertible);
        }
        let n = self.order();
        let mut reverter = Reverter::new(self.coeffs[1].clone());
        for k in 1..=n {
            reverter.next(&self.coeffs);
            debug_assert_eq!(reverter.len(), k + 1);
        }
        Ok(Self { coeffs: reverter.into_coeffs() })
    }

    /// `exp(self)` via the recurrence `E' = S' E`, `E[0] = 1`.
    pub fn exp_series(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ExpDomain);
        }
        let mut exp = ExpAccumulator::new();
        for k in 1..=self.order() {
            exp.next(&self.coeffs[..=k]);
        }
        Ok(Self { coeffs: exp.into_coeffs() })
    }

    /// Termwise derivative; the result has order `N - 1`.
    pub fn differentiate(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::Argument("cannot differentiate a series of order 0".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect();
        Ok(Self { coeffs })
    }

    /// Termwise antiderivative with zero constant term; order `N + 1`.
    pub fn antidifferentiate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / Rational::from_integer(BigInt::from(k + 1))),
        );
        Self { coeffs }
    }
}

/// Online reversion of a series with `S[0] = 0`, `S[1] != 0`: coefficient
/// `k` of the inverse needs only `S[1..=k]`.
#[derive(Debug, Clone)]
pub(crate) struct Reverter {
    lead_inv: Rational,
    table: PowerTable,
    coeffs: Vec<Rational>,
}

impl Reverter {
    pub(crate) fn new(lead: Rational) -> Self {
        Self { lead_inv: lead.recip(), table: PowerTable::new(), coeffs: vec![Rational::zero()] }
    }

    pub(crate) fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub(crate) fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Determines the next inverse coefficient. `s` must hold at least
    /// degrees `0..=k` of the forward series, `k = self.len()`.
    pub(crate) fn next(&mut self, s: &[Rational]) -> &Rational {
        let k = self.table.next_degree();
        let higher = self.table.higher_powers_at_next();
        let r = if k == 1 {
            self.lead_inv.clone()
        } else {
            let mut acc = Rational::zero();
            for (j, p) in (2..=k).zip(&higher) {
                if !s[j].is_zero() && !p.is_zero() {
                    acc += &s[j] * p;
                }
            }
            -acc * &self.lead_inv
        };
        self.table.push(r.clone(), higher);
        self.coeffs.push(r);
        self.coeffs.last().expect("just pushed")
    }

    pub(crate) fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }
}

/// Online `exp(u)` for `u[0] = 0`: coefficient `n` needs `u[1..=n]`.
#[derive(Debug, Clone)]
pub(crate) struct ExpAccumulator {
    coeffs: Vec<Rational>,
}

impl ExpAccumulator {
    pub(crate) fn new() -> Self {
        Self { coeffs: vec![Rational::one()] }
    }

    /// `u` must hold degrees `0..=n` with `n = current length`.
    pub(crate) fn next(&mut self, u: &[Rational]) -> &Rational {
        let n = self.coeffs.len();
        let mut acc = Rational::zero();
        for k in 1..=n {
            if !u[k].is_zero() {
                acc += &u[k] * Rational::from_integer(BigInt::from(k)) * &self.coeffs[n - k];
            }
        }
        self.coeffs.push(acc / Rational::from_integer(BigInt::from(n)));
        self.coeffs.last().expect("just pushed")
    }

    pub(crate) fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = rational::to_string(c);
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) => (true, b.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{body}")?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            order: self.order(),
            coeffs: self.coeffs.iter().map(rational::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.order + 1 {
            return Err(D::Error::custom(format!(
                "order {} needs {} coefficients, found {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Self { coeffs })
    }
}
