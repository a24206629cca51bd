//! Exact Padé approximants `[L/M]` of truncated series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fps::TruncatedSeries;
use crate::rational::{self, Rational};

/// `P(x) / Q(x)` with `Q(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Vec<Rational>,
    den: Vec<Rational>,
}

impl RationalFunction {
    pub fn new(num: Vec<Rational>, den: Vec<Rational>) -> Result<Self> {
        if num.is_empty() || den.first().is_none_or(|d| !d.is_one()) {
            return Err(Error::Argument("denominator must have constant term 1".into()));
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> &[Rational] {
        &self.num
    }

    pub fn denominator(&self) -> &[Rational] {
        &self.den
    }

    /// `L`, the numerator degree bound.
    pub fn num_degree(&self) -> usize {
        self.num.len() - 1
    }

    /// `M`, the denominator degree bound.
    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let q = horner(&self.den, x);
        if q.is_zero() {
            return Err(Error::Pole);
        }
        Ok(horner(&self.num, x) / q)
    }

    /// Taylor expansion of `P / Q` through `order`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        // Q * out = P, solved forward since Q[0] = 1
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut v = self.num.get(k).cloned().unwrap_or_else(Rational::zero);
            for j in 1..=k.min(self.den_degree()) {
                v -= &self.den[j] * &out[k - j];
            }
            out.push(v);
        }
        TruncatedSeries::new(out).expect("nonempty")
    }
}

fn horner(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// The `[L/M]` approximant: `deg P <= L`, `deg Q <= M`, `Q(0) = 1` and
/// `Q S - P = O(x^(L+M+1))`.
pub fn pade(s: &TruncatedSeries, l: usize, m: usize) -> Result<RationalFunction> {
    if s.order() < l + m {
        return Err(Error::Argument(format!(
            "[{l}/{m}] needs order {} but the series has order {}",
            l + m,
            s.order()
        )));
    }
    let c = |i: isize| if i < 0 { Rational::zero() } else { s.coeff(i as usize) };

    // rows k = L+1..L+M: sum_{j=1..M} q_j c_{k-j} = -c_k
    let system: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let k = (l + 1 + r) as isize;
            let mut row: Vec<Rational> = (1..=m).map(|j| c(k - j as isize)).collect();
            row.push(-c(k));
            row
        })
        .collect();
    let q_tail = solve_fraction_free(system).ok_or(Error::DegeneratePade { l, m })?;

    let mut den = Vec::with_capacity(m + 1);
    den.push(Rational::one());
    den.extend(q_tail);
    let num = (0..=l)
        .map(|k| {
            (0..=k.min(m))
                .map(|j| &den[j] * c(k as isize - j as isize))
                .sum()
        })
        .collect();
    RationalFunction::new(num, den)
}

/// Solves the square system given as augmented rows `[A | b]` by Bareiss
/// elimination on an integer-scaled copy; `None` when singular.
fn solve_fraction_free(rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = rows.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // clear denominators row by row
    let mut a: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| (v * Rational::from_integer(lcm.clone())).to_integer()).collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut v = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            v -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = v / Rational::from_integer(a[i][i].clone());
    }
    Some(x)
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            num: Vec<String>,
            den: Vec<String>,
            #[serde(rename = "L")]
            l: usize,
            #[serde(rename = "M")]
            m: usize,
        }
        Json {
            num: self.num.iter().map(rational::to_string).collect(),
            den: self.den.iter().map(rational::to_string).collect(),
            l: self.num_degree(),
            m: self.den_degree(),
        }
        .serialize(serializer)
    }
}
