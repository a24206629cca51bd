//! Algebraic invariants of the series operations, checked exactly against
//! independent oracles.

use expinv_core::rational::{self, factorial, Rational};
use expinv_core::TruncatedSeries;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Rational> {
    (-100i64..=100, 1i64..=100).prop_map(|(n, d)| rational::rat(n, d))
}

fn nonzero_coeff() -> impl Strategy<Value = Rational> {
    coeff().prop_filter("nonzero", |c| !c.is_zero())
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(coeff(), order + 1)
        .prop_map(|c| TruncatedSeries::new(c).unwrap())
}

/// Zero constant term.
fn tail_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(coeff(), order).prop_map(|mut c| {
        c.insert(0, Rational::zero());
        TruncatedSeries::new(c).unwrap()
    })
}

/// Zero constant term and nonzero linear term.
fn invertible_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (nonzero_coeff(), prop::collection::vec(coeff(), order - 1)).prop_map(|(lead, rest)| {
        let mut c = vec![Rational::zero(), lead];
        c.extend(rest);
        TruncatedSeries::new(c).unwrap()
    })
}

fn naive_convolution(a: &TruncatedSeries, b: &TruncatedSeries) -> Vec<Rational> {
    let n = a.order();
    let mut out = Vec::new();
    for k in 0..=n {
        let mut acc = Rational::zero();
        for i in 0..=k {
            acc += a.coeff(i) * b.coeff(k - i);
        }
        out.push(acc);
    }
    out
}

/// `exp(S) = sum_k S^k / k!`, valid because `S^k = O(x^k)`.
fn exp_by_powers(s: &TruncatedSeries) -> TruncatedSeries {
    let n = s.order();
    let mut acc = TruncatedSeries::one(n);
    let mut power = TruncatedSeries::one(n);
    for k in 1..=n {
        power = power.multiply(s).unwrap();
        let term = power.scale(&Rational::new(BigInt::one(), factorial(k)));
        acc = acc.add(&term).unwrap();
    }
    acc
}

/// Lagrange inversion: `[x^n] S^-1 = (1/n) [x^(n-1)] (x / S)^n`.
fn revert_by_lagrange(s: &TruncatedSeries) -> TruncatedSeries {
    let n = s.order();
    // x / S = 1 / (S[1] + S[2] x + ...)
    let shifted: Vec<Rational> = (1..=n).map(|k| s.coeff(k)).chain([Rational::zero()]).collect();
    let mut inv = vec![shifted[0].recip()];
    for k in 1..=n {
        let mut acc = Rational::zero();
        for j in 1..=k {
            acc += &shifted[j] * &inv[k - j];
        }
        inv.push(-acc * &inv[0]);
    }
    let base = TruncatedSeries::new(inv).unwrap();
    let mut out = vec![Rational::zero()];
    let mut power = TruncatedSeries::one(n);
    for k in 1..=n {
        power = power.multiply(&base).unwrap();
        out.push(power.coeff(k - 1) / Rational::from_integer(BigInt::from(k)));
    }
    TruncatedSeries::new(out).unwrap()
}

fn all_canonical(s: &TruncatedSeries) -> bool {
    s.coeffs().iter().all(rational::is_canonical)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reversion_round_trip(s in invertible_series(12)) {
        let r = s.revert().unwrap();
        prop_assert_eq!(s.compose(&r).unwrap(), TruncatedSeries::x(12));
        prop_assert_eq!(r.compose(&s).unwrap(), TruncatedSeries::x(12));
        prop_assert!(all_canonical(&r));
    }

    #[test]
    fn reversion_matches_lagrange_inversion(s in invertible_series(9)) {
        prop_assert_eq!(s.revert().unwrap(), revert_by_lagrange(&s));
    }

    #[test]
    fn multiply_matches_naive_convolution(a in series(8), b in series(8)) {
        let product = a.multiply(&b).unwrap();
        prop_assert_eq!(product.coeffs(), &naive_convolution(&a, &b)[..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiply_commutative_and_associative(a in series(10), b in series(10), c in series(10)) {
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn compose_associative(a in series(7), b in tail_series(7), c in invertible_series(7)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn exp_is_a_homomorphism(s in tail_series(9), t in tail_series(9)) {
        let lhs = s.add(&t).unwrap().exp_series().unwrap();
        let rhs = s.exp_series().unwrap().multiply(&t.exp_series().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_matches_power_sum(s in tail_series(8)) {
        prop_assert_eq!(s.exp_series().unwrap(), exp_by_powers(&s));
    }

    #[test]
    fn derivative_of_exp(s in tail_series(10)) {
        let e = s.exp_series().unwrap();
        let lhs = e.differentiate().unwrap();
        let rhs = s.differentiate().unwrap().multiply(&e.truncate(9).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antiderivative_round_trip(s in series(10)) {
        let back = s.differentiate().unwrap().antidifferentiate();
        let mut expected = s.coeffs().to_vec();
        expected[0] = Rational::zero();
        prop_assert_eq!(back.coeffs(), &expected[..]);
    }

    #[test]
    fn json_round_trip(s in series(6)) {
        let json = serde_json::to_string(&s).unwrap();
        let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn derivative_of_reference_prefix() {
    // termwise rule on 0, 1, 1/2, 0, 1/24, -1/20
    let s = TruncatedSeries::new(
        ["0", "1", "1/2", "0", "1/24", "-1/20"]
            .iter()
            .map(|c| rational::parse(c).unwrap())
            .collect(),
    )
    .unwrap();
    let d = s.differentiate().unwrap();
    let expected: Vec<Rational> =
        ["1", "1", "0", "1/6", "-1/4"].iter().map(|c| rational::parse(c).unwrap()).collect();
    assert_eq!(d.coeffs(), &expected[..]);
}

#[test]
fn exact_at_order_150() {
    let s = expinv_core::funcsolve::solve(&expinv_core::EquationKind::ExpInverse, 150).unwrap();
    let top = s.coeff(150);
    assert!(top.numer().to_string().len() > 100);
    assert!(all_canonical(&s));
}
