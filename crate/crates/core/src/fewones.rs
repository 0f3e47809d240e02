//! Solus strings with fewer than `ell` 1s and no run of `k` 0s.
//!
//! For fixed `ell` and `k` only finitely many lengths qualify, so the
//! generating function `f_{ell,k}(z) = sum_{n>=1} a_n z^n` is a polynomial.
//! [`fewones_count`] reads `a_n` off the solus joint table; the piecewise
//! polynomial forms for `ell <= 5` live in [`fewones_closed_form`].

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::joint::{joint_tables, JointTable, Variant};
use crate::series::TruncatedSeries;

/// Solus joint tables for every length `0..=n_max`, shared by repeated
/// few-ones queries.
pub struct FewOnes {
    tables: Vec<JointTable>,
}

impl FewOnes {
    pub fn new(n_max: usize) -> Self {
        let ns: Vec<usize> = (0..=n_max).collect();
        FewOnes {
            tables: joint_tables(&ns, Variant::Solus),
        }
    }

    pub fn n_max(&self) -> usize {
        self.tables.len() - 1
    }

    /// `a_n = sum_{y<k} sum_{x'<ell} F~_n(n - x', y)`, `x'` the number of 1s.
    pub fn count(&self, n: usize, ell: usize, k: usize) -> BigUint {
        let t = &self.tables[n];
        (0..ell.min(n + 1))
            .flat_map(|ones| t.row(n - ones).iter().take(k))
            .sum()
    }

    /// `a_1 .. a_len` from the table.
    pub fn sequence(&self, ell: usize, k: usize, len: usize) -> Vec<BigUint> {
        (1..=len).map(|n| self.count(n, ell, k)).collect()
    }

    /// Closed form where one exists, table count otherwise (and for `ell > 5`).
    pub fn value(&self, n: usize, ell: usize, k: usize) -> BigUint {
        if (2..=5).contains(&ell) {
            if let Ok(v) = fewones_closed_form(n, ell, k) {
                return v;
            }
        }
        self.count(n, ell, k)
    }
}

pub fn fewones_count(n: usize, ell: usize, k: usize) -> BigUint {
    FewOnes::new(n).count(n, ell, k)
}

/// Exact quotient of a numerator known to be divisible by `den`.
fn exact(num: i128, den: i128) -> i128 {
    assert_eq!(num % den, 0, "closed form {num}/{den} is not integral");
    num / den
}

fn delta(a: i128, b: i128) -> i128 {
    (a == b) as i128
}

fn ell2(k: i128, n: i128) -> i128 {
    if (1..k).contains(&n) {
        n + 1
    } else if (k..2 * k).contains(&n) {
        2 * k - n
    } else {
        0
    }
}

fn ell3(k: i128, n: i128) -> i128 {
    if (1..k).contains(&n) {
        exact(4 - n + n * n, 2)
    } else if (k..=k + 2).contains(&n) {
        ell3(k, n - 1) + k - 2
    } else if (k + 3..=2 * k).contains(&n) {
        ell3(k, n - 1) + 3 * k - 2 * n + 2
    } else if (2 * k + 1..3 * k).contains(&n) {
        let p = 3 * k - n;
        exact(p + p * p, 2)
    } else {
        0
    }
}

fn w4(m: i128) -> i128 {
    match m {
        1 => -2,
        2 => 2,
        _ => 3 * m * m - 13 * m + 20,
    }
}

fn u4(k: i128, n: i128) -> i128 {
    if (k + 1..=2 * k).contains(&n) {
        exact(-k * k + (2 * n - 5) * k - w4(n - k), 2)
    } else if n == 2 * k + 1 {
        2 * (n - k - 3)
    } else {
        0
    }
}

fn v4(k: i128, n: i128) -> i128 {
    exact(-20 * k * k + (16 * n - 30) * k - (3 * n * n - 11 * n + 12), 2)
}

fn ell4(k: i128, n: i128) -> i128 {
    if n == 1 {
        2
    } else if (2..=k).contains(&n) {
        let m = n - 1;
        exact(6 - 6 * delta(k, n) + 14 * m - 3 * m * m + m * m * m, 6)
    } else if (k + 1..=2 * k + 2).contains(&n) {
        ell4(k, n - 1) + u4(k, n)
    } else if (2 * k + 3..=3 * k).contains(&n) {
        ell4(k, n - 1) - v4(k, n)
    } else if (3 * k + 1..4 * k).contains(&n) {
        let p = 4 * k - n;
        exact(2 * p + 3 * p * p + p * p * p, 6)
    } else {
        0
    }
}

fn w5(m: i128) -> i128 {
    match m {
        1 => 54,
        2 | 3 => 30,
        _ => 4 * m * m * m - 42 * m * m + 176 * m - 240,
    }
}

fn u5(k: i128, n: i128) -> i128 {
    delta(2 * k + 1, n)
        + exact(
            k * k * k - (3 * n - 12) * k * k + (3 * n * n - 24 * n + 59) * k - w5(n - k),
            6,
        )
}

fn v5(k: i128, n: i128) -> i128 {
    3 * delta(3 * k + 2, n)
        + exact(
            -195 * k * k * k + (165 * n - 426) * k * k - (45 * n * n - 228 * n + 309) * k
                + (4 * n * n * n - 30 * n * n + 80 * n - 72),
            6,
        )
}

/// `a_{3k+1}` for `ell = 5`.
fn a5_3k1(k: i128) -> i128 {
    exact(11 * k.pow(4) - 2 * k.pow(3) - 35 * k * k - 22 * k + 72, 24)
}

fn ell5_head(k: i128, n: i128) -> i128 {
    let m = n - 2;
    exact(96 - 24 * delta(k, n) - 6 * m + 35 * m * m - 6 * m.pow(3) + m.pow(4), 24)
}

/// `None` inside the uncovered interval `2k+2 <= n <= 3k`.
fn ell5(k: i128, n: i128) -> Option<i128> {
    Some(if n <= 2 {
        // Lengths 1 and 2 hold at most one 1, so ell = 2 already counts them.
        ell2(k, n)
    } else if n <= k {
        ell5_head(k, n)
    } else if n <= 2 * k + 1 {
        // The u-steps start from the head polynomial at n = k, which for
        // k = 2 is 3 rather than the true a_2 = 2.
        let prev = if n == k + 1 { ell5_head(k, k) } else { ell5(k, n - 1)? };
        prev + u5(k, n)
    } else if n <= 3 * k {
        return None;
    } else if n == 3 * k + 1 {
        a5_3k1(k)
    } else if n <= 4 * k {
        ell5(k, n - 1)? - v5(k, n)
    } else if n < 5 * k {
        let p = 5 * k - n;
        exact(6 * p + 11 * p * p + 6 * p.pow(3) + p.pow(4), 24)
    } else {
        0
    })
}

/// Piecewise polynomial value of `a_n` for `2 <= ell <= 5`, `k >= 2`.
///
/// For `ell = 5` the interval `2k+2 <= n <= 3k` has no closed form and
/// yields [`Error::OutOfFormulaRange`]; use [`FewOnes::value`] there.
pub fn fewones_closed_form(n: usize, ell: usize, k: usize) -> Result<BigUint> {
    if !(2..=5).contains(&ell) || k < 2 {
        return Err(Error::InvalidArgument(format!(
            "closed forms need 2 <= ell <= 5 and k >= 2 (got ell = {ell}, k = {k})"
        )));
    }
    if n == 0 {
        return Err(Error::OutOfFormulaRange { n, ell, k });
    }
    let (kk, nn) = (k as i128, n as i128);
    let v = match ell {
        2 => ell2(kk, nn),
        3 => ell3(kk, nn),
        4 => ell4(kk, nn),
        _ => ell5(kk, nn).ok_or(Error::OutOfFormulaRange { n, ell, k })?,
    };
    let v = u128::try_from(v).expect("few-ones counts are non-negative");
    Ok(BigUint::from(v))
}

/// `a_{3k+1}` of the `ell = 5` family.
pub fn fewones_a_3k1(k: usize) -> BigUint {
    BigUint::from(a5_3k1(k as i128) as u128)
}

/// Index of the largest `ell = 5` term (defined for `k >= 3`).
pub fn fewones_max_index(k: usize) -> Option<usize> {
    match k {
        0..=2 => None,
        _ if k % 2 == 1 => Some((5 * k + 5) / 2),
        _ => Some((5 * k + 4) / 2),
    }
}

/// Largest `ell = 5` term (defined for `k >= 2`).
pub fn fewones_max_value(k: usize) -> Option<BigUint> {
    if k < 2 {
        return None;
    }
    let k = k as i128;
    let num = if k % 2 == 1 {
        115 * k.pow(4) - 184 * k.pow(3) - 22 * k * k - 104 * k + 387
    } else {
        115 * k.pow(4) - 184 * k.pow(3) - 52 * k * k + 16 * k + 192
    };
    Some(BigUint::from(exact(num, 192) as u128))
}

/// Truncated-`ell` approximation to the `E(R_{n,0} S_n)` numerator:
///
/// ```text
/// sum_{ell=2}^{L} (ell-1) sum_{k>=2} k { f_{ell,k+1} - f_{ell-1,k+1} - f_{ell,k} + f_{ell-1,k} }
/// ```
///
/// with `f_{1,k} = 0`. The bracket counts strings with exactly `ell - 1`
/// 1s whose longest 0-run is exactly `k`.
pub fn rs_numerator_approx(order: usize, big_l: usize) -> Result<TruncatedSeries> {
    if big_l < 2 {
        return Err(Error::InvalidArgument(format!("L must be at least 2 (got {big_l})")));
    }
    let few = FewOnes::new(order);
    let f = |ell: usize, k: usize, n: usize| -> BigInt {
        if ell <= 1 {
            BigInt::zero()
        } else {
            BigInt::from(few.value(n, ell, k))
        }
    };
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        for ell in 2..=big_l {
            // Beyond k = n the bracket vanishes: no run can reach k + 1 > n.
            for k in 2..=n {
                let bracket = f(ell, k + 1, n) - f(ell - 1, k + 1, n) - f(ell, k, n) + f(ell - 1, k, n);
                *c += bracket * (k * (ell - 1));
            }
        }
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Exact `sum y (n - x) F~_n(x, y)` through `z^order`, for comparison.
pub fn rs_numerator_exact(order: usize) -> TruncatedSeries {
    let ns: Vec<usize> = (0..=order).collect();
    let coeffs = joint_tables(&ns, Variant::Solus)
        .iter()
        .map(|t| t.pair_sums().xy)
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|c| u64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn closed_forms_match_counts() {
        let few = FewOnes::new(47);
        for k in 2..=9 {
            for ell in 2..=5 {
                for n in 1..=ell * k + 2 {
                    match fewones_closed_form(n, ell, k) {
                        Ok(v) => assert_eq!(v, few.count(n, ell, k), "ell={ell} k={k} n={n}"),
                        Err(Error::OutOfFormulaRange { .. }) => {
                            assert!(ell == 5 && (2 * k + 2..=3 * k).contains(&n))
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn k7_sequences() {
        let few = FewOnes::new(48);
        let closed = |ell: usize| -> Vec<u64> {
            (1..ell * 7).map(|n| u64::try_from(few.value(n, ell, 7)).unwrap()).collect()
        };
        assert_eq!(closed(2), [2, 3, 4, 5, 6, 7, 7, 6, 5, 4, 3, 2, 1]);
        assert_eq!(
            closed(3),
            [2, 3, 5, 8, 12, 17, 22, 27, 32, 35, 36, 35, 32, 27, 21, 15, 10, 6, 3, 1]
        );
        assert_eq!(closed(4)[14], 197);
        assert_eq!(ints(&few.sequence(6, 7, 12)), [2, 3, 5, 8, 13, 21, 33, 52, 83, 132, 209, 327]);
        assert_eq!(few.count(29, 7, 7), BigUint::from(35052u32));
    }

    #[test]
    fn ell5_extremes() {
        let few = FewOnes::new(45);
        for k in 2..=9 {
            let seq = few.sequence(5, k, 5 * k - 1);
            let max = seq.iter().max().unwrap();
            assert_eq!(Some(max.clone()), fewones_max_value(k), "k={k}");
            if let Some(i) = fewones_max_index(k) {
                assert_eq!(&seq[i - 1], max, "k={k}");
            }
            assert_eq!(fewones_a_3k1(k), seq[3 * k]);
        }
        assert_eq!(fewones_max_index(7), Some(20));
        assert_eq!(fewones_max_value(7), Some(BigUint::from(1102u32)));
    }

    #[test]
    fn numerator_approximation() {
        let want: Vec<BigInt> = [0, 0, 2, 7, 18, 43, 94, 196, 392, 764, 1454]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(rs_numerator_exact(10).coeffs(), want.as_slice());
        let l5 = rs_numerator_approx(10, 5).unwrap();
        assert_eq!(&l5.coeffs()[..10], &want[..10]);
        // Length 10 admits five isolated 1s with a 00 block: 4 strings of weight 5 * 2.
        assert_eq!(l5.coeff(10), BigInt::from(1454 - 40));
        let l6 = rs_numerator_approx(12, 6).unwrap();
        let exact = rs_numerator_exact(12);
        assert_eq!(&l6.coeffs()[..12], &exact.coeffs()[..12]);
        assert_ne!(l6.coeff(12), exact.coeff(12));
    }

    #[test]
    fn fewer_ell_terms_are_smaller() {
        let lo = rs_numerator_approx(8, 2).unwrap();
        let hi = rs_numerator_approx(8, 5).unwrap();
        for n in 0..=8 {
            assert!(lo.coeff(n) <= hi.coeff(n));
        }
    }

    #[test]
    fn argument_checks() {
        assert!(matches!(fewones_closed_form(3, 6, 7), Err(Error::InvalidArgument(_))));
        assert!(matches!(fewones_closed_form(3, 3, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(fewones_closed_form(0, 3, 4), Err(Error::OutOfFormulaRange { .. })));
        assert!(rs_numerator_approx(5, 1).is_err());
    }
}
