//! Joint moment `E(R_{n,0} R_{n,1})` and the correlation of the two
//! longest runs.
//!
//! With `f_{i,j}(z)` counting strings whose longest 1-run is below `i` and
//! longest 0-run below `j`, the bracket
//! `f_{i+1,j+1} - f_{i,j+1} - f_{i+1,j} + f_{i,j}` counts strings with
//! `R_1 = i` and `R_0 = j` exactly, so
//!
//! ```text
//! E(R_0 R_1) = [z^n] sum_{i,j>=1} i j { f_{i+1,j+1} - f_{i,j+1} - f_{i+1,j} + f_{i,j} } / d_n
//! ```
//!
//! Runs never exceed `n`, so `i, j <= n + 1` is exact through `z^n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::catalog::{count_gf, cross_gf, cross_min_valid, run_family};
use crate::error::{Error, Result};
use crate::moments::{k_bound, moment_numerators};
use crate::oracle::{enumerate_joint, StringClass};
use crate::precision::Real;
use crate::series::TruncatedSeries;
use crate::stats::{Correlation, PairSums};

/// Expansion of `f_{i,j}` through `z^order`.
///
/// Below the catalogue's valid range (multus with `i = 1`, i.e. no 1s at
/// all) the series is counted directly: only the all-0s string qualifies,
/// giving `(1 - z^j) / (1 - z)`.
pub fn cross_series(class: StringClass, i: usize, j: usize, order: usize) -> Result<TruncatedSeries> {
    let (imin, jmin) = cross_min_valid(class)?;
    if i >= imin && j >= jmin {
        return cross_gf(class, i, j)?.expand(order);
    }
    match class {
        StringClass::Multus if i == 1 && j >= 1 => {
            let coeffs = (0..=order)
                .map(|n| BigInt::from((n < j) as u32))
                .collect();
            Ok(TruncatedSeries::from_coeffs(coeffs))
        }
        _ => Err(Error::InvalidArgument(format!(
            "f_{{{i},{j}}} is not available for {class} strings"
        ))),
    }
}

/// Numerator series of `E(R_0 R_1)` with the double sum cut at `i, j <= k_max`.
pub fn cross_numerator_bounded(
    class: StringClass,
    order: usize,
    k_max: usize,
) -> Result<TruncatedSeries> {
    // f_{i,j} for 1 <= i, j <= k_max + 1, row-major.
    let side = k_max + 1;
    let grid: Vec<TruncatedSeries> = (0..side * side)
        .into_par_iter()
        .map(|idx| cross_series(class, idx / side + 1, idx % side + 1, order))
        .collect::<Result<_>>()?;
    let f = |i: usize, j: usize| &grid[(i - 1) * side + (j - 1)];
    let rows: Vec<TruncatedSeries> = (1..=k_max)
        .into_par_iter()
        .map(|i| {
            let mut acc = TruncatedSeries::zero(order);
            for j in 1..=k_max {
                let cell = &(&(f(i + 1, j + 1) - f(i, j + 1)) - f(i + 1, j)) + f(i, j);
                acc.add_scaled_assign(&BigInt::from(i * j), &cell);
            }
            acc
        })
        .collect();
    let mut total = TruncatedSeries::zero(order);
    for r in &rows {
        total.add_scaled_assign(&BigInt::one(), r);
    }
    Ok(total)
}

/// Numerator series of `E(R_0 R_1)` through `z^order`.
pub fn cross_numerator(class: StringClass, order: usize) -> Result<TruncatedSeries> {
    cross_numerator_bounded(class, order, order + 1)
}

fn ensemble_size(class: StringClass, n: usize) -> Result<BigInt> {
    let d = count_gf(class).coefficient(n)?;
    if d.is_zero() {
        return Err(Error::EmptyEnsemble { class, n });
    }
    Ok(d)
}

pub fn cross_moment(n: usize, class: StringClass) -> Result<BigRational> {
    let num = cross_numerator(class, n)?;
    Ok(BigRational::new(num.coeff(n), ensemble_size(class, n)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossMomentReport {
    pub n: usize,
    pub class: StringClass,
    pub e_r0r1: BigRational,
    pub mean_r0: BigRational,
    pub mean_r1: BigRational,
    pub var_r0: BigRational,
    pub var_r1: BigRational,
    pub covariance: BigRational,
    pub rho: Real,
}

impl CrossMomentReport {
    pub fn rho_decimal(&self, digits: u32) -> String {
        self.rho.to_decimal(digits)
    }
}

pub fn rho_rr(n: usize, class: StringClass) -> Result<CrossMomentReport> {
    Ok(rho_rr_many(&[n], class)?.remove(0))
}

/// [`rho_rr`] for several lengths, sharing every series expansion.
pub fn rho_rr_many(ns: &[usize], class: StringClass) -> Result<Vec<CrossMomentReport>> {
    let Some(&order) = ns.iter().max() else {
        return Ok(Vec::new());
    };
    let cross = cross_numerator(class, order)?;
    let zeros = moment_numerators(&run_family(class, 0)?, &[1, 2], order, k_bound(order))?;
    let ones = moment_numerators(&run_family(class, 1)?, &[1, 2], order, k_bound(order))?;
    ns.iter()
        .map(|&n| {
            let d = ensemble_size(class, n)?;
            let q = |s: &TruncatedSeries| BigRational::new(s.coeff(n), d.clone());
            let (m0, m1) = (q(&zeros[0]), q(&ones[0]));
            let e_r0r1 = q(&cross);
            let corr = Correlation {
                covariance: &e_r0r1 - &m0 * &m1,
                var_x: q(&zeros[1]) - &m0 * &m0,
                var_y: q(&ones[1]) - &m1 * &m1,
            };
            let rho = corr.rho().ok_or(Error::DegenerateVariance(n))?;
            Ok(CrossMomentReport {
                n,
                class,
                e_r0r1,
                mean_r0: m0,
                mean_r1: m1,
                var_r0: corr.var_x,
                var_r1: corr.var_y,
                covariance: corr.covariance,
                rho,
            })
        })
        .collect()
}

/// `rho(R_0, R_1)` by exhaustive enumeration, for any class.
pub fn rho_rr_oracle(n: usize, class: StringClass) -> Result<Real> {
    let dist = enumerate_joint(n, class)?;
    let mut sums = PairSums::default();
    for (st, &c) in &dist.counts {
        let c = BigInt::from(c);
        let (x, y) = (BigInt::from(st.r0), BigInt::from(st.r1));
        sums.total += &c;
        sums.xx += &x * &x * &c;
        sums.yy += &y * &y * &c;
        sums.xy += &x * &y * &c;
        sums.x += x * &c;
        sums.y += y * &c;
    }
    if sums.total.is_zero() {
        return Err(Error::EmptyEnsemble { class, n });
    }
    sums.correlation().rho().ok_or(Error::DegenerateVariance(n))
}
