//! Moments of the longest run via tail sums of `H - H_k`.
//!
//! For a run family `(G, H, H_k)` and weights `w_m(k) = k^m - (k-1)^m`,
//!
//! ```text
//! E(R^m) = [z^n] { G + sum_{k>=1} w_m(k) (H - H_k) } / d_n
//! ```
//!
//! since `sum_{k=1}^{r} w_m(k) = r^m` and `[z^n](H - H_k)` counts strings
//! whose longest run reaches `k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::catalog::{count_gf, run_family, RunFamily};
use crate::error::{Error, Result};
use crate::oracle::StringClass;
use crate::series::TruncatedSeries;

/// `k^m - (k-1)^m` for `m` in `1..=4`.
pub fn moment_weight(m: u32, k: u64) -> Result<BigInt> {
    if !(1..=4).contains(&m) {
        return Err(Error::UnsupportedMoment(m));
    }
    let k = BigInt::from(k);
    let prev = &k - 1u32;
    Ok(k.pow(m) - prev.pow(m))
}

/// Upper bound of the `k` sum that is exact through `z^order`.
///
/// `[z^n](H - H_k)` vanishes once `k > n`; two extra terms guard the
/// families whose closed forms carry shifted exponents.
pub fn k_bound(order: usize) -> usize {
    order + 2
}

/// Numerator series `G + sum_k w_m(k) (H - H_k)` through `z^order`.
pub fn moment_numerator(family: &RunFamily, m: u32, order: usize) -> Result<TruncatedSeries> {
    Ok(moment_numerators(family, &[m], order, k_bound(order))?.remove(0))
}

/// Several numerators at once with an explicit `k` bound; the `H_k`
/// expansions are shared across the requested orders `ms`.
pub fn moment_numerators(
    family: &RunFamily,
    ms: &[u32],
    order: usize,
    k_max: usize,
) -> Result<Vec<TruncatedSeries>> {
    for &m in ms {
        moment_weight(m, 1)?;
    }
    let h = family.h.expand(order)?;
    let tails = (1..=k_max)
        .into_par_iter()
        .map(|k| -> Result<Vec<TruncatedSeries>> {
            let diff = &h - &family.hk(k).expand(order)?;
            ms.iter()
                .map(|&m| Ok(diff.scale(&moment_weight(m, k as u64)?)))
                .collect()
        })
        .try_reduce(
            || vec![TruncatedSeries::zero(order); ms.len()],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(&part) {
                    a.add_scaled_assign(&BigInt::from(1), p);
                }
                Ok(acc)
            },
        )?;
    let g = family.g.expand(order)?;
    Ok(tails.iter().map(|t| &g + t).collect())
}

fn ensemble_size(class: StringClass, n: usize) -> Result<BigInt> {
    let d = count_gf(class).coefficient(n)?;
    if d.is_zero() {
        return Err(Error::EmptyEnsemble { class, n });
    }
    Ok(d)
}

/// `E(R^m_{n,bit})` over `class`, exact.
pub fn run_moment(n: usize, class: StringClass, bit: u8, m: u32) -> Result<BigRational> {
    let family = run_family(class, bit)?;
    let d = ensemble_size(class, n)?;
    let num = moment_numerator(&family, m, n)?;
    Ok(BigRational::new(num.coeff(n), d))
}

/// Mean, second moment and variance of the longest run (optionally the
/// third and fourth moments too).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub n: usize,
    pub class: StringClass,
    pub bit: u8,
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
    pub higher: Option<[BigRational; 2]>,
}

pub fn run_variance_report(n: usize, class: StringClass, bit: u8) -> Result<MomentReport> {
    moment_report(n, class, bit, false)
}

/// [`run_variance_report`], optionally including `E(R^3)` and `E(R^4)`.
pub fn moment_report(
    n: usize,
    class: StringClass,
    bit: u8,
    with_higher: bool,
) -> Result<MomentReport> {
    let family = run_family(class, bit)?;
    let d = ensemble_size(class, n)?;
    let ms: &[u32] = if with_higher { &[1, 2, 3, 4] } else { &[1, 2] };
    let nums = moment_numerators(&family, ms, n, k_bound(n))?;
    let q: Vec<BigRational> = nums
        .iter()
        .map(|s| BigRational::new(s.coeff(n), d.clone()))
        .collect();
    let mean = q[0].clone();
    let second_moment = q[1].clone();
    let variance = &second_moment - &mean * &mean;
    Ok(MomentReport {
        n,
        class,
        bit,
        mean,
        second_moment,
        variance,
        higher: with_higher.then(|| [q[2].clone(), q[3].clone()]),
    })
}
