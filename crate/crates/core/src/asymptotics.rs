//! Growth constants, conjectured run asymptotes and bitsum density limits.
//!
//! Each ensemble grows like `beta^n`, where `1/beta` is the smallest
//! positive root of its count denominator. The conjectured longest-run
//! asymptotes are
//!
//! ```text
//! E(R) ~ ln(n)/ln(beta) - (c - gamma/ln(beta)),   V(R) ~ 1/12 + pi^2 / (6 ln(beta)^2)
//! ```
//!
//! with a class- and bit-dependent offset `c`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::catalog::{count_gf, run_family};
use crate::error::{Error, Result};
use crate::moments::{k_bound, moment_numerators};
use crate::oracle::StringClass;
use crate::precision::{euler_gamma, pi, Real};
use crate::series::Poly;

/// Rough estimates for solus strings: mean and variance density of 1s.
pub const SOLUS_DENSITY_ESTIMATES: (f64, f64) = (0.276, 0.089);
/// Rough estimates for multus strings: mean and variance density of 1s.
pub const MULTUS_DENSITY_ESTIMATES: (f64, f64) = (0.588, 0.281);

#[derive(Clone, Debug)]
pub struct GrowthConstant {
    pub class: StringClass,
    /// Closed-form (radical) value.
    pub value: Real,
    /// Independent value from Newton iteration on the defining polynomial.
    pub root: Real,
    /// Count denominator; `1/value` is its smallest positive root.
    pub defining_polynomial: Poly,
}

impl GrowthConstant {
    /// `|P(1/value)|`.
    pub fn residual(&self) -> Real {
        let one = Real::from_int(1);
        eval(&self.defining_polynomial, &(&one / &self.value)).abs()
    }
}

fn eval(p: &Poly, x: &Real) -> Real {
    p.coeffs()
        .iter()
        .rev()
        .fold(Real::zero(), |acc, c| &acc * x + Real::from_bigint(c))
}

fn derivative(p: &Poly) -> Poly {
    let c: Vec<BigInt> = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    Poly::new(c)
}

/// Smallest positive root of `p` on `(0, 1]`, bracketed in `f64` and
/// polished by Newton steps at full precision.
fn smallest_positive_root(p: &Poly) -> Real {
    let f = |x: f64| -> f64 {
        p.coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_string().parse::<f64>().unwrap())
    };
    let steps = 4096;
    let mut lo = 0.0;
    let mut guess = None;
    for i in 1..=steps {
        let hi = i as f64 / steps as f64;
        if f(lo).signum() != f(hi).signum() {
            guess = Some((lo + hi) / 2.0);
            break;
        }
        lo = hi;
    }
    let mut x = Real::from_f64(guess.expect("count denominator has a root in (0, 1]"));
    let dp = derivative(p);
    for _ in 0..12 {
        x = &x - &(&eval(p, &x) / &eval(&dp, &x));
    }
    x
}

/// `(1/3) [a + cbrt((b + 3 sqrt(d))/2) + cbrt((b - 3 sqrt(d))/2)]`.
fn cardano(a: i64, b: i64, d: i64) -> Real {
    let s = Real::from_int(d).sqrt() * Real::from_int(3);
    let two = Real::from_int(2);
    let plus = (Real::from_int(b) + s.clone()) / two.clone();
    let minus = (Real::from_int(b) - s) / two;
    (Real::from_int(a) + plus.cbrt() + minus.cbrt()) / Real::from_int(3)
}

fn closed_form(class: StringClass) -> Real {
    match class {
        StringClass::Unconstrained => Real::from_int(2),
        StringClass::Solus | StringClass::Bimultus => {
            (Real::from_int(1) + Real::from_int(5).sqrt()) / Real::from_int(2)
        }
        StringClass::Multus => cardano(2, 25, 69),
        StringClass::Persolus => cardano(1, 29, 93),
    }
}

pub fn growth_constant(class: StringClass) -> GrowthConstant {
    let poly = count_gf(class).denominator().clone();
    let root = &Real::from_int(1) / &smallest_positive_root(&poly);
    GrowthConstant {
        class,
        value: closed_form(class),
        root,
        defining_polynomial: poly,
    }
}

/// `1/12 + pi^2 / (6 ln(beta)^2)`.
pub fn variance_limit(class: StringClass, bit: u8) -> Result<Real> {
    run_family(class, bit)?;
    let l = growth_constant(class).value.ln();
    let p = pi();
    Ok(Real::from_ratio(&BigInt::one(), &BigInt::from(12))
        + &(&p * &p) / &(&(&l * &l) * &Real::from_int(6)))
}

/// Offset `c` in the conjectured mean, as a ratio `(num, den)`.
fn mean_offset(class: StringClass, bit: u8) -> (i64, i64) {
    match (class, bit) {
        (StringClass::Unconstrained, _) => (3, 2),
        (StringClass::Solus, _) => (2, 1),
        (StringClass::Multus, 1) => (3, 2),
        _ => (5, 2),
    }
}

/// `ln(n)/ln(beta) - (c - gamma/ln(beta))`.
pub fn mean_asymptote(n: usize, class: StringClass, bit: u8) -> Result<Real> {
    run_family(class, bit)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("asymptote needs n >= 2 (got {n})")));
    }
    let l = growth_constant(class).value.ln();
    let (num, den) = mean_offset(class, bit);
    let c = Real::from_ratio(&BigInt::from(num), &BigInt::from(den));
    let ln_n = Real::from_int(n as i64).ln();
    Ok(&ln_n / &l - (c - &euler_gamma() / &l))
}

/// Limits of `E(S_n)/n` and `V(S_n)/n`.
pub fn density_limits(class: StringClass) -> Result<(Real, Real)> {
    let r = |v: i64| Real::from_int(v);
    match class {
        StringClass::Bimultus => Ok((
            Real::from_ratio(&BigInt::one(), &BigInt::from(2)),
            (r(5) + r(3) * r(5).sqrt()) / r(40),
        )),
        StringClass::Persolus => {
            let s = r(93).sqrt();
            let mean = (r(1)
                - ((r(31) + r(3) * s.clone()) / r(1922)).cbrt()
                - ((r(31) - r(3) * s.clone()) / r(1922)).cbrt())
                / r(3);
            let var = (r(93) / r(2)).cbrt()
                * ((r(8649) + r(457) * s.clone()).cbrt() + (r(8649) - r(457) * s).cbrt())
                / r(2883);
            Ok((mean, var))
        }
        other => Err(Error::UnsupportedClass(other)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoteReport {
    pub n: usize,
    pub class: StringClass,
    pub bit: u8,
    pub predicted_mean: Real,
    pub predicted_variance: Real,
    pub exact_mean: BigRational,
    pub exact_variance: BigRational,
}

impl AsymptoteReport {
    pub fn mean_gap(&self) -> Real {
        Real::from_rational(&self.exact_mean) - self.predicted_mean.clone()
    }

    pub fn variance_gap(&self) -> Real {
        Real::from_rational(&self.exact_variance) - self.predicted_variance.clone()
    }
}

/// Exact moments next to the conjectured asymptotes. Report only.
pub fn finite_vs_asymptote(ns: &[usize], class: StringClass, bit: u8) -> Result<Vec<AsymptoteReport>> {
    let Some(&order) = ns.iter().max() else {
        return Ok(Vec::new());
    };
    let family = run_family(class, bit)?;
    let nums = moment_numerators(&family, &[1, 2], order, k_bound(order))?;
    let d = count_gf(class).expand(order)?;
    let variance = variance_limit(class, bit)?;
    ns.iter()
        .map(|&n| {
            let dn = d.coeff(n);
            if !dn.is_positive() {
                return Err(Error::EmptyEnsemble { class, n });
            }
            let mean = BigRational::new(nums[0].coeff(n), dn.clone());
            let second = BigRational::new(nums[1].coeff(n), dn);
            Ok(AsymptoteReport {
                n,
                class,
                bit,
                predicted_mean: mean_asymptote(n, class, bit)?,
                predicted_variance: variance.clone(),
                exact_variance: &second - &mean * &mean,
                exact_mean: mean,
            })
        })
        .collect()
}

/// A fluctuation band: the exact variance at `n` should sit within
/// `half_width` of the asymptote.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceBand {
    pub class: StringClass,
    pub bit: u8,
    pub n: usize,
    pub half_width: f64,
}

pub fn default_variance_bands() -> Vec<VarianceBand> {
    vec![
        VarianceBand {
            class: StringClass::Unconstrained,
            bit: 1,
            n: 1000,
            half_width: 0.1,
        },
        VarianceBand {
            class: StringClass::Solus,
            bit: 0,
            n: 500,
            half_width: 0.2,
        },
    ]
}

impl VarianceBand {
    /// The report at `n` and whether its variance gap fits the band.
    pub fn check(&self) -> Result<(AsymptoteReport, bool)> {
        let rep = finite_vs_asymptote(&[self.n], self.class, self.bit)?.remove(0);
        let ok = rep.variance_gap().abs() <= Real::from_f64(self.half_width);
        Ok((rep, ok))
    }
}
