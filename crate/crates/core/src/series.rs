//! Truncated power series and rational generating functions over exact
//! integers.
//!
//! A [`TruncatedSeries`] of order `N` carries the coefficients of
//! `z^0..=z^N`. Binary operations truncate to the smaller of the two orders.
//! A [`RationalGF`] is a ratio of two dense integer polynomials whose
//! denominator has a nonzero constant term; [`RationalGF::expand`] unrolls
//! the linear recurrence induced by the denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    /// The constant series `1` of the given order.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds a series from explicit coefficients; the order is `len - 1`.
    ///
    /// An empty vector is treated as the order-0 zero series.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Views a polynomial as a series of the given order (padding or cutting).
    pub fn from_poly(poly: &Poly, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in poly.coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[i] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `z^i`; zero beyond the order.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `self += factor * other`, truncated to the smaller order.
    pub fn add_scaled_assign(&mut self, factor: &BigInt, other: &TruncatedSeries) {
        let order = self.order().min(other.order());
        self.coeffs.truncate(order + 1);
        if factor.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += factor * b;
            }
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

/// Coefficientwise sum truncated to the smaller order.
pub fn series_add(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order().min(b.order());
    TruncatedSeries {
        coeffs: a.coeffs[..=order]
            .iter()
            .zip(&b.coeffs[..=order])
            .map(|(x, y)| x + y)
            .collect(),
    }
}

/// Cauchy product truncated to the smaller order.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order().min(b.order());
    let mut out = TruncatedSeries::zero(order);
    for (i, x) in a.coeffs[..=order].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs[..=order - i].iter().enumerate() {
            if !y.is_zero() {
                out.coeffs[i + j] += x * y;
            }
        }
    }
    out
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        series_add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order]
                .iter()
                .zip(&rhs.coeffs[..=order])
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        series_mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)?;
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Dense integer polynomial with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sum of `coef * z^exp` terms; repeated exponents accumulate.
    ///
    /// Panics on a negative exponent.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let max = terms.iter().map(|&(_, e)| e).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); (max.max(0) + 1) as usize];
        for &(c, e) in terms {
            assert!(e >= 0, "negative exponent {e} in polynomial term");
            coeffs[e as usize] += c;
        }
        Self::new(coeffs)
    }

    pub fn monomial(coef: i64, exp: usize) -> Self {
        Self::from_terms(&[(coef, exp as i64)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Integer polynomial evaluation (Horner).
    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * z + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write_terms(f, &self.coeffs)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let mag = c.abs();
        match (i, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "z")?,
            (1, false) => write!(f, "{mag}z")?,
            (_, true) => write!(f, "z^{i}")?,
            (_, false) => write!(f, "{mag}z^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Ratio of two integer polynomials, `numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGF {
    numerator: Poly,
    denominator: Poly,
}

impl RationalGF {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.coeff(0).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "denominator {denominator} vanishes at z = 0"
            )));
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    /// Panicking constructor for hard-coded catalog entries.
    pub(crate) fn fixed(numerator: Poly, denominator: Poly) -> Self {
        Self::new(numerator, denominator).expect("catalog denominator must not vanish at 0")
    }

    pub fn zero() -> Self {
        Self::fixed(Poly::zero(), Poly::one())
    }

    pub fn polynomial(p: Poly) -> Self {
        Self::fixed(p, Poly::one())
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Exact coefficients `c_0..=c_order` of the power-series expansion.
    ///
    /// Requires the denominator constant term to be `±1`; the expansion runs
    /// the recurrence `d_0 c_n = p_n - sum_{m>=1} d_m c_{n-m}` over the
    /// nonzero denominator terms only.
    pub fn expand(&self, order: usize) -> Result<TruncatedSeries> {
        let d0 = self.denominator.coeff(0);
        let negate = if d0.is_one() {
            false
        } else if (-&d0).is_one() {
            true
        } else {
            return Err(Error::NonUnitConstantTerm(d0.to_string()));
        };
        let taps: Vec<(usize, &BigInt)> = self
            .denominator
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut c = self.numerator.coeff(n);
            for &(m, d) in &taps {
                if m > n {
                    break;
                }
                let prev = &out[n - m];
                if prev.is_zero() {
                    continue;
                }
                match unit_sign(d) {
                    Some(true) => c -= prev,
                    Some(false) => c += prev,
                    None => c -= d * prev,
                }
            }
            if negate {
                c = -c;
            }
            out.push(c);
        }
        Ok(TruncatedSeries::from_coeffs(out))
    }

    /// Coefficient of `z^n`.
    pub fn coefficient(&self, n: usize) -> Result<BigInt> {
        Ok(self.expand(n)?.coeffs[n].clone())
    }
}

fn unit_sign(d: &BigInt) -> Option<bool> {
    if d.is_one() {
        Some(true)
    } else if (-d).is_one() {
        Some(false)
    } else {
        None
    }
}

/// Free-function form of [`RationalGF::expand`].
pub fn gf_expand(gf: &RationalGF, order: usize) -> Result<TruncatedSeries> {
    gf.expand(order)
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn add_is_coefficientwise() {
        let a = TruncatedSeries::from_i64s(&[1, 2]);
        let b = TruncatedSeries::from_i64s(&[3, 4]);
        assert_eq!(ints(&(&a + &b)), vec![4, 6]);
        assert_eq!(&a + &TruncatedSeries::zero(1), a);
    }

    #[test]
    fn add_truncates_to_min_order() {
        let a = TruncatedSeries::from_i64s(&[1, 2, 3, 4]);
        let b = TruncatedSeries::from_i64s(&[1, 1]);
        let s = &a + &b;
        assert_eq!(s.order(), 1);
        assert_eq!(ints(&s), vec![2, 3]);
    }

    #[test]
    fn mul_cauchy_product() {
        let a = TruncatedSeries::from_i64s(&[1, 1, 0]);
        assert_eq!(ints(&(&a * &a)), vec![1, 2, 1]);
        assert_eq!(&a * &TruncatedSeries::one(2), a);
    }

    #[test]
    fn expand_solus_counts() {
        let gf = RationalGF::new(Poly::from_i64s(&[1, 1]), Poly::from_i64s(&[1, -1, -1])).unwrap();
        assert_eq!(ints(&gf.expand(7).unwrap()), vec![1, 2, 3, 5, 8, 13, 21, 34]);
    }

    #[test]
    fn multiply_back_recovers_numerator() {
        let num = Poly::from_i64s(&[1, 1]);
        let den = Poly::from_i64s(&[1, -1, -1]);
        let gf = RationalGF::new(num.clone(), den.clone()).unwrap();
        let back = &gf.expand(6).unwrap() * &TruncatedSeries::from_poly(&den, 6);
        assert_eq!(back, TruncatedSeries::from_poly(&num, 6));
    }

    #[test]
    fn expand_geometric_and_negative_unit() {
        let gf = RationalGF::new(Poly::one(), Poly::from_i64s(&[1, -2])).unwrap();
        assert_eq!(ints(&gf.expand(5).unwrap()), vec![1, 2, 4, 8, 16, 32]);
        // 1 / (-1 + z) = -(1 + z + z^2 + ...)
        let gf = RationalGF::new(Poly::one(), Poly::from_i64s(&[-1, 1])).unwrap();
        assert_eq!(ints(&gf.expand(3).unwrap()), vec![-1, -1, -1, -1]);
    }

    #[test]
    fn non_unit_constant_term_is_rejected() {
        let gf = RationalGF::new(Poly::one(), Poly::from_i64s(&[2, -1])).unwrap();
        assert!(matches!(gf.expand(3), Err(Error::NonUnitConstantTerm(_))));
        assert!(RationalGF::new(Poly::one(), Poly::from_i64s(&[0, 1])).is_err());
    }

    #[test]
    fn from_terms_accumulates_repeated_exponents() {
        let p = Poly::from_terms(&[(1, 2), (1, 2), (-3, 0)]);
        assert_eq!(p, Poly::from_i64s(&[-3, 0, 2]));
        assert_eq!(Poly::from_terms(&[(1, 3), (-1, 3)]), Poly::zero());
    }

    #[test]
    fn display() {
        let p = Poly::from_i64s(&[1, -1, 0, 2]);
        assert_eq!(p.to_string(), "1 - z + 2z^3");
        let s = TruncatedSeries::from_i64s(&[0, 1, 4]);
        assert_eq!(s.to_string(), "z + 4z^2 + O(z^3)");
    }
}
