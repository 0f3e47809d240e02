//! Fixed-point decimal reals backed by big integers.
//!
//! A [`Real`] stores `round(x * 10^SCALE)` for [`SCALE`] = 60 fractional
//! digits. That covers every constant rendered here (10 printed digits) and
//! every correlation (6 printed digits) with wide margins. Transcendental
//! constants are computed from series, not copied from tables.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional decimal digits carried by every [`Real`].
pub const SCALE: u32 = 60;

fn unit() -> BigInt {
    BigInt::from(10).pow(SCALE)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Real {
    mantissa: BigInt,
}

impl Real {
    pub fn zero() -> Self {
        Self {
            mantissa: BigInt::zero(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self {
            mantissa: BigInt::from(v) * unit(),
        }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self {
            mantissa: v * unit(),
        }
    }

    /// Nearest fixed-point value to `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "division by zero");
        Self {
            mantissa: div_round(&(num * unit()), den),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_ratio(q.numer(), q.denom())
    }

    /// Exact value of a finite `f64`, rounded to the working scale.
    pub fn from_f64(v: f64) -> Self {
        let q = BigRational::from_float(v).expect("finite float");
        Self::from_rational(&q)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        Self {
            mantissa: (&self.mantissa * unit()).sqrt(),
        }
    }

    /// Real cube root (defined for negative arguments).
    pub fn cbrt(&self) -> Self {
        let scaled = &self.mantissa * unit() * unit();
        let root = scaled.abs().cbrt();
        Self {
            mantissa: if self.is_negative() { -root } else { root },
        }
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Self {
        assert!(
            self.mantissa.is_positive(),
            "logarithm of a non-positive value"
        );
        // Bring the argument into [1/2, 1) by powers of two, then
        // ln(m) = 2 atanh((m - 1) / (m + 1)).
        let one = unit();
        let half = &one / 2;
        let mut m = self.mantissa.clone();
        let mut shift: i64 = 0;
        while m >= one {
            m = div_round(&m, &BigInt::from(2));
            shift += 1;
        }
        while m < half {
            m *= 2;
            shift -= 1;
        }
        let t = Real::from_ratio(&(&m - &one), &(&m + &one));
        let ln_m = atanh(&t) * Real::from_int(2);
        ln_m + ln2() * Real::from_int(shift)
    }

    pub fn powi(&self, e: u32) -> Self {
        (0..e).fold(Real::from_int(1), |acc, _| &acc * self)
    }

    pub fn to_f64(&self) -> f64 {
        let q = BigRational::new(self.mantissa.clone(), unit());
        q.to_f64().unwrap_or(f64::NAN)
    }

    /// Round-half-even rendering with exactly `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        assert!(digits <= SCALE, "cannot render beyond the working scale");
        let step = BigInt::from(10).pow(SCALE - digits);
        render_scaled(&div_round_half_even(&self.mantissa, &step), digits)
    }

    /// Rendering with the digits beyond `digits` dropped (toward zero).
    pub fn to_decimal_truncated(&self, digits: u32) -> String {
        assert!(digits <= SCALE, "cannot render beyond the working scale");
        let step = BigInt::from(10).pow(SCALE - digits);
        render_scaled(&(&self.mantissa / &step), digits)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32).unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        Real {
            mantissa: self.mantissa + rhs.mantissa,
        }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        Real {
            mantissa: self.mantissa - rhs.mantissa,
        }
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real {
            mantissa: &self.mantissa + &rhs.mantissa,
        }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real {
            mantissa: &self.mantissa - &rhs.mantissa,
        }
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        &self * &rhs
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real {
            mantissa: div_round(&(&self.mantissa * &rhs.mantissa), &unit()),
        }
    }
}

impl Div for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        &self / &rhs
    }
}

impl Div for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        Real::from_ratio(&self.mantissa, &rhs.mantissa)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            mantissa: -self.mantissa,
        }
    }
}

/// Nearest-integer division (ties away from zero).
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r): (BigInt, BigInt) = num.div_rem(den);
    if (Signed::abs(&r) * 2u32).cmp(&den.abs()) != Ordering::Less {
        if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Nearest-integer division with ties to even.
pub(crate) fn div_round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r): (BigInt, BigInt) = num.div_mod_floor(den);
    let den = den.abs();
    let twice: BigInt = Signed::abs(&r) * 2u32;
    match twice.cmp(&den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Renders `v / 10^digits` in plain decimal notation.
pub(crate) fn render_scaled(v: &BigInt, digits: u32) -> String {
    let neg = v.is_negative();
    let s = v.abs().to_string();
    let digits = digits as usize;
    let body = if digits == 0 {
        s
    } else if s.len() <= digits {
        format!("0.{}{}", "0".repeat(digits - s.len()), s)
    } else {
        let (int, frac) = s.split_at(s.len() - digits);
        format!("{int}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact round-half-even decimal rendering of a rational.
pub fn render_rational(q: &BigRational, digits: u32) -> String {
    let scaled = q.numer() * BigInt::from(10).pow(digits);
    render_scaled(&div_round_half_even(&scaled, q.denom()), digits)
}

fn atanh(t: &Real) -> Real {
    // t + t^3/3 + t^5/5 + ...
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Real::zero();
    let mut k = 1i64;
    while !power.mantissa.is_zero() {
        let term = Real {
            mantissa: &power.mantissa / k,
        };
        if term.mantissa.is_zero() {
            break;
        }
        sum = sum + term;
        power = &power * &t2;
        k += 2;
    }
    sum
}

fn atan_inv(x: i64) -> Real {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
    let x2 = BigInt::from(x * x);
    let mut power = div_round(&unit(), &BigInt::from(x));
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = div_round(&power, &x2);
        k += 1;
    }
    Real { mantissa: sum }
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2() -> Real {
    atanh(&Real::from_ratio(&BigInt::one(), &BigInt::from(3))) * Real::from_int(2)
}

/// Machin: `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi() -> Real {
    atan_inv(5) * Real::from_int(16) - atan_inv(239) * Real::from_int(4)
}

/// Euler–Mascheroni constant via the Brent–McMillan series.
///
/// With `A_0 = -ln p`, `B_0 = 1`,
/// `B_k = B_{k-1} p^2 / k^2`, `A_k = (A_{k-1} p^2 / k + B_k) / k`,
/// `gamma ~ (sum A_k) / (sum B_k)` with error `O(e^{-4p})`.
pub fn euler_gamma() -> Real {
    // e^{-4p} < 10^{-(SCALE + 5)}
    let p: i64 = (f64::from(SCALE + 5) * std::f64::consts::LN_10 / 4.0).ceil() as i64;
    let p2 = BigInt::from(p * p);
    let mut a = -Real::from_int(p).ln().mantissa;
    let mut b = unit();
    let mut u = a.clone();
    let mut v = b.clone();
    let mut k: i64 = 1;
    loop {
        b = div_round(&(&b * &p2), &BigInt::from(k * k));
        a = div_round(&(div_round(&(&a * &p2), &BigInt::from(k)) + &b), &BigInt::from(k));
        if a.is_zero() && b.is_zero() {
            break;
        }
        u += &a;
        v += &b;
        k += 1;
    }
    Real::from_ratio(&u, &v)
}

/// `sign(q) * sqrt(|q|)` to the working scale, exact up to truncation.
pub fn signed_sqrt_rational(q: &BigRational) -> Real {
    let mag = q.abs();
    let num = mag.numer() * unit() * unit();
    let root = (num / mag.denom()).sqrt();
    let r = Real { mantissa: root };
    if q.is_negative() {
        -r
    } else {
        r
    }
}
