//! Exact moment bookkeeping shared by the correlation pipelines.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::precision::{signed_sqrt_rational, Real};

/// Exact power sums of a pair of statistics over a finite ensemble.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSums {
    pub total: BigInt,
    pub x: BigInt,
    pub y: BigInt,
    pub xx: BigInt,
    pub yy: BigInt,
    pub xy: BigInt,
}

impl PairSums {
    pub fn mean_x(&self) -> BigRational {
        BigRational::new(self.x.clone(), self.total.clone())
    }

    pub fn mean_y(&self) -> BigRational {
        BigRational::new(self.y.clone(), self.total.clone())
    }

    pub fn correlation(&self) -> Correlation {
        let t = &self.total;
        let q = |v: &BigInt| BigRational::new(v.clone(), t.clone());
        let (mx, my) = (q(&self.x), q(&self.y));
        Correlation {
            covariance: q(&self.xy) - &mx * &my,
            var_x: q(&self.xx) - &mx * &mx,
            var_y: q(&self.yy) - &my * &my,
        }
    }
}

/// Covariance and the two variances of a pair, all exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correlation {
    pub covariance: BigRational,
    pub var_x: BigRational,
    pub var_y: BigRational,
}

impl Correlation {
    pub fn is_degenerate(&self) -> bool {
        self.var_x.is_zero() || self.var_y.is_zero()
    }

    /// `rho^2 = cov^2 / (V_x V_y)`, exact. `None` when a variance vanishes.
    pub fn rho_squared(&self) -> Option<BigRational> {
        if self.is_degenerate() {
            return None;
        }
        Some(&self.covariance * &self.covariance / (&self.var_x * &self.var_y))
    }

    /// Pearson correlation to the fixed-point working scale.
    pub fn rho(&self) -> Option<Real> {
        let sq = self.rho_squared()?;
        let signed = if self.covariance.is_negative() { -sq } else { sq };
        Some(signed_sqrt_rational(&signed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_point_correlation() {
        // (2,0), (1,1), (1,1), (0,2): perfectly anti-correlated.
        let pts = [(2i64, 0i64), (1, 1), (1, 1), (0, 2)];
        let mut s = PairSums::default();
        for (x, y) in pts {
            s.total += 1;
            s.x += x;
            s.y += y;
            s.xx += x * x;
            s.yy += y * y;
            s.xy += x * y;
        }
        let c = s.correlation();
        assert_eq!(c.covariance, BigRational::new((-1).into(), 2.into()));
        assert_eq!(c.rho().unwrap().to_decimal(6), "-1.000000");
    }

    #[test]
    fn degenerate_variance() {
        let s = PairSums {
            total: 2.into(),
            x: 2.into(),
            y: 1.into(),
            xx: 2.into(),
            yy: 1.into(),
            xy: 1.into(),
        };
        assert!(s.correlation().rho().is_none());
    }
}
