//! Exhaustive enumeration of bitstring ensembles.
//!
//! Everything here is computed by brute force over all `2^n` strings and is
//! the ground truth the generating-function and recursion pipelines are
//! checked against.
//!
//! Note on small lengths: the empty string (and, for bimultus, nothing of
//! length 1) satisfies every membership predicate vacuously, so enumeration
//! reports one string at `n = 0` for every class. The closed-form count
//! generating functions of the bimultus and persolus ensembles have a zero
//! constant term instead. Count comparisons for those two classes therefore
//! start at `n = 1`; the generating-function coefficients are normative.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default enumeration bound (`2^24` candidates).
pub const DEFAULT_ORACLE_BOUND: usize = 24;

/// Hard ceiling: strings are packed into a `u64`.
const MAX_WORD_BITS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StringClass {
    Unconstrained,
    /// No two adjacent 1s.
    Solus,
    /// Every 1 has an adjacent 1.
    Multus,
    /// Every 1 has an adjacent 1 and every 0 has an adjacent 0.
    Bimultus,
    /// No two adjacent 1s and every 0 has an adjacent 0.
    Persolus,
}

impl StringClass {
    pub const ALL: [StringClass; 5] = [
        StringClass::Unconstrained,
        StringClass::Solus,
        StringClass::Multus,
        StringClass::Bimultus,
        StringClass::Persolus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StringClass::Unconstrained => "unconstrained",
            StringClass::Solus => "solus",
            StringClass::Multus => "multus",
            StringClass::Bimultus => "bimultus",
            StringClass::Persolus => "persolus",
        }
    }

    /// Membership test on the low `n` bits of `word` (bit `i` is position `i`).
    pub fn contains_word(self, word: u64, n: usize) -> bool {
        debug_assert!(n <= MAX_WORD_BITS);
        let mask = (1u64 << n) - 1;
        let ones = word & mask;
        let zeros = !word & mask;
        let isolated = |b: u64| b & !(b << 1) & !(b >> 1);
        match self {
            StringClass::Unconstrained => true,
            StringClass::Solus => ones & (ones >> 1) == 0,
            StringClass::Multus => isolated(ones) == 0,
            StringClass::Bimultus => isolated(ones) == 0 && isolated(zeros) == 0,
            StringClass::Persolus => ones & (ones >> 1) == 0 && isolated(zeros) == 0,
        }
    }
}

impl fmt::Display for StringClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StringClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StringClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown string class `{s}`")))
    }
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArgument(format!("`{other}` is not a bit"))),
        })
        .collect()
}

/// Class membership for an explicit bit sequence.
pub fn class_member(bits: &[bool], class: StringClass) -> bool {
    let n = bits.len();
    let has_twin = |i: usize| {
        (i > 0 && bits[i - 1] == bits[i]) || (i + 1 < n && bits[i + 1] == bits[i])
    };
    let adjacent_ones = bits.windows(2).any(|w| w[0] && w[1]);
    let lonely_one = (0..n).any(|i| bits[i] && !has_twin(i));
    let lonely_zero = (0..n).any(|i| !bits[i] && !has_twin(i));
    match class {
        StringClass::Unconstrained => true,
        StringClass::Solus => !adjacent_ones,
        StringClass::Multus => !lonely_one,
        StringClass::Bimultus => !lonely_one && !lonely_zero,
        StringClass::Persolus => !adjacent_ones && !lonely_zero,
    }
}

/// Longest 0-run, longest 1-run and bitsum of one string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunStats {
    pub r0: u32,
    pub r1: u32,
    pub s: u32,
}

pub fn run_stats(bits: &[bool]) -> RunStats {
    let mut best = [0u32; 2];
    let mut cur = 0u32;
    let mut prev: Option<bool> = None;
    let mut s = 0;
    for &b in bits {
        cur = if prev == Some(b) { cur + 1 } else { 1 };
        prev = Some(b);
        let slot = &mut best[b as usize];
        *slot = (*slot).max(cur);
        s += b as u32;
    }
    RunStats {
        r0: best[0],
        r1: best[1],
        s,
    }
}

fn longest_ones(mut x: u64) -> u32 {
    let mut len = 0;
    while x != 0 {
        x &= x >> 1;
        len += 1;
    }
    len
}

fn word_stats(word: u64, n: usize) -> RunStats {
    let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let ones = word & mask;
    RunStats {
        r0: longest_ones(!word & mask),
        r1: longest_ones(ones),
        s: ones.count_ones(),
    }
}

/// Waiting-time composition of `bits` followed by an appended `1`.
///
/// Each part is one plus the number of 0s immediately preceding a 1. Parts
/// sum to `len + 1`; the largest part is the longest 0-run plus one.
pub fn to_composition(bits: &[bool]) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut gap = 1;
    for &b in bits.iter().chain(std::iter::once(&true)) {
        if b {
            parts.push(gap);
            gap = 1;
        } else {
            gap += 1;
        }
    }
    parts
}

/// Exact counts of every realized `(r0, r1, s)` triple over one ensemble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    pub n: usize,
    pub class: StringClass,
    pub counts: BTreeMap<RunStats, u64>,
    pub total: u64,
}

/// Which statistic [`oracle_moment`] averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleExpr {
    R0,
    R1,
    S,
    R0Sq,
    R1Sq,
    SSq,
    R0R1,
    R0S,
}

impl OracleExpr {
    fn eval(self, st: &RunStats) -> u64 {
        let (r0, r1, s) = (st.r0 as u64, st.r1 as u64, st.s as u64);
        match self {
            OracleExpr::R0 => r0,
            OracleExpr::R1 => r1,
            OracleExpr::S => s,
            OracleExpr::R0Sq => r0 * r0,
            OracleExpr::R1Sq => r1 * r1,
            OracleExpr::SSq => s * s,
            OracleExpr::R0R1 => r0 * r1,
            OracleExpr::R0S => r0 * s,
        }
    }
}

impl JointDistribution {
    /// `sum over strings of f(stats)`, exact.
    pub fn sum_by<F: Fn(&RunStats) -> u64>(&self, f: F) -> BigUint {
        self.counts
            .iter()
            .map(|(st, &c)| BigUint::from(f(st)) * c)
            .sum()
    }

    /// Number of strings whose stats satisfy `pred`.
    pub fn count_where<F: Fn(&RunStats) -> bool>(&self, pred: F) -> u64 {
        self.counts
            .iter()
            .filter(|(st, _)| pred(st))
            .map(|(_, &c)| c)
            .sum()
    }

    /// Histogram keyed by `(number of 0s, longest 0-run)`.
    pub fn zeros_histogram(&self) -> BTreeMap<(u32, u32), u64> {
        let mut h = BTreeMap::new();
        for (st, &c) in &self.counts {
            *h.entry((self.n as u32 - st.s, st.r0)).or_insert(0) += c;
        }
        h
    }
}

/// Enumerates every length-`n` string of `class` (bound: [`DEFAULT_ORACLE_BOUND`]).
pub fn enumerate_joint(n: usize, class: StringClass) -> Result<JointDistribution> {
    enumerate_joint_bounded(n, class, DEFAULT_ORACLE_BOUND)
}

/// [`enumerate_joint`] with an explicit bound on `n`.
///
/// The candidate range is split into contiguous blocks merged in order, so
/// the result does not depend on the thread count.
pub fn enumerate_joint_bounded(
    n: usize,
    class: StringClass,
    bound: usize,
) -> Result<JointDistribution> {
    if n > bound || n > MAX_WORD_BITS {
        return Err(Error::OracleBoundExceeded {
            n,
            bound: bound.min(MAX_WORD_BITS),
        });
    }
    let total_words = 1u64 << n;
    let block_bits = n.min(14);
    let blocks = total_words >> block_bits;
    let counts = (0..blocks)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<RunStats, u64>, block| {
            let start = block << block_bits;
            for word in start..start + (1u64 << block_bits) {
                if class.contains_word(word, n) {
                    *acc.entry(word_stats(word, n)).or_insert(0) += 1;
                }
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let total = counts.values().sum();
    Ok(JointDistribution {
        n,
        class,
        counts,
        total,
    })
}

/// Exact ensemble average of `expr`.
pub fn oracle_moment(dist: &JointDistribution, expr: OracleExpr) -> Result<BigRational> {
    if dist.total == 0 {
        return Err(Error::EmptyEnsemble {
            class: dist.class,
            n: dist.n,
        });
    }
    let num = dist.sum_by(|st| expr.eval(st));
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(dist.total),
    ))
}

/// Ensemble total of `S` and `S^2` (the `a_n`, `b_n` of the bitsum triples).
pub fn bitsum_totals(dist: &JointDistribution) -> (BigUint, BigUint) {
    let a = dist.sum_by(|st| st.s as u64);
    let b = dist.sum_by(|st| (st.s as u64).pow(2));
    (a, b)
}
