//! Joint distribution of (number of 0s, longest 0-run) by recursion.
//!
//! `F_n(x, y)` counts strings of length `n` with exactly `x` zeros whose
//! longest 0-run is exactly `y`:
//!
//! ```text
//! F_n(x,y) = sum_{i=kappa}^{y-1} F_{n-i-1}(x-i, y) + sum_{j=0}^{y} F_{n-y-1}(x-y, j)
//!                                   if 1 <= x <= n-2 and eps_n(x,y)
//!          = lambda_n(y)            if x = n-1 and eps_n(x,y)
//!          = 0                      otherwise
//! F_n(0,0) = 1 - kappa,   F_n(n,n) = 1
//! ```
//!
//! with `eps_n(x,y) = [n >= 2 and floor(n/(n-x+1)) <= y <= x]`. The
//! unconstrained table uses `kappa = 0`; the solus table is
//! `F~_n = F_{n-1} + F_n` computed with `kappa = 1` and its own `lambda`.
//!
//! Every term on the right has `n' - x' = n - x - 1`, i.e. one fewer 1. The
//! evaluation therefore runs in layers indexed by the number of 1s `s`,
//! keeping only the previous layer plus two prefix-sum views of it (along
//! `x` at fixed `y` for the first sum, along `y` at fixed `x` for the
//! second). One sweep to `n_max` produces the table of every `n <= n_max`.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::precision::Real;
use crate::stats::{Correlation, PairSums};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Unconstrained,
    Solus,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Unconstrained => "unconstrained",
            Variant::Solus => "solus",
        }
    }

    pub fn kappa(self) -> usize {
        match self {
            Variant::Unconstrained => 0,
            Variant::Solus => 1,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unconstrained" => Ok(Variant::Unconstrained),
            "solus" => Ok(Variant::Solus),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}`"))),
        }
    }
}

/// Feasibility gate `eps_n(x, y)`.
pub fn epsilon(n: usize, x: usize, y: usize) -> bool {
    n >= 2 && x <= n && n / (n - x + 1) <= y && y <= x
}

/// Boundary count `lambda_n(y)` used when `x = n - 1`.
pub fn lambda(variant: Variant, n: usize, y: usize) -> u32 {
    let middle = n % 2 == 1 && 2 * y + 1 == n;
    match variant {
        Variant::Unconstrained => {
            if middle {
                1
            } else {
                2
            }
        }
        Variant::Solus => {
            if middle || y + 1 == n {
                1
            } else {
                2
            }
        }
    }
}

type Rows = Vec<Vec<BigUint>>;

/// Prefix sums of one layer: `along_x[t][y] = sum_{x'=y}^{t} G(x', y)` and
/// `along_y[x][j] = sum_{j'<=j} G(x, j')`.
struct Prefixes {
    along_x: Rows,
    along_y: Rows,
}

impl Prefixes {
    fn build(rows: &Rows) -> Self {
        let along_y: Rows = rows
            .par_iter()
            .map(|row| {
                let mut acc = BigUint::zero();
                row.iter()
                    .map(|c| {
                        acc += c;
                        acc.clone()
                    })
                    .collect()
            })
            .collect();
        let mut along_x: Rows = Vec::with_capacity(rows.len());
        for (t, row) in rows.iter().enumerate() {
            let next: Vec<BigUint> = row
                .iter()
                .enumerate()
                .map(|(y, c)| {
                    if y < t {
                        &along_x[t - 1][y] + c
                    } else {
                        c.clone()
                    }
                })
                .collect();
            along_x.push(next);
        }
        Prefixes { along_x, along_y }
    }

    /// `sum_{x'=lo}^{hi} G(x', y)` (zero for an empty range).
    fn window_x(&self, y: usize, lo: usize, hi: usize) -> BigUint {
        let lo = lo.max(y);
        if hi < lo {
            return BigUint::zero();
        }
        let upper = &self.along_x[hi][y];
        if lo > y {
            upper - &self.along_x[lo - 1][y]
        } else {
            upper.clone()
        }
    }

    /// `sum_{j=0}^{hi} G(x, j)`.
    fn head_y(&self, x: usize, hi: usize) -> BigUint {
        let row = &self.along_y[x];
        row[hi.min(row.len() - 1)].clone()
    }
}

fn layer(variant: Variant, s: usize, x_max: usize, prev: Option<&Prefixes>) -> Rows {
    let kappa = variant.kappa();
    (0..=x_max)
        .into_par_iter()
        .map(|x| {
            let n = s + x;
            (0..=x)
                .map(|y| {
                    if x == 0 {
                        // F_n(0,0) = 1 - kappa; also resolves n = 0.
                        return BigUint::from((y == 0) as usize * (1 - kappa));
                    }
                    if s == 0 {
                        return BigUint::from((y == x) as u32);
                    }
                    if !epsilon(n, x, y) {
                        return BigUint::zero();
                    }
                    if s == 1 {
                        return BigUint::from(lambda(variant, n, y));
                    }
                    let p = prev.expect("layers s >= 2 need the previous layer");
                    let stay = if x >= kappa {
                        p.window_x(y, x + 1 - y, x - kappa)
                    } else {
                        BigUint::zero()
                    };
                    stay + p.head_y(x - y, y)
                })
                .collect()
        })
        .collect()
}

/// Runs the layered recursion up to length `n_max`, calling
/// `visit(s, x, row)` with `row[y] = F_{s+x}(x, y)` for every `s + x <= n_max`.
pub fn sweep<F>(variant: Variant, n_max: usize, mut visit: F)
where
    F: FnMut(usize, usize, &[BigUint]),
{
    let mut prev: Option<Prefixes> = None;
    for s in 0..=n_max {
        let rows = layer(variant, s, n_max - s, prev.as_ref());
        for (x, row) in rows.iter().enumerate() {
            visit(s, x, row);
        }
        prev = Some(Prefixes::build(&rows));
    }
}

/// Exact `F_n(x, y)` (or `F~_n(x, y)`) for one `n`, indexed `[x][y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointTable {
    pub n: usize,
    pub variant: Variant,
    entries: Rows,
}

impl JointTable {
    fn empty(n: usize, variant: Variant) -> Self {
        JointTable {
            n,
            variant,
            entries: (0..=n).map(|x| vec![BigUint::zero(); x + 1]).collect(),
        }
    }

    /// Entry for `x` zeros and longest 0-run `y` (zero outside `y <= x <= n`).
    pub fn get(&self, x: usize, y: usize) -> BigUint {
        self.entries
            .get(x)
            .and_then(|row| row.get(y))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row(&self, x: usize) -> &[BigUint] {
        &self.entries[x]
    }

    /// Nonzero entries as `(x, y, count)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        self.entries.iter().enumerate().flat_map(|(x, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(y, c)| (x, y, c))
        })
    }

    pub fn total(&self) -> BigUint {
        self.entries.iter().flatten().sum()
    }

    /// Strings whose longest 0-run is below `k`.
    pub fn count_run_below(&self, k: usize) -> BigUint {
        self.entries
            .iter()
            .flat_map(|row| row.iter().take(k))
            .sum()
    }

    /// Power sums of `(R0, S) = (y, n - x)`.
    pub fn pair_sums(&self) -> PairSums {
        let mut acc = PairSums::default();
        for (x, y, c) in self.nonzero() {
            let c = BigInt::from(c.clone());
            let r = BigInt::from(y);
            let s = BigInt::from(self.n - x);
            acc.total += &c;
            acc.x += &r * &c;
            acc.y += &s * &c;
            acc.xx += &r * &r * &c;
            acc.yy += &s * &s * &c;
            acc.xy += &r * &s * &c;
        }
        acc
    }
}

/// Solus tables below length 2 are `delta_{x,y}`.
fn small_solus(n: usize) -> JointTable {
    let mut t = JointTable::empty(n, Variant::Solus);
    for x in 0..=n {
        t.entries[x][x] = BigUint::from(1u32);
    }
    t
}

pub fn joint_table(n: usize, variant: Variant) -> JointTable {
    joint_tables(&[n], variant).remove(0)
}

/// Tables for several lengths from a single sweep (returned in input order).
pub fn joint_tables(ns: &[usize], variant: Variant) -> Vec<JointTable> {
    let Some(&n_max) = ns.iter().max() else {
        return Vec::new();
    };
    let wanted: BTreeSet<usize> = ns.iter().copied().collect();
    let mut tables: Vec<JointTable> = ns.iter().map(|&n| JointTable::empty(n, variant)).collect();
    let slots = |n: usize| -> Vec<usize> { (0..ns.len()).filter(|&i| ns[i] == n).collect() };
    sweep(variant, n_max, |s, x, row| {
        let mut targets = vec![s + x];
        if variant == Variant::Solus {
            targets.push(s + x + 1);
        }
        for n in targets {
            if !wanted.contains(&n) || (variant == Variant::Solus && n < 2) {
                continue;
            }
            for i in slots(n) {
                for (dst, c) in tables[i].entries[x].iter_mut().zip(row) {
                    *dst += c;
                }
            }
        }
    });
    for t in tables.iter_mut() {
        if variant == Variant::Solus && t.n < 2 {
            *t = small_solus(t.n);
        }
    }
    tables
}

/// `(R0, S)` power sums for several lengths without materializing tables.
pub fn joint_pair_sums(ns: &[usize], variant: Variant) -> Vec<PairSums> {
    let Some(&n_max) = ns.iter().max() else {
        return Vec::new();
    };
    let mut sums: Vec<PairSums> = vec![PairSums::default(); ns.len()];
    sweep(variant, n_max, |s, x, row| {
        let shifts: &[usize] = match variant {
            Variant::Unconstrained => &[0],
            Variant::Solus => &[0, 1],
        };
        let mut agg: Option<[BigInt; 3]> = None;
        for &shift in shifts {
            let n = s + x + shift;
            if variant == Variant::Solus && n < 2 {
                continue;
            }
            for (i, _) in ns.iter().enumerate().filter(|(_, &m)| m == n) {
                let [c0, c1, c2] = agg.get_or_insert_with(|| row_moments(row)).clone();
                let ones = BigInt::from(s + shift);
                let acc = &mut sums[i];
                acc.y += &ones * &c0;
                acc.yy += &ones * &ones * &c0;
                acc.xy += &ones * &c1;
                acc.total += c0;
                acc.x += c1;
                acc.xx += c2;
            }
        }
    });
    for (i, &n) in ns.iter().enumerate() {
        if variant == Variant::Solus && n < 2 {
            sums[i] = small_solus(n).pair_sums();
        }
    }
    sums
}

/// `(sum c, sum y c, sum y^2 c)` over one row.
fn row_moments(row: &[BigUint]) -> [BigInt; 3] {
    let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (y, c) in row.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = BigInt::from(c.clone());
        out[1] += &c * y;
        out[2] += &c * (y * y);
        out[0] += c;
    }
    out
}

/// Exact moments of `(R_{n,0}, S_n)` and their correlation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsReport {
    pub n: usize,
    pub variant: Variant,
    pub mean_r0: BigRational,
    pub mean_s: BigRational,
    pub var_r0: BigRational,
    pub var_s: BigRational,
    pub mean_r0_s: BigRational,
    pub covariance: BigRational,
    pub rho: Real,
}

impl RsReport {
    fn from_sums(n: usize, variant: Variant, sums: &PairSums) -> Result<Self> {
        let corr: Correlation = sums.correlation();
        let rho = corr.rho().ok_or(Error::DegenerateVariance(n))?;
        Ok(RsReport {
            n,
            variant,
            mean_r0: sums.mean_x(),
            mean_s: sums.mean_y(),
            var_r0: corr.var_x,
            var_s: corr.var_y,
            mean_r0_s: BigRational::new(sums.xy.clone(), sums.total.clone()),
            covariance: corr.covariance,
            rho,
        })
    }

    /// `rho` rounded half-even to `digits` places.
    pub fn rho_decimal(&self, digits: u32) -> String {
        self.rho.to_decimal(digits)
    }
}

pub fn joint_rs_report(n: usize, variant: Variant) -> Result<RsReport> {
    let sums = joint_pair_sums(&[n], variant).remove(0);
    RsReport::from_sums(n, variant, &sums)
}

pub fn rs_report_from_table(table: &JointTable) -> Result<RsReport> {
    RsReport::from_sums(table.n, table.variant, &table.pair_sums())
}

/// Correlation reports for several lengths, optionally backed by a table
/// cache directory (tables found there are reused, new ones are written).
pub fn rs_reports(ns: &[usize], variant: Variant, cache: Option<&Path>) -> Result<Vec<RsReport>> {
    let Some(dir) = cache else {
        let sums = joint_pair_sums(ns, variant);
        return ns
            .iter()
            .zip(&sums)
            .map(|(&n, s)| RsReport::from_sums(n, variant, s))
            .collect();
    };
    fs::create_dir_all(dir)?;
    let mut found: Vec<Option<JointTable>> = Vec::with_capacity(ns.len());
    for &n in ns {
        let path = cache_path(dir, variant, n);
        found.push(if path.exists() {
            Some(read_table(&path)?)
        } else {
            None
        });
    }
    let missing: Vec<usize> = ns
        .iter()
        .zip(&found)
        .filter(|(_, t)| t.is_none())
        .map(|(&n, _)| n)
        .collect();
    let mut fresh = joint_tables(&missing, variant).into_iter();
    let mut out = Vec::with_capacity(ns.len());
    for slot in found {
        let table = match slot {
            Some(t) => t,
            None => {
                let t = fresh.next().expect("one fresh table per missing length");
                write_table(&cache_path(dir, variant, t.n), &t)?;
                t
            }
        };
        out.push(rs_report_from_table(&table)?);
    }
    Ok(out)
}

/// Cache file location for one table.
pub fn cache_path(dir: &Path, variant: Variant, n: usize) -> PathBuf {
    dir.join(format!("{}-{n}.tsv", variant.name()))
}

/// Writes `"variant n"` then one `x<TAB>y<TAB>count` line per nonzero entry.
pub fn write_table(path: &Path, table: &JointTable) -> Result<()> {
    let tmp = path.with_extension("tsv.partial");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "{} {}", table.variant.name(), table.n)?;
        for (x, y, c) in table.nonzero() {
            writeln!(w, "{x}\t{y}\t{c}")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<JointTable> {
    let bad = |reason: String| Error::CacheFormat {
        path: path.display().to_string(),
        reason,
    };
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
    let mut parts = header.split_whitespace();
    let (Some(v), Some(n), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad(format!("bad header `{header}`")));
    };
    let variant: Variant = v.parse().map_err(|_| bad(format!("bad variant `{v}`")))?;
    let n: usize = n.parse().map_err(|_| bad(format!("bad length `{n}`")))?;
    let mut table = JointTable::empty(n, variant);
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let parsed = match fields.as_slice() {
            [x, y, c] => x
                .parse::<usize>()
                .ok()
                .zip(y.parse::<usize>().ok())
                .zip(c.parse::<BigUint>().ok()),
            _ => None,
        };
        let Some(((x, y), c)) = parsed.filter(|((x, y), _)| y <= x && *x <= n) else {
            return Err(bad(format!("bad record on line {}", lineno + 2)));
        };
        table.entries[x][y] = c;
    }
    Ok(table)
}
