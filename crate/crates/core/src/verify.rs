//! Oracle-equivalence sweeps: every generating-function and recursion
//! result is compared with brute-force enumeration for small `n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::catalog::{bitsum_triple, count_gf, defined_families, run_family};
use crate::cross::{cross_numerator, rho_rr, rho_rr_oracle};
use crate::error::{Error, Result};
use crate::joint::{joint_tables, Variant};
use crate::moments::moment_numerators;
use crate::oracle::{
    bitsum_totals, enumerate_joint_bounded, oracle_moment, JointDistribution, OracleExpr,
    StringClass, DEFAULT_ORACLE_BOUND,
};
use crate::series::{Poly, RationalGF};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Catalog,
    Moments,
    Joint,
    CrossRun,
    All,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::Catalog => "catalog",
            Scope::Moments => "moments",
            Scope::Joint => "joint",
            Scope::CrossRun => "cross-run",
            Scope::All => "all",
        }
    }

    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "catalog" | "genfun-catalog" | "counts" => Ok(Scope::Catalog),
            "moments" | "run-moments" => Ok(Scope::Moments),
            "joint" | "joint-dp" => Ok(Scope::Joint),
            "cross" | "cross-run" => Ok(Scope::CrossRun),
            "all" => Ok(Scope::All),
            _ => Err(Error::InvalidArgument(format!("unknown scope `{s}`"))),
        }
    }
}

/// Adds `delta` to one numerator coefficient of a count generating
/// function. Used to confirm that the sweep notices a corrupted entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub class: StringClass,
    pub power: usize,
    pub delta: i64,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub scope: Scope,
    pub n_bound: usize,
    pub perturb: Option<Perturbation>,
}

impl VerifyOptions {
    pub fn new(scope: Scope, n_bound: usize) -> Self {
        VerifyOptions {
            scope,
            n_bound,
            perturb: None,
        }
    }

    fn count_gf(&self, class: StringClass) -> RationalGF {
        let gf = count_gf(class);
        match self.perturb {
            Some(p) if p.class == class => {
                let bump = Poly::new(
                    (0..=p.power)
                        .map(|i| BigInt::from(if i == p.power { p.delta } else { 0 }))
                        .collect(),
                );
                RationalGF::new(gf.numerator().add(&bump), gf.denominator().clone())
                    .expect("denominator unchanged")
            }
            _ => gf,
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn total_cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

/// Collects comparisons for one check and keeps the first mismatch.
struct Check {
    outcome: CheckOutcome,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check {
            outcome: CheckOutcome {
                name: name.into(),
                cases: 0,
                counterexample: None,
            },
        }
    }

    fn compare<T: PartialEq + fmt::Display>(&mut self, what: impl FnOnce() -> String, got: &T, want: &T) {
        self.outcome.cases += 1;
        if got != want && self.outcome.counterexample.is_none() {
            self.outcome.counterexample =
                Some(format!("{}: computed {got}, enumeration gives {want}", what()));
        }
    }

    fn fail(&mut self, msg: String) {
        self.outcome.cases += 1;
        if self.outcome.counterexample.is_none() {
            self.outcome.counterexample = Some(msg);
        }
    }

    fn finish(self) -> CheckOutcome {
        self.outcome
    }
}

/// Enumerated ensembles for every class and `n <= n_bound`.
struct Ensembles {
    by_class: Vec<(StringClass, Vec<JointDistribution>)>,
}

impl Ensembles {
    fn build(n_bound: usize) -> Result<Self> {
        let by_class = StringClass::ALL
            .iter()
            .map(|&c| {
                let dists = (0..=n_bound)
                    .map(|n| enumerate_joint_bounded(n, c, DEFAULT_ORACLE_BOUND))
                    .collect::<Result<Vec<_>>>()?;
                Ok((c, dists))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensembles { by_class })
    }

    fn get(&self, class: StringClass) -> &[JointDistribution] {
        &self
            .by_class
            .iter()
            .find(|(c, _)| *c == class)
            .expect("all classes enumerated")
            .1
    }
}

fn check_catalog(opts: &VerifyOptions, ens: &Ensembles) -> Result<Vec<CheckOutcome>> {
    let n_bound = opts.n_bound;
    let mut out = Vec::new();

    let mut counts = Check::new("counts d_n");
    for class in StringClass::ALL {
        let d = opts.count_gf(class).expand(n_bound)?;
        for n in 1..=n_bound {
            let want = BigInt::from(ens.get(class)[n].total);
            counts.compare(|| format!("{class} n={n}"), &d.coeff(n), &want);
        }
    }
    out.push(counts.finish());

    let mut bits = Check::new("bitsum totals a_n, b_n, c_n");
    for class in [StringClass::Bimultus, StringClass::Persolus] {
        let t = bitsum_triple(class)?;
        let (a, b, c) = (t.a.expand(n_bound)?, t.b.expand(n_bound)?, t.c.expand(n_bound)?);
        for n in 1..=n_bound {
            let dist = &ens.get(class)[n];
            let (sa, sb) = bitsum_totals(dist);
            let (sa, sb) = (BigInt::from(sa), BigInt::from(sb));
            let want_c = BigInt::from(dist.total) * &sb - &sa * &sa;
            bits.compare(|| format!("{class} a_{n}"), &a.coeff(n), &sa);
            bits.compare(|| format!("{class} b_{n}"), &b.coeff(n), &sb);
            bits.compare(|| format!("{class} c_{n}"), &c.coeff(n), &want_c);
        }
    }
    out.push(bits.finish());

    let mut hk = Check::new("run families H_k");
    for (class, bit) in defined_families() {
        let fam = run_family(class, bit)?;
        for k in fam.min_valid_k()..=n_bound + 1 {
            let s = fam.hk(k).expand(n_bound)?;
            for n in 1..=n_bound {
                let dist = &ens.get(class)[n];
                let want = dist.count_where(|st| if bit == 0 { st.r0 } else { st.r1 } < k as u32);
                hk.compare(|| format!("{class} bit {bit} k={k} n={n}"), &s.coeff(n), &BigInt::from(want));
            }
        }
    }
    out.push(hk.finish());
    Ok(out)
}

fn check_moments(opts: &VerifyOptions, ens: &Ensembles) -> Result<Vec<CheckOutcome>> {
    let n_bound = opts.n_bound;
    let mut check = Check::new("run moments m = 1, 2");
    for (class, bit) in defined_families() {
        let fam = run_family(class, bit)?;
        let nums = moment_numerators(&fam, &[1, 2], n_bound, n_bound + 2)?;
        let d = opts.count_gf(class).expand(n_bound)?;
        let exprs = if bit == 0 {
            [OracleExpr::R0, OracleExpr::R0Sq]
        } else {
            [OracleExpr::R1, OracleExpr::R1Sq]
        };
        for n in 1..=n_bound {
            let dist = &ens.get(class)[n];
            if dist.total == 0 {
                continue;
            }
            if d.coeff(n).is_zero() {
                check.fail(format!("{class} n={n}: count is 0 but enumeration finds {}", dist.total));
                continue;
            }
            for (m, expr) in exprs.iter().enumerate() {
                let got = BigRational::new(nums[m].coeff(n), d.coeff(n));
                let want = oracle_moment(dist, *expr)?;
                check.compare(|| format!("{class} bit {bit} m={} n={n}", m + 1), &got, &want);
            }
        }
    }
    Ok(vec![check.finish()])
}

fn check_joint(opts: &VerifyOptions, ens: &Ensembles) -> Result<Vec<CheckOutcome>> {
    let ns: Vec<usize> = (0..=opts.n_bound).collect();
    let mut out = Vec::new();
    for (variant, class) in [
        (Variant::Unconstrained, StringClass::Unconstrained),
        (Variant::Solus, StringClass::Solus),
    ] {
        let mut check = Check::new(format!("joint table ({variant})"));
        let d = opts.count_gf(class).expand(opts.n_bound)?;
        for (n, table) in ns.iter().zip(joint_tables(&ns, variant)) {
            let hist = ens.get(class)[*n].zeros_histogram();
            for x in 0..=*n {
                for y in 0..=x {
                    let want = hist.get(&(x as u32, y as u32)).copied().unwrap_or(0);
                    check.compare(
                        || format!("n={n} x={x} y={y}"),
                        &table.get(x, y),
                        &want.into(),
                    );
                }
            }
            if *n >= 1 {
                check.compare(|| format!("mass n={n}"), &BigInt::from(table.total()), &d.coeff(*n));
            }
        }
        out.push(check.finish());
    }
    Ok(out)
}

fn check_cross(opts: &VerifyOptions, ens: &Ensembles) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for class in [StringClass::Unconstrained, StringClass::Multus] {
        let mut check = Check::new(format!("cross moment E(R0 R1) ({class})"));
        let num = cross_numerator(class, opts.n_bound)?;
        let d = opts.count_gf(class).expand(opts.n_bound)?;
        for n in 1..=opts.n_bound {
            let dist = &ens.get(class)[n];
            if d.coeff(n).is_zero() {
                check.fail(format!("n={n}: count is 0 but enumeration finds {}", dist.total));
                continue;
            }
            let got = BigRational::new(num.coeff(n), d.coeff(n));
            let want = oracle_moment(dist, OracleExpr::R0R1)?;
            check.compare(|| format!("n={n}"), &got, &want);
            if n >= 2 {
                let got = rho_rr(n, class)?.rho;
                let want = rho_rr_oracle(n, class)?;
                check.compare(|| format!("rho n={n}"), &got, &want);
            }
        }
        out.push(check.finish());
    }
    Ok(out)
}

/// Runs every check in `opts.scope` for `1 <= n <= opts.n_bound`.
pub fn run_verification(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.n_bound > DEFAULT_ORACLE_BOUND {
        return Err(Error::OracleBoundExceeded {
            n: opts.n_bound,
            bound: DEFAULT_ORACLE_BOUND,
        });
    }
    let ens = Ensembles::build(opts.n_bound)?;
    let mut report = VerifyReport::default();
    if opts.scope.includes(Scope::Catalog) {
        report.checks.extend(check_catalog(opts, &ens)?);
    }
    if opts.scope.includes(Scope::Moments) {
        report.checks.extend(check_moments(opts, &ens)?);
    }
    if opts.scope.includes(Scope::Joint) {
        report.checks.extend(check_joint(opts, &ens)?);
    }
    if opts.scope.includes(Scope::CrossRun) {
        report.checks.extend(check_cross(opts, &ens)?);
    }
    Ok(report)
}
