mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bitruns::asymptotics::{default_variance_bands, density_limits, growth_constant, variance_limit};
use bitruns::catalog::{count_gf, cross_gf};
use bitruns::cross::{cross_numerator, rho_rr_many};
use bitruns::error::Error;
use bitruns::fewones::{fewones_closed_form, FewOnes};
use bitruns::joint::{joint_table, rs_report_from_table, rs_reports, Variant};
use bitruns::moments::moment_report;
use bitruns::oracle::{
    class_member, parse_bits, run_stats, to_composition, StringClass,
    DEFAULT_ORACLE_BOUND,
};
use bitruns::precision::{render_rational, Real, SCALE};
use bitruns::verify::{run_verification, Perturbation, Scope, VerifyOptions};
use clap::{Parser, Subcommand, ValueEnum};

use report::{Format, Report};

const CACHE_ENV: &str = "BITRUNS_CACHE_DIR";

#[derive(Parser)]
#[command(name = "bitruns", version, about = "Exact longest-run and bitsum statistics of random bitstrings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "plain")]
    format: Format,
    /// Decimal digits (default: 6 for moments and correlations, 10 for constants).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Unconstrained,
    Solus,
    Multus,
    Bimultus,
    Persolus,
}

impl From<ClassArg> for StringClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Unconstrained => StringClass::Unconstrained,
            ClassArg::Solus => StringClass::Solus,
            ClassArg::Multus => StringClass::Multus,
            ClassArg::Bimultus => StringClass::Bimultus,
            ClassArg::Persolus => StringClass::Persolus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Unconstrained,
    Solus,
    Both,
}

impl VariantArg {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantArg::Unconstrained => vec![Variant::Unconstrained],
            VariantArg::Solus => vec![Variant::Solus],
            VariantArg::Both => vec![Variant::Unconstrained, Variant::Solus],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Catalog,
    Moments,
    Joint,
    CrossRun,
    All,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Catalog => Scope::Catalog,
            ScopeArg::Moments => Scope::Moments,
            ScopeArg::Joint => Scope::Joint,
            ScopeArg::CrossRun => Scope::CrossRun,
            ScopeArg::All => Scope::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Number of strings of each length, 0..=n.
    Counts {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        n: usize,
    },
    /// Exact moments of the longest run.
    Moments {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, default_value_t = 0)]
        bit: u8,
        #[arg(long)]
        n: usize,
        /// Also report the third and fourth moments.
        #[arg(long)]
        higher: bool,
    },
    /// Correlation of the longest 0-run and 1-run.
    Table1 {
        #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50,60,70")]
        n: Vec<usize>,
    },
    /// Correlation of the longest 0-run and the bitsum.
    Table2 {
        #[arg(long, value_delimiter = ',', default_value = "100,200,300,400")]
        n: Vec<usize>,
        #[arg(long, value_enum, default_value = "both")]
        variant: VariantArg,
        /// Reuse and extend the joint-table cache (directory from --cache-dir or BITRUNS_CACHE_DIR).
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Joint table of (number of 0s, longest 0-run).
    Joint {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "unconstrained")]
        variant: VariantArg,
    },
    /// Solus strings with fewer than `ell` 1s and no run of `k` 0s.
    Fewones {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: usize,
        /// Last length listed (default: ell * k - 1).
        #[arg(long)]
        len: Option<usize>,
    },
    /// Expansion of f_{i,j}, or of the E(R0 R1) numerator when i, j are omitted.
    Crossgf {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
    },
    /// Composition of n + 1 attached to a bitstring.
    Compositions {
        /// A single bitstring, e.g. 0100110.
        #[arg(long, conflicts_with_all = ["n", "class"])]
        bits: Option<String>,
        /// Enumerate every string of this length.
        #[arg(long, requires = "class")]
        n: Option<usize>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Growth constants, variance limits and density limits.
    Asymptotics,
    /// Compare every formula with exhaustive enumeration.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: ScopeArg,
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Corrupt one count numerator coefficient, as CLASS:POWER:DELTA.
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
}

/// A failed invocation and its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleBoundExceeded { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

struct Ctx {
    format: Format,
    precision: Option<u32>,
}

impl Ctx {
    fn digits(&self, default: u32) -> u32 {
        self.precision.unwrap_or(default)
    }

    fn emit(&self, report: &Report) -> Result<(), Failure> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        report.write(self.format, &mut out)?;
        out.flush()?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(p) = cli.precision {
        if p > SCALE {
            return Err(Failure::usage(format!("--precision must be at most {SCALE}")));
        }
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let ctx = Ctx {
        format: cli.format,
        precision: cli.precision,
    };
    match cli.command {
        Command::Counts { class, n } => counts(&ctx, class.into(), n),
        Command::Moments { class, bit, n, higher } => moments(&ctx, class.into(), bit, n, higher),
        Command::Table1 { n } => table1(&ctx, &n),
        Command::Table2 {
            n,
            variant,
            resume,
            cache_dir,
        } => table2(&ctx, &n, variant, resume, cache_dir),
        Command::Joint { n, variant } => joint(&ctx, n, variant),
        Command::Fewones { ell, k, len } => fewones(&ctx, ell, k, len),
        Command::Crossgf { class, n, i, j } => crossgf(&ctx, class.into(), n, i.zip(j)),
        Command::Compositions { bits, n, class } => compositions(&ctx, bits, n.zip(class)),
        Command::Asymptotics => asymptotics(&ctx),
        Command::Verify { scope, n, perturb } => verify(&ctx, scope.into(), n, perturb),
    }
}

fn counts(ctx: &Ctx, class: StringClass, n: usize) -> Result<u8, Failure> {
    let d = count_gf(class).expand(n)?;
    let mut r = Report::new("counts", &["n", "count"]).param("class", class).param("n", n);
    for (i, c) in d.coeffs().iter().enumerate() {
        r.push(vec![i.to_string(), c.to_string()]);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn moments(ctx: &Ctx, class: StringClass, bit: u8, n: usize, higher: bool) -> Result<u8, Failure> {
    let rep = moment_report(n, class, bit, higher)?;
    let digits = ctx.digits(6);
    let mut r = Report::new("moments", &["quantity", "exact", "decimal"])
        .param("class", class)
        .param("bit", bit)
        .param("n", n);
    let mut row = |name: &str, q: &num_rational::BigRational| {
        r.push(vec![name.into(), q.to_string(), render_rational(q, digits)]);
    };
    row("mean", &rep.mean);
    row("second_moment", &rep.second_moment);
    row("variance", &rep.variance);
    if let Some([m3, m4]) = &rep.higher {
        row("third_moment", m3);
        row("fourth_moment", m4);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn list(ns: &[usize]) -> String {
    ns.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn table1(ctx: &Ctx, ns: &[usize]) -> Result<u8, Failure> {
    if ns.iter().any(|&n| n < 2) {
        return Err(Failure::usage("table1 needs n >= 2"));
    }
    let digits = ctx.digits(6);
    let (u, m) = rayon::join(
        || rho_rr_many(ns, StringClass::Unconstrained),
        || rho_rr_many(ns, StringClass::Multus),
    );
    let (u, m) = (u?, m?);
    let mut r = Report::new("table1", &["n", "unconstrained", "multus"]).param("n", list(ns));
    for ((n, a), b) in ns.iter().zip(&u).zip(&m) {
        r.push(vec![n.to_string(), a.rho_decimal(digits), b.rho_decimal(digits)]);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn table2(
    ctx: &Ctx,
    ns: &[usize],
    variant: VariantArg,
    resume: bool,
    cache_dir: Option<PathBuf>,
) -> Result<u8, Failure> {
    let digits = ctx.digits(6);
    let cache = if resume {
        Some(
            cache_dir
                .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(".bitruns-cache")),
        )
    } else {
        None
    };
    let variants = variant.variants();
    let mut columns = vec!["n"];
    columns.extend(variants.iter().map(|v| v.name()));
    let mut r = Report::new("table2", &columns)
        .param("n", list(ns))
        .param("variant", format!("{variant:?}").to_lowercase());
    let mut cols = Vec::new();
    for v in &variants {
        cols.push(rs_reports(ns, *v, cache.as_deref())?);
    }
    for (i, n) in ns.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend(cols.iter().map(|c| c[i].rho_decimal(digits)));
        r.push(row);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn joint(ctx: &Ctx, n: usize, variant: VariantArg) -> Result<u8, Failure> {
    let digits = ctx.digits(6);
    let mut r = Report::new("joint", &["variant", "x", "y", "count"]).param("n", n);
    for v in variant.variants() {
        let t = joint_table(n, v);
        for (x, y, c) in t.nonzero() {
            r.push(vec![v.name().into(), x.to_string(), y.to_string(), c.to_string()]);
        }
        r.notes.push(format!("{v}: total {}", t.total()));
        if let Ok(rep) = rs_report_from_table(&t) {
            r.notes.push(format!("{v}: rho(R0, S) = {}", rep.rho_decimal(digits)));
        }
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn fewones(ctx: &Ctx, ell: usize, k: usize, len: Option<usize>) -> Result<u8, Failure> {
    if ell == 0 || k < 2 {
        return Err(Failure::usage("fewones needs ell >= 1 and k >= 2"));
    }
    let len = len.unwrap_or(ell * k - 1);
    let few = FewOnes::new(len);
    let mut r = Report::new("fewones", &["n", "count", "closed_form"])
        .param("ell", ell)
        .param("k", k);
    for n in 1..=len {
        let closed = if (2..=5).contains(&ell) {
            match fewones_closed_form(n, ell, k) {
                Ok(v) => v.to_string(),
                Err(Error::OutOfFormulaRange { .. }) => String::new(),
                Err(e) => return Err(e.into()),
            }
        } else {
            String::new()
        };
        r.push(vec![n.to_string(), few.count(n, ell, k).to_string(), closed]);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn crossgf(ctx: &Ctx, class: StringClass, n: usize, ij: Option<(usize, usize)>) -> Result<u8, Failure> {
    let (series, what) = match ij {
        Some((i, j)) => (cross_gf(class, i, j)?.expand(n)?, format!("f_{{{i},{j}}}")),
        None => (cross_numerator(class, n)?, "E(R0 R1) numerator".to_string()),
    };
    let mut r = Report::new("crossgf", &["n", "coefficient"])
        .param("class", class)
        .param("series", what);
    for (i, c) in series.coeffs().iter().enumerate() {
        r.push(vec![i.to_string(), c.to_string()]);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn bit_string(word: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|i| if word >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn compositions(
    ctx: &Ctx,
    bits: Option<String>,
    enumerate: Option<(usize, ClassArg)>,
) -> Result<u8, Failure> {
    let strings: Vec<String> = match (bits, enumerate) {
        (Some(b), _) => vec![b],
        (None, Some((n, class))) => {
            if n > DEFAULT_ORACLE_BOUND {
                return Err(Error::OracleBoundExceeded {
                    n,
                    bound: DEFAULT_ORACLE_BOUND,
                }
                .into());
            }
            let class: StringClass = class.into();
            (0..1u64 << n)
                .filter(|&w| class.contains_word(w, n))
                .map(|w| bit_string(w, n))
                .collect()
        }
        (None, None) => return Err(Failure::usage("give --bits or --n with --class")),
    };
    let classes: Vec<&str> = StringClass::ALL.iter().map(|c| c.name()).collect();
    let mut r = Report::new("compositions", &["bits", "composition", "bitsum", "longest_0_run", "classes"]);
    for s in &strings {
        let bits = parse_bits(s)?;
        let st = run_stats(&bits);
        let parts: Vec<String> = to_composition(&bits).iter().map(u32::to_string).collect();
        let member: Vec<&str> = StringClass::ALL
            .iter()
            .zip(&classes)
            .filter(|(c, _)| class_member(&bits, **c))
            .map(|(_, n)| *n)
            .collect();
        r.push(vec![
            s.clone(),
            parts.join("+"),
            st.s.to_string(),
            st.r0.to_string(),
            member.join(" "),
        ]);
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn asymptotics(ctx: &Ctx) -> Result<u8, Failure> {
    let digits = ctx.digits(10);
    let mut r = Report::new("asymptotics", &["quantity", "value", "truncated"]);
    let mut row = |name: String, v: &Real| {
        r.push(vec![name, v.to_decimal(digits), v.to_decimal_truncated(digits)]);
    };
    for class in StringClass::ALL {
        row(format!("growth {class}"), &growth_constant(class).value);
    }
    for (class, bit) in [
        (StringClass::Unconstrained, 1),
        (StringClass::Solus, 0),
        (StringClass::Multus, 1),
        (StringClass::Bimultus, 0),
        (StringClass::Persolus, 0),
    ] {
        row(format!("variance limit {class} bit {bit}"), &variance_limit(class, bit)?);
    }
    for class in [StringClass::Bimultus, StringClass::Persolus] {
        let (m, v) = density_limits(class)?;
        row(format!("density mean {class}"), &m);
        row(format!("density variance {class}"), &v);
    }
    for band in default_variance_bands() {
        let (rep, ok) = band.check()?;
        r.notes.push(format!(
            "{} bit {} n={}: exact variance {} vs limit {} (band +/-{}: {})",
            band.class,
            band.bit,
            band.n,
            render_rational(&rep.exact_variance, 6),
            rep.predicted_variance.to_decimal(6),
            band.half_width,
            if ok { "inside" } else { "outside" }
        ));
    }
    ctx.emit(&r)?;
    Ok(0)
}

fn parse_perturbation(s: &str) -> Result<Perturbation, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::usage(format!("bad --perturb `{s}` (want CLASS:POWER:DELTA)"));
    let [class, power, delta] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(Perturbation {
        class: class.parse().map_err(|_| bad())?,
        power: power.parse().map_err(|_| bad())?,
        delta: delta.parse().map_err(|_| bad())?,
    })
}

fn verify(ctx: &Ctx, scope: Scope, n: usize, perturb: Option<String>) -> Result<u8, Failure> {
    let mut opts = VerifyOptions::new(scope, n);
    opts.perturb = perturb.as_deref().map(parse_perturbation).transpose()?;
    let report = run_verification(&opts)?;
    let mut r = Report::new("verify", &["check", "cases", "status", "counterexample"])
        .param("scope", scope)
        .param("n", n);
    for c in &report.checks {
        r.push(vec![
            c.name.clone(),
            c.cases.to_string(),
            if c.passed() { "PASS" } else { "FAIL" }.into(),
            c.counterexample.clone().unwrap_or_default(),
        ]);
    }
    r.notes.push(if report.passed() {
        format!("PASS ({} comparisons)", report.total_cases())
    } else {
        "FAIL".to_string()
    });
    ctx.emit(&r)?;
    Ok(if report.passed() { 0 } else { 2 })
}
