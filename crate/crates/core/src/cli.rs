//! The `zeta-qsm` command line. [`run`] parses arguments, executes one
//! command and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success / PASS |
//! | 1 | FAIL |
//! | 2 | parse, input or parameter error |
//! | 3 | undetermined prime under `--mask strict` |
//! | 4 | network error |
//! | 5 | unknown database label |

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::class_group::ClassGroup;
use crate::error::{Error, Result};
use crate::gassmann::{gassmann_equivalent, permutation_character_equal};
use crate::ideal::IdealVec;
use crate::io::{load_field, load_group, write_atomic, Table};
use crate::lseries::{
    artin_factorization_check, compare_series, twist_coeffs, zeta_coeffs, CoeffSeries, DirichletChar,
};
use crate::number_field::NumberField;
use crate::qsm::{Operator, TruncatedQSM};
use crate::reciprocity::{build_psi, count_identity_check, frob_count, psi_on_ideals};

pub const MAX_LIMIT: usize = 1_000_000;
pub const MAX_DISC: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MaskPolicy {
    /// Exclude undetermined primes from all comparisons.
    Auto,
    /// Fail (exit 3) on any undetermined prime not listed in `--exclude`.
    Strict,
    /// Fail (exit 3) unless the field files resolve every prime.
    OverridesRequired,
}

#[derive(Debug, Parser)]
#[command(name = "zeta-qsm", version, about = "Dedekind zeta coefficients, arithmetic equivalence and truncated QSM systems")]
pub struct Cli {
    /// Worker threads for the coefficient engines.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the CSV body here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Aligned text instead of CSV.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[arg(long, global = true, value_enum, default_value_t = MaskPolicy::Auto)]
    pub mask: MaskPolicy,
    /// Extra primes to exclude, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub exclude: Vec<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ideal counts a_n of a field.
    Zeta {
        field: PathBuf,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Compare zeta coefficients of two fields.
    Equiv {
        k: PathBuf,
        l: PathBuf,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Check zeta_{K(sqrt D)} = zeta_K * L_K(chi_D); sqrt D must not lie in K.
    Twist {
        field: PathBuf,
        #[arg(short = 'd', long = "twist", allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Gassmann equivalence of two named subgroups.
    Gassmann {
        group: PathBuf,
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
    },
    /// Class group of an imaginary quadratic field.
    Classgroup {
        #[arg(short = 'd', long = "disc", allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = 50)]
        limit: usize,
        /// Emit character L-coefficients instead of per-class counts.
        #[arg(long)]
        characters: bool,
    },
    /// Partition function and KMS checks of the truncated system.
    Qsm {
        field: PathBuf,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Quadratic character chi_D for the KMS value.
        #[arg(short = 'd', long = "twist", allow_negative_numbers = true)]
        d: Option<i64>,
        /// Odd prime p: use a generator of the characters mod p instead.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 1)]
        gamma: u64,
    },
    /// Compare ideal counts per norm and residue class mod m.
    Count {
        k: PathBuf,
        l: PathBuf,
        #[arg(short = 'm', long = "mod")]
        modulus: u64,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Build a norm-preserving matching of prime ideals.
    Psi {
        k: PathBuf,
        l: PathBuf,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Download a defining polynomial by database label.
    Fetch {
        label: String,
        /// API endpoint; defaults to $ZETA_QSM_DB_ENDPOINT or the public LMFDB API.
        #[arg(long)]
        endpoint: Option<String>,
    },
}

/// Outcome of a command: an optional PASS/FAIL verdict and a table.
struct Report {
    verdict: Option<(bool, String)>,
    table: Option<Table>,
    message: Option<String>,
}

impl Report {
    fn table(table: Table) -> Self {
        Report { verdict: None, table: Some(table), message: None }
    }

    fn verdict(pass: bool, detail: impl Into<String>, table: Table) -> Self {
        Report { verdict: Some((pass, detail.into())), table: Some(table), message: None }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UndeterminedPrime(_) => 3,
        Error::Network(_) => 4,
        Error::UnknownLabel(_) => 5,
        _ => 2,
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::OutOfRange(format!("threads: {e}"))),
        },
        None => execute(&cli),
    };
    match result.and_then(|r| emit(&cli, r, out)) {
        Ok(code) => code,
        Err(Error::Io(msg)) if msg.contains("Broken pipe") => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cli: &Cli, report: Report, out: &mut dyn Write) -> Result<i32> {
    let mut code = 0;
    if let Some((pass, detail)) = &report.verdict {
        writeln!(out, "{} {detail}", if *pass { "PASS" } else { "FAIL" })?;
        code = if *pass { 0 } else { 1 };
    }
    if let Some(msg) = &report.message {
        writeln!(out, "{msg}")?;
    }
    if let Some(table) = &report.table {
        let body = if cli.pretty { table.to_pretty() } else { table.to_csv() };
        match &cli.output {
            Some(path) => write_atomic(path, &body)?,
            None => out.write_all(body.as_bytes())?,
        }
    }
    Ok(code)
}

fn check_limit(limit: usize) -> Result<()> {
    if limit == 0 || limit > MAX_LIMIT {
        return Err(Error::OutOfRange(format!("limit {limit} not in 1..={MAX_LIMIT}")));
    }
    Ok(())
}

fn check_disc(d: i64) -> Result<()> {
    if d == 0 || d.abs() > MAX_DISC {
        return Err(Error::OutOfRange(format!("|D| = {} not in 1..={MAX_DISC}", d.unsigned_abs())));
    }
    Ok(())
}

/// The primes excluded from comparisons under the chosen policy.
fn resolve_mask(cli: &Cli, fields: &[&NumberField], limit: usize) -> Result<BTreeSet<u64>> {
    let exclude: BTreeSet<u64> = cli.exclude.iter().copied().collect();
    let mut undetermined = BTreeSet::new();
    for f in fields {
        undetermined.extend(f.undetermined_primes()?.into_iter().filter(|&p| p <= limit as u64));
    }
    match cli.mask {
        MaskPolicy::Auto => Ok(exclude.union(&undetermined).copied().collect()),
        MaskPolicy::OverridesRequired if !undetermined.is_empty() => {
            Err(Error::UndeterminedPrime(undetermined.into_iter().collect()))
        }
        MaskPolicy::Strict | MaskPolicy::OverridesRequired => {
            let bad: Vec<u64> = undetermined.difference(&exclude).copied().collect();
            if bad.is_empty() {
                Ok(exclude)
            } else {
                Err(Error::UndeterminedPrime(bad))
            }
        }
    }
}

fn mask_string(mask: &BTreeSet<u64>) -> String {
    if mask.is_empty() {
        return "none".into();
    }
    mask.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

fn cell(z: &CoeffSeries, n: u64) -> String {
    z.get(n).map_or_else(|| "masked".to_string(), |c| c.to_string())
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Zeta { field, limit } => cmd_zeta(cli, field, *limit),
        Command::Equiv { k, l, limit } => cmd_equiv(cli, k, l, *limit),
        Command::Twist { field, d, limit } => cmd_twist(cli, field, *d, *limit),
        Command::Gassmann { group, h1, h2 } => cmd_gassmann(group, h1, h2),
        Command::Classgroup { d, limit, characters } => cmd_classgroup(*d, *limit, *characters),
        Command::Qsm { field, limit, beta, d, modulus, gamma } => {
            cmd_qsm(cli, field, *limit, *beta, *d, *modulus, *gamma)
        }
        Command::Count { k, l, modulus, limit } => cmd_count(cli, k, l, *modulus, *limit),
        Command::Psi { k, l, limit } => cmd_psi(cli, k, l, *limit),
        Command::Fetch { label, endpoint } => cmd_fetch(cli, label, endpoint.as_deref()),
    }
}

fn cmd_zeta(cli: &Cli, path: &Path, limit: usize) -> Result<Report> {
    check_limit(limit)?;
    let field = load_field(path)?;
    let mask = resolve_mask(cli, &[&field], limit)?;
    let z = zeta_coeffs(&field, limit)?.masked_by(&mask);
    let mut t = Table::new(&["n", "a_n"])
        .meta("field", field.label())
        .meta("limit", limit)
        .meta("mask", mask_string(z.mask()));
    for n in 1..=limit as u64 {
        t.push(vec![n.to_string(), cell(&z, n)]);
    }
    Ok(Report::table(t))
}

fn cmd_equiv(cli: &Cli, k: &Path, l: &Path, limit: usize) -> Result<Report> {
    check_limit(limit)?;
    let (k, l) = (load_field(k)?, load_field(l)?);
    let mask = resolve_mask(cli, &[&k, &l], limit)?;
    let zk = zeta_coeffs(&k, limit)?.masked_by(&mask);
    let zl = zeta_coeffs(&l, limit)?.masked_by(&mask);
    let r = compare_series(&zk, &zl, &mask)?;
    let mut t = Table::new(&["n", "a_n(K)", "a_n(L)"])
        .meta("fields", format!("{} vs {}", k.label(), l.label()))
        .meta("limit", limit)
        .meta("mask", mask_string(&r.masked));
    for n in 1..=limit as u64 {
        t.push(vec![n.to_string(), cell(&zk, n), cell(&zl, n)]);
    }
    let detail = match r.first_mismatch {
        None => format!("equal on {} unmasked n <= {limit}", r.compared),
        Some(n) => format!("first mismatch at n = {n}"),
    };
    Ok(Report::verdict(r.equal, detail, t))
}

fn cmd_twist(cli: &Cli, path: &Path, d: i64, limit: usize) -> Result<Report> {
    check_limit(limit)?;
    check_disc(d)?;
    let field = load_field(path)?;
    resolve_mask(cli, &[&field], limit)?;
    let r = artin_factorization_check(&field, d, limit)?;
    let extra: BTreeSet<u64> = cli.exclude.iter().copied().collect();
    let chi = DirichletChar::quadratic(d)?;
    let zk = zeta_coeffs(&field, limit)?;
    let product = crate::lseries::dirichlet_convolve(&zk, &twist_coeffs(&zk, &chi))?.masked_by(&r.report.masked);
    let comp = NumberField::new("KM", r.compositum.clone(), Default::default())?;
    let zm = zeta_coeffs(&comp, limit)?.masked_by(&r.report.masked);
    let report = compare_series(&zm, &product, &extra)?;
    let mut t = Table::new(&["n", "zeta_KM", "zeta_K*L_K(chi)"])
        .meta("field", field.label())
        .meta("D", d)
        .meta("compositum", &r.compositum)
        .meta("limit", limit)
        .meta("mask", mask_string(&report.masked));
    for n in 1..=limit as u64 {
        t.push(vec![n.to_string(), cell(&zm, n), cell(&product, n)]);
    }
    let detail = match report.first_mismatch {
        None => format!("Artin factorization holds on {} unmasked n <= {limit}", report.compared),
        Some(n) => format!("Artin factorization fails at n = {n}"),
    };
    Ok(Report::verdict(report.equal, detail, t))
}

fn cmd_gassmann(path: &Path, h1: &str, h2: &str) -> Result<Report> {
    let (g, subs) = load_group(path)?;
    let get = |name: &str| {
        subs.get(name)
            .ok_or_else(|| Error::Parse(format!("no subgroup named {name:?}")))
    };
    let (s1, s2) = (get(h1)?, get(h2)?);
    let r = gassmann_equivalent(&g, s1, s2)?;
    let perm_char = if s1.order() == s2.order() {
        permutation_character_equal(&g, s1, s2)?.to_string()
    } else {
        "index mismatch".to_string()
    };
    let mut t = Table::new(&["class", "size", "h1", "h2"])
        .meta("group_order", g.order())
        .meta("h1", format!("{h1} (order {})", s1.order()))
        .meta("h2", format!("{h2} (order {})", s2.order()))
        .meta("permutation_character_equal", perm_char)
        .meta("conjugate", r.conjugate);
    for (i, (c, &(a, b))) in g.classes().iter().zip(&r.class_counts).enumerate() {
        t.push(vec![i.to_string(), c.len().to_string(), a.to_string(), b.to_string()]);
    }
    let detail = match r.witness_class {
        None => format!("equivalent, {}", if r.conjugate { "conjugate" } else { "non-conjugate" }),
        Some(c) => format!("not equivalent: class {c} meets the subgroups differently"),
    };
    Ok(Report::verdict(r.equivalent, detail, t))
}

fn cmd_classgroup(d: i64, limit: usize, characters: bool) -> Result<Report> {
    check_limit(limit)?;
    check_disc(d)?;
    let cg = ClassGroup::new(d)?;
    let forms: Vec<String> = cg.forms().iter().map(|f| f.to_string()).collect();
    let structure: Vec<String> = cg.structure().iter().map(u32::to_string).collect();
    let base = |header: &[&str]| {
        Table::new(header)
            .meta("D", d)
            .meta("h", cg.class_number())
            .meta("structure", if structure.is_empty() { "1".into() } else { structure.join("x") })
            .meta("forms", forms.join(" "))
    };
    let k = NumberField::quadratic(format!("Q(sqrt {d})"), d)?;
    let z = zeta_coeffs(&k, limit)?;
    let counts = cg.ideal_counts_up_to(limit as u64);
    let first_bad = (1..=limit).find(|&n| {
        let total: u64 = counts.iter().map(|c| c[n]).sum();
        z.integer(n as u64) != Some(total as i64)
    });
    let mut t;
    if characters {
        t = base(&["n", "character", "re", "im"]);
        for chi in cg.characters() {
            let l = cg.class_char_l_coeffs(&chi, limit)?;
            let label = chi.exps.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
            for n in 1..=limit as u64 {
                let c = l.get(n).expect("unmasked").to_complex();
                t.push(vec![n.to_string(), label.clone(), fmt_f64(c.re), fmt_f64(c.im)]);
            }
        }
    } else {
        t = base(&["n", "class", "count"]);
        for n in 1..=limit {
            for (i, f) in cg.forms().iter().enumerate() {
                t.push(vec![n.to_string(), f.to_string(), counts[i][n].to_string()]);
            }
        }
    }
    let detail = match first_bad {
        None => format!("h({d}) = {}; class counts sum to a_n for n <= {limit}", cg.class_number()),
        Some(n) => format!("class counts disagree with a_n at n = {n}"),
    };
    Ok(Report::verdict(first_bad.is_none(), detail, t))
}

fn fmt_f64(x: f64) -> String {
    // -0 prints as 0
    format!("{}", x + 0.0)
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn cmd_qsm(
    cli: &Cli,
    path: &Path,
    limit: usize,
    beta: f64,
    d: Option<i64>,
    modulus: Option<u64>,
    gamma: u64,
) -> Result<Report> {
    check_limit(limit)?;
    let field = load_field(path)?;
    let mask = resolve_mask(cli, &[&field], limit)?;
    let q = TruncatedQSM::new(&field, limit as u64, &mask)?;
    let mut t = Table::new(&["quantity", "route_a", "route_b", "diff", "bound"])
        .meta("field", field.label())
        .meta("limit", limit)
        .meta("beta", beta)
        .meta("mask", mask_string(&mask));
    let mut pass = true;
    let mut row = |t: &mut Table, name: String, a: String, b: String, diff: f64, bound: f64| {
        pass &= diff <= bound;
        t.push(vec![name, a, b, fmt_f64(diff), fmt_f64(bound)]);
    };

    let z = q.partition_function(beta)?;
    let zs = q.series(beta)?;
    row(&mut t, "partition_function".into(), fmt_f64(z), fmt_f64(zs), (z - zs).abs(), 0.0);

    // smallest prime ideal: e_P and the KMS defect of (mu_P, mu_P^*)
    if let Some(p) = q.basis().iter().find(|m| m.exps().len() == 1 && m.exps().values().all(|&e| e == 1)) {
        let p: IdealVec = p.clone();
        let np = p.norm() as f64;
        let ep = q.gibbs_expectation(&Operator::projection(p.clone()), beta)?.re;
        let small = TruncatedQSM::new(&field, limit as u64 / p.norm(), &mask)?.partition_function(beta)?;
        let tail = np.powf(-beta) * (z - small) / z;
        row(&mut t, format!("gibbs(e_{p})"), fmt_f64(ep), fmt_f64(np.powf(-beta)), (ep - np.powf(-beta)).abs(), tail + 1e-15);
        let defect = q.kms_defect(&Operator::mu(p.clone()), &Operator::mu_star(p.clone()), beta)?;
        row(&mut t, format!("kms_defect(mu_{p}, mu_{p}*)"), fmt_f64(defect), fmt_f64(tail), (defect - tail).abs(), 1e-12);
    }

    let chi = match (d, modulus) {
        (Some(_), Some(_)) => return Err(Error::OutOfRange("give at most one of --twist and --mod".into())),
        (Some(d), None) => {
            check_disc(d)?;
            Some(DirichletChar::quadratic(d)?)
        }
        (None, Some(p)) => {
            let order = u32::try_from(p.saturating_sub(1)).map_err(|_| Error::OutOfRange(format!("modulus {p}")))?;
            Some(DirichletChar::prime_modulus(p, order, 1)?)
        }
        (None, None) => None,
    };
    if let Some(chi) = chi {
        let v = q.kms_state_value(&chi, gamma, beta)?;
        row(
            &mut t,
            format!("kms_value(chi mod {}, gamma={gamma})", chi.modulus()),
            fmt_complex(v.route_a),
            fmt_complex(v.route_b),
            v.diff(),
            if gamma == 1 { 0.0 } else { 1e-12 },
        );
    }
    let detail = if pass { "routes agree within bounds" } else { "a route difference exceeds its bound" };
    Ok(Report::verdict(pass, detail, t))
}

fn cmd_count(cli: &Cli, k: &Path, l: &Path, m: u64, limit: usize) -> Result<Report> {
    check_limit(limit)?;
    if m == 0 || m > MAX_DISC as u64 {
        return Err(Error::OutOfRange(format!("modulus {m}")));
    }
    let (k, l) = (load_field(k)?, load_field(l)?);
    let mask = resolve_mask(cli, &[&k, &l], limit)?;
    let r = count_identity_check(&k, &l, m, limit as u64, &mask)?;
    let mut t = Table::new(&["n", "gamma", "b_K", "b_L"])
        .meta("fields", format!("{} vs {}", k.label(), l.label()))
        .meta("modulus", m)
        .meta("limit", limit)
        .meta("mask", mask_string(&r.masked));
    let last = r.first_failure.map_or(limit as u64, |(n, _)| n);
    for n in 1..=last {
        if crate::arith::integer::gcd(n, m) != 1 || crate::lseries::divisible_by_any(n, &r.masked) {
            continue;
        }
        let (a, b) = (frob_count(&k, m, n)?, frob_count(&l, m, n)?);
        let g = n % m;
        t.push(vec![n.to_string(), g.to_string(), a.table[&g].to_string(), b.table[&g].to_string()]);
    }
    let detail = match r.first_failure {
        None => format!("counts agree for {} n <= {limit} prime to {m}", r.checked),
        Some((n, g)) => format!("counts differ at n = {n}, gamma = {g}"),
    };
    Ok(Report::verdict(r.pass, detail, t))
}

fn cmd_psi(cli: &Cli, k: &Path, l: &Path, limit: usize) -> Result<Report> {
    check_limit(limit)?;
    let (kf, lf) = (load_field(k)?, load_field(l)?);
    let mask = resolve_mask(cli, &[&kf, &lf], limit)?;
    let psi = match build_psi(&kf, &lf, limit as u64, &mask) {
        Ok(p) => p,
        Err(e @ (Error::NotEquivalent(_) | Error::Obstruction(_))) => {
            return Ok(Report { verdict: Some((false, e.to_string())), table: None, message: None })
        }
        Err(e) => return Err(e),
    };
    let pairs = psi_on_ideals(&kf, &psi)?;
    let norm_ok = pairs.iter().all(|(a, b)| a.norm() == b.norm());
    let images: BTreeSet<&IdealVec> = pairs.iter().map(|(_, b)| b).collect();
    let injective = images.len() == pairs.len();
    let mut t = Table::new(&["p", "k_index", "f", "l_index"])
        .meta("fields", format!("{} vs {}", kf.label(), lf.label()))
        .meta("limit", limit)
        .meta("mask", mask_string(&psi.mask))
        .meta("ideals", pairs.len());
    for (p, i, f, j) in psi.rows() {
        t.push(vec![p.to_string(), i.to_string(), f.to_string(), j.to_string()]);
    }
    let pass = norm_ok && injective;
    let detail = format!(
        "matched {} prime ideals; {} ideals mapped {}",
        psi.primes.len(),
        pairs.len(),
        if pass { "norm-preserving and injective" } else { "with a norm or injectivity failure" }
    );
    Ok(Report::verdict(pass, detail, t))
}

fn cmd_fetch(cli: &Cli, label: &str, endpoint: Option<&str>) -> Result<Report> {
    let endpoint = endpoint.map_or_else(crate::fetch::endpoint, str::to_string);
    let out = cli
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{label}.field")));
    let url = crate::fetch::fetch_field(&endpoint, label, &out)?;
    Ok(Report {
        verdict: None,
        table: None,
        message: Some(format!("wrote {} from {url}", out.display())),
    })
}
