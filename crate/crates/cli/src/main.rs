use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use overasym_core::asymptotic::{
    coeff_a, coeff_a_diff, error_budget, error_budget_diff, n_min, n_min_diff, threshold_n,
    threshold_n0, DifferenceExpansion, ErrorBudget, Expansion, PiLaurent, ShiftExpansion,
};
use overasym_core::circle::{self, certify, default_precision, zuckerman_partial};
use overasym_core::exact::{export_csv, CacheStore, Method, OverpartitionTable};
use overasym_core::verify::{self, SampleRange, Statement, VerificationReport};
use overasym_core::{Error, Result};

const EXIT_FINDING: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;

/// Cached tables are built up to a multiple of this, so nearby requests
/// share one file.
const TABLE_GRANULE: u64 = 1024;

#[derive(Parser, Debug)]
#[command(name = "overasym", version, about = "Overpartition values, series and effective asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Precision {
    /// Working precision in bits (at least 64). Defaults to
    /// max(128, ⌈π√n/ln 2⌉ + 64).
    #[arg(long, value_parser = clap::value_parser!(u32).range(64..))]
    bits: Option<u32>,
}

#[derive(Args, Debug)]
struct Cache {
    /// Directory for cached value tables.
    #[arg(long, env = "OVERASYM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact values p̄(0..=n_max).
    Table {
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value = "theta")]
        method: Method,
        #[command(flatten)]
        cache: Cache,
        #[command(flatten)]
        out: Output,
    },
    /// Truncated series with its bound, or certified p̄(n) when --N is absent.
    Rigorous {
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        order: Option<u64>,
        #[command(flatten)]
        prec: Precision,
        #[command(flatten)]
        out: Output,
    },
    /// A_k(t) as a Laurent polynomial in π.
    Coeff {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        out: Output,
    },
    /// A_j(t, r) as a Laurent polynomial in π.
    CoeffDiff {
        #[arg(long)]
        j: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Main term and bound of the expansion of p̄(n + k).
    Expand {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long = "N")]
        order: u32,
        #[command(flatten)]
        prec: Precision,
        #[command(flatten)]
        out: Output,
    },
    /// Main term and bound of the expansion of Δ^r_j(p̄)(n - j).
    DiffExpand {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        r: u32,
        #[arg(long = "N")]
        order: u32,
        #[command(flatten)]
        prec: Precision,
        #[command(flatten)]
        out: Output,
    },
    /// Check a statement against exact values; exits 0 iff every record passes.
    Verify(VerifyArgs),
    /// Thresholds and error constants, or an empirical positivity scan.
    Threshold {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long = "N")]
        order: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        j: Option<u64>,
        /// Scan Δ^r_j(p̄) for positivity up to this n.
        #[arg(long)]
        scan_max: Option<u64>,
        #[command(flatten)]
        prec: Precision,
        #[command(flatten)]
        cache: Cache,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// thm1.1, thm1.2, lemma2.1, lemma2.2, wxz, wxz_positivity or corollary.
    #[arg(long)]
    statement: Statement,
    #[arg(long = "N")]
    order: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    j: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    /// First n; defaults to the statement's threshold.
    #[arg(long)]
    from: Option<u64>,
    /// Last n; defaults to from + span.
    #[arg(long)]
    to: Option<u64>,
    /// Number of steps past `from` when --to is absent.
    #[arg(long, default_value_t = 500)]
    span: u64,
    /// Fixed stride; without it sampling is dense for 500 points, then geometric.
    #[arg(long)]
    stride: Option<u64>,
    /// Sample points for the corollary ratio, comma separated.
    #[arg(long = "n", value_delimiter = ',')]
    n_list: Vec<u64>,
    #[command(flatten)]
    prec: Precision,
    #[command(flatten)]
    cache: Cache,
    #[command(flatten)]
    out: Output,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("--{flag} is required here")))
}

fn store(cache: &Cache) -> CacheStore {
    let dir = cache.cache_dir.clone().unwrap_or_else(|| {
        std::env::var_os("HOME")
            .map(PathBuf::from)
            .unwrap_or_default()
            .join(".overasym")
    });
    CacheStore::new(dir)
}

/// `p̄(0..=n_max)` from a cached table at least that large.
fn load_table(cache: &Cache, n_max: u64) -> Result<OverpartitionTable> {
    let size = n_max.div_ceil(TABLE_GRANULE).max(1) * TABLE_GRANULE;
    let t = store(cache).load_or_build(Method::ThetaRecurrence, size)?;
    t.truncated(n_max)
}

fn emit(out: &Output, body: &[u8]) -> Result<()> {
    match &out.output {
        Some(path) => write_file(path, body),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &[u8]) -> Result<()> {
    fs::write(path, body)?;
    Ok(())
}

fn json_line(v: &impl serde::Serialize) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

fn run_table(n_max: u64, method: Method, cache: &Cache, out: &Output) -> Result<u8> {
    let t = store(cache).load_or_build(method, n_max)?;
    let body = match out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            export_csv(&t, &mut buf)?;
            buf
        }
        Format::Json => json_line(&json!({
            "method": method.as_str(),
            "values": t.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }))?,
        Format::Text => t
            .values()
            .iter()
            .enumerate()
            .map(|(n, v)| format!("{n}\t{v}\n"))
            .collect::<String>()
            .into_bytes(),
    };
    emit(out, &body)?;
    Ok(0)
}

fn run_rigorous(n: u64, order: Option<u64>, prec: &Precision, out: &Output) -> Result<u8> {
    let bits = prec.bits.unwrap_or_else(|| default_precision(n));
    if let Some(order) = order {
        let s = zuckerman_partial(n, order, bits)?;
        let body = match out.format {
            Format::Csv => csv_bytes(&circle::CSV_HEADER, &[circle::csv_row(&s, None).to_vec()]),
            Format::Json => json_line(&s)?,
            Format::Text => format!(
                "n = {n}, N = {order}\nseries = {}\nengel_bound = {}\n",
                s.value, s.engel_bound
            )
            .into_bytes(),
        };
        emit(out, &body)?;
        return Ok(0);
    }
    let c = certify(n, bits)?;
    let body = match out.format {
        Format::Csv => {
            let s = zuckerman_partial(n, c.order, bits)?;
            csv_bytes(&circle::CSV_HEADER, &[circle::csv_row(&s, Some(&c.value)).to_vec()])
        }
        Format::Json => json_line(&json!({
            "n": n,
            "value": c.value.to_string(),
            "N": c.order,
            "engel_bound": c.engel_bound,
            "slack": c.slack,
            "precision_bits": c.precision_bits,
        }))?,
        Format::Text => format!(
            "p̄({n}) = {}\nN = {}, engel_bound = {}, slack = {}\n",
            c.value, c.order, c.engel_bound, c.slack
        )
        .into_bytes(),
    };
    emit(out, &body)?;
    Ok(0)
}

fn run_coeff(p: &PiLaurent, out: &Output) -> Result<u8> {
    let body = match out.format {
        Format::Json => json_line(p)?,
        Format::Csv => csv_bytes(
            &["exponent", "coefficient"],
            &p.terms()
                .map(|(e, c)| vec![e.to_string(), c.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Text => format!("{p}\n").into_bytes(),
    };
    emit(out, &body)?;
    Ok(0)
}

fn run_expansion(e: &Expansion, n_min: u64, out: &Output) -> Result<u8> {
    let body = match out.format {
        Format::Json => json_line(e)?,
        Format::Csv => csv_bytes(
            &["n", "main", "bound", "n_min"],
            &[vec![
                e.n.to_string(),
                e.main.to_string(),
                e.bound.to_string(),
                n_min.to_string(),
            ]],
        ),
        Format::Text => format!(
            "n = {} (threshold {n_min})\nmain = {}\nbound = {}\n",
            e.n, e.main, e.bound
        )
        .into_bytes(),
    };
    emit(out, &body)?;
    Ok(0)
}

fn report_text(rep: &VerificationReport) -> String {
    let params: Vec<String> = rep
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let mut s = format!(
        "statement {} ({})\nrecords: {}\nfailures: {}\n",
        rep.statement,
        params.join(", "),
        rep.records.len(),
        rep.failures().count()
    );
    if let (Some(a), Some(b)) = (rep.records.first(), rep.records.last()) {
        s += &format!("range: {}..={}\n", a.n, b.n);
    }
    if let Some(start) = verify::passing_suffix_start(rep) {
        s += &format!("all-pass suffix starts at n = {start}\n");
    }
    for f in rep.failures().take(20) {
        s += &format!(
            "FAIL n = {}: remainder {} > bound {}\n",
            f.n, f.remainder, f.bound
        );
    }
    s += &format!("verdict: {}\n", if rep.verdict { "pass" } else { "fail" });
    s
}

fn run_verify(a: &VerifyArgs) -> Result<u8> {
    let bits = a.prec.bits;
    let range = |threshold: u64| -> Result<SampleRange> {
        let from = a.from.unwrap_or(threshold);
        let to = a.to.unwrap_or(from + a.span);
        SampleRange::new(from, to, a.stride)
    };
    let rep = match a.statement {
        Statement::Theorem11 => {
            let (order, k) = (need(a.order, "N")?, need(a.k, "k")?);
            let range = range(n_min(order, k)?)?;
            let table = load_table(&a.cache, (range.to as i64 + k.max(0)) as u64)?;
            verify::verify_theorem_1_1(&table, order, k, &range, bits)?
        }
        Statement::Theorem12 => {
            let (order, r, j) = (need(a.order, "N")?, need(a.r, "r")?, need(a.j, "j")?);
            let threshold = if order >= r { n_min_diff(order, r, j)? } else { 0 };
            let range = range(threshold)?;
            let table = load_table(&a.cache, range.to)?;
            verify::verify_theorem_1_2(&table, order, r, j, &range, bits)?
        }
        Statement::Lemma21 => verify::verify_lemma_2_1(need(a.m, "m")?, bits)?,
        Statement::Lemma22 => {
            let (m, k) = (need(a.m, "m")?, need(a.k, "k")?);
            let threshold = if m >= 2 { threshold_n0(m)? } else { 0 };
            let range = range(threshold)?;
            let table = load_table(&a.cache, (range.to as i64 + k.max(0)) as u64)?;
            verify::verify_lemma_2_2(&table, m, k, &range, bits)?
        }
        Statement::WxzUpper => {
            let r = need(a.r, "r")?;
            let range = range(r as u64)?;
            let table = load_table(&a.cache, range.to)?;
            verify::verify_wxz(&table, r, &range, bits)?
        }
        Statement::WxzPositivity => {
            let (r, j) = (need(a.r, "r")?, a.j.unwrap_or(1));
            let range = range(r as u64 * j)?;
            let table = load_table(&a.cache, range.to)?;
            verify::verify_wxz_positivity(&table, r, j, &range)?
        }
        Statement::CorollaryRatio => {
            let (r, j) = (need(a.r, "r")?, need(a.j, "j")?);
            let last = a.n_list.iter().copied().max().ok_or_else(|| {
                Error::Config("--n is required for the corollary ratio".into())
            })?;
            let table = load_table(&a.cache, last)?;
            verify::corollary_ratio(&table, r, j, &a.n_list, bits)?
        }
    };
    let body = match a.out.format {
        Format::Json => {
            let mut s = rep.to_json()?.into_bytes();
            s.push(b'\n');
            s
        }
        Format::Csv => {
            let mut buf = Vec::new();
            rep.write_csv(&mut buf)?;
            buf
        }
        Format::Text => report_text(&rep).into_bytes(),
    };
    emit(&a.out, &body)?;
    eprintln!("runtime_ms: {}", rep.runtime_ms);
    Ok(if rep.verdict { 0 } else { EXIT_FINDING })
}

fn budget_text(b: &ErrorBudget) -> String {
    format!(
        "N = {}\nshape = {:?}\nN(N+1) = {}\nN0(N+1) = {}\nn_min = {}\nE1_tilde = {}\nE2_tilde = {}\nE1_bar = {}\nE2_hat = {}\nE = {}\n",
        b.order, b.shape, b.n_of_m, b.n0, b.n_min, b.e1_tilde, b.e2_tilde, b.e1_bar, b.e2_hat, b.e
    )
}

#[allow(clippy::too_many_arguments)]
fn run_threshold(
    m: Option<u32>,
    order: Option<u32>,
    k: Option<i64>,
    r: Option<u32>,
    j: Option<u64>,
    scan_max: Option<u64>,
    prec: &Precision,
    cache: &Cache,
    out: &Output,
) -> Result<u8> {
    let bits = prec.bits.unwrap_or(128);
    let body = if let Some(scan_max) = scan_max {
        let (r, j) = (need(r, "r")?, j.unwrap_or(1));
        let table = load_table(cache, scan_max)?;
        let n0 = verify::positivity_threshold(&table, r, j, scan_max)?;
        match out.format {
            Format::Json => json_line(&json!({"r": r, "j": j, "scan_max": scan_max, "n0": n0}))?,
            Format::Csv => csv_bytes(
                &["r", "j", "scan_max", "n0"],
                &[vec![
                    r.to_string(),
                    j.to_string(),
                    scan_max.to_string(),
                    n0.map(|v| v.to_string()).unwrap_or_default(),
                ]],
            ),
            Format::Text => match n0 {
                Some(n0) => format!("Δ^{r}_{j}(p̄)(n) > 0 for {n0} ≤ n ≤ {scan_max} (empirical)\n"),
                None => format!("none observed: Δ^{r}_{j}(p̄)({scan_max}) ≤ 0\n"),
            }
            .into_bytes(),
        }
    } else if let Some(m) = m {
        let nm = threshold_n(m, bits)?;
        let n0 = threshold_n0(m)?;
        match out.format {
            Format::Json => json_line(&json!({"m": m, "N": nm, "N0": n0}))?,
            Format::Csv => csv_bytes(
                &["m", "N", "N0"],
                &[vec![m.to_string(), nm.to_string(), n0.to_string()]],
            ),
            Format::Text => format!("N({m}) = {nm}\nN0({m}) = {n0}\n").into_bytes(),
        }
    } else {
        let order = need(order, "N")?;
        let b = match (k, r) {
            (Some(k), None) => error_budget(order, k, bits)?,
            (None, Some(r)) => error_budget_diff(order, r, need(j, "j")?, bits)?,
            _ => {
                return Err(Error::Config(
                    "give exactly one of --k or --r (with --j)".into(),
                ))
            }
        };
        match out.format {
            Format::Json => json_line(&b)?,
            Format::Csv => csv_bytes(
                &["N", "n_min", "E1_tilde", "E2_tilde", "E1_bar", "E2_hat", "E"],
                &[vec![
                    b.order.to_string(),
                    b.n_min.to_string(),
                    b.e1_tilde.to_string(),
                    b.e2_tilde.to_string(),
                    b.e1_bar.to_string(),
                    b.e2_hat.to_string(),
                    b.e.to_string(),
                ]],
            ),
            Format::Text => budget_text(&b).into_bytes(),
        }
    };
    emit(out, &body)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Table {
            n_max,
            method,
            cache,
            out,
        } => run_table(n_max, method, &cache, &out),
        Command::Rigorous { n, order, prec, out } => run_rigorous(n, order, &prec, &out),
        Command::Coeff { k, t, out } => run_coeff(&coeff_a(k, t)?, &out),
        Command::CoeffDiff { j, r, t, out } => run_coeff(&coeff_a_diff(j, t, r)?, &out),
        Command::Expand {
            n,
            k,
            order,
            prec,
            out,
        } => {
            let x = ShiftExpansion::new(k, order, prec.bits.unwrap_or_else(|| default_precision(n)))?;
            run_expansion(&x.evaluate(n)?, x.n_min(), &out)
        }
        Command::DiffExpand {
            n,
            j,
            r,
            order,
            prec,
            out,
        } => {
            let bits = prec.bits.unwrap_or_else(|| default_precision(n));
            let x = DifferenceExpansion::new(j, r, order, bits)?;
            run_expansion(&x.evaluate(n)?, x.n_min(), &out)
        }
        Command::Verify(a) => run_verify(&a),
        Command::Threshold {
            m,
            order,
            k,
            r,
            j,
            scan_max,
            prec,
            cache,
            out,
        } => run_threshold(m, order, k, r, j, scan_max, &prec, &cache, &out),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CertificationFailed { .. } => EXIT_FINDING,
        Error::Config(_) | Error::Parse(_) => EXIT_USAGE,
        Error::Domain(_) | Error::OutOfRange { .. } | Error::BelowThreshold { .. } => EXIT_DOMAIN,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Cache(_) => EXIT_IO,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
