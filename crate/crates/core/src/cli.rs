//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification or validation failure,
//! 2 invalid input, 3 a budget was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::closed::{count_closed, printed_general_deviation, printed_hermitian_deviation, printed_t0_deviation};
use crate::counting::{count, Budgets, CountRecord, Method, CSV_HEADER};
use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::field::checked_order;
use crate::lpoly::{divisibility, is_supersingular_lpoly, lpoly_of, minimal_period, weil_spectrum, LPolynomial};
use crate::par::Exec;
use crate::verify::{run_verify, VerifyConfig};

#[derive(Parser, Debug)]
#[command(
    name = "hermitian",
    version,
    about = "Point counts, L-polynomials and spectra of y^(p^k) + y = x^(p^(kt) + 1)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Worker threads for the enumeration engines (1 runs sequentially).
    #[arg(long, global = true, env = "HERMITIAN_THREADS")]
    pub threads: Option<usize>,
    /// Largest p^(2n) the brute-force counter may enumerate.
    #[arg(long, global = true, default_value_t = Budgets::default().brute, value_parser = positive)]
    pub budget_brute: u64,
    /// Largest field size p^n the other enumerators may walk.
    #[arg(long, global = true, default_value_t = Budgets::default().enumeration, value_parser = positive)]
    pub budget_enum: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Brute,
    Fiber,
    Subgroup,
    Closed,
    /// Published `t = 1` formula.
    #[value(name = "corollary12")]
    PrintedHermitian,
    /// Published `t = 0` formula (p odd).
    #[value(name = "theorem45")]
    PrintedT0,
    /// Published general formula, as printed.
    #[value(name = "theorem11")]
    PrintedGeneral,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CurveArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub t: u64,
}

impl CurveArgs {
    fn params(&self) -> Result<CurveParams> {
        CurveParams::new(self.p, self.k, self.t)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count points over F_{p^n}.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        /// Degree, or the first degree when --n-max is given.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = CountMethod::Closed)]
        method: CountMethod,
    },
    /// L-polynomial over F_p from closed-form counts.
    Lpoly {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 64)]
        max_genus: u64,
    },
    /// Whether L(A) divides L(B); curves given as p,k,t.
    Divides {
        #[arg(long, value_parser = parse_curve)]
        a: CurveParams,
        #[arg(long, value_parser = parse_curve)]
        b: CurveParams,
        #[arg(long, default_value_t = 4096)]
        max_genus: u64,
    },
    /// Run every consistency suite over a parameter grid.
    Verify {
        /// Primes, e.g. 2,3.
        #[arg(long, default_value = "2,3", value_parser = parse_list)]
        p: IntList,
        /// Values or inclusive ranges, e.g. 1-2.
        #[arg(long, default_value = "1-2", value_parser = parse_list)]
        k: IntList,
        #[arg(long, default_value = "0-2", value_parser = parse_list)]
        t: IntList,
        #[arg(long)]
        n_max: Option<u64>,
        /// Largest p^n enumerated.
        #[arg(long, default_value_t = 1 << 12)]
        field_max: u64,
        #[arg(long, default_value_t = 64)]
        max_genus: u64,
    },
    /// Time the counters over growing n.
    Bench {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 2)]
        n_min: u64,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
    },
}

fn positive(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_curve(s: &str) -> std::result::Result<CurveParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, k, t] = parts[..] else {
        return Err(format!("expected p,k,t, got {s:?}"));
    };
    let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    let p = u32::try_from(num(p)?).map_err(|e| e.to_string())?;
    CurveParams::new(p, num(k)?, num(t)?).map_err(|e| e.to_string())
}

/// Comma-separated values and inclusive `a-b` ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<u64>);

fn parse_list(s: &str) -> std::result::Result<IntList, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        match item.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {item}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(item)?),
        }
    }
    Ok(IntList(out))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Validation(_)
        | Error::Inconsistent(_)
        | Error::SpectrumRounding { .. }
        | Error::ReconstructionMismatch { .. }
        | Error::NegativeMultiplicity { .. } => 1,
        _ => 2,
    }
}

fn configure_threads(threads: Option<usize>) -> Exec {
    match threads {
        Some(1) => Exec::Sequential,
        Some(n) => {
            #[cfg(feature = "parallel")]
            {
                // A second call in the same process keeps the first pool.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            let _ = n;
            Exec::Parallel
        }
        None => Exec::default(),
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = dispatch(&cli, &mut buf, stdout);
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &buf).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(&buf).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return 2;
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, console: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let exec = configure_threads(g.threads);
    let budgets = Budgets { brute: g.budget_brute, enumeration: g.budget_enum, subgroup: g.budget_enum };
    match &cli.command {
        Command::Count { curve, n, n_max, method } => {
            let params = curve.params()?;
            let degrees: Vec<u64> = match (n, n_max) {
                (Some(n), None) => vec![*n],
                (start, Some(top)) => (start.unwrap_or(1)..=*top).collect(),
                (None, None) => return Err(Error::InvalidParameter("give --n or --n-max".into())),
            };
            if degrees.contains(&0) {
                return Err(Error::InvalidParameter("n must be at least 1".into()));
            }
            let records =
                degrees.iter().map(|&n| count_one(&params, n, *method, &budgets, exec)).collect::<Result<Vec<_>>>()?;
            write_counts(out, &records, g.format);
            Ok(0)
        }
        Command::Lpoly { curve, max_genus } => {
            let params = curve.params()?;
            let l = checked_lpoly(&params, *max_genus)?;
            write_lpoly(out, &l, g.format);
            Ok(0)
        }
        Command::Divides { a, b, max_genus } => {
            if a.p != b.p {
                return Err(Error::InvalidParameter("both curves must live over the same F_p".into()));
            }
            let la = checked_lpoly(a, *max_genus)?;
            let lb = checked_lpoly(b, *max_genus)?;
            let r = divisibility(&la.poly, &lb.poly)?;
            let (pa, pb) = (minimal_period(&weil_spectrum(a)?), minimal_period(&weil_spectrum(b)?));
            let period_filter = pb % pa == 0;
            let v = serde_json::json!({
                "a": a, "b": b,
                "divides": r.divides,
                "period_filter": period_filter,
                "quotient_integral": r.quotient_integral,
                "period_a": pa, "period_b": pb,
            });
            match g.format {
                Format::Json => writeln!(out, "{v}").ok(),
                Format::Csv => {
                    writeln!(out, "a,b,divides,period_filter\n\"{a}\",\"{b}\",{},{period_filter}", r.divides).ok()
                }
                Format::Table => {
                    writeln!(out, "L({a}) | L({b}): {}\nperiod filter ({pa} | {pb}): {period_filter}", r.divides).ok()
                }
            };
            Ok(0)
        }
        Command::Verify { p, k, t, n_max, field_max, max_genus } => {
            let ps =
                p.0.iter().map(|&v| u32::try_from(v).map_err(|_| Error::NotPrime(v))).collect::<Result<Vec<_>>>()?;
            let cfg = VerifyConfig {
                ps,
                ks: k.0.clone(),
                ts: t.0.clone(),
                n_max: *n_max,
                field_max: *field_max,
                max_genus: *max_genus,
                budgets,
                exec,
            };
            let report = run_verify(&cfg)?;
            let body = match g.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Table => report.to_table(),
            };
            out.extend_from_slice(body.as_bytes());
            if g.out.is_none() {
                out.extend_from_slice(report.summary_line().as_bytes());
                out.push(b'\n');
            } else {
                let _ = writeln!(console, "{}", report.summary_line());
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Bench { curve, n_min, n_max } => {
            let params = curve.params()?;
            let rows = bench(&params, *n_min, *n_max, &budgets, exec);
            match g.format {
                Format::Json => {
                    for r in &rows {
                        let v = serde_json::json!({"method": r.0, "n": r.1, "field_size": r.2, "seconds": r.3});
                        let _ = writeln!(out, "{v}");
                    }
                }
                Format::Csv => {
                    let _ = writeln!(out, "method,n,field_size,seconds");
                    for r in &rows {
                        let _ = writeln!(out, "{},{},{},{:.9}", r.0, r.1, r.2, r.3);
                    }
                }
                Format::Table => {
                    let _ = writeln!(out, "{:<9} {:>4} {:>22} {:>14}", "method", "n", "field_size", "seconds");
                    for r in &rows {
                        let _ = writeln!(out, "{:<9} {:>4} {:>22} {:>14.9}", r.0, r.1, r.2, r.3);
                    }
                }
            }
            Ok(0)
        }
    }
}

fn count_one(params: &CurveParams, n: u64, method: CountMethod, budgets: &Budgets, exec: Exec) -> Result<CountRecord> {
    let formula = |d: crate::closed::Deviation| -> Result<CountRecord> {
        Ok(CountRecord::new(*params, n, d.count()?, Method::Formula))
    };
    let record = match method {
        CountMethod::Brute => crate::counting::count_brute_with(params, n, budgets, exec)?,
        CountMethod::Fiber => crate::counting::count_fiber_with(params, n, budgets, exec)?,
        CountMethod::Subgroup => crate::counting::count_subgroup_with(params, n, budgets, exec)?,
        CountMethod::Closed => count(params, n, Method::Closed, budgets)?,
        CountMethod::PrintedHermitian => {
            require_t(params, 1, "corollary12")?;
            formula(printed_hermitian_deviation(params.p, params.k, n)?)?
        }
        CountMethod::PrintedT0 => {
            require_t(params, 0, "theorem45")?;
            formula(printed_t0_deviation(params.p, params.k, n)?)?
        }
        CountMethod::PrintedGeneral => formula(printed_general_deviation(params.p, params.k, params.t, n)?)?,
    };
    record.check_invariants()?;
    Ok(record)
}

fn require_t(params: &CurveParams, t: u64, name: &str) -> Result<()> {
    if params.t != t {
        return Err(Error::InvalidParameter(format!("{name} applies to t = {t} only")));
    }
    Ok(())
}

fn checked_lpoly(params: &CurveParams, max_genus: u64) -> Result<LPolynomial> {
    let g = params.genus_u64().filter(|&g| g <= max_genus).ok_or_else(|| Error::BudgetExceeded {
        what: "genus",
        needed: params.genus().to_string(),
        budget: max_genus,
    })?;
    let l = lpoly_of(params)?;
    l.check_functional_equation()?;
    if !is_supersingular_lpoly(&l.poly, params.p, 1) {
        return Err(Error::Validation(format!("L-polynomial of {params} fails the valuation test")));
    }
    debug_assert_eq!(l.genus, g);
    Ok(l)
}

fn write_counts(out: &mut Vec<u8>, records: &[CountRecord], format: Format) {
    match format {
        Format::Json => {
            for r in records {
                let _ = writeln!(out, "{}", r.to_json());
            }
        }
        Format::Csv => {
            let _ = writeln!(out, "{CSV_HEADER}");
            for r in records {
                let _ = writeln!(out, "{}", r.csv_row());
            }
        }
        Format::Table => {
            let _ = writeln!(out, "{:<14} {:>4} {:>24} {:>8}", "curve", "n", "count", "method");
            for r in records {
                let _ = writeln!(out, "{:<14} {:>4} {:>24} {:>8}", r.params.to_string(), r.n, r.count, r.method);
            }
        }
    }
}

fn write_lpoly(out: &mut Vec<u8>, l: &LPolynomial, format: Format) {
    match format {
        Format::Json => {
            let _ = writeln!(out, "{}", l.to_json());
        }
        Format::Csv => {
            let _ = writeln!(out, "i,coeff");
            for i in 0..=2 * l.genus as usize {
                let _ = writeln!(out, "{i},{}", l.poly.coeff(i));
            }
        }
        Format::Table => {
            let _ = writeln!(out, "q = {}, genus = {}\nL(T) = {}", l.q, l.genus, l.poly);
        }
    }
}

/// `(method, n, p^n, seconds)`; enumeration rows only within budget.
pub fn bench(
    params: &CurveParams,
    n_min: u64,
    n_max: u64,
    budgets: &Budgets,
    exec: Exec,
) -> Vec<(&'static str, u64, String, f64)> {
    let mut rows = Vec::new();
    for n in n_min.max(1)..=n_max {
        let size = crate::curve::big_pow(params.p, n).to_string();
        let time = |f: &dyn Fn() -> Option<BigInt>, reps: u32| -> Option<f64> {
            let start = Instant::now();
            for _ in 0..reps {
                f()?;
            }
            Some(start.elapsed().as_secs_f64() / reps as f64)
        };
        if checked_order(params.p, 2 * n as usize, budgets.brute).is_some() {
            if let Some(s) =
                time(&|| crate::counting::count_brute_with(params, n, budgets, exec).ok().map(|r| r.count), 1)
            {
                rows.push(("brute", n, size.clone(), s));
            }
        }
        if checked_order(params.p, n as usize, budgets.enumeration).is_some() {
            if let Some(s) =
                time(&|| crate::counting::count_fiber_with(params, n, budgets, exec).ok().map(|r| r.count), 1)
            {
                rows.push(("fiber", n, size.clone(), s));
            }
            if let Some(s) =
                time(&|| crate::counting::count_subgroup_with(params, n, budgets, exec).ok().map(|r| r.count), 1)
            {
                rows.push(("subgroup", n, size.clone(), s));
            }
        }
        if let Some(s) = time(&|| Some(count_closed(params, n).count), 100) {
            rows.push(("closed", n, size, s));
        }
    }
    rows
}
