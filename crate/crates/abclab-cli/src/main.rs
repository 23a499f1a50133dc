//! `abclab`: batch front-end for the exact abc-triple experiments.
//!
//! Exit codes: 0 clean, 1 mathematical violation, 2 usage or I/O error,
//! 3 numeric failure (nev only).

mod rows;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use abclab::arith::build_spf_sieve;
use abclab::function_field::mason_stothers_check;
use abclab::gamma::{abc_margin, enumerate_triples, quality};
use abclab::nevanlinna::{check_residuals, geometric_radii, NevError, RatFuncC, ResidualConfig};
use abclab::pell::{pell_solve_with_limit, square_free_stats, PellError, DEFAULT_Y_LIMIT};
use abclab::poly::Poly;
use abclab::sweep::{power_range, sum_chunks, verify_range, Fault, PowerSummary, VerifySummary};

use rows::{f6, MsRow, NevCsvRow, PellRow, PowerCsvRow, Row, TripleRow, VerifyCsvRow};

const EXIT_CLEAN: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "abclab",
    version,
    about = "Exact sweeps and reports for abc-triple experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate coprime triples with heights, radicals, qualities.
    Triples(TriplesArgs),
    /// Run the exact verification sweep; exit 1 on any violation.
    Verify(VerifyArgs),
    /// Run the power-split sweep with both chain bounds; exit 1 on violation.
    Power(PowerArgs),
    /// Generate Pell solutions of x^2 - d y^2 = +-4 with square statistics.
    Pell(PellArgs),
    /// Check the polynomial abc inequality on given or random triples.
    Ms(MsArgs),
    /// Tabulate Nevanlinna functionals of a rational map over a radius grid.
    Nev(NevArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads for the sweep subcommands.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct TriplesArgs {
    /// Upper bound on a + b.
    #[arg(long)]
    bound: u32,
    /// Epsilon in the margin column n(abc) - (1 - eps) h.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Keep only rows with at least this quality.
    #[arg(long)]
    min_quality: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Upper bound on a + b.
    #[arg(long)]
    bound: u32,
    /// Decomposition depths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    n: Vec<u32>,
    /// Self-test: corrupt a sign so violations must be reported.
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PowerArgs {
    /// Upper bound on a + b.
    #[arg(long)]
    bound: u32,
    /// Power exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    m: Vec<u32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PellArgs {
    /// Values of d, comma separated (positive non-squares).
    #[arg(long, value_delimiter = ',')]
    d: Vec<u64>,
    /// How many solutions per d.
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Search ceiling on y for the fundamental solution.
    #[arg(long, default_value_t = DEFAULT_Y_LIMIT)]
    y_limit: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MsArgs {
    /// Coefficients of a, constant term first (e.g. "0,0,1" for t^2).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Coefficients of b.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Check this many random coprime triples instead.
    #[arg(long)]
    random: Option<usize>,
    /// Maximal degree in random mode.
    #[arg(long, default_value_t = 20)]
    maxdeg: usize,
    /// Seed in random mode.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NevArgs {
    /// Numerator coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    num: String,
    /// Denominator coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    den: String,
    #[arg(long, default_value_t = 100.0)]
    rmin: f64,
    #[arg(long, default_value_t = 10_000.0)]
    rmax: f64,
    /// Number of radii on the geometric grid.
    #[arg(long, default_value_t = 9)]
    points: usize,
    /// Quadrature nodes per circle.
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Triples(args) => run_triples(args),
        Cmd::Verify(args) => run_verify(args),
        Cmd::Power(args) => run_power(args),
        Cmd::Pell(args) => run_pell(args),
        Cmd::Ms(args) => run_ms(args),
        Cmd::Nev(args) => run_nev(args),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("abclab: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

struct Sink {
    writer: BufWriter<Box<dyn Write>>,
    format: Format,
}

impl Sink {
    fn open(out: &Option<PathBuf>, format: Format) -> io::Result<Sink> {
        let raw: Box<dyn Write> = match out {
            Some(path) => Box::new(File::create(path)?),
            None => Box::new(io::stdout()),
        };
        Ok(Sink {
            writer: BufWriter::new(raw),
            format,
        })
    }

    fn header<R: Row>(&mut self) -> io::Result<()> {
        if self.format == Format::Csv {
            writeln!(self.writer, "{}", R::HEADER)?;
        }
        Ok(())
    }

    fn row<R: Row>(&mut self, row: &R) -> io::Result<()> {
        match self.format {
            Format::Csv => writeln!(self.writer, "{}", row.csv()),
            Format::Json => {
                let line = serde_json::to_string(row).expect("rows serialize");
                writeln!(self.writer, "{line}")
            }
        }
    }

    fn write_raw(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.writer.write_all(bytes)
    }

    fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

fn row_bytes<R: Row>(row: &R, format: Format) -> Vec<u8> {
    let mut s = match format {
        Format::Csv => row.csv(),
        Format::Json => serde_json::to_string(row).expect("rows serialize"),
    };
    s.push('\n');
    s.into_bytes()
}

fn configure_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        // Ignore failures from double initialization (tests call run twice).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn run_triples(args: TriplesArgs) -> Result<u8, io::Error> {
    configure_threads(args.output.threads);
    if args.bound < 2 {
        eprintln!("abclab: --bound must be at least 2");
        return Ok(EXIT_USAGE);
    }
    let table = match build_spf_sieve(args.bound as usize) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("abclab: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let mut sink = Sink::open(&args.output.out, args.output.format)?;
    sink.header::<TripleRow>()?;
    let mut rows = 0u64;
    for t in enumerate_triples(args.bound as i64, &table) {
        let q = quality(&t);
        if args.min_quality.is_some_and(|min| q < min) {
            continue;
        }
        rows += 1;
        sink.row(&TripleRow {
            a: t.a(),
            b: t.b(),
            c: t.c(),
            h: t.height(),
            log_rad: t.log_radical_abc(),
            quality: q,
            margin: abc_margin(&t, args.eps),
        })?;
    }
    sink.finish()?;
    eprintln!("abclab triples: {rows} rows (bound {})", args.bound);
    Ok(EXIT_CLEAN)
}

/// Run a sum-partitioned sweep: chunks are produced in parallel, written
/// in order, and the summaries merged, so output bytes do not depend on
/// the worker count.
fn run_chunked_sweep<S: Send>(
    bound: u32,
    sink: &mut Sink,
    produce: impl Fn(u32, u32, Format) -> (Vec<u8>, S) + Sync,
    merge: impl Fn(&mut S, &S),
    empty: S,
) -> io::Result<S> {
    let chunk_size = (bound / 64).clamp(8, 256);
    let chunks = sum_chunks(2, bound, chunk_size);
    let mut total = empty;
    let batch_size = rayon::current_num_threads().max(1);
    for batch in chunks.chunks(batch_size) {
        let produced: Vec<(Vec<u8>, S)> = batch
            .par_iter()
            .map(|&(lo, hi)| produce(lo, hi, sink.format))
            .collect();
        for (bytes, summary) in &produced {
            sink.write_raw(bytes)?;
            merge(&mut total, summary);
        }
    }
    Ok(total)
}

fn run_verify(args: VerifyArgs) -> Result<u8, io::Error> {
    configure_threads(args.output.threads);
    if args.bound < 2 || args.n.is_empty() || args.n.iter().any(|&n| n == 0 || n > 64) {
        eprintln!("abclab: need --bound >= 2 and depths in 1..=64");
        return Ok(EXIT_USAGE);
    }
    let table = match build_spf_sieve(args.bound as usize) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("abclab: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let fault = if args.inject_fault {
        Fault::FlipSign
    } else {
        Fault::None
    };
    let mut sink = Sink::open(&args.output.out, args.output.format)?;
    sink.header::<VerifyCsvRow>()?;
    let ns = args.n.clone();
    let summary = run_chunked_sweep(
        args.bound,
        &mut sink,
        |lo, hi, format| {
            let mut bytes = Vec::new();
            let summary = verify_range(lo, hi, &ns, &table, fault, &mut |r| {
                let row = VerifyCsvRow {
                    a: r.a,
                    b: r.b,
                    c: r.c,
                    n: r.n,
                    lemma35_ok: r.lemma35_ok,
                    lemma35_slack: r.lemma35_slack,
                    cor36_ok: r.cor36_ok,
                    lemma311_ok: r.lemma311_ok,
                    eq34_ok: r.eq34_ok,
                    equations_ok: r.equations_ok,
                };
                bytes.extend_from_slice(&row_bytes(&row, format));
            });
            (bytes, summary)
        },
        |acc: &mut VerifySummary, s| acc.merge(s),
        empty_verify_summary(&table),
    )?;
    sink.finish()?;
    eprintln!(
        "abclab verify: {} triples, {} rows, {} violations; min slacks: \
         counting {:.6}, corollary {:.6}, multidegree {:.6}",
        summary.triples,
        summary.rows,
        summary.violations,
        summary.min_lemma35_slack,
        summary.min_cor36_slack,
        summary.min_lemma311_slack
    );
    Ok(if summary.violations == 0 {
        EXIT_CLEAN
    } else {
        EXIT_VIOLATION
    })
}

fn empty_verify_summary(table: &abclab::arith::SpfTable) -> VerifySummary {
    // A zero-width sweep yields the identity element for merging.
    verify_range(3, 2, &[1], table, Fault::None, &mut |_| {})
}

fn empty_power_summary(table: &abclab::arith::SpfTable) -> PowerSummary {
    power_range(3, 2, &[2], table, &mut |_| {})
}

fn run_power(args: PowerArgs) -> Result<u8, io::Error> {
    configure_threads(args.output.threads);
    if args.bound < 2 || args.m.is_empty() || args.m.iter().any(|&m| m < 2) {
        eprintln!("abclab: need --bound >= 2 and exponents >= 2");
        return Ok(EXIT_USAGE);
    }
    let table = match build_spf_sieve(args.bound as usize) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("abclab: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let mut sink = Sink::open(&args.output.out, args.output.format)?;
    sink.header::<PowerCsvRow>()?;
    let ms = args.m.clone();
    let summary = run_chunked_sweep(
        args.bound,
        &mut sink,
        |lo, hi, format| {
            let mut bytes = Vec::new();
            let summary = power_range(lo, hi, &ms, &table, &mut |r| {
                let row = PowerCsvRow {
                    a: r.a,
                    b: r.b,
                    c: r.c,
                    m: r.m,
                    h_abc: r.h_abc,
                    h_uvw: r.h_uvw,
                    h_xyz: r.h_xyz,
                    n_abc: r.n_abc,
                    chain1_ok: r.chain1_ok,
                    chain2_ok: r.chain2_ok,
                    eps_emp: r.eps_emp,
                };
                bytes.extend_from_slice(&row_bytes(&row, format));
            });
            (bytes, summary)
        },
        |acc: &mut PowerSummary, s| acc.merge(s),
        empty_power_summary(&table),
    )?;
    sink.finish()?;
    eprintln!(
        "abclab power: {} rows, {} violations; eps_emp min {} mean {} max {}",
        summary.rows,
        summary.violations,
        f6(summary.eps_emp_min),
        f6(summary.eps_emp_mean()),
        f6(summary.eps_emp_max)
    );
    Ok(if summary.violations == 0 {
        EXIT_CLEAN
    } else {
        EXIT_VIOLATION
    })
}

fn run_pell(args: PellArgs) -> Result<u8, io::Error> {
    if args.d.is_empty() || args.count == 0 {
        eprintln!("abclab: need at least one --d and --count >= 1");
        return Ok(EXIT_USAGE);
    }
    let mut sink = Sink::open(&args.output.out, args.output.format)?;
    sink.header::<PellRow>()?;
    for &d in &args.d {
        let solutions = match pell_solve_with_limit(d, args.count, args.y_limit) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("abclab: d = {d}: {e}");
                return Ok(EXIT_USAGE);
            }
        };
        let stats = match square_free_stats(&solutions) {
            Ok(s) => s,
            Err(e @ PellError::StatsRange(_)) => {
                eprintln!(
                    "abclab: d = {d}: {e}; lower --count to stay within the exact \
                     factorization range (values must fit 64 bits)"
                );
                return Ok(EXIT_USAGE);
            }
            Err(e) => {
                eprintln!("abclab: d = {d}: {e}");
                return Ok(EXIT_USAGE);
            }
        };
        for (sol, st) in solutions.iter().zip(&stats.rows) {
            sink.row(&PellRow {
                d,
                x: sol.x.to_string(),
                y: sol.y.to_string(),
                rhs: sol.rhs,
                s_x: st.s_x,
                s_y: st.s_y,
                ratio: st.ratio,
            })?;
        }
        eprintln!(
            "abclab pell: d = {d}: {} solutions, ratio max {} mean {}",
            solutions.len(),
            f6(stats.max_ratio),
            f6(stats.mean_ratio)
        );
    }
    sink.finish()?;
    Ok(EXIT_CLEAN)
}

fn run_ms(args: MsArgs) -> Result<u8, io::Error> {
    let mut sink = Sink::open(&args.output.out, args.output.format)?;
    sink.header::<MsRow>()?;
    let mut violations = 0u64;
    let emit = |case: String, a: &Poly, b: &Poly, c: &Poly, sink: &mut Sink| -> io::Result<bool> {
        match mason_stothers_check(a, b, c) {
            Ok(r) => {
                sink.row(&MsRow {
                    case,
                    deg_a: a.degree().unwrap_or(0),
                    deg_b: b.degree().unwrap_or(0),
                    deg_c: c.degree().unwrap_or(0),
                    maxdeg: r.max_deg,
                    degrad: r.rad_deg,
                    ok: r.ok,
                })?;
                Ok(r.ok)
            }
            Err(e) => {
                eprintln!("abclab: {case}: {e}");
                Ok(false)
            }
        }
    };
    match (&args.a, &args.b, args.random) {
        (Some(a), Some(b), None) => {
            let (a, b) = match (Poly::parse(a), Poly::parse(b)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("abclab: {e}");
                    return Ok(EXIT_USAGE);
                }
            };
            let c = -&(&a + &b);
            if a.is_zero() || b.is_zero() || c.is_zero() {
                eprintln!("abclab: a, b and a + b must be nonzero");
                return Ok(EXIT_USAGE);
            }
            if !emit("given".into(), &a, &b, &c, &mut sink)? {
                violations += 1;
            }
        }
        (None, None, Some(count)) => {
            let mut rng = StdRng::seed_from_u64(args.seed);
            let mut done = 0usize;
            while done < count {
                let a = random_poly(&mut rng, args.maxdeg);
                let b = random_poly(&mut rng, args.maxdeg);
                if a.gcd(&b).degree() != Some(0) {
                    continue;
                }
                let c = -&(&a + &b);
                if c.is_zero() {
                    continue;
                }
                if !emit(format!("random-{done}"), &a, &b, &c, &mut sink)? {
                    violations += 1;
                }
                done += 1;
            }
        }
        _ => {
            eprintln!("abclab: pass either --a and --b, or --random COUNT");
            return Ok(EXIT_USAGE);
        }
    }
    sink.finish()?;
    if violations > 0 {
        eprintln!("abclab ms: {violations} violations");
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_CLEAN)
}

fn random_poly(rng: &mut StdRng, max_deg: usize) -> Poly {
    loop {
        let deg = rng.gen_range(1..=max_deg.max(1));
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9i64..=9)).collect();
        let p = Poly::from_i64(&coeffs);
        if p.degree() == Some(deg) {
            return p;
        }
    }
}

fn run_nev(args: NevArgs) -> Result<u8, io::Error> {
    if args.rmin <= 0.0 || args.rmax < args.rmin || args.points == 0 {
        eprintln!("abclab: need 0 < rmin <= rmax and points >= 1");
        return Ok(EXIT_USAGE);
    }
    let parse_coeffs = |s: &str| -> Result<Vec<f64>, String> {
        let p = Poly::parse(s).map_err(|e| e.to_string())?;
        Ok(p.coeffs()
            .iter()
            .map(|c| {
                let num: f64 = c.numer().to_string().parse().unwrap_or(f64::NAN);
                let den: f64 = c.denom().to_string().parse().unwrap_or(f64::NAN);
                num / den
            })
            .collect())
    };
    let (num, den) = match (parse_coeffs(&args.num), parse_coeffs(&args.den)) {
        (Ok(n), Ok(d)) => (n, d),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("abclab: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let f = match RatFuncC::from_real(&num, &den) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("abclab: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let radii = geometric_radii(args.rmin, args.rmax, args.points);
    let cfg = ResidualConfig {
        nodes: args.nodes,
        asymptotic_radius: args.rmin.max(100.0),
        ..ResidualConfig::default()
    };
    let (table, verdicts) = match check_residuals(&f, &radii, &cfg) {
        Ok(out) => out,
        Err(e @ (NevError::NonConvergence { .. } | NevError::SingularCircle(_))) => {
            eprintln!("abclab: numeric failure: {e}");
            return Ok(EXIT_NUMERIC);
        }
        Err(e) => {
            eprintln!("abclab: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let mut sink = Sink::open(&args.output.out, args.output.format)?;
    sink.header::<NevCsvRow>()?;
    for row in &table.rows {
        sink.row(&NevCsvRow {
            r: row.r,
            t: row.t,
            m_inf: row.m_inf,
            n_inf: row.n_inf,
            n1_d: row.n1_d,
            n_ram: row.n_ram,
            m_logderiv: row.m_logderiv,
        })?;
    }
    sink.finish()?;
    eprintln!(
        "abclab nev: degree {}; FMT spread {} (bound {}), min N1-NRam {}, max logderiv {}; verdicts {}",
        f.degree(),
        f6(verdicts.fmt_spread),
        f6(verdicts.fmt_bound),
        f6(verdicts.trunc_minus_ram_min),
        f6(verdicts.logderiv_max_seen),
        if verdicts.all_ok() { "ok" } else { "FAILED" }
    );
    Ok(if verdicts.all_ok() {
        EXIT_CLEAN
    } else {
        EXIT_VIOLATION
    })
}
