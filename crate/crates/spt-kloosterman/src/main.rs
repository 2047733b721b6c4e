//! Command-line entry point: exact Dedekind sums, Kloosterman sums and their
//! partial-sum bounds, the spt/S series with certificates, theorem
//! verification sweeps, the comparison table, inequality samplers, and a
//! throughput benchmark.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use spt_kloosterman::ball::{DEFAULT_PREC, MIN_PREC, PREC_CAP};
use spt_kloosterman::error::Error;
use spt_kloosterman::kloosterman::{self, bounds};
use spt_kloosterman::series::oracles::ExactTables;
use spt_kloosterman::series::{self, Mode, SeriesCertificate, Target};
use spt_kloosterman::special::lemmas;
use spt_kloosterman::verify::{self, report::Format, BoundReport, FigMode};
use spt_kloosterman::{dedekind, Trilean};
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_UNKNOWN: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_DOMAIN: i32 = 65;

#[derive(Parser)]
#[command(
    name = "spt-kloosterman",
    about = "Certified arithmetic for the smallest-parts function and its Kloosterman sums",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Working precision in bits (>= 53; also SPT_PREC)
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Worker threads (also SPT_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for report-producing commands: text|csv|json
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Dedekind sum s(d, c)
    Dedekind {
        d: i64,
        c: i64,
        #[arg(long, default_value = "fast")]
        method: String,
    },
    /// A_c(n) with its enclosure and the Lehmer bound
    Kloosterman { c: u64, n: i64 },
    /// Partial sum of A_c(n)/c over c <= x
    PartialSum { n: i64, x: u64 },
    /// Explicit bound on |sum_{c<=x} A_c(n)/c|: thm16 (takes --delta) or cor17
    Bound {
        which: String,
        n: u64,
        x: u64,
        /// delta as a fraction, e.g. 1/4 or 1/5
        #[arg(long)]
        delta: Option<String>,
    },
    /// spt(n) exactly (oracle) or through the series
    Spt {
        n: u64,
        #[arg(long, default_value = "exact")]
        mode: String,
        /// series truncation override
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// p(n) by the pentagonal recurrence
    Partition { n: u64 },
    /// S(n) = 12 spt(n) + (24n-1) p(n), exactly or through the series
    Sn {
        n: u64,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Verify an explicit inequality over a range of n
    Verify {
        /// thm12|thm13|thm15|cor14|lemma-p|chan-mao
        which: String,
        /// inclusive range, e.g. 1..100
        #[arg(long)]
        range: String,
    },
    /// Comparison-table rows (spt, |E_s|, 4.1 e^{lambda/2}) at 2 significant figures
    Table {
        /// only "fig1" is defined
        which: String,
        #[arg(long, default_value = "1000,10000")]
        rows: String,
        /// oracle | series
        #[arg(long, default_value = "oracle")]
        mode: String,
    },
    /// Regenerate the committed comparison table (table fig1 --rows 1000,10000)
    ReproFig1,
    /// Run the analytic inequality samplers
    Check {
        /// only "lemmas" is defined
        what: String,
        /// grid refinement (points per axis / per decade)
        #[arg(long, default_value = "32")]
        grid: u32,
    },
    /// Throughput of A_c(n) evaluation over c <= x at 1 thread and at the pool size
    Bench {
        #[arg(long, default_value = "10000")]
        x: u64,
        #[arg(long, default_value = "1")]
        n: i64,
    },
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let den: BigInt = b.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if den == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(num, den))
    } else {
        let num: BigInt = s.trim().parse().map_err(|e| format!("bad rational: {e}"))?;
        Ok(BigRational::from_integer(num))
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("range must look like a..b")?;
    let lo: u64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: u64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if lo == 0 || hi < lo {
        return Err("range must satisfy 1 <= a <= b".into());
    }
    Ok((lo, hi))
}

fn effective_prec(opts: &GlobalOpts) -> Result<u32, String> {
    let env = std::env::var("SPT_PREC").ok().and_then(|v| v.parse::<u32>().ok());
    let p = opts.prec.or(env).unwrap_or(DEFAULT_PREC);
    if p < MIN_PREC || p > PREC_CAP {
        return Err(format!("precision must be in [{MIN_PREC}, {PREC_CAP}]"));
    }
    Ok(p)
}

fn effective_threads(opts: &GlobalOpts) -> usize {
    let env = std::env::var("SPT_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    opts.threads
        .or(env)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1)
}

fn main() {
    let cli = Cli::parse();
    let threads = effective_threads(&cli.global);
    // The CLI owns the pool; everything below inherits this budget.
    let code = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => {
            eprintln!("error: cannot build thread pool: {e}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}

fn sink_for(opts: &GlobalOpts) -> std::io::Result<Box<dyn Write>> {
    match &opts.out {
        Some(p) => Ok(Box::new(std::fs::File::create(p)?)),
        None => Ok(Box::new(std::io::stdout())),
    }
}

fn domain_exit(e: &Error) -> i32 {
    match e {
        Error::UnknownAtCap(_) => EXIT_UNKNOWN,
        _ => EXIT_DOMAIN,
    }
}

fn run(cli: &Cli) -> i32 {
    let prec = match effective_prec(&cli.global) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let format = match Format::from_str(&cli.global.format) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut sink = match sink_for(&cli.global) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DOMAIN;
        }
    };
    match &cli.command {
        Command::Dedekind { d, c, method } => {
            let m = match method.as_str() {
                "direct" => dedekind::Method::Direct,
                "fast" => dedekind::Method::Reciprocity,
                other => {
                    eprintln!("error: unknown method {other}; use direct|fast");
                    return EXIT_USAGE;
                }
            };
            match dedekind::dedekind_value(&BigInt::from(*d), &BigInt::from(*c), m) {
                Ok(v) => {
                    let _ = writeln!(sink, "{}", v.value);
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    domain_exit(&e)
                }
            }
        }
        Command::Kloosterman { c, n } => match kloosterman::a_c_n(*c, *n, prec) {
            Ok(ev) => {
                let lehmer = 2f64.powi(spt_kloosterman::arith::omega_odd_u64(*c) as i32)
                    * (*c as f64).sqrt();
                match format {
                    Format::Json => {
                        let obj = serde_json::json!({
                            "c": c,
                            "n": n,
                            "value_mid": ev.value.mid().to_decimal_sci(17),
                            "value_rad": ev.value.rad().to_decimal_sci(2),
                            "lehmer_bound": lehmer,
                        });
                        let _ = writeln!(sink, "{}", serde_json::to_string_pretty(&obj).unwrap());
                    }
                    _ => {
                        let _ = writeln!(
                            sink,
                            "A_{c}({n}) = {}   (Lehmer bound {lehmer:.4})",
                            ev.value.display_string(17)
                        );
                    }
                }
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                domain_exit(&e)
            }
        },
        Command::PartialSum { n, x } => match kloosterman::partial_sum(*n, *x, prec) {
            Ok(p) => {
                let _ = writeln!(sink, "sum_(c<={x}) A_c({n})/c = {}", p.value.display_string(17));
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                domain_exit(&e)
            }
        },
        Command::Bound { which, n, x, delta } => {
            let nb = BigInt::from(*n);
            let xb = BigInt::from(*x);
            let result = match which.as_str() {
                "thm16" => {
                    let d = match delta.as_deref().map(parse_rational) {
                        Some(Ok(d)) => d,
                        Some(Err(e)) => {
                            eprintln!("error: {e}");
                            return EXIT_USAGE;
                        }
                        None => BigRational::new(BigInt::from(1), BigInt::from(4)),
                    };
                    bounds::thm16_bound(&nb, &xb, &d, prec)
                }
                "cor17" => bounds::cor17_bound(&nb, &xb, prec),
                other => {
                    eprintln!("error: unknown bound {other}; use thm16|cor17");
                    return EXIT_USAGE;
                }
            };
            match result {
                Ok(b) => {
                    let _ = writeln!(sink, "{}", b.display_string(17));
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    domain_exit(&e)
                }
            }
        }
        Command::Spt { n, mode, trunc } => {
            spt_like(*n, mode, *trunc, prec, Target::Spt, &mut sink, format)
        }
        Command::Sn { n, mode, trunc } => {
            spt_like(*n, mode, *trunc, prec, Target::S, &mut sink, format)
        }
        Command::Partition { n } => {
            let table = spt_kloosterman::series::oracles::partition_exact(*n);
            let _ = writeln!(sink, "{}", table[*n as usize]);
            EXIT_OK
        }
        Command::Verify { which, range } => {
            let (lo, hi) = match parse_range(range) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            run_verify(which, lo, hi, format, &mut sink)
        }
        Command::Table { which, rows, mode } => {
            if which != "fig1" {
                eprintln!("error: unknown table {which}; only fig1 is defined");
                return EXIT_USAGE;
            }
            let rows: Vec<u64> = match rows.split(',').map(|s| s.trim().parse()).collect() {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: bad row list: {e}");
                    return EXIT_USAGE;
                }
            };
            let fig_mode = match mode.as_str() {
                "oracle" => FigMode::Oracle,
                "series" => FigMode::Series,
                other => {
                    eprintln!("error: unknown mode {other}; use oracle|series");
                    return EXIT_USAGE;
                }
            };
            emit_fig1(&rows, fig_mode, &mut sink)
        }
        Command::ReproFig1 => emit_fig1(&[1000, 10000], FigMode::Oracle, &mut sink),
        Command::Check { what, grid } => {
            if what != "lemmas" {
                eprintln!("error: unknown check {what}; only lemmas is defined");
                return EXIT_USAGE;
            }
            run_lemma_checks(*grid, prec, &mut sink)
        }
        Command::Bench { x, n } => run_bench(*x, *n, prec, &mut sink),
    }
}

fn spt_like(
    n: u64,
    mode: &str,
    trunc: Option<u64>,
    prec: u32,
    target: Target,
    sink: &mut dyn Write,
    format: Format,
) -> i32 {
    if n == 0 {
        eprintln!("error: n must be >= 1");
        return EXIT_DOMAIN;
    }
    match mode {
        "exact" => {
            let tables = ExactTables::build(n);
            let t = tables.triple(n);
            let _ = match target {
                Target::Spt => writeln!(sink, "{}", t.spt),
                Target::S => writeln!(sink, "{}", t.s),
            };
            EXIT_OK
        }
        "heuristic" | "certified" => {
            let m = if mode == "heuristic" { Mode::Heuristic } else { Mode::Certified };
            let run = match target {
                Target::Spt => series::spt_series(n, trunc, m, Some(prec)),
                Target::S => series::s_series(n, trunc, m, Some(prec)),
            };
            match run {
                Ok(cert) => {
                    emit_certificate(&cert, format, sink);
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    domain_exit(&e)
                }
            }
        }
        other => {
            eprintln!("error: unknown mode {other}; use exact|heuristic|certified");
            EXIT_USAGE
        }
    }
}

fn emit_certificate(cert: &SeriesCertificate, format: Format, sink: &mut dyn Write) {
    match format {
        Format::Json => {
            let obj = serde_json::json!({
                "n": cert.n,
                "C": cert.trunc,
                "partial_mid": cert.partial.mid().to_decimal_sci(17),
                "partial_rad": cert.partial.rad().to_decimal_sci(2),
                "tail_bound": cert.tail_bound.upper().to_decimal_sci(4),
                "rounded": cert.rounded.as_ref().map(|v| v.to_string()),
                "mode": match cert.mode { Mode::Heuristic => "heuristic", Mode::Certified => "certified" },
            });
            let _ = writeln!(sink, "{}", serde_json::to_string_pretty(&obj).unwrap());
        }
        _ => match &cert.rounded {
            Some(v) => {
                let _ = writeln!(sink, "{v}");
            }
            None => {
                let _ = writeln!(
                    sink,
                    "did not round: partial = {}, tail bound = {} (C = {}, {} bits)",
                    cert.partial.display_string(12),
                    cert.tail_bound.upper().to_decimal_sci(4),
                    cert.trunc,
                    cert.precision_bits
                );
            }
        },
    }
}

fn run_verify(which: &str, lo: u64, hi: u64, format: Format, sink: &mut dyn Write) -> i32 {
    let tables = ExactTables::build(hi);
    let mut reports: Vec<BoundReport> = Vec::new();
    let mut any_fail = false;
    let mut any_unknown = false;
    for n in lo..=hi {
        let r = match which {
            "thm12" => verify::check_thm12(n, &tables.spt[n as usize]),
            "thm13" => verify::check_thm13(n, &tables.spt[n as usize]),
            "thm15" => verify::check_thm15(n, &tables.triple(n).s),
            "cor14" => verify::check_cor14(n, &tables.spt[n as usize], &tables.p[n as usize]),
            "lemma-p" => verify::check_lemma_p(n, &tables.p[n as usize]),
            "chan-mao" => {
                let cm = match verify::check_chan_mao(n, &tables.spt[n as usize], &tables.p[n as usize]) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return domain_exit(&e);
                    }
                };
                let _ = writeln!(
                    sink,
                    "chan-mao n={n}: left {} right {}{}",
                    cm.left,
                    cm.right,
                    if cm.boundary { "  (boundary row)" } else { "" }
                );
                if cm.left != Trilean::True {
                    any_fail = true;
                }
                if cm.right == Trilean::Unknown {
                    any_unknown = true;
                }
                continue;
            }
            other => {
                eprintln!("error: unknown theorem {other}");
                return EXIT_USAGE;
            }
        };
        match r {
            Ok(rep) => {
                match rep.pass {
                    Trilean::True => {}
                    Trilean::False => any_fail = true,
                    Trilean::Unknown => any_unknown = true,
                }
                reports.push(rep);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return domain_exit(&e);
            }
        }
    }
    if !reports.is_empty() {
        if let Err(e) = verify::report::emit_report(&reports, format, sink) {
            eprintln!("error: {e}");
            return EXIT_DOMAIN;
        }
    }
    if any_fail {
        EXIT_FAIL
    } else if any_unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    }
}

fn emit_fig1(rows: &[u64], mode: FigMode, sink: &mut dyn Write) -> i32 {
    let max_oracle = rows.iter().copied().filter(|&n| n <= 20_000).max();
    let tables = max_oracle.map(ExactTables::build);
    let _ = writeln!(sink, "{:>10}  {:>10}  {:>10}  {:>12}", "n", "spt(n)", "|E_s(n)|", "4.1e^(l/2)");
    for &n in rows {
        match verify::figure1_row(n, tables.as_ref(), mode) {
            Ok(row) => {
                let _ = writeln!(
                    sink,
                    "{:>10}  {:>10}  {:>10}  {:>12}",
                    n,
                    row.spt_string(),
                    row.err_string(),
                    row.bound_string()
                );
            }
            Err(e) => {
                eprintln!("error: {e}");
                return domain_exit(&e);
            }
        }
    }
    EXIT_OK
}

fn run_lemma_checks(grid: u32, prec: u32, sink: &mut dyn Write) -> i32 {
    let mut all_pass = true;
    let mut reports: Vec<lemmas::InequalityReport> = Vec::new();
    match lemmas::check_exp_inequality(grid, prec) {
        Ok(r) => reports.push(r),
        Err(e) => {
            eprintln!("error: {e}");
            return domain_exit(&e);
        }
    }
    match lemmas::check_k0_bounds(grid, prec) {
        Ok((a, b)) => reports.extend([a, b]),
        Err(e) => {
            eprintln!("error: {e}");
            return domain_exit(&e);
        }
    }
    match lemmas::check_i_sum_bounds(grid, prec) {
        Ok((a, b)) => reports.extend([a, b]),
        Err(e) => {
            eprintln!("error: {e}");
            return domain_exit(&e);
        }
    }
    match lemmas::check_integral_bound_grid(prec) {
        Ok(rs) => reports.extend(rs),
        Err(e) => {
            eprintln!("error: {e}");
            return domain_exit(&e);
        }
    }
    for r in &reports {
        let _ = writeln!(sink, "{r}");
        if !r.passed() {
            all_pass = false;
        }
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn run_bench(x: u64, n: i64, prec: u32, sink: &mut dyn Write) -> i32 {
    let terms: u64 = (1..=x).map(spt_kloosterman::arith::phi_u64).sum();
    let one = match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let sv = one.install(|| kloosterman::partial_sum(n, x, prec));
    let st = start.elapsed();
    let start = Instant::now();
    let pv = kloosterman::partial_sum(n, x, prec);
    let pt = start.elapsed();
    let (sv, pv) = match (sv, pv) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return domain_exit(&e);
        }
    };
    let overlap = sv.value.sub(&pv.value, prec).contains_zero();
    let s_rate = terms as f64 / st.as_secs_f64();
    let p_rate = terms as f64 / pt.as_secs_f64();
    let _ = writeln!(
        sink,
        "A_c({n}) over c <= {x}: {terms} terms\n  1 thread : {s_rate:>12.0} terms/s ({:.3}s)\n  pool     : {p_rate:>12.0} terms/s ({:.3}s)\n  speedup  : {:.2}x\n  enclosure overlap: {overlap}",
        st.as_secs_f64(),
        pt.as_secs_f64(),
        p_rate / s_rate,
    );
    if overlap {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
