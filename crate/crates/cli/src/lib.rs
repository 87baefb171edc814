//! The `weilscan` command-line surface.
//!
//! Exit codes: 0 success, 1 invalid input, 2 incomplete or partial scan —
//! so pipelines can distinguish "verified" from "interrupted".

mod report;
mod selftest;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use weilscan_core::enumerate::Reduction;
use weilscan_core::equidist::{compare_families, gof_report, TestSelection};
use weilscan_core::io::{read_angle_csv, write_angle_csv, AngleFile};
use weilscan_core::kloosterman::{horizontal_family, vertical_family, FamilySpec};
use weilscan_core::search::{find_pointless, verify_precise_bound, BoundStatus, SearchOptions};
use weilscan_core::{PrimeField, SearchReport};

use report::{emit, emit_timing, render, TOOL, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Parser)]
#[command(name = "weilscan", version, about = "Pointless hyperelliptic curve search and Kloosterman angle statistics over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ScanArgs {
    /// Orbit reduction: auto, none, translate, translate-scale.
    #[arg(long, default_value = "auto")]
    reduction: String,
    /// Candidates per scan block.
    #[arg(long, default_value_t = weilscan_core::enumerate::DEFAULT_BLOCK_SIZE)]
    block_size: u64,
    /// Stop after this many newly scanned blocks (leaves a partial verdict).
    #[arg(long)]
    max_blocks: Option<u64>,
    /// Resumable checkpoint file (a stem for multi-prime sweeps).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Scan one (genus, prime) family for squarefree curves with no affine point.
    SearchPointless {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        prime: u64,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sweep every prime below the Mit'kin threshold (or an explicit cap)
    /// and report the precise bound p0.
    VerifyPreciseBound {
        #[arg(long)]
        genus: u32,
        /// Exclusive cap of the scanned prime range; defaults to the
        /// Mit'kin threshold for the genus.
        #[arg(long)]
        max_prime: Option<u64>,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Kloosterman angle families, written as CSV.
    Kloosterman {
        #[command(subcommand)]
        family: KloostermanCommand,
    },
    /// Goodness of fit of an angle file against the Sato-Tate density.
    Equidist {
        /// Angle CSV produced by `kloosterman`.
        #[arg(long)]
        input: PathBuf,
        /// Equal-probability chi-square bins.
        #[arg(long, default_value_t = 16)]
        bins: usize,
        /// Comma-separated subset of ks,chi2,moments (ks always runs).
        #[arg(long, default_value = "ks,chi2,moments")]
        tests: String,
        /// Second angle file: emit a side-by-side family comparison.
        #[arg(long)]
        compare_with: Option<PathBuf>,
        /// Truncate both families to the smaller N before comparing.
        #[arg(long)]
        equal_n: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the built-in hand-verified example table.
    Selftest,
}

#[derive(Subcommand)]
enum KloostermanCommand {
    /// Fixed p, (c,d) over the group; the diagonal (1,a) by default.
    Vertical {
        #[arg(long)]
        prime: u64,
        /// Enumerate the full (c,d) grid instead of the diagonal.
        #[arg(long)]
        full_grid: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fixed (c,d), p over primes in range that divide neither.
    Horizontal {
        #[arg(long, default_value_t = 1)]
        c: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long, default_value_t = 3)]
        min_prime: u64,
        #[arg(long)]
        max_prime: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

/// Parses argv and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::SearchPointless {
            genus,
            prime,
            scan,
            run,
        } => cmd_search_pointless(genus, prime, &scan, &run),
        Command::VerifyPreciseBound {
            genus,
            max_prime,
            scan,
            run,
        } => cmd_verify_precise_bound(genus, max_prime, &scan, &run),
        Command::Kloosterman { family } => match family {
            KloostermanCommand::Vertical {
                prime,
                full_grid,
                run,
            } => cmd_kloosterman_vertical(prime, full_grid, &run),
            KloostermanCommand::Horizontal {
                c,
                d,
                min_prime,
                max_prime,
                run,
            } => cmd_kloosterman_horizontal(c, d, min_prime, max_prime, &run),
        },
        Command::Equidist {
            input,
            bins,
            tests,
            compare_with,
            equal_n,
            run,
        } => cmd_equidist(&input, bins, &tests, compare_with.as_deref(), equal_n, &run),
        Command::Selftest => Ok(selftest::run()),
    }
}

fn resolve_workers(run: &RunArgs) -> usize {
    run.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

/// Runs the closure inside a dedicated pool of the requested size.
fn with_pool_value<T: Send, F: FnOnce() -> T + Send>(workers: usize, f: F) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(f))
}

fn search_options(scan: &ScanArgs) -> Result<SearchOptions> {
    let reduction = match scan.reduction.as_str() {
        "auto" => None,
        other => Some(other.parse::<Reduction>()?),
    };
    Ok(SearchOptions {
        reduction,
        block_size: scan.block_size,
        chunk_blocks: 256,
        checkpoint_path: scan.checkpoint.clone(),
        max_blocks: scan.max_blocks,
    })
}

fn cmd_search_pointless(genus: u32, prime: u64, scan: &ScanArgs, run: &RunArgs) -> Result<i32> {
    let workers = resolve_workers(run);
    let opts = search_options(scan)?;
    let started = Instant::now();
    let report: SearchReport = with_pool_value(workers, || find_pointless(genus, prime, &opts))??;
    let config = json!({
        "genus": genus,
        "prime": prime,
        "reduction": report.reduction.as_str(),
        "block_size": opts.block_size,
    });
    emit(
        run.out.as_deref(),
        &render("search-pointless", config, &report)?,
    )?;
    emit_timing(
        run.out.as_deref(),
        "search-pointless",
        started.elapsed().as_millis(),
        workers,
    );
    Ok(if report.complete { EXIT_OK } else { EXIT_PARTIAL })
}

fn cmd_verify_precise_bound(
    genus: u32,
    max_prime: Option<u64>,
    scan: &ScanArgs,
    run: &RunArgs,
) -> Result<i32> {
    let workers = resolve_workers(run);
    let opts = search_options(scan)?;
    let started = Instant::now();
    let result = with_pool_value(workers, || verify_precise_bound(genus, max_prime, &opts))??;
    let config = json!({
        "genus": genus,
        "max_prime": result.scan_limit,
        "reduction": scan.reduction,
        "block_size": opts.block_size,
    });
    emit(
        run.out.as_deref(),
        &render("verify-precise-bound", config, &result)?,
    )?;
    emit_timing(
        run.out.as_deref(),
        "verify-precise-bound",
        started.elapsed().as_millis(),
        workers,
    );
    Ok(match result.status {
        BoundStatus::VerifiedToMitkin => EXIT_OK,
        BoundStatus::Partial => EXIT_PARTIAL,
    })
}

fn csv_comments(command: &str, config: &str, family: &str, extra: Vec<String>) -> Vec<String> {
    let mut lines = vec![
        format!("tool: {TOOL} {VERSION}"),
        format!("command: {command}"),
        format!("config: {config}"),
        format!("family: {family}"),
    ];
    lines.extend(extra);
    lines
}

fn cmd_kloosterman_vertical(prime: u64, full_grid: bool, run: &RunArgs) -> Result<i32> {
    let workers = resolve_workers(run);
    let started = Instant::now();
    let field = PrimeField::new(prime)?;
    let samples = with_pool_value(workers, || vertical_family::<f64>(&field, full_grid))??;
    let family = FamilySpec::Vertical {
        p: prime,
        full_grid,
    };
    let comments = csv_comments(
        "kloosterman vertical",
        &format!("prime={prime} full-grid={full_grid}"),
        &family.to_string(),
        vec![],
    );
    let mut buf = Vec::new();
    write_angle_csv(&mut buf, &samples, &comments)?;
    emit(run.out.as_deref(), std::str::from_utf8(&buf)?)?;
    emit_timing(
        run.out.as_deref(),
        "kloosterman vertical",
        started.elapsed().as_millis(),
        workers,
    );
    Ok(EXIT_OK)
}

fn cmd_kloosterman_horizontal(
    c: u64,
    d: u64,
    min_prime: u64,
    max_prime: u64,
    run: &RunArgs,
) -> Result<i32> {
    let workers = resolve_workers(run);
    let started = Instant::now();
    let family_kind = FamilySpec::Horizontal {
        c,
        d,
        p_min: min_prime,
        p_max: max_prime,
    };
    let family = with_pool_value(workers, || horizontal_family::<f64>(c, d, min_prime, max_prime))??;
    let skipped_line = format!(
        "skipped-primes: count={} [{}]",
        family.skipped.len(),
        family
            .skipped
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    let comments = csv_comments(
        "kloosterman horizontal",
        &format!("c={c} d={d} min-prime={min_prime} max-prime={max_prime}"),
        &family_kind.to_string(),
        vec![skipped_line],
    );
    let mut buf = Vec::new();
    write_angle_csv(&mut buf, &family.samples, &comments)?;
    emit(run.out.as_deref(), std::str::from_utf8(&buf)?)?;
    emit_timing(
        run.out.as_deref(),
        "kloosterman horizontal",
        started.elapsed().as_millis(),
        workers,
    );
    Ok(EXIT_OK)
}

fn parse_tests(list: &str) -> Result<TestSelection> {
    let mut selection = TestSelection {
        chi2: false,
        moments: false,
    };
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match name {
            "ks" => {}
            "chi2" => selection.chi2 = true,
            "moments" => selection.moments = true,
            other => return Err(anyhow!("unknown test '{other}' (expected ks, chi2, moments)")),
        }
    }
    Ok(selection)
}

fn load_angle_file(path: &std::path::Path) -> Result<AngleFile> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed = read_angle_csv(BufReader::new(file))
        .with_context(|| format!("reading {}", path.display()))?;
    if parsed.samples.is_empty() {
        return Err(anyhow!("{}: empty sample", path.display()));
    }
    Ok(parsed)
}

fn family_label(file: &AngleFile) -> String {
    file.family.clone().unwrap_or_else(|| "unspecified".into())
}

fn cmd_equidist(
    input: &std::path::Path,
    bins: usize,
    tests: &str,
    compare_with: Option<&std::path::Path>,
    equal_n: bool,
    run: &RunArgs,
) -> Result<i32> {
    let selection = parse_tests(tests)?;
    let started = Instant::now();
    let first = load_angle_file(input)?;

    let config = json!({
        "bins": bins,
        "tests": tests,
        "compare": compare_with.is_some(),
        "equal_n": equal_n,
    });

    let content = match compare_with {
        None => {
            let thetas: Vec<f64> = first.samples.iter().map(|s| s.theta).collect();
            let report = gof_report(&family_label(&first), &thetas, bins, &selection)?;
            render("equidist", config, &report)?
        }
        Some(path) => {
            let second = load_angle_file(path)?;
            // The vertical (fixed-p) family is the reference side; recognize
            // it from the descriptors, defaulting to the first input.
            let first_is_vertical = !family_label(&first).starts_with("horizontal");
            let (vertical, horizontal) = if first_is_vertical {
                (&first, &second)
            } else {
                (&second, &first)
            };
            let n = if equal_n {
                vertical.samples.len().min(horizontal.samples.len())
            } else {
                usize::MAX
            };
            let take = |file: &AngleFile| -> Vec<f64> {
                file.samples.iter().take(n).map(|s| s.theta).collect()
            };
            let v_report = gof_report(&family_label(vertical), &take(vertical), bins, &selection)?;
            let h_report =
                gof_report(&family_label(horizontal), &take(horizontal), bins, &selection)?;
            let comparison = compare_families(&v_report, &h_report);
            render("equidist", config, &comparison)?
        }
    };
    emit(run.out.as_deref(), &content)?;
    emit_timing(
        run.out.as_deref(),
        "equidist",
        started.elapsed().as_millis(),
        resolve_workers(run),
    );
    Ok(EXIT_OK)
}
