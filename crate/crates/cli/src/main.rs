use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twisted_hurwitz_cli::cache::Cache;
use twisted_hurwitz_cli::record::{Method, RunRecord, TOOL_VERSION};
use twisted_hurwitz_cli::{
    compute, export_covers, render, render_validation, resolve_budget, validate, CliError,
    ExportFormat, OutputFormat, Verdict,
};

/// Twisted Hurwitz numbers of an elliptic curve, computed four ways.
#[derive(Parser)]
#[command(name = "th", version)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one twisted Hurwitz number.
    Compute {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        g: usize,
        /// Count connected covers (default except for fock).
        #[arg(long, conflicts_with = "disconnected")]
        connected: bool,
        /// Count all covers, connected or not (default for fock).
        #[arg(long)]
        disconnected: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: OutputFormat,
        /// Step budget for the symmetric-group search (overrides TH_BUDGET).
        #[arg(long)]
        budget: Option<u128>,
        /// Result cache, one JSON record per line.
        #[arg(long, default_value = "th-cache.jsonl")]
        cache_file: PathBuf,
        #[arg(long)]
        no_cache: bool,
    },
    /// Cross-check every applicable method for all d ≤ D, g ≤ G.
    Validate {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        g: usize,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Write the tropical covers of (d, g) as DOT files or a JSON array.
    ExportCovers {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        g: usize,
        /// JSON file, or directory for DOT files.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ExportFormat,
        /// Export quotient covers instead of twisted covers.
        #[arg(long)]
        quotient: bool,
    },
    /// Inspect or clear the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
        #[arg(long, default_value = "th-cache.jsonl", global = true)]
        cache_file: PathBuf,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Inspect,
    Clear,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::incompatible(format!("cannot set up {n} threads: {e}")))?;
    }
    match cli.command {
        Command::Compute {
            method,
            d,
            g,
            connected,
            disconnected,
            format,
            budget,
            cache_file,
            no_cache,
        } => {
            let connected = if connected || disconnected {
                connected
            } else {
                method != Method::Fock
            };
            let budget = resolve_budget(budget)?;
            let cache = (!no_cache).then(|| Cache::new(cache_file));
            let record = compute(method, d, g, connected, budget, cache.as_ref())?;
            println!("{}", render(&record, format));
        }
        Command::Validate { d, g, budget } => {
            let budget = resolve_budget(budget)?;
            let rows = validate(d, g, budget)?;
            print!("{}", render_validation(&rows));
            let verdicts = rows.iter().flat_map(|r| [r.connected, r.disconnected]);
            let (mut pass, mut fail, mut skip) = (0, 0, 0);
            for v in verdicts {
                match v {
                    Verdict::Pass => pass += 1,
                    Verdict::Fail => fail += 1,
                    Verdict::Skip => skip += 1,
                }
            }
            println!("{pass} PASS, {fail} FAIL, {skip} SKIP");
            if fail > 0 {
                return Err(CliError {
                    code: 1,
                    message: "methods disagree".into(),
                });
            }
        }
        Command::ExportCovers {
            d,
            g,
            out,
            format,
            quotient,
        } => {
            let n = export_covers(d, g, &out, format, quotient)?;
            eprintln!("wrote {n} cover(s) to {}", out.display());
        }
        Command::Cache { action, cache_file } => {
            let cache = Cache::new(cache_file);
            match action {
                CacheAction::Inspect => {
                    let entries = cache.entries();
                    let current = entries
                        .records
                        .iter()
                        .filter(|r| r.tool_version == TOOL_VERSION)
                        .count();
                    println!(
                        "{}: {} record(s), {} from this version, {} corrupt line(s)",
                        cache.path().display(),
                        entries.records.len(),
                        current,
                        entries.corrupt
                    );
                    println!("{}", RunRecord::CSV_HEADER);
                    for r in &entries.records {
                        println!("{}", r.csv_row());
                    }
                }
                CacheAction::Clear => {
                    let removed = cache.clear().map_err(|e| CliError {
                        code: 1,
                        message: format!("cannot remove {}: {e}", cache.path().display()),
                    })?;
                    println!(
                        "{} {}",
                        if removed { "removed" } else { "no cache at" },
                        cache.path().display()
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
