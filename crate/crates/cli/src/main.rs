//! ncfkit: analyze, count, enumerate, sample and verify nested canalyzing
//! Boolean functions.
//!
//! Exit codes for `analyze`: 0 when the function is nested canalyzing,
//! 2 when it is not, 1 on input errors. `NCFKIT_THREADS` caps the worker
//! count used by scans and censuses.

mod report;

use std::error::Error;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ncfkit_core::enumerate::{enumerate_ncf, NcfSampler};
use ncfkit_core::error::FormulaError;
use ncfkit_core::formulas::{
    conjecture_scan, count_ncf, count_ncf_total, count_recursive, MaxFamily, SCAN_EXHAUSTIVE_MAX,
};
use ncfkit_core::oracle::classify_all;
use ncfkit_core::selftest::{self, Level};
use ncfkit_core::{AnfPoly, LayerStructure, TruthTable, MAX_VARS};

#[derive(Parser)]
#[command(name = "ncfkit", version, about = "Nested canalyzing Boolean function toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a function is nested canalyzing and report its
    /// layer structure, weight, activities and average sensitivity
    Analyze {
        /// Polynomial text, e.g. "x1*x2 + x3 + 1"
        #[arg(long, value_name = "POLY")]
        anf: Option<String>,
        /// Truth table as a 0/1 string, index 0 first
        #[arg(long, value_name = "BITS")]
        bin: Option<String>,
        /// Truth table in hex, 4 bits per character
        #[arg(long, value_name = "HEX")]
        hex: Option<String>,
        /// Variable count (inferred when omitted)
        #[arg(long)]
        n: Option<u32>,
        /// Cross-check formulas against brute force (n <= 8)
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exact number of nested canalyzing functions on n variables
    Count {
        n: u32,
        /// Restrict to one layer number
        #[arg(long)]
        r: Option<u32>,
        /// Print the counts for every layer number, comma-separated
        #[arg(long)]
        per_layer: bool,
        #[arg(long)]
        json: bool,
    },
    /// Stream every layer structure on n variables, one per line
    Enumerate {
        n: u32,
        /// Restrict to one layer number
        #[arg(long)]
        r: Option<u32>,
        /// Append the hex truth table to each line
        #[arg(long)]
        tables: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw uniform random layer structures
    Sample {
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of draws from one seeded stream
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Append the hex truth table to each line
        #[arg(long)]
        tables: bool,
        #[arg(long)]
        json: bool,
    },
    /// Maximize the average sensitivity over all layer-size vectors and
    /// compare against the conjectured maximum
    #[command(name = "scan-conjecture")]
    ScanConjecture {
        n: u32,
        /// Refuse scans beyond this size (above 30 an exact search
        /// replaces plain enumeration; hard limit 40)
        #[arg(long, default_value_t = SCAN_EXHAUSTIVE_MAX)]
        cap: u32,
        #[arg(long)]
        json: bool,
    },
    /// Census of all 2^(2^n) functions by decomposition verdict (CSV)
    Classify {
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Built-in verification suite
    Selftest {
        #[arg(value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("NCFKIT_THREADS") {
        match v.parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => eprintln!("warning: ignoring invalid NCFKIT_THREADS={v}"),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    match cli.command {
        Command::Analyze { anf, bin, hex, n, oracle, json } => cmd_analyze(anf, bin, hex, n, oracle, json),
        Command::Count { n, r, per_layer, json } => cmd_count(n, r, per_layer, json),
        Command::Enumerate { n, r, tables, json } => cmd_enumerate(n, r, tables, json),
        Command::Sample { n, seed, count, tables, json } => cmd_sample(n, seed, count, tables, json),
        Command::ScanConjecture { n, cap, json } => cmd_scan(n, cap, json),
        Command::Classify { n, json } => cmd_classify(n, json),
        Command::Selftest { level } => cmd_selftest(level),
    }
}

fn cmd_analyze(
    anf: Option<String>,
    bin: Option<String>,
    hex: Option<String>,
    n: Option<u32>,
    oracle: bool,
    json: bool,
) -> Result<ExitCode, Box<dyn Error>> {
    let (format, input, table) = load_input(anf, bin, hex, n)?;
    if oracle && table.n() > report::ORACLE_MAX_VARS {
        eprintln!("note: oracle cross-check skipped (n > {})", report::ORACLE_MAX_VARS);
    }
    let analysis = report::analyze(format, input, &table, oracle)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&analysis)?);
    } else {
        print!("{}", analysis.render_text());
    }
    Ok(if analysis.ncf { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn load_input(
    anf: Option<String>,
    bin: Option<String>,
    hex: Option<String>,
    n: Option<u32>,
) -> Result<(&'static str, String, TruthTable), Box<dyn Error>> {
    let given = [anf.is_some(), bin.is_some(), hex.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err("provide exactly one of --anf, --bin, --hex".into());
    }
    if let Some(text) = anf {
        let n = match n {
            Some(n) => n,
            None => max_anf_index(&text),
        };
        if n > MAX_VARS {
            return Err(format!("variable count {n} exceeds the maximum of {MAX_VARS}").into());
        }
        let table = AnfPoly::parse(&text, n)?.truth_table();
        return Ok(("anf", text, table));
    }
    if let Some(text) = bin {
        let table = TruthTable::from_bin_str(&text)?;
        if let Some(n) = n {
            if n != table.n() {
                return Err(format!(
                    "--n {n} disagrees with the literal length {} (2^{})",
                    text.len(),
                    table.n()
                )
                .into());
            }
        }
        return Ok(("bin", text, table));
    }
    let text = hex.expect("one input is present");
    let n = match n {
        Some(n) => n,
        None => {
            let bits = 4 * text.len() as u64;
            if !bits.is_power_of_two() {
                return Err(format!("hex literal length {} is not a power of two; pass --n", text.len()).into());
            }
            bits.trailing_zeros()
        }
    };
    let table = TruthTable::from_hex_str(&text, n)?;
    Ok(("hex", text, table))
}

/// Largest index appearing as x<k> in the polynomial text.
fn max_anf_index(text: &str) -> u32 {
    let bytes = text.as_bytes();
    let mut best = 0u32;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let mut j = i + 1;
            let mut value = 0u32;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                value = value.saturating_mul(10) + (bytes[j] - b'0') as u32;
                j += 1;
            }
            if j > i + 1 {
                best = best.max(value);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

fn cmd_count(n: u32, r: Option<u32>, per_layer: bool, json: bool) -> Result<ExitCode, Box<dyn Error>> {
    let total = count_ncf_total(n)?;
    let recursion_ok = count_recursive(n)? == total;
    let per_layer_counts: Option<Vec<String>> = if per_layer {
        Some((1..n).map(|r| count_ncf(n, r).map(|c| c.to_string())).collect::<Result<_, _>>()?)
    } else {
        None
    };
    let single = r.map(|r| count_ncf(n, r)).transpose()?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "n": n,
                "r": r,
                "total": total.to_string(),
                "count": single.as_ref().map(|c| c.to_string()),
                "per_layer": per_layer_counts,
                "recursion_check": recursion_ok,
            }))?
        );
    } else {
        if let Some(counts) = &per_layer_counts {
            println!("{}", counts.join(","));
        } else if let Some(c) = &single {
            println!("{c}");
        } else {
            println!("{total}");
        }
        println!("recursion-check: {}", if recursion_ok { "pass" } else { "FAIL" });
    }
    Ok(if recursion_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn structure_line(s: &LayerStructure, tables: bool, json: bool) -> String {
    if json {
        let mut value = serde_json::to_value(s).expect("structure serializes");
        if tables {
            value["table"] = json!(s.reconstruct().to_hex_str());
        }
        value.to_string()
    } else if tables {
        format!("{s}\t{}", s.reconstruct().to_hex_str())
    } else {
        s.to_string()
    }
}

fn cmd_enumerate(n: u32, r: Option<u32>, tables: bool, json: bool) -> Result<ExitCode, Box<dyn Error>> {
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut count = 0u64;
    for s in enumerate_ncf(n, r)? {
        writeln!(out, "{}", structure_line(&s, tables, json))?;
        count += 1;
    }
    out.flush()?;
    eprintln!("{count} structures");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(n: u32, seed: u64, count: u64, tables: bool, json: bool) -> Result<ExitCode, Box<dyn Error>> {
    let mut sampler = NcfSampler::new(n, seed)?;
    for _ in 0..count {
        println!("{}", structure_line(&sampler.sample(), tables, json));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(n: u32, cap: u32, json: bool) -> Result<ExitCode, Box<dyn Error>> {
    if n > cap {
        return Err(Box::new(FormulaError::ScanCapExceeded { n, cap }));
    }
    let started = Instant::now();
    if n >= 20 {
        eprintln!("scanning 2^{} compositions...", n - 2);
    }
    let report = conjecture_scan(n)?;
    if n >= 20 {
        eprintln!("scan finished in {:.2?}", started.elapsed());
    }
    let family = if n >= 3 { Some(MaxFamily::OnesTwo.closed_form(n)?) } else { None };
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "n": report.n,
                "compositions": report.compositions.to_string(),
                "mode": report.mode,
                "max": report.max,
                "argmax": report.argmax,
                "family_value": family,
                "max_matches_family": report.max_matches_ones_two,
                "family_in_argmax": report.ones_two_in_argmax,
                "consistent_with_conjecture": report.consistent(),
            }))?
        );
    } else {
        println!("n = {}: {} compositions scanned ({:?})", report.n, report.compositions, report.mode);
        println!("max average sensitivity = {} ({})", report.max, report.max.to_decimal_string());
        let argmax: Vec<String> = report.argmax.iter().map(|c| c.to_string()).collect();
        println!("argmax: {}", argmax.join(" "));
        if let Some(f) = family {
            println!(
                "(1,...,1,2) family value = {} ({}); equals max: {}",
                f,
                f.to_decimal_string(),
                if report.max_matches_ones_two { "yes" } else { "NO" }
            );
        }
        println!("(1,...,1,2) in argmax: {}", if report.ones_two_in_argmax { "yes" } else { "NO" });
        println!("conjecture: {}", if report.consistent() { "consistent" } else { "COUNTEREXAMPLE" });
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(n: u32, json: bool) -> Result<ExitCode, Box<dyn Error>> {
    if n > 4 {
        return Err(format!("census is exhaustive over 2^(2^n) tables; n = {n} exceeds the n <= 4 limit").into());
    }
    eprintln!("classifying {} functions...", 1u128 << (1u64 << n));
    let census = classify_all(n);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "n": n,
                "per_layer": census.per_layer,
                "degenerate": census.degenerate,
                "not_ncf": census.not_ncf,
                "total_ncf": census.total_ncf(),
            }))?
        );
    } else {
        print!("{}", census.to_csv());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(level: LevelArg) -> Result<ExitCode, Box<dyn Error>> {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let outcomes = selftest::run(level);
    let mut failures = 0;
    for o in &outcomes {
        println!("{:4} {:32} {:8.2?}  {}", o.status(), o.label, o.elapsed, o.detail);
        if !o.passed {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("selftest: all {} checks passed", outcomes.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("selftest: {failures} of {} checks FAILED", outcomes.len());
        Ok(ExitCode::from(1))
    }
}
