//! Command-line surface: single expansions, word generation, metrics on
//! arbitrary words, ternary projection, and the full discrepancy sweep.
//!
//! Exit codes: 0 success, 1 usage/input/I-O error, 2 expansion stopped early.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use mcfword::{
    balance, dat_file_name, discrepancy, emit_dat, emit_records_jsonl, emit_table,
    empirical_frequency, factor_complexity, format_sig4, generate_word, run_sweep,
    ternary_project, tijdeman_fraction, Error, ExpansionStatus, FreqVector, Int, IntVector,
    RuleTag, SweepConfig, Word,
};

#[derive(Parser)]
#[command(name = "mcfword", version, about = "Continued-fraction word generation and discrepancy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a vector step by step and print each matrix
    Expand {
        /// Comma-separated nonnegative integers, e.g. 1,2,4
        vector: String,
        #[arg(long, default_value = "fusion-ar-poincare")]
        algo: String,
        /// Consumed by the random-reduction rule only
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate the word for a vector and print its metrics
    Word {
        vector: String,
        #[arg(long, default_value = "fusion-ar-poincare")]
        algo: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Measure a word given as a digit string, e.g. 3121121
    Metrics {
        word: String,
        /// Frequency numerators, e.g. 2,3,5; defaults to the word's own counts
        #[arg(long)]
        freq: Option<String>,
        /// Largest factor length to report; defaults to min(length, 8)
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Run every algorithm over all triplets with sum n and emit data files
    Sweep {
        #[arg(long)]
        n: Int,
        /// Comma-separated algorithm slugs, or "all" for the 13 standard configs
        #[arg(long, default_value = "all")]
        algos: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_entry: Int,
        /// Data file prefix: {prefix}_sum{n}_{algo}.dat
        #[arg(long, default_value = "discrepancy")]
        prefix: String,
        /// Worker thread count; defaults to all cores
        #[arg(long)]
        jobs: Option<usize>,
        /// Also dump one JSON record per (triplet, algorithm) line
        #[arg(long)]
        records_out: Option<PathBuf>,
    },
    /// Project a triplet onto the unit ternary triangle
    Project { vector: String },
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match run(cli) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e:#}");
                1
            }
        },
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Expand { vector, algo, seed } => cmd_expand(&vector, &algo, seed),
        Command::Word { vector, algo, seed } => cmd_word(&vector, &algo, seed),
        Command::Metrics { word, freq, nmax } => cmd_metrics(&word, freq.as_deref(), nmax),
        Command::Sweep { n, algos, seed, out_dir, min_entry, prefix, jobs, records_out } => {
            cmd_sweep(n, &algos, seed, &out_dir, min_entry, &prefix, jobs, records_out.as_deref())
        }
        Command::Project { vector } => cmd_project(&vector),
    }
}

fn parse_vector(s: &str) -> Result<IntVector> {
    let entries = s
        .split(',')
        .map(|t| t.trim().parse::<Int>().with_context(|| format!("bad vector entry {t:?}")))
        .collect::<Result<Vec<_>>>()?;
    IntVector::new(entries).map_err(|e| anyhow!("{e}"))
}

fn parse_algo(s: &str) -> Result<RuleTag> {
    RuleTag::from_slug(s).ok_or_else(|| anyhow!("unknown algorithm {s:?}"))
}

fn cmd_expand(vector: &str, algo: &str, seed: u64) -> Result<i32> {
    let v = parse_vector(vector)?;
    let tag = parse_algo(algo)?;
    let trace = mcfword::expand(&v, tag, seed)?;
    println!("input={v} algo={tag}");
    for (k, step) in trace.steps.iter().enumerate() {
        println!(
            "step {} rule={} matrix={} next={}",
            k + 1,
            step.rule_applied,
            step.matrix,
            step.successor
        );
    }
    match trace.status {
        ExpansionStatus::Completed => {
            println!(
                "status=completed terminal={} letter={} gcd={} steps={}",
                trace.terminal,
                trace.terminal_letter.expect("completed"),
                trace.gcd().expect("completed"),
                trace.steps.len()
            );
            Ok(0)
        }
        ExpansionStatus::StoppedEarly => {
            println!(
                "status=stopped-early terminal={} steps={}",
                trace.terminal,
                trace.steps.len()
            );
            Ok(2)
        }
    }
}

fn cmd_word(vector: &str, algo: &str, seed: u64) -> Result<i32> {
    let v = parse_vector(vector)?;
    let tag = parse_algo(algo)?;
    println!("input={v} algo={tag}");
    let generated = match generate_word(&v, tag, seed) {
        Ok(g) => g,
        Err(Error::ExpansionIncomplete) => {
            println!("status=stopped-early");
            return Ok(2);
        }
        Err(e) => return Err(e.into()),
    };
    let f = FreqVector::from_counts(&v)?;
    let disc = discrepancy(&generated.word, &f)?;
    let bal = balance(&generated.word)?;
    println!("word={}", generated.word);
    println!("length={}", generated.word.len());
    println!("parikh={}", generated.word.parikh());
    println!("gcd={}", generated.gcd);
    println!("freq={f}");
    println!("discrepancy={} ({})", disc, format_sig4(rat_f64(&disc)));
    println!("balance={bal}");
    Ok(0)
}

fn rat_f64(r: &mcfword::Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn cmd_metrics(word: &str, freq: Option<&str>, nmax: Option<usize>) -> Result<i32> {
    let freq_vec = freq.map(parse_vector).transpose()?;
    let max_digit = word
        .chars()
        .map(|c| c.to_digit(10).map(|v| v as usize).unwrap_or(0))
        .max()
        .unwrap_or(0);
    let d = max_digit.max(freq_vec.as_ref().map_or(0, |f| f.dim())).max(2);
    let w = Word::from_digits(d, word).map_err(|e| anyhow!("{e}"))?;
    let f = match freq_vec {
        Some(counts) => FreqVector::from_counts(&counts)?,
        None => empirical_frequency(&w)?,
    };
    let disc = discrepancy(&w, &f)?;
    let bal = balance(&w)?;
    let n_max = nmax.unwrap_or_else(|| w.len().min(8));
    let complexity = factor_complexity(&w, n_max)?;
    println!("length={}", w.len());
    println!("alphabet={d}");
    println!("parikh={}", w.parikh());
    println!("freq={f}");
    println!("discrepancy={} ({})", disc, format_sig4(rat_f64(&disc)));
    println!("balance={bal}");
    println!(
        "complexity={}",
        complexity.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(0)
}

fn cmd_project(vector: &str) -> Result<i32> {
    let v = parse_vector(vector)?;
    let (x, y) = ternary_project(&v, v.sum())?;
    println!("{x} {y}");
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    n: Int,
    algos: &str,
    seed: u64,
    out_dir: &std::path::Path,
    min_entry: Int,
    prefix: &str,
    jobs: Option<usize>,
    records_out: Option<&std::path::Path>,
) -> Result<i32> {
    if let Some(jobs) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("setting worker count")?;
    }
    let algorithms = if algos == "all" {
        RuleTag::table_configs()
    } else {
        algos.split(',').map(|s| parse_algo(s.trim())).collect::<Result<Vec<_>>>()?
    };
    if algorithms.is_empty() {
        bail!("no algorithms selected");
    }
    let cfg = SweepConfig { n, algorithms: algorithms.clone(), seed, min_entry };
    let out = run_sweep(&cfg)?;
    let triplet_count = out.records.len() / algorithms.len();
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;

    println!(
        "sweep n={n} triplets={triplet_count} algorithms={} seed={seed}",
        algorithms.len()
    );
    println!(
        "{:<22} {:>8} {:>8} {:>8} {:>8} {:>6} {:>9} {:>8}",
        "algorithm", "min", "mean", "max", "std", "count", "undefined", "le_bound"
    );
    let mut any_reconstruction = false;
    for (algo, s) in &out.summaries {
        let records: Vec<_> =
            out.records.iter().filter(|r| r.algorithm == *algo).cloned().collect();
        let (below, total) = tijdeman_fraction(&records);
        let share = if total == 0 { 0.0 } else { below as f64 / total as f64 };
        let mut name = algo.slug().to_string();
        if algo.is_reconstruction() {
            name.push('*');
            any_reconstruction = true;
        }
        println!(
            "{:<22} {:>8} {:>8} {:>8} {:>8} {:>6} {:>9} {:>8}",
            name,
            format_sig4(s.min),
            format_sig4(s.mean),
            format_sig4(s.max),
            format_sig4(s.std),
            s.count,
            s.undefined_count,
            format_sig4(share)
        );
    }
    if any_reconstruction {
        println!("note: * marks rule variants specific to this project; see README for their definitions");
    }

    for algo in &algorithms {
        let records: Vec<_> =
            out.records.iter().filter(|r| r.algorithm == *algo).cloned().collect();
        let path = out_dir.join(dat_file_name(prefix, n, *algo));
        emit_dat(&records, &path)?;
        println!("wrote {}", path.display());
    }
    let table_path = out_dir.join(format!("{prefix}_sum{n}_stats.csv"));
    emit_table(&out.summaries, &table_path)?;
    println!("wrote {}", table_path.display());
    if let Some(records_path) = records_out {
        emit_records_jsonl(&out.records, records_path)?;
        println!("wrote {}", records_path.display());
    }
    Ok(0)
}
