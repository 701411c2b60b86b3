//! Enumerate rational frequency triplets, run every algorithm configuration,
//! aggregate statistics, and emit the table and figure data files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{FreqVector, Int, IntVector, Rational};
use crate::metrics::{discrepancy, tijdeman_bound};
use crate::steps::{expand_with_rng, ExpansionStatus, RuleTag};
use crate::wordgen::word_from_trace;

/// Configuration of one sweep over all triplets summing to `n`.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Common denominator of the frequency vectors.
    pub n: Int,
    pub algorithms: Vec<RuleTag>,
    /// Consumed by the random-reduction rule only.
    pub seed: u64,
    /// Smallest allowed entry; 1 matches the corner labels of the figures.
    pub min_entry: Int,
}

impl SweepConfig {
    pub fn new(n: Int, algorithms: Vec<RuleTag>, seed: u64) -> Self {
        SweepConfig { n, algorithms, seed, min_entry: 1 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RecordStatus {
    Ok,
    /// The expansion stopped early; only pure Arnoux-Rauzy produces this.
    Undefined,
}

/// Outcome for one (triplet, algorithm) pair.
#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub triplet: IntVector,
    pub algorithm: RuleTag,
    pub discrepancy: Option<Rational>,
    pub word_length: Option<usize>,
    pub status: RecordStatus,
}

/// Summary statistics over the Ok records of one algorithm.
///
/// `std` is the sample standard deviation (n - 1 denominator); a single
/// record reports 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub std: f64,
    pub count: usize,
    pub undefined_count: usize,
}

/// All `(a1, a2, a3)` with entries at least `min_entry` and sum `n`, in
/// lexicographic order.
pub fn enumerate_triplets(n: Int, min_entry: Int) -> Result<Vec<IntVector>> {
    let min_n = (3 * min_entry).max(1);
    if min_entry < 0 || n < min_n {
        return Err(Error::InfeasibleSweep { min_n, min_entry });
    }
    let mut out = Vec::new();
    let mut a1 = min_entry;
    while a1 <= n - 2 * min_entry {
        let mut a2 = min_entry;
        while a2 <= n - a1 - min_entry {
            out.push(IntVector::new(vec![a1, a2, n - a1 - a2])?);
            a2 += 1;
        }
        a1 += 1;
    }
    Ok(out)
}

fn record_for(cfg: &SweepConfig, algo: RuleTag, index: usize, triplet: &IntVector) -> Result<SweepRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let trace = expand_with_rng(triplet, algo, &mut rng)?;
    if trace.status == ExpansionStatus::StoppedEarly {
        return Ok(SweepRecord {
            triplet: triplet.clone(),
            algorithm: algo,
            discrepancy: None,
            word_length: None,
            status: RecordStatus::Undefined,
        });
    }
    let generated = word_from_trace(trace)?;
    let f = FreqVector::from_counts(triplet)?;
    let disc = discrepancy(&generated.word, &f)?;
    Ok(SweepRecord {
        triplet: triplet.clone(),
        algorithm: algo,
        discrepancy: Some(disc),
        word_length: Some(generated.word.len()),
        status: RecordStatus::Ok,
    })
}

/// Records and per-algorithm summaries of one sweep.
#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub summaries: Vec<(RuleTag, StatSummary)>,
}

/// Run the sweep. Work is data-parallel over triplets; records keep the
/// deterministic (algorithm, triplet) order regardless of worker count, so
/// emitted files are byte-stable.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let triplets = enumerate_triplets(cfg.n, cfg.min_entry)?;
    let mut records = Vec::with_capacity(triplets.len() * cfg.algorithms.len());
    for &algo in &cfg.algorithms {
        let batch: Vec<SweepRecord> = triplets
            .par_iter()
            .enumerate()
            .map(|(idx, t)| record_for(cfg, algo, idx, t))
            .collect::<Result<Vec<_>>>()?;
        records.extend(batch);
    }
    let summaries = cfg
        .algorithms
        .iter()
        .map(|&algo| {
            let slice: Vec<&SweepRecord> =
                records.iter().filter(|r| r.algorithm == algo).collect();
            (algo, summarize(&slice))
        })
        .collect();
    Ok(SweepOutput { records, summaries })
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact-rational pass over the Ok records; undefined records are excluded
/// from the statistics and counted separately.
fn summarize(records: &[&SweepRecord]) -> StatSummary {
    let mut count = 0usize;
    let mut undefined_count = 0usize;
    let mut sum = Rational::new(0, 1);
    let mut sum_sq = Rational::new(0, 1);
    let mut min: Option<Rational> = None;
    let mut max: Option<Rational> = None;
    for r in records {
        match (&r.status, &r.discrepancy) {
            (RecordStatus::Ok, Some(d)) => {
                count += 1;
                sum += d;
                sum_sq += d * d;
                min = Some(min.map_or(*d, |m| m.min(*d)));
                max = Some(max.map_or(*d, |m| m.max(*d)));
            }
            _ => undefined_count += 1,
        }
    }
    if count == 0 {
        return StatSummary { min: 0.0, mean: 0.0, max: 0.0, std: 0.0, count, undefined_count };
    }
    let n = Rational::new(count as Int, 1);
    let mean = sum / n;
    let std = if count > 1 {
        let var = (sum_sq - mean * mean * n) / Rational::new(count as Int - 1, 1);
        rational_to_f64(&var).max(0.0).sqrt()
    } else {
        0.0
    };
    StatSummary {
        min: rational_to_f64(&min.unwrap()),
        mean: rational_to_f64(&mean),
        max: rational_to_f64(&max.unwrap()),
        std,
        count,
        undefined_count,
    }
}

/// Count of Ok records at or below the `1 - 1/(2d-2)` reference bound,
/// together with the Ok total.
pub fn tijdeman_fraction(records: &[SweepRecord]) -> (usize, usize) {
    let mut below = 0usize;
    let mut total = 0usize;
    for r in records {
        if let (RecordStatus::Ok, Some(d)) = (&r.status, &r.discrepancy) {
            total += 1;
            if *d <= tijdeman_bound(r.triplet.dim()) {
                below += 1;
            }
        }
    }
    (below, total)
}

/// Barycentric layout used by the figures: `(a1, .., a3)` with sum `n` maps to
/// `x = (a2 + a3/2) / n`, `y = (sqrt(3)/2) a3 / n`.
pub fn ternary_project(a: &IntVector, n: Int) -> Result<(f64, f64)> {
    if a.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: a.dim() });
    }
    let nf = n as f64;
    let x = (a.get(1) as f64 + a.get(2) as f64 / 2.0) / nf;
    let y = (3.0f64.sqrt() / 2.0) * a.get(2) as f64 / nf;
    Ok((x, y))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Standard data file name `{prefix}_sum{n}_{slug}.dat`.
pub fn dat_file_name(prefix: &str, n: Int, algo: RuleTag) -> String {
    format!("{prefix}_sum{n}_{}.dat", algo.slug())
}

/// Write one algorithm's records as a whitespace-separated `.dat` file with
/// header `xproj yproj stat`; undefined records are omitted. Floats use
/// shortest round-trip formatting.
pub fn emit_dat(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut algo: Option<RuleTag> = None;
    let mut n: Option<Int> = None;
    for r in records {
        if *algo.get_or_insert(r.algorithm) != r.algorithm {
            return Err(Error::MixedRecords);
        }
        if *n.get_or_insert(r.triplet.sum()) != r.triplet.sum() {
            return Err(Error::MixedRecords);
        }
    }
    let mut w = create(path)?;
    let err = io_err(path);
    writeln!(w, "xproj yproj stat").map_err(err)?;
    for r in records {
        if let (RecordStatus::Ok, Some(d)) = (&r.status, &r.discrepancy) {
            let (x, y) = ternary_project(&r.triplet, r.triplet.sum())?;
            writeln!(w, "{} {} {}", x, y, rational_to_f64(d)).map_err(io_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

/// Write the summary table as CSV with columns `algorithm,min,mean,max,std`
/// at 4 significant digits.
pub fn emit_table(summaries: &[(RuleTag, StatSummary)], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let err = io_err(path);
    writeln!(w, "algorithm,min,mean,max,std").map_err(err)?;
    for (algo, s) in summaries {
        writeln!(
            w,
            "{},{},{},{},{}",
            algo.slug(),
            format_sig4(s.min),
            format_sig4(s.mean),
            format_sig4(s.max),
            format_sig4(s.std)
        )
        .map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Optional JSON-lines dump: one record per line with the triplet, algorithm
/// slug, exact fraction and decimal discrepancy, and status.
pub fn emit_records_jsonl(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for r in records {
        let line = match (&r.status, &r.discrepancy) {
            (RecordStatus::Ok, Some(d)) => serde_json::json!({
                "triplet": r.triplet.entries().iter().map(|&x| x as i64).collect::<Vec<_>>(),
                "algorithm": r.algorithm.slug(),
                "status": "ok",
                "discrepancy": format!("{}/{}", d.numer(), d.denom()),
                "discrepancy_decimal": rational_to_f64(d),
                "word_length": r.word_length,
            }),
            _ => serde_json::json!({
                "triplet": r.triplet.entries().iter().map(|&x| x as i64).collect::<Vec<_>>(),
                "algorithm": r.algorithm.slug(),
                "status": "undefined",
                "discrepancy": serde_json::Value::Null,
                "discrepancy_decimal": serde_json::Value::Null,
                "word_length": serde_json::Value::Null,
            }),
        };
        writeln!(w, "{line}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Render with 4 significant digits, plain decimal notation.
pub fn format_sig4(x: f64) -> String {
    if x == 0.0 {
        return "0.000".to_string();
    }
    let mut exp = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(3 - exp);
    let rounded = (x * scale).round() / scale;
    if rounded != 0.0 && (rounded.abs().log10().floor() as i32) > exp {
        exp += 1;
    }
    let decimals = (3 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}
