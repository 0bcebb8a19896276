//! Run orchestration and reporting.
//!
//! [`run`] turns a [`RunConfig`] into a [`MomentReport`]: it builds the job,
//! projects the wall time from one calibration segment, runs the remaining
//! segments on a worker pool of the requested size (optionally recording
//! each finished segment to a checkpoint file), folds the segments in order
//! and attaches the predicted main terms.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::accumulator::{validate_ks, MomentAccumulator};
use crate::error::{Error, Result};
use crate::fixed::{FixedIntegral, FixedSum};
use crate::job::{fold_ordered, MomentJob, PlanEntry};
use crate::predict::{ms_main_term, thm_i_main, thm_ii_main};
use crate::scaled::ScaledIntegral;
use crate::sieve::DEFAULT_SEGMENT_SIZE;
use crate::sum::ExactSum;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CHECKPOINT_VERSION: u32 = 1;

/// Runs projected to take longer than this need explicit confirmation.
pub const LONG_RUN_SECONDS: f64 = 30.0 * 60.0;

pub const CSV_HEADER: &str =
    "k,mode,x,h_or_delta,actual,predicted_thm,predicted_ms,ratio,wall_seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    FixedSum,
    FixedIntegral,
    ScaledIntegral,
    Predict,
    Reproduce,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::FixedSum => "fixed-sum",
            Mode::FixedIntegral => "fixed-integral",
            Mode::ScaledIntegral => "scaled-integral",
            Mode::Predict => "predict",
            Mode::Reproduce => "reproduce",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "fixed-sum" => Mode::FixedSum,
            "fixed-integral" => Mode::FixedIntegral,
            "scaled-integral" => Mode::ScaledIntegral,
            "predict" => Mode::Predict,
            "reproduce" => Mode::Reproduce,
            other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    Ms,
    ThmI,
    ThmII,
    Cramer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub x: f64,
    pub h: Option<f64>,
    pub delta: Option<f64>,
    pub ks: Vec<u32>,
    pub threads: usize,
    pub segment_size: u64,
    /// Formula evaluated in predict mode.
    pub formula: Option<Formula>,
    pub checkpoint_path: Option<PathBuf>,
    pub resume: bool,
    pub confirm_long: bool,
    /// When false, reports carry `wall_seconds = 0` so output is byte-stable.
    pub record_timing: bool,
    pub output_format: OutputFormat,
    pub out_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(mode: Mode, x: f64, ks: &[u32]) -> Self {
        RunConfig {
            mode,
            x,
            h: None,
            delta: None,
            ks: ks.to_vec(),
            threads: 1,
            segment_size: DEFAULT_SEGMENT_SIZE,
            formula: None,
            checkpoint_path: None,
            resume: false,
            confirm_long: false,
            record_timing: true,
            output_format: OutputFormat::Csv,
            out_path: None,
        }
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_ks(&self.ks)?;
        if self.ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage("exponents must be strictly ascending".into()));
        }
        if self.threads == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        if self.segment_size == 0 {
            return Err(Error::Usage("--segment-size must be at least 1".into()));
        }
        if !self.x.is_finite() {
            return Err(Error::Usage(format!("X = {} is not finite", self.x)));
        }
        let wants_h = match self.mode {
            Mode::FixedSum | Mode::FixedIntegral => Some(true),
            Mode::ScaledIntegral => Some(false),
            Mode::Predict => match self.formula {
                None => return Err(Error::Usage("predict needs a formula".into())),
                Some(Formula::ThmII) => Some(false),
                Some(_) => Some(true),
            },
            Mode::Reproduce => None,
        };
        match (wants_h, self.h, self.delta) {
            (Some(true), Some(_), None) | (Some(false), None, Some(_)) | (None, _, _) => {}
            (Some(true), _, _) => {
                return Err(Error::Usage(format!(
                    "{} needs --h and no --delta",
                    self.mode.as_str()
                )))
            }
            (Some(false), _, _) => {
                return Err(Error::Usage(format!(
                    "{} needs --delta and no --h",
                    self.mode.as_str()
                )))
            }
        }
        if self.mode == Mode::FixedSum {
            let h = self.h.unwrap_or(0.0);
            if self.x.fract() != 0.0 || h.fract() != 0.0 || self.x < 1.0 || h < 1.0 {
                return Err(Error::Usage(
                    "fixed-sum needs positive integer X and h".into(),
                ));
            }
        }
        if self.resume && self.checkpoint_path.is_none() {
            return Err(Error::Usage("--resume needs --checkpoint".into()));
        }
        Ok(())
    }

    /// Window parameter (`h` or `δ`) of this run.
    pub fn window(&self) -> f64 {
        self.h.or(self.delta).unwrap_or(f64::NAN)
    }

    /// Everything that determines the numerical result, in a fixed layout.
    /// Thread count and output options are excluded.
    pub fn canonical(&self) -> String {
        let bits = |v: Option<f64>| {
            v.map(|v| format!("{:016x}", v.to_bits()))
                .unwrap_or_default()
        };
        let ks: Vec<String> = self.ks.iter().map(u32::to_string).collect();
        format!(
            "mode={};x={:016x};h={};delta={};ks={};segment_size={}",
            self.mode.as_str(),
            self.x.to_bits(),
            bits(self.h),
            bits(self.delta),
            ks.join(","),
            self.segment_size
        )
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn job(&self) -> Result<Box<dyn MomentJob>> {
        Ok(match self.mode {
            Mode::FixedSum => Box::new(FixedSum::new(
                self.x as u64,
                self.window() as u64,
                &self.ks,
                self.segment_size,
            )?),
            Mode::FixedIntegral => Box::new(FixedIntegral::new(
                self.x,
                self.window(),
                &self.ks,
                self.segment_size,
            )?),
            Mode::ScaledIntegral => Box::new(ScaledIntegral::new(
                self.x,
                self.window(),
                &self.ks,
                self.segment_size,
            )?),
            Mode::Predict | Mode::Reproduce => {
                return Err(Error::Usage(format!(
                    "{} does not run a moment computation",
                    self.mode.as_str()
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub k: u32,
    pub actual: Option<f64>,
    pub predicted_thm: Option<f64>,
    pub predicted_ms: Option<f64>,
    pub ratio: Option<f64>,
}

impl MomentRow {
    fn new(
        k: u32,
        actual: Option<f64>,
        predicted_thm: Option<f64>,
        predicted_ms: Option<f64>,
    ) -> Self {
        let ratio = match (actual, predicted_thm) {
            (Some(a), Some(p)) if p != 0.0 && (a / p).is_finite() => Some(a / p),
            _ => None,
        };
        MomentRow {
            k,
            actual,
            predicted_thm,
            predicted_ms,
            ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mode: Mode,
    pub x: f64,
    pub h_or_delta: f64,
    pub rows: Vec<MomentRow>,
    pub wall_seconds: f64,
    pub version: String,
}

impl MomentReport {
    pub fn row(&self, k: u32) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Main terms attached to a measured moment of the given mode.
fn predictions(mode: Mode, x: f64, window: f64, k: u32) -> (Option<f64>, Option<f64>) {
    if k % 2 == 1 {
        return (None, None);
    }
    match mode {
        Mode::FixedSum | Mode::FixedIntegral => (
            thm_i_main(x, window, k).ok(),
            ms_main_term(x, window, k).ok(),
        ),
        Mode::ScaledIntegral => (thm_ii_main(x, window, k).ok(), None),
        _ => (None, None),
    }
}

pub fn run(config: &RunConfig) -> Result<MomentReport> {
    config.validate()?;
    let started = Instant::now();
    let rows = match config.mode {
        Mode::Predict => predict_rows(config)?,
        Mode::Reproduce => {
            return Err(Error::Usage(
                "use reproduce() for the reference tables".into(),
            ))
        }
        mode => {
            let values = execute(config)?;
            config
                .ks
                .iter()
                .zip(values)
                .map(|(&k, v)| {
                    let (thm, ms) = predictions(mode, config.x, config.window(), k);
                    MomentRow::new(k, Some(v), thm, ms)
                })
                .collect()
        }
    };
    Ok(MomentReport {
        mode: config.mode,
        x: config.x,
        h_or_delta: config.window(),
        rows,
        wall_seconds: if config.record_timing {
            started.elapsed().as_secs_f64()
        } else {
            0.0
        },
        version: VERSION.to_string(),
    })
}

fn predict_rows(config: &RunConfig) -> Result<Vec<MomentRow>> {
    let w = config.window();
    config
        .ks
        .iter()
        .map(|&k| {
            Ok(match config.formula {
                Some(Formula::ThmI) => {
                    MomentRow::new(k, None, Some(thm_i_main(config.x, w, k)?), None)
                }
                Some(Formula::ThmII) => {
                    MomentRow::new(k, None, Some(thm_ii_main(config.x, w, k)?), None)
                }
                Some(Formula::Ms) => {
                    MomentRow::new(k, None, None, Some(ms_main_term(config.x, w, k)?))
                }
                Some(Formula::Cramer) | None => {
                    return Err(Error::Usage(
                        "the Cramér comparison has no per-k rows; use cramer_variance".into(),
                    ))
                }
            })
        })
        .collect()
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {threads} worker threads: {e}")))
}

/// Projected wall time of a full run, from timing its most expensive entry.
pub fn estimate_seconds(config: &RunConfig) -> Result<f64> {
    config.validate()?;
    let job = config.job()?;
    let plan = job.plan();
    let Some(probe) = calibration_entry(plan.iter()) else {
        return Ok(0.0);
    };
    let base = job.base_primes();
    let t = Instant::now();
    job.run_entry(probe, &base)?;
    Ok(project(
        t.elapsed().as_secs_f64(),
        plan.len(),
        config.threads,
    ))
}

/// The highest entry among those with the longest Λ range.
fn calibration_entry<'a>(entries: impl Iterator<Item = &'a PlanEntry>) -> Option<&'a PlanEntry> {
    entries.max_by_key(|e| (e.lambda.len(), e.index))
}

fn project(per_entry: f64, entries: usize, threads: usize) -> f64 {
    per_entry * entries.div_ceil(threads) as f64
}

fn execute(config: &RunConfig) -> Result<Vec<f64>> {
    let job = config.job()?;
    let plan = job.plan();
    let base = job.base_primes();
    let digest = config.digest();

    let mut done: BTreeMap<usize, MomentAccumulator> = BTreeMap::new();
    let mut writer = None;
    if let Some(path) = &config.checkpoint_path {
        if config.resume && path.exists() {
            let cp = Checkpoint::load(path)?;
            if cp.digest != digest {
                return Err(Error::Checkpoint {
                    path: path.clone(),
                    reason: "configuration digest differs; refusing to resume".into(),
                });
            }
            log::info!(
                "resuming: {} of {} segments already done",
                cp.completed.len(),
                plan.len()
            );
            done = cp.completed;
            writer = Some(CheckpointWriter::append(path)?);
        } else {
            writer = Some(CheckpointWriter::create(
                path,
                &digest,
                &config.canonical(),
            )?);
        }
    }
    let writer = writer.map(Mutex::new);
    let record = |entry: &PlanEntry, acc: &MomentAccumulator| -> Result<()> {
        if let Some(w) = &writer {
            w.lock()
                .expect("checkpoint writer poisoned")
                .record(entry.index, acc)?;
        }
        Ok(())
    };

    let mut remaining: Vec<&PlanEntry> = plan
        .iter()
        .filter(|e| !done.contains_key(&e.index))
        .collect();
    if let Some(probe) = calibration_entry(remaining.iter().copied()) {
        remaining.retain(|e| e.index != probe.index);
        let t = Instant::now();
        let acc = job.run_entry(probe, &base)?;
        let projected = project(
            t.elapsed().as_secs_f64(),
            remaining.len() + 1,
            config.threads,
        );
        if projected > LONG_RUN_SECONDS && !config.confirm_long {
            return Err(Error::Usage(format!(
                "projected run time {projected:.0} s exceeds {LONG_RUN_SECONDS:.0} s; pass --confirm-long to proceed"
            )));
        }
        log::info!(
            "{} segments, projected {projected:.1} s on {} thread(s)",
            plan.len(),
            config.threads
        );
        record(probe, &acc)?;
        done.insert(probe.index, acc);
    }

    let total = remaining.len();
    let finished = std::sync::atomic::AtomicUsize::new(0);
    let computed = pool(config.threads)?.install(|| {
        remaining
            .par_iter()
            .map(|entry| {
                let acc = job.run_entry(entry, &base)?;
                record(entry, &acc)?;
                let n = finished.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if n.is_multiple_of(total.div_ceil(10).max(1)) || n == total {
                    log::info!("{n}/{total} segments");
                }
                Ok((entry.index, acc))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    done.extend(computed);

    let ordered = plan.iter().map(|e| {
        done.remove(&e.index)
            .expect("every plan entry is computed or restored")
    });
    fold_ordered(job.ks(), ordered.collect::<Vec<_>>()).values()
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointHeader {
    version: u32,
    digest: String,
    config: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointRecord {
    segment: usize,
    x_lo: f64,
    x_hi: f64,
    ks: Vec<u32>,
    partials: Vec<Vec<f64>>,
}

/// Completed segments restored from a checkpoint file.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub version: u32,
    pub digest: String,
    pub completed: BTreeMap<usize, MomentAccumulator>,
}

impl Checkpoint {
    /// Reads a checkpoint. A torn final line from an interrupted write is
    /// ignored.
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let bad = |reason: String| Error::Checkpoint {
            path: path.to_path_buf(),
            reason,
        };
        let header_line = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .map_err(|e| Error::io(path, e))?;
        let header: CheckpointHeader =
            serde_json::from_str(&header_line).map_err(|e| bad(format!("bad header: {e}")))?;
        if header.version != CHECKPOINT_VERSION {
            return Err(bad(format!(
                "version {} is not {CHECKPOINT_VERSION}",
                header.version
            )));
        }
        let mut completed = BTreeMap::new();
        let lines: Vec<String> = lines
            .collect::<std::io::Result<_>>()
            .map_err(|e| Error::io(path, e))?;
        let count = lines.len();
        for (i, line) in lines.into_iter().enumerate() {
            match serde_json::from_str::<CheckpointRecord>(&line) {
                Ok(r) => {
                    let acc = MomentAccumulator {
                        partials: r
                            .partials
                            .iter()
                            .map(|p| ExactSum::from_partials(p))
                            .collect(),
                        ks: r.ks,
                        x_lo: r.x_lo,
                        x_hi: r.x_hi,
                    };
                    completed.insert(r.segment, acc);
                }
                Err(_) if i + 1 == count => log::warn!("ignoring torn last checkpoint record"),
                Err(e) => return Err(bad(format!("record {}: {e}", i + 1))),
            }
        }
        Ok(Checkpoint {
            version: header.version,
            digest: header.digest,
            completed,
        })
    }
}

struct CheckpointWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CheckpointWriter {
    fn create(path: &Path, digest: &str, canonical: &str) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = CheckpointWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        };
        let header = CheckpointHeader {
            version: CHECKPOINT_VERSION,
            digest: digest.to_string(),
            config: canonical.to_string(),
        };
        w.line(&serde_json::to_string(&header).expect("header serializes"))?;
        Ok(w)
    }

    fn append(path: &Path) -> Result<Self> {
        // Drop a torn last line so new records start cleanly.
        let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let whole = text.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        if whole < text.len() {
            file.set_len(whole as u64).map_err(|e| Error::io(path, e))?;
        }
        Ok(CheckpointWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    fn record(&mut self, segment: usize, acc: &MomentAccumulator) -> Result<()> {
        if acc.partials.iter().any(|p| !p.is_finite()) {
            return Err(Error::NumericRange(format!("segment {segment} overflowed")));
        }
        let rec = CheckpointRecord {
            segment,
            x_lo: acc.x_lo,
            x_hi: acc.x_hi,
            ks: acc.ks.clone(),
            partials: acc.partials.iter().map(|p| p.partials().to_vec()).collect(),
        };
        self.line(&serde_json::to_string(&rec).expect("record serializes"))
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub fn to_csv(report: &MomentReport) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            report.mode.as_str(),
            fmt_num(report.x),
            fmt_num(report.h_or_delta),
            fmt_opt(r.actual),
            fmt_opt(r.predicted_thm),
            fmt_opt(r.predicted_ms),
            fmt_opt(r.ratio),
            fmt_num(report.wall_seconds),
        );
    }
    s
}

pub fn parse_csv(text: &str) -> Result<MomentReport> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse("missing or unexpected CSV header".into()));
    }
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
    };
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    let mut report: Option<MomentReport> = None;
    for line in lines.filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Parse(format!("expected 9 fields, got {}", f.len())));
        }
        let k = f[0]
            .parse::<u32>()
            .map_err(|e| Error::Parse(format!("bad k {:?}: {e}", f[0])))?;
        let row = MomentRow {
            k,
            actual: opt(f[4])?,
            predicted_thm: opt(f[5])?,
            predicted_ms: opt(f[6])?,
            ratio: opt(f[7])?,
        };
        let r = report.get_or_insert(MomentReport {
            mode: Mode::parse(f[1])?,
            x: num(f[2])?,
            h_or_delta: num(f[3])?,
            rows: Vec::new(),
            wall_seconds: num(f[8])?,
            version: VERSION.to_string(),
        });
        r.rows.push(row);
    }
    report.ok_or_else(|| Error::Parse("no rows".into()))
}

#[derive(Serialize)]
struct JsonRow<'a> {
    k: u32,
    mode: &'a str,
    x: f64,
    h_or_delta: f64,
    actual: Option<f64>,
    predicted_thm: Option<f64>,
    predicted_ms: Option<f64>,
    ratio: Option<f64>,
    wall_seconds: f64,
}

pub fn to_json(report: &MomentReport) -> String {
    let rows: Vec<JsonRow> = report
        .rows
        .iter()
        .map(|r| JsonRow {
            k: r.k,
            mode: report.mode.as_str(),
            x: report.x,
            h_or_delta: report.h_or_delta,
            actual: r.actual,
            predicted_thm: r.predicted_thm,
            predicted_ms: r.predicted_ms,
            ratio: r.ratio,
            wall_seconds: report.wall_seconds,
        })
        .collect();
    let doc = serde_json::json!({ "version": report.version, "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit(report: &MomentReport, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(report),
        OutputFormat::Json => to_json(report),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// Fixed-length sum at X = 10¹⁰, h = 10⁵.
    MsTable,
    /// Scaled integral at X = 10⁸, δ = 10⁻⁴.
    Scaled1e8,
    /// Scaled integral at X = 10¹⁰, δ = 10⁻⁵.
    Scaled1e10,
}

/// Published values for one reference table, for k = 2, 4, 6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceTable {
    pub actual: [f64; 3],
    pub formula: [f64; 3],
}

impl Table {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ms-table" => Table::MsTable,
            "scaled-1e8" => Table::Scaled1e8,
            "scaled-1e10" => Table::Scaled1e10,
            other => return Err(Error::Usage(format!("unknown table {other:?}"))),
        })
    }

    pub fn config(self) -> RunConfig {
        match self {
            Table::MsTable => RunConfig::new(Mode::FixedSum, 1e10, &[2, 4, 6]).with_h(1e5),
            Table::Scaled1e8 => {
                RunConfig::new(Mode::ScaledIntegral, 1e8, &[2, 4, 6]).with_delta(1e-4)
            }
            Table::Scaled1e10 => {
                RunConfig::new(Mode::ScaledIntegral, 1e10, &[2, 4, 6]).with_delta(1e-5)
            }
        }
    }

    /// Whether the table is an hours-scale computation.
    pub fn is_long(self) -> bool {
        !matches!(self, Table::Scaled1e8)
    }

    pub fn reference(self) -> ReferenceTable {
        match self {
            Table::MsTable => ReferenceTable {
                actual: [9.0663e15, 2.4995e22, 1.1573e29],
                formula: [9.0978e15, 2.5131e22, 1.1675e29],
            },
            Table::Scaled1e8 => ReferenceTable {
                actual: [4.0075e12, 6.5161e17, 1.9592e23],
                formula: [3.8976e12, 6.0766e17, 1.7763e23],
            },
            Table::Scaled1e10 => ReferenceTable {
                actual: [5.0527e15, 1.0210e22, 3.8645e28],
                formula: [5.0485e15, 1.0195e22, 3.8602e28],
            },
        }
    }
}

/// Computes one of the reference tables. `base` supplies threads, segment
/// size, checkpointing and confirmation; its mode and parameters are
/// replaced by the table's.
pub fn reproduce(table: Table, base: &RunConfig) -> Result<MomentReport> {
    let mut config = table.config();
    config.threads = base.threads;
    config.segment_size = base.segment_size;
    config.checkpoint_path = base.checkpoint_path.clone();
    config.resume = base.resume;
    config.confirm_long = base.confirm_long;
    config.record_timing = base.record_timing;
    if table.is_long() && !config.confirm_long {
        let secs = estimate_seconds(&config)?;
        return Err(Error::Usage(format!(
            "this table takes an estimated {secs:.0} s ({:.1} min) on {} thread(s); pass --confirm-long to run it",
            secs / 60.0,
            config.threads
        )));
    }
    run(&config)
}

/// Text rendering of a reproduced table next to the published values.
pub fn render_table(table: Table, report: &MomentReport) -> String {
    let reference = table.reference();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} X = {:e}, {} = {:e}",
        report.mode.as_str(),
        report.x,
        if report.mode == Mode::ScaledIntegral {
            "delta"
        } else {
            "h"
        },
        report.h_or_delta
    );
    let _ = writeln!(
        s,
        "{:>2}  {:>12}  {:>12}  {:>12}  {:>12}  {:>8}",
        "k", "actual", "published", "formula", "published", "ratio"
    );
    for (i, r) in report.rows.iter().enumerate().take(3) {
        let _ = writeln!(
            s,
            "{:>2}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>8.5}",
            r.k,
            r.actual.unwrap_or(f64::NAN),
            reference.actual[i],
            r.predicted_thm.unwrap_or(f64::NAN),
            reference.formula[i],
            r.ratio.unwrap_or(f64::NAN)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MomentReport {
        MomentReport {
            mode: Mode::ScaledIntegral,
            x: 1e6,
            h_or_delta: 1e-3,
            rows: vec![
                MomentRow::new(2, Some(1.234_567_890_123_456_7e9), Some(1.1e9), None),
                MomentRow::new(3, Some(-5.5), None, None),
            ],
            wall_seconds: 0.125,
            version: VERSION.to_string(),
        }
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        assert_eq!(parse_csv(&to_csv(&r)).unwrap(), r);
    }

    #[test]
    fn config_validation() {
        let ok = RunConfig::new(Mode::ScaledIntegral, 1e4, &[2, 4]).with_delta(0.1);
        assert!(ok.validate().is_ok());
        assert!(RunConfig::new(Mode::ScaledIntegral, 1e4, &[2])
            .with_h(3.0)
            .validate()
            .is_err());
        assert!(RunConfig::new(Mode::FixedSum, 1e4, &[4, 2])
            .with_h(3.0)
            .validate()
            .is_err());
        assert!(RunConfig::new(Mode::FixedSum, 1e4, &[2])
            .with_h(2.5)
            .validate()
            .is_err());
        assert!(RunConfig::new(Mode::FixedSum, 1e4, &[18])
            .with_h(2.0)
            .validate()
            .is_err());
        let mut c = ok.clone();
        c.threads = 0;
        assert!(c.validate().is_err());
        let mut c = ok;
        c.resume = true;
        assert!(c.validate().is_err());
    }

    #[test]
    fn digest_ignores_threads() {
        let a = RunConfig::new(Mode::FixedSum, 1e4, &[2]).with_h(10.0);
        let mut b = a.clone();
        b.threads = 8;
        assert_eq!(a.digest(), b.digest());
        let c = RunConfig::new(Mode::FixedSum, 1e4, &[2]).with_h(11.0);
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn long_tables_need_confirmation() {
        let err =
            reproduce(Table::MsTable, &RunConfig::new(Mode::Reproduce, 0.0, &[2])).unwrap_err();
        assert!(
            matches!(err, Error::Usage(ref m) if m.contains("--confirm-long")),
            "{err}"
        );
    }
}
