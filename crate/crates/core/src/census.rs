//! Census of cubic surfaces over `F_q`: every projective class of nonzero
//! cubic forms (exhaustive) or a seeded uniform sample of them.
//!
//! The index space is `0..N` with `N = (q^20 - 1)/(q - 1)` for exhaustive
//! runs and `0..count` for samples. Work is split into contiguous ranges,
//! each worker accumulates a [`Tally`], and tallies are merged by plain
//! addition, so the report does not depend on how the range was divided.
//! Between chunks the per-partition tallies can be written to a checkpoint.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::forms::{CubicForm, FormError, Incidence, CUBIC_MONOMIALS};
use crate::gf::{Elem, FieldCtx};
use crate::ledger::Prediction;
use crate::smoothness::{SmoothnessEngine, SmoothnessError, Strategy, DEFAULT_SEARCH_DEPTH};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Findings kept verbatim in a report; the rest are only counted.
const MAX_FINDINGS: usize = 16;

/// Two-sided 99% standard normal quantile.
const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("characteristic 3 is refused by default (q = {0}); pass the char-3 override to run it as an experiment")]
    UnsupportedCharacteristic(u32),
    #[error("exhaustive census over F_{0} has more classes than the index type holds")]
    IndexOverflow(u32),
    #[error("invalid census configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint belongs to a different configuration (expected hash {expected}, found {found})")]
    ResumeMismatch { expected: String, found: String },
    #[error("cannot merge tallies of different configurations")]
    ConfigMismatch,
    #[error("{0}")]
    NonIntegralTrace(#[from] NonIntegralTrace),
    #[error(transparent)]
    Smoothness(#[from] SmoothnessError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CensusError + '_ {
    move |source| CensusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{points} points over F_{q} is not of the form q^2 + (t+1)q + 1")]
pub struct NonIntegralTrace {
    pub points: u64,
    pub q: u64,
}

/// `t` with `#S(F_q) = q^2 + (t + 1) q + 1`.
pub fn trace_from_count(points: u64, q: u64) -> Result<i64, NonIntegralTrace> {
    let rest = points as i128 - (q as i128) * (q as i128) - 1;
    if rest.rem_euclid(q as i128) != 0 {
        return Err(NonIntegralTrace { points, q });
    }
    Ok((rest.div_euclid(q as i128) - 1) as i64)
}

/// Trace of a smooth surface, by counting its points.
pub fn trace_of(form: &CubicForm) -> Result<i64, CensusError> {
    let n = crate::forms::count_points(form)?;
    Ok(trace_from_count(n, form.ctx().q() as u64)?)
}

/// `(q^20 - 1)/(q - 1)`, if it fits.
pub fn count_monic(q: u32) -> Option<u64> {
    let q = q as u128;
    let n = (q.checked_pow(20)? - 1) / (q - 1);
    u64::try_from(n).ok()
}

/// The `index`-th monic form: classes are ordered by the position of the
/// first nonzero coefficient, then lexicographically in the rest.
pub fn monic_form_at(ctx: &FieldCtx, index: u64) -> Option<CubicForm> {
    let q = ctx.q() as u64;
    let mut rem = index;
    for lead in 0..CUBIC_MONOMIALS {
        let block = (q as u128).pow((CUBIC_MONOMIALS - 1 - lead) as u32);
        if (rem as u128) < block {
            let mut c = [Elem::ZERO; CUBIC_MONOMIALS];
            c[lead] = Elem::ONE;
            let mut r = rem;
            for slot in (lead + 1..CUBIC_MONOMIALS).rev() {
                c[slot] = Elem((r % q) as u32);
                r /= q;
            }
            return Some(CubicForm::new(ctx, c));
        }
        rem -= block as u64;
    }
    None
}

/// Walks monic forms in index order without re-decoding each one.
struct MonicCursor {
    q: u32,
    coeffs: [Elem; CUBIC_MONOMIALS],
    lead: usize,
}

impl MonicCursor {
    fn at(ctx: &FieldCtx, index: u64) -> Option<MonicCursor> {
        let f = monic_form_at(ctx, index)?;
        let lead = f.coeffs().iter().position(|c| !c.is_zero())?;
        Some(MonicCursor {
            q: ctx.q(),
            coeffs: *f.coeffs(),
            lead,
        })
    }

    fn advance(&mut self) {
        for slot in (self.lead + 1..CUBIC_MONOMIALS).rev() {
            if self.coeffs[slot].0 + 1 < self.q {
                self.coeffs[slot].0 += 1;
                return;
            }
            self.coeffs[slot] = Elem::ZERO;
        }
        // block exhausted: move the leading one right
        self.coeffs[self.lead] = Elem::ZERO;
        self.lead += 1;
        if self.lead < CUBIC_MONOMIALS {
            self.coeffs[self.lead] = Elem::ONE;
        }
    }
}

/// Every monic form, in index order.
pub fn enum_monic_forms(ctx: &FieldCtx) -> impl Iterator<Item = CubicForm> + '_ {
    let mut cursor = MonicCursor::at(ctx, 0).expect("index 0 exists");
    let mut done = false;
    std::iter::from_fn(move || {
        if done || cursor.lead >= CUBIC_MONOMIALS {
            done = true;
            return None;
        }
        let f = CubicForm::new(ctx, cursor.coeffs);
        cursor.advance();
        Some(f)
    })
}

/// The `index`-th sampled class: a uniform nonzero coefficient vector from
/// stream `index` of the seeded generator, scaled to be monic.
pub fn sample_form(ctx: &FieldCtx, seed: u64, index: u64) -> CubicForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let c: [Elem; CUBIC_MONOMIALS] = std::array::from_fn(|_| Elem(rng.gen_range(0..ctx.q())));
        let f = CubicForm::new(ctx, c);
        if !f.is_zero() {
            return f.normalized();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub ctx: FieldCtx,
    pub mode: Mode,
    pub strategy: Strategy,
    pub search_depth: u32,
    /// Number of contiguous ranges worked on in parallel.
    pub partitions: usize,
    /// Indices per chunk; a checkpoint is written after each chunk.
    pub checkpoint_interval: u64,
    pub checkpoint: Option<PathBuf>,
    pub resume: Option<PathBuf>,
    pub compute_lines: bool,
    pub allow_char_3: bool,
}

impl CensusConfig {
    pub fn new(ctx: &FieldCtx, mode: Mode) -> CensusConfig {
        CensusConfig {
            ctx: ctx.clone(),
            mode,
            strategy: Strategy::Macaulay,
            search_depth: DEFAULT_SEARCH_DEPTH,
            partitions: 1,
            checkpoint_interval: 1 << 16,
            checkpoint: None,
            resume: None,
            compute_lines: false,
            allow_char_3: false,
        }
    }

    pub fn exhaustive(ctx: &FieldCtx) -> CensusConfig {
        CensusConfig::new(ctx, Mode::Exhaustive)
    }

    pub fn sample(ctx: &FieldCtx, count: u64, seed: u64) -> CensusConfig {
        CensusConfig::new(ctx, Mode::Sample { count, seed })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_partitions(mut self, partitions: usize) -> Self {
        self.partitions = partitions;
        self
    }

    pub fn with_lines(mut self, compute_lines: bool) -> Self {
        self.compute_lines = compute_lines;
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>, interval: u64) -> Self {
        self.checkpoint = Some(path.into());
        self.checkpoint_interval = interval;
        self
    }

    pub fn with_resume(mut self, path: impl Into<PathBuf>) -> Self {
        self.resume = Some(path.into());
        self
    }

    /// Size of the index space.
    pub fn total(&self) -> Result<u64, CensusError> {
        match self.mode {
            Mode::Exhaustive => count_monic(self.ctx.q()).ok_or(CensusError::IndexOverflow(self.ctx.q())),
            Mode::Sample { count, .. } => Ok(count),
        }
    }

    pub fn validate(&self) -> Result<(), CensusError> {
        if self.ctx.p() == 3 && !self.allow_char_3 {
            return Err(CensusError::UnsupportedCharacteristic(self.ctx.q()));
        }
        if let Mode::Sample { count: 0, .. } = self.mode {
            return Err(CensusError::InvalidConfig("sample count must be at least 1".into()));
        }
        if self.partitions == 0 {
            return Err(CensusError::InvalidConfig("partitions must be at least 1".into()));
        }
        if self.checkpoint_interval == 0 {
            return Err(CensusError::InvalidConfig("checkpoint interval must be at least 1".into()));
        }
        if self.strategy != Strategy::Macaulay && self.search_depth == 0 {
            return Err(CensusError::InvalidConfig("search depth must be at least 1".into()));
        }
        self.total()?;
        Ok(())
    }

    /// Hash of everything that determines the report's contents. Partition
    /// count, chunking and file paths are deliberately left out.
    pub fn config_hash(&self) -> String {
        let depth = match self.strategy {
            Strategy::Macaulay => 0,
            _ => self.search_depth,
        };
        let text = format!(
            "engine={ENGINE_VERSION};p={};k={};modulus={:?};mode={:?};strategy={};depth={depth};lines={}",
            self.ctx.p(),
            self.ctx.k(),
            self.ctx.modulus(),
            self.mode,
            self.strategy,
            self.compute_lines,
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FindingKind {
    NonIntegralTrace { points: u64 },
    OracleDisagreement { search_smooth: bool, rank: usize, target: usize },
}

/// An anomaly observed on one form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub index: u64,
    pub coeffs: String,
    #[serde(flatten)]
    pub kind: FindingKind,
}

/// Accumulated counts over some set of indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub visited: u64,
    pub smooth: u64,
    pub point_sum: u64,
    pub point_square_sum: u64,
    pub traces: BTreeMap<i64, u64>,
    pub lines: BTreeMap<u64, u64>,
    pub non_integral: u64,
    pub disagreements: u64,
    /// The findings with the smallest indices.
    pub findings: Vec<Finding>,
}

impl Tally {
    /// Adds `other` into `self`; commutative and associative.
    pub fn merge(&mut self, other: &Tally) {
        self.visited += other.visited;
        self.smooth += other.smooth;
        self.point_sum += other.point_sum;
        self.point_square_sum += other.point_square_sum;
        for (t, n) in &other.traces {
            *self.traces.entry(*t).or_default() += n;
        }
        for (l, n) in &other.lines {
            *self.lines.entry(*l).or_default() += n;
        }
        self.non_integral += other.non_integral;
        self.disagreements += other.disagreements;
        self.findings.extend(other.findings.iter().cloned());
        self.trim_findings();
    }

    fn trim_findings(&mut self) {
        self.findings.sort_by_key(|f| (f.index, matches!(f.kind, FindingKind::OracleDisagreement { .. })));
        self.findings.dedup();
        self.findings.truncate(MAX_FINDINGS);
    }

    fn record(&mut self, finding: Finding) {
        self.findings.push(finding);
        if self.findings.len() > 2 * MAX_FINDINGS {
            self.trim_findings();
        }
    }
}

/// A tally tagged with the configuration that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partial {
    pub config_hash: String,
    pub tally: Tally,
}

/// Merges two partials of the same configuration.
pub fn merge(a: &Partial, b: &Partial) -> Result<Partial, CensusError> {
    if a.config_hash != b.config_hash {
        return Err(CensusError::ConfigMismatch);
    }
    let mut tally = a.tally.clone();
    tally.merge(&b.tally);
    Ok(Partial {
        config_hash: a.config_hash.clone(),
        tally,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    /// First index not yet processed, in decimal.
    pub next_index: String,
    pub total: String,
    pub partials: Vec<Tally>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint, CensusError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Writes via a temporary file and a rename, so a crash leaves either
    /// the old checkpoint or the new one.
    pub fn store(&self, path: &Path) -> Result<(), CensusError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?).map_err(io_err(&tmp))?;
        fs::rename(&tmp, path).map_err(io_err(path))
    }

    pub fn next_index(&self) -> Result<u64, CensusError> {
        self.next_index
            .parse()
            .map_err(|_| CensusError::InvalidConfig(format!("bad next_index {:?}", self.next_index)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn reduced(num: u64, den: u64) -> Fraction {
        let g = num_integer::gcd(num, den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Normal-approximation interval for the mean point count of a smooth sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean: f64,
    pub std_error: f64,
    pub z: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SampleStats {
    fn from_tally(t: &Tally) -> Option<SampleStats> {
        if t.smooth < 2 {
            return None;
        }
        let n = t.smooth as f64;
        let mean = t.point_sum as f64 / n;
        // exact integer numerator of the sample variance
        let ss = t.point_square_sum as i128 * t.smooth as i128 - (t.point_sum as i128).pow(2);
        let var = ss as f64 / (n * (n - 1.0));
        let std_error = (var / n).sqrt();
        Some(SampleStats {
            mean,
            std_error,
            z: Z_99,
            ci_low: mean - Z_99 * std_error,
            ci_high: mean + Z_99 * std_error,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingSummary {
    pub non_integral_traces: u64,
    pub oracle_disagreements: u64,
    pub examples: Vec<Finding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub strategy: Strategy,
    pub search_depth: u32,
    pub compute_lines: bool,
    pub modulus: Vec<u32>,
    pub experimental: bool,
    pub config_hash: String,
}

/// Wall-clock details; excluded from report comparisons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub started_at_unix: u64,
    pub duration_secs: f64,
    pub partitions: usize,
    pub resumed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub mode: Mode,
    pub total_indexed: u64,
    pub smooth_count: u64,
    pub point_sum: u64,
    /// Mean point count of the smooth surfaces; absent when there are none.
    pub average: Option<Fraction>,
    pub trace_histogram: BTreeMap<i64, u64>,
    pub line_histogram: Option<BTreeMap<u64, u64>>,
    pub sample_stats: Option<SampleStats>,
    pub findings: FindingSummary,
    pub engine_version: String,
    pub config: ConfigEcho,
    pub run: RunInfo,
}

impl CensusReport {
    fn assemble(config: &CensusConfig, tally: Tally, run: RunInfo) -> CensusReport {
        let ctx = &config.ctx;
        let sample_stats = match config.mode {
            Mode::Sample { .. } => SampleStats::from_tally(&tally),
            Mode::Exhaustive => None,
        };
        CensusReport {
            q: ctx.q(),
            p: ctx.p(),
            k: ctx.k(),
            mode: config.mode,
            total_indexed: tally.visited,
            smooth_count: tally.smooth,
            point_sum: tally.point_sum,
            average: (tally.smooth > 0).then(|| Fraction::reduced(tally.point_sum, tally.smooth)),
            line_histogram: config.compute_lines.then(|| tally.lines.clone()),
            trace_histogram: tally.traces,
            sample_stats,
            findings: FindingSummary {
                non_integral_traces: tally.non_integral,
                oracle_disagreements: tally.disagreements,
                examples: tally.findings,
            },
            engine_version: ENGINE_VERSION.to_string(),
            config: ConfigEcho {
                strategy: config.strategy,
                search_depth: if config.strategy == Strategy::Macaulay { 0 } else { config.search_depth },
                compute_lines: config.compute_lines,
                modulus: ctx.modulus().to_vec(),
                experimental: ctx.p() == 3,
                config_hash: config.config_hash(),
            },
            run,
        }
    }

    /// The report without its run block, as pretty JSON: equal for any two
    /// runs of the same configuration.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("run");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn save(&self, path: &Path) -> Result<(), CensusError> {
        fs::write(path, self.to_json() + "\n").map_err(io_err(path))
    }

    pub fn load(path: &Path) -> Result<CensusReport, CensusError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// `t,count` rows.
    pub fn trace_csv(&self) -> Result<String, CensusError> {
        histogram_csv("t", self.trace_histogram.iter().map(|(k, v)| (k.to_string(), *v)))
    }

    /// `lines,count` rows; `None` when lines were not counted.
    pub fn line_csv(&self) -> Result<Option<String>, CensusError> {
        self.line_histogram
            .as_ref()
            .map(|h| histogram_csv("lines", h.iter().map(|(k, v)| (k.to_string(), *v))))
            .transpose()
    }
}

fn histogram_csv(key: &str, rows: impl Iterator<Item = (String, u64)>) -> Result<String, CensusError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([key, "count"])?;
    for (k, v) in rows {
        w.write_record([k, v.to_string()])?;
    }
    let bytes = w.into_inner()?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

impl From<csv::IntoInnerError<csv::Writer<Vec<u8>>>> for CensusError {
    fn from(e: csv::IntoInnerError<csv::Writer<Vec<u8>>>) -> Self {
        CensusError::Io {
            path: PathBuf::from("<csv>"),
            source: e.into_error(),
        }
    }
}

/// Outcome of a possibly paused run.
#[derive(Debug)]
pub enum RunStatus {
    Complete(Box<CensusReport>),
    /// Stopped early at a chunk boundary; the checkpoint (if configured)
    /// records where to pick up.
    Paused { next_index: u64 },
}

struct Worker<'a> {
    config: &'a CensusConfig,
    engine: SmoothnessEngine,
    incidence: Incidence,
}

impl Worker<'_> {
    fn classify(&self, index: u64, form: &CubicForm, tally: &mut Tally) -> Result<(), CensusError> {
        tally.visited += 1;
        let smooth = match self.engine.is_smooth(form) {
            Ok(v) => v.smooth,
            Err(SmoothnessError::OracleDisagreement {
                search_smooth,
                rank,
                target,
                ..
            }) => {
                tally.disagreements += 1;
                tally.record(Finding {
                    index,
                    coeffs: form.to_text(),
                    kind: FindingKind::OracleDisagreement {
                        search_smooth,
                        rank,
                        target,
                    },
                });
                // the rank test is a decision procedure; it has the last word
                rank == target
            }
            Err(e) => return Err(e.into()),
        };
        if !smooth {
            return Ok(());
        }
        let n = self.incidence.count_points(form)?;
        tally.smooth += 1;
        tally.point_sum += n;
        tally.point_square_sum += n * n;
        match trace_from_count(n, self.config.ctx.q() as u64) {
            Ok(t) => *tally.traces.entry(t).or_default() += 1,
            Err(_) => {
                tally.non_integral += 1;
                log::warn!("index {index}: {n} points is not of the form q^2 + (t+1)q + 1");
                tally.record(Finding {
                    index,
                    coeffs: form.to_text(),
                    kind: FindingKind::NonIntegralTrace { points: n },
                });
            }
        }
        if self.config.compute_lines {
            *tally.lines.entry(self.incidence.count_lines(form)?).or_default() += 1;
        }
        Ok(())
    }

    fn run(&self, range: Range<u64>) -> Result<Tally, CensusError> {
        let ctx = &self.config.ctx;
        let mut tally = Tally::default();
        match self.config.mode {
            Mode::Exhaustive => {
                let Some(mut cursor) = MonicCursor::at(ctx, range.start) else {
                    return Ok(tally);
                };
                for index in range {
                    let form = CubicForm::new(ctx, cursor.coeffs);
                    self.classify(index, &form, &mut tally)?;
                    cursor.advance();
                }
            }
            Mode::Sample { seed, .. } => {
                for index in range {
                    self.classify(index, &sample_form(ctx, seed, index), &mut tally)?;
                }
            }
        }
        Ok(tally)
    }
}

/// Splits `range` into `parts` contiguous pieces of near-equal size.
fn split(range: Range<u64>, parts: usize) -> Vec<Range<u64>> {
    let len = range.end - range.start;
    let parts = parts as u64;
    (0..parts)
        .map(|i| {
            let a = range.start + len * i / parts;
            let b = range.start + len * (i + 1) / parts;
            a..b
        })
        .collect()
}

pub fn run_census(config: &CensusConfig) -> Result<CensusReport, CensusError> {
    match run_census_until(config, None)? {
        RunStatus::Complete(r) => Ok(*r),
        RunStatus::Paused { .. } => unreachable!("no stop index was given"),
    }
}

/// Runs the census, stopping at the first chunk boundary at or beyond
/// `stop_at` if one is given.
pub fn run_census_until(config: &CensusConfig, stop_at: Option<u64>) -> Result<RunStatus, CensusError> {
    config.validate()?;
    let started = Instant::now();
    let started_at_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let total = config.total()?;
    let hash = config.config_hash();

    let mut partials = vec![Tally::default(); config.partitions];
    let mut next = 0;
    if let Some(path) = &config.resume {
        let cp = Checkpoint::load(path)?;
        if cp.config_hash != hash {
            return Err(CensusError::ResumeMismatch {
                expected: hash,
                found: cp.config_hash,
            });
        }
        next = cp.next_index()?;
        if next > total {
            return Err(CensusError::InvalidConfig(format!(
                "checkpoint index {next} is past the end {total}"
            )));
        }
        // the stored partition layout need not match the current one
        for t in &cp.partials {
            partials[0].merge(t);
        }
        log::info!("resuming at index {next} of {total}");
    }

    let worker = Worker {
        config,
        engine: SmoothnessEngine::with_depth(&config.ctx, config.strategy, config.search_depth)?,
        incidence: Incidence::new(&config.ctx, config.compute_lines),
    };

    while next < total {
        if stop_at.is_some_and(|s| next >= s) {
            return Ok(RunStatus::Paused { next_index: next });
        }
        let end = total.min(next.saturating_add(config.checkpoint_interval));
        let ranges = split(next..end, config.partitions);
        let results: Vec<Result<Tally, CensusError>> = if config.partitions == 1 {
            vec![worker.run(next..end)]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = ranges
                    .iter()
                    .map(|r| {
                        let r = r.clone();
                        let w = &worker;
                        s.spawn(move || w.run(r))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("census worker panicked"))
                    .collect()
            })
        };
        for (acc, r) in partials.iter_mut().zip(results) {
            acc.merge(&r?);
        }
        next = end;
        log::debug!("census at {next}/{total}");
        if let Some(path) = &config.checkpoint {
            Checkpoint {
                config_hash: hash.clone(),
                next_index: next.to_string(),
                total: total.to_string(),
                partials: partials.clone(),
            }
            .store(path)?;
        }
    }

    let mut tally = Tally::default();
    for t in &partials {
        tally.merge(t);
    }
    let run = RunInfo {
        started_at_unix,
        duration_secs: started.elapsed().as_secs_f64(),
        partitions: config.partitions,
        resumed: config.resume.is_some(),
    };
    Ok(RunStatus::Complete(Box::new(CensusReport::assemble(config, tally, run))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub status: CheckStatus,
    pub expected: String,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub q: u32,
    pub checks: Vec<Check>,
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl std::fmt::Display for VerificationOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            writeln!(
                f,
                "[{tag}] ({}) {}: expected {}, observed {}",
                c.id, c.description, c.expected, c.observed
            )?;
        }
        Ok(())
    }
}

fn check(id: &str, description: &str, ok: bool, expected: impl ToString, observed: impl ToString) -> Check {
    Check {
        id: id.to_string(),
        description: description.to_string(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        expected: expected.to_string(),
        observed: observed.to_string(),
    }
}

fn skipped(id: &str, description: &str, why: &str) -> Check {
    Check {
        id: id.to_string(),
        description: description.to_string(),
        status: CheckStatus::Skipped,
        expected: why.to_string(),
        observed: "-".to_string(),
    }
}

/// Compares a report with the predictions for its field. Failures are
/// returned as data.
pub fn verify_report(r: &CensusReport, pred: &Prediction) -> VerificationOutcome {
    let mut checks = Vec::new();
    let q = r.q as u64;
    let exhaustive = r.mode == Mode::Exhaustive;

    if pred.q != q {
        checks.push(check("field", "prediction is for the report's field", false, q, pred.q));
    }
    if exhaustive {
        checks.push(check(
            "i",
            "smooth_count equals #M(F_q)",
            BigInt::from(r.smooth_count) == pred.smooth_count,
            &pred.smooth_count,
            r.smooth_count,
        ));
        checks.push(check(
            "ii",
            "point_sum equals #U(F_q)",
            BigInt::from(r.point_sum) == pred.point_sum,
            &pred.point_sum,
            r.point_sum,
        ));
    } else {
        let why = "exact totals need an exhaustive report";
        checks.push(skipped("i", "smooth_count equals #M(F_q)", why));
        checks.push(skipped("ii", "point_sum equals #U(F_q)", why));
    }

    let outside: Vec<i64> = r
        .trace_histogram
        .keys()
        .copied()
        .filter(|t| !pred.admissible_traces.contains(t))
        .collect();
    checks.push(check(
        "iii",
        "every trace is admissible",
        outside.is_empty(),
        format!("{:?}", pred.admissible_traces),
        if outside.is_empty() {
            "all admissible".to_string()
        } else {
            format!("inadmissible {outside:?}")
        },
    ));

    let t6 = r.trace_histogram.get(&6).copied().unwrap_or(0);
    let iv = "t = 6 occurs iff q is not 2, 3 or 5";
    match (pred.t6_allowed, t6 > 0, exhaustive) {
        (false, present, _) => checks.push(check("iv", iv, !present, "no t = 6", format!("{t6} with t = 6"))),
        (true, true, _) => checks.push(check("iv", iv, true, "some t = 6", format!("{t6} with t = 6"))),
        (true, false, true) => checks.push(check("iv", iv, false, "some t = 6", "none")),
        (true, false, false) => checks.push(skipped("iv", iv, "t = 6 not seen in the sample; absence proves nothing")),
    }

    match &r.line_histogram {
        Some(h) => {
            let max = h.keys().max().copied().unwrap_or(0);
            checks.push(check("v", "at most 27 lines on a smooth surface", max <= 27, "<= 27", max));
        }
        None => checks.push(skipped("v", "at most 27 lines on a smooth surface", "lines were not counted")),
    }

    let hist_total: u64 = r.trace_histogram.values().sum();
    checks.push(check(
        "identity-smooth",
        "smooth_count is the histogram total",
        hist_total == r.smooth_count,
        r.smooth_count,
        hist_total,
    ));
    let from_hist: i128 = r
        .trace_histogram
        .iter()
        .map(|(&t, &n)| (q as i128 * q as i128 + (t as i128 + 1) * q as i128 + 1) * n as i128)
        .sum();
    checks.push(check(
        "identity-points",
        "point_sum is sum over t of (q^2 + (t+1)q + 1) * count",
        from_hist == r.point_sum as i128,
        r.point_sum,
        from_hist,
    ));
    if exhaustive {
        let n = count_monic(r.q).map(|n| n.to_string()).unwrap_or_else(|| "overflow".into());
        checks.push(check(
            "identity-total",
            "every class was visited",
            n == r.total_indexed.to_string(),
            n,
            r.total_indexed,
        ));
    }

    let (num, den) = pred.average;
    let expected_avg = num as f64 / den as f64;
    if exhaustive {
        let ok = r.average == Some(Fraction::reduced(num, den));
        let observed = r.average.map(|a| a.to_string()).unwrap_or_else(|| "none".into());
        checks.push(check("average", "average point count", ok, format!("{num}/{den}"), observed));
    } else {
        match r.sample_stats {
            Some(s) => checks.push(check(
                "average",
                "99% interval for the mean point count contains q^2 + q + 1",
                s.contains(expected_avg),
                expected_avg,
                format!("{:.4} in [{:.4}, {:.4}]", s.mean, s.ci_low, s.ci_high),
            )),
            None => checks.push(skipped("average", "mean point count", "fewer than two smooth samples")),
        }
    }

    checks.push(check(
        "findings",
        "no non-integral traces or oracle disagreements",
        r.findings.non_integral_traces == 0 && r.findings.oracle_disagreements == 0,
        "0 and 0",
        format!(
            "{} and {}",
            r.findings.non_integral_traces, r.findings.oracle_disagreements
        ),
    ));

    VerificationOutcome { q: r.q, checks }
}
