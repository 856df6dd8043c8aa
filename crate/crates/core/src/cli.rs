//! The `cubics` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 unsupported field or characteristic.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::census::{
    run_census, verify_report, CensusConfig, CensusError, CensusReport, Mode,
};
use crate::forms::{count_lines, count_points, CubicForm};
use crate::gf::FieldCtx;
use crate::ledger::{self, LedgerError};
use crate::smoothness::{SmoothnessEngine, SmoothnessError, Strategy, DEFAULT_SEARCH_DEPTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cubics", version, about = "Census of smooth cubic surfaces over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate or sample cubic surfaces and write a report.
    Census(CensusArgs),
    /// Smoothness, point count, trace and lines of one surface.
    Surface(SurfaceArgs),
    /// Smoothness verdict for one surface.
    Smooth(SmoothArgs),
    /// Subtype tables, spectral pages, Poincare polynomials or predictions.
    Ledger(LedgerArgs),
    /// Check a census report against the predictions.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Search,
    Macaulay,
    CrossCheck,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Search => Strategy::Search,
            StrategyArg::Macaulay => Strategy::Macaulay,
            StrategyArg::CrossCheck => Strategy::CrossCheck,
        }
    }
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, required_if_eq("mode", "sample"))]
    pub samples: Option<u64>,
    #[arg(long, required_if_eq("mode", "sample"))]
    pub seed: Option<u64>,
    /// Worker threads; the index range is split into this many parts.
    #[arg(long, alias = "partitions", default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value = "macaulay")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
    pub depth: u32,
    /// Count rational lines on each smooth surface.
    #[arg(long)]
    pub lines: bool,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1 << 16)]
    pub checkpoint_interval: u64,
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write `<prefix>traces.csv` and `<prefix>lines.csv`.
    #[arg(long)]
    pub csv_prefix: Option<String>,
    /// Permit characteristic 3; the run is labeled experimental.
    #[arg(long)]
    pub allow_char_3: bool,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub q: u64,
    /// 20 comma-separated coefficients in monomial order.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
    pub depth: u32,
}

#[derive(Args, Debug)]
pub struct SmoothArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long, value_enum, default_value = "cross-check")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
    pub depth: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Tables,
    Pages,
    Poincare,
    Predict,
}

#[derive(Args, Debug)]
pub struct LedgerArgs {
    #[arg(long, value_enum)]
    pub emit: Emit,
    #[arg(long, required_if_eq("emit", "predict"))]
    pub q: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub json: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn unsupported(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_UNSUPPORTED,
        message: message.into(),
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Failure {
        match e {
            CensusError::UnsupportedCharacteristic(_) | CensusError::IndexOverflow(_) => unsupported(e.to_string()),
            CensusError::Smoothness(s) => engine_failure("lower --depth or use --strategy macaulay")(s),
            other => invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        invalid(e.to_string())
    }
}

fn field(q: u64) -> Result<FieldCtx, Failure> {
    FieldCtx::of_order(q).map_err(|e| unsupported(format!("--q {q}: {e}")))
}

fn form(ctx: &FieldCtx, coeffs: &str) -> Result<CubicForm, Failure> {
    let f = CubicForm::parse(ctx, coeffs).map_err(|e| invalid(format!("--coeffs: {e}")))?;
    if f.is_zero() {
        return Err(invalid("--coeffs: the zero form does not define a surface"));
    }
    Ok(f)
}

/// Engine construction only fails when an extension field for the search is too large.
fn engine_failure(hint: &'static str) -> impl Fn(SmoothnessError) -> Failure {
    move |e| match e {
        SmoothnessError::Field(_) => unsupported(format!(
            "{e}; the singular-point search needs GF(q^d) for every d up to --depth, so {hint}"
        )),
        other => smoothness_failure(other),
    }
}

fn smoothness_failure(e: SmoothnessError) -> Failure {
    match e {
        SmoothnessError::Field(_) => unsupported(e.to_string()),
        SmoothnessError::OracleDisagreement { .. } => Failure {
            code: EXIT_VERIFY_FAILED,
            message: e.to_string(),
        },
        other => invalid(other.to_string()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Census(a) => cmd_census(&a, out),
        Command::Surface(a) => cmd_surface(&a, out),
        Command::Smooth(a) => cmd_smooth(&a, out),
        Command::Ledger(a) => cmd_ledger(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn cmd_census(a: &CensusArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = field(a.q)?;
    let mode = match a.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Sample => Mode::Sample {
            count: a.samples.ok_or_else(|| invalid("--samples is required in sample mode"))?,
            seed: a.seed.ok_or_else(|| invalid("--seed is required in sample mode"))?,
        },
    };
    if a.resume.as_ref().is_some_and(|p| !p.exists()) {
        return Err(invalid(format!("--resume: {} does not exist", a.resume.as_ref().unwrap().display())));
    }
    let mut config = CensusConfig::new(&ctx, mode)
        .with_strategy(a.strategy.into())
        .with_partitions(a.threads)
        .with_lines(a.lines);
    config.search_depth = a.depth;
    config.checkpoint_interval = a.checkpoint_interval;
    config.checkpoint = a.checkpoint.clone();
    config.resume = a.resume.clone();
    config.allow_char_3 = a.allow_char_3;
    config.validate()?;

    let report = run_census(&config)?;
    if let Some(path) = &a.out {
        report.save(path)?;
    }
    if let Some(prefix) = &a.csv_prefix {
        std::fs::write(format!("{prefix}traces.csv"), report.trace_csv()?)?;
        if let Some(lines) = report.line_csv()? {
            std::fs::write(format!("{prefix}lines.csv"), lines)?;
        }
    }
    write!(out, "{}", summary(&report))?;
    Ok(EXIT_OK)
}

/// One-page human summary of a report.
pub fn summary(r: &CensusReport) -> String {
    let mut s = String::new();
    let mode = match r.mode {
        Mode::Exhaustive => "exhaustive".to_string(),
        Mode::Sample { count, seed } => format!("sample of {count}, seed {seed}"),
    };
    s += &format!("census over F_{} ({mode})\n", r.q);
    if r.config.experimental {
        s += "  characteristic 3: experimental run\n";
    }
    s += &format!("  classes visited  {}\n", r.total_indexed);
    s += &format!("  smooth           {}\n", r.smooth_count);
    s += &format!("  point sum        {}\n", r.point_sum);
    match r.average {
        Some(a) => s += &format!("  average points   {a}\n"),
        None => s += "  average points   (no smooth surfaces)\n",
    }
    if let Some(st) = &r.sample_stats {
        s += &format!(
            "  99% interval     [{:.4}, {:.4}] around {:.4}\n",
            st.ci_low, st.ci_high, st.mean
        );
    }
    s += "  trace histogram\n";
    for (t, n) in &r.trace_histogram {
        s += &format!("    t = {t:>2}  {n}\n");
    }
    if let Some(h) = &r.line_histogram {
        s += "  line histogram\n";
        for (l, n) in h {
            s += &format!("    {l:>2} lines  {n}\n");
        }
    }
    let f = &r.findings;
    if f.non_integral_traces + f.oracle_disagreements > 0 {
        s += &format!(
            "  findings: {} non-integral traces, {} oracle disagreements\n",
            f.non_integral_traces, f.oracle_disagreements
        );
    }
    s
}

pub fn cmd_surface(a: &SurfaceArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = field(a.q)?;
    let f = form(&ctx, &a.coeffs)?;
    let engine =
        SmoothnessEngine::with_depth(&ctx, Strategy::CrossCheck, a.depth).map_err(engine_failure("lower --depth"))?;
    let verdict = engine.is_smooth(&f).map_err(smoothness_failure)?;
    let points = count_points(&f).map_err(|e| invalid(e.to_string()))?;
    let lines = count_lines(&f).map_err(|e| invalid(e.to_string()))?;
    writeln!(out, "surface over F_{}: {}", ctx.q(), f.to_text())?;
    writeln!(out, "smooth: {}", if verdict.smooth { "yes" } else { "no" })?;
    writeln!(out, "points: {points}")?;
    if verdict.smooth {
        match crate::census::trace_from_count(points, ctx.q() as u64) {
            Ok(t) => writeln!(out, "trace: {t}")?,
            Err(e) => writeln!(out, "trace: not an integer ({e})")?,
        }
    }
    writeln!(out, "lines: {lines}")?;
    if let Some(w) = &verdict.witness {
        writeln!(out, "singular point: {} over F_{}^{}", w.point, ctx.q(), w.degree)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_smooth(a: &SmoothArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = field(a.q)?;
    let f = form(&ctx, &a.coeffs)?;
    let engine = SmoothnessEngine::with_depth(&ctx, a.strategy.into(), a.depth)
        .map_err(engine_failure("lower --depth or use --strategy macaulay"))?;
    let v = engine.is_smooth(&f).map_err(smoothness_failure)?;
    writeln!(out, "smooth: {}", if v.smooth { "yes" } else { "no" })?;
    if let Some(r) = v.rank {
        writeln!(out, "macaulay rank: {}/{}", r.rank, r.target)?;
    }
    if let Some(w) = &v.witness {
        writeln!(out, "singular point: {} over F_{}^{}", w.point, ctx.q(), w.degree)?;
    }
    Ok(EXIT_OK)
}

fn ledger_failure(e: LedgerError) -> Failure {
    match e {
        LedgerError::UnsupportedCharacteristic(_) | LedgerError::NotPrimePower(_) => unsupported(e.to_string()),
        other => Failure {
            code: EXIT_VERIFY_FAILED,
            message: other.to_string(),
        },
    }
}

pub fn cmd_ledger(a: &LedgerArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    match a.emit {
        Emit::Tables => {
            let table = ledger::subtype_table();
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&table).expect("serializes"))?;
                return Ok(EXIT_OK);
            }
            writeln!(out, "{:<6} {:>6} {:>6} {:>4}  {:<22} H^*(A; sign)", "type", "dim A", "dim L", "deg", "locus")?;
            for r in &table {
                let dim = |d: Option<u32>| d.map_or("-".to_string(), |d| d.to_string());
                let coh = if r.cohomology.is_empty() {
                    "0".to_string()
                } else {
                    r.cohomology
                        .iter()
                        .map(|(m, rank)| format!("H^{m}={rank}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let locus = match r.n_points() {
                    Some(n) => format!("{n} point(s)"),
                    None => format!("{:?}", r.locus),
                };
                writeln!(
                    out,
                    "{:<6} {:>6} {:>6} {:>4}  {:<22} {coh}",
                    r.id,
                    dim(r.dim_a),
                    dim(r.dim_l),
                    dim(r.deg()),
                    locus
                )?;
            }
        }
        Emit::Pages => {
            let e1 = ledger::assemble_e1();
            let e1_small = e1.reindexed();
            if a.json {
                let v = serde_json::json!({ "E1": e1, "e1": e1_small });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializes"))?;
                return Ok(EXIT_OK);
            }
            writeln!(out, "E1 entries (p, q): rank  [subtype, H^m]")?;
            for e in &e1.entries {
                writeln!(out, "  E1({:>2}, {:>2}): {}  [{}, m = {}]", e.p, e.q, e.rank, e.subtype, e.source_degree)?;
            }
            writeln!(out, "\nE1 page\n{}", e1.grid())?;
            writeln!(out, "e1 page\n{}", e1_small.grid())?;
        }
        Emit::Poincare => {
            let xp = ledger::poincare_xp().map_err(ledger_failure)?;
            let up = ledger::poincare_up().map_err(ledger_failure)?;
            let u = ledger::poincare_u().map_err(ledger_failure)?;
            let m = ledger::poincare_m();
            let rows = [
                ("P(X_p; t)", ledger::expected_xp().display("t"), xp),
                ("P(U_p; t)", ledger::expected_up().display("t"), up),
                ("P(U; t)", u.display("t"), u.expand()),
                ("P(M; t)", m.display("t"), m.expand()),
            ];
            if a.json {
                let v: Vec<_> = rows
                    .iter()
                    .map(|(name, fac, p)| serde_json::json!({"name": name, "factored": fac, "coefficients": p.coeffs()}))
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializes"))?;
                return Ok(EXIT_OK);
            }
            for (name, fac, p) in rows {
                writeln!(out, "{name:<10} = {fac}")?;
                writeln!(out, "{:<10} = {}", "", p.display("t"))?;
            }
            let cm = ledger::count_m_factored();
            let cu = ledger::count_u_factored();
            writeln!(out, "{:<10} = {}", "#M(F_q)", cm.display("q"))?;
            writeln!(out, "{:<10} = {}", "#U(F_q)", cu.display("q"))?;
        }
        Emit::Predict => {
            let q = a.q.ok_or_else(|| invalid("--q is required with --emit predict"))?;
            let p = ledger::predict(q).map_err(ledger_failure)?;
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&p).expect("serializes"))?;
                return Ok(EXIT_OK);
            }
            writeln!(out, "q                  {}", p.q)?;
            writeln!(out, "#M(F_q)            {}", p.smooth_count)?;
            writeln!(out, "#U(F_q)            {}", p.point_sum)?;
            writeln!(out, "average            {}/{}", p.average.0, p.average.1)?;
            writeln!(out, "admissible traces  {:?}", p.admissible_traces)?;
            writeln!(out, "t = 6 allowed      {}", p.t6_allowed)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let report = CensusReport::load(&a.report).map_err(|e| invalid(format!("--report: {e}")))?;
    let pred = if report.config.experimental {
        ledger::predict_unchecked(report.q as u64)
    } else {
        ledger::predict(report.q as u64)
    }
    .map_err(ledger_failure)?;
    let outcome = verify_report(&report, &pred);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&outcome).expect("serializes"))?;
    } else {
        if report.mode != Mode::Exhaustive {
            writeln!(out, "note: sample report; exact totals are skipped, the interval check applies")?;
        }
        write!(out, "{outcome}")?;
    }
    Ok(if outcome.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
