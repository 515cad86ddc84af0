//! The `gapforge` command line. Argument definitions live in [`args`]; this
//! module runs them against the library and maps outcomes to exit codes:
//! 0 completed, 1 a verified claim was violated, 2 usage or configuration
//! error, 3 too many indeterminate verdicts.

pub mod args;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::Parser;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use gapforge::bounds::{bound_scan, firoozbakht_scan, GapBound};
use gapforge::kummer::{canonical_multipliers, CanonicalMultiplier, Framing, WitnessSearch};
use gapforge::numeric::decimal::parse_decimal;
use gapforge::report::{
    format_sig17, format_value, recurrence_rows, BoundRow, CheckpointRow, ComparisonRow, Format, LiminfRow,
    PrimeRow, RecordWriter, TwinRow, ValueRow, WitnessRow, XiRow,
};
use gapforge::sequences::expr::parse_sequence_expr;
use gapforge::sequences::Table;
use gapforge::sieve::default_parallelism;
use gapforge::xi::{twin_explorer, Counts};
use gapforge::{
    bound_comparison_scan, classical_checks, find_violation_witness, gap_stream, iterate_equality,
    kummer_inequality_scan, liminf_track, primes_up_to_with, xi_scan, AuxSequenceSpec, Builtin, Checkpoints, Error,
    EvalValue, GuardBand, Metric, Primes, Result, Series, SeriesSpec, SieveConfig, VerdictState,
};

use args::{
    ClassicalArgs, Cli, Command, CompareArgs, Emit, FiroozbakhtArgs, FormatArg, FramingArg, GapsArgs,
    KummerCanonicalArgs, KummerCommand, KummerScanArgs, KummerWitnessArgs, LiminfArgs, NumericArgs, OutputArgs,
    RangeArgs, RecurrenceArgs, SeriesArgs, SieveArgs, VerifyCommand, XiArgs,
};

/// Seed for `kummer witness --random-b` when `--seed-rng` is not given.
pub const DEFAULT_RNG_SEED: u64 = 0x6761_7066;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

/// Parse `argv` (program name first), run the command, return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// `count` tables of `len` positive multipliers m/100 with m in [1, 10^5],
/// generated lazily from one seeded stream.
pub fn random_multipliers(seed: u64, count: u64, len: u64) -> impl Iterator<Item = Result<Table>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| {
        let values: Vec<(u64, BigRational)> = (1..=len)
            .map(|n| {
                let m: u64 = rng.gen_range(1..=100_000);
                (n, BigRational::new(BigInt::from(m), BigInt::from(100)))
            })
            .collect();
        Table::from_values(values)
    })
}

fn exit_code(violation: bool, indeterminate: u64, max_indet: u64) -> i32 {
    if violation {
        EXIT_VIOLATION
    } else if indeterminate > max_indet {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    }
}

/// Record writer plus the summary lines printed once the run ends.
struct Output {
    writer: Option<RecordWriter<Box<dyn Write>>>,
    failures_only: bool,
    summary_to_stderr: bool,
    lines: Vec<String>,
}

impl Output {
    fn open(args: &OutputArgs) -> Result<Self> {
        let format = match args.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Jsonl => Format::Jsonl,
        };
        let (sink, summary_to_stderr): (Option<Box<dyn Write>>, bool) = match &args.out {
            None => (None, false),
            Some(p) if p.as_os_str() == "-" => (Some(Box::new(io::stdout().lock())), true),
            Some(p) => (Some(Box::new(BufWriter::new(create(p)?))), false),
        };
        Ok(Self {
            writer: sink.map(|w| RecordWriter::new(w, format)),
            failures_only: args.emit == Emit::Failures,
            summary_to_stderr,
            lines: Vec::new(),
        })
    }

    fn row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        match &mut self.writer {
            Some(w) => w.write(row),
            None => Ok(()),
        }
    }

    fn keeps(&self, state: VerdictState) -> bool {
        !self.failures_only || state != VerdictState::Holds
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn finish(self) -> Result<()> {
        if let Some(w) = self.writer {
            w.finish()?;
        }
        let text: String = self.lines.iter().map(|l| format!("{l}\n")).collect();
        if self.summary_to_stderr {
            io::stderr().write_all(text.as_bytes())?;
        } else {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Ok(())
    }
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))
}

fn guard(numeric: &NumericArgs) -> Result<GuardBand> {
    let rel = numeric.guard_band;
    if !rel.is_finite() || rel < 0.0 {
        return Err(Error::Config(format!("guard band must be finite and non-negative, got {rel}")));
    }
    Ok(GuardBand::new(rel))
}

fn primes(parallelism: Option<usize>) -> Result<Primes> {
    match parallelism {
        Some(k) => Primes::with_parallelism(k),
        None => Ok(Primes::new()),
    }
}

fn checkpoints(list: &[u64]) -> Checkpoints {
    if list.is_empty() {
        Checkpoints::PowersOfTwo
    } else {
        Checkpoints::Explicit(list.to_vec())
    }
}

fn decimal(text: &str) -> Result<EvalValue> {
    Ok(EvalValue::Exact(parse_decimal(text.trim())?))
}

fn sequence(seq: Option<&str>, file: Option<&Path>) -> Result<Option<AuxSequenceSpec>> {
    match (seq, file) {
        (Some(text), _) => AuxSequenceSpec::from_text(text).map(Some),
        (None, Some(path)) => Ok(Some(AuxSequenceSpec::tabulated(Table::read(path)?))),
        (None, None) => Ok(None),
    }
}

/// A series name with its natural framing.
fn series_spec(text: &str) -> Result<(SeriesSpec, Framing)> {
    let text = text.trim();
    Ok(match text {
        "reciprocal_primes" => (SeriesSpec::ReciprocalPrimes, Framing::Reciprocals),
        "harmonic" => (SeriesSpec::Harmonic, Framing::Reciprocals),
        "squares" => (SeriesSpec::Squares, Framing::Reciprocals),
        _ => match text.strip_prefix("geometric:") {
            Some(r) => (SeriesSpec::Geometric(parse_decimal(r.trim())?), Framing::Terms),
            None => (SeriesSpec::Expression(parse_sequence_expr(text)?), Framing::Reciprocals),
        },
    })
}

fn series(args: &SeriesArgs) -> Result<Series> {
    let (spec, natural) = series_spec(&args.series)?;
    let framing = match args.framing {
        Some(FramingArg::Terms) => Framing::Terms,
        Some(FramingArg::Reciprocals) => Framing::Reciprocals,
        None => natural,
    };
    Ok(Series { spec, framing })
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Sieve(a) => sieve(a),
        Command::Gaps(a) => gaps(a),
        Command::Xi(a) if a.twin_pairs => twins(a),
        Command::Xi(a) => xi(a),
        Command::Verify(VerifyCommand::Firoozbakht(a)) => firoozbakht(a),
        Command::Verify(VerifyCommand::Rosser(a)) => classical(
            ClassicalArgs {
                to: a.to,
                checkpoints: a.checkpoints,
                numeric: a.numeric,
                output: a.output,
            },
            true,
        ),
        Command::Verify(VerifyCommand::TwoOverN(a)) => gap_bound(GapBound::TwoOverN, a),
        Command::Verify(VerifyCommand::Kourbatov(a)) => gap_bound(GapBound::Kourbatov, a),
        Command::Verify(VerifyCommand::Sharp(a)) => gap_bound(GapBound::Sharp, a),
        Command::Verify(VerifyCommand::CompareBounds(a)) => compare(a),
        Command::Kummer(KummerCommand::Scan(a)) => kummer_scan(a),
        Command::Kummer(KummerCommand::Witness(a)) => kummer_witness(a),
        Command::Kummer(KummerCommand::Canonical(a)) => kummer_canonical(a),
        Command::Liminf(a) => liminf(a),
        Command::Recurrence(a) => recurrence(a),
        Command::Classical(a) => classical(a, false),
    }
}

fn sieve(a: SieveArgs) -> Result<i32> {
    let mut config = SieveConfig::new(a.limit)?;
    if let Some(s) = a.segment_size {
        config = config.with_segment_size(s)?;
    }
    if let Some(k) = a.parallelism {
        config = config.with_parallelism(k)?;
    }
    let mut out = Output::open(&a.output)?;
    let mut count = 0;
    let mut last = None;
    for (n, p_n) in primes_up_to_with(config)? {
        out.row(&PrimeRow { n, p_n })?;
        count = n;
        last = Some(p_n);
    }
    out.say(format!("pi({}) = {count}", a.limit));
    if let Some(p) = last {
        out.say(format!("largest prime: {p}"));
    }
    out.finish()?;
    Ok(EXIT_OK)
}

fn gaps(a: GapsArgs) -> Result<i32> {
    let primes = primes(a.parallelism)?;
    let mut out = Output::open(&a.output)?;
    let mut largest: Option<(u64, u64)> = None;
    for rec in gap_stream(&primes, a.from, a.to)? {
        out.row(&rec)?;
        if largest.is_none_or(|(_, g)| rec.g > g) {
            largest = Some((rec.n, rec.g));
        }
    }
    out.say(format!("gaps for n in [{}, {}]", a.from, a.to));
    if let Some((n, g)) = largest {
        out.say(format!("largest gap: g_{n} = {g}"));
    }
    out.finish()?;
    Ok(EXIT_OK)
}

fn xi(a: XiArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let spec = sequence(a.seq.as_deref(), a.seq_file.as_deref())?
        .ok_or_else(|| Error::Config("no sequence given".into()))?;
    if a.block == Some(0) {
        return Err(Error::Config("block size must be positive".into()));
    }
    let mut out = Output::open(&a.output)?;
    let scan = xi_scan(&spec, a.from, a.to, &primes, guard)?;
    if let Some((requested, actual)) = scan.clipped() {
        out.say(format!(
            "note: q_n is not positive before n = {actual}; scanning from {actual} instead of {requested}"
        ));
    }
    let start = scan.start();
    let mut counts = Counts::default();
    let mut blocks: Vec<(u64, Counts)> = Vec::new();
    let mut largest = None;
    let mut disagreements = 0u64;
    let mut exact = 0u64;
    for rec in scan {
        let rec = rec?;
        let state = rec.verdict.state;
        counts.record(state);
        if let Some(size) = a.block {
            let first = (rec.n - 1) / size * size + 1;
            if blocks.last().map(|b| b.0) != Some(first) {
                blocks.push((first, Counts::default()));
            }
            if let Some(b) = blocks.last_mut() {
                b.1.record(state);
            }
        }
        if state == VerdictState::Holds {
            largest = Some(rec.n);
        }
        let ratio = rec.ratio_verdict.state;
        if state != VerdictState::Indeterminate && ratio != VerdictState::Indeterminate && ratio != state {
            disagreements += 1;
        }
        exact += u64::from(rec.verdict.exact);
        if out.keeps(state) {
            out.row(&XiRow::from(&rec))?;
        }
    }
    out.say(format!("xi {spec}: n in [{start}, {}]", a.to));
    out.say(format!(
        "in xi: {}, not in xi: {}, indeterminate: {}",
        counts.holds, counts.fails, counts.indeterminate
    ));
    out.say(format!("exact comparisons: {exact} of {}", counts.total()));
    match largest {
        Some(n) => out.say(format!("largest n in xi: {n}")),
        None => out.say("xi is empty on this range"),
    }
    if disagreements > 0 {
        out.say(format!("warning: gap and ratio forms disagree at {disagreements} indices"));
    }
    if let Some(size) = a.block {
        for (first, c) in &blocks {
            let last = (first + size - 1).min(a.to);
            out.say(format!(
                "block [{first}, {last}]: {} in xi of {} ({:.4})",
                c.holds,
                c.total(),
                c.holds as f64 / c.total() as f64
            ));
        }
    }
    out.finish()?;
    Ok(exit_code(false, counts.indeterminate, a.numeric.max_indet))
}

fn twins(a: XiArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let mut out = Output::open(&a.output)?;
    let report = twin_explorer(a.to, &primes, guard)?;
    for pair in &report.pairs {
        out.row(&TwinRow::from(pair))?;
    }
    let odd_gaps = report.pairs.iter().filter(|p| p.g != 2).count();
    out.say(format!("twin_piecewise: n in [1, {}]", a.to));
    out.say(format!(
        "even n in xi: {}, with Q_n <= 4: {}, with Q_n > 4: {}",
        report.even_in_xi,
        report.pairs.len(),
        report.even_large_bound
    ));
    out.say(format!("odd n in xi: {}", report.odd_in_xi));
    out.say(format!("indeterminate: {}", report.indeterminate));
    if odd_gaps > 0 {
        out.say(format!("warning: {odd_gaps} candidate pairs have g_n != 2"));
    }
    out.finish()?;
    Ok(exit_code(false, report.indeterminate, a.numeric.max_indet))
}

fn firoozbakht(a: FiroozbakhtArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let workers = a.numeric.parallelism.unwrap_or_else(default_parallelism);
    let mut out = Output::open(&a.output)?;
    let summary = firoozbakht_scan(a.limit, workers, guard, |r| {
        if out.keeps(r.verdict.state) {
            out.row(&BoundRow::from(r))?;
        }
        Ok(())
    })?;
    let c = summary.counts;
    out.say(format!(
        "firoozbakht: {} consecutive prime pairs below {}",
        summary.checked, summary.limit
    ));
    out.say(format!(
        "{} violations, {} indeterminate, {} settled by exact powering",
        c.fails, c.indeterminate, summary.exact_resolutions
    ));
    if let Some(n) = summary.violations.first() {
        out.say(format!("first violation at n = {n}"));
    }
    out.finish()?;
    Ok(exit_code(c.fails > 0, c.indeterminate, a.numeric.max_indet))
}

fn gap_bound(bound: GapBound, a: RangeArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let from = a.from.unwrap_or(bound.min_index());
    let mut out = Output::open(&a.output)?;
    let summary = bound_scan(bound, from, a.to, &primes, guard, |r| {
        if out.keeps(r.verdict.state) {
            out.row(&BoundRow::from(r))?;
        }
        Ok(())
    })?;
    let name = match bound {
        GapBound::TwoOverN => "two_over_n",
        GapBound::Kourbatov => "kourbatov",
        GapBound::Sharp => "sharp",
    };
    let c = summary.counts;
    out.say(format!("{name}: n in [{}, {}]", summary.n_start, summary.n_end));
    out.say(format!(
        "holds: {}, fails: {}, indeterminate: {}",
        c.holds, c.fails, c.indeterminate
    ));
    if let (Some(first), Some(last)) = (summary.first_failure, summary.last_failure) {
        out.say(format!("failures from n = {first} to n = {last}"));
    }
    out.finish()?;
    // Two-over-n and sharp only hold on Ξ; failures elsewhere are expected.
    let violation = bound == GapBound::Kourbatov && c.fails > 0;
    Ok(exit_code(violation, c.indeterminate, a.numeric.max_indet))
}

fn compare(a: CompareArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let b = decimal(&a.b)?;
    let mut out = Output::open(&a.output)?;
    let summary = bound_comparison_scan(a.from, a.to, &b, &primes, guard, |c| {
        if out.keeps(c.verdict.state) {
            out.row(&ComparisonRow::from(c))?;
        }
        Ok(())
    })?;
    out.say(format!("compare sharp vs kourbatov (b = {}): n in [{}, {}]", a.b, a.from, a.to));
    out.say(format!(
        "sharp smaller: {}, not smaller: {}, indeterminate: {}",
        summary.sharp_smaller, summary.not_smaller, summary.indeterminate
    ));
    match summary.largest_not_smaller {
        Some(n) => out.say(format!("sharp bound smaller for every n > {n}")),
        None => out.say("sharp bound smaller on the whole range"),
    }
    out.finish()?;
    Ok(exit_code(false, summary.indeterminate, a.numeric.max_indet))
}

fn classical(a: ClassicalArgs, verify: bool) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let mut out = Output::open(&a.output)?;
    let report = classical_checks(a.to, &checkpoints(&a.checkpoints), &primes, guard)?;
    for c in &report.checkpoints {
        out.row(&CheckpointRow::from(c))?;
    }
    let r = report.rosser;
    out.say(format!("rosser n ln n < p_n: n in [1, {}]", a.to));
    out.say(format!(
        "holds: {}, violations: {}, indeterminate: {}",
        r.holds, r.fails, r.indeterminate
    ));
    for c in &report.checkpoints {
        out.say(format!(
            "n = {}: p_n = {}, p_n/(n ln n) = {}, p_n^(1/n) = {}",
            c.n,
            c.p_n,
            format_sig17(c.pnt_ratio),
            format_sig17(c.nth_root)
        ));
    }
    out.finish()?;
    Ok(exit_code(verify && r.fails > 0, r.indeterminate, a.numeric.max_indet))
}

fn multipliers(text: &str, total: Option<&str>, series: &Series) -> Result<AuxSequenceSpec> {
    if text.trim() != "kummer_canonical" {
        return AuxSequenceSpec::from_text(text);
    }
    let total = total.ok_or_else(|| Error::Config("--b kummer_canonical needs --total".into()))?;
    Ok(AuxSequenceSpec::Builtin(Builtin::KummerCanonical(Box::new(CanonicalMultiplier::new(
        series.clone(),
        decimal(total)?,
    )))))
}

fn kummer_scan(a: KummerScanArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let series = series(&a.series)?;
    let b = multipliers(&a.b, a.total.as_deref(), &series)?;
    let c = decimal(&a.c)?;
    let check = kummer_inequality_scan(&series, &b, a.n0, &c, a.to, &primes, guard)?;
    let mut out = Output::open(&OutputArgs {
        out: None,
        format: FormatArg::Csv,
        emit: Emit::All,
    })?;
    out.say(format!("kummer {}: b = {b}, c = {}, n in ({}, {}]", a.series.series, a.c, a.n0, a.to));
    match check.first_violation {
        Some(n) => out.say(format!("first violation at n = {n}")),
        None if check.unresolved.is_empty() => out.say("certified on the whole range"),
        None => out.say("no violation found"),
    }
    if !check.unresolved.is_empty() {
        out.say(format!("indeterminate at {} indices", check.unresolved.len()));
    }
    out.finish()?;
    Ok(exit_code(false, check.unresolved.len() as u64, a.numeric.max_indet))
}

fn kummer_witness(a: KummerWitnessArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let (a_spec, _) = series_spec(&a.a)?;
    let mut out = Output::open(&a.output)?;
    let mut to = a.to;
    let trials: Box<dyn Iterator<Item = Result<AuxSequenceSpec>>> = match (&a.b, &a.b_file, a.random_b) {
        (Some(text), _, _) => Box::new(std::iter::once(AuxSequenceSpec::from_text(text))),
        (None, Some(path), _) => Box::new(std::iter::once(Table::read(path).map(AuxSequenceSpec::tabulated))),
        (None, None, Some(count)) => {
            if a.random_len < 2 {
                return Err(Error::Config("--random-len must be at least 2".into()));
            }
            if to >= a.random_len {
                to = a.random_len - 1;
                out.say(format!("note: search stops at n = {to}, the end of the random tables"));
            }
            Box::new(random_multipliers(a.seed_rng, count, a.random_len).map(|t| t.map(AuxSequenceSpec::tabulated)))
        }
        (None, None, None) => return Err(Error::Config("no multipliers given".into())),
    };
    let mut tried = 0u64;
    let mut found = 0u64;
    let mut largest = 0u64;
    let mut unresolved = 0u64;
    for b in trials {
        let b = b?;
        tried += 1;
        let search = find_violation_witness(&a_spec, &b, a.from, to, &primes, guard)?;
        let row = match &search {
            WitnessSearch::Found(w) => {
                found += 1;
                largest = largest.max(w.n_prime);
                WitnessRow {
                    trial: tried,
                    n_prime: Some(w.n_prime),
                    lhs: format_value(&w.lhs),
                    rhs: format_value(&w.rhs),
                }
            }
            WitnessSearch::NotFoundUpTo { unresolved: u, .. } => {
                unresolved += u.len() as u64;
                WitnessRow {
                    trial: tried,
                    n_prime: None,
                    lhs: String::new(),
                    rhs: String::new(),
                }
            }
        };
        let state = if row.n_prime.is_some() {
            VerdictState::Holds
        } else {
            VerdictState::Fails
        };
        if out.keeps(state) {
            out.row(&row)?;
        }
    }
    out.say(format!(
        "witness b_n a_(n+1) - b_(n+1) a_n < a_n found in {found} of {tried} trials, n in [{}, {to}]",
        a.from
    ));
    if found > 0 {
        out.say(format!("largest witness index: {largest}"));
    }
    if unresolved > 0 {
        out.say(format!("indeterminate: {unresolved}"));
    }
    out.finish()?;
    Ok(exit_code(false, unresolved, a.numeric.max_indet))
}

fn kummer_canonical(a: KummerCanonicalArgs) -> Result<i32> {
    let primes = Primes::new();
    let series = series(&a.series)?;
    let total = decimal(&a.total)?;
    let mut out = Output::open(&a.output)?;
    let values = canonical_multipliers(&series, &total, a.to, &primes)?;
    for (i, v) in values.iter().enumerate() {
        out.row(&ValueRow {
            n: i as u64 + 1,
            value: format_value(v),
        })?;
    }
    let constant = values.windows(2).all(|w| w[0] == w[1]);
    out.say(format!("canonical multipliers for {}: n in [1, {}]", a.series.series, a.to));
    if let (Some(first), Some(last)) = (values.first(), values.last()) {
        out.say(format!("b_1 = {}, b_{} = {}", format_value(first), a.to, format_value(last)));
    }
    if constant {
        out.say("constant on the range");
    }
    out.finish()?;
    Ok(EXIT_OK)
}

fn liminf(a: LiminfArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let seq = sequence(a.seq.as_deref(), a.seq_file.as_deref())?;
    let metric = Metric::from_name(&a.metric, a.epsilon, seq)?;
    let mut out = Output::open(&a.output)?;
    let report = liminf_track(&metric, a.to, &checkpoints(&a.checkpoints), &primes, guard)?;
    for p in &report.checkpoints {
        out.row(&LiminfRow::from(p))?;
    }
    let t = &report.tracker;
    let what = if metric.is_sum() { "running sum" } else { "running minimum" };
    match (t.running_min, t.argmin) {
        (Some(v), Some(n)) if metric.is_sum() => {
            out.say(format!("{}: {what} {} through n = {n}", t.metric, format_sig17(v)))
        }
        (Some(v), Some(n)) => out.say(format!(
            "{}: {what} {} at n = {n} over n <= {}",
            t.metric,
            format_sig17(v),
            t.n_processed
        )),
        _ => out.say(format!("{}: no defined values up to n = {}", t.metric, t.n_processed)),
    }
    out.finish()?;
    Ok(EXIT_OK)
}

fn recurrence(a: RecurrenceArgs) -> Result<i32> {
    let guard = guard(&a.numeric)?;
    let primes = primes(a.numeric.parallelism)?;
    let [q1, q2] = a.seed.as_slice() else {
        return Err(Error::Config(format!("--seed takes two values q1,q2, got {}", a.seed.len())));
    };
    let seed = (decimal(q1)?, decimal(q2)?);
    let mut out = Output::open(&a.output)?;
    let run = iterate_equality(seed, a.n, &primes, a.bit_budget, guard)?;
    for row in recurrence_rows(&run) {
        out.row(&row)?;
    }
    out.say(format!("recurrence from q_1 = {q1}, q_2 = {q2}: {}", run.status));
    out.say(format!("positive terms: {}", run.values.len()));
    if let Some(v) = &run.failing_value {
        out.say(format!("non-positive term: {}", format_value(v)));
    }
    if let Some(first) = run.q_trace.first() {
        let preserved = run.q_trace.iter().all(|q| q == first);
        out.say(format!(
            "Q_n over {} steps: {} ({})",
            run.q_trace.len(),
            format_value(first),
            if preserved { "constant" } else { "not constant" }
        ));
    }
    out.finish()?;
    let indeterminate = u64::from(matches!(
        run.status,
        gapforge::recurrence::RecurrenceStatus::PositivityIndeterminate(_)
    ));
    Ok(exit_code(false, indeterminate, a.numeric.max_indet))
}
