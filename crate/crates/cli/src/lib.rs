//! Command-line front-end: word files in, JSON / LaTeX / CSV out.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlimit_core::correlators::annotated_pair_sum;
use qlimit_core::numerics::{
    check_ladder, delta_kernel_ladder, rows_to_csv, suppression, term_convergence, vanishing_kernel_ladder, Assignment,
    ConvergenceRow, GaussianTest, NumericError, SmearedTerm,
};
use qlimit_core::qalgebra::parse_pattern;
use qlimit_core::symbolic::latex::term_latex;
use qlimit_core::verify::{Verifier, MAX_N};
use qlimit_core::{
    correlator_recursive, enumerate_pairings, limit_of_pair_sum, limit_rewrite_correlator, pair_sum_correlator,
    pair_sum_term, wick_correlator, MomentumLabel, Pairing, ScalarExpr, TimeLabel, Word, WordError, WordFileError,
};
use serde::Serialize;
use thiserror::Error;

/// Longest word accepted on the command line.
pub const MAX_WORD_LEN: usize = 2 * MAX_N;

#[derive(Debug, Parser)]
#[command(
    name = "qlimit",
    version,
    about = "Vacuum correlators of q-deformed module relations and their weak-coupling limit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vacuum correlator at finite λ.
    Correlate {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value_t = CorrelateMethod::Recursion)]
        method: CorrelateMethod,
        /// List the per-pairing terms (pair-partition method only).
        #[arg(long)]
        annotate: bool,
    },
    /// Vacuum correlator in the λ → 0 limit.
    Limit {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value_t = LimitMethod::Wick)]
        method: LimitMethod,
        /// Compute with all three methods and fail unless they agree.
        #[arg(long)]
        check_all: bool,
    },
    /// Admissible pairings with their crossing counts.
    Pairings {
        #[command(flatten)]
        word: WordArgs,
    },
    /// Exhaustive consistency suites over all creator/annihilator patterns.
    Verify {
        /// Patterns up to length 2·max-n are checked.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Convergence ladders for the smeared kernels and 4-point terms.
    Converge {
        #[arg(long, value_enum, default_value_t = Study::Delta)]
        study: Study,
        /// Comma-separated, strictly decreasing.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        /// Frequency of the vanishing kernel.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        x: f64,
        /// JSON file `{"momenta":{"k1":[1,0,0],…},"p":[0,0,0]}`.
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Re-emit a scalar expression file in canonical form.
    Render {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, Args)]
pub struct WordArgs {
    /// Word file (JSON).
    #[arg(required_unless_present = "pattern", conflicts_with = "pattern")]
    pub input: Option<PathBuf>,
    /// Inline creator/annihilator pattern such as "a a adag adag".
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorrelateMethod {
    Recursion,
    PairSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LimitMethod {
    Wick,
    Rewrite,
    LimitOfPairSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Study {
    Delta,
    Vanishing,
    Crossing,
    Noncrossing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Scalar,
    Polarized,
}

impl From<ModeArg> for qlimit_core::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Scalar => qlimit_core::Mode::Scalar,
            ModeArg::Polarized => qlimit_core::Mode::Polarized,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error("invalid word: {0}")]
    Word(#[from] WordError),
    #[error("invalid word: file is in {found:?} mode, {requested:?} requested")]
    ModeMismatch { found: qlimit_core::Mode, requested: qlimit_core::Mode },
    #[error("invalid word: {0} generators, at most {MAX_WORD_LEN} supported")]
    TooLong(usize),
    #[error("{0}")]
    Numeric(#[from] NumericError),
    #[error("max-n is at most {MAX_N}, got {0}")]
    MaxN(usize),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Word(_) | CliError::ModeMismatch { .. } | CliError::TooLong(_) => 3,
            CliError::Numeric(_) | CliError::MaxN(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

/// What a successful run produced; `code` is nonzero when the output is a
/// failure report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub notes: Vec<String>,
    pub code: u8,
}

impl Outcome {
    fn ok(mut text: String) -> Self {
        if !text.ends_with('\n') {
            text.push('\n');
        }
        Outcome { text, notes: Vec::new(), code: 0 }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_word(args: &WordArgs) -> Result<Word, CliError> {
    let requested = args.mode.map(qlimit_core::Mode::from);
    let word = match (&args.input, &args.pattern) {
        (_, Some(p)) => {
            let eps = parse_pattern(p)
                .ok_or_else(|| CliError::Usage(format!("pattern {p:?}: expected tokens 'a' and 'adag'")))?;
            match requested.unwrap_or_default() {
                qlimit_core::Mode::Scalar => Word::from_pattern(&eps),
                qlimit_core::Mode::Polarized => Word::from_pattern_with_pols(&eps, &vec![1; eps.len()])?,
            }
        }
        (Some(path), None) => {
            let w = Word::from_json(&read(path)?).map_err(|e| match e {
                WordFileError::Json(source) => CliError::Parse { path: path.display().to_string(), source },
                WordFileError::Invalid(e) => CliError::Word(e),
            })?;
            match requested {
                Some(m) if m != w.mode() => return Err(CliError::ModeMismatch { found: w.mode(), requested: m }),
                _ => w,
            }
        }
        (None, None) => return Err(CliError::Usage("a word file or --pattern is required".into())),
    };
    if word.len() > MAX_WORD_LEN {
        return Err(CliError::TooLong(word.len()));
    }
    Ok(word)
}

fn render_expr(e: &ScalarExpr, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(e.to_json_pretty()),
        Format::Latex => Ok(e.to_latex()),
        Format::Csv => Err(CliError::Usage("csv output is only available for converge".into())),
    }
}

#[derive(Serialize)]
struct AnnotatedOut<'a> {
    pairing: &'a Pairing,
    crossings: usize,
    tag: &'static str,
    term: &'a qlimit_core::ScalarTerm,
}

#[derive(Serialize)]
struct Annotated<'a> {
    terms: Vec<AnnotatedOut<'a>>,
    total: &'a ScalarExpr,
}

fn cmd_correlate(args: &WordArgs, method: CorrelateMethod, annotate: bool) -> Result<Outcome, CliError> {
    let w = load_word(args)?;
    let format = args.format.unwrap_or(Format::Latex);
    if annotate && method != CorrelateMethod::PairSum {
        return Err(CliError::Usage("--annotate needs --method pair-sum".into()));
    }
    let expr = match method {
        CorrelateMethod::Recursion => correlator_recursive(&w),
        CorrelateMethod::PairSum => pair_sum_correlator(&w),
    };
    if !annotate {
        return Ok(Outcome::ok(render_expr(&expr, format)?));
    }
    let terms = annotated_pair_sum(&w);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&Annotated {
            terms: terms
                .iter()
                .map(|a| AnnotatedOut { pairing: &a.pairing, crossings: a.crossings, tag: a.tag(), term: &a.term })
                .collect(),
            total: &expr,
        })
        .expect("annotated output serializes"),
        Format::Latex => {
            let mut out: Vec<String> =
                terms.iter().map(|a| format!("{} {}: {}", a.tag(), a.pairing, term_latex(&a.term))).collect();
            out.push(format!("total: {}", expr.to_latex()));
            out.join("\n")
        }
        Format::Csv => return Err(CliError::Usage("csv output is only available for converge".into())),
    };
    Ok(Outcome::ok(text))
}

fn limit_by(w: &Word, method: LimitMethod) -> Result<ScalarExpr, CliError> {
    match method {
        LimitMethod::Wick => Ok(wick_correlator(w)),
        LimitMethod::Rewrite => Ok(limit_rewrite_correlator(w)),
        LimitMethod::LimitOfPairSum => {
            limit_of_pair_sum(&pair_sum_correlator(w)).map_err(|e| CliError::Verification(e.to_string()))
        }
    }
}

fn cmd_limit(args: &WordArgs, method: LimitMethod, check_all: bool) -> Result<Outcome, CliError> {
    let w = load_word(args)?;
    let expr = limit_by(&w, method)?;
    let out = Outcome::ok(render_expr(&expr, args.format.unwrap_or(Format::Latex))?);
    if !check_all {
        return Ok(out);
    }
    for other in [LimitMethod::Wick, LimitMethod::Rewrite, LimitMethod::LimitOfPairSum] {
        let e = limit_by(&w, other)?;
        if e != expr {
            return Err(CliError::Verification(format!(
                "limit methods disagree on {w}\n{}: {}\n{}: {}",
                method_name(method),
                expr.to_json(),
                method_name(other),
                e.to_json()
            )));
        }
    }
    Ok(out.note(format!("agreement: wick = rewrite = limit-of-pair-sum ({} terms)", expr.len())))
}

fn method_name(m: LimitMethod) -> &'static str {
    match m {
        LimitMethod::Wick => "wick",
        LimitMethod::Rewrite => "rewrite",
        LimitMethod::LimitOfPairSum => "limit-of-pair-sum",
    }
}

#[derive(Serialize)]
struct PairingOut<'a> {
    pairing: &'a Pairing,
    crossings: usize,
    noncrossing: bool,
}

fn cmd_pairings(args: &WordArgs) -> Result<Outcome, CliError> {
    let w = load_word(args)?;
    let pairings = enumerate_pairings(&w);
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(
            &pairings
                .iter()
                .map(|p| PairingOut { pairing: p, crossings: p.crossing_count(), noncrossing: p.is_noncrossing() })
                .collect::<Vec<_>>(),
        )
        .expect("pairings serialize"),
        Format::Latex => {
            pairings.iter().map(|p| format!("{p} crossings={}", p.crossing_count())).collect::<Vec<_>>().join("\n")
        }
        Format::Csv => return Err(CliError::Usage("csv output is only available for converge".into())),
    };
    Ok(Outcome::ok(text))
}

fn cmd_verify(max_n: usize) -> Result<Outcome, CliError> {
    if max_n > MAX_N {
        return Err(CliError::MaxN(max_n));
    }
    let report = Verifier::new(max_n).run();
    let mut out = Outcome::ok(report.to_string());
    if !report.passed() {
        out.code = 5;
    }
    Ok(out)
}

/// Momenta used when no assignment file is given.
pub fn default_assignment() -> Assignment {
    Assignment::new(
        [(MomentumLabel::new("k1"), [1.0, 0.0, 0.0]), (MomentumLabel::new("k2"), [1.0, 1.0, 0.0])],
        [0.0; 3],
    )
}

pub fn default_lambdas(study: Study) -> Vec<f64> {
    match study {
        Study::Delta | Study::Vanishing => vec![1.0, 0.5, 0.25, 0.125],
        Study::Crossing | Study::Noncrossing => vec![1.0, 0.5, 0.2, 0.1],
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RowOut {
    lambda: f64,
    value: [f64; 2],
    target: [f64; 2],
    abs_err: f64,
}

#[derive(Serialize)]
struct ConvergeOut {
    study: &'static str,
    rows: Vec<RowOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suppression: Option<String>,
}

fn cmd_converge(
    study: Study,
    lambdas: Option<&[f64]>,
    x: f64,
    assignment: Option<&Path>,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    let lambdas = lambdas.map_or_else(|| default_lambdas(study), <[f64]>::to_vec);
    check_ladder(&lambdas)?;
    let a = match assignment {
        Some(path) => Assignment::from_json(&read(path)?)
            .map_err(|source| CliError::Parse { path: path.display().to_string(), source })?,
        None => default_assignment(),
    };
    let f = GaussianTest::standard();
    let (rows, flag): (Vec<ConvergenceRow>, Option<String>) = match study {
        Study::Delta => (delta_kernel_ladder(&f, &f, &f, &lambdas)?, None),
        Study::Vanishing => (vanishing_kernel_ladder(x, &f, &lambdas)?, None),
        Study::Crossing | Study::Noncrossing => {
            let pairs = if study == Study::Crossing { vec![(0, 2), (1, 3)] } else { vec![(0, 3), (1, 2)] };
            let word = Word::from_pattern(&parse_pattern("a a adag adag").expect("fixed pattern"));
            let term = pair_sum_term(&word, &Pairing::new(pairs));
            let tests: BTreeMap<TimeLabel, GaussianTest> =
                word.gens().iter().map(|g| (g.t.clone(), GaussianTest::standard())).collect();
            let smeared = SmearedTerm::new(&term, &tests, GaussianTest::standard(), &a)?;
            let rows = term_convergence(&term, &tests, &a, &lambdas)?;
            let flag = suppression(&smeared, &rows).to_string();
            (rows, Some(flag))
        }
    };
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&ConvergeOut {
            study: study_name(study),
            rows: rows
                .iter()
                .map(|r| RowOut {
                    lambda: r.lambda,
                    value: [r.value.re, r.value.im],
                    target: [r.target.re, r.target.im],
                    abs_err: r.abs_err,
                })
                .collect(),
            suppression: flag.clone(),
        })
        .expect("rows serialize"),
        Format::Latex => return Err(CliError::Usage("converge writes csv or json".into())),
    };
    let out = Outcome::ok(text);
    Ok(match flag {
        Some(s) => out.note(format!("suppression: {s}")),
        None => out,
    })
}

fn study_name(s: Study) -> &'static str {
    match s {
        Study::Delta => "delta",
        Study::Vanishing => "vanishing",
        Study::Crossing => "crossing",
        Study::Noncrossing => "noncrossing",
    }
}

fn cmd_render(input: &Path, format: Option<Format>) -> Result<Outcome, CliError> {
    let e = ScalarExpr::from_json(&read(input)?)
        .map_err(|source| CliError::Parse { path: input.display().to_string(), source })?;
    Ok(Outcome::ok(render_expr(&e.canonicalize(), format.unwrap_or(Format::Latex))?))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Correlate { word, method, annotate } => cmd_correlate(word, *method, *annotate),
        Command::Limit { word, method, check_all } => cmd_limit(word, *method, *check_all),
        Command::Pairings { word } => cmd_pairings(word),
        Command::Verify { max_n } => cmd_verify(*max_n),
        Command::Converge { study, lambdas, x, assignment, format } => {
            cmd_converge(*study, lambdas.as_deref(), *x, assignment.as_deref(), *format)
        }
        Command::Render { input, format } => cmd_render(input, *format),
    }
}

/// Runs the command and writes its output; returns the process exit code.
pub fn execute(cli: &Cli) -> u8 {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for n in &outcome.notes {
        eprintln!("{n}");
    }
    let written = match &cli.out {
        Some(path) => {
            fs::write(path, &outcome.text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    outcome.code
}
