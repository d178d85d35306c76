//! Command-line interface and the Monte Carlo experiment harness.

use std::ffi::OsString;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base::BaseKind;
use crate::channel::{fixed_weight_error, qsc_apply, ChannelParams};
use crate::decode_bd::{decode_bd, BdOptions};
use crate::decode_he::{decode_he, required_lines};
use crate::domain::{build_spread, Word};
use crate::error::{Error, Result};
use crate::gf::{is_prime, Elem, FieldCtx};
use crate::lift::{CodeSpec, LiftedCode};

pub const EXIT_DECODE_FAILURE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "LIFTED_CODES_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "lifted-codes",
    version,
    about = "Lifted affine-invariant codes over GF(p^l)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print n, k, d_F, d_low, e_low and the spread size as JSON.
    Info(CodeArgs),
    /// List the degree set, one comma-separated tuple per line.
    Degset {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the spread, one subspace per line as basis point indices.
    Spread {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode k whitespace-separated message symbols into a word file.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Message file (standard input if absent).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat the message as the values on the information positions
        /// instead of monomial coefficients.
        #[arg(long)]
        systematic: bool,
    },
    /// Decode a word file.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Algo::Bd)]
        algo: Algo,
        /// Bounded-distance decoding of the information positions only.
        #[arg(long)]
        systematic: bool,
        /// Lines per symbol for the high-error decoder.
        #[arg(long)]
        lines: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run random codeword, channel, decode trials and report error counts.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = Algo::Bd)]
        algo: Algo,
        #[arg(long, value_enum)]
        channel: ChannelKind,
        /// Symbol error probability of the q-ary symmetric channel.
        #[arg(long)]
        perr: Option<f64>,
        /// Error weight of the fixed-weight channel, or `e_low`.
        #[arg(long)]
        w: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        systematic: bool,
        #[arg(long)]
        lines: Option<u64>,
        /// Target failure probability used to size the line count.
        #[arg(long)]
        delta: Option<f64>,
        /// Append the result row to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// JSON code description; replaces the individual code flags.
    #[arg(long, conflicts_with_all = ["p", "q", "m", "base"])]
    pub code: Option<PathBuf>,
    /// Characteristic. A prime power is accepted as the field size when
    /// --l is 1 or absent.
    #[arg(long, conflicts_with = "q")]
    pub p: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    pub l: Option<u32>,
    /// Field size as a prime power.
    #[arg(long)]
    pub q: Option<u32>,
    /// Modulus coefficients, constant term first.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, value_enum)]
    pub base: Option<BaseArg>,
    /// Degree bound of the Reed-Solomon base code.
    #[arg(long)]
    pub u: Option<u32>,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Rs,
    Spc,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Bd,
    He,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Qsc,
    Weight,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

/// Splits a prime power into (p, l).
fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut l) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        l += 1;
    }
    (rest == 1).then_some((p, l))
}

impl CodeArgs {
    fn field_params(&self) -> Result<(u32, u32)> {
        match (self.p, self.q) {
            (_, Some(q)) => {
                if self.l.is_some() {
                    return Err(usage("--l cannot be combined with --q"));
                }
                prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))
            }
            (Some(p), None) => {
                let l = self.l.unwrap_or(1);
                if is_prime(p) {
                    Ok((p, l))
                } else if l == 1 {
                    prime_power(p).ok_or(Error::NotPrime(p))
                } else {
                    Err(Error::NotPrime(p))
                }
            }
            (None, None) => Err(usage("one of --p, --q or --code is required")),
        }
    }

    pub fn field(&self) -> Result<FieldCtx> {
        if self.code.is_some() {
            let spec = self.spec()?;
            return FieldCtx::new(spec.p, spec.l, spec.modulus.as_deref());
        }
        let (p, l) = self.field_params()?;
        FieldCtx::new(p, l, self.modulus.as_deref())
    }

    pub fn spec(&self) -> Result<CodeSpec> {
        if let Some(path) = &self.code {
            let text = fs::read_to_string(path)?;
            return serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())));
        }
        let (p, l) = self.field_params()?;
        let m = self.m.ok_or_else(|| usage("--m is required"))?;
        let base = match (self.base, self.u) {
            (Some(BaseArg::Spc), None) => BaseKind::Spc,
            (Some(BaseArg::Spc), Some(_)) => return Err(usage("--u only applies to --base rs")),
            (Some(BaseArg::Rs), Some(u)) => BaseKind::Rs { u },
            (Some(BaseArg::Rs), None) => return Err(usage("--base rs needs --u")),
            (None, _) => return Err(usage("--base is required")),
        };
        Ok(CodeSpec {
            p,
            l,
            modulus: self.modulus.clone(),
            m,
            t: self.t,
            base,
        })
    }

    pub fn build(&self) -> Result<LiftedCode> {
        self.spec()?.build()
    }
}

/// Noise applied in a simulation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    Qsc { p_err: f64 },
    Weight { w: usize },
}

impl ChannelSpec {
    fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Qsc { .. } => "qsc",
            ChannelSpec::Weight { .. } => "weight",
        }
    }

    fn param(&self) -> f64 {
        match *self {
            ChannelSpec::Qsc { p_err } => p_err,
            ChannelSpec::Weight { w } => w as f64,
        }
    }

    fn corrupt(&self, f: &FieldCtx, word: &Word, seed: u64) -> Result<Word> {
        match *self {
            ChannelSpec::Qsc { p_err } => {
                qsc_apply(&ChannelParams::new(word.q(), p_err, seed)?, word)
            }
            ChannelSpec::Weight { w } => {
                word.add(f, &fixed_weight_error(word.q(), word.dim(), w, seed)?)
            }
        }
    }
}

/// Decoder used in a simulation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum AlgoSpec {
    Bd(BdOptions),
    He { lines: u64 },
}

impl AlgoSpec {
    fn name(&self) -> &'static str {
        match self {
            AlgoSpec::Bd(_) => "bd",
            AlgoSpec::He { .. } => "he",
        }
    }
}

/// One row of simulation output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub p: u32,
    pub l: u32,
    pub m: usize,
    pub t: usize,
    pub base: String,
    pub u: Option<u32>,
    pub algo: String,
    pub channel: String,
    pub param: f64,
    pub trials: u64,
    pub word_errors: u64,
    pub symbol_errors: u64,
    pub seed: u64,
    pub elapsed: f64,
}

impl ExperimentResult {
    /// Writes rows as CSV, with the header if `header` is set.
    pub fn write_csv<W: Write>(rows: &[ExperimentResult], writer: W, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(header)
            .from_writer(writer);
        for row in rows {
            w.serialize(row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ExperimentResult>> {
        csv::Reader::from_reader(reader)
            .deserialize()
            .map(|r| r.map_err(csv_error))
            .collect()
    }

    /// Appends to a CSV file, writing the header when the file is new or
    /// empty.
    pub fn append_to(&self, path: &Path) -> Result<()> {
        let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Self::write_csv(std::slice::from_ref(self), file, fresh)
    }
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            _ => unreachable!(),
        }
    } else {
        Error::Parse(e.to_string())
    }
}

/// Outcome of one simulated transmission.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub word_error: bool,
    pub symbol_errors: usize,
}

/// Runs one trial: random message, encode, corrupt, decode, compare. A
/// decoding failure counts as a word error, with the received word's errors
/// as symbol errors.
pub fn run_trial(
    code: &LiftedCode,
    channel: ChannelSpec,
    algo: AlgoSpec,
    trial_seed: u64,
) -> Result<TrialOutcome> {
    let f = code.field();
    // the channel draws from streams 0..n of the same key
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    rng.set_stream(u64::MAX);
    let message: Vec<Elem> = (0..code.dimension())
        .map(|_| Elem(rng.random_range(0..code.q())))
        .collect();
    let sent = code.encode(&message)?;
    let received = channel.corrupt(f, &sent, trial_seed)?;
    let decoded = match algo {
        AlgoSpec::Bd(opts) => decode_bd(code, &received, &opts),
        AlgoSpec::He { lines } => decode_he(code, &received, lines, rng.random()),
    };
    match decoded {
        Ok(w) => {
            let d = w.distance(&sent);
            Ok(TrialOutcome {
                word_error: d > 0,
                symbol_errors: d,
            })
        }
        Err(Error::DecodeFailure(_)) => Ok(TrialOutcome {
            word_error: true,
            symbol_errors: received.distance(&sent),
        }),
        Err(e) => Err(e),
    }
}

/// Word and symbol error counts over `trials` trials; trial `i` uses seed
/// `seed + i`.
pub fn simulate_wer(
    code: &LiftedCode,
    channel: ChannelSpec,
    algo: AlgoSpec,
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult> {
    if trials == 0 {
        return Err(usage("at least one trial is needed"));
    }
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(code, channel, algo, seed.wrapping_add(i)))
        .collect::<Result<_>>()?;
    let spec = code
        .spec()
        .ok_or_else(|| usage("simulation needs a serializable base code"))?;
    let (base, u) = match spec.base {
        BaseKind::Rs { u } => ("rs".to_string(), Some(u)),
        BaseKind::Spc => ("spc".to_string(), None),
    };
    Ok(ExperimentResult {
        p: spec.p,
        l: spec.l,
        m: spec.m,
        t: spec.t,
        base,
        u,
        algo: algo.name().into(),
        channel: channel.name().into(),
        param: channel.param(),
        trials,
        word_errors: outcomes.iter().filter(|o| o.word_error).count() as u64,
        symbol_errors: outcomes.iter().map(|o| o.symbol_errors as u64).sum(),
        seed,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            BufReader::new(File::open(p)?).read_to_string(&mut text)?;
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn parse_symbols(f: &FieldCtx, text: &str) -> Result<Vec<Elem>> {
    text.split_whitespace()
        .map(|tok| {
            let v: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))?;
            f.elem(v)
        })
        .collect()
}

fn resolve_channel(
    code: &LiftedCode,
    kind: ChannelKind,
    perr: Option<f64>,
    w: &Option<String>,
) -> Result<ChannelSpec> {
    match kind {
        ChannelKind::Qsc => {
            let p_err = perr.ok_or_else(|| usage("--channel qsc needs --perr"))?;
            ChannelParams::new(code.q(), p_err, 0)?;
            Ok(ChannelSpec::Qsc { p_err })
        }
        ChannelKind::Weight => {
            let w = w
                .as_deref()
                .ok_or_else(|| usage("--channel weight needs --w"))?;
            let w = if w == "e_low" {
                code.e_low() as usize
            } else {
                w.parse().map_err(|_| usage(format!("bad weight {w:?}")))?
            };
            if w > code.len() {
                return Err(Error::BadWeight { w, n: code.len() });
            }
            Ok(ChannelSpec::Weight { w })
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Info(args) => {
            let code = args.build()?;
            let json =
                serde_json::to_string(&code.info()).map_err(|e| Error::Parse(e.to_string()))?;
            write_output(&None, &format!("{json}\n"))
        }
        Command::Degset { code, out } => {
            let code = code.build()?;
            let text: String = code
                .good_tuples()
                .iter()
                .map(|d| d.to_csv() + "\n")
                .collect();
            write_output(&out, &text)
        }
        Command::Spread { code, out } => {
            let f = code.field()?;
            let (m, t) = match &code.code {
                Some(_) => {
                    let spec = code.spec()?;
                    (spec.m, spec.t)
                }
                None => (code.m.ok_or_else(|| usage("--m is required"))?, code.t),
            };
            write_output(&out, &build_spread(&f, m, t)?.dump(&f))
        }
        Command::Encode {
            code,
            input,
            out,
            systematic,
        } => {
            let code = code.build()?;
            let symbols = parse_symbols(code.field(), &read_input(&input)?)?;
            let word = if systematic {
                code.encode_systematic(&symbols)?
            } else {
                code.encode(&symbols)?
            };
            write_output(&out, &word.to_text())
        }
        Command::Decode {
            code,
            input,
            out,
            algo,
            systematic,
            lines,
            seed,
        } => {
            let code = code.build()?;
            let g = Word::parse(&read_input(&input)?)?;
            let decoded = match algo {
                Algo::Bd => {
                    let opts = if systematic {
                        BdOptions::systematic()
                    } else {
                        BdOptions::default()
                    };
                    decode_bd(&code, &g, &opts)?
                }
                Algo::He => {
                    let lines = lines.ok_or_else(|| usage("--algo he needs --lines"))?;
                    decode_he(&code, &g, lines, seed)?
                }
            };
            write_output(&out, &decoded.to_text())
        }
        Command::Simulate {
            code,
            algo,
            channel,
            perr,
            w,
            seed,
            trials,
            systematic,
            lines,
            delta,
            out,
        } => {
            let code = code.build()?;
            let channel = resolve_channel(&code, channel, perr, &w)?;
            let algo = match algo {
                Algo::Bd => AlgoSpec::Bd(if systematic {
                    BdOptions::systematic()
                } else {
                    BdOptions::default()
                }),
                Algo::He => {
                    let lines = match (lines, delta) {
                        (Some(s), _) => s,
                        (None, Some(delta)) => {
                            let p_err = match channel {
                                ChannelSpec::Qsc { p_err } => p_err,
                                ChannelSpec::Weight { w } => w as f64 / code.len() as f64,
                            };
                            let eps = (code.q() - 1) as f64 / code.q() as f64 - p_err;
                            let s = required_lines(code.q(), eps, delta, code.dimension())?;
                            s.min(code.spread().len() as u64)
                        }
                        (None, None) => return Err(usage("--algo he needs --lines or --delta")),
                    };
                    AlgoSpec::He { lines }
                }
            };
            let result = simulate_wer(&code, channel, algo, trials, seed)?;
            match out {
                Some(path) => result.append_to(&path),
                None => ExperimentResult::write_csv(&[result], io::stdout().lock(), true),
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{THREADS_ENV}={v:?} is not a count")))?;
        // a pool may already exist when called from tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::DecodeFailure(_) => EXIT_DECODE_FAILURE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
