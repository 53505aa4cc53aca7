//! Command-line front end: every library operation as a subcommand, with a
//! human text mode and a schema-stable `--json` mode.
//!
//! Exit status contract: 0 for success (for `decide`: Member; for `verify`:
//! theorem and oracle agree), 1 for a negative verdict (NotMember, oracle
//! disagreement, or a decomposition that does not exist for the given q),
//! 2 for usage and validation errors.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Parser, Subcommand};
use serde::Serialize;

use toeplitz_lattice::error::Error;
use toeplitz_lattice::holeword::PartialWord;
use toeplitz_lattice::lattice::{
    decide, decompose_qtd, enumerate, split_uv, Decision, DecisionDocument, Rejection, Verdict,
};
use toeplitz_lattice::oracle::{cross_check, default_depth, CrossCheckDocument, OracleOutcome};
use toeplitz_lattice::ToeplitzSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the oracle's default depth for `verify`.
pub const DEPTH_ENV_VAR: &str = "TOEPLITZ_DEPTH";

#[derive(Debug, Parser)]
#[command(
    name = "toeplitz",
    about = "Modulo-m Toeplitz fixed points and their lattice subsequences",
    version
)]
struct Cli {
    /// Emit one machine-readable JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the prefix X(1)…X(L) of the fixed point.
    Generate {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        #[arg(long)]
        length: usize,
    },
    /// Print the single letter X(N).
    Access {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        #[arg(long)]
        index: u64,
    },
    /// Decide whether X(qN) is a modulo-m Toeplitz fixed point.
    Decide {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
    },
    /// Classify every candidate class p (divisor of m² not divisible by m).
    Enumerate {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
    },
    /// Print the U∘V split and, when applicable, the Q∘T∘D decomposition.
    Decompose {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
    },
    /// Cross-check the decision against the brute-force oracle.
    Verify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
        /// Oracle depth; defaults to TOEPLITZ_DEPTH or max(m^4, 4096).
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Print the left-associated composition of hole-terminated words.
    /// A trailing '.' may stand in for the hole: aab. means aab?.
    Compose {
        #[arg(required = true, num_args = 1..)]
        words: Vec<String>,
    },
}

/// Parses the argument vector, runs one subcommand and returns the exit
/// status. All output goes to the supplied writers.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render();
            if err.exit_code() == 0 {
                let _ = write!(stdout, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(stderr, "{rendered}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(DispatchError::Domain(err)) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code_for(&err)
        }
        Err(DispatchError::Usage(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_USAGE
        }
        Err(DispatchError::Io(err)) => {
            let _ = writeln!(stderr, "error: {err}");
            EXIT_USAGE
        }
    }
}

enum DispatchError {
    Domain(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for DispatchError {
    fn from(err: Error) -> Self {
        DispatchError::Domain(err)
    }
}

impl From<io::Error> for DispatchError {
    fn from(err: io::Error) -> Self {
        DispatchError::Io(err)
    }
}

/// Hypothesis gates are negative answers to a well-formed question; anything
/// else that errors is a validation problem.
fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::SubsequenceNotMember { .. }
        | Error::ModulusDividesQ { .. }
        | Error::QDividesModulus { .. }
        | Error::QNotLatticeAdic { .. }
        | Error::ConstantWord => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn dispatch(
    cli: Cli,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let json = cli.json;
    match cli.command {
        Command::Generate { m, word, length } => cmd_generate(m, &word, length, json, out),
        Command::Access { m, word, index } => cmd_access(m, &word, index, json, out),
        Command::Decide { m, word, q } => cmd_decide(m, &word, q, json, out),
        Command::Enumerate { m, word } => cmd_enumerate(m, &word, json, out),
        Command::Decompose { m, word, q } => cmd_decompose(m, &word, q, json, out),
        Command::Verify { m, word, q, depth } => cmd_verify(m, &word, q, depth, json, out, err),
        Command::Compose { words } => cmd_compose(&words, json, out),
    }
}

fn emit_json<D: Serialize>(out: &mut dyn Write, document: &D) -> Result<(), DispatchError> {
    serde_json::to_writer(&mut *out, document)
        .map_err(|e| DispatchError::Io(io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_generate(
    m: u64,
    word: &str,
    length: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let spec = ToeplitzSpec::parse(m, word)?;
    let prefix = spec.fixed_prefix(length);
    if json {
        #[derive(Serialize)]
        struct GenerateDocument<'a> {
            m: u64,
            word: &'a str,
            length: usize,
            prefix: String,
        }
        emit_json(out, &GenerateDocument { m, word, length, prefix: prefix.to_string() })?;
    } else {
        writeln!(out, "{prefix}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_access(
    m: u64,
    word: &str,
    index: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let spec = ToeplitzSpec::parse(m, word)?;
    let letter = spec.access(index)?;
    if json {
        #[derive(Serialize)]
        struct AccessDocument<'a> {
            m: u64,
            word: &'a str,
            index: u64,
            letter: String,
        }
        emit_json(out, &AccessDocument { m, word, index, letter: letter.to_string() })?;
    } else {
        writeln!(out, "{letter}")?;
    }
    Ok(EXIT_OK)
}

fn describe_rejection(reason: &Rejection) -> String {
    format!("{reason}")
}

fn write_decision_text(
    out: &mut dyn Write,
    decision: &Decision,
    m: u64,
    q: u64,
) -> io::Result<()> {
    let r = &decision.reduction;
    match &decision.verdict {
        Verdict::Member { generator } => {
            writeln!(out, "Member: X({q}N) is a modulo-{m} Toeplitz fixed point")?;
            writeln!(out, "reduction: q = m^{} * {} * {}  (k={}, h={}, p={})",
                r.k, r.h, r.p, r.k, r.h, r.p)?;
            if decision.constant_shortcut {
                writeln!(out, "constant word: membership is immediate")?;
            }
            writeln!(out, "generator: {generator}")?;
        }
        Verdict::NotMember { reason } => {
            writeln!(out, "NotMember: X({q}N) is not a modulo-{m} Toeplitz fixed point")?;
            writeln!(out, "reduction: q = m^{} * {} * {}  (k={}, h={}, p={})",
                r.k, r.h, r.p, r.k, r.h, r.p)?;
            writeln!(out, "reason: {}", describe_rejection(reason))?;
        }
    }
    Ok(())
}

fn cmd_decide(
    m: u64,
    word: &str,
    q: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let spec = ToeplitzSpec::parse(m, word)?;
    let decision = decide(&spec, q)?;
    if json {
        emit_json(out, &DecisionDocument::from(&decision))?;
    } else {
        write_decision_text(out, &decision, m, q)?;
    }
    Ok(if decision.is_member() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_enumerate(
    m: u64,
    word: &str,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let spec = ToeplitzSpec::parse(m, word)?;
    let classified = enumerate(&spec)?;
    if json {
        #[derive(Serialize)]
        struct CandidateRow {
            p: u64,
            #[serde(flatten)]
            decision: DecisionDocument,
        }
        #[derive(Serialize)]
        struct EnumerateDocument<'a> {
            m: u64,
            word: &'a str,
            candidates: Vec<CandidateRow>,
        }
        let candidates = classified
            .iter()
            .map(|(p, d)| CandidateRow { p: *p, decision: DecisionDocument::from(d) })
            .collect();
        emit_json(out, &EnumerateDocument { m, word, candidates })?;
    } else {
        writeln!(out, "{:<8} {:<10} generator / reason", "p", "verdict")?;
        for (p, decision) in &classified {
            match &decision.verdict {
                Verdict::Member { generator } => {
                    writeln!(out, "{p:<8} {:<10} {generator}", "Member")?;
                }
                Verdict::NotMember { reason } => {
                    writeln!(out, "{p:<8} {:<10} {}", "NotMember", describe_rejection(reason))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_decompose(
    m: u64,
    word: &str,
    q: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let spec = ToeplitzSpec::parse(m, word)?;
    let split = split_uv(&spec, q)?;
    let decision = decide(&spec, q)?;
    // Q∘T∘D exists only when additionally q ∤ m, m ∤ q and X is not constant;
    // for other members it is simply not applicable.
    let qtd = match decompose_qtd(&spec, q) {
        Ok(qtd) => Some(qtd),
        Err(
            Error::QDividesModulus { .. } | Error::ModulusDividesQ { .. } | Error::ConstantWord,
        ) => None,
        Err(other) => return Err(other.into()),
    };
    if json {
        let mut document = DecisionDocument::from(&decision).with_uv(&split);
        if let Some(qtd) = &qtd {
            document = document.with_decomposition(qtd);
        }
        emit_json(out, &document)?;
    } else {
        writeln!(
            out,
            "U\u{2218}V split (s = {}): U = {}  V = {}",
            split.s, split.prefix, split.samples
        )?;
        writeln!(
            out,
            "  X(1..m^s-1)? = U\u{2218}V = {}   X({q}N) = [V\u{2218}U]^(\u{221e})",
            split.product()
        )?;
        match &qtd {
            Some(qtd) => {
                writeln!(
                    out,
                    "Q\u{2218}T\u{2218}D: Q = {}  T = {}  D = {}  (d = {}, q1 = {}, m1 = {}, t = {})",
                    qtd.q_factor, qtd.t_factor, qtd.d_factor, qtd.d, qtd.q1, qtd.m1, qtd.t
                )?;
                writeln!(
                    out,
                    "  generator? = Q\u{2218}T\u{2218}D = {}   X({q}N) = [D\u{2218}T\u{2218}Q]^(\u{221e})",
                    qtd.generator_product()
                )?;
            }
            None => writeln!(out, "Q\u{2218}T\u{2218}D: not applicable (requires q \u{2224} m and m \u{2224} q)")?,
        }
    }
    Ok(EXIT_OK)
}

fn resolve_depth(m: u64, q: u64, flag: Option<u64>) -> Result<u64, DispatchError> {
    if let Some(depth) = flag {
        return Ok(depth);
    }
    match std::env::var(DEPTH_ENV_VAR) {
        Ok(text) => text.parse::<u64>().map_err(|_| {
            DispatchError::Usage(format!(
                "{DEPTH_ENV_VAR} must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(default_depth(m, q)),
    }
}

fn cmd_verify(
    m: u64,
    word: &str,
    q: u64,
    depth_flag: Option<u64>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, DispatchError> {
    let spec = ToeplitzSpec::parse(m, word)?;
    let depth = resolve_depth(m, q, depth_flag)?;
    let decision = decide(&spec, q)?;
    let report = cross_check(&spec, q, &decision, depth)?;
    if json {
        emit_json(out, &CrossCheckDocument::from(&report))?;
    } else {
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict}: theorem and oracle on X({q}N) at depth {depth}")?;
        write_decision_text(out, &report.decision, m, q)?;
        match report.oracle.outcome {
            OracleOutcome::ConsistentUpTo(d) => writeln!(
                out,
                "oracle: consistent up to {d}, extracted generator {}",
                report.oracle.extracted_generator
            )?,
            OracleOutcome::RejectedAt(index) => writeln!(
                out,
                "oracle: rejected at index {index}, extracted generator {}",
                report.oracle.extracted_generator
            )?,
        }
    }
    if report.passed() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "verification failed: {:?}", report.disagreement);
        Ok(EXIT_NEGATIVE)
    }
}

fn cmd_compose(words: &[String], json: bool, out: &mut dyn Write) -> Result<i32, DispatchError> {
    let parsed = words
        .iter()
        .map(|w| w.parse::<PartialWord>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut product = parsed[0].clone();
    for word in &parsed[1..] {
        product = product.compose(word);
    }
    if json {
        #[derive(Serialize)]
        struct ComposeDocument {
            operands: Vec<String>,
            result: String,
        }
        emit_json(
            out,
            &ComposeDocument {
                operands: parsed.iter().map(|w| w.to_string()).collect(),
                result: product.to_string(),
            },
        )?;
    } else {
        writeln!(out, "{product}")?;
    }
    Ok(EXIT_OK)
}
