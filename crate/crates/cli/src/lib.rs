//! The `addbasis` command line.
//!
//! Utility subcommands print plain text. `check-basis` and `verify ...`
//! write one JSON object per line to standard output (or `--output`) and a
//! one-line summary to standard error.
//!
//! Exit codes: 0 when everything held, 1 when a check failed or a finding
//! (unreachable target, missing expression) was recorded, 2 on usage or
//! input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use addbasis_core::additive::{columns, ReachableSet, TrialOptions, VectorZp};
use addbasis_core::algebra::Element;
use addbasis_core::format::parse_matrix;
use addbasis_core::formspace::LinearFormSpace;
use addbasis_core::matrix::MatrixF;
use addbasis_core::perrank::{permanent, perrank};
use addbasis_core::verify::{self, CheckOutcome, Part7};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "addbasis", version, about = "Permanent rank, minimum supports and additive bases over small fields")]
pub struct Cli {
    /// Worker threads for trial loops (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest square submatrix with nonzero permanent.
    Perrank(MatrixArg),
    /// Permanent of a square matrix.
    Permanent(MatrixArg),
    /// ms_1 ... ms_n of the row space of a full-rank matrix.
    Ms(MatrixArg),
    /// Decide whether the columns of a GF(p) matrix form an additive basis.
    CheckBasis(BasisArgs),
    /// Express a target as a 0/1 combination of the columns.
    Express(ExpressArgs),
    /// Run a statement check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MatrixArg {
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Matrix file whose columns are the vectors.
    #[arg(long)]
    pub file: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExpressArgs {
    #[arg(long)]
    pub file: PathBuf,
    /// Space-separated coordinates, e.g. "1 0 2".
    #[arg(long)]
    pub target: String,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    /// Write reports here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Drop the timing field so reports are byte-reproducible.
    #[arg(long, global = true)]
    pub omit_timing: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub statement: Statement,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Master seed; trial i draws from a stream derived from (seed, i).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PartArg {
    A,
    B,
}

impl From<PartArg> for Part7 {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::A => Part7::A,
            PartArg::B => Part7::B,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Statement {
    /// Linear forms: exhaustive over GF(3), or a single --form.
    Thm5 {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        /// A single form such as "x1 + x2 + 2*x3"; checks degree --k only.
        #[arg(long, requires = "k")]
        form: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Subspace chains: a given --matrix, or random instances.
    Lemma6 {
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Comma-separated cover sequence (default: the ms profile).
        #[arg(long, value_delimiter = ',')]
        seq: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 12)]
        max_vars: usize,
    },
    /// Spaces of forms: a given --matrix, exhaustive n = 1, or random.
    Thm7 {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, value_enum, default_value_t = PartArg::A)]
        part: PartArg,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        m_min: Option<usize>,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Every single form in --m-max variables (n = 1).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Four nonsingular blocks over GF(3), band repeated twice.
    Main {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// All 16 quadruples at n = 1 instead of random trials.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Column union of four nonsingular blocks as an additive basis.
    Cor4 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 20)]
        targets: usize,
        /// Skip the full-perrank check of the doubled stack.
        #[arg(long)]
        no_perrank: bool,
    },
    /// p nonsingular blocks over GF(p), band repeated p - 1 times.
    Conj2 {
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        exhaustive: bool,
    },
}

/// Input or usage problems, reported with exit code 2.
#[derive(Debug)]
struct UsageError(anyhow::Error);

fn usage<T>(r: Result<T>) -> std::result::Result<T, UsageError> {
    r.map_err(UsageError)
}

fn read_matrix(path: &Path) -> Result<MatrixF> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Run a parsed command line. Reports go to `out` (unless redirected by
/// `--output`), diagnostics and summaries to `err`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Some(jobs) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(UsageError(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, UsageError> {
    match command {
        Command::Perrank(a) => {
            let m = usage(read_matrix(&a.matrix))?;
            let r = usage(perrank(&m).map_err(Into::into))?;
            usage(writeln!(out, "{r}").map_err(Into::into))?;
            Ok(EXIT_OK)
        }
        Command::Permanent(a) => {
            let m = usage(read_matrix(&a.matrix))?;
            let p = usage(permanent(&m).map_err(Into::into))?;
            usage(writeln!(out, "{p}").map_err(Into::into))?;
            Ok(EXIT_OK)
        }
        Command::Ms(a) => {
            let m = usage(read_matrix(&a.matrix))?;
            let u = usage(LinearFormSpace::from_matrix(&m).map_err(Into::into))?;
            let profile = usage(u.ms_profile().map_err(Into::into))?;
            let text: Vec<String> = profile.iter().map(|v| v.to_string()).collect();
            usage(writeln!(out, "{}", text.join(" ")).map_err(Into::into))?;
            Ok(EXIT_OK)
        }
        Command::CheckBasis(a) => usage(check_basis(&a, out, err)),
        Command::Express(a) => usage(express(&a, out)),
        Command::Verify(a) => usage(run_verify(a, out, err)),
    }
}

fn basis_vectors(path: &Path) -> Result<(MatrixF, Vec<VectorZp>)> {
    let m = read_matrix(path)?;
    let vs = columns(&m).map_err(|e| anyhow!(e))?;
    Ok((m, vs))
}

fn check_basis(a: &BasisArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (m, vs) = basis_vectors(&a.file)?;
    let reach = ReachableSet::build(m.field(), m.rows(), &vs)?;
    let mut report = json!({
        "field": m.field().name(),
        "n": m.rows(),
        "vectors": vs.len(),
        "reached": reach.num_reached(),
        "states": reach.num_states(),
        "additive_basis": reach.is_full(),
    });
    let missing = reach.first_unreachable();
    if let Some(t) = &missing {
        report["unreachable"] = json!(t.coords());
    }
    with_sink(&a.out, out, |sink| Ok(writeln!(sink, "{report}")?))?;
    match missing {
        None => {
            writeln!(err, "additive basis: {} vectors reach all {} states", vs.len(), reach.num_states())?;
            Ok(EXIT_OK)
        }
        Some(t) => {
            writeln!(err, "not an additive basis: {:?} is unreachable", t.coords())?;
            Ok(EXIT_FINDING)
        }
    }
}

fn express(a: &ExpressArgs, out: &mut dyn Write) -> Result<i32> {
    let (m, vs) = basis_vectors(&a.file)?;
    let field = m.field();
    let coords: Vec<u8> = a
        .target
        .split_whitespace()
        .map(|t| field.parse(t).map_err(|e| anyhow!("target entry {t:?}: {e}")))
        .collect::<Result<_>>()?;
    if coords.len() != m.rows() {
        bail!("target has {} entries, vectors have {}", coords.len(), m.rows());
    }
    let target = VectorZp::new(field, coords)?;
    let reach = ReachableSet::build(field, m.rows(), &vs)?;
    match reach.express(&target)? {
        Some(c) => {
            let text: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", text.join(" "))?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "none")?;
            Ok(EXIT_FINDING)
        }
    }
}

/// Call `f` with the report sink: the `--output` file or `out`.
fn with_sink(
    args: &OutputArgs,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match &args.output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn emit_outcomes(args: &OutputArgs, outcomes: &[CheckOutcome], out: &mut dyn Write) -> Result<()> {
    with_sink(args, out, |sink| {
        for o in outcomes {
            let o = if args.omit_timing { o.clone().without_timing() } else { o.clone() };
            writeln!(sink, "{}", o.to_json())?;
        }
        Ok(())
    })
}

fn summary(err: &mut dyn Write, label: &str, outcomes: &[CheckOutcome], start: Instant) -> Result<i32> {
    let instances: u64 = outcomes.iter().map(|o| o.stats.instances).sum();
    let skipped: u64 = outcomes.iter().map(|o| o.stats.skipped).sum();
    let fails = outcomes.iter().filter(|o| o.is_failure()).count();
    let vacuous = outcomes.iter().filter(|o| o.verdict == verify::Verdict::Vacuous).count();
    writeln!(
        err,
        "{label}: {} report(s), {} pass, {vacuous} vacuous, {fails} fail ({instances} instance(s), {skipped} skipped) in {} ms",
        outcomes.len(),
        outcomes.len() - fails - vacuous,
        start.elapsed().as_millis(),
    )?;
    Ok(if fails > 0 { EXIT_FINDING } else { EXIT_OK })
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let seed = a.seed;
    let (label, outcomes): (&str, Vec<CheckOutcome>) = match a.statement {
        Statement::Thm5 { m, k_max, form, k } => {
            let outcomes = match form {
                Some(text) => {
                    let u = Element::parse(addbasis_core::ff::Field::gf3(), m, &text)?;
                    verify::check_theorem5(&u, k.expect("required by clap"))?
                }
                None => verify::check_theorem5_exhaustive(m, k_max)?,
            };
            ("thm5", outcomes)
        }
        Statement::Lemma6 { matrix, seq, trials, max_dim, max_vars } => {
            let outcomes = match matrix {
                Some(path) => {
                    let u = LinearFormSpace::from_matrix(&read_matrix(&path)?)?;
                    let seq = match seq {
                        Some(s) => s,
                        None => u.ms_profile()?,
                    };
                    vec![verify::check_lemma6(&u, &seq)?]
                }
                None => par_trials(trials, |t| verify::lemma6_random_trial(max_dim, max_vars, seed, t))?,
            };
            ("lemma6", outcomes)
        }
        Statement::Thm7 { matrix, k, part, n, m_min, m_max, trials, exhaustive } => {
            let part = Part7::from(part);
            let outcomes = if let Some(path) = matrix {
                let u = LinearFormSpace::from_matrix(&read_matrix(&path)?)?;
                vec![verify::check_theorem7(&u, k, part)?]
            } else if exhaustive {
                vec![verify::check_theorem7_exhaustive_n1(m_max, k, part)?]
            } else {
                let m_min = m_min.unwrap_or_else(|| *verify::theorem7_required(n, k, part).last().unwrap_or(&n));
                par_trials(trials, |t| verify::theorem7_random_trial(n, k, part, (m_min, m_max), seed, t))?
            };
            ("thm7", outcomes)
        }
        Statement::Main { n, trials, exhaustive } => {
            let outcomes = if exhaustive {
                if n != 1 {
                    bail!("--exhaustive is only available for --n 1");
                }
                vec![verify::main_theorem_exhaustive_n1()?]
            } else {
                verify::main_theorem_trials(n, trials, seed)?
            };
            ("thm3", outcomes)
        }
        Statement::Cor4 { n, trials, targets, no_perrank } => {
            let opts = TrialOptions { targets, check_perrank: !no_perrank };
            let (outcome, reports) = verify::check_corollary4(n, trials, seed, opts)?;
            with_sink(&a.out, out, |sink| {
                for r in &reports {
                    writeln!(sink, "{}", serde_json::to_string(r)?)?;
                }
                Ok(())
            })?;
            return summary(err, "cor4", &[outcome], start);
        }
        Statement::Conj2 { p, n, trials, exhaustive } => {
            let outcomes = if exhaustive {
                if n != 1 {
                    bail!("--exhaustive is only available for --n 1");
                }
                vec![verify::conjecture2_exhaustive_n1(p)?]
            } else {
                verify::conjecture2_trials(p, n, trials, seed)?
            };
            ("conj2", outcomes)
        }
    };
    emit_outcomes(&a.out, &outcomes, out)?;
    summary(err, label, &outcomes, start)
}

fn par_trials<F>(trials: u64, f: F) -> Result<Vec<CheckOutcome>>
where
    F: Fn(u64) -> verify::Result<CheckOutcome> + Sync + Send,
{
    use rayon::prelude::*;
    Ok((0..trials).into_par_iter().map(f).collect::<verify::Result<Vec<_>>>()?)
}
