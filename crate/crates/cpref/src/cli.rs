//! Batch, interactive and model-emission front ends.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use cpref_core::explicit::build_ipg;
use cpref_core::smv::{emit_ctl, emit_smv, emit_smv_combined, SmvDocument};
use cpref_core::{
    solve, verify_proof, EngineKind, Limits, PreferenceSpec, Proof, ProofKind, Query, QueryKind,
    QueryResult, Subject,
};

use crate::error::{Error, Result};
use crate::external::{parse_trace, run_external, trace_outcomes, trace_to_flips};
use crate::xml::{emit_result, parse_query, parse_spec, CrossCheck, QueryDocument};

/// The symbolic engine falls back to the explicit one on a blown node
/// budget only up to this many outcomes.
pub const FALLBACK_OUTCOMES: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum EngineChoice {
    Explicit,
    #[default]
    Symbolic,
    /// Both engines; any disagreement is an error.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Batch,
    Interactive,
    EmitSmv,
    DumpIpg,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    /// `--spec` then `--spec2`; empty means take them from the query file.
    pub specs: Vec<PathBuf>,
    pub query: Option<PathBuf>,
    pub mode: Mode,
    pub engine: EngineChoice,
    pub out: Option<PathBuf>,
    pub checker: Option<PathBuf>,
    pub limits: Limits,
    /// Report elapsed time; off makes result files byte-identical across runs.
    pub timing: bool,
}

/// A result plus the answers of any cross-checking engines.
#[derive(Debug, Clone)]
pub struct Answer {
    pub result: QueryResult,
    pub checks: Vec<CrossCheck>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_spec(path: &Path) -> Result<PreferenceSpec> {
    parse_spec(&read(path)?).map_err(|e| e.in_file(path))
}

fn subject<'a>(specs: &'a [PreferenceSpec]) -> Subject<'a> {
    match specs {
        [p1, p2] => Subject::Pair(p1, p2),
        [p1, ..] => Subject::Single(p1),
        [] => unreachable!("callers load at least one specification"),
    }
}

fn timed(engine: EngineKind, specs: &[PreferenceSpec], query: &QueryKind, limits: Limits) -> Result<QueryResult> {
    let start = Instant::now();
    let verdict = solve(engine, subject(specs), query, limits)?;
    Ok(QueryResult {
        answer: verdict.answer,
        proof: verdict.proof,
        engine,
        elapsed: start.elapsed(),
    })
}

/// Answers `query` with the chosen engine(s). The symbolic engine retries
/// with the explicit one when it exceeds its node budget on a space of at
/// most [`FALLBACK_OUTCOMES`] outcomes.
pub fn answer(engine: EngineChoice, specs: &[PreferenceSpec], query: &QueryKind, limits: Limits) -> Result<Answer> {
    if specs.len() != query.arity() {
        return Err(Error::Usage(format!(
            "{} queries need {} specification(s), got {}",
            query.tag(),
            query.arity(),
            specs.len()
        )));
    }
    let symbolic = || match timed(EngineKind::Symbolic, specs, query, limits) {
        Err(Error::Core(cpref_core::Error::NodeBudgetExceeded { .. }))
            if specs[0].outcome_count() <= FALLBACK_OUTCOMES =>
        {
            timed(EngineKind::Explicit, specs, query, limits)
        }
        other => other,
    };
    match engine {
        EngineChoice::Explicit => Ok(Answer {
            result: timed(EngineKind::Explicit, specs, query, limits)?,
            checks: Vec::new(),
        }),
        EngineChoice::Symbolic => Ok(Answer {
            result: symbolic()?,
            checks: Vec::new(),
        }),
        EngineChoice::Both => {
            let result = timed(EngineKind::Symbolic, specs, query, limits)?;
            let explicit = timed(EngineKind::Explicit, specs, query, limits)?;
            if explicit.answer != result.answer {
                return Err(Error::Divergence(format!(
                    "{} query: symbolic engine answers {}, explicit engine {}",
                    query.tag(),
                    result.answer,
                    explicit.answer
                )));
            }
            Ok(Answer {
                result,
                checks: vec![CrossCheck {
                    engine: EngineKind::Explicit.tag().to_string(),
                    answer: explicit.answer,
                }],
            })
        }
    }
}

/// SMV documents for a query: one model for single-specification queries,
/// the combined model for subsumption, and both combined models for
/// equivalence (the second checks the reverse direction).
pub fn smv_documents(specs: &[PreferenceSpec], query: Option<&QueryKind>) -> Result<Vec<SmvDocument>> {
    let mut docs = match specs {
        [p1] => vec![emit_smv(p1)?],
        [p1, p2] => {
            let mut docs = vec![emit_smv_combined(p1, p2)?];
            if matches!(query, Some(QueryKind::Equivalence)) {
                docs.push(emit_smv_combined(p2, p1)?);
            }
            docs
        }
        _ => return Err(Error::Usage("expected one or two specifications".into())),
    };
    if let Some(query) = query {
        if specs.len() != query.arity() {
            return Err(Error::Usage(format!(
                "{} queries need {} specification(s), got {}",
                query.tag(),
                query.arity(),
                specs.len()
            )));
        }
        for doc in &mut docs {
            doc.specs = emit_ctl(query, &specs[0])?;
        }
    }
    Ok(docs)
}

/// Replays `query` on an external checker. For dominance, a counterexample
/// to the negated property that starts at the worse outcome is decoded into
/// a flip path and replayed as a proof.
pub fn external_answer(checker: &Path, specs: &[PreferenceSpec], query: &QueryKind) -> Result<bool> {
    let docs = smv_documents(specs, Some(query))?;
    let mut answer = true;
    for doc in &docs {
        let verdicts = run_external(doc, checker)?;
        answer &= verdicts[0].holds;
        if let (QueryKind::Dominance { better, worse }, Some(trace)) =
            (query, verdicts.get(1).and_then(|v| v.trace.as_deref()))
        {
            let outcomes = trace_outcomes(&specs[0], doc, &parse_trace(trace))?;
            if outcomes.first() == Some(worse) {
                if let Some(end) = outcomes.iter().position(|o| o == better) {
                    let proof = Proof::path(trace_to_flips(&specs[0], &outcomes[..=end])?);
                    if !verify_proof(subject(specs), query, &proof)? {
                        return Err(Error::Divergence("checker trace does not replay as a dominance proof".into()));
                    }
                }
            }
        }
    }
    Ok(answer)
}

fn cross_check_external(checker: &Path, specs: &[PreferenceSpec], query: &QueryKind, answer: &mut Answer) -> Result<()> {
    let external = external_answer(checker, specs, query)?;
    if external != answer.result.answer {
        return Err(Error::Divergence(format!(
            "{} query: {} engine answers {}, external checker {}",
            query.tag(),
            answer.result.engine,
            answer.result.answer,
            external
        )));
    }
    answer.checks.push(CrossCheck {
        engine: "SMV".into(),
        answer: external,
    });
    Ok(())
}

/// Specification paths: the command line wins; otherwise the query's
/// `SPEC-FILE` entries, relative to the query file.
fn spec_paths(config: &RunConfig, query: Option<(&Path, &QueryDocument)>) -> Vec<PathBuf> {
    if !config.specs.is_empty() {
        return config.specs.clone();
    }
    match query {
        Some((path, doc)) => {
            let base = path.parent().unwrap_or(Path::new(""));
            doc.spec_files.iter().map(|f| base.join(f)).collect()
        }
        None => Vec::new(),
    }
}

fn load_query(config: &RunConfig) -> Result<Option<(PathBuf, QueryDocument)>> {
    config
        .query
        .as_ref()
        .map(|path| {
            let doc = parse_query(&read(path)?).map_err(|e| e.in_file(path))?;
            Ok((path.clone(), doc))
        })
        .transpose()
}

fn load_specs(paths: &[PathBuf]) -> Result<Vec<PreferenceSpec>> {
    if paths.is_empty() {
        return Err(Error::Usage("no specification given: use --spec or a query with <SPEC-FILE>".into()));
    }
    if paths.len() > 2 {
        return Err(Error::Usage("at most two specifications".into()));
    }
    paths.iter().map(|p| load_spec(p)).collect()
}

fn deliver(config: &RunConfig, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &config.out {
        Some(path) => write_file(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Runs the query file of `config` and writes the result document.
pub fn run_batch(config: &RunConfig, stdout: &mut dyn Write) -> Result<Answer> {
    let (query_path, doc) = load_query(config)?
        .ok_or_else(|| Error::Usage("batch mode needs --query".into()))?;
    let paths = spec_paths(config, Some((&query_path, &doc)));
    let specs = load_specs(&paths)?;
    let mut query: Query = doc.resolve(&specs[0])?;
    query.spec_refs = paths.iter().map(|p| p.display().to_string()).collect();
    let mut answer = answer(config.engine, &specs, &query.kind, config.limits)?;
    if let Some(checker) = &config.checker {
        cross_check_external(checker, &specs, &query.kind, &mut answer)?;
    }
    if !config.timing {
        answer.result.elapsed = Duration::ZERO;
    }
    let text = emit_result(&answer.result, &query, &specs[0], &answer.checks);
    deliver(config, stdout, &text)?;
    Ok(answer)
}

/// Writes the SMV model(s) for the loaded specification(s), with the CTL
/// properties of the query file when one is given. For equivalence the
/// reverse-direction model goes to `<out>.reverse.smv`, or follows the
/// first one on standard output.
pub fn emit_model_command(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let query = load_query(config)?;
    let paths = spec_paths(config, query.as_ref().map(|(p, d)| (p.as_path(), d)));
    let specs = load_specs(&paths)?;
    let kind = match &query {
        Some((_, doc)) => Some(doc.resolve(&specs[0])?.kind),
        None => None,
    };
    let docs = smv_documents(&specs, kind.as_ref())?;
    match &config.out {
        Some(path) => {
            write_file(path, &docs[0].render())?;
            if let Some(reverse) = docs.get(1) {
                write_file(&reverse_path(path), &reverse.render())?;
            }
            Ok(())
        }
        None => {
            let mut text = docs[0].render();
            if let Some(reverse) = docs.get(1) {
                text.push_str("\n-- reverse direction\n");
                text.push_str(&reverse.render());
            }
            deliver(config, stdout, &text)
        }
    }
}

pub fn reverse_path(path: &Path) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".reverse.smv");
    path.with_file_name(name)
}

fn dump_ipg(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let specs = load_specs(&spec_paths(config, None))?;
    let text = build_ipg(&specs[0], config.limits.node_limit)?.dump(&specs[0]);
    deliver(config, stdout, &text)
}

/// Human-readable proof: one line per flip.
pub fn render_proof(spec: &PreferenceSpec, proof: &Proof) -> String {
    let mut out = String::new();
    if let Some(d) = proof.direction {
        out.push_str(&format!("  direction {}\n", d.tag()));
    }
    let label = match proof.kind {
        ProofKind::DominancePath => "flip",
        ProofKind::InconsistencyCycle => "cycle",
        ProofKind::NonSubsumptionFlip => "counter-flip",
    };
    for step in &proof.steps {
        out.push_str(&format!(
            "  {label} {} -> {}  [{}]\n",
            spec.format_outcome(&step.from),
            spec.format_outcome(&step.to),
            step.statement
        ));
    }
    out
}

/// Menu-driven session over `input`/`output`. Dominance and consistency
/// concern the first specification; subsumption and equivalence are
/// offered when two are loaded. Ends on `q` or end of input.
pub fn run_interactive<R: BufRead, W: Write>(
    config: &RunConfig,
    specs: &[PreferenceSpec],
    mut input: R,
    mut output: W,
) -> Result<()> {
    let io = |source| Error::Io {
        path: PathBuf::from("<console>"),
        source,
    };
    let mut line = String::new();
    let mut prompt = |output: &mut W, text: &str, line: &mut String| -> Result<bool> {
        write!(output, "{text}").map_err(io)?;
        output.flush().map_err(io)?;
        line.clear();
        Ok(input.read_line(line).map_err(io)? > 0)
    };
    let pair = specs.len() == 2;
    loop {
        writeln!(output, "\n1) dominance\n2) consistency").map_err(io)?;
        if pair {
            writeln!(output, "3) subsumption (first in second)\n4) equivalence").map_err(io)?;
        }
        writeln!(output, "q) quit").map_err(io)?;
        if !prompt(&mut output, "> ", &mut line)? {
            return Ok(());
        }
        let query = match line.trim() {
            "1" => {
                let mut outcomes = Vec::new();
                for label in ["better", "worse"] {
                    loop {
                        let text = format!("{label} outcome (var=value,...): ");
                        if !prompt(&mut output, &text, &mut line)? {
                            return Ok(());
                        }
                        match specs[0].parse_outcome(&line) {
                            Ok(o) => {
                                outcomes.push(o);
                                break;
                            }
                            Err(e) => writeln!(output, "{e}").map_err(io)?,
                        }
                    }
                }
                let worse = outcomes.pop().expect("two outcomes");
                let better = outcomes.pop().expect("two outcomes");
                QueryKind::Dominance { better, worse }
            }
            "2" => QueryKind::Consistency,
            "3" if pair => QueryKind::Subsumption,
            "4" if pair => QueryKind::Equivalence,
            "q" | "quit" => return Ok(()),
            other => {
                writeln!(output, "unknown choice `{other}`").map_err(io)?;
                continue;
            }
        };
        let on = if query.arity() == 1 { &specs[..1] } else { specs };
        match answer(config.engine, on, &query, config.limits) {
            Ok(a) => {
                writeln!(output, "{}", a.result.answer).map_err(io)?;
                if let Some(proof) = &a.result.proof {
                    write!(output, "{}", render_proof(&specs[0], proof)).map_err(io)?;
                }
            }
            Err(e) => writeln!(output, "error: {e}").map_err(io)?,
        }
    }
}

/// Runs `config` and returns the process exit status; errors are reported
/// on `stderr`.
pub fn execute<R: BufRead>(config: &RunConfig, stdin: R, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match config.mode {
        Mode::Batch => run_batch(config, stdout).map(|_| ()),
        Mode::EmitSmv => emit_model_command(config, stdout),
        Mode::DumpIpg => dump_ipg(config, stdout),
        Mode::Interactive => load_specs(&config.specs)
            .and_then(|specs| run_interactive(config, &specs, stdin, &mut *stdout)),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
