//! Running an external SMV model checker and reading its verdicts back.
//!
//! The checker is invoked as `checker <file.smv>`. Its standard output is
//! scanned for NuSMV's `-- specification ... is true|false` lines; the
//! counterexample trace that follows a false verdict is kept verbatim and
//! can be decoded into outcomes. Trace states list only the variables that
//! changed, so each state is accumulated from the previous one.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;

use cpref_core::smv::SmvDocument;
use cpref_core::{is_improving_flip, Flip, Outcome, PreferenceSpec};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckerVerdict {
    /// The formula as echoed by the checker.
    pub formula: String,
    pub holds: bool,
    /// Counterexample text following a false verdict, if any.
    pub trace: Option<String>,
}

/// Writes `doc` to a temporary file and runs `checker` on it. Fails unless
/// there is exactly one verdict per `SPEC` line of the document.
pub fn run_external(doc: &SmvDocument, checker: &Path) -> Result<Vec<CheckerVerdict>> {
    let mut file = tempfile::Builder::new()
        .prefix("cpref-")
        .suffix(".smv")
        .tempfile()
        .map_err(|source| Error::Io {
            path: std::env::temp_dir(),
            source,
        })?;
    let path = file.path().to_path_buf();
    let io = |source| Error::Io { path: path.clone(), source };
    file.write_all(doc.render().as_bytes()).map_err(io)?;
    file.flush().map_err(io)?;
    let output = Command::new(checker)
        .arg(file.path())
        .output()
        .map_err(|source| Error::CheckerNotFound {
            path: checker.to_path_buf(),
            source,
        })?;
    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let verdicts = parse_checker_output(&stdout)?;
    if verdicts.len() != doc.specs.len() {
        let stderr = String::from_utf8_lossy(&output.stderr);
        return Err(Error::CheckerParseFailure {
            message: format!(
                "expected {} verdict(s), found {} (exit status {}){}",
                doc.specs.len(),
                verdicts.len(),
                output.status,
                if stderr.trim().is_empty() { String::new() } else { format!(": {}", stderr.trim()) }
            ),
            raw: stdout,
        });
    }
    Ok(verdicts)
}

/// Verdicts in output order.
pub fn parse_checker_output(stdout: &str) -> Result<Vec<CheckerVerdict>> {
    let mut verdicts: Vec<CheckerVerdict> = Vec::new();
    let mut trace: Option<String> = None;
    let finish = |verdicts: &mut Vec<CheckerVerdict>, trace: &mut Option<String>| {
        if let (Some(last), Some(t)) = (verdicts.last_mut(), trace.take()) {
            last.trace = Some(t);
        }
    };
    for line in stdout.lines() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("-- specification ") {
            finish(&mut verdicts, &mut trace);
            let (formula, holds) = if let Some(f) = rest.strip_suffix(" is true") {
                (f, true)
            } else if let Some(f) = rest.strip_suffix(" is false") {
                (f, false)
            } else {
                return Err(Error::CheckerParseFailure {
                    message: format!("verdict line without true/false: `{trimmed}`"),
                    raw: stdout.to_string(),
                });
            };
            verdicts.push(CheckerVerdict {
                formula: formula.trim().to_string(),
                holds,
                trace: None,
            });
            if !holds {
                trace = Some(String::new());
            }
        } else if let Some(t) = trace.as_mut() {
            t.push_str(line);
            t.push('\n');
        }
    }
    finish(&mut verdicts, &mut trace);
    Ok(verdicts)
}

/// The states of a trace as complete variable maps, in order. Input
/// sections (`-> Input: ... <-`) are skipped.
pub fn parse_trace(trace: &str) -> Vec<BTreeMap<String, String>> {
    let mut states: Vec<BTreeMap<String, String>> = Vec::new();
    let mut current: BTreeMap<String, String> = BTreeMap::new();
    let mut in_state = false;
    let mut open = false;
    for line in trace.lines() {
        let line = line.trim();
        if line.starts_with("->") && line.ends_with("<-") {
            if open {
                states.push(current.clone());
            }
            in_state = line.contains("State:");
            open = in_state;
            continue;
        }
        if !in_state {
            continue;
        }
        if let Some((name, value)) = line.split_once('=') {
            current.insert(name.trim().to_string(), value.trim().to_string());
        }
    }
    if open {
        states.push(current);
    }
    states
}

/// Maps trace states back to outcomes of `spec` through the document's
/// name table.
pub fn trace_outcomes(
    spec: &PreferenceSpec,
    doc: &SmvDocument,
    states: &[BTreeMap<String, String>],
) -> Result<Vec<Outcome>> {
    states
        .iter()
        .map(|state| {
            let pairs = doc
                .names
                .iter()
                .map(|(var, smv)| {
                    state.get(smv).map(|v| (var.as_str(), v.as_str())).ok_or_else(|| {
                        Error::CheckerParseFailure {
                            message: format!("trace state lacks variable `{smv}`"),
                            raw: format!("{state:?}"),
                        }
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(spec.outcome(pairs)?)
        })
        .collect()
}

/// Flips along a sequence of outcomes, dropping stutter steps where nothing
/// changed. Each flip cites its least licensing statement; a change that no
/// statement licenses is an error.
pub fn trace_to_flips(spec: &PreferenceSpec, outcomes: &[Outcome]) -> Result<Vec<Flip>> {
    let mut flips = Vec::new();
    for pair in outcomes.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        if from == to {
            continue;
        }
        let ids = is_improving_flip(spec, from, to)?;
        let statement = ids.into_iter().min().ok_or_else(|| Error::CheckerParseFailure {
            message: format!(
                "trace step {} -> {} is not an improving flip",
                spec.format_outcome(from),
                spec.format_outcome(to)
            ),
            raw: String::new(),
        })?;
        flips.push(Flip {
            from: from.clone(),
            to: to.clone(),
            statement: statement.to_string(),
        });
    }
    Ok(flips)
}
