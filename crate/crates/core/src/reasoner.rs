//! One entry point over both engines.
//!
//! [`solve`] answers a query with the chosen engine, normalizes the proof and
//! replays it before returning. A proof that fails replay is reported as
//! [`Error::InternalInconsistency`] rather than handed to the caller.

use core::fmt;

use crate::bdd::DEFAULT_NODE_BUDGET;
use crate::explicit::{
    consistent_explicit, dominates_explicit, equivalent_explicit, subsumes_explicit,
    DEFAULT_NODE_LIMIT,
};
use crate::model::QueryKind;
use crate::proofs::{normalize_proof, verify_proof, Proof, Subject};
use crate::symbolic::{consistent_symbolic, equivalent_symbolic, subsumes_symbolic, SymbolicModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Explicit,
    Symbolic,
}

impl EngineKind {
    pub fn tag(self) -> &'static str {
        match self {
            EngineKind::Explicit => "EXPLICIT",
            EngineKind::Symbolic => "SYMBOLIC",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Node cap of the symbolic engine's BDD manager.
    pub node_budget: usize,
    /// Largest outcome space the explicit engine will materialize.
    pub node_limit: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            node_budget: DEFAULT_NODE_BUDGET,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: bool,
    pub proof: Option<Proof>,
}

fn pair<'a>(subject: Subject<'a>) -> Result<(&'a crate::PreferenceSpec, &'a crate::PreferenceSpec)> {
    match subject {
        Subject::Pair(a, b) => Ok((a, b)),
        Subject::Single(_) => Err(Error::ShapeMismatch("query needs two specifications".into())),
    }
}

fn single(subject: Subject<'_>) -> Result<&crate::PreferenceSpec> {
    match subject {
        Subject::Single(a) => Ok(a),
        Subject::Pair(..) => Err(Error::ShapeMismatch("query needs one specification".into())),
    }
}

/// Answers `query` about `subject` with `engine`.
pub fn solve(engine: EngineKind, subject: Subject<'_>, query: &QueryKind, limits: Limits) -> Result<Verdict> {
    use EngineKind::*;
    let (answer, proof) = match query {
        QueryKind::Dominance { better, worse } => {
            let spec = single(subject)?;
            let (answer, path) = match engine {
                Explicit => dominates_explicit(spec, better, worse, limits.node_limit)?,
                Symbolic => SymbolicModel::encode(spec, limits.node_budget)?.dominates(better, worse)?,
            };
            (answer, path.map(Proof::path))
        }
        QueryKind::Consistency => {
            let spec = single(subject)?;
            let (answer, cycle) = match engine {
                Explicit => consistent_explicit(spec, limits.node_limit)?,
                Symbolic => consistent_symbolic(spec, limits.node_budget)?,
            };
            (answer, cycle.map(Proof::cycle))
        }
        QueryKind::Subsumption => {
            let (p1, p2) = pair(subject)?;
            let (answer, flip) = match engine {
                Explicit => subsumes_explicit(p1, p2, limits.node_limit)?,
                Symbolic => subsumes_symbolic(p1, p2, limits.node_budget)?,
            };
            (answer, flip.map(|f| Proof::counter_flip(f, None)))
        }
        QueryKind::Equivalence => {
            let (p1, p2) = pair(subject)?;
            let (answer, flip) = match engine {
                Explicit => equivalent_explicit(p1, p2, limits.node_limit)?,
                Symbolic => equivalent_symbolic(p1, p2, limits.node_budget)?,
            };
            (answer, flip.map(|(d, f)| Proof::counter_flip(f, Some(d))))
        }
    };
    let proof = match proof {
        None => None,
        Some(p) => {
            let p = normalize_proof(subject, &p)?;
            if !verify_proof(subject, query, &p)? {
                return Err(Error::InternalInconsistency(alloc::format!(
                    "{engine} engine produced a {} proof that does not replay",
                    p.kind.tag()
                )));
            }
            Some(p)
        }
    };
    Ok(Verdict { answer, proof })
}
