//! Replayable justifications and their independent checker.
//!
//! Only witnessed answers carry a proof: a true dominance (a flip path), an
//! inconsistency (a flip cycle) and a failed subsumption (one flip of the
//! first specification that the second does not entail). Path and cycle
//! proofs are checked with the flip predicate alone; a counter-flip also needs
//! one reachability query against the other specification.

use alloc::string::String;
use alloc::vec::Vec;

use crate::explicit::{dominates_explicit, DEFAULT_NODE_LIMIT};
use crate::model::{Outcome, PreferenceSpec, QueryKind};
use crate::semantics::{licensing, Flip};
use crate::symbolic::SymbolicModel;
use crate::{Error, Result};

/// One step of a proof: an improving flip and the statement that licenses it.
pub type ProofStep = Flip;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofKind {
    DominancePath,
    InconsistencyCycle,
    NonSubsumptionFlip,
}

impl ProofKind {
    pub fn tag(self) -> &'static str {
        match self {
            ProofKind::DominancePath => "DOMINANCE_PATH",
            ProofKind::InconsistencyCycle => "INCONSISTENCY_CYCLE",
            ProofKind::NonSubsumptionFlip => "NON_SUBSUMPTION_FLIP",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "DOMINANCE_PATH" => Some(ProofKind::DominancePath),
            "INCONSISTENCY_CYCLE" => Some(ProofKind::InconsistencyCycle),
            "NON_SUBSUMPTION_FLIP" => Some(ProofKind::NonSubsumptionFlip),
            _ => None,
        }
    }
}

/// Which subsumption failed when an equivalence does not hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofDirection {
    /// A flip of the first specification that the second does not entail.
    FirstNotInSecond,
    /// A flip of the second specification that the first does not entail.
    SecondNotInFirst,
}

impl ProofDirection {
    pub fn tag(self) -> &'static str {
        match self {
            ProofDirection::FirstNotInSecond => "P1_NOT_IN_P2",
            ProofDirection::SecondNotInFirst => "P2_NOT_IN_P1",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "P1_NOT_IN_P2" => Some(ProofDirection::FirstNotInSecond),
            "P2_NOT_IN_P1" => Some(ProofDirection::SecondNotInFirst),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub kind: ProofKind,
    pub steps: Vec<ProofStep>,
    pub direction: Option<ProofDirection>,
}

impl Proof {
    pub fn path(steps: Vec<Flip>) -> Self {
        Proof {
            kind: ProofKind::DominancePath,
            steps,
            direction: None,
        }
    }

    pub fn cycle(steps: Vec<Flip>) -> Self {
        Proof {
            kind: ProofKind::InconsistencyCycle,
            steps,
            direction: None,
        }
    }

    pub fn counter_flip(flip: Flip, direction: Option<ProofDirection>) -> Self {
        Proof {
            kind: ProofKind::NonSubsumptionFlip,
            steps: alloc::vec![flip],
            direction,
        }
    }
}

/// The specification(s) a query or proof refers to.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    Single(&'a PreferenceSpec),
    Pair(&'a PreferenceSpec, &'a PreferenceSpec),
}

impl<'a> Subject<'a> {
    pub fn first(&self) -> &'a PreferenceSpec {
        match *self {
            Subject::Single(p) | Subject::Pair(p, _) => p,
        }
    }

    fn arity(&self) -> usize {
        match self {
            Subject::Single(_) => 1,
            Subject::Pair(..) => 2,
        }
    }
}

fn shape(msg: &str) -> Error {
    Error::ShapeMismatch(String::from(msg))
}

/// Which specification licenses the steps of `proof`, and for a counter-flip
/// which one must fail to entail it.
fn roles<'a>(
    subject: Subject<'a>,
    proof: &Proof,
) -> Result<(&'a PreferenceSpec, Option<&'a PreferenceSpec>)> {
    match (proof.kind, subject) {
        (ProofKind::DominancePath | ProofKind::InconsistencyCycle, Subject::Single(p)) => {
            Ok((p, None))
        }
        (ProofKind::NonSubsumptionFlip, Subject::Pair(p1, p2)) => match proof.direction {
            None | Some(ProofDirection::FirstNotInSecond) => Ok((p1, Some(p2))),
            Some(ProofDirection::SecondNotInFirst) => Ok((p2, Some(p1))),
        },
        _ => Err(shape("proof kind does not fit the number of specifications")),
    }
}

fn step_licensed(spec: &PreferenceSpec, step: &Flip) -> Result<bool> {
    let compiled = spec.compile()?;
    if spec.check_outcome(&step.from).is_err() || spec.check_outcome(&step.to).is_err() {
        return Ok(false);
    }
    let licensed = licensing(&compiled, step.from.values(), step.to.values())
        .any(|i| spec.statements[i].id == step.statement);
    Ok(licensed)
}

fn chained(steps: &[Flip]) -> bool {
    steps.windows(2).all(|w| w[0].to == w[1].from)
}

/// Does `to` dominate `from` in `spec`? Explicit search when the outcome
/// space is small enough, the symbolic engine otherwise.
fn reaches(spec: &PreferenceSpec, from: &Outcome, to: &Outcome) -> Result<bool> {
    if spec.outcome_count() <= DEFAULT_NODE_LIMIT {
        Ok(dominates_explicit(spec, to, from, DEFAULT_NODE_LIMIT)?.0)
    } else {
        let mut model = SymbolicModel::encode(spec, crate::bdd::DEFAULT_NODE_BUDGET)?;
        Ok(model.dominates(to, from)?.0)
    }
}

/// Replays `proof` against the query it claims to answer.
///
/// Returns `Ok(false)` for a proof that is well formed but wrong, and
/// [`Error::ShapeMismatch`] when the proof kind cannot answer the query at
/// all (a cycle offered for a dominance query, a missing direction on an
/// equivalence counter-flip, and so on).
pub fn verify_proof(subject: Subject<'_>, query: &QueryKind, proof: &Proof) -> Result<bool> {
    if subject.arity() != query.arity() {
        return Err(shape("query needs a different number of specifications"));
    }
    let expected = match query {
        QueryKind::Dominance { .. } => ProofKind::DominancePath,
        QueryKind::Consistency => ProofKind::InconsistencyCycle,
        QueryKind::Subsumption | QueryKind::Equivalence => ProofKind::NonSubsumptionFlip,
    };
    if proof.kind != expected {
        return Err(shape("proof kind does not answer this query"));
    }
    match (query, proof.direction) {
        (QueryKind::Equivalence, None) => {
            return Err(shape("equivalence counter-flip without a direction"))
        }
        (QueryKind::Subsumption, Some(ProofDirection::SecondNotInFirst)) => {
            return Err(shape("subsumption counter-flip must come from the first specification"))
        }
        (QueryKind::Dominance { .. } | QueryKind::Consistency, Some(_)) => {
            return Err(shape("only counter-flips carry a direction"))
        }
        _ => {}
    }
    let (licensor, other) = roles(subject, proof)?;

    let Some(first) = proof.steps.first() else {
        return Ok(false);
    };
    let last = proof.steps.last().expect("nonempty");
    if !chained(&proof.steps) {
        return Ok(false);
    }
    match query {
        QueryKind::Dominance { better, worse } => {
            if first.from != *worse || last.to != *better {
                return Ok(false);
            }
        }
        QueryKind::Consistency => {
            if last.to != first.from {
                return Ok(false);
            }
        }
        QueryKind::Subsumption | QueryKind::Equivalence => {
            if proof.steps.len() != 1 {
                return Ok(false);
            }
        }
    }
    for step in &proof.steps {
        if !step_licensed(licensor, step)? {
            return Ok(false);
        }
    }
    if let Some(other) = other {
        if !licensor.same_variables(other) {
            return Err(Error::VariableMismatch);
        }
        if reaches(other, &first.from, &first.to)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical form of a proof: every step cites the least licensing id, and a
/// cycle starts at its least outcome. Steps nobody licenses keep their id.
pub fn normalize_proof(subject: Subject<'_>, proof: &Proof) -> Result<Proof> {
    let (licensor, _) = roles(subject, proof)?;
    let compiled = licensor.compile()?;
    let mut steps: Vec<Flip> = proof
        .steps
        .iter()
        .map(|step| {
            let mut step = step.clone();
            if licensor.check_outcome(&step.from).is_ok() && licensor.check_outcome(&step.to).is_ok() {
                if let Some(id) = licensing(&compiled, step.from.values(), step.to.values())
                    .map(|i| &licensor.statements[i].id)
                    .min()
                {
                    step.statement = id.clone();
                }
            }
            step
        })
        .collect();
    if proof.kind == ProofKind::InconsistencyCycle {
        if let Some(start) = (0..steps.len()).min_by(|&a, &b| steps[a].from.cmp(&steps[b].from)) {
            steps.rotate_left(start);
        }
    }
    Ok(Proof {
        kind: proof.kind,
        steps,
        direction: proof.direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::model::PreferenceStatement;
    use alloc::vec;

    fn o(v: &[u32]) -> Outcome {
        Outcome::from_indices(v.to_vec())
    }

    fn step(from: &[u32], to: &[u32], id: &str) -> Flip {
        Flip {
            from: o(from),
            to: o(to),
            statement: id.into(),
        }
    }

    fn p1_dominance() -> QueryKind {
        QueryKind::Dominance {
            better: o(&[0, 1, 0]),
            worse: o(&[1, 0, 1]),
        }
    }

    fn d2_cycle() -> Vec<Flip> {
        vec![
            step(&[0, 0], &[1, 0], "s1"),
            step(&[1, 0], &[1, 1], "s3"),
            step(&[1, 1], &[0, 1], "s2"),
            step(&[0, 1], &[0, 0], "s4"),
        ]
    }

    #[test]
    fn dominance_path_replays() {
        let spec = p1();
        let good = Proof::path(vec![
            step(&[1, 0, 1], &[1, 0, 0], "s3"),
            step(&[1, 0, 0], &[1, 1, 0], "s2"),
            step(&[1, 1, 0], &[0, 1, 0], "s1"),
        ]);
        assert!(verify_proof(Subject::Single(&spec), &p1_dominance(), &good).unwrap());

        let mut wrong_ids = good.clone();
        for (s, id) in wrong_ids.steps.iter_mut().zip(["s1", "s2", "s3"]) {
            s.statement = id.into();
        }
        assert!(!verify_proof(Subject::Single(&spec), &p1_dominance(), &wrong_ids).unwrap());

        let mut broken_chain = good.clone();
        broken_chain.steps.remove(1);
        assert!(!verify_proof(Subject::Single(&spec), &p1_dominance(), &broken_chain).unwrap());

        let empty = Proof::path(vec![]);
        assert!(!verify_proof(Subject::Single(&spec), &p1_dominance(), &empty).unwrap());

        let short = Proof::path(vec![step(&[1, 0], &[0, 0], "s1")]);
        assert!(!verify_proof(Subject::Single(&spec), &p1_dominance(), &short).unwrap());
    }

    #[test]
    fn cycle_replays() {
        let spec = d2();
        let proof = Proof::cycle(d2_cycle());
        assert!(verify_proof(Subject::Single(&spec), &QueryKind::Consistency, &proof).unwrap());
        let mut open = proof.clone();
        open.steps.pop();
        assert!(!verify_proof(Subject::Single(&spec), &QueryKind::Consistency, &open).unwrap());
    }

    #[test]
    fn shape_mismatches() {
        let spec = d2();
        let proof = Proof::cycle(d2_cycle());
        assert!(matches!(
            verify_proof(Subject::Single(&spec), &p1_dominance(), &proof),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            verify_proof(Subject::Pair(&spec, &spec), &QueryKind::Consistency, &proof),
            Err(Error::ShapeMismatch(_))
        ));
        let flip = Proof::counter_flip(step(&[0, 0], &[1, 0], "s1"), None);
        assert!(matches!(
            verify_proof(Subject::Pair(&spec, &spec), &QueryKind::Equivalence, &flip),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn counter_flip_replays() {
        let full = p1();
        let reduced = full.without_statement("s3");
        let flip = Proof::counter_flip(step(&[1, 0, 1], &[1, 0, 0], "s3"), None);
        let q = QueryKind::Subsumption;
        assert!(verify_proof(Subject::Pair(&full, &reduced), &q, &flip).unwrap());
        // entailed by the second specification: not a counter-flip
        assert!(!verify_proof(Subject::Pair(&full, &full), &q, &flip).unwrap());

        let eq = QueryKind::Equivalence;
        let dir = Proof::counter_flip(
            step(&[1, 0, 1], &[1, 0, 0], "s3"),
            Some(ProofDirection::SecondNotInFirst),
        );
        assert!(verify_proof(Subject::Pair(&reduced, &full), &eq, &dir).unwrap());
        assert!(!verify_proof(Subject::Pair(&full, &reduced), &eq, &dir).unwrap());
    }

    #[test]
    fn normalization() {
        let spec = d2();
        let mut rotated = d2_cycle();
        rotated.rotate_left(2);
        assert_eq!(rotated[0].from, o(&[1, 1]));
        let n = normalize_proof(Subject::Single(&spec), &Proof::cycle(rotated)).unwrap();
        assert_eq!(n, Proof::cycle(d2_cycle()));
        assert_eq!(normalize_proof(Subject::Single(&spec), &n).unwrap(), n);

        let doubled = p1()
            .with_statement(PreferenceStatement::new("s5", "b", "1", "0").when("c", "0"));
        let proof = Proof::path(vec![step(&[1, 0, 0], &[1, 1, 0], "s5")]);
        let n = normalize_proof(Subject::Single(&doubled), &proof).unwrap();
        assert_eq!(n.steps[0].statement, "s2");
        let q = QueryKind::Dominance {
            better: o(&[1, 1, 0]),
            worse: o(&[1, 0, 0]),
        };
        assert!(verify_proof(Subject::Single(&doubled), &q, &proof).unwrap());
        assert!(verify_proof(Subject::Single(&doubled), &q, &n).unwrap());
    }
}
