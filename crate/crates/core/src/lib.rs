//! Reasoning about qualitative ceteris paribus preferences.
//!
//! A [`PreferenceSpec`] declares variables with finite domains and a set of
//! conditional preference statements, each optionally trading off a set of
//! less important variables. This covers CP-nets, TCP-nets and CP-theories.
//! The statements induce a graph over complete outcomes whose edges are the
//! improving flips of [`semantics`]. Dominance is reachability in that graph,
//! consistency is acyclicity, and subsumption/equivalence compare the
//! transitive closures of two such graphs.
//!
//! Two engines answer the same four queries:
//!
//! * [`explicit`] materializes the induced graph and runs graph algorithms.
//!   It is the reference oracle for small instances.
//! * [`symbolic`] encodes the flip relation as a reduced ordered BDD
//!   ([`bdd`]) and answers queries with image computations and fixpoints.
//!
//! Positive dominance answers and negative consistency/subsumption answers
//! carry a [`proofs::Proof`] that can be replayed against the statements
//! independently of either engine. [`smv`] renders a specification as an SMV
//! model with CTL properties for replay in an external model checker.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bdd;
mod error;
pub mod explicit;
#[cfg(feature = "generate")]
pub mod generate;
pub mod model;
pub mod proofs;
pub mod reasoner;
pub mod semantics;
pub mod smv;
pub mod symbolic;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::Error;
pub use model::{
    classify_language, parse_assignments, validate_spec, Language, Outcome, PreferenceSpec, PreferenceStatement,
    Query, QueryKind, QueryResult, Variable, Violation,
};
pub use proofs::{normalize_proof, verify_proof, Proof, ProofDirection, ProofKind, ProofStep, Subject};
pub use reasoner::{solve, EngineKind, Limits, Verdict};
pub use semantics::{improving_successors, is_improving_flip, Flip};

pub type Result<T, E = Error> = core::result::Result<T, E>;
