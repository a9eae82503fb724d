//! Variables, outcomes, preference statements and queries.
//!
//! Everything here is name based so that a specification can be built (or
//! parsed) before it is checked. [`validate_spec`] reports every broken
//! invariant; the engines compile a valid specification into an index based
//! form before doing any work.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::proofs::Proof;
use crate::reasoner::EngineKind;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    /// Declaration order only fixes the encoding; it says nothing about preference.
    pub domain: Vec<String>,
}

impl Variable {
    pub fn new<I, S>(name: impl Into<String>, domain: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Variable {
            name: name.into(),
            domain: domain.into_iter().map(Into::into).collect(),
        }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Variable::new(name, ["0", "1"])
    }

    pub fn value_index(&self, value: &str) -> Option<u32> {
        self.domain.iter().position(|v| v == value).map(|i| i as u32)
    }
}

/// One statement `condition : target=better > target=worse [less_important]`.
///
/// With an empty `less_important` set this is a plain conditional preference
/// (CP-net); with one element it expresses relative importance (TCP-net);
/// larger sets are CP-theory statements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceStatement {
    pub id: String,
    pub target: String,
    pub condition: Vec<(String, String)>,
    pub better: String,
    pub worse: String,
    pub less_important: Vec<String>,
}

impl PreferenceStatement {
    pub fn new(
        id: impl Into<String>,
        target: impl Into<String>,
        better: impl Into<String>,
        worse: impl Into<String>,
    ) -> Self {
        PreferenceStatement {
            id: id.into(),
            target: target.into(),
            condition: Vec::new(),
            better: better.into(),
            worse: worse.into(),
            less_important: Vec::new(),
        }
    }

    pub fn when(mut self, variable: impl Into<String>, value: impl Into<String>) -> Self {
        self.condition.push((variable.into(), value.into()));
        self
    }

    pub fn regardless_of(mut self, variable: impl Into<String>) -> Self {
        self.less_important.push(variable.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PreferenceSpec {
    pub name: String,
    pub variables: Vec<Variable>,
    pub statements: Vec<PreferenceStatement>,
}

/// A complete assignment, stored as one domain index per variable in
/// declaration order. The derived ordering is the canonical one used for
/// display and proof normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<u32>);

impl Outcome {
    pub fn from_indices(values: Vec<u32>) -> Self {
        Outcome(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    CpNet,
    TcpNet,
    CpTheory,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::CpNet => "CP-net",
            Language::TcpNet => "TCP-net",
            Language::CpTheory => "CP-theory",
        })
    }
}

/// The smallest of the three languages that can express `spec`.
pub fn classify_language(spec: &PreferenceSpec) -> Language {
    match spec.statements.iter().map(|s| s.less_important.len()).max() {
        None | Some(0) => Language::CpNet,
        Some(1) => Language::TcpNet,
        Some(_) => Language::CpTheory,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    InvalidIdentifier { name: String },
    InvalidValue { variable: String, value: String },
    DomainTooSmall { variable: String },
    DuplicateDomainValue { variable: String, value: String },
    DuplicateVariable { variable: String },
    EmptyStatementId,
    DuplicateStatementId { statement: String },
    UndeclaredVariable { variable: String, statement: String },
    UndefinedValue { variable: String, value: String, statement: String },
    DegeneratePreference { statement: String },
    TargetInCondition { statement: String },
    TargetInLessImportant { statement: String },
    ConditionOverlapsLessImportant { variable: String, statement: String },
    RepeatedConditionVariable { variable: String, statement: String },
    RepeatedLessImportantVariable { variable: String, statement: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            InvalidIdentifier { name } => write!(f, "`{name}` is not a valid identifier"),
            InvalidValue { variable, value } => {
                write!(f, "value `{value}` of variable {variable} is not a valid SMV constant")
            }
            DomainTooSmall { variable } => {
                write!(f, "variable {variable} needs at least two domain values")
            }
            DuplicateDomainValue { variable, value } => {
                write!(f, "variable {variable} lists value `{value}` twice")
            }
            DuplicateVariable { variable } => write!(f, "variable {variable} declared twice"),
            EmptyStatementId => write!(f, "statement with an empty id"),
            DuplicateStatementId { statement } => write!(f, "statement id {statement} used twice"),
            UndeclaredVariable {
                variable,
                statement,
            } => write!(
                f,
                "statement {statement}: variable {variable} is not defined in the preference specification"
            ),
            UndefinedValue {
                variable,
                value,
                statement,
            } => write!(
                f,
                "statement {statement}: value `{value}` is not in the domain of variable {variable}"
            ),
            DegeneratePreference { statement } => {
                write!(f, "statement {statement}: better and worse values coincide")
            }
            TargetInCondition { statement } => {
                write!(f, "statement {statement}: target variable appears in its own condition")
            }
            TargetInLessImportant { statement } => write!(
                f,
                "statement {statement}: target variable is listed as less important than itself"
            ),
            ConditionOverlapsLessImportant {
                variable,
                statement,
            } => write!(
                f,
                "statement {statement}: variable {variable} is both conditioned on and less important"
            ),
            RepeatedConditionVariable {
                variable,
                statement,
            } => write!(f, "statement {statement}: variable {variable} conditioned twice"),
            RepeatedLessImportantVariable {
                variable,
                statement,
            } => write!(f, "statement {statement}: variable {variable} listed twice as less important"),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Domain values may be SMV symbolic constants or non-negative integers.
pub(crate) fn is_value_token(s: &str) -> bool {
    is_identifier(s) || (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
}

/// Every broken invariant of `spec`, in declaration order. Empty means valid.
pub fn validate_spec(spec: &PreferenceSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut names = BTreeSet::new();
    for var in &spec.variables {
        if !is_identifier(&var.name) {
            out.push(Violation::InvalidIdentifier {
                name: var.name.clone(),
            });
        }
        if !names.insert(var.name.as_str()) {
            out.push(Violation::DuplicateVariable {
                variable: var.name.clone(),
            });
        }
        if var.domain.len() < 2 {
            out.push(Violation::DomainTooSmall {
                variable: var.name.clone(),
            });
        }
        let mut seen = BTreeSet::new();
        for value in &var.domain {
            if !is_value_token(value) {
                out.push(Violation::InvalidValue {
                    variable: var.name.clone(),
                    value: value.clone(),
                });
            }
            if !seen.insert(value.as_str()) {
                out.push(Violation::DuplicateDomainValue {
                    variable: var.name.clone(),
                    value: value.clone(),
                });
            }
        }
    }

    let mut ids = BTreeSet::new();
    for st in &spec.statements {
        let sid = || st.id.clone();
        if st.id.is_empty() {
            out.push(Violation::EmptyStatementId);
        } else if !ids.insert(st.id.as_str()) {
            out.push(Violation::DuplicateStatementId { statement: sid() });
        }

        let lookup = |name: &str| spec.variables.iter().find(|v| v.name == name);
        let check_value = |out: &mut Vec<Violation>, var: &str, value: &str| match lookup(var) {
            None => out.push(Violation::UndeclaredVariable {
                variable: var.to_string(),
                statement: sid(),
            }),
            Some(v) if v.value_index(value).is_none() => out.push(Violation::UndefinedValue {
                variable: var.to_string(),
                value: value.to_string(),
                statement: sid(),
            }),
            Some(_) => {}
        };

        check_value(&mut out, &st.target, &st.better);
        if st.worse != st.better || lookup(&st.target).is_none() {
            check_value(&mut out, &st.target, &st.worse);
        }
        if st.better == st.worse {
            out.push(Violation::DegeneratePreference { statement: sid() });
        }

        let mut cond_vars = BTreeSet::new();
        for (var, value) in &st.condition {
            check_value(&mut out, var, value);
            if *var == st.target {
                out.push(Violation::TargetInCondition { statement: sid() });
            }
            if !cond_vars.insert(var.as_str()) {
                out.push(Violation::RepeatedConditionVariable {
                    variable: var.clone(),
                    statement: sid(),
                });
            }
        }

        let mut omega = BTreeSet::new();
        for var in &st.less_important {
            if lookup(var).is_none() {
                out.push(Violation::UndeclaredVariable {
                    variable: var.clone(),
                    statement: sid(),
                });
            }
            if *var == st.target {
                out.push(Violation::TargetInLessImportant { statement: sid() });
            }
            if cond_vars.contains(var.as_str()) {
                out.push(Violation::ConditionOverlapsLessImportant {
                    variable: var.clone(),
                    statement: sid(),
                });
            }
            if !omega.insert(var.as_str()) {
                out.push(Violation::RepeatedLessImportantVariable {
                    variable: var.clone(),
                    statement: sid(),
                });
            }
        }
    }
    out
}

impl PreferenceSpec {
    pub fn new(name: impl Into<String>) -> Self {
        PreferenceSpec {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn with_variable(mut self, variable: Variable) -> Self {
        self.variables.push(variable);
        self
    }

    pub fn with_statement(mut self, statement: PreferenceStatement) -> Self {
        self.statements.push(statement);
        self
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn statement(&self, id: &str) -> Option<&PreferenceStatement> {
        self.statements.iter().find(|s| s.id == id)
    }

    /// Copy of this specification without the statement `id`.
    pub fn without_statement(&self, id: &str) -> PreferenceSpec {
        let mut spec = self.clone();
        spec.statements.retain(|s| s.id != id);
        spec
    }

    /// Number of outcomes, the product of the domain sizes.
    pub fn outcome_count(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.domain.len() as u128))
    }

    /// Same variable names and domains, in the same order.
    pub fn same_variables(&self, other: &PreferenceSpec) -> bool {
        self.variables == other.variables
    }

    pub fn outcome<'a, I>(&self, pairs: I) -> Result<Outcome>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut values: Vec<Option<u32>> = alloc::vec![None; self.variables.len()];
        for (name, value) in pairs {
            let idx = self
                .variable_index(name)
                .ok_or_else(|| Error::UndefinedVariable(name.to_string()))?;
            let var = &self.variables[idx];
            let vi = var.value_index(value).ok_or_else(|| Error::UndefinedValue {
                variable: name.to_string(),
                value: value.to_string(),
            })?;
            if values[idx].replace(vi).is_some() {
                return Err(Error::OutcomeMismatch(format!("variable {name} assigned twice")));
            }
        }
        values
            .into_iter()
            .zip(&self.variables)
            .map(|(v, var)| v.ok_or_else(|| Error::IncompleteOutcome(var.name.clone())))
            .collect::<Result<Vec<_>>>()
            .map(Outcome)
    }

    /// Parses `a=0,b=1,c=0`. Whitespace around tokens is ignored.
    pub fn parse_outcome(&self, text: &str) -> Result<Outcome> {
        let pairs = parse_assignments(text)?;
        self.outcome(pairs.iter().map(|(k, v)| (*k, *v)))
    }

    pub fn format_outcome(&self, outcome: &Outcome) -> String {
        let mut out = String::new();
        for (i, (var, &v)) in self.variables.iter().zip(outcome.values()).enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&var.name);
            out.push('=');
            match var.domain.get(v as usize) {
                Some(value) => out.push_str(value),
                None => out.push('?'),
            }
        }
        out
    }

    pub fn check_outcome(&self, outcome: &Outcome) -> Result<()> {
        if outcome.len() != self.variables.len() {
            return Err(Error::OutcomeMismatch(format!(
                "expected {} values, found {}",
                self.variables.len(),
                outcome.len()
            )));
        }
        for (var, &v) in self.variables.iter().zip(outcome.values()) {
            if v as usize >= var.domain.len() {
                return Err(Error::OutcomeMismatch(format!(
                    "value index {v} out of range for variable {}",
                    var.name
                )));
            }
        }
        Ok(())
    }

    /// Mixed-radix rank of an outcome, first variable most significant.
    pub fn outcome_rank(&self, outcome: &Outcome) -> u128 {
        self.variables
            .iter()
            .zip(outcome.values())
            .fold(0u128, |acc, (var, &v)| acc * var.domain.len() as u128 + v as u128)
    }

    pub fn outcome_at(&self, mut rank: u128) -> Outcome {
        let mut values = alloc::vec![0u32; self.variables.len()];
        for (slot, var) in values.iter_mut().zip(&self.variables).rev() {
            let radix = var.domain.len() as u128;
            *slot = (rank % radix) as u32;
            rank /= radix;
        }
        Outcome(values)
    }

    /// All outcomes in rank order.
    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        (0..self.outcome_count()).map(|r| self.outcome_at(r))
    }

    pub(crate) fn compile(&self) -> Result<Compiled> {
        let violations = validate_spec(self);
        if !violations.is_empty() {
            return Err(Error::InvalidSpec(violations));
        }
        let var = |name: &str| self.variable_index(name).expect("validated");
        let statements = self
            .statements
            .iter()
            .map(|st| {
                let target = var(&st.target);
                let domain = &self.variables[target];
                let mut condition: Vec<(usize, u32)> = st
                    .condition
                    .iter()
                    .map(|(n, v)| {
                        let i = var(n);
                        (i, self.variables[i].value_index(v).expect("validated"))
                    })
                    .collect();
                condition.sort_unstable();
                let mut less_important: Vec<usize> =
                    st.less_important.iter().map(|n| var(n)).collect();
                less_important.sort_unstable();
                CompiledStatement {
                    target,
                    better: domain.value_index(&st.better).expect("validated"),
                    worse: domain.value_index(&st.worse).expect("validated"),
                    condition,
                    less_important,
                }
            })
            .collect();
        Ok(Compiled {
            radices: self.variables.iter().map(|v| v.domain.len() as u32).collect(),
            statements,
        })
    }
}

/// Splits `a=0, b=1` into pairs; the shared grammar of conditions and outcomes.
pub fn parse_assignments(text: &str) -> Result<Vec<(&str, &str)>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::MalformedOutcome(text.to_string()))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(Error::MalformedOutcome(text.to_string()));
            }
            Ok((k, v))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub radices: Vec<u32>,
    pub statements: Vec<CompiledStatement>,
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledStatement {
    pub target: usize,
    pub better: u32,
    pub worse: u32,
    /// Sorted by variable index.
    pub condition: Vec<(usize, u32)>,
    /// Sorted.
    pub less_important: Vec<usize>,
}

impl CompiledStatement {
    /// Does `outcome` satisfy the guard: condition holds and the target has the worse value.
    pub fn enabled_at(&self, outcome: &[u32]) -> bool {
        outcome[self.target] == self.worse
            && self.condition.iter().all(|&(v, val)| outcome[v] == val)
    }

    pub fn is_free(&self, var: usize) -> bool {
        var == self.target || self.less_important.binary_search(&var).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKind {
    /// Is `better` reachable from `worse` by one or more improving flips?
    Dominance { better: Outcome, worse: Outcome },
    Consistency,
    /// Is every dominance of the first specification entailed by the second?
    Subsumption,
    Equivalence,
}

impl QueryKind {
    pub fn tag(&self) -> &'static str {
        match self {
            QueryKind::Dominance { .. } => "DOMINANCE",
            QueryKind::Consistency => "CONSISTENCY",
            QueryKind::Subsumption => "SUBSUMPTION",
            QueryKind::Equivalence => "EQUIVALENCE",
        }
    }

    /// How many specifications the query refers to.
    pub fn arity(&self) -> usize {
        match self {
            QueryKind::Dominance { .. } | QueryKind::Consistency => 1,
            QueryKind::Subsumption | QueryKind::Equivalence => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    /// Specification references in order: the first is P1, the second (if any) P2.
    pub spec_refs: Vec<String>,
}

impl Query {
    pub fn new(kind: QueryKind) -> Self {
        Query {
            kind,
            spec_refs: Vec::new(),
        }
    }

    pub fn dominance(better: Outcome, worse: Outcome) -> Self {
        Query::new(QueryKind::Dominance { better, worse })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub answer: bool,
    pub proof: Option<Proof>,
    pub engine: EngineKind,
    pub elapsed: Duration,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use alloc::vec;

    #[test]
    fn classify_figure_examples() {
        assert_eq!(classify_language(&p1()), Language::CpNet);
        assert_eq!(classify_language(&p3()), Language::TcpNet);
        let theory = p1().with_statement(
            PreferenceStatement::new("t", "a", "0", "1")
                .regardless_of("b")
                .regardless_of("c"),
        );
        assert_eq!(classify_language(&theory), Language::CpTheory);
        assert_eq!(classify_language(&PreferenceSpec::new("empty")), Language::CpNet);
    }

    #[test]
    fn valid_figure_specs() {
        assert!(validate_spec(&p1()).is_empty());
        assert!(validate_spec(&p3()).is_empty());
        assert!(validate_spec(&d2()).is_empty());
    }

    #[test]
    fn undeclared_variable_is_reported() {
        let spec = p1().with_statement(PreferenceStatement::new("p4", "c", "1", "0").when("d", "0"));
        assert_eq!(
            validate_spec(&spec),
            vec![Violation::UndeclaredVariable {
                variable: "d".into(),
                statement: "p4".into()
            }]
        );
        let msg = alloc::format!("{}", validate_spec(&spec)[0]);
        assert!(msg.contains("not defined in the preference specification"));
    }

    #[test]
    fn degenerate_preference_is_reported() {
        let spec = p1().with_statement(PreferenceStatement::new("pk", "a", "0", "0"));
        assert_eq!(
            validate_spec(&spec),
            vec![Violation::DegeneratePreference {
                statement: "pk".into()
            }]
        );
    }

    #[test]
    fn disjointness_violations() {
        let spec = p1().with_statement(
            PreferenceStatement::new("x", "a", "0", "1")
                .when("a", "1")
                .when("b", "0")
                .regardless_of("a")
                .regardless_of("b"),
        );
        let v = validate_spec(&spec);
        assert!(v.contains(&Violation::TargetInCondition { statement: "x".into() }));
        assert!(v.contains(&Violation::TargetInLessImportant { statement: "x".into() }));
        assert!(v.contains(&Violation::ConditionOverlapsLessImportant {
            variable: "b".into(),
            statement: "x".into()
        }));
    }

    #[test]
    fn variable_level_violations() {
        let spec = PreferenceSpec::new("bad")
            .with_variable(Variable::new("1x", ["0", "1"]))
            .with_variable(Variable::new("y", ["0"]))
            .with_variable(Variable::new("z", ["a", "a", "b-c"]))
            .with_variable(Variable::binary("z"));
        let v = validate_spec(&spec);
        assert!(v.contains(&Violation::InvalidIdentifier { name: "1x".into() }));
        assert!(v.contains(&Violation::DomainTooSmall { variable: "y".into() }));
        assert!(v.contains(&Violation::DuplicateDomainValue {
            variable: "z".into(),
            value: "a".into()
        }));
        assert!(v.contains(&Violation::InvalidValue {
            variable: "z".into(),
            value: "b-c".into()
        }));
        assert!(v.contains(&Violation::DuplicateVariable { variable: "z".into() }));
    }

    #[test]
    fn duplicate_and_conflicting_statements_are_allowed() {
        let spec = p1()
            .with_statement(PreferenceStatement::new("dup", "a", "0", "1"))
            .with_statement(PreferenceStatement::new("rev", "a", "1", "0"));
        assert!(validate_spec(&spec).is_empty());
        let spec = spec.with_statement(PreferenceStatement::new("dup", "b", "0", "1"));
        assert_eq!(
            validate_spec(&spec),
            vec![Violation::DuplicateStatementId {
                statement: "dup".into()
            }]
        );
    }

    #[test]
    fn outcome_parsing_and_rank() {
        let spec = p1();
        let o = spec.parse_outcome(" a=0, b=1 ,c=0").unwrap();
        assert_eq!(o.values(), &[0, 1, 0]);
        assert_eq!(spec.format_outcome(&o), "a=0,b=1,c=0");
        assert_eq!(spec.outcome_rank(&o), 2);
        assert_eq!(spec.outcome_at(2), o);
        assert_eq!(spec.outcomes().count(), 8);
        assert!(matches!(
            spec.parse_outcome("a=0,b=1"),
            Err(Error::IncompleteOutcome(v)) if v == "c"
        ));
        assert!(matches!(spec.parse_outcome("a=0,b=1,d=1"), Err(Error::UndefinedVariable(_))));
        assert!(matches!(spec.parse_outcome("a=2,b=1,c=0"), Err(Error::UndefinedValue { .. })));
        assert!(matches!(spec.parse_outcome("a0,b=1,c=0"), Err(Error::MalformedOutcome(_))));
        assert!(spec.check_outcome(&Outcome::from_indices(vec![0, 1])).is_err());
        assert!(spec.check_outcome(&Outcome::from_indices(vec![0, 1, 2])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn statement() -> impl Strategy<Value = PreferenceStatement> {
            (0usize..3, proptest::collection::vec(0usize..3, 0..3), any::<u32>()).prop_map(
                |(t, omega, salt)| {
                    let names = ["a", "b", "c"];
                    let mut st = PreferenceStatement::new(
                        alloc::format!("g{salt}"),
                        names[t],
                        "0",
                        "1",
                    );
                    for o in omega {
                        if o != t && !st.less_important.iter().any(|n| n == names[o]) {
                            st = st.regardless_of(names[o]);
                        }
                    }
                    st
                },
            )
        }

        proptest! {
            #[test]
            fn adding_statements_never_lowers_the_language(extra in proptest::collection::vec(statement(), 0..6), added in statement()) {
                let mut spec = p1();
                spec.statements.extend(extra);
                let before = classify_language(&spec);
                let after = classify_language(&spec.clone().with_statement(added));
                let rank = |l: Language| match l { Language::CpNet => 0, Language::TcpNet => 1, Language::CpTheory => 2 };
                prop_assert!(rank(after) >= rank(before));
            }
        }
    }
}
