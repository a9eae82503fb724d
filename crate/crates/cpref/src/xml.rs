//! The XML dialect for specifications, queries and results.
//!
//! Specifications:
//!
//! ```xml
//! <PREFERENCE-SPECIFICATION NAME="P1">
//!   <VARIABLE>
//!     <NAME>a</NAME>
//!     <DOMAIN-VALUE>0</DOMAIN-VALUE>
//!     <DOMAIN-VALUE>1</DOMAIN-VALUE>
//!   </VARIABLE>
//!   <PREFERENCE-STATEMENT>
//!     <STATEMENT-ID>p1</STATEMENT-ID>
//!     <VARIABLE>a</VARIABLE>
//!     <CONDITION>b=0</CONDITION>
//!     <PREFERENCE>0:1</PREFERENCE>
//!     <REGARDLESS-OF>c</REGARDLESS-OF>
//!   </PREFERENCE-STATEMENT>
//! </PREFERENCE-SPECIFICATION>
//! ```
//!
//! Several `CONDITION` elements conjoin and several `REGARDLESS-OF` elements
//! accumulate. Several `PREFERENCE` elements in one statement describe a
//! chain such as `0:1` then `1:2`; each becomes its own statement with id
//! `p1#1`, `p1#2`, ... sharing the condition and the less-important set.
//!
//! Queries name their kind, the specification file(s) relative to the query
//! file, and for dominance the two outcomes:
//!
//! ```xml
//! <PREFERENCE-QUERY KIND="DOMINANCE">
//!   <SPEC-FILE>p1.xml</SPEC-FILE>
//!   <BETTER-OUTCOME>a=0,b=1,c=0</BETTER-OUTCOME>
//!   <WORSE-OUTCOME>a=1,b=0,c=1</WORSE-OUTCOME>
//! </PREFERENCE-QUERY>
//! ```
//!
//! Results are `RESULT` documents; see [`emit_result`].

use std::fmt::Write;

use cpref_core::{
    parse_assignments, Outcome, PreferenceSpec, PreferenceStatement, Proof, ProofDirection,
    ProofKind, ProofStep, Query, QueryKind, QueryResult, Variable,
};
use roxmltree::{Document, Node};

use crate::error::{Error, Result};

pub const SPEC_ROOT: &str = "PREFERENCE-SPECIFICATION";
pub const QUERY_ROOT: &str = "PREFERENCE-QUERY";
pub const RESULT_ROOT: &str = "RESULT";

fn parse_document(text: &str) -> Result<Document<'_>> {
    Document::parse(text).map_err(|e| Error::MalformedXml(e.to_string()))
}

fn expect_root<'a, 'i>(doc: &'a Document<'i>, tag: &str) -> Result<Node<'a, 'i>> {
    let root = doc.root_element();
    if root.tag_name().name() != tag {
        return Err(Error::structure(
            root.tag_name().name(),
            format!("expected root element <{tag}>"),
        ));
    }
    Ok(root)
}

fn elements<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(Node::is_element)
}

/// Trimmed text content of a leaf element.
fn text_of(node: Node<'_, '_>) -> Result<String> {
    let tag = node.tag_name().name();
    if let Some(child) = elements(node).next() {
        return Err(Error::structure(
            tag,
            format!("unexpected child <{}>", child.tag_name().name()),
        ));
    }
    let text: String = node.children().filter_map(|c| c.text()).collect();
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::structure(tag, "empty element"));
    }
    Ok(text.to_string())
}

fn single<'a, 'i>(parent: Node<'a, 'i>, tag: &str) -> Result<Node<'a, 'i>> {
    let mut found = elements(parent).filter(|n| n.tag_name().name() == tag);
    let first = found.next().ok_or_else(|| {
        Error::structure(parent.tag_name().name(), format!("missing <{tag}>"))
    })?;
    if found.next().is_some() {
        return Err(Error::structure(
            parent.tag_name().name(),
            format!("more than one <{tag}>"),
        ));
    }
    Ok(first)
}

fn unexpected(parent: Node<'_, '_>, child: Node<'_, '_>) -> Error {
    Error::structure(
        parent.tag_name().name(),
        format!("unexpected child <{}>", child.tag_name().name()),
    )
}

/// Parses and validates a specification document.
pub fn parse_spec(text: &str) -> Result<PreferenceSpec> {
    let doc = parse_document(text)?;
    let root = expect_root(&doc, SPEC_ROOT)?;
    let mut spec = PreferenceSpec::new(root.attribute("NAME").unwrap_or("spec"));
    for node in elements(root) {
        match node.tag_name().name() {
            "VARIABLE" => spec.variables.push(parse_variable(node)?),
            "PREFERENCE-STATEMENT" => spec.statements.extend(parse_statement(node)?),
            _ => return Err(unexpected(root, node)),
        }
    }
    let violations = cpref_core::validate_spec(&spec);
    if !violations.is_empty() {
        return Err(cpref_core::Error::InvalidSpec(violations).into());
    }
    Ok(spec)
}

fn parse_variable(node: Node<'_, '_>) -> Result<Variable> {
    let name = text_of(single(node, "NAME")?)?;
    let mut domain = Vec::new();
    for child in elements(node) {
        match child.tag_name().name() {
            "NAME" => {}
            "DOMAIN-VALUE" => domain.push(text_of(child)?),
            _ => return Err(unexpected(node, child)),
        }
    }
    Ok(Variable::new(name, domain))
}

fn parse_statement(node: Node<'_, '_>) -> Result<Vec<PreferenceStatement>> {
    let id = text_of(single(node, "STATEMENT-ID")?)?;
    let target = text_of(single(node, "VARIABLE")?)?;
    let mut condition = Vec::new();
    let mut omega = Vec::new();
    let mut preferences = Vec::new();
    for child in elements(node) {
        match child.tag_name().name() {
            "STATEMENT-ID" | "VARIABLE" => {}
            "CONDITION" => {
                let text = text_of(child)?;
                let malformed = || Error::MalformedCondition {
                    statement: id.clone(),
                    text: text.clone(),
                };
                let pairs = parse_assignments(&text).map_err(|_| malformed())?;
                if pairs.is_empty() {
                    return Err(malformed());
                }
                condition.extend(pairs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())));
            }
            "PREFERENCE" => {
                let text = text_of(child)?;
                let pair = text
                    .split_once(':')
                    .map(|(b, w)| (b.trim().to_string(), w.trim().to_string()))
                    .filter(|(b, w)| !b.is_empty() && !w.is_empty() && !w.contains(':'));
                match pair {
                    Some(pair) => preferences.push(pair),
                    None => {
                        return Err(Error::MalformedPreference {
                            statement: id.clone(),
                            text,
                        })
                    }
                }
            }
            "REGARDLESS-OF" => omega.push(text_of(child)?),
            _ => return Err(unexpected(node, child)),
        }
    }
    if preferences.is_empty() {
        return Err(Error::structure("PREFERENCE-STATEMENT", format!("statement {id} has no <PREFERENCE>")));
    }
    let chained = preferences.len() > 1;
    Ok(preferences
        .into_iter()
        .enumerate()
        .map(|(k, (better, worse))| {
            let sid = if chained { format!("{id}#{}", k + 1) } else { id.clone() };
            PreferenceStatement {
                id: sid,
                target: target.clone(),
                better,
                worse,
                condition: condition.clone(),
                less_important: omega.clone(),
            }
        })
        .collect())
}

/// XML text with the five predefined entities escaped.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

const HEADER: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

/// Serializes a specification; chained preferences come out as one
/// statement per link with the suffixed ids.
pub fn emit_spec(spec: &PreferenceSpec) -> String {
    let mut out = String::from(HEADER);
    let _ = writeln!(out, "<{SPEC_ROOT} NAME=\"{}\">", escape(&spec.name));
    for var in &spec.variables {
        out.push_str("  <VARIABLE>\n");
        let _ = writeln!(out, "    <NAME>{}</NAME>", escape(&var.name));
        for value in &var.domain {
            let _ = writeln!(out, "    <DOMAIN-VALUE>{}</DOMAIN-VALUE>", escape(value));
        }
        out.push_str("  </VARIABLE>\n");
    }
    for st in &spec.statements {
        out.push_str("  <PREFERENCE-STATEMENT>\n");
        let _ = writeln!(out, "    <STATEMENT-ID>{}</STATEMENT-ID>", escape(&st.id));
        let _ = writeln!(out, "    <VARIABLE>{}</VARIABLE>", escape(&st.target));
        for (var, value) in &st.condition {
            let _ = writeln!(out, "    <CONDITION>{}={}</CONDITION>", escape(var), escape(value));
        }
        let _ = writeln!(
            out,
            "    <PREFERENCE>{}:{}</PREFERENCE>",
            escape(&st.better),
            escape(&st.worse)
        );
        for var in &st.less_important {
            let _ = writeln!(out, "    <REGARDLESS-OF>{}</REGARDLESS-OF>", escape(var));
        }
        out.push_str("  </PREFERENCE-STATEMENT>\n");
    }
    let _ = writeln!(out, "</{SPEC_ROOT}>");
    out
}

/// A query as written, before its outcomes are checked against a specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryDocument {
    pub kind: QueryForm,
    /// `SPEC-FILE` entries in order, as written.
    pub spec_files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryForm {
    Dominance { better: String, worse: String },
    Consistency,
    Subsumption,
    Equivalence,
}

impl QueryForm {
    pub fn arity(&self) -> usize {
        match self {
            QueryForm::Dominance { .. } | QueryForm::Consistency => 1,
            QueryForm::Subsumption | QueryForm::Equivalence => 2,
        }
    }
}

pub fn parse_query(text: &str) -> Result<QueryDocument> {
    let doc = parse_document(text)?;
    let root = expect_root(&doc, QUERY_ROOT)?;
    let tag = root
        .attribute("KIND")
        .ok_or_else(|| Error::structure(QUERY_ROOT, "missing KIND attribute"))?;
    let mut spec_files = Vec::new();
    let mut better = None;
    let mut worse = None;
    for node in elements(root) {
        match node.tag_name().name() {
            "SPEC-FILE" => spec_files.push(text_of(node)?),
            "BETTER-OUTCOME" if better.is_none() => better = Some(text_of(node)?),
            "WORSE-OUTCOME" if worse.is_none() => worse = Some(text_of(node)?),
            _ => return Err(unexpected(root, node)),
        }
    }
    let kind = match tag.trim() {
        "DOMINANCE" => QueryForm::Dominance {
            better: better.ok_or_else(|| Error::structure(QUERY_ROOT, "missing <BETTER-OUTCOME>"))?,
            worse: worse.ok_or_else(|| Error::structure(QUERY_ROOT, "missing <WORSE-OUTCOME>"))?,
        },
        other => {
            if better.is_some() || worse.is_some() {
                return Err(Error::structure(
                    QUERY_ROOT,
                    format!("{other} queries take no outcomes"),
                ));
            }
            match other {
                "CONSISTENCY" => QueryForm::Consistency,
                "SUBSUMPTION" => QueryForm::Subsumption,
                "EQUIVALENCE" => QueryForm::Equivalence,
                _ => return Err(Error::UnknownQueryKind(other.to_string())),
            }
        }
    };
    if spec_files.len() > kind.arity() {
        return Err(Error::structure(
            QUERY_ROOT,
            format!("{tag} takes {} <SPEC-FILE> element(s), found {}", kind.arity(), spec_files.len()),
        ));
    }
    Ok(QueryDocument { kind, spec_files })
}

impl QueryDocument {
    /// Checks the outcomes against `spec` (the first specification).
    pub fn resolve(&self, spec: &PreferenceSpec) -> Result<Query> {
        let kind = match &self.kind {
            QueryForm::Dominance { better, worse } => {
                let better = spec.parse_outcome(better)?;
                let worse = spec.parse_outcome(worse)?;
                QueryKind::Dominance { better, worse }
            }
            QueryForm::Consistency => QueryKind::Consistency,
            QueryForm::Subsumption => QueryKind::Subsumption,
            QueryForm::Equivalence => QueryKind::Equivalence,
        };
        Ok(Query {
            kind,
            spec_refs: self.spec_files.clone(),
        })
    }
}

pub fn emit_query(query: &Query, spec: &PreferenceSpec) -> String {
    let mut out = String::from(HEADER);
    let _ = writeln!(out, "<{QUERY_ROOT} KIND=\"{}\">", query.kind.tag());
    for file in &query.spec_refs {
        let _ = writeln!(out, "  <SPEC-FILE>{}</SPEC-FILE>", escape(file));
    }
    if let QueryKind::Dominance { better, worse } = &query.kind {
        let _ = writeln!(out, "  <BETTER-OUTCOME>{}</BETTER-OUTCOME>", escape(&spec.format_outcome(better)));
        let _ = writeln!(out, "  <WORSE-OUTCOME>{}</WORSE-OUTCOME>", escape(&spec.format_outcome(worse)));
    }
    let _ = writeln!(out, "</{QUERY_ROOT}>");
    out
}

/// An independent answer to the same query, reported next to the main one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub engine: String,
    pub answer: bool,
}

/// Renders a result. Outcomes are written over the variables of `spec`:
///
/// ```xml
/// <RESULT KIND="DOMINANCE" ANSWER="true" ENGINE="SYMBOLIC" ELAPSED-MS="0.412">
///   <BETTER-OUTCOME>a=0,b=1,c=0</BETTER-OUTCOME>
///   <WORSE-OUTCOME>a=1,b=0,c=1</WORSE-OUTCOME>
///   <PROOF KIND="DOMINANCE_PATH">
///     <OUTCOME>a=1,b=0,c=1</OUTCOME>
///     <OUTCOME STATEMENT-ID="s1">a=0,b=0,c=1</OUTCOME>
///     ...
///   </PROOF>
///   <CHECKED-BY ENGINE="EXPLICIT" ANSWER="true"/>
/// </RESULT>
/// ```
///
/// Paths and cycles list the start outcome, then every step's target with
/// the licensing statement. A counter-flip is a `COUNTER-FLIP` element
/// holding the two outcomes of the offending flip.
pub fn emit_result(
    result: &QueryResult,
    query: &Query,
    spec: &PreferenceSpec,
    checks: &[CrossCheck],
) -> String {
    let mut out = String::from(HEADER);
    let _ = writeln!(
        out,
        "<{RESULT_ROOT} KIND=\"{}\" ANSWER=\"{}\" ENGINE=\"{}\" ELAPSED-MS=\"{:.3}\">",
        query.kind.tag(),
        result.answer,
        result.engine,
        result.elapsed.as_secs_f64() * 1000.0
    );
    for file in &query.spec_refs {
        let _ = writeln!(out, "  <SPEC-FILE>{}</SPEC-FILE>", escape(file));
    }
    let fmt = |o: &Outcome| escape(&spec.format_outcome(o));
    if let QueryKind::Dominance { better, worse } = &query.kind {
        let _ = writeln!(out, "  <BETTER-OUTCOME>{}</BETTER-OUTCOME>", fmt(better));
        let _ = writeln!(out, "  <WORSE-OUTCOME>{}</WORSE-OUTCOME>", fmt(worse));
    }
    if let Some(proof) = &result.proof {
        let _ = write!(out, "  <PROOF KIND=\"{}\"", proof.kind.tag());
        if let Some(d) = proof.direction {
            let _ = write!(out, " DIRECTION=\"{}\"", d.tag());
        }
        out.push_str(">\n");
        match proof.kind {
            ProofKind::NonSubsumptionFlip => {
                for step in &proof.steps {
                    let _ = writeln!(out, "    <COUNTER-FLIP STATEMENT-ID=\"{}\">", escape(&step.statement));
                    let _ = writeln!(out, "      <OUTCOME>{}</OUTCOME>", fmt(&step.from));
                    let _ = writeln!(out, "      <OUTCOME>{}</OUTCOME>", fmt(&step.to));
                    out.push_str("    </COUNTER-FLIP>\n");
                }
            }
            ProofKind::DominancePath | ProofKind::InconsistencyCycle => {
                if let Some(first) = proof.steps.first() {
                    let _ = writeln!(out, "    <OUTCOME>{}</OUTCOME>", fmt(&first.from));
                }
                for step in &proof.steps {
                    let _ = writeln!(
                        out,
                        "    <OUTCOME STATEMENT-ID=\"{}\">{}</OUTCOME>",
                        escape(&step.statement),
                        fmt(&step.to)
                    );
                }
            }
        }
        out.push_str("  </PROOF>\n");
    }
    for check in checks {
        let _ = writeln!(
            out,
            "  <CHECKED-BY ENGINE=\"{}\" ANSWER=\"{}\"/>",
            escape(&check.engine),
            check.answer
        );
    }
    let _ = writeln!(out, "</{RESULT_ROOT}>");
    out
}

/// The parts of a result document needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultDocument {
    pub kind: String,
    pub answer: bool,
    pub engine: String,
    pub proof: Option<Proof>,
    pub checks: Vec<CrossCheck>,
}

fn attribute<'a>(node: Node<'a, '_>, name: &str) -> Result<&'a str> {
    node.attribute(name).ok_or_else(|| {
        Error::structure(node.tag_name().name(), format!("missing {name} attribute"))
    })
}

fn parse_bool(node: Node<'_, '_>, name: &str) -> Result<bool> {
    match attribute(node, name)? {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::structure(
            node.tag_name().name(),
            format!("{name} must be true or false, found `{other}`"),
        )),
    }
}

/// Reads back a document written by [`emit_result`], outcomes over `spec`.
pub fn parse_result(text: &str, spec: &PreferenceSpec) -> Result<ResultDocument> {
    let doc = parse_document(text)?;
    let root = expect_root(&doc, RESULT_ROOT)?;
    let mut proof = None;
    let mut checks = Vec::new();
    for node in elements(root) {
        match node.tag_name().name() {
            "SPEC-FILE" | "BETTER-OUTCOME" | "WORSE-OUTCOME" => {}
            "PROOF" => proof = Some(parse_proof(node, spec)?),
            "CHECKED-BY" => checks.push(CrossCheck {
                engine: attribute(node, "ENGINE")?.to_string(),
                answer: parse_bool(node, "ANSWER")?,
            }),
            _ => return Err(unexpected(root, node)),
        }
    }
    Ok(ResultDocument {
        kind: attribute(root, "KIND")?.to_string(),
        answer: parse_bool(root, "ANSWER")?,
        engine: attribute(root, "ENGINE")?.to_string(),
        proof,
        checks,
    })
}

fn parse_proof(node: Node<'_, '_>, spec: &PreferenceSpec) -> Result<Proof> {
    let tag = attribute(node, "KIND")?;
    let kind = ProofKind::from_tag(tag)
        .ok_or_else(|| Error::structure("PROOF", format!("unknown proof kind `{tag}`")))?;
    let direction = match node.attribute("DIRECTION") {
        None => None,
        Some(d) => Some(
            ProofDirection::from_tag(d)
                .ok_or_else(|| Error::structure("PROOF", format!("unknown direction `{d}`")))?,
        ),
    };
    let mut steps = Vec::new();
    match kind {
        ProofKind::NonSubsumptionFlip => {
            for flip in elements(node) {
                if flip.tag_name().name() != "COUNTER-FLIP" {
                    return Err(unexpected(node, flip));
                }
                let outcomes = elements(flip)
                    .map(|o| {
                        if o.tag_name().name() != "OUTCOME" {
                            return Err(unexpected(flip, o));
                        }
                        Ok(spec.parse_outcome(&text_of(o)?)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let [from, to]: [Outcome; 2] = outcomes
                    .try_into()
                    .map_err(|_| Error::structure("COUNTER-FLIP", "expected two <OUTCOME> elements"))?;
                steps.push(ProofStep {
                    from,
                    to,
                    statement: attribute(flip, "STATEMENT-ID")?.to_string(),
                });
            }
        }
        ProofKind::DominancePath | ProofKind::InconsistencyCycle => {
            let mut previous: Option<Outcome> = None;
            for o in elements(node) {
                if o.tag_name().name() != "OUTCOME" {
                    return Err(unexpected(node, o));
                }
                let outcome = spec.parse_outcome(&text_of(o)?)?;
                match previous.replace(outcome.clone()) {
                    None => {}
                    Some(from) => steps.push(ProofStep {
                        from,
                        to: outcome,
                        statement: attribute(o, "STATEMENT-ID")?.to_string(),
                    }),
                }
            }
        }
    }
    Ok(Proof {
        kind,
        steps,
        direction,
    })
}
