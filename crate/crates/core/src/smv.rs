//! SMV model text and CTL properties for replaying queries in NuSMV.
//!
//! The model has one `main` module. Preference variables are state
//! variables; `chx` input variables choose which variables may change in a
//! step; frozen `x_0` copies remember the initial state for `start`; and `g`
//! is set to 1 exactly in states entered through a statement's guard.
//!
//! A statement `cond : x=v > x=v' [omega]` becomes the guard
//! `x=v' & cond & chx=1 & chy=1 (y in omega) & chz=0 (others)`. The guard
//! appears in `next(x)` with result `v` and in `next(y)` for every `y` in
//! omega with the whole domain of `y` as a nondeterministic result.
//!
//! NuSMV picks the first matching branch of a `case`. Two guards in the same
//! `case` with the same change pattern and compatible conditions but
//! different results can therefore hide edges; such pairs are listed in the
//! document notes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::model::{Compiled, Outcome, PreferenceSpec, QueryKind};
use crate::{Error, Result};

/// NuSMV reserved words, plus the names the encoding itself introduces.
const RESERVED: &[&str] = &[
    "A", "ABF", "ABG", "AF", "AG", "ASSIGN", "AX", "BU", "COMPASSION", "COMPUTE", "COMPWFF",
    "CONSTANTS", "CONSTARRAY", "CTLSPEC", "CTLWFF", "DEFINE", "E", "EBF", "EBG", "EF", "EG",
    "EX", "F", "FAIRNESS", "FALSE", "FROZENVAR", "FUN", "G", "H", "IN", "INIT", "INVAR",
    "INVARSPEC", "IVAR", "JUSTICE", "LTLSPEC", "LTLWFF", "MAX", "MDEFINE", "MIN", "MIRROR",
    "MODULE", "NAME", "O", "PRED", "PREDICATES", "PSLSPEC", "S", "SIMPWFF", "SPEC", "T",
    "TRANS", "TRUE", "U", "V", "VAR", "X", "Y", "Z", "abs", "array", "bool", "boolean", "case",
    "count", "esac", "extend", "init", "integer", "max", "min", "mod", "next", "of", "process",
    "real", "resize", "self", "signed", "sizeof", "swconst", "toint", "typeof", "union",
    "unsigned", "uwconst", "word", "word1", "xnor", "xor", "g", "g1", "g2", "start",
];

/// An emitted model with its properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmvDocument {
    pub model: String,
    /// Complete `SPEC ...` lines.
    pub specs: Vec<String>,
    /// Preference variable name and the SMV identifier standing for it.
    pub names: Vec<(String, String)>,
    /// Renamings and overlapping guards, rendered as leading comments.
    pub notes: Vec<String>,
}

impl SmvDocument {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            let _ = writeln!(out, "-- {note}");
        }
        out.push_str(&self.model);
        for spec in &self.specs {
            out.push_str(spec);
            out.push('\n');
        }
        out
    }
}

/// SMV identifiers for the variables of `spec`, declaration order. A name
/// that is reserved or collides with another variable's `ch`/`_0` companion
/// gets `_v` appended until it is free.
pub fn smv_names(spec: &PreferenceSpec) -> Vec<String> {
    let mut used: BTreeSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
    let mut names = Vec::with_capacity(spec.variables.len());
    for var in &spec.variables {
        let mut candidate = var.name.clone();
        loop {
            let derived = [candidate.clone(), format!("ch{candidate}"), format!("{candidate}_0")];
            if derived.iter().all(|d| !used.contains(d)) {
                used.extend(derived);
                break;
            }
            candidate.push_str("_v");
        }
        names.push(candidate);
    }
    names
}

struct Guard {
    statement: String,
    /// Fixed values, `(variable, value)`: the target's worse value first,
    /// then the condition in declaration order.
    state: Vec<(usize, u32)>,
    changes: Vec<bool>,
    target: usize,
    result: u32,
    free: Vec<usize>,
}

fn guards(spec: &PreferenceSpec, compiled: &Compiled, reversed: bool) -> Vec<Guard> {
    let n = spec.variables.len();
    compiled
        .statements
        .iter()
        .zip(&spec.statements)
        .map(|(st, raw)| {
            let (from, to) = if reversed { (st.better, st.worse) } else { (st.worse, st.better) };
            let mut state = alloc::vec![(st.target, from)];
            // condition in declaration order, as written in the statement
            for (name, _) in &raw.condition {
                let v = spec.variable_index(name).expect("validated");
                let value = st.condition.iter().find(|c| c.0 == v).expect("compiled").1;
                state.push((v, value));
            }
            let mut changes = alloc::vec![false; n];
            changes[st.target] = true;
            for &w in &st.less_important {
                changes[w] = true;
            }
            Guard {
                statement: raw.id.clone(),
                state,
                changes,
                target: st.target,
                result: to,
                free: st.less_important.clone(),
            }
        })
        .collect()
}

struct Emitter<'a> {
    spec: &'a PreferenceSpec,
    names: Vec<String>,
}

impl Emitter<'_> {
    fn value(&self, var: usize, value: u32) -> &str {
        &self.spec.variables[var].domain[value as usize]
    }

    fn domain(&self, var: usize) -> String {
        format!("{{{}}}", self.spec.variables[var].domain.join(","))
    }

    fn guard_text(&self, g: &Guard) -> String {
        let mut parts: Vec<String> = g
            .state
            .iter()
            .map(|&(v, val)| format!("{}={}", self.names[v], self.value(v, val)))
            .collect();
        for (v, &c) in g.changes.iter().enumerate() {
            parts.push(format!("ch{}={}", self.names[v], u8::from(c)));
        }
        parts.join(" & ")
    }

    fn header(&self, out: &mut String, markers: &[&str]) {
        out.push_str("MODULE main\nVAR\n");
        for (v, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "  {name} : {};", self.domain(v));
        }
        for m in markers {
            let _ = writeln!(out, "  {m} : {{0,1}};");
        }
        out.push_str("FROZENVAR\n");
        for (v, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "  {name}_0 : {};", self.domain(v));
        }
        out.push_str("IVAR\n");
        for name in &self.names {
            let _ = writeln!(out, "  ch{name} : {{0,1}};");
        }
        let start: Vec<String> = self.names.iter().map(|n| format!("{n}={n}_0")).collect();
        let _ = writeln!(out, "DEFINE\n  start := {};", start.join(" & "));
        out.push_str("INIT start=TRUE;\n");
    }

    fn assigns(&self, out: &mut String, groups: &[(&str, &[Guard])]) {
        out.push_str("ASSIGN\n");
        for (v, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, " next({name}) := case");
            for (_, gs) in groups {
                for g in gs.iter() {
                    if g.target == v {
                        let _ = writeln!(out, "  {} : {};", self.guard_text(g), self.value(v, g.result));
                    } else if g.free.contains(&v) {
                        let _ = writeln!(out, "  {} : {};", self.guard_text(g), self.domain(v));
                    }
                }
            }
            let _ = writeln!(out, "  TRUE : {name};\n esac;");
        }
        for (marker, gs) in groups {
            let _ = writeln!(out, " next({marker}) := case");
            for g in gs.iter() {
                let _ = writeln!(out, "  {} : 1;", self.guard_text(g));
            }
            out.push_str("  TRUE: 0;\n esac;\n");
        }
    }

    /// Pairs of guards that NuSMV's first-match rule can disambiguate
    /// differently from the flip semantics.
    fn overlaps(&self, all: &[&Guard]) -> Vec<String> {
        let mut notes = Vec::new();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if a.changes != b.changes {
                    continue;
                }
                let compatible = a.state.iter().all(|&(v, x)| {
                    b.state.iter().all(|&(w, y)| v != w || x == y)
                });
                if !compatible {
                    continue;
                }
                for v in 0..self.names.len() {
                    let ra = result_of(a, v);
                    let rb = result_of(b, v);
                    if ra.is_some() && rb.is_some() && ra != rb {
                        notes.push(format!(
                            "guards of {} and {} overlap in next({}); NuSMV applies the first",
                            a.statement, b.statement, self.names[v]
                        ));
                        break;
                    }
                }
            }
        }
        notes
    }

    fn rename_notes(&self) -> Vec<String> {
        self.spec
            .variables
            .iter()
            .zip(&self.names)
            .filter(|(var, n)| var.name != **n)
            .map(|(var, n)| format!("variable {} is named {} here", var.name, n))
            .collect()
    }

    fn names(&self) -> Vec<(String, String)> {
        self.spec
            .variables
            .iter()
            .zip(&self.names)
            .map(|(v, n)| (v.name.clone(), n.clone()))
            .collect()
    }
}

/// `Some(target value)`, `None` for an omega variable or one the guard leaves alone.
fn result_of(g: &Guard, var: usize) -> Option<Option<u32>> {
    if g.target == var {
        Some(Some(g.result))
    } else if g.free.contains(&var) {
        Some(None)
    } else {
        None
    }
}

/// The model of one specification.
pub fn emit_smv(spec: &PreferenceSpec) -> Result<SmvDocument> {
    let compiled = spec.compile()?;
    let e = Emitter {
        spec,
        names: smv_names(spec),
    };
    let gs = guards(spec, &compiled, false);
    let mut model = String::new();
    e.header(&mut model, &["g"]);
    e.assigns(&mut model, &[("g", &gs)]);
    let mut notes = e.rename_notes();
    notes.extend(e.overlaps(&gs.iter().collect::<Vec<_>>()));
    Ok(SmvDocument {
        model,
        specs: Vec::new(),
        names: e.names(),
        notes,
    })
}

/// The combined model: flips of `p1` set `g1`, reversed flips of `p2` set `g2`.
pub fn emit_smv_combined(p1: &PreferenceSpec, p2: &PreferenceSpec) -> Result<SmvDocument> {
    if !p1.same_variables(p2) {
        return Err(Error::VariableMismatch);
    }
    let c1 = p1.compile()?;
    let c2 = p2.compile()?;
    let e = Emitter {
        spec: p1,
        names: smv_names(p1),
    };
    let forward = guards(p1, &c1, false);
    let backward = guards(p2, &c2, true);
    let mut model = String::new();
    e.header(&mut model, &["g1", "g2"]);
    e.assigns(&mut model, &[("g1", &forward), ("g2", &backward)]);
    let mut notes = e.rename_notes();
    let all: Vec<&Guard> = forward.iter().chain(&backward).collect();
    notes.extend(e.overlaps(&all));
    Ok(SmvDocument {
        model,
        specs: Vec::new(),
        names: e.names(),
        notes,
    })
}

fn outcome_formula(spec: &PreferenceSpec, names: &[String], outcome: &Outcome) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(&spec.variables)
        .zip(outcome.values())
        .map(|((n, var), &v)| format!("{n}={}", var.domain[v as usize]))
        .collect();
    format!("({})", parts.join(" & "))
}

/// CTL properties for `query` over `spec` (the first specification for
/// two-specification queries, which are checked on a combined model).
///
/// Dominance yields the property and its negation; a counterexample to the
/// negation is a flip path.
pub fn emit_ctl(query: &QueryKind, spec: &PreferenceSpec) -> Result<Vec<String>> {
    Ok(match query {
        QueryKind::Dominance { better, worse } => {
            spec.check_outcome(better)?;
            spec.check_outcome(worse)?;
            let names = smv_names(spec);
            let claim = format!(
                "{} -> EF {}",
                outcome_formula(spec, &names, worse),
                outcome_formula(spec, &names, better)
            );
            alloc::vec![format!("SPEC {claim}"), format!("SPEC !({claim})")]
        }
        QueryKind::Consistency => alloc::vec![String::from("SPEC start -> !(EX (g=1 & EF start))")],
        QueryKind::Subsumption | QueryKind::Equivalence => {
            alloc::vec![String::from("SPEC AX (g1=1 -> EX E [ g2=1 U (start & g2=1) ])")]
        }
    })
}
