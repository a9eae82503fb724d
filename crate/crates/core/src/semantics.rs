//! The improving-flip relation.
//!
//! A statement `cond : x=v > x=v' [omega]` licenses a flip from `worse` to
//! `better` exactly when
//!
//! 1. `worse(x) = v'` and `better(x) = v`,
//! 2. both outcomes agree with `cond` on every conditioned variable, and
//! 3. the outcomes agree on every variable outside `{x} ∪ cond ∪ omega`.
//!
//! Variables in `omega` are unconstrained, including keeping their value.
//! Every other module derives its notion of an edge from this one.

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Compiled, CompiledStatement, Outcome, PreferenceSpec};
use crate::Result;

/// One edge of the induced preference graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flip {
    /// The less preferred outcome.
    pub from: Outcome,
    /// The more preferred outcome.
    pub to: Outcome,
    pub statement: String,
}

/// Ids of every statement that licenses the flip `worse -> better`, in declaration order.
pub fn is_improving_flip(
    spec: &PreferenceSpec,
    worse: &Outcome,
    better: &Outcome,
) -> Result<Vec<String>> {
    let compiled = spec.compile()?;
    spec.check_outcome(worse)?;
    spec.check_outcome(better)?;
    Ok(licensing(&compiled, worse.values(), better.values())
        .map(|i| spec.statements[i].id.clone())
        .collect())
}

/// All improving flips leaving `worse`.
pub fn improving_successors(spec: &PreferenceSpec, worse: &Outcome) -> Result<Vec<Flip>> {
    let compiled = spec.compile()?;
    spec.check_outcome(worse)?;
    let mut flips = Vec::new();
    for_each_successor(&compiled, worse.values(), |stmt, to| {
        flips.push(Flip {
            from: worse.clone(),
            to: Outcome::from_indices(to.to_vec()),
            statement: spec.statements[stmt].id.clone(),
        });
    });
    Ok(flips)
}

pub(crate) fn licenses(st: &CompiledStatement, from: &[u32], to: &[u32]) -> bool {
    if to[st.target] != st.better || !st.enabled_at(from) {
        return false;
    }
    let mut cond = st.condition.iter().peekable();
    for (i, (&f, &t)) in from.iter().zip(to).enumerate() {
        if i == st.target {
            continue;
        }
        if let Some(&&(var, value)) = cond.peek() {
            if var == i {
                cond.next();
                if t != value {
                    return false;
                }
                continue;
            }
        }
        if f != t && st.less_important.binary_search(&i).is_err() {
            return false;
        }
    }
    true
}

pub(crate) fn licensing<'a>(
    compiled: &'a Compiled,
    from: &'a [u32],
    to: &'a [u32],
) -> impl Iterator<Item = usize> + 'a {
    compiled
        .statements
        .iter()
        .enumerate()
        .filter(move |(_, st)| licenses(st, from, to))
        .map(|(i, _)| i)
}

/// Calls `f(statement_index, successor)` for every flip out of `from`.
///
/// For a statement with less important variables one successor is produced
/// per joint assignment of those variables, current values included.
pub(crate) fn for_each_successor(
    compiled: &Compiled,
    from: &[u32],
    mut f: impl FnMut(usize, &[u32]),
) {
    let mut next = from.to_vec();
    for (i, st) in compiled.statements.iter().enumerate() {
        if !st.enabled_at(from) {
            continue;
        }
        next.copy_from_slice(from);
        next[st.target] = st.better;
        for &w in &st.less_important {
            next[w] = 0;
        }
        // Odometer over the less important variables.
        loop {
            f(i, &next);
            let mut carry = true;
            for &w in st.less_important.iter().rev() {
                next[w] += 1;
                if next[w] < compiled.radices[w] {
                    carry = false;
                    break;
                }
                next[w] = 0;
            }
            if carry {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::Error;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn o(v: &[u32]) -> Outcome {
        Outcome::from_indices(v.to_vec())
    }

    /// Direct transcription of the three flip conditions, independent of `licenses`.
    fn brute_licenses(spec: &PreferenceSpec, from: &Outcome, to: &Outcome) -> BTreeSet<String> {
        let mut ids = BTreeSet::new();
        for st in &spec.statements {
            let idx = |n: &str| spec.variable_index(n).unwrap();
            let val = |n: &str, v: &str| spec.variables[idx(n)].value_index(v).unwrap();
            let x = idx(&st.target);
            let c1 = to.values()[x] == val(&st.target, &st.better)
                && from.values()[x] == val(&st.target, &st.worse);
            let c2 = st.condition.iter().all(|(n, v)| {
                to.values()[idx(n)] == val(n, v) && from.values()[idx(n)] == val(n, v)
            });
            let c3 = (0..spec.variables.len())
                .filter(|&k| k != x)
                .filter(|&k| !st.condition.iter().any(|(n, _)| idx(n) == k))
                .filter(|&k| !st.less_important.iter().any(|n| idx(n) == k))
                .all(|k| from.values()[k] == to.values()[k]);
            if c1 && c2 && c3 {
                ids.insert(st.id.clone());
            }
        }
        ids
    }

    #[test]
    fn single_flip_examples() {
        let p1 = p1();
        assert_eq!(is_improving_flip(&p1, &o(&[1, 1, 1]), &o(&[0, 1, 1])).unwrap(), vec!["s1"]);
        assert!(is_improving_flip(&p1, &o(&[1, 1, 1]), &o(&[0, 0, 1])).unwrap().is_empty());
        let p3 = p3();
        assert_eq!(is_improving_flip(&p3, &o(&[1, 0, 0]), &o(&[0, 1, 0])).unwrap(), vec!["s1"]);
    }

    #[test]
    fn outcome_over_wrong_variables() {
        assert!(matches!(
            is_improving_flip(&p1(), &o(&[1, 1]), &o(&[0, 1, 1])),
            Err(Error::OutcomeMismatch(_))
        ));
        assert!(matches!(
            improving_successors(&p1(), &o(&[1, 1, 5])),
            Err(Error::OutcomeMismatch(_))
        ));
    }

    fn succ(spec: &PreferenceSpec, from: &[u32]) -> BTreeSet<(Vec<u32>, String)> {
        improving_successors(spec, &o(from))
            .unwrap()
            .into_iter()
            .map(|f| (f.to.values().to_vec(), f.statement))
            .collect()
    }

    fn set(items: &[(&[u32], &str)]) -> BTreeSet<(Vec<u32>, String)> {
        items.iter().map(|(v, s)| (v.to_vec(), String::from(*s))).collect()
    }

    #[test]
    fn successor_examples() {
        // Expected sets come from brute force over all 8 targets (checked below).
        let p1 = p1();
        assert_eq!(succ(&p1, &[1, 1, 1]), set(&[(&[0, 1, 1], "s1")]));
        assert!(succ(&p1, &[0, 1, 0]).is_empty());
        assert_eq!(succ(&p1, &[1, 0, 1]), set(&[(&[0, 0, 1], "s1"), (&[1, 0, 0], "s3")]));
        let p3 = p3();
        assert_eq!(
            succ(&p3, &[1, 0, 0]),
            set(&[(&[0, 0, 0], "s1"), (&[0, 1, 0], "s1"), (&[1, 1, 0], "s_b")])
        );
    }

    #[test]
    fn successors_match_brute_force_on_fixtures() {
        for spec in [p1(), p3(), d2(), ternary()] {
            for from in spec.outcomes() {
                let mut expected = BTreeSet::new();
                for to in spec.outcomes() {
                    for id in brute_licenses(&spec, &from, &to) {
                        expected.insert((to.values().to_vec(), id));
                    }
                }
                assert_eq!(succ(&spec, from.values()), expected, "{}", spec.name);
            }
        }
    }

    mod props {
        use super::*;
        use crate::model::{PreferenceStatement, Variable};
        use proptest::prelude::*;

        fn arb_spec() -> impl Strategy<Value = PreferenceSpec> {
            let sizes = proptest::collection::vec(2u32..4, 2..5);
            sizes.prop_flat_map(|sizes| {
                let n = sizes.len();
                let stmt = (0..n, any::<u64>());
                (Just(sizes), proptest::collection::vec(stmt, 0..6))
            })
            .prop_map(|(sizes, stmts)| {
                let mut spec = PreferenceSpec::new("rand");
                for (i, &s) in sizes.iter().enumerate() {
                    spec = spec.with_variable(Variable::new(
                        alloc::format!("v{i}"),
                        (0..s).map(|k| alloc::format!("{k}")),
                    ));
                }
                for (k, (target, bits)) in stmts.into_iter().enumerate() {
                    let size = sizes[target] as u64;
                    let better = bits % size;
                    let worse = (better + 1 + (bits >> 8) % (size - 1)) % size;
                    let mut st = PreferenceStatement::new(
                        alloc::format!("p{k}"),
                        alloc::format!("v{target}"),
                        alloc::format!("{better}"),
                        alloc::format!("{worse}"),
                    );
                    for (j, &size_j) in sizes.iter().enumerate() {
                        if j == target {
                            continue;
                        }
                        match (bits >> (16 + 3 * j)) % 4 {
                            0 => {
                                let v = (bits >> (40 + j)) % size_j as u64;
                                st = st.when(alloc::format!("v{j}"), alloc::format!("{v}"));
                            }
                            1 => st = st.regardless_of(alloc::format!("v{j}")),
                            _ => {}
                        }
                    }
                    spec = spec.with_statement(st);
                }
                spec
            })
        }

        proptest! {
            #[test]
            fn successors_sound_and_complete(spec in arb_spec()) {
                let compiled = spec.compile().unwrap();
                for from in spec.outcomes() {
                    let succs: BTreeSet<Vec<u32>> = improving_successors(&spec, &from).unwrap()
                        .into_iter().map(|f| f.to.values().to_vec()).collect();
                    let mut bound = 0usize;
                    for st in &compiled.statements {
                        bound += st.less_important.iter().map(|&w| compiled.radices[w] as usize).product::<usize>();
                    }
                    prop_assert!(succs.len() <= bound);
                    for to in spec.outcomes() {
                        let licensed = is_improving_flip(&spec, &from, &to).unwrap();
                        prop_assert_eq!(succs.contains(to.values()), !licensed.is_empty());
                        let expected: Vec<String> = brute_licenses(&spec, &from, &to).into_iter().collect();
                        let mut got = licensed.clone();
                        got.sort();
                        prop_assert_eq!(got, expected);
                    }
                }
            }

            #[test]
            fn flips_only_touch_allowed_variables(spec in arb_spec()) {
                for from in spec.outcomes() {
                    for flip in improving_successors(&spec, &from).unwrap() {
                        prop_assert_ne!(&flip.from, &flip.to);
                        let st = spec.statement(&flip.statement).unwrap();
                        let x = spec.variable_index(&st.target).unwrap();
                        let var = &spec.variables[x];
                        prop_assert_eq!(flip.to.values()[x], var.value_index(&st.better).unwrap());
                        prop_assert_eq!(flip.from.values()[x], var.value_index(&st.worse).unwrap());
                        let changed: Vec<usize> = (0..spec.variables.len())
                            .filter(|&k| flip.from.values()[k] != flip.to.values()[k]).collect();
                        for k in &changed {
                            let name = &spec.variables[*k].name;
                            prop_assert!(*name == st.target || st.less_important.contains(name));
                        }
                        if st.less_important.is_empty() {
                            prop_assert_eq!(changed.len(), 1);
                        }
                    }
                }
            }
        }
    }
}
