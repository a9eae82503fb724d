//! The symbolic engine: improving flips as a BDD relation, queries as fixpoints.
//!
//! Each preference variable with domain size `d` gets `ceil(log2 d)` state
//! bits, most significant first, in declaration order. Every bit exists on
//! three rails: current, next, and an auxiliary rail used only when composing
//! relations. Rails are interleaved, so BDD variable `3 * bit + rail`.
//!
//! The relation of a statement `p`, `T_p(cur, next)`, holds exactly for the
//! pairs `(worse, better)` that `p` licenses; `T` is their union. No input
//! variables, frame markers or stuttering steps are needed, since every pair
//! in `T` already is an improving flip.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::bdd::{Bdd, BddManager, VarMap};
use crate::model::{Compiled, Outcome, PreferenceSpec};
use crate::proofs::ProofDirection;
use crate::semantics::Flip;
use crate::{Error, Result};

const CUR: u32 = 0;
const NEXT: u32 = 1;
const AUX: u32 = 2;

fn bdd_var(bit: u32, rail: u32) -> u32 {
    3 * bit + rail
}

fn width(radix: u32) -> u32 {
    32 - (radix - 1).leading_zeros()
}

/// A flip relation split per statement, all in one manager.
#[derive(Debug, Clone)]
pub struct Relation {
    pub parts: Vec<Bdd>,
    pub ids: Vec<String>,
    pub total: Bdd,
}

/// Forward breadth-first layers from one source outcome. `layers[k]` holds
/// the outcomes first reached after `k + 1` flips.
#[derive(Debug, Clone)]
struct Reach {
    source: Outcome,
    layers: Vec<Bdd>,
    seen: Bdd,
    done: bool,
}

#[derive(Debug)]
pub struct SymbolicModel {
    mgr: BddManager,
    spec: PreferenceSpec,
    radices: Vec<u32>,
    widths: Vec<u32>,
    offsets: Vec<u32>,
    cur: Vec<u32>,
    next: Vec<u32>,
    aux: Vec<u32>,
    valid_cur: Bdd,
    valid_next: Bdd,
    next_to_cur: VarMap,
    cur_to_next: VarMap,
    next_to_aux: VarMap,
    cur_to_aux: VarMap,
    relation: Relation,
    reach: Option<Reach>,
}

impl SymbolicModel {
    /// Builds the encoding and the flip relation of `spec`.
    pub fn encode(spec: &PreferenceSpec, node_budget: usize) -> Result<Self> {
        let compiled = spec.compile()?;
        let radices = compiled.radices.clone();
        let widths: Vec<u32> = radices.iter().map(|&r| width(r)).collect();
        let mut offsets = Vec::with_capacity(widths.len());
        let mut bits = 0u32;
        for &w in &widths {
            offsets.push(bits);
            bits += w;
        }
        let rail = |r: u32| (0..bits).map(|b| bdd_var(b, r)).collect::<Vec<_>>();
        let mut mgr = BddManager::with_budget(3 * bits, node_budget);
        let pairs = |from: u32, to: u32| {
            (0..bits)
                .map(|b| (bdd_var(b, from), bdd_var(b, to)))
                .collect::<Vec<_>>()
        };
        let next_to_cur = mgr.var_map(&pairs(NEXT, CUR));
        let cur_to_next = mgr.var_map(&pairs(CUR, NEXT));
        let next_to_aux = mgr.var_map(&pairs(NEXT, AUX));
        let cur_to_aux = mgr.var_map(&pairs(CUR, AUX));
        let placeholder = mgr.constant(false);
        let mut model = SymbolicModel {
            mgr,
            spec: spec.clone(),
            radices,
            widths,
            offsets,
            cur: rail(CUR),
            next: rail(NEXT),
            aux: rail(AUX),
            valid_cur: placeholder,
            valid_next: placeholder,
            next_to_cur,
            cur_to_next,
            next_to_aux,
            cur_to_aux,
            relation: Relation {
                parts: Vec::new(),
                ids: Vec::new(),
                total: placeholder,
            },
            reach: None,
        };
        model.valid_cur = model.valid_on(CUR)?;
        model.valid_next = model.valid_on(NEXT)?;
        model.relation = model.build_relation(spec, &compiled)?;
        Ok(model)
    }

    pub fn manager(&self) -> &BddManager {
        &self.mgr
    }

    pub fn spec(&self) -> &PreferenceSpec {
        &self.spec
    }

    /// State bits per rail.
    pub fn state_bits(&self) -> u32 {
        self.cur.len() as u32
    }

    /// Bit width of each preference variable, declaration order.
    pub fn widths(&self) -> &[u32] {
        &self.widths
    }

    /// Bit patterns of the current rail that decode to outcomes.
    pub fn valid_encoding(&self) -> Bdd {
        self.valid_cur
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    /// Satisfying `(current, next)` pairs of `r`, i.e. distinct edges.
    pub fn pair_count(&self, r: Bdd) -> u128 {
        let mut vars = self.cur.clone();
        vars.extend_from_slice(&self.next);
        self.mgr.sat_count(r, &vars)
    }

    /// Number of outcomes in a state set.
    pub fn state_count(&self, s: Bdd) -> u128 {
        self.mgr.sat_count(s, &self.cur)
    }

    /// Evaluates a current-rail predicate on the first `bits.len()` state
    /// bits, most significant first within each variable.
    pub fn eval_bits(&self, s: Bdd, bits: &[bool]) -> bool {
        self.mgr
            .eval(s, |v| v % 3 == CUR && bits.get((v / 3) as usize).copied().unwrap_or(false))
    }

    fn bit_of(&self, outcome: &[u32], bit: u32) -> bool {
        let var = self.offsets.partition_point(|&o| o <= bit) - 1;
        let shift = self.widths[var] - 1 - (bit - self.offsets[var]);
        outcome[var] >> shift & 1 == 1
    }

    /// Conjunction fixing variable `var` to `value` on `rail`.
    fn value_on(&mut self, var: usize, value: u32, rail: u32) -> Result<Bdd> {
        let w = self.widths[var];
        let mut acc = self.mgr.constant(true);
        for k in (0..w).rev() {
            let bit = bdd_var(self.offsets[var] + k, rail);
            let lit = if value >> (w - 1 - k) & 1 == 1 {
                self.mgr.var(bit)?
            } else {
                self.mgr.not_var(bit)?
            };
            acc = self.mgr.and(lit, acc)?;
        }
        Ok(acc)
    }

    fn valid_var(&mut self, var: usize, rail: u32) -> Result<Bdd> {
        let r = self.radices[var];
        if r == 1 << self.widths[var] {
            return Ok(self.mgr.constant(true));
        }
        let mut acc = self.mgr.constant(false);
        for v in 0..r {
            let lit = self.value_on(var, v, rail)?;
            acc = self.mgr.or(acc, lit)?;
        }
        Ok(acc)
    }

    fn valid_on(&mut self, rail: u32) -> Result<Bdd> {
        let mut acc = self.mgr.constant(true);
        for var in (0..self.radices.len()).rev() {
            let v = self.valid_var(var, rail)?;
            acc = self.mgr.and(v, acc)?;
        }
        Ok(acc)
    }

    /// Bitwise equality of `var` across the current and next rails.
    fn frame(&mut self, var: usize) -> Result<Bdd> {
        let mut acc = self.mgr.constant(true);
        for k in (0..self.widths[var]).rev() {
            let b = self.offsets[var] + k;
            let c = self.mgr.var(bdd_var(b, CUR))?;
            let n = self.mgr.var(bdd_var(b, NEXT))?;
            let eq = self.mgr.iff(c, n)?;
            acc = self.mgr.and(eq, acc)?;
        }
        Ok(acc)
    }

    fn build_relation(&mut self, spec: &PreferenceSpec, compiled: &Compiled) -> Result<Relation> {
        let mut parts = Vec::with_capacity(compiled.statements.len());
        let mut total = self.mgr.constant(false);
        let valid = self.mgr.and(self.valid_cur, self.valid_next)?;
        for st in &compiled.statements {
            let mut t = valid;
            // Bottom-up so each conjunction adds to the top of the diagram.
            for var in (0..self.radices.len()).rev() {
                let c = if var == st.target {
                    let w = self.value_on(var, st.worse, CUR)?;
                    let b = self.value_on(var, st.better, NEXT)?;
                    self.mgr.and(w, b)?
                } else if let Ok(k) = st.condition.binary_search_by_key(&var, |&(v, _)| v) {
                    let value = st.condition[k].1;
                    let c = self.value_on(var, value, CUR)?;
                    let n = self.value_on(var, value, NEXT)?;
                    self.mgr.and(c, n)?
                } else if st.is_free(var) {
                    continue;
                } else {
                    self.frame(var)?
                };
                t = self.mgr.and(c, t)?;
            }
            total = self.mgr.or(total, t)?;
            parts.push(t);
        }
        Ok(Relation {
            parts,
            ids: spec.statements.iter().map(|s| s.id.clone()).collect(),
            total,
        })
    }

    /// The flip relation of another specification over the same variables,
    /// in this model's manager.
    pub fn encode_relation(&mut self, other: &PreferenceSpec) -> Result<Relation> {
        if !self.spec.same_variables(other) {
            return Err(Error::VariableMismatch);
        }
        let compiled = other.compile()?;
        self.build_relation(other, &compiled)
    }

    /// The singleton state set `{outcome}`.
    pub fn state(&mut self, outcome: &Outcome) -> Result<Bdd> {
        self.spec.check_outcome(outcome)?;
        let mut acc = self.mgr.constant(true);
        for var in (0..self.radices.len()).rev() {
            let v = self.value_on(var, outcome.values()[var], CUR)?;
            acc = self.mgr.and(v, acc)?;
        }
        Ok(acc)
    }

    pub fn states(&mut self, outcomes: &[Outcome]) -> Result<Bdd> {
        let mut acc = self.mgr.constant(false);
        for o in outcomes {
            let s = self.state(o)?;
            acc = self.mgr.or(acc, s)?;
        }
        Ok(acc)
    }

    pub fn contains(&self, s: Bdd, outcome: &Outcome) -> bool {
        let values = outcome.values();
        self.mgr
            .eval(s, |v| v % 3 == CUR && self.bit_of(values, v / 3))
    }

    fn decode(&self, cube: &[(u32, bool)], rail: u32) -> Outcome {
        let mut values = vec![0u32; self.radices.len()];
        for &(v, value) in cube {
            if v % 3 != rail || !value {
                continue;
            }
            let bit = v / 3;
            let var = self.offsets.partition_point(|&o| o <= bit) - 1;
            values[var] |= 1 << (self.widths[var] - 1 - (bit - self.offsets[var]));
        }
        Outcome::from_indices(values)
    }

    /// The least outcome of a current-rail set, if any.
    pub fn pick_state(&self, s: Bdd) -> Option<Outcome> {
        self.mgr.pick_cube(s).map(|cube| self.decode(&cube, CUR))
    }

    /// Every outcome in `s`, ascending. Enumerates the whole outcome space.
    pub fn enumerate(&self, s: Bdd) -> Vec<Outcome> {
        self.spec.outcomes().filter(|o| self.contains(s, o)).collect()
    }

    fn post_with(&mut self, r: &[Bdd], s: Bdd) -> Result<Bdd> {
        let mut acc = self.mgr.constant(false);
        let cur = self.cur.clone();
        for &t in r {
            let img = self.mgr.and_exists(t, s, &cur)?;
            acc = self.mgr.or(acc, img)?;
        }
        let renamed = self.mgr.replace(acc, self.next_to_cur)?;
        self.mgr.and(renamed, self.valid_cur)
    }

    fn pre_with(&mut self, r: &[Bdd], s: Bdd) -> Result<Bdd> {
        let shifted = self.mgr.replace(s, self.cur_to_next)?;
        let mut acc = self.mgr.constant(false);
        let next = self.next.clone();
        for &t in r {
            let img = self.mgr.and_exists(t, shifted, &next)?;
            acc = self.mgr.or(acc, img)?;
        }
        self.mgr.and(acc, self.valid_cur)
    }

    /// Outcomes one improving flip above some outcome of `s`.
    pub fn post_image(&mut self, s: Bdd) -> Result<Bdd> {
        let parts = self.relation.parts.clone();
        self.post_with(&parts, s)
    }

    /// Outcomes one improving flip below some outcome of `s`.
    pub fn pre_image(&mut self, s: Bdd) -> Result<Bdd> {
        let parts = self.relation.parts.clone();
        self.pre_with(&parts, s)
    }

    /// Grows the cached forward layers from `source` until `target` is seen
    /// or the fixpoint is reached. Returns the layer holding `target`.
    fn reach_towards(&mut self, source: &Outcome, target: &Outcome) -> Result<Option<usize>> {
        if self.reach.as_ref().is_none_or(|r| r.source != *source) {
            let start = self.state(source)?;
            let first = self.post_image(start)?;
            self.reach = Some(Reach {
                source: source.clone(),
                done: self.mgr.is_false(first),
                layers: vec![first],
                seen: first,
            });
        }
        let mut reach = self.reach.take().expect("initialized above");
        let result: Result<Option<usize>> = (|| {
            loop {
                if self.contains(reach.seen, target) {
                    let k = reach
                        .layers
                        .iter()
                        .position(|&l| self.contains(l, target))
                        .expect("seen is the union of the layers");
                    return Ok(Some(k));
                }
                if reach.done {
                    return Ok(None);
                }
                let frontier = *reach.layers.last().expect("at least one layer");
                let img = self.post_image(frontier)?;
                let fresh = self.mgr.diff(img, reach.seen)?;
                if self.mgr.is_false(fresh) {
                    reach.done = true;
                } else {
                    reach.seen = self.mgr.or(reach.seen, fresh)?;
                    reach.layers.push(fresh);
                }
            }
        })();
        self.reach = Some(reach);
        result
    }

    /// A shortest flip path from `from` to `to` (at least one flip), walking
    /// the forward layers backward. `from == to` yields a cycle.
    pub fn path(&mut self, from: &Outcome, to: &Outcome) -> Result<Option<Vec<Flip>>> {
        let Some(k) = self.reach_towards(from, to)? else {
            return Ok(None);
        };
        let layers = self.reach.as_ref().expect("just computed").layers.clone();
        let mut steps = Vec::with_capacity(k + 1);
        let mut v = to.clone();
        for j in (0..=k).rev() {
            let u = if j == 0 {
                from.clone()
            } else {
                let sv = self.state(&v)?;
                let preds = self.pre_image(sv)?;
                let candidates = self.mgr.and(preds, layers[j - 1])?;
                self.pick_state(candidates).ok_or_else(|| {
                    Error::InternalInconsistency(String::from("frontier walk lost its predecessor"))
                })?
            };
            let statement = self.license(&self.relation, &u, &v).ok_or_else(|| {
                Error::InternalInconsistency(String::from("witness step has no licensing statement"))
            })?;
            steps.push(Flip {
                from: u.clone(),
                to: v,
                statement,
            });
            v = u;
        }
        steps.reverse();
        Ok(Some(steps))
    }

    /// Least id among the statements of `r` whose relation holds on `(u, v)`.
    fn license(&self, r: &Relation, u: &Outcome, v: &Outcome) -> Option<String> {
        let (uv, vv) = (u.values(), v.values());
        r.parts
            .iter()
            .zip(&r.ids)
            .filter(|(&t, _)| {
                self.mgr.eval(t, |x| match x % 3 {
                    CUR => self.bit_of(uv, x / 3),
                    NEXT => self.bit_of(vv, x / 3),
                    _ => false,
                })
            })
            .map(|(_, id)| id)
            .min()
            .cloned()
    }

    /// Does `better` dominate `worse`? Forward least fixpoint from `worse`;
    /// the witness is a shortest flip sequence. Layers are cached per
    /// `worse`, so asking about many `better` outcomes in a row is cheap.
    pub fn dominates(&mut self, better: &Outcome, worse: &Outcome) -> Result<(bool, Option<Vec<Flip>>)> {
        self.spec.check_outcome(better)?;
        self.spec.check_outcome(worse)?;
        if better == worse {
            return Ok((false, None));
        }
        match self.path(worse, better)? {
            Some(p) => Ok((true, Some(p))),
            None => Ok((false, None)),
        }
    }

    /// Dominance decided by the backward fixpoint `Z = pre(better) ∪ pre(Z)`.
    pub fn dominates_backward(&mut self, better: &Outcome, worse: &Outcome) -> Result<bool> {
        self.spec.check_outcome(better)?;
        self.spec.check_outcome(worse)?;
        if better == worse {
            return Ok(false);
        }
        let target = self.state(better)?;
        let mut z = self.pre_image(target)?;
        loop {
            if self.contains(z, worse) {
                return Ok(true);
            }
            let img = self.pre_image(z)?;
            let grown = self.mgr.or(z, img)?;
            if grown == z {
                return Ok(false);
            }
            z = grown;
        }
    }

    /// Greatest fixpoint of `Z = Z ∧ pre(Z)` from all outcomes: the outcomes
    /// with an infinite flip path, empty iff the graph is acyclic.
    pub fn infinite_paths(&mut self) -> Result<(Bdd, usize)> {
        let mut z = self.valid_cur;
        let mut rounds = 0;
        loop {
            rounds += 1;
            let img = self.pre_image(z)?;
            let shrunk = self.mgr.and(z, img)?;
            if shrunk == z {
                return Ok((z, rounds));
            }
            z = shrunk;
        }
    }

    /// Is the flip graph acyclic? Otherwise a shortest cycle through the
    /// first repeated outcome of a walk inside the fixpoint.
    pub fn consistent(&mut self) -> Result<(bool, Option<Vec<Flip>>)> {
        let (z, _) = self.infinite_paths()?;
        let Some(mut x) = self.pick_state(z) else {
            return Ok((true, None));
        };
        // Every outcome of z has a successor in z, so the walk must repeat.
        let mut visited = HashSet::new();
        while visited.insert(x.clone()) {
            let sx = self.state(&x)?;
            let succ = self.post_image(sx)?;
            let inside = self.mgr.and(succ, z)?;
            x = self.pick_state(inside).ok_or_else(|| {
                Error::InternalInconsistency(String::from("fixpoint outcome without a successor"))
            })?;
        }
        let cycle = self.path(&x, &x)?.ok_or_else(|| {
            Error::InternalInconsistency(String::from("repeated outcome is not on a cycle"))
        })?;
        Ok((false, Some(cycle)))
    }

    /// `∃y. r(x, y) ∧ s(y, z)` over (current, next).
    fn compose(&mut self, r: Bdd, s: Bdd) -> Result<Bdd> {
        let left = self.mgr.replace(r, self.next_to_aux)?;
        let right = self.mgr.replace(s, self.cur_to_aux)?;
        let aux = self.aux.clone();
        self.mgr.and_exists(left, right, &aux)
    }

    /// Transitive closure of `r` by iterative squaring, `R := R ∨ R∘R`.
    pub fn closure(&mut self, r: Bdd) -> Result<Bdd> {
        let mut acc = r;
        loop {
            let sq = self.compose(acc, acc)?;
            let grown = self.mgr.or(acc, sq)?;
            if grown == acc {
                return Ok(acc);
            }
            acc = grown;
        }
    }

    /// The least edge of `r1` outside `entailed`, ordered by source then
    /// target outcome, labelled with its least licensing id.
    fn first_outside(&mut self, r1: &Relation, entailed: Bdd) -> Result<Option<Flip>> {
        let missing = self.mgr.diff(r1.total, entailed)?;
        if self.mgr.is_false(missing) {
            return Ok(None);
        }
        let next = self.next.clone();
        let sources = self.mgr.exists(&next, missing)?;
        let from = self.pick_state(sources).expect("nonempty");
        let sf = self.state(&from)?;
        let edges = self.mgr.and(missing, sf)?;
        let cur = self.cur.clone();
        let targets = self.mgr.exists(&cur, edges)?;
        let cube = self.mgr.pick_cube(targets).expect("nonempty");
        let to = self.decode(&cube, NEXT);
        let statement = self.license(r1, &from, &to).ok_or_else(|| {
            Error::InternalInconsistency(String::from("counter-flip has no licensing statement"))
        })?;
        Ok(Some(Flip {
            from,
            to,
            statement,
        }))
    }
}

/// Does `better` dominate `worse`, with a shortest witness when it does?
pub fn dominates_symbolic(
    spec: &PreferenceSpec,
    better: &Outcome,
    worse: &Outcome,
    node_budget: usize,
) -> Result<(bool, Option<Vec<Flip>>)> {
    SymbolicModel::encode(spec, node_budget)?.dominates(better, worse)
}

pub fn consistent_symbolic(spec: &PreferenceSpec, node_budget: usize) -> Result<(bool, Option<Vec<Flip>>)> {
    SymbolicModel::encode(spec, node_budget)?.consistent()
}

/// Is every flip of `p1` inside the transitive closure of `p2`'s relation?
pub fn subsumes_symbolic(
    p1: &PreferenceSpec,
    p2: &PreferenceSpec,
    node_budget: usize,
) -> Result<(bool, Option<Flip>)> {
    if !p1.same_variables(p2) {
        return Err(Error::VariableMismatch);
    }
    let mut model = SymbolicModel::encode(p1, node_budget)?;
    let r2 = model.encode_relation(p2)?;
    let tc2 = model.closure(r2.total)?;
    let r1 = model.relation.clone();
    Ok(match model.first_outside(&r1, tc2)? {
        None => (true, None),
        Some(flip) => (false, Some(flip)),
    })
}

pub fn equivalent_symbolic(
    p1: &PreferenceSpec,
    p2: &PreferenceSpec,
    node_budget: usize,
) -> Result<(bool, Option<(ProofDirection, Flip)>)> {
    if !p1.same_variables(p2) {
        return Err(Error::VariableMismatch);
    }
    let mut model = SymbolicModel::encode(p1, node_budget)?;
    let r1 = model.relation.clone();
    let r2 = model.encode_relation(p2)?;
    let tc2 = model.closure(r2.total)?;
    if let Some(flip) = model.first_outside(&r1, tc2)? {
        return Ok((false, Some((ProofDirection::FirstNotInSecond, flip))));
    }
    let tc1 = model.closure(r1.total)?;
    if let Some(flip) = model.first_outside(&r2, tc1)? {
        return Ok((false, Some((ProofDirection::SecondNotInFirst, flip))));
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdd::DEFAULT_NODE_BUDGET;
    use crate::explicit::{build_ipg, consistent_explicit, dominates_explicit, subsumes_explicit, DEFAULT_NODE_LIMIT};
    use crate::fixtures::*;
    use crate::semantics::improving_successors;

    const B: usize = DEFAULT_NODE_BUDGET;

    fn o(v: &[u32]) -> Outcome {
        Outcome::from_indices(v.to_vec())
    }

    #[test]
    fn transition_counts_match_ipg() {
        for spec in [p1(), p3(), d2(), ternary()] {
            let m = SymbolicModel::encode(&spec, B).unwrap();
            let edges = build_ipg(&spec, DEFAULT_NODE_LIMIT).unwrap().edge_count() as u128;
            assert_eq!(m.pair_count(m.relation().total), edges, "{}", spec.name);
        }
        let m = SymbolicModel::encode(&p1(), B).unwrap();
        assert_eq!(m.state_bits(), 3);
        assert_eq!(m.pair_count(m.relation().total), 8);
    }

    #[test]
    fn no_self_loops() {
        for spec in [p1(), p3(), d2(), ternary()] {
            let mut m = SymbolicModel::encode(&spec, B).unwrap();
            let mut same = m.mgr.constant(true);
            for b in 0..m.state_bits() {
                let c = m.mgr.var(bdd_var(b, CUR)).unwrap();
                let n = m.mgr.var(bdd_var(b, NEXT)).unwrap();
                let eq = m.mgr.iff(c, n).unwrap();
                same = m.mgr.and(same, eq).unwrap();
            }
            let t = m.relation().total;
            let loops = m.mgr.and(t, same).unwrap();
            assert!(m.mgr.is_false(loops));
        }
    }

    #[test]
    fn ternary_encoding() {
        let m = SymbolicModel::encode(&ternary(), B).unwrap();
        assert_eq!(m.widths(), &[1, 2]);
        let valid = m.valid_encoding();
        assert_eq!(m.state_count(valid), 6);
        // x occupies bits 1 and 2; pattern 11 is the unused one
        for a in [false, true] {
            assert!(m.eval_bits(valid, &[a, false, false]));
            assert!(m.eval_bits(valid, &[a, false, true]));
            assert!(m.eval_bits(valid, &[a, true, false]));
            assert!(!m.eval_bits(valid, &[a, true, true]));
        }
    }

    #[test]
    fn images() {
        let mut m = SymbolicModel::encode(&p1(), B).unwrap();
        let s = m.state(&o(&[1, 1, 1])).unwrap();
        let post = m.post_image(s).unwrap();
        assert_eq!(m.enumerate(post), vec![o(&[0, 1, 1])]);
        let s = m.state(&o(&[0, 1, 0])).unwrap();
        let post = m.post_image(s).unwrap();
        assert!(m.mgr.is_false(post));
        let empty = m.mgr.constant(false);
        let post = m.post_image(empty).unwrap();
        let pre = m.pre_image(empty).unwrap();
        assert!(m.mgr.is_false(post) && m.mgr.is_false(pre));
    }

    #[test]
    fn images_match_successors_and_duality() {
        for spec in [p1(), p3(), d2(), ternary()] {
            let mut m = SymbolicModel::encode(&spec, B).unwrap();
            for beta in spec.outcomes() {
                let s = m.state(&beta).unwrap();
                let post = m.post_image(s).unwrap();
                let mut expected: Vec<Outcome> = improving_successors(&spec, &beta)
                    .unwrap()
                    .into_iter()
                    .map(|f| f.to)
                    .collect();
                expected.sort();
                expected.dedup();
                assert_eq!(m.enumerate(post), expected);
                for alpha in spec.outcomes() {
                    let sa = m.state(&alpha).unwrap();
                    let pre = m.pre_image(sa).unwrap();
                    assert_eq!(m.contains(post, &alpha), m.contains(pre, &beta));
                }
            }
        }
    }

    #[test]
    fn dominance_examples() {
        let spec = p1();
        let (yes, path) = dominates_symbolic(&spec, &o(&[0, 1, 0]), &o(&[1, 0, 1]), B).unwrap();
        assert!(yes);
        assert_eq!(path.unwrap().len(), 3);
        assert_eq!(dominates_symbolic(&spec, &o(&[1, 1, 1]), &o(&[0, 1, 1]), B).unwrap(), (false, None));
        assert_eq!(dominates_symbolic(&spec, &o(&[1, 1, 1]), &o(&[1, 1, 1]), B).unwrap(), (false, None));
    }

    #[test]
    fn dominance_agrees_with_oracle_both_directions() {
        for spec in [p1(), p3(), d2(), ternary()] {
            let mut m = SymbolicModel::encode(&spec, B).unwrap();
            for worse in spec.outcomes() {
                for better in spec.outcomes() {
                    let (want, wpath) = dominates_explicit(&spec, &better, &worse, DEFAULT_NODE_LIMIT).unwrap();
                    let (got, path) = m.dominates(&better, &worse).unwrap();
                    assert_eq!(got, want);
                    assert_eq!(m.dominates_backward(&better, &worse).unwrap(), want);
                    assert_eq!(path.map(|p| p.len()), wpath.map(|p| p.len()));
                }
            }
        }
    }

    #[test]
    fn consistency_examples() {
        assert_eq!(consistent_symbolic(&p1(), B).unwrap(), (true, None));
        let (ok, cycle) = consistent_symbolic(&d2(), B).unwrap();
        assert!(!ok);
        let cycle = cycle.unwrap();
        assert_eq!(cycle.len(), 4);
        assert_eq!(cycle.first().unwrap().from, cycle.last().unwrap().to);
        let empty = PreferenceSpec::new("e").with_variable(crate::model::Variable::binary("a"));
        assert_eq!(consistent_symbolic(&empty, B).unwrap(), (true, None));
        for spec in [p3(), ternary()] {
            assert_eq!(
                consistent_symbolic(&spec, B).unwrap().0,
                consistent_explicit(&spec, DEFAULT_NODE_LIMIT).unwrap().0
            );
        }
    }

    #[test]
    fn subsumption_examples() {
        let full = p1();
        let reduced = full.without_statement("s3");
        assert_eq!(subsumes_symbolic(&full, &full, B).unwrap(), (true, None));
        assert_eq!(subsumes_symbolic(&reduced, &full, B).unwrap(), (true, None));
        let sym = subsumes_symbolic(&full, &reduced, B).unwrap();
        assert_eq!(sym, subsumes_explicit(&full, &reduced, DEFAULT_NODE_LIMIT).unwrap());
        assert!(!sym.0);
        assert_eq!(sym.1.unwrap().statement, "s3");
        assert!(matches!(subsumes_symbolic(&full, &d2(), B), Err(Error::VariableMismatch)));
    }

    #[test]
    fn equivalence_examples() {
        assert_eq!(equivalent_symbolic(&p1(), &p1(), B).unwrap(), (true, None));
        let (ans, d) = equivalent_symbolic(&p1(), &p1().without_statement("s3"), B).unwrap();
        assert!(!ans);
        assert_eq!(d.unwrap().0, ProofDirection::FirstNotInSecond);
        let (ans, d) = equivalent_symbolic(&p1().without_statement("s3"), &p1(), B).unwrap();
        assert!(!ans);
        assert_eq!(d.unwrap().0, ProofDirection::SecondNotInFirst);
        let mut shuffled = d2();
        shuffled.statements.reverse();
        assert_eq!(equivalent_symbolic(&d2(), &shuffled, B).unwrap(), (true, None));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        assert!(matches!(
            SymbolicModel::encode(&p3(), 8),
            Err(Error::NodeBudgetExceeded { budget: 8 })
        ));
    }
}
