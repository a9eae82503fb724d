//! Reference engine over the materialized induced preference graph.
//!
//! Nodes are outcomes identified by their mixed-radix rank
//! ([`PreferenceSpec::outcome_rank`]). Only usable while the outcome count
//! stays under a node limit, but every answer comes from plain graph search,
//! which makes it the oracle the symbolic engine is tested against.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::model::{Compiled, Outcome, PreferenceSpec};
use crate::proofs::ProofDirection;
use crate::semantics::{for_each_successor, Flip};
use crate::{Error, Result};

pub const DEFAULT_NODE_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub to: usize,
    /// Indices of every licensing statement, ascending.
    pub statements: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct InducedPreferenceGraph {
    adjacency: Vec<Vec<Edge>>,
    statement_ids: Vec<String>,
}

impl InducedPreferenceGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Distinct (from, to) pairs.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, node: usize) -> &[Edge] {
        &self.adjacency[node]
    }

    pub fn statement_id(&self, index: usize) -> &str {
        &self.statement_ids[index]
    }

    /// The licensing statement reported for an edge: the least id.
    fn edge_label(&self, edge: &Edge) -> &str {
        edge.statements
            .iter()
            .map(|&s| self.statement_ids[s].as_str())
            .min()
            .expect("edges carry at least one statement")
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from].iter().any(|e| e.to == to)
    }

    /// Nodes reachable from `from` by one or more edges.
    pub fn reachable_from(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::new();
        for e in &self.adjacency[from] {
            if !seen[e.to] {
                seen[e.to] = true;
                queue.push_back(e.to);
            }
        }
        while let Some(u) = queue.pop_front() {
            for e in &self.adjacency[u] {
                if !seen[e.to] {
                    seen[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
        seen
    }

    /// A shortest path of at least one edge from `from` to `to`, as
    /// `(from, to, label)` triples.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<(usize, usize, &str)>> {
        self.shortest_path_within(from, to, |_| true)
    }

    /// [`Self::shortest_path`] between outcomes, as flips.
    pub fn flip_path(&self, spec: &PreferenceSpec, from: &Outcome, to: &Outcome) -> Option<Vec<Flip>> {
        let u = spec.outcome_rank(from) as usize;
        let v = spec.outcome_rank(to) as usize;
        self.shortest_path(u, v).map(|steps| to_flips(spec, steps))
    }

    fn shortest_path_within(
        &self,
        from: usize,
        to: usize,
        allowed: impl Fn(usize) -> bool,
    ) -> Option<Vec<(usize, usize, &str)>> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        queue.push_back(from);
        let mut found = false;
        'search: while let Some(u) = queue.pop_front() {
            for (k, e) in self.adjacency[u].iter().enumerate() {
                if !allowed(e.to) || parent[e.to].is_some() {
                    continue;
                }
                parent[e.to] = Some((u, k));
                if e.to == to {
                    found = true;
                    break 'search;
                }
                queue.push_back(e.to);
            }
        }
        if !found {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        loop {
            let (u, k) = parent[v].expect("on the BFS tree");
            path.push((u, v, self.edge_label(&self.adjacency[u][k])));
            v = u;
            if v == from {
                break;
            }
        }
        path.reverse();
        Some(path)
    }

    /// Strongly connected components (Tarjan, iterative), each sorted ascending.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        const UNVISITED: usize = usize::MAX;
        let n = self.node_count();
        let mut index = vec![UNVISITED; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut components = Vec::new();
        let mut counter = 0;
        // (node, next edge position)
        let mut call: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            call.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(e) = self.adjacency[v].get(*pos) {
                    *pos += 1;
                    let w = e.to;
                    if index[w] == UNVISITED {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
        components
    }

    /// Edge list, one line per (from, to) pair: `a=1,b=0 -> a=0,b=0 : s1,s4`.
    pub fn dump(&self, spec: &PreferenceSpec) -> String {
        let mut out = String::new();
        for (u, edges) in self.adjacency.iter().enumerate() {
            for e in edges {
                let ids: Vec<&str> = e
                    .statements
                    .iter()
                    .map(|&s| self.statement_ids[s].as_str())
                    .collect();
                let _ = writeln!(
                    out,
                    "{} -> {} : {}",
                    spec.format_outcome(&spec.outcome_at(u as u128)),
                    spec.format_outcome(&spec.outcome_at(e.to as u128)),
                    ids.join(",")
                );
            }
        }
        out
    }
}

fn check_limit(spec: &PreferenceSpec, node_limit: u128) -> Result<usize> {
    let outcomes = spec.outcome_count();
    if outcomes > node_limit || outcomes > usize::MAX as u128 {
        return Err(Error::TooLarge {
            outcomes,
            limit: node_limit,
        });
    }
    Ok(outcomes as usize)
}

fn rank_of(radices: &[u32], values: &[u32]) -> usize {
    radices
        .iter()
        .zip(values)
        .fold(0usize, |acc, (&r, &v)| acc * r as usize + v as usize)
}

pub fn build_ipg(spec: &PreferenceSpec, node_limit: u128) -> Result<InducedPreferenceGraph> {
    let compiled = spec.compile()?;
    let n = check_limit(spec, node_limit)?;
    let mut adjacency = Vec::with_capacity(n);
    let mut current = vec![0u32; compiled.radices.len()];
    for _ in 0..n {
        let mut targets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for_each_successor(&compiled, &current, |stmt, to| {
            let list = targets.entry(rank_of(&compiled.radices, to)).or_default();
            if list.last() != Some(&stmt) {
                list.push(stmt);
            }
        });
        adjacency.push(
            targets
                .into_iter()
                .map(|(to, statements)| Edge { to, statements })
                .collect(),
        );
        advance(&compiled.radices, &mut current);
    }
    Ok(InducedPreferenceGraph {
        adjacency,
        statement_ids: spec.statements.iter().map(|s| s.id.clone()).collect(),
    })
}

fn advance(radices: &[u32], values: &mut [u32]) {
    for (v, &r) in values.iter_mut().zip(radices).rev() {
        *v += 1;
        if *v < r {
            return;
        }
        *v = 0;
    }
}

fn to_flips<'a>(
    spec: &PreferenceSpec,
    steps: impl IntoIterator<Item = (usize, usize, &'a str)>,
) -> Vec<Flip> {
    steps
        .into_iter()
        .map(|(u, v, id)| Flip {
            from: spec.outcome_at(u as u128),
            to: spec.outcome_at(v as u128),
            statement: String::from(id),
        })
        .collect()
}

/// Does `better` dominate `worse`? The witness is a shortest flip sequence
/// from `worse` to `better`. An outcome never dominates itself.
///
/// Searches lazily from `worse`, so only the reachable part of the graph is
/// generated; the node limit still applies to the full outcome space.
pub fn dominates_explicit(
    spec: &PreferenceSpec,
    better: &Outcome,
    worse: &Outcome,
    node_limit: u128,
) -> Result<(bool, Option<Vec<Flip>>)> {
    let compiled = spec.compile()?;
    spec.check_outcome(better)?;
    spec.check_outcome(worse)?;
    check_limit(spec, node_limit)?;
    if better == worse {
        return Ok((false, None));
    }
    Ok(match lazy_path(spec, &compiled, worse, better) {
        Some(path) => (true, Some(path)),
        None => (false, None),
    })
}

fn lazy_path(
    spec: &PreferenceSpec,
    compiled: &Compiled,
    from: &Outcome,
    to: &Outcome,
) -> Option<Vec<Flip>> {
    let start = rank_of(&compiled.radices, from.values());
    let goal = rank_of(&compiled.radices, to.values());
    // child -> (parent, statement)
    let mut parent: hashbrown::HashMap<usize, (usize, usize)> = hashbrown::HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from.values().to_vec());
    let mut found = false;
    'search: while let Some(u) = queue.pop_front() {
        let ur = rank_of(&compiled.radices, &u);
        let mut fresh = Vec::new();
        for_each_successor(compiled, &u, |stmt, v| {
            let vr = rank_of(&compiled.radices, v);
            if vr != start && !parent.contains_key(&vr) {
                parent.insert(vr, (ur, stmt));
                fresh.push((vr, v.to_vec()));
            }
        });
        for (vr, v) in fresh {
            if vr == goal {
                found = true;
                break 'search;
            }
            queue.push_back(v);
        }
    }
    if !found {
        return None;
    }
    let mut steps = Vec::new();
    let mut v = goal;
    while v != start {
        let (u, stmt) = parent[&v];
        steps.push((u, v, spec.statements[stmt].id.as_str()));
        v = u;
    }
    steps.reverse();
    Some(to_flips(spec, steps))
}

/// Is the induced preference graph acyclic? Otherwise returns a cycle of
/// flips through the least outcome of the first nontrivial component.
pub fn consistent_explicit(
    spec: &PreferenceSpec,
    node_limit: u128,
) -> Result<(bool, Option<Vec<Flip>>)> {
    let ipg = build_ipg(spec, node_limit)?;
    Ok(match find_cycle(&ipg) {
        None => (true, None),
        Some(cycle) => (false, Some(to_flips(spec, cycle))),
    })
}

fn find_cycle(ipg: &InducedPreferenceGraph) -> Option<Vec<(usize, usize, &str)>> {
    let component = ipg
        .strongly_connected_components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .min_by_key(|c| c[0])?;
    let start = component[0];
    let members = |v: usize| component.binary_search(&v).is_ok();
    ipg.shortest_path_within(start, start, members)
}

/// Is every dominance of `p1` also a dominance of `p2`? Checks each edge of
/// `p1` against reachability in `p2`, which suffices because reachability is
/// transitive. The counter-flip is the first offending `p1` edge.
pub fn subsumes_explicit(
    p1: &PreferenceSpec,
    p2: &PreferenceSpec,
    node_limit: u128,
) -> Result<(bool, Option<Flip>)> {
    if !p1.same_variables(p2) {
        return Err(Error::VariableMismatch);
    }
    let g1 = build_ipg(p1, node_limit)?;
    let g2 = build_ipg(p2, node_limit)?;
    Ok(match first_unentailed_edge(&g1, &g2) {
        None => (true, None),
        Some((u, v, id)) => (
            false,
            Some(Flip {
                from: p1.outcome_at(u as u128),
                to: p1.outcome_at(v as u128),
                statement: String::from(id),
            }),
        ),
    })
}

fn first_unentailed_edge<'a>(
    g1: &'a InducedPreferenceGraph,
    g2: &InducedPreferenceGraph,
) -> Option<(usize, usize, &'a str)> {
    for u in 0..g1.node_count() {
        let edges = g1.successors(u);
        if edges.is_empty() {
            continue;
        }
        let reach = g2.reachable_from(u);
        if let Some(e) = edges.iter().find(|e| !reach[e.to]) {
            return Some((u, e.to, g1.edge_label(e)));
        }
    }
    None
}

/// Mutual subsumption; a failure reports which direction broke.
pub fn equivalent_explicit(
    p1: &PreferenceSpec,
    p2: &PreferenceSpec,
    node_limit: u128,
) -> Result<(bool, Option<(ProofDirection, Flip)>)> {
    let (forward, flip) = subsumes_explicit(p1, p2, node_limit)?;
    if !forward {
        return Ok((false, flip.map(|f| (ProofDirection::FirstNotInSecond, f))));
    }
    let (backward, flip) = subsumes_explicit(p2, p1, node_limit)?;
    if !backward {
        return Ok((false, flip.map(|f| (ProofDirection::SecondNotInFirst, f))));
    }
    Ok((true, None))
}
