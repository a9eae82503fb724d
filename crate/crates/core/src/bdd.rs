//! Reduced ordered binary decision diagrams.
//!
//! A [`BddManager`] owns every node it creates; a [`Bdd`] is a copyable
//! handle into one manager. Nodes are hash-consed through a unique table, so
//! two handles from the same manager denote the same boolean function iff
//! they are equal. Variables are ordered by index, smaller indices closer to
//! the root.
//!
//! There is no garbage collection and no dynamic reordering: a manager only
//! grows, bounded by its node budget, after which operations fail with
//! [`Error::NodeBudgetExceeded`]. Managers are meant to live for one query.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU32, Ordering};

use hashbrown::HashMap;

use crate::{Error, Result};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

const FALSE: u32 = 0;
const TRUE: u32 = 1;
const TERMINAL_LEVEL: u32 = u32::MAX;
/// Operation caches are dropped once they hold this many entries in total.
const CACHE_CAP: usize = 1 << 22;

static NEXT_MANAGER: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    manager: u32,
    node: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: u32,
    high: u32,
}

/// A boolean connective applied by [`BddManager::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Apply {
    Not(Bdd),
    And(Bdd, Bdd),
    Or(Bdd, Bdd),
    Ite(Bdd, Bdd, Bdd),
}

/// A variable substitution registered with a manager, see [`BddManager::var_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarMap {
    manager: u32,
    index: u32,
}

#[derive(Default)]
struct Caches {
    not: HashMap<u32, u32>,
    and: HashMap<(u32, u32), u32>,
    or: HashMap<(u32, u32), u32>,
    ite: HashMap<(u32, u32, u32), u32>,
    exists: HashMap<(u32, u32), u32>,
    and_exists: HashMap<(u32, u32, u32), u32>,
    replace: HashMap<(u32, u32), u32>,
}

impl Caches {
    fn len(&self) -> usize {
        self.not.len()
            + self.and.len()
            + self.or.len()
            + self.ite.len()
            + self.exists.len()
            + self.and_exists.len()
            + self.replace.len()
    }

    fn clear(&mut self) {
        *self = Caches::default();
    }
}

pub struct BddManager {
    id: u32,
    num_vars: u32,
    budget: usize,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    maps: Vec<Vec<u32>>,
    caches: Caches,
}

impl core::fmt::Debug for BddManager {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BddManager")
            .field("id", &self.id)
            .field("num_vars", &self.num_vars)
            .field("nodes", &self.nodes.len())
            .field("budget", &self.budget)
            .finish()
    }
}

impl BddManager {
    pub fn new(num_vars: u32) -> Self {
        Self::with_budget(num_vars, DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(num_vars: u32, budget: usize) -> Self {
        assert!(num_vars < TERMINAL_LEVEL, "too many variables");
        let terminal = |v| Node {
            var: TERMINAL_LEVEL,
            low: v,
            high: v,
        };
        BddManager {
            id: NEXT_MANAGER.fetch_add(1, Ordering::Relaxed),
            num_vars,
            budget,
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: HashMap::new(),
            maps: Vec::new(),
            caches: Caches::default(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Nodes allocated so far, terminals included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn handle(&self, node: u32) -> Bdd {
        Bdd {
            manager: self.id,
            node,
        }
    }

    fn own(&self, f: Bdd) -> Result<u32> {
        if f.manager == self.id {
            Ok(f.node)
        } else {
            Err(Error::ManagerMismatch)
        }
    }

    fn maintain(&mut self) {
        if self.caches.len() > CACHE_CAP {
            self.caches.clear();
        }
    }

    pub fn constant(&self, value: bool) -> Bdd {
        self.handle(if value { TRUE } else { FALSE })
    }

    pub fn is_true(&self, f: Bdd) -> bool {
        f.manager == self.id && f.node == TRUE
    }

    pub fn is_false(&self, f: Bdd) -> bool {
        f.manager == self.id && f.node == FALSE
    }

    pub fn var(&mut self, var: u32) -> Result<Bdd> {
        assert!(var < self.num_vars, "variable {var} out of range");
        let n = self.mk(var, FALSE, TRUE)?;
        Ok(self.handle(n))
    }

    pub fn not_var(&mut self, var: u32) -> Result<Bdd> {
        assert!(var < self.num_vars, "variable {var} out of range");
        let n = self.mk(var, TRUE, FALSE)?;
        Ok(self.handle(n))
    }

    /// Conjunction of the given variables, all positive.
    pub fn cube(&mut self, vars: &[u32]) -> Result<Bdd> {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut acc = TRUE;
        for &v in sorted.iter().rev() {
            assert!(v < self.num_vars, "variable {v} out of range");
            acc = self.mk(v, FALSE, acc)?;
        }
        Ok(self.handle(acc))
    }

    pub fn apply(&mut self, op: Apply) -> Result<Bdd> {
        match op {
            Apply::Not(f) => self.not(f),
            Apply::And(f, g) => self.and(f, g),
            Apply::Or(f, g) => self.or(f, g),
            Apply::Ite(f, g, h) => self.ite(f, g, h),
        }
    }

    pub fn not(&mut self, f: Bdd) -> Result<Bdd> {
        let f = self.own(f)?;
        self.maintain();
        let r = self.not_rec(f)?;
        Ok(self.handle(r))
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let (f, g) = (self.own(f)?, self.own(g)?);
        self.maintain();
        let r = self.and_rec(f, g)?;
        Ok(self.handle(r))
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let (f, g) = (self.own(f)?, self.own(g)?);
        self.maintain();
        let r = self.or_rec(f, g)?;
        Ok(self.handle(r))
    }

    /// `f ∧ ¬g`
    pub fn diff(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let ng = self.not(g)?;
        self.and(f, ng)
    }

    /// `f ⇔ g`
    pub fn iff(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let ng = self.not(g)?;
        self.ite(f, g, ng)
    }

    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> Result<Bdd> {
        let (f, g, h) = (self.own(f)?, self.own(g)?, self.own(h)?);
        self.maintain();
        let r = self.ite_rec(f, g, h)?;
        Ok(self.handle(r))
    }

    /// Existential projection of `vars` out of `f`.
    pub fn exists(&mut self, vars: &[u32], f: Bdd) -> Result<Bdd> {
        let f = self.own(f)?;
        let cube = self.cube(vars)?.node;
        self.maintain();
        let r = self.exists_rec(f, cube)?;
        Ok(self.handle(r))
    }

    /// `∃ vars. f ∧ g` without building the conjunction first.
    pub fn and_exists(&mut self, f: Bdd, g: Bdd, vars: &[u32]) -> Result<Bdd> {
        let (f, g) = (self.own(f)?, self.own(g)?);
        let cube = self.cube(vars)?.node;
        self.maintain();
        let r = self.and_exists_rec(f, g, cube)?;
        Ok(self.handle(r))
    }

    /// Registers a substitution of variables: each `(from, to)` pair renames
    /// `from` to `to`, all other variables stay put. The mapping must be
    /// injective on the support of any function it is applied to.
    pub fn var_map(&mut self, pairs: &[(u32, u32)]) -> VarMap {
        let mut map: Vec<u32> = (0..self.num_vars).collect();
        for &(from, to) in pairs {
            assert!(from < self.num_vars && to < self.num_vars);
            map[from as usize] = to;
        }
        self.maps.push(map);
        VarMap {
            manager: self.id,
            index: (self.maps.len() - 1) as u32,
        }
    }

    pub fn replace(&mut self, f: Bdd, map: VarMap) -> Result<Bdd> {
        let f = self.own(f)?;
        if map.manager != self.id {
            return Err(Error::ManagerMismatch);
        }
        self.maintain();
        let r = self.replace_rec(f, map.index)?;
        Ok(self.handle(r))
    }

    /// Evaluates `f` under `assignment(var)`.
    pub fn eval(&self, f: Bdd, assignment: impl Fn(u32) -> bool) -> bool {
        let mut n = f.node;
        while n > TRUE {
            let node = self.nodes[n as usize];
            n = if assignment(node.var) {
                node.high
            } else {
                node.low
            };
        }
        n == TRUE
    }

    /// Number of assignments to `vars` satisfying `f`. The support of `f`
    /// must lie within `vars`.
    pub fn sat_count(&self, f: Bdd, vars: &[u32]) -> u128 {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let position = |var: u32| -> u32 {
            if var == TERMINAL_LEVEL {
                sorted.len() as u32
            } else {
                sorted
                    .binary_search(&var)
                    .expect("support outside the counted variables") as u32
            }
        };
        let mut memo: HashMap<u32, u128> = HashMap::new();
        let root = self.count_rec(f.node, &position, &mut memo);
        shl(root, position(self.nodes[f.node as usize].var))
    }

    fn count_rec(
        &self,
        n: u32,
        position: &impl Fn(u32) -> u32,
        memo: &mut HashMap<u32, u128>,
    ) -> u128 {
        if n <= TRUE {
            return n as u128;
        }
        if let Some(&c) = memo.get(&n) {
            return c;
        }
        let node = self.nodes[n as usize];
        let here = position(node.var);
        let branch = |child: u32, memo: &mut HashMap<u32, u128>| {
            let c = self.count_rec(child, position, memo);
            shl(c, position(self.nodes[child as usize].var) - here - 1)
        };
        let c = branch(node.low, memo).saturating_add(branch(node.high, memo));
        memo.insert(n, c);
        c
    }

    /// Some satisfying partial assignment, as `(var, value)` in variable
    /// order. Prefers the low branch, so completing the unlisted variables
    /// with `false` yields the least satisfying assignment.
    pub fn pick_cube(&self, f: Bdd) -> Option<Vec<(u32, bool)>> {
        if f.node == FALSE {
            return None;
        }
        let mut cube = Vec::new();
        let mut n = f.node;
        while n > TRUE {
            let node = self.nodes[n as usize];
            if node.low != FALSE {
                cube.push((node.var, false));
                n = node.low;
            } else {
                cube.push((node.var, true));
                n = node.high;
            }
        }
        Some(cube)
    }

    /// Number of distinct nodes reachable from `f`, terminals included.
    pub fn size(&self, f: Bdd) -> usize {
        let mut seen = hashbrown::HashSet::new();
        let mut stack = vec![f.node];
        while let Some(n) = stack.pop() {
            if seen.insert(n) && n > TRUE {
                let node = self.nodes[n as usize];
                stack.push(node.low);
                stack.push(node.high);
            }
        }
        seen.len()
    }

    /// Variables `f` depends on, ascending.
    pub fn support(&self, f: Bdd) -> Vec<u32> {
        let mut seen = hashbrown::HashSet::new();
        let mut vars = alloc::collections::BTreeSet::new();
        let mut stack = vec![f.node];
        while let Some(n) = stack.pop() {
            if n > TRUE && seen.insert(n) {
                let node = self.nodes[n as usize];
                vars.insert(node.var);
                stack.push(node.low);
                stack.push(node.high);
            }
        }
        vars.into_iter().collect()
    }

    // ---- recursive kernels on raw node indices ----

    fn level(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    /// Cofactors of `n` with respect to `var`.
    fn cofactors(&self, n: u32, var: u32) -> (u32, u32) {
        let node = self.nodes[n as usize];
        if node.var == var {
            (node.low, node.high)
        } else {
            (n, n)
        }
    }

    fn mk(&mut self, var: u32, low: u32, high: u32) -> Result<u32> {
        if low == high {
            return Ok(low);
        }
        let node = Node { var, low, high };
        if let Some(&n) = self.unique.get(&node) {
            return Ok(n);
        }
        if self.nodes.len() >= self.budget {
            return Err(Error::NodeBudgetExceeded {
                budget: self.budget,
            });
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, n);
        Ok(n)
    }

    fn not_rec(&mut self, f: u32) -> Result<u32> {
        if f <= TRUE {
            return Ok(f ^ 1);
        }
        if let Some(&r) = self.caches.not.get(&f) {
            return Ok(r);
        }
        let node = self.nodes[f as usize];
        let low = self.not_rec(node.low)?;
        let high = self.not_rec(node.high)?;
        let r = self.mk(node.var, low, high)?;
        self.caches.not.insert(f, r);
        Ok(r)
    }

    fn and_rec(&mut self, f: u32, g: u32) -> Result<u32> {
        if f == FALSE || g == FALSE {
            return Ok(FALSE);
        }
        if f == TRUE || f == g {
            return Ok(g);
        }
        if g == TRUE {
            return Ok(f);
        }
        let key = if f < g { (f, g) } else { (g, f) };
        if let Some(&r) = self.caches.and.get(&key) {
            return Ok(r);
        }
        let var = self.level(f).min(self.level(g));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let low = self.and_rec(f0, g0)?;
        let high = self.and_rec(f1, g1)?;
        let r = self.mk(var, low, high)?;
        self.caches.and.insert(key, r);
        Ok(r)
    }

    fn or_rec(&mut self, f: u32, g: u32) -> Result<u32> {
        if f == TRUE || g == TRUE {
            return Ok(TRUE);
        }
        if f == FALSE || f == g {
            return Ok(g);
        }
        if g == FALSE {
            return Ok(f);
        }
        let key = if f < g { (f, g) } else { (g, f) };
        if let Some(&r) = self.caches.or.get(&key) {
            return Ok(r);
        }
        let var = self.level(f).min(self.level(g));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let low = self.or_rec(f0, g0)?;
        let high = self.or_rec(f1, g1)?;
        let r = self.mk(var, low, high)?;
        self.caches.or.insert(key, r);
        Ok(r)
    }

    fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> Result<u32> {
        match (f, g, h) {
            (TRUE, _, _) => return Ok(g),
            (FALSE, _, _) => return Ok(h),
            _ if g == h => return Ok(g),
            (_, TRUE, FALSE) => return Ok(f),
            (_, FALSE, TRUE) => return self.not_rec(f),
            (_, TRUE, _) => return self.or_rec(f, h),
            (_, _, FALSE) => return self.and_rec(f, g),
            _ => {}
        }
        if let Some(&r) = self.caches.ite.get(&(f, g, h)) {
            return Ok(r);
        }
        let var = self.level(f).min(self.level(g)).min(self.level(h));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let (h0, h1) = self.cofactors(h, var);
        let low = self.ite_rec(f0, g0, h0)?;
        let high = self.ite_rec(f1, g1, h1)?;
        let r = self.mk(var, low, high)?;
        self.caches.ite.insert((f, g, h), r);
        Ok(r)
    }

    fn exists_rec(&mut self, f: u32, cube: u32) -> Result<u32> {
        if f <= TRUE || cube == TRUE {
            return Ok(f);
        }
        let vf = self.level(f);
        let mut cube = cube;
        while cube != TRUE && self.level(cube) < vf {
            cube = self.nodes[cube as usize].high;
        }
        if cube == TRUE {
            return Ok(f);
        }
        if let Some(&r) = self.caches.exists.get(&(f, cube)) {
            return Ok(r);
        }
        let node = self.nodes[f as usize];
        let r = if self.level(cube) == vf {
            let rest = self.nodes[cube as usize].high;
            let low = self.exists_rec(node.low, rest)?;
            if low == TRUE {
                TRUE
            } else {
                let high = self.exists_rec(node.high, rest)?;
                self.or_rec(low, high)?
            }
        } else {
            let low = self.exists_rec(node.low, cube)?;
            let high = self.exists_rec(node.high, cube)?;
            self.mk(vf, low, high)?
        };
        self.caches.exists.insert((f, cube), r);
        Ok(r)
    }

    fn and_exists_rec(&mut self, f: u32, g: u32, cube: u32) -> Result<u32> {
        if f == FALSE || g == FALSE {
            return Ok(FALSE);
        }
        if f == TRUE && g == TRUE {
            return Ok(TRUE);
        }
        if f == TRUE || f == g {
            return self.exists_rec(g, cube);
        }
        if g == TRUE {
            return self.exists_rec(f, cube);
        }
        let top = self.level(f).min(self.level(g));
        let mut cube = cube;
        while cube != TRUE && self.level(cube) < top {
            cube = self.nodes[cube as usize].high;
        }
        if cube == TRUE {
            return self.and_rec(f, g);
        }
        let key = if f < g { (f, g, cube) } else { (g, f, cube) };
        if let Some(&r) = self.caches.and_exists.get(&key) {
            return Ok(r);
        }
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let r = if self.level(cube) == top {
            let rest = self.nodes[cube as usize].high;
            let low = self.and_exists_rec(f0, g0, rest)?;
            if low == TRUE {
                TRUE
            } else {
                let high = self.and_exists_rec(f1, g1, rest)?;
                self.or_rec(low, high)?
            }
        } else {
            let low = self.and_exists_rec(f0, g0, cube)?;
            let high = self.and_exists_rec(f1, g1, cube)?;
            self.mk(top, low, high)?
        };
        self.caches.and_exists.insert(key, r);
        Ok(r)
    }

    fn replace_rec(&mut self, f: u32, map: u32) -> Result<u32> {
        if f <= TRUE {
            return Ok(f);
        }
        if let Some(&r) = self.caches.replace.get(&(f, map)) {
            return Ok(r);
        }
        let node = self.nodes[f as usize];
        let low = self.replace_rec(node.low, map)?;
        let high = self.replace_rec(node.high, map)?;
        let target = self.maps[map as usize][node.var as usize];
        // Fast path when the new variable still sits above both children.
        let r = if target < self.level(low) && target < self.level(high) {
            self.mk(target, low, high)?
        } else {
            let v = self.mk(target, FALSE, TRUE)?;
            self.ite_rec(v, high, low)?
        };
        self.caches.replace.insert((f, map), r);
        Ok(r)
    }
}

fn shl(value: u128, bits: u32) -> u128 {
    if value == 0 {
        0
    } else if bits >= 128 || value.leading_zeros() < bits {
        u128::MAX
    } else {
        value << bits
    }
}
