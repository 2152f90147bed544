//! Exact clique, independence, chromatic, and domination numbers.
//!
//! All four are branch-and-bound searches over bitset adjacency with
//! deterministic lowest-id tie-breaking, a wall-clock budget, and
//! certificate witnesses. When the budget runs out the caller gets the
//! best bracketing interval found instead of an error.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{GraphSnapshot, NodeId, NodeRef};

/// Default wall-clock budget per parameter.
pub const DEFAULT_SOLVER_BUDGET: Duration = Duration::from_secs(60);

/// Node-count ceiling for the bitset solvers; larger graphs get greedy
/// bounds only (dense bitsets would need O(n^2) bits).
pub const EXACT_SOLVER_MAX_N: usize = 4096;

/// Certificate attached to a parameter value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A clique, independent set, or dominating set.
    Set(Vec<NodeId>),
    /// A proper coloring, one color index per node.
    Coloring(Vec<u32>),
}

impl Witness {
    /// Size reported alongside the value: set cardinality or color count.
    pub fn size(&self) -> usize {
        match self {
            Witness::Set(s) => s.len(),
            Witness::Coloring(c) => c.iter().map(|&x| x as usize + 1).max().unwrap_or(0),
        }
    }
}

/// Outcome of an exact-parameter computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamResult {
    /// The witnessed value: `lower` for maximization problems (a clique
    /// or independent set of this size exists), `upper` for minimization
    /// (a coloring or dominating set of this size exists).
    pub value: u64,
    pub lower: u64,
    pub upper: u64,
    /// True when `lower == upper` was proven within budget.
    pub exact: bool,
    pub witness: Witness,
    pub elapsed: Duration,
}

// ---------------------------------------------------------------------
// Bitset scaffolding

#[derive(Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn empty(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut b = Bits {
            words: vec![!0u64; n.div_ceil(64)],
        };
        let tail = n % 64;
        if tail != 0 {
            *b.words.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn unset(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn test(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn and_assign(&mut self, o: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a &= b;
        }
    }

    fn or_assign(&mut self, o: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a |= b;
        }
    }

    fn and_not_assign(&mut self, o: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a &= !b;
        }
    }

    fn intersection_count(&self, o: &Bits) -> usize {
        self.words
            .iter()
            .zip(&o.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn first_one(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

fn adjacency_bits(g: &GraphSnapshot) -> Vec<Bits> {
    let n = g.node_count();
    (0..n)
        .map(|u| {
            let mut b = Bits::empty(n);
            for &v in g.neighbors(u as NodeId) {
                b.set(v as usize);
            }
            b
        })
        .collect()
}

fn complement_bits(g: &GraphSnapshot) -> Vec<Bits> {
    let n = g.node_count();
    adjacency_bits(g)
        .into_iter()
        .enumerate()
        .map(|(u, adj)| {
            let mut b = Bits::full(n);
            b.and_not_assign(&adj);
            b.unset(u);
            b
        })
        .collect()
}

// ---------------------------------------------------------------------
// Maximum clique (branch and bound with greedy-coloring bounds)

struct CliqueSearch<'a> {
    adj: &'a [Bits],
    best: usize,
    witness: Vec<usize>,
    deadline: Instant,
    timed_out: bool,
    tick: u32,
}

impl CliqueSearch<'_> {
    fn out_of_time(&mut self) -> bool {
        self.tick = self.tick.wrapping_add(1);
        if self.tick % 1024 == 0 && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &Bits) {
        if self.out_of_time() {
            return;
        }
        if p.is_empty() {
            if r.len() > self.best {
                self.best = r.len();
                self.witness = r.clone();
            }
            return;
        }
        // Greedy color classes over p; a node in class c caps any clique
        // through it at |r| + c.
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut uncolored = p.clone();
        let mut color = 0usize;
        while !uncolored.is_empty() {
            color += 1;
            let mut candidates = uncolored.clone();
            while let Some(v) = candidates.first_one() {
                uncolored.unset(v);
                candidates.unset(v);
                candidates.and_not_assign(&self.adj[v]);
                order.push((v, color));
            }
        }
        let mut p = p.clone();
        for &(v, bound) in order.iter().rev() {
            if r.len() + bound <= self.best {
                return; // every remaining candidate has a smaller bound
            }
            let mut next = p.clone();
            next.and_assign(&self.adj[v]);
            r.push(v);
            self.expand(r, &next);
            r.pop();
            if self.timed_out {
                return;
            }
            p.unset(v);
        }
    }
}

/// Greedy clique: scan by descending degree, keep nodes adjacent to all
/// kept so far. A quick lower bound and initial witness.
fn greedy_clique(adj: &[Bits]) -> Vec<usize> {
    let n = adj.len();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count()), v));
    let mut clique: Vec<usize> = Vec::new();
    for v in ids {
        if clique.iter().all(|&u| adj[u].test(v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

/// Number of classes a full greedy coloring uses: an upper bound for the
/// clique number of the same adjacency.
fn greedy_color_count(adj: &[Bits]) -> usize {
    let n = adj.len();
    let mut uncolored = Bits::full(n);
    let mut colors = 0;
    while !uncolored.is_empty() {
        colors += 1;
        let mut candidates = uncolored.clone();
        while let Some(v) = candidates.first_one() {
            uncolored.unset(v);
            candidates.unset(v);
            candidates.and_not_assign(&adj[v]);
        }
    }
    colors
}

fn max_clique_on(adj: &[Bits], budget: Duration, start: Instant) -> ParamResult {
    let n = adj.len();
    let seed_clique = greedy_clique(adj);
    let mut search = CliqueSearch {
        adj,
        best: seed_clique.len(),
        witness: seed_clique,
        deadline: start + budget,
        timed_out: false,
        tick: 0,
    };
    search.expand(&mut Vec::new(), &Bits::full(n));
    let lower = search.best as u64;
    let upper = if search.timed_out {
        greedy_color_count(adj) as u64
    } else {
        lower
    };
    let mut witness = search.witness;
    witness.sort_unstable();
    ParamResult {
        value: lower,
        lower,
        upper: upper.max(lower),
        exact: !search.timed_out,
        witness: Witness::Set(witness.into_iter().map(|v| v as NodeId).collect()),
        elapsed: start.elapsed(),
    }
}

/// Exact clique number with witness; interval on budget exhaustion.
pub fn clique_number(g: &GraphSnapshot, budget: Duration) -> ParamResult {
    let start = Instant::now();
    if g.node_count() > EXACT_SOLVER_MAX_N {
        return oversize_clique(g, start);
    }
    max_clique_on(&adjacency_bits(g), budget, start)
}

/// Exact independence number, via maximum clique of the complement.
pub fn independence_number(g: &GraphSnapshot, budget: Duration) -> ParamResult {
    let start = Instant::now();
    if g.node_count() > EXACT_SOLVER_MAX_N {
        return oversize_independence(g, start);
    }
    max_clique_on(&complement_bits(g), budget, start)
}

// ---------------------------------------------------------------------
// Chromatic number (saturation-order decision search per color count)

struct ColorSearch<'a> {
    adj: &'a [Bits],
    target: usize,
    colors: Vec<Option<u32>>,
    /// Per node, the set of colors its neighbors occupy.
    forbidden: Vec<Bits>,
    uncolored: usize,
    used: usize,
    deadline: Instant,
    timed_out: bool,
    tick: u32,
}

impl ColorSearch<'_> {
    fn out_of_time(&mut self) -> bool {
        self.tick = self.tick.wrapping_add(1);
        if self.tick % 1024 == 0 && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn assign(&mut self, v: usize, c: u32) {
        self.colors[v] = Some(c);
        self.uncolored -= 1;
        for u in self.adj[v].ones() {
            self.forbidden[u].set(c as usize);
        }
    }

    fn unassign(&mut self, v: usize, c: u32) {
        self.colors[v] = None;
        self.uncolored += 1;
        for u in self.adj[v].ones() {
            // Another neighbor of u may still hold c; recompute.
            if self.adj[u].ones().all(|w| self.colors[w] != Some(c)) {
                self.forbidden[u].unset(c as usize);
            }
        }
    }

    /// Uncolored node with the most saturated palette, then highest
    /// degree, then lowest id.
    fn pick(&self) -> usize {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.adj.len() {
            if self.colors[v].is_some() {
                continue;
            }
            let sat = self.forbidden[v].count();
            let deg = self.adj[v].count();
            let better = match best {
                None => true,
                Some((s, d, _)) => sat > s || (sat == s && deg > d),
            };
            if better {
                best = Some((sat, deg, v));
            }
        }
        best.expect("pick called with uncolored nodes").2
    }

    fn solve(&mut self) -> bool {
        if self.out_of_time() {
            return false;
        }
        if self.uncolored == 0 {
            return true;
        }
        let v = self.pick();
        // Allowing at most one brand-new color index kills the color
        // permutation symmetry.
        let limit = self.target.min(self.used + 1);
        for c in 0..limit as u32 {
            if self.forbidden[v].test(c as usize) {
                continue;
            }
            let introduces = c as usize == self.used;
            if introduces {
                self.used += 1;
            }
            self.assign(v, c);
            if self.solve() {
                return true;
            }
            self.unassign(v, c);
            if introduces {
                self.used -= 1;
            }
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

/// Greedy coloring in saturation order: the standard upper-bound
/// heuristic and initial witness.
fn dsatur_coloring(adj: &[Bits]) -> Vec<u32> {
    let n = adj.len();
    let mut colors: Vec<Option<u32>> = vec![None; n];
    let mut forbidden: Vec<Bits> = vec![Bits::empty(n.max(1)); n];
    for _ in 0..n {
        let mut pick: Option<(usize, usize, usize)> = None;
        for v in 0..n {
            if colors[v].is_some() {
                continue;
            }
            let sat = forbidden[v].count();
            let deg = adj[v].count();
            let better = match pick {
                None => true,
                Some((s, d, _)) => sat > s || (sat == s && deg > d),
            };
            if better {
                pick = Some((sat, deg, v));
            }
        }
        let v = pick.unwrap().2;
        let c = (0..n as u32).find(|&c| !forbidden[v].test(c as usize)).unwrap();
        colors[v] = Some(c);
        for u in adj[v].ones() {
            forbidden[u].set(c as usize);
        }
    }
    colors.into_iter().map(|c| c.unwrap()).collect()
}

/// Exact chromatic number: clique lower bound, saturation-greedy upper
/// bound, then one decision search per candidate count, pre-coloring the
/// clique witness to break symmetry. Interval on budget exhaustion.
pub fn chromatic_number(g: &GraphSnapshot, budget: Duration) -> ParamResult {
    let start = Instant::now();
    let n = g.node_count();
    if n > EXACT_SOLVER_MAX_N {
        return oversize_chromatic(g, start);
    }
    let adj = adjacency_bits(g);
    let deadline = start + budget;

    // Spend at most a third of the budget proving the lower bound.
    let clique = max_clique_on(&adj, budget / 3, start);
    let clique_set: Vec<usize> = match &clique.witness {
        Witness::Set(s) => s.iter().map(|&v| v as usize).collect(),
        Witness::Coloring(_) => unreachable!("clique witness is a set"),
    };
    let mut lower = clique_set.len().max(usize::from(n > 0));

    let greedy = dsatur_coloring(&adj);
    let mut upper_witness = greedy;
    let mut upper = upper_witness.iter().map(|&c| c as usize + 1).max().unwrap_or(0);

    let mut timed_out = false;
    while lower < upper {
        // Decide `lower` colors; failure proves χ > lower.
        let mut search = ColorSearch {
            adj: &adj,
            target: lower,
            colors: vec![None; n],
            forbidden: vec![Bits::empty(n.max(1)); n],
            uncolored: n,
            used: 0,
            deadline,
            timed_out: false,
            tick: 0,
        };
        for (i, &v) in clique_set.iter().enumerate() {
            if i >= lower {
                break;
            }
            search.assign(v, i as u32);
            search.used += 1;
        }
        let colorable = search.solve();
        if search.timed_out {
            timed_out = true;
            break;
        }
        if colorable {
            upper_witness = search.colors.iter().map(|c| c.unwrap()).collect();
            upper = lower;
            break;
        }
        lower += 1;
    }

    ParamResult {
        value: upper as u64,
        lower: lower.min(upper) as u64,
        upper: upper as u64,
        exact: !timed_out && lower >= upper,
        witness: Witness::Coloring(upper_witness),
        elapsed: start.elapsed(),
    }
}

// ---------------------------------------------------------------------
// Domination number

/// Greedy cover: repeatedly take the node whose closed neighborhood
/// covers the most still-undominated nodes.
fn greedy_dominating(closed: &[Bits], n: usize) -> Vec<usize> {
    let mut undominated = Bits::full(n);
    let mut set = Vec::new();
    while !undominated.is_empty() {
        let v = (0..n)
            .max_by_key(|&v| (closed[v].intersection_count(&undominated), std::cmp::Reverse(v)))
            .unwrap();
        set.push(v);
        undominated.and_not_assign(&closed[v]);
    }
    set.sort_unstable();
    set
}

struct DominationSearch<'a> {
    closed: &'a [Bits],
    n: usize,
    best: usize,
    witness: Vec<usize>,
    deadline: Instant,
    timed_out: bool,
    tick: u32,
}

impl DominationSearch<'_> {
    fn out_of_time(&mut self) -> bool {
        self.tick = self.tick.wrapping_add(1);
        if self.tick % 256 == 0 && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn search(&mut self, chosen: &mut Vec<usize>, dominated: &Bits) {
        if self.out_of_time() {
            return;
        }
        let remaining = self.n - dominated.count();
        if remaining == 0 {
            if chosen.len() < self.best {
                self.best = chosen.len();
                self.witness = chosen.clone();
            }
            return;
        }
        // Each added node covers at most max_cover new ones.
        let max_cover = (0..self.n)
            .map(|v| {
                let mut fresh = self.closed[v].clone();
                fresh.and_not_assign(dominated);
                fresh.count()
            })
            .max()
            .unwrap_or(1)
            .max(1);
        if chosen.len() + remaining.div_ceil(max_cover) >= self.best {
            return;
        }
        // The lowest undominated node must be covered by something in
        // its closed neighborhood; branch over those.
        let u = (0..self.n).find(|&v| !dominated.test(v)).unwrap();
        let mut candidates: Vec<usize> = vec![u];
        candidates.extend(self.closed[u].ones().filter(|&v| v != u));
        candidates.sort_unstable();
        for v in candidates {
            let mut next = dominated.clone();
            next.or_assign(&self.closed[v]);
            chosen.push(v);
            self.search(chosen, &next);
            chosen.pop();
            if self.timed_out {
                return;
            }
        }
    }
}

/// Exact domination number; interval on budget exhaustion. Practical up
/// to a few dozen nodes — the branching degree is a node's degree plus
/// one.
pub fn domination_number(g: &GraphSnapshot, budget: Duration) -> ParamResult {
    let start = Instant::now();
    let n = g.node_count();
    if n > EXACT_SOLVER_MAX_N {
        return oversize_domination(g, start);
    }
    let mut closed = adjacency_bits(g);
    for (v, b) in closed.iter_mut().enumerate() {
        b.set(v);
    }
    let greedy = greedy_dominating(&closed, n);
    let mut search = DominationSearch {
        closed: &closed,
        n,
        best: greedy.len(),
        witness: greedy,
        deadline: start + budget,
        timed_out: false,
        tick: 0,
    };
    search.search(&mut Vec::new(), &Bits::empty(n));
    let upper = search.best as u64;
    let lower = if search.timed_out {
        let max_closed = closed.iter().map(Bits::count).max().unwrap_or(1);
        (n.div_ceil(max_closed)) as u64
    } else {
        upper
    };
    let mut witness = search.witness;
    witness.sort_unstable();
    ParamResult {
        value: upper,
        lower: lower.min(upper),
        upper,
        exact: !search.timed_out,
        witness: Witness::Set(witness.into_iter().map(|v| v as NodeId).collect()),
        elapsed: start.elapsed(),
    }
}

/// True when every node is in `set` or adjacent to a member.
pub fn is_dominating(g: &GraphSnapshot, set: &[NodeId]) -> bool {
    let n = g.node_count();
    let mut covered = vec![false; n];
    for &v in set {
        covered[v as usize] = true;
        for &u in g.neighbors(v) {
            covered[u as usize] = true;
        }
    }
    covered.iter().all(|&c| c)
}

/// The constructive dominating set for a snapshot with at least one
/// clone step: all pre-step nodes outside the colex-first parent subset,
/// plus that subset's clone. Verified dominating before returning.
pub fn construct_dominating_set(g: &GraphSnapshot) -> Result<Vec<NodeId>> {
    let first = g
        .first_clone_of_level()
        .ok_or_else(|| Error::contract("constructive dominating set needs a cloned level"))?;
    let subset = match g.provenance(first) {
        NodeRef::Clone { parents, .. } => parents.clone(),
        NodeRef::Original { .. } => unreachable!("first clone has clone provenance"),
    };
    let mut set: Vec<NodeId> = (0..first).filter(|v| subset.binary_search(v).is_err()).collect();
    set.push(first);
    if !is_dominating(g, &set) {
        return Err(Error::contract(
            "constructed set failed the domination check",
        ));
    }
    Ok(set)
}

// ---------------------------------------------------------------------
// Greedy-only fallbacks for graphs too large for bitsets

fn oversize_clique(g: &GraphSnapshot, start: Instant) -> ParamResult {
    // Neighbor lists are sorted; greedy over descending degree.
    let n = g.node_count();
    let mut ids: Vec<NodeId> = (0..n as NodeId).collect();
    ids.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut clique: Vec<NodeId> = Vec::new();
    for v in ids {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    ParamResult {
        value: clique.len() as u64,
        lower: clique.len() as u64,
        upper: n as u64,
        exact: false,
        witness: Witness::Set(clique),
        elapsed: start.elapsed(),
    }
}

fn oversize_independence(g: &GraphSnapshot, start: Instant) -> ParamResult {
    let n = g.node_count();
    let mut chosen = vec![false; n];
    let mut set: Vec<NodeId> = Vec::new();
    for v in 0..n as NodeId {
        if g.neighbors(v).iter().all(|&u| !chosen[u as usize]) {
            chosen[v as usize] = true;
            set.push(v);
        }
    }
    // Any matching kills one node per edge: alpha <= n - matching size.
    let mut matched = vec![false; n];
    let mut matching = 0u64;
    for (u, v) in g.edges() {
        if !matched[u as usize] && !matched[v as usize] {
            matched[u as usize] = true;
            matched[v as usize] = true;
            matching += 1;
        }
    }
    ParamResult {
        value: set.len() as u64,
        lower: set.len() as u64,
        upper: n as u64 - matching,
        exact: false,
        witness: Witness::Set(set),
        elapsed: start.elapsed(),
    }
}

fn oversize_chromatic(g: &GraphSnapshot, start: Instant) -> ParamResult {
    let n = g.node_count();
    // Greedy coloring in id order over neighbor lists.
    let mut colors: Vec<u32> = vec![0; n];
    let mut seen: Vec<u32> = Vec::new();
    let mut max_color = 0u32;
    for v in 0..n {
        seen.clear();
        seen.extend(
            g.neighbors(v as NodeId)
                .iter()
                .filter(|&&u| (u as usize) < v)
                .map(|&u| colors[u as usize]),
        );
        seen.sort_unstable();
        let mut c = 0u32;
        for &s in &seen {
            if s == c {
                c += 1;
            } else if s > c {
                break;
            }
        }
        colors[v] = c;
        max_color = max_color.max(c);
    }
    let lower = if g.edge_count() > 0 { 2 } else { 1.min(n as u64) };
    ParamResult {
        value: u64::from(max_color) + 1,
        lower,
        upper: u64::from(max_color) + 1,
        exact: false,
        witness: Witness::Coloring(colors),
        elapsed: start.elapsed(),
    }
}

fn oversize_domination(g: &GraphSnapshot, start: Instant) -> ParamResult {
    let n = g.node_count();
    let mut undominated = vec![true; n];
    let mut remaining = n;
    let mut set: Vec<NodeId> = Vec::new();
    while remaining > 0 {
        let v = (0..n as NodeId)
            .max_by_key(|&v| {
                let fresh = usize::from(undominated[v as usize])
                    + g.neighbors(v).iter().filter(|&&u| undominated[u as usize]).count();
                (fresh, std::cmp::Reverse(v))
            })
            .unwrap();
        set.push(v);
        if undominated[v as usize] {
            undominated[v as usize] = false;
            remaining -= 1;
        }
        for &u in g.neighbors(v) {
            if undominated[u as usize] {
                undominated[u as usize] = false;
                remaining -= 1;
            }
        }
    }
    set.sort_unstable();
    let max_closed = (0..n as NodeId).map(|v| g.degree(v) + 1).max().unwrap_or(1);
    ParamResult {
        value: set.len() as u64,
        lower: n.div_ceil(max_closed) as u64,
        upper: set.len() as u64,
        exact: false,
        witness: Witness::Set(set),
        elapsed: start.elapsed(),
    }
}
