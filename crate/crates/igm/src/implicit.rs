//! Oracles for the generation after the last materialized one.
//!
//! A clone step over an `n`-node base adds `C(n, m)` nodes, which is far
//! beyond any node budget once `n` passes a few dozen. This module
//! answers questions about that un-materialized generation — adjacency,
//! degrees, exact distances, uniform samples, diameter — from the base
//! alone, addressing clones by the colex rank of their parent subset.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::combin::{binomial, colex_rank, colex_subsets, colex_unrank, BigCount};
use crate::error::{display_count, Error, Result};
use crate::evolve::{evolve_step, subset_size};
use crate::graph::{GraphSnapshot, NodeId};
use crate::metrics::traversal;

/// Default ceiling on clone-pair evaluations for the exact diameter scan.
pub const DEFAULT_PAIR_BUDGET: u64 = 10_000_000;

/// A node of the implicit layer.
///
/// Old nodes keep their base ids; a clone is addressed by the colex rank
/// of its parent subset, which is exactly the offset its id would have
/// past the base if the layer were materialized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LayerNode {
    Old(NodeId),
    Clone(BigCount),
}

impl fmt::Display for LayerNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerNode::Old(id) => write!(f, "o:{id}"),
            LayerNode::Clone(rank) => write!(f, "c:{rank}"),
        }
    }
}

impl FromStr for LayerNode {
    type Err = Error;

    /// Parses the `o:<id>` / `c:<decimal rank>` address syntax.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(id) = s.strip_prefix("o:") {
            let id = id
                .parse::<NodeId>()
                .map_err(|_| Error::contract(format!("bad old-node id `{id}`")))?;
            return Ok(LayerNode::Old(id));
        }
        if let Some(rank) = s.strip_prefix("c:") {
            let rank = rank
                .parse::<BigCount>()
                .map_err(|_| Error::contract(format!("bad clone rank `{rank}`")))?;
            return Ok(LayerNode::Clone(rank));
        }
        Err(Error::contract(format!(
            "node address `{s}` must look like o:<id> or c:<rank>"
        )))
    }
}

/// Diameter query mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMode {
    /// Category analysis plus a full clone-pair scan; refused when the
    /// scan would exceed the pair budget.
    Exact { pair_budget: u64 },
    /// Random node pairs; yields a lower bound.
    Sampled { pairs: u64, seed: u64 },
}

/// Outcome of a diameter query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterReport {
    /// `None` when the layer is disconnected (possible only for bases
    /// with fewer than `2k` nodes).
    pub value: Option<u64>,
    /// True when `value` is the true diameter rather than a lower bound.
    pub exact: bool,
    /// Node or clone pairs actually evaluated.
    pub pairs_scanned: u64,
}

/// A view of the generation one step past `base`, with clones addressed
/// by colex rank. Immutable; every oracle is a pure function of the base.
#[derive(Debug, Clone)]
pub struct ImplicitLayer {
    base: GraphSnapshot,
    k: usize,
    m: usize,
    clone_count: BigCount,
    /// The closed-form distance arguments need `m >= 2`; below that the
    /// layer has at most `2n + 1` nodes, so it is simply materialized.
    fallback: Option<GraphSnapshot>,
}

impl ImplicitLayer {
    pub fn over(base: GraphSnapshot, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::contract("k must be at least 1"));
        }
        let n = base.node_count();
        let m = subset_size(n, k);
        let clone_count = binomial(n as u64, m as u64);
        let fallback = if m < 2 {
            // clone_count is 1 or n here, so this materialization is
            // always a small constant multiple of the base.
            Some(evolve_step(&base, k, 2 * n + 1)?)
        } else {
            None
        };
        Ok(ImplicitLayer {
            base,
            k,
            m,
            clone_count,
            fallback,
        })
    }

    pub fn base(&self) -> &GraphSnapshot {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Level of the layer itself (one past the base).
    pub fn level(&self) -> usize {
        self.base.level() + 1
    }

    /// Parent-subset size of this step.
    pub fn subset_size(&self) -> usize {
        self.m
    }

    pub fn clone_count(&self) -> &BigCount {
        &self.clone_count
    }

    /// Total nodes of the layer.
    pub fn node_count(&self) -> BigCount {
        &self.clone_count + BigCount::from(self.base.node_count())
    }

    /// Exact `(nodes, edges)` of the layer.
    pub fn layer_counts(&self) -> (BigCount, BigCount) {
        let e = BigCount::from(self.base.edge_count()) + &self.clone_count * self.m;
        (self.node_count(), e)
    }

    /// Parent subset of a clone, sorted ascending.
    pub fn parents(&self, rank: &BigCount) -> Result<Vec<NodeId>> {
        self.check_rank(rank)?;
        colex_unrank(rank, self.m, self.base.node_count())
    }

    /// Rank of the clone over `subset` (which must be sorted, duplicate
    /// free, of the step's subset size, within the base).
    pub fn rank_of(&self, subset: &[NodeId]) -> Result<BigCount> {
        if subset.len() != self.m {
            return Err(Error::contract(format!(
                "subset has {} nodes, this step clones {}-subsets",
                subset.len(),
                self.m
            )));
        }
        let n = self.base.node_count() as NodeId;
        if let Some(&v) = subset.iter().find(|&&v| v >= n) {
            return Err(Error::contract(format!("subset node {v} outside base 0..{n}")));
        }
        colex_rank(subset)
    }

    fn check_node(&self, v: &LayerNode) -> Result<()> {
        match v {
            LayerNode::Old(id) => {
                if (*id as usize) < self.base.node_count() {
                    Ok(())
                } else {
                    Err(Error::contract(format!(
                        "old id {id} out of range: base has nodes 0..{}",
                        self.base.node_count()
                    )))
                }
            }
            LayerNode::Clone(rank) => self.check_rank(rank),
        }
    }

    fn check_rank(&self, rank: &BigCount) -> Result<()> {
        if rank < &self.clone_count {
            Ok(())
        } else {
            Err(Error::contract(format!(
                "rank {rank} out of range: valid clone ranks are 0..={}",
                &self.clone_count - 1u32
            )))
        }
    }

    /// Layer adjacency. Old-old pairs keep base adjacency, an old node
    /// touches a clone exactly when it belongs to the parent subset, and
    /// clones never touch each other.
    pub fn are_adjacent(&self, a: &LayerNode, b: &LayerNode) -> Result<bool> {
        self.check_node(a)?;
        self.check_node(b)?;
        Ok(match (a, b) {
            (LayerNode::Old(u), LayerNode::Old(v)) => self.base.has_edge(*u, *v),
            (LayerNode::Old(u), LayerNode::Clone(r))
            | (LayerNode::Clone(r), LayerNode::Old(u)) => {
                self.parents(r)?.binary_search(u).is_ok()
            }
            (LayerNode::Clone(_), LayerNode::Clone(_)) => false,
        })
    }

    /// Layer degree: a clone has its subset size, an old node gains one
    /// neighbor per subset containing it, `C(n-1, m-1)` in total.
    pub fn degree(&self, v: &LayerNode) -> Result<BigCount> {
        self.check_node(v)?;
        Ok(match v {
            LayerNode::Clone(_) => BigCount::from(self.m),
            LayerNode::Old(u) => {
                let base_deg = BigCount::from(self.base.degree(*u));
                if self.m == 0 {
                    base_deg
                } else {
                    base_deg + binomial(self.base.node_count() as u64 - 1, self.m as u64 - 1)
                }
            }
        })
    }

    /// Exact layer distance; `None` when unreachable (possible only in
    /// the materialized small-`m` regime — for `m >= 2` every pair is
    /// within distance 4).
    pub fn distance(&self, a: &LayerNode, b: &LayerNode) -> Result<Option<u64>> {
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Ok(Some(0));
        }
        if let Some(g) = &self.fallback {
            let d = traversal::bfs_distances(g, self.concrete_id(a))
                [self.concrete_id(b) as usize];
            return Ok(d.map(u64::from));
        }
        Ok(Some(match (a, b) {
            (LayerNode::Old(u), LayerNode::Old(v)) => {
                if self.base.has_edge(*u, *v) {
                    1
                } else {
                    2 // any subset holding both is a common neighbor
                }
            }
            (LayerNode::Old(u), LayerNode::Clone(r))
            | (LayerNode::Clone(r), LayerNode::Old(u)) => {
                let s = self.parents(r)?;
                if s.binary_search(u).is_ok() {
                    1
                } else if s.iter().any(|&w| self.base.has_edge(*u, w)) {
                    2 // hop through a parent adjacent to u
                } else {
                    3 // u, a sibling clone over {u, w}, w in S, the clone
                }
            }
            (LayerNode::Clone(r), LayerNode::Clone(t)) => {
                let s = self.parents(r)?;
                let t = self.parents(t)?;
                if intersects(&s, &t) {
                    2 // shared parent
                } else if self.crossing_edge(&s, &t) {
                    3 // parent edge bridges the subsets
                } else {
                    4 // via a mixed clone over one parent from each side
                }
            }
        }))
    }

    /// Concrete id a layer node would have after materialization. Only
    /// safe in the fallback regime, where clone ranks are machine sized.
    fn concrete_id(&self, v: &LayerNode) -> NodeId {
        match v {
            LayerNode::Old(u) => *u,
            LayerNode::Clone(r) => {
                let offset = r.to_u32().expect("fallback layer ranks are small");
                self.base.node_count() as NodeId + offset
            }
        }
    }

    fn crossing_edge(&self, s: &[NodeId], t: &[NodeId]) -> bool {
        s.iter()
            .any(|&x| t.iter().any(|&y| self.base.has_edge(x, y)))
    }

    /// Uniform sample of layer nodes, reproducible from the seed. Big
    /// clone ranks are drawn by rejection over fixed-width random
    /// integers, so the distribution is exactly uniform.
    pub fn sample_nodes(&self, count: usize, seed: u64) -> Vec<LayerNode> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let total = self.node_count();
        (0..count).map(|_| self.draw(&mut rng, &total)).collect()
    }

    /// Uniform sample of clone ranks only, reproducible from the seed.
    /// Useful when old nodes would drown out clones (or the reverse) in
    /// a proportional draw.
    pub fn sample_clone_ranks(&self, count: usize, seed: u64) -> Vec<BigCount> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| sample_below(&mut rng, &self.clone_count))
            .collect()
    }

    fn draw(&self, rng: &mut impl RngCore, total: &BigCount) -> LayerNode {
        let x = sample_below(rng, total);
        let n = BigCount::from(self.base.node_count());
        if x < n {
            LayerNode::Old(x.to_u32().expect("old ids fit u32"))
        } else {
            LayerNode::Clone(x - n)
        }
    }

    /// Layer diameter.
    ///
    /// Exact mode decides the old-old and old-clone maxima by direct
    /// neighborhood tests and settles the clone-clone maximum — in
    /// particular whether two disjoint parent subsets with no crossing
    /// edge exist, the distance-4 witness — by scanning all clone pairs.
    /// The scan is refused when `clone_count^2` exceeds the pair budget,
    /// since that witness search has no known efficient shortcut.
    ///
    /// Sampled mode takes `pairs` random pairs and reports their largest
    /// distance, a lower bound. Each pair is drawn from its own RNG
    /// stream indexed by position, so a future partition of the scan
    /// across workers cannot change the result.
    ///
    /// In the small-`m` fallback regime the layer is materialized, so
    /// both modes return the exact breadth-first diameter.
    pub fn implicit_diameter(&self, mode: DiameterMode) -> Result<DiameterReport> {
        if let Some(g) = &self.fallback {
            return Ok(DiameterReport {
                value: traversal::diameter(g),
                exact: true,
                pairs_scanned: 0,
            });
        }
        match mode {
            DiameterMode::Exact { pair_budget } => self.exact_diameter(pair_budget),
            DiameterMode::Sampled { pairs, seed } => Ok(self.sampled_diameter(pairs, seed)),
        }
    }

    fn exact_diameter(&self, pair_budget: u64) -> Result<DiameterReport> {
        let n = self.base.node_count();
        let scan_size = &self.clone_count * &self.clone_count;
        if scan_size > BigCount::from(pair_budget) {
            return Err(Error::PairBudget {
                pairs: display_count(&scan_size),
                budget: pair_budget,
            });
        }

        // Old-old: 1 on edges, else 2 via a shared clone.
        let complete = self.base.edge_count() == (n as u64 * (n as u64 - 1)) / 2;
        let old_old = if n == 1 {
            0
        } else if complete {
            1
        } else {
            2
        };

        // Old-clone: 3 iff some node's closed neighborhood leaves room
        // for a whole subset outside it; else 2 unless every subset is
        // forced to contain every node (m = n).
        let old_clone = if self.m == n {
            1
        } else if (0..n as NodeId).any(|u| n - 1 - self.base.degree(u) >= self.m) {
            3
        } else {
            2
        };

        // Clone-clone: full pair scan, early exit once 4 is witnessed.
        let mut clone_clone = 0u64;
        let mut pairs_scanned = 0u64;
        let subsets: Vec<Vec<NodeId>> = colex_subsets(n, self.m).collect();
        'scan: for (i, s) in subsets.iter().enumerate() {
            for t in &subsets[i + 1..] {
                pairs_scanned += 1;
                let d = if intersects(s, t) {
                    2
                } else if self.crossing_edge(s, t) {
                    3
                } else {
                    4
                };
                clone_clone = clone_clone.max(d);
                if clone_clone == 4 {
                    break 'scan;
                }
            }
        }

        Ok(DiameterReport {
            value: Some(old_old.max(old_clone).max(clone_clone)),
            exact: true,
            pairs_scanned,
        })
    }

    fn sampled_diameter(&self, pairs: u64, seed: u64) -> DiameterReport {
        let total = self.node_count();
        let mut best = 0u64;
        for i in 0..pairs {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let a = self.draw(&mut rng, &total);
            let b = self.draw(&mut rng, &total);
            let d = self
                .distance(&a, &b)
                .expect("sampled nodes are in range")
                .expect("m >= 2 layers are connected");
            best = best.max(d);
        }
        DiameterReport {
            value: Some(best),
            exact: false,
            pairs_scanned: pairs,
        }
    }
}

/// Uniform draw from `[0, bound)` by rejection on `bound.bits()`-wide
/// integers; each try succeeds with probability > 1/2.
fn sample_below(rng: &mut impl RngCore, bound: &BigCount) -> BigCount {
    use num_traits::Zero;
    assert!(!bound.is_zero(), "empty sample range");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask: u8 = match bits % 8 {
        0 => 0xff,
        rem => (1u8 << rem) - 1,
    };
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let x = BigCount::from_bytes_be(&buf);
        if &x < bound {
            return x;
        }
    }
}

fn intersects(s: &[NodeId], t: &[NodeId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < s.len() && j < t.len() {
        match s[i].cmp(&t[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedSpec;
    use num_traits::One;

    fn layer(spec: &str) -> ImplicitLayer {
        let base = spec.parse::<SeedSpec>().unwrap().build().unwrap();
        ImplicitLayer::over(base, 2).unwrap()
    }

    fn two_k2() -> ImplicitLayer {
        let base = GraphSnapshot::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        ImplicitLayer::over(base, 2).unwrap()
    }

    fn big(v: u32) -> BigCount {
        BigCount::from(v)
    }

    #[test]
    fn counts_over_small_bases() {
        assert_eq!(two_k2().layer_counts(), (big(10), big(14)));
        assert_eq!(layer("C4").layer_counts(), (big(10), big(16)));
    }

    #[test]
    fn counts_over_live_generation() {
        // Base with 262 nodes and 1274 edges: the layer's counts involve
        // C(262, 131), which only fits a big integer.
        let t = crate::evolve::evolve(
            SeedSpec::Complete(1).build().unwrap(),
            2,
            4,
            crate::evolve::DEFAULT_NODE_BUDGET,
        )
        .unwrap();
        let l = ImplicitLayer::over(t.last().clone(), 2).unwrap();
        let clones = binomial(262, 131);
        let (n, e) = l.layer_counts();
        assert_eq!(n, &clones + big(262));
        assert_eq!(e, &clones * 131u32 + big(1274));
        assert_eq!(l.subset_size(), 131);
    }

    #[test]
    fn adjacency_cases() {
        let l = layer("C4");
        let rank01 = l.rank_of(&[0, 1]).unwrap();
        assert_eq!(rank01, big(0));
        assert!(l
            .are_adjacent(&LayerNode::Old(0), &LayerNode::Clone(rank01))
            .unwrap());
        assert!(!l
            .are_adjacent(&LayerNode::Clone(big(0)), &LayerNode::Clone(big(5)))
            .unwrap());
        assert!(!l.are_adjacent(&LayerNode::Old(0), &LayerNode::Old(2)).unwrap());
        assert!(l.are_adjacent(&LayerNode::Old(0), &LayerNode::Old(1)).unwrap());
    }

    #[test]
    fn out_of_range_nodes_are_refused() {
        let l = layer("C4");
        assert!(l.are_adjacent(&LayerNode::Old(4), &LayerNode::Old(0)).is_err());
        let err = l
            .degree(&LayerNode::Clone(big(6)))
            .unwrap_err()
            .to_string();
        assert!(err.contains("0..=5"), "{err}");
    }

    #[test]
    fn degrees_and_handshake() {
        let l = layer("C4");
        assert_eq!(l.degree(&LayerNode::Old(0)).unwrap(), big(5)); // 2 + C(3,1)
        assert_eq!(l.degree(&LayerNode::Clone(big(3))).unwrap(), big(2));

        // Handshake over the 2K2 layer: degree sum = 2 * 14.
        let l = two_k2();
        let mut sum = BigCount::from(0u32);
        for u in 0..4 {
            sum += l.degree(&LayerNode::Old(u)).unwrap();
        }
        let mut rank = BigCount::from(0u32);
        while rank < *l.clone_count() {
            sum += l.degree(&LayerNode::Clone(rank.clone())).unwrap();
            rank += BigCount::one();
        }
        assert_eq!(sum, big(28));
    }

    #[test]
    fn distance_closed_forms() {
        let l = two_k2(); // base edges 0-2 and 1-3
        // {0,1} and {2,3} are disjoint but bridged by the base edge 0-2,
        // so their clones sit at distance 3.
        let a = l.rank_of(&[0, 1]).unwrap();
        let b = l.rank_of(&[2, 3]).unwrap();
        assert_eq!(
            l.distance(&LayerNode::Clone(a), &LayerNode::Clone(b)).unwrap(),
            Some(3)
        );
        // {0,2} and {1,3} are the two base edges themselves: disjoint
        // and with every cross pair a non-edge, the distance-4 witness.
        let a = l.rank_of(&[0, 2]).unwrap();
        let b = l.rank_of(&[1, 3]).unwrap();
        assert_eq!(
            l.distance(&LayerNode::Clone(a), &LayerNode::Clone(b)).unwrap(),
            Some(4)
        );

        let l = layer("C4");
        let a = l.rank_of(&[0, 1]).unwrap();
        let b = l.rank_of(&[0, 2]).unwrap();
        assert_eq!(
            l.distance(&LayerNode::Clone(a), &LayerNode::Clone(b)).unwrap(),
            Some(2)
        );
        assert_eq!(
            l.distance(&LayerNode::Old(0), &LayerNode::Old(2)).unwrap(),
            Some(2)
        );
        assert_eq!(l.distance(&LayerNode::Old(1), &LayerNode::Old(1)).unwrap(), Some(0));
    }

    #[test]
    fn fallback_regime_handles_disconnection() {
        // K1 with k = 2 takes m = 0: the layer is two isolated nodes.
        let l = layer("K1");
        assert_eq!(
            l.distance(&LayerNode::Old(0), &LayerNode::Clone(big(0))).unwrap(),
            None
        );
        let d = l.implicit_diameter(DiameterMode::Exact { pair_budget: 10 }).unwrap();
        assert_eq!(d.value, None);
        assert!(d.exact);
    }

    #[test]
    fn exact_diameters() {
        let d = two_k2()
            .implicit_diameter(DiameterMode::Exact {
                pair_budget: DEFAULT_PAIR_BUDGET,
            })
            .unwrap();
        assert_eq!((d.value, d.exact), (Some(4), true));

        let d = layer("C4")
            .implicit_diameter(DiameterMode::Exact {
                pair_budget: DEFAULT_PAIR_BUDGET,
            })
            .unwrap();
        assert_eq!((d.value, d.exact), (Some(3), true));
    }

    #[test]
    fn exact_diameter_over_budget_is_refused() {
        let err = two_k2()
            .implicit_diameter(DiameterMode::Exact { pair_budget: 30 })
            .unwrap_err()
            .to_string();
        assert!(err.contains("sampled"), "{err}");
    }

    #[test]
    fn sampled_diameter_is_reproducible_lower_bound() {
        let l = layer("C4");
        let a = l
            .implicit_diameter(DiameterMode::Sampled { pairs: 200, seed: 7 })
            .unwrap();
        let b = l
            .implicit_diameter(DiameterMode::Sampled { pairs: 200, seed: 7 })
            .unwrap();
        assert_eq!(a, b);
        assert!(!a.exact);
        assert!(a.value.unwrap() <= 3);
    }

    #[test]
    fn sampling_matches_population_ratio() {
        let l = layer("C4"); // 4 old, 6 clones
        let sample = l.sample_nodes(10_000, 99);
        assert_eq!(sample, l.sample_nodes(10_000, 99));
        let clones = sample
            .iter()
            .filter(|v| matches!(v, LayerNode::Clone(_)))
            .count();
        let fraction = clones as f64 / 10_000.0;
        assert!((fraction - 0.6).abs() < 0.02, "clone fraction {fraction}");
    }

    #[test]
    fn node_addresses_round_trip() {
        for addr in ["o:0", "o:41", "c:0", "c:364950428295639250777230977182937950631063637653015344224357416878384793565048"] {
            let node = addr.parse::<LayerNode>().unwrap();
            assert_eq!(node.to_string(), addr);
        }
        assert!("x:3".parse::<LayerNode>().is_err());
        assert!("c:-1".parse::<LayerNode>().is_err());
        assert!("o:".parse::<LayerNode>().is_err());
    }
}
