//! The iterated clone step: materializing successive generations.

use num_traits::ToPrimitive;

use crate::combin::{binomial, colex_subsets, BigCount};
use crate::error::{CapacityError, Error, Result};
use crate::graph::{GraphSnapshot, NodeRef};
use crate::seed::SeedSpec;

/// The two knobs of the process: where it starts and how wide the
/// cloned subsets are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    pub seed: SeedSpec,
    /// Denominator of the subset fraction; 2 is the half-model.
    pub k: usize,
}

/// Default ceiling on materialized nodes. Big enough for every level any
/// seed can actually reach: the first over-budget level is astronomically
/// over, never marginally.
pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Subset size used by the step applied to an `n`-node generation.
pub fn subset_size(n: usize, k: usize) -> usize {
    n / k
}

/// One clone step: for every `floor(n/k)`-subset `S` of the nodes of
/// `prev`, append a new node adjacent to exactly `S`. Clones are appended
/// in colex order of `S`, so the clone of rank `r` gets id `n + r`.
///
/// Fails with a capacity error when the result would exceed `node_budget`
/// nodes; `prev` is untouched either way.
pub fn evolve_step(prev: &GraphSnapshot, k: usize, node_budget: usize) -> Result<GraphSnapshot> {
    if k == 0 {
        return Err(Error::contract("k must be at least 1"));
    }
    let n = prev.node_count();
    let m = subset_size(n, k);
    let clone_count = binomial(n as u64, m as u64);
    let level = prev.level() + 1;
    let within_budget = clone_count
        .to_usize()
        .and_then(|c| n.checked_add(c))
        .is_some_and(|total| total <= node_budget);
    if !within_budget {
        return Err(CapacityError {
            level,
            base_nodes: n,
            subset_size: m,
            clone_count,
            budget: node_budget,
        }
        .into());
    }
    let clones = clone_count.to_usize().unwrap();

    let mut adjacency = Vec::with_capacity(n + clones);
    for v in 0..n {
        adjacency.push(prev.neighbors(v as u32).to_vec());
    }
    let mut provenance: Vec<NodeRef> = (0..n).map(|v| prev.provenance(v as u32).clone()).collect();

    for (rank, subset) in colex_subsets(n, m).enumerate() {
        let id = (n + rank) as u32;
        for &parent in &subset {
            // Ranks ascend, so each old list stays sorted.
            adjacency[parent as usize].push(id);
        }
        adjacency.push(subset.clone());
        provenance.push(NodeRef::Clone {
            level,
            parents: subset,
        });
    }

    let edge_count = prev.edge_count() + (m as u64) * (clones as u64);
    Ok(GraphSnapshot::from_parts(
        level, adjacency, provenance, edge_count,
    ))
}

/// Levels `0..=t` of an evolution, possibly cut short by the node budget.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// `snapshots[t]` is level `t`.
    pub snapshots: Vec<GraphSnapshot>,
    /// Set when a requested level was out of budget; the trajectory then
    /// holds every level that did fit.
    pub stopped: Option<CapacityError>,
    /// Subset fraction the trajectory was evolved with.
    pub k: usize,
}

impl Trajectory {
    /// The deepest materialized level.
    pub fn last(&self) -> &GraphSnapshot {
        self.snapshots.last().expect("trajectory holds the seed")
    }

    /// Measured `(nodes, edges)` per level.
    pub fn counts(&self) -> Vec<(BigCount, BigCount)> {
        self.snapshots
            .iter()
            .map(|g| {
                (
                    BigCount::from(g.node_count()),
                    BigCount::from(g.edge_count()),
                )
            })
            .collect()
    }
}

/// Materializes levels `0..=steps` from `seed`, stopping early (without
/// error) at the last level that fits in `node_budget`.
pub fn evolve(seed: GraphSnapshot, k: usize, steps: usize, node_budget: usize) -> Result<Trajectory> {
    if k == 0 {
        return Err(Error::contract("k must be at least 1"));
    }
    let mut snapshots = vec![seed];
    let mut stopped = None;
    for _ in 0..steps {
        match evolve_step(snapshots.last().unwrap(), k, node_budget) {
            Ok(next) => snapshots.push(next),
            Err(Error::Capacity(c)) => {
                stopped = Some(c);
                break;
            }
            Err(other) => return Err(other),
        }
    }
    Ok(Trajectory { snapshots, stopped, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::predicted_counts;
    use crate::seed::SeedSpec;

    fn run(spec: &str, steps: usize) -> Trajectory {
        let seed = spec.parse::<SeedSpec>().unwrap().build().unwrap();
        evolve(seed, 2, steps, DEFAULT_NODE_BUDGET).unwrap()
    }

    #[test]
    fn single_node_counts() {
        let t = run("K1", 4);
        let counts: Vec<(usize, u64)> = t
            .snapshots
            .iter()
            .map(|g| (g.node_count(), g.edge_count()))
            .collect();
        assert_eq!(counts, vec![(1, 0), (2, 0), (4, 2), (10, 14), (262, 1274)]);
        assert!(t.stopped.is_none());
    }

    #[test]
    fn square_counts() {
        let t = run("C4", 2);
        let counts: Vec<(usize, u64)> = t
            .snapshots
            .iter()
            .map(|g| (g.node_count(), g.edge_count()))
            .collect();
        assert_eq!(counts, vec![(4, 4), (10, 16), (262, 1276)]);
    }

    #[test]
    fn zero_subset_step_adds_one_isolated_node() {
        // n = 1, k = 2: the only 0-subset is empty, so the step adds a
        // single isolated clone.
        let t = run("K1", 1);
        let g1 = t.last();
        assert_eq!(g1.node_count(), 2);
        assert_eq!(g1.edge_count(), 0);
        assert!(matches!(
            g1.provenance(1),
            NodeRef::Clone { level: 1, parents } if parents.is_empty()
        ));
    }

    #[test]
    fn clone_ids_follow_colex_order() {
        let t = run("C4", 1);
        let g = t.last();
        // 2-subsets of {0..3} in colex order.
        let expected = [[0, 1], [0, 2], [1, 2], [0, 3], [1, 3], [2, 3]];
        for (r, want) in expected.iter().enumerate() {
            let id = (4 + r) as u32;
            assert_eq!(g.neighbors(id), want);
            assert!(matches!(
                g.provenance(id),
                NodeRef::Clone { level: 1, parents } if parents == want
            ));
        }
        g.validate().unwrap();
    }

    #[test]
    fn clones_form_an_independent_set() {
        let t = run("C4", 2);
        let g = t.last();
        let first = g.first_clone_of_level().unwrap();
        for u in first..g.node_count() as u32 {
            for &v in g.neighbors(u) {
                assert!(v < first, "clone {u} touches clone {v}");
            }
        }
    }

    #[test]
    fn old_node_degrees_grow_by_membership_count() {
        // An old node joins C(n-1, m-1) of the C(n, m) subsets.
        let t = run("K1", 4);
        let g3 = &t.snapshots[3];
        let g4 = &t.snapshots[4];
        assert_eq!(g3.degree(0), 4);
        assert_eq!(g4.degree(0), 4 + 126); // C(9, 4) = 126
        for v in 0..g3.node_count() as u32 {
            assert_eq!(g4.degree(v), g3.degree(v) + 126);
        }
    }

    #[test]
    fn measured_counts_match_predictions() {
        for spec in ["K1", "K2", "K3", "K5", "P2", "P4", "C3", "C5", "E3"] {
            let seed = spec.parse::<SeedSpec>().unwrap().build().unwrap();
            let (n0, e0) = (seed.node_count() as u64, seed.edge_count());
            for k in [1, 2, 3] {
                let t = evolve(seed.clone(), k, 3, DEFAULT_NODE_BUDGET).unwrap();
                let predicted = predicted_counts(n0, e0, k, t.snapshots.len() - 1);
                assert_eq!(t.counts(), predicted, "{spec} at k = {k}");
            }
        }
    }

    #[test]
    fn over_budget_step_reports_capacity() {
        let t = run("K1", 5);
        assert_eq!(t.snapshots.len(), 5); // levels 0..=4 fit
        let c = t.stopped.expect("level 5 is out of budget");
        assert_eq!(c.level, 5);
        assert_eq!(c.base_nodes, 262);
        assert_eq!(c.subset_size, 131);
        assert_eq!(c.budget, DEFAULT_NODE_BUDGET);
        let msg = c.to_string();
        assert!(msg.contains("C(262, 131)"), "{msg}");
    }

    #[test]
    fn snapshots_validate_after_each_step() {
        for spec in ["K1", "P3", "C4"] {
            for g in &run(spec, 3).snapshots {
                g.validate().unwrap();
            }
        }
    }

    #[test]
    fn k_zero_is_rejected() {
        let seed = SeedSpec::Complete(2).build().unwrap();
        assert!(evolve(seed, 0, 1, DEFAULT_NODE_BUDGET).is_err());
    }
}
