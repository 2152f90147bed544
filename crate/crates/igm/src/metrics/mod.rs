//! Structural parameters of materialized snapshots.

pub mod exact;
pub mod spectral;
pub mod traversal;

pub use exact::{
    chromatic_number, clique_number, construct_dominating_set, domination_number,
    independence_number, is_dominating, ParamResult, Witness, DEFAULT_SOLVER_BUDGET,
};
pub use spectral::{
    mixing_bound, normalized_laplacian_spectrum, volume_decomposition, SpectralResult,
    VolumeDecomposition, DENSE_EIGEN_MAX_N, SPECTRAL_TOLERANCE,
};
pub use traversal::{bfs_distances, component_count, diameter, is_biconnected, is_connected};

use crate::graph::GraphSnapshot;

/// One point of the edge-to-node ratio series.
#[derive(Debug, Clone, PartialEq)]
pub struct DensificationPoint {
    pub level: usize,
    /// `e_t / n_t`.
    pub ratio: f64,
    /// `floor(n_{t-1} / 2)`, the half-model's asymptotic comparator for
    /// the ratio; absent on the first entry.
    pub comparator: Option<u64>,
}

/// Edge-to-node ratios of consecutive snapshots with their comparators.
/// The unbounded growth of this series is what "densification" means.
pub fn densification_series(snapshots: &[GraphSnapshot]) -> Vec<DensificationPoint> {
    snapshots
        .iter()
        .enumerate()
        .map(|(i, g)| DensificationPoint {
            level: g.level(),
            ratio: g.edge_count() as f64 / g.node_count() as f64,
            comparator: i.checked_sub(1).map(|p| snapshots[p].node_count() as u64 / 2),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{evolve, DEFAULT_NODE_BUDGET};
    use crate::seed::SeedSpec;

    #[test]
    fn single_node_seed_series() {
        let seed = SeedSpec::Complete(1).build().unwrap();
        let t = evolve(seed, 2, 4, DEFAULT_NODE_BUDGET).unwrap();
        let series = densification_series(&t.snapshots);
        let ratios: Vec<f64> = series.iter().map(|p| p.ratio).collect();
        assert_eq!(ratios[..4], [0.0, 0.0, 0.5, 1.4]);
        assert!((ratios[4] - 4.862595419847328).abs() < 1e-12);
        assert_eq!(series[0].comparator, None);
        assert_eq!(series[4].comparator, Some(5)); // floor(10 / 2)
        assert!(series[2..].windows(2).all(|w| w[0].ratio < w[1].ratio));
    }

    #[test]
    fn single_snapshot_has_no_comparator() {
        let seed = SeedSpec::Cycle(4).build().unwrap();
        let series = densification_series(&[seed]);
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].comparator, None);
        assert_eq!(series[0].ratio, 1.0);
    }
}
