//! Normalized-Laplacian spectra, spectral gap, and the mixing bound.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::combin::BigCount;
use crate::error::{Error, Result};
use crate::graph::{GraphSnapshot, NodeId};

/// Absolute tolerance for spectral comparisons.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

/// Ceiling for the dense eigensolver; O(n^3) work and O(n^2) doubles.
pub const DENSE_EIGEN_MAX_N: usize = 3000;

/// Full spectrum of `I - D^{-1/2} A D^{-1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    /// Ascending, clamped to `[0, 2]`; the leading value snapped to 0.
    pub eigenvalues: Vec<f64>,
    /// `max(|l_1 - 1|, |l_{n-1} - 1|)`: distance of the extreme
    /// non-trivial eigenvalues from 1. Near 0 means strong expansion;
    /// near 1 means none. A single-node graph reports 1.
    pub lambda_gap: f64,
    pub isolated_node_count: usize,
}

/// Dense symmetric eigendecomposition of the normalized Laplacian.
///
/// Degree-0 nodes leave `D^{-1/2}` undefined; their row and column are
/// taken as all zero, contributing one zero eigenvalue each, which keeps
/// the zero-multiplicity = component-count identity intact.
pub fn normalized_laplacian_spectrum(g: &GraphSnapshot) -> Result<SpectralResult> {
    let n = g.node_count();
    if n > DENSE_EIGEN_MAX_N {
        return Err(Error::Spectral(format!(
            "dense eigensolve is capped at {DENSE_EIGEN_MAX_N} nodes, graph has {n}"
        )));
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut isolated_node_count = 0;
    for v in 0..n {
        if g.degree(v as NodeId) == 0 {
            isolated_node_count += 1;
        } else {
            m[(v, v)] = 1.0;
        }
    }
    for (u, v) in g.edges() {
        let w = -1.0 / ((g.degree(u) as f64) * (g.degree(v) as f64)).sqrt();
        m[(u as usize, v as usize)] = w;
        m[(v as usize, u as usize)] = w;
    }
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    for ev in &mut eigenvalues {
        if *ev < -SPECTRAL_TOLERANCE || *ev > 2.0 + SPECTRAL_TOLERANCE {
            return Err(Error::Spectral(format!(
                "eigenvalue {ev} outside [0, 2] beyond tolerance"
            )));
        }
        *ev = ev.clamp(0.0, 2.0);
    }
    // Every graph has a component, so the leading eigenvalue is an exact
    // zero; snap the numerical residue.
    if let Some(first) = eigenvalues.first_mut() {
        *first = 0.0;
    }
    let lambda_gap = match eigenvalues.len() {
        0 | 1 => 1.0,
        len => {
            let lo = (eigenvalues[1] - 1.0).abs();
            let hi = (eigenvalues[len - 1] - 1.0).abs();
            lo.max(hi)
        }
    };
    Ok(SpectralResult {
        eigenvalues,
        lambda_gap,
        isolated_node_count,
    })
}

/// Exact volumes of a node set, its complement, and the whole graph,
/// plus the ordered-pair internal edge count `e(X,X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeDecomposition {
    /// The set, sorted ascending.
    pub set: Vec<NodeId>,
    pub vol_x: BigCount,
    pub vol_complement: BigCount,
    pub vol_total: BigCount,
    /// Ordered pairs `(x, y)` of adjacent nodes with both ends in the
    /// set: twice the internal edge count.
    pub e_xx: BigCount,
}

pub fn volume_decomposition(g: &GraphSnapshot, set: &[NodeId]) -> Result<VolumeDecomposition> {
    let n = g.node_count();
    let mut member = vec![false; n];
    for &v in set {
        if v as usize >= n {
            return Err(Error::contract(format!("set node {v} outside graph 0..{n}")));
        }
        member[v as usize] = true;
    }
    let set: Vec<NodeId> = (0..n as NodeId).filter(|&v| member[v as usize]).collect();
    let mut vol_x = 0u64;
    let mut e_xx = 0u64;
    for &v in &set {
        vol_x += g.degree(v) as u64;
        e_xx += g.neighbors(v).iter().filter(|&&u| member[u as usize]).count() as u64;
    }
    let vol_total = 2 * g.edge_count();
    Ok(VolumeDecomposition {
        set,
        vol_x: BigCount::from(vol_x),
        vol_complement: BigCount::from(vol_total - vol_x),
        vol_total: BigCount::from(vol_total),
        e_xx: BigCount::from(e_xx),
    })
}

/// The mixing-lemma deviation of `X`:
///
/// `|e(X,X) - vol(X)^2 / vol(G)| * vol(G) / (vol(X) * vol(X̄))`
///
/// a certified lower bound on the spectral gap. For an independent set
/// with no outside non-neighbors — such as a freshly added clone layer —
/// this collapses to `vol(X)/vol(X̄)`. The numerator is formed exactly in
/// integers; only the final division rounds.
pub fn mixing_bound(g: &GraphSnapshot, set: &[NodeId]) -> Result<f64> {
    use num_traits::{ToPrimitive, Zero};
    let v = volume_decomposition(g, set)?;
    if v.vol_x.is_zero() || v.vol_complement.is_zero() {
        return Err(Error::contract(
            "mixing bound needs both the set and its complement to carry volume",
        ));
    }
    // |e_xx * vol_G - vol_X^2| / (vol_X * vol_X_bar), exact until the end.
    let lhs = &v.e_xx * &v.vol_total;
    let rhs = &v.vol_x * &v.vol_x;
    let numerator = if lhs >= rhs { lhs - rhs } else { rhs - lhs };
    let denominator = &v.vol_x * &v.vol_complement;
    Ok(numerator.to_f64().unwrap() / denominator.to_f64().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{evolve, DEFAULT_NODE_BUDGET};
    use crate::seed::SeedSpec;

    fn build(spec: &str) -> GraphSnapshot {
        spec.parse::<SeedSpec>().unwrap().build().unwrap()
    }

    fn level(spec: &str, t: usize) -> GraphSnapshot {
        evolve(build(spec), 2, t, DEFAULT_NODE_BUDGET)
            .unwrap()
            .snapshots
            .remove(t)
    }

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn hand_computed_spectra() {
        let s = normalized_laplacian_spectrum(&build("K2")).unwrap();
        assert_eq!(s.eigenvalues.len(), 2);
        assert_close(s.eigenvalues[0], 0.0);
        assert_close(s.eigenvalues[1], 2.0);
        assert_close(s.lambda_gap, 1.0);

        // C4: 1 - cos(pi k / 2) over k = 0..3.
        let s = normalized_laplacian_spectrum(&build("C4")).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert_close(*got, want);
        }

        // K4: 0 with n/(n-1) three times.
        let s = normalized_laplacian_spectrum(&build("K4")).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0]) {
            assert_close(*got, want);
        }
        assert_close(s.lambda_gap, 1.0 / 3.0);
    }

    #[test]
    fn isolated_nodes_contribute_zeros() {
        let s = normalized_laplacian_spectrum(&build("E2")).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0, 0.0]);
        assert_eq!(s.isolated_node_count, 2);
        assert_close(s.lambda_gap, 1.0);

        let two_k2 = GraphSnapshot::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let s = normalized_laplacian_spectrum(&two_k2).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 0.0, 2.0, 2.0]) {
            assert_close(*got, want);
        }
        assert_close(s.lambda_gap, 1.0);
    }

    #[test]
    fn generation_gaps() {
        // 10-node level: the extreme eigenvalue lands exactly on 7/4.
        let s = normalized_laplacian_spectrum(&level("K1", 3)).unwrap();
        assert_close(s.lambda_gap, 0.75);

        let s = normalized_laplacian_spectrum(&level("C4", 1)).unwrap();
        assert!(s.lambda_gap >= 0.6 - 1e-9 && s.lambda_gap <= 1.0);
    }

    #[test]
    fn spectral_invariants_across_generations() {
        let mut graphs = vec![build("K5"), build("P4"), build("C6"), build("E3")];
        for spec in ["K1", "C4", "P3"] {
            graphs.extend(evolve(build(spec), 2, 3, DEFAULT_NODE_BUDGET).unwrap().snapshots);
        }
        for g in &graphs {
            let s = normalized_laplacian_spectrum(g).unwrap();
            assert_eq!(s.eigenvalues.len(), g.node_count());
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let sum: f64 = s.eigenvalues.iter().sum();
            let non_isolated = (g.node_count() - s.isolated_node_count) as f64;
            assert!((sum - non_isolated).abs() < 1e-6, "trace {sum} vs {non_isolated}");
            let zeros = s.eigenvalues.iter().filter(|&&e| e < 1e-7).count();
            assert_eq!(zeros, crate::metrics::component_count(g));
            assert!((0.0..=1.0 + 1e-12).contains(&s.lambda_gap));
        }
    }

    #[test]
    fn volumes_and_clone_set_bound() {
        let g = level("C4", 1);
        let clones: Vec<NodeId> = (4..10).collect();
        let v = volume_decomposition(&g, &clones).unwrap();
        assert_eq!(v.vol_x, BigCount::from(12u32));
        assert_eq!(v.vol_total, BigCount::from(32u32));
        assert_eq!(v.e_xx, BigCount::from(0u32));
        let bound = mixing_bound(&g, &clones).unwrap();
        assert_close(bound, 0.6); // 12/20

        let gap = normalized_laplacian_spectrum(&g).unwrap().lambda_gap;
        assert!(gap >= bound - 1e-9);
    }

    #[test]
    fn deep_level_bound_and_gap() {
        let g = level("K1", 4); // 262 nodes
        let clones: Vec<NodeId> = (10..262).collect();
        let bound = mixing_bound(&g, &clones).unwrap();
        assert_close(bound, 1260.0 / 1288.0);
        let gap = normalized_laplacian_spectrum(&g).unwrap().lambda_gap;
        assert!(gap >= bound - 1e-9 && gap <= 1.0);
    }

    #[test]
    fn degenerate_mixing_bound_is_zero() {
        // In C8, the set {0,1,4,5} has e(X,X) = 4 ordered pairs, exactly
        // vol(X)^2/vol(G) = 64/16: the deviation vanishes.
        let g = build("C8");
        let bound = mixing_bound(&g, &[0, 1, 4, 5]).unwrap();
        assert_close(bound, 0.0);
    }

    #[test]
    fn bad_sets_are_refused() {
        let g = build("C4");
        assert!(mixing_bound(&g, &[]).is_err());
        assert!(mixing_bound(&g, &[0, 1, 2, 3]).is_err());
        assert!(volume_decomposition(&g, &[9]).is_err());
    }

    #[test]
    fn oversize_graphs_are_refused() {
        let g = build("E3001");
        let err = normalized_laplacian_spectrum(&g).unwrap_err().to_string();
        assert!(err.contains("3000"), "{err}");
    }
}
