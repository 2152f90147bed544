//! Breadth-first structure: distances, connectivity, biconnectivity.

use crate::graph::{GraphSnapshot, NodeId};

/// Distances from `src` by breadth-first search; `None` where unreachable.
pub fn bfs_distances(g: &GraphSnapshot, src: NodeId) -> Vec<Option<u32>> {
    let n = g.node_count();
    let mut dist = vec![None; n];
    dist[src as usize] = Some(0);
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize].unwrap();
        for &v in g.neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn is_connected(g: &GraphSnapshot) -> bool {
    bfs_distances(g, 0).iter().all(|d| d.is_some())
}

/// Number of connected components, counting isolated nodes.
pub fn component_count(g: &GraphSnapshot) -> usize {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n as NodeId {
        if seen[start as usize] {
            continue;
        }
        components += 1;
        seen[start as usize] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

/// Largest eccentricity, by one breadth-first search per node.
/// `None` when the graph is disconnected.
pub fn diameter(g: &GraphSnapshot) -> Option<u64> {
    let mut best = 0u64;
    for src in 0..g.node_count() as NodeId {
        let mut ecc = 0u64;
        for d in bfs_distances(g, src) {
            ecc = ecc.max(u64::from(d?));
        }
        best = best.max(ecc);
    }
    Some(best)
}

/// Connected, at least 3 nodes, and free of articulation points.
pub fn is_biconnected(g: &GraphSnapshot) -> bool {
    let n = g.node_count();
    if n < 3 {
        return false;
    }
    // Iterative depth-first articulation search (lowpoint method); the
    // recursion depth on clone-layer graphs can reach the node count, so
    // an explicit stack is required.
    let mut disc = vec![0u32; n]; // 0 = unvisited, else 1-based discovery time
    let mut low = vec![0u32; n];
    let mut timer = 0u32;
    // Frame: (node, parent, index into its neighbor list).
    let mut stack: Vec<(NodeId, NodeId, usize)> = Vec::new();
    let root: NodeId = 0;
    let mut root_children = 0usize;
    timer += 1;
    disc[0] = timer;
    low[0] = timer;
    stack.push((root, root, 0));
    while let Some(frame) = stack.last_mut() {
        let (u, parent) = (frame.0, frame.1);
        if let Some(&v) = g.neighbors(u).get(frame.2) {
            frame.2 += 1;
            if disc[v as usize] == 0 {
                timer += 1;
                disc[v as usize] = timer;
                low[v as usize] = timer;
                if u == root {
                    root_children += 1;
                }
                stack.push((v, u, 0));
            } else if v != parent {
                low[u as usize] = low[u as usize].min(disc[v as usize]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p as usize] = low[p as usize].min(low[u as usize]);
                // Non-root p cuts off u's subtree when nothing in it
                // climbs above p.
                if p != root && low[u as usize] >= disc[p as usize] {
                    return false;
                }
            }
        }
    }
    if root_children > 1 {
        return false;
    }
    disc.iter().all(|&d| d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedSpec;

    fn build(spec: &str) -> GraphSnapshot {
        spec.parse::<SeedSpec>().unwrap().build().unwrap()
    }

    #[test]
    fn path_distances() {
        let p4 = build("P4");
        let d = bfs_distances(&p4, 0);
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(diameter(&p4), Some(3));
    }

    #[test]
    fn disconnected_graphs() {
        let e3 = build("E3");
        assert!(!is_connected(&e3));
        assert_eq!(component_count(&e3), 3);
        assert_eq!(diameter(&e3), None);
        let two_k2 = GraphSnapshot::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        assert!(!is_connected(&two_k2));
        assert_eq!(component_count(&two_k2), 2);
    }

    #[test]
    fn single_node() {
        let k1 = build("K1");
        assert!(is_connected(&k1));
        assert_eq!(diameter(&k1), Some(0));
        assert!(!is_biconnected(&k1));
    }

    #[test]
    fn biconnectivity_classics() {
        assert!(is_biconnected(&build("C4")));
        assert!(is_biconnected(&build("K4")));
        assert!(is_biconnected(&build("C6")));
        assert!(!is_biconnected(&build("P4"))); // inner nodes cut
        assert!(!is_biconnected(&build("K2"))); // too small
        // Two triangles sharing node 2: articulation at the hinge.
        let bowtie =
            GraphSnapshot::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
                .unwrap();
        assert!(!is_biconnected(&bowtie));
    }

    #[test]
    fn biconnectivity_matches_node_deletion_oracle() {
        // Removing any single node must leave the rest connected.
        let naive = |g: &GraphSnapshot| -> bool {
            let n = g.node_count();
            if n < 3 {
                return false;
            }
            (0..n).all(|cut| {
                let keep: Vec<usize> = (0..n).filter(|&v| v != cut).collect();
                let remap = |v: usize| keep.iter().position(|&x| x == v).unwrap() as NodeId;
                let edges: Vec<_> = g
                    .edges()
                    .filter(|&(u, v)| u as usize != cut && v as usize != cut)
                    .map(|(u, v)| (remap(u as usize), remap(v as usize)))
                    .collect();
                let h = GraphSnapshot::from_edges(n - 1, &edges).unwrap();
                is_connected(&h)
            })
        };
        for spec in ["K1", "K2", "K4", "P3", "P5", "C3", "C5", "C6"] {
            let g = build(spec);
            assert_eq!(is_biconnected(&g), naive(&g), "{spec}");
        }
        let bowtie =
            GraphSnapshot::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
                .unwrap();
        assert_eq!(is_biconnected(&bowtie), naive(&bowtie));
    }
}
