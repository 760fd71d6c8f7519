//! Edge-disjoint routing by turning edges into vertices.
//!
//! In the derived graph `H` every edge `e` of `G` becomes a node, and each
//! demand gets its own source and terminal node. Vertex congestion in `H`
//! is then edge congestion in `G`, while shared `G`-vertices cost nothing.

use crate::error::{Error, Result};
use crate::graph::{verify_solution, Dag, Edge, Instance, Mode, Path, Solution, Vertex};
use crate::transform::solve_with_congestion;

/// Which end of a demand an `H`-node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Source,
    Terminal,
}

/// Correspondence between `G` and its edge-node graph `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeNodeMap {
    /// `G`-edge index -> `H`-vertex.
    pub node_of_edge: Vec<Vertex>,
    /// Per demand, the `H`-vertices of its source and terminal.
    pub endpoint_nodes: Vec<(Vertex, Vertex)>,
    edge_of_node: Vec<Option<usize>>,
}

impl EdgeNodeMap {
    pub fn endpoint_node(&self, demand: usize, end: Endpoint) -> Vertex {
        let (s, t) = self.endpoint_nodes[demand];
        match end {
            Endpoint::Source => s,
            Endpoint::Terminal => t,
        }
    }

    /// The `G`-edge behind an `H`-vertex, if it is an edge node.
    pub fn edge_of_node(&self, v: Vertex) -> Option<usize> {
        self.edge_of_node.get(v).copied().flatten()
    }
}

/// Builds `H` in vertex mode with the same demand order and congestion.
///
/// Edge `i` of `G` becomes node `i + 1`; demand `i` gets source node
/// `m + 2i + 1` and terminal node `m + 2i + 2`. A demand with `s == t`
/// gets a direct zero-weight source-to-terminal arc so its empty route
/// survives the translation.
pub fn edge_split_transform(inst: &Instance) -> Result<(Instance, EdgeNodeMap)> {
    if inst.mode() != Mode::Edge {
        return Err(Error::Unsupported("edge split expects an edge-mode instance".into()));
    }
    let g = inst.dag();
    let m = g.edge_count();
    let node_of_edge: Vec<Vertex> = (1..=m).collect();
    let mut arcs = Vec::new();
    for (i, e1) in g.edges().iter().enumerate() {
        for e2 in g.out_edges(e1.head) {
            let j = g.edge_index(e2.tail, e2.head).expect("out edge is indexed");
            arcs.push(Edge { tail: node_of_edge[i], head: node_of_edge[j], weight: e2.weight });
        }
    }
    let mut endpoint_nodes = Vec::with_capacity(inst.k());
    for (d, &(s, t)) in inst.demands().iter().enumerate() {
        let (src, term) = (m + 2 * d + 1, m + 2 * d + 2);
        for e in g.out_edges(s) {
            let j = g.edge_index(e.tail, e.head).expect("out edge is indexed");
            arcs.push(Edge { tail: src, head: node_of_edge[j], weight: e.weight });
        }
        for e in g.in_edges(t) {
            let j = g.edge_index(e.tail, e.head).expect("in edge is indexed");
            arcs.push(Edge { tail: node_of_edge[j], head: term, weight: 0 });
        }
        if s == t {
            arcs.push(Edge { tail: src, head: term, weight: 0 });
        }
        endpoint_nodes.push((src, term));
    }
    let n_h = m + 2 * inst.k();
    let h = Dag::new_transformed(n_h, arcs)?;
    let mut edge_of_node = vec![None; n_h + 1];
    for (i, &v) in node_of_edge.iter().enumerate() {
        edge_of_node[v] = Some(i);
    }
    let map = EdgeNodeMap { node_of_edge, endpoint_nodes: endpoint_nodes.clone(), edge_of_node };
    let derived = Instance::new(h, endpoint_nodes, inst.congestion(), Mode::Vertex)?;
    Ok((derived, map))
}

/// Maps an `H`-routing back to `G` and verifies it in edge mode.
pub fn project_edge_solution(original: &Instance, sol: &Solution, map: &EdgeNodeMap) -> Result<Solution> {
    let g = original.dag();
    let mut paths = Vec::with_capacity(sol.len());
    for (i, p) in sol.paths.iter().enumerate() {
        let edges: Vec<usize> = p.vertices().iter().filter_map(|&v| map.edge_of_node(v)).collect();
        let vertices = match edges.first() {
            None => vec![original.demands()[i].0],
            Some(&first) => {
                let mut v = vec![g.edge(first).tail];
                v.extend(edges.iter().map(|&e| g.edge(e).head));
                v
            }
        };
        paths.push(Path::new(g, vertices).map_err(|e| Error::ProjectionInvalid(format!("path {}: {e}", i + 1)))?);
    }
    let projected = Solution::new(paths);
    let report = verify_solution(original, &projected)?;
    if !report.feasible {
        let reasons: Vec<_> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Error::ProjectionInvalid(reasons.join("; ")));
    }
    Ok(projected)
}

/// Exact solver for edge congestion `c` on DAGs.
pub fn solve_edsp(inst: &Instance) -> Result<Option<Solution>> {
    let (derived, map) = edge_split_transform(inst)?;
    match solve_with_congestion(&derived)? {
        Some(sol) => project_edge_solution(inst, &sol, &map).map(Some),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_pairs_dist;
    use crate::oracle::brute_force_oracle;

    #[test]
    fn chain_becomes_four_vertex_chain() {
        let g = Dag::from_arcs(3, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        let inst = Instance::new(g, vec![(1, 3)], 1, Mode::Edge).unwrap();
        let (h, map) = edge_split_transform(&inst).unwrap();
        assert_eq!(h.dag().vertex_count(), 4);
        assert_eq!(h.dag().edge_count(), 3);
        assert_eq!(h.demands(), &[(3, 4)]);
        assert_eq!(all_pairs_dist(h.dag()).dist(3, 4), Some(2));
        assert_eq!(map.endpoint_node(0, Endpoint::Terminal), 4);
        assert_eq!(map.edge_of_node(2), Some(1));
        assert_eq!(map.edge_of_node(3), None);
    }

    #[test]
    fn shared_bridge_is_infeasible() {
        // 1 -> 3 and 2 -> 3 both feed the bridge 3 -> 4
        let g = Dag::from_arcs(4, &[(1, 3, 1), (2, 3, 1), (3, 4, 1)]).unwrap();
        let inst = Instance::new(g, vec![(1, 4), (2, 4)], 1, Mode::Edge).unwrap();
        assert_eq!(solve_edsp(&inst).unwrap(), None);
        assert!(solve_edsp(&inst.with_congestion(2).unwrap()).unwrap().is_some());
    }

    #[test]
    fn shared_vertices_are_free() {
        let g = Dag::from_arcs(4, &[(1, 2, 1), (1, 3, 1), (2, 4, 1), (3, 4, 1)]).unwrap();
        let inst = Instance::new(g, vec![(1, 4), (1, 4)], 1, Mode::Edge).unwrap();
        let sol = solve_edsp(&inst).unwrap().unwrap();
        let mut seqs: Vec<_> = sol.paths.iter().map(|p| p.vertices().to_vec()).collect();
        seqs.sort();
        assert_eq!(seqs, vec![vec![1, 2, 4], vec![1, 3, 4]]);
    }

    #[test]
    fn single_and_unreachable_demands() {
        let g = Dag::from_arcs(3, &[(1, 2, 2), (2, 3, 1)]).unwrap();
        let inst = Instance::new(g.clone(), vec![(1, 3)], 1, Mode::Edge).unwrap();
        assert_eq!(solve_edsp(&inst).unwrap().unwrap().lengths(), vec![3]);
        let back = Instance::new(g.clone(), vec![(3, 1)], 1, Mode::Edge).unwrap();
        assert_eq!(solve_edsp(&back).unwrap(), None);
        let still = Instance::new(g, vec![(2, 2), (1, 3)], 1, Mode::Edge).unwrap();
        let sol = solve_edsp(&still).unwrap().unwrap();
        assert_eq!(sol.paths[0].vertices(), &[2]);
    }

    #[test]
    fn vertex_mode_is_rejected() {
        let g = Dag::from_arcs(2, &[(1, 2, 1)]).unwrap();
        let inst = Instance::new(g, vec![(1, 2)], 1, Mode::Vertex).unwrap();
        assert!(matches!(edge_split_transform(&inst), Err(Error::Unsupported(_))));
    }

    #[test]
    fn random_instances_match_edge_oracle() {
        use crate::gen::random::{random_instance, RandomParams};
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        for seed in 0..60 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let params = RandomParams { vertices: 6, demands: 2, mode: Mode::Edge, ..RandomParams::default() };
            let inst = random_instance(&mut rng, &params).unwrap();
            let (h, _) = edge_split_transform(&inst).unwrap();
            let dm_g = all_pairs_dist(inst.dag());
            let dm_h = all_pairs_dist(h.dag());
            for (&(s, t), &(hs, ht)) in inst.demands().iter().zip(h.demands()) {
                assert_eq!(dm_g.dist(s, t), dm_h.dist(hs, ht), "seed {seed}");
            }
            let ours = solve_edsp(&inst).unwrap();
            let oracle = brute_force_oracle(&inst).unwrap();
            assert_eq!(ours.is_some(), oracle.is_some(), "seed {seed}");
        }
    }
}
