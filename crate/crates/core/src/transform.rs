//! Reduction from congestion `c` to congestion 1 by vertex copying.
//!
//! Each demand first gets private endpoints `s'_i -> s_i` and `t_i -> t'_i`
//! (unit weight), so no demand endpoint can sit inside another route. Every
//! remaining vertex is then copied `c` times and every edge `(u, v, w)` is
//! replaced by `(u^a, v^b, w)` for all copy indices `a, b`. A congestion-`c`
//! routing becomes a vertex-disjoint one by giving the paths through each
//! vertex distinct copies; merging copies maps any disjoint routing back.
//!
//! Wiring only equal copy indices (`a == b`) would force each path to keep
//! one copy index from end to end, which is strictly weaker once `k > c`:
//! three paths that meet pairwise at three different vertices fit at `c = 2`
//! but would need three indices.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exact::{solve_disjoint_shortest_capped, DEFAULT_PAIR_CAP};
use crate::graph::{pairwise_vertex_disjoint, reachable, verify_solution, Dag, Edge, Instance, Mode, Path, Solution, Vertex};

/// New endpoints added by [`isolate_terminals`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalGadget {
    /// Vertex count before isolation; ids above it are gadget vertices.
    pub original_n: usize,
    /// `(s'_i, t'_i)` per demand.
    pub endpoints: Vec<(Vertex, Vertex)>,
}

/// Correspondence between a graph and its copy expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformMap {
    /// Ids at or below this bound are original vertices; above are gadgets.
    pub original_n: usize,
    /// Input vertex -> its copies in the expanded graph (slot 0 unused).
    pub forward: Vec<Vec<Vertex>>,
    /// Expanded vertex -> input vertex (slot 0 unused).
    pub backward: Vec<Vertex>,
    /// Demand endpoints in the expanded graph.
    pub terminal_gadget: Vec<(Vertex, Vertex)>,
}

pub fn isolate_terminals(inst: &Instance) -> Result<(Instance, TerminalGadget)> {
    if inst.mode() != Mode::Vertex {
        return Err(Error::Unsupported("terminal isolation is defined for vertex congestion".into()));
    }
    let dag = inst.dag();
    let n = dag.vertex_count();
    let mut edges = dag.edges().to_vec();
    let mut endpoints = Vec::with_capacity(inst.k());
    for (i, &(s, t)) in inst.demands().iter().enumerate() {
        let (s_new, t_new) = (n + 2 * i + 1, n + 2 * i + 2);
        edges.push(Edge { tail: s_new, head: s, weight: 1 });
        edges.push(Edge { tail: t, head: t_new, weight: 1 });
        endpoints.push((s_new, t_new));
    }
    let mut isolated = Dag::with_transformed_flag(n + 2 * inst.k(), edges, dag.is_transformed())?;
    for v in dag.vertices() {
        if let Some(label) = dag.label(v) {
            isolated.set_label(v, label);
        }
    }
    for (i, &(s_new, t_new)) in endpoints.iter().enumerate() {
        isolated.set_label(s_new, format!("source'{}", i + 1));
        isolated.set_label(t_new, format!("terminal'{}", i + 1));
    }
    let out = Instance::new(isolated, endpoints.clone(), inst.congestion(), Mode::Vertex)?;
    Ok((out, TerminalGadget { original_n: n, endpoints }))
}

fn check_isolated(inst: &Instance) -> Result<HashSet<Vertex>> {
    let dag = inst.dag();
    let mut terminals = HashSet::new();
    for &(s, t) in inst.demands() {
        if !terminals.insert(s) || !terminals.insert(t) {
            return Err(Error::TerminalsNotIsolated(format!("endpoint of demand ({s}, {t}) is shared")));
        }
        if dag.in_degree(s) != 0 || dag.out_degree(t) != 0 {
            return Err(Error::TerminalsNotIsolated(format!(
                "demand ({s}, {t}): sources need in-degree 0 and terminals out-degree 0"
            )));
        }
    }
    Ok(terminals)
}

/// Copies every non-terminal vertex `c` times; the result has congestion 1.
pub fn expand_congestion(inst: &Instance) -> Result<(Instance, TransformMap)> {
    if inst.mode() != Mode::Vertex {
        return Err(Error::Unsupported("copy expansion is defined for vertex congestion".into()));
    }
    let terminals = check_isolated(inst)?;
    let dag = inst.dag();
    let copies = inst.congestion() as usize;

    let mut forward = vec![Vec::new(); dag.vertex_count() + 1];
    let mut backward = vec![0];
    for v in dag.vertices() {
        let count = if terminals.contains(&v) { 1 } else { copies };
        for _ in 0..count {
            backward.push(v);
            forward[v].push(backward.len() - 1);
        }
    }

    let mut edges = Vec::new();
    for e in dag.edges() {
        for &a in &forward[e.tail] {
            for &b in &forward[e.head] {
                edges.push(Edge { tail: a, head: b, weight: e.weight });
            }
        }
    }
    let expanded = Dag::new_transformed(backward.len() - 1, edges)?;
    let demands: Vec<_> = inst.demands().iter().map(|&(s, t)| (forward[s][0], forward[t][0])).collect();
    let map = TransformMap {
        original_n: dag.vertex_count(),
        forward,
        backward,
        terminal_gadget: demands.clone(),
    };
    Ok((Instance::new(expanded, demands, 1, Mode::Vertex)?, map))
}

/// Isolation followed by expansion, with a map back to `inst`'s vertices.
pub fn congestion_transform(inst: &Instance) -> Result<(Instance, TransformMap)> {
    let (isolated, gadget) = isolate_terminals(inst)?;
    let (expanded, mut map) = expand_congestion(&isolated)?;
    map.original_n = gadget.original_n;
    Ok((expanded, map))
}

/// Merges copies, strips gadget endpoints and re-verifies against `original`.
pub fn project_solution(original: &Instance, sol: &Solution, tm: &TransformMap) -> Result<Solution> {
    let mut paths = Vec::with_capacity(sol.len());
    for (i, p) in sol.paths.iter().enumerate() {
        let vertices: Vec<Vertex> = p
            .vertices()
            .iter()
            .map(|&v| tm.backward.get(v).copied().unwrap_or(0))
            .filter(|&v| v != 0 && v <= tm.original_n)
            .collect();
        if vertices.is_empty() {
            return Err(Error::ProjectionInvalid(format!("path {} vanished under projection", i + 1)));
        }
        let path = Path::new(original.dag(), vertices)
            .map_err(|e| Error::ProjectionInvalid(format!("path {}: {e}", i + 1)))?;
        paths.push(path);
    }
    let projected = Solution::new(paths);
    let report = verify_solution(original, &projected).map_err(|e| Error::ProjectionInvalid(e.to_string()))?;
    if !report.feasible {
        let reasons: Vec<_> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Error::ProjectionInvalid(reasons.join("; ")));
    }
    Ok(projected)
}

/// Exact solver for vertex congestion `c` on DAGs.
pub fn solve_with_congestion(inst: &Instance) -> Result<Option<Solution>> {
    solve_with_congestion_capped(inst, DEFAULT_PAIR_CAP)
}

pub fn solve_with_congestion_capped(inst: &Instance, pair_cap: usize) -> Result<Option<Solution>> {
    if inst.mode() != Mode::Vertex {
        return Err(Error::Unsupported("solve_with_congestion expects vertex mode".into()));
    }
    if inst.k() > pair_cap {
        return Err(Error::LimitExceeded { pairs: inst.k(), cap: pair_cap });
    }
    if inst.demands().iter().any(|&(s, t)| !reachable(inst.dag(), s, t)) {
        return Ok(None);
    }
    // no vertex can carry more than k paths, so copies beyond k are idle
    let budget = inst.congestion().min(inst.k() as u32);
    let (transformed, map) = congestion_transform(&inst.with_congestion(budget)?)?;
    let Some(sol) = solve_disjoint_shortest_capped(transformed.dag(), transformed.demands(), pair_cap)? else {
        return Ok(None);
    };
    if !pairwise_vertex_disjoint(sol.paths.iter().map(Path::vertices)) {
        return Err(Error::ProjectionInvalid("transformed paths are not vertex-disjoint".into()));
    }
    project_solution(inst, &sol, &map).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_dist, topo_sort};
    use crate::oracle::brute_force_oracle;

    fn chain() -> Dag {
        Dag::from_arcs(3, &[(1, 2, 1), (2, 3, 1)]).unwrap()
    }

    fn diamond() -> Dag {
        Dag::from_arcs(4, &[(1, 2, 1), (1, 3, 1), (2, 4, 1), (3, 4, 1)]).unwrap()
    }

    #[test]
    fn isolation_on_chain() {
        let inst = Instance::new(chain(), vec![(1, 3)], 1, Mode::Vertex).unwrap();
        let (iso, gadget) = isolate_terminals(&inst).unwrap();
        assert_eq!(iso.dag().vertex_count(), 5);
        assert_eq!(iso.demands(), &[(4, 5)]);
        assert_eq!(gadget.endpoints, vec![(4, 5)]);
        assert_eq!(all_pairs_dist(iso.dag()).dist(4, 5), Some(4));
    }

    #[test]
    fn isolation_splits_shared_sources() {
        let inst = Instance::new(diamond(), vec![(1, 4), (1, 2)], 1, Mode::Vertex).unwrap();
        let (iso, _) = isolate_terminals(&inst).unwrap();
        let (a, b) = (iso.demands()[0].0, iso.demands()[1].0);
        assert_ne!(a, b);
        assert_eq!(iso.dag().weight(a, 1), Some(1));
        assert_eq!(iso.dag().weight(b, 1), Some(1));
    }

    #[test]
    fn expansion_requires_isolation() {
        let inst = Instance::new(chain(), vec![(2, 3)], 2, Mode::Vertex).unwrap();
        assert!(matches!(expand_congestion(&inst), Err(Error::TerminalsNotIsolated(_))));
        let shared = Instance::new(diamond(), vec![(1, 2), (1, 3)], 2, Mode::Vertex).unwrap();
        assert!(matches!(expand_congestion(&shared), Err(Error::TerminalsNotIsolated(_))));
        // already-isolated endpoints pass as they are
        let bare = Instance::new(chain(), vec![(1, 3)], 2, Mode::Vertex).unwrap();
        assert!(expand_congestion(&bare).is_ok());
    }

    #[test]
    fn expansion_with_one_copy_is_identity() {
        let inst = Instance::new(diamond(), vec![(1, 4)], 1, Mode::Vertex).unwrap();
        let (iso, _) = isolate_terminals(&inst).unwrap();
        let (exp, map) = expand_congestion(&iso).unwrap();
        assert_eq!(exp.dag().edges(), iso.dag().edges());
        assert_eq!(exp.demands(), iso.demands());
        assert!((1..=iso.dag().vertex_count()).all(|v| map.forward[v] == vec![v]));
    }

    #[test]
    fn doubled_chain_routes_both_copies() {
        let inst = Instance::new(chain(), vec![(1, 3), (1, 3)], 2, Mode::Vertex).unwrap();
        let (exp, map) = congestion_transform(&inst).unwrap();
        // 3 originals doubled + 4 gadget endpoints
        assert_eq!(exp.dag().vertex_count(), 2 * 3 + 4);
        assert!((1..=3).all(|v| map.forward[v].len() == 2));
        let sol = solve_with_congestion(&inst).unwrap().unwrap();
        assert_eq!(sol.paths[0].vertices(), &[1, 2, 3]);
        assert_eq!(sol.paths[1].vertices(), &[1, 2, 3]);
    }

    #[test]
    fn size_contract_and_acyclicity() {
        let inst = Instance::new(diamond(), vec![(1, 4), (2, 4), (1, 3)], 2, Mode::Vertex).unwrap();
        let (exp, _) = congestion_transform(&inst).unwrap();
        let (n, m, k, c) = (4, 4, 3, 2);
        assert_eq!(exp.dag().vertex_count(), c * n + 2 * k);
        // every original edge yields c^2 copies, every gadget edge c
        assert_eq!(exp.dag().edge_count(), c * c * m + 2 * k * c);
        assert!(topo_sort(exp.dag().vertex_count(), exp.dag().edges()).is_ok());
        assert_eq!(exp.congestion(), 1);
        assert!(exp.dag().is_transformed());
    }

    #[test]
    fn diamond_pair_at_congestion_two() {
        let inst = Instance::new(diamond(), vec![(1, 4), (1, 4)], 2, Mode::Vertex).unwrap();
        let sol = solve_with_congestion(&inst).unwrap().unwrap();
        assert!(verify_solution(&inst, &sol).unwrap().feasible);
        assert_eq!(solve_with_congestion(&inst.with_congestion(1).unwrap()).unwrap(), None);
    }

    #[test]
    fn unreachable_and_wide_budget() {
        let inst = Instance::new(chain(), vec![(3, 1)], 1, Mode::Vertex).unwrap();
        assert_eq!(solve_with_congestion(&inst).unwrap(), None);
        let wide = Instance::new(diamond(), vec![(1, 4), (1, 4), (1, 2), (2, 4)], 4, Mode::Vertex).unwrap();
        assert!(solve_with_congestion(&wide).unwrap().is_some());
    }

    #[test]
    fn triangle_of_meetings_needs_cross_wiring() {
        // loads: vertex 1 {A, C}, vertex 2 {A, B}, vertex 3 {B, C}
        let dag = Dag::from_arcs(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]).unwrap();
        let inst = Instance::new(dag, vec![(1, 2), (2, 3), (1, 3)], 2, Mode::Vertex).unwrap();
        assert!(brute_force_oracle(&inst).unwrap().is_some());
        assert!(solve_with_congestion(&inst).unwrap().is_some());

        // the same expansion restricted to equal copy indices
        let (iso, _) = isolate_terminals(&inst).unwrap();
        let (exp, map) = expand_congestion(&iso).unwrap();
        let parallel: Vec<Edge> = exp
            .dag()
            .edges()
            .iter()
            .copied()
            .filter(|e| {
                let (a, b) = (map.backward[e.tail], map.backward[e.head]);
                let (ia, ib) = (
                    map.forward[a].iter().position(|&x| x == e.tail).unwrap(),
                    map.forward[b].iter().position(|&x| x == e.head).unwrap(),
                );
                map.forward[a].len() == 1 || map.forward[b].len() == 1 || ia == ib
            })
            .collect();
        let narrow = Dag::new_transformed(exp.dag().vertex_count(), parallel).unwrap();
        assert_eq!(crate::exact::solve_disjoint_shortest(&narrow, exp.demands()).unwrap(), None);
    }

    #[test]
    fn projection_rejects_bad_paths() {
        let inst = Instance::new(chain(), vec![(1, 3)], 1, Mode::Vertex).unwrap();
        let (exp, map) = congestion_transform(&inst).unwrap();
        // source' -> 1 -> 2 stops short of the terminal gadget
        let short = Solution::new(vec![Path::new(exp.dag(), vec![4, 1, 2]).unwrap()]);
        assert!(matches!(project_solution(&inst, &short, &map), Err(Error::ProjectionInvalid(_))));
    }

    #[test]
    fn edge_mode_is_rejected() {
        let inst = Instance::new(chain(), vec![(1, 3)], 1, Mode::Edge).unwrap();
        assert!(matches!(solve_with_congestion(&inst), Err(Error::Unsupported(_))));
    }
}
