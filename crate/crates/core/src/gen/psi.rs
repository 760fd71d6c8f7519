//! Congested shortest-path instances from partitioned subgraph isomorphism.
//!
//! Each pattern vertex `u_i` becomes a block of two parallel paths, upper
//! and lower, through spine vertices `q_{i,0..n_i}`. The window between
//! `q_{i,j-1}` and `q_{i,j}` holds `k` subdivision vertices (one per pattern
//! edge) and stands for host vertex `v_{i,j}`. `c - 1` copies of each
//! spine demand fill both paths to `c - 1`; the cross demand then leaves the
//! upper path at some window, which is the only window the edge demands can
//! still pass through. Edge demand `l` hops from block to block along an
//! edge of the host graph, so a routing exists iff the windows pick a
//! homomorphism. The reduction is meant for fixed `c`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenCertificate, Witness};
use crate::error::{Error, Result};
use crate::graph::{verify_solution, Dag, Edge, Instance, Mode, Path, Solution, Vertex};

/// Cubic bipartite pattern on `0..h`; the first `h / 2` vertices form one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    h: usize,
    edges: Vec<(usize, usize)>,
}

impl PatternGraph {
    /// Edges are normalized to `(a, b)` with `a < b` and kept in the given order.
    pub fn new(h: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::PatternNotCubicBipartite(msg));
        if h == 0 || !h.is_multiple_of(2) {
            return bad(format!("{h} vertices; need a positive even count"));
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        let mut seen = BTreeSet::new();
        let mut degree = vec![0; h];
        for &(a, b) in &edges {
            if b >= h {
                return bad(format!("edge {{{a}, {b}}} leaves 0..{h}"));
            }
            if !(a < h / 2 && b >= h / 2) {
                return bad(format!("edge {{{a}, {b}}} does not cross the bipartition"));
            }
            if !seen.insert((a, b)) {
                return bad(format!("duplicate edge {{{a}, {b}}}"));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return bad(format!("vertex {v} has degree {}", degree[v]));
        }
        Ok(Self { h, edges })
    }

    pub fn k33() -> Self {
        let edges = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        Self::new(6, edges).expect("K_{3,3} is cubic and bipartite")
    }

    /// The 3-cube, even-weight corners first.
    pub fn cube() -> Self {
        let even: Vec<u32> = (0..8u32).filter(|x| x.count_ones() % 2 == 0).collect();
        let odd: Vec<u32> = (0..8u32).filter(|x| x.count_ones() % 2 == 1).collect();
        let mut edges = Vec::new();
        for (a, &x) in even.iter().enumerate() {
            for (b, &y) in odd.iter().enumerate() {
                if (x ^ y).count_ones() == 1 {
                    edges.push((a, 4 + b));
                }
            }
        }
        Self::new(8, edges).expect("the cube is cubic and bipartite")
    }

    pub fn vertex_count(&self) -> usize {
        self.h
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Host graph partitioned into one class per pattern vertex. Host vertex
/// `(i, j)` is `v_{i,j}` with `j` in `1..=sizes[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostGraph {
    sizes: Vec<usize>,
    edges: BTreeSet<((usize, usize), (usize, usize))>,
}

impl HostGraph {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvariantViolation("every class needs at least one vertex".into()));
        }
        Ok(Self { sizes, edges: BTreeSet::new() })
    }

    /// Every pair of vertices in different classes is adjacent.
    pub fn complete(sizes: Vec<usize>) -> Result<Self> {
        let mut g = Self::new(sizes)?;
        for a in 0..g.sizes.len() {
            for b in a + 1..g.sizes.len() {
                for ja in 1..=g.sizes[a] {
                    for jb in 1..=g.sizes[b] {
                        g.add_edge((a, ja), (b, jb))?;
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn add_edge(&mut self, x: (usize, usize), y: (usize, usize)) -> Result<()> {
        for &(i, j) in [&x, &y] {
            if i >= self.sizes.len() || j == 0 || j > self.sizes[i] {
                return Err(Error::InvariantViolation(format!("no host vertex v_({i},{j})")));
            }
        }
        if x.0 == y.0 {
            return Err(Error::InvariantViolation("host edges join different classes".into()));
        }
        self.edges.insert((x.min(y), x.max(y)));
        Ok(())
    }

    pub fn has_edge(&self, x: (usize, usize), y: (usize, usize)) -> bool {
        self.edges.contains(&(x.min(y), x.max(y)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `phi[i]` is the chosen index in class `i`; checks every pattern edge.
    pub fn is_homomorphism(&self, pattern: &PatternGraph, phi: &[usize]) -> bool {
        phi.len() == pattern.vertex_count()
            && phi.iter().zip(&self.sizes).all(|(&j, &n)| (1..=n).contains(&j))
            && pattern.edges().iter().all(|&(a, b)| self.has_edge((a, phi[a]), (b, phi[b])))
    }
}

/// First homomorphism in lexicographic order, by backtracking.
pub fn find_homomorphism(pattern: &PatternGraph, host: &HostGraph) -> Option<Vec<usize>> {
    fn grow(pattern: &PatternGraph, host: &HostGraph, phi: &mut Vec<usize>) -> bool {
        let i = phi.len();
        if i == pattern.vertex_count() {
            return true;
        }
        for j in 1..=host.sizes[i] {
            let fits = pattern
                .edges()
                .iter()
                .filter(|&&(a, b)| b == i && a < i)
                .all(|&(a, _)| host.has_edge((a, phi[a]), (i, j)));
            if fits {
                phi.push(j);
                if grow(pattern, host, phi) {
                    return true;
                }
                phi.pop();
            }
        }
        false
    }
    if host.sizes.len() != pattern.vertex_count() {
        return None;
    }
    let mut phi = Vec::with_capacity(pattern.vertex_count());
    grow(pattern, host, &mut phi).then_some(phi)
}

/// Vertex ids of one side (upper or lower) of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPath {
    /// `q_{i,0..n_i}`.
    pub spine: Vec<Vertex>,
    /// `sub[j - 1][l - 1]` is `q_{i,j,l}`.
    pub sub: Vec<Vec<Vertex>>,
}

impl BlockPath {
    /// Whole path from `q_{i,0}` to `q_{i,n_i}`.
    pub fn walk(&self) -> Vec<Vertex> {
        self.walk_windows(0, self.sub.len())
    }

    /// From `q_{i,from}` to `q_{i,to}`.
    fn walk_windows(&self, from: usize, to: usize) -> Vec<Vertex> {
        let mut v = vec![self.spine[from]];
        for j in from + 1..=to {
            v.extend(&self.sub[j - 1]);
            v.push(self.spine[j]);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiLayout {
    pub upper: Vec<BlockPath>,
    pub lower: Vec<BlockPath>,
    /// `(s_l, t_l)` per pattern edge.
    pub edge_terminals: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiReport {
    pub vertex_count: usize,
    /// `sum_i 2(n_i + 1 + k n_i) + 2k`.
    pub vertex_bound: usize,
    pub demand_count: usize,
    /// `h(2(c - 1) + 1) + k`.
    pub expected_demand_count: usize,
    /// Shortest `s_l`-`t_l` distance per pattern edge.
    pub edge_distances: Vec<Option<u64>>,
}

#[derive(Debug, Clone)]
pub struct PsiInstance {
    pub instance: Instance,
    pub layout: PsiLayout,
    pub report: PsiReport,
    pub pattern: PatternGraph,
    pub host: HostGraph,
}

pub fn psi_to_dspc(pattern: &PatternGraph, host: &HostGraph, c: u32) -> Result<PsiInstance> {
    let (h, k) = (pattern.vertex_count(), pattern.edge_count());
    if host.sizes().len() != h {
        return Err(Error::ShapeMismatch { expected: h, found: host.sizes().len() });
    }
    if c == 0 {
        return Err(Error::InvariantViolation("congestion must be at least 1".into()));
    }
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        next
    };
    let mut side = |n: usize| {
        let mut spine = vec![fresh()];
        let mut sub = Vec::with_capacity(n);
        for _ in 0..n {
            sub.push((0..k).map(|_| fresh()).collect::<Vec<_>>());
            spine.push(fresh());
        }
        BlockPath { spine, sub }
    };
    let mut upper = Vec::with_capacity(h);
    let mut lower = Vec::with_capacity(h);
    for &n in host.sizes() {
        upper.push(side(n));
        lower.push(side(n));
    }
    let edge_terminals: Vec<(Vertex, Vertex)> = (0..k).map(|_| (fresh(), fresh())).collect();
    let vertex_count = next;

    let mut arcs = BTreeSet::new();
    for i in 0..h {
        for path in [&upper[i], &lower[i]] {
            arcs.extend(path.walk().windows(2).map(|w| (w[0], w[1])));
        }
        for j in 1..=host.sizes()[i] {
            arcs.insert((upper[i].spine[j - 1], lower[i].spine[j]));
            for l in 0..k {
                arcs.insert((upper[i].sub[j - 1][l], lower[i].sub[j - 1][l]));
            }
        }
    }
    for (l, &(a, b)) in pattern.edges().iter().enumerate() {
        let (s, t) = edge_terminals[l];
        for ja in 1..=host.sizes()[a] {
            for jb in 1..=host.sizes()[b] {
                if host.has_edge((a, ja), (b, jb)) {
                    arcs.insert((s, upper[a].sub[ja - 1][l]));
                    arcs.insert((lower[a].sub[ja - 1][l], upper[b].sub[jb - 1][l]));
                    arcs.insert((lower[b].sub[jb - 1][l], t));
                }
            }
        }
    }
    let edges = arcs.into_iter().map(|(tail, head)| Edge { tail, head, weight: 1 }).collect();
    let mut dag = Dag::new(vertex_count, edges)?;
    for i in 0..h {
        for (name, path) in [("upper", &upper[i]), ("lower", &lower[i])] {
            for (j, &v) in path.spine.iter().enumerate() {
                dag.set_label(v, format!("{name}({},{j})", i + 1));
            }
            for (j, row) in path.sub.iter().enumerate() {
                for (l, &v) in row.iter().enumerate() {
                    dag.set_label(v, format!("{name}({},{},{})", i + 1, j + 1, l + 1));
                }
            }
        }
    }
    for (l, &(s, t)) in edge_terminals.iter().enumerate() {
        dag.set_label(s, format!("s({})", l + 1));
        dag.set_label(t, format!("t({})", l + 1));
    }

    let mut demands = Vec::new();
    for i in 0..h {
        let (u, w) = (&upper[i].spine, &lower[i].spine);
        let last = host.sizes()[i];
        demands.extend(std::iter::repeat_n((u[0], u[last]), c as usize - 1));
        demands.extend(std::iter::repeat_n((w[0], w[last]), c as usize - 1));
        demands.push((u[0], w[last]));
    }
    demands.extend(&edge_terminals);
    let instance = Instance::new(dag, demands, c, Mode::Vertex)?;

    let vertex_bound = host.sizes().iter().map(|&n| 2 * (n + 1 + k * n)).sum::<usize>() + 2 * k;
    let expected_demand_count = h * (2 * (c as usize - 1) + 1) + k;
    if vertex_count > vertex_bound || instance.k() != expected_demand_count {
        return Err(Error::InvariantViolation(format!(
            "{vertex_count} vertices and {} demands, expected at most {vertex_bound} and exactly {expected_demand_count}",
            instance.k()
        )));
    }
    let edge_distances = edge_terminals.iter().map(|&(s, t)| instance.dag().distances_from(s)[t]).collect();
    let report = PsiReport {
        vertex_count,
        vertex_bound,
        demand_count: instance.k(),
        expected_demand_count,
        edge_distances,
    };
    Ok(PsiInstance {
        instance,
        layout: PsiLayout { upper, lower, edge_terminals },
        report,
        pattern: pattern.clone(),
        host: host.clone(),
    })
}

impl PsiInstance {
    /// Spines for blocking demands, window `phi[i]` for the cross demand of
    /// block `i`, and the 5-edge hop for every pattern edge.
    pub fn expected_routing(&self, phi: &[usize]) -> Result<Solution> {
        if !self.host.is_homomorphism(&self.pattern, phi) {
            return Err(Error::WitnessInvalid(format!("{phi:?} is not a homomorphism")));
        }
        let dag = self.instance.dag();
        let copies = self.instance.congestion() as usize - 1;
        let l = &self.layout;
        let mut paths = Vec::with_capacity(self.instance.k());
        for (i, &j) in phi.iter().enumerate() {
            let n = self.host.sizes()[i];
            for _ in 0..copies {
                paths.push(Path::new(dag, l.upper[i].walk())?);
            }
            for _ in 0..copies {
                paths.push(Path::new(dag, l.lower[i].walk())?);
            }
            let mut cross = l.upper[i].walk_windows(0, j - 1);
            cross.extend(l.lower[i].walk_windows(j, n));
            paths.push(Path::new(dag, cross)?);
        }
        for (e, &(a, b)) in self.pattern.edges().iter().enumerate() {
            let (s, t) = l.edge_terminals[e];
            let (ja, jb) = (phi[a] - 1, phi[b] - 1);
            let hop = vec![s, l.upper[a].sub[ja][e], l.lower[a].sub[ja][e], l.upper[b].sub[jb][e], l.lower[b].sub[jb][e], t];
            paths.push(Path::new(dag, hop)?);
        }
        let sol = Solution::new(paths);
        if !verify_solution(&self.instance, &sol)?.feasible {
            return Err(Error::WitnessInvalid("routing from the witness does not verify".into()));
        }
        Ok(sol)
    }

    pub fn certificate(&self, phi: &[usize]) -> Result<GenCertificate> {
        Ok(GenCertificate {
            witness: Witness::Homomorphism(phi.to_vec()),
            expected_solution: self.expected_routing(phi)?,
        })
    }
}

/// Random class sizes in `1..=max_class`, a random planted map, and each
/// other cross-class pair along a pattern edge kept with probability `p`.
pub fn random_host<R: Rng>(rng: &mut R, pattern: &PatternGraph, max_class: usize, p: f64) -> Result<(HostGraph, Vec<usize>)> {
    let sizes: Vec<usize> = (0..pattern.vertex_count()).map(|_| rng.gen_range(1..=max_class.max(1))).collect();
    let phi: Vec<usize> = sizes.iter().map(|&n| *(1..=n).collect::<Vec<_>>().choose(rng).unwrap()).collect();
    let mut host = HostGraph::new(sizes)?;
    for &(a, b) in pattern.edges() {
        for ja in 1..=host.sizes()[a] {
            for jb in 1..=host.sizes()[b] {
                if (ja, jb) == (phi[a], phi[b]) || rng.gen_bool(p) {
                    host.add_edge((a, ja), (b, jb))?;
                }
            }
        }
    }
    Ok((host, phi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiParams {
    pub pattern: PatternGraph,
    pub max_class: usize,
    pub edge_prob: f64,
    pub congestion: u32,
}

impl Default for PsiParams {
    fn default() -> Self {
        PsiParams { pattern: PatternGraph::k33(), max_class: 2, edge_prob: 0.3, congestion: 2 }
    }
}

pub fn generate_psi(seed: u64, params: &PsiParams) -> Result<(PsiInstance, GenCertificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (host, phi) = random_host(&mut rng, &params.pattern, params.max_class, params.edge_prob)?;
    let generated = psi_to_dspc(&params.pattern, &host, params.congestion)?;
    let certificate = generated.certificate(&phi)?;
    Ok((generated, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_oracle, count_shortest_paths};

    #[test]
    fn patterns_validate() {
        assert_eq!(PatternGraph::k33().edge_count(), 9);
        assert_eq!(PatternGraph::cube().edge_count(), 12);
        assert!(matches!(PatternGraph::new(4, vec![(0, 2), (1, 3)]), Err(Error::PatternNotCubicBipartite(_))));
        assert!(matches!(PatternGraph::new(5, vec![]), Err(Error::PatternNotCubicBipartite(_))));
        let mut same_side = PatternGraph::k33().edges().to_vec();
        same_side[0] = (0, 1);
        assert!(matches!(PatternGraph::new(6, same_side), Err(Error::PatternNotCubicBipartite(_))));
    }

    #[test]
    fn k33_single_vertex_classes() {
        let host = HostGraph::complete(vec![1; 6]).unwrap();
        let g = psi_to_dspc(&PatternGraph::k33(), &host, 2).unwrap();
        assert_eq!(g.instance.k(), 27);
        assert_eq!(g.report.vertex_count, g.report.vertex_bound);
        assert!(g.report.edge_distances.iter().all(|&d| d == Some(5)));
        for i in 0..6 {
            let (u, w) = (&g.layout.upper[i].spine, &g.layout.lower[i].spine);
            assert_eq!(count_shortest_paths(g.instance.dag(), u[0], u[1]), 1);
            assert_eq!(count_shortest_paths(g.instance.dag(), w[0], w[1]), 1);
        }
        let sol = g.expected_routing(&[1; 6]).unwrap();
        assert_eq!(sol.len(), 27);
    }

    #[test]
    fn corrupted_witness_is_rejected() {
        let mut host = HostGraph::new(vec![2; 6]).unwrap();
        for &(a, b) in PatternGraph::k33().edges() {
            host.add_edge((a, 1), (b, 1)).unwrap();
        }
        let g = psi_to_dspc(&PatternGraph::k33(), &host, 2).unwrap();
        assert!(g.expected_routing(&[1; 6]).is_ok());
        assert!(matches!(g.expected_routing(&[2, 1, 1, 1, 1, 1]), Err(Error::WitnessInvalid(_))));
        assert!(matches!(g.expected_routing(&[3, 1, 1, 1, 1, 1]), Err(Error::WitnessInvalid(_))));
    }

    #[test]
    fn demand_count_follows_congestion() {
        let host = HostGraph::complete(vec![1; 8]).unwrap();
        for c in 1..4 {
            let g = psi_to_dspc(&PatternGraph::cube(), &host, c).unwrap();
            assert_eq!(g.instance.k(), 8 * (2 * (c as usize - 1) + 1) + 12);
            assert!(g.expected_routing(&[1; 8]).is_ok());
        }
    }

    #[test]
    fn feasibility_matches_homomorphism_existence() {
        let pattern = PatternGraph::k33();
        let mut checked = 0;
        for seed in 0..40u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sizes: Vec<usize> = (0..6).map(|_| rng.gen_range(1..=2)).collect();
            let mut host = HostGraph::new(sizes).unwrap();
            for &(a, b) in pattern.edges() {
                for ja in 1..=host.sizes()[a] {
                    for jb in 1..=host.sizes()[b] {
                        if rng.gen_bool(0.45) {
                            host.add_edge((a, ja), (b, jb)).unwrap();
                        }
                    }
                }
            }
            let g = psi_to_dspc(&pattern, &host, 2).unwrap();
            let Ok(routed) = brute_force_oracle(&g.instance) else { continue };
            assert_eq!(routed.is_some(), find_homomorphism(&pattern, &host).is_some(), "seed {seed}");
            checked += 1;
        }
        assert!(checked >= 20, "only {checked} instances fit the oracle");
    }

    #[test]
    fn generation_is_deterministic() {
        let (a, ca) = generate_psi(3, &PsiParams::default()).unwrap();
        let (b, cb) = generate_psi(3, &PsiParams::default()).unwrap();
        assert_eq!(a.instance, b.instance);
        assert_eq!(ca, cb);
    }
}
