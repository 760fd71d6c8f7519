//! Weighted DAGs, demand instances, paths and solution verification.
//!
//! Vertex ids are 1-based throughout (`1..=n`), matching the file format.
//! Every structure here is immutable once built, so all of them can be
//! shared freely across threads.

use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Weight = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub tail: Vertex,
    pub head: Vertex,
    pub weight: Weight,
}

impl From<(Vertex, Vertex, Weight)> for Edge {
    fn from((tail, head, weight): (Vertex, Vertex, Weight)) -> Self {
        Edge { tail, head, weight }
    }
}

/// Congestion is counted on vertices or on edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Vertex,
    Edge,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Vertex => "vertex",
            Mode::Edge => "edge",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "vertex" => Ok(Mode::Vertex),
            "edge" => Ok(Mode::Edge),
            other => Err(format!("unknown mode `{other}` (expected vertex or edge)")),
        }
    }
}

/// Kahn-style peeling; among ready vertices the smallest id goes first.
pub fn topo_sort(n: usize, edges: &[Edge]) -> Result<Vec<Vertex>> {
    let mut indegree = vec![0usize; n + 1];
    let mut out: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for e in edges {
        indegree[e.head] += 1;
        out[e.tail].push(e.head);
    }
    let mut ready: BinaryHeap<Reverse<Vertex>> =
        (1..=n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    if order.len() != n {
        return Err(Error::CycleDetected);
    }
    Ok(order)
}

/// A weighted directed acyclic graph on vertices `1..=n`.
#[derive(Debug, Clone)]
pub struct Dag {
    n: usize,
    edges: Vec<Edge>,
    labels: Vec<Option<String>>,
    transformed: bool,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    index: HashMap<(Vertex, Vertex), usize>,
    order: Vec<Vertex>,
    position: Vec<usize>,
}

impl PartialEq for Dag {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.labels == other.labels
            && self.transformed == other.transformed
    }
}

impl Eq for Dag {}

impl Dag {
    /// Builds a user-facing DAG; every weight must be at least 1.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::build(n, edges, false)
    }

    /// Builds a DAG produced by an internal transform; zero weights are allowed.
    pub fn new_transformed(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::build(n, edges, true)
    }

    pub fn from_arcs(n: usize, arcs: &[(Vertex, Vertex, Weight)]) -> Result<Self> {
        Self::new(n, arcs.iter().copied().map(Edge::from).collect())
    }

    pub fn with_transformed_flag(n: usize, edges: Vec<Edge>, transformed: bool) -> Result<Self> {
        Self::build(n, edges, transformed)
    }

    fn build(n: usize, edges: Vec<Edge>, transformed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvariantViolation("a graph needs at least one vertex".into()));
        }
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.tail == 0 || e.tail > n || e.head == 0 || e.head > n {
                return Err(Error::InvariantViolation(format!(
                    "edge ({}, {}) has an endpoint outside 1..={n}",
                    e.tail, e.head
                )));
            }
            if e.tail == e.head {
                return Err(Error::InvariantViolation(format!("self-loop at vertex {}", e.tail)));
            }
            if e.weight == 0 && !transformed {
                return Err(Error::InvariantViolation(format!(
                    "edge ({}, {}) has weight 0; user graphs need positive weights",
                    e.tail, e.head
                )));
            }
            if index.insert((e.tail, e.head), i).is_some() {
                return Err(Error::InvariantViolation(format!(
                    "parallel edge ({}, {})",
                    e.tail, e.head
                )));
            }
        }
        let order = topo_sort(n, &edges)?;
        let mut position = vec![usize::MAX; n + 1];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let mut out = vec![Vec::new(); n + 1];
        let mut inc = vec![Vec::new(); n + 1];
        for (i, e) in edges.iter().enumerate() {
            out[e.tail].push(i);
            inc[e.head].push(i);
        }
        for list in out.iter_mut() {
            list.sort_by_key(|&i| edges[i].head);
        }
        for list in inc.iter_mut() {
            list.sort_by_key(|&i| edges[i].tail);
        }
        Ok(Dag {
            n,
            edges,
            labels: vec![None; n + 1],
            transformed,
            out,
            inc,
            index,
            order,
            position,
        })
    }

    /// Attaches a provenance tag to a vertex.
    pub fn set_label(&mut self, v: Vertex, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn is_transformed(&self) -> bool {
        self.transformed
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.n).contains(&v)
    }

    /// Index of edge `(u, v)` in [`Dag::edges`].
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        self.edge_index(u, v).map(|i| self.edges[i].weight)
    }

    /// Outgoing edges of `v`, sorted by head id.
    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = Edge> + '_ {
        self.out[v].iter().map(|&i| self.edges[i])
    }

    /// Incoming edges of `v`, sorted by tail id.
    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = Edge> + '_ {
        self.inc[v].iter().map(|&i| self.edges[i])
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inc[v].len()
    }

    /// The deterministic topological order (smallest id first among ties).
    pub fn topo_order(&self) -> &[Vertex] {
        &self.order
    }

    /// Position of `v` in [`Dag::topo_order`].
    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    /// Single-source distances, indexed by vertex id (slot 0 unused).
    pub fn distances_from(&self, s: Vertex) -> Vec<Option<Weight>> {
        let mut dist = vec![None; self.n + 1];
        dist[s] = Some(0);
        for &u in &self.order[self.position[s]..] {
            let Some(du) = dist[u] else { continue };
            for e in self.out_edges(u) {
                let cand = du + e.weight;
                if dist[e.head].is_none_or(|d| cand < d) {
                    dist[e.head] = Some(cand);
                }
            }
        }
        dist
    }

    /// Single-target distances, indexed by vertex id (slot 0 unused).
    pub fn distances_to(&self, t: Vertex) -> Vec<Option<Weight>> {
        let mut dist = vec![None; self.n + 1];
        dist[t] = Some(0);
        for &v in self.order[..=self.position[t]].iter().rev() {
            let Some(dv) = dist[v] else { continue };
            for e in self.in_edges(v) {
                let cand = dv + e.weight;
                if dist[e.tail].is_none_or(|d| cand < d) {
                    dist[e.tail] = Some(cand);
                }
            }
        }
        dist
    }

    /// Lexicographically smallest vertex sequence among all minimum-weight
    /// `s`-`t` paths.
    pub fn canonical_shortest_path(&self, s: Vertex, t: Vertex) -> Option<Path> {
        let to_t = self.distances_to(t);
        let total = to_t[s]?;
        let mut vertices = vec![s];
        let mut u = s;
        while u != t {
            let here = to_t[u].expect("vertex on a shortest path reaches t");
            // out edges are sorted by head, so the first match is the smallest id
            let next = self
                .out_edges(u)
                .find(|e| to_t[e.head].is_some_and(|d| d + e.weight == here))
                .expect("shortest-path successor exists");
            vertices.push(next.head);
            u = next.head;
        }
        Some(Path { vertices, length: total })
    }
}

/// All-pairs shortest distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Weight>,
}

const UNREACHABLE: Weight = Weight::MAX;

impl DistanceMatrix {
    pub fn new(dag: &Dag) -> Self {
        let n = dag.vertex_count();
        let mut dist = vec![UNREACHABLE; n * n];
        for s in dag.vertices() {
            let row = &mut dist[(s - 1) * n..s * n];
            for (v, d) in dag.distances_from(s).into_iter().enumerate().skip(1) {
                if let Some(d) = d {
                    row[v - 1] = d;
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    /// Shortest `u`-`v` distance, `None` when `v` is unreachable from `u`.
    pub fn dist(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        let d = self.dist[(u - 1) * self.n + (v - 1)];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
}

pub fn all_pairs_dist(dag: &Dag) -> DistanceMatrix {
    DistanceMatrix::new(dag)
}

pub fn reachable(dag: &Dag, s: Vertex, t: Vertex) -> bool {
    s == t || (dag.position(s) < dag.position(t) && dag.distances_from(s)[t].is_some())
}

/// A directed path given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<Vertex>,
    length: Weight,
}

impl Path {
    /// Checks that consecutive vertices are joined by edges of `dag`.
    pub fn new(dag: &Dag, vertices: Vec<Vertex>) -> Result<Self> {
        let Some(&first) = vertices.first() else {
            return Err(Error::InvariantViolation("a path needs at least one vertex".into()));
        };
        if !dag.contains(first) {
            return Err(Error::InvariantViolation(format!("vertex {first} is not in the graph")));
        }
        let mut length = 0;
        for w in vertices.windows(2) {
            let weight = dag.weight(w[0], w[1]).ok_or_else(|| {
                Error::InvariantViolation(format!("({}, {}) is not an edge", w[0], w[1]))
            })?;
            length += weight;
        }
        Ok(Path { vertices, length })
    }

    pub fn single(v: Vertex) -> Self {
        Path { vertices: vec![v], length: 0 }
    }

    pub(crate) fn from_parts(vertices: Vec<Vertex>, length: Weight) -> Self {
        debug_assert!(!vertices.is_empty());
        Path { vertices, length }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn length(&self) -> Weight {
        self.length
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

pub fn is_shortest(path: &Path, dm: &DistanceMatrix) -> bool {
    dm.dist(path.first(), path.last()) == Some(path.length())
}

/// One path per demand, in demand order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub paths: Vec<Path>,
}

impl Solution {
    pub fn new(paths: Vec<Path>) -> Self {
        Solution { paths }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn lengths(&self) -> Vec<Weight> {
        self.paths.iter().map(Path::length).collect()
    }
}

/// A DAG, an ordered demand list and a congestion budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    dag: Dag,
    demands: Vec<(Vertex, Vertex)>,
    congestion: u32,
    mode: Mode,
}

impl Instance {
    pub fn new(dag: Dag, demands: Vec<(Vertex, Vertex)>, congestion: u32, mode: Mode) -> Result<Self> {
        if demands.is_empty() {
            return Err(Error::InvariantViolation("an instance needs at least one demand".into()));
        }
        if congestion == 0 {
            return Err(Error::InvariantViolation("congestion must be at least 1".into()));
        }
        for &(s, t) in &demands {
            if !dag.contains(s) || !dag.contains(t) {
                return Err(Error::InvariantViolation(format!(
                    "demand ({s}, {t}) names a vertex outside 1..={}",
                    dag.vertex_count()
                )));
            }
        }
        Ok(Instance { dag, demands, congestion, mode })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn demands(&self) -> &[(Vertex, Vertex)] {
        &self.demands
    }

    pub fn k(&self) -> usize {
        self.demands.len()
    }

    pub fn congestion(&self) -> u32 {
        self.congestion
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `d = max(k - c, 0)`.
    pub fn slack(&self) -> usize {
        self.k().saturating_sub(self.congestion as usize)
    }

    /// Same graph and demands under a different budget.
    pub fn with_congestion(&self, congestion: u32) -> Result<Self> {
        Instance::new(self.dag.clone(), self.demands.clone(), congestion, self.mode)
    }

    /// Restriction to the demands at `indices` (in that order).
    pub fn sub_instance(&self, indices: &[usize], congestion: u32) -> Result<Self> {
        let demands = indices.iter().map(|&i| self.demands[i]).collect();
        Instance::new(self.dag.clone(), demands, congestion, self.mode)
    }
}

/// Number of paths through each vertex and each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongestionProfile {
    mode: Mode,
    vertex: Vec<u32>,
    edge: BTreeMap<(Vertex, Vertex), u32>,
}

impl CongestionProfile {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertex_load(&self, v: Vertex) -> u32 {
        self.vertex.get(v).copied().unwrap_or(0)
    }

    pub fn edge_load(&self, u: Vertex, v: Vertex) -> u32 {
        self.edge.get(&(u, v)).copied().unwrap_or(0)
    }

    /// `(vertex, load)` for every vertex with positive load.
    pub fn vertex_loads(&self) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.vertex.iter().enumerate().skip(1).filter(|(_, &c)| c > 0).map(|(v, &c)| (v, c))
    }

    pub fn edge_loads(&self) -> impl Iterator<Item = ((Vertex, Vertex), u32)> + '_ {
        self.edge.iter().map(|(&e, &c)| (e, c))
    }

    /// Largest load under the profile's mode.
    pub fn max_load(&self) -> u32 {
        match self.mode {
            Mode::Vertex => self.vertex.iter().copied().max().unwrap_or(0),
            Mode::Edge => self.edge.values().copied().max().unwrap_or(0),
        }
    }
}

pub fn congestion_profile(inst: &Instance, sol: &Solution) -> CongestionProfile {
    let n = inst.dag().vertex_count();
    let mut vertex = vec![0u32; n + 1];
    let mut edge = BTreeMap::new();
    for p in &sol.paths {
        for &v in p.vertices() {
            if v <= n {
                vertex[v] += 1;
            }
        }
        for arc in p.arcs() {
            *edge.entry(arc).or_insert(0) += 1;
        }
    }
    CongestionProfile { mode: inst.mode(), vertex, edge }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Endpoints { demand: usize, expected: (Vertex, Vertex), found: (Vertex, Vertex) },
    BrokenPath { demand: usize, tail: Vertex, head: Vertex },
    LengthMismatch { demand: usize, claimed: Weight, actual: Weight },
    NotShortest { demand: usize, length: Weight, shortest: Option<Weight> },
    VertexOverload { vertex: Vertex, load: u32, cap: u32 },
    EdgeOverload { tail: Vertex, head: Vertex, load: u32, cap: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Endpoints { demand, expected, found } => write!(
                f,
                "demand {}: path runs {}->{} instead of {}->{}",
                demand + 1,
                found.0,
                found.1,
                expected.0,
                expected.1
            ),
            Violation::BrokenPath { demand, tail, head } => {
                write!(f, "demand {}: ({tail}, {head}) is not an edge", demand + 1)
            }
            Violation::LengthMismatch { demand, claimed, actual } => {
                write!(f, "demand {}: claimed length {claimed}, actual {actual}", demand + 1)
            }
            Violation::NotShortest { demand, length, shortest } => match shortest {
                Some(d) => write!(f, "demand {}: length {length} exceeds distance {d}", demand + 1),
                None => write!(f, "demand {}: terminal unreachable", demand + 1),
            },
            Violation::VertexOverload { vertex, load, cap } => {
                write!(f, "vertex {vertex} carries {load} paths (cap {cap})")
            }
            Violation::EdgeOverload { tail, head, load, cap } => {
                write!(f, "edge ({tail}, {head}) carries {load} paths (cap {cap})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

/// Checks endpoints, shortestness and the congestion budget of `sol`.
///
/// Paths are re-walked against the instance graph, so a solution built for a
/// different graph is caught as a [`Violation::BrokenPath`].
pub fn verify_solution(inst: &Instance, sol: &Solution) -> Result<VerifyReport> {
    if sol.len() != inst.k() {
        return Err(Error::ShapeMismatch { expected: inst.k(), found: sol.len() });
    }
    let dag = inst.dag();
    let mut violations = Vec::new();
    let mut from_source: HashMap<Vertex, Vec<Option<Weight>>> = HashMap::new();
    let mut structurally_sound = true;

    for (i, (path, &(s, t))) in sol.paths.iter().zip(inst.demands()).enumerate() {
        if (path.first(), path.last()) != (s, t) {
            violations.push(Violation::Endpoints {
                demand: i,
                expected: (s, t),
                found: (path.first(), path.last()),
            });
        }
        if path.vertices().iter().any(|&v| !dag.contains(v)) {
            structurally_sound = false;
            let bad = *path.vertices().iter().find(|&&v| !dag.contains(v)).unwrap();
            violations.push(Violation::BrokenPath { demand: i, tail: bad, head: bad });
            continue;
        }
        let mut actual = 0;
        let mut broken = false;
        for (u, v) in path.arcs() {
            match dag.weight(u, v) {
                Some(w) => actual += w,
                None => {
                    violations.push(Violation::BrokenPath { demand: i, tail: u, head: v });
                    broken = true;
                }
            }
        }
        if broken {
            structurally_sound = false;
            continue;
        }
        if actual != path.length() {
            violations.push(Violation::LengthMismatch {
                demand: i,
                claimed: path.length(),
                actual,
            });
        }
        let dist = from_source
            .entry(path.first())
            .or_insert_with(|| dag.distances_from(path.first()))[path.last()];
        if dist != Some(actual) {
            violations.push(Violation::NotShortest { demand: i, length: actual, shortest: dist });
        }
    }

    if structurally_sound {
        let cap = inst.congestion();
        let profile = congestion_profile(inst, sol);
        match inst.mode() {
            Mode::Vertex => {
                for (vertex, load) in profile.vertex_loads() {
                    if load > cap {
                        violations.push(Violation::VertexOverload { vertex, load, cap });
                    }
                }
            }
            Mode::Edge => {
                for ((tail, head), load) in profile.edge_loads() {
                    if load > cap {
                        violations.push(Violation::EdgeOverload { tail, head, load, cap });
                    }
                }
            }
        }
    }

    Ok(VerifyReport { feasible: violations.is_empty(), violations })
}

/// Set of vertices used by more than one path (congestion-1 check).
pub(crate) fn pairwise_vertex_disjoint<'a>(paths: impl IntoIterator<Item = &'a [Vertex]>) -> bool {
    let mut seen = HashSet::new();
    paths.into_iter().all(|p| p.iter().all(|&v| seen.insert(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Dag {
        Dag::from_arcs(3, &[(1, 2, 1), (2, 3, 1)]).unwrap()
    }

    fn diamond() -> Dag {
        Dag::from_arcs(4, &[(1, 2, 1), (1, 3, 1), (2, 4, 1), (3, 4, 1)]).unwrap()
    }

    fn path(dag: &Dag, v: &[Vertex]) -> Path {
        Path::new(dag, v.to_vec()).unwrap()
    }

    #[test]
    fn topo_order_small_cases() {
        assert_eq!(Dag::new(1, vec![]).unwrap().topo_order(), &[1]);
        assert_eq!(chain().topo_order(), &[1, 2, 3]);
        assert_eq!(diamond().topo_order(), &[1, 2, 3, 4]);
    }

    #[test]
    fn topo_order_prefers_smallest_ready_id() {
        let dag = Dag::from_arcs(4, &[(4, 1, 1), (3, 2, 1)]).unwrap();
        assert_eq!(dag.topo_order(), &[3, 2, 4, 1]);
    }

    #[test]
    fn rejects_cycles_loops_parallel_edges_and_zero_weights() {
        assert_eq!(
            Dag::from_arcs(3, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap_err(),
            Error::CycleDetected
        );
        assert!(matches!(Dag::from_arcs(2, &[(1, 1, 1)]), Err(Error::InvariantViolation(_))));
        assert!(matches!(
            Dag::from_arcs(2, &[(1, 2, 1), (1, 2, 3)]),
            Err(Error::InvariantViolation(_))
        ));
        assert!(matches!(Dag::from_arcs(2, &[(1, 2, 0)]), Err(Error::InvariantViolation(_))));
        assert!(Dag::new_transformed(2, vec![(1, 2, 0).into()]).is_ok());
        assert!(matches!(Dag::from_arcs(2, &[(1, 3, 1)]), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn distances_on_chain_and_diamond() {
        let dm = all_pairs_dist(&chain());
        assert_eq!(dm.dist(1, 3), Some(2));
        assert_eq!(dm.dist(3, 1), None);
        assert_eq!(dm.dist(2, 2), Some(0));
        assert_eq!(all_pairs_dist(&diamond()).dist(1, 4), Some(2));
    }

    #[test]
    fn distances_to_mirror_distances_from() {
        let dag = Dag::from_arcs(5, &[(1, 2, 2), (2, 5, 1), (1, 3, 1), (3, 4, 1), (4, 5, 2)]).unwrap();
        let to5 = dag.distances_to(5);
        for v in dag.vertices() {
            assert_eq!(to5[v], dag.distances_from(v)[5]);
        }
    }

    #[test]
    fn is_shortest_examples() {
        let c = chain();
        assert!(is_shortest(&path(&c, &[1, 2, 3]), &all_pairs_dist(&c)));
        let d = Dag::from_arcs(4, &[(1, 2, 1), (1, 3, 1), (2, 4, 1), (3, 4, 1), (1, 4, 1)]).unwrap();
        assert!(!is_shortest(&path(&d, &[1, 2, 4]), &all_pairs_dist(&d)));
    }

    #[test]
    fn reachable_examples() {
        assert!(reachable(&chain(), 1, 3));
        assert!(!reachable(&chain(), 3, 1));
        assert!(reachable(&chain(), 2, 2));
    }

    #[test]
    fn verify_diamond_examples() {
        let dag = diamond();
        let sol = Solution::new(vec![path(&dag, &[1, 2, 4]), path(&dag, &[1, 3, 4])]);
        let inst = Instance::new(dag.clone(), vec![(1, 4), (1, 4)], 2, Mode::Vertex).unwrap();
        assert!(verify_solution(&inst, &sol).unwrap().feasible);

        let tight = inst.with_congestion(1).unwrap();
        let report = verify_solution(&tight, &sol).unwrap();
        assert!(!report.feasible);
        assert!(report
            .violations
            .contains(&Violation::VertexOverload { vertex: 1, load: 2, cap: 1 }));
    }

    #[test]
    fn verify_flags_detour_and_shape() {
        let dag = Dag::from_arcs(5, &[(1, 2, 1), (2, 4, 1), (1, 3, 1), (3, 5, 1), (5, 4, 1)]).unwrap();
        let inst = Instance::new(dag.clone(), vec![(1, 4)], 1, Mode::Vertex).unwrap();
        let detour = Solution::new(vec![path(&dag, &[1, 3, 5, 4])]);
        let report = verify_solution(&inst, &detour).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::NotShortest { demand: 0, length: 3, shortest: Some(2) }]
        );
        assert_eq!(
            verify_solution(&inst, &Solution::new(vec![])).unwrap_err(),
            Error::ShapeMismatch { expected: 1, found: 0 }
        );
    }

    #[test]
    fn verify_edge_mode_counts_edges() {
        let dag = diamond();
        let inst = Instance::new(dag.clone(), vec![(1, 4), (1, 4)], 1, Mode::Edge).unwrap();
        let apart = Solution::new(vec![path(&dag, &[1, 2, 4]), path(&dag, &[1, 3, 4])]);
        assert!(verify_solution(&inst, &apart).unwrap().feasible);
        let shared = Solution::new(vec![path(&dag, &[1, 2, 4]), path(&dag, &[1, 2, 4])]);
        assert!(!verify_solution(&inst, &shared).unwrap().feasible);
    }

    #[test]
    fn zero_length_demand_uses_single_vertex() {
        let dag = chain();
        let inst = Instance::new(dag, vec![(2, 2)], 1, Mode::Vertex).unwrap();
        assert!(verify_solution(&inst, &Solution::new(vec![Path::single(2)])).unwrap().feasible);
    }

    #[test]
    fn profile_counts_occurrences() {
        let dag = diamond();
        let inst = Instance::new(dag.clone(), vec![(1, 4), (1, 4)], 2, Mode::Vertex).unwrap();
        let sol = Solution::new(vec![path(&dag, &[1, 2, 4]), path(&dag, &[1, 3, 4])]);
        let prof = congestion_profile(&inst, &sol);
        let loads: Vec<_> = prof.vertex_loads().collect();
        assert_eq!(loads, vec![(1, 2), (2, 1), (3, 1), (4, 2)]);
        assert_eq!(prof.max_load(), 2);

        let single = Instance::new(chain(), vec![(1, 3)], 1, Mode::Vertex).unwrap();
        let sol = Solution::new(vec![path(&chain(), &[1, 2, 3])]);
        let loads: Vec<_> = congestion_profile(&single, &sol).vertex_loads().collect();
        assert_eq!(loads, vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn canonical_path_is_lexicographically_smallest() {
        let dag = diamond();
        assert_eq!(dag.canonical_shortest_path(1, 4).unwrap().vertices(), &[1, 2, 4]);
        assert!(dag.canonical_shortest_path(4, 1).is_none());
        assert_eq!(dag.canonical_shortest_path(3, 3).unwrap().vertices(), &[3]);
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new(chain(), vec![], 1, Mode::Vertex).is_err());
        assert!(Instance::new(chain(), vec![(1, 3)], 0, Mode::Vertex).is_err());
        assert!(Instance::new(chain(), vec![(1, 4)], 1, Mode::Vertex).is_err());
        let inst = Instance::new(chain(), vec![(1, 3), (1, 2), (2, 3)], 1, Mode::Vertex).unwrap();
        assert_eq!(inst.slack(), 2);
        assert_eq!(inst.with_congestion(5).unwrap().slack(), 0);
    }
}
