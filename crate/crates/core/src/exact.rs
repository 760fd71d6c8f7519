//! Exact congestion-1 solver: divide and conquer over the topological order.
//!
//! The vertex order `v_1..v_n` is halved recursively. A tuple of demand
//! pairs whose endpoints all sit in one half is solved there; a pair that
//! crosses from the left half to the right half must leave the left half
//! through exactly one left-to-right edge, so every choice of such boundary
//! edges (one per crossing pair, pairwise disjoint) yields two independent
//! sub-tuples, one per half. Sub-tuple answers are memoized by
//! `(interval, sorted pairs)`.
//!
//! A shortest `s`-`t` path in a DAG only visits vertices whose topological
//! position lies between those of `s` and `t`, so distances measured in the
//! whole graph coincide with distances inside any interval containing both
//! endpoints. That is what lets a single [`DistanceMatrix`] drive the merge
//! check at every level.

use std::collections::{HashMap, HashSet};

use log::debug;

use crate::error::{Error, Result};
use crate::graph::{pairwise_vertex_disjoint, Dag, DistanceMatrix, Edge, Path, Solution, Vertex};

/// Default bound on the number of demand pairs accepted by the solver.
pub const DEFAULT_PAIR_CAP: usize = 6;

/// Half-open range `lo..hi` of positions in the topological order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo < hi, "empty interval {lo}..{hi}");
        Interval { lo, hi }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, position: usize) -> bool {
        (self.lo..self.hi).contains(&position)
    }
}

/// Splits into the first `ceil(len / 2)` positions and the rest.
pub fn split_interval(interval: Interval) -> (Interval, Interval) {
    assert!(interval.len() >= 2, "cannot split an interval of length {}", interval.len());
    let mid = interval.lo + interval.len().div_ceil(2);
    (Interval::new(interval.lo, mid), Interval::new(mid, interval.hi))
}

/// Memo key: an interval plus a canonically sorted list of pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleKey {
    pub interval: Interval,
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl TupleKey {
    pub fn new(interval: Interval, mut pairs: Vec<(Vertex, Vertex)>) -> Self {
        pairs.sort_unstable();
        TupleKey { interval, pairs }
    }
}

/// One left-to-right edge per crossing demand, tails and heads pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryEdgeSet {
    pub edges: Vec<Edge>,
}

/// Lazily yields every injective choice of one candidate edge per demand.
///
/// Assignments come out in lexicographic order of (demand index, position in
/// that demand's candidate list).
pub struct BoundarySets<'a> {
    dag: &'a Dag,
    candidates: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    chosen: Vec<usize>,
    done: bool,
}

impl<'a> BoundarySets<'a> {
    /// `candidates[i]` lists edge indices usable by crossing demand `i`.
    pub fn new(dag: &'a Dag, candidates: Vec<Vec<usize>>) -> Self {
        let depth = candidates.len();
        BoundarySets { dag, candidates, cursor: vec![0; depth], chosen: Vec::with_capacity(depth), done: false }
    }

    fn compatible(&self, edge: usize) -> bool {
        let e = self.dag.edge(edge);
        self.chosen.iter().all(|&c| {
            let other = self.dag.edge(c);
            other.tail != e.tail && other.head != e.head
        })
    }
}

impl Iterator for BoundarySets<'_> {
    type Item = BoundaryEdgeSet;

    fn next(&mut self) -> Option<BoundaryEdgeSet> {
        if self.done {
            return None;
        }
        if self.candidates.is_empty() {
            self.done = true;
            return Some(BoundaryEdgeSet { edges: Vec::new() });
        }
        loop {
            let depth = self.chosen.len();
            if depth == self.candidates.len() {
                let edges = self.chosen.iter().map(|&i| self.dag.edge(i)).collect();
                self.chosen.pop();
                return Some(BoundaryEdgeSet { edges });
            }
            let mut found = None;
            while self.cursor[depth] < self.candidates[depth].len() {
                let edge = self.candidates[depth][self.cursor[depth]];
                self.cursor[depth] += 1;
                if self.compatible(edge) {
                    found = Some(edge);
                    break;
                }
            }
            match found {
                Some(edge) => {
                    self.chosen.push(edge);
                    if depth + 1 < self.candidates.len() {
                        self.cursor[depth + 1] = 0;
                    }
                }
                None if depth == 0 => {
                    self.done = true;
                    return None;
                }
                None => {
                    self.chosen.pop();
                }
            }
        }
    }
}

/// Edge indices with tail in `left` and head in `right`, in edge order.
pub fn crossing_edges(dag: &Dag, left: Interval, right: Interval) -> Vec<usize> {
    dag.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| left.contains(dag.position(e.tail)) && right.contains(dag.position(e.head)))
        .map(|(i, _)| i)
        .collect()
}

/// Every boundary set for `crossing_demands` over all left-to-right edges.
pub fn enumerate_boundary_sets<'a>(
    dag: &'a Dag,
    left: Interval,
    right: Interval,
    crossing_demands: &[(Vertex, Vertex)],
) -> BoundarySets<'a> {
    let edges = crossing_edges(dag, left, right);
    BoundarySets::new(dag, vec![edges; crossing_demands.len()])
}

/// Joins `left[i] + edge i + right[i]` for each crossing demand `i`.
///
/// `left` and `right` start with the `t` crossing parts (in demand order);
/// any further entries are paths routed wholly inside one half and only take
/// part in the disjointness check. Accepts iff every joined path has length
/// equal to the distance between its demand endpoints and all paths are
/// pairwise vertex-disjoint.
pub fn merge_check(
    dm: &DistanceMatrix,
    left: &[Path],
    right: &[Path],
    bset: &BoundaryEdgeSet,
    demands: &[(Vertex, Vertex)],
) -> Option<Solution> {
    let t = demands.len();
    if bset.edges.len() != t || left.len() < t || right.len() < t {
        return None;
    }
    let mut merged = Vec::with_capacity(t);
    for (i, (&(s, target), e)) in demands.iter().zip(&bset.edges).enumerate() {
        let (l, r) = (&left[i], &right[i]);
        if l.first() != s || l.last() != e.tail || r.first() != e.head || r.last() != target {
            return None;
        }
        let length = l.length() + e.weight + r.length();
        if dm.dist(s, target) != Some(length) {
            return None;
        }
        let mut vertices = l.vertices().to_vec();
        vertices.extend_from_slice(r.vertices());
        merged.push(Path::from_parts(vertices, length));
    }
    let all = merged
        .iter()
        .chain(&left[t..])
        .chain(&right[t..])
        .map(Path::vertices);
    pairwise_vertex_disjoint(all).then(|| Solution::new(merged))
}

/// The dictionary of solved tuples.
#[derive(Debug, Clone, Default)]
pub struct MemoStore {
    entries: HashMap<TupleKey, Option<Vec<Path>>>,
}

impl MemoStore {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Paths of a solved tuple, in the key's sorted pair order.
    pub fn get(&self, key: &TupleKey) -> Option<Option<&[Path]>> {
        self.entries.get(key).map(|e| e.as_deref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TupleKey, Option<&[Path]>)> {
        self.entries.iter().map(|(k, v)| (k, v.as_deref()))
    }

    fn insert(&mut self, key: TupleKey, value: Option<Vec<Path>>) {
        let previous = self.entries.insert(key, value);
        debug_assert!(previous.is_none(), "memo entries are written once");
    }
}

/// Memoizing divide-and-conquer solver bound to one DAG.
pub struct DisjointShortestSolver<'a> {
    dag: &'a Dag,
    dm: DistanceMatrix,
    pair_cap: usize,
    crossing: HashMap<Interval, Vec<usize>>,
    memo: MemoStore,
}

impl<'a> DisjointShortestSolver<'a> {
    pub fn new(dag: &'a Dag) -> Self {
        DisjointShortestSolver {
            dag,
            dm: DistanceMatrix::new(dag),
            pair_cap: DEFAULT_PAIR_CAP,
            crossing: HashMap::new(),
            memo: MemoStore::default(),
        }
    }

    pub fn with_pair_cap(mut self, cap: usize) -> Self {
        self.pair_cap = cap;
        self
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dm
    }

    pub fn memo(&self) -> &MemoStore {
        &self.memo
    }

    pub fn whole(&self) -> Interval {
        Interval::new(0, self.dag.vertex_count())
    }

    /// Routes `pairs` by pairwise vertex-disjoint shortest paths, if possible.
    pub fn solve(&mut self, pairs: &[(Vertex, Vertex)]) -> Result<Option<Solution>> {
        if pairs.is_empty() || pairs.len() > self.pair_cap {
            return Err(Error::LimitExceeded { pairs: pairs.len(), cap: self.pair_cap });
        }
        if let Some(&(s, t)) = pairs.iter().find(|(s, t)| !self.dag.contains(*s) || !self.dag.contains(*t)) {
            return Err(Error::InvariantViolation(format!("pair ({s}, {t}) names an unknown vertex")));
        }
        let whole = self.whole();
        let result = self.solve_in(whole, pairs).map(Solution::new);
        debug!(
            "dnc solver: {} pairs on {} vertices, {} memo entries, feasible={}",
            pairs.len(),
            self.dag.vertex_count(),
            self.memo.len(),
            result.is_some()
        );
        Ok(result)
    }

    /// Solves `pairs` (any order) inside `interval`; paths come back in the
    /// order of `pairs`.
    fn solve_in(&mut self, interval: Interval, pairs: &[(Vertex, Vertex)]) -> Option<Vec<Path>> {
        if pairs.is_empty() {
            return Some(Vec::new());
        }
        let key = TupleKey::new(interval, pairs.to_vec());
        let canonical = match self.memo.get(&key) {
            Some(hit) => hit.map(<[Path]>::to_vec),
            None => {
                let computed = self.compute(interval, &key.pairs);
                self.memo.insert(key.clone(), computed.clone());
                computed
            }
        }?;
        // sorted pairs are distinct whenever a solution exists
        Some(
            pairs
                .iter()
                .map(|p| canonical[key.pairs.binary_search(p).unwrap()].clone())
                .collect(),
        )
    }

    fn compute(&mut self, interval: Interval, pairs: &[(Vertex, Vertex)]) -> Option<Vec<Path>> {
        let mut endpoints = HashSet::new();
        for &(s, t) in pairs {
            if !endpoints.insert(s) || (s != t && !endpoints.insert(t)) {
                return None;
            }
            debug_assert!(interval.contains(self.dag.position(s)) && interval.contains(self.dag.position(t)));
            if self.dag.position(s) > self.dag.position(t) || self.dm.dist(s, t).is_none() {
                return None;
            }
        }

        if interval.len() == 1 {
            // distinct endpoints inside a single position: one trivial pair
            let (s, _) = pairs[0];
            return Some(vec![Path::single(s)]);
        }

        let (left, right) = split_interval(interval);
        let side = |v: Vertex| left.contains(self.dag.position(v));
        let mut left_only = Vec::new();
        let mut right_only = Vec::new();
        let mut crossing = Vec::new();
        for (i, &(s, t)) in pairs.iter().enumerate() {
            match (side(s), side(t)) {
                (true, true) => left_only.push(i),
                (false, false) => right_only.push(i),
                (true, false) => crossing.push(i),
                (false, true) => unreachable!("right-to-left pair survived the order check"),
            }
        }

        let assemble = |crossing_paths: &[Path], l: &[Path], r: &[Path]| {
            let mut out = vec![None; pairs.len()];
            for (slot, &i) in crossing.iter().enumerate() {
                out[i] = Some(crossing_paths[slot].clone());
            }
            for (slot, &i) in left_only.iter().enumerate() {
                out[i] = Some(l[slot].clone());
            }
            for (slot, &i) in right_only.iter().enumerate() {
                out[i] = Some(r[slot].clone());
            }
            out.into_iter().map(Option::unwrap).collect::<Vec<_>>()
        };

        let left_pairs: Vec<_> = left_only.iter().map(|&i| pairs[i]).collect();
        let right_pairs: Vec<_> = right_only.iter().map(|&i| pairs[i]).collect();

        if crossing.is_empty() {
            let l = self.solve_in(left, &left_pairs)?;
            let r = self.solve_in(right, &right_pairs)?;
            return Some(assemble(&[], &l, &r));
        }

        let crossing_pairs: Vec<_> = crossing.iter().map(|&i| pairs[i]).collect();
        let candidates = self.boundary_candidates(left, right, &crossing_pairs);
        if candidates.iter().any(Vec::is_empty) {
            return None;
        }
        let sets: Vec<BoundaryEdgeSet> = BoundarySets::new(self.dag, candidates).collect();
        for bset in sets {
            let mut h1: Vec<_> = crossing_pairs.iter().zip(&bset.edges).map(|(&(s, _), e)| (s, e.tail)).collect();
            h1.extend_from_slice(&left_pairs);
            let Some(l) = self.solve_in(left, &h1) else { continue };
            let mut h2: Vec<_> = crossing_pairs.iter().zip(&bset.edges).map(|(&(_, t), e)| (e.head, t)).collect();
            h2.extend_from_slice(&right_pairs);
            let Some(r) = self.solve_in(right, &h2) else { continue };
            if let Some(merged) = merge_check(&self.dm, &l, &r, &bset, &crossing_pairs) {
                let t = crossing_pairs.len();
                return Some(assemble(&merged.paths, &l[t..], &r[t..]));
            }
        }
        None
    }

    /// Crossing edges that lie on some shortest path of each crossing pair.
    fn boundary_candidates(
        &mut self,
        left: Interval,
        right: Interval,
        crossing_pairs: &[(Vertex, Vertex)],
    ) -> Vec<Vec<usize>> {
        let dag = self.dag;
        let edges = self.crossing.entry(left).or_insert_with(|| crossing_edges(dag, left, right));
        crossing_pairs
            .iter()
            .map(|&(s, t)| {
                let total = self.dm.dist(s, t);
                edges
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let e = dag.edge(i);
                        match (self.dm.dist(s, e.tail), self.dm.dist(e.head, t)) {
                            (Some(a), Some(b)) => Some(a + e.weight + b) == total,
                            _ => false,
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Routes `pairs` by pairwise vertex-disjoint shortest paths in `dag`.
pub fn solve_disjoint_shortest(dag: &Dag, pairs: &[(Vertex, Vertex)]) -> Result<Option<Solution>> {
    DisjointShortestSolver::new(dag).solve(pairs)
}

pub fn solve_disjoint_shortest_capped(
    dag: &Dag,
    pairs: &[(Vertex, Vertex)],
    pair_cap: usize,
) -> Result<Option<Solution>> {
    DisjointShortestSolver::new(dag).with_pair_cap(pair_cap).solve(pairs)
}
