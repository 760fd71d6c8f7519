//! Undirected and colored graphs, plus brute-force clique searches used as
//! ground truth for the planar grid family. Vertices are 0-based here.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::InvariantViolation(format!("edge {{{u}, {v}}} leaves 0..{n}")));
        }
        if u == v {
            return Err(Error::InvariantViolation(format!("self-loop at {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            out.extend(a.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(a, &u)| vertices[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// Graph with a total coloring into `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub graph: UndirectedGraph,
    pub colors: Vec<usize>,
    pub k: usize,
}

impl ColoredGraph {
    pub fn new(graph: UndirectedGraph, colors: Vec<usize>, k: usize) -> Result<Self> {
        if colors.len() != graph.vertex_count() {
            return Err(Error::ShapeMismatch { expected: graph.vertex_count(), found: colors.len() });
        }
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::InvariantViolation(format!("color {bad} outside 1..={k}")));
        }
        Ok(Self { graph, colors, k })
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn is_sorted_by_color(&self) -> bool {
        self.colors.windows(2).all(|w| w[0] <= w[1])
    }

    /// Relabels vertices so colors are non-decreasing (stable). Returns the
    /// new graph and `old_of_new`.
    pub fn sorted_by_color(&self) -> (ColoredGraph, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.vertex_count()).collect();
        order.sort_by_key(|&v| self.colors[v]);
        let mut new_of_old = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut graph = UndirectedGraph::new(order.len());
        for (u, v) in self.graph.edges() {
            graph.add_edge(new_of_old[u], new_of_old[v]).expect("relabeling keeps edges valid");
        }
        let colors = order.iter().map(|&v| self.colors[v]).collect();
        (ColoredGraph { graph, colors, k: self.k }, order)
    }

    /// Checks that `witness[l]` has color `l + 1` and all are adjacent.
    pub fn is_colorful_clique(&self, witness: &[usize]) -> bool {
        witness.len() == self.k
            && witness.iter().enumerate().all(|(l, &v)| self.colors.get(v) == Some(&(l + 1)))
            && self.graph.is_clique(witness)
    }
}

/// Vertex `(v, i)` of the lifted graph gets id `(i - 1) * n + v` and color
/// `i`, so the output is already sorted by color.
pub fn clique_to_mcc(g: &UndirectedGraph, k: usize) -> ColoredGraph {
    let n = g.vertex_count();
    let mut lifted = UndirectedGraph::new(n * k);
    for (u, v) in g.edges() {
        for i in 0..k {
            for j in 0..k {
                lifted.add_edge(i * n + u, j * n + v).expect("distinct originals give distinct copies");
            }
        }
    }
    let colors = (0..n * k).map(|id| id / n + 1).collect();
    ColoredGraph { graph: lifted, colors, k }
}

/// Lexicographically first `k`-clique, by backtracking.
pub fn find_clique(g: &UndirectedGraph, k: usize) -> Option<Vec<usize>> {
    fn grow(g: &UndirectedGraph, k: usize, from: usize, acc: &mut Vec<usize>) -> bool {
        if acc.len() == k {
            return true;
        }
        for v in from..g.vertex_count() {
            if acc.iter().all(|&u| g.has_edge(u, v)) {
                acc.push(v);
                if grow(g, k, v + 1, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::with_capacity(k);
    grow(g, k, 0, &mut acc).then_some(acc)
}

/// First colorful clique, one vertex per color in color order.
pub fn find_colorful_clique(cg: &ColoredGraph) -> Option<Vec<usize>> {
    let mut classes = vec![Vec::new(); cg.k + 1];
    for (v, &c) in cg.colors.iter().enumerate() {
        classes[c].push(v);
    }
    fn grow(cg: &ColoredGraph, classes: &[Vec<usize>], acc: &mut Vec<usize>) -> bool {
        let color = acc.len() + 1;
        if color > cg.k {
            return true;
        }
        for &v in &classes[color] {
            if acc.iter().all(|&u| cg.graph.has_edge(u, v)) {
                acc.push(v);
                if grow(cg, classes, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::with_capacity(cg.k);
    grow(cg, &classes, &mut acc).then_some(acc)
}

/// Random colored graph on `n >= k` vertices, sorted by color, with every
/// color used and each pair joined with probability `p`.
pub fn random_colored_graph<R: Rng>(rng: &mut R, n: usize, k: usize, p: f64) -> Result<ColoredGraph> {
    if n < k || k == 0 {
        return Err(Error::InvariantViolation(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let mut colors: Vec<usize> = (1..=k).chain((k..n).map(|_| rng.gen_range(1..=k))).collect();
    colors.sort_unstable();
    let mut graph = UndirectedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                graph.add_edge(u, v)?;
            }
        }
    }
    ColoredGraph::new(graph, colors, k)
}

/// Joins one random vertex of each color into a clique and returns it.
pub fn plant_colorful_clique<R: Rng>(rng: &mut R, cg: &mut ColoredGraph) -> Result<Vec<usize>> {
    let mut witness = Vec::with_capacity(cg.k);
    for color in 1..=cg.k {
        let class: Vec<usize> = (0..cg.vertex_count()).filter(|&v| cg.colors[v] == color).collect();
        witness.push(*class.choose(rng).ok_or(Error::ColorMissing(color))?);
    }
    for (a, &u) in witness.iter().enumerate() {
        for &v in &witness[a + 1..] {
            cg.graph.add_edge(u, v)?;
        }
    }
    Ok(witness)
}
