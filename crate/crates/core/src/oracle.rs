//! Exhaustive reference solver used to cross-check the real algorithms.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Dag, Instance, Mode, Path, Solution, Vertex, Weight};

/// Largest number of path combinations the oracle agrees to search.
pub const ORACLE_BOUND: u128 = 1_000_000;

/// Every shortest `s`-`t` path, in lexicographic vertex order.
pub fn all_shortest_paths(dag: &Dag, s: Vertex, t: Vertex) -> Vec<Path> {
    let from_s = dag.distances_from(s);
    let to_t = dag.distances_to(t);
    let Some(total) = from_s[t] else { return Vec::new() };
    let on_shortest = |tail: Vertex, head: Vertex, w: Weight| {
        matches!((from_s[tail], to_t[head]), (Some(a), Some(b)) if a + w + b == total)
    };
    let mut out = Vec::new();
    let mut stack = vec![s];
    fn walk(
        dag: &Dag,
        t: Vertex,
        total: Weight,
        stack: &mut Vec<Vertex>,
        on_shortest: &dyn Fn(Vertex, Vertex, Weight) -> bool,
        out: &mut Vec<Path>,
    ) {
        let u = *stack.last().unwrap();
        if u == t {
            out.push(Path::from_parts(stack.clone(), total));
            return;
        }
        for e in dag.out_edges(u) {
            if on_shortest(u, e.head, e.weight) {
                stack.push(e.head);
                walk(dag, t, total, stack, on_shortest, out);
                stack.pop();
            }
        }
    }
    walk(dag, t, total, &mut stack, &on_shortest, &mut out);
    out
}

/// Number of shortest `s`-`t` paths (saturating).
pub fn count_shortest_paths(dag: &Dag, s: Vertex, t: Vertex) -> u128 {
    let from_s = dag.distances_from(s);
    let to_t = dag.distances_to(t);
    let Some(total) = from_s[t] else { return 0 };
    let mut count = vec![0u128; dag.vertex_count() + 1];
    count[s] = 1;
    for &u in &dag.topo_order()[dag.position(s)..=dag.position(t)] {
        if count[u] == 0 {
            continue;
        }
        for e in dag.out_edges(u) {
            if matches!((from_s[u], to_t[e.head]), (Some(a), Some(b)) if a + e.weight + b == total) {
                count[e.head] = count[e.head].saturating_add(count[u]);
            }
        }
    }
    count[t]
}

/// Lexicographically first combination of shortest paths that respects the
/// instance's congestion budget in its mode, or `None`.
pub fn brute_force_oracle(inst: &Instance) -> Result<Option<Solution>> {
    let dag = inst.dag();
    let mut combinations: u128 = 1;
    for &(s, t) in inst.demands() {
        let count = count_shortest_paths(dag, s, t);
        if count == 0 {
            return Ok(None);
        }
        combinations = combinations.saturating_mul(count);
    }
    if combinations > ORACLE_BOUND {
        return Err(Error::OracleTooLarge { combinations, bound: ORACLE_BOUND });
    }

    let options: Vec<Vec<Path>> = inst.demands().iter().map(|&(s, t)| all_shortest_paths(dag, s, t)).collect();
    let mut search = Search {
        options: &options,
        cap: inst.congestion(),
        mode: inst.mode(),
        vertex_load: vec![0; dag.vertex_count() + 1],
        edge_load: HashMap::new(),
        picked: Vec::with_capacity(options.len()),
    };
    Ok(search.run().then(|| {
        Solution::new(search.picked.iter().enumerate().map(|(i, &j)| options[i][j].clone()).collect())
    }))
}

struct Search<'a> {
    options: &'a [Vec<Path>],
    cap: u32,
    mode: Mode,
    vertex_load: Vec<u32>,
    edge_load: HashMap<(Vertex, Vertex), u32>,
    picked: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self) -> bool {
        let demand = self.picked.len();
        if demand == self.options.len() {
            return true;
        }
        for j in 0..self.options[demand].len() {
            let path = &self.options[demand][j];
            if self.fits(path) {
                self.apply(path, true);
                self.picked.push(j);
                if self.run() {
                    return true;
                }
                self.picked.pop();
                self.apply(path, false);
            }
        }
        false
    }

    fn fits(&self, path: &Path) -> bool {
        match self.mode {
            Mode::Vertex => path.vertices().iter().all(|&v| self.vertex_load[v] < self.cap),
            Mode::Edge => path.arcs().all(|a| self.edge_load.get(&a).copied().unwrap_or(0) < self.cap),
        }
    }

    fn apply(&mut self, path: &Path, add: bool) {
        match self.mode {
            Mode::Vertex => {
                for &v in path.vertices() {
                    if add {
                        self.vertex_load[v] += 1;
                    } else {
                        self.vertex_load[v] -= 1;
                    }
                }
            }
            Mode::Edge => {
                for a in path.arcs() {
                    let load = self.edge_load.entry(a).or_insert(0);
                    if add {
                        *load += 1;
                    } else {
                        *load -= 1;
                    }
                }
            }
        }
    }
}
