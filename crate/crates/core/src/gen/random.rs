//! Seeded random DAG instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::graph::{Dag, Edge, Instance, Mode, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub vertices: usize,
    pub edge_prob: f64,
    pub max_weight: u64,
    pub demands: usize,
    pub congestion: u32,
    pub mode: Mode,
    /// Probability that a demand is drawn among reachable pairs `s != t`.
    pub reachable_bias: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            vertices: 8,
            edge_prob: 0.4,
            max_weight: 2,
            demands: 3,
            congestion: 1,
            mode: Mode::Vertex,
            reachable_bias: 0.85,
        }
    }
}

/// Random DAG: a hidden vertex permutation fixes the acyclic orientation and
/// each forward pair becomes an edge with probability `edge_prob`.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, edge_prob: f64, max_weight: u64) -> Result<Dag> {
    let mut perm: Vec<Vertex> = (1..=n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(edge_prob) {
                let weight = rng.gen_range(1..=max_weight.max(1));
                edges.push(Edge { tail: perm[i], head: perm[j], weight });
            }
        }
    }
    Dag::new(n, edges)
}

pub fn random_demands<R: Rng>(rng: &mut R, dag: &Dag, k: usize, reachable_bias: f64) -> Vec<(Vertex, Vertex)> {
    let n = dag.vertex_count();
    let reach: Vec<(Vertex, Vertex)> = dag
        .vertices()
        .flat_map(|s| {
            let d = dag.distances_from(s);
            (1..=n).filter(move |&t| t != s && d[t].is_some()).map(move |t| (s, t))
        })
        .collect();
    (0..k)
        .map(|_| {
            if !reach.is_empty() && rng.gen_bool(reachable_bias) {
                reach[rng.gen_range(0..reach.len())]
            } else {
                (rng.gen_range(1..=n), rng.gen_range(1..=n))
            }
        })
        .collect()
}

pub fn random_instance<R: Rng>(rng: &mut R, params: &RandomParams) -> Result<Instance> {
    let dag = random_dag(rng, params.vertices, params.edge_prob, params.max_weight)?;
    let demands = random_demands(rng, &dag, params.demands, params.reachable_bias);
    Instance::new(dag, demands, params.congestion, params.mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_deterministic() {
        let params = RandomParams::default();
        let a = random_instance(&mut ChaCha8Rng::seed_from_u64(11), &params).unwrap();
        let b = random_instance(&mut ChaCha8Rng::seed_from_u64(11), &params).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k(), params.demands);
        assert!(a.dag().edges().iter().all(|e| (1..=2).contains(&e.weight)));
    }
}
