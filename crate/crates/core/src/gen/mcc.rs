//! Planar edge-disjoint grid instances from multi-colored clique.
//!
//! Vertex `v_i` of the colored graph owns row `i` and column `i` of an
//! `n x n` grid directed right and down. Every grid edge and every entry
//! edge is subdivided by an in-vertex; the two in-vertices in front of
//! `w_out[i][j]` are merged (so row `i` and column `j` share an edge)
//! unless `i == j` or `v_i`, `v_j` have different colors and are adjacent.
//! Color `l` gets a horizontal and a vertical demand whose endpoints fan out
//! to the rows and columns of that color. A colorful clique then picks one
//! row and one column per color, and the paths avoid each other exactly
//! when the picked vertices are pairwise adjacent.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::clique::{find_colorful_clique, plant_colorful_clique, random_colored_graph, ColoredGraph};
use super::{GenCertificate, Witness};
use crate::error::{Error, Result};
use crate::graph::{verify_solution, Dag, Edge, Instance, Mode, Path, Solution, Vertex};

/// Vertex ids of the grid, indexed 0-based by row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub n: usize,
    pub k: usize,
    pub w_out: Vec<Vec<Vertex>>,
    /// In-vertex in front of `w_out[i][j]` on row `i`.
    pub h_in: Vec<Vec<Vertex>>,
    /// In-vertex in front of `w_out[i][j]` on column `j`; equals `h_in[i][j]` when merged.
    pub v_in: Vec<Vec<Vertex>>,
    pub row_source: Vec<Vertex>,
    pub row_sink: Vec<Vertex>,
    pub col_source: Vec<Vertex>,
    pub col_sink: Vec<Vertex>,
    /// Per color `l` (index `l - 1`): `(s^h, t^h, s^v, t^v)`.
    pub color_endpoints: Vec<(Vertex, Vertex, Vertex, Vertex)>,
}

impl GridLayout {
    pub fn is_merged(&self, i: usize, j: usize) -> bool {
        self.h_in[i][j] == self.v_in[i][j]
    }
}

/// Structural facts about a generated grid, all checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MccReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub merges: usize,
    /// `3n^2 + 4n + 4k - merges`.
    pub expected_vertex_count: usize,
    /// `4n^2 + 6n - merges`.
    pub expected_edge_count: usize,
    /// Shortest distance shared by all `2k` demands: `2n + 3`.
    pub demand_distance: u64,
    /// Straight-line embedding, indexed by vertex id (slot 0 unused).
    pub coordinates: Vec<(i64, i64)>,
}

#[derive(Debug, Clone)]
pub struct PlanarGrid {
    pub instance: Instance,
    pub layout: GridLayout,
    pub report: MccReport,
    pub colored: ColoredGraph,
}

pub fn mcc_to_planar_edsp(cg: &ColoredGraph) -> Result<PlanarGrid> {
    let (n, k) = (cg.vertex_count(), cg.k);
    if let Some(missing) = (1..=k).find(|c| !cg.colors.contains(c)) {
        return Err(Error::ColorMissing(missing));
    }
    if !cg.is_sorted_by_color() {
        return Err(Error::InvariantViolation("vertices must be sorted by color".into()));
    }
    let merge = |i: usize, j: usize| i != j && !(cg.colors[i] != cg.colors[j] && cg.graph.has_edge(i, j));

    let mut next = 0;
    let mut fresh = |count: usize| -> Vec<Vertex> {
        let ids = (next + 1..=next + count).collect();
        next += count;
        ids
    };
    let w_out: Vec<Vec<Vertex>> = (0..n).map(|_| fresh(n)).collect();
    let row_source = fresh(n);
    let row_sink = fresh(n);
    let col_source = fresh(n);
    let col_sink = fresh(n);
    let h_in: Vec<Vec<Vertex>> = (0..n).map(|_| fresh(n)).collect();
    let mut v_in = vec![vec![0; n]; n];
    let mut merges = 0;
    for i in 0..n {
        for j in 0..n {
            if merge(i, j) {
                v_in[i][j] = h_in[i][j];
                merges += 1;
            } else {
                v_in[i][j] = fresh(1)[0];
            }
        }
    }
    let color_endpoints: Vec<_> = (0..k)
        .map(|_| {
            let ids = fresh(4);
            (ids[0], ids[1], ids[2], ids[3])
        })
        .collect();
    let vertex_count = next;

    let mut arcs = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            let left = if j == 0 { row_source[i] } else { w_out[i][j - 1] };
            let up = if i == 0 { col_source[j] } else { w_out[i - 1][j] };
            arcs.insert((left, h_in[i][j]));
            arcs.insert((h_in[i][j], w_out[i][j]));
            arcs.insert((up, v_in[i][j]));
            arcs.insert((v_in[i][j], w_out[i][j]));
        }
        arcs.insert((w_out[i][n - 1], row_sink[i]));
        arcs.insert((w_out[n - 1][i], col_sink[i]));
        let (sh, th, sv, tv) = color_endpoints[cg.colors[i] - 1];
        arcs.extend([(sh, row_source[i]), (row_sink[i], th), (sv, col_source[i]), (col_sink[i], tv)]);
    }
    let edges: Vec<Edge> = arcs.iter().map(|&(tail, head)| Edge { tail, head, weight: 1 }).collect();
    let mut dag = Dag::new(vertex_count, edges)?;
    label_vertices(&mut dag, &w_out, &h_in, &v_in, [&row_source, &row_sink, &col_source, &col_sink], &color_endpoints);

    let demands: Vec<(Vertex, Vertex)> =
        color_endpoints.iter().flat_map(|&(sh, th, sv, tv)| [(sh, th), (sv, tv)]).collect();
    let instance = Instance::new(dag, demands, 1, Mode::Edge)?;
    let layout = GridLayout { n, k, w_out, h_in, v_in, row_source, row_sink, col_source, col_sink, color_endpoints };

    let expected_vertex_count = 3 * n * n + 4 * n + 4 * k - merges;
    let expected_edge_count = 4 * n * n + 6 * n - merges;
    if vertex_count != expected_vertex_count || instance.dag().edge_count() != expected_edge_count {
        return Err(Error::InvariantViolation(format!(
            "grid has {vertex_count} vertices and {} edges, expected {expected_vertex_count} and {expected_edge_count}",
            instance.dag().edge_count()
        )));
    }
    let demand_distance = 2 * n as u64 + 3;
    for &(s, t) in instance.demands() {
        let found = instance.dag().distances_from(s)[t];
        if found != Some(demand_distance) {
            return Err(Error::InvariantViolation(format!(
                "demand ({s}, {t}) has distance {found:?}, expected {demand_distance}"
            )));
        }
    }
    let coordinates = embed(&layout, cg);
    if !is_straight_line_planar(&coordinates, instance.dag().edges()) {
        return Err(Error::InvariantViolation("grid embedding has crossing edges".into()));
    }
    let report = MccReport {
        vertex_count,
        edge_count: instance.dag().edge_count(),
        merges,
        expected_vertex_count,
        expected_edge_count,
        demand_distance,
        coordinates,
    };
    Ok(PlanarGrid { instance, layout, report, colored: cg.clone() })
}

fn label_vertices(
    dag: &mut Dag,
    w_out: &[Vec<Vertex>],
    h_in: &[Vec<Vertex>],
    v_in: &[Vec<Vertex>],
    boundary: [&[Vertex]; 4],
    color_endpoints: &[(Vertex, Vertex, Vertex, Vertex)],
) {
    for (i, row) in w_out.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let (r, c) = (i + 1, j + 1);
            dag.set_label(v, format!("out({r},{c})"));
            if h_in[i][j] == v_in[i][j] {
                dag.set_label(h_in[i][j], format!("in({r},{c})"));
            } else {
                dag.set_label(h_in[i][j], format!("in-h({r},{c})"));
                dag.set_label(v_in[i][j], format!("in-v({r},{c})"));
            }
        }
    }
    for (name, ids) in ["row-src", "row-dst", "col-src", "col-dst"].iter().zip(boundary) {
        for (i, &v) in ids.iter().enumerate() {
            dag.set_label(v, format!("{name}({})", i + 1));
        }
    }
    for (l, &(sh, th, sv, tv)) in color_endpoints.iter().enumerate() {
        for (name, v) in [("s-h", sh), ("t-h", th), ("s-v", sv), ("t-v", tv)] {
            dag.set_label(v, format!("{name}({})", l + 1));
        }
    }
}

/// Grid coordinates: `w_out[i][j]` at `(2j + 2, -2i - 2)`, in-vertices on
/// the edge midpoints, merged in-vertices at the cell centre, and the color
/// endpoints on the four sides facing the first row/column of their color.
fn embed(layout: &GridLayout, cg: &ColoredGraph) -> Vec<(i64, i64)> {
    let n = layout.n as i64;
    let count = layout.color_endpoints.last().map_or(0, |e| e.3);
    let mut at = vec![(0, 0); count + 1];
    for i in 0..layout.n {
        let (y, x) = (-2 * i as i64 - 2, 2 * i as i64 + 2);
        for j in 0..layout.n {
            let (cx, cy) = (2 * j as i64 + 2, y);
            at[layout.w_out[i][j]] = (cx, cy);
            if layout.is_merged(i, j) {
                at[layout.h_in[i][j]] = (cx - 1, cy + 1);
            } else {
                at[layout.h_in[i][j]] = (cx - 1, cy);
                at[layout.v_in[i][j]] = (cx, cy + 1);
            }
        }
        at[layout.row_source[i]] = (0, y);
        at[layout.row_sink[i]] = (2 * n + 2, y);
        at[layout.col_source[i]] = (x, 0);
        at[layout.col_sink[i]] = (x, -2 * n - 2);
    }
    for (l, &(sh, th, sv, tv)) in layout.color_endpoints.iter().enumerate() {
        let first = cg.colors.iter().position(|&c| c == l + 1).expect("colors are checked") as i64;
        at[sh] = (-2, -2 * first - 2);
        at[th] = (2 * n + 4, -2 * first - 2);
        at[sv] = (2 * first + 2, 2);
        at[tv] = (2 * first + 2, -2 * n - 4);
    }
    at
}

/// True when no two edges of the straight-line drawing meet outside a
/// shared endpoint.
pub fn is_straight_line_planar(at: &[(i64, i64)], edges: &[Edge]) -> bool {
    fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
        ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
    }
    fn on_segment(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> bool {
        orient(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
    }
    for (x, e) in edges.iter().enumerate() {
        for f in &edges[x + 1..] {
            let (a, b, c, d) = (at[e.tail], at[e.head], at[f.tail], at[f.head]);
            let common = [e.tail, e.head].into_iter().find(|&v| v == f.tail || v == f.head);
            if let Some(p) = common {
                // meeting at the common endpoint is fine; overlapping is not
                let qe = at[if e.tail == p { e.head } else { e.tail }];
                let qf = at[if f.tail == p { f.head } else { f.tail }];
                if on_segment(at[p], qf, qe) || on_segment(at[p], qe, qf) {
                    return false;
                }
                continue;
            }
            let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
            if o1 * o2 < 0 && o3 * o4 < 0 {
                return false;
            }
            if on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b) {
                return false;
            }
        }
    }
    true
}

impl PlanarGrid {
    /// Row `i` (0-based) from its color's horizontal source to sink.
    pub fn row_path(&self, i: usize) -> Vec<Vertex> {
        let l = &self.layout;
        let (sh, th, _, _) = l.color_endpoints[self.colored.colors[i] - 1];
        let mut v = vec![sh, l.row_source[i]];
        for j in 0..l.n {
            v.extend([l.h_in[i][j], l.w_out[i][j]]);
        }
        v.extend([l.row_sink[i], th]);
        v
    }

    /// Column `j` (0-based) from its color's vertical source to sink.
    pub fn column_path(&self, j: usize) -> Vec<Vertex> {
        let l = &self.layout;
        let (_, _, sv, tv) = l.color_endpoints[self.colored.colors[j] - 1];
        let mut v = vec![sv, l.col_source[j]];
        for i in 0..l.n {
            v.extend([l.v_in[i][j], l.w_out[i][j]]);
        }
        v.extend([l.col_sink[j], tv]);
        v
    }

    /// Routes color `l` along row and column `witness[l - 1]`.
    pub fn expected_routing(&self, witness: &[usize]) -> Result<Solution> {
        if !self.colored.is_colorful_clique(witness) {
            return Err(Error::WitnessInvalid(format!("{witness:?} is not a colorful clique")));
        }
        let dag = self.instance.dag();
        let mut paths = Vec::with_capacity(2 * witness.len());
        for &v in witness {
            paths.push(Path::new(dag, self.row_path(v))?);
            paths.push(Path::new(dag, self.column_path(v))?);
        }
        let sol = Solution::new(paths);
        if !verify_solution(&self.instance, &sol)?.feasible {
            return Err(Error::WitnessInvalid("routing from the witness does not verify".into()));
        }
        Ok(sol)
    }

    pub fn certificate(&self, witness: &[usize]) -> Result<GenCertificate> {
        Ok(GenCertificate {
            witness: Witness::Clique(witness.to_vec()),
            expected_solution: self.expected_routing(witness)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MccParams {
    pub vertices: usize,
    pub colors: usize,
    pub edge_prob: f64,
    /// Force a colorful clique into the random graph.
    pub plant: bool,
}

impl Default for MccParams {
    fn default() -> Self {
        MccParams { vertices: 5, colors: 2, edge_prob: 0.3, plant: false }
    }
}

/// Seeded colored graph and its grid, with a certificate whenever a
/// colorful clique exists.
pub fn generate_mcc(seed: u64, params: &MccParams) -> Result<(PlanarGrid, Option<GenCertificate>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cg = random_colored_graph(&mut rng, params.vertices, params.colors, params.edge_prob)?;
    if params.plant {
        plant_colorful_clique(&mut rng, &mut cg)?;
    }
    let grid = mcc_to_planar_edsp(&cg)?;
    let certificate = find_colorful_clique(&cg).map(|w| grid.certificate(&w)).transpose()?;
    Ok((grid, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::solve_edsp;
    use crate::gen::clique::UndirectedGraph;

    fn two_by_two(adjacent: bool) -> ColoredGraph {
        let edges: &[(usize, usize)] = if adjacent { &[(0, 1)] } else { &[] };
        ColoredGraph::new(UndirectedGraph::from_edges(2, edges).unwrap(), vec![1, 2], 2).unwrap()
    }

    #[test]
    fn counts_and_distances_on_two_by_two() {
        let grid = mcc_to_planar_edsp(&two_by_two(true)).unwrap();
        assert_eq!(grid.report.merges, 0);
        assert_eq!(grid.report.vertex_count, 3 * 4 + 8 + 8);
        assert_eq!(grid.report.demand_distance, 7);
        assert_eq!(grid.instance.k(), 4);
        let grid = mcc_to_planar_edsp(&two_by_two(false)).unwrap();
        assert_eq!(grid.report.merges, 2);
        assert!(grid.layout.is_merged(0, 1) && grid.layout.is_merged(1, 0));
        assert!(!grid.layout.is_merged(0, 0));
    }

    #[test]
    fn crossing_demands_match_oracle() {
        use crate::oracle::brute_force_oracle;
        for adjacent in [true, false] {
            let grid = mcc_to_planar_edsp(&two_by_two(adjacent)).unwrap();
            let ours = solve_edsp(&grid.instance).unwrap();
            let oracle = brute_force_oracle(&grid.instance).unwrap();
            assert_eq!(ours.is_some(), adjacent);
            assert_eq!(oracle.is_some(), adjacent);
        }
    }

    #[test]
    fn planted_clique_routes() {
        let grid = mcc_to_planar_edsp(&two_by_two(true)).unwrap();
        let sol = grid.expected_routing(&[0, 1]).unwrap();
        assert_eq!(sol.lengths(), vec![7; 4]);
        assert!(matches!(grid.expected_routing(&[1, 0]), Err(Error::WitnessInvalid(_))));
        assert!(matches!(grid.expected_routing(&[0]), Err(Error::WitnessInvalid(_))));
    }

    #[test]
    fn rows_and_columns_share_an_edge_iff_merged() {
        let (grid, _) = generate_mcc(5, &MccParams { vertices: 5, colors: 3, edge_prob: 0.5, plant: false }).unwrap();
        let arcs = |p: &[Vertex]| p.windows(2).map(|w| (w[0], w[1])).collect::<BTreeSet<_>>();
        for i in 0..5 {
            for j in 0..5 {
                let shared = arcs(&grid.row_path(i)).intersection(&arcs(&grid.column_path(j))).count() > 0;
                assert_eq!(shared, grid.layout.is_merged(i, j), "row {i} column {j}");
            }
        }
    }

    #[test]
    fn missing_color_and_unsorted_input() {
        let cg = ColoredGraph::new(UndirectedGraph::new(2), vec![1, 1], 2).unwrap();
        assert_eq!(mcc_to_planar_edsp(&cg).unwrap_err(), Error::ColorMissing(2));
        let cg = ColoredGraph::new(UndirectedGraph::new(2), vec![2, 1], 2).unwrap();
        assert!(matches!(mcc_to_planar_edsp(&cg), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn planarity_check_catches_crossings() {
        let at = vec![(0, 0), (0, 0), (2, 2), (0, 2), (2, 0)];
        let x = [Edge { tail: 1, head: 2, weight: 1 }, Edge { tail: 3, head: 4, weight: 1 }];
        assert!(!is_straight_line_planar(&at, &x));
        let fan = [Edge { tail: 1, head: 2, weight: 1 }, Edge { tail: 1, head: 3, weight: 1 }];
        assert!(is_straight_line_planar(&at, &fan));
        let overlap = vec![(0, 0), (0, 0), (1, 0), (2, 0)];
        let collinear = [Edge { tail: 1, head: 2, weight: 1 }, Edge { tail: 1, head: 3, weight: 1 }];
        assert!(!is_straight_line_planar(&overlap, &collinear));
    }

    #[test]
    fn generation_is_deterministic() {
        let params = MccParams { plant: true, ..MccParams::default() };
        let (a, ca) = generate_mcc(7, &params).unwrap();
        let (b, cb) = generate_mcc(7, &params).unwrap();
        assert_eq!(a.instance, b.instance);
        assert_eq!(ca, cb);
        assert!(ca.is_some());
    }
}
