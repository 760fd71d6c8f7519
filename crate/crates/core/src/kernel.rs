//! Kernelization for slack `d = k - c`.
//!
//! When `k > 3d`, an instance is feasible iff every demand is reachable and
//! some `3d` demands can be routed with congestion `2d`; the remaining
//! `k - 3d` demands then take any shortest paths, adding at most `k - 3d`
//! to any vertex. [`solve_kdspc`] tries the `C(k, 3d)` cores in
//! lexicographic order.
//!
//! The rest of the module makes the rerouting argument behind that
//! equivalence executable: [`swap_subpaths`] exchanges the stretch between
//! two congestion-`c` vertices of two paths, and [`concentrate_congestion`]
//! repeats it until one path visits every congestion-`c` vertex.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{congestion_profile, reachable, verify_solution, Instance, Mode, Path, Solution, Vertex};
use crate::transform::solve_with_congestion;

/// Theorem-style pipeline: direct solve when `k <= 3d`, core search otherwise.
pub fn solve_kdspc(inst: &Instance) -> Result<Option<Solution>> {
    if inst.mode() != Mode::Vertex {
        return Err(Error::Unsupported("kernel solver expects vertex mode".into()));
    }
    if inst.demands().iter().any(|&(s, t)| !reachable(inst.dag(), s, t)) {
        return Ok(None);
    }
    let k = inst.k();
    let d = inst.slack();
    if k <= 3 * d {
        return solve_with_congestion(inst);
    }
    for core in (0..k).combinations(3 * d) {
        let core_solution = if core.is_empty() {
            Solution::new(Vec::new())
        } else {
            let sub = inst.sub_instance(&core, 2 * d as u32)?;
            match solve_with_congestion(&sub)? {
                Some(sol) => sol,
                None => continue,
            }
        };
        let full = extend_with_shortest(inst, &core_solution, &core);
        if verify_solution(inst, &full)?.feasible {
            return Ok(Some(full));
        }
    }
    Ok(None)
}

/// Slots `core_solution` into the `core` demands and routes every other
/// demand along its canonical shortest path. The result is not verified.
pub fn extend_with_shortest(inst: &Instance, core_solution: &Solution, core: &[usize]) -> Solution {
    let mut paths: Vec<Option<Path>> = vec![None; inst.k()];
    for (slot, &i) in core.iter().enumerate() {
        paths[i] = Some(core_solution.paths[slot].clone());
    }
    for (i, &(s, t)) in inst.demands().iter().enumerate() {
        if paths[i].is_none() {
            paths[i] = Some(
                inst.dag()
                    .canonical_shortest_path(s, t)
                    .expect("reachability is checked before extension"),
            );
        }
    }
    Solution::new(paths.into_iter().map(Option::unwrap).collect())
}

/// Vertices carrying exactly `c` paths, in topological order.
pub fn find_hot_vertices(inst: &Instance, sol: &Solution) -> Vec<Vertex> {
    let profile = congestion_profile(inst, sol);
    let mut hot: Vec<Vertex> = profile
        .vertex_loads()
        .filter(|&(_, load)| load == inst.congestion())
        .map(|(v, _)| v)
        .collect();
    hot.sort_by_key(|&v| inst.dag().position(v));
    hot
}

/// The ingredients of one swap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapContext {
    /// Congestion-`c` vertices in topological order.
    pub hot_vertices: Vec<Vertex>,
    /// Path that should gain the pivot.
    pub carrier_index: usize,
    /// Path lending its stretch through the pivot.
    pub donor_index: usize,
    pub pivot: Vertex,
    /// Closest hot vertices on the carrier before and after the pivot.
    pub window: (Vertex, Vertex),
}

impl SwapContext {
    /// Builds the context for moving `pivot` onto path `carrier`: the window
    /// is the nearest pair of hot carrier vertices around the pivot, and the
    /// donor is the lowest-index other path through the window and the pivot.
    pub fn locate(inst: &Instance, sol: &Solution, carrier: usize, pivot: Vertex) -> Result<SwapContext> {
        let hot = find_hot_vertices(inst, sol);
        let pos = |v: Vertex| inst.dag().position(v);
        let path = sol
            .paths
            .get(carrier)
            .ok_or_else(|| Error::ContextInvalid(format!("no path with index {carrier}")))?;
        let on_carrier = |v: &&Vertex| path.contains(**v) && **v != pivot;
        let before = hot.iter().rev().filter(on_carrier).find(|&&v| pos(v) < pos(pivot));
        let after = hot.iter().filter(on_carrier).find(|&&v| pos(v) > pos(pivot));
        let (Some(&a_i), Some(&a_j)) = (before, after) else {
            return Err(Error::ContextInvalid(format!(
                "carrier {carrier} has no hot vertices on both sides of {pivot}"
            )));
        };
        let donor = sol
            .paths
            .iter()
            .enumerate()
            .find(|(x, p)| *x != carrier && p.contains(a_i) && p.contains(pivot) && p.contains(a_j))
            .map(|(x, _)| x)
            .ok_or_else(|| {
                Error::NoDonorFound(format!("no path visits {a_i}, {pivot} and {a_j} together"))
            })?;
        Ok(SwapContext {
            hot_vertices: hot,
            carrier_index: carrier,
            donor_index: donor,
            pivot,
            window: (a_i, a_j),
        })
    }

    fn validate(&self, inst: &Instance, sol: &Solution) -> Result<()> {
        let pos = |v: Vertex| inst.dag().position(v);
        let invalid = |msg: String| Err(Error::ContextInvalid(msg));
        let (a_i, a_j) = self.window;
        let (Some(carrier), Some(donor)) = (sol.paths.get(self.carrier_index), sol.paths.get(self.donor_index)) else {
            return invalid("path index out of range".into());
        };
        if self.carrier_index == self.donor_index {
            return invalid("carrier and donor coincide".into());
        }
        if !self.hot_vertices.windows(2).all(|w| pos(w[0]) < pos(w[1])) {
            return invalid("hot vertices are not in topological order".into());
        }
        for v in [a_i, self.pivot, a_j] {
            if !self.hot_vertices.contains(&v) {
                return invalid(format!("vertex {v} is not hot"));
            }
        }
        if !(pos(a_i) < pos(self.pivot) && pos(self.pivot) < pos(a_j)) {
            return invalid("window does not surround the pivot".into());
        }
        if !(carrier.contains(a_i) && carrier.contains(a_j)) {
            return invalid("carrier misses a window endpoint".into());
        }
        if !(donor.contains(a_i) && donor.contains(self.pivot) && donor.contains(a_j)) {
            return invalid("donor misses the window or the pivot".into());
        }
        let strictly_inside = |v: &&Vertex| pos(**v) > pos(a_i) && pos(**v) < pos(a_j) && **v != self.pivot;
        if self.hot_vertices.iter().filter(strictly_inside).any(|&v| carrier.contains(v)) {
            return invalid("window is not the closest hot pair around the pivot".into());
        }
        Ok(())
    }
}

/// Exchanges the `a_i -> a_j` stretches of the carrier and the donor.
///
/// Both stretches are shortest `a_i`-`a_j` paths, so lengths and the vertex
/// multiset are unchanged; the carrier keeps its hot vertices and gains the
/// pivot. All three facts are checked on the result.
pub fn swap_subpaths(inst: &Instance, sol: &Solution, ctx: &SwapContext) -> Result<Solution> {
    ctx.validate(inst, sol)?;
    let dag = inst.dag();
    let (a_i, a_j) = ctx.window;
    let carrier = &sol.paths[ctx.carrier_index];
    let donor = &sol.paths[ctx.donor_index];
    let (ca, cb) = (carrier.index_of(a_i).unwrap(), carrier.index_of(a_j).unwrap());
    let (da, db) = (donor.index_of(a_i).unwrap(), donor.index_of(a_j).unwrap());

    let splice = |outer: &Path, (oa, ob): (usize, usize), inner: &Path, (ia, ib): (usize, usize)| {
        let mut v = outer.vertices()[..oa].to_vec();
        v.extend_from_slice(&inner.vertices()[ia..=ib]);
        v.extend_from_slice(&outer.vertices()[ob + 1..]);
        Path::new(dag, v)
    };
    let new_carrier = splice(carrier, (ca, cb), donor, (da, db))?;
    let new_donor = splice(donor, (da, db), carrier, (ca, cb))?;
    if new_carrier.length() != carrier.length() || new_donor.length() != donor.length() {
        return Err(Error::ContextInvalid(format!(
            "the {a_i} -> {a_j} stretches differ in length; input paths are not shortest"
        )));
    }

    let mut paths = sol.paths.clone();
    paths[ctx.carrier_index] = new_carrier;
    paths[ctx.donor_index] = new_donor;
    let swapped = Solution::new(paths);

    if congestion_profile(inst, &swapped) != congestion_profile(inst, sol) {
        return Err(Error::ContextInvalid("swap changed the congestion profile".into()));
    }
    let hot_on = |p: &Path| ctx.hot_vertices.iter().filter(|&&v| p.contains(v)).count();
    let gained = hot_on(&swapped.paths[ctx.carrier_index]);
    let kept = ctx.hot_vertices.iter().filter(|&&v| carrier.contains(v)).all(|&v| swapped.paths[ctx.carrier_index].contains(v));
    if !kept || !swapped.paths[ctx.carrier_index].contains(ctx.pivot) || gained < hot_on(carrier) {
        return Err(Error::ContextInvalid("carrier lost hot vertices".into()));
    }
    Ok(swapped)
}

/// Outcome of [`concentrate_congestion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concentration {
    pub solution: Solution,
    /// Index of the path that now visits every hot vertex.
    pub carrier: usize,
    pub swaps: usize,
    pub hot_vertices: Vec<Vertex>,
}

/// Swaps until one path visits every congestion-`c` vertex.
pub fn concentrate_congestion(inst: &Instance, sol: &Solution) -> Result<Concentration> {
    let k = inst.k();
    let d = inst.slack();
    if k <= 3 * d {
        return Err(Error::NoDonorFound(format!("needs k > 3d, got k = {k}, d = {d}")));
    }
    let report = verify_solution(inst, sol)?;
    if !report.feasible {
        return Err(Error::NoDonorFound("input solution is infeasible".into()));
    }
    let hot = find_hot_vertices(inst, sol);
    let (Some(&first), Some(&last)) = (hot.first(), hot.last()) else {
        return Err(Error::ContextInvalid("no vertex carries exactly c paths".into()));
    };
    let carrier = sol
        .paths
        .iter()
        .position(|p| p.contains(first) && p.contains(last))
        .ok_or_else(|| Error::NoDonorFound(format!("no path visits both {first} and {last}")))?;

    let limit = hot.len().saturating_sub(2);
    let covered = |s: &Solution| hot.iter().filter(|&&v| s.paths[carrier].contains(v)).count();
    let mut current = sol.clone();
    let mut swaps = 0;
    while let Some(&pivot) = hot.iter().find(|&&v| !current.paths[carrier].contains(v)) {
        let ctx = SwapContext::locate(inst, &current, carrier, pivot)?;
        let before = covered(&current);
        let next = swap_subpaths(inst, &current, &ctx)?;
        if covered(&next) <= before {
            return Err(Error::ContextInvalid("swap made no progress".into()));
        }
        current = next;
        swaps += 1;
        if swaps > limit {
            return Err(Error::ContextInvalid(format!("exceeded {limit} swaps")));
        }
    }
    Ok(Concentration { solution: current, carrier, swaps, hot_vertices: hot })
}
