use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{shortest_path, Path, PlaneGraph, VertexId};
use crate::instance::Instance;

use super::params::EmulatorParams;
use super::plan::CombinePlan;
use super::split::{split, PathSet};

/// Relative tolerance when placing a vertex exactly on a mark.
const MARK_TOL: f64 = 1e-9;

/// Closest terminal pair `(i, j)`, `i < j`, splitting the circular order
/// into two arcs of at most `balance · r` terminals each. Ties go to the
/// lexicographically smallest pair.
pub fn closest_balanced_pair(inst: &Instance, balance: f64) -> Result<(usize, usize)> {
    let r = inst.k();
    if r < 4 {
        return Err(Error::NoBalancedPair(r));
    }
    let d = inst.distances();
    let cap = balance * r as f64;
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..r {
        for j in i + 1..r {
            let s = (j - i) as f64;
            if s > cap + 1e-12 || r as f64 - s > cap + 1e-12 {
                continue;
            }
            let x = d.get(i, j);
            if best.map_or(true, |(b, _, _)| x < b) {
                best = Some((x, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j)).ok_or(Error::NoBalancedPair(r))
}

/// Portal vertices of `p`: its endpoints and, for each mark
/// `d_min · e^{i·ε_r}`, `i = 1..=levels`, measured from either end, the
/// nearest path vertices on both sides of the mark.
pub fn exponential_portals(g: &PlaneGraph, p: &Path, d_min: f64, eps_r: f64, levels: usize) -> Vec<VertexId> {
    let pre = p.prefix_weights(g);
    let total = *pre.last().unwrap();
    let len = pre.len();
    let mut out = BTreeSet::new();
    out.insert(p.source());
    out.insert(p.target());
    for end in 0..2 {
        let dist = |idx: usize| if end == 0 { pre[idx] } else { total - pre[idx] };
        // indices ordered by distance from this end
        let order: Vec<usize> = if end == 0 { (0..len).collect() } else { (0..len).rev().collect() };
        for i in 1..=levels {
            let mark = d_min * (i as f64 * eps_r).exp();
            let below = order.iter().rev().find(|&&x| dist(x) <= mark * (1.0 + MARK_TOL));
            let above = order.iter().find(|&&x| dist(x) >= mark * (1.0 - MARK_TOL));
            if let Some(&x) = below {
                out.insert(p.vertices[x]);
            }
            if let Some(&x) = above {
                out.insert(p.vertices[x]);
            }
            if above.is_none() {
                break;
            }
        }
    }
    out.into_iter().collect()
}

/// Number of marks needed to span the spread at resolution `eps_r`.
pub fn portal_levels(spread: f64, eps_r: f64) -> usize {
    ((spread.max(1.0).ln() / eps_r).ceil() as usize).max(1)
}

/// Result of one split step on a one-hole instance.
#[derive(Clone, Debug)]
pub struct StepPieces {
    pub pieces: Vec<Instance>,
    pub plan: CombinePlan,
    pub path_set: PathSet,
}

/// Splits along the shortest path of the closest balanced pair with
/// exponentially spaced portals at resolution `eps_r`.
pub fn small_spread_step(inst: &Instance, params: &EmulatorParams, eps_r: f64) -> Result<StepPieces> {
    let (i, j) = closest_balanced_pair(inst, params.balance)?;
    let g = &inst.graph;
    let p = shortest_path(g, inst.terminals[i], inst.terminals[j])?;
    let (d_min, _) = inst.distances().min_max_positive().unwrap_or((1.0, 1.0));
    let levels = portal_levels(inst.spread(), eps_r);
    let y = exponential_portals(g, &p, d_min, eps_r, levels);
    let ps = PathSet::new(g, vec![p], &y);
    let (pieces, plan) = split(inst, &ps)?;
    Ok(StepPieces { pieces, plan, path_set: ps })
}
