use crate::error::{Error, Result};
use crate::graph::{sssp, Edge, PlaneGraph, VertexId};
use crate::instance::Instance;

use super::cover::eps_cover_union_from;
use super::hierarchy::{hierarchy_from_distances, ClusterHierarchy};
use super::params::EmulatorParams;
use super::paths::noncrossing_shortest_paths;
use super::plan::CombinePlan;
use super::small::{small_spread_step, StepPieces};
use super::split::{split, PathSet};

/// Which branch of the large-spread step produced the pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LargeCase {
    Balanced,
    UnbalancedStep1,
    UnbalancedGoodSets,
    UnbalancedSmall,
}

/// Pairs of circularly consecutive members of `s` (sorted terminal indices)
/// whose arc holds at least one terminal outside `s`.
pub fn border_pairs(s: &[usize], k: usize) -> Vec<(usize, usize)> {
    if s.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..s.len() {
        let a = s[i];
        let b = s[(i + 1) % s.len()];
        if (b + k - a) % k > 1 {
            out.push((a, b));
        }
    }
    out
}

/// Hangs a pendant edge of weight `w` at the corner of each listed terminal
/// and moves terminal status to the new leaf.
pub fn pull_terminals(inst: &Instance, which: &[usize], w: f64) -> Result<Instance> {
    let g = &inst.graph;
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut rot: Vec<Vec<usize>> = g.rotations().to_vec();
    let mut labels = g.labels().to_vec();
    let mut terminals = inst.terminals.clone();
    let mut corners = inst.corners.clone();
    for &i in which {
        let y = inst.terminals[i];
        let leaf = rot.len();
        let e = edges.len();
        edges.push(Edge { u: y, v: leaf, w });
        match inst.corners[i] {
            Some(c) => {
                let p = rot[y].iter().position(|&d| d == c).unwrap();
                rot[y].insert(p + 1, 2 * e);
            }
            None => rot[y].push(2 * e),
        }
        rot.push(vec![2 * e + 1]);
        labels.push(g.label(y));
        terminals[i] = leaf;
        corners[i] = Some(2 * e + 1);
    }
    let hint = inst.corners.iter().flatten().next().copied().or(g.outer_dart());
    let mut pg = PlaneGraph::new(edges, rot, hint, false)?;
    pg.set_labels(labels);
    if let Some(d) = corners.iter().flatten().next() {
        pg.set_outer_dart(*d);
    }
    Instance::new(pg, terminals, corners)
}

/// Splits along the border paths of `s`, with ε_r-covers of every terminal
/// of `s_star` on each path as extra portals.
pub fn balanced_construction(
    inst: &Instance,
    s: &[usize],
    s_star: &[usize],
    eps_r: f64,
    params: &EmulatorParams,
) -> Result<StepPieces> {
    let pairs = border_pairs(s, inst.k());
    if pairs.is_empty() {
        return Err(Error::NoBalancedPair(inst.k()));
    }
    let g = &inst.graph;
    let paths = noncrossing_shortest_paths(inst, &pairs)?;
    let dists: Vec<Vec<f64>> = s_star.iter().map(|&i| sssp(g, inst.terminals[i])).collect();
    let mut extra: Vec<VertexId> = Vec::new();
    for p in &paths {
        let prefix = p.prefix_weights(g);
        let on_p: Vec<Vec<f64>> = dists.iter().map(|d| p.vertices.iter().map(|&x| d[x]).collect()).collect();
        extra.extend(eps_cover_union_from(p, &prefix, &on_p, eps_r));
    }
    let ps = PathSet::new(g, paths, &extra);
    if ps.branch.len() as f64 > params.branch_c * inst.k() as f64 {
        return Err(Error::InvalidPortalSet(format!(
            "{} branch vertices for {} terminals",
            ps.branch.len(),
            inst.k()
        )));
    }
    let (pieces, plan) = split(inst, &ps)?;
    Ok(StepPieces { pieces, plan, path_set: ps })
}

fn moderate_non_expanding(h: &ClusterHierarchy, r: usize, min_level: usize) -> Option<usize> {
    let lo = r as f64 / 5.0;
    let hi = 4.0 * r as f64 / 5.0;
    for lvl in min_level.max(1)..=h.top {
        for &c in &h.levels[lvl] {
            let cl = &h.clusters[c];
            let sz = cl.members.len() as f64;
            if !cl.expanding && sz >= lo && sz <= hi {
                return Some(c);
            }
        }
    }
    None
}

fn complement_in_parent(h: &ClusterHierarchy, c: usize) -> Vec<usize> {
    match h.clusters[c].parent {
        Some(p) => {
            let own = &h.clusters[c].members;
            h.clusters[p].members.iter().copied().filter(|t| own.binary_search(t).is_err()).collect()
        }
        None => Vec::new(),
    }
}

/// Replaces leaf `at` of `plan` by `sub` (over `sub_count` leaves).
fn substitute(plan: CombinePlan, at: usize, sub: CombinePlan, sub_count: usize) -> CombinePlan {
    plan.map_leaves(&|i| {
        if i < at {
            CombinePlan::Leaf(i)
        } else if i > at {
            CombinePlan::Leaf(i + sub_count - 1)
        } else {
            sub.clone().map_leaves(&|j| CombinePlan::Leaf(at + j))
        }
    })
}

/// Large-spread decomposition of a one-hole instance.
///
/// Uses a moderate non-expanding cluster when one exists. Otherwise cuts
/// around the lowest non-expanding heavy cluster, and if one piece is still
/// too large, pulls its portals away and splits it again, first by a
/// moderate cluster of the rebuilt hierarchy and else by the small-spread rule.
pub fn large_spread_step(
    inst: &Instance,
    h: &ClusterHierarchy,
    params: &EmulatorParams,
    eps_r: f64,
    limit: usize,
) -> Result<(StepPieces, LargeCase)> {
    let r = inst.k();
    if let Some(c) = moderate_non_expanding(h, r, 1) {
        let s = &h.clusters[c].members;
        let st = complement_in_parent(h, c);
        return Ok((balanced_construction(inst, s, &st, eps_r, params)?, LargeCase::Balanced));
    }
    let heavy = (1..=h.top)
        .flat_map(|l| h.levels[l].iter().copied())
        .find(|&c| {
            let cl = &h.clusters[c];
            !cl.expanding && cl.members.len() as f64 > 4.0 * r as f64 / 5.0
        })
        .ok_or_else(|| Error::HierarchyInconsistent("no heavy non-expanding cluster".into()))?;
    let level = h.clusters[heavy].level;
    let s = h.clusters[heavy].members.clone();
    let st = complement_in_parent(h, heavy);
    let step1 = match balanced_construction(inst, &s, &st, eps_r, params) {
        Ok(x) => x,
        Err(Error::NoBalancedPair(_)) => {
            return Ok((small_spread_step(inst, params, eps_r)?, LargeCase::UnbalancedSmall));
        }
        Err(e) => return Err(e),
    };
    let big: Vec<usize> = (0..step1.pieces.len()).filter(|&i| step1.pieces[i].k() > limit).collect();
    if big.is_empty() {
        return Ok((step1, LargeCase::UnbalancedStep1));
    }
    if big.len() > 1 {
        return Err(Error::NoFeasibleDecomposition);
    }
    let at = big[0];
    let piece = &step1.pieces[at];
    // portals of the piece are the terminals glued to copies elsewhere
    let portal_terms = portal_terminals(&step1.plan, at, piece.k());
    if portal_terms.is_empty() {
        return Err(Error::NoFeasibleDecomposition);
    }
    let w = h.mu.powi(level as i32 - 1) * h.scale;
    let pulled = pull_terminals(piece, &portal_terms, w)?;
    let ph = hierarchy_from_distances(pulled.distances(), params.mu(pulled.k()), params.eps_prime(pulled.k()))?;
    let window = (params.good_window * (r as f64).ln() / params.eps_prime(r)).ceil() as usize;
    let min_level = level.saturating_sub(window);
    let (sub, case) = match moderate_non_expanding(&ph, pulled.k(), min_level) {
        Some(c) => {
            let s2 = ph.clusters[c].members.clone();
            let st2 = complement_in_parent(&ph, c);
            match balanced_construction(&pulled, &s2, &st2, eps_r, params) {
                Ok(x) if x.pieces.iter().all(|p| p.k() <= limit) => (x, LargeCase::UnbalancedGoodSets),
                _ => (small_spread_step(&pulled, params, eps_r)?, LargeCase::UnbalancedSmall),
            }
        }
        None => (small_spread_step(&pulled, params, eps_r)?, LargeCase::UnbalancedSmall),
    };
    let sub_count = sub.pieces.len();
    let sub_plan = CombinePlan::Pulled {
        pulled: portal_terms.iter().map(|&i| (i, w)).collect(),
        child: Box::new(sub.plan),
    };
    let plan = substitute(step1.plan, at, sub_plan, sub_count);
    let mut pieces: Vec<Instance> = Vec::with_capacity(step1.pieces.len() + sub_count);
    let mut old = step1.pieces;
    let tail = old.split_off(at + 1);
    old.pop();
    pieces.extend(old);
    pieces.extend(sub.pieces);
    pieces.extend(tail);
    let mut ps = step1.path_set;
    ps.paths.extend(sub.path_set.paths);
    Ok((StepPieces { pieces, plan, path_set: ps }, case))
}

/// Terminals of leaf `leaf` that belong to a glue group with other copies.
fn portal_terminals(plan: &CombinePlan, leaf: usize, k: usize) -> Vec<usize> {
    let mut out = vec![false; k];
    if let CombinePlan::Glue { parts, spec } = plan {
        let part = parts.iter().position(|p| *p == CombinePlan::Leaf(leaf));
        if let Some(part) = part {
            for grp in &spec.groups {
                if grp.len() >= 2 {
                    for l in grp {
                        if l.part == part {
                            out[l.terminal] = true;
                        }
                    }
                }
            }
        }
    }
    (0..k).filter(|&i| out[i]).collect()
}
