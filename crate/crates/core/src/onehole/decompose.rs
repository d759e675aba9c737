use std::collections::BTreeSet;

use rayon::prelude::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{interior_shortest_path, shortest_path, sssp, VertexId};
use crate::instance::Instance;

use super::cutvertex::remove_cut_vertices;
use super::hierarchy::build_cluster_hierarchy;
use super::large::large_spread_step;
use super::params::EmulatorParams;
use super::plan::CombinePlan;
use super::report::{max_log_distortion, pair_distortion};
use super::small::{closest_balanced_pair, small_spread_step, StepPieces};
use super::split::{split, PathSet};

/// Size bookkeeping of one decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractStats {
    pub r: usize,
    pub sizes: Vec<usize>,
    pub max_piece: usize,
    pub total: usize,
    /// Threshold λ = ⌊ln² r⌋ for the heavy-piece sum.
    pub lambda: usize,
    pub heavy_total: usize,
    pub covered: bool,
}

impl ContractStats {
    pub fn new(r: usize, sizes: Vec<usize>, covered: bool) -> Self {
        let lr = (r.max(2) as f64).ln();
        let lambda = (lr * lr).floor().max(1.0) as usize;
        let max_piece = sizes.iter().copied().max().unwrap_or(0);
        let total = sizes.iter().sum();
        let heavy_total = sizes.iter().filter(|&&s| s > lambda).sum();
        ContractStats { r, sizes, max_piece, total, lambda, heavy_total, covered }
    }

    pub fn holds(&self, params: &EmulatorParams) -> bool {
        let r = self.r as f64;
        self.covered
            && self.max_piece as f64 <= params.piece_fraction * r + 1e-9
            && self.total as f64 <= params.contract_c * r
            && self.heavy_total as f64 <= r * (1.0 + params.contract_c / self.lambda as f64) + 1e-9
    }
}

/// Output of [`decompose_step`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub pieces: Vec<Instance>,
    pub plan: CombinePlan,
    /// Measured distortion of gluing the pieces themselves back.
    pub delta: f64,
    pub kind: String,
    pub eps_r: Option<f64>,
    pub stats: ContractStats,
}

/// Distortion of `plan.apply(pieces)` against `inst`.
pub fn measured_distortion(inst: &Instance, pieces: &[Instance], plan: &CombinePlan) -> Result<f64> {
    let glued = plan.apply(pieces)?;
    if glued.k() != inst.k() {
        return Err(Error::TerminalMismatch);
    }
    Ok(max_log_distortion(inst.distances(), glued.distances()))
}

struct BlockSplit {
    step: StepPieces,
    delta: f64,
    kind: String,
    eps_r: Option<f64>,
}

/// Most refinement rounds per candidate path set.
const MAX_REFINE_ROUNDS: usize = 32;

/// Single-source distance rows from every terminal of a block.
fn terminal_rows(inst: &Instance) -> Vec<Vec<f64>> {
    inst.terminals.par_iter().map(|&t| sssp(&inst.graph, t)).collect()
}

/// A cut whose portals were chosen from the single-crossing bound.
struct Candidate {
    step: StepPieces,
    max_piece: usize,
    total: usize,
}

fn path_vertices(g_n: usize, ps: &PathSet) -> (Vec<bool>, Vec<VertexId>) {
    let mut on_set = vec![false; g_n];
    for p in &ps.paths {
        for &v in &p.vertices {
            on_set[v] = true;
        }
    }
    let to_path = (0..g_n).filter(|&v| on_set[v]).collect();
    (on_set, to_path)
}

/// Splits along `ps` once to see which terminals end up apart, then adds
/// the portals that cover those pairs within `target`.
fn predict(inst: &Instance, rows: &[Vec<f64>], ps: PathSet, limit: usize, target: f64) -> Result<Candidate> {
    let g = &inst.graph;
    let (pieces, _) = split(inst, &ps)?;
    let k = inst.k();
    let mut holder: Vec<Vec<usize>> = vec![Vec::new(); k];
    let index: std::collections::HashMap<usize, usize> =
        inst.terminals.iter().enumerate().map(|(i, &t)| (g.label(t), i)).collect();
    for (pi, p) in pieces.iter().enumerate() {
        for &t in &p.terminals {
            if let Some(&i) = index.get(&p.graph.label(t)) {
                holder[i].push(pi);
            }
        }
    }
    let apart: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|&(i, j)| !holder[i].iter().any(|x| holder[j].contains(x)))
        .collect();
    let (_, to_path) = path_vertices(g.n(), &ps);
    let mut portals = ps.portals.clone();
    for v in cover_portals(inst, rows, &to_path, &apart, target) {
        if !portals.contains(&v) {
            portals.push(v);
        }
    }
    let ps = PathSet::new(g, ps.paths, &portals);
    let (pieces, plan) = split(inst, &ps)?;
    let max_piece = pieces.iter().map(|p| p.k()).max().unwrap_or(0);
    if max_piece > limit {
        return Err(Error::NoFeasibleDecomposition);
    }
    let total = pieces.iter().map(|p| p.k()).sum();
    Ok(Candidate { step: StepPieces { pieces, plan, path_set: ps }, max_piece, total })
}

/// Measures a candidate and, while some pair is off by more than `target`,
/// adds portals for the violated pairs and splits again.
fn settle(inst: &Instance, rows: &[Vec<f64>], cand: Candidate, limit: usize, target: f64) -> Result<(StepPieces, f64)> {
    let g = &inst.graph;
    let dh = inst.distances();
    let k = inst.k();
    let StepPieces { mut pieces, mut plan, path_set } = cand.step;
    let (on_set, to_path) = path_vertices(g.n(), &path_set);
    let mut extra = path_set.portals.clone();
    let mut ps = path_set;
    for round in 0..MAX_REFINE_ROUNDS {
        if round > 0 {
            (pieces, plan) = split(inst, &ps)?;
            if pieces.iter().any(|p| p.k() > limit) {
                return Err(Error::NoFeasibleDecomposition);
            }
        }
        let glued = plan.apply(&pieces)?;
        let dg = glued.distances();
        let mut delta: f64 = 0.0;
        let mut violated = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let r = pair_distortion(dh.get(i, j), dg.get(i, j));
                delta = delta.max(r);
                if r > target {
                    violated.push((i, j));
                }
            }
        }
        if delta <= target {
            return Ok((StepPieces { pieces, plan, path_set: ps }, delta));
        }
        let before = extra.len();
        for v in cover_portals(inst, rows, &to_path, &violated, target) {
            if !extra.contains(&v) {
                extra.push(v);
            }
        }
        if extra.len() == before {
            // no single crossing fixes them: take every stretch end on their paths
            let mut have: BTreeSet<VertexId> = extra.iter().copied().collect();
            for &(i, j) in &violated {
                let sp = shortest_path(g, inst.terminals[i], inst.terminals[j])?;
                let vs = &sp.vertices;
                for x in 0..vs.len() {
                    if !on_set[vs[x]] {
                        continue;
                    }
                    let starts = x == 0 || !on_set[vs[x - 1]];
                    let ends = x + 1 == vs.len() || !on_set[vs[x + 1]];
                    if (starts || ends) && have.insert(vs[x]) {
                        extra.push(vs[x]);
                    }
                }
            }
        }
        if extra.len() == before {
            return Err(Error::NoFeasibleDecomposition);
        }
        ps = PathSet::new(g, ps.paths, &extra);
    }
    Err(Error::NoFeasibleDecomposition)
}

/// Adds portals to `ps` until gluing the pieces back distorts no terminal
/// pair by more than `target`, or a piece exceeds `limit` terminals.
///
/// Portals are first chosen by a greedy cover of the pairs the cut
/// separates, using the detour through a single path vertex as the bound;
/// the glued distances are then measured and violated pairs covered again.
pub fn refine_portals(inst: &Instance, ps: PathSet, limit: usize, target: f64) -> Result<(StepPieces, f64)> {
    let rows = terminal_rows(inst);
    let cand = predict(inst, &rows, ps, limit, target)?;
    settle(inst, &rows, cand, limit, target)
}

/// Greedy set cover: path vertices such that every pair in `pairs` has one
/// whose detour `d(t, p) + d(p, x)` stays within `e^target · d(t, x)`.
/// Pairs that no vertex fixes are skipped.
fn cover_portals(
    inst: &Instance,
    rows: &[Vec<f64>],
    to_path: &[VertexId],
    pairs: &[(usize, usize)],
    target: f64,
) -> Vec<VertexId> {
    let dh = inst.distances();
    let slack = target.exp() * (1.0 + 1e-12);
    let fixes: Vec<Vec<usize>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let bound = dh.get(i, j) * slack;
            (0..to_path.len()).filter(|&p| rows[i][to_path[p]] + rows[j][to_path[p]] <= bound).collect()
        })
        .collect();
    let mut open: Vec<bool> = fixes.iter().map(|f| !f.is_empty()).collect();
    let mut chosen = Vec::new();
    loop {
        let mut count = vec![0usize; to_path.len()];
        for (f, _) in fixes.iter().zip(&open).filter(|(_, &o)| o) {
            for &p in f {
                count[p] += 1;
            }
        }
        let Some((best, &c)) = count.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))) else {
            break;
        };
        if c == 0 {
            break;
        }
        chosen.push(to_path[best]);
        for (f, o) in fixes.iter().zip(open.iter_mut()) {
            if *o && f.binary_search(&best).is_ok() {
                *o = false;
            }
        }
    }
    chosen
}

/// Splits one 2-connected block with more than `limit` terminals.
///
/// Cut paths come from the spread regime's rule and, for small spread, from
/// the closest balanced pair plus a few antipodal pairs. Portals start at
/// the path endpoints and are refined until the split is within `target`;
/// the most balanced feasible cut wins. The fixed-resolution rules over the
/// ladder are the fallback.
fn split_block(block: &Instance, params: &EmulatorParams, limit: usize, target: f64) -> Result<BlockSplit> {
    let r = block.k();
    let rows = terminal_rows(block);
    let large = block.spread().ln() > params.ln_spread_threshold(r);
    let hierarchy = if large { build_cluster_hierarchy(block, params).ok() } else { None };
    if let Some(h) = &hierarchy {
        if let Ok((step, case)) = large_spread_step(block, h, params, params.eps_r_ladder[0], limit) {
            let base = PathSet::new(&block.graph, step.path_set.paths, &[]);
            if let Ok((step, delta)) =
                predict(block, &rows, base, limit, target).and_then(|c| settle(block, &rows, c, limit, target))
            {
                return Ok(BlockSplit { step, delta, kind: format!("large:{case:?}"), eps_r: None });
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = closest_balanced_pair(block, params.balance).into_iter().collect();
    let half = r / 2;
    for c in 0..params.path_candidates {
        let i = c * half / params.path_candidates.max(1);
        let pair = (i, i + half);
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    let mut cands: Vec<Candidate> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let p = interior_shortest_path(&block.graph, block.terminals[i], block.terminals[j]).ok()?;
            predict(block, &rows, PathSet::new(&block.graph, vec![p], &[]), limit, target).ok()
        })
        .collect();
    cands.sort_by_key(|c| (c.max_piece, c.total));
    for c in cands {
        if let Ok((step, delta)) = settle(block, &rows, c, limit, target) {
            return Ok(BlockSplit { step, delta, kind: "small".into(), eps_r: None });
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut accept = |step: StepPieces, kind: String, eps_r: f64| -> Result<Option<BlockSplit>> {
        if !seen.insert(step.path_set.portals.clone()) || step.pieces.len() < 2 {
            return Ok(None);
        }
        let delta = measured_distortion(block, &step.pieces, &step.plan)?;
        Ok((delta <= target).then_some(BlockSplit { step, delta, kind, eps_r: Some(eps_r) }))
    };
    if let Some(h) = &hierarchy {
        for &eps_r in &params.eps_r_ladder {
            match large_spread_step(block, h, params, eps_r, limit) {
                Ok((step, case)) => {
                    if step.pieces.iter().any(|p| p.k() > limit) {
                        break;
                    }
                    if let Some(b) = accept(step, format!("large:{case:?}"), eps_r)? {
                        return Ok(b);
                    }
                }
                Err(_) => break,
            }
        }
    }
    for &eps_r in &params.eps_r_ladder {
        let step = match small_spread_step(block, params, eps_r) {
            Ok(s) => s,
            Err(_) => break,
        };
        // finer resolutions only add portals
        if step.pieces.iter().any(|p| p.k() > limit) {
            break;
        }
        if let Some(b) = accept(step, "small".to_string(), eps_r)? {
            return Ok(b);
        }
    }
    Err(Error::NoFeasibleDecomposition)
}

/// One decomposition step: removes cut vertices, then splits every block
/// that is still too large by the small- or large-spread rule.
///
/// `budget` is the distortion still available below this node and `lambda`
/// the stopping threshold; the step aims at an even share of `budget` over
/// the expected remaining depth.
pub fn decompose_step(inst: &Instance, params: &EmulatorParams, budget: f64, lambda: usize) -> Result<Decomposition> {
    let r = inst.k();
    let limit = (params.piece_fraction * r as f64).floor() as usize;
    let target = budget / params.depth_estimate(r, lambda);
    let (blocks, bplan) = remove_cut_vertices(inst)?;
    let mut pieces: Vec<Instance> = Vec::new();
    let mut leaf_plans: Vec<CombinePlan> = Vec::with_capacity(blocks.len());
    let mut delta: f64 = 0.0;
    let mut kinds: Vec<String> = Vec::new();
    let mut eps_r: Option<f64> = None;
    if blocks.len() > 1 {
        kinds.push("cut".into());
    }
    for block in blocks {
        if block.k() <= limit {
            leaf_plans.push(CombinePlan::Leaf(pieces.len()));
            pieces.push(block);
            continue;
        }
        let b = split_block(&block, params, limit, target)?;
        let off = pieces.len();
        leaf_plans.push(b.step.plan.map_leaves(&|j| CombinePlan::Leaf(off + j)));
        pieces.extend(b.step.pieces);
        delta = delta.max(b.delta);
        kinds.push(b.kind);
        if let Some(e) = b.eps_r {
            eps_r = Some(eps_r.map_or(e, |x: f64| x.min(e)));
        }
    }
    let plan = bplan.map_leaves(&|b| leaf_plans[b].clone());
    let stats = ContractStats::new(r, pieces.iter().map(|p| p.k()).collect(), covers(inst, &pieces));
    if !stats.holds(params) {
        return Err(Error::NoFeasibleDecomposition);
    }
    Ok(Decomposition { pieces, plan, delta, kind: kinds.join("+"), eps_r, stats })
}

/// Whether every terminal of `inst` appears, by provenance label, among the
/// terminals of the pieces.
fn covers(inst: &Instance, pieces: &[Instance]) -> bool {
    let have: BTreeSet<usize> =
        pieces.iter().flat_map(|p| p.terminals.iter().map(move |&t| p.graph.label(t))).collect();
    inst.terminals.iter().all(|&t| have.contains(&inst.graph.label(t)))
}
