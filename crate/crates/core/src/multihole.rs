//! Emulators for instances whose terminals lie on several faces, by slicing
//! between two holes until one hole is left.

use std::cmp::Ordering;
use std::collections::BinaryHeap;


use crate::error::{Error, Result};
use crate::graph::{assemble, slice_open, DartId, FaceId, GlueCopy, Path, PlaneGraph, VertexId};
use crate::instance::Instance;
use crate::onehole::{eps_cover_union, max_log_distortion, one_hole_emulator_with, EmulatorParams, EmulatorReport, StageRecord};

/// An instance sliced open between two of its holes.
#[derive(Clone, Debug)]
pub struct SplitH {
    pub instance: Instance,
    /// Terminal count of the instance before slicing; its terminals keep
    /// their indices.
    pub original: usize,
    /// Per portal: the terminal indices of all its copies.
    pub groups: Vec<Vec<usize>>,
    /// Portal vertices, in path order.
    pub portals: Vec<VertexId>,
    /// Hole of each original terminal before slicing, as an index into
    /// `holes_before`.
    pub hole_index: Vec<Option<usize>>,
    pub holes_before: usize,
    /// For an original terminal at a portal: position in its group of the
    /// copy whose closing corner is the terminal's hole corner.
    pub hole_copy: Vec<Option<usize>>,
}

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, VertexId);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Shortest `s`-`t` path whose interior avoids the `blocked` vertices.
pub fn path_avoiding(g: &PlaneGraph, s: VertexId, t: VertexId, blocked: &[bool]) -> Option<Path> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<DartId>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Item(0.0, s));
    while let Some(Item(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        if v == t {
            break;
        }
        if v != s && blocked[v] {
            continue;
        }
        for &a in g.rotation(v) {
            let y = g.head(a);
            let nd = d + g.weight(a);
            if nd < dist[y] {
                dist[y] = nd;
                parent[y] = Some(a);
                heap.push(Item(nd, y));
            }
        }
    }
    if !dist[t].is_finite() {
        return None;
    }
    let mut darts = Vec::new();
    let mut x = t;
    while let Some(d) = parent[x] {
        darts.push(d);
        x = g.origin(d);
    }
    darts.reverse();
    Path::from_darts(g, s, darts).ok()
}

/// Terminal pairs to connect, in order of preference: first terminals of the
/// two largest holes, then every other pair of hole leaders and members.
fn candidate_pairs(inst: &Instance) -> Vec<(usize, usize)> {
    let mut orders = inst.hole_orders();
    // stable sort keeps hole order among equal sizes
    orders.sort_by(|a, b| b.len().cmp(&a.len()));
    let mut out = Vec::new();
    for a in 0..orders.len() {
        for b in a + 1..orders.len() {
            for &i in &orders[a] {
                for &j in &orders[b] {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// Slices an instance open along a path between two holes.
///
/// The path runs from the last vertex of hole `α` to the first vertex of
/// hole `α′` along a shortest terminal-avoiding path between `u` and `u′`.
/// Portals are its two ends plus, with `cover_eps`, the union of the
/// terminals' covers on it. Every portal is split into one copy
/// per wedge, and every copy becomes a terminal.
pub fn split_h(inst: &Instance, u: usize, u2: usize, cover_eps: Option<f64>) -> Result<SplitH> {
    let g = &inst.graph;
    let ha = inst.hole_of(u).ok_or(Error::InvalidInstance("terminal without a hole".into()))?;
    let hb = inst.hole_of(u2).ok_or(Error::InvalidInstance("terminal without a hole".into()))?;
    if ha == hb {
        return Err(Error::SameHoleEndpoints);
    }
    let mut blocked = vec![false; g.n()];
    for &t in &inst.terminals {
        blocked[t] = true;
    }
    let (s, t) = (inst.terminals[u], inst.terminals[u2]);
    let p = path_avoiding(g, s, t, &blocked).ok_or(Error::Unreachable { s, t })?;
    let on_a = g.on_face(ha);
    let on_b = g.on_face(hb);
    let j = p.vertices.iter().position(|&v| on_b[v]).expect("path ends on its target hole");
    let i = (0..=j).rev().find(|&x| on_a[p.vertices[x]]).expect("path starts on its source hole");
    if i == j {
        return Err(Error::InvalidInstance(format!("holes {ha} and {hb} share vertex {}", p.vertices[i])));
    }
    let sub = Path::from_darts(g, p.vertices[i], p.darts[i..j].to_vec())?;
    if let Some(&v) = sub.vertices[1..sub.vertices.len() - 1].iter().find(|&&v| blocked[v]) {
        return Err(Error::TerminalOnPathInterior(v));
    }
    let mut portals = vec![sub.source(), sub.target()];
    if let Some(eps) = cover_eps {
        let others: Vec<VertexId> = inst.terminals.to_vec();
        portals.extend(eps_cover_union(g, &sub, &others, eps));
    }
    let pos = |v: VertexId| sub.vertices.iter().position(|&x| x == v).unwrap();
    portals.sort_by_key(|&v| pos(v));
    portals.dedup();
    slice_between(inst, &sub, ha, hb, &portals)
}

fn slice_between(inst: &Instance, sub: &Path, ha: FaceId, hb: FaceId, portals: &[VertexId]) -> Result<SplitH> {
    let g = &inst.graph;
    let holes = inst.holes();
    let hole_index: Vec<Option<usize>> =
        (0..inst.k()).map(|i| inst.hole_of(i).and_then(|f| holes.iter().position(|&h| h == f))).collect();
    let mut cut = vec![false; g.m()];
    for &d in &sub.darts {
        cut[d >> 1] = true;
    }
    let sliced = slice_open(g, &cut, &[ha, hb])?;
    let mut is_portal = vec![false; g.n()];
    for &y in portals {
        is_portal[y] = true;
    }
    let mut terminals = Vec::with_capacity(inst.k() + 2 * portals.len());
    let mut corners = Vec::with_capacity(terminals.capacity());
    for (ti, &t) in inst.terminals.iter().enumerate() {
        if is_portal[t] {
            let c = &sliced.copies[t][0];
            terminals.push(c.vertex);
            corners.push(c.corner);
        } else {
            if sliced.copies[t].len() != 1 {
                return Err(Error::TerminalOnPathInterior(t));
            }
            terminals.push(sliced.copies[t][0].vertex);
            corners.push(inst.corners[ti]);
        }
    }
    let mut hole_copy = vec![None; inst.k()];
    for (ti, &t) in inst.terminals.iter().enumerate() {
        if let (true, Some(x)) = (is_portal[t], inst.corners[ti]) {
            let key = 4 * g.rot_pos(x) + cut[x >> 1] as usize;
            hole_copy[ti] = sliced.copies[t].iter().position(|c| c.last_key == key);
        }
    }
    let mut groups = Vec::with_capacity(portals.len());
    for &y in portals {
        let mut grp = Vec::new();
        for (ci, c) in sliced.copies[y].iter().enumerate() {
            if ci == 0 {
                if let Some(ti) = inst.terminals.iter().position(|&t| t == y) {
                    grp.push(ti);
                    continue;
                }
            }
            grp.push(terminals.len());
            terminals.push(c.vertex);
            corners.push(c.corner);
        }
        groups.push(grp);
    }
    let instance = Instance::new(sliced.graph, terminals, corners)?;
    let before = holes.len();
    if instance.holes().len() + 1 != before {
        return Err(Error::InvalidInstance(format!(
            "slicing between two holes left {} of {before} holes",
            instance.holes().len()
        )));
    }
    Ok(SplitH { instance, original: inst.k(), groups, portals: portals.to_vec(), hole_index, holes_before: before, hole_copy })
}

/// Identifies the portal copies in an emulator of the sliced instance and
/// restores the original terminal list.
pub fn glue_h(emu: &Instance, split: &SplitH) -> Result<Instance> {
    if emu.k() != split.instance.k() {
        return Err(Error::InconsistentCopyLabels(format!(
            "emulator has {} terminals, sliced instance {}",
            emu.k(),
            split.instance.k()
        )));
    }
    let mut groups = Vec::with_capacity(split.groups.len());
    let mut group_of = vec![None; split.original];
    for (gi, grp) in split.groups.iter().enumerate() {
        let mut out = Vec::with_capacity(grp.len());
        for (a, &ti) in grp.iter().enumerate() {
            if ti >= emu.k() {
                return Err(Error::InconsistentCopyLabels(format!("copy {ti} out of range")));
            }
            if ti < split.original {
                group_of[ti] = Some(gi);
            }
            out.push(GlueCopy { part: 0, vertex: emu.terminals[ti], corner: emu.corners[ti], anchor: a });
        }
        groups.push(out);
    }
    let a = assemble(&[&emu.graph], &groups, None)?;
    let g = &a.graph;
    let mut terminals = Vec::with_capacity(split.original);
    let mut corners: Vec<Option<DartId>> = Vec::with_capacity(split.original);
    for ti in 0..split.original {
        terminals.push(a.vertex_map[0][emu.terminals[ti]]);
        corners.push(if group_of[ti].is_some() { None } else { emu.corners[ti].map(|d| a.dart_map[0][d]) });
    }
    // a glued terminal takes the corner on the face of its hole mates
    for ti in 0..split.original {
        if group_of[ti].is_none() {
            continue;
        }
        if let Some(ci) = split.hole_copy[ti] {
            let c = split.groups[group_of[ti].unwrap()][ci];
            if let Some(d) = emu.corners[c] {
                corners[ti] = Some(a.dart_map[0][d]);
                continue;
            }
        }
        let v = terminals[ti];
        let mates: Vec<FaceId> = (0..split.original)
            .filter(|&o| o != ti && group_of[o].is_none() && split.hole_index[o] == split.hole_index[ti])
            .filter_map(|o| corners[o].map(|d| g.face_of(d)))
            .collect();
        let taken: Vec<FaceId> = (0..split.original)
            .filter(|&o| group_of[o].is_none())
            .filter_map(|o| corners[o].map(|d| g.face_of(d)))
            .collect();
        let rot = g.rotation(v);
        let pick = rot
            .iter()
            .copied()
            .find(|&d| mates.contains(&g.face_of(d)))
            .or_else(|| rot.iter().copied().find(|&d| !taken.contains(&g.face_of(d))))
            .or_else(|| rot.first().copied());
        corners[ti] = pick;
    }
    Instance::new(a.graph, terminals, corners)
}

/// The instance with the face of its first terminal's corner as outer face.
fn hole_outside(inst: &Instance) -> Result<Instance> {
    let mut g = inst.graph.clone();
    if let Some(d) = inst.corners.iter().flatten().next() {
        g.set_outer_dart(*d);
    }
    Instance::new(g, inst.terminals.clone(), inst.corners.clone())
}

pub fn multi_hole_emulator(inst: &Instance, eps: f64) -> Result<(Instance, EmulatorReport)> {
    multi_hole_emulator_with(inst, &EmulatorParams::with_eps(eps))
}

/// Emulator of an instance with `h` holes: slices between two holes with
/// ε/h-cover portals, recurses at ε(1 − 1/h), and glues back.
///
/// The report has one stage per slice, whose budget is its cover share and
/// whose measurement is the distortion of gluing the sliced instance itself
/// back, followed by the one-hole stage.
pub fn multi_hole_emulator_with(inst: &Instance, params: &EmulatorParams) -> Result<(Instance, EmulatorReport)> {
    let eps = params.eps;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::BadSpec(format!("eps must be finite and non-negative, got {eps}")));
    }
    let mut stages = Vec::new();
    let out = build(inst, params, eps, &mut stages)?;
    let measured = max_log_distortion(inst.distances(), out.distances());
    if measured > eps * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::DistortionBudgetExceeded { measured, budget: eps });
    }
    let report = EmulatorReport {
        mode: "multihole".into(),
        eps,
        terminals: inst.k(),
        input_vertices: inst.n(),
        input_edges: inst.graph.m(),
        output_vertices: out.n(),
        output_edges: out.graph.m(),
        depth: stages.len(),
        max_distortion: measured,
        stages,
        tree: None,
    };
    Ok((out, report))
}

fn build(inst: &Instance, params: &EmulatorParams, eps: f64, stages: &mut Vec<StageRecord>) -> Result<Instance> {
    let h = inst.holes().len();
    if h <= 1 {
        let one = hole_outside(inst)?;
        let p = EmulatorParams { eps, ..params.clone() };
        let (out, rep) = one_hole_emulator_with(&one, &p)?;
        stages.push(StageRecord {
            name: "onehole".into(),
            budget: eps,
            measured: rep.max_distortion,
            vertices_in: inst.n(),
            vertices_out: out.n(),
            terminals: inst.k(),
        });
        return Ok(out);
    }
    let cover_eps = eps / h as f64;
    let mut last = Error::SameHoleEndpoints;
    for (u, u2) in candidate_pairs(inst) {
        let split = match split_h(inst, u, u2, Some(cover_eps)) {
            Ok(s) => s,
            Err(e) => {
                last = e;
                continue;
            }
        };
        let back = glue_h(&split.instance, &split)?;
        stages.push(StageRecord {
            name: format!("split-h{h}"),
            budget: cover_eps,
            measured: max_log_distortion(inst.distances(), back.distances()),
            vertices_in: inst.n(),
            vertices_out: split.instance.n(),
            terminals: split.instance.k(),
        });
        let inner = build(&split.instance, params, eps - cover_eps, stages)?;
        return glue_h(&inner, &split)?.suppressed();
    }
    Err(last)
}
