//! r-divisions with few holes, built by slicing along fundamental cycles.
//!
//! A piece is a plane graph cut out of the input: every vertex on a cut cycle
//! is split into one copy per wedge, so each copy covers one contiguous range
//! of the input rotation and has a single corner (its gap) on a hole. Gluing
//! all copies back in rotation order restores the input.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{assemble, GlueCopy, DartId, FaceId, PlaneGraph, VertexId};
use crate::instance::Instance;

#[derive(Clone, Debug)]
pub struct DivisionParams {
    /// Constant of the boundary, piece-count and terminal bounds.
    pub c_div: f64,
    /// Largest number of holes a piece may keep.
    pub h_max: usize,
    /// Rounds a piece may be split after it is already small.
    pub extra_rounds: usize,
}

impl Default for DivisionParams {
    fn default() -> Self {
        DivisionParams { c_div: 8.0, h_max: 6, extra_rounds: 4 }
    }
}

/// Quantity balanced in a separator round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Balance {
    Vertices,
    Boundary,
    Holes,
    Terminals,
}

impl Balance {
    fn of_level(level: usize) -> Balance {
        [Balance::Vertices, Balance::Boundary, Balance::Holes, Balance::Terminals][level % 4]
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub graph: PlaneGraph,
    /// Input vertex copied by each piece vertex.
    pub vertex_origin: Vec<VertexId>,
    /// Input edge copied by each piece edge.
    pub edge_origin: Vec<usize>,
    /// Dart after which a boundary copy meets its hole.
    pub gap: Vec<Option<DartId>>,
    /// Input terminal index held by each piece vertex.
    pub term: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceStats {
    pub vertices: usize,
    pub boundary: usize,
    pub holes: usize,
    pub terminals: usize,
}

impl Piece {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn boundary(&self) -> Vec<VertexId> {
        (0..self.n()).filter(|&v| self.gap[v].is_some()).collect()
    }

    /// Distinct faces holding a gap, in vertex order.
    pub fn holes(&self) -> Vec<FaceId> {
        let mut out = Vec::new();
        for d in self.gap.iter().flatten() {
            let f = self.graph.face_of(*d);
            if !out.contains(&f) {
                out.push(f);
            }
        }
        out
    }

    /// (terminal index, piece vertex) pairs.
    pub fn terminals(&self) -> Vec<(usize, VertexId)> {
        (0..self.n()).filter_map(|v| self.term[v].map(|t| (t, v))).collect()
    }

    pub fn stats(&self) -> PieceStats {
        PieceStats {
            vertices: self.n(),
            boundary: self.gap.iter().filter(|g| g.is_some()).count(),
            holes: self.holes().len(),
            terminals: self.term.iter().filter(|t| t.is_some()).count(),
        }
    }

    /// Input dart copied by piece dart `d`.
    pub fn dart_origin(&self, d: DartId) -> DartId {
        2 * self.edge_origin[d >> 1] + (d & 1)
    }

    /// Multi-hole instance of the piece: boundary copies first (cornered at
    /// their gaps), then the held input terminals that are not boundary.
    pub fn instance(&self, input: &Instance) -> Result<Instance> {
        let mut terminals = Vec::new();
        let mut corners = Vec::new();
        for v in 0..self.n() {
            if let Some(d) = self.gap[v] {
                terminals.push(v);
                corners.push(Some(d));
            }
        }
        for v in 0..self.n() {
            let Some(t) = self.term[v] else { continue };
            if self.gap[v].is_some() {
                continue;
            }
            let want = input.corners[t];
            let rot = self.graph.rotation(v);
            let c = want.and_then(|w| rot.iter().copied().find(|&d| self.dart_origin(d) == w)).or(rot.first().copied());
            terminals.push(v);
            corners.push(c);
        }
        let mut g = self.graph.clone();
        if let Some(d) = corners.iter().flatten().next() {
            g.set_outer_dart(*d);
        }
        Instance::new(g, terminals, corners)
    }
}

#[derive(Clone, Debug)]
pub struct RDivision {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceJson {
    /// Input edge ids, with repetitions for edges cut twice.
    pub edges: Vec<usize>,
    /// Input ids of the boundary vertices, sorted and deduplicated.
    pub boundary: Vec<VertexId>,
    /// Input terminal indices held by the piece.
    pub terminals: Vec<usize>,
    pub stats: PieceStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RDivisionJson {
    pub r: usize,
    pub pieces: Vec<PieceJson>,
}

impl RDivision {
    pub fn stats(&self) -> Vec<PieceStats> {
        self.pieces.iter().map(Piece::stats).collect()
    }

    pub fn boundary_bound(&self, params: &DivisionParams) -> f64 {
        params.c_div * (self.r as f64).sqrt()
    }

    pub fn terminal_bound(&self, params: &DivisionParams) -> f64 {
        params.c_div * (1.0 + self.k as f64 * self.r as f64 / self.n.max(1) as f64)
    }

    /// Human-readable violations of the piece bounds.
    pub fn violations(&self, params: &DivisionParams) -> Vec<String> {
        let mut out = Vec::new();
        let bb = self.boundary_bound(params);
        let tb = self.terminal_bound(params);
        for (i, s) in self.stats().iter().enumerate() {
            if s.vertices > self.r {
                out.push(format!("piece {i}: {} vertices > r = {}", s.vertices, self.r));
            }
            if s.boundary as f64 > bb {
                out.push(format!("piece {i}: {} boundary vertices > {bb:.1}", s.boundary));
            }
            if s.holes > params.h_max {
                out.push(format!("piece {i}: {} holes > {}", s.holes, params.h_max));
            }
            if s.terminals as f64 > tb {
                out.push(format!("piece {i}: {} terminals > {tb:.1}", s.terminals));
            }
        }
        out
    }

    /// Glues one instance per piece back together. Part `i` must keep the
    /// terminal order of `pieces[i].instance(input)`; its boundary copies are
    /// merged per input vertex in the input's rotation order.
    ///
    /// Returns an instance whose terminals are the input's terminals.
    pub fn glue(&self, input: &Instance, parts: &[Instance]) -> Result<Instance> {
        if parts.len() != self.pieces.len() {
            return Err(Error::InconsistentCopyLabels(format!(
                "{} parts for {} pieces",
                parts.len(),
                self.pieces.len()
            )));
        }
        let g = &input.graph;
        let mut slot: Vec<Option<usize>> = vec![None; g.n()];
        let mut keyed: Vec<Vec<((usize, usize), GlueCopy)>> = Vec::new();
        // (part, part vertex) holding each input terminal
        let mut held: Vec<Option<(usize, VertexId)>> = vec![None; input.k()];
        for (i, (p, part)) in self.pieces.iter().zip(parts).enumerate() {
            let boundary = p.boundary();
            let interior = p.terminals().into_iter().filter(|&(_, v)| p.gap[v].is_none()).count();
            if part.k() != boundary.len() + interior {
                return Err(Error::InconsistentCopyLabels(format!(
                    "part {i} has {} terminals, piece {}",
                    part.k(),
                    boundary.len() + interior
                )));
            }
            for (j, &v) in boundary.iter().enumerate() {
                let ov = p.vertex_origin[v];
                let gap = p.gap[v].unwrap();
                let first = p.dart_origin(p.graph.rot_next(gap));
                let last = p.dart_origin(gap);
                let deg = g.degree(ov);
                let (a, b) = (g.rot_pos(first), g.rot_pos(last));
                let key = (a, (b + deg - a) % deg);
                let s = *slot[ov].get_or_insert_with(|| {
                    keyed.push(Vec::new());
                    keyed.len() - 1
                });
                let copy = GlueCopy { part: i, vertex: part.terminals[j], corner: part.corners[j], anchor: 0 };
                keyed[s].push((key, copy));
                if let Some(t) = p.term[v] {
                    held[t] = Some((i, part.terminals[j]));
                }
            }
            let mut j = boundary.len();
            for v in 0..p.n() {
                if let (Some(t), None) = (p.term[v], p.gap[v]) {
                    held[t] = Some((i, part.terminals[j]));
                    j += 1;
                }
            }
        }
        let groups: Vec<Vec<GlueCopy>> = keyed
            .into_iter()
            .map(|mut grp| {
                grp.sort_by_key(|x| x.0);
                grp.into_iter().enumerate().map(|(a, (_, c))| GlueCopy { anchor: a, ..c }).collect()
            })
            .collect();
        let graphs: Vec<&PlaneGraph> = parts.iter().map(|p| &p.graph).collect();
        let a = assemble(&graphs, &groups, None)?;
        let mut terminals = Vec::with_capacity(input.k());
        for (t, h) in held.iter().enumerate() {
            let (i, v) = h.ok_or_else(|| Error::InconsistentCopyLabels(format!("terminal {t} is in no piece")))?;
            terminals.push(a.vertex_map[i][v]);
        }
        Instance::general(a.graph, terminals)
    }

    pub fn to_json(&self) -> RDivisionJson {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut boundary: Vec<VertexId> = p.boundary().iter().map(|&v| p.vertex_origin[v]).collect();
                boundary.sort_unstable();
                boundary.dedup();
                let mut terminals: Vec<usize> = p.term.iter().flatten().copied().collect();
                terminals.sort_unstable();
                PieceJson { edges: p.edge_origin.clone(), boundary, terminals, stats: p.stats() }
            })
            .collect();
        RDivisionJson { r: self.r, pieces }
    }
}

/// The graph with every face fanned into triangles by virtual diagonals.
/// Real edges keep their ids; virtual edge `j` is `m + j`.
struct Augmented {
    graph: PlaneGraph,
    m: usize,
    /// Real dart after which each virtual dart was inserted.
    corner: Vec<DartId>,
}

impl Augmented {
    fn new(g: &PlaneGraph) -> Result<Augmented> {
        let m = g.m();
        let mut edges = g.edges().to_vec();
        let mut after: Vec<Vec<DartId>> = vec![Vec::new(); g.num_darts()];
        let mut corner = Vec::new();
        for walk in g.faces() {
            let l = walk.len();
            if l < 4 {
                continue;
            }
            let a0 = g.origin(walk[0]);
            for &x in walk.iter().take(l - 1).skip(2) {
                let aj = g.origin(x);
                if aj == a0 {
                    continue;
                }
                let id = edges.len();
                edges.push(crate::graph::Edge { u: a0, v: aj, w: 0.0 });
                after[walk[0]].push(2 * id);
                after[x].push(2 * id + 1);
                corner.push(walk[0]);
                corner.push(x);
            }
        }
        let rot: Vec<Vec<DartId>> = (0..g.n())
            .map(|v| {
                let mut r = Vec::new();
                for &d in g.rotation(v) {
                    r.push(d);
                    r.extend(after[d].iter().copied());
                }
                r
            })
            .collect();
        let graph = PlaneGraph::new(edges, rot, g.outer_dart(), true)?;
        Ok(Augmented { graph, m, corner })
    }

    fn is_real(&self, d: DartId) -> bool {
        d >> 1 < self.m
    }

    fn corner_of(&self, d: DartId) -> DartId {
        self.corner[d - 2 * self.m]
    }
}

/// Breadth-first tree from a central vertex: parent dart (pointing to the
/// child) and depth of each vertex.
struct BfsTree {
    parent: Vec<Option<DartId>>,
    depth: Vec<usize>,
}

fn bfs(g: &PlaneGraph, root: VertexId) -> BfsTree {
    let mut parent = vec![None; g.n()];
    let mut depth = vec![usize::MAX; g.n()];
    let mut q = VecDeque::new();
    depth[root] = 0;
    q.push_back(root);
    while let Some(u) = q.pop_front() {
        for &d in g.rotation(u) {
            let v = g.head(d);
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                parent[v] = Some(d);
                q.push_back(v);
            }
        }
    }
    BfsTree { parent, depth }
}

/// Middle of an approximate diameter.
fn central_vertex(g: &PlaneGraph) -> VertexId {
    let far = |t: &BfsTree| {
        (0..g.n()).filter(|&v| t.depth[v] != usize::MAX).max_by_key(|&v| (t.depth[v], usize::MAX - v)).unwrap()
    };
    let a = far(&bfs(g, 0));
    let ta = bfs(g, a);
    let mut v = far(&ta);
    let half = ta.depth[v] / 2;
    while ta.depth[v] > half {
        v = g.origin(ta.parent[v].unwrap());
    }
    v
}

impl BfsTree {
    /// Darts of the fundamental cycle of `e`, in travel order.
    fn cycle(&self, g: &PlaneGraph, e: usize) -> Vec<DartId> {
        let (u, v) = (g.origin(2 * e), g.head(2 * e));
        let (mut a, mut b) = (u, v);
        let mut down = Vec::new();
        let mut up = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let d = self.parent[a].unwrap();
                down.push(d);
                a = g.origin(d);
            } else {
                let d = self.parent[b].unwrap();
                up.push(d ^ 1);
                b = g.origin(d);
            }
        }
        down.reverse();
        down.push(2 * e);
        down.extend(up);
        down
    }
}

/// Dual spanning tree on the non-tree edges, rooted at the outer face.
struct CoTree {
    /// Non-tree edge and parent face of each non-root face.
    via: Vec<Option<(usize, FaceId)>>,
    children: Vec<Vec<FaceId>>,
}

impl CoTree {
    fn new(g: &PlaneGraph, tree: &BfsTree) -> CoTree {
        let nf = g.num_faces();
        let mut in_tree = vec![false; g.m()];
        for d in tree.parent.iter().flatten() {
            in_tree[d >> 1] = true;
        }
        let mut adj: Vec<Vec<(usize, FaceId)>> = vec![Vec::new(); nf];
        for e in 0..g.m() {
            if !in_tree[e] {
                let (f1, f2) = (g.face_of(2 * e), g.face_of(2 * e + 1));
                if f1 != f2 {
                    adj[f1].push((e, f2));
                    adj[f2].push((e, f1));
                }
            }
        }
        let mut via = vec![None; nf];
        let mut children = vec![Vec::new(); nf];
        if nf == 0 {
            return CoTree { via, children };
        }
        let root = g.outer_face().unwrap_or(0);
        let mut seen = vec![false; nf];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(f) = stack.pop() {
            for &(e, h) in &adj[f] {
                if !seen[h] {
                    seen[h] = true;
                    via[h] = Some((e, f));
                    children[f].push(h);
                    stack.push(h);
                }
            }
        }
        CoTree { via, children }
    }

    /// Faces in the subtree below `f`.
    fn below(&self, f: FaceId) -> Vec<bool> {
        let mut mark = vec![false; self.via.len()];
        let mut stack = vec![f];
        mark[f] = true;
        while let Some(x) = stack.pop() {
            for &c in &self.children[x] {
                mark[c] = true;
                stack.push(c);
            }
        }
        mark
    }

    /// Face subtree sums, bottom-up.
    fn sums(&self, face_w: &[f64]) -> Vec<f64> {
        let mut order = Vec::with_capacity(self.via.len());
        let mut stack: Vec<FaceId> = (0..self.via.len()).filter(|&f| self.via[f].is_none()).collect();
        while let Some(f) = stack.pop() {
            order.push(f);
            stack.extend(self.children[f].iter().copied());
        }
        let mut sub = face_w.to_vec();
        for &f in order.iter().rev() {
            if let Some((_, p)) = self.via[f] {
                sub[p] += sub[f];
            }
        }
        sub
    }
}

/// Non-tree edges as (heavier side, cycle length, edge, face below), ranked
/// by the face weights on each side of their fundamental cycle.
fn ranked_cycles(g: &PlaneGraph, tree: &BfsTree, dual: &CoTree, face_w: &[f64]) -> Vec<(f64, usize, usize, FaceId)> {
    let sub = dual.sums(face_w);
    let total: f64 = face_w.iter().sum();
    let mut out = Vec::new();
    for (f, v) in dual.via.iter().enumerate() {
        if let Some((e, _)) = *v {
            let len = tree.depth[g.origin(2 * e)] + tree.depth[g.head(2 * e)];
            out.push((sub[f].max(total - sub[f]), len, e, f));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    out
}

/// Vertex weight strictly inside and strictly outside the cycle whose
/// inside is the dual subtree below `f`.
fn side_weights(g: &PlaneGraph, dual: &CoTree, f: FaceId, cycle: &[DartId], weight: &[f64]) -> (f64, f64) {
    let inside = dual.below(f);
    let mut on = vec![false; g.n()];
    for &d in cycle {
        on[g.origin(d)] = true;
    }
    let (mut a, mut b) = (0.0, 0.0);
    for v in 0..g.n() {
        if on[v] {
            continue;
        }
        match g.rotation(v).first() {
            Some(&d) if inside[g.face_of(d)] => a += weight[v],
            _ => b += weight[v],
        }
    }
    (a, b)
}

fn face_weights(g: &PlaneGraph, vertex_w: &[f64]) -> Vec<f64> {
    let mut fw = vec![0.0; g.num_faces()];
    for v in 0..g.n() {
        let rot = g.rotation(v);
        if rot.is_empty() {
            continue;
        }
        let share = vertex_w[v] / rot.len() as f64;
        for &d in rot {
            fw[g.face_of(d)] += share;
        }
    }
    fw
}

/// Weighted centroid of a forest: the vertex whose removal leaves the
/// lightest heaviest component.
fn forest_centroid(g: &PlaneGraph, weight: &[f64]) -> VertexId {
    let mut best = (f64::INFINITY, 0);
    for v in 0..g.n() {
        let heavy = heaviest_component(g, weight, &[v]);
        if heavy < best.0 {
            best = (heavy, v);
        }
    }
    best.1
}

/// Weight of the heaviest component left after deleting `removed`.
pub fn heaviest_component(g: &PlaneGraph, weight: &[f64], removed: &[VertexId]) -> f64 {
    let mut seen = vec![false; g.n()];
    for &v in removed {
        seen[v] = true;
    }
    let mut best: f64 = 0.0;
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut w = 0.0;
        while let Some(u) = stack.pop() {
            w += weight[u];
            for &d in g.rotation(u) {
                let x = g.head(d);
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        best = best.max(w);
    }
    best
}

/// A separating closed curve: its vertices in order and the real edges it
/// runs along. A graph without cycles is separated by a single vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Separator {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
}

/// Candidate cycles of a piece for one vertex weighting (or face weighting
/// when `vertex_w` is `None`), best balanced first.
fn candidates(
    g: &PlaneGraph,
    vertex_w: Option<&[f64]>,
    real_face_w: Option<&[f64]>,
) -> Result<(Augmented, Vec<Vec<DartId>>)> {
    let aug = Augmented::new(g)?;
    let ag = &aug.graph;
    let tree = bfs(ag, central_vertex(ag));
    let dual = CoTree::new(ag, &tree);
    let mut fw = match vertex_w {
        Some(w) => face_weights(ag, w),
        None => vec![0.0; ag.num_faces()],
    };
    if let Some(rw) = real_face_w {
        // a real face's weight sits on the first fan triangle met
        let mut done = vec![false; g.num_faces()];
        for (af, walk) in ag.faces().iter().enumerate() {
            if let Some(&d) = walk.iter().find(|&&d| aug.is_real(d)) {
                let f = g.face_of(d);
                if !done[f] {
                    done[f] = true;
                    fw[af] += rw[f];
                }
            }
        }
    }
    let mut ranked: Vec<(f64, usize, Vec<DartId>)> = ranked_cycles(ag, &tree, &dual, &fw)
        .into_iter()
        .take(CANDIDATES)
        .map(|(heavy, _, e, f)| {
            let c = tree.cycle(ag, e);
            let heavy = match vertex_w {
                Some(w) if real_face_w.is_none() => {
                    let (a, b) = side_weights(ag, &dual, f, &c, w);
                    a.max(b)
                }
                _ => heavy,
            };
            (heavy, c.len(), c)
        })
        .collect();
    ranked.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    Ok((aug, ranked.into_iter().map(|x| x.2).collect()))
}

/// Fundamental-cycle separator of a connected plane graph, taken from a
/// breadth-first tree of the graph with its faces fanned into triangles.
///
/// Among the non-tree edges the cycle whose heavier side is lightest wins,
/// judged first by face weights and then, for the best few, by the exact
/// vertex weight strictly inside and strictly outside. Diagonals on the
/// cycle cross faces; only real edges are reported. A graph without cycles
/// gets its weighted centroid.
pub fn balanced_separator(g: &PlaneGraph, weight: &[f64]) -> Separator {
    let empty = Separator { vertices: Vec::new(), edges: Vec::new() };
    if g.n() == 0 {
        return empty;
    }
    let Ok((aug, cycles)) = candidates(g, Some(weight), None) else { return empty };
    match cycles.first() {
        Some(c) => Separator {
            vertices: c.iter().map(|&d| aug.graph.origin(d)).collect(),
            edges: c.iter().filter(|&&d| aug.is_real(d)).map(|&d| d >> 1).collect(),
        },
        None => Separator { vertices: vec![forest_centroid(g, weight)], edges: Vec::new() },
    }
}

const CANDIDATES: usize = 8;

fn root_pieces(inst: &Instance) -> Result<Vec<Piece>> {
    let g = &inst.graph;
    let mut term = vec![None; g.n()];
    for (i, &t) in inst.terminals.iter().enumerate() {
        term[t] = Some(i);
    }
    let comp = g.components();
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut out = Vec::with_capacity(count);
    for c in 0..count {
        let keep_v: Vec<bool> = comp.iter().map(|&x| x == c).collect();
        let keep_e: Vec<bool> = g.edges().iter().map(|e| comp[e.u] == c).collect();
        let (sub, vmap, _) = g.subgraph(&keep_e, &keep_v, g.outer_dart())?;
        let mut vertex_origin = vec![0; sub.n()];
        let mut t2 = vec![None; sub.n()];
        for v in 0..g.n() {
            if let Some(nv) = vmap[v] {
                vertex_origin[nv] = v;
                t2[nv] = term[v];
            }
        }
        let edge_origin = (0..g.m()).filter(|&e| keep_e[e]).collect();
        out.push(Piece { gap: vec![None; sub.n()], graph: sub, vertex_origin, edge_origin, term: t2 });
    }
    Ok(out)
}

/// Splits the vertices of `p` along a closed curve given as darts of the
/// augmented graph. The curve runs just right of real edges and through
/// faces along diagonals; each vertex it passes is cut at the two corners it
/// uses and at its old gap. Edges are not copied.
fn split_piece(p: &Piece, aug: &Augmented, cycle: &[DartId]) -> Result<Vec<Piece>> {
    let g = &p.graph;
    let ag = &aug.graph;
    let mut cuts: Vec<Vec<DartId>> = vec![Vec::new(); g.n()];
    let l = cycle.len();
    for i in 0..l {
        let d_in = cycle[(i + l - 1) % l];
        let d_out = cycle[i];
        let v = ag.origin(d_out);
        let t = d_in ^ 1;
        cuts[v].push(if aug.is_real(t) { t } else { aug.corner_of(t) });
        cuts[v].push(if aug.is_real(d_out) { g.rot_prev(d_out) } else { aug.corner_of(d_out) });
    }
    let mut edges = g.edges().to_vec();
    let mut rot: Vec<Vec<DartId>> = Vec::new();
    let mut owner = vec![0; g.num_darts()];
    let mut origin = Vec::new();
    let mut gap = Vec::new();
    let mut term = Vec::new();
    for v in 0..g.n() {
        let r = g.rotation(v);
        let mut at = vec![false; r.len()];
        let fresh: Vec<usize> = cuts[v].iter().map(|&d| g.rot_pos(d)).collect();
        for &i in &fresh {
            at[i] = true;
        }
        if let Some(old) = p.gap[v] {
            if !fresh.is_empty() {
                at[g.rot_pos(old)] = true;
            }
        }
        let count = at.iter().filter(|&&x| x).count();
        if count < 2 {
            let id = rot.len();
            for &d in r {
                owner[d] = id;
            }
            rot.push(r.to_vec());
            origin.push(v);
            gap.push(p.gap[v]);
            term.push(p.term[v]);
            continue;
        }
        // runs start right after each cut; the run holding position 0 first
        let starts: Vec<usize> = (0..r.len()).filter(|&i| at[(i + r.len() - 1) % r.len()]).collect();
        let first = starts.iter().rposition(|&s| s == 0).unwrap_or(starts.len() - 1);
        for j in 0..starts.len() {
            let s = starts[(first + j) % starts.len()];
            let id = rot.len();
            let mut run = Vec::new();
            let mut i = s;
            loop {
                run.push(r[i]);
                owner[r[i]] = id;
                if at[i] {
                    break;
                }
                i = (i + 1) % r.len();
            }
            gap.push(run.last().copied());
            rot.push(run);
            origin.push(v);
            term.push(if j == 0 { p.term[v] } else { None });
        }
    }
    for (e, ed) in edges.iter_mut().enumerate() {
        ed.u = owner[2 * e];
        ed.v = owner[2 * e + 1];
    }
    let sg = PlaneGraph::new(edges, rot, None, true)?;
    let comp = sg.components();
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut out = Vec::with_capacity(count);
    for c in 0..count {
        let keep_v: Vec<bool> = comp.iter().map(|&x| x == c).collect();
        let keep_e: Vec<bool> = sg.edges().iter().map(|e| comp[e.u] == c).collect();
        let (sub, vmap, dmap) = sg.subgraph(&keep_e, &keep_v, None)?;
        let mut vertex_origin = vec![0; sub.n()];
        let mut t2 = vec![None; sub.n()];
        let mut gap2 = vec![None; sub.n()];
        for sv in 0..sg.n() {
            if let Some(nv) = vmap[sv] {
                vertex_origin[nv] = p.vertex_origin[origin[sv]];
                t2[nv] = term[sv];
                gap2[nv] = gap[sv].and_then(|d| dmap[d]);
            }
        }
        let edge_origin = (0..sg.m()).filter(|&e| keep_e[e]).map(|e| p.edge_origin[e]).collect();
        let mut sub = sub;
        if let Some(d) = gap2.iter().flatten().next() {
            sub.set_outer_dart(*d);
        }
        out.push(Piece { graph: sub, vertex_origin, edge_origin, gap: gap2, term: t2 });
    }
    Ok(out)
}

struct Ctx<'a> {
    r: usize,
    params: &'a DivisionParams,
    boundary_bound: f64,
    terminal_bound: f64,
}

impl Ctx<'_> {
    fn within(&self, s: &PieceStats) -> bool {
        s.vertices <= self.r
            && s.boundary as f64 <= self.boundary_bound
            && s.holes <= self.params.h_max
            && s.terminals as f64 <= self.terminal_bound
    }

    /// Quantity to balance: the level's own while the piece is large,
    /// afterwards the first violated one starting from the level's.
    fn quantity(&self, level: usize, s: &PieceStats) -> Balance {
        if s.vertices > self.r {
            return Balance::of_level(level);
        }
        (0..4)
            .map(|i| Balance::of_level(level + i))
            .find(|q| match q {
                Balance::Vertices => false,
                Balance::Boundary => s.boundary as f64 > self.boundary_bound,
                Balance::Holes => s.holes > self.params.h_max,
                Balance::Terminals => s.terminals as f64 > self.terminal_bound,
            })
            .unwrap_or(Balance::Vertices)
    }
}

/// Vertex weights of the balanced quantity, or face weights for holes.
fn weights_for(p: &Piece, q: Balance) -> (Option<Vec<f64>>, Option<Vec<f64>>) {
    let n = p.n().max(1) as f64;
    let flag = |x: bool| if x { 1.0 } else { 1e-3 / n };
    match q {
        Balance::Vertices => (Some(vec![1.0 / n; p.n()]), None),
        Balance::Boundary => (Some(p.gap.iter().map(|x| flag(x.is_some())).collect()), None),
        Balance::Terminals => (Some(p.term.iter().map(|x| flag(x.is_some())).collect()), None),
        Balance::Holes => {
            let mut w = vec![0.0; p.graph.num_faces()];
            for f in p.holes() {
                w[f] = 1.0;
            }
            // the vertex share only breaks ties between equally balanced cycles
            (Some(vec![1e-3 / n; p.n()]), Some(w))
        }
    }
}

fn divide(p: Piece, level: usize, extra: usize, ctx: &Ctx) -> Result<Vec<Piece>> {
    let s = p.stats();
    let small = s.vertices <= ctx.r;
    if small && (ctx.within(&s) || extra >= ctx.params.extra_rounds) {
        return Ok(vec![p]);
    }
    let q = ctx.quantity(level, &s);
    let (vw, fw) = weights_for(&p, q);
    let (aug, cycles) = candidates(&p.graph, vw.as_deref(), fw.as_deref())?;
    let mut children = None;
    for c in cycles.iter().take(4) {
        let parts = split_piece(&p, &aug, c)?;
        if parts.len() >= 2 && parts.iter().all(|x| x.graph.m() < p.graph.m()) {
            children = Some(parts);
            break;
        }
    }
    let Some(children) = children else { return Ok(vec![p]) };
    let next = if small { extra + 1 } else { 0 };
    let done: Vec<Result<Vec<Piece>>> = children.into_par_iter().map(|c| divide(c, level + 1, next, ctx)).collect();
    let mut out = Vec::new();
    for d in done {
        out.extend(d?);
    }
    Ok(out)
}

pub fn r_division(inst: &Instance, r: usize) -> Result<RDivision> {
    r_division_with(inst, r, &DivisionParams::default())
}

/// Recursive separator slicing. The balanced quantity cycles through
/// vertices, boundary vertices, holes and terminals by level; a piece that is
/// already at most `r` is split further only while one of its bounds fails,
/// for at most `extra_rounds` rounds.
pub fn r_division_with(inst: &Instance, r: usize, params: &DivisionParams) -> Result<RDivision> {
    if r < 16 {
        return Err(Error::RTooSmall(r));
    }
    let n = inst.n();
    let k = inst.k();
    let ctx = Ctx {
        r,
        params,
        boundary_bound: params.c_div * (r as f64).sqrt(),
        terminal_bound: params.c_div * (1.0 + k as f64 * r as f64 / n.max(1) as f64),
    };
    let mut pieces = Vec::new();
    for p in root_pieces(inst)? {
        pieces.extend(divide(p, 0, 0, &ctx)?);
    }
    Ok(RDivision { r, n, k, pieces })
}
