//! Plane graphs stored as a rotation system over paired darts.
//!
//! Edge `e` owns darts `2e` (from `u` to `v`) and `2e + 1` (from `v` to `u`).
//! Each vertex lists its outgoing darts in counter-clockwise order. Faces are
//! traced with the face on the left of every dart, so the successor of a dart
//! `d` entering `x` is the dart preceding `twin(d)` in the rotation of `x`.

mod assemble;
mod cut;
mod json;
mod paths;
mod slice;
mod suppress;

pub use assemble::{assemble, gap_owner, opened_rotation, Assembled, GlueCopy};
pub use cut::{biconnected_components, cut_vertices, outer_walk_repeats};
pub use json::GraphJson;
pub use paths::{
    all_terminal_distances, interior_shortest_path, shortest_path, sssp, DistMatrix, Path, SpTree, TieBreakKey,
};
pub use slice::{slice_along_path, slice_open, slice_open_slivers, CopyKind, Sliced, WedgeCopy};
pub use suppress::{suppress_degree_two, Suppressed};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type DartId = usize;
pub type FaceId = usize;

/// Label value for vertices with no recorded provenance.
pub const NO_LABEL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
}

#[inline]
pub fn twin(d: DartId) -> DartId {
    d ^ 1
}

#[inline]
pub fn edge_of(d: DartId) -> usize {
    d >> 1
}

/// An edge-weighted plane multigraph with a designated outer face.
#[derive(Clone, Debug)]
pub struct PlaneGraph {
    edges: Vec<Edge>,
    rot: Vec<Vec<DartId>>,
    rot_pos: Vec<usize>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<DartId>>,
    outer: Option<FaceId>,
    labels: Vec<usize>,
}

impl PlaneGraph {
    /// Builds a plane graph from an edge list and per-vertex ccw rotations.
    ///
    /// `outer_dart` picks the outer face; when `None` the face of dart 0 is used.
    pub fn new(
        edges: Vec<Edge>,
        rotations: Vec<Vec<DartId>>,
        outer_dart: Option<DartId>,
        allow_disconnected: bool,
    ) -> Result<Self> {
        let n = rotations.len();
        let m = edges.len();
        for (i, e) in edges.iter().enumerate() {
            if !(e.w >= 0.0) || !e.w.is_finite() {
                return Err(Error::NegativeWeight { edge: i, weight: e.w });
            }
            if e.u >= n || e.v >= n {
                return Err(Error::MalformedRotation(format!("edge {i} has endpoint out of range")));
            }
        }
        let mut rot_pos = vec![usize::MAX; 2 * m];
        for (v, r) in rotations.iter().enumerate() {
            for (i, &d) in r.iter().enumerate() {
                if d >= 2 * m {
                    return Err(Error::MalformedRotation(format!("dart {d} out of range")));
                }
                let origin = if d & 1 == 0 { edges[d >> 1].u } else { edges[d >> 1].v };
                if origin != v {
                    return Err(Error::MalformedRotation(format!(
                        "dart {d} listed at vertex {v} but starts at {origin}"
                    )));
                }
                if rot_pos[d] != usize::MAX {
                    return Err(Error::MalformedRotation(format!("dart {d} listed twice")));
                }
                rot_pos[d] = i;
            }
        }
        if let Some(d) = rot_pos.iter().position(|&p| p == usize::MAX) {
            return Err(Error::MalformedRotation(format!("dart {d} missing from rotations")));
        }
        let mut g = PlaneGraph {
            edges,
            rot: rotations,
            rot_pos,
            face_of: Vec::new(),
            faces: Vec::new(),
            outer: None,
            labels: (0..n).collect(),
        };
        g.trace_faces();
        g.check_euler(allow_disconnected)?;
        if m > 0 {
            let d = outer_dart.unwrap_or(0);
            if d >= 2 * m {
                return Err(Error::MalformedRotation(format!("outer dart {d} out of range")));
            }
            g.outer = Some(g.face_of[d]);
        }
        Ok(g)
    }

    fn trace_faces(&mut self) {
        let nd = 2 * self.edges.len();
        self.face_of = vec![usize::MAX; nd];
        self.faces.clear();
        for start in 0..nd {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                self.face_of[d] = f;
                walk.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(walk);
        }
    }

    fn check_euler(&self, allow_disconnected: bool) -> Result<()> {
        let comps = self.components();
        let ncomp = comps.iter().copied().max().map_or(0, |c| c + 1);
        if ncomp > 1 && !allow_disconnected {
            return Err(Error::DisconnectedInput { components: ncomp });
        }
        let mut v_count = vec![0i64; ncomp];
        let mut e_count = vec![0i64; ncomp];
        let mut f_count = vec![0i64; ncomp];
        for &c in &comps {
            v_count[c] += 1;
        }
        for e in &self.edges {
            e_count[comps[e.u]] += 1;
        }
        for walk in &self.faces {
            f_count[comps[self.origin(walk[0])]] += 1;
        }
        for c in 0..ncomp {
            // an isolated vertex has no dart walks but bounds one face
            let f = if e_count[c] == 0 { 1 } else { f_count[c] };
            let euler = v_count[c] - e_count[c] + f;
            if euler != 2 {
                return Err(Error::NonPlanarEmbedding { euler });
            }
        }
        Ok(())
    }

    /// Component id per vertex, numbered in order of smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &d in &self.rot[x] {
                    let y = self.head(d);
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn num_darts(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn origin(&self, d: DartId) -> VertexId {
        let e = &self.edges[d >> 1];
        if d & 1 == 0 {
            e.u
        } else {
            e.v
        }
    }

    pub fn head(&self, d: DartId) -> VertexId {
        self.origin(d ^ 1)
    }

    pub fn weight(&self, d: DartId) -> f64 {
        self.edges[d >> 1].w
    }

    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<DartId>] {
        &self.rot
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rot[v].len()
    }

    /// Index of `d` inside the rotation of its origin.
    pub fn rot_pos(&self, d: DartId) -> usize {
        self.rot_pos[d]
    }

    /// Next dart counter-clockwise around the origin of `d`.
    pub fn rot_next(&self, d: DartId) -> DartId {
        let r = &self.rot[self.origin(d)];
        r[(self.rot_pos[d] + 1) % r.len()]
    }

    /// Next dart clockwise around the origin of `d`.
    pub fn rot_prev(&self, d: DartId) -> DartId {
        let r = &self.rot[self.origin(d)];
        r[(self.rot_pos[d] + r.len() - 1) % r.len()]
    }

    /// Successor of `d` in the walk of the face on its left.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.rot_prev(d ^ 1)
    }

    pub fn face_of(&self, d: DartId) -> FaceId {
        self.face_of[d]
    }

    pub fn faces(&self) -> &[Vec<DartId>] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        if self.edges.is_empty() {
            self.n().min(1)
        } else {
            self.faces.len()
        }
    }

    pub fn outer_face(&self) -> Option<FaceId> {
        self.outer
    }

    /// First dart of the outer face walk.
    pub fn outer_dart(&self) -> Option<DartId> {
        self.outer.map(|f| self.faces[f][0])
    }

    /// Re-designates the outer face as the face containing `d`.
    pub fn set_outer_dart(&mut self, d: DartId) {
        self.outer = Some(self.face_of[d]);
    }

    /// Vertices of a face walk, one entry per dart (so repeats are kept).
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        self.faces[f].iter().map(|&d| self.origin(d)).collect()
    }

    /// Vertices on the outer face, in walk order, repeats kept.
    pub fn outer_walk(&self) -> Vec<VertexId> {
        self.outer.map(|f| self.face_vertices(f)).unwrap_or_default()
    }

    pub fn on_face(&self, f: FaceId) -> Vec<bool> {
        let mut on = vec![false; self.n()];
        for &d in &self.faces[f] {
            on[self.origin(d)] = true;
        }
        on
    }

    pub fn label(&self, v: VertexId) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<usize>) {
        assert_eq!(labels.len(), self.n());
        self.labels = labels;
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Subgraph on the marked edges, keeping the inherited rotation order.
    ///
    /// Vertices with `keep_vertex` set survive even without edges. Returns the
    /// subgraph together with the new id of each old vertex and each old dart.
    pub fn subgraph(
        &self,
        keep_edge: &[bool],
        keep_vertex: &[bool],
        outer_hint: Option<DartId>,
    ) -> Result<(PlaneGraph, Vec<Option<VertexId>>, Vec<Option<DartId>>)> {
        let mut vmap = vec![None; self.n()];
        let mut next = 0;
        for v in 0..self.n() {
            let used = keep_vertex[v] || self.rot[v].iter().any(|&d| keep_edge[d >> 1]);
            if used {
                vmap[v] = Some(next);
                next += 1;
            }
        }
        let mut emap = vec![None; self.m()];
        let mut edges = Vec::new();
        for (e, ed) in self.edges.iter().enumerate() {
            if keep_edge[e] {
                emap[e] = Some(edges.len());
                edges.push(Edge { u: vmap[ed.u].unwrap(), v: vmap[ed.v].unwrap(), w: ed.w });
            }
        }
        let dmap: Vec<Option<DartId>> =
            (0..self.num_darts()).map(|d| emap[d >> 1].map(|e| 2 * e + (d & 1))).collect();
        let mut rot = vec![Vec::new(); next];
        let mut labels = vec![NO_LABEL; next];
        for v in 0..self.n() {
            if let Some(nv) = vmap[v] {
                rot[nv] = self.rot[v].iter().filter_map(|&d| dmap[d]).collect();
                labels[nv] = self.labels[v];
            }
        }
        let outer = outer_hint.and_then(|d| dmap[d]);
        let mut g = PlaneGraph::new(edges, rot, outer, true)?;
        g.labels = labels;
        Ok((g, vmap, dmap))
    }
}

/// Builds a plane graph from straight-line coordinates.
///
/// Rotations follow increasing angle; the outer face is the walk with negative
/// signed area.
pub fn from_coordinates(coords: &[(f64, f64)], edges: Vec<Edge>) -> Result<PlaneGraph> {
    let n = coords.len();
    let mut rot: Vec<Vec<DartId>> = vec![Vec::new(); n];
    for (e, ed) in edges.iter().enumerate() {
        rot[ed.u].push(2 * e);
        rot[ed.v].push(2 * e + 1);
    }
    for v in 0..n {
        let (x0, y0) = coords[v];
        rot[v].sort_by(|&a, &b| {
            let ha = if a & 1 == 0 { edges[a >> 1].v } else { edges[a >> 1].u };
            let hb = if b & 1 == 0 { edges[b >> 1].v } else { edges[b >> 1].u };
            let ta = (coords[ha].1 - y0).atan2(coords[ha].0 - x0);
            let tb = (coords[hb].1 - y0).atan2(coords[hb].0 - x0);
            ta.total_cmp(&tb).then(a.cmp(&b))
        });
    }
    let mut g = PlaneGraph::new(edges, rot, None, false)?;
    if g.m() > 0 {
        let mut best = (f64::INFINITY, 0);
        for (f, walk) in g.faces().iter().enumerate() {
            let mut area = 0.0;
            for &d in walk {
                let (x1, y1) = coords[g.origin(d)];
                let (x2, y2) = coords[g.head(d)];
                area += x1 * y2 - x2 * y1;
            }
            if area < best.0 {
                best = (area, f);
            }
        }
        let d = g.faces()[best.1][0];
        g.set_outer_dart(d);
    }
    Ok(g)
}

/// Convenience wrapper matching the external build interface.
pub fn build_plane_graph(
    edges: &[(VertexId, VertexId, f64)],
    rotations: Vec<Vec<DartId>>,
    outer_dart: Option<DartId>,
    allow_disconnected: bool,
) -> Result<PlaneGraph> {
    let edges = edges.iter().map(|&(u, v, w)| Edge { u, v, w }).collect();
    PlaneGraph::new(edges, rotations, outer_dart, allow_disconnected)
}

#[cfg(test)]
mod tests;
