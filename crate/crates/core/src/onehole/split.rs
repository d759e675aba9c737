use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{slice_open_slivers, CopyKind, DartId, Path, PlaneGraph, VertexId};
use crate::instance::Instance;

use super::plan::{CombinePlan, CopyLink, GlueSpec};

/// Shortest paths between terminal pairs together with the portals on them.
#[derive(Clone, Debug, Default)]
pub struct PathSet {
    pub paths: Vec<Path>,
    /// Portal set Y; always contains the endpoints and branch vertices.
    pub portals: Vec<VertexId>,
    /// Branch vertices Y* (degree ≥ 3 in the union of the paths).
    pub branch: Vec<VertexId>,
}

impl PathSet {
    /// Builds a path set whose portals are `extra` plus endpoints and branch vertices.
    pub fn new(g: &PlaneGraph, paths: Vec<Path>, extra: &[VertexId]) -> PathSet {
        let branch = branch_vertices(g, &paths);
        let mut y: BTreeSet<VertexId> = extra.iter().copied().collect();
        for p in &paths {
            y.insert(p.source());
            y.insert(p.target());
        }
        y.extend(branch.iter().copied());
        PathSet { paths, portals: y.into_iter().collect(), branch }
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.paths.iter().flat_map(|p| p.vertices.iter().copied()).collect()
    }
}

/// Vertices of degree at least 3 in the union of the paths.
pub fn branch_vertices(g: &PlaneGraph, paths: &[Path]) -> Vec<VertexId> {
    let mut used = vec![false; g.m()];
    for p in paths {
        for &d in &p.darts {
            used[d >> 1] = true;
        }
    }
    let mut deg = vec![0usize; g.n()];
    for (e, ed) in g.edges().iter().enumerate() {
        if used[e] {
            deg[ed.u] += 1;
            deg[ed.v] += 1;
        }
    }
    (0..g.n()).filter(|&v| deg[v] >= 3).collect()
}

/// Slices the instance open along every path and returns one one-hole piece
/// per region, plus the plan that glues emulators of the pieces back.
///
/// Each piece's terminals are the original terminals inside it plus one copy
/// of every portal on its boundary, in outer-walk order. Terminals lying on a
/// path are treated as portals.
pub fn split(inst: &Instance, ps: &PathSet) -> Result<(Vec<Instance>, CombinePlan)> {
    if ps.paths.is_empty() {
        return Ok((vec![inst.clone()], CombinePlan::identity()));
    }
    let h = &inst.graph;
    let outer = h.outer_face().ok_or(Error::PathNotOnOuterStructure)?;
    let on_outer = h.on_face(outer);
    let mut cut = vec![false; h.m()];
    let mut on_path = vec![false; h.n()];
    let mut is_y = vec![false; h.n()];
    let along_outer = |d: DartId| h.face_of(d) == outer || h.face_of(d ^ 1) == outer;
    for p in &ps.paths {
        if !on_outer[p.source()] || !on_outer[p.target()] {
            return Err(Error::PathNotOnOuterStructure);
        }
        for &d in &p.darts {
            if h.origin(d) == h.head(d) {
                return Err(Error::MalformedPath("path uses a loop".into()));
            }
            cut[d >> 1] = true;
        }
        for &v in &p.vertices {
            on_path[v] = true;
        }
        is_y[p.source()] = true;
        is_y[p.target()] = true;
        // where the path leaves or joins the outer face its strip must stay attached
        for i in 1..p.darts.len() {
            if along_outer(p.darts[i - 1]) != along_outer(p.darts[i]) {
                is_y[p.vertices[i]] = true;
            }
        }
    }
    for &y in &ps.portals {
        if y >= h.n() || !on_path[y] {
            return Err(Error::InvalidPortalSet(format!("portal {y} is not on a path")));
        }
        is_y[y] = true;
    }
    for v in branch_vertices(h, &ps.paths) {
        is_y[v] = true;
    }

    let sliced = slice_open_slivers(h, &cut, &[outer])?;
    let sg = &sliced.graph;
    let comp = sg.components();
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);

    // (component, vertex in sliced graph, corner in sliced graph, origin)
    enum Origin {
        Terminal(usize),
        Portal(VertexId, usize),
    }
    let mut entries: Vec<(usize, VertexId, Option<DartId>, Origin)> = Vec::new();
    // the copy of a terminal that holds its outer corner
    let corner_copy = |j: usize| -> Option<DartId> {
        inst.corners[j].map(|c| sliced.new_dart(c, if cut[c >> 1] { CopyKind::B } else { CopyKind::Whole }))
    };
    for (j, &t) in inst.terminals.iter().enumerate() {
        if !is_y[t] {
            let c = corner_copy(j);
            let v = c.map_or(t, |d| sg.origin(d));
            entries.push((comp[v], v, c, Origin::Terminal(j)));
        }
    }
    for y in 0..h.n() {
        if !is_y[y] {
            continue;
        }
        for w in &sliced.copies[y] {
            entries.push((comp[w.vertex], w.vertex, w.corner, Origin::Portal(y, w.first_key)));
        }
    }

    let mut pieces: Vec<Instance> = Vec::new();
    let mut piece_of_comp = vec![usize::MAX; ncomp];
    // position of each entry: (piece, terminal index)
    let mut placed: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); entries.len()];
    for c in 0..ncomp {
        let mine: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].0 == c).collect();
        if mine.is_empty() {
            continue;
        }
        let keep_edge: Vec<bool> = sg.edges().iter().map(|e| comp[e.u] == c).collect();
        let keep_vertex: Vec<bool> = comp.iter().map(|&x| x == c).collect();
        let hint = mine.iter().find_map(|&i| entries[i].2);
        let (mut pg, vmap, dmap) = sg.subgraph(&keep_edge, &keep_vertex, hint)?;
        let corners: Vec<Option<DartId>> = mine.iter().map(|&i| entries[i].2.map(|d| dmap[d].unwrap())).collect();
        let face = corners.iter().flatten().map(|&d| pg.face_of(d)).next();
        if let Some(f) = face {
            if corners.iter().flatten().any(|&d| pg.face_of(d) != f) {
                return Err(Error::InvalidPortalSet("piece terminals lie on several faces".into()));
            }
            pg.set_outer_dart(pg.faces()[f][0]);
        }
        let mut pos = vec![0usize; pg.num_darts()];
        if let Some(f) = face {
            for (i, &d) in pg.faces()[f].iter().enumerate() {
                pos[d] = i;
            }
        }
        let mut order: Vec<usize> = (0..mine.len()).collect();
        order.sort_by_key(|&a| (corners[a].map_or(0, |d| pos[d]), a));
        let terminals: Vec<VertexId> = order.iter().map(|&a| vmap[entries[mine[a]].1].unwrap()).collect();
        let tc: Vec<Option<DartId>> = order.iter().map(|&a| corners[a]).collect();
        let pi = pieces.len();
        for (ti, &a) in order.iter().enumerate() {
            placed[mine[a]] = (pi, ti);
        }
        piece_of_comp[c] = pi;
        pieces.push(Instance::new(pg, terminals, tc)?);
    }

    let mut groups: Vec<Vec<CopyLink>> = Vec::new();
    let mut group_of_y = vec![usize::MAX; h.n()];
    let mut term_group = vec![(usize::MAX, 0); inst.k()];
    for (i, e) in entries.iter().enumerate() {
        let (pi, ti) = placed[i];
        match e.3 {
            Origin::Terminal(j) => {
                term_group[j] = (groups.len(), 0);
                groups.push(vec![CopyLink { part: pi, terminal: ti, anchor: 0 }]);
            }
            Origin::Portal(y, key) => {
                if group_of_y[y] == usize::MAX {
                    group_of_y[y] = groups.len();
                    groups.push(Vec::new());
                }
                groups[group_of_y[y]].push(CopyLink { part: pi, terminal: ti, anchor: key });
            }
        }
    }
    let mut inner = Vec::new();
    for (j, &t) in inst.terminals.iter().enumerate() {
        if is_y[t] {
            let key = inst.corners[j].map_or(0, |d| 4 * h.rot_pos(d) + 2);
            term_group[j] = (group_of_y[t], key);
            if let Some(nd) = corner_copy(j) {
                let w = sliced.copies[t].iter().find(|w| w.vertex == sg.origin(nd));
                match w.and_then(|w| w.corner) {
                    Some(c) if c == nd => {}
                    Some(c) if sg.rot_next(c) == nd => inner.push(j),
                    _ => return Err(Error::InvalidPortalSet(format!("terminal {j} has no usable corner"))),
                }
            }
        }
    }
    let parts = (0..pieces.len()).map(CombinePlan::Leaf).collect();
    Ok((pieces, CombinePlan::Glue { parts, spec: GlueSpec { groups, terminals: term_group, inner } }))
}
