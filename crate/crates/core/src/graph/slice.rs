use super::{DartId, Edge, FaceId, Path, PlaneGraph, VertexId};
use crate::error::{Error, Result};

/// Which copy of an old dart a new dart descends from.
///
/// A sliced edge gets two copies. `B` sits counter-clockwise of the cut at the
/// dart's origin, `A` clockwise of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CopyKind {
    Whole,
    A,
    B,
}

/// One wedge of an old vertex after slicing.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeCopy {
    pub vertex: VertexId,
    /// Position key of the first item in the old rotation: `4·pos` for a whole
    /// or `A` item, `4·pos + 1` for a `B` item.
    pub first_key: usize,
    pub last_key: usize,
    /// New dart after which the wedge's closing corner lies.
    pub corner: Option<DartId>,
}

#[derive(Clone, Debug)]
pub struct Sliced {
    pub graph: PlaneGraph,
    pub vertex_origin: Vec<VertexId>,
    pub dart_origin: Vec<(DartId, CopyKind)>,
    /// Copies of each old vertex; the first entry keeps the old id.
    pub copies: Vec<Vec<WedgeCopy>>,
    /// New id of the second copy of each sliced edge.
    pub twin_edge: Vec<Option<usize>>,
}

impl Sliced {
    /// New dart that still bounds the face the old dart `d` had on its left.
    pub fn face_keeping_dart(&self, d: DartId) -> DartId {
        match self.twin_edge[d >> 1] {
            Some(e2) if d & 1 == 1 => 2 * e2 + 1,
            _ => d,
        }
    }

    /// Copy of old vertex `v` owning the new dart produced from item `(d, kind)`.
    pub fn new_dart(&self, d: DartId, kind: CopyKind) -> DartId {
        let e = d >> 1;
        match (kind, self.twin_edge[e]) {
            (CopyKind::Whole, _) | (_, None) => d,
            (CopyKind::B, Some(_)) if d & 1 == 0 => d,
            (CopyKind::A, Some(_)) if d & 1 == 1 => d,
            (_, Some(e2)) => 2 * e2 + (d & 1),
        }
    }
}

/// Slices `g` open along the marked edges.
///
/// Every marked edge is doubled. At a vertex with marked darts the rotation is
/// cut between the two copies of each marked dart and at every corner lying
/// in a face of `cut_faces`; each maximal run between cuts becomes a vertex.
/// Vertices without marked darts are left whole.
pub fn slice_open(g: &PlaneGraph, cut_edge: &[bool], cut_faces: &[FaceId]) -> Result<Sliced> {
    slice_impl(g, cut_edge, cut_faces, false)
}

/// Like [`slice_open`], but path copies lying against a cut face are kept as
/// thin separate strips: the face cut between two such copies is dropped,
/// and nothing is merged back into the neighbouring wedge.
pub fn slice_open_slivers(g: &PlaneGraph, cut_edge: &[bool], cut_faces: &[FaceId]) -> Result<Sliced> {
    slice_impl(g, cut_edge, cut_faces, true)
}

fn slice_impl(g: &PlaneGraph, cut_edge: &[bool], cut_faces: &[FaceId], slivers: bool) -> Result<Sliced> {
    let m = g.m();
    let mut twin_edge = vec![None; m];
    let mut next_edge = m;
    for e in 0..m {
        if cut_edge[e] {
            twin_edge[e] = Some(next_edge);
            next_edge += 1;
        }
    }
    let total_edges = next_edge;
    let is_cut_face = |f: FaceId| cut_faces.contains(&f);
    let new_dart = |d: DartId, kind: CopyKind| -> DartId {
        let e = d >> 1;
        match (kind, twin_edge[e]) {
            (CopyKind::Whole, _) | (_, None) => d,
            (CopyKind::B, Some(_)) if d & 1 == 0 => d,
            (CopyKind::A, Some(_)) if d & 1 == 1 => d,
            (_, Some(e2)) => 2 * e2 + (d & 1),
        }
    };

    let mut owner = vec![usize::MAX; 2 * total_edges];
    let mut dart_origin = vec![(0, CopyKind::Whole); 2 * total_edges];
    let mut rot: Vec<Vec<DartId>> = vec![Vec::new(); g.n()];
    let mut vertex_origin: Vec<VertexId> = (0..g.n()).collect();
    let mut copies: Vec<Vec<WedgeCopy>> = vec![Vec::new(); g.n()];

    for v in 0..g.n() {
        let r = g.rotation(v);
        let mut items: Vec<(DartId, CopyKind, usize)> = Vec::with_capacity(r.len() + 2);
        let mut cut_after: Vec<bool> = Vec::with_capacity(r.len() + 2);
        let mut sliced = false;
        for (pos, &d) in r.iter().enumerate() {
            let corner_cut = is_cut_face(g.face_of(d));
            if cut_edge[d >> 1] {
                sliced = true;
                items.push((d, CopyKind::A, 4 * pos));
                cut_after.push(true);
                items.push((d, CopyKind::B, 4 * pos + 1));
                cut_after.push(corner_cut);
            } else {
                items.push((d, CopyKind::Whole, 4 * pos));
                cut_after.push(corner_cut);
            }
        }
        if !sliced || !cut_after.iter().any(|&c| c) {
            for &(d, kind, _) in &items {
                let nd = new_dart(d, kind);
                owner[nd] = v;
                dart_origin[nd] = (d, kind);
                rot[v].push(nd);
            }
            copies[v].push(WedgeCopy {
                vertex: v,
                first_key: items.first().map_or(0, |i| i.2),
                last_key: items.last().map_or(0, |i| i.2),
                // prefer a corner in a cut face, the side the caller opens
                corner: items
                    .iter()
                    .rev()
                    .find(|&&(d, k, _)| k == CopyKind::Whole && is_cut_face(g.face_of(d)))
                    .or(items.last())
                    .map(|&(d, k, _)| new_dart(d, k)),
            });
            continue;
        }
        // a run made only of path copies facing a cut face encloses nothing;
        // it is merged into the following run
        let len = items.len();
        let facing_cut = |&(d, kind, _): &(DartId, CopyKind, usize)| match kind {
            CopyKind::Whole => false,
            CopyKind::A => is_cut_face(g.face_of(d ^ 1)),
            CopyKind::B => is_cut_face(g.face_of(d)),
        };
        let run_starts = |cut_after: &[bool]| -> Vec<usize> {
            (0..len).filter(|&i| cut_after[(i + len - 1) % len]).collect()
        };
        if slivers {
            for i in 0..len {
                let j = (i + 1) % len;
                // only a B copy can precede a face cut between two path copies
                if items[i].1 == CopyKind::B && cut_after[i] && facing_cut(&items[i]) && facing_cut(&items[j]) {
                    cut_after[i] = false;
                }
            }
        }
        let starts = if slivers { Vec::new() } else { run_starts(&cut_after) };
        for (si, &s) in starts.iter().enumerate() {
            let end = starts[(si + 1) % starts.len()];
            let mut i = s;
            let mut degenerate = true;
            loop {
                degenerate &= facing_cut(&items[i]);
                let next = (i + 1) % len;
                if next == end {
                    break;
                }
                i = next;
            }
            if degenerate {
                cut_after[i] = false;
            }
        }
        if !cut_after.iter().any(|&c| c) {
            for &(d, kind, _) in &items {
                let nd = new_dart(d, kind);
                owner[nd] = v;
                dart_origin[nd] = (d, kind);
                rot[v].push(nd);
            }
            copies[v].push(WedgeCopy {
                vertex: v,
                first_key: items[0].2,
                last_key: items[len - 1].2,
                corner: Some(new_dart(items[len - 1].0, items[len - 1].1)),
            });
            continue;
        }
        // runs start right after each cut; the run holding item 0 keeps id v
        let starts = run_starts(&cut_after);
        let first_run = starts.iter().rposition(|&s| s == 0).unwrap_or(starts.len() - 1);
        let order: Vec<usize> = (0..starts.len()).map(|j| (first_run + j) % starts.len()).collect();
        for (j, &si) in order.iter().enumerate() {
            let s = starts[si];
            let end = starts[(si + 1) % starts.len()];
            let id = if j == 0 {
                v
            } else {
                vertex_origin.push(v);
                rot.push(Vec::new());
                rot.len() - 1
            };
            let mut i = s;
            let mut last;
            loop {
                let (d, kind, _) = items[i];
                let nd = new_dart(d, kind);
                owner[nd] = id;
                dart_origin[nd] = (d, kind);
                rot[id].push(nd);
                last = i;
                i = (i + 1) % len;
                if i == end {
                    break;
                }
            }
            copies[v].push(WedgeCopy {
                vertex: id,
                first_key: items[s].2,
                last_key: items[last].2,
                corner: Some(new_dart(items[last].0, items[last].1)),
            });
        }
    }

    let mut edges = vec![Edge { u: 0, v: 0, w: 0.0 }; total_edges];
    for ne in 0..total_edges {
        let (d, _) = dart_origin[2 * ne];
        edges[ne] = Edge { u: owner[2 * ne], v: owner[2 * ne + 1], w: g.weight(d) };
    }
    let outer_hint = g.outer_dart().map(|d| match twin_edge[d >> 1] {
        Some(e2) if d & 1 == 1 => 2 * e2 + 1,
        _ => d,
    });
    let mut graph = PlaneGraph::new(edges, rot, outer_hint, true)?;
    graph.set_labels(vertex_origin.iter().map(|&v| g.label(v)).collect());
    Ok(Sliced { graph, vertex_origin, dart_origin, copies, twin_edge })
}

/// Slices along a path whose endpoints lie on the outer face, cutting the
/// path's vertices at their outer corners as well.
pub fn slice_along_path(g: &PlaneGraph, path: &Path) -> Result<Sliced> {
    let outer = g.outer_face().ok_or(Error::PathNotOnOuterStructure)?;
    if path.vertices.len() != path.darts.len() + 1 {
        return Err(Error::MalformedPath("vertex and dart counts disagree".into()));
    }
    for (i, &d) in path.darts.iter().enumerate() {
        if d >= g.num_darts() || g.origin(d) != path.vertices[i] || g.head(d) != path.vertices[i + 1] {
            return Err(Error::MalformedPath(format!("dart {d} does not continue the path")));
        }
    }
    if !path.is_simple() {
        return Err(Error::MalformedPath("path repeats a vertex".into()));
    }
    let on = g.on_face(outer);
    if !on[path.source()] || !on[path.target()] {
        return Err(Error::PathNotOnOuterStructure);
    }
    let mut cut = vec![false; g.m()];
    for &d in &path.darts {
        cut[d >> 1] = true;
    }
    slice_open(g, &cut, &[outer])
}
