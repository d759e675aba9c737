use super::{DartId, Edge, PlaneGraph, VertexId};
use crate::error::{Error, Result};

/// One copy of a vertex to be identified with others during assembly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlueCopy {
    pub part: usize,
    pub vertex: VertexId,
    /// Dart after which the copy's open corner lies; `None` for an isolated copy.
    pub corner: Option<DartId>,
    /// Position of the copy in the cyclic order around the merged vertex.
    pub anchor: usize,
}

#[derive(Clone, Debug)]
pub struct Assembled {
    pub graph: PlaneGraph,
    pub vertex_map: Vec<Vec<VertexId>>,
    pub dart_map: Vec<Vec<DartId>>,
    /// Merged vertex of each group.
    pub group_vertex: Vec<VertexId>,
}

/// Rotation of `v` starting right after `corner` and ending with it.
pub fn opened_rotation(g: &PlaneGraph, v: VertexId, corner: Option<DartId>) -> Vec<DartId> {
    let r = g.rotation(v);
    match corner {
        None => r.to_vec(),
        Some(c) => {
            let p = g.rot_pos(c);
            (1..=r.len()).map(|i| r[(p + i) % r.len()]).collect()
        }
    }
}

/// Index of the copy whose trailing gap holds `key`, copies sorted by anchor.
pub fn gap_owner(anchors: &[usize], key: usize) -> usize {
    match anchors.iter().rposition(|&a| a < key) {
        Some(i) => i,
        None => anchors.len() - 1,
    }
}

/// Disjoint union of `parts` with each group of copies merged into a single
/// vertex whose rotation concatenates the copies' opened rotations in anchor
/// order.
pub fn assemble(
    parts: &[&PlaneGraph],
    groups: &[Vec<GlueCopy>],
    outer_hint: Option<(usize, DartId)>,
) -> Result<Assembled> {
    let mut group_of: Vec<Vec<Option<usize>>> = parts.iter().map(|g| vec![None; g.n()]).collect();
    for (gi, grp) in groups.iter().enumerate() {
        if grp.is_empty() {
            return Err(Error::InconsistentCopyLabels(format!("group {gi} is empty")));
        }
        for c in grp {
            if c.part >= parts.len() || c.vertex >= parts[c.part].n() {
                return Err(Error::InconsistentCopyLabels(format!("group {gi} names a missing copy")));
            }
            if group_of[c.part][c.vertex].is_some() {
                return Err(Error::InconsistentCopyLabels(format!(
                    "vertex {} of part {} is in two groups",
                    c.vertex, c.part
                )));
            }
            if let Some(d) = c.corner {
                if d >= parts[c.part].num_darts() || parts[c.part].origin(d) != c.vertex {
                    return Err(Error::InconsistentCopyLabels(format!(
                        "corner {d} does not leave vertex {}",
                        c.vertex
                    )));
                }
            }
            group_of[c.part][c.vertex] = Some(gi);
        }
    }

    let mut edge_off = Vec::with_capacity(parts.len());
    let mut total = 0;
    for g in parts {
        edge_off.push(total);
        total += g.m();
    }
    let dart_map: Vec<Vec<DartId>> = parts
        .iter()
        .enumerate()
        .map(|(p, g)| (0..g.num_darts()).map(|d| 2 * edge_off[p] + d).collect())
        .collect();

    let mut vertex_map: Vec<Vec<VertexId>> = parts.iter().map(|g| vec![usize::MAX; g.n()]).collect();
    let mut group_vertex = vec![usize::MAX; groups.len()];
    let mut n = 0;
    let mut labels = Vec::new();
    for (p, g) in parts.iter().enumerate() {
        for v in 0..g.n() {
            match group_of[p][v] {
                Some(gi) => {
                    if group_vertex[gi] == usize::MAX {
                        group_vertex[gi] = n;
                        labels.push(g.label(v));
                        n += 1;
                    }
                    vertex_map[p][v] = group_vertex[gi];
                }
                None => {
                    vertex_map[p][v] = n;
                    labels.push(g.label(v));
                    n += 1;
                }
            }
        }
    }

    let mut edges = Vec::with_capacity(total);
    for (p, g) in parts.iter().enumerate() {
        for e in g.edges() {
            edges.push(Edge { u: vertex_map[p][e.u], v: vertex_map[p][e.v], w: e.w });
        }
    }
    let mut rot: Vec<Vec<DartId>> = vec![Vec::new(); n];
    for (p, g) in parts.iter().enumerate() {
        for v in 0..g.n() {
            if group_of[p][v].is_none() {
                rot[vertex_map[p][v]] = g.rotation(v).iter().map(|&d| dart_map[p][d]).collect();
            }
        }
    }
    for (gi, grp) in groups.iter().enumerate() {
        let mut order: Vec<&GlueCopy> = grp.iter().collect();
        order.sort_by_key(|c| c.anchor);
        let r = &mut rot[group_vertex[gi]];
        for c in order {
            let g = parts[c.part];
            for d in opened_rotation(g, c.vertex, c.corner) {
                r.push(dart_map[c.part][d]);
            }
        }
    }
    let hint = outer_hint.map(|(p, d)| dart_map[p][d]);
    let mut graph = PlaneGraph::new(edges, rot, hint, true)?;
    graph.set_labels(labels);
    Ok(Assembled { graph, vertex_map, dart_map, group_vertex })
}
