use super::{DartId, Edge, PlaneGraph, VertexId};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Suppressed {
    pub graph: PlaneGraph,
    pub vertex_map: Vec<Option<VertexId>>,
    /// New dart for every old dart leaving a kept vertex.
    pub dart_map: Vec<Option<DartId>>,
}

/// Replaces every chain through unmarked degree-2 vertices by a single edge
/// whose weight is the chain's total.
pub fn suppress_degree_two(g: &PlaneGraph, keep: &[bool]) -> Result<Suppressed> {
    let n = g.n();
    let mut kept: Vec<bool> = (0..n)
        .map(|v| {
            keep[v] || g.degree(v) != 2 || (g.rotation(v)[0] >> 1) == (g.rotation(v)[1] >> 1)
        })
        .collect();
    // components that are bare cycles of removable vertices keep one vertex
    let mut seen = vec![false; n];
    for s in 0..n {
        if kept[s] {
            seen[s] = true;
        }
    }
    loop {
        for s in 0..n {
            if !kept[s] {
                continue;
            }
            for &d in g.rotation(s) {
                let mut x = g.head(d);
                let mut cur = d;
                while !kept[x] && !seen[x] {
                    seen[x] = true;
                    let r = g.rotation(x);
                    let nxt = if r[0] == (cur ^ 1) { r[1] } else { r[0] };
                    cur = nxt;
                    x = g.head(cur);
                }
            }
        }
        match (0..n).find(|&v| !seen[v]) {
            Some(v) => {
                kept[v] = true;
                seen[v] = true;
            }
            None => break,
        }
    }

    let mut vertex_map = vec![None; n];
    let mut nv = 0;
    for v in 0..n {
        if kept[v] {
            vertex_map[v] = Some(nv);
            nv += 1;
        }
    }
    let mut dart_map: Vec<Option<DartId>> = vec![None; g.num_darts()];
    let mut edges = Vec::new();
    for v in 0..n {
        if !kept[v] {
            continue;
        }
        for &d in g.rotation(v) {
            if dart_map[d].is_some() {
                continue;
            }
            let mut w = g.weight(d);
            let mut cur = d;
            let mut x = g.head(d);
            while !kept[x] {
                let r = g.rotation(x);
                cur = if r[0] == (cur ^ 1) { r[1] } else { r[0] };
                w += g.weight(cur);
                x = g.head(cur);
            }
            let back = cur ^ 1;
            let ne = edges.len();
            edges.push(Edge { u: vertex_map[v].unwrap(), v: vertex_map[x].unwrap(), w });
            dart_map[d] = Some(2 * ne);
            dart_map[back] = Some(2 * ne + 1);
        }
    }
    let mut rot = vec![Vec::new(); nv];
    let mut labels = vec![0; nv];
    for v in 0..n {
        if let Some(x) = vertex_map[v] {
            rot[x] = g.rotation(v).iter().map(|&d| dart_map[d].unwrap()).collect();
            labels[x] = g.label(v);
        }
    }
    let outer_hint = g.outer_face().and_then(|f| {
        g.faces()[f].iter().find(|&&d| kept[g.origin(d)]).map(|&d| dart_map[d].unwrap())
    });
    let mut graph = PlaneGraph::new(edges, rot, outer_hint, true)?;
    graph.set_labels(labels);
    Ok(Suppressed { graph, vertex_map, dart_map })
}
