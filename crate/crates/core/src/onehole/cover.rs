use std::collections::BTreeSet;

use crate::graph::{sssp, Path, PlaneGraph, VertexId};

/// Relative slack used when comparing detours against `(1+ε)·dist`.
const SLACK: f64 = 1e-12;

/// Indices into a path of an ε-cover, given the distance from the source
/// vertex to every path vertex and the prefix weights along the path.
///
/// Starts at the closest path vertex and walks outwards in both directions,
/// adding the first vertex whose detour through the last added cover vertex
/// exceeds `(1+ε)` times its distance.
pub fn cover_indices(dv: &[f64], prefix: &[f64], eps: f64) -> Vec<usize> {
    let len = dv.len();
    if len == 0 {
        return Vec::new();
    }
    let c = (0..len).min_by(|&a, &b| dv[a].total_cmp(&dv[b]).then(a.cmp(&b))).unwrap();
    if !dv[c].is_finite() {
        return vec![c];
    }
    let mut out = vec![c];
    let ok = |a: usize, x: usize| {
        let along = (prefix[a] - prefix[x]).abs();
        dv[a] + along <= (1.0 + eps) * dv[x] * (1.0 + SLACK) + SLACK
    };
    let mut a = c;
    for x in c + 1..len {
        if !ok(a, x) {
            out.push(x);
            a = x;
        }
    }
    let mut a = c;
    for x in (0..c).rev() {
        if !ok(a, x) {
            out.push(x);
            a = x;
        }
    }
    out.sort_unstable();
    out
}

/// An ε-cover of `v` on the shortest path `p`: for every path vertex `x`
/// some cover vertex `y` has `d(v,y) + d(y,x) ≤ (1+ε)·d(v,x)`.
pub fn eps_cover(g: &PlaneGraph, p: &Path, v: VertexId, eps: f64) -> Vec<VertexId> {
    let d = sssp(g, v);
    let dv: Vec<f64> = p.vertices.iter().map(|&x| d[x]).collect();
    let prefix = p.prefix_weights(g);
    cover_indices(&dv, &prefix, eps).into_iter().map(|i| p.vertices[i]).collect()
}

/// Union of the ε-covers on `p` of every vertex in `ys`.
pub fn eps_cover_union(g: &PlaneGraph, p: &Path, ys: &[VertexId], eps: f64) -> Vec<VertexId> {
    let prefix = p.prefix_weights(g);
    let mut out = BTreeSet::new();
    for &v in ys {
        let d = sssp(g, v);
        let dv: Vec<f64> = p.vertices.iter().map(|&x| d[x]).collect();
        for i in cover_indices(&dv, &prefix, eps) {
            out.insert(p.vertices[i]);
        }
    }
    out.into_iter().collect()
}

/// Same as [`eps_cover_union`] with the distances from every `ys` vertex to
/// every path vertex already known (`dist[i][j]` for `ys[i]`, path vertex `j`).
pub fn eps_cover_union_from(p: &Path, prefix: &[f64], dist: &[Vec<f64>], eps: f64) -> Vec<VertexId> {
    let mut out = BTreeSet::new();
    for dv in dist {
        for i in cover_indices(dv, prefix, eps) {
            out.insert(p.vertices[i]);
        }
    }
    out.into_iter().collect()
}

/// Checks the cover predicate for `v` against every vertex of `p` by brute force.
pub fn validates_cover(g: &PlaneGraph, p: &Path, v: VertexId, cover: &[VertexId], eps: f64) -> bool {
    let d = sssp(g, v);
    let prefix = p.prefix_weights(g);
    let idx: Vec<usize> = cover
        .iter()
        .filter_map(|y| p.vertices.iter().position(|x| x == y))
        .collect();
    (0..p.vertices.len()).all(|x| {
        let target = (1.0 + eps) * d[p.vertices[x]];
        idx.iter().any(|&y| d[p.vertices[y]] + (prefix[y] - prefix[x]).abs() <= target * (1.0 + 1e-9) + 1e-12)
    })
}
