use crate::error::Result;
use crate::graph::{suppress_degree_two, DartId, SpTree};
use crate::instance::Instance;

/// Exact emulator: the union of the canonical shortest paths between all
/// terminal pairs, with unmarked degree-2 vertices suppressed.
///
/// The union is a subgraph of the input, so it inherits the embedding, and it
/// contains a shortest path for every pair, so terminal distances are kept.
pub fn base_zero_emulator(inst: &Instance) -> Result<Instance> {
    let g = &inst.graph;
    let k = inst.k();
    let mut keep_edge = vec![false; g.m()];
    let mut keep_vertex = vec![false; g.n()];
    for &t in &inst.terminals {
        keep_vertex[t] = true;
    }
    let trees: Vec<Option<SpTree>> = (0..k)
        .map(|i| {
            let t = inst.terminals[i];
            // a tree is needed only where this terminal is the smaller endpoint
            inst.terminals.iter().any(|&u| u > t).then(|| SpTree::build(g, t))
        })
        .collect();
    let mut stamp = vec![usize::MAX; g.n()];
    for i in 0..k {
        stamp[inst.terminals[i]] = i;
        for j in 0..k {
            let (s, t) = (inst.terminals[i], inst.terminals[j]);
            if s >= t {
                continue;
            }
            let tree = trees[i].as_ref().expect("tree built for smaller endpoint");
            if !tree.dist[t].is_finite() {
                continue;
            }
            let mut x = t;
            while stamp[x] != i {
                stamp[x] = i;
                let d = tree.parent[x].expect("reached vertex has a parent");
                keep_edge[d >> 1] = true;
                x = g.origin(d);
            }
        }
    }
    let outer_hint = g.outer_face().and_then(|f| g.faces()[f].iter().copied().find(|&d| keep_edge[d >> 1]));
    let (sub, vmap, dmap) = g.subgraph(&keep_edge, &keep_vertex, outer_hint)?;
    // a corner moves clockwise to the first surviving dart
    let corners: Vec<Option<DartId>> = inst
        .corners
        .iter()
        .map(|c| {
            c.and_then(|d| {
                let mut x = d;
                for _ in 0..g.degree(g.origin(d)) {
                    if let Some(nd) = dmap[x] {
                        return Some(nd);
                    }
                    x = g.rot_prev(x);
                }
                None
            })
        })
        .collect();
    let mut keep = vec![false; sub.n()];
    let terms: Vec<usize> = inst.terminals.iter().map(|&t| vmap[t].unwrap()).collect();
    for &t in &terms {
        keep[t] = true;
    }
    let s = suppress_degree_two(&sub, &keep)?;
    let terminals = terms.iter().map(|&t| s.vertex_map[t].unwrap()).collect();
    let corners: Vec<Option<DartId>> = corners.iter().map(|c| c.and_then(|d| s.dart_map[d])).collect();
    Instance::new(s.graph, terminals, corners)
}
