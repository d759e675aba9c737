use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{biconnected_components, DartId, VertexId};
use crate::instance::Instance;

use super::plan::{CombinePlan, CopyLink, GlueSpec};

/// Splits the instance into its 2-connected blocks that matter for terminal
/// distances. A block keeps its own terminals plus every cut vertex behind
/// which further terminals lie; blocks left with fewer than two such
/// terminals are dropped. Gluing at cut vertices is exact.
pub fn remove_cut_vertices(inst: &Instance) -> Result<(Vec<Instance>, CombinePlan)> {
    let h = &inst.graph;
    let blocks = biconnected_components(h);
    if blocks.len() <= 1 || inst.k() <= 1 {
        return Ok((vec![inst.clone()], CombinePlan::identity()));
    }
    let nb = blocks.len();
    let mut block_of_edge = vec![0; h.m()];
    for (b, es) in blocks.iter().enumerate() {
        for &e in es {
            block_of_edge[e] = b;
        }
    }
    let mut vblocks: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for v in 0..h.n() {
        for &d in h.rotation(v) {
            let b = block_of_edge[d >> 1];
            if !vblocks[v].contains(&b) {
                vblocks[v].push(b);
            }
        }
    }
    let cut_ids: Vec<VertexId> = (0..h.n()).filter(|&v| vblocks[v].len() >= 2).collect();
    let mut cut_node = vec![usize::MAX; h.n()];
    for (i, &c) in cut_ids.iter().enumerate() {
        cut_node[c] = nb + i;
    }
    let nn = nb + cut_ids.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nn];
    for &c in &cut_ids {
        for &b in &vblocks[c] {
            adj[b].push(cut_node[c]);
            adj[cut_node[c]].push(b);
        }
    }
    let mut is_term = vec![false; h.n()];
    let mut weight = vec![0usize; nn];
    for &t in &inst.terminals {
        is_term[t] = true;
        if cut_node[t] != usize::MAX {
            weight[cut_node[t]] += 1;
        } else if let Some(&b) = vblocks[t].first() {
            weight[b] += 1;
        }
    }
    let total: usize = weight.iter().sum();
    let mut parent = vec![usize::MAX; nn];
    let mut order = Vec::with_capacity(nn);
    let mut seen = vec![false; nn];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if order.len() != nn {
        return Err(Error::DisconnectedInput { components: 2 });
    }
    let mut sub = weight.clone();
    for &x in order.iter().rev() {
        if parent[x] != usize::MAX {
            sub[parent[x]] += sub[x];
        }
    }
    let far_side = |b: usize, c: VertexId| -> usize {
        let cn = cut_node[c];
        if parent[b] == cn {
            total - sub[b] - weight[cn]
        } else {
            sub[cn] - weight[cn]
        }
    };

    let outer = h.outer_face().ok_or_else(|| Error::InvalidInstance("no outer face".into()))?;
    let mut pieces: Vec<Instance> = Vec::new();
    // per piece: (original vertex, piece terminal index)
    let mut piece_terms: Vec<Vec<(VertexId, usize, DartId)>> = Vec::new();
    for (b, es) in blocks.iter().enumerate() {
        let mut verts: Vec<VertexId> = Vec::new();
        for &e in es {
            for v in [h.edge(e).u, h.edge(e).v] {
                if !verts.contains(&v) {
                    verts.push(v);
                }
            }
        }
        verts.sort_unstable();
        let uhat: Vec<VertexId> = verts
            .iter()
            .copied()
            .filter(|&v| is_term[v] || (cut_node[v] != usize::MAX && far_side(b, v) > 0))
            .collect();
        if uhat.len() < 2 {
            continue;
        }
        let mut keep_edge = vec![false; h.m()];
        for &e in es {
            keep_edge[e] = true;
        }
        let outer_dart = es
            .iter()
            .flat_map(|&e| [2 * e, 2 * e + 1])
            .find(|&d| h.face_of(d) == outer)
            .ok_or_else(|| Error::InvalidInstance("terminal block off the outer face".into()))?;
        let (mut pg, vmap, dmap) = h.subgraph(&keep_edge, &vec![false; h.n()], Some(outer_dart))?;
        let fb = pg.face_of(dmap[outer_dart].unwrap());
        pg.set_outer_dart(pg.faces()[fb][0]);
        let mut corner_at = vec![None; pg.n()];
        for &d in &pg.faces()[fb] {
            corner_at[pg.origin(d)].get_or_insert(d);
        }
        let mut pos = vec![0usize; pg.num_darts()];
        for (i, &d) in pg.faces()[fb].iter().enumerate() {
            pos[d] = i;
        }
        let mut list: Vec<(usize, VertexId, DartId)> = Vec::with_capacity(uhat.len());
        for &v in &uhat {
            let nv = vmap[v].unwrap();
            let c = corner_at[nv].ok_or_else(|| {
                Error::InvalidInstance(format!("vertex {v} misses the outer face of its block"))
            })?;
            list.push((pos[c], v, c));
        }
        list.sort_unstable();
        let terminals = list.iter().map(|&(_, v, _)| vmap[v].unwrap()).collect();
        let corners = list.iter().map(|&(_, _, c)| Some(c)).collect();
        // record the corner as an old dart for anchoring
        let inv: Vec<DartId> = {
            let mut inv = vec![0; pg.num_darts()];
            for (d, nd) in dmap.iter().enumerate() {
                if let Some(nd) = nd {
                    inv[*nd] = d;
                }
            }
            inv
        };
        piece_terms.push(list.iter().enumerate().map(|(i, &(_, v, c))| (v, i, inv[pg.rot_next(c)])).collect());
        pieces.push(Instance::new(pg, terminals, corners)?);
    }

    if pieces.len() == 1 && pieces[0].k() == inst.k() && pieces[0].n() == inst.n() {
        return Ok((vec![inst.clone()], CombinePlan::identity()));
    }
    let mut groups: Vec<Vec<CopyLink>> = Vec::new();
    let mut group_of = vec![usize::MAX; h.n()];
    for (pi, terms) in piece_terms.iter().enumerate() {
        for &(v, ti, first) in terms {
            if group_of[v] == usize::MAX {
                group_of[v] = groups.len();
                groups.push(Vec::new());
            }
            groups[group_of[v]].push(CopyLink { part: pi, terminal: ti, anchor: 4 * h.rot_pos(first) });
        }
    }
    let mut terminals = Vec::with_capacity(inst.k());
    for (j, &t) in inst.terminals.iter().enumerate() {
        if group_of[t] == usize::MAX {
            return Err(Error::InvalidInstance(format!("terminal {t} lost in block split")));
        }
        terminals.push((group_of[t], inst.corners[j].map_or(0, |d| 4 * h.rot_pos(d) + 2)));
    }
    let parts = (0..pieces.len()).map(CombinePlan::Leaf).collect();
    Ok((pieces, CombinePlan::Glue { parts, spec: GlueSpec { groups, terminals, inner: Vec::new() } }))
}
