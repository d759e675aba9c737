use super::{PlaneGraph, VertexId};

struct Dfs {
    disc: Vec<usize>,
    low: Vec<usize>,
    is_cut: Vec<bool>,
    blocks: Vec<Vec<usize>>,
}

const UNSEEN: usize = usize::MAX;

fn tarjan(g: &PlaneGraph) -> Dfs {
    let n = g.n();
    let mut st = Dfs {
        disc: vec![UNSEEN; n],
        low: vec![0; n],
        is_cut: vec![false; n],
        blocks: Vec::new(),
    };
    let mut time = 0;
    let mut estack: Vec<usize> = Vec::new();
    // self-loops form their own blocks and never affect articulation
    for (e, ed) in g.edges().iter().enumerate() {
        if ed.u == ed.v {
            st.blocks.push(vec![e]);
        }
    }
    for root in 0..n {
        if st.disc[root] != UNSEEN {
            continue;
        }
        st.disc[root] = time;
        st.low[root] = time;
        time += 1;
        let mut root_children = 0;
        let mut stack: Vec<(VertexId, Option<usize>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, pe, i) = *top;
            if i < g.degree(v) {
                top.2 += 1;
                let d = g.rotation(v)[i];
                let e = d >> 1;
                let w = g.head(d);
                if Some(e) == pe || w == v {
                    continue;
                }
                if st.disc[w] == UNSEEN {
                    st.disc[w] = time;
                    st.low[w] = time;
                    time += 1;
                    estack.push(e);
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(e), 0));
                } else if st.disc[w] < st.disc[v] {
                    st.low[v] = st.low[v].min(st.disc[w]);
                    estack.push(e);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    st.low[p] = st.low[p].min(st.low[v]);
                    if st.low[v] >= st.disc[p] {
                        if p != root {
                            st.is_cut[p] = true;
                        }
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if Some(e) == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        st.blocks.push(block);
                    }
                }
            }
        }
        if root_children > 1 {
            st.is_cut[root] = true;
        }
    }
    st
}

/// Vertices whose removal disconnects their component, in increasing order.
pub fn cut_vertices(g: &PlaneGraph) -> Vec<VertexId> {
    let st = tarjan(g);
    (0..g.n()).filter(|&v| st.is_cut[v]).collect()
}

/// Edge sets of the maximal 2-connected blocks (bridges and loops are blocks
/// of their own), sorted by smallest edge id.
pub fn biconnected_components(g: &PlaneGraph) -> Vec<Vec<usize>> {
    let mut blocks = tarjan(g).blocks;
    blocks.sort();
    blocks
}

/// Vertices met more than once on the outer face walk, in increasing order.
pub fn outer_walk_repeats(g: &PlaneGraph) -> Vec<VertexId> {
    let mut count = vec![0usize; g.n()];
    for v in g.outer_walk() {
        count[v] += 1;
    }
    (0..g.n()).filter(|&v| count[v] > 1).collect()
}
