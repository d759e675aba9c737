use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::DistMatrix;
use crate::instance::Instance;

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact terminal distances by a plain binary-heap Dijkstra over the edge
/// list. Shares no code with the library's own search.
pub fn exact_oracle(inst: &Instance) -> DistMatrix {
    let n = inst.graph.n();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in inst.graph.edges() {
        adj[e.u].push((e.v, e.w));
        adj[e.v].push((e.u, e.w));
    }
    let k = inst.k();
    let mut out = DistMatrix::new(k);
    for i in 0..k {
        let d = dijkstra(&adj, inst.terminals[i]);
        for j in 0..k {
            out.set(i, j, d[inst.terminals[j]]);
        }
    }
    out
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Item(0.0, s));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    dist
}
