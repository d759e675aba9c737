use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{DartId, PlaneGraph, VertexId};
use crate::error::{Error, Result};

/// A walk given by its darts; `vertices` has one more entry than `darts`.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub darts: Vec<DartId>,
    pub vertices: Vec<VertexId>,
    pub weight: f64,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path { darts: Vec::new(), vertices: vec![v], weight: 0.0 }
    }

    pub fn from_darts(g: &PlaneGraph, start: VertexId, darts: Vec<DartId>) -> Result<Self> {
        let mut vertices = vec![start];
        let mut weight = 0.0;
        for &d in &darts {
            if g.origin(d) != *vertices.last().unwrap() {
                return Err(Error::MalformedPath(format!("dart {d} does not continue the walk")));
            }
            vertices.push(g.head(d));
            weight += g.weight(d);
        }
        Ok(Path { darts, vertices, weight })
    }

    pub fn source(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn target(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn hops(&self) -> usize {
        self.darts.len()
    }

    pub fn reversed(&self) -> Path {
        Path {
            darts: self.darts.iter().rev().map(|&d| d ^ 1).collect(),
            vertices: self.vertices.iter().rev().copied().collect(),
            weight: self.weight,
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.vertices.iter().all(|v| seen.insert(*v))
    }

    /// Distances from the source along the path, one per vertex.
    pub fn prefix_weights(&self, g: &PlaneGraph) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut acc = 0.0;
        out.push(0.0);
        for &d in &self.darts {
            acc += g.weight(d);
            out.push(acc);
        }
        out
    }

    pub fn key(&self) -> TieBreakKey {
        TieBreakKey { weight: self.weight, hops: self.darts.len(), sequence: self.vertices.clone() }
    }
}

/// Composite order making shortest paths unique: weight, then hop count,
/// then the vertex sequence compared lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct TieBreakKey {
    pub weight: f64,
    pub hops: usize,
    pub sequence: Vec<VertexId>,
}

impl Eq for TieBreakKey {}

impl PartialOrd for TieBreakKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TieBreakKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.hops.cmp(&other.hops))
            .then_with(|| self.sequence.cmp(&other.sequence))
    }
}

/// Dense symmetric matrix of terminal distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistMatrix {
    pub k: usize,
    pub data: Vec<f64>,
}

impl DistMatrix {
    pub fn new(k: usize) -> Self {
        DistMatrix { k, data: vec![0.0; k * k] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.k + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.k + j] = x;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    /// Smallest and largest positive finite off-diagonal entries.
    pub fn min_max_positive(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..self.k {
            for j in i + 1..self.k {
                let x = self.get(i, j);
                if x > 0.0 && x.is_finite() {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
        }
        (lo.is_finite()).then_some((lo, hi))
    }

    /// Ratio of the largest to the smallest positive terminal distance.
    pub fn spread(&self) -> f64 {
        self.min_max_positive().map_or(1.0, |(lo, hi)| hi / lo)
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapItem {
    dist: f64,
    hops: u32,
    v: VertexId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source distances (no path bookkeeping).
pub fn sssp(g: &PlaneGraph, s: VertexId) -> Vec<f64> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(HeapItem { dist: 0.0, hops: 0, v: s });
    while let Some(HeapItem { dist: d, v, .. }) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &a in g.rotation(v) {
            let y = g.head(a);
            let nd = d + g.weight(a);
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(HeapItem { dist: nd, hops: 0, v: y });
            }
        }
    }
    dist
}

/// Shortest-path tree whose root paths are the `TieBreakKey` minima.
#[derive(Clone, Debug)]
pub struct SpTree {
    pub source: VertexId,
    pub dist: Vec<f64>,
    pub hops: Vec<u32>,
    /// Dart entering each vertex on its tree path.
    pub parent: Vec<Option<DartId>>,
}

impl SpTree {
    pub fn build(g: &PlaneGraph, s: VertexId) -> Self {
        let n = g.n();
        let mut dist = vec![f64::INFINITY; n];
        let mut hops = vec![u32::MAX; n];
        let mut parent: Vec<Option<DartId>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[s] = 0.0;
        hops[s] = 0;
        heap.push(HeapItem { dist: 0.0, hops: 0, v: s });
        while let Some(HeapItem { dist: d, hops: h, v }) = heap.pop() {
            if done[v] || d > dist[v] || (d == dist[v] && h > hops[v]) {
                continue;
            }
            done[v] = true;
            for &a in g.rotation(v) {
                let y = g.head(a);
                if done[y] {
                    continue;
                }
                let nd = d + g.weight(a);
                let nh = h + 1;
                let better = match nd.total_cmp(&dist[y]).then(nh.cmp(&hops[y])) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => match parent[y] {
                        None => true,
                        Some(p) => lex_less(g, &parent, v, g.origin(p)),
                    },
                };
                if better {
                    let improved_key = nd < dist[y] || nh < hops[y];
                    dist[y] = nd;
                    hops[y] = nh;
                    parent[y] = Some(a);
                    if improved_key {
                        heap.push(HeapItem { dist: nd, hops: nh, v: y });
                    }
                }
            }
        }
        SpTree { source: s, dist, hops, parent }
    }

    /// Tree path from the source to `t`.
    pub fn path_to(&self, g: &PlaneGraph, t: VertexId) -> Option<Path> {
        if !self.dist[t].is_finite() {
            return None;
        }
        let mut darts = Vec::new();
        let mut x = t;
        while let Some(d) = self.parent[x] {
            darts.push(d);
            x = g.origin(d);
        }
        darts.reverse();
        let mut vertices = Vec::with_capacity(darts.len() + 1);
        vertices.push(self.source);
        for &d in &darts {
            vertices.push(g.head(d));
        }
        Some(Path { darts, vertices, weight: self.dist[t] })
    }
}

/// Compares the tree sequences ending at `a` and `b`, which have equal length.
fn lex_less(g: &PlaneGraph, parent: &[Option<DartId>], a: VertexId, b: VertexId) -> bool {
    let (mut x, mut y) = (a, b);
    loop {
        if x == y {
            return false;
        }
        let px = parent[x].map(|d| g.origin(d));
        let py = parent[y].map(|d| g.origin(d));
        if px == py {
            return x < y;
        }
        match (px, py) {
            (Some(p), Some(q)) => {
                x = p;
                y = q;
            }
            _ => return x < y,
        }
    }
}

/// The unique `TieBreakKey`-minimal path between `s` and `t`.
///
/// The search runs from the smaller endpoint id so that the result does not
/// depend on argument order.
pub fn shortest_path(g: &PlaneGraph, s: VertexId, t: VertexId) -> Result<Path> {
    if s == t {
        return Ok(Path::trivial(s));
    }
    let (a, b) = if s < t { (s, t) } else { (t, s) };
    let tree = SpTree::build(g, a);
    let p = tree.path_to(g, b).ok_or(Error::Unreachable { s, t })?;
    Ok(if s < t { p } else { p.reversed() })
}

/// Exact pairwise distances among `terminals` (infinite when unreachable).
pub fn all_terminal_distances(g: &PlaneGraph, terminals: &[VertexId]) -> DistMatrix {
    let k = terminals.len();
    let mut m = DistMatrix::new(k);
    for (i, &t) in terminals.iter().enumerate() {
        let d = sssp(g, t);
        for (j, &u) in terminals.iter().enumerate() {
            m.set(i, j, d[u]);
        }
    }
    // enforce exact symmetry: both directions sum the same edges in different orders
    for i in 0..k {
        for j in i + 1..k {
            let x = m.get(i, j).min(m.get(j, i));
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

/// A shortest `s`-`t` path that touches as few outer-face vertices as the
/// ties allow, so it runs through the interior where it can.
pub fn interior_shortest_path(g: &PlaneGraph, s: VertexId, t: VertexId) -> Result<Path> {
    if s == t {
        return Ok(Path::trivial(s));
    }
    let (a, b) = if s < t { (s, t) } else { (t, s) };
    let n = g.n();
    let mut outer = vec![0u32; n];
    for v in g.outer_walk() {
        outer[v] = 1;
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut touch = vec![u32::MAX; n];
    let mut parent: Vec<Option<DartId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[a] = 0.0;
    touch[a] = outer[a];
    heap.push(HeapItem { dist: 0.0, hops: outer[a], v: a });
    while let Some(HeapItem { dist: d, hops: c, v }) = heap.pop() {
        if done[v] || d > dist[v] || (d == dist[v] && c > touch[v]) {
            continue;
        }
        done[v] = true;
        if v == b {
            break;
        }
        for &e in g.rotation(v) {
            let y = g.head(e);
            if done[y] {
                continue;
            }
            let nd = d + g.weight(e);
            let nc = c + outer[y];
            let better = match nd.total_cmp(&dist[y]).then(nc.cmp(&touch[y])) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => parent[y].map_or(true, |p| v < g.origin(p)),
            };
            if better {
                let improved = nd < dist[y] || nc < touch[y];
                dist[y] = nd;
                touch[y] = nc;
                parent[y] = Some(e);
                if improved {
                    heap.push(HeapItem { dist: nd, hops: nc, v: y });
                }
            }
        }
    }
    if !dist[b].is_finite() {
        return Err(Error::Unreachable { s, t });
    }
    let mut darts = Vec::new();
    let mut x = b;
    while let Some(d) = parent[x] {
        darts.push(d);
        x = g.origin(d);
    }
    darts.reverse();
    let p = Path::from_darts(g, a, darts)?;
    Ok(if s < t { p } else { p.reversed() })
}
