use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{from_coordinates, Edge, FaceId, PlaneGraph, VertexId};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `size × size` grid.
    Grid,
    /// Staircase half `{(r, c) : c ≥ r}` of a `size × size` grid.
    HalvedGrid,
    /// `size` vertices per ring, `max(2, size / 4)` concentric rings.
    Annulus,
    /// Regular boundary polygon with random interior points inserted into
    /// random triangles; `size` vertices in total.
    RandomTriangulation,
    /// `size × size` grid with one random diagonal per cell.
    RandomWeightsOverlay,
    /// Wheel with two tight groups of terminals on the rim, joined by edges
    /// of weight `gap`.
    SpreadStress,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::BadSpec(format!("unknown family {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightDist {
    Unit,
    /// Uniform on `[1, 10]`.
    Uniform,
    /// Log-uniform on `[1, 10^6]`.
    LogUniform,
}

impl std::str::FromStr for WeightDist {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::BadSpec(format!("unknown weight distribution {s}")))
    }
}

impl WeightDist {
    pub fn sample(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            WeightDist::Unit => 1.0,
            WeightDist::Uniform => rng.gen_range(1.0..=10.0),
            WeightDist::LogUniform => 10f64.powf(rng.gen_range(0.0..=6.0)),
        }
    }
}

/// Where terminals go.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Evenly spaced along the outer face, in walk order.
    Boundary,
    /// Uniformly random vertices.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub size: usize,
    /// Number of terminals.
    pub k: usize,
    pub weights: WeightDist,
    pub seed: u64,
    pub placement: Placement,
    /// Separation weight for the spread-stress family.
    pub gap: f64,
}

impl GeneratorSpec {
    pub fn new(family: Family, size: usize, k: usize) -> Self {
        GeneratorSpec { family, size, k, weights: WeightDist::Unit, seed: 0, placement: Placement::Boundary, gap: 1e6 }
    }

    pub fn weights(mut self, w: WeightDist) -> Self {
        self.weights = w;
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = s;
        self
    }

    pub fn placement(mut self, p: Placement) -> Self {
        self.placement = p;
        self
    }

    pub fn gap(mut self, g: f64) -> Self {
        self.gap = g;
        self
    }
}

/// Builds the instance described by `spec`; deterministic per seed.
///
/// Annuli put half the terminals on each ring, so they have two holes.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (coords, mut edges, fixed) = match spec.family {
        Family::Grid => grid_layout(spec.size, spec.size, false, &mut rng)?,
        Family::RandomWeightsOverlay => grid_layout(spec.size, spec.size, true, &mut rng)?,
        Family::HalvedGrid => halved_grid_layout(spec.size)?,
        Family::Annulus => annulus_layout(spec.size)?,
        Family::RandomTriangulation => triangulation_layout(spec.size, &mut rng)?,
        Family::SpreadStress => spread_layout(spec.size, spec.gap)?,
    };
    if !fixed {
        for e in &mut edges {
            e.w = spec.weights.sample(&mut rng);
        }
    }
    let g = from_coordinates(&coords, edges)?;
    if spec.family == Family::Annulus {
        return annulus_terminals(g, spec);
    }
    match spec.placement {
        Placement::Boundary => {
            let walk = boundary_vertices(&g);
            let terms = spread_pick(&walk, spec.k)?;
            Instance::one_hole(g, terms)
        }
        Placement::Random => {
            if spec.k > g.n() {
                return Err(Error::BadSpec(format!("{} terminals on {} vertices", spec.k, g.n())));
            }
            let mut all: Vec<VertexId> = (0..g.n()).collect();
            all.shuffle(&mut rng);
            all.truncate(spec.k);
            all.sort_unstable();
            Instance::general(g, all)
        }
    }
}

/// Distinct outer-face vertices in walk order.
pub fn boundary_vertices(g: &PlaneGraph) -> Vec<VertexId> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for v in g.outer_walk() {
        if !seen[v] {
            seen[v] = true;
            out.push(v);
        }
    }
    out
}

fn spread_pick(walk: &[VertexId], k: usize) -> Result<Vec<VertexId>> {
    if k > walk.len() {
        return Err(Error::BadSpec(format!("{k} terminals but only {} boundary vertices", walk.len())));
    }
    Ok((0..k).map(|i| walk[i * walk.len() / k]).collect())
}

type Layout = (Vec<(f64, f64)>, Vec<Edge>, bool);

fn grid_layout(rows: usize, cols: usize, diagonals: bool, rng: &mut ChaCha8Rng) -> Result<Layout> {
    if rows < 2 || cols < 2 {
        return Err(Error::BadSpec("grid needs at least 2 × 2 vertices".into()));
    }
    let mut coords = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            coords.push((c as f64, r as f64));
        }
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push(Edge { u: v, v: v + 1, w: 1.0 });
            }
            if r + 1 < rows {
                edges.push(Edge { u: v, v: v + cols, w: 1.0 });
            }
            if diagonals && c + 1 < cols && r + 1 < rows {
                if rng.gen_bool(0.5) {
                    edges.push(Edge { u: v, v: v + cols + 1, w: 1.0 });
                } else {
                    edges.push(Edge { u: v + 1, v: v + cols, w: 1.0 });
                }
            }
        }
    }
    Ok((coords, edges, false))
}

fn halved_grid_layout(side: usize) -> Result<Layout> {
    if side < 3 {
        return Err(Error::BadSpec("halved grid needs side ≥ 3".into()));
    }
    let mut id = vec![usize::MAX; side * side];
    let mut coords = Vec::new();
    for r in 0..side {
        for c in r..side {
            id[r * side + c] = coords.len();
            coords.push((c as f64, -(r as f64)));
        }
    }
    let mut edges = Vec::new();
    for r in 0..side {
        for c in r..side {
            let v = id[r * side + c];
            if c + 1 < side {
                edges.push(Edge { u: v, v: id[r * side + c + 1], w: 1.0 });
            }
            if r + 1 < side && c >= r + 1 {
                edges.push(Edge { u: v, v: id[(r + 1) * side + c], w: 1.0 });
            }
        }
    }
    Ok((coords, edges, false))
}

fn annulus_layout(m: usize) -> Result<Layout> {
    if m < 3 {
        return Err(Error::BadSpec("annulus needs at least 3 vertices per ring".into()));
    }
    let rings = (m / 4).max(2);
    let mut coords = Vec::with_capacity(m * rings);
    for j in 0..rings {
        for i in 0..m {
            let t = 2.0 * PI * i as f64 / m as f64;
            let rad = 1.0 + j as f64;
            coords.push((rad * t.cos(), rad * t.sin()));
        }
    }
    let mut edges = Vec::new();
    for j in 0..rings {
        for i in 0..m {
            let v = j * m + i;
            edges.push(Edge { u: v, v: j * m + (i + 1) % m, w: 1.0 });
            if j + 1 < rings {
                edges.push(Edge { u: v, v: v + m, w: 1.0 });
            }
        }
    }
    Ok((coords, edges, false))
}

fn annulus_terminals(g: PlaneGraph, spec: &GeneratorSpec) -> Result<Instance> {
    let m = spec.size;
    let rings = g.n() / m;
    // the inner hole is the face bounded by ring 0 alone
    let inner: FaceId = (0..g.num_faces())
        .find(|&f| Some(f) != g.outer_face() && g.faces()[f].len() == m && g.faces()[f].iter().all(|&d| g.origin(d) < m))
        .ok_or_else(|| Error::BadSpec("annulus has no inner face".into()))?;
    let outer = g.outer_face().unwrap();
    let k_in = spec.k / 2;
    let k_out = spec.k - k_in;
    if k_out > m {
        return Err(Error::BadSpec(format!("{} terminals on rings of {m}", spec.k)));
    }
    let mut terms = Vec::new();
    let mut faces = Vec::new();
    let outer_ring: Vec<VertexId> = ((rings - 1) * m..rings * m).collect();
    for v in spread_pick(&outer_ring, k_out)? {
        terms.push(v);
        faces.push(outer);
    }
    let inner_ring: Vec<VertexId> = (0..m).collect();
    for v in spread_pick(&inner_ring, k_in)? {
        terms.push(v);
        faces.push(inner);
    }
    Instance::on_faces(g, terms, &faces)
}

fn triangulation_layout(n: usize, rng: &mut ChaCha8Rng) -> Result<Layout> {
    if n < 4 {
        return Err(Error::BadSpec("triangulation needs at least 4 vertices".into()));
    }
    let b = ((2.0 * (n as f64).sqrt()).ceil() as usize).clamp(3, n - 1);
    let mut coords: Vec<(f64, f64)> = (0..b)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / b as f64;
            (t.cos(), t.sin())
        })
        .collect();
    coords.push((0.0, 0.0));
    let hub = b;
    let mut edges = Vec::new();
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for i in 0..b {
        edges.push(Edge { u: i, v: (i + 1) % b, w: 1.0 });
        edges.push(Edge { u: i, v: hub, w: 1.0 });
        tris.push([i, (i + 1) % b, hub]);
    }
    while coords.len() < n {
        let ti = rng.gen_range(0..tris.len());
        let [a, bb, c] = tris[ti];
        let (mut wa, mut wb) = (rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0));
        let mut wc: f64 = rng.gen_range(0.1..1.0);
        let s = wa + wb + wc;
        wa /= s;
        wb /= s;
        wc /= s;
        let p = (
            wa * coords[a].0 + wb * coords[bb].0 + wc * coords[c].0,
            wa * coords[a].1 + wb * coords[bb].1 + wc * coords[c].1,
        );
        let v = coords.len();
        coords.push(p);
        for &u in &[a, bb, c] {
            edges.push(Edge { u, v, w: 1.0 });
        }
        tris[ti] = [a, bb, v];
        tris.push([bb, c, v]);
        tris.push([c, a, v]);
    }
    Ok((coords, edges, false))
}

fn spread_layout(r: usize, gap: f64) -> Result<Layout> {
    if r < 4 {
        return Err(Error::BadSpec("spread-stress needs r ≥ 4".into()));
    }
    if !(gap >= 1.0) {
        return Err(Error::BadSpec("gap must be at least 1".into()));
    }
    let mut coords: Vec<(f64, f64)> = (0..r)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / r as f64;
            (t.cos(), t.sin())
        })
        .collect();
    coords.push((0.0, 0.0));
    let half = r / 2;
    let mut edges = Vec::new();
    for i in 0..r {
        let j = (i + 1) % r;
        let across = (i + 1 == half) || j == 0;
        edges.push(Edge { u: i, v: j, w: if across { gap } else { 1.0 } });
        edges.push(Edge { u: i, v: r, w: gap });
    }
    Ok((coords, edges, true))
}
