use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_terminal_distances, suppress_degree_two, DartId, DistMatrix, FaceId, GraphJson, PlaneGraph, VertexId};

/// A plane graph with an ordered terminal list.
///
/// Each terminal may carry a corner: the dart after which (counter-clockwise)
/// the terminal meets its hole. The face holding the corner is the terminal's
/// hole. One-hole instances have every corner on the outer face.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: PlaneGraph,
    pub terminals: Vec<VertexId>,
    pub corners: Vec<Option<DartId>>,
    dist: OnceLock<DistMatrix>,
}

pub type OneHoleInstance = Instance;
pub type MultiHoleInstance = Instance;

impl Instance {
    pub fn new(graph: PlaneGraph, terminals: Vec<VertexId>, corners: Vec<Option<DartId>>) -> Result<Self> {
        if corners.len() != terminals.len() {
            return Err(Error::InvalidInstance("one corner per terminal required".into()));
        }
        let mut seen = vec![false; graph.n()];
        for (i, &t) in terminals.iter().enumerate() {
            if t >= graph.n() {
                return Err(Error::UnknownTerminal(t));
            }
            if seen[t] {
                return Err(Error::InvalidInstance(format!("terminal {t} listed twice")));
            }
            seen[t] = true;
            match corners[i] {
                Some(d) if d >= graph.num_darts() || graph.origin(d) != t => {
                    return Err(Error::InvalidInstance(format!("corner {d} does not leave terminal {t}")));
                }
                None if graph.degree(t) > 0 => {
                    return Err(Error::InvalidInstance(format!("terminal {t} has no corner")));
                }
                _ => {}
            }
        }
        Ok(Instance { graph, terminals, corners, dist: OnceLock::new() })
    }

    /// Terminals on the outer face, each given its first corner on the outer walk.
    pub fn one_hole(graph: PlaneGraph, terminals: Vec<VertexId>) -> Result<Self> {
        let mut first = vec![None; graph.n()];
        if let Some(f) = graph.outer_face() {
            for &d in &graph.faces()[f] {
                let v = graph.origin(d);
                if first[v].is_none() {
                    first[v] = Some(d);
                }
            }
        }
        let mut corners = Vec::with_capacity(terminals.len());
        for &t in &terminals {
            if t >= graph.n() {
                return Err(Error::UnknownTerminal(t));
            }
            if first[t].is_none() && graph.degree(t) > 0 {
                return Err(Error::InvalidInstance(format!("terminal {t} is not on the outer face")));
            }
            corners.push(first[t]);
        }
        Instance::new(graph, terminals, corners)
    }

    /// Terminals anywhere; those on the outer face get an outer corner.
    pub fn general(graph: PlaneGraph, terminals: Vec<VertexId>) -> Result<Self> {
        let mut first = vec![None; graph.n()];
        if let Some(f) = graph.outer_face() {
            for &d in &graph.faces()[f] {
                let v = graph.origin(d);
                if first[v].is_none() {
                    first[v] = Some(d);
                }
            }
        }
        let corners = terminals
            .iter()
            .map(|&t| {
                if t >= graph.n() {
                    return None;
                }
                first[t].or_else(|| graph.rotation(t).first().copied())
            })
            .collect();
        Instance::new(graph, terminals, corners)
    }

    /// Terminal `i` gets its first corner on the walk of face `faces[i]`.
    pub fn on_faces(graph: PlaneGraph, terminals: Vec<VertexId>, faces: &[FaceId]) -> Result<Self> {
        if faces.len() != terminals.len() {
            return Err(Error::InvalidInstance("one face per terminal required".into()));
        }
        let mut corners = Vec::with_capacity(terminals.len());
        for (&t, &f) in terminals.iter().zip(faces) {
            if t >= graph.n() {
                return Err(Error::UnknownTerminal(t));
            }
            let c = graph.faces().get(f).and_then(|w| w.iter().copied().find(|&d| graph.origin(d) == t));
            if c.is_none() && graph.degree(t) > 0 {
                return Err(Error::InvalidInstance(format!("terminal {t} is not on face {f}")));
            }
            corners.push(c);
        }
        Instance::new(graph, terminals, corners)
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Exact terminal distance matrix, computed once.
    pub fn distances(&self) -> &DistMatrix {
        self.dist.get_or_init(|| all_terminal_distances(&self.graph, &self.terminals))
    }

    pub fn spread(&self) -> f64 {
        self.distances().spread()
    }

    /// Hole face of terminal `i`, if it has a corner.
    pub fn hole_of(&self, i: usize) -> Option<FaceId> {
        self.corners[i].map(|d| self.graph.face_of(d))
    }

    /// Distinct hole faces, in order of first terminal.
    pub fn holes(&self) -> Vec<FaceId> {
        let mut out = Vec::new();
        for i in 0..self.k() {
            if let Some(f) = self.hole_of(i) {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        out
    }

    pub fn is_one_hole(&self) -> bool {
        let outer = self.graph.outer_face();
        (0..self.k()).all(|i| self.corners[i].is_none() || self.hole_of(i) == outer)
    }

    /// Position of each terminal's corner along the walk of its hole.
    pub fn hole_positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.graph.num_darts()];
        for walk in self.graph.faces() {
            for (i, &d) in walk.iter().enumerate() {
                pos[d] = i;
            }
        }
        self.corners.iter().map(|c| c.map_or(0, |d| pos[d])).collect()
    }

    /// Terminal indices of each hole in circular order along the hole walk.
    pub fn hole_orders(&self) -> Vec<Vec<usize>> {
        let pos = self.hole_positions();
        self.holes()
            .into_iter()
            .map(|f| {
                let mut ids: Vec<usize> = (0..self.k()).filter(|&i| self.hole_of(i) == Some(f)).collect();
                ids.sort_by_key(|&i| pos[i]);
                ids
            })
            .collect()
    }

    /// Whether the terminal indices appear in circular order `0, 1, …, k−1`
    /// (up to rotation) along the outer face.
    pub fn is_walk_ordered(&self) -> bool {
        let pos = self.hole_positions();
        let k = self.k();
        if k < 3 {
            return true;
        }
        let descents = (0..k).filter(|&i| pos[(i + 1) % k] < pos[i]).count();
        descents <= 1
    }

    /// Reorders terminals by their position on the outer walk; returns the
    /// instance and the old index of every new terminal.
    pub fn sorted_by_walk(self) -> (Instance, Vec<usize>) {
        let pos = self.hole_positions();
        let mut idx: Vec<usize> = (0..self.k()).collect();
        idx.sort_by_key(|&i| (pos[i], i));
        let terminals = idx.iter().map(|&i| self.terminals[i]).collect();
        let corners = idx.iter().map(|&i| self.corners[i]).collect();
        let inst = Instance { graph: self.graph, terminals, corners, dist: OnceLock::new() };
        (inst, idx)
    }

    /// Reorders terminals so that new terminal `i` is old terminal `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Instance {
        let terminals = order.iter().map(|&i| self.terminals[i]).collect();
        let corners = order.iter().map(|&i| self.corners[i]).collect();
        Instance { graph: self.graph.clone(), terminals, corners, dist: OnceLock::new() }
    }

    /// Suppresses degree-2 non-terminal vertices.
    pub fn suppressed(&self) -> Result<Instance> {
        let mut keep = vec![false; self.graph.n()];
        for &t in &self.terminals {
            keep[t] = true;
        }
        let s = suppress_degree_two(&self.graph, &keep)?;
        let terminals = self.terminals.iter().map(|&t| s.vertex_map[t].unwrap()).collect();
        let corners = self.corners.iter().map(|c| c.and_then(|d| s.dart_map[d])).collect();
        Instance::new(s.graph, terminals, corners)
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            graph: GraphJson::from_graph(&self.graph),
            terminals: self.terminals.clone(),
            corners: Some(self.corners.clone()),
            holes: Some(
                self.hole_orders().into_iter().map(|h| h.into_iter().map(|i| self.terminals[i]).collect()).collect(),
            ),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("instance serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Instance> {
        let j: InstanceJson = serde_json::from_str(s)?;
        j.into_instance()
    }
}

/// Graph JSON extended with terminals and their hole corners.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    #[serde(default)]
    pub terminals: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corners: Option<Vec<Option<DartId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes: Option<Vec<Vec<VertexId>>>,
}

impl InstanceJson {
    pub fn into_instance(self) -> Result<Instance> {
        let g = self.graph.to_graph(false)?;
        match self.corners {
            Some(c) => Instance::new(g, self.terminals, c),
            None => Instance::general(g, self.terminals),
        }
    }
}
