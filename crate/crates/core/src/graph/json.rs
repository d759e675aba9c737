use serde::{Deserialize, Serialize};

use super::{Edge, PlaneGraph};
use crate::error::Result;

/// Canonical on-disk form of a plane graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub rotations: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outerface_dart: Option<usize>,
}

impl GraphJson {
    pub fn from_graph(g: &PlaneGraph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
            rotations: g.rotations().to_vec(),
            outerface_dart: g.outer_dart(),
        }
    }

    pub fn to_graph(&self, allow_disconnected: bool) -> Result<PlaneGraph> {
        if self.rotations.len() != self.n {
            return Err(crate::Error::MalformedRotation(format!(
                "{} rotations for {} vertices",
                self.rotations.len(),
                self.n
            )));
        }
        let edges = self.edges.iter().map(|&(u, v, w)| Edge { u, v, w }).collect();
        PlaneGraph::new(edges, self.rotations.clone(), self.outerface_dart, allow_disconnected)
    }
}

impl PlaneGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from_graph(self)).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<PlaneGraph> {
        let j: GraphJson = serde_json::from_str(s)?;
        j.to_graph(false)
    }
}
