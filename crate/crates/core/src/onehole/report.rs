use serde::{Deserialize, Serialize};

use crate::graph::DistMatrix;

use super::decompose::ContractStats;

/// Largest `|ln(d_b / d_a)|` over terminal pairs.
///
/// Two zeros or two infinities count as exact; a zero or infinity on one
/// side only gives infinity.
pub fn max_log_distortion(a: &DistMatrix, b: &DistMatrix) -> f64 {
    assert_eq!(a.k, b.k, "terminal counts differ");
    let mut worst: f64 = 0.0;
    for i in 0..a.k {
        for j in i + 1..a.k {
            worst = worst.max(pair_distortion(a.get(i, j), b.get(i, j)));
        }
    }
    worst
}

pub fn pair_distortion(x: f64, y: f64) -> f64 {
    if x == y {
        return 0.0;
    }
    if x == 0.0 || y == 0.0 || !x.is_finite() || !y.is_finite() {
        return f64::INFINITY;
    }
    (y / x).ln().abs()
}

/// One node of the partitioning tree.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub terminals: usize,
    pub vertices: usize,
    /// `base`, `small`, `large:<case>`, `cut`, or `fallback`.
    pub kind: String,
    /// Distortion budget handed to this node.
    pub budget: f64,
    /// Distortion measured for this node's own split.
    pub delta: f64,
    pub eps_r: Option<f64>,
    /// Size of the emulator returned for this node.
    pub output_vertices: usize,
    /// Piece sizes of this node's decomposition, if it made one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contract: Option<ContractStats>,
    pub children: Vec<StepRecord>,
}

impl StepRecord {
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn nodes(&self) -> usize {
        1 + self.children.iter().map(|c| c.nodes()).sum::<usize>()
    }

    /// All nodes in preorder.
    pub fn preorder(&self) -> Vec<&StepRecord> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.preorder());
        }
        out
    }

    pub fn leaves(&self) -> Vec<&StepRecord> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }
}

/// A named stage of a multi-stage construction with its share of ε.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub budget: f64,
    pub measured: f64,
    pub vertices_in: usize,
    pub vertices_out: usize,
    pub terminals: usize,
}

/// Summary of an emulator construction.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EmulatorReport {
    pub mode: String,
    pub eps: f64,
    pub terminals: usize,
    pub input_vertices: usize,
    pub input_edges: usize,
    pub output_vertices: usize,
    pub output_edges: usize,
    pub depth: usize,
    /// Measured `max |ln(d_emulator / d_input)|` over terminal pairs.
    pub max_distortion: f64,
    pub stages: Vec<StageRecord>,
    pub tree: Option<StepRecord>,
}

impl EmulatorReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Sum of the stage budgets.
    pub fn budget_total(&self) -> f64 {
        self.stages.iter().map(|s| s.budget).sum()
    }
}
