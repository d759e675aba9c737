use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{assemble, gap_owner, GlueCopy};
use crate::instance::Instance;

/// A terminal of a part that is identified with copies in other parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyLink {
    pub part: usize,
    pub terminal: usize,
    /// Cyclic position of this copy around the merged vertex.
    pub anchor: usize,
}

/// How to identify terminal copies of several parts into one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueSpec {
    pub groups: Vec<Vec<CopyLink>>,
    /// For every terminal of the result: its group and the key of its corner
    /// in the same cyclic coordinates as the anchors.
    pub terminals: Vec<(usize, usize)>,
    /// Result terminals whose outer corner follows the picked copy's corner
    /// counter-clockwise instead of being that corner.
    #[serde(default)]
    pub inner: Vec<usize>,
}

/// Recipe rebuilding an instance from emulators of its pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CombinePlan {
    Leaf(usize),
    Glue { parts: Vec<CombinePlan>, spec: GlueSpec },
    /// The child was built with pendant edges of the given weights hung on
    /// some terminals; its emulator is used unchanged.
    Pulled { pulled: Vec<(usize, f64)>, child: Box<CombinePlan> },
}

impl CombinePlan {
    pub fn identity() -> Self {
        CombinePlan::Leaf(0)
    }

    /// Number of leaves referenced.
    pub fn leaves(&self) -> usize {
        match self {
            CombinePlan::Leaf(i) => i + 1,
            CombinePlan::Glue { parts, .. } => parts.iter().map(|p| p.leaves()).max().unwrap_or(0),
            CombinePlan::Pulled { child, .. } => child.leaves(),
        }
    }

    /// Renumbers leaves through `f`.
    pub fn map_leaves(self, f: &dyn Fn(usize) -> CombinePlan) -> CombinePlan {
        match self {
            CombinePlan::Leaf(i) => f(i),
            CombinePlan::Glue { parts, spec } => {
                CombinePlan::Glue { parts: parts.into_iter().map(|p| p.map_leaves(f)).collect(), spec }
            }
            CombinePlan::Pulled { pulled, child } => {
                CombinePlan::Pulled { pulled, child: Box::new(child.map_leaves(f)) }
            }
        }
    }

    pub fn apply(&self, leaves: &[Instance]) -> Result<Instance> {
        match self {
            CombinePlan::Leaf(i) => leaves
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::InconsistentCopyLabels(format!("missing leaf {i}"))),
            CombinePlan::Glue { parts, spec } => {
                let built = parts.iter().map(|p| p.apply(leaves)).collect::<Result<Vec<_>>>()?;
                glue(&built, spec)
            }
            CombinePlan::Pulled { child, .. } => child.apply(leaves),
        }
    }

    /// Total pendant weight per terminal over all pulls in the plan.
    pub fn pulled_weight(&self) -> f64 {
        match self {
            CombinePlan::Leaf(_) => 0.0,
            CombinePlan::Glue { parts, .. } => parts.iter().map(|p| p.pulled_weight()).fold(0.0, f64::max),
            CombinePlan::Pulled { pulled, child } => {
                pulled.iter().map(|p| p.1).fold(0.0, f64::max) + child.pulled_weight()
            }
        }
    }
}

/// Identifies the linked terminal copies of `parts`.
pub fn glue(parts: &[Instance], spec: &GlueSpec) -> Result<Instance> {
    let graphs: Vec<&crate::graph::PlaneGraph> = parts.iter().map(|p| &p.graph).collect();
    let mut groups = Vec::with_capacity(spec.groups.len());
    for (gi, grp) in spec.groups.iter().enumerate() {
        let mut out = Vec::with_capacity(grp.len());
        for l in grp {
            let p = parts
                .get(l.part)
                .ok_or_else(|| Error::InconsistentCopyLabels(format!("group {gi} names part {}", l.part)))?;
            if l.terminal >= p.k() {
                return Err(Error::InconsistentCopyLabels(format!(
                    "group {gi} names terminal {} of a part with {}",
                    l.terminal,
                    p.k()
                )));
            }
            out.push(GlueCopy {
                part: l.part,
                vertex: p.terminals[l.terminal],
                corner: p.corners[l.terminal],
                anchor: l.anchor,
            });
        }
        groups.push(out);
    }
    let mut sorted: Vec<Vec<GlueCopy>> = groups.clone();
    for g in &mut sorted {
        g.sort_by_key(|c| c.anchor);
    }
    // corner of each result terminal, as (part, dart) before renumbering
    let mut picks = Vec::with_capacity(spec.terminals.len());
    for (ti, &(gi, key)) in spec.terminals.iter().enumerate() {
        let grp = sorted
            .get(gi)
            .ok_or_else(|| Error::InconsistentCopyLabels(format!("terminal names group {gi}")))?;
        let anchors: Vec<usize> = grp.iter().map(|c| c.anchor).collect();
        let start = gap_owner(&anchors, key);
        let mut pick = None;
        for step in 0..grp.len() {
            let c = &grp[(start + grp.len() - step) % grp.len()];
            if let Some(d) = c.corner {
                let d = if spec.inner.contains(&ti) { parts[c.part].graph.rot_next(d) } else { d };
                pick = Some((c.part, d));
                break;
            }
        }
        picks.push(pick);
    }
    let hint = picks.iter().flatten().next().copied();
    let a = assemble(&graphs, &groups, hint)?;
    let terminals = spec.terminals.iter().map(|&(gi, _)| a.group_vertex[gi]).collect();
    let corners = picks.iter().map(|p| p.map(|(part, d)| a.dart_map[part][d])).collect();
    Instance::new(a.graph, terminals, corners)
}
