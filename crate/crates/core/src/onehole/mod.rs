//! Emulators for instances whose terminals all lie on the outer face.

pub mod base;
pub mod cover;
pub mod cutvertex;
pub mod decompose;
pub mod emulator;
pub mod hierarchy;
pub mod large;
pub mod params;
pub mod paths;
pub mod plan;
pub mod report;
pub mod small;
pub mod split;

pub use base::base_zero_emulator;
pub use cover::{eps_cover, eps_cover_union, validates_cover};
pub use cutvertex::remove_cut_vertices;
pub use decompose::{decompose_step, measured_distortion, refine_portals, ContractStats, Decomposition};
pub use emulator::{one_hole_emulator, one_hole_emulator_with};
pub use hierarchy::{build_cluster_hierarchy, hierarchy_from_distances, Cluster, ClusterHierarchy};
pub use large::{border_pairs, large_spread_step, pull_terminals, LargeCase};
pub use params::EmulatorParams;
pub use paths::{noncrossing_shortest_paths, pairs_cross};
pub use plan::{glue, CombinePlan, CopyLink, GlueSpec};
pub use report::{max_log_distortion, EmulatorReport, StageRecord, StepRecord};
pub use small::{closest_balanced_pair, exponential_portals, small_spread_step, StepPieces};
pub use split::{split, PathSet};

#[cfg(test)]
mod tests;
