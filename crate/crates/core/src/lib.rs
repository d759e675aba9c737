//! Distance emulators for edge-weighted planar graphs with terminals.
//!
//! The crate builds graphs whose terminal distances approximate those of an
//! input plane graph within a factor `e^ε` while having far fewer vertices.

pub mod division;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instance;
pub mod multihole;
pub mod onehole;
pub mod pipeline;

pub use error::{Error, Result};
pub use graph::{DartId, DistMatrix, Edge, FaceId, Path, PlaneGraph, VertexId};
pub use instance::{Instance, MultiHoleInstance, OneHoleInstance};
pub use multihole::multi_hole_emulator;
pub use onehole::{one_hole_emulator, EmulatorParams, EmulatorReport};
