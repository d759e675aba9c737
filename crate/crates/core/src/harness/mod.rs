//! Instance generators, an independent exact oracle, emulator verification,
//! and benchmark suites.

pub mod generators;
pub mod oracle;
pub mod suite;
pub mod verify;

pub use generators::{boundary_vertices, generate, Family, GeneratorSpec, Placement, WeightDist};
pub use oracle::exact_oracle;
pub use suite::{run_case, suite, BenchRow, SuiteCase};
pub use verify::{verify_emulator, VerificationReport, WorstPair};
