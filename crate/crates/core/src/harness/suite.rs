//! Fixed benchmark suites and their CSV rows.

use std::time::Instant;

use serde::Serialize;

use super::generators::{generate, Family, GeneratorSpec, Placement, WeightDist};
use super::verify::verify_emulator;
use crate::error::{Error, Result};
use crate::pipeline::{emulate, Mode};

#[derive(Clone, Debug)]
pub struct SuiteCase {
    pub spec: GeneratorSpec,
    pub eps: f64,
    pub mode: Mode,
}

impl SuiteCase {
    fn new(family: Family, size: usize, k: usize, placement: Placement, eps: f64, mode: Mode) -> Self {
        let spec = GeneratorSpec::new(family, size, k).weights(WeightDist::Uniform).placement(placement).seed(1);
        SuiteCase { spec, eps, mode }
    }
}

/// `quick` runs in about a second, `default` in a few seconds (release).
pub fn suite(name: &str) -> Result<Vec<SuiteCase>> {
    use Family::*;
    use Mode::*;
    use Placement::*;
    let quick = vec![
        SuiteCase::new(Grid, 16, 16, Boundary, 0.25, OneHole),
        SuiteCase::new(Annulus, 12, 12, Boundary, 0.25, MultiHole),
        SuiteCase::new(RandomTriangulation, 500, 16, Random, 0.25, General),
    ];
    match name {
        "quick" => Ok(quick),
        "default" => Ok(vec![
            SuiteCase::new(Grid, 64, 64, Boundary, 0.25, OneHole),
            SuiteCase::new(RandomWeightsOverlay, 32, 32, Boundary, 0.25, OneHole),
            SuiteCase::new(SpreadStress, 16, 16, Boundary, 0.25, OneHole),
            SuiteCase::new(Annulus, 32, 32, Boundary, 0.25, MultiHole),
            SuiteCase::new(Grid, 48, 32, Random, 0.25, General),
            SuiteCase::new(RandomTriangulation, 5000, 128, Random, 0.25, General),
            SuiteCase::new(Grid, 48, 16, Random, 0.5, Bootstrap),
        ]),
        _ => Err(Error::BadSpec(format!("unknown suite {name}"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    pub mode: Mode,
    /// Emulator vertex count.
    pub size: usize,
    pub max_distortion: f64,
    pub seconds: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "family,n,k,eps,mode,size,max_distortion,time";

    pub fn csv(&self) -> String {
        let family = serde_json::to_value(self.family).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{:.6},{:.3}",
            family, self.n, self.k, self.eps, self.mode, self.size, self.max_distortion, self.seconds
        )
    }
}

/// Generates, emulates (timed), and verifies against the exact oracle.
pub fn run_case(case: &SuiteCase) -> Result<BenchRow> {
    let inst = generate(&case.spec)?;
    let start = Instant::now();
    let (emu, _) = emulate(&inst, case.eps, case.mode)?;
    let seconds = start.elapsed().as_secs_f64();
    let rep = verify_emulator(&inst, &emu, case.eps)?;
    Ok(BenchRow {
        family: case.spec.family,
        n: inst.n(),
        k: inst.k(),
        eps: case.eps,
        mode: case.mode,
        size: emu.n(),
        max_distortion: rep.max_distortion,
        seconds,
    })
}
