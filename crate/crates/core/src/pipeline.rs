//! Top-level constructions: size reduction over an r-division, the iterated
//! planar emulator, the bootstrap cascade, and a terminal distance oracle.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::division::{r_division_with, DivisionParams};
use crate::error::{Error, Result};
use crate::graph::{DistMatrix, Edge, PlaneGraph, VertexId};
use crate::instance::Instance;
use crate::multihole::multi_hole_emulator_with;
use crate::onehole::{max_log_distortion, one_hole_emulator_with, EmulatorParams, EmulatorReport, StageRecord};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub eps: f64,
    /// Iterations of the main loop; `None` means `⌈log₂ log₂ k⌉`.
    pub iterations: Option<usize>,
    /// Exponent `a` of the bootstrap r-schedule `(log log log n)^a, (log log n)^a, (log n)^a`.
    pub bootstrap_a: f64,
    /// Bootstrap requires `k ≤ n / log₂^D n`.
    pub bootstrap_d: f64,
    pub emulator: EmulatorParams,
    pub division: DivisionParams,
}

impl PipelineConfig {
    pub fn with_eps(eps: f64) -> Self {
        PipelineConfig {
            eps,
            iterations: None,
            bootstrap_a: 2.0,
            bootstrap_d: 1.0,
            emulator: EmulatorParams::with_eps(eps),
            division: DivisionParams::default(),
        }
    }

    /// `L` for `k` terminals.
    pub fn iterations_for(&self, k: usize) -> usize {
        self.iterations.unwrap_or_else(|| {
            let lg = (k.max(4) as f64).log2().log2();
            (lg.ceil() as usize).max(1)
        })
    }

    /// Strictly increasing bootstrap r values for `n` vertices, each at least 16.
    pub fn bootstrap_schedule(&self, n: usize) -> Vec<usize> {
        let l1 = (n.max(2) as f64).log2();
        let l2 = l1.max(2.0).log2();
        let l3 = l2.max(2.0).log2();
        let mut out: Vec<usize> = Vec::new();
        for x in [l3, l2, l1] {
            let r = (x.max(1.0).powf(self.bootstrap_a).ceil() as usize).max(16);
            if out.last().map_or(true, |&p| r > p) {
                out.push(r);
            }
        }
        out
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::BadSpec(format!("eps must be finite and non-negative, got {eps}")))
    }
}

/// Emulator of one piece: the multi-hole emulator when it is smaller than
/// the suppressed piece itself, else the suppressed piece.
fn piece_emulator(inst: &Instance, params: &EmulatorParams) -> Result<Instance> {
    let exact = inst.suppressed()?;
    if exact.k() < 2 || exact.n() <= exact.k() {
        return Ok(exact);
    }
    match multi_hole_emulator_with(&exact, params) {
        Ok((out, _)) if out.n() < exact.n() => Ok(out),
        _ => Ok(exact),
    }
}

/// r-division at `r`, one emulator per piece at `eps`, glued at the
/// boundary vertices, then degree-2 suppression.
pub fn size_reduction_at(inst: &Instance, r: usize, eps: f64, cfg: &PipelineConfig) -> Result<Instance> {
    check_eps(eps)?;
    let div = r_division_with(inst, r.max(16), &cfg.division)?;
    let params = EmulatorParams { eps, ..cfg.emulator.clone() };
    let parts: Vec<Result<Instance>> = div
        .pieces
        .par_iter()
        .map(|p| piece_emulator(&p.instance(inst)?, &params))
        .collect();
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    div.glue(inst, &parts)?.suppressed()
}

/// Piece size of the size-reduction step, `⌈n / k⌉`.
pub fn reduction_r(inst: &Instance) -> usize {
    inst.n().div_ceil(inst.k().max(1)).max(16)
}

fn stage(name: String, budget: f64, before: &Instance, after: &Instance) -> StageRecord {
    StageRecord {
        name,
        budget,
        measured: max_log_distortion(before.distances(), after.distances()),
        vertices_in: before.n(),
        vertices_out: after.n(),
        terminals: before.k(),
    }
}

fn finish(mode: &str, eps: f64, inst: &Instance, out: Instance, stages: Vec<StageRecord>) -> Result<(Instance, EmulatorReport)> {
    let measured = max_log_distortion(inst.distances(), out.distances());
    if measured > eps * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::DistortionBudgetExceeded { measured, budget: eps });
    }
    let report = EmulatorReport {
        mode: mode.into(),
        eps,
        terminals: inst.k(),
        input_vertices: inst.n(),
        input_edges: inst.graph.m(),
        output_vertices: out.n(),
        output_edges: out.graph.m(),
        depth: stages.len(),
        max_distortion: measured,
        stages,
        tree: None,
    };
    Ok((out, report))
}

pub fn size_reduction(inst: &Instance, eps: f64) -> Result<(Instance, EmulatorReport)> {
    let cfg = PipelineConfig::with_eps(eps);
    let out = size_reduction_at(inst, reduction_r(inst), eps, &cfg)?;
    let st = vec![stage("reduce".into(), eps, inst, &out)];
    finish("reduce", eps, inst, out, st)
}

pub fn planar_emulator(inst: &Instance, eps: f64) -> Result<(Instance, EmulatorReport)> {
    planar_emulator_with(inst, &PipelineConfig::with_eps(eps))
}

/// Terminals anywhere. When `n ≥ k²` one extra reduction at `ε/2` runs
/// first; then `L` reductions at `ε/2L` each. A round that does not shrink
/// the instance is dropped.
pub fn planar_emulator_with(inst: &Instance, cfg: &PipelineConfig) -> Result<(Instance, EmulatorReport)> {
    let eps = cfg.eps;
    check_eps(eps)?;
    let k = inst.k();
    let mut stages = Vec::new();
    let mut cur = inst.suppressed()?;
    if k < 2 {
        return finish("general", eps, inst, cur, stages);
    }
    if inst.n() >= k * k {
        let next = size_reduction_at(&cur, reduction_r(&cur), eps / 2.0, cfg)?;
        stages.push(stage("preprocess".into(), eps / 2.0, &cur, &next));
        if next.n() < cur.n() {
            cur = next;
        }
    }
    let l = cfg.iterations_for(k);
    let step = eps / (2 * l) as f64;
    for i in 0..l {
        let next = size_reduction_at(&cur, reduction_r(&cur), step, cfg)?;
        stages.push(stage(format!("iter-{}", i + 1), step, &cur, &next));
        if next.n() < cur.n() {
            cur = next;
        }
    }
    finish("general", eps, inst, cur, stages)
}

/// Each weight moved to the nearest power of `base`.
pub fn round_weights(g: &PlaneGraph, base: f64) -> Result<PlaneGraph> {
    let lb = base.ln();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| {
            let w = if e.w > 0.0 && lb > 0.0 { base.powf((e.w.ln() / lb).round()) } else { e.w };
            Edge { w, ..*e }
        })
        .collect();
    let mut out = PlaneGraph::new(edges, g.rotations().to_vec(), g.outer_dart(), true)?;
    out.set_labels(g.labels().to_vec());
    Ok(out)
}

pub fn bootstrap_emulator(inst: &Instance, eps: f64) -> Result<(Instance, EmulatorReport)> {
    bootstrap_emulator_with(inst, &PipelineConfig::with_eps(eps))
}

/// Weights rounded to powers of `1 + ε/8`, then one reduction per r in the
/// schedule and a final reduction at `n/k`. The rounding takes its worst
/// case `ln(1 + ε/8)/2`; the reduction stages share the rest equally.
pub fn bootstrap_emulator_with(inst: &Instance, cfg: &PipelineConfig) -> Result<(Instance, EmulatorReport)> {
    let eps = cfg.eps;
    check_eps(eps)?;
    let n = inst.n();
    let k = inst.k();
    let bound = (n as f64 / (n.max(2) as f64).log2().powf(cfg.bootstrap_d)).floor() as usize;
    if k > bound {
        return Err(Error::PreconditionKTooLarge { k, bound });
    }
    let mut stages = Vec::new();
    let round_budget = (1.0 + eps / 8.0).ln() / 2.0;
    let rounded = Instance::new(round_weights(&inst.graph, 1.0 + eps / 8.0)?, inst.terminals.clone(), inst.corners.clone())?;
    stages.push(stage("round".into(), round_budget, inst, &rounded));
    let schedule = cfg.bootstrap_schedule(n);
    let share = (eps - round_budget).max(0.0) / (schedule.len() + 1) as f64;
    let mut cur = rounded.suppressed()?;
    for r in schedule {
        let next = size_reduction_at(&cur, r, share, cfg)?;
        stages.push(stage(format!("cascade-r{r}"), share, &cur, &next));
        if next.n() < cur.n() {
            cur = next;
        }
    }
    let next = size_reduction_at(&cur, reduction_r(&cur), share, cfg)?;
    stages.push(stage("final".into(), share, &cur, &next));
    if next.n() < cur.n() {
        cur = next;
    }
    finish("bootstrap", eps, inst, cur, stages)
}

/// Emulator plus its all-pairs terminal table.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    pub emulator: Instance,
    pub report: EmulatorReport,
    index: HashMap<VertexId, usize>,
    table: DistMatrix,
}

pub fn build_oracle(inst: &Instance, eps: f64) -> Result<DistanceOracle> {
    build_oracle_with(inst, &EmulatorParams::with_eps(eps))
}

/// One-hole emulator of `inst`; queries name terminals by their input
/// vertex id.
pub fn build_oracle_with(inst: &Instance, params: &EmulatorParams) -> Result<DistanceOracle> {
    let (emulator, report) = one_hole_emulator_with(inst, params)?;
    let table = emulator.distances().clone();
    let index = inst.terminals.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    Ok(DistanceOracle { emulator, report, index, table })
}

impl DistanceOracle {
    pub fn query(&self, t: VertexId, t2: VertexId) -> Result<f64> {
        let i = *self.index.get(&t).ok_or(Error::UnknownTerminal(t))?;
        let j = *self.index.get(&t2).ok_or(Error::UnknownTerminal(t2))?;
        Ok(if i == j { 0.0 } else { self.table.get(i, j) })
    }

    pub fn k(&self) -> usize {
        self.index.len()
    }
}

/// Which construction [`emulate`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    OneHole,
    MultiHole,
    General,
    Bootstrap,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "onehole" => Ok(Mode::OneHole),
            "multihole" => Ok(Mode::MultiHole),
            "general" => Ok(Mode::General),
            "bootstrap" => Ok(Mode::Bootstrap),
            _ => Err(Error::BadSpec(format!("unknown mode {s}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::OneHole => "onehole",
            Mode::MultiHole => "multihole",
            Mode::General => "general",
            Mode::Bootstrap => "bootstrap",
        })
    }
}

pub fn emulate(inst: &Instance, eps: f64, mode: Mode) -> Result<(Instance, EmulatorReport)> {
    match mode {
        Mode::OneHole => crate::onehole::one_hole_emulator(inst, eps),
        Mode::MultiHole => crate::multihole::multi_hole_emulator(inst, eps),
        Mode::General => planar_emulator(inst, eps),
        Mode::Bootstrap => bootstrap_emulator(inst, eps),
    }
}
