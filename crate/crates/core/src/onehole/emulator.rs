use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;

use super::base::base_zero_emulator;
use super::decompose::decompose_step;
use super::params::EmulatorParams;
use super::report::{max_log_distortion, EmulatorReport, StageRecord, StepRecord};

/// Aligned emulator of a one-hole instance with distortion at most `e^eps`.
pub fn one_hole_emulator(inst: &Instance, eps: f64) -> Result<(Instance, EmulatorReport)> {
    one_hole_emulator_with(inst, &EmulatorParams::with_eps(eps))
}

pub fn one_hole_emulator_with(inst: &Instance, params: &EmulatorParams) -> Result<(Instance, EmulatorReport)> {
    if !(params.eps >= 0.0 && params.eps.is_finite()) {
        return Err(Error::BadSpec(format!("eps must be finite and non-negative, got {}", params.eps)));
    }
    if !inst.is_one_hole() {
        return Err(Error::InvalidInstance("terminals are not all on the outer face".into()));
    }
    let lambda = params.lambda_star(inst.k());
    let (out, tree) = build(inst, params, params.eps, lambda)?;
    let measured = max_log_distortion(inst.distances(), out.distances());
    if measured > params.eps * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::DistortionBudgetExceeded { measured, budget: params.eps });
    }
    let report = EmulatorReport {
        mode: "onehole".into(),
        eps: params.eps,
        terminals: inst.k(),
        input_vertices: inst.n(),
        input_edges: inst.graph.m(),
        output_vertices: out.n(),
        output_edges: out.graph.m(),
        depth: tree.depth(),
        max_distortion: measured,
        stages: vec![StageRecord {
            name: "onehole".into(),
            budget: params.eps,
            measured,
            vertices_in: inst.n(),
            vertices_out: out.n(),
            terminals: inst.k(),
        }],
        tree: Some(tree),
    };
    Ok((out, report))
}

fn base(inst: &Instance, budget: f64, kind: &str) -> Result<(Instance, StepRecord)> {
    let out = base_zero_emulator(inst)?;
    let rec = StepRecord {
        terminals: inst.k(),
        vertices: inst.n(),
        kind: kind.into(),
        budget,
        delta: 0.0,
        eps_r: None,
        output_vertices: out.n(),
        contract: None,
        children: Vec::new(),
    };
    Ok((out, rec))
}

/// Two-stage recursion: decompose until pieces are small, solve them
/// exactly, and combine bottom-up.
fn build(inst: &Instance, params: &EmulatorParams, budget: f64, lambda: usize) -> Result<(Instance, StepRecord)> {
    if inst.k() <= lambda || inst.k() < 4 {
        return base(inst, budget, "base");
    }
    if !inst.is_walk_ordered() {
        // solve in walk order, then restore the caller's terminal order
        let (sorted, idx) = inst.clone().sorted_by_walk();
        let (out, rec) = build(&sorted, params, budget, lambda)?;
        let mut back = vec![0; idx.len()];
        for (p, &i) in idx.iter().enumerate() {
            back[i] = p;
        }
        return Ok((out.reordered(&back), rec));
    }
    let dec = match decompose_step(inst, params, budget, lambda) {
        Ok(d) => d,
        Err(Error::NoFeasibleDecomposition) => return base(inst, budget, "fallback"),
        Err(e) => return Err(e),
    };
    let child_budget = (budget - dec.delta).max(0.0);
    let solve = |p: &Instance| build(p, params, child_budget, lambda);
    let solved: Vec<(Instance, StepRecord)> = if params.parallel {
        dec.pieces.par_iter().map(solve).collect::<Result<_>>()?
    } else {
        dec.pieces.iter().map(solve).collect::<Result<_>>()?
    };
    let (emus, children): (Vec<Instance>, Vec<StepRecord>) = solved.into_iter().unzip();
    let out = dec.plan.apply(&emus)?.suppressed()?;
    let rec = StepRecord {
        terminals: inst.k(),
        vertices: inst.n(),
        kind: dec.kind,
        budget,
        delta: dec.delta,
        eps_r: dec.eps_r,
        output_vertices: out.n(),
        contract: Some(dec.stats),
        children,
    };
    Ok((out, rec))
}
