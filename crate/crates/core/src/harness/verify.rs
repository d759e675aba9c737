use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::onehole::report::pair_distortion;

use super::oracle::exact_oracle;

/// Relative slack allowed on each side of the distortion bound.
pub const SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstPair {
    pub i: usize,
    pub j: usize,
    pub original: f64,
    pub emulator: f64,
    pub log_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub eps: f64,
    pub terminals: usize,
    pub pairs: usize,
    pub max_distortion: f64,
    pub mean_distortion: f64,
    pub worst: Option<WorstPair>,
    pub original_vertices: usize,
    pub original_edges: usize,
    pub emulator_vertices: usize,
    pub emulator_edges: usize,
    pub oracle_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

/// Checks every terminal pair of `emulator` against `original` using the
/// exact oracle on both sides.
pub fn verify_emulator(original: &Instance, emulator: &Instance, eps: f64) -> Result<VerificationReport> {
    if original.k() != emulator.k() {
        return Err(Error::TerminalMismatch);
    }
    let t0 = Instant::now();
    let (a, b) = rayon::join(|| exact_oracle(original), || exact_oracle(emulator));
    let secs = t0.elapsed().as_secs_f64();
    let k = original.k();
    // rows in parallel, reduced in index order
    let rows: Vec<(f64, usize, Option<WorstPair>)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut sum = 0.0;
            let mut cnt = 0;
            let mut worst: Option<WorstPair> = None;
            for j in i + 1..k {
                let (x, y) = (a.get(i, j), b.get(i, j));
                let r = pair_distortion(x, y);
                if r.is_finite() {
                    sum += r;
                    cnt += 1;
                }
                if worst.as_ref().map_or(true, |w| r > w.log_ratio) {
                    worst = Some(WorstPair { i, j, original: x, emulator: y, log_ratio: r });
                }
            }
            (sum, cnt, worst)
        })
        .collect();
    let mut sum = 0.0;
    let mut cnt = 0;
    let mut worst: Option<WorstPair> = None;
    for (s, c, w) in rows {
        sum += s;
        cnt += c;
        if let Some(w) = w {
            if worst.as_ref().map_or(true, |x| w.log_ratio > x.log_ratio) {
                worst = Some(w);
            }
        }
    }
    let max = worst.as_ref().map_or(0.0, |w| w.log_ratio);
    Ok(VerificationReport {
        pass: max <= eps + SLACK,
        eps,
        terminals: k,
        pairs: k * k.saturating_sub(1) / 2,
        max_distortion: max,
        mean_distortion: if cnt > 0 { sum / cnt as f64 } else { 0.0 },
        worst,
        original_vertices: original.n(),
        original_edges: original.graph.m(),
        emulator_vertices: emulator.n(),
        emulator_edges: emulator.graph.m(),
        oracle_seconds: secs,
        params: None,
    })
}
