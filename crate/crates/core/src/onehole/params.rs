use serde::{Deserialize, Serialize};

/// Tunable constants of the one-hole construction.
///
/// None of these affect soundness: every decomposition step measures its own
/// distortion and the final emulator is audited against exact distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmulatorParams {
    /// Target distortion: distances stay within a factor `e^eps`.
    pub eps: f64,
    /// Floor of the stopping threshold λ*.
    pub lambda_min: usize,
    /// λ* = max(lambda_min, lambda_c · ln²k / eps^lambda_p).
    pub lambda_c: f64,
    pub lambda_p: f64,
    /// Cap on the exponent of the small/large spread threshold.
    pub spread_cap: f64,
    /// Exponent `a` in the threshold 2^{r^a · ln² r}.
    pub spread_exponent: f64,
    /// Balance factor of the closest balanced pair.
    pub balance: f64,
    /// Size bound on ε-covers: |cover| ≤ cover_c / ε.
    pub cover_c: f64,
    /// Constant asserted in the branch-vertex bound |Y*| ≤ branch_c · |U|.
    pub branch_c: f64,
    /// Constant in the decomposition contract.
    pub contract_c: f64,
    /// Largest allowed piece as a fraction of r.
    pub piece_fraction: f64,
    /// μ = r^mu_exponent in the cluster hierarchy.
    pub mu_exponent: f64,
    /// ε′_r = r^{−eps_prime_exponent}, floored by `eps_prime_min`.
    pub eps_prime_exponent: f64,
    pub eps_prime_min: f64,
    /// Good-set level window below L̂, in units of ln r / ε′_r.
    pub good_window: f64,
    /// Candidate per-step portal resolutions, coarse to fine.
    pub eps_r_ladder: Vec<f64>,
    /// Expected shrink factor of terminal counts per step, used to share
    /// the distortion budget across the remaining depth.
    pub depth_shrink: f64,
    /// Extra antipodal terminal pairs tried as cut paths besides the
    /// closest balanced pair.
    pub path_candidates: usize,
    /// Process sibling pieces in parallel.
    pub parallel: bool,
}

impl Default for EmulatorParams {
    fn default() -> Self {
        EmulatorParams {
            eps: 0.25,
            lambda_min: 16,
            lambda_c: 0.5,
            lambda_p: 1.0,
            spread_cap: 16.0,
            spread_exponent: 0.9,
            balance: 0.75,
            cover_c: 16.0,
            branch_c: 8.0,
            contract_c: 8.0,
            piece_fraction: 0.9,
            mu_exponent: 2.0,
            eps_prime_exponent: 0.7,
            eps_prime_min: 0.05,
            good_window: 2.0,
            eps_r_ladder: vec![1.0, 0.7, 0.5, 0.35, 0.25, 0.18, 0.12, 0.08, 0.05, 0.03, 0.02, 0.01],
            depth_shrink: 0.6,
            path_candidates: 4,
            parallel: true,
        }
    }
}

impl EmulatorParams {
    pub fn with_eps(eps: f64) -> Self {
        EmulatorParams { eps, ..Default::default() }
    }

    /// Stopping threshold λ* for an instance with `k` terminals.
    pub fn lambda_star(&self, k: usize) -> usize {
        let lk = (k.max(2) as f64).ln();
        let v = self.lambda_c * lk * lk / self.eps.max(1e-9).powf(self.lambda_p);
        self.lambda_min.max(v.ceil() as usize)
    }

    /// Spread threshold separating the two regimes, as a natural log.
    pub fn ln_spread_threshold(&self, r: usize) -> f64 {
        let lr = (r.max(2) as f64).ln();
        let exponent = ((r as f64).powf(self.spread_exponent) * lr * lr).min(self.spread_cap);
        exponent * std::f64::consts::LN_2
    }

    pub fn eps_prime(&self, r: usize) -> f64 {
        (r.max(2) as f64).powf(-self.eps_prime_exponent).max(self.eps_prime_min)
    }

    pub fn mu(&self, r: usize) -> f64 {
        (r.max(2) as f64).powf(self.mu_exponent)
    }

    /// Remaining recursion depth estimate for `k` terminals above threshold `lambda`.
    pub fn depth_estimate(&self, k: usize, lambda: usize) -> f64 {
        if k <= lambda {
            return 1.0;
        }
        ((k as f64 / lambda as f64).ln() / (1.0 / self.depth_shrink).ln()).ceil().max(1.0) + 1.0
    }
}
