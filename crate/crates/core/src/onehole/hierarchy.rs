use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DistMatrix;
use crate::instance::Instance;

use super::params::EmulatorParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Terminal indices, increasing.
    pub members: Vec<usize>,
    pub level: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub expanding: bool,
}

/// Laminar family of terminal clusters: level `i` holds the components of the
/// graph joining terminals at normalized distance at most `μ^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterHierarchy {
    pub mu: f64,
    /// Top level L = ⌈log_μ Φ⌉.
    pub top: usize,
    pub eps_prime: f64,
    /// Minimum terminal distance used for normalization.
    pub scale: f64,
    pub clusters: Vec<Cluster>,
    /// Cluster ids per level, ordered by smallest member.
    pub levels: Vec<Vec<usize>>,
}

impl ClusterHierarchy {
    pub fn cluster_of(&self, level: usize, t: usize) -> usize {
        *self.levels[level].iter().find(|&&c| self.clusters[c].members.binary_search(&t).is_ok()).unwrap()
    }

    pub fn root(&self) -> usize {
        self.levels[self.top][0]
    }

    /// Checks laminarity, level structure and the expanding flags.
    pub fn validate(&self, k: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::HierarchyInconsistent(m.to_string()));
        if self.levels.len() != self.top + 1 {
            return bad("level count");
        }
        if self.levels[0].len() != k || self.levels[0].iter().any(|&c| self.clusters[c].members.len() != 1) {
            return bad("level 0 is not all singletons");
        }
        if self.levels[self.top].len() != 1 || self.clusters[self.root()].members.len() != k {
            return bad("top level is not the full terminal set");
        }
        for (i, lvl) in self.levels.iter().enumerate() {
            let mut seen = vec![false; k];
            for &c in lvl {
                for &t in &self.clusters[c].members {
                    if seen[t] {
                        return bad("level is not a partition");
                    }
                    seen[t] = true;
                }
                if let Some(p) = self.clusters[c].parent {
                    let pm = &self.clusters[p].members;
                    if self.clusters[p].level != i + 1
                        || !self.clusters[c].members.iter().all(|t| pm.binary_search(t).is_ok())
                    {
                        return bad("parent does not contain child");
                    }
                    let exp = pm.len() as f64 >= self.eps_prime.exp() * self.clusters[c].members.len() as f64;
                    if exp != self.clusters[c].expanding {
                        return bad("expanding flag");
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                return bad("level misses a terminal");
            }
        }
        Ok(())
    }
}

pub fn build_cluster_hierarchy(inst: &Instance, params: &EmulatorParams) -> Result<ClusterHierarchy> {
    let r = inst.k();
    hierarchy_from_distances(inst.distances(), params.mu(r), params.eps_prime(r))
}

/// Builds the hierarchy from a terminal distance matrix.
pub fn hierarchy_from_distances(d: &DistMatrix, mu: f64, eps_prime: f64) -> Result<ClusterHierarchy> {
    let k = d.k;
    if k == 0 {
        return Err(Error::HierarchyInconsistent("no terminals".into()));
    }
    let (scale, max) = d.min_max_positive().unwrap_or((1.0, 1.0));
    let phi = max / scale;
    let mut top = 0usize;
    while mu.powi(top as i32) < phi * (1.0 - 1e-12) {
        top += 1;
    }
    if k > 1 {
        top = top.max(1);
    }
    // Kruskal order: merge pairs by increasing distance
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            pairs.push((d.get(i, j) / scale, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut uf: Vec<usize> = (0..k).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let n = uf[y];
            uf[y] = r;
            y = n;
        }
        r
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut next_pair = 0;
    for lvl in 0..=top {
        let thr = mu.powi(lvl as i32) * (1.0 + 1e-12);
        if lvl > 0 {
            while next_pair < pairs.len() && pairs[next_pair].0 <= thr {
                let (_, a, b) = pairs[next_pair];
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                if ra != rb {
                    uf[ra.max(rb)] = ra.min(rb);
                }
                next_pair += 1;
            }
        }
        if lvl == top {
            // everything joins at the top, including unreachable terminals
            for t in 1..k {
                let (ra, rb) = (find(&mut uf, 0), find(&mut uf, t));
                if ra != rb {
                    uf[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); k];
        for t in 0..k {
            let r = find(&mut uf, t);
            by_root[r].push(t);
        }
        let mut ids = Vec::new();
        for members in by_root.into_iter().filter(|m| !m.is_empty()) {
            ids.push(clusters.len());
            clusters.push(Cluster { members, level: lvl, parent: None, children: Vec::new(), expanding: false });
        }
        ids.sort_by_key(|&c| clusters[c].members[0]);
        if lvl > 0 {
            for &c in &levels[lvl - 1] {
                let t = clusters[c].members[0];
                let p = *ids.iter().find(|&&p| clusters[p].members.binary_search(&t).is_ok()).unwrap();
                clusters[c].parent = Some(p);
                clusters[p].children.push(c);
                clusters[c].expanding =
                    clusters[p].members.len() as f64 >= eps_prime.exp() * clusters[c].members.len() as f64;
            }
        }
        levels.push(ids);
    }
    Ok(ClusterHierarchy { mu, top, eps_prime, scale, clusters, levels })
}
