//! Shared fixtures for the criterion benchmarks.

use plemu::harness::{generate, Family, GeneratorSpec, Placement, WeightDist};
use plemu::Instance;

/// `m × m` grid, uniform weights, `k` terminals spread on the outer face.
pub fn boundary_grid(m: usize, k: usize) -> Instance {
    fixture(Family::Grid, m, k, Placement::Boundary)
}

/// Random triangulation on `n` points with `k` random terminals.
pub fn triangulation(n: usize, k: usize) -> Instance {
    fixture(Family::RandomTriangulation, n, k, Placement::Random)
}

/// `m × m` grid with `k` random terminals.
pub fn scattered_grid(m: usize, k: usize) -> Instance {
    fixture(Family::Grid, m, k, Placement::Random)
}

fn fixture(f: Family, size: usize, k: usize, p: Placement) -> Instance {
    generate(&GeneratorSpec::new(f, size, k).weights(WeightDist::Uniform).placement(p).seed(7)).expect("fixture")
}
