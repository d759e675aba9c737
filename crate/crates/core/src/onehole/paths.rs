use crate::error::{Error, Result};
use crate::graph::{shortest_path, Path};
use crate::instance::Instance;

/// Whether terminal pairs `(a,b)` and `(c,d)`, given by positions in circular
/// order, cross: exactly one of `c`, `d` lies strictly between `a` and `b`.
pub fn pairs_cross(a: usize, b: usize, c: usize, d: usize) -> bool {
    let (lo, hi) = (a.min(b), a.max(b));
    if [c, d].iter().any(|&x| x == lo || x == hi) {
        return false;
    }
    let inside = |x: usize| lo < x && x < hi;
    inside(c) != inside(d)
}

/// One shortest path per terminal pair (indices into the terminal list).
///
/// Shortest paths are unique under the tie-break key, so the returned set is
/// well-structured; pairs must be pairwise non-crossing in outer-walk order.
pub fn noncrossing_shortest_paths(inst: &Instance, pairs: &[(usize, usize)]) -> Result<Vec<Path>> {
    let pos = inst.hole_positions();
    for (x, &(a, b)) in pairs.iter().enumerate() {
        if a >= inst.k() || b >= inst.k() {
            return Err(Error::UnknownTerminal(a.max(b)));
        }
        for &(c, d) in &pairs[x + 1..] {
            if pairs_cross(pos[a], pos[b], pos[c], pos[d]) {
                return Err(Error::CrossingPairs(a, b, c, d));
            }
        }
    }
    pairs
        .iter()
        .map(|&(a, b)| shortest_path(&inst.graph, inst.terminals[a], inst.terminals[b]))
        .collect()
}
