use plemu::division::{balanced_separator, heaviest_component, r_division, DivisionParams};
use plemu::graph::{all_terminal_distances, Edge};
use plemu::harness::{generate, Family, GeneratorSpec, Placement, WeightDist};
use plemu::onehole::max_log_distortion;
use plemu::{Instance, PlaneGraph};

fn inst(f: Family, size: usize, k: usize, seed: u64) -> Instance {
    generate(&GeneratorSpec::new(f, size, k).weights(WeightDist::Uniform).placement(Placement::Random).seed(seed))
        .unwrap()
}

fn star(leaves: usize) -> PlaneGraph {
    let edges = (1..=leaves).map(|i| Edge { u: 0, v: i, w: 1.0 }).collect();
    let mut rot = vec![(0..leaves).map(|i| 2 * i).collect::<Vec<_>>()];
    rot.extend((0..leaves).map(|i| vec![2 * i + 1]));
    PlaneGraph::new(edges, rot, None, false).unwrap()
}

#[test]
fn star_splits_at_center() {
    let g = star(7);
    let w = vec![1.0 / 8.0; 8];
    let s = balanced_separator(&g, &w);
    assert!(s.vertices.contains(&0));
    assert!(heaviest_component(&g, &w, &s.vertices) <= 0.75);
}

#[test]
fn grid_separator_is_short_and_balanced() {
    for m in [8, 16, 24] {
        let g = inst(Family::Grid, m, 4, 0).graph;
        let w = vec![1.0 / g.n() as f64; g.n()];
        let s = balanced_separator(&g, &w);
        assert!(s.vertices.len() <= 2 * m + 1, "{m}: {}", s.vertices.len());
        assert!(heaviest_component(&g, &w, &s.vertices) <= 0.75 + 1e-12);
    }
}

#[test]
fn concentrated_weight_is_isolated() {
    let g = inst(Family::Grid, 10, 4, 0).graph;
    let mut w = vec![0.0; g.n()];
    w[55] = 1.0;
    let s = balanced_separator(&g, &w);
    assert!(heaviest_component(&g, &w, &s.vertices) <= 1.0);
}

#[test]
fn small_r_is_rejected() {
    let i = inst(Family::Grid, 6, 4, 0);
    assert!(r_division(&i, 15).is_err());
}

#[test]
fn small_graph_is_one_piece() {
    let i = inst(Family::Grid, 6, 4, 0);
    let d = r_division(&i, 64).unwrap();
    assert_eq!(d.pieces.len(), 1);
    assert!(d.pieces[0].boundary().is_empty());
}

#[test]
fn grid_division_meets_bounds() {
    let i = inst(Family::Grid, 16, 8, 1);
    let d = r_division(&i, 64).unwrap();
    let params = DivisionParams::default();
    assert!(d.violations(&params).is_empty(), "{:?}", d.violations(&params));
    assert!(d.pieces.len() as f64 <= params.c_div * 4.0);
}

#[test]
fn every_edge_is_in_one_piece() {
    for (f, s) in [(Family::Grid, 20), (Family::RandomTriangulation, 400), (Family::Annulus, 24)] {
        let i = inst(f, s, 16, 2);
        let d = r_division(&i, 40).unwrap();
        let mut seen = vec![0; i.graph.m()];
        for p in &d.pieces {
            for &e in &p.edge_origin {
                seen[e] += 1;
            }
        }
        assert!(seen.iter().all(|&x| x == 1), "{f:?}");
        let held: usize = d.stats().iter().map(|s| s.terminals).sum();
        assert_eq!(held, i.k());
    }
}

#[test]
fn piece_distances_dominate() {
    let i = inst(Family::RandomTriangulation, 300, 10, 3);
    let d = r_division(&i, 32).unwrap();
    for p in &d.pieces {
        let b = p.boundary();
        let local = all_terminal_distances(&p.graph, &b);
        let orig: Vec<usize> = b.iter().map(|&v| p.vertex_origin[v]).collect();
        let global = all_terminal_distances(&i.graph, &orig);
        for x in 0..b.len() {
            for y in 0..b.len() {
                assert!(local.get(x, y) >= global.get(x, y) - 1e-9);
            }
        }
    }
}

#[test]
fn pieces_glue_back_exactly() {
    for (f, s, r) in [(Family::Grid, 16, 32), (Family::RandomTriangulation, 500, 48), (Family::RandomWeightsOverlay, 14, 24)] {
        let i = inst(f, s, 20, 4);
        let d = r_division(&i, r).unwrap();
        assert!(d.pieces.len() > 2);
        let parts: Vec<Instance> = d.pieces.iter().map(|p| p.instance(&i).unwrap()).collect();
        let back = d.glue(&i, &parts).unwrap();
        assert_eq!(back.n(), i.n(), "{f:?}");
        assert!(max_log_distortion(i.distances(), back.distances()) < 1e-12, "{f:?}");
    }
}

#[test]
fn json_lists_edges_by_input_id() {
    let i = inst(Family::Grid, 12, 6, 5);
    let d = r_division(&i, 36).unwrap();
    let j = d.to_json();
    let text = serde_json::to_string(&j).unwrap();
    let back: plemu::division::RDivisionJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, j);
    assert!(j.pieces.iter().all(|p| p.edges.iter().all(|&e| e < i.graph.m())));
}
