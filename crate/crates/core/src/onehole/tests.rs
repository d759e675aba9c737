use super::*;
use crate::graph::{from_coordinates, Edge, PlaneGraph};
use crate::harness::{exact_oracle, generate, Family, GeneratorSpec, WeightDist};
use crate::instance::Instance;
use crate::DistMatrix;

fn cycle(n: usize, w: f64) -> PlaneGraph {
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let edges = (0..n).map(|i| Edge { u: i, v: (i + 1) % n, w }).collect();
    from_coordinates(&coords, edges).unwrap()
}

fn path_graph(n: usize) -> PlaneGraph {
    let coords: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, 0.0)).collect();
    let edges = (0..n - 1).map(|i| Edge { u: i, v: i + 1, w: 1.0 }).collect();
    from_coordinates(&coords, edges).unwrap()
}

fn grid_instance(side: usize, k: usize, w: WeightDist, seed: u64) -> Instance {
    generate(&GeneratorSpec::new(Family::Grid, side, k).weights(w).seed(seed)).unwrap()
}

fn assert_close(a: &DistMatrix, b: &DistMatrix) {
    assert_eq!(a.k, b.k);
    for i in 0..a.k {
        for j in 0..a.k {
            let (x, y) = (a.get(i, j), b.get(i, j));
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "({i},{j}): {x} vs {y}");
        }
    }
}

#[test]
fn closest_balanced_pair_on_unit_cycle() {
    let inst = Instance::one_hole(cycle(8, 1.0), (0..8).collect()).unwrap();
    // separations 2..=6 are balanced; the cheapest have distance 2
    let (i, j) = closest_balanced_pair(&inst, 0.75).unwrap();
    assert_eq!((i, j), (0, 2));
    assert_eq!(inst.distances().get(i, j), 2.0);
    let p = crate::graph::shortest_path(&inst.graph, i, j).unwrap();
    assert_eq!(p.hops(), 2);
}

#[test]
fn balanced_pair_needs_four_terminals() {
    let inst = Instance::one_hole(cycle(6, 1.0), vec![0, 2, 4]).unwrap();
    assert!(matches!(closest_balanced_pair(&inst, 0.75), Err(crate::Error::NoBalancedPair(3))));
}

#[test]
fn exponential_portals_on_unit_path() {
    let g = path_graph(9);
    let p = crate::graph::shortest_path(&g, 0, 8).unwrap();
    let y = exponential_portals(&g, &p, 1.0, 2f64.ln(), 3);
    assert_eq!(y, vec![0, 2, 4, 6, 8]);
}

#[test]
fn hierarchy_on_three_points() {
    let mut d = DistMatrix::new(3);
    for (i, j, x) in [(0, 1, 1.0), (1, 2, 99.0), (0, 2, 100.0)] {
        d.set(i, j, x);
        d.set(j, i, x);
    }
    let h = hierarchy_from_distances(&d, 9.0, 0.1).unwrap();
    assert_eq!(h.top, 3);
    h.validate(3).unwrap();
    let members = |l: usize| -> Vec<Vec<usize>> { h.levels[l].iter().map(|&c| h.clusters[c].members.clone()).collect() };
    assert_eq!(members(1), vec![vec![0, 1], vec![2]]);
    assert_eq!(members(2), vec![vec![0, 1], vec![2]]);
    assert_eq!(members(3), vec![vec![0, 1, 2]]);
}

#[test]
fn tight_distances_merge_at_level_one() {
    let inst = Instance::one_hole(cycle(6, 1.0), (0..6).collect()).unwrap();
    let h = hierarchy_from_distances(inst.distances(), 9.0, 0.1).unwrap();
    assert_eq!(h.top, 1);
    assert_eq!(h.levels[1].len(), 1);
}

#[test]
fn split_grid_along_middle_column() {
    let g = generate(&GeneratorSpec::new(Family::Grid, 3, 4)).unwrap().graph;
    let inst = Instance::one_hole(g.clone(), vec![0, 2, 6, 8]).unwrap();
    let p = crate::graph::shortest_path(&g, 1, 7).unwrap();
    assert_eq!(p.vertices, vec![1, 4, 7]);
    let ps = PathSet::new(&g, vec![p], &[4]);
    let (pieces, plan) = split(&inst, &ps).unwrap();
    assert_eq!(pieces.len(), 2);
    for piece in &pieces {
        assert_eq!(piece.n(), 6);
        assert_eq!(piece.graph.m(), 7);
        assert_eq!(piece.k(), 5);
        assert!(piece.is_one_hole());
    }
    let glued = plan.apply(&pieces).unwrap();
    assert_close(inst.distances(), glued.distances());
}

#[test]
fn split_with_empty_path_set_is_identity() {
    let inst = grid_instance(4, 6, WeightDist::Unit, 0);
    let (pieces, plan) = split(&inst, &PathSet::default()).unwrap();
    assert_eq!(pieces.len(), 1);
    assert_eq!(pieces[0].n(), inst.n());
    assert_close(inst.distances(), plan.apply(&pieces).unwrap().distances());
}

#[test]
fn split_cycle_by_two_chords() {
    let coords: Vec<(f64, f64)> = (0..8)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 8.0;
            (t.cos(), t.sin())
        })
        .collect();
    let mut edges: Vec<Edge> = (0..8).map(|i| Edge { u: i, v: (i + 1) % 8, w: 1.0 }).collect();
    edges.push(Edge { u: 0, v: 3, w: 1.0 });
    edges.push(Edge { u: 4, v: 7, w: 1.0 });
    let g = from_coordinates(&coords, edges).unwrap();
    let inst = Instance::one_hole(g, (0..8).collect()).unwrap();
    let paths = noncrossing_shortest_paths(&inst, &[(0, 3), (4, 7)]).unwrap();
    assert!(paths.iter().all(|p| p.hops() == 1));
    let ps = PathSet::new(&inst.graph, paths, &[]);
    let (pieces, plan) = split(&inst, &ps).unwrap();
    assert_eq!(pieces.len(), 3);
    let total: usize = pieces.iter().map(|p| p.k()).sum();
    assert_eq!(total, inst.k() + ps.portals.len());
    assert!(total <= inst.k() + 2 * ps.portals.len());
    assert_close(inst.distances(), plan.apply(&pieces).unwrap().distances());
}

#[test]
fn glue_two_triangles_gives_bowtie() {
    let tri = |label0: usize| {
        let coords = [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)];
        let edges = vec![Edge { u: 0, v: 1, w: 1.0 }, Edge { u: 1, v: 2, w: 1.0 }, Edge { u: 2, v: 0, w: 1.0 }];
        let mut g = from_coordinates(&coords, edges).unwrap();
        g.set_labels(vec![label0, label0 + 1, label0 + 2]);
        Instance::one_hole(g, vec![0, 1, 2]).unwrap()
    };
    let (a, b) = (tri(0), tri(10));
    let spec = GlueSpec {
        groups: vec![
            vec![CopyLink { part: 0, terminal: 1, anchor: 0 }, CopyLink { part: 1, terminal: 0, anchor: 2 }],
            vec![CopyLink { part: 0, terminal: 0, anchor: 0 }],
            vec![CopyLink { part: 1, terminal: 1, anchor: 0 }],
        ],
        terminals: vec![(1, 0), (0, 0), (2, 0)],
        inner: Vec::new(),
    };
    let out = glue(&[a, b], &spec).unwrap();
    assert_eq!(out.n(), 5);
    assert_eq!(out.graph.m(), 6);
    // 0 -> shared -> far corner of the other triangle
    assert_eq!(out.distances().get(0, 2), 2.0);
}

fn diamond_chain(count: usize) -> Instance {
    // tips at x = 0, 2, 4, ...; side vertices above and below
    let mut coords = Vec::new();
    for i in 0..=count {
        coords.push((2.0 * i as f64, 0.0));
    }
    let mut edges = Vec::new();
    for i in 0..count {
        let up = coords.len();
        coords.push((2.0 * i as f64 + 1.0, 1.0));
        let dn = coords.len();
        coords.push((2.0 * i as f64 + 1.0, -1.0));
        for s in [up, dn] {
            edges.push(Edge { u: i, v: s, w: 1.0 });
            edges.push(Edge { u: s, v: i + 1, w: 1.0 });
        }
    }
    let g = from_coordinates(&coords, edges).unwrap();
    Instance::one_hole(g, (0..=count).collect()).unwrap()
}

#[test]
fn cut_vertices_split_diamond_chain() {
    let inst = diamond_chain(4);
    let (pieces, plan) = remove_cut_vertices(&inst).unwrap();
    assert_eq!(pieces.len(), 4);
    let total: usize = pieces.iter().map(|p| p.k()).sum();
    assert!(total <= inst.k() + 2 * 3);
    assert_close(inst.distances(), plan.apply(&pieces).unwrap().distances());
}

#[test]
fn two_connected_input_is_one_block() {
    let inst = grid_instance(4, 8, WeightDist::Unit, 0);
    let (pieces, plan) = remove_cut_vertices(&inst).unwrap();
    assert_eq!(pieces.len(), 1);
    assert_eq!(plan, CombinePlan::identity());
}

#[test]
fn base_emulator_is_exact_on_grid() {
    let inst = grid_instance(9, 8, WeightDist::Uniform, 3);
    let out = base_zero_emulator(&inst).unwrap();
    assert_close(&exact_oracle(&inst), &exact_oracle(&out));
    assert!(out.is_one_hole());
    assert_eq!(out.hole_positions().len(), 8);
}

#[test]
fn base_emulator_of_two_terminals_is_an_edge() {
    let inst = grid_instance(5, 2, WeightDist::Uniform, 1);
    let out = base_zero_emulator(&inst).unwrap();
    assert_eq!(out.n(), 2);
    assert_eq!(out.graph.m(), 1);
    assert!((out.graph.edge(0).w - inst.distances().get(0, 1)).abs() < 1e-9);
}

#[test]
fn base_emulator_keeps_terminal_cycle() {
    let inst = Instance::one_hole(cycle(8, 1.0), vec![0, 2, 4, 6]).unwrap();
    let out = base_zero_emulator(&inst).unwrap();
    assert_eq!(out.n(), 4);
    assert_eq!(out.graph.m(), 4);
}

#[test]
fn pulling_adds_pendant_weight() {
    let inst = grid_instance(5, 6, WeightDist::Uniform, 2);
    let pulled = pull_terminals(&inst, &[2], 7.5).unwrap();
    assert!(pulled.is_one_hole());
    for t in 0..6 {
        if t == 2 {
            continue;
        }
        let want = inst.distances().get(2, t) + 7.5;
        assert!((pulled.distances().get(2, t) - want).abs() < 1e-9);
    }
}

#[test]
fn border_pairs_skip_adjacent_members() {
    assert_eq!(border_pairs(&[0, 1, 2, 5], 8), vec![(2, 5), (5, 0)]);
    assert!(border_pairs(&[0, 1, 2, 3], 4).is_empty());
    assert!(border_pairs(&[3], 8).is_empty());
}

#[test]
fn crossing_pairs_are_rejected() {
    let inst = grid_instance(5, 8, WeightDist::Unit, 0);
    assert!(matches!(
        noncrossing_shortest_paths(&inst, &[(0, 4), (2, 6)]),
        Err(crate::Error::CrossingPairs(..))
    ));
}

#[test]
fn decompose_grid_meets_contract() {
    let inst = grid_instance(32, 124, WeightDist::Unit, 0);
    let params = EmulatorParams::default();
    let dec = decompose_step(&inst, &params, 0.25, params.lambda_star(inst.k())).unwrap();
    assert!(dec.stats.holds(&params));
    assert!(dec.stats.total <= 4 * inst.k(), "sum {}", dec.stats.total);
    for p in &dec.pieces {
        assert!(p.k() * 10 <= 9 * inst.k());
        assert!(p.is_one_hole());
    }
    let glued = dec.plan.apply(&dec.pieces).unwrap();
    let d = max_log_distortion(inst.distances(), glued.distances());
    assert!((d - dec.delta).abs() < 1e-12);
}

#[test]
fn small_instances_go_straight_to_base() {
    let inst = grid_instance(6, 10, WeightDist::Uniform, 4);
    let (out, rep) = one_hole_emulator(&inst, 0.25).unwrap();
    assert!(rep.max_distortion < 1e-12);
    assert_eq!(rep.depth, 1);
    assert_close(inst.distances(), out.distances());
}

#[test]
fn recursive_emulator_on_grid() {
    let inst = grid_instance(16, 60, WeightDist::Uniform, 5);
    let params = EmulatorParams { lambda_min: 8, lambda_c: 0.0, ..EmulatorParams::with_eps(0.25) };
    let (out, rep) = one_hole_emulator_with(&inst, &params).unwrap();
    assert!(rep.depth >= 2, "{rep:?}");
    assert!(rep.max_distortion <= 0.25);
    assert!(out.is_one_hole());
    let v = crate::harness::verify_emulator(&inst, &out, 0.25).unwrap();
    assert!(v.pass);
    // alignment: terminals keep their circular order
    assert!(out.is_walk_ordered());
}

#[test]
fn serial_and_parallel_agree() {
    let inst = grid_instance(12, 40, WeightDist::LogUniform, 6);
    let mut params = EmulatorParams { lambda_min: 8, lambda_c: 0.0, ..EmulatorParams::with_eps(0.25) };
    let (a, _) = one_hole_emulator_with(&inst, &params).unwrap();
    params.parallel = false;
    let (b, _) = one_hole_emulator_with(&inst, &params).unwrap();
    assert_eq!(a.to_json_string(), b.to_json_string());
}

#[test]
fn shortest_paths_are_well_structured() {
    // any two canonical shortest paths meet in one common subpath
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    for seed in 0..4 {
        let inst = grid_instance(6, 4, WeightDist::Unit, seed);
        let mut g = inst.graph.clone();
        let edges: Vec<Edge> =
            g.edges().iter().map(|e| Edge { u: e.u, v: e.v, w: rng.gen_range(1..=3) as f64 }).collect();
        g = PlaneGraph::new(edges, g.rotations().to_vec(), g.outer_dart(), false).unwrap();
        let n = g.n();
        let mut paths = Vec::new();
        for s in 0..n {
            for t in s + 1..n {
                paths.push(crate::graph::shortest_path(&g, s, t).unwrap());
            }
        }
        for (a, p) in paths.iter().enumerate() {
            for q in &paths[a + 1..] {
                let shared: Vec<usize> = p.vertices.iter().copied().filter(|v| q.vertices.contains(v)).collect();
                if shared.len() <= 1 {
                    continue;
                }
                let pos: Vec<usize> = shared.iter().map(|v| p.vertices.iter().position(|x| x == v).unwrap()).collect();
                let contiguous = pos.windows(2).all(|w| w[1] == w[0] + 1);
                assert!(contiguous, "paths {:?} and {:?} meet twice", p.vertices, q.vertices);
            }
        }
    }
}

#[test]
fn small_unit_grid_cannot_meet_contract() {
    // every column needs its own portal, which overflows the heavy-piece sum
    let inst = grid_instance(16, 60, WeightDist::Unit, 0);
    let params = EmulatorParams::default();
    assert!(matches!(decompose_step(&inst, &params, 0.25, 8), Err(crate::Error::NoFeasibleDecomposition)));
}

#[test]
fn refined_portals_stay_within_target() {
    let inst = grid_instance(16, 60, WeightDist::Unit, 0);
    let p = crate::graph::interior_shortest_path(&inst.graph, inst.terminals[7], inst.terminals[37]).unwrap();
    let (step, delta) = refine_portals(&inst, PathSet::new(&inst.graph, vec![p], &[]), 60, 0.1).unwrap();
    assert!(delta <= 0.1);
    let d = measured_distortion(&inst, &step.pieces, &step.plan).unwrap();
    assert!((d - delta).abs() < 1e-12);
    assert!(step.pieces.iter().all(|p| p.k() < inst.k()));
}

#[test]
fn interior_path_avoids_the_boundary() {
    let inst = grid_instance(8, 28, WeightDist::Unit, 0);
    let g = &inst.graph;
    let (s, t) = (8, 15); // (1, 0) and (1, 7)
    let p = crate::graph::interior_shortest_path(g, s, t).unwrap();
    let q = crate::graph::shortest_path(g, s, t).unwrap();
    assert_eq!(p.weight, q.weight);
    let outer: Vec<usize> = g.outer_walk();
    let touching = p.vertices.iter().filter(|v| outer.contains(v)).count();
    assert_eq!(touching, 2, "{:?}", p.vertices);
}
