use proptest::prelude::*;

use plemu::division::{r_division, DivisionParams};
use plemu::graph::{shortest_path, sssp};
use plemu::harness::{exact_oracle, generate, verify_emulator, Family, GeneratorSpec, Placement, WeightDist};
use plemu::onehole::{base_zero_emulator, build_cluster_hierarchy, one_hole_emulator, EmulatorParams};
use plemu::pipeline::{build_oracle, PipelineConfig};
use plemu::{Edge, Instance, PlaneGraph};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Grid),
        Just(Family::HalvedGrid),
        Just(Family::Annulus),
        Just(Family::RandomTriangulation),
        Just(Family::RandomWeightsOverlay),
    ]
}

fn weights() -> impl Strategy<Value = WeightDist> {
    prop_oneof![Just(WeightDist::Unit), Just(WeightDist::Uniform), Just(WeightDist::LogUniform)]
}

fn size_for(f: Family, s: usize) -> usize {
    match f {
        Family::RandomTriangulation => 30 + 20 * s,
        Family::Annulus => 8 + 2 * s,
        _ => 4 + s,
    }
}

/// Small instance with terminals on the outer face (both rings for annuli).
fn boundary_instance() -> impl Strategy<Value = Instance> {
    (prop_oneof![Just(Family::Grid), Just(Family::HalvedGrid), Just(Family::RandomWeightsOverlay)], 0..14usize, 4..48usize, weights(), any::<u64>())
        .prop_filter_map("too many terminals", |(f, s, k, w, seed)| {
            generate(&GeneratorSpec::new(f, size_for(f, s), k).weights(w).seed(seed)).ok()
        })
}

fn any_instance() -> impl Strategy<Value = Instance> {
    (family(), 0..8usize, 2..24usize, weights(), any::<bool>(), any::<u64>()).prop_filter_map(
        "too many terminals",
        |(f, s, k, w, random, seed)| {
            let p = if random { Placement::Random } else { Placement::Boundary };
            generate(&GeneratorSpec::new(f, size_for(f, s), k).weights(w).placement(p).seed(seed)).ok()
        },
    )
}

fn check_graph(g: &PlaneGraph) -> Result<(), TestCaseError> {
    for d in 0..g.num_darts() {
        prop_assert_eq!((d ^ 1) ^ 1, d);
        prop_assert_eq!(g.weight(d), g.weight(d ^ 1));
        prop_assert!(g.weight(d) >= 0.0);
        prop_assert_eq!(g.origin(g.face_next(d)), g.head(d));
    }
    let mut seen = vec![0; g.num_darts()];
    for walk in g.faces() {
        for &d in walk {
            seen[d] += 1;
        }
    }
    prop_assert!(seen.iter().all(|&c| c == 1), "faces do not partition the darts");
    prop_assert!(g.is_connected());
    prop_assert_eq!(g.n() as i64 - g.m() as i64 + g.num_faces() as i64, 2);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn generated_graphs_are_valid_and_seeded((f, s, k, w, seed) in (family(), 0..8usize, 2..12usize, weights(), any::<u64>())) {
        let spec = GeneratorSpec::new(f, size_for(f, s), k).weights(w).seed(seed);
        let a = generate(&spec).unwrap();
        check_graph(&a.graph)?;
        prop_assert_eq!(a.to_json_string(), generate(&spec).unwrap().to_json_string());
    }

    #[test]
    fn shortest_paths_are_simple_and_minimal(inst in any_instance(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = &inst.graph;
        let (s, t) = (a.index(g.n()), b.index(g.n()));
        let p = shortest_path(g, s, t).unwrap();
        prop_assert_eq!(p.source(), s);
        prop_assert_eq!(p.target(), t);
        prop_assert!(p.is_simple());
        for (i, &d) in p.darts.iter().enumerate() {
            prop_assert_eq!(g.origin(d), p.vertices[i]);
            prop_assert_eq!(g.head(d), p.vertices[i + 1]);
        }
        let sum: f64 = p.darts.iter().map(|&d| g.weight(d)).sum();
        prop_assert!((sum - p.weight).abs() <= 1e-9 * sum.max(1.0));
        let d = sssp(g, s)[t];
        prop_assert!((p.weight - d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn base_case_is_exact(inst in any_instance()) {
        let out = base_zero_emulator(&inst).unwrap();
        let (a, b) = (exact_oracle(&inst), exact_oracle(&out));
        for i in 0..a.k {
            for j in 0..a.k {
                prop_assert!((a.get(i, j) - b.get(i, j)).abs() <= 1e-9 * a.get(i, j).max(1e-300));
            }
        }
    }

    #[test]
    fn one_hole_instances_are_monge(inst in boundary_instance()) {
        let d = exact_oracle(&inst);
        let pos = inst.hole_positions();
        let mut o: Vec<usize> = (0..inst.k()).collect();
        o.sort_by_key(|&i| pos[i]);
        let tol = 1e-9 * d.min_max_positive().map_or(1.0, |x| x.1);
        for a in 0..o.len() {
            for b in a + 1..o.len() {
                for c in b + 1..o.len() {
                    for e in c + 1..o.len().min(c + 4) {
                        let (a, b, c, e) = (o[a], o[b], o[c], o[e]);
                        let cross = d.get(a, c) + d.get(b, e);
                        prop_assert!(cross + tol >= d.get(a, b) + d.get(c, e));
                        prop_assert!(cross + tol >= d.get(a, e) + d.get(b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn hierarchy_is_laminar_with_bounded_diameter(inst in boundary_instance(), eps in 0.05f64..1.0) {
        let params = EmulatorParams::with_eps(eps);
        let h = build_cluster_hierarchy(&inst, &params).unwrap();
        let k = inst.k();
        prop_assert!(h.levels[0].iter().all(|&c| h.clusters[c].members.len() == 1));
        prop_assert_eq!(h.clusters[h.root()].members.len(), k);
        let all: Vec<&Vec<usize>> = h.clusters.iter().map(|c| &c.members).collect();
        for x in &all {
            for y in &all {
                let inter = x.iter().filter(|t| y.contains(t)).count();
                prop_assert!(inter == 0 || inter == x.len() || inter == y.len());
            }
        }
        let d = inst.distances();
        for (i, lvl) in h.levels.iter().enumerate() {
            for &c in lvl {
                let m = &h.clusters[c].members;
                let diam = m.iter().flat_map(|&a| m.iter().map(move |&b| d.get(a, b))).fold(0.0, f64::max);
                prop_assert!(diam / h.scale <= 2.0 * k as f64 * h.mu.powi(i as i32) * (1.0 + 1e-9));
                if let Some(p) = h.clusters[c].parent {
                    let grows = h.clusters[p].members.len() as f64 >= h.eps_prime.exp() * m.len() as f64;
                    prop_assert_eq!(grows, h.clusters[c].expanding);
                }
            }
        }
    }

    #[test]
    fn params_are_positive(eps in 0.01f64..2.0, k in 2usize..100_000) {
        let p = EmulatorParams::with_eps(eps);
        let lambda = p.lambda_star(k);
        prop_assert!(lambda >= p.lambda_min && p.lambda_min > 0);
        prop_assert!(p.eps_prime(k) > 0.0 && p.mu(k) > 1.0);
        prop_assert!(p.contract_c > 0.0 && p.cover_c > 0.0 && p.branch_c > 0.0);
    }

    #[test]
    fn one_hole_emulator_is_aligned_and_within_eps(inst in boundary_instance(), eps in 0.05f64..0.6) {
        let (out, rep) = one_hole_emulator(&inst, eps).unwrap();
        prop_assert!(rep.max_distortion <= eps * (1.0 + 1e-9));
        prop_assert!(verify_emulator(&inst, &out, eps).unwrap().pass);
        prop_assert!(out.is_one_hole());
        let orders = |i: &Instance| {
            let pos = i.hole_positions();
            let mut o: Vec<usize> = (0..i.k()).collect();
            o.sort_by_key(|&t| pos[t]);
            let z = o.iter().position(|&t| t == 0).unwrap();
            o.rotate_left(z);
            o
        };
        prop_assert_eq!(orders(&inst), orders(&out));
    }

    #[test]
    fn division_invariants(inst in any_instance(), r in 16usize..80) {
        let d = r_division(&inst, r).unwrap();
        let params = DivisionParams::default();
        prop_assert!(d.violations(&params).is_empty(), "{:?}", d.violations(&params));
        let mut hits = vec![0; inst.graph.m()];
        for p in &d.pieces {
            for &e in &p.edge_origin {
                hits[e] += 1;
            }
        }
        prop_assert!(hits.iter().all(|&h| h >= 1));
        prop_assert!(d.pieces.len() as f64 <= params.c_div * (inst.n() as f64 / r as f64).max(1.0));
    }

    #[test]
    fn schedules_and_budgets(n in 16usize..10_000_000, eps in 0.01f64..1.0) {
        let cfg = PipelineConfig::with_eps(eps);
        let s = cfg.bootstrap_schedule(n);
        prop_assert!(!s.is_empty());
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        let round = (1.0 + eps / 8.0).ln() / 2.0;
        let share = (eps - round) / (s.len() + 1) as f64;
        prop_assert!(round + share * (s.len() + 1) as f64 <= eps * (1.0 + 1e-12));
    }

    #[test]
    fn verify_passes_exactly_within_eps(inst in any_instance(), scale in -0.5f64..0.5, eps in 0.05f64..0.4) {
        prop_assume!(inst.k() >= 2 && (scale.abs() - eps).abs() > 1e-6);
        let g = &inst.graph;
        let edges: Vec<Edge> = g.edges().iter().map(|e| Edge { w: e.w * scale.exp(), ..*e }).collect();
        let mut h = PlaneGraph::new(edges, g.rotations().to_vec(), g.outer_dart(), true).unwrap();
        h.set_labels(g.labels().to_vec());
        let stretched = Instance::new(h, inst.terminals.clone(), inst.corners.clone()).unwrap();
        let rep = verify_emulator(&inst, &stretched, eps).unwrap();
        prop_assert_eq!(rep.pass, scale.abs() <= eps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn oracle_queries_within_eps(inst in boundary_instance(), eps in 0.05f64..0.5) {
        let o = build_oracle(&inst, eps).unwrap();
        let d = exact_oracle(&inst);
        for a in 0..inst.k() {
            for b in 0..inst.k() {
                let q = o.query(inst.terminals[a], inst.terminals[b]).unwrap();
                if a == b {
                    prop_assert_eq!(q, 0.0);
                } else {
                    prop_assert!((q / d.get(a, b)).ln().abs() <= eps * (1.0 + 1e-9));
                }
            }
        }
    }
}
