use plemu::harness::{exact_oracle, generate, verify_emulator, Family, GeneratorSpec, Placement, WeightDist};
use plemu::pipeline::{
    bootstrap_emulator, build_oracle, planar_emulator, round_weights, size_reduction, PipelineConfig,
};
use plemu::{Error, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_terms(f: Family, size: usize, k: usize, seed: u64) -> Instance {
    generate(&GeneratorSpec::new(f, size, k).weights(WeightDist::Uniform).placement(Placement::Random).seed(seed))
        .unwrap()
}

#[test]
fn tiny_instance_is_one_piece() {
    let i = random_terms(Family::Grid, 4, 3, 0);
    let (out, rep) = size_reduction(&i, 0.5).unwrap();
    assert!(out.n() <= i.n());
    assert!(rep.max_distortion <= 0.5);
    assert_eq!(rep.stages.len(), 1);
}

#[test]
fn grid_reduction_shrinks() {
    let i = random_terms(Family::Grid, 32, 16, 1);
    let (out, _) = size_reduction(&i, 0.5).unwrap();
    assert!(out.n() < i.n());
    assert!(verify_emulator(&i, &out, 0.5).unwrap().pass);
}

#[test]
fn triangulation_reduction_shrinks_a_lot() {
    let i = random_terms(Family::RandomTriangulation, 3000, 64, 2);
    let (out, _) = size_reduction(&i, 0.25).unwrap();
    assert!(out.n() * 2 < i.n(), "{}", out.n());
    assert!(verify_emulator(&i, &out, 0.25).unwrap().pass);
}

#[test]
fn planar_emulator_on_grid() {
    let i = random_terms(Family::Grid, 64, 64, 3);
    let (out, rep) = planar_emulator(&i, 0.25).unwrap();
    assert!(verify_emulator(&i, &out, 0.25).unwrap().pass);
    assert!(out.n() < i.n());
    assert!(rep.budget_total() <= 0.25 + 1e-12);
    // preprocessing at ε/2, then three rounds at ε/6
    let names: Vec<&str> = rep.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["preprocess", "iter-1", "iter-2", "iter-3"]);
    for s in &rep.stages {
        assert!(s.measured <= s.budget + 1e-9, "{s:?}");
    }
}

#[test]
fn kept_sizes_never_grow() {
    let i = random_terms(Family::RandomTriangulation, 2000, 40, 4);
    let (out, rep) = planar_emulator(&i, 0.25).unwrap();
    let mut cur = i.n();
    for s in &rep.stages {
        cur = cur.min(s.vertices_out);
    }
    assert!(out.n() <= cur);
}

#[test]
fn all_vertices_terminals() {
    let i = generate(&GeneratorSpec::new(Family::Grid, 8, 64).weights(WeightDist::Uniform).placement(Placement::Random))
        .unwrap();
    assert_eq!(i.k(), i.n());
    let (out, rep) = planar_emulator(&i, 0.25).unwrap();
    assert!(out.n() <= 2 * i.n());
    assert!(rep.max_distortion <= 0.25);
}

#[test]
fn bootstrap_stays_within_budget() {
    let i = random_terms(Family::Grid, 48, 16, 5);
    let (out, rep) = bootstrap_emulator(&i, 0.5).unwrap();
    assert!(verify_emulator(&i, &out, 0.5).unwrap().pass);
    assert!(rep.budget_total() <= 0.5 + 1e-12);
    let total: f64 = rep.stages.iter().map(|s| s.measured).sum();
    assert!(rep.max_distortion <= total + 1e-9);
    let (plain, _) = planar_emulator(&i, 0.5).unwrap();
    assert!(out.n() <= 2 * plain.n());
}

#[test]
fn bootstrap_rejects_many_terminals() {
    let i = random_terms(Family::Grid, 10, 50, 0);
    assert!(matches!(bootstrap_emulator(&i, 0.5), Err(Error::PreconditionKTooLarge { .. })));
}

#[test]
fn schedule_is_increasing() {
    let cfg = PipelineConfig::with_eps(0.25);
    for n in [100, 5000, 1 << 20] {
        let s = cfg.bootstrap_schedule(n);
        assert!(s.windows(2).all(|w| w[0] < w[1]), "{s:?}");
        assert!(s.iter().all(|&r| r >= 16));
    }
    assert_eq!(cfg.iterations_for(64), 3);
    assert_eq!(cfg.iterations_for(256), 3);
    assert_eq!(cfg.iterations_for(2), 1);
}

#[test]
fn rounding_moves_weights_to_powers() {
    let i = random_terms(Family::Grid, 6, 4, 0);
    let base = 1.0 + 0.25 / 8.0;
    let g = round_weights(&i.graph, base).unwrap();
    for (a, b) in i.graph.edges().iter().zip(g.edges()) {
        let e = b.w.ln() / base.ln();
        assert!((e - e.round()).abs() < 1e-9);
        assert!((b.w / a.w).ln().abs() <= base.ln() / 2.0 + 1e-12);
    }
}

#[test]
fn oracle_answers_within_bound() {
    let i = generate(&GeneratorSpec::new(Family::Grid, 64, 64).weights(WeightDist::Uniform).seed(6)).unwrap();
    let o = build_oracle(&i, 0.25).unwrap();
    let exact = exact_oracle(&i);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(0..i.k()), rng.gen_range(0..i.k()));
        let q = o.query(i.terminals[a], i.terminals[b]).unwrap();
        let d = exact.get(a, b);
        if a == b {
            assert_eq!(q, 0.0);
        } else {
            assert!((q / d).ln().abs() <= 0.25 + 1e-9);
        }
    }
    let t = i.terminals[3];
    assert_eq!(o.query(t, t).unwrap(), 0.0);
    let non = (0..i.n()).find(|v| !i.terminals.contains(v)).unwrap();
    assert!(matches!(o.query(non, t), Err(Error::UnknownTerminal(_))));
}

#[test]
fn exact_oracle_for_few_terminals() {
    let i = generate(&GeneratorSpec::new(Family::Grid, 12, 6).weights(WeightDist::Uniform).seed(8)).unwrap();
    let o = build_oracle(&i, 0.0).unwrap();
    let exact = exact_oracle(&i);
    for a in 0..i.k() {
        for b in 0..i.k() {
            assert!((o.query(i.terminals[a], i.terminals[b]).unwrap() - exact.get(a, b)).abs() < 1e-9);
        }
    }
}
