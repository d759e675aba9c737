use super::*;

fn grid(rows: usize, cols: usize) -> PlaneGraph {
    let mut coords = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            coords.push((c as f64, r as f64));
        }
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push(Edge { u: v, v: v + 1, w: 1.0 });
            }
            if r + 1 < rows {
                edges.push(Edge { u: v, v: v + cols, w: 1.0 });
            }
        }
    }
    from_coordinates(&coords, edges).unwrap()
}

fn cycle(n: usize) -> PlaneGraph {
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let edges = (0..n).map(|i| Edge { u: i, v: (i + 1) % n, w: 1.0 }).collect();
    from_coordinates(&coords, edges).unwrap()
}

fn k4() -> PlaneGraph {
    let coords = [(0.0, 0.0), (4.0, 0.0), (2.0, 4.0), (2.0, 1.5)];
    let mut edges = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            edges.push(Edge { u, v, w: 1.0 });
        }
    }
    from_coordinates(&coords, edges).unwrap()
}

fn bellman_ford(g: &PlaneGraph, s: VertexId) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; g.n()];
    d[s] = 0.0;
    for _ in 0..g.n() {
        for e in g.edges() {
            if d[e.u] + e.w < d[e.v] {
                d[e.v] = d[e.u] + e.w;
            }
            if d[e.v] + e.w < d[e.u] {
                d[e.u] = d[e.v] + e.w;
            }
        }
    }
    d
}

fn all_simple_paths(g: &PlaneGraph, s: VertexId, t: VertexId) -> Vec<Path> {
    let mut out = Vec::new();
    let mut darts = Vec::new();
    let mut on = vec![false; g.n()];
    fn rec(g: &PlaneGraph, x: VertexId, t: VertexId, s: VertexId, on: &mut Vec<bool>, darts: &mut Vec<DartId>, out: &mut Vec<Path>) {
        if x == t {
            out.push(Path::from_darts(g, s, darts.clone()).unwrap());
            return;
        }
        for &d in g.rotation(x) {
            let y = g.head(d);
            if !on[y] {
                on[y] = true;
                darts.push(d);
                rec(g, y, t, s, on, darts, out);
                darts.pop();
                on[y] = false;
            }
        }
    }
    on[s] = true;
    rec(g, s, t, s, &mut on, &mut darts, &mut out);
    out
}

#[test]
fn four_cycle_has_two_faces() {
    let g = cycle(4);
    assert_eq!(g.num_faces(), 2);
}

#[test]
fn three_by_three_grid_has_five_faces() {
    let g = grid(3, 3);
    assert_eq!((g.n(), g.m(), g.num_faces()), (9, 12, 5));
    let outer = g.outer_face().unwrap();
    assert_eq!(g.faces()[outer].len(), 8);
}

#[test]
fn k4_has_four_faces() {
    assert_eq!(k4().num_faces(), 4);
}

#[test]
fn twisted_rotation_is_rejected() {
    let g = k4();
    let mut rot = g.rotations().to_vec();
    rot[0].swap(0, 1);
    let err = PlaneGraph::new(g.edges().to_vec(), rot, None, false).unwrap_err();
    assert!(matches!(err, Error::NonPlanarEmbedding { .. }));
}

#[test]
fn rejects_negative_weight_and_disconnection() {
    let err = build_plane_graph(&[(0, 1, -1.0)], vec![vec![0], vec![1]], None, false).unwrap_err();
    assert!(matches!(err, Error::NegativeWeight { .. }));
    let err = build_plane_graph(&[(0, 1, 1.0)], vec![vec![0], vec![1], vec![]], None, false).unwrap_err();
    assert!(matches!(err, Error::DisconnectedInput { components: 2 }));
    assert!(build_plane_graph(&[(0, 1, 1.0)], vec![vec![0], vec![1], vec![]], None, true).is_ok());
}

#[test]
fn path_graph_shortest_path() {
    let g = build_plane_graph(&[(0, 1, 1.0), (1, 2, 1.0)], vec![vec![0], vec![1, 2], vec![3]], None, false)
        .unwrap();
    let p = shortest_path(&g, 0, 2).unwrap();
    assert_eq!(p.weight, 2.0);
    assert_eq!(p.vertices, vec![0, 1, 2]);
}

#[test]
fn four_cycle_prefers_lower_sequence() {
    let g = cycle(4);
    let p = shortest_path(&g, 0, 2).unwrap();
    assert_eq!(p.vertices, vec![0, 1, 2]);
    let q = shortest_path(&g, 2, 0).unwrap();
    assert_eq!(q.vertices, vec![2, 1, 0]);
}

#[test]
fn grid_corner_path_is_key_minimum() {
    let g = grid(3, 3);
    let p = shortest_path(&g, 0, 8).unwrap();
    assert_eq!(p.weight, 4.0);
    let all = all_simple_paths(&g, 0, 8);
    let best: Vec<&Path> = all.iter().filter(|q| q.weight == 4.0).collect();
    assert_eq!(best.len(), 6);
    let min = best.iter().map(|q| q.key()).min().unwrap();
    assert_eq!(p.key(), min);
}

#[test]
fn brute_force_minimum_on_small_graphs() {
    let g = grid(3, 4);
    for s in 0..g.n() {
        for t in 0..g.n() {
            if s == t {
                continue;
            }
            let p = shortest_path(&g, s, t).unwrap();
            let min = all_simple_paths(&g, s.min(t), s.max(t)).iter().map(|q| q.key()).min().unwrap();
            let expect = if s < t { min.sequence.clone() } else { min.sequence.iter().rev().copied().collect() };
            assert_eq!(p.vertices, expect, "{s}->{t}");
        }
    }
}

#[test]
fn single_edge_distances() {
    let g = build_plane_graph(&[(0, 1, 7.0)], vec![vec![0], vec![1]], None, false).unwrap();
    let d = all_terminal_distances(&g, &[0, 1]);
    assert_eq!(d.data, vec![0.0, 7.0, 7.0, 0.0]);
}

#[test]
fn four_cycle_distances() {
    let d = all_terminal_distances(&cycle(4), &[0, 1, 2, 3]);
    for i in 0..4 {
        for j in 0..4 {
            let expect = [0.0, 1.0, 2.0, 1.0][(j + 4 - i) % 4];
            assert_eq!(d.get(i, j), expect);
        }
    }
}

#[test]
fn grid_boundary_distances_match_bellman_ford() {
    let g = grid(5, 5);
    let terms: Vec<VertexId> = g.outer_walk();
    assert_eq!(terms.len(), 16);
    let d = all_terminal_distances(&g, &terms);
    for (i, &s) in terms.iter().enumerate() {
        let bf = bellman_ford(&g, s);
        for (j, &t) in terms.iter().enumerate() {
            assert_eq!(d.get(i, j), bf[t]);
        }
    }
}

#[test]
fn cut_vertex_examples() {
    // two triangles sharing vertex 2
    let coords = [(0.0, 0.0), (0.0, 2.0), (1.0, 1.0), (2.0, 0.0), (2.0, 2.0)];
    let edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]
        .iter()
        .map(|&(u, v)| Edge { u, v, w: 1.0 })
        .collect();
    let g = from_coordinates(&coords, edges).unwrap();
    assert_eq!(cut_vertices(&g), vec![2]);
    assert_eq!(outer_walk_repeats(&g), vec![2]);
    assert_eq!(biconnected_components(&g).len(), 2);

    assert!(cut_vertices(&cycle(6)).is_empty());

    let coords: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 0.0)).collect();
    let edges = (0..4).map(|i| Edge { u: i, v: i + 1, w: 1.0 }).collect();
    let g = from_coordinates(&coords, edges).unwrap();
    assert_eq!(cut_vertices(&g), vec![1, 2, 3]);
    assert_eq!(biconnected_components(&g).len(), 4);
}

#[test]
fn slicing_middle_column() {
    let g = grid(3, 3);
    let p = Path::from_darts(&g, 1, vec![]).unwrap();
    let _ = p;
    let p = shortest_path(&g, 1, 7).unwrap();
    assert_eq!(p.vertices, vec![1, 4, 7]);
    let s = slice_along_path(&g, &p).unwrap();
    assert_eq!((s.graph.n(), s.graph.m()), (12, 14));
    let comp = s.graph.components();
    assert_eq!(comp.iter().max(), Some(&1));
    for c in 0..2 {
        let nv = comp.iter().filter(|&&x| x == c).count();
        let ne = s.graph.edges().iter().filter(|e| comp[e.u] == c).count();
        assert_eq!((nv, ne), (6, 7));
    }
    for v in [1, 4, 7] {
        assert_eq!(s.copies[v].len(), 2);
    }
}

#[test]
fn slicing_boundary_edge_keeps_distances() {
    let g = grid(3, 3);
    let p = shortest_path(&g, 0, 1).unwrap();
    let s = slice_along_path(&g, &p).unwrap();
    assert_eq!(s.graph.m(), g.m() + 1);
    let before = all_terminal_distances(&g, &(0..9).collect::<Vec<_>>());
    let after = all_terminal_distances(&s.graph, &(0..9).collect::<Vec<_>>());
    assert_eq!(before, after);
}

#[test]
fn slice_then_reglue_restores_graph() {
    let g = grid(4, 4);
    let p = shortest_path(&g, 1, 14).unwrap();
    let s = slice_along_path(&g, &p).unwrap();
    let groups: Vec<Vec<GlueCopy>> = s
        .copies
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            c.iter()
                .map(|w| GlueCopy { part: 0, vertex: w.vertex, corner: w.corner, anchor: w.first_key })
                .collect()
        })
        .collect();
    let a = assemble(&[&s.graph], &groups, s.graph.outer_dart().map(|d| (0, d))).unwrap();
    assert_eq!(a.graph.n(), g.n());
    assert!(a.graph.is_connected());
    // the doubled path edges leave 2-gons behind
    assert_eq!(a.graph.num_faces(), g.num_faces() + p.hops());
    let ids: Vec<VertexId> = (0..g.n()).collect();
    let back: Vec<VertexId> = (0..g.n()).map(|v| a.vertex_map[0][v]).collect();
    let d0 = all_terminal_distances(&g, &ids);
    let d1 = all_terminal_distances(&a.graph, &back);
    assert_eq!(d0, d1);
}

#[test]
fn suppression_merges_chains() {
    let g = cycle(6);
    let mut keep = vec![false; 6];
    keep[0] = true;
    keep[3] = true;
    let s = suppress_degree_two(&g, &keep).unwrap();
    assert_eq!((s.graph.n(), s.graph.m()), (2, 2));
    assert!(s.graph.edges().iter().all(|e| e.w == 3.0));
    let s = suppress_degree_two(&g, &[false; 6]).unwrap();
    assert_eq!((s.graph.n(), s.graph.m()), (1, 1));
    assert_eq!(s.graph.edge(0).w, 6.0);
}

#[test]
fn json_round_trip() {
    let g = grid(4, 5);
    let s = g.to_json();
    let h = PlaneGraph::from_json(&s).unwrap();
    assert_eq!(h.to_json(), s);
    assert_eq!(h.outer_face(), g.outer_face());
}

#[test]
fn well_structured_on_grid() {
    let g = grid(6, 6);
    let terms = g.outer_walk();
    let mut paths = Vec::new();
    for (i, &a) in terms.iter().enumerate() {
        for &b in &terms[i + 1..] {
            paths.push(shortest_path(&g, a, b).unwrap());
        }
    }
    for p in &paths {
        for q in &paths {
            let common: Vec<usize> =
                (0..p.vertices.len()).filter(|&i| q.vertices.contains(&p.vertices[i])).collect();
            if let (Some(&lo), Some(&hi)) = (common.first(), common.last()) {
                assert_eq!(hi - lo + 1, common.len());
            }
        }
    }
}
