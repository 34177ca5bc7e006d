mod common;

use std::sync::Arc;

use common::{big, circuit_ids, cover_down, pow3};
use covertower::graph::*;
use covertower::point::project_vertex;
use covertower::{Tower, TowerConfig};
use num_traits::ToPrimitive;

fn graph(n: usize, edges: &[(usize, usize)]) -> Arc<DirectedGraph> {
    Arc::new(DirectedGraph::new(n, edges.iter().copied()).unwrap())
}

fn ids(vs: &[usize]) -> Vec<VertexId> {
    vs.iter().copied().map(VertexId::new).collect()
}

#[test]
fn surjectivity_examples() {
    assert!(check_edge_surjective(&graph(1, &[(0, 0)])));
    assert!(!check_edge_surjective(&graph(2, &[(0, 1)])));
    assert!(check_edge_surjective(&graph(3, &[(0, 1), (1, 2), (2, 0)])));
}

#[test]
fn subgraph_inclusion_is_not_a_cover() {
    let big_g = graph(2, &[(0, 0), (0, 1), (1, 0)]);
    let small = graph(2, &[(0, 1), (1, 0)]);
    let inc = GraphHom::new(small, big_g, vec![0, 1]).unwrap();
    assert!(inc.is_homomorphism());
    assert!(!check_cover(&inc));
}

#[test]
fn composition_identity_law() {
    let t = Tower::with_default_config(3);
    let h = t.materialize_cover(1).unwrap();
    let id = GraphHom::identity(h.target().clone());
    assert_eq!(compose(&id, &h).unwrap().vertex_map(), h.vertex_map());
    assert!(compose(&h, &h).is_err());
}

#[test]
fn composite_covers_match_level_by_level_projection() {
    let t = Tower::with_default_config(4);
    let phi31 = compose(&t.materialize_cover(1).unwrap(), &t.materialize_cover(2).unwrap()).unwrap();
    assert!(check_cover(&phi31));
    for id in phi31.source().vertices() {
        let v = t.vertex_of_id(3, id).unwrap();
        let image = t.vertex_of_id(1, phi31.apply(id)).unwrap();
        assert_eq!(project_vertex(&t, &v, 1).unwrap(), image, "{v}");
    }
    for d in 2..=4 {
        for n in 0..d {
            assert!(check_cover(&cover_down(&t, d, n)), "phi_{{{d},{n}}}");
        }
    }
}

#[test]
fn cover_of_second_level_circuit_spells_template() {
    let t = Tower::with_default_config(3);
    let phi1 = t.materialize_cover(1).unwrap();
    let lvl2 = t.materialize_level(2).unwrap();
    let walk = WalkSeq::new(&lvl2, circuit_ids(&t, 2, 1)).unwrap();
    let image = map_walk(&phi1, &walk).unwrap();
    assert_eq!(image.len(), walk.len());
    let c11 = circuit_ids(&t, 1, 1);
    // e + c_{1,1} + c_{1,1} + e
    let mut spelled = vec![c11[0], c11[0]];
    spelled.extend_from_slice(&c11[1..]);
    spelled.extend_from_slice(&c11[1..]);
    spelled.push(c11[0]);
    assert_eq!(image.vertices(), &spelled[..]);

    // the top circuit collapses onto the base
    let phi2 = t.materialize_cover(2).unwrap();
    let lvl3 = t.materialize_level(3).unwrap();
    let top = WalkSeq::new(&lvl3, circuit_ids(&t, 3, 3)).unwrap();
    let image = map_walk(&phi2, &top).unwrap();
    assert_eq!(image.len(), 2);
    assert!(image.vertices().iter().all(|v| v.index() == 0));
}

#[test]
fn walk_algebra() {
    let g = graph(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]);
    let w1 = WalkSeq::new(&g, ids(&[0, 1, 2, 0])).unwrap();
    let w2 = WalkSeq::new(&g, ids(&[0, 1, 2, 0, 1])).unwrap();
    assert_eq!(concat_walks(&w1, &w2).unwrap().len(), 7);
    assert_eq!(
        concat_walks(&w1, &WalkSeq::trivial(VertexId::new(0))).unwrap(),
        w1
    );
    assert!(concat_walks(&w2, &w1).is_err());
    let twice = concat_walks(&w1, &w1).unwrap();
    assert_eq!(classify_walk(&w1), WalkKind::Circuit);
    assert_eq!(classify_walk(&twice), WalkKind::Cycle);
    assert_eq!(classify_walk(&WalkSeq::new(&g, ids(&[0, 1, 2])).unwrap()), WalkKind::Path);
    assert_eq!(classify_walk(&WalkSeq::new(&g, ids(&[0, 1, 0])).unwrap()), WalkKind::Circuit);
    assert_eq!(
        classify_walk(&WalkSeq::new(&g, ids(&[0, 1, 0, 1, 0])).unwrap()),
        WalkKind::Cycle
    );
    assert_eq!(classify_walk(&w2), WalkKind::Walk);
    assert!(WalkSeq::new(&g, ids(&[0, 2])).is_err());
}

#[test]
fn dot_export_is_sorted() {
    let g = graph(3, &[(2, 0), (0, 1), (1, 2)]);
    let dot = g.to_dot("tri");
    assert_eq!(
        dot,
        "digraph \"tri\" {\n  0 [label=\"0\"];\n  1 [label=\"1\"];\n  2 [label=\"2\"];\n  0 -> 1;\n  1 -> 2;\n  2 -> 0;\n}\n"
    );
}

#[test]
fn lengths_follow_closed_form_to_level_30() {
    let t = Tower::with_default_config(30);
    for n in 1..=30 {
        for i in 1..=n {
            assert_eq!(
                t.circuit_length(n, i).unwrap(),
                &(pow3((n - i) as u32) * 2u32),
                "l({n},{i})"
            );
        }
    }
    assert!(t.circuit_length(30, 1).unwrap().to_u64().is_some());
    let deep = Tower::with_default_config(45);
    assert!(deep.circuit_length(45, 1).unwrap().to_u64().is_none());
}

#[test]
fn lengths_match_explicit_expansion() {
    let t = Tower::with_default_config(8);
    for n in 1..8 {
        for i in 1..=n + 1 {
            // count the template's edges vertex by vertex
            let tmpl = t.rewrite_template(n, i).unwrap();
            let lvl = t.materialize_level(n).unwrap();
            let mut steps = 0usize;
            for tok in tmpl.tokens() {
                let reps = tok.rep.to_usize().unwrap();
                steps += reps
                    * match tok.sym {
                        covertower::walk::Sym::Loop => 1,
                        covertower::walk::Sym::Circuit(c) => circuit_ids(&t, n, c).len() - 1,
                    };
            }
            assert!(lvl.vertex_count() > 0);
            assert_eq!(big(steps as u64), *t.circuit_length(n + 1, i).unwrap());
        }
    }
    for n in 0..=8 {
        let expected = pow3(n as u32) - big(n as u64);
        assert_eq!(t.vertex_count(n).unwrap(), expected);
        assert_eq!(big(t.materialize_level(n).unwrap().vertex_count() as u64), expected);
    }
}

#[test]
fn length_monotonicity_exhaustive() {
    let t = Tower::with_default_config(12);
    for n in 1..=12 {
        for m in n + 1..=12 {
            for l in 1..=n {
                for lp in l..=n {
                    assert!(t.circuit_length(m, l).unwrap() > t.circuit_length(n, lp).unwrap());
                }
            }
        }
    }
}

#[test]
fn generalized_schedules_still_give_covers() {
    let cfg = TowerConfig::parse("depth = 4\ntop_length = [2, 3, 4, 5]\nmult = [2, 3, 2]\n").unwrap();
    let t = Tower::build(cfg).unwrap();
    for n in 0..4 {
        let h = t.materialize_cover(n).unwrap();
        assert!(check_cover(&h) && check_bidirectional(&h), "phi_{n}");
    }
    assert_eq!(t.circuit_length(2, 2).unwrap(), &big(3));
}
