//! Geometry of the built-in presentations: exact coordinates, window
//! tree-ness, orders, arcs, distances, and endpoint classification.

use dendrodyn_constructions::{build, ConstructionId};
use dendrodyn_core::geometry::{arc, convex_hull, diameter, distance, retraction};
use dendrodyn_core::ids::{Point, VertexId};
use dendrodyn_core::num::{q, qi, q_zero};
use dendrodyn_core::presentation::Presentation;
use dendrodyn_core::topology::{classify, free_arc_decomposition, order, truncate};
use std::sync::Arc;

fn pres(id: ConstructionId) -> Arc<Presentation> {
    Presentation::new(build(&id).dendrite).expect("valid presentation")
}

fn vx(f: &str, idx: &[i64]) -> Point {
    Point::Vertex(VertexId::new(f, idx.to_vec()))
}

#[test]
fn example1_coordinates_match_the_construction() {
    let p = pres(ConstructionId::Example1);
    assert_eq!(p.vertex_coord(&VertexId::new("a", vec![2])).unwrap(), (q(2, 3), q_zero()));
    assert_eq!(p.vertex_coord(&VertexId::new("b", vec![2, 0])).unwrap(), (q(2, 3), q(1, 3)));
    assert_eq!(p.vertex_coord(&VertexId::new("b", vec![1, 0])).unwrap(), (q(1, 2), q(-1, 2)));
    assert_eq!(p.vertex_coord(&VertexId::new("w", vec![0])).unwrap(), (q_zero(), q(1, 2)));
    assert_eq!(p.vertex_coord(&VertexId::new("e", vec![])).unwrap(), (qi(1), q_zero()));
    // b_n^k converges to w_n
    assert_eq!(p.vertex_coord(&VertexId::new("b", vec![0, 1])).unwrap(), (q_zero(), q(3, 4)));
}

#[test]
fn windows_are_trees_for_every_construction() {
    for id in [
        ConstructionId::Example1,
        ConstructionId::Example2,
        ConstructionId::Example4,
        ConstructionId::Gehman { depth: 5 },
        ConstructionId::Tent,
        ConstructionId::StuntedTent { h: q(3, 4) },
    ] {
        let p = pres(id.clone());
        for d in [4u32, 8] {
            let t = p.truncation(d).unwrap_or_else(|e| panic!("{id:?} depth {d}: {e}"));
            assert_eq!(t.edges.len() + 1, t.verts.len(), "{id:?} depth {d}");
        }
    }
}

#[test]
fn truncation_is_monotone_in_depth() {
    let p = pres(ConstructionId::Example1);
    let t4 = truncate(&p, 4).unwrap();
    let t8 = truncate(&p, 8).unwrap();
    assert!(t8.contains(&p, &t4).unwrap());
    assert!(!t4.contains(&p, &t8).unwrap());
}

#[test]
fn example1_orders() {
    let p = pres(ConstructionId::Example1);
    assert_eq!(order(&p, &vx("b", &[0, 0]), 4).unwrap(), 1, "branch tip");
    assert_eq!(order(&p, &vx("e", &[]), 4).unwrap(), 1, "spine limit");
    assert_eq!(order(&p, &vx("a", &[1]), 4).unwrap(), 3, "spine junction");
    assert_eq!(order(&p, &vx("a", &[0]), 4).unwrap(), 2, "spine start");
    assert_eq!(order(&p, &vx("w", &[3]), 4).unwrap(), 2, "branch midpoint");
    assert_eq!(order(&p, &vx("b", &[2, 5]), 8).unwrap(), 2, "interior rung vertex");
    let mid = Point::OnEdge(dendrodyn_core::EdgeId::new("spine", vec![1]), q(1, 2));
    assert_eq!(order(&p, &mid, 4).unwrap(), 2, "free-arc midpoint");
}

#[test]
fn example1_arc_from_tip_to_spine_limit_passes_every_junction() {
    let p = pres(ConstructionId::Example1);
    let a = arc(&p, &vx("b", &[0, 0]), &vx("e", &[])).unwrap();
    for n in 0..6 {
        assert!(
            a.contains_point(&p, &vx("a", &[n])).unwrap(),
            "arc must pass a_{n}"
        );
    }
    assert!(a.contains_point(&p, &vx("w", &[0])).unwrap());
    assert!(!a.contains_point(&p, &vx("w", &[1])).unwrap());
    assert!(!a.contains_point(&p, &vx("b", &[1, 0])).unwrap());
    // degenerate arc
    let d = arc(&p, &vx("a", &[1]), &vx("a", &[1])).unwrap();
    assert!(d.contains_point(&p, &vx("a", &[1])).unwrap());
    assert!(!d.contains_point(&p, &vx("a", &[2])).unwrap());
}

#[test]
fn example1_arc_between_tips_uses_the_spine() {
    let p = pres(ConstructionId::Example1);
    let a = arc(&p, &vx("b", &[0, 0]), &vx("b", &[2, 0])).unwrap();
    for n in 0..=2 {
        assert!(a.contains_point(&p, &vx("a", &[n])).unwrap());
    }
    assert!(a.contains_point(&p, &vx("w", &[2])).unwrap());
    assert!(!a.contains_point(&p, &vx("a", &[3])).unwrap());
    assert!(!a.contains_point(&p, &vx("e", &[])).unwrap());
}

#[test]
fn example1_distances_are_exact() {
    let p = pres(ConstructionId::Example1);
    assert_eq!(distance(&p, &vx("a", &[0]), &vx("a", &[1])).unwrap(), q(1, 2));
    // tip to spine limit: branch (1) plus spine remainder (1)
    assert_eq!(distance(&p, &vx("b", &[0, 0]), &vx("e", &[])).unwrap(), qi(2));
    // across two branches: down 1, along 1/2, up 1/2
    assert_eq!(distance(&p, &vx("b", &[0, 0]), &vx("b", &[1, 0])).unwrap(), qi(2));
    // diam of the spine arc [a_0, a_2]
    let spine = arc(&p, &vx("a", &[0]), &vx("a", &[2])).unwrap();
    assert_eq!(diameter(&p, &spine).unwrap(), q(2, 3));
}

#[test]
fn example1_classification_collapses_endpoint_accumulation_to_the_spine_limit() {
    let p = pres(ConstructionId::Example1);
    let r = classify(&p, 6).unwrap();
    let e = VertexId::new("e", vec![]);
    assert!(r.endpoints.contains(&e));
    for n in 0..=6 {
        assert!(r.endpoints.contains(&VertexId::new("b", vec![n, 0])), "b_{n} is an endpoint");
        if n >= 1 {
            assert!(r.branch_points.contains(&VertexId::new("a", vec![n])));
        }
    }
    assert!(!r.branch_points.contains(&VertexId::new("a", vec![0])));
    assert_eq!(r.endpoint_derived, vec![e]);
    assert!(r.endpoint_second_derived.is_empty());
}

#[test]
fn example4_second_derived_endpoint_estimate_is_the_origin() {
    let p = pres(ConstructionId::Example4);
    let r = classify(&p, 6).unwrap();
    let a0 = VertexId::new("a0", vec![]);
    assert!(r.endpoint_derived.contains(&a0));
    for n in 1..=4 {
        assert!(
            r.endpoint_derived.contains(&VertexId::new("alim", vec![n])),
            "alim_{n} accumulates tooth tips"
        );
    }
    assert_eq!(r.endpoint_second_derived, vec![a0]);
}

#[test]
fn retraction_onto_the_spine() {
    let p = pres(ConstructionId::Example1);
    let spine = arc(&p, &vx("a", &[0]), &vx("e", &[])).unwrap();
    let r = retraction(&p, &spine, &vx("b", &[3, 0])).unwrap();
    assert!(p.points_eq(&r, &vx("a", &[3])));
    // identity on the target
    let r2 = retraction(&p, &spine, &vx("a", &[2])).unwrap();
    assert!(p.points_eq(&r2, &vx("a", &[2])));
    // retraction onto a single point
    let single = dendrodyn_core::Subdendrite::point(&p, &vx("w", &[1])).unwrap();
    let r3 = retraction(&p, &single, &vx("b", &[4, 0])).unwrap();
    assert!(p.points_eq(&r3, &vx("w", &[1])));
}

#[test]
fn hull_of_three_tips_is_base_independent_with_endpoints_inside_the_set() {
    let p = pres(ConstructionId::Example1);
    let pts = vec![vx("b", &[0, 0]), vx("b", &[1, 0]), vx("b", &[2, 0])];
    let h0 = convex_hull(&p, &pts, &pts[0]).unwrap();
    let h1 = convex_hull(&p, &pts, &pts[1]).unwrap();
    let h2 = convex_hull(&p, &pts, &pts[2]).unwrap();
    assert_eq!(h0, h1);
    assert_eq!(h1, h2);
    assert!(h0.contains_point(&p, &vx("a", &[1])).unwrap());
    let ends = h0.endpoints(&p).unwrap();
    assert_eq!(ends.len(), 3);
    for e in ends {
        assert!(pts.iter().any(|q| p.points_eq(q, &e)));
    }
}

#[test]
fn free_arcs_of_a_spine_window_split_at_junctions() {
    let p = pres(ConstructionId::Example1);
    let spine03 = arc(&p, &vx("a", &[0]), &vx("a", &[3])).unwrap();
    let rep = free_arc_decomposition(&p, &spine03, 8).unwrap();
    assert_eq!(rep.components.len(), 3);
    assert!(rep.hidden_notes.is_empty());
    // single free arc stays whole
    let one = arc(&p, &vx("a", &[1]), &vx("a", &[2])).unwrap();
    let rep1 = free_arc_decomposition(&p, &one, 8).unwrap();
    assert_eq!(rep1.components.len(), 1);
}

#[test]
fn example2_feet_are_dense_and_the_segment_decomposes_at_known_feet() {
    let p = pres(ConstructionId::Example2);
    // foot positions for the first two levels
    let f = |k: i64| p.attach_info(&VertexId::new("F", vec![k])).unwrap().1;
    assert_eq!(f(1), q(1, 2));
    assert_eq!(f(2), q(1, 4));
    assert_eq!(f(3), q(3, 4));
    assert_eq!(f(4), q(7, 8));
    assert_eq!(f(7), q(1, 8));
    // tooth heights follow the level
    assert_eq!(p.vertex_coord(&VertexId::new("T", vec![1])).unwrap().1, qi(1));
    assert_eq!(p.vertex_coord(&VertexId::new("T", vec![2])).unwrap().1, q(1, 2));
    assert_eq!(p.vertex_coord(&VertexId::new("T", vec![5])).unwrap().1, q(1, 3));
    // the whole spine with feet attached: K known feet split it into K+1 slices
    let spine = arc(&p, &vx("A", &[]), &vx("B", &[])).unwrap();
    let rep = free_arc_decomposition(&p, &spine, 4).unwrap();
    assert_eq!(rep.components.len(), 5, "4 feet known at depth 4");
    assert!(!rep.hidden_notes.is_empty(), "denser feet hide below the window");
}

#[test]
fn example2_orders() {
    let p = pres(ConstructionId::Example2);
    assert_eq!(order(&p, &vx("A", &[]), 4).unwrap(), 1);
    assert_eq!(order(&p, &vx("B", &[]), 4).unwrap(), 2);
    assert_eq!(order(&p, &vx("F", &[2]), 4).unwrap(), 3);
    assert_eq!(order(&p, &vx("T", &[2]), 4).unwrap(), 1);
    let mid = Point::OnSegment(dendrodyn_core::SegId("spine".into()), q(1, 3));
    assert_eq!(order(&p, &mid, 4).unwrap(), 2);
}

#[test]
fn gehman_counts_and_orders() {
    for d in [1u32, 3, 5] {
        let p = pres(ConstructionId::Gehman { depth: d });
        let r = classify(&p, d).unwrap();
        assert_eq!(r.endpoints.len(), (1 << d) + 1, "leaves plus the stem tip");
        assert_eq!(r.branch_points.len(), (1 << d) - 1);
        for b in &r.branch_points {
            assert_eq!(p.vertex_order(b).unwrap(), 3);
        }
    }
}

#[test]
fn example4_window_is_a_tree_and_orders_are_right() {
    let p = pres(ConstructionId::Example4);
    assert_eq!(order(&p, &vx("a0", &[]), 4).unwrap(), 1);
    assert_eq!(order(&p, &vx("b", &[1]), 4).unwrap(), 2);
    assert_eq!(order(&p, &vx("b", &[2]), 4).unwrap(), 3);
    assert_eq!(order(&p, &vx("c", &[1, 1]), 4).unwrap(), 3);
    assert_eq!(order(&p, &vx("a", &[1, 1]), 4).unwrap(), 1);
    assert_eq!(order(&p, &vx("alim", &[2]), 4).unwrap(), 1);
}

#[test]
fn tail_arcs_remain_exact_across_window_depths() {
    let p = pres(ConstructionId::Example1);
    // distance from a chain vertex to its limit is the coordinate gap
    let d = distance(&p, &vx("b", &[0, 3]), &vx("w", &[0])).unwrap();
    assert_eq!(d, q(1, 16), "2^-3 of the half-branch 1/2");
    // the same arc computed in a much deeper window has equal length
    let _ = p.truncation(32).unwrap();
    let d2 = distance(&p, &vx("b", &[0, 3]), &vx("w", &[0])).unwrap();
    assert_eq!(d, d2);
}
