//! Orbit evaluation against the built-in systems, including the binding
//! fifteen-step tip orbit of the alternating-comb system.

use dendrodyn_constructions::{build, ConstructionId};
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{q, qi};
use dendrodyn_dynamics::map::check_continuity;
use dendrodyn_dynamics::System;

fn system(id: ConstructionId) -> System {
    System::from_doc(build(&id)).expect("system builds")
}

fn vx(f: &str, idx: &[i64]) -> Point {
    Point::Vertex(dendrodyn_core::VertexId::new(f, idx.to_vec()))
}

#[test]
fn example1_gold_orbit_first_fifteen_steps() {
    let sys = system(ConstructionId::Example1);
    let orbit = sys.map.orbit(&vx("b", &[0, 0]), 15).unwrap();
    let labels = orbit.labels();
    assert_eq!(
        labels,
        vec![
            "b_0", "b_1", "b_2", "b_0^1", "b_1^1", "b_3", "b_4", "b_2^1", "b_0^2", "b_1^2",
            "b_3^1", "b_5", "b_6", "b_4^1", "b_2^2", "b_0^3",
        ]
    );
}

#[test]
fn example1_fixed_end_and_semigroup() {
    let sys = system(ConstructionId::Example1);
    let e = vx("e", &[]);
    assert!(sys.pres.points_eq(&sys.map.apply(&e).unwrap(), &e));
    // f(b_2) lands on the first deep rung of branch 0
    let img = sys.map.apply(&vx("b", &[2, 0])).unwrap();
    assert!(sys.pres.points_eq(&img, &vx("b", &[0, 1])));
    // semigroup spot check on a non-vertex point
    let p = Point::OnEdge(dendrodyn_core::EdgeId::new("trunk", vec![1]), q(1, 3));
    for (a, b) in [(1u32, 2u32), (3, 4), (2, 5)] {
        let lhs = sys.map.apply_power(&p, a + b).unwrap();
        let rhs = sys.map.apply_power(&sys.map.apply_power(&p, b).unwrap(), a).unwrap();
        assert!(sys.pres.points_eq(&lhs, &rhs));
    }
}

#[test]
fn example1_continuity_is_clean_and_a_corrupted_rule_is_flagged() {
    let sys = system(ConstructionId::Example1);
    let rep = check_continuity(&sys.map, 6).unwrap();
    assert!(rep.ok(), "violations: {:?}", rep.violations);
    assert!(rep.tail_warnings.is_empty());

    // corrupt the trunk rule at the junction a_1: its start image becomes
    // a_3 while the spine rules still send a_1 to a_2
    let mut doc = build(&ConstructionId::Example1);
    let map_doc = doc.map.as_mut().unwrap();
    for rule in &mut map_doc.rules {
        if let dendrodyn_core::doc::RuleTarget::Edge(f) = &rule.target {
            if f == "trunk"
                && rule
                    .guard
                    .atoms
                    .iter()
                    .any(|a| matches!(a, dendrodyn_core::expr::Atom::ModEq { residue: 1, .. }))
            {
                if let dendrodyn_core::doc::PointExpr::Vertex(v) = &mut rule.pieces[0].1 {
                    v.idx[0] = dendrodyn_core::expr::IndexMap::shifted(0, 2);
                }
            }
        }
    }
    let bad = System::from_doc(doc).unwrap();
    let rep = check_continuity(&bad.map, 6).unwrap();
    assert!(!rep.ok());
    let at_junctions: Vec<_> = rep
        .violations
        .iter()
        .filter(|v| v.vertex.family == "a" && v.vertex.idx[0] % 2 == 1)
        .collect();
    assert!(!at_junctions.is_empty(), "violation localized at odd junctions");
}

#[test]
fn example2_endpoint_orbit_and_spine_fixed() {
    let sys = system(ConstructionId::Example2);
    let rep = check_continuity(&sys.map, 6).unwrap();
    assert!(rep.ok(), "violations: {:?}", rep.violations);
    let orbit = sys.map.orbit(&vx("T", &[0]), 3).unwrap();
    assert_eq!(orbit.labels(), vec!["T_0", "T_1", "T_2", "T_3"]);
    // every spine point is fixed
    let s = Point::OnSegment(dendrodyn_core::SegId("spine".into()), q(17, 97));
    assert!(sys.pres.points_eq(&sys.map.apply(&s).unwrap(), &s));
    let a = vx("A", &[]);
    assert!(sys.pres.points_eq(&sys.map.apply(&a).unwrap(), &a));
}

#[test]
fn example4_tip_orbit_sweeps_diagonally_and_continuity_holds() {
    let sys = system(ConstructionId::Example4);
    let rep = check_continuity(&sys.map, 5).unwrap();
    assert!(rep.ok(), "violations: {:?} gaps: {:?}", rep.violations, rep.coverage_gaps);
    // a_1^1 -> a_1^2 -> a_2^1 -> a_1^3 -> a_2^2 -> a_3^1 -> a_1^4 in the
    // (tooth, copy) reading; families are indexed [copy, tooth]
    let orbit = sys.map.orbit(&vx("a", &[1, 1]), 6).unwrap();
    let expect = [
        vx("a", &[1, 1]),
        vx("a", &[2, 1]),
        vx("a", &[1, 2]),
        vx("a", &[3, 1]),
        vx("a", &[2, 2]),
        vx("a", &[1, 3]),
        vx("a", &[4, 1]),
    ];
    for (got, want) in orbit.entries.iter().zip(&expect) {
        assert!(sys.pres.points_eq(got, want), "got {got}, want {want}");
    }
    // the interval chain collapses down to the fixed junction b_1
    let orbit = sys.map.orbit(&vx("b", &[4]), 4).unwrap();
    assert!(sys.pres.points_eq(&orbit.entries[3], &vx("b", &[1])));
    assert!(sys.pres.points_eq(&orbit.entries[4], &vx("b", &[1])));
    // the origin is fixed
    let a0 = vx("a0", &[]);
    assert!(sys.pres.points_eq(&sys.map.apply(&a0).unwrap(), &a0));
}

#[test]
fn tent_evaluation_matches_the_formula() {
    let sys = system(ConstructionId::Tent);
    let edge = dendrodyn_core::EdgeId::new("unit", vec![]);
    let at = |n: i64, d: i64| Point::OnEdge(edge.clone(), q(n, d));
    let img = sys.map.apply(&at(1, 3)).unwrap();
    assert!(sys.pres.points_eq(&img, &at(2, 3)));
    let img = sys.map.apply(&at(3, 4)).unwrap();
    assert!(sys.pres.points_eq(&img, &at(1, 2)));
    // identity-like check at the endpoint vertices
    let p0 = vx("p0", &[]);
    assert!(sys.pres.points_eq(&sys.map.apply(&p0).unwrap(), &p0));
    let p1 = vx("p1", &[]);
    assert!(sys.pres.points_eq(&sys.map.apply(&p1).unwrap(), &p0));
}

#[test]
fn stunted_tent_plateau_collapse_matches_the_oracle() {
    let h = q(3, 4);
    let sys = system(ConstructionId::StuntedTent { h: h.clone() });
    let oracle = dendrodyn_testkit::Pl1::stunted_tent(&h);
    let edge = dendrodyn_core::EdgeId::new("unit", vec![]);
    for (n, d) in [(1i64, 7i64), (2, 7), (1, 2), (5, 7), (9, 10), (1, 16)] {
        let x = q(n, d);
        let img = sys.map.apply(&Point::OnEdge(edge.clone(), x.clone())).unwrap();
        let want = oracle.eval(&dendrodyn_testkit::q(n, d));
        let got = match sys.pres.canonical_point(img).unwrap() {
            Point::OnEdge(_, t) => t,
            Point::Vertex(v) if v.family == "p0" => qi(0),
            Point::Vertex(_) => qi(1),
            _ => unreachable!(),
        };
        assert_eq!(got, want, "stunted tent at {n}/{d}");
    }
}

#[test]
fn identity_like_orbit_is_constant() {
    let sys = system(ConstructionId::Example2);
    let s = Point::OnSegment(dendrodyn_core::SegId("spine".into()), q(5, 16));
    let orbit = sys.map.orbit(&s, 10).unwrap();
    for p in &orbit.entries {
        assert!(sys.pres.points_eq(p, &s));
    }
}
