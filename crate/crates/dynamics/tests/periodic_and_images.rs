//! Periodic-point solving and exact arc images, cross-checked against the
//! independent 1-D piecewise-linear oracle.

use dendrodyn_constructions::{build, stunted, ConstructionId};
use dendrodyn_core::geometry::arc;
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{q, qi, q_one, q_zero};
use dendrodyn_dynamics::image::{image_of_arc, sample_inside_image};
use dendrodyn_dynamics::periodic::{periodic_points, PeriodicItem};
use dendrodyn_dynamics::{CarrierId, System};
use dendrodyn_testkit::Pl1;

fn system(id: ConstructionId) -> System {
    System::from_doc(build(&id)).expect("system builds")
}

fn vx(f: &str, idx: &[i64]) -> Point {
    Point::Vertex(dendrodyn_core::VertexId::new(f, idx.to_vec()))
}

fn unit_edge() -> dendrodyn_core::EdgeId {
    dendrodyn_core::EdgeId::new("unit", vec![])
}

/// Edge parameter of a point on the unit interval systems.
fn param_of(sys: &System, p: &Point) -> dendrodyn_core::Q {
    match sys.pres.canonical_point(p.clone()).unwrap() {
        Point::OnEdge(_, t) => t,
        Point::Vertex(v) if v.family == "p0" => q_zero(),
        Point::Vertex(_) => q_one(),
        _ => unreachable!(),
    }
}

#[test]
fn tent_periodic_points_match_the_algebraic_oracle() {
    let sys = system(ConstructionId::Tent);
    let rep = periodic_points(&sys.map, 2, 4).unwrap();
    let mut fixed: Vec<_> = rep
        .points_with_period(1)
        .iter()
        .map(|p| param_of(&sys, p))
        .collect();
    fixed.sort();
    assert_eq!(fixed, vec![q_zero(), q(2, 3)]);
    let mut p2: Vec<_> = rep
        .points_with_period(2)
        .iter()
        .map(|p| param_of(&sys, p))
        .collect();
    p2.sort();
    assert_eq!(p2, vec![q(2, 5), q(4, 5)]);
    // oracle agreement
    let oracle = Pl1::tent();
    let (of, _) = oracle.fixed_points();
    assert_eq!(of, vec![qi(0), q(2, 3)]);
    assert_eq!(oracle.prime_periodic(2), vec![q(2, 5), q(4, 5)]);
}

#[test]
fn example1_periodic_points_collapse_to_the_spine_limit() {
    let sys = system(ConstructionId::Example1);
    let rep = periodic_points(&sys.map, 3, 6).unwrap();
    let pts: Vec<String> = rep.items.iter().map(|i| i.describe()).collect();
    assert_eq!(pts, vec!["e (period 1)"]);
}

#[test]
fn example2_fixed_segment_is_reported_once() {
    let sys = system(ConstructionId::Example2);
    let rep = periodic_points(&sys.map, 2, 4).unwrap();
    let segs: Vec<_> = rep
        .items
        .iter()
        .filter(|i| matches!(i, PeriodicItem::Segment { .. }))
        .collect();
    assert_eq!(segs.len(), 1);
    match segs[0] {
        PeriodicItem::Segment { carrier, lo, hi, period } => {
            assert_eq!(*period, 1);
            assert_eq!(*lo, q_zero());
            assert_eq!(*hi, q_one());
            assert!(matches!(carrier, CarrierId::S(s) if s.0 == "spine"));
        }
        _ => unreachable!(),
    }
    // no isolated periodic points besides the segment
    assert!(rep
        .items
        .iter()
        .all(|i| matches!(i, PeriodicItem::Segment { .. })));
}

#[test]
fn stunted_tent_period_eight_parameter_has_the_doubling_cascade_spectrum() {
    let h = stunted::cascade_parameter(3);
    let sys = system(ConstructionId::StuntedTent { h: h.clone() });
    let rep = periodic_points(&sys.map, 8, 4).unwrap();
    let mut periods: Vec<u32> = rep
        .items
        .iter()
        .filter_map(|i| match i {
            PeriodicItem::Point { period, .. } => Some(*period),
            _ => None,
        })
        .collect();
    periods.sort();
    periods.dedup();
    assert_eq!(periods, vec![1, 2, 4, 8], "only power-of-two periods");
    let fixed: Vec<_> = rep.points_with_period(1).iter().map(|p| param_of(&sys, p)).collect();
    assert!(fixed.contains(&q_zero()));
    assert!(fixed.contains(&q(2, 3)));
    let p2: Vec<_> = rep.points_with_period(2).iter().map(|p| param_of(&sys, p)).collect();
    assert!(p2.contains(&q(2, 5)));
    assert!(p2.contains(&q(4, 5)));
    // the plateau cycle of period 8 is present and exact
    let p8 = rep.points_with_period(8);
    assert!(!p8.is_empty());
    let oracle = Pl1::stunted_tent(&h);
    for p in &p8 {
        let x = param_of(&sys, p);
        assert_eq!(oracle.iterate(8).eval(&x), x, "oracle confirms period 8");
    }
}

#[test]
fn tent_images_of_arcs_match_the_oracle() {
    let sys = system(ConstructionId::Tent);
    let e = unit_edge();
    let half = arc(
        &sys.pres,
        &vx("p0", &[]),
        &Point::OnEdge(e.clone(), q(1, 2)),
    )
    .unwrap();
    let img = image_of_arc(&sys.map, &half, 1).unwrap();
    // the rising leg covers the whole interval
    let whole = arc(&sys.pres, &vx("p0", &[]), &vx("p1", &[])).unwrap();
    assert_eq!(img, whole);
    // n = 0 is the identity
    let img0 = image_of_arc(&sys.map, &half, 0).unwrap();
    assert_eq!(img0, half);
    // oracle cross-check on a smaller arc across the fold
    let small = arc(
        &sys.pres,
        &Point::OnEdge(e.clone(), q(1, 3)),
        &Point::OnEdge(e.clone(), q(2, 3)),
    )
    .unwrap();
    let img = image_of_arc(&sys.map, &small, 1).unwrap();
    let (lo, hi) = Pl1::tent().image(&q(1, 3), &q(2, 3));
    let want = arc(
        &sys.pres,
        &Point::OnEdge(e.clone(), lo),
        &Point::OnEdge(e.clone(), hi),
    )
    .unwrap();
    assert_eq!(img, want);
    assert!(sample_inside_image(&sys.map, &small, &img, 16).unwrap());
}

#[test]
fn example1_spine_edge_shifts_outward() {
    let sys = system(ConstructionId::Example1);
    let spine0 = arc(&sys.pres, &vx("a", &[0]), &vx("a", &[1])).unwrap();
    let img = image_of_arc(&sys.map, &spine0, 1).unwrap();
    let want = arc(&sys.pres, &vx("a", &[1]), &vx("a", &[2])).unwrap();
    assert_eq!(img, want);
    assert!(sample_inside_image(&sys.map, &spine0, &img, 8).unwrap());
}

#[test]
fn example1_branch_arc_with_tail_maps_exactly() {
    let sys = system(ConstructionId::Example1);
    // the whole branch [a_0, b_0] includes the accumulation tail at w_0
    let branch = arc(&sys.pres, &vx("a", &[0]), &vx("b", &[0, 0])).unwrap();
    let img = image_of_arc(&sys.map, &branch, 1).unwrap();
    let want = arc(&sys.pres, &vx("a", &[1]), &vx("b", &[1, 0])).unwrap();
    assert_eq!(img, want);
    assert!(sample_inside_image(&sys.map, &branch, &img, 8).unwrap());
}

#[test]
fn iterated_image_composes() {
    let sys = system(ConstructionId::Tent);
    let e = unit_edge();
    let s = arc(
        &sys.pres,
        &Point::OnEdge(e.clone(), q(1, 5)),
        &Point::OnEdge(e.clone(), q(3, 10)),
    )
    .unwrap();
    let two = image_of_arc(&sys.map, &s, 2).unwrap();
    let one_one = image_of_arc(&sys.map, &image_of_arc(&sys.map, &s, 1).unwrap(), 1).unwrap();
    assert_eq!(two, one_one);
}
