//! ω-limit estimation, pair classification, horseshoe search, and the
//! entropy report on the built-in systems.

use dendrodyn_constructions::{build, stunted, ConstructionId};
use dendrodyn_core::geometry::distance;
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{pow2, q, Q};
use dendrodyn_dynamics::entropy::{entropy_report, EntropyVerdict};
use dendrodyn_dynamics::horseshoe::{horseshoe_search, verify_witness};
use dendrodyn_dynamics::limits::{
    classify_pair, omega_estimate, scrambled_search, Exactness, PairParams, Verdict,
};
use dendrodyn_dynamics::System;

fn system(id: ConstructionId) -> System {
    System::from_doc(build(&id)).expect("system builds")
}

fn vx(f: &str, idx: &[i64]) -> Point {
    Point::Vertex(dendrodyn_core::VertexId::new(f, idx.to_vec()))
}

#[test]
fn omega_of_a_fixed_point_is_one_tight_cluster() {
    let sys = system(ConstructionId::Example1);
    let est = omega_estimate(&sys.map, &vx("e", &[]), 64, 16, &q(1, 32)).unwrap();
    assert_eq!(est.clusters.len(), 1);
    assert_eq!(est.clusters[0].max_spread, dendrodyn_core::num::q_zero());
    assert!(est.stabilized);
}

#[test]
fn omega_of_the_comb_tip_accumulates_on_branch_midpoints_and_the_spine_limit() {
    let sys = system(ConstructionId::Example1);
    let est = omega_estimate(&sys.map, &vx("b", &[0, 0]), 1024, 256, &q(1, 32)).unwrap();
    let hit_names: Vec<String> = est.limit_vertex_hits.iter().map(|(v, _)| v.to_string()).collect();
    assert!(hit_names.contains(&"e".to_string()), "hits: {hit_names:?}");
    for n in 0..=6 {
        assert!(hit_names.contains(&format!("w_{n}")), "missing w_{n}: {hit_names:?}");
    }
    // every hit is a branch midpoint or the spine limit
    for name in &hit_names {
        assert!(name == "e" || name.starts_with("w_"), "unexpected hit {name}");
    }
    // every cluster sits within the radius of some hit vertex
    for c in &est.clusters {
        let mut ok = false;
        for (v, _) in &est.limit_vertex_hits {
            if distance(&sys.pres, &c.rep, &Point::Vertex(v.clone())).unwrap() <= q(1, 32) {
                ok = true;
                break;
            }
        }
        assert!(ok, "stray cluster at {}", c.rep);
    }
}

#[test]
fn pair_b0_e_is_li_yorke_with_structural_support() {
    let sys = system(ConstructionId::Example1);
    let params = PairParams { horizon: 2048, ..Default::default() };
    let c = classify_pair(&sys.map, &vx("b", &[0, 0]), &vx("e", &[]), &params).unwrap();
    assert_eq!(c.verdict, Verdict::LiYorke);
    assert_eq!(c.exactness, Exactness::StructurallyExact);
    assert!(c.limsup_estimate > c.separation);
}

#[test]
fn identity_pairs_are_distal_exactly() {
    let sys = system(ConstructionId::Example2);
    // two spine points are fixed, at constant positive distance
    let a = Point::OnSegment(dendrodyn_core::SegId("spine".into()), q(1, 3));
    let b = Point::OnSegment(dendrodyn_core::SegId("spine".into()), q(2, 3));
    let params = PairParams { horizon: 128, ..Default::default() };
    let c = classify_pair(&sys.map, &a, &b, &params).unwrap();
    assert_eq!(c.verdict, Verdict::Distal);
    assert_eq!(c.exactness, Exactness::StructurallyExact);
    assert_eq!(c.liminf_estimate, q(1, 3));
    assert_eq!(c.limsup_estimate, q(1, 3));
}

#[test]
fn example1_sampled_pairs_are_never_distal() {
    let sys = system(ConstructionId::Example1);
    let sample = dendrodyn_dynamics::sample::sample_interior_points(&sys.pres, 5, 12, 0xD7).unwrap();
    // generic orbits can land on the spine and march outward linearly, so
    // the window depth tracks the horizon; keep it moderate here
    let params = PairParams { horizon: 384, ..Default::default() };
    for i in 0..sample.len() {
        for j in i + 1..sample.len() {
            let c = classify_pair(&sys.map, &sample[i], &sample[j], &params).unwrap();
            assert_ne!(
                c.verdict,
                Verdict::Distal,
                "pair ({}, {}) classified distal",
                sample[i],
                sample[j]
            );
        }
    }
}

#[test]
fn example4_origin_and_first_tip_form_a_li_yorke_pair() {
    let sys = system(ConstructionId::Example4);
    let params = PairParams { horizon: 1024, ..Default::default() };
    let c = classify_pair(&sys.map, &vx("a0", &[]), &vx("a", &[1, 1]), &params).unwrap();
    assert_eq!(c.verdict, Verdict::LiYorke);
}

#[test]
fn example4_two_tips_are_li_yorke_numerically() {
    let sys = system(ConstructionId::Example4);
    let params = PairParams { horizon: 1024, ..Default::default() };
    let c = classify_pair(&sys.map, &vx("a", &[1, 1]), &vx("a", &[2, 1]), &params).unwrap();
    assert_eq!(c.verdict, Verdict::LiYorke);
}

#[test]
fn example4_interior_pairs_fall_onto_fixed_points() {
    let sys = system(ConstructionId::Example4);
    let params = PairParams { horizon: 256, ..Default::default() };
    // two interval-chain points both collapse onto b_1: asymptotic, exact
    let p = Point::OnEdge(dendrodyn_core::EdgeId::new("ichain", vec![2]), q(1, 3));
    let r = Point::OnEdge(dendrodyn_core::EdgeId::new("ichain", vec![3]), q(1, 2));
    let c = classify_pair(&sys.map, &p, &r, &params).unwrap();
    assert_eq!(c.verdict, Verdict::Asymptotic);
    assert_eq!(c.exactness, Exactness::StructurallyExact);
    // one falls to b_1, the origin stays fixed: exact distal
    let c = classify_pair(&sys.map, &p, &vx("a0", &[]), &params).unwrap();
    assert_eq!(c.verdict, Verdict::Distal);
    assert_eq!(c.exactness, Exactness::StructurallyExact);
}

#[test]
fn tent_horseshoe_witness_at_one_step() {
    let sys = system(ConstructionId::Tent);
    let (w, diags) = horseshoe_search(&sys.map, 2, 4096).unwrap();
    let w = w.expect("tent has an arc horseshoe");
    assert_eq!((w.n, w.m), (1, 1));
    assert!(w.verified);
    assert!(verify_witness(&sys.map, &w).unwrap());
    assert!(diags.arc_pairs_tested >= 1);
    // the shared endpoint is the fold at 1/2
    let mid = Point::OnEdge(dendrodyn_core::EdgeId::new("unit", vec![]), q(1, 2));
    assert!(sys.pres.points_eq(&w.shared, &mid));
}

#[test]
fn comb_and_cascade_systems_have_no_horseshoe_within_budget() {
    for (id, max_n) in [
        (ConstructionId::Example1, 4),
        (ConstructionId::StuntedTent { h: stunted::cascade_parameter(2) }, 6),
    ] {
        let sys = system(id.clone());
        let (w, _) = horseshoe_search(&sys.map, max_n, 2000).unwrap();
        assert!(w.is_none(), "{id:?} should have no witness");
    }
}

#[test]
fn entropy_reports() {
    let tent = system(ConstructionId::Tent);
    let sample = dendrodyn_dynamics::horseshoe::default_sample(&tent.map, 6, 7).unwrap();
    let rep = entropy_report(&tent.map, 256, &sample, 2, 2000).unwrap();
    assert!(matches!(rep.verdict, EntropyVerdict::Positive { .. }));

    let comb = system(ConstructionId::Example1);
    let sample = vec![vx("b", &[0, 0]), vx("e", &[]), vx("a", &[1])];
    let rep = entropy_report(&comb.map, 512, &sample, 3, 1000).unwrap();
    match rep.verdict {
        EntropyVerdict::ZeroEvidence { recurrent, collapse_note, .. } => {
            let rec: Vec<_> = recurrent.iter().filter(|r| r.recurrent).collect();
            assert_eq!(rec.len(), 1, "only the spine limit is recurrent");
            assert!(collapse_note.is_some());
        }
        _ => panic!("expected zero-entropy evidence"),
    }
}

#[test]
fn example2_scrambled_sample_shows_the_endpoint_pattern() {
    let sys = system(ConstructionId::Example2);
    // logarithmic convergence calls for coarser thresholds at this horizon
    let params = PairParams {
        horizon: 4096,
        tolerance: q(1, 8),
        separation: q(1, 4),
    };
    let sample = vec![vx("T", &[0]), vx("T", &[1]), vx("A", &[])];
    let rep = scrambled_search(&sys.map, &sample, &params).unwrap();
    // consecutive teeth converge: never a Li-Yorke pair
    assert!(!rep
        .li_yorke_pairs
        .iter()
        .any(|(a, b)| (a == &sample[0] && b == &sample[1]) || (a == &sample[1] && b == &sample[0])));
    // tooth against the fixed spine end is Li-Yorke
    assert!(rep
        .li_yorke_pairs
        .iter()
        .any(|(a, b)| (a == &sample[0] && b == &sample[2]) || (a == &sample[2] && b == &sample[0])));
    assert_eq!(rep.cliques[0].len(), 2);
}

#[test]
fn identity_map_yields_no_li_yorke_pairs() {
    let sys = system(ConstructionId::Example2);
    let params = PairParams { horizon: 64, ..Default::default() };
    let sample: Vec<Point> = (1..5)
        .map(|k| Point::OnSegment(dendrodyn_core::SegId("spine".into()), q(k, 7)))
        .collect();
    let rep = scrambled_search(&sys.map, &sample, &params).unwrap();
    assert!(rep.li_yorke_pairs.is_empty());
    assert!(rep.cliques.iter().all(|c| c.len() <= 1));
}

#[test]
fn omega_estimate_horizon_growth_tightens_the_spine_cover() {
    let sys = system(ConstructionId::Example2);
    // Hausdorff-style gauge: max over clusters of distance to the spine
    // (their heights), plus max gap between visited feet, shrinks in the
    // horizon
    let gauge = |horizon: usize| -> Q {
        let est = omega_estimate(&sys.map, &vx("T", &[0]), horizon, horizon / 4, &pow2(-6)).unwrap();
        let mut worst = dendrodyn_core::num::q_zero();
        for c in &est.clusters {
            let coord = sys.pres.point_coord(&c.rep).unwrap();
            if coord.1 > worst {
                worst = coord.1;
            }
        }
        worst
    };
    let g1 = gauge(512);
    let g2 = gauge(2048);
    assert!(g2 < g1, "tail heights must shrink: {g1} vs {g2}");
    assert!(g2 <= q(1, 9), "visited teeth beyond level 9");
}
