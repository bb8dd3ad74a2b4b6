//! Arc-horseshoe detection: two arcs sharing exactly one endpoint whose
//! images under some iterates each cover both arcs. A verified witness
//! certifies positive topological entropy; absence within the budget
//! certifies nothing.

use crate::error::Result;
use crate::image::image_of_arc;
use crate::map::PlMap;
use crate::periodic::{periodic_points, PeriodicItem};
use dendrodyn_core::geometry::{arc, distance};
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::Q;
use dendrodyn_core::subdendrite::Subdendrite;
use dendrodyn_core::truncation::Carrier;
use std::collections::BTreeSet;
use std::sync::Arc as StdArc;

#[derive(Debug, Clone)]
pub struct HorseshoeWitness {
    pub i_ends: (Point, Point),
    pub j_ends: (Point, Point),
    pub shared: Point,
    pub n: u32,
    pub m: u32,
    pub i_arc: Subdendrite,
    pub j_arc: Subdendrite,
    pub verified: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SearchDiagnostics {
    pub candidate_points: usize,
    pub arc_pairs_tested: usize,
    pub budget_exhausted: bool,
}

/// Candidate anchor points: fixed/low-period points, rule breakpoints,
/// and short orbits of window endpoints.
fn candidate_points(map: &PlMap, depth: u32, budget: usize) -> Result<Vec<Point>> {
    let pres = map.presentation();
    let t = pres.truncation(depth)?;
    let mut pts: Vec<Point> = Vec::new();
    let mut push = |pts: &mut Vec<Point>, p: Point| {
        if !pts.iter().any(|q| pres.points_eq(q, &p)) {
            pts.push(p);
        }
    };
    if let Ok(per) = periodic_points(map, 2, depth.min(4)) {
        for item in per.items {
            if let PeriodicItem::Point { orbit, .. } = item {
                for p in orbit {
                    push(&mut pts, p);
                }
            }
        }
    }
    // rule breakpoints of window edges
    for e in &t.edges {
        if pts.len() >= budget {
            break;
        }
        match &e.carrier {
            Carrier::Edge(id) => {
                if let Ok((ci, _)) = map.rule_for_edge(id) {
                    if let Ok(rule) = map.resolve_rule(ci, &id.idx) {
                        for b in &rule.breaks[1..rule.breaks.len() - 1] {
                            push(
                                &mut pts,
                                pres.canonical_point(Point::OnEdge(id.clone(), b.clone()))?,
                            );
                        }
                    }
                }
            }
            Carrier::Seg(id, ..) => {
                if let Ok((ci, _)) = map.rule_for_segment(id) {
                    if let Ok(rule) = map.resolve_rule(ci, &[]) {
                        for b in &rule.breaks[1..rule.breaks.len() - 1] {
                            push(
                                &mut pts,
                                pres.canonical_point(Point::OnSegment(id.clone(), b.clone()))?,
                            );
                        }
                    }
                }
            }
            Carrier::Residual(_) => {}
        }
    }
    // short orbits of window endpoint vertices
    let mut endpoints: Vec<Point> = Vec::new();
    for tv in &t.verts {
        if pres.vertex_order(&tv.id)? == 1 {
            endpoints.push(Point::Vertex(tv.id.clone()));
        }
        if endpoints.len() >= 8 {
            break;
        }
    }
    for x in endpoints {
        if let Ok(orbit) = map.orbit(&x, 16) {
            for p in orbit.entries {
                if pts.len() >= budget {
                    break;
                }
                push(&mut pts, p);
            }
        }
    }
    Ok(pts)
}

/// Is q strictly between p and r (so that [p,q] and [q,r] share exactly q)?
fn splits_arc(pres: &StdArc<dendrodyn_core::Presentation>, p: &Point, q: &Point, r: &Point) -> Result<bool> {
    if pres.points_eq(p, q) || pres.points_eq(q, r) || pres.points_eq(p, r) {
        return Ok(false);
    }
    let dpq = distance(pres, p, q)?;
    let dqr = distance(pres, q, r)?;
    let dpr = distance(pres, p, r)?;
    Ok(dpq + dqr == dpr)
}

pub fn horseshoe_search(
    map: &PlMap,
    max_n: u32,
    candidate_budget: usize,
) -> Result<(Option<HorseshoeWitness>, SearchDiagnostics)> {
    let pres = map.presentation();
    let depth = pres.doc().default_depth.min(6).max(3);
    let pts = candidate_points(map, depth, candidate_budget.min(256))?;
    let mut diags = SearchDiagnostics { candidate_points: pts.len(), ..Default::default() };

    // arcs between candidate points, keyed by their endpoints
    let mut arcs: Vec<(Point, Point)> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if arcs.len() >= candidate_budget {
                break;
            }
            arcs.push((pts[i].clone(), pts[j].clone()));
        }
    }

    // image cache per arc and power
    let mut cache: Vec<Vec<Option<Subdendrite>>> = vec![vec![None; (max_n + 1) as usize]; arcs.len()];
    let mut arc_sets: Vec<Option<Subdendrite>> = vec![None; arcs.len()];
    let mut get_arc = |arc_sets: &mut Vec<Option<Subdendrite>>, idx: usize| -> Result<Subdendrite> {
        if arc_sets[idx].is_none() {
            arc_sets[idx] = Some(arc(pres, &arcs[idx].0, &arcs[idx].1)?);
        }
        Ok(arc_sets[idx].clone().unwrap())
    };

    let mut best: Option<HorseshoeWitness> = None;
    let rank = |w: &HorseshoeWitness| (w.n.max(w.m), w.n + w.m);
    for i in 0..arcs.len() {
        for j in 0..arcs.len() {
            if i == j {
                continue;
            }
            // shared endpoint: arcs[i] = [p, q], arcs[j] = [q, r]
            let (p, q, r) = if pres.points_eq(&arcs[i].1, &arcs[j].0) {
                (&arcs[i].0, &arcs[i].1, &arcs[j].1)
            } else {
                continue;
            };
            if !splits_arc(pres, p, q, r)? {
                continue;
            }
            diags.arc_pairs_tested += 1;
            if diags.arc_pairs_tested > candidate_budget {
                diags.budget_exhausted = true;
                return Ok((best, diags));
            }
            let set_i = get_arc(&mut arc_sets, i)?;
            let set_j = get_arc(&mut arc_sets, j)?;
            let both = set_i.clone().union(pres, &set_j)?;
            let mut first_cover = |idx: usize, base: &Subdendrite| -> Result<Option<u32>> {
                for n in 1..=max_n {
                    if cache[idx][n as usize].is_none() {
                        let prev = if n == 1 {
                            base.clone()
                        } else {
                            match &cache[idx][(n - 1) as usize] {
                                Some(s) => s.clone(),
                                None => image_of_arc(map, base, n - 1)?,
                            }
                        };
                        match crate::image::image_once(map, &prev) {
                            Ok(img) => cache[idx][n as usize] = Some(img),
                            Err(_) => return Ok(None),
                        }
                    }
                    let img = cache[idx][n as usize].as_ref().unwrap();
                    if img.contains(pres, &both)? {
                        return Ok(Some(n));
                    }
                }
                Ok(None)
            };
            let n = match first_cover(i, &set_i)? {
                Some(n) => n,
                None => continue,
            };
            let m = match first_cover(j, &set_j)? {
                Some(m) => m,
                None => continue,
            };
            let witness = HorseshoeWitness {
                i_ends: (p.clone(), q.clone()),
                j_ends: (q.clone(), r.clone()),
                shared: q.clone(),
                n,
                m,
                i_arc: set_i,
                j_arc: set_j,
                verified: false,
            };
            if best.as_ref().map(|b| rank(&witness) < rank(b)).unwrap_or(true)
                && verify_witness(map, &witness)?
            {
                let done = witness.n == 1 && witness.m == 1;
                best = Some(HorseshoeWitness { verified: true, ..witness });
                if done {
                    return Ok((best, diags));
                }
            }
        }
    }
    Ok((best, diags))
}

/// Independent recomputation of a witness from its endpoints.
pub fn verify_witness(map: &PlMap, w: &HorseshoeWitness) -> Result<bool> {
    let pres = map.presentation();
    if !splits_arc(pres, &w.i_ends.0, &w.shared, &w.j_ends.1)? {
        return Ok(false);
    }
    let i_arc = arc(pres, &w.i_ends.0, &w.i_ends.1)?;
    let j_arc = arc(pres, &w.j_ends.0, &w.j_ends.1)?;
    let both = i_arc.clone().union(pres, &j_arc)?;
    let fi = image_of_arc(map, &i_arc, w.n)?;
    if !fi.contains(pres, &both)? {
        return Ok(false);
    }
    let fj = image_of_arc(map, &j_arc, w.m)?;
    if !fj.contains(pres, &both)? {
        return Ok(false);
    }
    // the two arcs must meet exactly in the shared endpoint
    if i_arc.interior_overlap(pres, &j_arc)?.is_some() {
        return Ok(false);
    }
    let shared = i_arc.shared_points(pres, &j_arc)?;
    Ok(shared.len() == 1 && pres.points_eq(&shared[0], &w.shared))
}

/// Seeds for entropy sampling: a small deterministic set of window points.
pub fn default_sample(map: &PlMap, count: usize, seed: u64) -> Result<Vec<Point>> {
    let pres = map.presentation();
    let depth = pres.doc().default_depth.min(6).max(3);
    let mut pts = crate::sample::sample_vertices(pres, depth, count / 2, seed)?;
    pts.extend(crate::sample::sample_interior_points(
        pres,
        depth,
        count - pts.len(),
        seed ^ 0x9e3779b97f4a7c15,
    )?);
    Ok(pts)
}

/// Smallest distance from a point to any item of a periodic report.
pub fn distance_to_periodic(
    map: &PlMap,
    p: &Point,
    items: &[PeriodicItem],
) -> Result<Option<Q>> {
    let pres = map.presentation();
    let mut best: Option<Q> = None;
    for item in items {
        let d = match item {
            PeriodicItem::Point { point, .. } => distance(pres, p, point)?,
            PeriodicItem::Segment { carrier, lo, hi, .. } => {
                // clamp the point's parameter onto the fragment
                let frag_pts: Vec<Point> = match carrier {
                    crate::map::CarrierId::E(e) => vec![
                        pres.canonical_point(Point::OnEdge(e.clone(), lo.clone()))?,
                        pres.canonical_point(Point::OnEdge(e.clone(), hi.clone()))?,
                    ],
                    crate::map::CarrierId::S(g) => vec![
                        pres.canonical_point(Point::OnSegment(g.clone(), lo.clone()))?,
                        pres.canonical_point(Point::OnSegment(g.clone(), hi.clone()))?,
                    ],
                };
                let inside = match (carrier, p) {
                    (crate::map::CarrierId::E(e), Point::OnEdge(pe, t)) if e == pe => {
                        lo <= t && t <= hi
                    }
                    (crate::map::CarrierId::S(g), Point::OnSegment(pg, t)) if g == pg => {
                        lo <= t && t <= hi
                    }
                    _ => false,
                };
                if inside {
                    dendrodyn_core::num::q_zero()
                } else {
                    let mut m = distance(pres, p, &frag_pts[0])?;
                    let d2 = distance(pres, p, &frag_pts[1])?;
                    if d2 < m {
                        m = d2;
                    }
                    m
                }
            }
        };
        if best.as_ref().map(|b| &d < b).unwrap_or(true) {
            best = Some(d);
        }
    }
    Ok(best)
}

/// Distinct coordinates helper for candidate dedup in callers.
pub fn dedupe_points(pres: &StdArc<dendrodyn_core::Presentation>, pts: Vec<Point>) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in pts {
        if let Ok(c) = pres.point_coord(&p) {
            let key = format!("{}:{}", dendrodyn_core::num::fmt_q(&c.0), dendrodyn_core::num::fmt_q(&c.1));
            if seen.insert(key) {
                out.push(p);
            }
        }
    }
    out
}
