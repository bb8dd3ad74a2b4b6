//! Exact forward images of subdendrites.
//!
//! Each fragment is split at its rule's breakpoints; every sub-piece maps
//! at constant speed onto a sub-arc of the rule's image arc, so its image
//! is exactly the unique arc between the images of its ends. Fragments of
//! accumulation tails map to the arc between the images of the tail
//! boundary and the limit vertex; this is exact whenever the rule family
//! carries the chain monotonically (spot-checked by `check_continuity`).

use crate::error::{DynError, Result};
use crate::map::PlMap;
use dendrodyn_core::geometry::arc_frags;
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{q_one, Q};
use dendrodyn_core::subdendrite::Subdendrite;
use std::sync::Arc as StdArc;

/// One exact application of the map to a subdendrite.
pub fn image_once(map: &PlMap, s: &Subdendrite) -> Result<Subdendrite> {
    let pres = map.presentation();
    let mut out = Subdendrite::empty();
    let mut push_arc = |out: &mut Subdendrite, a: &Point, b: &Point| -> Result<()> {
        let frags = arc_frags(pres, a, b)?;
        if frags.is_empty() {
            let pt = Subdendrite::point(pres, a)?;
            for v in pt.verts {
                out.verts.insert(v);
            }
            for (e, list) in pt.edges {
                out.edges.entry(e).or_default().extend(list);
            }
            for (g, list) in pt.segs {
                out.segs.entry(g).or_default().extend(list);
            }
            return Ok(());
        }
        for f in &frags {
            out.push_frag(pres, f)?;
        }
        Ok(())
    };

    for (e, list) in &s.edges {
        let (ci, _) = map.rule_for_edge(e)?;
        let rule = map.resolve_rule(ci, &e.idx)?;
        for (lo, hi) in list {
            for i in 0..rule.arcs.len() {
                let u0 = &rule.breaks[i];
                let u1 = &rule.breaks[i + 1];
                let olo = lo.max(u0);
                let ohi = hi.min(u1);
                if olo > ohi {
                    continue;
                }
                let qa = crate::map::PlMap::apply(map, &point_on_edge(map, e, olo)?)?;
                let qb = crate::map::PlMap::apply(map, &point_on_edge(map, e, ohi)?)?;
                push_arc(&mut out, &qa, &qb)?;
            }
        }
        if out.frag_count() > map.budget() {
            return Err(DynError::Budget(format!(
                "image fragment count exceeded {}",
                map.budget()
            )));
        }
    }
    for (g, list) in &s.segs {
        let (ci, _) = map.rule_for_segment(g)?;
        let rule = map.resolve_rule(ci, &[])?;
        for (lo, hi) in list {
            for i in 0..rule.arcs.len() {
                let u0 = &rule.breaks[i];
                let u1 = &rule.breaks[i + 1];
                let olo = lo.max(u0);
                let ohi = hi.min(u1);
                if olo > ohi {
                    continue;
                }
                let pa = pres.canonical_point(Point::OnSegment(g.clone(), olo.clone()))?;
                let pb = pres.canonical_point(Point::OnSegment(g.clone(), ohi.clone()))?;
                let qa = map.apply(&pa)?;
                let qb = map.apply(&pb)?;
                push_arc(&mut out, &qa, &qb)?;
            }
        }
    }
    for (key, d) in &s.tails {
        let boundary = pres.resolve_tail_point(key, d)?;
        let lim = Point::Vertex(pres.limit_vertex(key));
        let qa = map.apply(&boundary)?;
        let qb = map.apply(&lim)?;
        push_arc(&mut out, &qa, &qb)?;
    }
    for v in &s.verts {
        let img = map.apply(&Point::Vertex(v.clone()))?;
        let pt = Subdendrite::point(pres, &img)?;
        for v2 in pt.verts {
            out.verts.insert(v2);
        }
        for (e, list) in pt.edges {
            out.edges.entry(e).or_default().extend(list);
        }
        for (g, list) in pt.segs {
            out.segs.entry(g).or_default().extend(list);
        }
    }
    out.normalize(pres)?;
    if out.frag_count() > map.budget() {
        return Err(DynError::Budget(format!(
            "image fragment count exceeded {}",
            map.budget()
        )));
    }
    Ok(out)
}

fn point_on_edge(map: &PlMap, e: &dendrodyn_core::EdgeId, t: &Q) -> Result<Point> {
    Ok(map
        .presentation()
        .canonical_point(Point::OnEdge(e.clone(), t.clone()))?)
}

/// f^n of a subdendrite, computed exactly step by step.
pub fn image_of_arc(map: &PlMap, s: &Subdendrite, n: u32) -> Result<Subdendrite> {
    let mut cur = s.clone();
    if n == 0 {
        let pres = map.presentation();
        cur.normalize(pres)?;
        return Ok(cur);
    }
    for _ in 0..n {
        cur = image_once(map, &cur)?;
    }
    Ok(cur)
}

/// Convenience: the image of the arc [a, b].
pub fn image_of_points_arc(map: &PlMap, a: &Point, b: &Point, n: u32) -> Result<Subdendrite> {
    let pres = map.presentation();
    let arc = dendrodyn_core::geometry::arc(pres, a, b)?;
    image_of_arc(map, &arc, n)
}

/// Sub-interval image sanity helper used by tests: the image of a dense
/// sample of points must land inside the computed image.
pub fn sample_inside_image(
    map: &PlMap,
    s: &Subdendrite,
    img: &Subdendrite,
    samples_per_frag: u32,
) -> Result<bool> {
    let pres = map.presentation();
    for (e, list) in &s.edges {
        for (lo, hi) in list {
            for i in 0..=samples_per_frag {
                let t = lo + (hi - lo) * dendrodyn_core::num::q(i as i64, samples_per_frag.max(1) as i64);
                if t < dendrodyn_core::num::q_zero() || t > q_one() {
                    continue;
                }
                let p = pres.canonical_point(Point::OnEdge(e.clone(), t))?;
                let fp = map.apply(&p)?;
                if !img.contains_point(pres, &fp)? {
                    return Ok(false);
                }
            }
        }
    }
    for v in &s.verts {
        let fp = map.apply(&Point::Vertex(v.clone()))?;
        if !img.contains_point(pres, &fp)? {
            return Ok(false);
        }
    }
    Ok(true)
}
