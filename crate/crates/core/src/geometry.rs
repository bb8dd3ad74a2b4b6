//! Arc, distance, diameter, convex hull, and first-point retraction.

use crate::doc::MetricMode;
use crate::error::{CoreError, Result};
use crate::ids::Point;
use crate::num::{euclid_f64, q_zero, Q};
use crate::presentation::Presentation;
use crate::subdendrite::Subdendrite;
use crate::truncation::{to_stable, OrientedFrag};
use num_traits::Zero;
use std::sync::Arc;

/// The unique arc [x, y] as a stable subdendrite. arc(x, x) = {x}.
pub fn arc(pres: &Arc<Presentation>, x: &Point, y: &Point) -> Result<Subdendrite> {
    let frags = arc_frags(pres, x, y)?;
    if frags.is_empty() {
        return Subdendrite::point(pres, x);
    }
    Subdendrite::from_frags(pres, &frags)
}

/// Ordered oriented fragments from x to y (empty when x == y).
pub fn arc_frags(pres: &Arc<Presentation>, x: &Point, y: &Point) -> Result<Vec<OrientedFrag>> {
    let x = pres.canonical_point(x.clone())?;
    let y = pres.canonical_point(y.clone())?;
    if pres.points_eq(&x, &y) {
        return Ok(Vec::new());
    }
    let t = pres.window_for(&[&x, &y])?;
    let (lx, ly) = (t.locate(&x)?, t.locate(&y)?);
    let path = t.arc_path(&lx, &ly);
    Ok(to_stable(&t, &path))
}

/// Exact intrinsic (path-length) distance.
pub fn distance(pres: &Arc<Presentation>, x: &Point, y: &Point) -> Result<Q> {
    let x = pres.canonical_point(x.clone())?;
    let y = pres.canonical_point(y.clone())?;
    if pres.points_eq(&x, &y) {
        return Ok(q_zero());
    }
    let t = pres.window_for(&[&x, &y])?;
    Ok(t.dist(&t.locate(&x)?, &t.locate(&y)?))
}

/// Taxicab straight-line distance between the embeddings: a cheap exact
/// lower bound for the path distance (every path is a chain of straight
/// segments, so its length dominates the endpoint gap in the same norm).
pub fn distance_lower_bound(pres: &Arc<Presentation>, x: &Point, y: &Point) -> Result<Q> {
    Ok(crate::num::l1_len(&pres.point_coord(x)?, &pres.point_coord(y)?))
}

/// Path distance, short-circuited to None when it certainly exceeds the
/// bound.
pub fn distance_within(pres: &Arc<Presentation>, x: &Point, y: &Point, bound: &Q) -> Result<Option<Q>> {
    if &distance_lower_bound(pres, x, y)? > bound {
        return Ok(None);
    }
    let d = distance(pres, x, y)?;
    if &d <= bound {
        Ok(Some(d))
    } else {
        Ok(None)
    }
}

/// Ambient (chord) distance in the plane embedding.
pub fn distance_ambient(pres: &Arc<Presentation>, x: &Point, y: &Point) -> Result<f64> {
    Ok(euclid_f64(&pres.point_coord(x)?, &pres.point_coord(y)?))
}

pub fn distance_in_mode(pres: &Arc<Presentation>, x: &Point, y: &Point, mode: MetricMode) -> Result<Q> {
    match mode {
        MetricMode::PathLength => distance(pres, x, y),
        MetricMode::Ambient => {
            // exact comparisons are still wanted downstream; approximate the
            // chord by a fixed-denominator rational (documented rounding)
            let d = distance_ambient(pres, x, y)?;
            let den: i64 = 1 << 30;
            Ok(crate::num::q((d * den as f64).round() as i64, den))
        }
    }
}

/// Diameter of a finite subdendrite in the intrinsic metric; attained at a
/// pair of fragment boundary points.
pub fn diameter(pres: &Arc<Presentation>, s: &Subdendrite) -> Result<Q> {
    let pts = s.boundary_points(pres)?;
    let mut best = q_zero();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = distance(pres, &pts[i], &pts[j])?;
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

pub fn diameter_ambient(pres: &Arc<Presentation>, s: &Subdendrite) -> Result<f64> {
    let pts = s.boundary_points(pres)?;
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = distance_ambient(pres, &pts[i], &pts[j])?;
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Convex hull of a finite point set: the union of arcs from the base
/// point to every member. Independent of the base choice.
pub fn convex_hull(pres: &Arc<Presentation>, pts: &[Point], base: &Point) -> Result<Subdendrite> {
    if pts.is_empty() {
        return Err(CoreError::EmptyInput("convex hull of empty set"));
    }
    if !pts.iter().any(|p| pres.points_eq(p, base)) {
        return Err(CoreError::Invalid("hull base point must belong to the set".into()));
    }
    let mut acc = Subdendrite::point(pres, base)?;
    for p in pts {
        let a = arc(pres, base, p)?;
        acc = acc.union(pres, &a)?;
    }
    Ok(acc)
}

/// First-point retraction onto a nonempty connected subdendrite: the
/// unique point of Y met by every arc from x into Y.
pub fn retraction(pres: &Arc<Presentation>, y: &Subdendrite, x: &Point) -> Result<Point> {
    if y.is_empty() {
        return Err(CoreError::EmptyInput("retraction onto empty subdendrite"));
    }
    if y.contains_point(pres, x)? {
        return pres.canonical_point(x.clone());
    }
    let y0 = y.some_point(pres)?;
    let frags = arc_frags(pres, x, &y0)?;
    for f in &frags {
        if let Some(p) = first_hit(pres, y, f)? {
            return Ok(p);
        }
    }
    Ok(y0)
}

/// Earliest point of Y on one oriented fragment, in traversal order.
fn first_hit(pres: &Arc<Presentation>, y: &Subdendrite, f: &OrientedFrag) -> Result<Option<Point>> {
    match f {
        OrientedFrag::Edge { id, t0, t1, .. } => {
            let mut cov = y.edges.get(id).cloned().unwrap_or_default();
            if let Some((key, _)) = pres.chain_of_edge(id) {
                if let Some(d) = y.tails.get(&key) {
                    let (u, v) = pres.edge_endpoints(id)?;
                    let du = pres.delta_of(&key, &Point::Vertex(u))?;
                    let dv = pres.delta_of(&key, &Point::Vertex(v))?;
                    if &dv <= d {
                        let lo = if &du <= d { q_zero() } else { (&du - d) / (&du - &dv) };
                        cov.push((lo, crate::num::q_one()));
                    }
                }
            }
            if cov.is_empty() {
                return Ok(None);
            }
            cov.sort_by(|a, b| a.0.cmp(&b.0));
            let ascending = t0 <= t1;
            let mut best: Option<Q> = None;
            for (lo, hi) in &cov {
                // clip to traversal range
                let (rlo, rhi) = if ascending { (t0, t1) } else { (t1, t0) };
                let clo = lo.max(rlo);
                let chi = hi.min(rhi);
                if clo > chi {
                    continue;
                }
                let entry = if ascending { clo.clone() } else { chi.clone() };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        if ascending {
                            &entry < b
                        } else {
                            &entry > b
                        }
                    }
                };
                if better {
                    best = Some(entry);
                }
            }
            match best {
                Some(t) => Ok(Some(pres.canonical_point(Point::OnEdge(id.clone(), t))?)),
                None => Ok(None),
            }
        }
        OrientedFrag::Seg { id, s0, s1, .. } => {
            let cov = y.segs.get(id).cloned().unwrap_or_default();
            if cov.is_empty() {
                return Ok(None);
            }
            let ascending = s0 <= s1;
            let mut best: Option<Q> = None;
            for (lo, hi) in &cov {
                let (rlo, rhi) = if ascending { (s0, s1) } else { (s1, s0) };
                let clo = lo.max(rlo);
                let chi = hi.min(rhi);
                if clo > chi {
                    continue;
                }
                let entry = if ascending { clo.clone() } else { chi.clone() };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        if ascending {
                            &entry < b
                        } else {
                            &entry > b
                        }
                    }
                };
                if better {
                    best = Some(entry);
                }
            }
            match best {
                Some(s) => Ok(Some(pres.canonical_point(Point::OnSegment(id.clone(), s))?)),
                None => Ok(None),
            }
        }
        OrientedFrag::Tail { key, d0, d1 } => {
            // coverage of Y on this chain, as delta intervals
            let mut cover: Vec<(Q, Q)> = Vec::new();
            if let Some(d) = y.tails.get(key) {
                cover.push((q_zero(), d.clone()));
            }
            for (e, list) in &y.edges {
                if let Some((k2, _)) = pres.chain_of_edge(e) {
                    if k2 == *key {
                        let (u, v) = pres.edge_endpoints(e)?;
                        let du = pres.delta_of(key, &Point::Vertex(u))?;
                        let dv = pres.delta_of(key, &Point::Vertex(v))?;
                        for (lo, hi) in list {
                            // delta(t) = du + t(dv - du), decreasing
                            let dhi = &du + (&dv - &du) * lo;
                            let dlo = &du + (&dv - &du) * hi;
                            cover.push((dlo, dhi));
                        }
                    }
                }
            }
            if cover.is_empty() {
                return Ok(None);
            }
            cover.sort_by(|a, b| a.0.cmp(&b.0));
            let descending = d0 >= d1; // moving toward the limit
            let mut best: Option<Q> = None;
            for (lo, hi) in &cover {
                let (rlo, rhi) = if descending { (d1, d0) } else { (d0, d1) };
                let clo = lo.max(rlo);
                let chi = hi.min(rhi);
                if clo > chi {
                    continue;
                }
                let entry = if descending { chi.clone() } else { clo.clone() };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        if descending {
                            &entry > b
                        } else {
                            &entry < b
                        }
                    }
                };
                if better {
                    best = Some(entry);
                }
            }
            match best {
                Some(d) => Ok(Some(pres.resolve_tail_point(key, &d)?)),
                None => Ok(None),
            }
        }
    }
}

/// Arc length (sum of fragment lengths) between two points.
pub fn arc_length(pres: &Arc<Presentation>, x: &Point, y: &Point) -> Result<Q> {
    let mut total = q_zero();
    for f in arc_frags(pres, x, y)? {
        total += f.length();
    }
    Ok(total)
}

/// The point at a given fraction of the way along [x, y].
pub fn point_along(pres: &Arc<Presentation>, x: &Point, y: &Point, num: &Q) -> Result<Point> {
    let frags = arc_frags(pres, x, y)?;
    if frags.is_empty() {
        return pres.canonical_point(x.clone());
    }
    let total: Q = frags.iter().map(|f| f.length()).fold(q_zero(), |a, b| a + b);
    if total.is_zero() {
        return pres.canonical_point(x.clone());
    }
    let target = num * &total;
    crate::truncation::point_at_len(pres, &frags, &target)
}
