//! Exact periodic points: a vertex sweep plus affine branch composition
//! over the window's carriers. Composed branches that dive deeper into an
//! accumulation tail than the expansion bound are dropped and counted, so
//! completeness is relative to the window, as documented.

use crate::error::{DynError, Result};
use crate::map::{CarrierId, PlMap};
use crate::push::{push_interval, PushPiece, PushStats, PushTarget};
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{fmt_q, q_one, q_zero, Q};
use dendrodyn_core::truncation::Carrier;
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub enum PeriodicItem {
    Point {
        point: Point,
        period: u32,
        orbit: Vec<Point>,
    },
    /// A whole fragment fixed pointwise by f^period.
    Segment {
        carrier: CarrierId,
        lo: Q,
        hi: Q,
        period: u32,
    },
}

impl PeriodicItem {
    pub fn describe(&self) -> String {
        match self {
            PeriodicItem::Point { point, period, .. } => format!("{point} (period {period})"),
            PeriodicItem::Segment { carrier, lo, hi, period } => format!(
                "{carrier}[{}..{}] fixed segment (period {period})",
                fmt_q(lo),
                fmt_q(hi)
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PeriodicReport {
    pub items: Vec<PeriodicItem>,
    /// Composed branches that left the window through a tail.
    pub escaped_branches: usize,
}

impl PeriodicReport {
    /// All points of the given prime period (whole orbits, not just the
    /// stored representatives).
    pub fn points_with_period(&self, period: u32) -> Vec<Point> {
        let mut out = Vec::new();
        for it in &self.items {
            if let PeriodicItem::Point { period: p, orbit, .. } = it {
                if *p == period {
                    out.extend(orbit.iter().cloned());
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Branch {
    src: CarrierId,
    lo: Q,
    hi: Q,
    target: PushTarget,
}

/// Exact prime period of a point if it recurs within `max_period`.
fn prime_period(map: &PlMap, p: &Point, max_period: u32) -> Result<Option<u32>> {
    let pres = map.presentation();
    let mut cur = p.clone();
    for d in 1..=max_period {
        cur = map.apply(&cur)?;
        if pres.points_eq(&cur, p) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

pub fn periodic_points(map: &PlMap, max_period: u32, depth: u32) -> Result<PeriodicReport> {
    let pres = map.presentation();
    let t = pres.truncation(depth)?;
    let mut report = PeriodicReport::default();
    let mut seen_orbit_points: Vec<Point> = Vec::new();

    // vertex sweep (catches limit vertices such as isolated fixed ends)
    for tv in &t.verts {
        let p = Point::Vertex(tv.id.clone());
        if seen_orbit_points.iter().any(|q| pres.points_eq(q, &p)) {
            continue;
        }
        if let Some(d) = prime_period(map, &p, max_period)? {
            let orbit = map.orbit(&p, d as usize - 1)?.entries;
            seen_orbit_points.extend(orbit.iter().cloned());
            report.items.push(PeriodicItem::Point { point: p, period: d, orbit });
        }
    }

    // carriers of the window
    let mut carriers: Vec<CarrierId> = Vec::new();
    for e in &t.edges {
        match &e.carrier {
            Carrier::Edge(id) => carriers.push(CarrierId::E(id.clone())),
            Carrier::Seg(id, ..) => {
                let cid = CarrierId::S(id.clone());
                if !carriers.contains(&cid) {
                    carriers.push(cid);
                }
            }
            Carrier::Residual(_) => {}
        }
    }
    carriers.sort();
    carriers.dedup();

    let mut segment_records: Vec<(CarrierId, Q, Q, u32)> = Vec::new();
    for period in 1..=max_period {
        // compose the rule `period` times over every carrier
        for cid in &carriers {
            let mut branches = vec![Branch {
                src: cid.clone(),
                lo: q_zero(),
                hi: q_one(),
                target: PushTarget::Affine { carrier: cid.clone(), a: q_zero(), b: q_one() },
            }];
            for _ in 0..period {
                let mut next = Vec::new();
                for br in &branches {
                    match &br.target {
                        PushTarget::Point(p) => {
                            let img = map.apply(p)?;
                            next.push(Branch {
                                src: br.src.clone(),
                                lo: br.lo.clone(),
                                hi: br.hi.clone(),
                                target: PushTarget::Point(img),
                            });
                        }
                        PushTarget::Affine { carrier, a, b } => {
                            let (plo, phi) = {
                                let v0 = a + b * &br.lo;
                                let v1 = a + b * &br.hi;
                                if v0 <= v1 {
                                    (v0, v1)
                                } else {
                                    (v1, v0)
                                }
                            };
                            let mut stats = PushStats::default();
                            let pieces = push_interval(map, carrier, &plo, &phi, &mut stats)?;
                            report.escaped_branches += stats.escaped;
                            for PushPiece { src_lo, src_hi, target } in pieces {
                                // src here is the parameter on `carrier`;
                                // pull back to the original source interval
                                let (nlo, nhi) = {
                                    let t0 = (&src_lo - a) / b;
                                    let t1 = (&src_hi - a) / b;
                                    if t0 <= t1 {
                                        (t0, t1)
                                    } else {
                                        (t1, t0)
                                    }
                                };
                                let nlo = nlo.max(br.lo.clone());
                                let nhi = nhi.min(br.hi.clone());
                                if nlo > nhi {
                                    continue;
                                }
                                let target = match target {
                                    PushTarget::Point(p) => PushTarget::Point(p),
                                    PushTarget::Affine { carrier: c2, a: a2, b: b2 } => {
                                        // param = a2 + b2 * (a + b * t)
                                        PushTarget::Affine {
                                            carrier: c2,
                                            a: &a2 + &b2 * a,
                                            b: &b2 * b,
                                        }
                                    }
                                };
                                next.push(Branch { src: br.src.clone(), lo: nlo, hi: nhi, target });
                            }
                        }
                    }
                }
                branches = next;
                if branches.len() > map.budget() {
                    return Err(DynError::Budget(format!(
                        "periodic branch count exceeded {} (partial results: {} items)",
                        map.budget(),
                        report.items.len()
                    )));
                }
            }
            // solve the return equation on branches landing on the source
            for br in &branches {
                let candidates: Vec<Q> = match &br.target {
                    PushTarget::Affine { carrier, a, b } if carrier == &br.src => {
                        if b.is_one() {
                            if a.is_zero() {
                                // pointwise fixed fragment
                                let covered = segment_records.iter().any(|(c, lo, hi, p)| {
                                    c == &br.src && lo <= &br.lo && &br.hi <= hi && period % p == 0
                                });
                                if !covered && br.lo < br.hi {
                                    segment_records.push((
                                        br.src.clone(),
                                        br.lo.clone(),
                                        br.hi.clone(),
                                        period,
                                    ));
                                }
                                continue;
                            }
                            Vec::new()
                        } else {
                            vec![a / (q_one() - b)]
                        }
                    }
                    PushTarget::Point(p) => {
                        // a collapsed branch: the constant value itself is
                        // the only possible periodic point inside
                        let t = match (&br.src, p) {
                            (CarrierId::E(e), Point::OnEdge(pe, t)) if e == pe => Some(t.clone()),
                            (CarrierId::S(g), Point::OnSegment(pg, t)) if g == pg => Some(t.clone()),
                            (CarrierId::E(e), Point::Vertex(v)) => {
                                let (u, w) = pres.edge_endpoints(e)?;
                                if *v == u {
                                    Some(q_zero())
                                } else if *v == w {
                                    Some(q_one())
                                } else {
                                    None
                                }
                            }
                            _ => None,
                        };
                        t.into_iter().collect()
                    }
                    _ => Vec::new(),
                };
                for t in candidates {
                    if t < br.lo || t > br.hi {
                        continue;
                    }
                    let p = match &br.src {
                        CarrierId::E(e) => pres.canonical_point(Point::OnEdge(e.clone(), t))?,
                        CarrierId::S(g) => pres.canonical_point(Point::OnSegment(g.clone(), t))?,
                    };
                    if seen_orbit_points.iter().any(|q| pres.points_eq(q, &p)) {
                        continue;
                    }
                    // re-verify exactly and take the prime period
                    if let Some(d) = prime_period(map, &p, period)? {
                        let orbit = map.orbit(&p, d as usize - 1)?.entries;
                        seen_orbit_points.extend(orbit.iter().cloned());
                        report.items.push(PeriodicItem::Point { point: p, period: d, orbit });
                    }
                }
            }
        }
    }
    // coalesce fixed fragments: window slices of one pointwise-fixed
    // region surface as many identity branches; merge same-period
    // touching intervals and drop parts already fixed at a dividing period
    segment_records.sort_by(|a, b| a.3.cmp(&b.3).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut merged: Vec<(CarrierId, Q, Q, u32)> = Vec::new();
    for (carrier, lo, hi, period) in segment_records {
        // subtract coverage by dividing periods
        let mut parts = vec![(lo, hi)];
        for (c2, l2, h2, p2) in &merged {
            if c2 != &carrier || period % p2 != 0 || *p2 == period {
                continue;
            }
            let mut next = Vec::new();
            for (lo, hi) in parts {
                if h2 <= &lo || l2 >= &hi {
                    next.push((lo, hi));
                    continue;
                }
                if &lo < l2 {
                    next.push((lo.clone(), l2.clone()));
                }
                if h2 < &hi {
                    next.push((h2.clone(), hi.clone()));
                }
            }
            parts = next;
        }
        'part: for (lo, hi) in parts {
            if lo >= hi {
                continue;
            }
            for rec in merged.iter_mut() {
                if rec.0 == carrier && rec.3 == period && lo <= rec.2 && rec.1 <= hi {
                    // touching or overlapping: extend
                    if lo < rec.1 {
                        rec.1 = lo.clone();
                    }
                    if hi > rec.2 {
                        rec.2 = hi.clone();
                    }
                    continue 'part;
                }
            }
            merged.push((carrier.clone(), lo, hi, period));
        }
    }
    // a second pass closes chains of touching intervals
    let mut changed = true;
    while changed {
        changed = false;
        'outer: for i in 0..merged.len() {
            for j in i + 1..merged.len() {
                if merged[i].0 == merged[j].0
                    && merged[i].3 == merged[j].3
                    && merged[j].1 <= merged[i].2
                    && merged[i].1 <= merged[j].2
                {
                    let (_, l2, h2, _) = merged.remove(j);
                    if l2 < merged[i].1 {
                        merged[i].1 = l2;
                    }
                    if h2 > merged[i].2 {
                        merged[i].2 = h2;
                    }
                    changed = true;
                    break 'outer;
                }
            }
        }
    }
    // isolated periodic points inside a pointwise-fixed fragment are
    // subsumed by the fragment record
    report.items.retain(|item| {
        let (pt, pp) = match item {
            PeriodicItem::Point { point, period, .. } => (point, *period),
            _ => return true,
        };
        !merged.iter().any(|(carrier, lo, hi, sp)| {
            if pp % sp != 0 {
                return false;
            }
            point_on_fragment(pres, pt, carrier, lo, hi).unwrap_or(false)
        })
    });
    for (carrier, lo, hi, period) in merged {
        report.items.push(PeriodicItem::Segment { carrier, lo, hi, period });
    }
    Ok(report)
}

/// Is the point on the closed fragment [lo, hi] of the carrier?
fn point_on_fragment(
    pres: &std::sync::Arc<dendrodyn_core::Presentation>,
    p: &Point,
    carrier: &CarrierId,
    lo: &Q,
    hi: &Q,
) -> crate::error::Result<bool> {
    let mut frag = dendrodyn_core::Subdendrite::empty();
    match carrier {
        CarrierId::E(e) => {
            frag.edges.insert(e.clone(), vec![(lo.clone(), hi.clone())]);
        }
        CarrierId::S(g) => {
            frag.segs.insert(g.clone(), vec![(lo.clone(), hi.clone())]);
        }
    }
    frag.normalize(pres)?;
    Ok(frag.contains_point(pres, p)?)
}
