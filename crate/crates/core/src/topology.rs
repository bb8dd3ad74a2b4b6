//! Windows as subdendrites, point orders, endpoint/branch classification,
//! derived-set estimates, and free-arc decomposition.

use crate::error::{CoreError, Result};
use crate::ids::{Point, VertexId};
use crate::num::{q_one, q_zero, Q};
use crate::presentation::Presentation;
use crate::subdendrite::Subdendrite;
use crate::truncation::{Carrier, OrientedFrag};
use std::collections::BTreeSet;
use std::sync::Arc;

/// The depth-D window as a closed subdendrite: all real edges with indices
/// bounded by D, segment slices, and residual tails to every limit vertex.
/// Monotone in depth.
pub fn truncate(pres: &Arc<Presentation>, depth: u32) -> Result<Subdendrite> {
    let t = pres.truncation(depth)?;
    let mut frags = Vec::with_capacity(t.edges.len());
    for e in &t.edges {
        match &e.carrier {
            Carrier::Edge(id) => frags.push(OrientedFrag::Edge {
                id: id.clone(),
                t0: q_zero(),
                t1: q_one(),
                len: e.len.clone(),
            }),
            Carrier::Seg(id, lo, hi) => frags.push(OrientedFrag::Seg {
                id: id.clone(),
                s0: lo.clone(),
                s1: hi.clone(),
                len: e.len.clone(),
            }),
            Carrier::Residual(key) => frags.push(OrientedFrag::Tail {
                key: key.clone(),
                d0: e.len.clone(),
                d1: q_zero(),
            }),
        }
    }
    Subdendrite::from_frags(pres, &frags)
}

/// Order of a point: the exact number of connected components of the
/// dendrite minus the point. Vertices are solved from the declarations;
/// interior points of edges and segments are cut points.
pub fn order(pres: &Arc<Presentation>, p: &Point, depth: u32) -> Result<u32> {
    let p = pres.canonical_point(p.clone())?;
    // the depth parameter only asserts resolvability within that window
    let _ = pres.truncation(depth.max(crate::presentation::round_depth(pres.needed_depth(&p))))?;
    match &p {
        Point::Vertex(v) => pres.vertex_order(v),
        Point::OnEdge(..) | Point::OnSegment(..) => Ok(2),
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub depth: u32,
    pub endpoints: Vec<VertexId>,
    pub branch_points: Vec<VertexId>,
    pub cut_points_sampled: Vec<VertexId>,
    /// Estimated accumulation points of the endpoint set.
    pub endpoint_derived: Vec<VertexId>,
    /// Estimated second derived set of the endpoint set.
    pub endpoint_second_derived: Vec<VertexId>,
}

fn window_vertex_orders(pres: &Arc<Presentation>, depth: u32) -> Result<Vec<(VertexId, u32)>> {
    let t = pres.truncation(depth)?;
    let mut out = Vec::with_capacity(t.verts.len());
    for v in &t.verts {
        out.push((v.id.clone(), pres.vertex_order(&v.id)?));
    }
    Ok(out)
}

fn endpoint_set(pres: &Arc<Presentation>, depth: u32) -> Result<Vec<VertexId>> {
    Ok(window_vertex_orders(pres, depth)?
        .into_iter()
        .filter(|(_, o)| *o == 1)
        .map(|(v, _)| v)
        .collect())
}

fn limit_vertices_in_window(pres: &Arc<Presentation>, depth: u32) -> Result<Vec<VertexId>> {
    let t = pres.truncation(depth)?;
    let mut out = BTreeSet::new();
    for v in &t.verts {
        if !pres.limit_keys_of_vertex(&v.id).is_empty() {
            out.insert(v.id.clone());
        }
    }
    Ok(out.into_iter().collect())
}

/// Accumulation candidates are declared limit vertices; membership is
/// certified by the nearest-distinct-member distance strictly decreasing
/// across three growing windows.
fn derived_estimate(
    pres: &Arc<Presentation>,
    sets: [&[VertexId]; 3],
    candidates: &[VertexId],
) -> Result<Vec<VertexId>> {
    let mut out = Vec::new();
    'cand: for c in candidates {
        let mut prev: Option<Q> = None;
        for set in sets {
            let mut nearest: Option<Q> = None;
            for v in set {
                if v == c {
                    continue;
                }
                let d = crate::geometry::distance(
                    pres,
                    &Point::Vertex(c.clone()),
                    &Point::Vertex(v.clone()),
                )?;
                if nearest.as_ref().map(|n| &d < n).unwrap_or(true) {
                    nearest = Some(d);
                }
            }
            let n = match nearest {
                Some(n) => n,
                None => continue 'cand,
            };
            if let Some(p) = &prev {
                if &n >= p {
                    continue 'cand;
                }
            }
            prev = Some(n);
        }
        out.push(c.clone());
    }
    Ok(out)
}

pub fn classify(pres: &Arc<Presentation>, depth: u32) -> Result<ClassifyReport> {
    let orders = window_vertex_orders(pres, depth)?;
    let mut endpoints = Vec::new();
    let mut branch = Vec::new();
    let mut cut = Vec::new();
    for (v, o) in &orders {
        match o {
            0 | 1 => endpoints.push(v.clone()),
            2 => cut.push(v.clone()),
            _ => branch.push(v.clone()),
        }
    }
    endpoints.sort();
    branch.sort();
    cut.sort();
    cut.truncate(64);
    let depths = [depth, depth + 4, depth + 8];
    let e_sets: Vec<Vec<VertexId>> = depths
        .iter()
        .map(|d| endpoint_set(pres, *d))
        .collect::<Result<_>>()?;
    let candidates = limit_vertices_in_window(pres, depths[2])?;
    let eprime = derived_estimate(
        pres,
        [&e_sets[0], &e_sets[1], &e_sets[2]],
        &candidates,
    )?;
    // second derived set: accumulation of the first derived estimate.
    // Per-depth first-derived sets are estimated from split windows.
    let e1: Vec<Vec<VertexId>> = depths
        .iter()
        .map(|d| {
            let dd = [*d, d + 2, d + 4];
            let sets: Vec<Vec<VertexId>> = dd
                .iter()
                .map(|x| endpoint_set(pres, *x))
                .collect::<Result<_>>()?;
            let cands = limit_vertices_in_window(pres, dd[2])?;
            derived_estimate(pres, [&sets[0], &sets[1], &sets[2]], &cands)
        })
        .collect::<Result<_>>()?;
    let esecond = derived_estimate(pres, [&e1[0], &e1[1], &e1[2]], &candidates)?;
    Ok(ClassifyReport {
        depth,
        endpoints,
        branch_points: branch,
        cut_points_sampled: cut,
        endpoint_derived: eprime,
        endpoint_second_derived: esecond,
    })
}

#[derive(Debug, Clone)]
pub struct OpenArc {
    /// Closure of the component; the component itself is its interior.
    pub closure: Subdendrite,
    pub endpoints: Vec<Point>,
}

#[derive(Debug, Clone)]
pub struct FreeArcReport {
    pub components: Vec<OpenArc>,
    /// Chains/segments whose hidden structure prevents finite decomposition.
    pub hidden_notes: Vec<String>,
}

/// Splits Y at the branch points of the ambient dendrite inside Y and at
/// the endpoints of Y; the resulting open components are free arcs.
pub fn free_arc_decomposition(pres: &Arc<Presentation>, y: &Subdendrite, depth: u32) -> Result<FreeArcReport> {
    let mut hidden_notes = Vec::new();
    for (key, d) in &y.tails {
        if pres.chain_is_hidden(key) && !num_traits::Zero::is_zero(d) {
            hidden_notes.push(format!(
                "tail toward {} hides branch structure beyond any window",
                pres.limit_vertex(key)
            ));
        }
    }
    for (g, _) in &y.segs {
        if pres.seg_is_dense(g) {
            hidden_notes.push(format!("segment {g} carries attachments dense in itself"));
        }
    }
    // cut points: ambient branch vertices inside Y, plus endpoints of Y
    let t = pres.truncation(depth)?;
    let mut cuts: Vec<Point> = Vec::new();
    for v in &t.verts {
        if pres.vertex_order(&v.id)? >= 3 && y.contains_point(pres, &Point::Vertex(v.id.clone()))? {
            cuts.push(Point::Vertex(v.id.clone()));
        }
    }
    for e in y.endpoints(pres)? {
        cuts.push(e);
    }
    // split fragments at the cut points
    let mut pieces: Vec<OrientedFrag> = Vec::new();
    for (e, list) in &y.edges {
        for (lo, hi) in list {
            let mut marks: Vec<Q> = vec![lo.clone(), hi.clone()];
            for c in &cuts {
                if let Some(t) = edge_param_of(pres, e, c)? {
                    if &t > lo && &t < hi {
                        marks.push(t);
                    }
                }
            }
            marks.sort();
            marks.dedup();
            for w in marks.windows(2) {
                pieces.push(OrientedFrag::Edge {
                    id: e.clone(),
                    t0: w[0].clone(),
                    t1: w[1].clone(),
                    len: (&w[1] - &w[0]) * pres.edge_len(e)?,
                });
            }
        }
    }
    for (g, list) in &y.segs {
        let seg_len = pres.seg_len(g)?;
        for (lo, hi) in list {
            let mut marks: Vec<Q> = vec![lo.clone(), hi.clone()];
            for c in &cuts {
                if let Some(s) = seg_param_of(pres, g, c)? {
                    if &s > lo && &s < hi {
                        marks.push(s);
                    }
                }
            }
            marks.sort();
            marks.dedup();
            for w in marks.windows(2) {
                pieces.push(OrientedFrag::Seg {
                    id: g.clone(),
                    s0: w[0].clone(),
                    s1: w[1].clone(),
                    len: (&w[1] - &w[0]) * &seg_len,
                });
            }
        }
    }
    // group pieces into components joined at non-cut shared points
    let cut_coords: BTreeSet<String> = cuts
        .iter()
        .map(|c| coord_key(pres, c))
        .collect::<Result<_>>()?;
    let n = pieces.len();
    let mut dsu: Vec<usize> = (0..n).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let r = find(dsu, dsu[x]);
            dsu[x] = r;
        }
        dsu[x]
    }
    let ends: Vec<Vec<(String, Point)>> = pieces
        .iter()
        .map(|p| frag_end_points(pres, p))
        .collect::<Result<_>>()?;
    for i in 0..n {
        for j in i + 1..n {
            let joined = ends[i].iter().any(|(ki, _)| {
                !cut_coords.contains(ki) && ends[j].iter().any(|(kj, _)| ki == kj)
            });
            if joined {
                let (a, b) = (find(&mut dsu, i), find(&mut dsu, j));
                if a != b {
                    dsu[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut dsu, i);
        groups.entry(r).or_default().push(i);
    }
    let mut components = Vec::new();
    for (_, idxs) in groups {
        let frags: Vec<OrientedFrag> = idxs.iter().map(|i| pieces[*i].clone()).collect();
        let closure = Subdendrite::from_frags(pres, &frags)?;
        let endpoints = closure.endpoints(pres)?;
        components.push(OpenArc { closure, endpoints });
    }
    Ok(FreeArcReport { components, hidden_notes })
}

/// An arc containing no branch point of the ambient dendrite in its
/// interior, with no hidden branching.
pub fn is_free_arc(pres: &Arc<Presentation>, s: &Subdendrite) -> Result<bool> {
    if s.is_empty() || s.has_hidden_branching(pres) {
        return Ok(false);
    }
    if !s.is_connected(pres)? {
        return Ok(false);
    }
    let ends = s.endpoints(pres)?;
    if ends.len() != 2 {
        return Ok(false);
    }
    let end_keys: BTreeSet<String> = ends
        .iter()
        .map(|p| coord_key(pres, p))
        .collect::<Result<_>>()?;
    // any ambient branch vertex strictly inside?
    let depth = s
        .boundary_points(pres)?
        .iter()
        .map(|p| pres.needed_depth(p))
        .max()
        .unwrap_or(1);
    let t = pres.truncation(crate::presentation::round_depth(depth))?;
    for v in &t.verts {
        let p = Point::Vertex(v.id.clone());
        if pres.vertex_order(&v.id)? >= 3
            && s.contains_point(pres, &p)?
            && !end_keys.contains(&coord_key(pres, &p)?)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn coord_key(pres: &Arc<Presentation>, p: &Point) -> Result<String> {
    let c = pres.point_coord(p)?;
    Ok(format!("{}:{}", crate::num::fmt_q(&c.0), crate::num::fmt_q(&c.1)))
}

fn frag_end_points(pres: &Arc<Presentation>, f: &OrientedFrag) -> Result<Vec<(String, Point)>> {
    let pts = match f {
        OrientedFrag::Edge { id, t0, t1, .. } => vec![
            pres.canonical_point(Point::OnEdge(id.clone(), t0.clone()))?,
            pres.canonical_point(Point::OnEdge(id.clone(), t1.clone()))?,
        ],
        OrientedFrag::Seg { id, s0, s1, .. } => vec![
            pres.canonical_point(Point::OnSegment(id.clone(), s0.clone()))?,
            pres.canonical_point(Point::OnSegment(id.clone(), s1.clone()))?,
        ],
        OrientedFrag::Tail { key, d0, d1 } => vec![
            pres.resolve_tail_point(key, d0)?,
            pres.resolve_tail_point(key, d1)?,
        ],
    };
    pts.into_iter()
        .map(|p| Ok((coord_key(pres, &p)?, p)))
        .collect()
}

/// Edge-parameter of a point when it lies on the given edge (including its
/// endpoints), else None.
fn edge_param_of(pres: &Arc<Presentation>, e: &crate::ids::EdgeId, p: &Point) -> Result<Option<Q>> {
    match p {
        Point::OnEdge(pe, t) if pe == e => Ok(Some(t.clone())),
        Point::Vertex(v) => {
            let (u, w) = pres.edge_endpoints(e)?;
            if *v == u {
                Ok(Some(q_zero()))
            } else if *v == w {
                Ok(Some(q_one()))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

fn seg_param_of(pres: &Arc<Presentation>, g: &crate::ids::SegId, p: &Point) -> Result<Option<Q>> {
    match p {
        Point::OnSegment(pg, s) if pg == g => Ok(Some(s.clone())),
        Point::Vertex(v) => {
            if let Some((seg, pos)) = pres.attach_info(v) {
                if seg == *g {
                    return Ok(Some(pos));
                }
            }
            let (u, w) = pres.seg_endpoints(g)?;
            if *v == u {
                Ok(Some(q_zero()))
            } else if *v == w {
                Ok(Some(q_one()))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

/// Checked resolvability for the public error contract.
pub fn require_resolvable(pres: &Arc<Presentation>, p: &Point) -> Result<()> {
    if pres.point_resolvable(p) {
        Ok(())
    } else {
        Err(CoreError::Unresolvable(p.to_string()))
    }
}
