//! Finite windows onto a presentation: a rooted tree with exact edge
//! lengths, supporting exact path and distance queries.
//!
//! Accumulation structure is closed off by residual connector edges: the
//! deepest generated vertex of each limit chain is joined to its limit
//! vertex by one edge whose length is the exact remaining chain length
//! (the approaching family lies on a straight segment, so the taxicab gap
//! telescopes the hidden edges). Segments are split at window-known
//! attachment positions into provisional edges.

use crate::error::{CoreError, Result};
use crate::ids::{EdgeId, LimitKey, Point, SegId, VertexId};
use crate::num::{l1_len, q_one, q_zero, Q};
use crate::presentation::Presentation;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

const MAX_WINDOW_EDGES: usize = 400_000;

/// Cartesian product of `0..=cap` over `arity` slots.
fn index_tuples(arity: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
        for t in &out {
            for v in 0..=cap {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    Edge(EdgeId),
    /// Provisional slice of a segment covering the absolute range [lo, hi].
    Seg(SegId, Q, Q),
    /// Residual connector of a limit chain; `u` is the window head, `v`
    /// the limit vertex.
    Residual(LimitKey),
}

#[derive(Debug, Clone)]
pub struct TEdge {
    pub carrier: Carrier,
    pub u: u32,
    pub v: u32,
    pub len: Q,
}

#[derive(Debug, Clone)]
pub struct TVert {
    pub id: VertexId,
    pub coord: (Q, Q),
    pub parent: Option<u32>,
    pub pedge: Option<u32>,
    pub depth: u32,
    pub rdist: Q,
}

#[derive(Debug)]
pub struct SegWindow {
    /// Sorted attachment positions including both segment ends.
    pub feet: Vec<(Q, u32)>,
    /// Provisional edge index between feet[i] and feet[i+1].
    pub slices: Vec<u32>,
}

#[derive(Debug)]
pub struct Truncation {
    pub depth: u32,
    pub verts: Vec<TVert>,
    pub vidx: BTreeMap<VertexId, u32>,
    pub edges: Vec<TEdge>,
    pub eidx: BTreeMap<EdgeId, u32>,
    pub adj: Vec<Vec<(u32, u32)>>,
    pub segwins: BTreeMap<SegId, SegWindow>,
    pub root: u32,
}

/// Graph-level position of a point inside a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Loc {
    Node(u32),
    /// On edge `e` at parameter t ∈ (0,1) measured from `edges[e].u`.
    OnE(u32, Q),
}

pub fn build_truncation(pres: &Arc<Presentation>, depth: u32) -> Result<Truncation> {
    let doc = pres.doc();
    let mut verts: Vec<TVert> = Vec::new();
    let mut vidx: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut edges: Vec<TEdge> = Vec::new();
    let mut eidx: BTreeMap<EdgeId, u32> = BTreeMap::new();

    let mut add_vertex = |verts: &mut Vec<TVert>, vidx: &mut BTreeMap<VertexId, u32>, id: VertexId| -> Result<u32> {
        if let Some(i) = vidx.get(&id) {
            return Ok(*i);
        }
        let coord = pres.vertex_coord(&id)?;
        let i = verts.len() as u32;
        verts.push(TVert { id: id.clone(), coord, parent: None, pedge: None, depth: 0, rdist: q_zero() });
        vidx.insert(id, i);
        Ok(i)
    };

    // real edges
    for c in &doc.edges {
        let arity = c.vars.len();
        let mut env = vec![0i64; arity];
        let mut stack_enumerate = |edges: &mut Vec<TEdge>,
                                   eidx: &mut BTreeMap<EdgeId, u32>,
                                   verts: &mut Vec<TVert>,
                                   vidx: &mut BTreeMap<VertexId, u32>|
         -> Result<()> {
            fn rec(
                pres: &Arc<Presentation>,
                c: &crate::doc::EdgeClause,
                depth: u32,
                slot: usize,
                env: &mut Vec<i64>,
                edges: &mut Vec<TEdge>,
                eidx: &mut BTreeMap<EdgeId, u32>,
                verts: &mut Vec<TVert>,
                vidx: &mut BTreeMap<VertexId, u32>,
                add_vertex: &mut impl FnMut(&mut Vec<TVert>, &mut BTreeMap<VertexId, u32>, VertexId) -> Result<u32>,
            ) -> Result<()> {
                if slot == c.vars.len() {
                    if !c.guard.eval(env)? {
                        return Ok(());
                    }
                    let id = EdgeId::new(c.family.clone(), env.clone());
                    let (fu, fv) = match pres.edge_endpoints(&id) {
                        Ok(x) => x,
                        Err(_) => return Ok(()),
                    };
                    let len = pres.edge_len(&id)?;
                    let ui = add_vertex(verts, vidx, fu)?;
                    let vi = add_vertex(verts, vidx, fv)?;
                    let ei = edges.len() as u32;
                    if edges.len() > MAX_WINDOW_EDGES {
                        return Err(CoreError::Budget("window edge count".into()));
                    }
                    edges.push(TEdge { carrier: Carrier::Edge(id.clone()), u: ui, v: vi, len });
                    eidx.insert(id, ei);
                    return Ok(());
                }
                let cap = match &c.vars[slot].bound {
                    Some(b) => {
                        let v = b.eval(env)?;
                        if v < 0 {
                            return Ok(());
                        }
                        v.min(1 << 30) as i64
                    }
                    None => depth as i64,
                };
                for val in 0..=cap {
                    env[slot] = val;
                    rec(pres, c, depth, slot + 1, env, edges, eidx, verts, vidx, add_vertex)?;
                }
                env[slot] = 0;
                Ok(())
            }
            rec(pres, c, depth, 0, &mut env, edges, eidx, verts, vidx, &mut add_vertex)
        };
        stack_enumerate(&mut edges, &mut eidx, &mut verts, &mut vidx)?;
    }

    // segments: feet + provisional slices
    let mut segwins: BTreeMap<SegId, SegWindow> = BTreeMap::new();
    for (si, s) in doc.segments.iter().enumerate() {
        let seg = SegId(s.name.clone());
        let (vfrom, vto) = pres.seg_endpoints(&seg)?;
        let mut feet: Vec<(Q, VertexId)> = vec![(q_zero(), vfrom), (q_one(), vto)];
        for a in &s.attaches {
            for (pos, v) in pres.attach_positions(si, a, depth)? {
                if pos <= q_zero() || pos >= q_one() {
                    return Err(CoreError::Invalid(format!(
                        "attachment {v} at position {} outside (0,1)",
                        crate::num::fmt_q(&pos)
                    )));
                }
                feet.push((pos, v));
            }
        }
        feet.sort_by(|a, b| a.0.cmp(&b.0));
        for w in feet.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CoreError::Invalid(format!(
                    "segment {} has coincident attachments at {}",
                    s.name,
                    crate::num::fmt_q(&w[0].0)
                )));
            }
        }
        let seg_total = pres.seg_len(&seg)?;
        let mut feet_nodes: Vec<(Q, u32)> = Vec::with_capacity(feet.len());
        for (pos, v) in feet {
            let i = add_vertex(&mut verts, &mut vidx, v)?;
            feet_nodes.push((pos, i));
        }
        let mut slices = Vec::with_capacity(feet_nodes.len() - 1);
        for w in feet_nodes.windows(2) {
            let (lo, ui) = (&w[0].0, w[0].1);
            let (hi, vi) = (&w[1].0, w[1].1);
            let len = (hi - lo) * &seg_total;
            let ei = edges.len() as u32;
            edges.push(TEdge {
                carrier: Carrier::Seg(seg.clone(), lo.clone(), hi.clone()),
                u: ui,
                v: vi,
                len,
            });
            slices.push(ei);
        }
        segwins.insert(seg, SegWindow { feet: feet_nodes, slices });
    }

    // limit instances: residual connectors
    for (di, l) in doc.limits.iter().enumerate() {
        for outer in index_tuples(l.vars.len(), depth as i64) {
            if !l.guard.eval(&outer)? {
                continue;
            }
            let key = LimitKey { decl: di, outer };
            let lim = pres.limit_vertex(&key);
            if pres.vertex_coord(&lim).is_err() {
                continue;
            }
            let head = pres.approach_vertex(&key, depth as i64 + 1)?;
            if !pres.vertex_exists(&head) {
                continue;
            }
            let li = add_vertex(&mut verts, &mut vidx, lim)?;
            let hi = add_vertex(&mut verts, &mut vidx, head.clone())?;
            let len = l1_len(&verts[hi as usize].coord, &verts[li as usize].coord);
            if len.is_zero() {
                return Err(CoreError::Invalid(format!(
                    "residual connector at {head} has zero length"
                )));
            }
            edges.push(TEdge { carrier: Carrier::Residual(key), u: hi, v: li, len });
        }
    }

    if verts.is_empty() {
        return Err(CoreError::Invalid("presentation generates no vertices".into()));
    }

    // adjacency + tree check
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); verts.len()];
    for (ei, e) in edges.iter().enumerate() {
        adj[e.u as usize].push((ei as u32, e.v));
        adj[e.v as usize].push((ei as u32, e.u));
    }
    let root = verts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.id.cmp(&b.1.id))
        .map(|(i, _)| i as u32)
        .unwrap();
    // BFS
    let mut seen = vec![false; verts.len()];
    let mut queue = std::collections::VecDeque::new();
    seen[root as usize] = true;
    queue.push_back(root);
    let mut visited = 1usize;
    while let Some(x) = queue.pop_front() {
        let neighbors = adj[x as usize].clone();
        for (ei, y) in neighbors {
            if !seen[y as usize] {
                seen[y as usize] = true;
                visited += 1;
                let rd = &verts[x as usize].rdist + &edges[ei as usize].len;
                let d = verts[x as usize].depth + 1;
                let vy = &mut verts[y as usize];
                vy.parent = Some(x);
                vy.pedge = Some(ei);
                vy.depth = d;
                vy.rdist = rd;
                queue.push_back(y);
            }
        }
    }
    if visited != verts.len() {
        return Err(CoreError::Invalid(format!(
            "window at depth {depth} is disconnected ({visited}/{} vertices reachable)",
            verts.len()
        )));
    }
    if edges.len() + 1 != verts.len() {
        return Err(CoreError::Invalid(format!(
            "window at depth {depth} is not a tree ({} edges, {} vertices)",
            edges.len(),
            verts.len()
        )));
    }

    Ok(Truncation { depth, verts, vidx, edges, eidx, adj, segwins, root })
}

impl Truncation {
    pub fn locate(&self, p: &Point) -> Result<Loc> {
        match p {
            Point::Vertex(v) => self
                .vidx
                .get(v)
                .map(|i| Loc::Node(*i))
                .ok_or_else(|| CoreError::Unresolvable(format!("{v} not in window {}", self.depth))),
            Point::OnEdge(e, t) => {
                if t.is_zero() || *t == q_one() {
                    return Err(CoreError::Invalid(format!("non-canonical point {p}")));
                }
                self.eidx
                    .get(e)
                    .map(|i| Loc::OnE(*i, t.clone()))
                    .ok_or_else(|| CoreError::Unresolvable(format!("{e} not in window {}", self.depth)))
            }
            Point::OnSegment(s, pos) => {
                let w = self
                    .segwins
                    .get(s)
                    .ok_or_else(|| CoreError::UnknownFamily(s.0.clone()))?;
                match w.feet.binary_search_by(|f| f.0.cmp(pos)) {
                    Ok(i) => Ok(Loc::Node(w.feet[i].1)),
                    Err(i) => {
                        if i == 0 || i == w.feet.len() {
                            return Err(CoreError::Unresolvable(format!("{p} outside segment range")));
                        }
                        let lo = &w.feet[i - 1].0;
                        let hi = &w.feet[i].0;
                        let t = (pos - lo) / (hi - lo);
                        Ok(Loc::OnE(w.slices[i - 1], t))
                    }
                }
            }
        }
    }

    fn lca(&self, mut x: u32, mut y: u32) -> u32 {
        while self.verts[x as usize].depth > self.verts[y as usize].depth {
            x = self.verts[x as usize].parent.unwrap();
        }
        while self.verts[y as usize].depth > self.verts[x as usize].depth {
            y = self.verts[y as usize].parent.unwrap();
        }
        while x != y {
            x = self.verts[x as usize].parent.unwrap();
            y = self.verts[y as usize].parent.unwrap();
        }
        x
    }

    pub fn vdist(&self, x: u32, y: u32) -> Q {
        let a = self.lca(x, y);
        &self.verts[x as usize].rdist + &self.verts[y as usize].rdist
            - &self.verts[a as usize].rdist * crate::num::qi(2)
    }

    fn anchor_candidates(&self, l: &Loc) -> Vec<(u32, Q)> {
        match l {
            Loc::Node(n) => vec![(*n, q_zero())],
            Loc::OnE(e, t) => {
                let ed = &self.edges[*e as usize];
                vec![
                    (ed.u, t * &ed.len),
                    (ed.v, (q_one() - t) * &ed.len),
                ]
            }
        }
    }

    pub fn dist(&self, a: &Loc, b: &Loc) -> Q {
        if let (Loc::OnE(e1, t1), Loc::OnE(e2, t2)) = (a, b) {
            if e1 == e2 {
                return crate::num::abs_q(&(t1 - t2)) * &self.edges[*e1 as usize].len;
            }
        }
        if a == b {
            return q_zero();
        }
        let ca = self.anchor_candidates(a);
        let cb = self.anchor_candidates(b);
        let mut best: Option<Q> = None;
        for (na, xa) in &ca {
            for (nb, xb) in &cb {
                let d = xa + xb + self.vdist(*na, *nb);
                if best.as_ref().map(|b| &d < b).unwrap_or(true) {
                    best = Some(d);
                }
            }
        }
        best.unwrap()
    }

    /// Ordered fragment walk from `a` to `b`. Fragments are edge indices
    /// with traversal parameters (possibly reversed).
    pub fn arc_path(&self, a: &Loc, b: &Loc) -> ArcPath {
        let mut frags: Vec<GFrag> = Vec::new();
        if a == b {
            return ArcPath { frags, len: q_zero() };
        }
        if let (Loc::OnE(e1, t1), Loc::OnE(e2, t2)) = (a, b) {
            if e1 == e2 {
                let len = crate::num::abs_q(&(t1 - t2)) * &self.edges[*e1 as usize].len;
                frags.push(GFrag { edge: *e1, t0: t1.clone(), t1: t2.clone() });
                return ArcPath { frags, len };
            }
        }
        // choose anchor pair minimizing total length
        let ca = self.anchor_candidates(a);
        let cb = self.anchor_candidates(b);
        let mut best: Option<(Q, usize, usize)> = None;
        for (i, (na, xa)) in ca.iter().enumerate() {
            for (j, (nb, xb)) in cb.iter().enumerate() {
                let d = xa + xb + self.vdist(*na, *nb);
                if best.as_ref().map(|(bd, _, _)| &d < bd).unwrap_or(true) {
                    best = Some((d, i, j));
                }
            }
        }
        let (total, i, j) = best.unwrap();
        let (na, _) = &ca[i];
        let (nb, _) = &cb[j];
        if let Loc::OnE(e, t) = a {
            let ed = &self.edges[*e as usize];
            let target = if *na == ed.u { q_zero() } else { q_one() };
            if *t != target {
                frags.push(GFrag { edge: *e, t0: t.clone(), t1: target });
            }
        }
        // vertex path na -> nb
        let m = self.lca(*na, *nb);
        let mut up: Vec<GFrag> = Vec::new();
        let mut x = *na;
        while x != m {
            let pe = self.verts[x as usize].pedge.unwrap();
            let ed = &self.edges[pe as usize];
            let (t0, t1) = if ed.v == x { (q_one(), q_zero()) } else { (q_zero(), q_one()) };
            up.push(GFrag { edge: pe, t0, t1 });
            x = self.verts[x as usize].parent.unwrap();
        }
        frags.extend(up);
        let mut down: Vec<GFrag> = Vec::new();
        let mut y = *nb;
        while y != m {
            let pe = self.verts[y as usize].pedge.unwrap();
            let ed = &self.edges[pe as usize];
            // traversing toward y (away from root)
            let (t0, t1) = if ed.v == y { (q_zero(), q_one()) } else { (q_one(), q_zero()) };
            down.push(GFrag { edge: pe, t0, t1 });
            y = self.verts[y as usize].parent.unwrap();
        }
        down.reverse();
        frags.extend(down);
        if let Loc::OnE(e, t) = b {
            let ed = &self.edges[*e as usize];
            let source = if *nb == ed.u { q_zero() } else { q_one() };
            if *t != source {
                frags.push(GFrag { edge: *e, t0: source, t1: t.clone() });
            }
        }
        ArcPath { frags, len: total }
    }
}

#[derive(Debug, Clone)]
pub struct GFrag {
    pub edge: u32,
    pub t0: Q,
    pub t1: Q,
}

#[derive(Debug, Clone)]
pub struct ArcPath {
    pub frags: Vec<GFrag>,
    pub len: Q,
}

/// Window-independent oriented fragment of an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientedFrag {
    Edge { id: EdgeId, t0: Q, t1: Q, len: Q },
    Seg { id: SegId, s0: Q, s1: Q, len: Q },
    /// Along a limit chain; d0/d1 are exact distances from the limit vertex.
    Tail { key: LimitKey, d0: Q, d1: Q },
}

impl OrientedFrag {
    pub fn length(&self) -> Q {
        match self {
            OrientedFrag::Edge { len, .. } | OrientedFrag::Seg { len, .. } => len.clone(),
            OrientedFrag::Tail { d0, d1, .. } => crate::num::abs_q(&(d0 - d1)),
        }
    }
}

/// Converts a graph-level walk into stable oriented fragments.
pub fn to_stable(t: &Truncation, path: &ArcPath) -> Vec<OrientedFrag> {
    let mut out = Vec::with_capacity(path.frags.len());
    for f in &path.frags {
        let ed = &t.edges[f.edge as usize];
        let seg_len = crate::num::abs_q(&(&f.t1 - &f.t0)) * &ed.len;
        match &ed.carrier {
            Carrier::Edge(id) => out.push(OrientedFrag::Edge {
                id: id.clone(),
                t0: f.t0.clone(),
                t1: f.t1.clone(),
                len: seg_len,
            }),
            Carrier::Seg(id, lo, hi) => {
                let span = hi - lo;
                out.push(OrientedFrag::Seg {
                    id: id.clone(),
                    s0: lo + &f.t0 * &span,
                    s1: lo + &f.t1 * &span,
                    len: seg_len,
                });
            }
            Carrier::Residual(key) => {
                // u (t=0) is the head, v (t=1) the limit vertex
                let d0 = (q_one() - &f.t0) * &ed.len;
                let d1 = (q_one() - &f.t1) * &ed.len;
                out.push(OrientedFrag::Tail { key: key.clone(), d0, d1 });
            }
        }
    }
    out
}

/// Exact point at arc-length `target` along an oriented fragment walk.
pub fn point_at_len(pres: &Arc<Presentation>, frags: &[OrientedFrag], target: &Q) -> Result<Point> {
    let mut remaining = target.clone();
    for (i, f) in frags.iter().enumerate() {
        let len = f.length();
        let last = i + 1 == frags.len();
        if &remaining <= &len || last {
            if remaining > len {
                return Err(CoreError::Invalid("arc-length interpolation out of range".into()));
            }
            return match f {
                OrientedFrag::Edge { id, t0, t1, len } => {
                    if len.is_zero() {
                        return pres.canonical_point(Point::OnEdge(id.clone(), t0.clone()));
                    }
                    let t = t0 + (t1 - t0) * &remaining / len;
                    pres.canonical_point(Point::OnEdge(id.clone(), t))
                }
                OrientedFrag::Seg { id, s0, s1, len } => {
                    if len.is_zero() {
                        return pres.canonical_point(Point::OnSegment(id.clone(), s0.clone()));
                    }
                    let s = s0 + (s1 - s0) * &remaining / len;
                    pres.canonical_point(Point::OnSegment(id.clone(), s))
                }
                OrientedFrag::Tail { key, d0, d1 } => {
                    let len = crate::num::abs_q(&(d0 - d1));
                    if len.is_zero() {
                        return pres.resolve_tail_point(key, d0);
                    }
                    let d = d0 + (d1 - d0) * &remaining / &len;
                    pres.resolve_tail_point(key, &d)
                }
            };
        }
        remaining -= len;
    }
    Err(CoreError::Invalid("empty arc in interpolation".into()))
}
