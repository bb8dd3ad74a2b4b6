//! Semantic layer over a dendrite document: resolves vertices, edges,
//! segments, and limit chains on demand, and materializes finite windows.
//!
//! Everything is lazy: a vertex or edge exists whenever its family guard
//! accepts the indices, regardless of any window depth. Windows
//! ("truncations") are finite rooted trees used for path queries; results
//! are always re-expressed in window-independent addresses.

use crate::doc::{AttachClause, DendriteDoc, EdgeClause, LimitDecl, MetricMode, SegmentDecl, VertexClause};
use crate::error::{CoreError, Result};
use crate::ids::{EdgeId, LimitKey, Point, SegId, VertexId};
use crate::num::{l1_len, q_zero, Q};
use crate::truncation::{build_truncation, Truncation};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

const TAIL_SCAN_CAP: i64 = 1 << 20;

pub struct Presentation {
    doc: Arc<DendriteDoc>,
    vclauses: BTreeMap<String, Vec<usize>>,
    varity: BTreeMap<String, usize>,
    eclauses: BTreeMap<String, usize>,
    attaches: BTreeMap<String, (usize, usize)>,
    segs: BTreeMap<String, usize>,
    limits_by_family: BTreeMap<String, Vec<usize>>,
    chain_decl: BTreeMap<String, usize>,
    hidden_chain: Vec<bool>,
    dense_seg: Vec<bool>,
    trunc: RwLock<BTreeMap<u32, Arc<Truncation>>>,
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Presentation({})", self.doc.name)
    }
}

impl Presentation {
    pub fn new(doc: DendriteDoc) -> Result<Arc<Presentation>> {
        let mut vclauses: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut varity: BTreeMap<String, usize> = BTreeMap::new();
        for (i, c) in doc.vertices.iter().enumerate() {
            if let Some(a) = varity.get(&c.family) {
                if *a != c.vars.len() {
                    return Err(CoreError::Invalid(format!(
                        "vertex family `{}` declared with inconsistent arity",
                        c.family
                    )));
                }
            } else {
                varity.insert(c.family.clone(), c.vars.len());
            }
            vclauses.entry(c.family.clone()).or_default().push(i);
        }
        let mut segs = BTreeMap::new();
        let mut attaches = BTreeMap::new();
        for (si, s) in doc.segments.iter().enumerate() {
            if segs.insert(s.name.clone(), si).is_some() {
                return Err(CoreError::Invalid(format!("segment `{}` declared twice", s.name)));
            }
            for (ai, a) in s.attaches.iter().enumerate() {
                if varity.contains_key(&a.family) || attaches.contains_key(&a.family) {
                    return Err(CoreError::Invalid(format!(
                        "attach family `{}` collides with another vertex family",
                        a.family
                    )));
                }
                varity.insert(a.family.clone(), 1);
                attaches.insert(a.family.clone(), (si, ai));
            }
        }
        let mut eclauses = BTreeMap::new();
        for (i, c) in doc.edges.iter().enumerate() {
            if eclauses.insert(c.family.clone(), i).is_some() {
                return Err(CoreError::Invalid(format!("edge family `{}` declared twice", c.family)));
            }
            for side in [&c.from, &c.to] {
                if !varity.contains_key(&side.family) {
                    return Err(CoreError::UnknownFamily(side.family.clone()));
                }
                let mut used: Vec<bool> = vec![false; c.vars.len()];
                for m in &side.idx {
                    if let Some(v) = m.var {
                        if v >= c.vars.len() {
                            return Err(CoreError::Invalid(format!(
                                "edge `{}` endpoint references variable out of range",
                                c.family
                            )));
                        }
                        used[v] = true;
                    }
                }
                if used.iter().any(|u| !u) && !c.vars.is_empty() {
                    return Err(CoreError::Invalid(format!(
                        "edge `{}` endpoint must mention every index variable",
                        c.family
                    )));
                }
                if side.idx.len() != varity[&side.family] {
                    return Err(CoreError::Invalid(format!(
                        "edge `{}` endpoint arity mismatch for `{}`",
                        c.family, side.family
                    )));
                }
            }
        }
        let mut limits_by_family: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut chain_decl = BTreeMap::new();
        for (i, l) in doc.limits.iter().enumerate() {
            if !varity.contains_key(&l.family) {
                return Err(CoreError::UnknownFamily(l.family.clone()));
            }
            if !varity.contains_key(&l.approach_family) {
                return Err(CoreError::UnknownFamily(l.approach_family.clone()));
            }
            if !eclauses.contains_key(&l.chain_family) {
                return Err(CoreError::UnknownFamily(l.chain_family.clone()));
            }
            if varity[&l.approach_family] != l.approach_idx.len() {
                return Err(CoreError::Invalid(format!(
                    "limit for `{}`: approach arity mismatch",
                    l.family
                )));
            }
            limits_by_family.entry(l.family.clone()).or_default().push(i);
            chain_decl.insert(l.chain_family.clone(), i);
        }
        // A chain hides branch points when anything besides the chain edges
        // attaches to the approaching family.
        let hidden_chain = doc
            .limits
            .iter()
            .map(|l| {
                doc.edges.iter().any(|e| {
                    e.family != l.chain_family
                        && (e.from.family == l.approach_family || e.to.family == l.approach_family)
                })
            })
            .collect();
        let dense_seg = doc
            .segments
            .iter()
            .map(|s| s.attaches.iter().any(|a| a.var.bound.is_none()))
            .collect();
        Ok(Arc::new(Presentation {
            doc: Arc::new(doc),
            vclauses,
            varity,
            eclauses,
            attaches,
            segs,
            limits_by_family,
            chain_decl,
            hidden_chain,
            dense_seg,
            trunc: RwLock::new(BTreeMap::new()),
        }))
    }

    pub fn doc(&self) -> &DendriteDoc {
        &self.doc
    }

    pub fn name(&self) -> &str {
        &self.doc.name
    }

    pub fn metric(&self) -> MetricMode {
        self.doc.metric
    }

    pub fn arity(&self, family: &str) -> Option<usize> {
        self.varity.get(family).copied().or_else(|| {
            self.eclauses
                .get(family)
                .map(|i| self.doc.edges[*i].vars.len())
        })
    }

    /// Pads a human-entered index list with trailing zeros to family arity.
    pub fn pad_vertex(&self, family: &str, idx: &[i64]) -> Result<VertexId> {
        let arity = *self
            .varity
            .get(family)
            .ok_or_else(|| CoreError::UnknownFamily(family.to_string()))?;
        if idx.len() > arity {
            return Err(CoreError::Invalid(format!(
                "family `{family}` takes {arity} indices, got {}",
                idx.len()
            )));
        }
        let mut full = idx.to_vec();
        full.resize(arity, 0);
        Ok(VertexId::new(family, full))
    }

    pub fn vertex_exists(&self, v: &VertexId) -> bool {
        if v.idx.iter().any(|i| *i < 0) {
            return false;
        }
        if self.vertex_clause(v).is_some() {
            return true;
        }
        if let Some((si, ai)) = self.attaches.get(&v.family) {
            let a = &self.doc.segments[*si].attaches[*ai];
            if v.idx.len() == 1 && a.guard.eval(&v.idx).unwrap_or(false) {
                return true;
            }
        }
        false
    }

    fn vertex_clause(&self, v: &VertexId) -> Option<&VertexClause> {
        if v.idx.iter().any(|i| *i < 0) {
            return None;
        }
        let cs = self.vclauses.get(&v.family)?;
        cs.iter().map(|ci| &self.doc.vertices[*ci]).find(|c| {
            c.vars.len() == v.idx.len()
                && c.guard.eval(&v.idx).unwrap_or(false)
                && c.vars.iter().zip(&v.idx).all(|(spec, val)| match &spec.bound {
                    Some(b) => b.eval(&v.idx).map(|cap| (*val as i128) <= cap).unwrap_or(false),
                    None => true,
                })
        })
    }

    pub fn attach_info(&self, v: &VertexId) -> Option<(SegId, Q)> {
        let (si, ai) = self.attaches.get(&v.family)?;
        let seg = &self.doc.segments[*si];
        let a = &seg.attaches[*ai];
        if v.idx.len() != 1 || v.idx[0] < 0 || !a.guard.eval(&v.idx).unwrap_or(false) {
            return None;
        }
        let pos = a.pos.eval(&v.idx).ok()?;
        Some((SegId(seg.name.clone()), pos))
    }

    pub fn vertex_coord(&self, v: &VertexId) -> Result<(Q, Q)> {
        if let Some(c) = self.vertex_clause(v) {
            return Ok((c.coords.0.eval(&v.idx)?, c.coords.1.eval(&v.idx)?));
        }
        if let Some((seg, pos)) = self.attach_info(v) {
            return self.seg_interp(&seg, &pos);
        }
        Err(CoreError::NoSuchVertex(v.to_string()))
    }

    pub fn edge_clause(&self, family: &str) -> Result<&EdgeClause> {
        self.eclauses
            .get(family)
            .map(|i| &self.doc.edges[*i])
            .ok_or_else(|| CoreError::UnknownFamily(family.to_string()))
    }

    pub fn edge_exists(&self, e: &EdgeId) -> bool {
        self.edge_endpoints(e).is_ok()
    }

    pub fn edge_endpoints(&self, e: &EdgeId) -> Result<(VertexId, VertexId)> {
        let c = self.edge_clause(&e.family)?;
        if c.vars.len() != e.idx.len() || e.idx.iter().any(|i| *i < 0) {
            return Err(CoreError::NoSuchEdge(e.to_string()));
        }
        if !c.guard.eval(&e.idx).unwrap_or(false) {
            return Err(CoreError::NoSuchEdge(e.to_string()));
        }
        // bounded variables also constrain existence
        for (spec, val) in c.vars.iter().zip(&e.idx) {
            if let Some(b) = &spec.bound {
                if b.eval(&e.idx).map(|cap| (*val as i128) > cap).unwrap_or(true) {
                    return Err(CoreError::NoSuchEdge(e.to_string()));
                }
            }
        }
        let mut ends = Vec::with_capacity(2);
        for side in [&c.from, &c.to] {
            let mut idx = Vec::with_capacity(side.idx.len());
            for m in &side.idx {
                idx.push(m.eval(&e.idx)?);
            }
            let v = VertexId::new(side.family.clone(), idx);
            if !self.vertex_exists(&v) {
                return Err(CoreError::NoSuchEdge(format!("{e} (endpoint {v} missing)")));
            }
            ends.push(v);
        }
        let to = ends.pop().unwrap();
        let from = ends.pop().unwrap();
        Ok((from, to))
    }

    pub fn edge_len(&self, e: &EdgeId) -> Result<Q> {
        let (u, v) = self.edge_endpoints(e)?;
        let len = l1_len(&self.vertex_coord(&u)?, &self.vertex_coord(&v)?);
        if len.is_zero() {
            return Err(CoreError::Invalid(format!("edge {e} has zero length")));
        }
        Ok(len)
    }

    pub fn seg_decl(&self, seg: &SegId) -> Result<&SegmentDecl> {
        self.segs
            .get(&seg.0)
            .map(|i| &self.doc.segments[*i])
            .ok_or_else(|| CoreError::UnknownFamily(seg.0.clone()))
    }

    pub fn seg_is_dense(&self, seg: &SegId) -> bool {
        self.segs.get(&seg.0).map(|i| self.dense_seg[*i]).unwrap_or(false)
    }

    pub fn seg_endpoints(&self, seg: &SegId) -> Result<(VertexId, VertexId)> {
        let d = self.seg_decl(seg)?;
        let from = VertexId::new(d.from.family.clone(), d.from.idx.iter().map(|m| m.offset).collect());
        let to = VertexId::new(d.to.family.clone(), d.to.idx.iter().map(|m| m.offset).collect());
        Ok((from, to))
    }

    pub fn seg_coords(&self, seg: &SegId) -> Result<((Q, Q), (Q, Q))> {
        let (u, v) = self.seg_endpoints(seg)?;
        Ok((self.vertex_coord(&u)?, self.vertex_coord(&v)?))
    }

    pub fn seg_len(&self, seg: &SegId) -> Result<Q> {
        let (a, b) = self.seg_coords(seg)?;
        Ok(l1_len(&a, &b))
    }

    pub fn seg_interp(&self, seg: &SegId, s: &Q) -> Result<(Q, Q)> {
        let (a, b) = self.seg_coords(seg)?;
        Ok((
            &a.0 + (&b.0 - &a.0) * s,
            &a.1 + (&b.1 - &a.1) * s,
        ))
    }

    pub fn point_coord(&self, p: &Point) -> Result<(Q, Q)> {
        match p {
            Point::Vertex(v) => self.vertex_coord(v),
            Point::OnEdge(e, t) => {
                let (u, v) = self.edge_endpoints(e)?;
                let a = self.vertex_coord(&u)?;
                let b = self.vertex_coord(&v)?;
                Ok((&a.0 + (&b.0 - &a.0) * t, &a.1 + (&b.1 - &a.1) * t))
            }
            Point::OnSegment(s, t) => self.seg_interp(s, t),
        }
    }

    /// Semantic point equality: exact equality of embedded coordinates.
    /// The embedding is injective for well-formed presentations.
    pub fn points_eq(&self, a: &Point, b: &Point) -> bool {
        if a == b {
            return true;
        }
        match (self.point_coord(a), self.point_coord(b)) {
            (Ok(ca), Ok(cb)) => ca == cb,
            _ => false,
        }
    }

    /// Normalizes edge parameters 0/1 (and segment positions 0/1) to the
    /// vertex form so equal points have one canonical representation.
    pub fn canonical_point(&self, p: Point) -> Result<Point> {
        match p {
            Point::OnEdge(e, t) => {
                if t.is_zero() {
                    Ok(Point::Vertex(self.edge_endpoints(&e)?.0))
                } else if t == crate::num::q_one() {
                    Ok(Point::Vertex(self.edge_endpoints(&e)?.1))
                } else {
                    Ok(Point::OnEdge(e, t))
                }
            }
            Point::OnSegment(s, t) => {
                if t.is_zero() {
                    Ok(Point::Vertex(self.seg_endpoints(&s)?.0))
                } else if t == crate::num::q_one() {
                    Ok(Point::Vertex(self.seg_endpoints(&s)?.1))
                } else {
                    Ok(Point::OnSegment(s, t))
                }
            }
            v => Ok(v),
        }
    }

    pub fn point_resolvable(&self, p: &Point) -> bool {
        self.point_coord(p).is_ok()
    }

    // ----- limit chains -------------------------------------------------

    pub fn limit_decls(&self) -> &[LimitDecl] {
        &self.doc.limits
    }

    pub fn limit_vertex(&self, key: &LimitKey) -> VertexId {
        let d = &self.doc.limits[key.decl];
        VertexId::new(d.family.clone(), key.outer.clone())
    }

    /// All limit declarations whose target matches this vertex.
    pub fn limit_keys_of_vertex(&self, v: &VertexId) -> Vec<LimitKey> {
        let mut out = Vec::new();
        if v.idx.iter().any(|i| *i < 0) {
            return out;
        }
        if let Some(ds) = self.limits_by_family.get(&v.family) {
            for di in ds {
                let d = &self.doc.limits[*di];
                if d.vars.len() == v.idx.len() && d.guard.eval(&v.idx).unwrap_or(false) {
                    out.push(LimitKey { decl: *di, outer: v.idx.clone() });
                }
            }
        }
        out
    }

    pub fn approach_vertex(&self, key: &LimitKey, k: i64) -> Result<VertexId> {
        let d = &self.doc.limits[key.decl];
        let mut env = key.outer.clone();
        env.push(k);
        let mut idx = Vec::with_capacity(d.approach_idx.len());
        for m in &d.approach_idx {
            idx.push(m.eval(&env)?);
        }
        Ok(VertexId::new(d.approach_family.clone(), idx))
    }

    pub fn chain_edge_id(&self, key: &LimitKey, k: i64) -> EdgeId {
        let d = &self.doc.limits[key.decl];
        let mut idx = key.outer.clone();
        idx.push(k);
        EdgeId::new(d.chain_family.clone(), idx)
    }

    /// Identifies an edge as the k-th chain edge of some limit.
    pub fn chain_of_edge(&self, e: &EdgeId) -> Option<(LimitKey, i64)> {
        let di = *self.chain_decl.get(&e.family)?;
        let d = &self.doc.limits[di];
        if e.idx.len() != d.vars.len() + 1 {
            return None;
        }
        let outer = e.idx[..d.vars.len()].to_vec();
        let k = *e.idx.last().unwrap();
        if !d.guard.eval(&outer).unwrap_or(false) {
            return None;
        }
        Some((LimitKey { decl: di, outer }, k))
    }

    pub fn chain_is_hidden(&self, key: &LimitKey) -> bool {
        self.hidden_chain[key.decl]
    }

    /// Exact distance from a chain point to its limit vertex, measured
    /// along the (straight) chain.
    pub fn delta_of(&self, key: &LimitKey, p: &Point) -> Result<Q> {
        let lim = self.limit_vertex(key);
        Ok(l1_len(&self.point_coord(p)?, &self.vertex_coord(&lim)?))
    }

    /// Does this point lie on the declared chain of `key` (including the
    /// limit vertex itself)? Returns its distance-from-limit if so.
    pub fn chain_delta_of_point(&self, key: &LimitKey, p: &Point) -> Option<Q> {
        match p {
            Point::Vertex(v) => {
                if *v == self.limit_vertex(key) {
                    return Some(q_zero());
                }
                let d = &self.doc.limits[key.decl];
                if v.family != d.approach_family {
                    return None;
                }
                // invert the approach index maps against the outer indices
                let mut k: Option<i64> = None;
                let n = key.outer.len();
                if v.idx.len() != d.approach_idx.len() {
                    return None;
                }
                for (m, val) in d.approach_idx.iter().zip(&v.idx) {
                    match m.var {
                        Some(slot) if slot == n => match m.solve(*val)? {
                            Some((_, kk)) => match k {
                                Some(prev) if prev != kk => return None,
                                _ => k = Some(kk),
                            },
                            None => return None,
                        },
                        Some(slot) => {
                            if m.eval(&key.outer).ok()? != *val {
                                return None;
                            }
                            let _ = slot;
                        }
                        None => {
                            if m.offset != *val {
                                return None;
                            }
                        }
                    }
                }
                k?;
                self.delta_of(key, p).ok()
            }
            Point::OnEdge(e, _) => {
                let (ek, _) = self.chain_of_edge(e)?;
                if ek != *key {
                    return None;
                }
                self.delta_of(key, p).ok()
            }
            Point::OnSegment(..) => None,
        }
    }

    fn first_chain_k(&self, key: &LimitKey) -> Result<i64> {
        for k in 0..TAIL_SCAN_CAP {
            let v = self.approach_vertex(key, k)?;
            if self.vertex_exists(&v) && self.edge_exists(&self.chain_edge_id(key, k)) {
                return Ok(k);
            }
            if k > 4 {
                break;
            }
        }
        Err(CoreError::Invalid(format!(
            "limit chain of {} has no edges",
            self.limit_vertex(key)
        )))
    }

    /// Resolves the point at exact distance `delta` from the limit vertex
    /// along the chain to a real-edge (or vertex) address.
    pub fn resolve_tail_point(&self, key: &LimitKey, delta: &Q) -> Result<Point> {
        if delta.is_zero() {
            return Ok(Point::Vertex(self.limit_vertex(key)));
        }
        let lim_coord = self.vertex_coord(&self.limit_vertex(key))?;
        let mut k = self.first_chain_k(key)?;
        let mut dk = l1_len(&self.vertex_coord(&self.approach_vertex(key, k)?)?, &lim_coord);
        if &dk < delta {
            return Err(CoreError::Unresolvable(format!(
                "distance {} exceeds chain extent toward {}",
                crate::num::fmt_q(delta),
                self.limit_vertex(key)
            )));
        }
        let mut steps = 0i64;
        loop {
            if &dk == delta {
                return Ok(Point::Vertex(self.approach_vertex(key, k)?));
            }
            let dk1 = l1_len(&self.vertex_coord(&self.approach_vertex(key, k + 1)?)?, &lim_coord);
            if &dk1 <= delta {
                // inside chain edge k, param from approach(k) toward approach(k+1)
                let t = (&dk - delta) / (&dk - &dk1);
                return self.canonical_point(Point::OnEdge(self.chain_edge_id(key, k), t));
            }
            k += 1;
            dk = dk1;
            steps += 1;
            if steps > TAIL_SCAN_CAP {
                return Err(CoreError::Budget("tail address resolution scan".into()));
            }
        }
    }

    // ----- incidence and order ------------------------------------------

    /// All real edges of the full dendrite incident to a vertex.
    pub fn incident_real_edges(&self, v: &VertexId) -> Result<Vec<(EdgeId, bool)>> {
        let mut out = Vec::new();
        for c in &self.doc.edges {
            'side: for (side, is_from) in [(&c.from, true), (&c.to, false)] {
                if side.family != v.family || side.idx.len() != v.idx.len() {
                    continue;
                }
                let mut env: Vec<Option<i64>> = vec![None; c.vars.len()];
                for (m, val) in side.idx.iter().zip(&v.idx) {
                    match m.solve(*val) {
                        None => continue 'side,
                        Some(None) => {}
                        Some(Some((var, value))) => match env[var] {
                            Some(prev) if prev != value => continue 'side,
                            _ => env[var] = Some(value),
                        },
                    }
                }
                if env.iter().any(|e| e.is_none()) {
                    continue;
                }
                let env: Vec<i64> = env.into_iter().map(|e| e.unwrap()).collect();
                if env.iter().any(|i| *i < 0) || !c.guard.eval(&env).unwrap_or(false) {
                    continue;
                }
                let id = EdgeId::new(c.family.clone(), env);
                if self.edge_exists(&id) {
                    out.push((id, is_from));
                }
            }
        }
        Ok(out)
    }

    /// Exact order (number of connected components of X minus the vertex):
    /// real incident edges, plus two segment directions for an interior
    /// attachment (one at a segment end), plus one per limit chain
    /// accumulating at the vertex.
    pub fn vertex_order(&self, v: &VertexId) -> Result<u32> {
        if !self.vertex_exists(v) {
            return Err(CoreError::NoSuchVertex(v.to_string()));
        }
        let mut n = self.incident_real_edges(v)?.len() as u32;
        if self.attach_info(v).is_some() {
            n += 2;
        }
        for s in &self.doc.segments {
            let (from, to) = self.seg_endpoints(&SegId(s.name.clone()))?;
            if from == *v {
                n += 1;
            }
            if to == *v {
                n += 1;
            }
        }
        n += self.limit_keys_of_vertex(v).len() as u32;
        Ok(n)
    }

    // ----- windows --------------------------------------------------------

    pub fn truncation(self: &Arc<Self>, depth: u32) -> Result<Arc<Truncation>> {
        if let Some(t) = self.trunc.read().unwrap().get(&depth) {
            return Ok(t.clone());
        }
        let t = Arc::new(build_truncation(self, depth)?);
        self.trunc.write().unwrap().insert(depth, t.clone());
        Ok(t)
    }

    /// Smallest window depth at which a point is addressable, before pow2
    /// rounding.
    pub fn needed_depth(&self, p: &Point) -> u32 {
        let raw = match p {
            Point::Vertex(v) => v.idx.iter().map(|i| i.unsigned_abs()).max().unwrap_or(0),
            Point::OnEdge(e, _) => e.idx.iter().map(|i| i.unsigned_abs()).max().unwrap_or(0),
            Point::OnSegment(..) => 0,
        };
        (raw as u32).saturating_add(1)
    }

    pub fn window_for(self: &Arc<Self>, pts: &[&Point]) -> Result<Arc<Truncation>> {
        let needed = pts.iter().map(|p| self.needed_depth(p)).max().unwrap_or(1);
        self.truncation(round_depth(needed))
    }

    pub fn attach_positions(&self, seg_idx: usize, attach: &AttachClause, depth: u32) -> Result<Vec<(Q, VertexId)>> {
        let _ = seg_idx;
        let mut out = Vec::new();
        let cap = match &attach.var.bound {
            Some(b) => b.eval(&[])? as i64,
            None => depth as i64,
        };
        for k in 0..=cap {
            if !attach.guard.eval(&[k])? {
                continue;
            }
            let pos = attach.pos.eval(&[k])?;
            out.push((pos, VertexId::new(attach.family.clone(), vec![k])));
        }
        Ok(out)
    }
}

/// Depth rounding keeps the truncation cache small: shallow windows snap
/// to powers of two, deep ones to multiples of 32 (two-index families grow
/// quadratically with depth, so overshooting is expensive).
pub fn round_depth(needed: u32) -> u32 {
    if needed <= 32 {
        needed.max(4).next_power_of_two()
    } else {
        needed.div_ceil(32) * 32
    }
}
