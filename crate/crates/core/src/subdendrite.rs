//! Finite subdendrites in window-independent form: closed interval
//! fragments on real edges and segments, plus "tails" — the closed portion
//! of a limit chain within a given exact distance of its limit vertex.
//! All set operations are exact rational interval arithmetic.

use crate::error::{CoreError, Result};
use crate::ids::{EdgeId, LimitKey, Point, SegId, VertexId};
use crate::num::{q_one, q_zero, Q};
use crate::presentation::Presentation;
use crate::truncation::OrientedFrag;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subdendrite {
    pub edges: BTreeMap<EdgeId, Vec<(Q, Q)>>,
    pub segs: BTreeMap<SegId, Vec<(Q, Q)>>,
    /// Covered distance-from-limit per chain: tail (key, d) is the closed
    /// set of chain points within distance d of the limit vertex.
    pub tails: BTreeMap<LimitKey, Q>,
    pub verts: BTreeSet<VertexId>,
}

fn insert_interval(list: &mut Vec<(Q, Q)>, lo: Q, hi: Q) {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    list.push((lo, hi));
}

fn coalesce(list: &mut Vec<(Q, Q)>) {
    list.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<(Q, Q)> = Vec::with_capacity(list.len());
    for (lo, hi) in list.drain(..) {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    *list = out;
}

fn covers(list: &[(Q, Q)], lo: &Q, hi: &Q) -> bool {
    // list is coalesced and sorted; a closed interval must fit in one piece
    list.iter().any(|(a, b)| a <= lo && hi <= b)
}

fn covers_point(list: &[(Q, Q)], t: &Q) -> bool {
    list.iter().any(|(a, b)| a <= t && t <= b)
}

fn interior_contains(list: &[(Q, Q)], t: &Q) -> bool {
    list.iter().any(|(a, b)| a < t && t < b)
}

impl Subdendrite {
    pub fn empty() -> Subdendrite {
        Subdendrite::default()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.segs.is_empty() && self.tails.is_empty() && self.verts.is_empty()
    }

    pub fn point(pres: &Arc<Presentation>, p: &Point) -> Result<Subdendrite> {
        let mut s = Subdendrite::empty();
        match pres.canonical_point(p.clone())? {
            Point::Vertex(v) => {
                s.verts.insert(v);
            }
            Point::OnEdge(e, t) => {
                s.edges.insert(e, vec![(t.clone(), t)]);
            }
            Point::OnSegment(g, t) => {
                s.segs.insert(g, vec![(t.clone(), t)]);
            }
        }
        Ok(s)
    }

    pub fn from_frags(pres: &Arc<Presentation>, frags: &[OrientedFrag]) -> Result<Subdendrite> {
        let mut s = Subdendrite::empty();
        for f in frags {
            s.push_frag(pres, f)?;
        }
        s.normalize(pres)?;
        Ok(s)
    }

    pub fn push_frag(&mut self, pres: &Arc<Presentation>, f: &OrientedFrag) -> Result<()> {
        match f {
            OrientedFrag::Edge { id, t0, t1, .. } => {
                insert_interval(self.edges.entry(id.clone()).or_default(), t0.clone(), t1.clone());
            }
            OrientedFrag::Seg { id, s0, s1, .. } => {
                insert_interval(self.segs.entry(id.clone()).or_default(), s0.clone(), s1.clone());
            }
            OrientedFrag::Tail { key, d0, d1 } => {
                let near = d0.min(d1).clone();
                let far = d0.max(d1).clone();
                if !near.is_zero() {
                    // a partial tail fragment resolves to real chain edges
                    let lo_pt = pres.resolve_tail_point(key, &far)?;
                    let hi_pt = pres.resolve_tail_point(key, &near)?;
                    self.push_chain_span(pres, key, &lo_pt, &hi_pt)?;
                } else {
                    let d = self.tails.entry(key.clone()).or_insert_with(q_zero);
                    if far > *d {
                        *d = far;
                    }
                    self.verts.insert(pres.limit_vertex(key));
                }
            }
        }
        Ok(())
    }

    /// Adds the chain span between two resolved chain points (both at
    /// positive distance from the limit).
    fn push_chain_span(
        &mut self,
        pres: &Arc<Presentation>,
        key: &LimitKey,
        far_pt: &Point,
        near_pt: &Point,
    ) -> Result<()> {
        let far = pres
            .chain_delta_of_point(key, far_pt)
            .ok_or_else(|| CoreError::Invalid("chain span endpoint off chain".into()))?;
        let near = pres
            .chain_delta_of_point(key, near_pt)
            .ok_or_else(|| CoreError::Invalid("chain span endpoint off chain".into()))?;
        // walk edges from the far point toward the near point
        let mut cur = far;
        let mut guard = 0;
        while cur > near {
            let p = pres.resolve_tail_point(key, &cur)?;
            let (edge, lo_t) = match &p {
                Point::Vertex(v) => {
                    // the next edge toward the limit starts here
                    let delta = pres.delta_of(key, &Point::Vertex(v.clone()))?;
                    let k = self.chain_k_at(pres, key, &delta)?;
                    (pres.chain_edge_id(key, k), q_zero())
                }
                Point::OnEdge(e, t) => (e.clone(), t.clone()),
                _ => return Err(CoreError::Invalid("segment point on chain".into())),
            };
            let (u, v) = pres.edge_endpoints(&edge)?;
            let dv = pres.delta_of(key, &Point::Vertex(v.clone()))?;
            let _ = u;
            let hi_t = if near >= dv {
                // near point inside this edge
                let du = pres.delta_of(key, &Point::Vertex(pres.edge_endpoints(&edge)?.0))?;
                (&du - &near) / (&du - &dv)
            } else {
                q_one()
            };
            insert_interval(self.edges.entry(edge).or_default(), lo_t, hi_t);
            cur = if near >= dv { near.clone() } else { dv };
            guard += 1;
            if guard > 100_000 {
                return Err(CoreError::Budget("chain span walk".into()));
            }
        }
        Ok(())
    }

    fn chain_k_at(&self, pres: &Arc<Presentation>, key: &LimitKey, delta: &Q) -> Result<i64> {
        // find k with delta(approach(k)) == delta
        let mut k = 0i64;
        loop {
            let v = pres.approach_vertex(key, k)?;
            if pres.vertex_exists(&v) {
                let d = pres.delta_of(key, &Point::Vertex(v))?;
                if &d == delta {
                    return Ok(k);
                }
                if &d < delta {
                    return Err(CoreError::Invalid("chain position not a vertex".into()));
                }
            }
            k += 1;
            if k > 1 << 20 {
                return Err(CoreError::Budget("chain vertex scan".into()));
            }
        }
    }

    /// Canonical form: coalesced intervals, tails absorbing adjacent chain
    /// fragments, and the vertex set rebuilt from fragment boundaries plus
    /// genuinely isolated vertices.
    pub fn normalize(&mut self, pres: &Arc<Presentation>) -> Result<()> {
        for list in self.edges.values_mut() {
            coalesce(list);
        }
        for list in self.segs.values_mut() {
            coalesce(list);
        }
        // absorb chain fragments adjoining a tail
        let keys: Vec<LimitKey> = self.tails.keys().cloned().collect();
        for key in keys {
            let mut guard = 0;
            loop {
                let d = self.tails[&key].clone();
                let boundary = pres.resolve_tail_point(&key, &d)?;
                let mut grown = false;
                if let Some((edge, upper_t)) = match &boundary {
                    Point::Vertex(v) => {
                        // the outward edge ends at this vertex (its far side)
                        let delta = pres.delta_of(&key, &Point::Vertex(v.clone()))?;
                        match self.chain_k_at(pres, &key, &delta) {
                            Ok(k) if k > 0 => Some((pres.chain_edge_id(&key, k - 1), q_one())),
                            _ => None,
                        }
                    }
                    Point::OnEdge(e, t) => Some((e.clone(), t.clone())),
                    _ => None,
                } {
                    if let Some(list) = self.edges.get_mut(&edge) {
                        if let Some(pos) = list
                            .iter()
                            .position(|(lo, hi)| *lo < upper_t && upper_t <= *hi || (upper_t == q_one() && *hi == q_one() && *lo < q_one()))
                        {
                            let (lo, _hi) = list.remove(pos);
                            let (u, v) = pres.edge_endpoints(&edge)?;
                            let du = pres.delta_of(&key, &Point::Vertex(u))?;
                            let dv = pres.delta_of(&key, &Point::Vertex(v))?;
                            let new_d = &du + (&dv - &du) * &lo; // delta at param lo
                            if new_d > d {
                                self.tails.insert(key.clone(), new_d);
                                grown = true;
                            } else {
                                // fragment was fully inside the tail; drop it
                                grown = true;
                            }
                            if list.is_empty() {
                                self.edges.remove(&edge);
                            }
                        }
                    }
                }
                if !grown {
                    break;
                }
                guard += 1;
                if guard > 100_000 {
                    return Err(CoreError::Budget("tail absorption".into()));
                }
            }
        }
        self.edges.retain(|_, l| !l.is_empty());
        self.segs.retain(|_, l| !l.is_empty());
        // rebuild canonical vertex set
        let mut verts: BTreeSet<VertexId> = BTreeSet::new();
        for (e, list) in &self.edges {
            let (u, v) = pres.edge_endpoints(e)?;
            for (lo, hi) in list {
                if lo.is_zero() {
                    verts.insert(u.clone());
                }
                if *hi == q_one() {
                    verts.insert(v.clone());
                }
            }
        }
        for (g, list) in &self.segs {
            let (u, v) = pres.seg_endpoints(g)?;
            for (lo, hi) in list {
                if lo.is_zero() {
                    verts.insert(u.clone());
                }
                if *hi == q_one() {
                    verts.insert(v.clone());
                }
            }
        }
        for (key, d) in &self.tails {
            verts.insert(pres.limit_vertex(key));
            if let Ok(Point::Vertex(v)) = pres.resolve_tail_point(key, d) {
                verts.insert(v);
            }
        }
        // keep previously listed vertices only if not interior to coverage
        for v in std::mem::take(&mut self.verts) {
            if !verts.contains(&v) && !self.point_covered(pres, &Point::Vertex(v.clone()))? {
                verts.insert(v);
            }
        }
        self.verts = verts;
        Ok(())
    }

    /// Effective covered t-intervals on a real edge, accounting for a tail
    /// overlapping the edge when the edge is part of that chain.
    fn edge_coverage(&self, pres: &Arc<Presentation>, e: &EdgeId) -> Result<Vec<(Q, Q)>> {
        let mut list = self.edges.get(e).cloned().unwrap_or_default();
        if let Some((key, _)) = pres.chain_of_edge(e) {
            if let Some(d) = self.tails.get(&key) {
                let (u, v) = pres.edge_endpoints(e)?;
                let du = pres.delta_of(&key, &Point::Vertex(u))?;
                let dv = pres.delta_of(&key, &Point::Vertex(v))?;
                // delta decreases from u (t=0) to v (t=1)
                if &dv <= d {
                    let lo = if &du <= d {
                        q_zero()
                    } else {
                        (&du - d) / (&du - &dv)
                    };
                    list.push((lo, q_one()));
                }
            }
        }
        coalesce(&mut list);
        Ok(list)
    }

    fn point_covered(&self, pres: &Arc<Presentation>, p: &Point) -> Result<bool> {
        match p {
            Point::Vertex(v) => {
                for key in pres.limit_keys_of_vertex(v) {
                    if self.tails.contains_key(&key) {
                        return Ok(true);
                    }
                }
                for (key, d) in &self.tails {
                    if let Some(delta) = pres.chain_delta_of_point(key, p) {
                        if &delta <= d {
                            return Ok(true);
                        }
                    }
                }
                for (e, is_from) in pres.incident_real_edges(v)? {
                    let cov = self.edge_coverage(pres, &e)?;
                    let t = if is_from { q_zero() } else { q_one() };
                    if covers_point(&cov, &t) {
                        return Ok(true);
                    }
                }
                if let Some((seg, pos)) = pres.attach_info(v) {
                    if let Some(list) = self.segs.get(&seg) {
                        if covers_point(list, &pos) {
                            return Ok(true);
                        }
                    }
                }
                // segment endpoints
                for sd in &pres.doc().segments {
                    let sid = SegId(sd.name.clone());
                    let (u, w) = pres.seg_endpoints(&sid)?;
                    if let Some(list) = self.segs.get(&sid) {
                        if (u == *v && covers_point(list, &q_zero())) || (w == *v && covers_point(list, &q_one())) {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
            Point::OnEdge(e, t) => {
                let cov = self.edge_coverage(pres, e)?;
                Ok(covers_point(&cov, t))
            }
            Point::OnSegment(g, t) => Ok(self.segs.get(g).map(|l| covers_point(l, t)).unwrap_or(false)),
        }
    }

    pub fn contains_point(&self, pres: &Arc<Presentation>, p: &Point) -> Result<bool> {
        let p = pres.canonical_point(p.clone())?;
        if let Point::Vertex(v) = &p {
            if self.verts.contains(v) {
                return Ok(true);
            }
        }
        self.point_covered(pres, &p)
    }

    /// Set containment: does `self` cover every fragment of `other`?
    pub fn contains(&self, pres: &Arc<Presentation>, other: &Subdendrite) -> Result<bool> {
        for (e, list) in &other.edges {
            let cov = self.edge_coverage(pres, e)?;
            for (lo, hi) in list {
                if !covers(&cov, lo, hi) {
                    return Ok(false);
                }
            }
        }
        for (g, list) in &other.segs {
            let cov = self.segs.get(g).cloned().unwrap_or_default();
            for (lo, hi) in list {
                if !covers(&cov, lo, hi) {
                    return Ok(false);
                }
            }
        }
        for (key, d) in &other.tails {
            let own = self.tails.get(key).cloned().unwrap_or_else(q_zero);
            if &own < d {
                // the remaining span (own, d] must be covered by edge frags
                if own.is_zero() && !self.tails.contains_key(key) {
                    return Ok(false);
                }
                let mut cur = own;
                let mut guard = 0;
                while &cur < d {
                    let p = pres.resolve_tail_point(key, &cur)?;
                    let next_edge = match &p {
                        Point::Vertex(v) => {
                            let delta = pres.delta_of(key, &Point::Vertex(v.clone()))?;
                            match self.chain_k_at(pres, key, &delta) {
                                Ok(k) if k > 0 => pres.chain_edge_id(key, k - 1),
                                _ => return Ok(false),
                            }
                        }
                        Point::OnEdge(e, _) => e.clone(),
                        _ => return Ok(false),
                    };
                    let cov = self.edge_coverage(pres, &next_edge)?;
                    let (u, v) = pres.edge_endpoints(&next_edge)?;
                    let du = pres.delta_of(key, &Point::Vertex(u))?;
                    let dv = pres.delta_of(key, &Point::Vertex(v))?;
                    // need coverage from t(cur) down to t(of d or edge start)
                    let t_hi = if &dv >= &cur { q_one() } else { (&du - &cur) / (&du - &dv) };
                    let target_lo_delta = if &du <= d { du.clone() } else { d.clone() };
                    let t_lo = (&du - &target_lo_delta) / (&du - &dv);
                    if !covers(&cov, &t_lo, &t_hi) {
                        return Ok(false);
                    }
                    cur = target_lo_delta;
                    guard += 1;
                    if guard > 100_000 {
                        return Err(CoreError::Budget("tail containment walk".into()));
                    }
                }
            }
        }
        for v in &other.verts {
            if !self.contains_point(pres, &Point::Vertex(v.clone()))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn union(mut self, pres: &Arc<Presentation>, other: &Subdendrite) -> Result<Subdendrite> {
        for (e, list) in &other.edges {
            let entry = self.edges.entry(e.clone()).or_default();
            entry.extend(list.iter().cloned());
        }
        for (g, list) in &other.segs {
            let entry = self.segs.entry(g.clone()).or_default();
            entry.extend(list.iter().cloned());
        }
        for (k, d) in &other.tails {
            let entry = self.tails.entry(k.clone()).or_insert_with(q_zero);
            if d > entry {
                *entry = d.clone();
            }
        }
        self.verts.extend(other.verts.iter().cloned());
        self.normalize(pres)?;
        Ok(self)
    }

    /// First positive-length overlap between the two sets, if any.
    pub fn interior_overlap(&self, pres: &Arc<Presentation>, other: &Subdendrite) -> Result<Option<String>> {
        let mut edge_ids: BTreeSet<EdgeId> = self.edges.keys().cloned().collect();
        edge_ids.extend(other.edges.keys().cloned());
        // chains covered by either side's tails also matter where the other
        // side has edge fragments
        for (e, _) in other.edges.iter().chain(self.edges.iter()) {
            edge_ids.insert(e.clone());
        }
        for e in &edge_ids {
            let a = self.edge_coverage(pres, e)?;
            let b = other.edge_coverage(pres, e)?;
            for (alo, ahi) in &a {
                for (blo, bhi) in &b {
                    let lo = alo.max(blo);
                    let hi = ahi.min(bhi);
                    if lo < hi {
                        return Ok(Some(format!(
                            "{e}[{}..{}]",
                            crate::num::fmt_q(lo),
                            crate::num::fmt_q(hi)
                        )));
                    }
                }
            }
        }
        let mut seg_ids: BTreeSet<SegId> = self.segs.keys().cloned().collect();
        seg_ids.extend(other.segs.keys().cloned());
        for g in &seg_ids {
            let a = self.segs.get(g).cloned().unwrap_or_default();
            let b = other.segs.get(g).cloned().unwrap_or_default();
            for (alo, ahi) in &a {
                for (blo, bhi) in &b {
                    let lo = alo.max(blo);
                    let hi = ahi.min(bhi);
                    if lo < hi {
                        return Ok(Some(format!(
                            "{g}[{}..{}]",
                            crate::num::fmt_q(lo),
                            crate::num::fmt_q(hi)
                        )));
                    }
                }
            }
        }
        for (k, d) in &self.tails {
            if let Some(d2) = other.tails.get(k) {
                let m = d.min(d2);
                if !m.is_zero() {
                    return Ok(Some(format!(
                        "tail of {} within {}",
                        pres.limit_vertex(k),
                        crate::num::fmt_q(m)
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Points shared by both sets, assuming no interior overlap: boundary
    /// candidates of either side that lie in both.
    pub fn shared_points(&self, pres: &Arc<Presentation>, other: &Subdendrite) -> Result<Vec<Point>> {
        let mut cands: Vec<Point> = self.boundary_points(pres)?;
        cands.extend(other.boundary_points(pres)?);
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out = Vec::new();
        for p in cands {
            if self.contains_point(pres, &p)? && other.contains_point(pres, &p)? {
                let coord = pres.point_coord(&p)?;
                let k = format!("{}:{}", crate::num::fmt_q(&coord.0), crate::num::fmt_q(&coord.1));
                if seen.insert(k) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    /// All fragment boundary points and isolated vertices.
    pub fn boundary_points(&self, pres: &Arc<Presentation>) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for (e, list) in &self.edges {
            for (lo, hi) in list {
                out.push(pres.canonical_point(Point::OnEdge(e.clone(), lo.clone()))?);
                out.push(pres.canonical_point(Point::OnEdge(e.clone(), hi.clone()))?);
            }
        }
        for (g, list) in &self.segs {
            for (lo, hi) in list {
                out.push(pres.canonical_point(Point::OnSegment(g.clone(), lo.clone()))?);
                out.push(pres.canonical_point(Point::OnSegment(g.clone(), hi.clone()))?);
            }
        }
        for (key, d) in &self.tails {
            out.push(Point::Vertex(pres.limit_vertex(key)));
            out.push(pres.resolve_tail_point(key, d)?);
        }
        for v in &self.verts {
            out.push(Point::Vertex(v.clone()));
        }
        // dedupe by coordinates
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut uniq = Vec::new();
        for p in out {
            let c = pres.point_coord(&p)?;
            let k = format!("{}:{}", crate::num::fmt_q(&c.0), crate::num::fmt_q(&c.1));
            if seen.insert(k) {
                uniq.push(p);
            }
        }
        Ok(uniq)
    }

    /// Fragment pieces as (point set, boundary points) for connectivity
    /// and endpoint analysis.
    fn pieces(&self, pres: &Arc<Presentation>) -> Result<Vec<(PieceRef, Vec<Point>)>> {
        let mut out = Vec::new();
        for (e, list) in &self.edges {
            for (i, (lo, hi)) in list.iter().enumerate() {
                let a = pres.canonical_point(Point::OnEdge(e.clone(), lo.clone()))?;
                let b = pres.canonical_point(Point::OnEdge(e.clone(), hi.clone()))?;
                out.push((PieceRef::Edge(e.clone(), i), vec![a, b]));
            }
        }
        for (g, list) in &self.segs {
            for (i, (lo, hi)) in list.iter().enumerate() {
                let a = pres.canonical_point(Point::OnSegment(g.clone(), lo.clone()))?;
                let b = pres.canonical_point(Point::OnSegment(g.clone(), hi.clone()))?;
                out.push((PieceRef::Seg(g.clone(), i), vec![a, b]));
            }
        }
        for (key, d) in &self.tails {
            let a = Point::Vertex(pres.limit_vertex(key));
            let b = pres.resolve_tail_point(key, d)?;
            out.push((PieceRef::Tail(key.clone()), vec![a, b]));
        }
        for v in &self.verts {
            out.push((PieceRef::Vert(v.clone()), vec![Point::Vertex(v.clone())]));
        }
        Ok(out)
    }

    pub fn is_connected(&self, pres: &Arc<Presentation>) -> Result<bool> {
        let pieces = self.pieces(pres)?;
        if pieces.len() <= 1 {
            return Ok(true);
        }
        let n = pieces.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut touch = false;
                'outer: for (pi, pj) in [(i, j), (j, i)] {
                    for bp in &pieces[pi].1 {
                        if self.piece_contains(pres, &pieces[pj].0, bp)? {
                            touch = true;
                            break 'outer;
                        }
                    }
                }
                if touch {
                    let (ri, rj) = (find(&mut dsu, i), find(&mut dsu, j));
                    if ri != rj {
                        dsu[ri] = rj;
                    }
                }
            }
        }
        let r0 = find(&mut dsu, 0);
        for i in 1..n {
            if find(&mut dsu, i) != r0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn piece_contains(&self, pres: &Arc<Presentation>, piece: &PieceRef, p: &Point) -> Result<bool> {
        let pc = pres.point_coord(p)?;
        match piece {
            PieceRef::Vert(v) => Ok(pres.vertex_coord(v)? == pc),
            PieceRef::Edge(e, i) => {
                let (lo, hi) = &self.edges[e][*i];
                for t in [lo, hi] {
                    if pres.point_coord(&Point::OnEdge(e.clone(), t.clone()))? == pc {
                        return Ok(true);
                    }
                }
                if let Some(delta) = pres.chain_of_edge(e).and_then(|(key, _)| pres.chain_delta_of_point(&key, p)) {
                    let _ = delta;
                }
                match p {
                    Point::OnEdge(pe, t) if pe == e => Ok(lo <= t && t <= hi),
                    Point::Vertex(_) => {
                        let (u, v) = pres.edge_endpoints(e)?;
                        let cu = pres.vertex_coord(&u)?;
                        let cv = pres.vertex_coord(&v)?;
                        Ok((pc == cu && lo.is_zero()) || (pc == cv && *hi == q_one()))
                    }
                    _ => Ok(false),
                }
            }
            PieceRef::Seg(g, i) => {
                let (lo, hi) = &self.segs[g][*i];
                match p {
                    Point::OnSegment(pg, t) if pg == g => Ok(lo <= t && t <= hi),
                    _ => {
                        // vertex attached on this segment?
                        if let Point::Vertex(v) = p {
                            if let Some((seg, pos)) = pres.attach_info(v) {
                                if seg == *g {
                                    return Ok(lo <= &pos && &pos <= hi);
                                }
                            }
                            let (su, sv) = pres.seg_endpoints(g)?;
                            if *v == su {
                                return Ok(lo.is_zero());
                            }
                            if *v == sv {
                                return Ok(*hi == q_one());
                            }
                        }
                        Ok(false)
                    }
                }
            }
            PieceRef::Tail(key) => {
                let d = &self.tails[key];
                match pres.chain_delta_of_point(key, p) {
                    Some(delta) => Ok(&delta <= d),
                    None => Ok(false),
                }
            }
        }
    }

    /// Endpoints of the subdendrite viewed as a space of its own: points
    /// meeting exactly one fragment end and interior to nothing.
    pub fn endpoints(&self, pres: &Arc<Presentation>) -> Result<Vec<Point>> {
        let pieces = self.pieces(pres)?;
        let mut ends: BTreeMap<String, (Point, usize)> = BTreeMap::new();
        for (pref, bps) in &pieces {
            if matches!(pref, PieceRef::Vert(_)) {
                let p = &bps[0];
                let c = pres.point_coord(p)?;
                let k = format!("{}:{}", crate::num::fmt_q(&c.0), crate::num::fmt_q(&c.1));
                ends.entry(k).or_insert((p.clone(), 0));
                continue;
            }
            // a degenerate piece (single point) contributes one end
            let degenerate = {
                let c0 = pres.point_coord(&bps[0])?;
                let c1 = pres.point_coord(&bps[1])?;
                c0 == c1
            };
            let take = if degenerate { &bps[..1] } else { &bps[..] };
            for p in take {
                let c = pres.point_coord(p)?;
                let k = format!("{}:{}", crate::num::fmt_q(&c.0), crate::num::fmt_q(&c.1));
                let e = ends.entry(k).or_insert((p.clone(), 0));
                e.1 += 1;
            }
        }
        let mut out = Vec::new();
        'cand: for (_, (p, count)) in ends {
            if count > 1 {
                continue;
            }
            // interior to any piece (other than as its own end)?
            for (pref, bps) in &pieces {
                let is_own_end = bps.iter().any(|b| {
                    pres.point_coord(b).ok() == pres.point_coord(&p).ok()
                });
                if is_own_end {
                    continue;
                }
                if self.piece_contains(pres, pref, &p)? {
                    continue 'cand;
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Strictly-interior test for a point against this subdendrite's
    /// fragments (not one of its endpoints()).
    pub fn interior_contains_point(&self, pres: &Arc<Presentation>, p: &Point) -> Result<bool> {
        if !self.contains_point(pres, p)? {
            return Ok(false);
        }
        let pc = pres.point_coord(p)?;
        for e in self.endpoints(pres)? {
            if pres.point_coord(&e)? == pc {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn some_point(&self, pres: &Arc<Presentation>) -> Result<Point> {
        if let Some(v) = self.verts.iter().next() {
            return Ok(Point::Vertex(v.clone()));
        }
        if let Some((e, list)) = self.edges.iter().next() {
            return pres.canonical_point(Point::OnEdge(e.clone(), list[0].0.clone()));
        }
        if let Some((g, list)) = self.segs.iter().next() {
            return pres.canonical_point(Point::OnSegment(g.clone(), list[0].0.clone()));
        }
        if let Some((k, _)) = self.tails.iter().next() {
            return Ok(Point::Vertex(pres.limit_vertex(k)));
        }
        Err(CoreError::EmptyInput("subdendrite has no points"))
    }

    /// Total fragment count, the budget measure for image computations.
    pub fn frag_count(&self) -> usize {
        self.edges.values().map(|l| l.len()).sum::<usize>()
            + self.segs.values().map(|l| l.len()).sum::<usize>()
            + self.tails.len()
    }

    /// Is any coordinate of this set interior to a dense segment or a
    /// branch-hiding tail (structure finer than any window can show)?
    pub fn has_hidden_branching(&self, pres: &Arc<Presentation>) -> bool {
        for (key, d) in &self.tails {
            if pres.chain_is_hidden(key) && !d.is_zero() {
                return true;
            }
        }
        for (g, list) in &self.segs {
            if pres.seg_is_dense(g) && list.iter().any(|(lo, hi)| lo < hi) {
                return true;
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PieceRef {
    Edge(EdgeId, usize),
    Seg(SegId, usize),
    Tail(LimitKey),
    Vert(VertexId),
}

pub use crate::truncation::OrientedFrag as Fragment;

/// Convenience: interval interior check re-export for callers.
pub fn interval_interior_contains(list: &[(Q, Q)], t: &Q) -> bool {
    interior_contains(list, t)
}
