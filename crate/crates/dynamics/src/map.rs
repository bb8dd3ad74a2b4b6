//! Evaluation of piecewise-linear self-maps given by edge-family rules.
//!
//! A rule assigns each edge (or segment) a subdivision with an image point
//! per breakpoint; each sub-interval maps at constant speed onto the unique
//! arc between consecutive image points. Evaluation is exact; image points
//! landing inside an accumulation tail are resolved back to real-edge
//! addresses, so orbits never depend on a window depth.

use crate::error::{DynError, Result};
use dendrodyn_core::doc::{MapDoc, PointExpr, RuleClause, RuleTarget};
use dendrodyn_core::ids::{EdgeId, Point, SegId, VertexId};
use dendrodyn_core::num::{q_one, q_zero, Q};
use dendrodyn_core::presentation::Presentation;
use dendrodyn_core::truncation::{point_at_len, Carrier, OrientedFrag};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// How many real chain edges to materialize when an accumulation tail has
/// to be crossed piece by piece.
pub const TAIL_EXPAND: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CarrierId {
    E(EdgeId),
    S(SegId),
}

impl std::fmt::Display for CarrierId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CarrierId::E(e) => write!(f, "{e}"),
            CarrierId::S(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug)]
pub struct ResolvedArc {
    pub p0: Point,
    pub p1: Point,
    pub frags: Vec<OrientedFrag>,
    pub total: Q,
}

#[derive(Debug)]
pub struct ResolvedRule {
    pub breaks: Vec<Q>,
    pub arcs: Vec<ResolvedArc>,
}

pub struct PlMap {
    pres: Arc<Presentation>,
    doc: Arc<MapDoc>,
    resolved: RwLock<HashMap<(usize, Vec<i64>), Arc<ResolvedRule>>>,
    budget: usize,
}

impl std::fmt::Debug for PlMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlMap({} on {})", self.doc.name, self.pres.name())
    }
}

impl PlMap {
    pub fn new(pres: Arc<Presentation>, doc: MapDoc) -> Result<Arc<PlMap>> {
        let budget = std::env::var("DENDRODYN_BRANCH_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Ok(Arc::new(PlMap {
            pres,
            doc: Arc::new(doc),
            resolved: RwLock::new(HashMap::new()),
            budget,
        }))
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn doc(&self) -> &MapDoc {
        &self.doc
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn eval_point_expr(&self, pe: &PointExpr, env: &[i64]) -> Result<Point> {
        let p = match pe {
            PointExpr::Vertex(r) => {
                let mut idx = Vec::with_capacity(r.idx.len());
                for m in &r.idx {
                    idx.push(m.eval(env)?);
                }
                let v = VertexId::new(r.family.clone(), idx);
                if !self.pres.vertex_exists(&v) {
                    return Err(DynError::Invalid(format!("rule references missing vertex {v}")));
                }
                Point::Vertex(v)
            }
            PointExpr::EdgeParam { family, idx, t } => {
                let mut full = Vec::with_capacity(idx.len());
                for m in idx {
                    full.push(m.eval(env)?);
                }
                let t = t.eval(env)?;
                self.pres
                    .canonical_point(Point::OnEdge(EdgeId::new(family.clone(), full), t))?
            }
            PointExpr::SegParam { segment, t } => {
                let t = t.eval(env)?;
                self.pres
                    .canonical_point(Point::OnSegment(SegId(segment.clone()), t))?
            }
        };
        Ok(p)
    }

    /// First rule clause matching an edge instance.
    pub fn rule_for_edge(&self, e: &EdgeId) -> Result<(usize, &RuleClause)> {
        let mut hit = None;
        for (i, r) in self.doc.rules.iter().enumerate() {
            if let RuleTarget::Edge(f) = &r.target {
                if f == &e.family && r.guard.eval(&e.idx).unwrap_or(false) {
                    hit = Some((i, r));
                    break;
                }
            }
        }
        hit.ok_or_else(|| DynError::Incomplete {
            point: e.to_string(),
            detail: " (no rule for this edge)".into(),
        })
    }

    pub fn rule_for_segment(&self, g: &SegId) -> Result<(usize, &RuleClause)> {
        for (i, r) in self.doc.rules.iter().enumerate() {
            if let RuleTarget::Segment(name) = &r.target {
                if name == &g.0 {
                    return Ok((i, r));
                }
            }
        }
        Err(DynError::Incomplete {
            point: g.to_string(),
            detail: " (no rule for this segment)".into(),
        })
    }

    pub fn rules_matching_edge(&self, e: &EdgeId) -> usize {
        self.doc
            .rules
            .iter()
            .filter(|r| match &r.target {
                RuleTarget::Edge(f) => f == &e.family && r.guard.eval(&e.idx).unwrap_or(false),
                _ => false,
            })
            .count()
    }

    pub fn resolve_rule(&self, clause: usize, env: &[i64]) -> Result<Arc<ResolvedRule>> {
        let key = (clause, env.to_vec());
        if let Some(r) = self.resolved.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let rc = &self.doc.rules[clause];
        let mut breaks = Vec::with_capacity(rc.pieces.len());
        let mut pts = Vec::with_capacity(rc.pieces.len());
        for (be, pe) in &rc.pieces {
            breaks.push(be.eval(env).map_err(DynError::Core)?);
            pts.push(self.eval_point_expr(pe, env)?);
        }
        if breaks.first() != Some(&q_zero()) || breaks.last() != Some(&q_one()) {
            return Err(DynError::Invalid(format!(
                "rule #{clause}: breakpoints must run from 0 to 1"
            )));
        }
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(DynError::Invalid(format!(
                    "rule #{clause}: breakpoints must increase strictly"
                )));
            }
        }
        let mut arcs = Vec::with_capacity(pts.len() - 1);
        for i in 0..pts.len() - 1 {
            let p0 = pts[i].clone();
            let p1 = pts[i + 1].clone();
            let frags = dendrodyn_core::geometry::arc_frags(&self.pres, &p0, &p1)?;
            let total: Q = frags.iter().map(|f| f.length()).fold(q_zero(), |a, b| a + b);
            arcs.push(ResolvedArc { p0, p1, frags, total });
        }
        let r = Arc::new(ResolvedRule { breaks, arcs });
        self.resolved.write().unwrap().insert(key, r.clone());
        Ok(r)
    }

    /// Image of a vertex through one incident edge's rule, without
    /// resolving any arcs.
    fn vertex_image_via_edge(&self, e: &EdgeId, is_from: bool) -> Result<Point> {
        let (ci, rc) = self.rule_for_edge(e)?;
        let _ = ci;
        let pe = if is_from {
            &rc.pieces.first().unwrap().1
        } else {
            &rc.pieces.last().unwrap().1
        };
        self.eval_point_expr(pe, &e.idx)
    }

    fn fixed_image(&self, v: &VertexId) -> Result<Option<Point>> {
        for fx in &self.doc.fixes {
            if fx.family == v.family
                && fx.vars.len() == v.idx.len()
                && v.idx.iter().all(|i| *i >= 0)
                && fx.guard.eval(&v.idx).unwrap_or(false)
            {
                return Ok(Some(self.eval_point_expr(&fx.image, &v.idx)?));
            }
        }
        Ok(None)
    }

    /// One exact application of the map.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        let p = self.pres.canonical_point(p.clone())?;
        match &p {
            Point::Vertex(v) => {
                if let Some(img) = self.fixed_image(v)? {
                    return Ok(img);
                }
                let incident = self.pres.incident_real_edges(v)?;
                if let Some((e, is_from)) = incident.first() {
                    return self.vertex_image_via_edge(e, *is_from);
                }
                if let Some((seg, pos)) = self.pres.attach_info(v) {
                    return self.apply_on_segment(&seg, &pos);
                }
                for sd in &self.pres.doc().segments {
                    let sid = SegId(sd.name.clone());
                    let (u, w) = self.pres.seg_endpoints(&sid)?;
                    if u == *v {
                        return self.apply_on_segment(&sid, &q_zero());
                    }
                    if w == *v {
                        return self.apply_on_segment(&sid, &q_one());
                    }
                }
                Err(DynError::Incomplete {
                    point: v.to_string(),
                    detail: " (isolated vertex with no fixed-image rule)".into(),
                })
            }
            Point::OnEdge(e, t) => {
                let (ci, _) = self.rule_for_edge(e)?;
                let rule = self.resolve_rule(ci, &e.idx)?;
                self.interpolate(&rule, t)
            }
            Point::OnSegment(g, s) => self.apply_on_segment(g, s),
        }
    }

    fn apply_on_segment(&self, g: &SegId, s: &Q) -> Result<Point> {
        let (ci, _) = self.rule_for_segment(g)?;
        let rule = self.resolve_rule(ci, &[])?;
        self.interpolate(&rule, s)
    }

    fn interpolate(&self, rule: &ResolvedRule, t: &Q) -> Result<Point> {
        let mut i = rule.breaks.len() - 2;
        for j in 0..rule.breaks.len() - 1 {
            if t <= &rule.breaks[j + 1] {
                i = j;
                break;
            }
        }
        let arc = &rule.arcs[i];
        if t == &rule.breaks[i] {
            return Ok(arc.p0.clone());
        }
        if t == &rule.breaks[i + 1] {
            return Ok(arc.p1.clone());
        }
        if arc.total.is_zero() {
            return Ok(arc.p0.clone());
        }
        let s = (t - &rule.breaks[i]) / (&rule.breaks[i + 1] - &rule.breaks[i]);
        let target = s * &arc.total;
        point_at_len(&self.pres, &arc.frags, &target).map_err(DynError::Core)
    }

    /// Exact orbit x, f(x), ..., f^n(x).
    pub fn orbit(&self, x: &Point, n: usize) -> Result<OrbitRecord> {
        let mut entries = Vec::with_capacity(n + 1);
        entries.push(self.pres.canonical_point(x.clone())?);
        for step in 0..n {
            let next = self
                .apply(entries.last().unwrap())
                .map_err(|e| DynError::AtStep { step: step + 1, source: Box::new(e) })?;
            entries.push(next);
        }
        Ok(OrbitRecord { base: entries[0].clone(), entries })
    }

    pub fn apply_power(&self, p: &Point, n: u32) -> Result<Point> {
        let mut cur = self.pres.canonical_point(p.clone())?;
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub base: Point,
    pub entries: Vec<Point>,
}

impl OrbitRecord {
    /// Display labels; named vertices render in subscript/superscript form.
    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|p| p.to_string()).collect()
    }
}

// ---------------------------------------------------------------------------
// continuity / coverage report

#[derive(Debug, Clone)]
pub struct ContinuityViolation {
    pub vertex: VertexId,
    pub values: Vec<(String, Point)>,
}

#[derive(Debug, Clone, Default)]
pub struct ContinuityReport {
    pub depth: u32,
    pub vertices_checked: usize,
    pub violations: Vec<ContinuityViolation>,
    pub coverage_gaps: Vec<String>,
    pub multi_covered: Vec<String>,
    pub limit_violations: Vec<String>,
    pub tail_warnings: Vec<String>,
}

impl ContinuityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.coverage_gaps.is_empty() && self.limit_violations.is_empty()
    }
}

/// Verifies rule coverage and vertex consistency over a window, plus
/// convergence of rule images along every limit chain.
pub fn check_continuity(map: &PlMap, depth: u32) -> Result<ContinuityReport> {
    let pres = map.presentation();
    let t = pres.truncation(depth)?;
    let mut rep = ContinuityReport { depth, ..Default::default() };
    // coverage
    for e in &t.edges {
        match &e.carrier {
            Carrier::Edge(id) => match map.rules_matching_edge(id) {
                0 => rep.coverage_gaps.push(id.to_string()),
                1 => {}
                _ => rep.multi_covered.push(id.to_string()),
            },
            Carrier::Seg(id, ..) => {
                if map.rule_for_segment(id).is_err() {
                    rep.coverage_gaps.push(id.to_string());
                }
            }
            Carrier::Residual(_) => {}
        }
    }
    rep.coverage_gaps.sort();
    rep.coverage_gaps.dedup();
    rep.multi_covered.sort();
    rep.multi_covered.dedup();
    // vertex consistency
    for tv in &t.verts {
        let v = &tv.id;
        let mut values: Vec<(String, Point)> = Vec::new();
        if let Some(img) = map.fixed_image(v)? {
            values.push(("fixed rule".into(), img));
        }
        for (e, is_from) in pres.incident_real_edges(v)? {
            if let Ok(img) = map.vertex_image_via_edge(&e, is_from) {
                values.push((format!("rule of {e}"), img));
            }
        }
        if let Some((seg, pos)) = pres.attach_info(v) {
            if let Ok(img) = map.apply_on_segment(&seg, &pos) {
                values.push((format!("rule of {seg}"), img));
            }
        }
        for sd in &pres.doc().segments {
            let sid = SegId(sd.name.clone());
            let (u, w) = pres.seg_endpoints(&sid)?;
            if u == *v {
                if let Ok(img) = map.apply_on_segment(&sid, &q_zero()) {
                    values.push((format!("rule of {sid} at 0"), img));
                }
            }
            if w == *v {
                if let Ok(img) = map.apply_on_segment(&sid, &q_one()) {
                    values.push((format!("rule of {sid} at 1"), img));
                }
            }
        }
        rep.vertices_checked += 1;
        if values.is_empty() {
            rep.coverage_gaps.push(format!("vertex {v} has no applicable rule"));
            continue;
        }
        let first = values[0].1.clone();
        if values.iter().any(|(_, p)| !pres.points_eq(p, &first)) {
            rep.violations.push(ContinuityViolation { vertex: v.clone(), values });
        }
    }
    // limit-chain convergence + monotone-tail spot checks
    for e in &t.edges {
        if let Carrier::Residual(key) = &e.carrier {
            let lim = pres.limit_vertex(key);
            let flim = match map.apply(&Point::Vertex(lim.clone())) {
                Ok(p) => p,
                Err(err) => {
                    rep.limit_violations
                        .push(format!("cannot evaluate the map at limit vertex {lim}: {err}"));
                    continue;
                }
            };
            let mut dists: Vec<Q> = Vec::new();
            let mut images: Vec<Point> = Vec::new();
            for k in (depth as i64 + 1)..=(depth as i64 + 3) {
                let av = pres.approach_vertex(key, k)?;
                let img = map.apply(&Point::Vertex(av))?;
                dists.push(dendrodyn_core::geometry::distance(pres, &img, &flim)?);
                images.push(img);
            }
            if !(dists[0] > dists[1] && dists[1] > dists[2]) {
                rep.limit_violations.push(format!(
                    "images along the chain toward {lim} do not converge to the image of {lim}"
                ));
            }
            let d01 = dendrodyn_core::geometry::distance(pres, &images[0], &images[1])?;
            let d12 = dendrodyn_core::geometry::distance(pres, &images[1], &images[2])?;
            let d02 = dendrodyn_core::geometry::distance(pres, &images[0], &images[2])?;
            if d01.clone() + d12 != d02 {
                rep.tail_warnings.push(format!(
                    "chain toward {lim}: consecutive images backtrack; tail images are approximated by endpoint arcs"
                ));
            }
        }
    }
    rep.limit_violations.sort();
    rep.limit_violations.dedup();
    rep.tail_warnings.sort();
    rep.tail_warnings.dedup();
    Ok(rep)
}
