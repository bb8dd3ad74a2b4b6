//! Nested periodic-subdendrite decompositions of an estimated ω-limit set.
//!
//! One level: take the convex hull M of the limit clusters, pick a fixed
//! point a of g = f^α inside M, accumulate the g-preimages of a within M to
//! a stabilizing depth, split M along that cut set, and read off how g
//! permutes the components that meet the limit set. The permutation must
//! be a single n-cycle; the level's subdendrite is the stabilized union of
//! g^{n·j}-images of the hull of one component's clusters. When M holds no
//! fixed point of g the construction needs machinery out of scope here and
//! the failure says so.

use crate::error::{DynError, Result};
use crate::image::{image_of_arc, image_once};
use crate::limits::{omega_from_orbit, OmegaEstimate};
use crate::map::{CarrierId, PlMap};
use crate::periodic::{periodic_points, PeriodicItem};
use dendrodyn_core::geometry::convex_hull;
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{q_one, q_zero, Q};
use dendrodyn_core::subdendrite::Subdendrite;
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct DecompOptions {
    pub preimage_depth: u32,
    pub stabilize_cap: u32,
    pub cluster_radius: Q,
}

impl Default for DecompOptions {
    fn default() -> Self {
        DecompOptions {
            preimage_depth: 12,
            stabilize_cap: 64,
            cluster_radius: dendrodyn_core::num::pow2(-12),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CutStructure {
    pub anchor: Point,
    pub cut_points: Vec<Point>,
    pub components: Vec<Subdendrite>,
    /// sigma[k] = index of the unique component met by g(components[k]).
    pub sigma: Vec<usize>,
    pub clusters_per_component: Vec<Vec<Point>>,
}

#[derive(Debug, Clone)]
pub enum SplitFailure {
    /// No fixed point of g inside the hull; the out-of-scope case.
    NoFixedPointInHull,
    /// The cut produced fewer than two limit-bearing components.
    NoSplit { detail: String },
    /// The induced permutation is not a single cycle, or a component's
    /// image meets several components.
    StructureViolation { detail: String },
}

impl SplitFailure {
    pub fn describe(&self) -> String {
        match self {
            SplitFailure::NoFixedPointInHull => {
                "no fixed point of the power map inside the hull (case-2-unsupported)".into()
            }
            SplitFailure::NoSplit { detail } => format!("hull does not split: {detail}"),
            SplitFailure::StructureViolation { detail } => format!("structure violation: {detail}"),
        }
    }
}

fn apply_g(map: &PlMap, alpha: u32, p: &Point) -> Result<Point> {
    map.apply_power(p, alpha)
}

/// Single-step exact preimages of `targets` within `domain`.
fn preimage_step(map: &PlMap, targets: &Subdendrite, domain: &Subdendrite) -> Result<Subdendrite> {
    let pres = map.presentation();
    let mut out = Subdendrite::empty();
    // candidate target points (the cut sets stay finite in the supported
    // cases; interval targets arise from collapsed rule pieces and are
    // handled through the same fragment solve)
    let mut frag_solver = |carrier: &CarrierId, lo: &Q, hi: &Q, out: &mut Subdendrite| -> Result<()> {
        let mut stats = crate::push::PushStats::default();
        let pieces = crate::push::push_interval(map, carrier, lo, hi, &mut stats)?;
        for piece in pieces {
            match piece.target {
                crate::push::PushTarget::Affine { carrier: img, a, b } => {
                    // preimages of every target fragment on `img`
                    let target_ivs: Vec<(Q, Q)> = match &img {
                        CarrierId::E(e) => {
                            let mut ivs = targets.edges.get(e).cloned().unwrap_or_default();
                            // target points can also be vertices at the ends
                            let (u, v) = pres.edge_endpoints(e)?;
                            if targets.verts.contains(&u) {
                                ivs.push((q_zero(), q_zero()));
                            }
                            if targets.verts.contains(&v) {
                                ivs.push((q_one(), q_one()));
                            }
                            ivs
                        }
                        CarrierId::S(g) => targets.segs.get(g).cloned().unwrap_or_default(),
                    };
                    for (tlo, thi) in target_ivs {
                        // solve a + b t in [tlo, thi] for t
                        if b.is_zero() {
                            continue;
                        }
                        let t0 = (&tlo - &a) / &b;
                        let t1 = (&thi - &a) / &b;
                        let (mut slo, mut shi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
                        if &slo < &piece.src_lo {
                            slo = piece.src_lo.clone();
                        }
                        if &shi > &piece.src_hi {
                            shi = piece.src_hi.clone();
                        }
                        if slo > shi {
                            continue;
                        }
                        match carrier {
                            CarrierId::E(e) => {
                                if slo == shi {
                                    let p = pres.canonical_point(Point::OnEdge(e.clone(), slo))?;
                                    let pt = Subdendrite::point(pres, &p)?;
                                    *out = std::mem::take(out).union(pres, &pt)?;
                                } else {
                                    out.edges.entry(e.clone()).or_default().push((slo, shi));
                                }
                            }
                            CarrierId::S(g) => {
                                if slo == shi {
                                    let p = pres.canonical_point(Point::OnSegment(g.clone(), slo))?;
                                    let pt = Subdendrite::point(pres, &p)?;
                                    *out = std::mem::take(out).union(pres, &pt)?;
                                } else {
                                    out.segs.entry(g.clone()).or_default().push((slo, shi));
                                }
                            }
                        }
                    }
                }
                crate::push::PushTarget::Point(p) => {
                    if targets.contains_point(pres, &p)? {
                        match carrier {
                            CarrierId::E(e) => out
                                .edges
                                .entry(e.clone())
                                .or_default()
                                .push((piece.src_lo.clone(), piece.src_hi.clone())),
                            CarrierId::S(g) => out
                                .segs
                                .entry(g.clone())
                                .or_default()
                                .push((piece.src_lo.clone(), piece.src_hi.clone())),
                        }
                    }
                }
            }
        }
        Ok(())
    };
    for (e, list) in &domain.edges {
        for (lo, hi) in list {
            frag_solver(&CarrierId::E(e.clone()), lo, hi, &mut out)?;
        }
    }
    for (g, list) in &domain.segs {
        for (lo, hi) in list {
            frag_solver(&CarrierId::S(g.clone()), lo, hi, &mut out)?;
        }
    }
    // vertices of the domain mapping into the target
    for v in &domain.verts {
        let img = map.apply(&Point::Vertex(v.clone()))?;
        if targets.contains_point(pres, &img)? {
            out.verts.insert(v.clone());
        }
    }
    out.normalize(pres)?;
    Ok(out)
}

/// Components of `m` minus the cut set, via interval subtraction and
/// grouping at shared non-cut boundary coordinates.
fn split_components(
    map: &PlMap,
    m: &Subdendrite,
    cut: &Subdendrite,
) -> Result<Vec<Subdendrite>> {
    let pres = map.presentation();
    let mut pieces: Vec<(CarrierId, Q, Q)> = Vec::new();
    let subtract = |list: &[(Q, Q)], cuts: &[(Q, Q)]| -> Vec<(Q, Q)> {
        let mut segs: Vec<(Q, Q)> = list.to_vec();
        for (clo, chi) in cuts {
            let mut next = Vec::new();
            for (lo, hi) in segs {
                if chi < &lo || clo > &hi {
                    next.push((lo, hi));
                    continue;
                }
                if &lo < clo {
                    next.push((lo.clone(), clo.clone()));
                }
                if chi < &hi {
                    next.push((chi.clone(), hi.clone()));
                }
            }
            segs = next;
        }
        segs.into_iter().filter(|(lo, hi)| lo < hi).collect()
    };
    for (e, list) in &m.edges {
        let cuts = cut.edges.get(e).cloned().unwrap_or_default();
        // cut vertices on this edge become degenerate cut intervals
        let mut cuts = cuts;
        let (u, v) = pres.edge_endpoints(e)?;
        if cut.verts.contains(&u) {
            cuts.push((q_zero(), q_zero()));
        }
        if cut.verts.contains(&v) {
            cuts.push((q_one(), q_one()));
        }
        for (lo, hi) in subtract(list, &cuts) {
            pieces.push((CarrierId::E(e.clone()), lo, hi));
        }
    }
    for (g, list) in &m.segs {
        let mut cuts = cut.segs.get(g).cloned().unwrap_or_default();
        for v in &cut.verts {
            if let Some((seg, pos)) = pres.attach_info(v) {
                if seg == *g {
                    cuts.push((pos.clone(), pos));
                }
            }
        }
        for (lo, hi) in subtract(list, &cuts) {
            pieces.push((CarrierId::S(g.clone()), lo, hi));
        }
    }
    // group pieces sharing a boundary coordinate not in the cut set
    let coord_of = |c: &CarrierId, t: &Q| -> Result<String> {
        let p = match c {
            CarrierId::E(e) => Point::OnEdge(e.clone(), t.clone()),
            CarrierId::S(g) => Point::OnSegment(g.clone(), t.clone()),
        };
        let p = pres.canonical_point(p)?;
        let cc = pres.point_coord(&p)?;
        Ok(format!(
            "{}:{}",
            dendrodyn_core::num::fmt_q(&cc.0),
            dendrodyn_core::num::fmt_q(&cc.1)
        ))
    };
    let mut cut_keys = std::collections::BTreeSet::new();
    for p in cut.boundary_points(pres)? {
        let cc = pres.point_coord(&p)?;
        cut_keys.insert(format!(
            "{}:{}",
            dendrodyn_core::num::fmt_q(&cc.0),
            dendrodyn_core::num::fmt_q(&cc.1)
        ));
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
    let mut keys: Vec<[String; 2]> = Vec::with_capacity(n);
    for (c, lo, hi) in &pieces {
        keys.push([coord_of(c, lo)?, coord_of(c, hi)?]);
    }
    for i in 0..n {
        for j in i + 1..n {
            let join = keys[i]
                .iter()
                .any(|ka| !cut_keys.contains(ka) && keys[j].iter().any(|kb| ka == kb));
            if join {
                let (a, b) = (find(&mut dsu, i), find(&mut dsu, j));
                if a != b {
                    dsu[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Subdendrite> = Default::default();
    for i in 0..n {
        let r = find(&mut dsu, i);
        let s = groups.entry(r).or_insert_with(Subdendrite::empty);
        let (c, lo, hi) = &pieces[i];
        match c {
            CarrierId::E(e) => s.edges.entry(e.clone()).or_default().push((lo.clone(), hi.clone())),
            CarrierId::S(g) => s.segs.entry(g.clone()).or_default().push((lo.clone(), hi.clone())),
        }
    }
    let mut out = Vec::new();
    for (_, mut s) in groups {
        s.normalize(pres)?;
        out.push(s);
    }
    Ok(out)
}

/// One level of the decomposition: cut the hull of the clusters at the
/// stabilized preimage set of a fixed point of g = f^alpha_prev.
pub fn split_level(
    map: &PlMap,
    alpha_prev: u32,
    clusters: &[Point],
    opts: &DecompOptions,
) -> Result<std::result::Result<CutStructure, SplitFailure>> {
    let pres = map.presentation();
    if clusters.is_empty() {
        return Err(DynError::Invalid("no limit clusters supplied".into()));
    }
    let hull = convex_hull(pres, clusters, &clusters[0])?;
    // fixed points of g inside the hull
    let depth = pres.doc().default_depth.min(8).max(4);
    let per = periodic_points(map, alpha_prev, depth)?;
    let mut anchors: Vec<Point> = Vec::new();
    let mut fixed_segment_in_hull = false;
    for item in &per.items {
        match item {
            PeriodicItem::Point { point, period, .. } => {
                if alpha_prev % *period == 0 && hull.contains_point(pres, point)? {
                    anchors.push(point.clone());
                }
            }
            PeriodicItem::Segment { carrier, lo, hi, period } => {
                if alpha_prev % *period == 0 {
                    let probe = match carrier {
                        CarrierId::E(e) => {
                            pres.canonical_point(Point::OnEdge(e.clone(), (lo + hi) / dendrodyn_core::num::qi(2)))?
                        }
                        CarrierId::S(g) => {
                            pres.canonical_point(Point::OnSegment(g.clone(), (lo + hi) / dendrodyn_core::num::qi(2)))?
                        }
                    };
                    if hull.contains_point(pres, &probe)? {
                        anchors.push(probe);
                        fixed_segment_in_hull = true;
                    }
                }
            }
        }
    }
    anchors.sort();
    let anchor = match anchors.first() {
        Some(a) => a.clone(),
        None => return Ok(Err(SplitFailure::NoFixedPointInHull)),
    };

    // F_a: g-preimages of the anchor inside the hull, accumulated until
    // stable or the depth bound
    let mut cut = Subdendrite::point(pres, &anchor)?;
    for _ in 0..opts.preimage_depth {
        let mut pre = cut.clone();
        for _ in 0..alpha_prev {
            pre = preimage_step(map, &pre, &hull)?;
        }
        let grown = cut.clone().union(pres, &pre)?;
        if grown == cut {
            break;
        }
        cut = grown;
    }

    let comps = split_components(map, &hull, &cut)?;
    let mut components = Vec::new();
    let mut clusters_per = Vec::new();
    for c in comps {
        let mine: Vec<Point> = {
            let mut v = Vec::new();
            for cl in clusters {
                if c.contains_point(pres, cl)? {
                    v.push(cl.clone());
                }
            }
            v
        };
        if !mine.is_empty() {
            components.push(c);
            clusters_per.push(mine);
        }
    }
    if components.len() < 2 {
        return Ok(Err(SplitFailure::NoSplit {
            detail: format!(
                "anchor {anchor} leaves {} limit-bearing component(s)",
                components.len()
            ),
        }));
    }
    // induced permutation: g maps each component's clusters into exactly
    // one component
    let mut sigma = Vec::with_capacity(components.len());
    for (k, mine) in clusters_per.iter().enumerate() {
        let mut hit: Option<usize> = None;
        for cl in mine {
            let img = apply_g(map, alpha_prev, cl)?;
            let mut found: Option<usize> = None;
            for (j, c) in components.iter().enumerate() {
                if c.contains_point(pres, &img)? {
                    found = Some(j);
                    break;
                }
            }
            match (hit, found) {
                (_, None) => {
                    return Ok(Err(SplitFailure::StructureViolation {
                        detail: format!("image of cluster {cl} lies in no component"),
                    }))
                }
                (None, Some(j)) => hit = Some(j),
                (Some(prev), Some(j)) if prev != j => {
                    return Ok(Err(SplitFailure::StructureViolation {
                        detail: format!("component {k} maps into components {prev} and {j}"),
                    }))
                }
                _ => {}
            }
        }
        sigma.push(hit.unwrap());
    }
    if fixed_segment_in_hull && sigma.iter().enumerate().any(|(k, j)| k == *j) {
        return Ok(Err(SplitFailure::StructureViolation {
            detail: "a pointwise-fixed region pins its component (σ has a fixed index)".into(),
        }));
    }
    // σ must be a single n-cycle
    let n = components.len();
    let mut visited = vec![false; n];
    let mut at = 0usize;
    for _ in 0..n {
        if visited[at] {
            break;
        }
        visited[at] = true;
        at = sigma[at];
    }
    if visited.iter().any(|v| !v) || at != 0 {
        let cycle: Vec<usize> = visited
            .iter()
            .enumerate()
            .filter(|(_, v)| **v)
            .map(|(i, _)| i)
            .collect();
        return Ok(Err(SplitFailure::StructureViolation {
            detail: format!("σ = {sigma:?} is not an {n}-cycle (sub-cycle {cycle:?})"),
        }));
    }
    Ok(Ok(CutStructure {
        anchor,
        cut_points: cut.boundary_points(pres)?,
        components,
        sigma,
        clusters_per_component: clusters_per,
    }))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct LevelChecks {
    pub period_ok: bool,
    pub nesting_ok: bool,
    pub covering_ok: bool,
    pub mapping_ok: bool,
    pub interior_disjoint_ok: bool,
    pub details: Vec<String>,
}

impl LevelChecks {
    pub fn all_ok(&self) -> bool {
        self.period_ok && self.nesting_ok && self.covering_ok && self.mapping_ok && self.interior_disjoint_ok
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionLevel {
    pub k: u32,
    pub n_k: u32,
    pub alpha_k: u32,
    pub d_set: Subdendrite,
    pub images: Vec<Subdendrite>,
    pub anchor: Point,
    pub sigma: Vec<usize>,
    pub checks: LevelChecks,
}

#[derive(Debug)]
pub struct Decomposition {
    pub levels: Vec<DecompositionLevel>,
    pub failure: Option<(u32, SplitFailure)>,
    pub warnings: Vec<String>,
    pub omega: OmegaEstimate,
}

/// Verifies one level against the cluster estimate. `prev` is the previous
/// level's subdendrite (with its α), if any.
pub fn verify_level(
    map: &PlMap,
    level_dset: &Subdendrite,
    alpha_k: u32,
    n_k: u32,
    images: &[Subdendrite],
    prev: Option<(&Subdendrite, u32)>,
    clusters: &[Point],
) -> Result<LevelChecks> {
    let pres = map.presentation();
    let mut details = Vec::new();
    // (1) period: f^alpha(D) = D up to fragment closure
    let back = image_of_arc(map, level_dset, alpha_k)?;
    let period_ok = back == *level_dset;
    if !period_ok {
        details.push("f^alpha(D) differs from D".into());
    }
    // (2) nesting into the previous level
    let nesting_ok = match prev {
        None => true,
        Some((prev_d, alpha_prev)) => {
            let mut ok = true;
            for j in 0..n_k {
                let img = image_of_arc(map, level_dset, j * alpha_prev)?;
                if !prev_d.contains(pres, &img)? {
                    ok = false;
                    details.push(format!("f^({j}·α_prev)(D) escapes the previous level"));
                    break;
                }
            }
            ok
        }
    };
    // (3) the cluster estimate is covered by the image cycle
    let mut covering_ok = true;
    'cl: for cl in clusters {
        for img in images {
            if img.contains_point(pres, cl)? {
                continue 'cl;
            }
        }
        covering_ok = false;
        details.push(format!("cluster {cl} not covered by the image cycle"));
        break;
    }
    // (4) the cluster sets map along the cycle
    let mut mapping_ok = true;
    'mp: for (i, img) in images.iter().enumerate() {
        let next = &images[(i + 1) % images.len()];
        let mut any = false;
        for cl in clusters {
            if img.contains_point(pres, cl)? {
                any = true;
                let fc = map.apply(cl)?;
                if !next.contains_point(pres, &fc)? {
                    mapping_ok = false;
                    details.push(format!(
                        "cluster {cl} in piece {i} maps outside piece {}",
                        (i + 1) % images.len()
                    ));
                    break 'mp;
                }
            }
        }
        if !any {
            mapping_ok = false;
            details.push(format!("piece {i} carries no cluster"));
            break;
        }
    }
    // (5) pairwise interior-disjointness of the pieces
    let mut interior_disjoint_ok = true;
    'dj: for i in 0..images.len() {
        for j in i + 1..images.len() {
            if let Some(overlap) = images[i].interior_overlap(pres, &images[j])? {
                interior_disjoint_ok = false;
                details.push(format!("pieces {i} and {j} overlap on {overlap}"));
                break 'dj;
            }
        }
    }
    Ok(LevelChecks { period_ok, nesting_ok, covering_ok, mapping_ok, interior_disjoint_ok, details })
}

pub fn build_decomposition(
    map: &PlMap,
    x: &Point,
    levels: u32,
    horizon: usize,
    opts: &DecompOptions,
) -> Result<Decomposition> {
    let pres = map.presentation();
    let orbit = map.orbit(x, horizon)?;
    let omega = omega_from_orbit(map, &orbit.entries, horizon, horizon / 4, &opts.cluster_radius)?;
    let mut warnings = Vec::new();

    // the uncountability hypothesis is undecidable from finite data; on
    // presentations with accumulation structure use cluster growth across
    // doubling horizons as the heuristic, and skip it for finite trees
    let is_tree_like = pres.limit_decls().is_empty()
        && pres.doc().segments.iter().all(|s| s.attaches.iter().all(|a| a.var.bound.is_some()));
    if !is_tree_like {
        let quarter = omega_from_orbit(map, &orbit.entries, horizon / 2, horizon / 8, &opts.cluster_radius)?;
        if quarter.clusters.len() >= omega.clusters.len() {
            warnings.push(
                "cluster count did not grow across doubling horizons; the limit set may be countable"
                    .into(),
            );
        }
    }

    let clusters_all: Vec<Point> = omega.clusters.iter().map(|c| c.rep.clone()).collect();
    let mut out_levels: Vec<DecompositionLevel> = Vec::new();
    let mut failure = None;
    let mut alpha_prev = 1u32;
    let mut clusters = clusters_all;
    let mut prev_d: Option<(Subdendrite, u32)> = None;

    for k in 1..=levels {
        let cut = match split_level(map, alpha_prev, &clusters, opts)? {
            Ok(c) => c,
            Err(f) => {
                warnings.push(
                    "failure may indicate a violated uncountable-limit hypothesis or an insufficient window"
                        .into(),
                );
                failure = Some((k, f));
                break;
            }
        };
        let n_k = cut.components.len() as u32;
        let alpha_k = alpha_prev * n_k;
        // D_k: stabilized union of f^{alpha_k j} images of hull(l_1)
        let l1 = &cut.clusters_per_component[0];
        let mut d_set = convex_hull(pres, l1, &l1[0])?;
        let mut stable = false;
        for _ in 0..opts.stabilize_cap {
            let img = image_of_arc(map, &d_set, alpha_k)?;
            let grown = d_set.clone().union(pres, &img)?;
            if grown == d_set {
                stable = true;
                break;
            }
            d_set = grown;
        }
        if !stable {
            warnings.push(format!("level {k}: subdendrite union did not stabilize within the cap"));
        }
        let mut images = Vec::with_capacity(alpha_k as usize);
        images.push(d_set.clone());
        for _ in 1..alpha_k {
            let next = image_once(map, images.last().unwrap())?;
            images.push(next);
        }
        let checks = verify_level(
            map,
            &d_set,
            alpha_k,
            n_k,
            &images,
            prev_d.as_ref().map(|(d, a)| (d, *a)),
            &clusters,
        )?;
        let level = DecompositionLevel {
            k,
            n_k,
            alpha_k,
            d_set: d_set.clone(),
            images,
            anchor: cut.anchor.clone(),
            sigma: cut.sigma.clone(),
            checks,
        };
        out_levels.push(level);
        // next level works inside D_k with the clusters it carries
        let mut next_clusters = Vec::new();
        for cl in &clusters {
            if d_set.contains_point(pres, cl)? {
                next_clusters.push(cl.clone());
            }
        }
        if next_clusters.is_empty() {
            warnings.push(format!("level {k}: no clusters inside the level subdendrite"));
            break;
        }
        clusters = next_clusters;
        prev_d = Some((d_set, alpha_prev));
        alpha_prev = alpha_k;
    }
    Ok(Decomposition { levels: out_levels, failure, warnings, omega })
}

/// First (level, iterate) whose piece is a free arc.
pub fn free_arc_level(
    map: &PlMap,
    levels: &[DecompositionLevel],
) -> Result<(Option<(u32, u32)>, Vec<String>)> {
    let pres = map.presentation();
    let mut notes = Vec::new();
    for level in levels {
        for (i, img) in level.images.iter().enumerate() {
            if dendrodyn_core::topology::is_free_arc(pres, img)? {
                return Ok((Some((level.k, i as u32)), notes));
            }
        }
    }
    if let Some(last) = levels.last() {
        notes.push(format!(
            "no free arc among the computed pieces; one must appear once 2^k exceeds the \
             derived endpoint count (deepest level k = {})",
            last.k
        ));
    }
    Ok((None, notes))
}
