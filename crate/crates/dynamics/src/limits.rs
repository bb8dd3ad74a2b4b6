//! Finite-horizon ω-limit estimation and pair classification.
//!
//! Estimates are windowed; verdicts record their horizon and thresholds.
//! Two structurally-exact upgrades are applied when the data supports
//! them: (1) both orbits exactly eventually periodic — distances over one
//! full common cycle are exact, so any verdict (including distal) is
//! sound; (2) one orbit eventually fixed at p while the other's distance
//! to p strictly decreases over three tail windows — the approach is
//! certified and the pair is proximal.

use crate::error::Result;
use crate::map::PlMap;
use dendrodyn_core::geometry::distance;
use dendrodyn_core::ids::{Point, VertexId};
use dendrodyn_core::num::{fmt_q, q_zero, Q};
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct Cluster {
    pub rep: Point,
    pub count: usize,
    pub max_spread: Q,
}

#[derive(Debug, Clone)]
pub struct OmegaEstimate {
    pub base: Point,
    pub horizon: usize,
    pub burn_in: usize,
    pub cluster_radius: Q,
    pub clusters: Vec<Cluster>,
    pub limit_vertex_hits: Vec<(VertexId, Q)>,
    pub stabilized: bool,
}

fn greedy_clusters(map: &PlMap, tail: &[Point], radius: &Q) -> Result<Vec<Cluster>> {
    let pres = map.presentation();
    let mut clusters: Vec<Cluster> = Vec::new();
    'pts: for p in tail {
        for c in clusters.iter_mut() {
            if let Some(d) = dendrodyn_core::geometry::distance_within(pres, &c.rep, p, radius)? {
                c.count += 1;
                if d > c.max_spread {
                    c.max_spread = d;
                }
                continue 'pts;
            }
        }
        clusters.push(Cluster { rep: p.clone(), count: 1, max_spread: q_zero() });
    }
    Ok(clusters)
}

pub fn omega_estimate(
    map: &PlMap,
    x: &Point,
    horizon: usize,
    burn_in: usize,
    cluster_radius: &Q,
) -> Result<OmegaEstimate> {
    assert!(burn_in < horizon, "burn-in must precede the horizon");
    let orbit = map.orbit(x, horizon)?;
    omega_from_orbit(map, &orbit.entries, horizon, burn_in, cluster_radius)
}

pub fn omega_from_orbit(
    map: &PlMap,
    entries: &[Point],
    horizon: usize,
    burn_in: usize,
    cluster_radius: &Q,
) -> Result<OmegaEstimate> {
    let pres = map.presentation();
    let tail = &entries[burn_in..=horizon.min(entries.len() - 1)];
    let clusters = greedy_clusters(map, tail, cluster_radius)?;
    // stabilization: the first half of the tail yields the same picture
    let half = burn_in + (horizon - burn_in) / 2;
    let half_clusters = greedy_clusters(map, &entries[burn_in..=half], cluster_radius)?;
    let mut stabilized = half_clusters.len() == clusters.len();
    if stabilized {
        for c in &clusters {
            let mut near = false;
            for h in &half_clusters {
                if distance(pres, &c.rep, &h.rep)? <= cluster_radius.clone() {
                    near = true;
                    break;
                }
            }
            if !near {
                stabilized = false;
                break;
            }
        }
    }
    // declared limit vertices approached by the tail
    let max_needed = tail
        .iter()
        .map(|p| pres.needed_depth(p))
        .max()
        .unwrap_or(1)
        .saturating_add(4);
    let mut hits: Vec<(VertexId, Q)> = Vec::new();
    for decl in 0..pres.limit_decls().len() {
        let arity = pres.limit_decls()[decl].vars.len();
        let tuples: Vec<Vec<i64>> = if arity == 0 {
            vec![vec![]]
        } else {
            // one outer var suffices for all built-ins; enumerate upward
            (0..=max_needed as i64).map(|n| vec![n]).collect()
        };
        for outer in tuples {
            let key = dendrodyn_core::LimitKey { decl, outer };
            let lim = pres.limit_vertex(&key);
            if pres.vertex_coord(&lim).is_err() {
                continue;
            }
            let lp = Point::Vertex(lim.clone());
            let mut best: Option<Q> = None;
            for p in tail {
                // the straight-line gap lower-bounds the path distance
                let lb = dendrodyn_core::geometry::distance_lower_bound(pres, p, &lp)?;
                if best.as_ref().map(|b| &lb >= b).unwrap_or(false) || &lb >= cluster_radius {
                    continue;
                }
                let d = distance(pres, p, &lp)?;
                if best.as_ref().map(|b| &d < b).unwrap_or(true) {
                    best = Some(d);
                }
            }
            if let Some(b) = best {
                if &b < cluster_radius {
                    hits.push((lim, b));
                }
            }
        }
    }
    hits.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(OmegaEstimate {
        base: entries[0].clone(),
        horizon,
        burn_in,
        cluster_radius: cluster_radius.clone(),
        clusters,
        limit_vertex_hits: hits,
        stabilized,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Asymptotic,
    LiYorke,
    Distal,
    Undetermined,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Asymptotic => "Asymptotic",
            Verdict::LiYorke => "LiYorke",
            Verdict::Distal => "Distal",
            Verdict::Undetermined => "Undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    FiniteHorizon,
    StructurallyExact,
}

#[derive(Debug, Clone)]
pub struct PairClassification {
    pub pair: (Point, Point),
    pub verdict: Verdict,
    pub liminf_estimate: Q,
    pub limsup_estimate: Q,
    pub horizon: usize,
    pub tolerance: Q,
    pub separation: Q,
    pub exactness: Exactness,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PairParams {
    pub horizon: usize,
    pub tolerance: Q,
    pub separation: Q,
}

impl Default for PairParams {
    fn default() -> Self {
        PairParams {
            horizon: 4096,
            tolerance: dendrodyn_core::num::pow2(-10),
            separation: dendrodyn_core::num::pow2(-4),
        }
    }
}

impl PairParams {
    pub fn validate(&self) {
        assert!(self.tolerance < self.separation, "tolerance must stay below separation");
    }
}

/// (preperiod, period) when the representation sequence repeats.
fn eventually_periodic(entries: &[Point]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&Point, usize> = HashMap::new();
    for (i, p) in entries.iter().enumerate() {
        if let Some(&j) = seen.get(p) {
            return Some((j, i - j));
        }
        seen.insert(p, i);
    }
    None
}

pub fn classify_pair(map: &PlMap, x: &Point, y: &Point, params: &PairParams) -> Result<PairClassification> {
    params.validate();
    let ox = map.orbit(x, params.horizon)?;
    let oy = map.orbit(y, params.horizon)?;
    classify_pair_with_orbits(map, &ox.entries, &oy.entries, params)
}

pub fn classify_pair_with_orbits(
    map: &PlMap,
    ox: &[Point],
    oy: &[Point],
    params: &PairParams,
) -> Result<PairClassification> {
    params.validate();
    let pres = map.presentation();
    let pair = (ox[0].clone(), oy[0].clone());
    let horizon = params.horizon.min(ox.len() - 1).min(oy.len() - 1);
    let burn = horizon / 4;
    let px = eventually_periodic(ox);
    let py = eventually_periodic(oy);
    let mut evidence = Vec::new();

    if let (Some((ax, tx)), Some((ay, ty))) = (px, py) {
        // exact distances over one full common cycle
        let start = ax.max(ay);
        let lcm = num_integer::lcm(tx, ty);
        if start + lcm <= horizon && lcm <= 1 << 16 {
            let mut lo: Option<Q> = None;
            let mut hi: Option<Q> = None;
            for i in start..start + lcm {
                let d = distance(pres, &ox[i], &oy[i])?;
                if lo.as_ref().map(|v| &d < v).unwrap_or(true) {
                    lo = Some(d.clone());
                }
                if hi.as_ref().map(|v| &d > v).unwrap_or(true) {
                    hi = Some(d);
                }
            }
            let (lo, hi) = (lo.unwrap(), hi.unwrap());
            evidence.push(format!(
                "both orbits eventually periodic (periods {tx}, {ty}); exact cycle distances in [{}, {}]",
                fmt_q(&lo),
                fmt_q(&hi)
            ));
            let verdict = if hi.is_zero() {
                Verdict::Asymptotic
            } else if lo > params.separation {
                Verdict::Distal
            } else if lo <= params.tolerance && hi > params.separation {
                Verdict::LiYorke
            } else {
                Verdict::Undetermined
            };
            return Ok(PairClassification {
                pair,
                verdict,
                liminf_estimate: lo,
                limsup_estimate: hi,
                horizon,
                tolerance: params.tolerance.clone(),
                separation: params.separation.clone(),
                exactness: Exactness::StructurallyExact,
                evidence,
            });
        }
    }

    // windowed estimates with early confirmation
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for i in burn..=horizon {
        // once the limsup evidence is in, steps that cannot lower the
        // minimum are skipped (the straight-line gap bounds from below)
        if let (Some(lo0), Some(hi0)) = (&lo, &hi) {
            if hi0 > &params.separation {
                let lb = dendrodyn_core::geometry::distance_lower_bound(pres, &ox[i], &oy[i])?;
                if &lb >= lo0 {
                    continue;
                }
            }
        }
        let d = distance(pres, &ox[i], &oy[i])?;
        if lo.as_ref().map(|v| &d < v).unwrap_or(true) {
            lo = Some(d.clone());
        }
        if hi.as_ref().map(|v| &d > v).unwrap_or(true) {
            hi = Some(d);
        }
        if lo.as_ref().unwrap() <= &params.tolerance && hi.as_ref().unwrap() > &params.separation {
            evidence.push(format!("confirmed at step {i} of {horizon}"));
            break;
        }
    }
    let (mut lo, hi) = (lo.unwrap(), hi.unwrap());
    let mut exactness = Exactness::FiniteHorizon;

    // structural proximality: one side eventually fixed, the other
    // certifiably approaching it
    let fixed_side: Option<(&[Point], Point)> = match (px, py) {
        (Some((_, 1)), None) => Some((oy, ox[horizon].clone())),
        (None, Some((_, 1))) => Some((ox, oy[horizon].clone())),
        _ => None,
    };
    if lo > params.tolerance {
        if let Some((other, fixed_pt)) = fixed_side {
            let third = (horizon - burn) / 3;
            if third > 0 {
                let mut mins = Vec::new();
                for w in 0..3 {
                    let a = burn + w * third;
                    let b = if w == 2 { horizon } else { a + third };
                    let mut m: Option<Q> = None;
                    for p in &other[a..=b] {
                        let d = distance(pres, p, &fixed_pt)?;
                        if m.as_ref().map(|v| &d < v).unwrap_or(true) {
                            m = Some(d);
                        }
                    }
                    mins.push(m.unwrap());
                }
                if mins[0] > mins[1] && mins[1] > mins[2] && mins[2] < params.separation {
                    evidence.push(format!(
                        "orbit approaches the fixed point {fixed_pt}: window minima {} > {} > {}",
                        fmt_q(&mins[0]),
                        fmt_q(&mins[1]),
                        fmt_q(&mins[2])
                    ));
                    lo = q_zero();
                    exactness = Exactness::StructurallyExact;
                }
            }
        }
    }

    let verdict = if hi <= params.tolerance {
        Verdict::Asymptotic
    } else if lo <= params.tolerance && hi > params.separation {
        Verdict::LiYorke
    } else {
        // a distal verdict needs exact support; finite data stays open
        Verdict::Undetermined
    };
    Ok(PairClassification {
        pair,
        verdict,
        liminf_estimate: lo,
        limsup_estimate: hi,
        horizon,
        tolerance: params.tolerance.clone(),
        separation: params.separation.clone(),
        exactness,
        evidence,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ScrambledReport {
    pub sample_size: usize,
    pub pairs_classified: usize,
    pub li_yorke_pairs: Vec<(Point, Point)>,
    /// Greedy maximal pairwise-Li-Yorke subsets, largest first.
    pub cliques: Vec<Vec<Point>>,
    pub horizon: usize,
}

/// Classifies every pair of the sample and reports greedy cliques in the
/// Li-Yorke graph. Orbits are computed once per sample point.
pub fn scrambled_search(map: &PlMap, sample: &[Point], params: &PairParams) -> Result<ScrambledReport> {
    params.validate();
    let mut orbits = Vec::with_capacity(sample.len());
    for p in sample {
        orbits.push(map.orbit(p, params.horizon)?.entries);
    }
    let n = sample.len();
    let mut adj = vec![vec![false; n]; n];
    let mut ly_pairs = Vec::new();
    let mut classified = 0;
    for i in 0..n {
        for j in i + 1..n {
            let c = classify_pair_with_orbits(map, &orbits[i], &orbits[j], params)?;
            classified += 1;
            if c.verdict == Verdict::LiYorke {
                adj[i][j] = true;
                adj[j][i] = true;
                ly_pairs.push((sample[i].clone(), sample[j].clone()));
            }
        }
    }
    let mut used = vec![false; n];
    let mut cliques = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let mut clique = vec![i];
        for j in 0..n {
            if j == i || used[j] {
                continue;
            }
            if clique.iter().all(|&k| adj[k][j]) {
                clique.push(j);
            }
        }
        for &k in &clique {
            used[k] = true;
        }
        cliques.push(clique.into_iter().map(|k| sample[k].clone()).collect::<Vec<_>>());
    }
    cliques.sort_by(|a, b| b.len().cmp(&a.len()));
    Ok(ScrambledReport {
        sample_size: n,
        pairs_classified: classified,
        li_yorke_pairs: ly_pairs,
        cliques,
        horizon: params.horizon,
    })
}
