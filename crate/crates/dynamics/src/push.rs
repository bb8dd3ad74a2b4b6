//! Pushing parameter intervals through the rule subdivisions: the common
//! machinery behind exact arc images and the periodic-point solver.

use crate::error::{DynError, Result};
use crate::map::{CarrierId, PlMap, TAIL_EXPAND};
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{q_one, q_zero, Q};
use dendrodyn_core::presentation::Presentation;
use dendrodyn_core::truncation::OrientedFrag;
use num_traits::Zero;
use std::sync::Arc;

/// Image of one source sub-interval under one affine stretch of the rule:
/// either an affine landing on a carrier (param = a + b·src) or a constant
/// point (collapsed pieces).
#[derive(Debug, Clone)]
pub enum PushTarget {
    Affine { carrier: CarrierId, a: Q, b: Q },
    Point(Point),
}

#[derive(Debug, Clone)]
pub struct PushPiece {
    pub src_lo: Q,
    pub src_hi: Q,
    pub target: PushTarget,
}

#[derive(Debug, Default)]
pub struct PushStats {
    /// Sub-intervals whose image dives deeper into an accumulation tail
    /// than the expansion bound; their exact pieces are not enumerated.
    pub escaped: usize,
}

/// Expands an oriented fragment into affine pieces on real carriers.
/// `c0`/`c1` are the cumulative arc lengths the fragment occupies inside
/// its arc; the caller maps those back to source parameters.
fn frag_pieces(
    pres: &Arc<Presentation>,
    f: &OrientedFrag,
    stats: &mut PushStats,
) -> Result<Vec<(Q, Q, CarrierId, Q, Q)>> {
    // returns (len_lo, len_hi, carrier, param_at_len_lo, param_at_len_hi)
    // with len measured from the fragment start
    match f {
        OrientedFrag::Edge { id, t0, t1, len } => Ok(vec![(
            q_zero(),
            len.clone(),
            CarrierId::E(id.clone()),
            t0.clone(),
            t1.clone(),
        )]),
        OrientedFrag::Seg { id, s0, s1, len } => Ok(vec![(
            q_zero(),
            len.clone(),
            CarrierId::S(id.clone()),
            s0.clone(),
            s1.clone(),
        )]),
        OrientedFrag::Tail { key, d0, d1 } => {
            // enumerate real chain edges for the outermost TAIL_EXPAND
            // steps; anything deeper is reported as escaped
            let mut out = Vec::new();
            let (far, near) = (d0.max(d1), d0.min(d1));
            let toward_limit = d0 >= d1;
            let mut boundary = far.clone();
            let mut expanded = 0;
            while &boundary > near && expanded < TAIL_EXPAND {
                let p = pres.resolve_tail_point(key, &boundary)?;
                let edge = match &p {
                    Point::Vertex(v) => {
                        // next edge toward the limit starts at this vertex
                        let delta = pres.delta_of(key, &Point::Vertex(v.clone()))?;
                        let mut k = 0i64;
                        loop {
                            let av = pres.approach_vertex(key, k)?;
                            if pres.vertex_exists(&av)
                                && pres.delta_of(key, &Point::Vertex(av.clone()))? == delta
                            {
                                break pres.chain_edge_id(key, k);
                            }
                            k += 1;
                            if k > 1 << 20 {
                                return Err(DynError::Budget("chain scan".into()));
                            }
                        }
                    }
                    Point::OnEdge(e, _) => e.clone(),
                    _ => return Err(DynError::Invalid("tail resolved to a segment".into())),
                };
                let (u, v) = pres.edge_endpoints(&edge)?;
                let du = pres.delta_of(key, &Point::Vertex(u))?;
                let dv = pres.delta_of(key, &Point::Vertex(v))?;
                // edge param from delta: t = (du - delta)/(du - dv)
                let seg_far = boundary.clone().min(du.clone());
                let seg_near = near.clone().max(dv.clone());
                let t_far = (&du - &seg_far) / (&du - &dv);
                let t_near = (&du - &seg_near) / (&du - &dv);
                let (len_a, len_b, pa, pb) = if toward_limit {
                    (far.clone() - &seg_far, far.clone() - &seg_near, t_far, t_near)
                } else {
                    (&seg_near - near, &seg_far - near, t_near, t_far)
                };
                out.push((len_a, len_b, CarrierId::E(edge), pa, pb));
                boundary = seg_near;
                expanded += 1;
            }
            if &boundary > near {
                stats.escaped += 1;
            }
            if !toward_limit {
                out.sort_by(|x, y| x.0.cmp(&y.0));
            }
            Ok(out)
        }
    }
}

/// Pushes a parameter interval on a carrier through the map's rule once.
pub fn push_interval(
    map: &PlMap,
    carrier: &CarrierId,
    lo: &Q,
    hi: &Q,
    stats: &mut PushStats,
) -> Result<Vec<PushPiece>> {
    let pres = map.presentation();
    let (ci, env) = match carrier {
        CarrierId::E(e) => {
            let (ci, _) = map.rule_for_edge(e)?;
            (ci, e.idx.clone())
        }
        CarrierId::S(g) => {
            let (ci, _) = map.rule_for_segment(g)?;
            (ci, Vec::new())
        }
    };
    let rule = map.resolve_rule(ci, &env)?;
    let mut out = Vec::new();
    for (i, arc) in rule.arcs.iter().enumerate() {
        let u0 = &rule.breaks[i];
        let u1 = &rule.breaks[i + 1];
        let olo = lo.max(u0).clone();
        let ohi = hi.min(u1).clone();
        if olo > ohi {
            continue;
        }
        if arc.total.is_zero() {
            out.push(PushPiece {
                src_lo: olo,
                src_hi: ohi,
                target: PushTarget::Point(arc.p0.clone()),
            });
            continue;
        }
        // arc length as a function of the source parameter t:
        // len(t) = (t - u0) * total / (u1 - u0)
        let rate = &arc.total / (u1 - u0);
        let mut cum = q_zero();
        for f in &arc.frags {
            let flen = f.length();
            if flen.is_zero() {
                continue;
            }
            for (la, lb, cid, pa, pb) in frag_pieces(pres, f, stats)? {
                // this sub-piece occupies arc lengths [cum+la, cum+lb]
                let t_a = u0 + (&cum + &la) / &rate;
                let t_b = u0 + (&cum + &lb) / &rate;
                let slo = t_a.clone().max(olo.clone());
                let shi = t_b.clone().min(ohi.clone());
                if slo >= shi {
                    // allow degenerate only when the query itself is a point
                    if !(lo == hi && slo == shi) {
                        continue;
                    }
                }
                // param(t) = pa + (pb - pa) * (t - t_a)/(t_b - t_a)
                let denom = &t_b - &t_a;
                if denom.is_zero() {
                    continue;
                }
                let b = (&pb - &pa) / &denom;
                let a = &pa - &b * &t_a;
                out.push(PushPiece {
                    src_lo: slo,
                    src_hi: shi,
                    target: PushTarget::Affine { carrier: cid.clone(), a, b },
                });
            }
            cum += flen;
        }
    }
    Ok(out)
}
