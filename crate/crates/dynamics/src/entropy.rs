//! Entropy positivity certificates and zero-entropy evidence.
//!
//! A verified arc horseshoe certifies positive topological entropy. With
//! no witness found, the report instead estimates the recurrent set from
//! a sample and notes when it collapses onto the computed periodic items;
//! no exact entropy value is ever claimed.

use crate::error::Result;
use crate::horseshoe::{distance_to_periodic, horseshoe_search, HorseshoeWitness, SearchDiagnostics};
use crate::limits::omega_estimate;
use crate::map::PlMap;
use crate::periodic::{periodic_points, PeriodicItem};
use dendrodyn_core::geometry::distance;
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::{pow2, Q};

#[derive(Debug, Clone)]
pub struct RecurrentSample {
    pub point: Point,
    /// Distance from the point back to its own tail-orbit clusters.
    pub return_distance: Q,
    pub recurrent: bool,
}

#[derive(Debug)]
pub enum EntropyVerdict {
    Positive {
        witness: HorseshoeWitness,
    },
    ZeroEvidence {
        recurrent: Vec<RecurrentSample>,
        periodic: Vec<PeriodicItem>,
        /// Set when every recurrent sample sits on a periodic item.
        collapse_note: Option<String>,
    },
}

#[derive(Debug)]
pub struct EntropyReport {
    pub verdict: EntropyVerdict,
    pub horizon: usize,
    pub diagnostics: SearchDiagnostics,
}

pub fn entropy_report(
    map: &PlMap,
    horizon: usize,
    sample: &[Point],
    max_n: u32,
    candidate_budget: usize,
) -> Result<EntropyReport> {
    let pres = map.presentation();
    let (witness, diagnostics) = horseshoe_search(map, max_n, candidate_budget)?;
    if let Some(witness) = witness {
        return Ok(EntropyReport {
            verdict: EntropyVerdict::Positive { witness },
            horizon,
            diagnostics,
        });
    }
    let radius = pow2(-5);
    let mut recurrent = Vec::new();
    for p in sample {
        let est = omega_estimate(map, p, horizon, horizon / 4, &radius)?;
        let mut best: Option<Q> = None;
        for c in &est.clusters {
            let d = distance(pres, p, &c.rep)?;
            if best.as_ref().map(|b| &d < b).unwrap_or(true) {
                best = Some(d);
            }
        }
        let d = best.unwrap_or_else(|| pow2(10));
        let is_rec = d <= radius;
        recurrent.push(RecurrentSample { point: p.clone(), return_distance: d, recurrent: is_rec });
    }
    let per = periodic_points(map, 2, pres.doc().default_depth.min(6).max(3))?;
    let mut collapse = true;
    for r in recurrent.iter().filter(|r| r.recurrent) {
        match distance_to_periodic(map, &r.point, &per.items)? {
            Some(d) if d <= radius => {}
            _ => {
                collapse = false;
                break;
            }
        }
    }
    let collapse_note = if collapse && recurrent.iter().any(|r| r.recurrent) {
        Some(format!(
            "every recurrent sample point lies within 2^-5 of the computed periodic set ({} items)",
            per.items.len()
        ))
    } else if recurrent.iter().all(|r| !r.recurrent) {
        Some("no recurrent points detected in the sample".into())
    } else {
        None
    };
    Ok(EntropyReport {
        verdict: EntropyVerdict::ZeroEvidence {
            recurrent,
            periodic: per.items,
            collapse_note,
        },
        horizon,
        diagnostics,
    })
}
