//! Deterministic point sampling over a window, for pair grids and
//! property suites.

use dendrodyn_core::error::Result;
use dendrodyn_core::ids::Point;
use dendrodyn_core::num::q;
use dendrodyn_core::presentation::Presentation;
use dendrodyn_core::truncation::Carrier;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Uniformly sampled points of a window: interiors of real edges and
/// segment slices at small-denominator parameters.
pub fn sample_interior_points(
    pres: &Arc<Presentation>,
    depth: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    let t = pres.truncation(depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut guard = 0;
    while out.len() < count && guard < count * 50 {
        guard += 1;
        let ei = rng.gen_range(0..t.edges.len());
        let num = rng.gen_range(1..64i64);
        let tparam = q(num, 64);
        let p = match &t.edges[ei].carrier {
            Carrier::Edge(id) => Point::OnEdge(id.clone(), tparam),
            Carrier::Seg(id, lo, hi) => Point::OnSegment(id.clone(), lo + (hi - lo) * &tparam),
            Carrier::Residual(_) => continue,
        };
        let p = pres.canonical_point(p)?;
        if out.iter().any(|q2| pres.points_eq(q2, &p)) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}

/// Uniformly sampled window vertices.
pub fn sample_vertices(
    pres: &Arc<Presentation>,
    depth: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    let t = pres.truncation(depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut guard = 0;
    while out.len() < count && guard < count * 50 {
        guard += 1;
        let vi = rng.gen_range(0..t.verts.len());
        let p = Point::Vertex(t.verts[vi].id.clone());
        if out.iter().any(|q2| pres.points_eq(q2, &p)) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}
