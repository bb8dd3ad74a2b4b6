//! Exact dynamics of piecewise-linear dendrite self-maps: evaluation and
//! orbits, continuity checking, periodic points, arc images, ω-limit
//! estimation, pair classification, horseshoe detection, entropy
//! certificates, and periodic-subdendrite decompositions.

pub mod decomposition;
pub mod entropy;
pub mod error;
pub mod horseshoe;
pub mod image;
pub mod limits;
pub mod map;
pub mod periodic;
pub mod push;
pub mod sample;

pub use error::{DynError, Result};
pub use map::{check_continuity, CarrierId, ContinuityReport, OrbitRecord, PlMap};

use dendrodyn_core::doc::SystemDoc;
use dendrodyn_core::presentation::Presentation;
use std::sync::Arc;

/// A presentation together with its self-map, ready to iterate.
pub struct System {
    pub pres: Arc<Presentation>,
    pub map: Arc<PlMap>,
}

impl System {
    pub fn from_doc(doc: SystemDoc) -> Result<System> {
        let pres = Presentation::new(doc.dendrite)?;
        let map_doc = doc
            .map
            .ok_or_else(|| DynError::Invalid("this presentation ships no self-map".into()))?;
        let map = PlMap::new(pres.clone(), map_doc)?;
        Ok(System { pres, map })
    }
}
