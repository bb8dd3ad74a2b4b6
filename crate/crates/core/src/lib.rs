//! Exact-arithmetic geometry kernel for finitely-presented dendrites:
//! uniquely arcwise-connected planar trees with countable, lazily generated
//! edge families, rational embeddings, and window-independent set algebra.

pub mod doc;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod ids;
pub mod num;
pub mod presentation;
pub mod subdendrite;
pub mod topology;
pub mod truncation;

pub use doc::{DendriteDoc, MapDoc, MetricMode, SystemDoc};
pub use error::{CoreError, Result};
pub use ids::{EdgeId, LimitKey, Point, SegId, VertexId};
pub use num::Q;
pub use presentation::Presentation;
pub use subdendrite::Subdendrite;
