//! Declaration model for dendrite and map presentations.
//!
//! A dendrite document declares indexed vertex families with exact planar
//! coordinates, indexed edge families between them, straight segments with
//! indexed attachment families (for structures whose junctions are dense in
//! an arc), and limit vertices with the family that approaches each one.
//! A map document assigns every edge family (and segment) a piecewise rule:
//! subdivision breakpoints and the image point at each breakpoint; each
//! sub-interval is carried at constant speed onto the unique arc between
//! consecutive image points.

use crate::expr::{Expr, Guard, IndexMap, Lin};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    PathLength,
    Ambient,
}

impl MetricMode {
    pub fn name(&self) -> &'static str {
        match self {
            MetricMode::PathLength => "path",
            MetricMode::Ambient => "ambient",
        }
    }
}

/// A declared index variable with an optional inclusive enumeration bound
/// (a linear term over the preceding variables). Unbounded variables range
/// over `0..=depth` when a window is materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub bound: Option<Lin>,
}

impl VarSpec {
    pub fn free(name: impl Into<String>) -> VarSpec {
        VarSpec { name: name.into(), bound: None }
    }
}

pub fn var_names(vars: &[VarSpec]) -> Vec<String> {
    vars.iter().map(|v| v.name.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClause {
    pub family: String,
    pub vars: Vec<VarSpec>,
    pub guard: Guard,
    pub coords: (Expr, Expr),
}

/// Endpoint (or image) reference: family plus one linear index map per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRef {
    pub family: String,
    pub idx: Vec<IndexMap>,
}

impl VRef {
    pub fn plain(family: impl Into<String>, idx: Vec<IndexMap>) -> VRef {
        VRef { family: family.into(), idx }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClause {
    pub family: String,
    pub vars: Vec<VarSpec>,
    pub guard: Guard,
    pub from: VRef,
    pub to: VRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachClause {
    pub family: String,
    pub var: VarSpec,
    pub guard: Guard,
    /// Position along the segment, in [0,1], as an expression in the var.
    pub pos: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentDecl {
    pub name: String,
    /// Constant vertex references (no index variables).
    pub from: VRef,
    pub to: VRef,
    pub attaches: Vec<AttachClause>,
}

/// Declares that `family[outer...]` is the limit of
/// `approach[..., k]` as the final variable k grows, with `chain` the edge
/// family linking consecutive approach vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitDecl {
    pub family: String,
    pub vars: Vec<VarSpec>,
    pub guard: Guard,
    pub approach_family: String,
    /// Index maps over `vars` plus the approach variable at slot `vars.len()`.
    pub approach_idx: Vec<IndexMap>,
    pub approach_var: String,
    pub chain_family: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DendriteDoc {
    pub name: String,
    pub metric: MetricMode,
    pub default_depth: u32,
    pub vertices: Vec<VertexClause>,
    pub edges: Vec<EdgeClause>,
    pub segments: Vec<SegmentDecl>,
    pub limits: Vec<LimitDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointExpr {
    Vertex(VRef),
    EdgeParam { family: String, idx: Vec<IndexMap>, t: Expr },
    SegParam { segment: String, t: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleTarget {
    Edge(String),
    Segment(String),
}

/// Piecewise rule for one edge family or segment. `pieces` pairs each
/// breakpoint (0 = first, 1 = last, strictly increasing) with its image
/// point; consecutive image points bound the image arc of that piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleClause {
    pub target: RuleTarget,
    pub guard: Guard,
    pub pieces: Vec<(Expr, PointExpr)>,
}

/// Vertex-level assignment, e.g. for isolated limit vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixClause {
    pub family: String,
    pub vars: Vec<VarSpec>,
    pub guard: Guard,
    pub image: PointExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDoc {
    pub name: String,
    pub dendrite: String,
    pub fixes: Vec<FixClause>,
    pub rules: Vec<RuleClause>,
}

/// A dendrite presentation document together with an optional self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDoc {
    pub dendrite: DendriteDoc,
    pub map: Option<MapDoc>,
}
