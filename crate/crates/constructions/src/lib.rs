//! Built-in dendrite/map systems.
//!
//! `example1`: a comb over [0,1] with branches alternating above and below
//! the spine, whose endpoint set is closed and accumulates only at the
//! spine limit; the map shifts branches outward while folding branch tips
//! deeper, producing an orbit whose closure adds the branch midpoints.
//!
//! `example2`: a vertical tooth over every dyadic rational of [0,1],
//! enumerated level by level in alternating order so that consecutive
//! teeth converge; the spine is pointwise fixed and each tooth maps half
//! onto the spine gap and half onto the next tooth.
//!
//! `example4`: shrinking copies of a comb template attached along a
//! diagonal arc accumulating at the origin; tooth tips ride diagonally
//! between copies forever while every other point falls onto a fixed end.
//!
//! `gehman(d)`: the depth-d stem+binary tree whose leaves approximate a
//! Cantor endpoint set.
//!
//! `tent` and `stunted_tent(h)`: interval oracles on a single edge.

pub mod exprs;
pub mod stunted;

use dendrodyn_core::doc::{
    AttachClause, DendriteDoc, EdgeClause, FixClause, LimitDecl, MapDoc, MetricMode, PointExpr,
    RuleClause, RuleTarget, SegmentDecl, SystemDoc, VarSpec, VertexClause, VRef,
};
use dendrodyn_core::expr::{Atom, CmpOp, Expr, Guard, IndexMap, Lin};
use dendrodyn_core::num::{q, qi, Q};
use exprs::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionId {
    Example1,
    Example2,
    Example4,
    Gehman { depth: u32 },
    Tent,
    StuntedTent { h: Q },
}

impl ConstructionId {
    /// Parses `example1`, `gehman` / `gehman:6`, `tent`,
    /// `stunted_tent:4/5` / `stunted_tent:p8` (cascade parameter).
    pub fn parse(s: &str) -> Option<ConstructionId> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        match name {
            "example1" => Some(ConstructionId::Example1),
            "example2" => Some(ConstructionId::Example2),
            "example4" => Some(ConstructionId::Example4),
            "gehman" => {
                let depth = match arg {
                    Some(a) => a.parse().ok()?,
                    None => 5,
                };
                Some(ConstructionId::Gehman { depth })
            }
            "tent" => Some(ConstructionId::Tent),
            "stunted_tent" => {
                let h = match arg? {
                    "p2" => stunted::cascade_parameter(1),
                    "p4" => stunted::cascade_parameter(2),
                    "p8" => stunted::cascade_parameter(3),
                    other => dendrodyn_core::num::parse_q(other)?,
                };
                Some(ConstructionId::StuntedTent { h })
            }
            _ => None,
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["example1", "example2", "example4", "gehman[:depth]", "tent", "stunted_tent:<h|p2|p4|p8>"]
    }
}

/// Builds the presentation document (and map, when the system has one).
pub fn build(id: &ConstructionId) -> SystemDoc {
    match id {
        ConstructionId::Example1 => example1(),
        ConstructionId::Example2 => example2(),
        ConstructionId::Example4 => example4(),
        ConstructionId::Gehman { depth } => gehman(*depth),
        ConstructionId::Tent => tent(),
        ConstructionId::StuntedTent { h } => stunted_tent(h.clone()),
    }
}

fn guard(atoms: Vec<Atom>) -> Guard {
    Guard { atoms }
}

fn ge(var: usize, c0: i64) -> Atom {
    Atom::Cmp { lhs: Lin::var(var), op: CmpOp::Ge, rhs: Lin::constant(c0) }
}

fn eq_c(var: usize, c0: i64) -> Atom {
    Atom::Cmp { lhs: Lin::var(var), op: CmpOp::Eq, rhs: Lin::constant(c0) }
}

fn le_atom(lhs: Lin, rhs: Lin) -> Atom {
    Atom::Cmp { lhs, op: CmpOp::Le, rhs }
}

fn parity(var: usize, residue: i64) -> Atom {
    Atom::ModEq { lhs: Lin::var(var), modulus: 2, residue }
}

fn vref(family: &str, idx: Vec<IndexMap>) -> VRef {
    VRef::plain(family, idx)
}

fn pv(family: &str, idx: Vec<IndexMap>) -> PointExpr {
    PointExpr::Vertex(vref(family, idx))
}

fn im(var: usize, off: i64) -> IndexMap {
    IndexMap::shifted(var, off)
}

fn imc(c0: i64) -> IndexMap {
    IndexMap::constant(c0)
}

fn rule(family: &str, g: Guard, pieces: Vec<(Expr, PointExpr)>) -> RuleClause {
    RuleClause { target: RuleTarget::Edge(family.to_string()), guard: g, pieces }
}

fn affine_rule(family: &str, g: Guard, p0: PointExpr, p1: PointExpr) -> RuleClause {
    rule(family, g, vec![(c(0), p0), (c(1), p1)])
}

fn const_rule(family: &str, g: Guard, p: PointExpr) -> RuleClause {
    let p1 = p.clone();
    rule(family, g, vec![(c(0), p), (c(1), p1)])
}

// ---------------------------------------------------------------------------

fn example1() -> SystemDoc {
    // a_n = (1 - 1/(n+1), 0)
    let ax = sub(c(1), div(c(1), add(v(0), c(1))));
    // w_n = (same x, (-1)^n / (2(n+1)))  — branch midpoint
    let wy = div(alt(v(0)), mul(c(2), add(v(0), c(1))));
    // b_n^k at parameter 1 - 2^{-k} from the tip toward the midpoint:
    // y = (-1)^n (1 + 2^{-k}) / (2(n+1))
    let by = div(
        mul(alt(v(0)), add(c(1), div(c(1), pw2(v(1))))),
        mul(c(2), add(v(0), c(1))),
    );
    let dendrite = DendriteDoc {
        name: "example1".into(),
        metric: MetricMode::PathLength,
        default_depth: 12,
        vertices: vec![
            VertexClause {
                family: "a".into(),
                vars: vec![VarSpec::free("n")],
                guard: Guard::TRUE,
                coords: (ax.clone(), c(0)),
            },
            VertexClause {
                family: "w".into(),
                vars: vec![VarSpec::free("n")],
                guard: Guard::TRUE,
                coords: (ax.clone(), wy),
            },
            VertexClause {
                family: "b".into(),
                vars: vec![VarSpec::free("n"), VarSpec::free("k")],
                guard: Guard::TRUE,
                coords: (ax, by),
            },
            VertexClause {
                family: "e".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (c(1), c(0)),
            },
        ],
        edges: vec![
            EdgeClause {
                family: "spine".into(),
                vars: vec![VarSpec::free("n")],
                guard: Guard::TRUE,
                from: vref("a", vec![im(0, 0)]),
                to: vref("a", vec![im(0, 1)]),
            },
            EdgeClause {
                family: "trunk".into(),
                vars: vec![VarSpec::free("n")],
                guard: Guard::TRUE,
                from: vref("a", vec![im(0, 0)]),
                to: vref("w", vec![im(0, 0)]),
            },
            EdgeClause {
                family: "rung".into(),
                vars: vec![VarSpec::free("n"), VarSpec::free("k")],
                guard: Guard::TRUE,
                from: vref("b", vec![im(0, 0), im(1, 0)]),
                to: vref("b", vec![im(0, 0), im(1, 1)]),
            },
        ],
        segments: vec![],
        limits: vec![
            LimitDecl {
                family: "e".into(),
                vars: vec![],
                guard: Guard::TRUE,
                approach_family: "a".into(),
                approach_idx: vec![IndexMap::var(0)],
                approach_var: "n".into(),
                chain_family: "spine".into(),
            },
            LimitDecl {
                family: "w".into(),
                vars: vec![VarSpec::free("n")],
                guard: Guard::TRUE,
                approach_family: "b".into(),
                approach_idx: vec![IndexMap::var(0), IndexMap::var(1)],
                approach_var: "k".into(),
                chain_family: "rung".into(),
            },
        ],
    };
    // Branch rungs: index 0 shifts up two with the tip parameter rising,
    // even branches fall back two with the parameter rising, odd branches
    // climb two with the parameter falling (the tip itself steps outward).
    let map = MapDoc {
        name: "f".into(),
        dendrite: "example1".into(),
        fixes: vec![FixClause {
            family: "e".into(),
            vars: vec![],
            guard: Guard::TRUE,
            image: pv("e", vec![]),
        }],
        rules: vec![
            affine_rule(
                "spine",
                Guard::TRUE,
                pv("a", vec![im(0, 1)]),
                pv("a", vec![im(0, 2)]),
            ),
            affine_rule(
                "trunk",
                guard(vec![eq_c(0, 0)]),
                pv("a", vec![imc(1)]),
                pv("w", vec![imc(1)]),
            ),
            affine_rule(
                "trunk",
                guard(vec![parity(0, 1)]),
                pv("a", vec![im(0, 1)]),
                pv("w", vec![im(0, 2)]),
            ),
            affine_rule(
                "trunk",
                guard(vec![parity(0, 0), ge(0, 2)]),
                pv("a", vec![im(0, 1)]),
                pv("w", vec![im(0, -2)]),
            ),
            affine_rule(
                "rung",
                guard(vec![eq_c(0, 0)]),
                pv("b", vec![imc(1), im(1, 0)]),
                pv("b", vec![imc(1), im(1, 1)]),
            ),
            affine_rule(
                "rung",
                guard(vec![parity(0, 0), ge(0, 2)]),
                pv("b", vec![im(0, -2), im(1, 1)]),
                pv("b", vec![im(0, -2), im(1, 2)]),
            ),
            affine_rule(
                "rung",
                guard(vec![parity(0, 1), eq_c(1, 0)]),
                pv("b", vec![im(0, 1), imc(0)]),
                pv("b", vec![im(0, 2), imc(0)]),
            ),
            affine_rule(
                "rung",
                guard(vec![parity(0, 1), ge(1, 1)]),
                pv("b", vec![im(0, 2), im(1, -1)]),
                pv("b", vec![im(0, 2), im(1, 0)]),
            ),
        ],
    };
    SystemDoc { dendrite, map: Some(map) }
}

// ---------------------------------------------------------------------------

fn example2() -> SystemDoc {
    // Tooth foot position over index k >= 1: level m = floor(log2 k),
    // offset j = k - 2^m; odd levels (m even) run right-to-left, even
    // levels left-to-right, so consecutive feet converge.
    let m = log2(v(0));
    let j = sub(v(0), pw2(m.clone()));
    let p = alt(m.clone());
    let pow_next = pw2(add(m.clone(), c(1)));
    let desc = sub(sub(pow_next.clone(), c(1)), mul(c(2), j.clone()));
    let asc = add(mul(c(2), j), c(1));
    let footpos = div(
        add(
            mul(div(add(c(1), p.clone()), c(2)), desc),
            mul(div(sub(c(1), p), c(2)), asc),
        ),
        pow_next,
    );
    // tooth height: 1/(level) with level = floor(log2 k) + 1
    let height = div(c(1), add(log2(v(0)), c(1)));

    let dendrite = DendriteDoc {
        name: "example2".into(),
        metric: MetricMode::PathLength,
        default_depth: 12,
        vertices: vec![
            VertexClause {
                family: "A".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (c(0), c(0)),
            },
            VertexClause {
                family: "B".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (c(1), c(0)),
            },
            VertexClause {
                family: "T".into(),
                vars: vec![VarSpec::free("k")],
                guard: guard(vec![eq_c(0, 0)]),
                coords: (c(1), c(1)),
            },
            VertexClause {
                family: "T".into(),
                vars: vec![VarSpec::free("k")],
                guard: guard(vec![ge(0, 1)]),
                coords: (footpos.clone(), height),
            },
        ],
        edges: vec![
            EdgeClause {
                family: "tooth0".into(),
                vars: vec![],
                guard: Guard::TRUE,
                from: vref("B", vec![]),
                to: vref("T", vec![imc(0)]),
            },
            EdgeClause {
                family: "tooth".into(),
                vars: vec![VarSpec::free("k")],
                guard: guard(vec![ge(0, 1)]),
                from: vref("F", vec![im(0, 0)]),
                to: vref("T", vec![im(0, 0)]),
            },
        ],
        segments: vec![SegmentDecl {
            name: "spine".into(),
            from: vref("A", vec![]),
            to: vref("B", vec![]),
            attaches: vec![AttachClause {
                family: "F".into(),
                var: VarSpec::free("k"),
                guard: guard(vec![ge(0, 1)]),
                pos: footpos,
            }],
        }],
        limits: vec![],
    };
    let map = MapDoc {
        name: "f".into(),
        dendrite: "example2".into(),
        fixes: vec![],
        rules: vec![
            RuleClause {
                target: RuleTarget::Segment("spine".into()),
                guard: Guard::TRUE,
                pieces: vec![(c(0), pv("A", vec![])), (c(1), pv("B", vec![]))],
            },
            rule(
                "tooth0",
                Guard::TRUE,
                vec![
                    (c(0), pv("B", vec![])),
                    (div(c(1), c(2)), pv("F", vec![imc(1)])),
                    (c(1), pv("T", vec![imc(1)])),
                ],
            ),
            rule(
                "tooth",
                Guard::TRUE,
                vec![
                    (c(0), pv("F", vec![im(0, 0)])),
                    (div(c(1), c(2)), pv("F", vec![im(0, 1)])),
                    (c(1), pv("T", vec![im(0, 1)])),
                ],
            ),
        ],
    };
    SystemDoc { dendrite, map: Some(map) }
}

// ---------------------------------------------------------------------------

fn example4() -> SystemDoc {
    // copy n sits at b_n = (2^-n, -2^(1-n)) on the diagonal arc toward the
    // origin, scaled by 2^(-n-2); families are indexed [copy, tooth]
    let bx = pw2(neg(v(0)));
    let by = neg(pw2(sub(c(1), v(0))));
    let scale = |e: Expr| pw2(sub(neg(e), c(2)));
    // c_(n,k) = b_n + scale_n * (2 - 1/k, 0)
    let cx = add(
        pw2(neg(v(0))),
        mul(scale(v(0)), sub(c(2), div(c(1), v(1)))),
    );
    let cy = neg(pw2(sub(c(1), v(0))));
    // tip_(n,k) = c_(n,k) + (0, scale_n / k)
    let ty = add(neg(pw2(sub(c(1), v(0)))), div(scale(v(0)), v(1)));
    // baseline right end of copy n
    let ax = add(pw2(neg(v(0))), mul(c(2), scale(v(0))));
    let ay = neg(pw2(sub(c(1), v(0))));

    let dendrite = DendriteDoc {
        name: "example4".into(),
        metric: MetricMode::PathLength,
        default_depth: 12,
        vertices: vec![
            VertexClause {
                family: "a0".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (c(0), c(0)),
            },
            VertexClause {
                family: "b".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![ge(0, 1)]),
                coords: (bx, by),
            },
            VertexClause {
                family: "c".into(),
                vars: vec![VarSpec::free("n"), VarSpec::free("k")],
                guard: guard(vec![ge(0, 1), ge(1, 1)]),
                coords: (cx, cy),
            },
            VertexClause {
                family: "a".into(),
                vars: vec![VarSpec::free("n"), VarSpec::free("k")],
                guard: guard(vec![ge(0, 1), ge(1, 1)]),
                coords: (
                    add(
                        pw2(neg(v(0))),
                        mul(scale(v(0)), sub(c(2), div(c(1), v(1)))),
                    ),
                    ty,
                ),
            },
            VertexClause {
                family: "alim".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![ge(0, 1)]),
                coords: (ax, ay),
            },
        ],
        edges: vec![
            EdgeClause {
                family: "ichain".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![ge(0, 1)]),
                from: vref("b", vec![im(0, 0)]),
                to: vref("b", vec![im(0, 1)]),
            },
            EdgeClause {
                family: "bhead".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![ge(0, 1)]),
                from: vref("b", vec![im(0, 0)]),
                to: vref("c", vec![im(0, 0), imc(1)]),
            },
            EdgeClause {
                family: "base".into(),
                vars: vec![VarSpec::free("n"), VarSpec::free("k")],
                guard: guard(vec![ge(0, 1), ge(1, 1)]),
                from: vref("c", vec![im(0, 0), im(1, 0)]),
                to: vref("c", vec![im(0, 0), im(1, 1)]),
            },
            EdgeClause {
                family: "tooth".into(),
                vars: vec![VarSpec::free("n"), VarSpec::free("k")],
                guard: guard(vec![ge(0, 1), ge(1, 1)]),
                from: vref("c", vec![im(0, 0), im(1, 0)]),
                to: vref("a", vec![im(0, 0), im(1, 0)]),
            },
        ],
        segments: vec![],
        limits: vec![
            LimitDecl {
                family: "a0".into(),
                vars: vec![],
                guard: Guard::TRUE,
                approach_family: "b".into(),
                approach_idx: vec![IndexMap::var(0)],
                approach_var: "n".into(),
                chain_family: "ichain".into(),
            },
            LimitDecl {
                family: "alim".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![ge(0, 1)]),
                approach_family: "c".into(),
                approach_idx: vec![IndexMap::var(0), IndexMap::var(1)],
                approach_var: "k".into(),
                chain_family: "base".into(),
            },
        ],
    };
    let map = MapDoc {
        name: "f".into(),
        dendrite: "example4".into(),
        fixes: vec![
            FixClause {
                family: "a0".into(),
                vars: vec![],
                guard: Guard::TRUE,
                image: pv("a0", vec![]),
            },
            FixClause {
                family: "alim".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![eq_c(0, 1)]),
                image: pv("a0", vec![]),
            },
            FixClause {
                family: "alim".into(),
                vars: vec![VarSpec::free("n")],
                guard: guard(vec![ge(0, 2)]),
                image: pv("alim", vec![im(0, -1)]),
            },
        ],
        rules: vec![
            const_rule("ichain", guard(vec![eq_c(0, 1)]), pv("b", vec![imc(1)])),
            affine_rule(
                "ichain",
                guard(vec![ge(0, 2)]),
                pv("b", vec![im(0, -1)]),
                pv("b", vec![im(0, 0)]),
            ),
            const_rule("bhead", guard(vec![eq_c(0, 1)]), pv("b", vec![imc(1)])),
            affine_rule(
                "bhead",
                guard(vec![ge(0, 2)]),
                pv("b", vec![im(0, -1)]),
                pv("c", vec![im(0, -1), imc(2)]),
            ),
            affine_rule(
                "base",
                guard(vec![ge(0, 2)]),
                pv("c", vec![im(0, -1), im(1, 1)]),
                pv("c", vec![im(0, -1), im(1, 2)]),
            ),
            affine_rule(
                "base",
                guard(vec![eq_c(0, 1)]),
                pv("b", vec![im(1, 0)]),
                pv("b", vec![im(1, 1)]),
            ),
            affine_rule(
                "tooth",
                guard(vec![ge(0, 2)]),
                pv("c", vec![im(0, -1), im(1, 1)]),
                pv("a", vec![im(0, -1), im(1, 1)]),
            ),
            affine_rule(
                "tooth",
                guard(vec![eq_c(0, 1)]),
                pv("b", vec![im(1, 0)]),
                pv("a", vec![im(1, 1), imc(1)]),
            ),
        ],
    };
    SystemDoc { dendrite, map: Some(map) }
}

// ---------------------------------------------------------------------------

fn gehman(depth: u32) -> SystemDoc {
    let d = depth as i64;
    // node (l,p): x = (2p+1)/2^(l+1), y = 1 - 2^(-l)
    let nx = div(add(mul(c(2), v(1)), c(1)), pw2(add(v(0), c(1))));
    let ny = sub(c(1), pw2(neg(v(0))));
    let p_bound = Lin { c: -1, terms: vec![], pow2: vec![(1, 0)] };
    let level_ok = |max_l: i64| le_atom(Lin::var(0), Lin::constant(max_l));
    let p_ok = le_atom(Lin::var(1), p_bound.clone());
    let dendrite = DendriteDoc {
        name: format!("gehman{depth}"),
        metric: MetricMode::PathLength,
        default_depth: depth,
        vertices: vec![
            VertexClause {
                family: "r".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (div(c(1), c(2)), neg(div(c(1), c(2)))),
            },
            VertexClause {
                family: "g".into(),
                vars: vec![VarSpec::free("l"), VarSpec { name: "p".into(), bound: Some(p_bound.clone()) }],
                guard: guard(vec![level_ok(d), p_ok.clone()]),
                coords: (nx, ny),
            },
        ],
        edges: vec![
            EdgeClause {
                family: "stem".into(),
                vars: vec![],
                guard: Guard::TRUE,
                from: vref("r", vec![]),
                to: vref("g", vec![imc(0), imc(0)]),
            },
            EdgeClause {
                family: "left".into(),
                vars: vec![VarSpec::free("l"), VarSpec { name: "p".into(), bound: Some(p_bound.clone()) }],
                guard: guard(vec![level_ok(d - 1), p_ok.clone()]),
                from: vref("g", vec![im(0, 0), im(1, 0)]),
                to: vref("g", vec![im(0, 1), IndexMap { coeff: 2, var: Some(1), offset: 0 }]),
            },
            EdgeClause {
                family: "right".into(),
                vars: vec![VarSpec::free("l"), VarSpec { name: "p".into(), bound: Some(p_bound) }],
                guard: guard(vec![level_ok(d - 1), p_ok]),
                from: vref("g", vec![im(0, 0), im(1, 0)]),
                to: vref("g", vec![im(0, 1), IndexMap { coeff: 2, var: Some(1), offset: 1 }]),
            },
        ],
        segments: vec![],
        limits: vec![],
    };
    SystemDoc { dendrite, map: None }
}

// ---------------------------------------------------------------------------

fn unit_interval(name: &str) -> DendriteDoc {
    DendriteDoc {
        name: name.into(),
        metric: MetricMode::PathLength,
        default_depth: 4,
        vertices: vec![
            VertexClause {
                family: "p0".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (c(0), c(0)),
            },
            VertexClause {
                family: "p1".into(),
                vars: vec![],
                guard: Guard::TRUE,
                coords: (c(1), c(0)),
            },
        ],
        edges: vec![EdgeClause {
            family: "unit".into(),
            vars: vec![],
            guard: Guard::TRUE,
            from: vref("p0", vec![]),
            to: vref("p1", vec![]),
        }],
        segments: vec![],
        limits: vec![],
    }
}

fn tent() -> SystemDoc {
    let dendrite = unit_interval("tent");
    let map = MapDoc {
        name: "f".into(),
        dendrite: "tent".into(),
        fixes: vec![],
        rules: vec![rule(
            "unit",
            Guard::TRUE,
            vec![
                (c(0), pv("p0", vec![])),
                (div(c(1), c(2)), pv("p1", vec![])),
                (c(1), pv("p0", vec![])),
            ],
        )],
    };
    SystemDoc { dendrite, map: Some(map) }
}

fn stunted_tent(h: Q) -> SystemDoc {
    use num_traits::One;
    if h.is_one() {
        let mut sys = tent();
        sys.dendrite.name = "stunted_tent".into();
        if let Some(m) = &mut sys.map {
            m.dendrite = "stunted_tent".into();
        }
        return sys;
    }
    assert!(h > q(0, 1) && h < qi(1), "stunted tent parameter must be in (0, 1]");
    let dendrite = unit_interval("stunted_tent");
    let plateau = PointExpr::EdgeParam {
        family: "unit".into(),
        idx: vec![],
        t: cq(h.clone()),
    };
    let half = q(1, 2);
    let map = MapDoc {
        name: "f".into(),
        dendrite: "stunted_tent".into(),
        fixes: vec![],
        rules: vec![rule(
            "unit",
            Guard::TRUE,
            vec![
                (c(0), pv("p0", vec![])),
                (cq(&h * &half), plateau.clone()),
                (cq(qi(1) - &h * &half), plateau),
                (c(1), pv("p0", vec![])),
            ],
        )],
    };
    SystemDoc { dendrite, map: Some(map) }
}
