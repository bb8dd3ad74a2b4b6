//! Coordinate expressions, index predicates, and index maps.
//!
//! Coordinate expressions are rational-closed: the four arithmetic
//! operations, powers with integer exponents (any rational base when the
//! exponent is a non-negative literal, and literal bases with arbitrary
//! integer-valued exponents, e.g. `2^(-k)` or `(-1)^n`), and the integer
//! builtin `log2` (floor). Index predicates are conjunctions of linear
//! comparisons and congruences; linear terms may include `2^var` pieces.

use crate::error::{CoreError, Result};
use crate::num::{fmt_q, q_pow, qi, Q};
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Q),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Log2(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(qi(n))
    }

    pub fn eval(&self, env: &[i64]) -> Result<Q> {
        match self {
            Expr::Const(c) => Ok(c.clone()),
            Expr::Var(i) => env
                .get(*i)
                .map(|v| qi(*v))
                .ok_or_else(|| CoreError::Expr(format!("variable #{i} unbound"))),
            Expr::Neg(e) => Ok(-e.eval(env)?),
            Expr::Add(a, b) => Ok(a.eval(env)? + b.eval(env)?),
            Expr::Sub(a, b) => Ok(a.eval(env)? - b.eval(env)?),
            Expr::Mul(a, b) => Ok(a.eval(env)? * b.eval(env)?),
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(CoreError::Expr("division by zero".into()));
                }
                Ok(a.eval(env)? / d)
            }
            Expr::Pow(b, e) => {
                let base = b.eval(env)?;
                let exp = e.eval_int(env)?;
                q_pow(&base, exp).ok_or_else(|| CoreError::Expr("0 raised to a negative power".into()))
            }
            Expr::Log2(a) => {
                let v = a.eval_int(env)?;
                if v < 1 {
                    return Err(CoreError::Expr(format!("log2 of non-positive value {v}")));
                }
                Ok(qi(63 - (v as u64).leading_zeros() as i64))
            }
        }
    }

    /// Evaluates and requires an integer result within i64 range.
    pub fn eval_int(&self, env: &[i64]) -> Result<i64> {
        let v = self.eval(env)?;
        if !v.is_integer() {
            return Err(CoreError::Expr(format!("expected integer, got {}", fmt_q(&v))));
        }
        v.numer()
            .to_i64()
            .ok_or_else(|| CoreError::Expr("integer out of range".into()))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(..) | Expr::Var(..) | Expr::Log2(..) => 5,
        }
    }

    /// Precedence-aware rendering; reparses to the same tree.
    pub fn render(&self, vars: &[String]) -> String {
        fn child(e: &Expr, vars: &[String], parent: u8, right_assoc_slot: bool) -> String {
            let p = e.prec();
            let need = p < parent || (p == parent && right_assoc_slot);
            // negative constants need parens inside any operator context
            let neg_const = matches!(e, Expr::Const(c) if c.is_negative()) && parent > 0;
            if need || neg_const {
                format!("({})", e.render(vars))
            } else {
                e.render(vars)
            }
        }
        match self {
            Expr::Const(c) => fmt_q(c),
            Expr::Var(i) => vars.get(*i).cloned().unwrap_or_else(|| format!("?{i}")),
            Expr::Neg(e) => format!("-{}", child(e, vars, 3, true)),
            Expr::Add(a, b) => format!("{} + {}", child(a, vars, 1, false), child(b, vars, 1, true)),
            Expr::Sub(a, b) => format!("{} - {}", child(a, vars, 1, false), child(b, vars, 1, true)),
            Expr::Mul(a, b) => format!("{} * {}", child(a, vars, 2, false), child(b, vars, 2, true)),
            Expr::Div(a, b) => format!("{} / {}", child(a, vars, 2, false), child(b, vars, 2, true)),
            Expr::Pow(a, b) => format!("{}^{}", child(a, vars, 4, true), child(b, vars, 4, false)),
            Expr::Log2(a) => format!("log2({})", a.render(vars)),
        }
    }
}

/// Linear index term: `c + Σ aᵢ·varᵢ + Σ bⱼ·2^varⱼ`, evaluated in i128.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lin {
    pub c: i64,
    pub terms: Vec<(i64, usize)>,
    pub pow2: Vec<(i64, usize)>,
}

impl Lin {
    pub fn constant(c: i64) -> Lin {
        Lin { c, terms: vec![], pow2: vec![] }
    }

    pub fn var(v: usize) -> Lin {
        Lin { c: 0, terms: vec![(1, v)], pow2: vec![] }
    }

    pub fn eval(&self, env: &[i64]) -> Result<i128> {
        let mut acc: i128 = self.c as i128;
        for (a, v) in &self.terms {
            let val = *env
                .get(*v)
                .ok_or_else(|| CoreError::Expr(format!("variable #{v} unbound")))? as i128;
            acc += (*a as i128) * val;
        }
        for (a, v) in &self.pow2 {
            let val = *env
                .get(*v)
                .ok_or_else(|| CoreError::Expr(format!("variable #{v} unbound")))?;
            if !(0..=100).contains(&val) {
                return Err(CoreError::Expr(format!("2^{val} out of supported range")));
            }
            acc += (*a as i128) << val;
        }
        Ok(acc)
    }

    pub fn render(&self, vars: &[String]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (a, v) in &self.terms {
            let name = vars.get(*v).cloned().unwrap_or_else(|| format!("?{v}"));
            parts.push(match a {
                1 => name,
                -1 => format!("-{name}"),
                _ => format!("{a}*{name}"),
            });
        }
        for (a, v) in &self.pow2 {
            let name = vars.get(*v).cloned().unwrap_or_else(|| format!("?{v}"));
            parts.push(match a {
                1 => format!("2^{name}"),
                -1 => format!("-2^{name}"),
                _ => format!("{a}*2^{name}"),
            });
        }
        if self.c != 0 || parts.is_empty() {
            parts.push(self.c.to_string());
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Cmp { lhs: Lin, op: CmpOp, rhs: Lin },
    /// `lhs % modulus == residue`
    ModEq { lhs: Lin, modulus: i64, residue: i64 },
}

/// Conjunction of atoms; empty means `true`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Guard {
    pub atoms: Vec<Atom>,
}

impl Guard {
    pub const TRUE: Guard = Guard { atoms: Vec::new() };

    pub fn eval(&self, env: &[i64]) -> Result<bool> {
        for a in &self.atoms {
            match a {
                Atom::Cmp { lhs, op, rhs } => {
                    let l = lhs.eval(env)?;
                    let r = rhs.eval(env)?;
                    let ok = match op {
                        CmpOp::Eq => l == r,
                        CmpOp::Ne => l != r,
                        CmpOp::Le => l <= r,
                        CmpOp::Ge => l >= r,
                        CmpOp::Lt => l < r,
                        CmpOp::Gt => l > r,
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
                Atom::ModEq { lhs, modulus, residue } => {
                    if *modulus <= 0 {
                        return Err(CoreError::Expr("non-positive modulus".into()));
                    }
                    let l = lhs.eval(env)?;
                    if l.rem_euclid(*modulus as i128) != *residue as i128 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn render(&self, vars: &[String]) -> String {
        self.atoms
            .iter()
            .map(|a| match a {
                Atom::Cmp { lhs, op, rhs } => {
                    format!("{} {} {}", lhs.render(vars), op, rhs.render(vars))
                }
                Atom::ModEq { lhs, modulus, residue } => {
                    format!("{} % {} == {}", lhs.render(vars), modulus, residue)
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Index slot of an edge-endpoint or rule-image reference: `coeff·var + offset`
/// (or a constant when `var` is absent). Kept linear so incidence can be
/// solved exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    pub coeff: i64,
    pub var: Option<usize>,
    pub offset: i64,
}

impl IndexMap {
    pub fn constant(c: i64) -> IndexMap {
        IndexMap { coeff: 0, var: None, offset: c }
    }

    pub fn var(v: usize) -> IndexMap {
        IndexMap { coeff: 1, var: Some(v), offset: 0 }
    }

    pub fn shifted(v: usize, offset: i64) -> IndexMap {
        IndexMap { coeff: 1, var: Some(v), offset }
    }

    pub fn eval(&self, env: &[i64]) -> Result<i64> {
        match self.var {
            None => Ok(self.offset),
            Some(v) => {
                let val = *env
                    .get(v)
                    .ok_or_else(|| CoreError::Expr(format!("variable #{v} unbound")))?;
                Ok(self.coeff * val + self.offset)
            }
        }
    }

    /// Solves `coeff·var + offset == value` for var; `Ok(None)` for a
    /// constant slot that matches.
    pub fn solve(&self, value: i64) -> Option<Option<(usize, i64)>> {
        match self.var {
            None => {
                if self.offset == value {
                    Some(None)
                } else {
                    None
                }
            }
            Some(v) => {
                let num = value - self.offset;
                if self.coeff == 0 || num % self.coeff != 0 {
                    return None;
                }
                Some(Some((v, num / self.coeff)))
            }
        }
    }

    pub fn render(&self, vars: &[String]) -> String {
        match self.var {
            None => self.offset.to_string(),
            Some(v) => {
                let name = vars.get(v).cloned().unwrap_or_else(|| format!("?{v}"));
                let head = if self.coeff == 1 {
                    name
                } else {
                    format!("{}*{}", self.coeff, name)
                };
                match self.offset.cmp(&0) {
                    std::cmp::Ordering::Equal => head,
                    std::cmp::Ordering::Greater => format!("{} + {}", head, self.offset),
                    std::cmp::Ordering::Less => format!("{} - {}", head, -self.offset),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn eval_alternating_sign_and_geometric() {
        // (-1)^n * (1 + 1/2^k) / (2*(n+1))
        let e = Expr::Div(
            Box::new(Expr::Mul(
                Box::new(Expr::Pow(Box::new(Expr::int(-1)), Box::new(Expr::Var(0)))),
                Box::new(Expr::Add(
                    Box::new(Expr::int(1)),
                    Box::new(Expr::Div(
                        Box::new(Expr::int(1)),
                        Box::new(Expr::Pow(Box::new(Expr::int(2)), Box::new(Expr::Var(1)))),
                    )),
                )),
            )),
            Box::new(Expr::Mul(
                Box::new(Expr::int(2)),
                Box::new(Expr::Add(Box::new(Expr::Var(0)), Box::new(Expr::int(1)))),
            )),
        );
        assert_eq!(e.eval(&[0, 0]).unwrap(), q(1, 1));
        assert_eq!(e.eval(&[1, 1]).unwrap(), q(-3, 8));
    }

    #[test]
    fn log2_floor() {
        let e = Expr::Log2(Box::new(Expr::Var(0)));
        assert_eq!(e.eval_int(&[1]).unwrap(), 0);
        assert_eq!(e.eval_int(&[2]).unwrap(), 1);
        assert_eq!(e.eval_int(&[7]).unwrap(), 2);
        assert_eq!(e.eval_int(&[8]).unwrap(), 3);
        assert!(e.eval(&[0]).is_err());
    }

    #[test]
    fn guard_congruence_and_pow2_bound() {
        let vars = vec!["l".to_string(), "p".to_string()];
        let g = Guard {
            atoms: vec![
                Atom::ModEq { lhs: Lin::var(0), modulus: 2, residue: 0 },
                Atom::Cmp {
                    lhs: Lin::var(1),
                    op: CmpOp::Le,
                    rhs: Lin { c: -1, terms: vec![], pow2: vec![(1, 0)] },
                },
            ],
        };
        assert!(g.eval(&[2, 3]).unwrap());
        assert!(!g.eval(&[2, 4]).unwrap());
        assert!(!g.eval(&[1, 0]).unwrap());
        assert_eq!(g.render(&vars), "l % 2 == 0, p <= 2^l - 1");
    }

    #[test]
    fn index_map_solving() {
        let m = IndexMap { coeff: 2, var: Some(0), offset: 0 };
        assert_eq!(m.solve(6), Some(Some((0, 3))));
        assert_eq!(m.solve(5), None);
        let c = IndexMap::constant(4);
        assert_eq!(c.solve(4), Some(None));
        assert_eq!(c.solve(3), None);
    }
}
