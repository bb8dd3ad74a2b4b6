//! Small builders for coordinate expressions.

use dendrodyn_core::expr::Expr;
use dendrodyn_core::num::Q;

pub fn c(n: i64) -> Expr {
    Expr::int(n)
}

pub fn cq(v: Q) -> Expr {
    Expr::Const(v)
}

pub fn v(i: usize) -> Expr {
    Expr::Var(i)
}

pub fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    Expr::Sub(Box::new(a), Box::new(b))
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}

pub fn div(a: Expr, b: Expr) -> Expr {
    Expr::Div(Box::new(a), Box::new(b))
}

pub fn neg(a: Expr) -> Expr {
    Expr::Neg(Box::new(a))
}

pub fn pow(a: Expr, b: Expr) -> Expr {
    Expr::Pow(Box::new(a), Box::new(b))
}

pub fn log2(a: Expr) -> Expr {
    Expr::Log2(Box::new(a))
}

/// (-1)^e
pub fn alt(e: Expr) -> Expr {
    pow(c(-1), e)
}

/// 2^e
pub fn pw2(e: Expr) -> Expr {
    pow(c(2), e)
}
