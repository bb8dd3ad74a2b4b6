//! Exact rational scalars shared across the workspace.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The scalar type: arbitrary-precision rationals.
pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// 2^k for any integer k; negative k gives the reciprocal.
pub fn pow2(k: i64) -> Q {
    let mag = BigInt::from(1u8) << k.unsigned_abs() as usize;
    if k >= 0 {
        Q::from_integer(mag)
    } else {
        Q::new(BigInt::one(), mag)
    }
}

/// base^e with an integer exponent. Errors on 0^negative.
pub fn q_pow(base: &Q, e: i64) -> Option<Q> {
    if base.is_zero() && e < 0 {
        return None;
    }
    if e == 0 {
        return Some(q_one());
    }
    let mut acc = q_one();
    let mut b = base.clone();
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &b;
        }
        n >>= 1;
        if n > 0 {
            b = &b * &b;
        }
    }
    if e < 0 {
        Some(acc.recip())
    } else {
        Some(acc)
    }
}

pub fn abs_q(x: &Q) -> Q {
    if x.is_negative() {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Taxicab length of the straight segment between two embedded points.
/// Rational whenever the endpoints are; this is the per-edge length used
/// by the intrinsic path metric.
pub fn l1_len(a: &(Q, Q), b: &(Q, Q)) -> Q {
    abs_q(&(&a.0 - &b.0)) + abs_q(&(&a.1 - &b.1))
}

/// Euclidean chord distance between embedded points, for the ambient mode.
pub fn euclid_f64(a: &(Q, Q), b: &(Q, Q)) -> f64 {
    let dx = (&a.0 - &b.0).to_f64().unwrap_or(f64::NAN);
    let dy = (&a.1 - &b.1).to_f64().unwrap_or(f64::NAN);
    (dx * dx + dy * dy).sqrt()
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders as `n` or `n/d`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` (optionally signed).
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), qi(8));
        assert_eq!(pow2(-2), q(1, 4));
        assert_eq!(pow2(0), qi(1));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-4", "7/3", "-1/2"] {
            let v = parse_q(s).unwrap();
            assert_eq!(fmt_q(&v), s);
        }
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn l1_is_rational_on_slanted_segments() {
        let a = (q_zero(), q_zero());
        let b = (q(1, 2), qi(-1));
        assert_eq!(l1_len(&a, &b), q(3, 2));
    }
}
