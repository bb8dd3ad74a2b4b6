//! Independent exact oracles for cross-checking the main crates. Kept
//! deliberately free of any dependency on them: piecewise-linear maps of
//! [0,1] are represented by breakpoint lists and iterated with plain
//! rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A continuous piecewise-linear self-map of [0,1]: breakpoints with
/// values, interpolated linearly in between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pl1 {
    /// Strictly increasing breakpoints from 0 to 1 with their values.
    pub knots: Vec<(Q, Q)>,
}

impl Pl1 {
    pub fn new(knots: Vec<(Q, Q)>) -> Pl1 {
        assert!(knots.len() >= 2);
        assert!(knots.first().unwrap().0.is_zero());
        assert!(knots.last().unwrap().0.is_one());
        for w in knots.windows(2) {
            assert!(w[0].0 < w[1].0, "breakpoints must increase");
        }
        Pl1 { knots }
    }

    pub fn tent() -> Pl1 {
        Pl1::new(vec![(qi(0), qi(0)), (q(1, 2), qi(1)), (qi(1), qi(0))])
    }

    /// min(h, tent(x)) as an explicit breakpoint list.
    pub fn stunted_tent(h: &Q) -> Pl1 {
        assert!(h > &qi(0) && h < &qi(1));
        let half = q(1, 2);
        Pl1::new(vec![
            (qi(0), qi(0)),
            (h * &half, h.clone()),
            (qi(1) - h * &half, h.clone()),
            (qi(1), qi(0)),
        ])
    }

    pub fn eval(&self, x: &Q) -> Q {
        assert!(x >= &qi(0) && x <= &qi(1));
        for w in self.knots.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        self.knots.last().unwrap().1.clone()
    }

    /// Exact composition g ∘ self.
    pub fn then(&self, g: &Pl1) -> Pl1 {
        // refine self's pieces at preimages of g's breakpoints
        let mut xs: Vec<Q> = self.knots.iter().map(|(x, _)| x.clone()).collect();
        for w in self.knots.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if y0 == y1 {
                continue;
            }
            for (bx, _) in &g.knots {
                // solve y0 + (y1-y0) t = bx on [x0, x1]
                let t = (bx - y0) / (y1 - y0);
                if t > qi(0) && t < qi(1) {
                    xs.push(x0 + (x1 - x0) * t);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let knots = xs
            .into_iter()
            .map(|x| {
                let y = g.eval(&self.eval(&x));
                (x, y)
            })
            .collect();
        Pl1::new(knots)
    }

    pub fn iterate(&self, n: u32) -> Pl1 {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.then(self);
        }
        if n == 0 {
            return Pl1::new(vec![(qi(0), qi(0)), (qi(1), qi(1))]);
        }
        acc
    }

    pub fn orbit(&self, x: &Q, n: usize) -> Vec<Q> {
        let mut out = vec![x.clone()];
        for _ in 0..n {
            let next = self.eval(out.last().unwrap());
            out.push(next);
        }
        out
    }

    /// All fixed points of this map: isolated solutions and pointwise-fixed
    /// closed intervals.
    pub fn fixed_points(&self) -> (Vec<Q>, Vec<(Q, Q)>) {
        let mut pts = Vec::new();
        let mut ivs: Vec<(Q, Q)> = Vec::new();
        for w in self.knots.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let s_num = y1 - y0;
            let span = x1 - x0;
            // solve y0 + s_num * (x - x0)/span = x
            if &s_num == &span {
                if y0 == x0 {
                    ivs.push((x0.clone(), x1.clone()));
                }
                continue;
            }
            let x = (y0 * &span - &s_num * x0) / (&span - &s_num);
            if &x >= x0 && &x <= x1 {
                pts.push(x);
            }
        }
        pts.sort();
        pts.dedup();
        // drop points covered by intervals
        pts.retain(|p| !ivs.iter().any(|(a, b)| a <= p && p <= b));
        ivs.sort_by(|a, b| a.0.cmp(&b.0));
        (pts, ivs)
    }

    /// Exact image of an interval.
    pub fn image(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let mut ys = vec![self.eval(lo), self.eval(hi)];
        for (x, y) in &self.knots {
            if x > lo && x < hi {
                ys.push(y.clone());
            }
        }
        ys.sort();
        (ys.first().unwrap().clone(), ys.last().unwrap().clone())
    }

    /// Points of prime period exactly n (via fixed points of the n-th
    /// iterate, filtering shorter periods).
    pub fn prime_periodic(&self, n: u32) -> Vec<Q> {
        let (cands, _) = self.iterate(n).fixed_points();
        cands
            .into_iter()
            .filter(|x| {
                for d in 1..n {
                    if n % d == 0 && self.iterate(d).eval(x) == *x {
                        return false;
                    }
                }
                true
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_fixed_points() {
        let (pts, ivs) = Pl1::tent().fixed_points();
        assert_eq!(pts, vec![qi(0), q(2, 3)]);
        assert!(ivs.is_empty());
    }

    #[test]
    fn tent_period_two() {
        let pts = Pl1::tent().prime_periodic(2);
        assert_eq!(pts, vec![q(2, 5), q(4, 5)]);
    }

    #[test]
    fn tent_image_of_half() {
        let (lo, hi) = Pl1::tent().image(&qi(0), &q(1, 2));
        assert_eq!((lo, hi), (qi(0), qi(1)));
    }

    #[test]
    fn stunted_plateau_cycle() {
        let f = Pl1::stunted_tent(&q(3, 4));
        let o = f.orbit(&q(3, 4), 4);
        assert_eq!(o[1], q(1, 2));
        assert_eq!(o[2], q(3, 4));
    }
}
