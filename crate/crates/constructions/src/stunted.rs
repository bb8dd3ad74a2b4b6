//! Period-doubling parameters for the stunted tent family
//! x ↦ min(h, 2x, 2-2x).
//!
//! A plateau cycle of length 2^k visits the plateau exactly once: the
//! plateau value h runs through 2^k - 1 affine branch steps and lands back
//! inside the plateau. Each symbolic branch word yields linear constraints
//! on h, hence an open parameter window; the doubling cascade windows abut,
//! each starting where the previous one ends.

use dendrodyn_core::num::{q, qi, Q};
use num_traits::Zero;

#[derive(Clone, Debug)]
struct Window {
    lo: Q,
    hi: Q,
}

impl Window {
    fn full() -> Window {
        Window { lo: q(1, 2), hi: qi(1) }
    }

    fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    /// Intersect with `a + b·h > 0`.
    fn add_gt_zero(&mut self, a: &Q, b: &Q) {
        if b.is_zero() {
            if a <= &Q::zero() {
                self.hi = self.lo.clone();
            }
            return;
        }
        let bound = -a / b;
        if b > &Q::zero() {
            if bound > self.lo {
                self.lo = bound;
            }
        } else if bound < self.hi {
            self.hi = bound;
        }
    }
}

/// Feasible h-window of the plateau cycle with the given branch word
/// (true = descending branch 2-2x, false = ascending branch 2x).
fn word_window(word: &[bool]) -> Window {
    let mut w = Window::full();
    let half = q(1, 2);
    // x = a + b h, starting from x_0 = h
    let mut a = Q::zero();
    let mut b = qi(1);
    for &desc in word {
        if desc {
            // need x in (1 - h/2, 1)
            w.add_gt_zero(&(&a - &qi(1)), &(&b + &half));
            w.add_gt_zero(&(qi(1) - &a), &(-&b));
            a = qi(2) - qi(2) * &a;
            b = qi(-2) * &b;
        } else {
            // need x in (0, h/2)
            w.add_gt_zero(&a, &b);
            w.add_gt_zero(&(-&a), &(&half - &b));
            a = qi(2) * &a;
            b = qi(2) * &b;
        }
        if w.is_empty() {
            return w;
        }
    }
    // land strictly inside the plateau
    w.add_gt_zero(&a, &(&b - &half));
    w.add_gt_zero(&(qi(1) - &a), &(-(&b + &half)));
    w
}

fn cascade_window(level: u32) -> Window {
    assert!(level >= 1);
    let mut prev = {
        let w = word_window(&[true]);
        assert!(!w.is_empty());
        w
    };
    for lvl in 2..=level {
        let len = (1usize << lvl) - 1;
        let mut found: Option<Window> = None;
        // the first step away from the plateau value always descends
        for bits in 0..(1u64 << (len - 1)) {
            let mut word = vec![true];
            for i in 0..len - 1 {
                word.push(bits >> i & 1 == 1);
            }
            let w = word_window(&word);
            if !w.is_empty() && w.lo == prev.hi {
                found = Some(w);
                break;
            }
        }
        prev = found.unwrap_or_else(|| panic!("no doubling window at level {lvl}"));
    }
    prev
}

/// The cascade parameter realizing a plateau cycle of period 2^level.
pub fn cascade_parameter(level: u32) -> Q {
    let w = cascade_window(level);
    let h = (&w.lo + &w.hi) / qi(2);
    debug_assert_eq!(plateau_period(&h), 1u64 << level);
    h
}

/// Exact period of the plateau value's orbit under the stunted tent.
pub fn plateau_period(h: &Q) -> u64 {
    let mut orbit = vec![h.clone()];
    let mut x = h.clone();
    for _ in 0..4096 {
        x = stunted_step(h, &x);
        if x == *h {
            return orbit.len() as u64;
        }
        if orbit.contains(&x) {
            return 0; // pre-periodic without returning to h
        }
        orbit.push(x.clone());
    }
    0
}

/// One exact step of x ↦ min(h, 2x, 2-2x).
pub fn stunted_step(h: &Q, x: &Q) -> Q {
    let tent = if x <= &q(1, 2) { qi(2) * x } else { qi(2) - qi(2) * x };
    if &tent < h {
        tent
    } else {
        h.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_windows_abut_along_the_cascade() {
        let w1 = cascade_window(1);
        assert_eq!(w1.lo, q(2, 3));
        assert_eq!(w1.hi, q(4, 5));
        let w2 = cascade_window(2);
        assert_eq!(w2.lo, q(4, 5));
        assert_eq!(w2.hi, q(14, 17));
        let w3 = cascade_window(3);
        assert_eq!(w3.lo, q(14, 17));
        assert!(w3.hi > w3.lo);
    }

    #[test]
    fn cascade_parameters_have_the_right_plateau_periods() {
        assert_eq!(plateau_period(&cascade_parameter(1)), 2);
        assert_eq!(plateau_period(&cascade_parameter(2)), 4);
        assert_eq!(plateau_period(&cascade_parameter(3)), 8);
    }

    #[test]
    fn explicit_period_two_parameter() {
        assert_eq!(plateau_period(&q(3, 4)), 2);
    }
}
