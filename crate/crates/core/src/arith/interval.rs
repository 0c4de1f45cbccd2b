//! Closed `f64` intervals with outward rounding.
//!
//! Every operation rounds its result to nearest and then widens by one ulp
//! on each side, so the true real result is always enclosed.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Exact degenerate interval.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    /// Enclosure of a rational. The conversion is widened by two ulps on each
    /// side, which covers any faithful rounding of the quotient.
    pub fn from_rational(q: &BigRational) -> Self {
        match q.to_f64() {
            Some(v) if v.is_finite() => {
                if q.is_integer() && v.abs() < 9.0e15 {
                    return Interval::point(v);
                }
                Interval { lo: down(down(v)), hi: up(up(v)) }
            }
            _ => Interval::entire(),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if c.iter().any(|v| v.is_nan()) {
            return Interval::entire();
        }
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo), hi: up(hi) }
    }

    /// `None` when the divisor straddles zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return None;
        }
        let inv = Interval { lo: down(1.0 / o.hi), hi: up(1.0 / o.lo) };
        Some(self.mul(&inv))
    }

    pub fn sqrt(&self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        Interval { lo, hi: up(self.hi.max(0.0).sqrt()) }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval { lo: 0.0, hi: self.hi.max(-self.lo) }
        }
    }

    pub fn powi(&self, e: u32) -> Interval {
        let mut acc = Interval::point(1.0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Certified sign, or `None` when zero is inside the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn third_is_enclosed() {
        let third = Interval::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)));
        let three = Interval::point(3.0);
        let one = third.mul(&three);
        assert!(one.contains(1.0));
        assert!(one.width() > 0.0);
    }

    #[test]
    fn division_by_straddling_interval() {
        let a = Interval::new(1.0, 2.0);
        assert!(a.div(&Interval::new(-1.0, 1.0)).is_none());
        let q = a.div(&Interval::point(4.0)).unwrap();
        assert!(q.contains(0.25) && q.contains(0.5));
    }

    #[test]
    fn signs() {
        assert_eq!(Interval::new(1e-300, 1.0).sign(), Some(Ordering::Greater));
        assert_eq!(Interval::new(-1.0, 1.0).sign(), None);
        assert_eq!(Interval::point(2.0).sqrt().mul(&Interval::point(2.0).sqrt()).sign(), Some(Ordering::Greater));
        let s = Interval::point(2.0).sqrt();
        assert!(s.mul(&s).sub(&Interval::point(2.0)).contains(0.0));
    }
}
