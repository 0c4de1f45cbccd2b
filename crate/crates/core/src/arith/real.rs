//! Values that are exact when they can be and enclosed when they cannot.
//!
//! Combining two exact values over the same field stays exact. Combining
//! values over different quadratic fields (a biquadratic number, which this
//! crate does not model) falls back to an outward-rounded [`Interval`].

use std::cmp::Ordering;
use std::fmt;

use super::interval::Interval;
use super::quad::QuadVal;
use super::FieldError;

#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(QuadVal),
    Enclosed(Interval),
}

impl From<QuadVal> for Real {
    fn from(q: QuadVal) -> Self {
        Real::Exact(q)
    }
}

impl Real {
    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&QuadVal> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Enclosed(_) => None,
        }
    }

    pub fn enclosure(&self) -> Interval {
        match self {
            Real::Exact(q) => q.to_interval(),
            Real::Enclosed(i) => *i,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64(),
            Real::Enclosed(i) => i.mid(),
        }
    }

    fn combine(
        &self,
        other: &Real,
        exact: impl Fn(&QuadVal, &QuadVal) -> Result<QuadVal, FieldError>,
        approx: impl Fn(&Interval, &Interval) -> Option<Interval>,
    ) -> Result<Real, FieldError> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            match exact(a, b) {
                Ok(v) => return Ok(Real::Exact(v)),
                Err(FieldError::FieldMismatch { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        approx(&self.enclosure(), &other.enclosure())
            .map(Real::Enclosed)
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn add(&self, other: &Real) -> Real {
        self.combine(other, QuadVal::checked_add, |a, b| Some(a.add(b)))
            .expect("addition cannot fail")
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.combine(other, QuadVal::checked_sub, |a, b| Some(a.sub(b)))
            .expect("subtraction cannot fail")
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.combine(other, QuadVal::checked_mul, |a, b| Some(a.mul(b)))
            .expect("multiplication cannot fail")
    }

    pub fn div(&self, other: &Real) -> Result<Real, FieldError> {
        self.combine(other, QuadVal::checked_div, |a, b| a.div(b))
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(-q),
            Real::Enclosed(i) => Real::Enclosed(i.neg()),
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(q.abs()),
            Real::Enclosed(i) => Real::Enclosed(i.abs()),
        }
    }

    pub fn pow(&self, e: u32) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(q.pow(e)),
            Real::Enclosed(i) => Real::Enclosed(i.powi(e)),
        }
    }

    /// Sign, or `None` if an enclosure cannot decide it.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Real::Exact(q) => Some(q.signum()),
            Real::Enclosed(i) => i.sign(),
        }
    }

    /// Certified comparison; `None` when undecidable at this precision.
    pub fn compare(&self, other: &Real) -> Option<Ordering> {
        self.sub(other).sign()
    }

    /// `Some(true)` only when `self > other` is certified.
    pub fn certainly_gt(&self, other: &Real) -> bool {
        self.compare(other) == Some(Ordering::Greater)
    }

    pub fn certainly_ge(&self, other: &Real) -> bool {
        matches!(self.compare(other), Some(Ordering::Greater | Ordering::Equal))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Enclosed(i) => write!(f, "~{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_field_stays_exact() {
        let a = Real::from("1+1√2".parse::<QuadVal>().unwrap());
        let b = Real::from("2-1√2".parse::<QuadVal>().unwrap());
        let s = a.mul(&b);
        assert_eq!(s.as_exact().unwrap().to_string(), "0+1√2");
    }

    #[test]
    fn mixed_fields_fall_back_to_enclosure() {
        let a = Real::from("1+1√2".parse::<QuadVal>().unwrap());
        let b = Real::from("0+1√5".parse::<QuadVal>().unwrap());
        let s = a.add(&b);
        assert!(!s.is_exact());
        let v = 1.0 + 2f64.sqrt() + 5f64.sqrt();
        assert!(s.enclosure().contains(v));
        assert_eq!(s.sign(), Some(Ordering::Greater));
        // √2·√5 − √10 straddles zero after rounding: undecided, not wrong
        let t = a.sub(&Real::from(QuadVal::one(2))).mul(&b);
        let d = t.sub(&Real::from(QuadVal::sqrt_d(10).unwrap()));
        assert_eq!(d.sign(), None);
    }
}
