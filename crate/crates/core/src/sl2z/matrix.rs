use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Sl2zError;
use crate::arith::{FieldError, QuadVal};

/// An element of SL(2,Z), entries row-major `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// `h₁^m h₂^n`, identified with `(m, n) ∈ Z²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntVec2 {
    pub m: BigInt,
    pub n: BigInt,
}

impl IntVec2 {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        IntVec2 { m: m.into(), n: n.into() }
    }

    pub fn zero() -> Self {
        IntVec2::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero() && self.n.is_zero()
    }

    pub fn add(&self, o: &IntVec2) -> IntVec2 {
        IntVec2 { m: &self.m + &o.m, n: &self.n + &o.n }
    }

    /// `⟨v, (t1, t2)⟩` in floating point.
    pub fn dot_f64(&self, t1: f64, t2: f64) -> f64 {
        self.m.to_f64().unwrap_or(f64::NAN) * t1 + self.n.to_f64().unwrap_or(f64::NAN) * t2
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

impl Mat2Z {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, Sl2zError> {
        let m = Mat2Z { a: a.into(), b: b.into(), c: c.into(), d: d.into() };
        if m.det().is_one() {
            Ok(m)
        } else {
            Err(Sl2zError::NotUnimodular(m.det().to_string()))
        }
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let m = Mat2Z { a, b, c, d };
        debug_assert!(m.det().is_one());
        m
    }

    pub fn identity() -> Self {
        Mat2Z::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries_f64(&self) -> [f64; 4] {
        [&self.a, &self.b, &self.c, &self.d].map(|e| e.to_f64().unwrap_or(f64::NAN))
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2Z::identity()
    }

    pub fn compose(&self, g: &Mat2Z) -> Mat2Z {
        Mat2Z::raw(
            &self.a * &g.a + &self.b * &g.c,
            &self.a * &g.b + &self.b * &g.d,
            &self.c * &g.a + &self.d * &g.c,
            &self.c * &g.b + &self.d * &g.d,
        )
    }

    /// Adjugate, which is the inverse for determinant one.
    pub fn invert(&self) -> Mat2Z {
        Mat2Z::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn transpose(&self) -> Mat2Z {
        Mat2Z::raw(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// Exact power by repeated squaring; negative exponents invert first.
    pub fn power(&self, n: i64) -> Mat2Z {
        let mut base = if n < 0 { self.invert() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2Z::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > BigInt::from(2)
    }

    pub fn is_parabolic(&self) -> bool {
        self.trace().abs() == BigInt::from(2) && !self.is_identity() && *self != Mat2Z::identity().neg()
    }

    fn neg(&self) -> Mat2Z {
        Mat2Z::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn apply(&self, v: &IntVec2) -> IntVec2 {
        IntVec2 { m: &self.a * &v.m + &self.b * &v.n, n: &self.c * &v.m + &self.d * &v.n }
    }

    pub fn apply_quad(&self, v: &(QuadVal, QuadVal)) -> Result<(QuadVal, QuadVal), FieldError> {
        let (x, y) = v;
        let x2 = x.scale_int(&self.a).checked_add(&y.scale_int(&self.b))?;
        let y2 = x.scale_int(&self.c).checked_add(&y.scale_int(&self.d))?;
        Ok((x2, y2))
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::new(a, b, c, d).unwrap()
    }

    #[test]
    fn products_inverses_powers() {
        assert_eq!(m(1, 2, 0, 1).compose(&m(1, 0, 2, 1)), m(5, 2, 2, 1));
        assert_eq!(m(5, 2, 2, 1).invert(), m(1, -2, -2, 5));
        assert_eq!(m(1, 1, 0, 1).power(3), m(1, 3, 0, 1));
        assert_eq!(m(1, 1, 0, 1).power(-2), m(1, -2, 0, 1));
        assert_eq!(m(5, 2, 2, 1).power(0), Mat2Z::identity());
        assert_eq!(m(1, 2, 0, 1).transpose(), m(1, 0, 2, 1));
    }

    #[test]
    fn non_unimodular_rejected() {
        assert!(matches!(Mat2Z::new(2, 0, 0, 1), Err(Sl2zError::NotUnimodular(_))));
    }

    #[test]
    fn hyperbolicity() {
        assert!(m(5, 2, 2, 1).is_hyperbolic());
        assert!(!m(1, 1, 0, 1).is_hyperbolic());
        assert!(!m(0, -1, 1, 0).is_hyperbolic());
        assert!(m(-2, -1, -1, -1).is_hyperbolic());
        assert!(m(1, 1, 0, 1).is_parabolic());
    }

    #[test]
    fn big_powers_stay_unimodular() {
        let p = m(5, 2, 2, 1).power(40);
        assert!(p.det().is_one());
        assert!(p.a().bits() > 100);
    }
}
