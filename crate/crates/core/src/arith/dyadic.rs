//! Fixed-point BigInt enclosures `[lo, hi]·2^-prec` with outward rounding.
//! Used where values leave the f64 range (iterated cubes) but must still be
//! ordered with certainty.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::QuadVal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_shift(n: &BigInt, bits: u32) -> BigInt {
    n.div_floor(&(BigInt::one() << bits))
}

fn ceil_shift(n: &BigInt, bits: u32) -> BigInt {
    -floor_shift(&-n, bits)
}

impl Dyadic {
    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Dyadic {
        let v = n.into() << prec;
        Dyadic { lo: v.clone(), hi: v, prec }
    }

    /// Encloses the rational interval `[lo, hi]`.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Dyadic {
        let scale = BigInt::one() << prec;
        Dyadic {
            lo: (lo.numer() * &scale).div_floor(lo.denom()),
            hi: -(-(hi.numer() * &scale)).div_floor(hi.denom()),
            prec,
        }
    }

    /// Encloses `x + y√d`.
    pub fn from_quad(q: &QuadVal, prec: u32) -> Dyadic {
        let scale = BigInt::one() << prec;
        let x = q.x();
        let x_lo = (x.numer() * &scale).div_floor(x.denom());
        let x_hi = -(-(x.numer() * &scale)).div_floor(x.denom());
        let mut out = Dyadic { lo: x_lo, hi: x_hi, prec };
        if !q.y().is_zero() {
            // √d·2^prec ∈ [r, r+1]
            let r = (BigInt::from(q.d()) << (2 * prec)).sqrt();
            let root = Dyadic { lo: r.clone(), hi: r + 1, prec };
            let y = q.y();
            let y_enc = Dyadic {
                lo: (y.numer() * &scale).div_floor(y.denom()),
                hi: -(-(y.numer() * &scale)).div_floor(y.denom()),
                prec,
            };
            out = out.add(&y_enc.mul(&root));
        }
        out
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        debug_assert_eq!(self.prec, o.prec);
        Dyadic { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn add_int(&self, n: i64) -> Dyadic {
        let k = BigInt::from(n) << self.prec;
        Dyadic { lo: &self.lo + &k, hi: &self.hi + &k, prec: self.prec }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = p.iter().min().expect("four products");
        let max = p.iter().max().expect("four products");
        Dyadic { lo: floor_shift(min, self.prec), hi: ceil_shift(max, self.prec), prec: self.prec }
    }

    /// `x³`, monotone so endpoints map to endpoints.
    pub fn cube(&self) -> Dyadic {
        let c = |n: &BigInt| n * n * n;
        let s = 2 * self.prec;
        Dyadic { lo: floor_shift(&c(&self.lo), s), hi: ceil_shift(&c(&self.hi), s), prec: self.prec }
    }

    /// Real cube root, monotone.
    pub fn cbrt(&self) -> Dyadic {
        let s = 2 * self.prec;
        let floor_root = |n: &BigInt| -> BigInt {
            if n.is_negative() {
                -ceil_root(&-n, s)
            } else {
                (n << s).cbrt()
            }
        };
        let ceil_root_signed = |n: &BigInt| -> BigInt {
            if n.is_negative() {
                -((-n) << s).cbrt()
            } else {
                ceil_root(n, s)
            }
        };
        Dyadic { lo: floor_root(&self.lo), hi: ceil_root_signed(&self.hi), prec: self.prec }
    }

    /// Certain order, `None` when the enclosures overlap.
    pub fn certain_cmp(&self, o: &Dyadic) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if o.hi < self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) >> 1u32;
        shifted_f64(&mid, self.prec)
    }
}

/// `n·2^-shift` as f64 by first dropping low bits.
fn shifted_f64(n: &BigInt, shift: u32) -> f64 {
    let bits = n.bits() as i64;
    let drop = (bits - 64).max(0);
    let top = (n >> drop as u32).to_f64().unwrap_or(f64::NAN);
    let exp = drop - shift as i64;
    if exp > 1100 {
        top.signum() * f64::INFINITY
    } else if exp < -1200 {
        0.0 * top.signum()
    } else {
        let half = (exp / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(exp as i32 - half)
    }
}

fn ceil_root(n: &BigInt, s: u32) -> BigInt {
    let m = n << s;
    let r = m.cbrt();
    if &r * &r * &r == m {
        r
    } else {
        r + 1
    }
}
