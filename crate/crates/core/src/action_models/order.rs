//! Certified ordering of the orbit `{w(p)}` on the base space.
//!
//! Circle: directions `M(w)·(1, p)` in the upper half-plane, compared by the
//! sign of a cross product. With `p = π` that sign is a polynomial in π and is
//! decided with a rigorous π enclosure; with a quadratic `p` it is exact.
//! Interval: orbit points of `x ↦ x+1`, `x ↦ x³` enclosed by dyadic intervals
//! whose precision is doubled until all neighbours separate.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{BasePoint, ModelError};
use crate::arith::{Dyadic, Interval, QuadVal};
use crate::sl2z::{reduced_words, sanov_generators, Letter, Mat2Z, Word};

/// Highest dyadic precision tried before declaring a collision.
pub const MAX_PRECISION: u32 = 1 << 14;

/// Words of length `≤ depth` with their f64 base coordinate `u ∈ [0,1)`,
/// sorted along the base, and the precision that certified the order.
pub struct OrbitOrder {
    pub words: Vec<(Word, f64)>,
    pub precision: u32,
}

pub fn all_words(depth: usize) -> Vec<Word> {
    (0..=depth).flat_map(reduced_words).collect()
}

/// `16·atan(1/5) − 4·atan(1/239)` in fixed point with an explicit error bound.
fn machin_pi(bits: u32) -> (BigRational, BigRational) {
    let g = bits + 16;
    let one = BigInt::one() << g;
    let atan_inv = |n: u64| -> (BigInt, u64) {
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let mut power = &one / &n;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        loop {
            let term = &power / BigInt::from(2 * k + 1);
            if term.is_zero() {
                break;
            }
            if k.is_even() {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &n2;
            k += 1;
        }
        (sum, k)
    };
    let (a, ka) = atan_inv(5);
    let (b, kb) = atan_inv(239);
    let s = a * 16 - b * 4;
    let err = BigInt::from(16 * (3 * ka + 3) + 4 * (3 * kb + 3));
    (BigRational::new(&s - &err, one.clone()), BigRational::new(s + err, one))
}

fn pi_ladder() -> &'static [(BigRational, BigRational)] {
    static LADDER: OnceLock<Vec<(BigRational, BigRational)>> = OnceLock::new();
    LADDER.get_or_init(|| [64, 128, 256, 512, 1024, 2048].into_iter().map(machin_pi).collect())
}

fn pi_interval() -> Interval {
    let (lo, hi) = &pi_ladder()[0];
    Interval::new(Interval::from_rational(lo).lo(), Interval::from_rational(hi).hi())
}

/// Sign of `Σ cᵢ πⁱ`; `Equal` only for the zero polynomial.
pub fn sign_in_pi(coeffs: &[BigInt]) -> Ordering {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Ordering::Equal;
    }
    let pi = pi_interval();
    let fast = coeffs.iter().rev().fold(Interval::point(0.0), |acc, c| {
        acc.mul(&pi).add(&Interval::from_rational(&BigRational::from_integer(c.clone())))
    });
    if let Some(s) = fast.sign() {
        if s != Ordering::Equal {
            return s;
        }
    }
    for (lo, hi) in pi_ladder() {
        // Horner over an interval of positive reals
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in coeffs.iter().rev() {
            let c = BigRational::from_integer(c.clone());
            let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let min = prods.iter().min().expect("nonempty").clone();
            let max = prods.iter().max().expect("nonempty").clone();
            acc = (min + &c, max + &c);
        }
        if acc.0.is_positive() {
            return Ordering::Greater;
        }
        if acc.1.is_negative() {
            return Ordering::Less;
        }
    }
    panic!("π-polynomial sign undecided at 2048 bits");
}

/// A direction in the upper half-plane.
#[derive(Clone, Debug)]
enum Dir {
    /// Coordinates `x₀ + x₁π`, `y₀ + y₁π`.
    Pi([BigInt; 2], [BigInt; 2]),
    Quad(QuadVal, QuadVal),
}

fn direction(m: &Mat2Z, p: &BasePoint) -> Dir {
    let dir = match p {
        BasePoint::Pi => Dir::Pi([m.a().clone(), m.b().clone()], [m.c().clone(), m.d().clone()]),
        BasePoint::Value(s) => {
            let lift = |n: &BigInt| QuadVal::integer(n.clone(), s.d()).expect("field of p");
            let x = lift(m.a()).checked_add(&s.scale_int(m.b())).expect("same field");
            let y = lift(m.c()).checked_add(&s.scale_int(m.d())).expect("same field");
            Dir::Quad(x, y)
        }
    };
    let flip = match &dir {
        Dir::Pi(x, y) => {
            let sy = sign_in_pi(y);
            sy == Ordering::Less || (sy == Ordering::Equal && sign_in_pi(x) == Ordering::Less)
        }
        Dir::Quad(x, y) => y.is_negative() || (y.is_zero() && x.is_negative()),
    };
    if !flip {
        return dir;
    }
    match dir {
        Dir::Pi(x, y) => Dir::Pi(x.map(|c| -c), y.map(|c| -c)),
        Dir::Quad(x, y) => Dir::Quad(-&x, -&y),
    }
}

/// Counterclockwise order of angles in `[0, π)`.
fn cmp_dir(a: &Dir, b: &Dir) -> Ordering {
    match (a, b) {
        (Dir::Pi(x1, y1), Dir::Pi(x2, y2)) => {
            // cross(a, b) = x1·y2 − y1·x2 as a quadratic in π
            let c0 = &x1[0] * &y2[0] - &y1[0] * &x2[0];
            let c1 = &x1[0] * &y2[1] + &x1[1] * &y2[0] - &y1[0] * &x2[1] - &y1[1] * &x2[0];
            let c2 = &x1[1] * &y2[1] - &y1[1] * &x2[1];
            sign_in_pi(&[c0, c1, c2]).reverse()
        }
        (Dir::Quad(x1, y1), Dir::Quad(x2, y2)) => {
            let cross = x1 * y2 - y1 * x2;
            cross.signum().reverse()
        }
        _ => unreachable!("one base point per model"),
    }
}

fn dir_angle(d: &Dir) -> f64 {
    let (x, y) = match d {
        Dir::Pi(x, y) => {
            let f = |c: &[BigInt; 2]| {
                c[0].to_f64().unwrap_or(f64::NAN) + c[1].to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
            };
            (f(x), f(y))
        }
        Dir::Quad(x, y) => (x.to_f64(), y.to_f64()),
    };
    let mut theta = y.atan2(x);
    if theta < 0.0 {
        theta += std::f64::consts::PI;
    }
    (theta / std::f64::consts::PI).clamp(0.0, 1.0_f64.next_down())
}

pub fn circle_order(depth: usize, p: &BasePoint) -> Result<OrbitOrder, ModelError> {
    let gens = sanov_generators();
    let mut items: Vec<(Word, Dir)> =
        all_words(depth).into_iter().map(|w| (w.clone(), direction(&w.to_matrix(&gens), p))).collect();
    items.sort_by(|a, b| cmp_dir(&a.1, &b.1));
    for pair in items.windows(2) {
        if cmp_dir(&pair[0].1, &pair[1].1) == Ordering::Equal {
            return Err(collision(&pair[0].0, &pair[1].0));
        }
    }
    let words = items.into_iter().map(|(w, d)| (w, dir_angle(&d))).collect();
    Ok(OrbitOrder { words, precision: 0 })
}

fn collision(a: &Word, b: &Word) -> ModelError {
    ModelError::StabilizerCollision(format!("{a} and {b} send p to the same point"))
}

fn interval_letter(l: Letter, x: &Dyadic) -> Dyadic {
    match l {
        Letter::G1 => x.add_int(1),
        Letter::G1Inv => x.add_int(-1),
        Letter::G2 => x.cube(),
        Letter::G2Inv => x.cbrt(),
    }
}

pub fn interval_order(depth: usize, p: &BasePoint) -> Result<OrbitOrder, ModelError> {
    let words = all_words(depth);
    let mut prec = 64;
    loop {
        let mut enc: Vec<Dyadic> = Vec::with_capacity(words.len());
        let mut index = std::collections::HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let value = match w.letters().split_first() {
                None => match p {
                    BasePoint::Pi => {
                        let (lo, hi) = machin_pi(prec);
                        Dyadic::from_bounds(&lo, &hi, prec)
                    }
                    BasePoint::Value(q) => Dyadic::from_quad(q, prec),
                },
                Some((&first, rest)) => {
                    let parent = index[&Word::from_letters(rest.iter().copied())];
                    interval_letter(first, &enc[parent])
                }
            };
            enc.push(value);
            index.insert(w.clone(), i);
        }
        let mut order: Vec<usize> = (0..words.len()).collect();
        order.sort_by(|&a, &b| enc[a].lo_raw().cmp(enc[b].lo_raw()));
        let mut undecided = None;
        for pair in order.windows(2) {
            let (a, b) = (&enc[pair[0]], &enc[pair[1]]);
            if a.certain_cmp(b) != Some(Ordering::Less) {
                undecided = Some((pair[0], pair[1]));
                // identical point enclosures are exact equalities
                if a == b && a.is_point() {
                    return Err(collision(&words[pair[0]], &words[pair[1]]));
                }
                break;
            }
        }
        match undecided {
            None => {
                let words = order
                    .into_iter()
                    .map(|i| (words[i].clone(), 0.5 + enc[i].to_f64().atan() / std::f64::consts::PI))
                    .collect();
                return Ok(OrbitOrder { words, precision: prec });
            }
            Some((a, b)) if prec >= MAX_PRECISION => return Err(collision(&words[a], &words[b])),
            Some(_) => prec *= 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure_is_tight_and_correct() {
        let (lo, hi) = machin_pi(128);
        let lo = lo.to_f64().unwrap();
        let hi = hi.to_f64().unwrap();
        assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi);
        assert!(hi - lo < 1e-15);
        // 355/113 − π > 0
        assert_eq!(sign_in_pi(&[BigInt::from(355), BigInt::from(-113)]), Ordering::Greater);
        assert_eq!(sign_in_pi(&[BigInt::from(0), BigInt::from(0)]), Ordering::Equal);
    }

    #[test]
    fn circle_orbit_is_ordered_by_angle() {
        let o = circle_order(3, &BasePoint::Pi).unwrap();
        assert_eq!(o.words.len(), 1 + 4 + 12 + 36);
        assert!(o.words.windows(2).all(|p| p[0].1 <= p[1].1));
        let id = o.words.iter().find(|(w, _)| w.is_empty()).unwrap();
        assert!((id.1 - std::f64::consts::PI.atan() / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn fixed_directions_collide() {
        let zero = BasePoint::Value(QuadVal::zero(2));
        assert!(matches!(circle_order(1, &zero), Err(ModelError::StabilizerCollision(_))));
        let one = BasePoint::Value(QuadVal::one(2));
        assert!(matches!(interval_order(1, &one), Err(ModelError::StabilizerCollision(_))));
        // (p+1)³ − 3 = (p−1)³ + 2 whenever p² = ½, so AAAba and aabA collide
        let half_root = BasePoint::Value("1/2√2".parse().unwrap());
        assert!(matches!(interval_order(5, &half_root), Err(ModelError::StabilizerCollision(_))));
        assert!(interval_order(4, &half_root).is_ok());
    }

    #[test]
    fn interval_orbit_needs_high_precision() {
        let o = interval_order(6, &BasePoint::Pi).unwrap();
        assert!(o.precision > 64);
        assert!(o.words.windows(2).all(|q| q[0].1 <= q[1].1));
    }
}
