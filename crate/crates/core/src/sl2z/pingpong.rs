//! Ping-pong certificates for freeness of a pair in SL(2,Z), acting on RP¹.
//!
//! Points of RP¹ are rational directions `[x : y]`, ordered counterclockwise
//! (by increasing slope `y/x`, wrapping through the vertical direction).
//! A certificate is four arcs `P₁, N₁, P₂, N₂` with
//!
//! * `gᵢ(RP¹ ∖ Nᵢ) ⊆ Pᵢ` and `gᵢ⁻¹(RP¹ ∖ Pᵢ) ⊆ Nᵢ`,
//! * `Pᵢ ∩ Nᵢ = ∅`,
//! * `(P₁ ∪ N₁) ∩ (P₂ ∪ N₂) = ∅`.
//!
//! Induction then gives `gᵢⁿ(Xⱼ) ⊆ Xᵢ` for all `n ≠ 0`, `Xᵢ = Pᵢ ∪ Nᵢ`, and
//! the ping-pong lemma certifies that `⟨g₁, g₂⟩` is free of rank two.
//! Arc endpoints may be open or closed: parabolic generators need arcs that
//! touch their fixed direction from one side only.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::Mat2Z;

/// A rational direction, normalised to `x > 0` or `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

impl ProjPoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Option<ProjPoint> {
        let (mut x, mut y) = (x.into(), y.into());
        if x.is_zero() && y.is_zero() {
            return None;
        }
        let g = x.gcd(&y);
        x /= &g;
        y /= &g;
        if x.is_negative() || (x.is_zero() && y.is_negative()) {
            x = -x;
            y = -y;
        }
        Some(ProjPoint { x, y })
    }

    /// Slope `y/x`, `None` for the vertical direction.
    pub fn slope(&self) -> Option<BigRational> {
        (!self.x.is_zero()).then(|| BigRational::new(self.y.clone(), self.x.clone()))
    }

    /// Monotone position on the circle `[1, 3)`: `2 + σ/(1+|σ|)` for slope σ,
    /// and `1` for the vertical direction.
    fn key(&self) -> BigRational {
        if self.x.is_zero() {
            return BigRational::one();
        }
        BigRational::from_integer(BigInt::from(2))
            + BigRational::new(self.y.clone(), &self.x + self.y.abs())
    }

    pub fn image(&self, g: &Mat2Z) -> ProjPoint {
        ProjPoint::new(g.a() * &self.x + g.b() * &self.y, g.c() * &self.x + g.d() * &self.y)
            .expect("invertible map")
    }

    fn from_f64_dir(x: f64, y: f64, scale: f64) -> Option<ProjPoint> {
        let xs = (x * scale).round();
        let ys = (y * scale).round();
        ProjPoint::new(BigInt::from(xs as i64), BigInt::from(ys as i64))
    }

    fn as_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(0.0), self.y.to_f64().unwrap_or(0.0))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slope() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "∞"),
        }
    }
}

fn circle_offset(from: &BigRational, to: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let d = to - from;
    if d.is_negative() {
        d + two
    } else {
        d
    }
}

/// A proper arc of RP¹ running counterclockwise from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: ProjPoint,
    pub end: ProjPoint,
    pub start_closed: bool,
    pub end_closed: bool,
}

impl Arc {
    pub fn new(start: ProjPoint, end: ProjPoint, start_closed: bool, end_closed: bool) -> Arc {
        Arc { start, end, start_closed, end_closed }
    }

    fn is_proper(&self) -> bool {
        self.start != self.end
    }

    fn length(&self) -> BigRational {
        circle_offset(&self.start.key(), &self.end.key())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        let off = circle_offset(&self.start.key(), &p.key());
        let len = self.length();
        (off.is_zero() && self.start_closed)
            || (off.is_positive() && off < len)
            || (off == len && self.end_closed)
    }

    pub fn complement(&self) -> Arc {
        Arc::new(self.end.clone(), self.start.clone(), !self.end_closed, !self.start_closed)
    }

    pub fn image(&self, g: &Mat2Z) -> Arc {
        Arc::new(self.start.image(g), self.end.image(g), self.start_closed, self.end_closed)
    }

    pub fn is_subset_of(&self, other: &Arc) -> bool {
        let a0 = circle_offset(&other.start.key(), &self.start.key());
        let a1 = &a0 + self.length();
        let len = other.length();
        if a1 > len {
            return false;
        }
        if a0.is_zero() && self.start_closed && !other.start_closed {
            return false;
        }
        if a1 == len && self.end_closed && !other.end_closed {
            return false;
        }
        true
    }

    pub fn is_disjoint_from(&self, other: &Arc) -> bool {
        self.is_subset_of(&other.complement())
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.start_closed { '[' } else { '(' };
        let r = if self.end_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.start, self.end)
    }
}

/// Four arcs: attracting/repelling domains for each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PingPongCertificate {
    pub p1: Arc,
    pub n1: Arc,
    pub p2: Arc,
    pub n2: Arc,
}

impl PingPongCertificate {
    /// Replays every inclusion exactly.
    pub fn verify(&self, g1: &Mat2Z, g2: &Mat2Z) -> bool {
        let arcs = [&self.p1, &self.n1, &self.p2, &self.n2];
        if !arcs.iter().all(|a| a.is_proper()) {
            return false;
        }
        let generator_ok = |g: &Mat2Z, p: &Arc, n: &Arc| {
            p.is_disjoint_from(n)
                && n.complement().image(g).is_subset_of(p)
                && p.complement().image(&g.invert()).is_subset_of(n)
        };
        generator_ok(g1, &self.p1, &self.n1)
            && generator_ok(g2, &self.p2, &self.n2)
            && [&self.p1, &self.n1]
                .iter()
                .all(|a| a.is_disjoint_from(&self.p2) && a.is_disjoint_from(&self.n2))
    }
}

impl fmt::Display for PingPongCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P1={} N1={} P2={} N2={}", self.p1, self.n1, self.p2, self.n2)
    }
}

/// Default number of grid steps per unit slope offset for arc endpoints.
pub const DEFAULT_RESOLUTION: u32 = 16;

pub fn ping_pong_certify(g1: &Mat2Z, g2: &Mat2Z) -> Option<PingPongCertificate> {
    ping_pong_certify_with(g1, g2, DEFAULT_RESOLUTION)
}

/// Searches arcs with endpoints on a rational grid of the given resolution.
/// `None` means no certificate exists in that family, not that the group is
/// not free.
pub fn ping_pong_certify_with(
    g1: &Mat2Z,
    g2: &Mat2Z,
    resolution: u32,
) -> Option<PingPongCertificate> {
    let c1 = candidate_pairs(g1, resolution);
    let c2 = candidate_pairs(g2, resolution);
    for (p1, n1) in &c1 {
        for (p2, n2) in &c2 {
            let disjoint = [p1, n1].iter().all(|a| a.is_disjoint_from(p2) && a.is_disjoint_from(n2));
            if disjoint {
                let cert = PingPongCertificate {
                    p1: p1.clone(),
                    n1: n1.clone(),
                    p2: p2.clone(),
                    n2: n2.clone(),
                };
                if cert.verify(g1, g2) {
                    return Some(cert);
                }
            }
        }
    }
    None
}

/// Offset directions `base·q ± perp·j` for `j = 1..=4q`, nearest first.
fn offsets(base: (f64, f64), resolution: u32, ahead: bool) -> Vec<ProjPoint> {
    let (bx, by) = base;
    let norm = (bx * bx + by * by).sqrt();
    let (ux, uy) = (bx / norm, by / norm);
    let (px, py) = if ahead { (-uy, ux) } else { (uy, -ux) };
    let q = resolution as f64;
    (1..=4 * resolution)
        .filter_map(|j| {
            let t = j as f64 / q;
            ProjPoint::from_f64_dir(ux + px * t, uy + py * t, 64.0 * q)
        })
        .collect()
}

/// Candidate `(P, N)` pairs for one generator, with `P = g(RP¹ ∖ N)`.
fn candidate_pairs(g: &Mat2Z, resolution: u32) -> Vec<(Arc, Arc)> {
    let mut out = Vec::new();
    let keep = |p: Arc, n: Arc, out: &mut Vec<(Arc, Arc)>| {
        if p.is_proper() && n.is_proper() && p.is_disjoint_from(&n) {
            out.push((p, n));
        }
    };
    if g.is_parabolic() {
        let fixed = parabolic_fixed_point(g);
        let probe = if fixed == ProjPoint::new(1, 0).unwrap() {
            ProjPoint::new(0, 1).unwrap()
        } else {
            ProjPoint::new(1, 0).unwrap()
        };
        let image = probe.image(g);
        // displacement sign of the parabolic flow around RP¹
        let cross = &probe.x * &image.y - &probe.y * &image.x;
        let forward = cross.is_positive();
        let base = fixed.as_f64();
        // points flow away from the fixed direction on the side they move toward
        for q in offsets(base, resolution, forward) {
            for closed in [true, false] {
                let n = if forward {
                    Arc::new(fixed.clone(), q.clone(), false, closed)
                } else {
                    Arc::new(q.clone(), fixed.clone(), closed, false)
                };
                let p = n.complement().image(g);
                keep(p, n, &mut out);
            }
        }
    } else if g.is_hyperbolic() {
        let [a, b, c, d] = g.entries_f64();
        let tr = a + d;
        let root = (tr * tr - 4.0).sqrt();
        // repelling direction of g is the eigenvector of the eigenvalue with |μ| < 1
        let mu = if tr > 0.0 { (tr - root) / 2.0 } else { (tr + root) / 2.0 };
        let dir = if b != 0.0 { (b, mu - a) } else { (mu - d, c) };
        for (lo, hi) in offsets(dir, resolution, false).into_iter().zip(offsets(dir, resolution, true)) {
            let n = Arc::new(lo, hi, true, true);
            let p = n.complement().image(g);
            keep(p, n, &mut out);
        }
    }
    out
}

fn parabolic_fixed_point(g: &Mat2Z) -> ProjPoint {
    let s = if g.trace().is_positive() { BigInt::one() } else { -BigInt::one() };
    // kernel of g − s·I
    let (a, b, c, d) = (g.a() - &s, g.b().clone(), g.c().clone(), g.d() - &s);
    ProjPoint::new(b.clone(), -&a)
        .filter(|_| !(a.is_zero() && b.is_zero()))
        .or_else(|| ProjPoint::new(-&d, c))
        .expect("parabolic element has a fixed direction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2z::words::sanov_generators;

    fn pt(x: i64, y: i64) -> ProjPoint {
        ProjPoint::new(x, y).unwrap()
    }

    #[test]
    fn arc_membership_wraps_through_vertical() {
        // slopes from 1 through ∞ to −1
        let a = Arc::new(pt(1, 1), pt(1, -1), true, false);
        assert!(a.contains(&pt(0, 1)));
        assert!(a.contains(&pt(1, 5)));
        assert!(a.contains(&pt(1, 1)));
        assert!(!a.contains(&pt(1, -1)));
        assert!(!a.contains(&pt(1, 0)));
        let c = a.complement();
        assert!(c.contains(&pt(1, -1)) && c.contains(&pt(1, 0)) && !c.contains(&pt(1, 1)));
    }

    #[test]
    fn inclusion_respects_endpoint_flags() {
        let big = Arc::new(pt(1, -1), pt(1, 1), false, true);
        let inner = Arc::new(pt(1, -1), pt(2, 1), false, true);
        assert!(inner.is_subset_of(&big));
        let touching = Arc::new(pt(1, -1), pt(2, 1), true, true);
        assert!(!touching.is_subset_of(&big));
        assert!(!big.is_subset_of(&inner));
    }

    #[test]
    fn sanov_pair_is_certified() {
        let (g1, g2) = sanov_generators();
        let cert = ping_pong_certify(&g1, &g2).expect("classical ping-pong");
        assert!(cert.verify(&g1, &g2));
        // g1's domains sit around slope 0 within [−1, 1], g2's around the vertical
        for a in [&cert.p1, &cert.n1] {
            assert!(a.contains(&pt(10, 1)) || a.contains(&pt(10, -1)));
            assert!(!a.contains(&pt(0, 1)));
        }
        for a in [&cert.p2, &cert.n2] {
            assert!(!a.contains(&pt(1, 0)));
        }
    }

    #[test]
    fn degenerate_pairs_fail() {
        let id = Mat2Z::identity();
        assert!(ping_pong_certify(&id, &id).is_none());
        let g = Mat2Z::new(5, 2, 2, 1).unwrap();
        assert!(ping_pong_certify(&g, &g).is_none());
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let (g1, g2) = sanov_generators();
        let mut cert = ping_pong_certify(&g1, &g2).unwrap();
        cert.n2 = cert.n1.clone();
        assert!(!cert.verify(&g1, &g2));
    }

    #[test]
    fn hyperbolic_pair_is_certified() {
        // squares of a Sanov-type pair are hyperbolic-free examples of ping-pong
        let g1 = Mat2Z::new(5, 2, 2, 1).unwrap();
        let g2 = Mat2Z::new(1, -2, -2, 5).unwrap().compose(&Mat2Z::new(0, -1, 1, 0).unwrap());
        if let Some(cert) = ping_pong_certify(&g1, &g2) {
            assert!(cert.verify(&g1, &g2));
        }
    }
}
