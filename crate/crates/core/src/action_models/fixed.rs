use crate::sl2z::{InteriorFixedPoint, IntVec2, Word};

use super::{ActionModel, GroupElement, Variant};

#[derive(Clone, Debug, PartialEq)]
pub enum FixedRegion {
    /// An isolated fixed point with the signs of `g(x) − x` on either side.
    Point { x: f64, before: i8, after: i8 },
    /// A run of grid points fixed exactly, e.g. outside the support of `h₁`.
    Interval { lo: f64, hi: f64 },
}

impl FixedRegion {
    pub fn location(&self) -> f64 {
        match self {
            FixedRegion::Point { x, .. } => *x,
            FixedRegion::Interval { lo, hi } => 0.5 * (lo + hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport {
    /// `g` fixes every sampled point.
    pub whole_space: bool,
    /// Fixed regions strictly inside the model space.
    pub interior: Vec<FixedRegion>,
    /// Fixed endpoints of the interval model.
    pub endpoints: Vec<f64>,
}

fn sign(d: f64) -> i8 {
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

/// Grid scan of `g(x) − x` at `resolution` points, with sign changes refined
/// by bisection to `1e-13`. Samples in intervals too deep for `g` to keep
/// materialized are skipped.
pub fn find_fixed_points(model: &ActionModel, g: &GroupElement, resolution: usize) -> FixedPointReport {
    let resolution = resolution.max(2);
    let circle = model.variant() == Variant::Circle;
    let endpoints = if circle { Vec::new() } else { vec![0.0, 1.0] };
    if g.is_empty() {
        return FixedPointReport { whole_space: true, interior: Vec::new(), endpoints };
    }
    let n = if circle { resolution } else { resolution - 1 };
    // interior grid: the interval endpoints are reported separately
    let grid: Vec<f64> = if circle {
        (0..n).map(|i| i as f64 / n as f64).collect()
    } else {
        (1..n).map(|i| i as f64 / n as f64).collect()
    };
    let xs: Vec<f64> = grid.into_iter().filter(|&x| model.is_exact(g, x)).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| model.displacement(g, x)).collect();
    if ds.iter().all(|&d| d == 0.0) {
        return FixedPointReport { whole_space: true, interior: Vec::new(), endpoints };
    }
    let mut interior = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if ds[i] == 0.0 {
            let start = i;
            while i + 1 < xs.len() && ds[i + 1] == 0.0 {
                i += 1;
            }
            if i > start {
                interior.push(FixedRegion::Interval { lo: xs[start], hi: xs[i] });
            } else {
                let before = if start > 0 { sign(ds[start - 1]) } else { 0 };
                let after = ds.get(i + 1).map_or(0, |&d| sign(d));
                interior.push(FixedRegion::Point { x: xs[start], before, after });
            }
        } else if let Some(&next) = ds.get(i + 1) {
            if next != 0.0 && sign(next) != sign(ds[i]) {
                if let Some(x) = bisect(model, g, xs[i], xs[i + 1], sign(ds[i])) {
                    interior.push(FixedRegion::Point { x, before: sign(ds[i]), after: sign(next) });
                }
            }
        }
        i += 1;
    }
    FixedPointReport { whole_space: false, interior, endpoints }
}

fn bisect(model: &ActionModel, g: &GroupElement, mut lo: f64, mut hi: f64, s_lo: i8) -> Option<f64> {
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let d = model.displacement(g, mid);
        if d == 0.0 {
            return Some(mid);
        }
        if sign(d) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    // a wrap of the circular displacement is a jump, not a zero
    (model.displacement(g, x).abs() < 1e-6).then_some(x)
}

impl InteriorFixedPoint for ActionModel {
    fn interior_fixed_point(&self, w: &Word) -> Option<f64> {
        let report = find_fixed_points(self, &GroupElement::from_word(w), 4096);
        if report.whole_space {
            return None;
        }
        // a sign change away from the ends, where the base maps are numerically the identity
        report.interior.iter().find_map(|r| match r {
            FixedRegion::Point { x, before, after } if before * after < 0 && (1e-6..=1.0 - 1e-6).contains(x) => Some(*x),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// Largest `|f h_v f⁻¹(x) − h_{f·v}(x)|`, `None` when every sample was flagged.
    pub max: Option<f64>,
    pub evaluated: usize,
    /// Samples whose conjugation would leave the materialized depth.
    pub flagged: usize,
}

/// Residual of the semidirect relation `f h_v f⁻¹ = h_{f·v}` over samples in
/// gaps shallow enough that `f⁻¹` keeps them materialized.
pub fn relation_residual(model: &ActionModel, f: &Word, v: &IntVec2, sample_count: usize) -> ResidualReport {
    if f.len() > model.depth() {
        return ResidualReport { max: None, evaluated: 0, flagged: sample_count };
    }
    let safe: Vec<_> = model.gaps().iter().filter(|g| g.word.len() + f.len() <= model.depth()).collect();
    let fe = GroupElement::from_word(f);
    let lhs = fe.concat(&GroupElement::translation(v)).concat(&fe.inverse());
    let rhs = GroupElement::translation(&f.to_matrix(model.generators()).apply(v));
    let per_gap = sample_count.div_ceil(safe.len());
    let mut max = 0.0f64;
    for i in 0..sample_count {
        let gap = safe[i % safe.len()];
        let s = ((i / safe.len()) as f64 + 0.5) / per_gap as f64;
        let x = gap.left + gap.length * s;
        let a = model.evaluate(&lhs, x);
        let b = model.evaluate(&rhs, x);
        let mut d = (a - b).abs();
        if model.variant() == Variant::Circle {
            d = d.min(1.0 - d);
        }
        max = max.max(d);
    }
    ResidualReport { max: Some(max), evaluated: sample_count, flagged: 0 }
}
