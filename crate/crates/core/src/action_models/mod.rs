//! Blow-up actions on the circle and the interval.
//!
//! Every point `w(p)` of the orbit of a base point is replaced by an interval
//! `I_w` of length `ℓ(|w|)`. Matrix letters permute the inserted intervals
//! affinely, and `h₁, h₂` act on `I_w` by the flow conjugated through `w`,
//! fixing everything outside the inserted intervals. Only words of length
//! `≤ depth` are materialized; deeper gaps are carried symbolically and
//! collapse to their base point when converted to a coordinate.

mod eval;
mod fixed;
mod group;
mod order;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{FieldError, QuadVal};
use crate::sl2z::{reduced_word_count, sanov_generators, Mat2Z, Word};

pub use eval::{evaluate, GapPos, ModelPoint};
pub use fixed::{find_fixed_points, relation_residual, FixedPointReport, FixedRegion, ResidualReport};
pub use group::{GLetter, GroupElement};
pub use order::sign_in_pi;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("stabilizer collision: {0}")]
    StabilizerCollision(String),
    #[error("gap schedule rejected: {0}")]
    NonSummable(String),
    #[error("cannot parse group element {0:?}")]
    BadElement(String),
    #[error("operation needs the {0} model")]
    WrongVariant(Variant),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Circle,
    Interval,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Circle => "circle",
            Variant::Interval => "interval",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "circle" => Ok(Variant::Circle),
            "interval" => Ok(Variant::Interval),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// The base point `p`. On the circle it is the slope of the direction
/// `(1, p)`; on the interval it is the real coordinate before the chart.
/// Both defaults are `π`, which no nontrivial word fixes.
#[derive(Clone, Debug, PartialEq)]
pub enum BasePoint {
    Pi,
    Value(QuadVal),
}

impl BasePoint {
    pub fn to_f64(&self) -> f64 {
        match self {
            BasePoint::Pi => std::f64::consts::PI,
            BasePoint::Value(v) => v.to_f64(),
        }
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Pi => f.write_str("pi"),
            BasePoint::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Gap lengths `ℓ(n) = c·qⁿ⁺¹` for words of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSchedule {
    pub q: BigRational,
    pub c: BigRational,
}

impl Default for GapSchedule {
    fn default() -> Self {
        GapSchedule { q: BigRational::new(1.into(), 4.into()), c: BigRational::new(1.into(), 2.into()) }
    }
}

impl GapSchedule {
    pub fn length(&self, word_len: usize) -> BigRational {
        &self.c * num_traits::pow(self.q.clone(), word_len + 1)
    }

    /// Total over all reduced words of length `≤ depth`.
    pub fn materialized_sum(&self, depth: usize) -> BigRational {
        (0..=depth)
            .map(|n| self.length(n) * BigRational::from_integer(BigInt::from(reduced_word_count(n))))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Total over the whole free group, `c·(q + 4q²/(1−3q))`, when finite.
    pub fn full_sum(&self) -> Option<BigRational> {
        let three = BigRational::from_integer(3.into());
        let one = BigRational::one();
        if &self.q * &three >= one {
            return None;
        }
        let four = BigRational::from_integer(4.into());
        Some(&self.c * (&self.q + four * &self.q * &self.q / (one - three * &self.q)))
    }

    fn validate(&self, depth: usize) -> Result<(), ModelError> {
        if !self.q.is_positive() || !self.c.is_positive() {
            return Err(ModelError::NonSummable("q and c must be positive".into()));
        }
        if self.full_sum().is_none() {
            return Err(ModelError::NonSummable(format!(
                "ratio {} does not beat the 3ⁿ growth of the word count",
                self.q
            )));
        }
        let s = self.materialized_sum(depth);
        if s >= BigRational::one() {
            return Err(ModelError::NonSummable(format!("gaps up to depth {depth} sum to {s} ≥ 1")));
        }
        Ok(())
    }
}

/// The flow `φᵗ(s) = ψ⁻¹(ψ(s) + t)` with `ψ(s) = tan(π(s − ½))` on `]0,1[`.
pub struct FlowChart;

impl FlowChart {
    pub fn psi(s: f64) -> f64 {
        (std::f64::consts::PI * (s - 0.5)).tan()
    }

    pub fn psi_inv(y: f64) -> f64 {
        0.5 + y.atan() / std::f64::consts::PI
    }

    pub fn flow(s: f64, t: f64) -> f64 {
        Self::psi_inv(Self::psi(s) + t)
    }
}

/// The monotone chart `ℝ → ]0,1[` of the interval base, `x ↦ ½ + atan(x)/π`.
pub fn chart(x: f64) -> f64 {
    FlowChart::psi_inv(x)
}

pub fn chart_inv(u: f64) -> f64 {
    FlowChart::psi(u)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub variant: Variant,
    pub depth: usize,
    pub schedule: GapSchedule,
    pub base_point: BasePoint,
    /// Flow times `(t₁, t₂)` of `h₁, h₂` on `I_id`.
    pub flow_times: (QuadVal, QuadVal),
}

impl ModelConfig {
    pub fn default_for(variant: Variant, depth: usize) -> Self {
        ModelConfig {
            variant,
            depth,
            schedule: GapSchedule::default(),
            base_point: BasePoint::Pi,
            flow_times: (QuadVal::one(2), QuadVal::sqrt_d(2).expect("2 is square-free")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gap {
    pub word: Word,
    /// Base coordinate of `w(p)` in `[0,1)`.
    pub base: f64,
    pub length_exact: BigRational,
    pub length: f64,
    /// Left endpoint in the model coordinate.
    pub left: f64,
    /// `M(w)⁻¹`, which turns translations on `I_w` into translations on `I_id`.
    pub(crate) inv: Mat2Z,
}

impl Gap {
    pub fn right(&self) -> f64 {
        self.left + self.length
    }
}

/// A built circle or interval model. Immutable once built.
#[derive(Clone, Debug)]
pub struct ActionModel {
    config: ModelConfig,
    gaps: Vec<Gap>,
    index: HashMap<Word, usize>,
    /// `cum[i]` is the total length of gaps `0..i`.
    cum: Vec<f64>,
    scale: f64,
    total: BigRational,
    precision: u32,
    gens: (Mat2Z, Mat2Z),
    t: (f64, f64),
}

pub fn build_circle_model(depth: usize, schedule: GapSchedule, p: BasePoint) -> Result<ActionModel, ModelError> {
    ActionModel::build(ModelConfig { variant: Variant::Circle, depth, schedule, base_point: p, ..ModelConfig::default_for(Variant::Circle, depth) })
}

pub fn build_interval_model(depth: usize, schedule: GapSchedule, p: BasePoint) -> Result<ActionModel, ModelError> {
    ActionModel::build(ModelConfig {
        variant: Variant::Interval,
        depth,
        schedule,
        base_point: p,
        ..ModelConfig::default_for(Variant::Interval, depth)
    })
}

impl ActionModel {
    pub fn build(config: ModelConfig) -> Result<ActionModel, ModelError> {
        config.schedule.validate(config.depth)?;
        let order = match config.variant {
            Variant::Circle => order::circle_order(config.depth, &config.base_point)?,
            Variant::Interval => order::interval_order(config.depth, &config.base_point)?,
        };
        let total = config.schedule.materialized_sum(config.depth);
        let scale = 1.0 - total.to_f64().expect("sum below one");
        let gens = sanov_generators();
        let mut gaps = Vec::with_capacity(order.words.len());
        let mut cum = vec![0.0];
        let mut prev_u = 0.0f64;
        for (word, u) in order.words {
            let u = u.max(prev_u);
            prev_u = u;
            let length_exact = config.schedule.length(word.len());
            let length = length_exact.to_f64().expect("finite length");
            let before = *cum.last().expect("nonempty");
            let left = scale * u + before;
            cum.push(before + length);
            let inv = word.inverse().to_matrix(&gens);
            gaps.push(Gap { word, base: u, length_exact, length, left, inv });
        }
        let index = gaps.iter().enumerate().map(|(i, g)| (g.word.clone(), i)).collect();
        let t = (config.flow_times.0.to_f64(), config.flow_times.1.to_f64());
        Ok(ActionModel { config, gaps, index, cum, scale, total, precision: order.precision, gens, t })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    pub fn depth(&self) -> usize {
        self.config.depth
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn gap(&self, w: &Word) -> Option<&Gap> {
        self.index.get(w).map(|&i| &self.gaps[i])
    }

    pub fn generators(&self) -> &(Mat2Z, Mat2Z) {
        &self.gens
    }

    pub fn flow_times_f64(&self) -> (f64, f64) {
        self.t
    }

    /// Exact total length of the materialized gaps.
    pub fn materialized_length(&self) -> &BigRational {
        &self.total
    }

    /// Length carried by gaps deeper than the truncation depth.
    pub fn truncation_residual(&self) -> BigRational {
        self.config.schedule.full_sum().map(|s| s - &self.total).unwrap_or_else(BigRational::zero)
    }

    /// Dyadic precision that certified the interval orbit order (0 on the circle).
    pub fn certified_precision(&self) -> u32 {
        self.precision
    }

    /// `I_id`, as `(left, right)` in the model coordinate.
    pub fn identity_gap(&self) -> (f64, f64) {
        let g = self.gap(&Word::identity()).expect("identity gap is always materialized");
        (g.left, g.right())
    }

    /// The model coordinate of a base coordinate `u`.
    pub fn base_to_model(&self, u: f64) -> f64 {
        let idx = self.gaps.partition_point(|g| g.base < u);
        self.scale * u + self.cum[idx]
    }

    /// Base coordinate of the numeric base point `w(p)`.
    pub fn orbit_base(&self, w: &Word) -> f64 {
        if let Some(g) = self.gap(w) {
            return g.base;
        }
        let mut u = self.base_of_p();
        for &l in w.letters().iter().rev() {
            u = self.base_map(GLetter::M(l), u);
        }
        u
    }

    fn base_of_p(&self) -> f64 {
        let p = self.config.base_point.to_f64();
        match self.config.variant {
            Variant::Circle => {
                let theta = p.atan2(1.0);
                (if theta < 0.0 { theta + std::f64::consts::PI } else { theta }) / std::f64::consts::PI
            }
            Variant::Interval => chart(p),
        }
    }

    /// Action of a matrix letter on base coordinates; translation letters fix the base.
    pub fn base_map(&self, l: GLetter, u: f64) -> f64 {
        let GLetter::M(letter) = l else { return u };
        match self.config.variant {
            Variant::Circle => {
                let m = letter.matrix(&self.gens);
                let [a, b, c, d] = m.entries_f64();
                let theta = std::f64::consts::PI * u;
                let (x, y) = (theta.cos(), theta.sin());
                let (x2, y2) = (a * x + b * y, c * x + d * y);
                let mut t = y2.atan2(x2);
                if t < 0.0 {
                    t += std::f64::consts::PI;
                }
                (t / std::f64::consts::PI).rem_euclid(1.0)
            }
            Variant::Interval => {
                if u <= 0.0 || u >= 1.0 {
                    return u.clamp(0.0, 1.0);
                }
                let x = chart_inv(u);
                let y = match letter {
                    crate::sl2z::Letter::G1 => x + 1.0,
                    crate::sl2z::Letter::G1Inv => x - 1.0,
                    crate::sl2z::Letter::G2 => x * x * x,
                    crate::sl2z::Letter::G2Inv => x.cbrt(),
                };
                chart(y)
            }
        }
    }

    fn inverse_matrix(&self, w: &Word) -> Mat2Z {
        match self.gap(w) {
            Some(g) => g.inv.clone(),
            None => w.inverse().to_matrix(&self.gens),
        }
    }

    pub(crate) fn scale(&self) -> f64 {
        self.scale
    }

    pub(crate) fn cum(&self) -> &[f64] {
        &self.cum
    }

    /// Flow displacement on `I_id` coordinates produced by `h_v` acting on `I_w`.
    pub(crate) fn pulled_back(&self, w: &Word, v: (i64, i64)) -> (i64, i64) {
        let m = self.inverse_matrix(w);
        let img = m.apply(&crate::sl2z::IntVec2::new(v.0, v.1));
        (img.m.to_i64().expect("translation fits in i64"), img.n.to_i64().expect("translation fits in i64"))
    }
}
