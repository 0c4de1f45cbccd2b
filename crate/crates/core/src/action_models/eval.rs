use crate::sl2z::Word;

use super::{ActionModel, FlowChart, GLetter, GroupElement, Variant};

/// Position inside an inserted interval. Interior points carry their flow
/// coordinate as `y₀ + shift₁·t₁ + shift₂·t₂`, with the integer shift kept
/// exact so that equal group elements give bit-identical results.
#[derive(Clone, Debug, PartialEq)]
pub enum GapPos {
    Left,
    Interior { y0: f64, shift: (i64, i64) },
    Right,
}

/// A point of the model: inside (or on the edge of) the interval `I_w`, or a
/// point of the base outside every materialized interval. Labels of
/// intervals deeper than the truncation depth are kept symbolically.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelPoint {
    Base(f64),
    InGap { word: Word, pos: GapPos },
}

impl ModelPoint {
    pub fn gap_word(&self) -> Option<&Word> {
        match self {
            ModelPoint::InGap { word, .. } => Some(word),
            ModelPoint::Base(_) => None,
        }
    }
}

impl ActionModel {
    fn normalize(&self, x: f64) -> f64 {
        match self.variant() {
            Variant::Circle => x.rem_euclid(1.0),
            Variant::Interval => x.clamp(0.0, 1.0),
        }
    }

    /// Locates a model coordinate.
    pub fn to_point(&self, x: f64) -> ModelPoint {
        let x = self.normalize(x);
        let gaps = self.gaps();
        let k = gaps.partition_point(|g| g.left <= x);
        if k == 0 {
            return ModelPoint::Base((x / self.scale()).min(gaps[0].base));
        }
        let i = k - 1;
        let g = &gaps[i];
        let pos = if x == g.left {
            Some(GapPos::Left)
        } else if x < g.right() {
            Some(GapPos::Interior { y0: FlowChart::psi((x - g.left) / g.length), shift: (0, 0) })
        } else if x == g.right() {
            Some(GapPos::Right)
        } else {
            None
        };
        match pos {
            Some(pos) => ModelPoint::InGap { word: g.word.clone(), pos },
            None => {
                let upper = gaps.get(k).map_or(1.0, |n| n.base);
                let u = ((x - self.cum()[k]) / self.scale()).clamp(g.base, upper);
                ModelPoint::Base(u)
            }
        }
    }

    /// The model coordinate of a point; deeper-than-depth labels collapse to
    /// their base point.
    pub fn to_coord(&self, p: &ModelPoint) -> f64 {
        match p {
            ModelPoint::Base(u) => self.base_to_model(*u),
            ModelPoint::InGap { word, pos } => match self.gap(word) {
                Some(g) => match pos {
                    GapPos::Left => g.left,
                    GapPos::Right => g.right(),
                    GapPos::Interior { .. } => g.left + g.length * FlowChart::psi_inv(self.flow_coordinate(pos)),
                },
                None => self.base_to_model(self.orbit_base(word)),
            },
        }
    }

    /// `ψ` of an interior point, in `I_id` flow units.
    pub fn flow_coordinate(&self, pos: &GapPos) -> f64 {
        match pos {
            GapPos::Left => f64::NEG_INFINITY,
            GapPos::Right => f64::INFINITY,
            GapPos::Interior { y0, shift } => {
                let (t1, t2) = self.flow_times_f64();
                y0 + (shift.0 as f64 * t1 + shift.1 as f64 * t2)
            }
        }
    }

    pub fn apply_letter(&self, p: &ModelPoint, l: GLetter) -> ModelPoint {
        match (p, l) {
            (ModelPoint::Base(u), _) => ModelPoint::Base(self.base_map(l, *u)),
            (ModelPoint::InGap { word, pos }, GLetter::M(m)) => {
                ModelPoint::InGap { word: word.prepend(m), pos: pos.clone() }
            }
            (ModelPoint::InGap { word, pos }, h) => {
                let pos = match pos {
                    GapPos::Interior { y0, shift } => {
                        let v = h.translation().expect("translation letter");
                        let d = self.pulled_back(word, v);
                        GapPos::Interior { y0: *y0, shift: (shift.0 + d.0, shift.1 + d.1) }
                    }
                    edge => edge.clone(),
                };
                ModelPoint::InGap { word: word.clone(), pos }
            }
        }
    }

    /// Whether `g(x)` stays within the materialized intervals.
    pub fn is_exact(&self, g: &GroupElement, x: f64) -> bool {
        let matrix_letters = g.letters().iter().filter(|l| matches!(l, GLetter::M(_))).count();
        self.to_point(x).gap_word().is_none_or(|w| w.len() + matrix_letters <= self.depth())
    }

    /// Applies `g` letter by letter, rightmost first.
    pub fn evaluate_point(&self, g: &GroupElement, p: &ModelPoint) -> ModelPoint {
        g.letters().iter().rev().fold(p.clone(), |acc, &l| self.apply_letter(&acc, l))
    }

    pub fn evaluate(&self, g: &GroupElement, x: f64) -> f64 {
        if g.is_empty() {
            return self.normalize(x);
        }
        self.to_coord(&self.evaluate_point(g, &self.to_point(x)))
    }

    /// Signed `g(x) − x`; on the circle wrapped into `(−½, ½]`.
    pub fn displacement(&self, g: &GroupElement, x: f64) -> f64 {
        let d = self.evaluate(g, x) - self.normalize(x);
        match self.variant() {
            Variant::Circle => {
                let w = d.rem_euclid(1.0);
                if w > 0.5 {
                    w - 1.0
                } else {
                    w
                }
            }
            Variant::Interval => d,
        }
    }
}

/// `g(x)` in the model coordinate.
pub fn evaluate(model: &ActionModel, g: &GroupElement, x: f64) -> f64 {
    model.evaluate(g, x)
}
