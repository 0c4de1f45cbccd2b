//! Translation numbers on irreducible components, rotation numbers on the
//! circle, the disjointness criterion for `f(I)` and `I`, and the torus
//! fixed-point test.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::action_models::{ActionModel, GLetter, GroupElement, ModelError, ModelPoint, Variant};
use crate::arith::{FieldError, QuadVal};
use crate::sl2z::{
    eigen_decompose, eigenvector_test, sanov_generators, EigenData, IntVec2, Letter, Mat2Z, QuadVec, Sl2zError, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("t vanishes for {0}")]
    TVanishes(String),
    #[error("truncation depth exhausted: {0}")]
    DepthExhausted(String),
    #[error(transparent)]
    Sl2z(#[from] Sl2zError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `τ` on `Z²` with `τ(1,0) = r`, `τ(0,1) = s`, together with the
/// eigen-decomposition of a base vector under `f₀⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationData {
    pub r: QuadVal,
    pub s: QuadVal,
    pub f0: Mat2Z,
    /// Eigen-data of `f₀⁻¹`.
    pub eigen: EigenData,
    /// The vector whose conjugates are tracked, `(1,0)` unless replaced.
    pub base: IntVec2,
    /// Expanding component: `f₀⁻ⁿ·base` contracted with `(r,s)` is `λⁿt + λ⁻ⁿt′`.
    pub t: QuadVal,
    pub t_prime: QuadVal,
}

fn common_field(vals: &[&QuadVal]) -> Result<u64, FieldError> {
    let mut d = 1;
    for v in vals {
        if v.d() != 1 && !v.is_rational() {
            if d != 1 && d != v.d() {
                return Err(FieldError::FieldMismatch { left: d, right: v.d() });
            }
            d = v.d();
        }
    }
    Ok(d)
}

fn dot(v: &IntVec2, r: &QuadVal, s: &QuadVal) -> QuadVal {
    &r.scale_int(&v.m) + &s.scale_int(&v.n)
}

impl TranslationData {
    pub fn new(f0: Mat2Z, rs: QuadVec) -> Result<Self, InvariantsError> {
        Self::with_base(f0, rs, IntVec2::new(1, 0))
    }

    pub fn with_base(f0: Mat2Z, rs: QuadVec, base: IntVec2) -> Result<Self, InvariantsError> {
        let eigen = eigen_decompose(&f0.invert())?;
        let d = common_field(&[&rs.0, &rs.1, &eigen.lambda_exp])?;
        let lift = |q: &QuadVal| q.lift_to(d);
        let (r, s) = (lift(&rs.0)?, lift(&rs.1)?);
        let (ve, vc) = (
            (lift(&eigen.v_exp.0)?, lift(&eigen.v_exp.1)?),
            (lift(&eigen.v_con.0)?, lift(&eigen.v_con.1)?),
        );
        // base = α·v_exp + β·v_con, solved by Cramer's rule
        let m = QuadVal::integer(base.m.clone(), d)?;
        let n = QuadVal::integer(base.n.clone(), d)?;
        let det = ve.0.checked_mul(&vc.1)?.checked_sub(&ve.1.checked_mul(&vc.0)?)?;
        let alpha = m.checked_mul(&vc.1)?.checked_sub(&n.checked_mul(&vc.0)?)?.checked_div(&det)?;
        let beta = ve.0.checked_mul(&n)?.checked_sub(&ve.1.checked_mul(&m)?)?.checked_div(&det)?;
        let t = alpha.checked_mul(&r.checked_mul(&ve.0)?.checked_add(&s.checked_mul(&ve.1)?)?)?;
        let t_prime = beta.checked_mul(&r.checked_mul(&vc.0)?.checked_add(&s.checked_mul(&vc.1)?)?)?;
        if t.is_zero() && !base.is_zero() {
            return Err(InvariantsError::TVanishes(format!("f₀ = {f0}, (r,s) = ({r}, {s})")));
        }
        Ok(TranslationData { r, s, f0, eigen, base, t, t_prime })
    }

    /// `τ` read off a model's flow times.
    pub fn from_model(model: &ActionModel, f0: Mat2Z) -> Result<Self, InvariantsError> {
        Self::new(f0, model.config().flow_times.clone())
    }

    pub fn lambda(&self) -> Result<QuadVal, FieldError> {
        self.eigen.lambda_exp.lift_to(self.t.d())
    }
}

/// `τ(h_v) = m·r + n·s`.
pub fn translation_number(td: &TranslationData, v: &IntVec2) -> QuadVal {
    dot(v, &td.r, &td.s)
}

/// `τ(f₀⁻ⁿ h_base f₀ⁿ)` from the integer vector `f₀⁻ⁿ·base`, checked against `λⁿt + λ⁻ⁿt′`.
pub fn conjugate_translation_number(td: &TranslationData, n: u32) -> QuadVal {
    let v = td.f0.power(-i64::from(n)).apply(&td.base);
    let direct = translation_number(td, &v);
    debug_assert_eq!(Ok(&direct), conjugate_translation_number_eigen(td, n).as_ref());
    direct
}

/// The same value through the eigen-decomposition.
pub fn conjugate_translation_number_eigen(td: &TranslationData, n: u32) -> Result<QuadVal, FieldError> {
    let lambda = td.lambda()?;
    let up = lambda.pow(n);
    let down = up.inverse()?;
    up.checked_mul(&td.t)?.checked_add(&down.checked_mul(&td.t_prime)?)
}

pub fn eigen_components(td: &TranslationData) -> (QuadVal, QuadVal) {
    (td.t.clone(), td.t_prime.clone())
}

/// True when `(r,s)` is not an eigenvector of `fᵀ`, the hypothesis under
/// which `f(I)` and `I` are disjoint.
pub fn claim1_predicate(f: &Mat2Z, rs: &QuadVec) -> Result<bool, InvariantsError> {
    Ok(!eigenvector_test(&f.transpose(), rs)?)
}

/// A `Z²`-invariant piece of the model. Degenerate components (points fixed by
/// both translations) have `lo == hi` and no gap.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub lo: f64,
    pub hi: f64,
    pub gap: Option<Word>,
}

impl Component {
    pub fn is_degenerate(&self) -> bool {
        self.gap.is_none()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

/// The maximal open interval around `x` moved by the translations: the
/// materialized gap containing `x`, or the point itself.
pub fn irreducible_component(model: &ActionModel, x: f64) -> Component {
    match model.to_point(x) {
        ModelPoint::InGap { word, pos: crate::action_models::GapPos::Interior { .. } } => {
            let g = model.gap(&word).expect("located gaps are materialized");
            Component { lo: g.left, hi: g.right(), gap: Some(word) }
        }
        _ => Component { lo: x, hi: x, gap: None },
    }
}

/// Whether the evaluated image of `component` under `f` misses it.
pub fn claim1_empirical(model: &ActionModel, f: &Word, component: &Component) -> Result<bool, InvariantsError> {
    let Some(w) = &component.gap else {
        return Ok(false);
    };
    if w.len() + f.len() > model.depth() {
        return Err(InvariantsError::DepthExhausted(format!(
            "{f} applied to I_{w} needs depth {}, model has {}",
            w.len() + f.len(),
            model.depth()
        )));
    }
    let g = GroupElement::from_word(f);
    let width = component.hi - component.lo;
    // images of interior points; the ends themselves may be shared with neighbours
    let lo = model.evaluate(&g, component.lo + 1e-9 * width);
    let hi = model.evaluate(&g, component.hi - 1e-9 * width);
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    Ok(hi <= component.lo || lo >= component.hi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationEstimate {
    /// In `[0, 1)`.
    pub value: f64,
    /// `(G^n(x) − x)/n` for the chosen lift `G`.
    pub lift_mean: f64,
    pub iterations: usize,
    pub bound: f64,
}

impl RotationEstimate {
    /// Distance to `target` on `R/Z`.
    pub fn distance_to(&self, target: f64) -> f64 {
        let d = (self.value - target).rem_euclid(1.0);
        d.min(1.0 - d)
    }
}

/// Sign of the motion of a matrix letter, read where it moves points least.
fn letter_direction(model: &ActionModel, l: GLetter) -> f64 {
    let g = GroupElement::from_letters([l]);
    let (mut best, mut sign) = (f64::INFINITY, 1.0);
    for i in 0..512 {
        let d = model.displacement(&g, (i as f64 + 0.5) / 512.0);
        if d != 0.0 && d.abs() < best {
            best = d.abs();
            sign = d.signum();
        }
    }
    sign
}

/// Rotation number of `g` on the circle model by averaging a lift over
/// `iterations` steps from `x = 0`; the error is below `1/iterations`.
pub fn rotation_number(model: &ActionModel, g: &GroupElement, iterations: usize) -> Result<RotationEstimate, InvariantsError> {
    if model.variant() != Variant::Circle {
        return Err(ModelError::WrongVariant(Variant::Circle).into());
    }
    let iterations = iterations.max(1);
    if g.is_empty() {
        return Ok(RotationEstimate { value: 0.0, lift_mean: 0.0, iterations, bound: 1.0 / iterations as f64 });
    }
    let mut dirs = std::collections::HashMap::new();
    for &l in g.letters() {
        if let GLetter::M(_) = l {
            dirs.entry(l).or_insert_with(|| letter_direction(model, l));
        }
    }
    let mut x = 0.0f64;
    let mut lifted = 0.0f64;
    let mut halfway = 0.0;
    for k in 0..iterations {
        for &l in g.letters().iter().rev() {
            let y = model.evaluate(&GroupElement::from_letters([l]), x);
            let step = match dirs.get(&l) {
                // parabolic letters move every non-fixed point the same way
                Some(&dir) => {
                    let raw = (y - x).rem_euclid(1.0);
                    if dir < 0.0 && raw > 0.0 {
                        raw - 1.0
                    } else {
                        raw
                    }
                }
                // translations stay inside a gap, which never wraps
                None => y - x,
            };
            lifted += step;
            x = y;
        }
        if k + 1 == iterations / 2 {
            halfway = lifted / (k + 1) as f64;
        }
    }
    let lift_mean = lifted / iterations as f64;
    let bound = 1.0 / iterations as f64;
    if iterations >= 2 {
        debug_assert!((lift_mean - halfway).abs() <= 3.0 * bound + 1e-12);
    }
    Ok(RotationEstimate { value: lift_mean.rem_euclid(1.0), lift_mean, iterations, bound })
}

fn is_integer(q: &QuadVal) -> bool {
    q.is_rational() && q.x().is_integer()
}

/// Whether `(r′, s′)` is fixed by `fᵀ` on `R²/Z²`, decided exactly.
pub fn torus_fixed_point_check(f: &Mat2Z, rs: &QuadVec) -> Result<bool, FieldError> {
    let (r, s) = rs;
    let (a, b, c, d) = (f.a(), f.b(), f.c(), f.d());
    let first = r.scale_int(a).checked_add(&s.scale_int(c))?.checked_sub(r)?;
    let second = r.scale_int(b).checked_add(&s.scale_int(d))?.checked_sub(s)?;
    Ok(is_integer(&first) && is_integer(&second))
}

/// Floating-point variant, with residues compared to the nearest integer.
pub fn torus_fixed_point_check_f64(f: &Mat2Z, rs: (f64, f64), tol: f64) -> bool {
    let [a, b, c, d] = f.entries_f64();
    let (r, s) = rs;
    let near_int = |v: f64| (v - v.round()).abs() <= tol;
    near_int(a * r + c * s - r) && near_int(b * r + d * s - s)
}

/// Exact sign of `τ(h_v)`.
pub fn translation_sign(td: &TranslationData, v: &IntVec2) -> Ordering {
    translation_number(td, v).signum()
}

/// `f₀⁻ⁿ·v` as an integer vector.
pub fn pulled_vector(f0: &Mat2Z, v: &IntVec2, n: u32) -> IntVec2 {
    f0.power(-i64::from(n)).apply(v)
}

/// Seeded reduced words over the Sanov pair of length `1..=max_len` whose
/// matrices are hyperbolic.
pub fn random_hyperbolic_words(seed: u64, count: usize, max_len: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = sanov_generators();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let len = rng.gen_range(1..=max_len.max(1));
        let mut w = Word::identity();
        while w.len() < len {
            w.push_right(Letter::ALL[rng.gen_range(0..4)]);
        }
        if w.to_matrix(&gens).is_hyperbolic() {
            out.push(w);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim1Row {
    pub word: Word,
    pub predicate: bool,
    /// `None` when the image would leave the materialized depth.
    pub empirical: Option<bool>,
}

impl Claim1Row {
    /// The predicate held but the model shows an overlap.
    pub fn is_violation(&self) -> bool {
        self.predicate && self.empirical == Some(false)
    }
}

/// The predicate against the model on `I_id` for `count` seeded hyperbolic
/// words no longer than the model depth.
pub fn claim1_suite(model: &ActionModel, rs: &QuadVec, count: usize, seed: u64) -> Result<Vec<Claim1Row>, InvariantsError> {
    let (l, r) = model.identity_gap();
    let id = irreducible_component(model, 0.5 * (l + r));
    let gens = sanov_generators();
    random_hyperbolic_words(seed, count, model.depth().clamp(1, 6))
        .into_iter()
        .map(|word| {
            let predicate = claim1_predicate(&word.to_matrix(&gens), rs)?;
            let empirical = match claim1_empirical(model, &word, &id) {
                Ok(b) => Some(b),
                Err(InvariantsError::DepthExhausted(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(Claim1Row { word, predicate, empirical })
        })
        .collect()
}

/// `(r′, s′)` against the transposes of `count` seeded words, exactly and in
/// floating point; returns the words on which the two disagree or the exact
/// check fails.
pub fn torus_suite(rs: &QuadVec, count: usize, seed: u64) -> Result<Vec<(Word, bool)>, FieldError> {
    let gens = sanov_generators();
    let rs_f64 = (rs.0.to_f64(), rs.1.to_f64());
    random_hyperbolic_words(seed, count, 8)
        .into_iter()
        .map(|w| {
            let f = w.to_matrix(&gens);
            let exact = torus_fixed_point_check(&f, rs)?;
            Ok((w, exact && exact == torus_fixed_point_check_f64(&f, rs_f64, 1e-9)))
        })
        .collect()
}
