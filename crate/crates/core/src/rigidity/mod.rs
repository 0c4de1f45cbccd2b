//! Quantitative ingredients of the smoothing obstruction: parameter tuning
//! for the two growth inequalities, the exact disjointness of the `2^k`
//! translates of `J`, the derivative-growth contradiction and the flat-germ
//! conjugacy probe.

mod certificate;
mod claim3;
mod germ;
mod growth;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::action_models::{ActionModel, ModelError, Variant};
use crate::arith::{FieldError, QuadVal, Real};
use crate::invariants::InvariantsError;
use crate::sl2z::{conditions_check, eigen_decompose, search_candidate, Candidate, IntVec2, Mat2Z, QuadVec, Sl2zError, Word};

pub use certificate::{check_certificate_text, packing_min_gap, parse_certificate_text, CertificateCheck};
pub use claim3::{
    certify_disjoint, cross_validate_geometric, enumerate_words, separation_margins, Counterexample,
    CrossValidation, DisjointnessCertificate, WordSpec,
};
pub use germ::{flat_germ_probe, GermMap, GermReport, LinearGerm};
pub use growth::{growth_contradiction, growth_threshold_log, total_lower_bound, GrowthCertificate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigidityError {
    #[error("generic-position conditions fail for {0}")]
    Conditions(String),
    #[error("t vanishes: (r, s) is orthogonal to the expanding direction")]
    TVanishes,
    #[error("the sign of t cannot be certified: {0}")]
    SignUndecided(String),
    #[error("no (k_h, k_f) up to {limit} works; last failure: {last}")]
    HorizonExhausted { limit: u32, last: String },
    #[error("parameters carry no word for f₀")]
    MissingWord,
    #[error("f(a) = {0} differs from a")]
    NotFixed(f64),
    #[error("no word up to length {0} has an interior fixed point")]
    NotFound(usize),
    #[error(transparent)]
    Sl2z(#[from] Sl2zError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Search limits for the tuner and the inequality horizons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Horizons {
    pub n_max: u32,
    pub i_max: u32,
    /// Largest `k_h` and `k_f` tried.
    pub power_limit: u32,
    /// Work on `]0,1]` instead of `[0,1[`: reversing the orientation negates `τ`.
    pub reversed: bool,
}

impl Default for Horizons {
    fn default() -> Self {
        Horizons { n_max: 40, i_max: 40, power_limit: 64, reversed: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityParams {
    pub f0: Mat2Z,
    pub f0_word: Option<Word>,
    pub rs: QuadVec,
    /// `+1`, or `−1` when `h₁` was replaced by its inverse.
    pub h_sign: i8,
    pub k_h: u32,
    pub k_f: u32,
    /// Expanding eigenvalue of `f⁻¹` for the effective `f = f₀^{k_f}`.
    pub lambda: Real,
    pub t: Real,
    pub t_prime: Real,
    /// `μ(J)`; `J` sits in `I_id` at μ-coordinates `[−μ(J)/2, μ(J)/2]`.
    pub mu_j: Real,
    pub n_max: u32,
    pub i_max: u32,
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityCheck {
    pub index: u32,
    pub lhs: Real,
    pub rhs: Real,
    /// `lhs ≤ rhs`, certified.
    pub pass: bool,
}

impl RigidityParams {
    /// The effective `f = f₀^{k_f}`.
    pub fn f(&self) -> Mat2Z {
        self.f0.power(i64::from(self.k_f))
    }

    pub fn f_word(&self) -> Option<Word> {
        self.f0_word.as_ref().map(|w| w.power(i64::from(self.k_f)))
    }

    /// The effective replacement of `h₁`, as a vector of `Z²`.
    pub fn h_vector(&self) -> IntVec2 {
        IntVec2 { m: BigInt::from(self.k_h) * BigInt::from(self.h_sign), n: BigInt::zero() }
    }

    /// `−1` when μ-coordinates run against the model orientation.
    pub fn orientation(&self) -> i64 {
        if self.reversed {
            -1
        } else {
            1
        }
    }

    /// `f^{−j}·h`, the vector of the `j`-th conjugate.
    pub fn conjugate_vector(&self, j: u32) -> IntVec2 {
        self.f().power(-i64::from(j)).apply(&self.h_vector())
    }

    /// `τ(f^{−j} h f^j)`, exact in the field of `(r, s)`.
    pub fn tau(&self, j: u32) -> QuadVal {
        tau_of(&self.conjugate_vector(j), &self.rs).scale_int(&BigInt::from(self.orientation()))
    }

    /// `[c(u), c(v)]`, the μ-coordinates of the ends of `J`.
    pub fn j_bounds(&self) -> (Real, Real) {
        let half = Real::Exact(QuadVal::rational(num_rational::BigRational::new(1.into(), 2.into()), 1).expect("d = 1"));
        let h = self.mu_j.mul(&half);
        (h.neg(), h)
    }

    pub fn is_exact(&self) -> bool {
        self.lambda.is_exact() && self.t.is_exact() && self.t_prime.is_exact() && self.mu_j.is_exact()
    }

    /// Replaces `μ(J)` without re-validating, e.g. to exercise the failure path.
    pub fn with_mu_j(mut self, mu_j: Real) -> Self {
        self.mu_j = mu_j;
        self
    }

    /// Every structural requirement that fails, as text.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let two = real_int(2);
        let one = real_int(1);
        if !self.lambda.certainly_gt(&two) {
            out.push(format!("λ = {} is not > 2", self.lambda));
        }
        if !self.lambda.mul(&self.t).certainly_gt(&one) {
            out.push(format!("λt = {} is not > 1", self.lambda.mul(&self.t)));
        }
        if !(self.mu_j.certainly_gt(&real_int(0)) && self.t.certainly_gt(&self.mu_j)) {
            out.push(format!("μ(J) = {} is not in ]0, t[", self.mu_j));
        }
        if let Some(c) = check_eq2(self, 1..=self.i_max).into_iter().find(|c| !c.pass) {
            out.push(format!("growth inequality fails at i = {}", c.index));
        }
        if let Some(c) = check_eq3(self, 1..=self.n_max).into_iter().find(|c| !c.pass) {
            out.push(format!("eigenvector inequality fails at n = {}", c.index));
        }
        out
    }

    /// `λ⁰|t′| = |t′|`, the value at the `n = 0` edge of the eigenvector inequality.
    pub fn eq3_at_zero(&self) -> Real {
        self.t_prime.abs()
    }

    /// Canonical text used for hashing; contains no floating-point values
    /// unless some parameter is only enclosed.
    pub fn canonical(&self) -> String {
        let word = self.f0_word.as_ref().map_or("-".to_string(), |w| w.to_string());
        format!(
            "f0={} word={} rs=({}, {}) h_sign={} k_h={} k_f={} lambda={} t={} t_prime={} mu_j={} n_max={} i_max={} reversed={}",
            self.f0, word, self.rs.0, self.rs.1, self.h_sign, self.k_h, self.k_f, self.lambda, self.t, self.t_prime,
            self.mu_j, self.n_max, self.i_max, self.reversed
        )
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

impl fmt::Display for RigidityParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.h_sign < 0 { "⁻¹" } else { "" };
        writeln!(f, "f₀ = {} (k_f = {}), h₁{} (k_h = {})", self.f0, self.k_f, sign, self.k_h)?;
        writeln!(f, "λ = {}, t = {}, t′ = {}", self.lambda, self.t, self.t_prime)?;
        write!(f, "μ(J) = {}", self.mu_j)
    }
}

fn real_int(n: i64) -> Real {
    Real::Exact(QuadVal::integer(n, 1).expect("d = 1"))
}

pub(crate) fn tau_of(v: &IntVec2, rs: &QuadVec) -> QuadVal {
    &rs.0.scale_int(&v.m) + &rs.1.scale_int(&v.n)
}

/// `λ`, `t`, `t′` of `f₀⁻¹` against `(r,s)` for the base vector `(1,0)`;
/// exact when `(r,s)` lies in the eigenvalue field or in `Q`, enclosed otherwise.
fn components(f0: &Mat2Z, rs: &QuadVec) -> Result<(Real, Real, Real), RigidityError> {
    let e = eigen_decompose(&f0.invert())?;
    let (ve, vc) = (&e.v_exp, &e.v_con);
    // (1,0) = α·v_exp + β·v_con
    let det = ve.0.checked_mul(&vc.1)?.checked_sub(&ve.1.checked_mul(&vc.0)?)?;
    let alpha = vc.1.checked_div(&det)?;
    let beta = -(ve.1.checked_div(&det)?);
    let r = Real::Exact(rs.0.clone());
    let s = Real::Exact(rs.1.clone());
    let contract = |v: &QuadVec| r.mul(&Real::Exact(v.0.clone())).add(&s.mul(&Real::Exact(v.1.clone())));
    let t = Real::Exact(alpha).mul(&contract(ve));
    let t_prime = Real::Exact(beta).mul(&contract(vc));
    Ok((Real::Exact(e.lambda_exp), t, t_prime))
}

/// Smallest `(k_h, k_f)` in lexicographic order making every requirement
/// hold, with `h₁` inverted when `t < 0` and `μ(J) = t/2`.
pub fn tune_parameters(
    f0: &Mat2Z,
    f0_word: Option<Word>,
    rs: &QuadVec,
    horizons: Horizons,
) -> Result<RigidityParams, RigidityError> {
    let cond = conditions_check(f0, rs)?;
    if !cond.all() {
        return Err(RigidityError::Conditions(format!("{f0}: {cond:?}")));
    }
    let (lambda0, t0, t0_prime) = components(f0, rs)?;
    let oriented = if horizons.reversed { t0.neg() } else { t0.clone() };
    let h_sign: i8 = match oriented.sign() {
        Some(std::cmp::Ordering::Greater) => 1,
        Some(std::cmp::Ordering::Less) => -1,
        Some(std::cmp::Ordering::Equal) => return Err(RigidityError::TVanishes),
        None => return Err(RigidityError::SignUndecided(t0.to_string())),
    };
    let mut last = String::new();
    for k_h in 1..=horizons.power_limit {
        let orient = if horizons.reversed { -1 } else { 1 };
        let scale = real_int(orient * i64::from(h_sign) * i64::from(k_h));
        let t = t0.mul(&scale);
        let t_prime = t0_prime.mul(&scale);
        let half = Real::Exact(QuadVal::rational(num_rational::BigRational::new(1.into(), 2.into()), 1)?);
        for k_f in 1..=horizons.power_limit {
            let params = RigidityParams {
                f0: f0.clone(),
                f0_word: f0_word.clone(),
                rs: rs.clone(),
                h_sign,
                k_h,
                k_f,
                lambda: lambda0.pow(k_f),
                t: t.clone(),
                t_prime: t_prime.clone(),
                mu_j: t.mul(&half),
                n_max: horizons.n_max,
                i_max: horizons.i_max,
                reversed: horizons.reversed,
            };
            let v = params.violations();
            if v.is_empty() {
                return Ok(params);
            }
            last = format!("k_h = {k_h}, k_f = {k_f}: {}", v.join("; "));
        }
    }
    Err(RigidityError::HorizonExhausted { limit: horizons.power_limit, last })
}

/// Growth inequality: `i ≤ t[λ^i − (λ^i − 1)/(λ − 1)]` for each `i`.
pub fn check_eq2(params: &RigidityParams, range: impl IntoIterator<Item = u32>) -> Vec<InequalityCheck> {
    let one = real_int(1);
    let lm1 = params.lambda.sub(&one);
    range
        .into_iter()
        .map(|i| {
            let li = params.lambda.pow(i);
            let geometric = li.sub(&one).div(&lm1).expect("λ > 1");
            let rhs = params.t.mul(&li.sub(&geometric));
            let lhs = real_int(i64::from(i));
            let pass = rhs.certainly_ge(&lhs);
            InequalityCheck { index: i, lhs, rhs, pass }
        })
        .collect()
}

/// Eigenvector inequality: `|τ(f^{−n} h f^n) − λⁿt| ≤ 1`. The left side is computed
/// from the integer vector `f^{−n}·h` and equals `λ⁻ⁿ|t′|`.
pub fn check_eq3(params: &RigidityParams, range: impl IntoIterator<Item = u32>) -> Vec<InequalityCheck> {
    let one = real_int(1);
    range
        .into_iter()
        .map(|n| {
            let tau = Real::Exact(params.tau(n));
            let mut lhs = tau.sub(&params.lambda.pow(n).mul(&params.t)).abs();
            if !lhs.is_exact() {
                // the difference of two wide enclosures loses everything
                lhs = params.t_prime.abs().div(&params.lambda.pow(n)).expect("λ > 1");
            }
            if let (Real::Exact(l), Real::Exact(lambda), Real::Exact(tp)) = (&lhs, &params.lambda, &params.t_prime) {
                debug_assert_eq!(Ok(l.clone()), lambda.pow(n).inverse().map(|inv| (&inv * tp).abs()));
            }
            let pass = one.certainly_ge(&lhs);
            InequalityCheck { index: n, lhs, rhs: one.clone(), pass }
        })
        .collect()
}

/// A word over the free pair with an interior fixed point in the interval
/// model, satisfying the generic-position conditions.
pub fn interior_fixed_element_search(model: &ActionModel, rs: &QuadVec, max_len: usize) -> Result<Candidate, RigidityError> {
    if model.variant() != Variant::Interval {
        return Err(ModelError::WrongVariant(Variant::Interval).into());
    }
    search_candidate(rs, max_len, Some(model)).map_err(|e| match e {
        Sl2zError::NotFound(n) => RigidityError::NotFound(n),
        other => other.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action_models::ModelConfig;

    fn q(s: &str) -> QuadVal {
        s.parse().unwrap()
    }

    fn f0() -> Mat2Z {
        Mat2Z::new(5, 2, 2, 1).unwrap()
    }

    fn rs() -> QuadVec {
        (q("1"), q("√2"))
    }

    pub(crate) fn default_params() -> RigidityParams {
        tune_parameters(&f0(), Some("ab".parse().unwrap()), &rs(), Horizons::default()).unwrap()
    }

    #[test]
    fn default_tuning() {
        let p = default_params();
        assert_eq!((p.h_sign, p.k_h, p.k_f), (-1, 1, 1));
        assert_eq!(p.t, Real::Exact(q("1/4√2")));
        assert_eq!(p.lambda, Real::Exact(q("3+2√2")));
        assert_eq!(p.t_prime, Real::Exact(q("-1-1/4√2")));
        assert_eq!(p.lambda.mul(&p.t), Real::Exact(q("1+3/4√2")));
        assert!(p.violations().is_empty());
        assert!(check_eq2(&p, 1..=40).iter().all(|c| c.pass));
        assert!(check_eq3(&p, 1..=40).iter().all(|c| c.pass));
        // the tuned parameters are a fixed point of tuning
        let again = tune_parameters(&p.f(), p.f_word(), &p.rs, Horizons::default()).unwrap();
        assert_eq!((again.k_h, again.k_f, again.h_sign), (1, 1, -1));
    }

    #[test]
    fn eq2_examples() {
        let p = default_params();
        let c = &check_eq2(&p, [0, 1])[..];
        // i = 0 gives t[1 − 0] = t
        assert_eq!(c[0].rhs, p.t);
        assert!(c[0].pass);
        assert_eq!(c[1].rhs, Real::Exact(q("1+1/2√2")));
        assert!(c[1].pass);
        // λt ≤ 1 eventually fails
        let weak = p.clone().with_mu_j(p.mu_j.clone());
        let weak = RigidityParams { t: Real::Exact(q("1/10")), ..weak };
        let fails: Vec<u32> = check_eq2(&weak, 1..=10).iter().filter(|c| !c.pass).map(|c| c.index).collect();
        assert!(!fails.is_empty());
    }

    #[test]
    fn eq3_examples() {
        let p = default_params();
        let c = &check_eq3(&p, [0, 1, 2])[..];
        assert!(!c[0].pass);
        assert_eq!(c[0].lhs, p.eq3_at_zero());
        assert_eq!(c[1].lhs, Real::Exact(q("1+1/4√2").checked_div(&q("3+2√2")).unwrap()));
        assert!((c[1].lhs.to_f64() - 0.232).abs() < 1e-3);
        assert!(c[1].pass && c[2].pass);
        let lhs: Vec<f64> = check_eq3(&p, 1..=20).iter().map(|c| c.lhs.to_f64()).collect();
        assert!(lhs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn tuner_raises_powers_when_needed() {
        // trace 3, λ = (3+√5)/2 already above 2, but a tiny t needs more
        let f = Mat2Z::new(2, 1, 1, 1).unwrap();
        let p = tune_parameters(&f, None, &(q("1"), q("1/50")), Horizons::default()).unwrap();
        assert!(p.k_f > 1 || p.k_h > 1);
        assert!(p.violations().is_empty());
        assert!(p.is_exact());
        let limited = Horizons { power_limit: 1, ..Horizons::default() };
        let err = tune_parameters(&f, None, &(q("1"), q("1/50")), limited).unwrap_err();
        assert!(matches!(err, RigidityError::HorizonExhausted { limit: 1, .. }), "{err}");
    }

    #[test]
    fn mixed_fields_fall_back_to_enclosures() {
        // discriminant 5 against (1, √2)
        let f = Mat2Z::new(2, 1, 1, 1).unwrap();
        let p = tune_parameters(&f, None, &rs(), Horizons::default()).unwrap();
        assert!(!p.is_exact());
        assert!(p.violations().is_empty());
    }

    #[test]
    fn tuner_errors() {
        assert!(matches!(
            tune_parameters(&Mat2Z::identity(), None, &rs(), Horizons::default()),
            Err(RigidityError::Sl2z(_)) | Err(RigidityError::Conditions(_))
        ));
        // (r, s) orthogonal to the expanding eigenvector of f₀⁻¹
        let ortho = (q("1+√2"), q("1"));
        assert!(matches!(
            tune_parameters(&f0(), None, &ortho, Horizons::default()),
            Err(RigidityError::Conditions(_))
        ));
    }

    #[test]
    fn reversed_orientation_keeps_h() {
        let h = Horizons { reversed: true, ..Horizons::default() };
        let p = tune_parameters(&f0(), None, &rs(), h).unwrap();
        assert_eq!(p.h_sign, 1);
        assert_eq!(p.t, Real::Exact(q("1/4√2")));
        assert_eq!(p.h_vector(), IntVec2::new(1, 0));
        assert_eq!(p.tau(1), q("-1+2√2"));
        assert!(p.violations().is_empty());
    }

    #[test]
    fn fixed_element_search() {
        let m = ActionModel::build(ModelConfig::default_for(Variant::Interval, 3)).unwrap();
        let c = interior_fixed_element_search(&m, &rs(), 3).unwrap();
        assert!(c.fixed_point.is_some());
        assert!(matches!(interior_fixed_element_search(&m, &rs(), 0), Err(RigidityError::NotFound(0))));
        let circle = ActionModel::build(ModelConfig::default_for(Variant::Circle, 1)).unwrap();
        assert!(matches!(
            interior_fixed_element_search(&circle, &rs(), 3),
            Err(RigidityError::Model(ModelError::WrongVariant(_)))
        ));
    }
}
