//! The `2^k` images `W_ε(J)`, `W_ε = (f^{−k}hf^k)^{ε_k} ⋯ (f^{−1}hf)^{ε_1}`.
//!
//! Every `W_ε` lies in `Z²` and preserves `I_id`, where it is the translation
//! by `τ(W_ε)` in μ-coordinates. Disjointness of the images is therefore the
//! statement that consecutive sorted values of `τ(W_ε)` differ by more than
//! `μ(J)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::action_models::{ActionModel, FlowChart, GroupElement, ModelPoint};
use crate::arith::{Interval, QuadVal, Real};
use crate::sl2z::IntVec2;

use super::{tau_of, RigidityError, RigidityParams};

/// `(ε₁, …, ε_k)` packed into the low `k` bits, `ε₁` least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordSpec {
    pub bits: u64,
    pub k: u32,
}

impl WordSpec {
    pub fn new(bits: u64, k: u32) -> Self {
        assert!(k < 64, "k = {k} is too large");
        WordSpec { bits: bits & ((1u64 << k) - 1), k }
    }

    pub fn eps(&self, i: u32) -> bool {
        (1..=self.k).contains(&i) && self.bits >> (i - 1) & 1 == 1
    }

    /// `W_ε` as a word in the semidirect product.
    pub fn element(&self, params: &RigidityParams) -> Result<GroupElement, RigidityError> {
        let f = GroupElement::from_word(&params.f_word().ok_or(RigidityError::MissingWord)?);
        let h = GroupElement::translation(&params.h_vector());
        let mut g = GroupElement::identity();
        for i in (1..=self.k).rev().filter(|&i| self.eps(i)) {
            let mut fi = GroupElement::identity();
            for _ in 0..i {
                fi = fi.concat(&f);
            }
            g = g.concat(&fi.inverse()).concat(&h).concat(&fi);
        }
        Ok(g)
    }
}

impl fmt::Display for WordSpec {
    /// `ε₁ε₂…ε_k` as binary digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            return f.write_str("-");
        }
        for i in 1..=self.k {
            f.write_str(if self.eps(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for WordSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "-" {
            return Ok(WordSpec::new(0, 0));
        }
        if s.len() >= 64 || s.is_empty() {
            return Err(format!("bad ε string `{s}`"));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(format!("bad ε string `{s}`")),
            }
        }
        Ok(WordSpec::new(bits, s.len() as u32))
    }
}

fn conjugate_vectors(params: &RigidityParams, k: u32) -> Vec<IntVec2> {
    let f_inv = params.f().invert();
    let mut v = params.h_vector();
    (1..=k)
        .map(|_| {
            v = f_inv.apply(&v);
            v.clone()
        })
        .collect()
}

fn sum_vector(vs: &[IntVec2], spec: WordSpec) -> IntVec2 {
    let mut acc = IntVec2 { m: BigInt::ZERO, n: BigInt::ZERO };
    for (i, v) in vs.iter().enumerate() {
        if spec.eps(i as u32 + 1) {
            acc = acc.add(v);
        }
    }
    acc
}

/// The words in binary-counting order of `ε`, with their exact `τ(W_ε)`.
pub fn enumerate_words(params: &RigidityParams, k: u32) -> impl Iterator<Item = (WordSpec, QuadVal)> + '_ {
    let vs = conjugate_vectors(params, k);
    let orient = BigInt::from(params.orientation());
    (0..1u64 << k).map(move |bits| {
        let spec = WordSpec::new(bits, k);
        (spec, tau_of(&sum_vector(&vs, spec), &params.rs).scale_int(&orient))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisjointnessCertificate {
    pub k: u32,
    /// Sorted by `τ`; the `i`-th image of `J` is `[c(u) + τ_i, c(v) + τ_i]`.
    pub entries: Vec<(WordSpec, QuadVal)>,
    pub mu_j: Real,
    /// Smallest distance between consecutive images; `None` for a single image.
    pub min_gap: Option<Real>,
    pub params_hash: String,
}

impl DisjointnessCertificate {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.mu_j.is_exact()
    }

    /// μ-coordinates of the `i`-th image of `J`.
    pub fn interval(&self, i: usize) -> (Real, Real) {
        let half = self.mu_j.mul(&Real::Exact("1/2".parse().expect("literal")));
        let tau = Real::Exact(self.entries[i].1.clone());
        (tau.sub(&half), tau.add(&half))
    }
}

/// Two words whose images of `J` are not certified disjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub first: (WordSpec, QuadVal),
    pub second: (WordSpec, QuadVal),
    pub mu_j: Real,
    /// `τ′ − τ − μ(J)`; not certified positive.
    pub gap: Real,
}

struct Keyed {
    spec: WordSpec,
    tau: QuadVal,
    enclosure: Interval,
}

fn cmp_keyed(a: &Keyed, b: &Keyed) -> Ordering {
    let (x, y) = (a.enclosure, b.enclosure);
    if x.hi() < y.lo() {
        Ordering::Less
    } else if y.hi() < x.lo() {
        Ordering::Greater
    } else {
        a.tau.cmp_exact(&b.tau).expect("τ values share the field of (r, s)").then(a.spec.bits.cmp(&b.spec.bits))
    }
}

/// Sorts the `2^k` exact values of `τ(W_ε)` and checks that consecutive
/// differences exceed `μ(J)`.
pub fn certify_disjoint(params: &RigidityParams, k: u32) -> Result<DisjointnessCertificate, Box<Counterexample>> {
    let vs = conjugate_vectors(params, k);
    let orient = BigInt::from(params.orientation());
    let mut keyed: Vec<Keyed> = (0..1u64 << k)
        .into_par_iter()
        .map(|bits| {
            let spec = WordSpec::new(bits, k);
            let tau = tau_of(&sum_vector(&vs, spec), &params.rs).scale_int(&orient);
            let enclosure = tau.to_interval();
            Keyed { spec, tau, enclosure }
        })
        .collect();
    keyed.par_sort_by(cmp_keyed);
    let gaps: Vec<Real> = keyed
        .par_windows(2)
        .map(|w| Real::Exact(&w[1].tau - &w[0].tau).sub(&params.mu_j))
        .collect();
    let mut min_gap: Option<Real> = None;
    for (i, g) in gaps.iter().enumerate() {
        if g.sign() != Some(Ordering::Greater) {
            return Err(Box::new(Counterexample {
                first: (keyed[i].spec, keyed[i].tau.clone()),
                second: (keyed[i + 1].spec, keyed[i + 1].tau.clone()),
                mu_j: params.mu_j.clone(),
                gap: g.clone(),
            }));
        }
        if min_gap.as_ref().is_none_or(|m| g.compare(m) == Some(Ordering::Less)) {
            min_gap = Some(g.clone());
        }
    }
    Ok(DisjointnessCertificate {
        k,
        entries: keyed.into_iter().map(|e| (e.spec, e.tau)).collect(),
        mu_j: params.mu_j.clone(),
        min_gap,
        params_hash: params.hash(),
    })
}

/// `τ_i − Σ_{j<i} τ_j − μ(J)` for `i = 1..=k`: the largest word without
/// `ε_i` ends before the smallest word with it.
pub fn separation_margins(params: &RigidityParams, k: u32) -> Vec<Real> {
    let mut below = QuadVal::zero(params.rs.1.d().max(params.rs.0.d()));
    (1..=k)
        .map(|i| {
            let tau = params.tau(i);
            let margin = Real::Exact(&tau - &below).sub(&params.mu_j);
            below = &below + &tau;
            margin
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub k: u32,
    pub words: usize,
    /// Adjacent words (in exact order) whose model images are out of order or overlap.
    pub mismatches: Vec<(WordSpec, WordSpec)>,
    /// Words that left `I_id` in the model.
    pub unresolved: Vec<WordSpec>,
    /// Words whose conjugations pass through intervals deeper than the model depth.
    pub beyond_depth: Vec<WordSpec>,
}

impl CrossValidation {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty() && self.unresolved.is_empty()
    }
}

/// Evaluates every `W_ε` on the ends of `J` in `model` and compares the
/// order of the images with the exact order of `τ(W_ε)`.
pub fn cross_validate_geometric(
    model: &ActionModel,
    params: &RigidityParams,
    k: u32,
) -> Result<CrossValidation, RigidityError> {
    let f_len = params.f_word().ok_or(RigidityError::MissingWord)?.len();
    let (l, r) = model.identity_gap();
    let (cu, cv) = params.j_bounds();
    let orient = params.orientation() as f64;
    // J in the model, oriented so that μ-coordinates increase with orient
    let ends = [cu.to_f64() * orient, cv.to_f64() * orient].map(|c| l + (r - l) * FlowChart::psi_inv(c));
    let mut exact: Vec<(WordSpec, QuadVal)> = enumerate_words(params, k).collect();
    exact.sort_by(|a, b| a.1.cmp_exact(&b.1).expect("same field").then(a.0.bits.cmp(&b.0.bits)));

    type Row = Result<(WordSpec, Option<(f64, f64)>), RigidityError>;
    let results: Vec<Row> = exact
        .par_iter()
        .map(|(spec, _)| {
            let g = spec.element(params)?;
            let image = |x: f64| match model.evaluate_point(&g, &model.to_point(x)) {
                ModelPoint::InGap { word, pos } if word.is_empty() => Some(orient * model.flow_coordinate(&pos)),
                _ => None,
            };
            let lo = image(ends[0]);
            let hi = image(ends[1]);
            Ok((*spec, lo.zip(hi).map(|(a, b)| if a <= b { (a, b) } else { (b, a) })))
        })
        .collect();

    let mut report = CrossValidation { k, words: exact.len(), mismatches: Vec::new(), unresolved: Vec::new(), beyond_depth: Vec::new() };
    let mut placed: Vec<(WordSpec, (f64, f64))> = Vec::new();
    for res in results {
        let (spec, img) = res?;
        let deepest = (1..=k).rev().find(|&i| spec.eps(i)).unwrap_or(0) as usize;
        if deepest * f_len > model.depth() {
            report.beyond_depth.push(spec);
        }
        match img {
            Some(iv) => placed.push((spec, iv)),
            None => report.unresolved.push(spec),
        }
    }
    for w in placed.windows(2) {
        let ((a, ia), (b, ib)) = (w[0], w[1]);
        if ia.1 >= ib.0 {
            report.mismatches.push((a, b));
        }
    }
    Ok(report)
}
