//! Flat text form of disjointness certificates and counterexamples.
//!
//! ```text
//! # disjointness certificate
//! k = 2
//! params = <sha-256 of the canonical parameters>
//! mu_j = (0, 1/8, 2)
//! <ε₁…ε_k> <τ as (x, y, d)>
//! ...
//! min_gap = (x, y, d)
//! verdict = disjoint
//! ```
//!
//! Enclosed values are written `~[lo, hi]`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::arith::{Interval, QuadVal, Real};

use super::claim3::{Counterexample, DisjointnessCertificate, WordSpec};

fn real_text(r: &Real) -> String {
    match r {
        Real::Exact(q) => q.triple(),
        Real::Enclosed(i) => format!("~{i}"),
    }
}

fn parse_real(s: &str) -> Result<Real, String> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('~') {
        let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or(format!("bad enclosure `{s}`"))?;
        let (lo, hi) = inner.split_once(',').ok_or(format!("bad enclosure `{s}`"))?;
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad bound in `{s}`"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad bound in `{s}`"))?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(format!("empty enclosure `{s}`"));
        }
        return Ok(Real::Enclosed(Interval::new(lo, hi)));
    }
    QuadVal::from_triple(s).map(Real::Exact).map_err(|e| e.to_string())
}

impl DisjointnessCertificate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# disjointness certificate");
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "params = {}", self.params_hash);
        let _ = writeln!(out, "mu_j = {}", real_text(&self.mu_j));
        for (spec, tau) in &self.entries {
            let _ = writeln!(out, "{spec} {}", tau.triple());
        }
        let gap = self.min_gap.as_ref().map_or("none".to_string(), real_text);
        let _ = writeln!(out, "min_gap = {gap}");
        let _ = writeln!(out, "verdict = disjoint");
        out
    }

    /// Sorted interval endpoints in μ-coordinates, for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,tau,left,right\n");
        for i in 0..self.entries.len() {
            let (l, r) = self.interval(i);
            let (spec, tau) = &self.entries[i];
            let _ = writeln!(out, "{spec},{},{},{}", tau.to_f64(), l.to_f64(), r.to_f64());
        }
        out
    }
}

impl Counterexample {
    pub fn to_text(&self, k: u32, params_hash: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# disjointness counterexample");
        let _ = writeln!(out, "k = {k}");
        let _ = writeln!(out, "params = {params_hash}");
        let _ = writeln!(out, "mu_j = {}", real_text(&self.mu_j));
        let _ = writeln!(out, "{} {}", self.first.0, self.first.1.triple());
        let _ = writeln!(out, "{} {}", self.second.0, self.second.1.triple());
        let _ = writeln!(out, "gap = {}", real_text(&self.gap));
        let _ = writeln!(out, "verdict = overlap");
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateCheck {
    pub k: u32,
    pub intervals: usize,
    pub min_gap: Option<Real>,
}

/// Reads a certificate back without judging it.
pub fn parse_certificate_text(text: &str) -> Result<DisjointnessCertificate, String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let mut field = |name: &str| -> Result<String, String> {
        let line = lines.next().ok_or(format!("missing `{name}`"))?;
        let (key, value) = line.split_once(" = ").ok_or(format!("expected `{name} = ...`, got `{line}`"))?;
        if key != name {
            return Err(format!("expected `{name}`, got `{key}`"));
        }
        Ok(value.to_string())
    };
    let k: u32 = field("k")?.parse().map_err(|_| "bad k".to_string())?;
    if k >= 64 {
        return Err(format!("k = {k} is too large"));
    }
    let params_hash = field("params")?;
    let mu_j = parse_real(&field("mu_j")?)?;
    let body: Vec<&str> = lines.collect();
    let (rows, footer) = body.split_at(body.len().saturating_sub(2));
    let mut entries = Vec::with_capacity(rows.len());
    for line in rows {
        let (spec, tau) = line.split_once(' ').ok_or(format!("bad entry `{line}`"))?;
        let spec: WordSpec = spec.parse()?;
        if spec.k != k {
            return Err(format!("entry `{line}` has the wrong length"));
        }
        entries.push((spec, QuadVal::from_triple(tau).map_err(|e| e.to_string())?));
    }
    let [gap_line, verdict] = footer else { return Err("missing footer".into()) };
    let recorded = gap_line.strip_prefix("min_gap = ").ok_or("missing `min_gap`")?;
    let min_gap = if recorded == "none" { None } else { Some(parse_real(recorded)?) };
    if *verdict != "verdict = disjoint" {
        return Err(format!("unexpected verdict `{verdict}`"));
    }
    Ok(DisjointnessCertificate { k, entries, mu_j, min_gap, params_hash })
}

/// Re-checks a certificate file on its own terms: `2^k` distinct `ε`
/// strings, strictly increasing `τ`, consecutive gaps above `μ(J)`, and the
/// recorded minimal gap.
pub fn check_certificate_text(text: &str) -> Result<CertificateCheck, String> {
    let cert = parse_certificate_text(text)?;
    let k = cert.k;
    let mut seen = std::collections::HashSet::new();
    for (spec, _) in &cert.entries {
        if !seen.insert(spec.bits) {
            return Err(format!("duplicate word {spec}"));
        }
    }
    if cert.entries.len() as u64 != 1u64 << k {
        return Err(format!("{} intervals, expected {}", cert.entries.len(), 1u64 << k));
    }
    let min_gap = packing_min_gap(&cert.entries.iter().map(|e| e.1.clone()).collect::<Vec<_>>(), &cert.mu_j)?;
    let recorded = cert.min_gap.as_ref().map_or("none".to_string(), real_text);
    if min_gap.as_ref().map_or("none".to_string(), real_text) != recorded {
        return Err(format!("recorded minimal gap {recorded} does not match"));
    }
    Ok(CertificateCheck { k, intervals: cert.entries.len(), min_gap })
}

/// Smallest `τ_{i+1} − τ_i − μ(J)` over a list that must be strictly
/// increasing with every gap certified positive.
pub fn packing_min_gap(taus: &[QuadVal], mu_j: &Real) -> Result<Option<Real>, String> {
    let mut min_gap: Option<Real> = None;
    for w in taus.windows(2) {
        let gap = Real::Exact(w[1].checked_sub(&w[0]).map_err(|e| e.to_string())?).sub(mu_j);
        if gap.sign() != Some(Ordering::Greater) {
            return Err(format!("images at {} and {} are not separated", w[0], w[1]));
        }
        if min_gap.as_ref().is_none_or(|m| gap.compare(m) == Some(Ordering::Less)) {
            min_gap = Some(gap);
        }
    }
    Ok(min_gap)
}
