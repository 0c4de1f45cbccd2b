//! CSV and SVG output of `plot`. Everything is a pure function of the bundle,
//! so repeated runs give identical files.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::arith::{QuadVal, Real};
use crate::rigidity::{packing_min_gap, DisjointnessCertificate};

use super::config::GrowthInput;

/// Largest packing drawn; larger certificates are drawn at this `k`.
pub const SVG_MAX_K: u32 = 10;

pub const STEPS_HEADER: &str = "k,min_gap,total_length_lower_bound,count";
pub const PACKING_HEADER: &str = "eps,tau,left,right";
pub const GROWTH_HEADER: &str = "k,log10_lower_bound,log10_ab";

/// Entries of the `k`-packing inside a larger certificate: the words with
/// `ε_j = 0` for `j > k`, still in sorted order.
pub fn sub_packing(cert: &DisjointnessCertificate, k: u32) -> Vec<(String, QuadVal)> {
    let k = k.min(cert.k);
    cert.entries
        .iter()
        .filter(|(spec, _)| spec.bits >> k == 0)
        .map(|(spec, tau)| {
            let s = spec.to_string();
            let label = if k == 0 { "-".to_string() } else { s[..k as usize].to_string() };
            (label, tau.clone())
        })
        .collect()
}

/// One row per `k ≤ cert.k`: the least gap between consecutive images,
/// `2^k μ(J)` and `2^k`.
pub fn steps_csv(cert: Option<&DisjointnessCertificate>) -> String {
    let mut out = format!("{STEPS_HEADER}\n");
    let Some(cert) = cert else { return out };
    for k in 0..=cert.k {
        let taus: Vec<QuadVal> = sub_packing(cert, k).into_iter().map(|e| e.1).collect();
        let gap = match packing_min_gap(&taus, &cert.mu_j) {
            Ok(Some(g)) => format!("{:e}", g.to_f64()),
            Ok(None) => String::new(),
            Err(_) => "overlap".to_string(),
        };
        let count = taus.len();
        let total = cert.mu_j.mul(&Real::Exact(QuadVal::integer(count as i64, 1).expect("d = 1")));
        let _ = writeln!(out, "{k},{gap},{:e},{count}", total.to_f64());
    }
    out
}

pub fn packing_csv(cert: Option<&DisjointnessCertificate>) -> String {
    match cert {
        Some(c) => c.to_csv(),
        None => format!("{PACKING_HEADER}\n"),
    }
}

fn svg_open(out: &mut String, width: u32, height: u32, title: &str) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#);
    let _ = writeln!(out, r#"<title>{title}</title>"#);
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
}

/// The images of `J` as bars on one row, in μ-coordinates.
pub fn packing_svg(cert: Option<&DisjointnessCertificate>) -> (String, Option<String>) {
    let (w, h, pad) = (1000u32, 120u32, 20.0);
    let mut out = String::new();
    let Some(cert) = cert else {
        svg_open(&mut out, w, h, "empty packing");
        out.push_str("</svg>\n");
        return (out, None);
    };
    let k = cert.k.min(SVG_MAX_K);
    let notice = (cert.k > SVG_MAX_K).then(|| {
        format!("k = {} has {} intervals; the picture shows the k = {k} packing", cert.k, cert.entries.len())
    });
    let half = cert.mu_j.to_f64() / 2.0;
    let rows = sub_packing(cert, k);
    let lo = rows.first().map_or(0.0, |r| r.1.to_f64() - half);
    let hi = rows.last().map_or(1.0, |r| r.1.to_f64() + half);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |v: f64| pad + (v - lo) / span * (w as f64 - 2.0 * pad);
    svg_open(&mut out, w, h, &format!("{} disjoint images of J, k = {k}", rows.len()));
    if let Some(n) = &notice {
        let _ = writeln!(out, "<!-- {n} -->");
    }
    let _ = writeln!(out, r#"<line x1="{pad}" y1="80" x2="{}" y2="80" stroke="black"/>"#, w as f64 - pad);
    for (label, tau) in &rows {
        let c = tau.to_f64();
        let (a, b) = (x(c - half), x(c + half));
        let _ = writeln!(
            out,
            r##"<rect x="{a:.3}" y="40" width="{:.3}" height="30" fill="#4a7ab5"><title>{label}</title></rect>"##,
            (b - a).max(0.5)
        );
    }
    let _ = writeln!(out, r#"<text x="{pad}" y="100" font-size="12">{lo:.4}</text>"#);
    let _ = writeln!(out, r#"<text x="{}" y="100" font-size="12" text-anchor="end">{hi:.4}</text>"#, w as f64 - pad);
    out.push_str("</svg>\n");
    (out, notice)
}

fn log10_bound(g: &GrowthInput, k: u32) -> f64 {
    let a = g.a.to_f64().unwrap_or(f64::NAN);
    let j = g.j.to_f64().unwrap_or(f64::NAN);
    let n = g.n as f64;
    k as f64 * 1.5f64.log10() + n * (4.0f64 / 3.0).log10() + 3.0 * n * a.log10() + j.log10()
}

/// `log₁₀` of the lower bound for `k = N..=k*+5` with `|[a,b]|` and `k*`.
pub fn growth_series(g: &GrowthInput, k_star: u32) -> Vec<(u32, f64)> {
    (g.n..=k_star + 5).map(|k| (k, log10_bound(g, k))).collect()
}

pub fn growth_csv(g: Option<(&GrowthInput, u32)>) -> String {
    let mut out = format!("{GROWTH_HEADER}\n");
    if let Some((g, k_star)) = g {
        let ab = g.ab.to_f64().unwrap_or(f64::NAN).log10();
        for (k, v) in growth_series(g, k_star) {
            let _ = writeln!(out, "{k},{v:e},{ab:e}");
        }
    }
    out
}

pub fn growth_svg(g: Option<(&GrowthInput, u32)>) -> String {
    let (w, h, pad) = (800u32, 400u32, 40.0);
    let mut out = String::new();
    let Some((g, k_star)) = g else {
        svg_open(&mut out, w, h, "empty growth curve");
        out.push_str("</svg>\n");
        return out;
    };
    let series = growth_series(g, k_star);
    let ab = g.ab.to_f64().unwrap_or(f64::NAN).log10();
    let ys = series.iter().map(|p| p.1).chain([ab]);
    let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let yspan = if ymax > ymin { ymax - ymin } else { 1.0 };
    let (k0, k1) = (series[0].0 as f64, series.last().expect("nonempty").0 as f64);
    let kspan = if k1 > k0 { k1 - k0 } else { 1.0 };
    let px = |k: f64| pad + (k - k0) / kspan * (w as f64 - 2.0 * pad);
    let py = |y: f64| h as f64 - pad - (y - ymin) / yspan * (h as f64 - 2.0 * pad);
    svg_open(&mut out, w, h, &format!("2^k A^3N (3/4)^(k-N) |J| against |[a,b]|, k* = {k_star}"));
    let points: Vec<String> = series.iter().map(|&(k, y)| format!("{:.3},{:.3}", px(k as f64), py(y))).collect();
    let _ = writeln!(out, r##"<polyline points="{}" fill="none" stroke="#4a7ab5" stroke-width="2"/>"##, points.join(" "));
    let _ = writeln!(out, r##"<line x1="{pad}" y1="{y:.3}" x2="{}" y2="{y:.3}" stroke="#b54a4a" stroke-dasharray="6 4"/>"##, w as f64 - pad, y = py(ab));
    let ks = log10_bound(g, k_star);
    let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="5" fill="black"/>"#, px(k_star as f64), py(ks));
    let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}" font-size="12">k* = {k_star}</text>"#, px(k_star as f64) + 8.0, py(ks) - 8.0);
    out.push_str("</svg>\n");
    out
}
