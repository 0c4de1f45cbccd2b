//! One line per acceptance criterion; exits nonzero if any fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rigidity_core::action_models::{relation_residual, ActionModel, GroupElement, ModelConfig, Variant};
use rigidity_core::arith::{QuadVal, Real};
use rigidity_core::cli::{cmd_verify, RunConfig};
use rigidity_core::invariants::{
    claim1_suite, conjugate_translation_number, conjugate_translation_number_eigen, eigen_components, rotation_number,
    torus_suite, TranslationData,
};
use rigidity_core::rigidity::{
    certify_disjoint, check_eq2, check_eq3, cross_validate_geometric, flat_germ_probe, growth_contradiction,
    growth_threshold_log, separation_margins, tune_parameters, Horizons, LinearGerm, RigidityParams,
};
use rigidity_core::sl2z::{IntVec2, Mat2Z, Word};

type Outcome = Result<String, String>;

fn q(s: &str) -> QuadVal {
    s.parse().unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn f0() -> Mat2Z {
    Mat2Z::new(5, 2, 2, 1).unwrap()
}

fn rs() -> (QuadVal, QuadVal) {
    (q("1"), q("√2"))
}

fn default_params() -> RigidityParams {
    tune_parameters(&f0(), Some("ab".parse().unwrap()), &rs(), Horizons::default()).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn default_pipeline() -> Outcome {
    let start = Instant::now();
    let p = tune_parameters(&f0(), Some("ab".parse().unwrap()), &rs(), Horizons::default()).map_err(|e| e.to_string())?;
    let eq2 = check_eq2(&p, 1..=40);
    let eq3 = check_eq3(&p, 1..=40);
    let elapsed = start.elapsed();
    ensure(p.k_h == 1 && p.k_f == 1 && p.h_sign == -1, format!("k_h = {}, k_f = {}, sign {}", p.k_h, p.k_f, p.h_sign))?;
    ensure(p.t == Real::Exact(q("1/4√2")), format!("t = {}", p.t))?;
    ensure(p.lambda == Real::Exact(q("3+2√2")), format!("λ = {}", p.lambda))?;
    ensure(p.is_exact(), "parameters are not exact")?;
    ensure(eq2.iter().chain(&eq3).all(|c| c.pass && c.lhs.is_exact() && c.rhs.is_exact()), "an inequality fails")?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("t = {}, λ = {}, 80 exact checks in {elapsed:.2?}", p.t, p.lambda))
}

fn claim3_at_scale() -> Outcome {
    let p = default_params();
    let start = Instant::now();
    for k in 0..=14u32 {
        let cert = certify_disjoint(&p, k).map_err(|ce| format!("k = {k}: {} and {} overlap", ce.first.0, ce.second.0))?;
        ensure(cert.len() == 1 << k && cert.is_exact(), format!("k = {k}: {} intervals", cert.len()))?;
    }
    let elapsed = start.elapsed();
    let margins = separation_margins(&p, 14);
    ensure(
        margins.iter().all(|m| m.is_exact() && m.sign() == Some(std::cmp::Ordering::Greater)),
        "a separation margin is not positive",
    )?;
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("2^k intervals for k = 0..=14 in {elapsed:.2?}, 14 positive margins"))
}

fn backend_agreement() -> Outcome {
    let model = ActionModel::build(ModelConfig::default_for(Variant::Interval, 8)).map_err(|e| e.to_string())?;
    let p = default_params();
    let mut words = 0;
    for k in 0..=6 {
        let x = cross_validate_geometric(&model, &p, k).map_err(|e| e.to_string())?;
        ensure(x.words == 1 << k, "word count")?;
        ensure(x.agrees(), format!("k = {k}: {} mismatches, {} unresolved", x.mismatches.len(), x.unresolved.len()))?;
        words += x.words;
    }
    Ok(format!("{words} words over k = 0..=6 on the depth-8 interval model, zero mismatches"))
}

fn semidirect_relations() -> Outcome {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for v in [Variant::Circle, Variant::Interval] {
        let model = ActionModel::build(ModelConfig::default_for(v, 4)).map_err(|e| e.to_string())?;
        for f in ["a", "b", "ab"] {
            let w: Word = f.parse().unwrap();
            for (m, n) in [(1, 0), (0, 1), (2, -1)] {
                let r = relation_residual(&model, &w, &IntVec2::new(m, n), 1000);
                let max = r.max.ok_or(format!("{v} {f}: no samples"))?;
                ensure(r.evaluated >= 1000, format!("{v} {f}: {} samples", r.evaluated))?;
                ensure(max <= 1e-9, format!("{v} f = {f} v = ({m}, {n}): residual {max:e}"))?;
                worst = worst.max(max);
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs on both variants, worst residual {worst:e}"))
}

fn claim1_suite_check() -> Outcome {
    let mut tested = 0;
    for v in [Variant::Interval, Variant::Circle] {
        let model = ActionModel::build(ModelConfig::default_for(v, 6)).map_err(|e| e.to_string())?;
        let rows = claim1_suite(&model, &rs(), 100, 0).map_err(|e| e.to_string())?;
        ensure(rows.len() == 100, "word count")?;
        let bad: Vec<String> = rows.iter().filter(|r| r.is_violation()).map(|r| r.word.to_string()).collect();
        ensure(bad.is_empty(), format!("{v}: violations {bad:?}"))?;
        ensure(rows.iter().all(|r| r.empirical.is_some()), format!("{v}: some words too deep"))?;
        tested += rows.iter().filter(|r| r.predicate).count();
    }
    Ok(format!("100 seeded hyperbolic words on each variant, {tested} with the predicate, zero violations"))
}

fn eigen_identity() -> Outcome {
    let td = TranslationData::new(f0(), rs()).map_err(|e| e.to_string())?;
    let (t, t_prime) = eigen_components(&td);
    let lambda = td.lambda().map_err(|e| e.to_string())?;
    for n in 0..=30u32 {
        let integer_route = conjugate_translation_number(&td, n);
        let eigen_route = conjugate_translation_number_eigen(&td, n).map_err(|e| e.to_string())?;
        let ln = lambda.pow(n);
        let closed = &(&ln * &t) + &(&ln.inverse().unwrap() * &t_prime);
        ensure(integer_route == eigen_route && eigen_route == closed, format!("n = {n}: routes differ"))?;
        ensure(integer_route.triple() == closed.triple(), format!("n = {n}: serializations differ"))?;
    }
    Ok(format!("n = 0..=30, λ = {lambda}, t = {t}, t' = {t_prime}"))
}

fn growth() -> Outcome {
    let c = growth_contradiction(&rat(1, 2), 4, &rat(1, 100), &rat(1, 1));
    let log = growth_threshold_log(0.5, 4, 0.01, 1.0);
    ensure(c.k_star == 30 && log == 30 && c.holds(), format!("k* = {}, logarithmic {log}", c.k_star))?;
    let js = [rat(1, 1000), rat(1, 100), rat(1, 20), rat(1, 4), rat(1, 1)];
    let abs = [rat(1, 4), rat(1, 2), rat(1, 1), rat(4, 1), rat(32, 1)];
    let grid: Vec<Vec<u32>> =
        js.iter().map(|j| abs.iter().map(|ab| growth_contradiction(&rat(1, 2), 4, j, ab).k_star).collect()).collect();
    for (i, row) in grid.iter().enumerate() {
        ensure(row.windows(2).all(|w| w[0] <= w[1]), format!("k* not monotone in |[a,b]| at row {i}"))?;
    }
    for col in 0..abs.len() {
        ensure(grid.windows(2).all(|w| w[0][col] >= w[1][col]), format!("k* not monotone in |J| at column {col}"))?;
    }
    Ok(format!("k* = 30 on both routes, monotone on the 5x5 grid {grid:?}"))
}

fn rotation_and_torus() -> Outcome {
    let model = ActionModel::build(ModelConfig::default_for(Variant::Circle, 4)).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for g in ["h1", "h2", "h1^2 h2"] {
        let e: GroupElement = g.parse().unwrap();
        let est = rotation_number(&model, &e, 10_000).map_err(|e| e.to_string())?;
        ensure(est.distance_to(0.0) <= 1e-4, format!("ρ({g}) = {}", est.value))?;
        worst = worst.max(est.distance_to(0.0));
    }
    let zero = (QuadVal::zero(1), QuadVal::zero(1));
    let torus = torus_suite(&zero, 20, 0).map_err(|e| e.to_string())?;
    ensure(torus.len() == 20 && torus.iter().all(|t| t.1), "torus check fails")?;
    Ok(format!("worst |ρ| = {worst:e} at 10^4 iterations, (0, 0) fixed by 20 seeded words"))
}

fn flat_germ() -> Outcome {
    let a = 0.25;
    let r = flat_germ_probe(&LinearGerm { a, slope: 2.0 }, a).map_err(|e| e.to_string())?;
    let generic = flat_germ_probe(&|x: f64| a + 2.0 * (x - a), a).map_err(|e| e.to_string())?;
    for rep in [&r, &generic] {
        ensure(rep.final_error <= 0.05, format!("final error {}", rep.final_error))?;
        ensure(rep.monotone, format!("not monotone: {:?}", rep.quotients))?;
    }
    Ok(format!("quotients {:?}", r.quotients))
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = RunConfig { out_dir: dir.path().join("bundle"), ..RunConfig::default() };
    let mut sink = Vec::new();
    let first = cmd_verify(&cfg, &mut sink).map_err(|e| e.message)?;
    ensure(first.all_pass(), "default verify does not pass")?;
    let a = snapshot(&cfg.out_dir);
    fs::remove_dir_all(&cfg.out_dir).map_err(|e| e.to_string())?;
    cmd_verify(&cfg, &mut sink).map_err(|e| e.message)?;
    let b = snapshot(&cfg.out_dir);
    let names: Vec<&str> = a.iter().map(|f| f.0.as_str()).collect();
    ensure(names.contains(&"claim3.cert"), "no certificate written")?;
    ensure(a == b, "bundles differ")?;
    Ok(format!("{} files byte-identical across two runs: {}", a.len(), names.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("default pipeline certification", default_pipeline),
        ("disjointness at scale", claim3_at_scale),
        ("backend agreement", backend_agreement),
        ("semidirect relations", semidirect_relations),
        ("image disjointness suite", claim1_suite_check),
        ("eigen identity", eigen_identity),
        ("growth contradiction", growth),
        ("rotation numbers", rotation_and_torus),
        ("flat germ probe", flat_germ),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
