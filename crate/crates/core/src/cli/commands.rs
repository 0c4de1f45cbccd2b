//! The subcommands. Each returns the exit code it wants; the text printed to
//! the terminal goes through `out`.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::action_models::{relation_residual, ActionModel, GroupElement, ModelError, Variant};
use crate::arith::{QuadVal, Real};
use crate::invariants::{claim1_suite, rotation_number, torus_suite};
use crate::rigidity::{
    certify_disjoint, check_eq2, check_eq3, cross_validate_geometric, growth_contradiction, growth_threshold_log,
    interior_fixed_element_search, parse_certificate_text, separation_margins, tune_parameters, DisjointnessCertificate,
    InequalityCheck, RigidityError,
};
use crate::sl2z::{conditions_check, sanov_generators, search_candidate, IntVec2, Sl2zError, Word};

use super::config::{F0Choice, GrowthInput, RunConfig};
use super::model_file::{read_model, write_model};
use super::render;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Counterexample = 2,
    Usage = 64,
    Construction = 65,
    Io = 66,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    fn new(exit: Exit, message: impl Into<String>) -> Self {
        CliError { exit, message: message.into() }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let exit = match e {
            ModelError::NonSummable(_) => Exit::Usage,
            _ => Exit::Construction,
        };
        CliError::new(exit, e.to_string())
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        CliError::new(Exit::Construction, e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::new(Exit::Io, format!("{}: {e}", path.display()))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) {
    let _ = writeln!(out, "{}", line.as_ref());
}

fn model_for(cfg: &RunConfig) -> Result<ActionModel, CliError> {
    match &cfg.model {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            read_model(&text).map_err(|e| CliError::new(Exit::Construction, format!("{}: {e}", path.display())))
        }
        None => Ok(ActionModel::build(cfg.model_config())?),
    }
}

pub const RESIDUAL_WORDS: [&str; 3] = ["a", "b", "ab"];
pub const RESIDUAL_VECTORS: [(i64, i64); 3] = [(1, 0), (0, 1), (2, -1)];

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructSummary {
    pub gaps: usize,
    pub materialized: String,
    pub residual: String,
    /// `(f, v, max residual, samples)` for every pair the depth allows.
    pub residuals: Vec<(String, String, f64, usize)>,
    pub model_path: PathBuf,
}

pub fn cmd_construct(cfg: &RunConfig, out: &mut dyn Write) -> Result<ConstructSummary, CliError> {
    let model = ActionModel::build(cfg.model_config())?;
    let model_path = write_file(&cfg.out_dir, "model.txt", &write_model(&model))?;
    let mut residuals = Vec::new();
    for f in RESIDUAL_WORDS {
        let w: Word = f.parse().expect("literal");
        for (m, n) in RESIDUAL_VECTORS {
            let v = IntVec2::new(m, n);
            let r = relation_residual(&model, &w, &v, cfg.samples);
            if let Some(max) = r.max {
                residuals.push((f.to_string(), v.to_string(), max, r.evaluated));
            }
        }
    }
    let summary = ConstructSummary {
        gaps: model.gaps().len(),
        materialized: model.materialized_length().to_string(),
        residual: model.truncation_residual().to_string(),
        residuals,
        model_path,
    };
    let mut text = String::new();
    let _ = writeln!(text, "{} model, depth {}", model.variant(), model.depth());
    let _ = writeln!(text, "gaps = {}", summary.gaps);
    let _ = writeln!(text, "materialized length = {}", summary.materialized);
    let _ = writeln!(text, "truncation residual = {}", summary.residual);
    if summary.residuals.is_empty() {
        let _ = writeln!(text, "relation residuals: none, the depth is too small for any sample");
    } else {
        let _ = writeln!(text, "relation residuals |f h_v f^-1 - h_(f.v)|:");
        for (f, v, max, n) in &summary.residuals {
            let _ = writeln!(text, "  f = {f:<2} v = {v:<8} max = {max:e} over {n} samples");
        }
    }
    write_file(&cfg.out_dir, "construct.txt", &text)?;
    out.write_all(text.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e))?;
    say(out, format!("wrote {}", summary.model_path.display()));
    Ok(summary)
}

fn resolve_f0(cfg: &RunConfig, model: &ActionModel) -> Result<Word, CliError> {
    match &cfg.f0 {
        F0Choice::Word(w) => Ok(w.clone()),
        F0Choice::Search => {
            let found = if model.variant() == Variant::Interval {
                interior_fixed_element_search(model, &cfg.flow_times, cfg.search_len)?
            } else {
                search_candidate(&cfg.flow_times, cfg.search_len, None).map_err(|e| match e {
                    Sl2zError::NotFound(n) => CliError::new(Exit::Construction, format!("no candidate up to length {n}")),
                    other => CliError::new(Exit::Construction, other.to_string()),
                })?
            };
            Ok(found.word)
        }
    }
}

/// One line of the verification summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub certificate: Option<DisjointnessCertificate>,
    pub files: Vec<PathBuf>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit(&self) -> Exit {
        if self.all_pass() {
            Exit::Ok
        } else {
            Exit::Counterexample
        }
    }
}

fn inequality_table(title: &str, rows: &[InequalityCheck]) -> String {
    let mut s = format!("# {title}\n");
    for r in rows {
        let _ = writeln!(s, "{} {} {} {}", r.index, r.lhs, r.rhs, if r.pass { "pass" } else { "fail" });
    }
    s
}

fn growth_text(g: &GrowthInput, k_star: u32, log_k: u32) -> String {
    format!("a = {}\nn = {}\nj = {}\nab = {}\nk_star = {k_star}\nk_star_log = {log_k}\n", g.a, g.n, g.j, g.ab)
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<VerifyReport, CliError> {
    let model = model_for(cfg)?;
    let rs = &model.config().flow_times;
    let dir = &cfg.out_dir;
    let mut checks: Vec<Check> = Vec::new();
    let mut files = vec![write_file(dir, "config.txt", &cfg.to_text())?];
    let mut check = |name: &str, pass: bool, detail: String| {
        checks.push(Check { name: name.to_string(), pass, detail });
    };

    let word = resolve_f0(cfg, &model)?;
    let f0 = word.to_matrix(&sanov_generators());
    let cond = conditions_check(&f0, rs).map_err(|e| CliError::new(Exit::Construction, e.to_string()))?;
    check("conditions", cond.all(), format!("f0 = {word} = {f0}: {cond:?}"));
    let mut params = tune_parameters(&f0, Some(word.clone()), rs, cfg.horizons)?;
    if let Some(mu) = &cfg.mu_j {
        params = params.with_mu_j(Real::Exact(mu.clone()));
    }
    files.push(write_file(dir, "params.txt", &format!("{params}\nhash = {}\n", params.hash()))?);

    let eq2 = check_eq2(&params, 1..=cfg.horizons.i_max);
    let eq3 = check_eq3(&params, 0..=cfg.horizons.n_max);
    let eq2_fail = eq2.iter().filter(|r| !r.pass).count();
    let eq3_fail = eq3.iter().skip(1).filter(|r| !r.pass).count();
    check("growth inequality", eq2_fail == 0, format!("{} of {} indices fail", eq2_fail, eq2.len()));
    check(
        "eigenvector inequality",
        eq3_fail == 0,
        format!("{eq3_fail} of {} indices n >= 1 fail; at n = 0 the left side is {}", eq3.len() - 1, eq3[0].lhs),
    );
    let mut ineq = inequality_table("index lhs rhs verdict, growth inequality i <= t(λ^i - (λ^i - 1)/(λ - 1))", &eq2);
    ineq.push_str(&inequality_table("index lhs rhs verdict, eigenvector inequality λ^-n |t'| <= 1", &eq3));
    files.push(write_file(dir, "inequalities.txt", &ineq)?);

    let margins = separation_margins(&params, cfg.k_max);
    let bad_margin = margins.iter().position(|m| m.sign() != Some(Ordering::Greater));
    check(
        "separation margins",
        bad_margin.is_none(),
        match bad_margin {
            Some(i) => format!("margin at i = {} is {}", i + 1, margins[i]),
            None => format!("positive for i = 1..={}", cfg.k_max),
        },
    );
    let certificate = match certify_disjoint(&params, cfg.k_max) {
        Ok(cert) => {
            let gap = cert.min_gap.as_ref().map_or("none".to_string(), |g| g.to_string());
            check("disjointness", true, format!("{} intervals at k = {}, least gap {gap}", cert.len(), cfg.k_max));
            files.push(write_file(dir, "claim3.cert", &cert.to_text())?);
            Some(cert)
        }
        Err(ce) => {
            check("disjointness", false, format!("{} and {} overlap, gap {}", ce.first.0, ce.second.0, ce.gap));
            files.push(write_file(dir, "claim3.counterexample", &ce.to_text(cfg.k_max, &params.hash()))?);
            None
        }
    };

    let xval = cross_validate_geometric(&model, &params, cfg.xval_k)?;
    let mut xtext = format!("k = {}\nwords = {}\nbeyond_depth = {}\n", xval.k, xval.words, xval.beyond_depth.len());
    for (a, b) in &xval.mismatches {
        let _ = writeln!(xtext, "mismatch {a} {b}");
    }
    for w in &xval.unresolved {
        let _ = writeln!(xtext, "unresolved {w}");
    }
    files.push(write_file(dir, "crossval.txt", &xtext)?);
    check(
        "geometric agreement",
        xval.agrees(),
        format!("{} words at k = {}, {} mismatches, {} unresolved", xval.words, xval.k, xval.mismatches.len(), xval.unresolved.len()),
    );

    let rows = claim1_suite(&model, rs, cfg.claim1_words, cfg.seed).map_err(|e| CliError::new(Exit::Construction, e.to_string()))?;
    let mut ctext = String::from("# word predicate empirical\n");
    for r in &rows {
        let emp = r.empirical.map_or("deep".to_string(), |b| b.to_string());
        let _ = writeln!(ctext, "{} {} {emp}", r.word, r.predicate);
    }
    files.push(write_file(dir, "claim1.txt", &ctext)?);
    let violations = rows.iter().filter(|r| r.is_violation()).count();
    let tested = rows.iter().filter(|r| r.predicate && r.empirical.is_some()).count();
    check("image disjointness", violations == 0, format!("{violations} violations among {tested} tested words, seed {}", cfg.seed));

    let zero = (QuadVal::zero(1), QuadVal::zero(1));
    let torus = torus_suite(&zero, cfg.torus_words, cfg.seed).map_err(|e| CliError::new(Exit::Construction, e.to_string()))?;
    let mut ttext = String::from("# word fixes_(0,0)\n");
    for (w, ok) in &torus {
        let _ = writeln!(ttext, "{w} {ok}");
    }
    files.push(write_file(dir, "torus.txt", &ttext)?);
    check("torus fixed point", torus.iter().all(|t| t.1), format!("{} words", torus.len()));

    if model.variant() == Variant::Circle {
        let mut worst = 0.0f64;
        let mut rtext = String::from("# element rotation_number bound\n");
        for g in ["h1", "h2", "h1^2 h2"] {
            let e: GroupElement = g.parse().expect("literal");
            let est = rotation_number(&model, &e, cfg.rotation_iterations).map_err(|e| CliError::new(Exit::Construction, e.to_string()))?;
            worst = worst.max(est.distance_to(0.0) / est.bound);
            let _ = writeln!(rtext, "{g} {:e} {:e}", est.value, est.bound);
        }
        files.push(write_file(dir, "rotation.txt", &rtext)?);
        check("rotation numbers", worst <= 1.0, format!("worst distance to 0 is {worst:.3} of the bound"));
    }

    let g = &cfg.growth;
    let gc = growth_contradiction(&g.a, g.n, &g.j, &g.ab);
    let log_k = match (num_traits::ToPrimitive::to_f64(&g.a), num_traits::ToPrimitive::to_f64(&g.j), num_traits::ToPrimitive::to_f64(&g.ab)) {
        (Some(a), Some(j), Some(ab)) => growth_threshold_log(a, g.n, j, ab),
        _ => u32::MAX,
    };
    files.push(write_file(dir, "growth.txt", &growth_text(g, gc.k_star, log_k))?);
    check("growth contradiction", gc.holds() && gc.k_star.abs_diff(log_k) <= 1, format!("k* = {} (logarithmic route {log_k})", gc.k_star));

    let mut summary = String::new();
    for c in &checks {
        let _ = writeln!(summary, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let report_exit = if checks.iter().all(|c| c.pass) { "0" } else { "2" };
    let _ = writeln!(summary, "exit = {report_exit}");
    files.push(write_file(dir, "summary.txt", &summary)?);
    out.write_all(summary.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e))?;
    Ok(VerifyReport { checks, certificate, files })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotReport {
    pub files: Vec<PathBuf>,
    pub notice: Option<String>,
    pub intervals: usize,
}

fn read_growth(text: &str) -> Option<(GrowthInput, u32)> {
    let get = |k: &str| text.lines().find_map(|l| l.strip_prefix(&format!("{k} = ")).map(str::to_string));
    Some((
        GrowthInput {
            a: get("a")?.parse().ok()?,
            n: get("n")?.parse().ok()?,
            j: get("j")?.parse().ok()?,
            ab: get("ab")?.parse().ok()?,
        },
        get("k_star")?.parse().ok()?,
    ))
}

/// Renders the packing and growth pictures of a `verify` bundle into the
/// bundle directory.
pub fn cmd_plot(bundle: &Path, out: &mut dyn Write) -> Result<PlotReport, CliError> {
    if !bundle.is_dir() {
        return Err(CliError::new(Exit::Io, format!("{}: no such bundle directory", bundle.display())));
    }
    let cert_path = bundle.join("claim3.cert");
    let cert = match fs::read_to_string(&cert_path) {
        Ok(text) => Some(parse_certificate_text(&text).map_err(|e| CliError::new(Exit::Construction, format!("{}: {e}", cert_path.display())))?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(io_err(&cert_path, e)),
    };
    let growth = fs::read_to_string(bundle.join("growth.txt")).ok().and_then(|t| read_growth(&t));
    let growth_ref = growth.as_ref().map(|(g, k)| (g, *k));
    let (svg, notice) = render::packing_svg(cert.as_ref());
    let files = vec![
        write_file(bundle, "packing.svg", &svg)?,
        write_file(bundle, "packing.csv", &render::packing_csv(cert.as_ref()))?,
        write_file(bundle, "steps.csv", &render::steps_csv(cert.as_ref()))?,
        write_file(bundle, "growth.csv", &render::growth_csv(growth_ref))?,
        write_file(bundle, "growth.svg", &render::growth_svg(growth_ref))?,
    ];
    if let Some(n) = &notice {
        say(out, format!("notice: {n}"));
    }
    for f in &files {
        say(out, format!("wrote {}", f.display()));
    }
    Ok(PlotReport { files, notice, intervals: cert.map_or(0, |c| c.len()) })
}

pub fn cmd_search_element(cfg: &RunConfig, out: &mut dyn Write) -> Result<Word, CliError> {
    let model = match cfg.variant {
        Variant::Interval => Some(model_for(cfg)?),
        Variant::Circle => None,
    };
    let c = match &model {
        Some(m) => interior_fixed_element_search(m, &cfg.flow_times, cfg.search_len)?,
        None => search_candidate(&cfg.flow_times, cfg.search_len, None).map_err(|e| match e {
            Sl2zError::NotFound(n) => CliError::new(Exit::Construction, format!("no candidate up to length {n}")),
            other => CliError::new(Exit::Construction, other.to_string()),
        })?,
    };
    say(out, format!("word = {}", c.word));
    say(out, format!("matrix = {}", c.matrix));
    if let Some(x) = c.fixed_point {
        say(out, format!("interior fixed point near {x:e}"));
    }
    Ok(c.word)
}
