//! `RunConfig`: flat `key = value` text, one entry per line, `#` comments.
//! Numbers are exact: integers, rationals `p/q`, and quadratic values
//! `x+y√d` (ASCII `sqrt` or `r` for `√`).

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::action_models::{BasePoint, GapSchedule, ModelConfig, Variant};
use crate::arith::QuadVal;
use crate::rigidity::Horizons;
use crate::sl2z::Word;

/// How `f₀` is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum F0Choice {
    Word(Word),
    Search,
}

impl fmt::Display for F0Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            F0Choice::Word(w) => write!(f, "{w}"),
            F0Choice::Search => f.write_str("search"),
        }
    }
}

/// Inputs of the growth contradiction.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthInput {
    pub a: BigRational,
    pub n: u32,
    pub j: BigRational,
    pub ab: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub variant: Variant,
    pub depth: usize,
    pub schedule: GapSchedule,
    pub base_point: BasePoint,
    /// `(t₁, t₂)`, which is also `(r, s)`.
    pub flow_times: (QuadVal, QuadVal),
    pub f0: F0Choice,
    pub search_len: usize,
    pub horizons: Horizons,
    pub k_max: u32,
    pub xval_k: u32,
    /// Replaces `μ(J) = t/2`.
    pub mu_j: Option<QuadVal>,
    pub claim1_words: usize,
    pub torus_words: usize,
    pub samples: usize,
    pub rotation_iterations: usize,
    pub seed: u64,
    pub growth: GrowthInput,
    pub out_dir: PathBuf,
    pub model: Option<PathBuf>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Default for RunConfig {
    fn default() -> Self {
        let model = ModelConfig::default_for(Variant::Interval, 8);
        RunConfig {
            variant: model.variant,
            depth: model.depth,
            schedule: model.schedule,
            base_point: model.base_point,
            flow_times: model.flow_times,
            f0: F0Choice::Word("ab".parse().expect("literal")),
            search_len: 6,
            horizons: Horizons::default(),
            k_max: 10,
            xval_k: 6,
            mu_j: None,
            claim1_words: 100,
            torus_words: 20,
            samples: 1000,
            rotation_iterations: 10_000,
            seed: 0,
            growth: GrowthInput { a: rat(1, 2), n: 4, j: rat(1, 100), ab: rat(1, 1) },
            out_dir: PathBuf::from("out"),
            model: None,
        }
    }
}

/// A rejected entry, located by line number or by flag name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub position: String,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}: {}", self.position, self.message)
        } else {
            write!(f, "{}: `{}`: {}", self.position, self.key, self.message)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

pub const KEYS: &[(&str, &str)] = &[
    ("variant", "circle | interval"),
    ("depth", "maximal word length L of materialized gaps"),
    ("gap_ratio", "q in the gap length c·q^(n+1), rational"),
    ("gap_scale", "c in the gap length c·q^(n+1), rational"),
    ("base_point", "pi, or an exact quadratic value"),
    ("t1", "flow time of h1 and value r, exact quadratic"),
    ("t2", "flow time of h2 and value s, exact quadratic"),
    ("f0", "word over a, b, A, B, or `search`"),
    ("search_len", "longest word tried by the search"),
    ("k_max", "largest k certified"),
    ("n_max", "horizon for the eigenvector inequality"),
    ("i_max", "horizon for the growth inequality"),
    ("power_limit", "largest power of h or f tried by the tuner"),
    ("reversed", "true to work at the right end of the interval"),
    ("mu_j", "`auto` for t/2, or an exact override"),
    ("xval_k", "largest k checked against the geometric model"),
    ("claim1_words", "number of seeded words in the disjointness suite"),
    ("torus_words", "number of seeded words in the torus suite"),
    ("samples", "sample points per relation residual"),
    ("rotation_iterations", "iterations per rotation estimate"),
    ("seed", "seed of every randomized suite"),
    ("growth_a", "A of the growth bound, rational in (0,1)"),
    ("growth_n", "N of the growth bound"),
    ("growth_j", "|J| of the growth bound, rational"),
    ("growth_ab", "|[a,b]| of the growth bound, rational"),
    ("out_dir", "output directory"),
    ("model", "model file written by `construct`, or `none`"),
];

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|_| format!("`{s}` is not an exact rational"))
}

fn positive_rational(s: &str) -> Result<BigRational, String> {
    let q = parse_rational(s)?;
    if q.is_positive() {
        Ok(q)
    } else {
        Err(format!("{q} is not positive"))
    }
}

fn parse_quad(s: &str) -> Result<QuadVal, String> {
    s.parse::<QuadVal>().map_err(|e| e.to_string())
}

fn parse_num<T>(s: &str, max: T) -> Result<T, String>
where
    T: std::str::FromStr + PartialOrd + fmt::Display + Copy,
{
    let v: T = s.trim().parse().map_err(|_| format!("`{s}` is not a non-negative integer"))?;
    if v > max {
        return Err(format!("{v} exceeds the limit {max}"));
    }
    Ok(v)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

impl RunConfig {
    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "variant" => self.variant = v.parse()?,
            "depth" => self.depth = parse_num(v, 12usize)?,
            "gap_ratio" => self.schedule.q = positive_rational(v)?,
            "gap_scale" => self.schedule.c = positive_rational(v)?,
            "base_point" => {
                self.base_point = if v == "pi" { BasePoint::Pi } else { BasePoint::Value(parse_quad(v)?) }
            }
            "t1" => self.flow_times.0 = parse_quad(v)?,
            "t2" => self.flow_times.1 = parse_quad(v)?,
            "f0" => {
                self.f0 = if v == "search" {
                    F0Choice::Search
                } else {
                    let w: Word = v.parse().map_err(|e| format!("{e}"))?;
                    if w.is_empty() {
                        return Err("f0 must be a nontrivial word".into());
                    }
                    F0Choice::Word(w)
                }
            }
            "search_len" => self.search_len = parse_num(v, 12usize)?,
            "k_max" => self.k_max = parse_num(v, 24u32)?,
            "n_max" => self.horizons.n_max = parse_num(v, 10_000u32)?,
            "i_max" => self.horizons.i_max = parse_num(v, 10_000u32)?,
            "power_limit" => self.horizons.power_limit = parse_num(v, 1024u32)?.max(1),
            "reversed" => self.horizons.reversed = parse_bool(v)?,
            "mu_j" => {
                self.mu_j = if v == "auto" {
                    None
                } else {
                    let q = parse_quad(v)?;
                    if !q.is_positive() {
                        return Err(format!("{q} is not positive"));
                    }
                    Some(q)
                }
            }
            "xval_k" => self.xval_k = parse_num(v, 12u32)?,
            "claim1_words" => self.claim1_words = parse_num(v, 1_000_000usize)?,
            "torus_words" => self.torus_words = parse_num(v, 1_000_000usize)?,
            "samples" => self.samples = parse_num(v, 10_000_000usize)?.max(1),
            "rotation_iterations" => self.rotation_iterations = parse_num(v, 100_000_000usize)?.max(1),
            "seed" => self.seed = parse_num(v, u64::MAX)?,
            "growth_a" => self.growth.a = positive_rational(v)?,
            "growth_n" => self.growth.n = parse_num(v, 10_000u32)?,
            "growth_j" => self.growth.j = positive_rational(v)?,
            "growth_ab" => self.growth.ab = positive_rational(v)?,
            "out_dir" => {
                if v.is_empty() {
                    return Err("empty path".into());
                }
                self.out_dir = PathBuf::from(v)
            }
            "model" => self.model = if v == "none" || v.is_empty() { None } else { Some(PathBuf::from(v)) },
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Applies `(position, key, value)` entries in order, then validates the
    /// whole configuration; every problem is reported.
    pub fn apply<'a>(
        mut self,
        entries: impl IntoIterator<Item = (String, &'a str, &'a str)>,
    ) -> Result<RunConfig, ConfigErrors> {
        let mut errors = Vec::new();
        for (position, key, value) in entries {
            if let Err(message) = self.set(key, value) {
                errors.push(ConfigError { position, key: key.to_string(), message });
            }
        }
        if errors.is_empty() {
            errors.extend(self.validate());
        }
        if errors.is_empty() {
            Ok(self)
        } else {
            Err(ConfigErrors(errors))
        }
    }

    /// Cross-field checks.
    pub fn validate(&self) -> Vec<ConfigError> {
        let mut errors = Vec::new();
        let mut err = |key: &str, message: String| {
            errors.push(ConfigError { position: "config".into(), key: key.into(), message })
        };
        let s = &self.schedule;
        if s.full_sum().is_none() {
            err("gap_ratio", format!("ratio {} must be below 1/3 for the gaps to be summable", s.q));
        } else {
            let total = s.materialized_sum(self.depth);
            if total >= BigRational::one() {
                err("gap_scale", format!("gaps up to depth {} sum to {total}, not below the ambient length 1", self.depth));
            }
        }
        let (t1, t2) = &self.flow_times;
        if t1.d() != t2.d() && !t1.is_rational() && !t2.is_rational() {
            err("t2", format!("{t1} and {t2} lie in different quadratic fields"));
        }
        if self.growth.a >= BigRational::one() {
            err("growth_a", format!("{} is not below 1", self.growth.a));
        }
        errors
    }

    /// Parses a config file over the defaults.
    pub fn from_text(text: &str) -> Result<RunConfig, ConfigErrors> {
        let (entries, mut errors) = parse_entries(text);
        match RunConfig::default().apply(entries.iter().map(|(p, k, v)| (p.clone(), k.as_str(), v.as_str()))) {
            Ok(c) if errors.is_empty() => Ok(c),
            Ok(_) => Err(ConfigErrors(errors)),
            Err(ConfigErrors(more)) => {
                errors.extend(more);
                errors.sort_by_key(|e| e.position.trim_start_matches("line ").parse::<usize>().unwrap_or(usize::MAX));
                Err(ConfigErrors(errors))
            }
        }
    }

    pub fn model_config(&self) -> ModelConfig {
        ModelConfig {
            variant: self.variant,
            depth: self.depth,
            schedule: self.schedule.clone(),
            base_point: self.base_point.clone(),
            flow_times: self.flow_times.clone(),
        }
    }

    /// Canonical text; parsing it gives back the same configuration.
    pub fn to_text(&self) -> String {
        let mu_j = self.mu_j.as_ref().map_or("auto".to_string(), |q| q.to_string());
        let model = self.model.as_ref().map_or("none".to_string(), |p| p.display().to_string());
        let values = [
            self.variant.to_string(),
            self.depth.to_string(),
            self.schedule.q.to_string(),
            self.schedule.c.to_string(),
            self.base_point.to_string(),
            self.flow_times.0.to_string(),
            self.flow_times.1.to_string(),
            self.f0.to_string(),
            self.search_len.to_string(),
            self.k_max.to_string(),
            self.horizons.n_max.to_string(),
            self.horizons.i_max.to_string(),
            self.horizons.power_limit.to_string(),
            self.horizons.reversed.to_string(),
            mu_j,
            self.xval_k.to_string(),
            self.claim1_words.to_string(),
            self.torus_words.to_string(),
            self.samples.to_string(),
            self.rotation_iterations.to_string(),
            self.seed.to_string(),
            self.growth.a.to_string(),
            self.growth.n.to_string(),
            self.growth.j.to_string(),
            self.growth.ab.to_string(),
            self.out_dir.display().to_string(),
            model,
        ];
        KEYS.iter().zip(values).map(|((k, _), v)| format!("{k} = {v}\n")).collect()
    }
}

/// Splits `key = value` lines; malformed and repeated lines become errors.
pub fn parse_entries(text: &str) -> (Vec<(String, String, String)>, Vec<ConfigError>) {
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let position = format!("line {}", i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(ConfigError { position, key: String::new(), message: format!("expected `key = value`, got `{line}`") });
            continue;
        };
        let key = key.trim().to_string();
        if !seen.insert(key.clone()) {
            errors.push(ConfigError { position, key, message: "repeated key".into() });
            continue;
        }
        entries.push((position, key, value.trim().to_string()));
    }
    (entries, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
        let text = "variant = circle\nt2 = 1/2+3√5 # comment\nt1 = 1\nmu_j = 1/100\nf0 = search\n";
        let c = RunConfig::from_text(text).unwrap();
        assert_eq!(c.variant, Variant::Circle);
        assert_eq!(c.f0, F0Choice::Search);
        assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn all_errors_are_reported_with_positions() {
        let text = "depth = -1\nvariant = torus\n\nbogus = 3\nno equals sign\nt1 = 1+√0x\ndepth = 2\n";
        let errs = RunConfig::from_text(text).unwrap_err().0;
        let positions: Vec<&str> = errs.iter().map(|e| e.position.as_str()).collect();
        assert_eq!(positions, ["line 1", "line 2", "line 4", "line 5", "line 6", "line 7"]);
        assert_eq!(errs[2].message, "unknown key");
        assert_eq!(errs[5].message, "repeated key");
    }

    #[test]
    fn cross_field_checks() {
        let errs = RunConfig::from_text("gap_ratio = 1/2\n").unwrap_err().0;
        assert_eq!(errs[0].key, "gap_ratio");
        let errs = RunConfig::from_text("gap_scale = 4\ndepth = 2\n").unwrap_err().0;
        assert_eq!(errs[0].key, "gap_scale");
        let errs = RunConfig::from_text("t1 = √3\nt2 = √2\n").unwrap_err().0;
        assert_eq!(errs[0].key, "t2");
        assert!(RunConfig::from_text("t1 = 1/2\nt2 = √3\n").is_ok());
        assert!(RunConfig::from_text("growth_a = 1\n").is_err());
        assert!(RunConfig::from_text("mu_j = -1\n").is_err());
    }
}
