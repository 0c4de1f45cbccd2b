//! Command-line front end: `construct`, `verify`, `plot`, `search-element`.
//!
//! Exit codes: 0 all certified, 2 counterexample, 64 usage, 65 construction,
//! 66 input/output.

mod commands;
mod config;
mod model_file;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Arg, ArgAction, ArgMatches, Command};

pub use commands::{
    cmd_construct, cmd_plot, cmd_search_element, cmd_verify, Check, CliError, ConstructSummary, Exit, PlotReport,
    VerifyReport,
};
pub use config::{parse_entries, ConfigError, ConfigErrors, F0Choice, GrowthInput, RunConfig, KEYS};
pub use model_file::{declared_variant, read_model, write_model};
pub use render::{GROWTH_HEADER, PACKING_HEADER, STEPS_HEADER, SVG_MAX_K};

const PLOT_HELP: &str = "\
Files written into the bundle directory:
  packing.csv  eps,tau,left,right: every image of J in μ-coordinates, sorted
  steps.csv    k,min_gap,total_length_lower_bound,count: per k up to the certified one
  growth.csv   k,log10_lower_bound,log10_ab: the growth bound against |[a,b]|
  packing.svg  the images as bars on one row (k above 10 drawn at k = 10)
  growth.svg   the growth curve with k* marked";

fn flag(key: &str) -> String {
    key.replace('_', "-")
}

pub fn command() -> Command {
    let mut cmd = Command::new("rigidity")
        .about("Blow-up actions of SL(2,Z) and F2 semidirect Z^2, with exact rigidity certificates")
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .global(true)
                .help("config file of `key = value` lines; flags override it"),
        );
    for (key, help) in KEYS {
        cmd = cmd.arg(Arg::new(*key).long(flag(key)).value_name("VALUE").global(true).help(*help).action(ArgAction::Set).allow_hyphen_values(true));
    }
    cmd.subcommand(Command::new("construct").about("build a model, write model.txt, print its summary"))
        .subcommand(Command::new("verify").about("run every certification and write the bundle"))
        .subcommand(
            Command::new("plot")
                .about("render a verify bundle as CSV and SVG")
                .arg(Arg::new("bundle").value_name("DIR").help("bundle directory, default out_dir"))
                .after_help(PLOT_HELP),
        )
        .subcommand(Command::new("search-element").about("find a word satisfying the hypotheses"))
}

/// Config file first, then flags in the order of `KEYS`.
pub fn load_config(m: &ArgMatches) -> Result<RunConfig, CliError> {
    let mut entries: Vec<(String, String, String)> = Vec::new();
    let mut errors = Vec::new();
    if let Some(path) = m.get_one::<String>("config") {
        let text = std::fs::read_to_string(path).map_err(|e| CliError { exit: Exit::Io, message: format!("{path}: {e}") })?;
        let (file_entries, file_errors) = parse_entries(&text);
        entries.extend(file_entries.into_iter().map(|(p, k, v)| (format!("{path}:{p}"), k, v)));
        errors.extend(file_errors.into_iter().map(|e| ConfigError { position: format!("{path}:{}", e.position), ..e }));
    }
    for (key, _) in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            entries.push((format!("--{}", flag(key)), key.to_string(), v.clone()));
        }
    }
    let result = RunConfig::default().apply(entries.iter().map(|(p, k, v)| (p.clone(), k.as_str(), v.as_str())));
    match result {
        Ok(cfg) if errors.is_empty() => Ok(cfg),
        Ok(_) => Err(ConfigErrors(errors).into()),
        Err(ConfigErrors(more)) => {
            errors.extend(more);
            Err(ConfigErrors(errors).into())
        }
    }
}

impl From<ConfigErrors> for CliError {
    fn from(e: ConfigErrors) -> Self {
        CliError { exit: Exit::Usage, message: format!("invalid configuration:\n{e}") }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage as i32 } else { Exit::Ok as i32 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = (|| -> Result<Exit, CliError> {
        let (name, sub) = matches.subcommand().expect("subcommand required");
        let cfg = load_config(sub)?;
        match name {
            "construct" => cmd_construct(&cfg, out).map(|_| Exit::Ok),
            "verify" => cmd_verify(&cfg, out).map(|r| r.exit()),
            "plot" => {
                let dir = sub.get_one::<String>("bundle").map(PathBuf::from).unwrap_or_else(|| cfg.out_dir.clone());
                cmd_plot(&dir, out).map(|_| Exit::Ok)
            }
            "search-element" => cmd_search_element(&cfg, out).map(|_| Exit::Ok),
            _ => unreachable!("clap rejects unknown subcommands"),
        }
    })();
    match result {
        Ok(exit) => exit as i32,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.exit as i32
        }
    }
}
