use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Arg, ArgAction, Command};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Synth,
    Compose,
    Embed,
    Cluster,
    Semisup,
    Decompose,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::Synth,
        Subcommand::Compose,
        Subcommand::Embed,
        Subcommand::Cluster,
        Subcommand::Semisup,
        Subcommand::Decompose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Synth => "synth",
            Subcommand::Compose => "compose",
            Subcommand::Embed => "embed",
            Subcommand::Cluster => "cluster",
            Subcommand::Semisup => "semisup",
            Subcommand::Decompose => "decompose",
        }
    }

    /// Registered algorithm names; the first is the default for `synth`.
    pub fn algorithms(self) -> &'static [&'static str] {
        match self {
            Subcommand::Synth => &["latent"],
            Subcommand::Compose => &["concat", "split", "random-subspace", "gaussian-projection"],
            Subcommand::Embed => &["cca", "mcca", "kmcca", "gcca", "mvmds", "omnibus"],
            Subcommand::Cluster => &["mv-kmeans", "mv-spherical-kmeans", "mv-spectral", "coreg-spectral"],
            Subcommand::Semisup => &["cotrain-classifier", "cotrain-regressor"],
            Subcommand::Decompose => &["ajive", "group-pca", "group-ica"],
        }
    }

    fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Flat `key=value` algorithm parameters. Every lookup records the key as
/// accepted; [`Params::finish`] rejects whatever was never looked up.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    accepted: BTreeSet<String>,
}

impl Params {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (k, v) in pairs {
            if k.is_empty() {
                return Err(CliError::usage(format!("empty parameter name in '={v}'")));
            }
            if values.insert(k.clone(), v).is_some() {
                return Err(CliError::usage(format!("parameter '{k}' given more than once")));
            }
        }
        Ok(Self {
            values,
            accepted: BTreeSet::new(),
        })
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn raw(&mut self, key: &str) -> Option<String> {
        self.accepted.insert(key.to_string());
        self.values.get(key).cloned()
    }

    pub fn get<V: FromStr>(&mut self, key: &str, default: V) -> CliResult<V> {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    pub fn opt<V: FromStr>(&mut self, key: &str) -> CliResult<Option<V>> {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("cannot parse {key}={s}"))),
        }
    }

    /// Comma-separated list.
    pub fn list<V: FromStr>(&mut self, key: &str) -> CliResult<Option<Vec<V>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<Vec<V>, _>>()
                .map(Some)
                .map_err(|_| CliError::usage(format!("cannot parse {key}={s} as a comma-separated list"))),
        }
    }

    pub fn require<V: FromStr>(&mut self, key: &str) -> CliResult<V> {
        self.opt(key)?
            .ok_or_else(|| CliError::usage(format!("missing required parameter {key}")))
    }

    pub fn finish(&self, algo: &str) -> CliResult<()> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| !self.accepted.contains(*k))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            return Ok(());
        }
        let accepted: Vec<&str> = self.accepted.iter().map(String::as_str).collect();
        Err(CliError::usage(format!(
            "unknown parameter(s) for {algo}: {}; accepted: {}",
            unknown.join(", "),
            if accepted.is_empty() { "none".to_string() } else { accepted.join(", ") }
        )))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub input: Option<PathBuf>,
    pub output: PathBuf,
    pub algo: String,
    pub seed: u64,
    pub plot: bool,
    pub force: bool,
    pub params: Params,
}

const VALUE_FLAGS: [&str; 4] = ["in", "out", "algo", "seed"];
const SWITCHES: [&str; 2] = ["plot", "force"];

fn command() -> Command {
    Command::new("mvkit")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Multiview learning pipelines on directory datasets")
        .override_usage(
            "mvkit <synth|compose|embed|cluster|semisup|decompose> --in DIR --out DIR --algo NAME \
             [--seed N] [--plot] [--force] [key=value | --key value ...]",
        )
        .arg(Arg::new("subcommand").required(true).value_name("SUBCOMMAND"))
        .arg(Arg::new("in").long("in").value_name("DIR"))
        .arg(Arg::new("out").long("out").value_name("DIR").required(true))
        .arg(Arg::new("algo").long("algo").value_name("NAME"))
        .arg(Arg::new("seed").long("seed").value_name("N").value_parser(clap::value_parser!(u64)))
        .arg(Arg::new("plot").long("plot").action(ArgAction::SetTrue))
        .arg(Arg::new("force").long("force").action(ArgAction::SetTrue))
        .arg(Arg::new("params").value_name("KEY=VALUE").num_args(0..).action(ArgAction::Append))
}

/// Rewrites `--key value` and `--key=value` for unknown keys into
/// `key=value` positionals so that clap only sees the fixed flags.
fn normalize(argv: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut i = 0;
    while i < argv.len() {
        let a = &argv[i];
        i += 1;
        let Some(body) = a.strip_prefix("--").filter(|b| !b.is_empty()) else {
            out.push(a.clone());
            continue;
        };
        let (name, inline) = match body.split_once('=') {
            Some((n, v)) => (n, Some(v.to_string())),
            None => (body, None),
        };
        if VALUE_FLAGS.contains(&name) || SWITCHES.contains(&name) || name == "help" || name == "version" {
            out.push(a.clone());
            continue;
        }
        let value = match inline {
            Some(v) => v,
            None if i < argv.len() && !argv[i].starts_with("--") => {
                i += 1;
                argv[i - 1].clone()
            }
            None => "true".to_string(),
        };
        out.push(format!("{}={value}", name.replace('-', "_")));
    }
    out
}

pub enum Parsed {
    Run(Box<RunConfig>),
    /// Help or version text; printed with exit code 0.
    Info(String),
}

/// Parses the full argv (program name first).
pub fn parse(argv: &[String]) -> CliResult<Parsed> {
    let normalized = normalize(argv.get(1..).unwrap_or_default());
    let mut full = vec![argv.first().cloned().unwrap_or_else(|| "mvkit".into())];
    full.extend(normalized);
    let m = match command().try_get_matches_from(full) {
        Ok(m) => m,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Ok(Parsed::Info(e.to_string()))
                }
                _ => Err(CliError::usage(e.to_string().trim_end().to_string())),
            }
        }
    };
    let name = m.get_one::<String>("subcommand").expect("required");
    let subcommand = Subcommand::parse(name).ok_or_else(|| {
        let names: Vec<&str> = Subcommand::ALL.iter().map(|s| s.name()).collect();
        CliError::usage(format!("unknown subcommand '{name}'; expected one of {}", names.join(", ")))
    })?;
    let registered = subcommand.algorithms();
    let algo = match m.get_one::<String>("algo") {
        Some(a) if registered.contains(&a.as_str()) => a.clone(),
        Some(a) => {
            return Err(CliError::usage(format!(
                "unknown algorithm '{a}' for {subcommand}; registered: {}",
                registered.join(", ")
            )))
        }
        None if subcommand == Subcommand::Synth => registered[0].to_string(),
        None => {
            return Err(CliError::usage(format!(
                "--algo is required for {subcommand}; registered: {}",
                registered.join(", ")
            )))
        }
    };
    let input = m.get_one::<String>("in").map(PathBuf::from);
    match (subcommand, &input) {
        (Subcommand::Synth, Some(_)) => return Err(CliError::usage("synth takes no --in")),
        (Subcommand::Synth, None) => {}
        (_, None) => return Err(CliError::usage(format!("--in is required for {subcommand}"))),
        _ => {}
    }
    let mut pairs = Vec::new();
    for p in m.get_many::<String>("params").into_iter().flatten() {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected key=value, got '{p}'")))?;
        pairs.push((k.trim().to_string(), v.to_string()));
    }
    Ok(Parsed::Run(Box::new(RunConfig {
        subcommand,
        input,
        output: PathBuf::from(m.get_one::<String>("out").expect("required")),
        algo,
        seed: m.get_one::<u64>("seed").copied().unwrap_or(0),
        plot: m.get_flag("plot"),
        force: m.get_flag("force"),
        params: Params::from_pairs(pairs)?,
    })))
}
