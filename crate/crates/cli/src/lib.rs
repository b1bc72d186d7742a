//! `mvkit` command-line front end.
//!
//! ```text
//! mvkit <synth|compose|embed|cluster|semisup|decompose> --in DIR --out DIR --algo NAME
//!       [--seed N] [--plot] [--force] [key=value | --key value ...]
//! ```
//!
//! Exit codes: 0 success, 2 usage error, 3 data validation error,
//! 4 numerical failure or non-convergence.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod svg;

use serde_json::json;

pub use args::{parse, Params, Parsed, RunConfig, Subcommand};
pub use error::{exit_code, CliError, CliResult, EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE};
pub use svg::{emit_scatter_svg, render_scatter_svg};

/// Runs one invocation and returns its exit code. Errors go to stderr and the
/// final summary line to stdout.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    match try_run(&argv) {
        Ok(line) => {
            println!("{line}");
            0
        }
        Err(e) => {
            eprintln!("mvkit: error: {e}");
            e.code
        }
    }
}

/// Like [`run`] but returns the summary line or the error.
pub fn try_run(argv: &[String]) -> CliResult<String> {
    let mut cfg = match parse(argv)? {
        Parsed::Run(c) => *c,
        Parsed::Info(text) => return Ok(text.trim_end().to_string()),
    };
    let mut o = commands::execute(&mut cfg)?;
    if !o.metrics.is_empty() {
        o.out.numbers("metrics.json", &o.metrics)?;
    }
    if !o.summary.is_empty() {
        o.out.numbers("summary.json", &o.summary)?;
    }
    if cfg.plot {
        let plot = o.plot.take().expect("every subcommand provides a plot");
        emit_scatter_svg(&plot.points, plot.labels.as_deref(), &o.out.file("scatter.svg"))?;
        o.out.record("scatter.svg");
    }
    let mut files = o.out.written.clone();
    files.push("run_manifest.json".into());
    files.sort();
    let manifest = json!({
        "library": "mvkit",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": cfg.subcommand.name(),
        "algo": cfg.algo,
        "input": cfg.input.as_ref().map(|p| p.display().to_string()),
        "seed": cfg.seed,
        "plot": cfg.plot,
        "force": cfg.force,
        "params": cfg.params.as_map(),
        "files": files,
    });
    o.out.json("run_manifest.json", &manifest)?;
    let headline: Vec<String> = o.metrics.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Ok(format!(
        "{} {}: wrote {} files to {}{}",
        cfg.subcommand,
        cfg.algo,
        files.len(),
        cfg.output.display(),
        if headline.is_empty() { String::new() } else { format!(" ({})", headline.join(", ")) }
    ))
}
