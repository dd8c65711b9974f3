//! `verify-paper`: reruns the bundled worked examples.
//!
//! `manifest.json` lists entries `{"name", "args", "expect"}` where `args` is a
//! command line without the program name and `expect` maps JSON pointers into
//! the report to required values.

use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::args::{Cli, Command};
use crate::commands::{run, Context};
use crate::error::{CliError, CliResult};
use crate::report::{Report, ReportBuilder};

#[derive(Deserialize)]
struct Manifest {
    examples: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    name: String,
    args: Vec<String>,
    expect: Map<String, Value>,
}

pub fn default_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Returns the report and whether every example matched.
pub fn verify_paper(cmd: &Command, fixtures: &Path, ctx: &Context) -> CliResult<(Report, bool)> {
    let mut b = ReportBuilder::new(serde_json::to_value(cmd).expect("commands serialize"), None);
    let text = b.read(&fixtures.join("manifest.json"))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| tropdet::Error::Parse(format!("manifest: {e}")))?;
    let inner = Context { budget: ctx.budget, out_dir: None, base: Some(fixtures.to_path_buf()) };
    let mut results = Vec::new();
    let mut passed = 0;
    for entry in &manifest.examples {
        let argv = std::iter::once("tropdet".to_string()).chain(entry.args.iter().cloned());
        let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(format!("{}: {e}", entry.name)))?;
        let mismatches: Vec<Value> = match run(&cli.command, &inner) {
            Ok(report) => {
                let value = serde_json::to_value(&report).expect("reports serialize");
                entry
                    .expect
                    .iter()
                    .filter(|(ptr, want)| value.pointer(ptr) != Some(*want))
                    .map(|(ptr, want)| json!({ "pointer": ptr, "expected": want, "found": value.pointer(ptr) }))
                    .collect()
            }
            Err(e) => vec![e.to_json()],
        };
        let ok = mismatches.is_empty();
        passed += usize::from(ok);
        results.push(json!({ "name": entry.name, "passed": ok, "mismatches": mismatches }));
    }
    let all = passed == manifest.examples.len();
    b.verdict("examples", manifest.examples.len());
    b.verdict("passed", passed);
    b.verdict("all_passed", all);
    b.certificate("results", results);
    Ok((b.finish(), all))
}
