mod args;
mod commands;
mod error;
mod report;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tropdet::Budget;

use args::{Cli, Command};
use commands::{run, Context};
use error::{CliError, CliResult};

/// Exit code of `verify-paper` when an example no longer matches.
const VERIFY_MISMATCH: u8 = 1;

fn parse_budget(overrides: &[String]) -> CliResult<Budget> {
    let mut value = serde_json::to_value(Budget::default()).expect("budget serializes");
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("budget override {item:?} is not KEY=VALUE")))?;
        let key = key.trim().replace('-', "_");
        let slot = value
            .get_mut(&key)
            .ok_or_else(|| CliError::Usage(format!("unknown budget key {key:?}")))?;
        let n: u64 = raw.trim().parse().map_err(|_| CliError::Usage(format!("budget value {raw:?} is not a count")))?;
        *slot = n.into();
    }
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("budget: {e}")))
}

fn execute(cli: Cli) -> CliResult<(serde_json::Value, bool)> {
    if let Some(k) = cli.jobs {
        if k == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    }
    let ctx = Context { budget: parse_budget(&cli.budget)?, out_dir: cli.out_dir.clone(), base: None };
    let (report, ok) = match &cli.command {
        Command::VerifyPaper { fixtures } => {
            let dir = fixtures.clone().unwrap_or_else(verify::default_fixtures);
            verify::verify_paper(&cli.command, &dir, &ctx)?
        }
        cmd => (run(cmd, &ctx)?, true),
    };
    Ok((serde_json::to_value(report).expect("reports serialize"), ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match execute(cli) {
        Ok((report, ok)) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json serializes"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(VERIFY_MISMATCH)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_overrides() {
        let b = parse_budget(&["max_det_size=9".into(), "barvinok-nodes=10".into()]).unwrap();
        assert_eq!((b.max_det_size, b.barvinok_nodes), (9, 10));
        assert_eq!(parse_budget(&[]).unwrap(), Budget::default());
        assert!(matches!(parse_budget(&["max_det_size".into()]), Err(CliError::Usage(_))));
        assert!(matches!(parse_budget(&["max_det_size=-1".into()]), Err(CliError::Usage(_))));
        assert!(matches!(parse_budget(&["speed=3".into()]), Err(CliError::Usage(_))));
    }
}
