use std::path::PathBuf;
use std::process::ExitCode;

use lambda_sim::config::{RunConfig, RunMode};
use lambda_sim::runner;

const USAGE: &str = "usage: lambda-sim <adiabatic|numeric|compare|markers|sweep> \
[--config PATH] [--key=value ...] [--out DIR]";

enum CliError {
    Usage(String),
    Run(lambda_sim::Error),
}

fn main() -> ExitCode {
    match real_main(std::env::args().skip(1).collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("{msg}");
            eprintln!("{USAGE}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn real_main(args: Vec<String>) -> Result<(), CliError> {
    let mut mode_arg: Option<String> = None;
    let mut config_path: Option<PathBuf> = None;
    let mut out_dir: Option<PathBuf> = None;
    let mut overrides: Vec<(String, String)> = Vec::new();

    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        if let Some(rest) = arg.strip_prefix("--") {
            if let Some((key, value)) = rest.split_once('=') {
                match key {
                    "config" => config_path = Some(PathBuf::from(value)),
                    "out" => out_dir = Some(PathBuf::from(value)),
                    _ => overrides.push((key.to_string(), value.to_string())),
                }
            } else {
                match rest {
                    "config" | "out" => {
                        i += 1;
                        let Some(value) = args.get(i) else {
                            return Err(CliError::Usage(format!("--{rest} needs a value")));
                        };
                        if rest == "config" {
                            config_path = Some(PathBuf::from(value));
                        } else {
                            out_dir = Some(PathBuf::from(value));
                        }
                    }
                    "help" => return Err(CliError::Usage(String::new())),
                    other => {
                        return Err(CliError::Usage(format!("flag --{other} needs =value")));
                    }
                }
            }
        } else if mode_arg.is_none() {
            mode_arg = Some(arg.clone());
        } else {
            return Err(CliError::Usage(format!("unexpected argument '{arg}'")));
        }
        i += 1;
    }

    let Some(mode_str) = mode_arg else {
        return Err(CliError::Usage("missing mode".into()));
    };
    let mode: RunMode = mode_str.parse().map_err(CliError::Usage)?;

    let mut cfg = RunConfig::default();
    if let Some(path) = &config_path {
        cfg.load(path).map_err(CliError::Run)?;
    }
    cfg.mode = mode;
    for (key, value) in &overrides {
        cfg.set(key, value).map_err(CliError::Run)?;
    }
    if let Some(dir) = out_dir {
        cfg.out_dir = Some(dir);
    }

    for w in cfg.params.warnings() {
        eprintln!("warning: {w}");
    }
    runner::run(&cfg).map_err(CliError::Run)
}
