mod args;
mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Map, Value};

use args::{Cli, Command, Format};
use commands::{Artifact, Table};
use config::ConfigFile;
use error::CliError;

const SCHEMA_VERSION: u32 = 1;

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(format: Format, command: &str, params: Value, artifact: Artifact) -> String {
    match format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "params": params,
                "result": artifact.result,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON output");
            s.push('\n');
            s
        }
        Format::Csv => {
            let table = artifact.table.unwrap_or_else(|| {
                let mut pairs = Vec::new();
                flatten("", &artifact.result, &mut pairs);
                Table {
                    header: vec!["key", "value"],
                    rows: pairs.into_iter().map(|(k, v)| vec![k, v]).collect(),
                }
            });
            let mut s = table.header.join(",");
            s.push('\n');
            for row in table.rows {
                s.push_str(
                    &row.iter()
                        .map(|f| csv_field(f))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                s.push('\n');
            }
            s
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("WEYL_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::param(format!("WEYL_THREADS='{v}' is not an integer"))),
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => ConfigFile::default(),
    };
    let mut command = config::merge_command(&cli.command, &cfg)?;
    let out = cli.out.or(cfg.out);
    let format = cli
        .format
        .or(cfg.format)
        .or_else(|| match out.as_deref().and_then(Path::extension) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Some(Format::Csv),
            _ => None,
        })
        .unwrap_or(Format::Json);
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let threads = match cli.threads.or(cfg.threads) {
        Some(t) => Some(t),
        None => threads_from_env()?,
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::param("threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::param(format!("thread pool: {e}")))?;
    }

    let artifact = match &mut command {
        Command::Primes(p) => commands::primes(p),
        Command::Sum(p) => commands::sum(p),
        Command::Sharpness(p) => commands::sharpness(p),
        Command::Partition(p) => commands::partition(p),
        Command::Vmvt(p) => commands::vmvt(p),
        Command::Roots(p) => commands::roots(p),
        Command::Equidist(p) => commands::equidist(p),
        Command::Charsum(p) => commands::charsum(p),
        Command::Approx(p) => commands::approx(p),
    }?;

    // threads and the output path never change results, so they are not echoed
    let mut params = Map::new();
    params.insert("seed".into(), json!(seed));
    params.insert("format".into(), json!(format));
    if let Value::Object(p) = config::params_value(&command) {
        params.extend(p);
    }
    let text = render(format, command.name(), Value::Object(params), artifact);
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("error[parameter]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.tag(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
