//! Flat `key = value` experiment files merged underneath command-line flags.

use std::ffi::OsString;
use std::fs;

/// Reads `path` and returns one `--key=value` argument per entry.
/// Blank lines and lines starting with `#` are skipped.
pub fn load(path: &str) -> Result<Vec<OsString>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config file {path}: {e}"))?;
    parse(&text).map_err(|e| format!("{path}: {e}"))
}

pub fn parse(text: &str) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key", i + 1));
        }
        out.push(format!("--{key}={}", value.trim()).into());
    }
    Ok(out)
}

/// Finds the value of `--config` in raw arguments, if any.
pub fn find_path(args: &[OsString]) -> Option<String> {
    let mut it = args.iter().map(|a| a.to_string_lossy());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(|v| v.into_owned());
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Inserts file-derived arguments right after the subcommand so that any
/// flag repeated on the command line overrides them.
pub fn merge(args: Vec<OsString>, from_file: Vec<OsString>) -> Vec<OsString> {
    if args.len() < 2 || from_file.is_empty() {
        return args;
    }
    let mut out = Vec::with_capacity(args.len() + from_file.len());
    out.extend_from_slice(&args[..2]);
    out.extend(from_file);
    out.extend_from_slice(&args[2..]);
    out
}
