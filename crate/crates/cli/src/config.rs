//! `--config` files: one `key = value` per line, `#` comments. Keys are long
//! flag names; values from the file are placed before the real arguments so
//! anything given on the command line wins.

use std::ffi::OsString;
use std::path::Path;

pub fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Turns file contents into flag tokens.
pub fn config_flags(text: &str) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected `key = value`", i + 1));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            v => {
                out.push(format!("--{key}").into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

/// argv with the config flags spliced in right after the subcommand name.
pub fn merge(argv: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let flags = config_flags(&text)?;
    let pos = argv
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
        .ok_or("a subcommand is required")?;
    let mut merged = argv[..=pos].to_vec();
    merged.extend(flags);
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(merged)
}
