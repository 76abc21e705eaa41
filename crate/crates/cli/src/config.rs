//! `--config` files: `key = value` lines naming long options of the chosen
//! subcommand. Options given on the command line take precedence.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Command};

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", n + 1));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read(path: &Path) -> std::io::Result<String> {
    std::fs::read_to_string(path)
}

/// Value of `--config` in raw arguments, if any.
pub fn find_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

/// `args` extended with the config entries that apply to the selected
/// subcommand and were not given on the command line. Keys that name no
/// option of that subcommand are ignored, so one file can serve several
/// subcommands; keys unknown to every subcommand are an error.
pub fn merge(mut cmd: Command, args: Vec<OsString>, entries: &[(String, String)]) -> Result<Vec<OsString>, String> {
    cmd.build();
    let words: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut leaf = &cmd;
    for w in &words {
        if let Some(sub) = leaf.find_subcommand(w) {
            leaf = sub;
        }
    }
    let given = |key: &str| {
        words
            .iter()
            .any(|w| w == &format!("--{key}") || w.starts_with(&format!("--{key}=")))
    };
    let mut out = args;
    for (key, value) in entries {
        let Some(arg) = leaf.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            if !any_long(&cmd, key) {
                return Err(format!("config key `{key}` is not an option of any command"));
            }
            continue;
        };
        if given(key) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "yes" | "1" => out.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => return Err(format!("config key `{key}` expects true or false, got `{value}`")),
            }
        } else {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}

fn any_long(cmd: &Command, key: &str) -> bool {
    cmd.get_arguments().any(|a| a.get_long() == Some(key)) || cmd.get_subcommands().any(|s| any_long(s, key))
}
