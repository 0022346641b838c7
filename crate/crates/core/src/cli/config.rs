//! Flat `key = value` config files.
//!
//! Each entry becomes `--key value` on the command line, inserted directly
//! after the subcommand name so that flags typed explicitly (which come later)
//! take precedence. `#` starts a comment. Underscores in keys are accepted
//! as dashes. `key = true` becomes a bare switch and `key = false` is dropped.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(Error::InvalidArgument(format!(
                "config line {}: invalid key '{}'",
                lineno + 1,
                key
            )));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

pub fn config_to_args(entries: &[(String, String)]) -> Vec<OsString> {
    let mut args = Vec::new();
    for (key, value) in entries {
        match value.as_str() {
            "true" => args.push(OsString::from(format!("--{key}"))),
            "false" => {}
            _ => {
                args.push(OsString::from(format!("--{key}")));
                args.push(OsString::from(value));
            }
        }
    }
    args
}

/// Removes `--config <file>` (or `--config=<file>`) from `args` and returns
/// the path, if present.
fn take_config_path(args: &mut Vec<OsString>) -> Result<Option<OsString>> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy().into_owned();
        if s == "--" {
            break;
        }
        if s == "--config" {
            if i + 1 >= args.len() {
                return Err(Error::InvalidArgument("--config needs a file path".into()));
            }
            let path = args.remove(i + 1);
            args.remove(i);
            return Ok(Some(path));
        }
        if let Some(path) = s.strip_prefix("--config=") {
            let path = OsString::from(path);
            args.remove(i);
            return Ok(Some(path));
        }
        i += 1;
    }
    Ok(None)
}

/// Expands a `--config` file into flags placed after the subcommand.
pub fn expand_config(mut args: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>> {
    let Some(path) = take_config_path(&mut args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| {
        Error::InvalidArgument(format!("cannot read config {}: {e}", path.to_string_lossy()))
    })?;
    let extra = config_to_args(&parse_config(&text)?);
    let pos = args
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
        .ok_or_else(|| Error::InvalidArgument("--config requires a subcommand".into()))?;
    args.splice(pos + 1..pos + 1, extra);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_flat_files() {
        let text = "# model\nr = 2\nsigma2=0.5  # trailing\n\nmax_level = 4\ncheck = true\nstationary = false\n";
        let entries = parse_config(text).unwrap();
        assert_eq!(entries[2], ("max-level".to_string(), "4".to_string()));
        let args = config_to_args(&entries);
        assert_eq!(args, os(&["--r", "2", "--sigma2", "0.5", "--max-level", "4", "--check"]));
        assert!(parse_config("novalue\n").is_err());
        assert!(parse_config("config = x\n").is_err());
    }

    #[test]
    fn inserts_after_subcommand() {
        let dir = std::env::temp_dir().join(format!("hlito-config-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "rho = 2\nm = 1\n").unwrap();
        let args = os(&["hlito", "--config", path.to_str().unwrap(), "poly", "--m", "3"]);
        let expanded = expand_config(args, &["poly"]).unwrap();
        assert_eq!(expanded, os(&["hlito", "poly", "--rho", "2", "--m", "1", "--m", "3"]));
        let args = os(&["hlito", "poly", &format!("--config={}", path.display())]);
        assert_eq!(expand_config(args, &["poly"]).unwrap(), os(&["hlito", "poly", "--rho", "2", "--m", "1"]));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn leaves_plain_invocations_alone() {
        let args = os(&["hlito", "spectrum"]);
        assert_eq!(expand_config(args.clone(), &["spectrum"]).unwrap(), args);
        assert!(expand_config(os(&["hlito", "--config"]), &["poly"]).is_err());
    }
}
