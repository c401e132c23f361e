//! `key = value` experiment files merged underneath command-line flags.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", n + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn flag_present(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let prefixed = format!("{long}=");
    args.iter().filter_map(|a| a.to_str()).any(|a| a == long || a.starts_with(&prefixed))
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Appends config entries whose flag is absent from `args`.
///
/// Repeatable keys (`grid`) are only taken from the file when the command
/// line gives none.
pub fn merge_config(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let entries = parse_config(&text)?;
    let given: Vec<OsString> = args.clone();
    for (key, value) in entries {
        if key == "config" || flag_present(&given, &key) {
            continue;
        }
        match value.as_str() {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                args.push(format!("--{key}").into());
                args.push(value.into());
            }
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let cfg = parse_config("# fig 2\nmass = 30\n\nsigma0=1 # width\nt_end = 20\n").unwrap();
        assert_eq!(
            cfg,
            vec![("mass".into(), "30".into()), ("sigma0".into(), "1".into()), ("t-end".into(), "20".into())]
        );
        assert!(parse_config("mass 3").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "mass = 2\nsigma0 = 3\nprinted-mixed = true\ndimensionless = false\n").unwrap();
        let args = os(&["gravred", "simulate", "--mass", "5", "--config", path.to_str().unwrap()]);
        let merged = merge_config(args).unwrap();
        let merged: Vec<String> = merged.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(merged.iter().filter(|a| *a == "--mass").count(), 1);
        assert!(merged.windows(2).any(|w| w[0] == "--sigma0" && w[1] == "3"));
        assert!(merged.iter().any(|a| a == "--printed-mixed"));
        assert!(!merged.iter().any(|a| a == "--dimensionless"));
    }

    #[test]
    fn missing_file_is_config_error() {
        let r = merge_config(os(&["gravred", "verify", "--config", "/nonexistent/x.cfg"]));
        assert!(matches!(r, Err(CliError::Config(_))));
    }
}
