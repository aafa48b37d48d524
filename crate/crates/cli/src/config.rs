//! Flat `key = value` run files. Each key is a long flag name of the
//! subcommand; the pairs are spliced in front of the user's own flags so
//! that anything given on the command line wins.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

pub fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("ingestion error: {}: {e}", path.display()))?;
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("format error: {}:{}: expected key = value", path.display(), n + 1));
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("format error: {}:{}: bad key", path.display(), n + 1));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_value(args: &[OsString]) -> Option<(usize, usize, OsString)> {
    for (i, arg) in args.iter().enumerate() {
        let s = arg.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return args.get(i + 1).map(|v| (i, 2, v.clone()));
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some((i, 1, v.into()));
        }
    }
    None
}

/// Rewrite `prog sub ... --config FILE ...` into
/// `prog sub --k1 v1 --k2 v2 ... ...` with the config flag removed.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    if args.len() < 2 {
        return Ok(args);
    }
    let Some((at, width, file)) = config_value(&args[2..]) else {
        return Ok(args);
    };
    let pairs = read_pairs(Path::new(&file))?;
    let mut out: Vec<OsString> = args[..2].to_vec();
    for (k, v) in pairs {
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    let rest = &args[2..];
    out.extend(rest[..at].iter().cloned());
    out.extend(rest[at + width..].iter().cloned());
    Ok(out)
}
