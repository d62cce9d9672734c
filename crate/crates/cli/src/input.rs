//! Point parsing: JSON tuples, comma lists, named orbit seeds, JSONL streams.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use tracemap_core::exactnum::parse_cyc;
use tracemap_core::orbits::finite_orbit_seeds;
use tracemap_core::TraceTuple;

use crate::error::{CliError, CliResult};

/// `O1`..`O5`, a JSON tuple, or a comma list such as `1/2, sqrt(2)/2, 0`.
pub fn parse_point(s: &str) -> CliResult<TraceTuple> {
    let s = s.trim();
    if let Some((_, p)) = finite_orbit_seeds().into_iter().find(|(id, _)| id.eq_ignore_ascii_case(s)) {
        return Ok(p);
    }
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad tuple `{s}`: {e}")));
    }
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    let coords = split_top_level(s)
        .iter()
        .map(|c| parse_cyc(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    TraceTuple::new(coords).map_err(|e| CliError::Usage(e.to_string()))
}

/// Splits on commas outside parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    parts.push(cur);
    parts
}

/// One tuple per non-blank line; a line may also hold a JSON list of tuples.
pub fn read_jsonl(path: Option<&Path>) -> CliResult<Vec<TraceTuple>> {
    let reader: Box<dyn BufRead> = match path {
        Some(p) if p != Path::new("-") => Box::new(BufReader::new(File::open(p)?)),
        _ => Box::new(BufReader::new(io::stdin())),
    };
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |e: serde_json::Error| CliError::Usage(format!("line {}: {e}", k + 1));
        if t.starts_with('[') {
            out.extend(serde_json::from_str::<Vec<TraceTuple>>(t).map_err(bad)?);
        } else {
            out.push(serde_json::from_str(t).map_err(bad)?);
        }
    }
    Ok(out)
}
