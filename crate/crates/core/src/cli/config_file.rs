//! Flat `key = value` run files. `#` and `;` start comments and `[section]`
//! headers are ignored, so a file can be grouped however one likes.

use std::collections::BTreeMap;

pub const KEYS: &[&str] = &[
    "command",
    "s",
    "T",
    "temperatures",
    "c",
    "t",
    "t-max",
    "omega-c",
    "spectrum-csv",
    "output",
    "out",
    "tol-rel",
    "threads",
];

/// Parsed entries plus diagnostics for lines that could not be used.
pub fn parse(text: &str) -> (BTreeMap<String, String>, Vec<String>) {
    let mut entries = BTreeMap::new();
    let mut diagnostics = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            diagnostics.push(format!("config line {}: expected `key = value`", i + 1));
            continue;
        };
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            diagnostics.push(format!("config line {}: unknown key `{key}`", i + 1));
            continue;
        }
        let value = value.trim().trim_matches('"').to_string();
        entries.insert(key, value);
    }
    (entries, diagnostics)
}
