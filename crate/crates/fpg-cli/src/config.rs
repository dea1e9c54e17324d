//! Run-config files and manifests.
//!
//! One flat text format serves both: `[section]` headers, `key = value`
//! lines, `#`/`;` comments. Config sections are `[train]`, `[frac]`, and
//! `[ablations]`; a `[manifest]` section (written by every command) records
//! provenance — tool version, timestamp, artifact paths — and is accepted
//! on input so a manifest can be fed straight back as a config. Unknown
//! sections and keys are hard errors with the offending line number.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use fpg_core::trainer::{apply_config_kv, config_kv, Algo, TrainConfig};

const MANIFEST_KEYS: [&str; 6] =
    ["tool_version", "timestamp", "command", "metrics_csv", "policy_checkpoint", "value_checkpoint"];

#[derive(Debug)]
pub struct ParsedConfig {
    pub config: TrainConfig,
    /// Informational `[manifest]` entries, if the file carried any.
    pub manifest: Vec<(String, String)>,
}

/// Parse a config/manifest file. Errors name the file line that caused them.
pub fn parse_config_text(text: &str) -> Result<ParsedConfig, String> {
    struct Entry<'a> {
        line_no: usize,
        section: &'a str,
        key: &'a str,
        value: &'a str,
    }
    let mut entries: Vec<Entry> = Vec::new();
    let mut section: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| format!("line {line_no}: unterminated section header '{raw}'"))?
                .trim();
            if !matches!(name, "train" | "frac" | "ablations" | "manifest") {
                return Err(format!(
                    "line {line_no}: unknown section [{name}] (expected [train], [frac], [ablations], or [manifest])"
                ));
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {line_no}: expected 'key = value', got '{raw}'"))?;
        let section = section
            .ok_or_else(|| format!("line {line_no}: key before any [section] header"))?;
        entries.push(Entry { line_no, section, key: key.trim(), value: value.trim() });
    }

    // Environment and algorithm determine the defaults for everything else,
    // so resolve them first regardless of position in the file.
    let find = |key: &str| {
        entries.iter().find(|e| e.section == "train" && e.key == key).map(|e| e.value)
    };
    let env = find("env")
        .ok_or("missing required key 'env' in [train]")?
        .parse()
        .map_err(|e| format!("{e}"))?;
    let algo: Algo = find("algo")
        .ok_or("missing required key 'algo' in [train]")?
        .parse()
        .map_err(|e| format!("{e}"))?;
    let mut config = TrainConfig::defaults_for(env, algo, 0);

    let mut manifest = Vec::new();
    for e in &entries {
        if e.section == "manifest" {
            if !MANIFEST_KEYS.contains(&e.key) {
                return Err(format!(
                    "line {}: unknown config key '{}' in section [manifest]",
                    e.line_no, e.key
                ));
            }
            manifest.push((e.key.to_string(), e.value.to_string()));
            continue;
        }
        apply_config_kv(&mut config, e.section, e.key, e.value)
            .map_err(|err| format!("line {}: {err}", e.line_no))?;
    }
    Ok(ParsedConfig { config, manifest })
}

pub fn load_config(path: &Path) -> Result<ParsedConfig, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config '{}': {e}", path.display()))?;
    parse_config_text(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Render a full config plus `[manifest]` provenance block. Feeding the
/// result back through `parse_config_text` reproduces the config exactly.
pub fn manifest_text(config: &TrainConfig, command: &str, artifacts: &[(&str, &str)]) -> String {
    let mut out = String::new();
    let mut section = "";
    for (sec, key, value) in config_kv(config) {
        if sec != section {
            if !section.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "[{sec}]");
            section = sec;
        }
        let _ = writeln!(out, "{key} = {value}");
    }
    let _ = writeln!(out, "\n[manifest]");
    let _ = writeln!(out, "tool_version = {}", env!("CARGO_PKG_VERSION"));
    let timestamp =
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let _ = writeln!(out, "timestamp = {timestamp}");
    let _ = writeln!(out, "command = {command}");
    for (key, value) in artifacts {
        let _ = writeln!(out, "{key} = {value}");
    }
    out
}
