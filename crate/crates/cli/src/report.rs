//! Report envelopes and file emission.
//!
//! Primary outputs contain only run-independent content (tool version,
//! scientific config, results), so reruns and different worker counts
//! produce byte-identical files. Volatile diagnostics — wall time, worker
//! count, the exact argv — go to stderr and to a `.timing` sidecar next to
//! the output file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::Serialize;

pub const TOOL: &str = "weilscan";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: serde_json::Value,
    result: &'a T,
}

/// One deterministic JSON document: tool, version, command, config echo,
/// result.
pub fn render<T: Serialize>(command: &str, config: serde_json::Value, result: &T) -> Result<String> {
    let doc = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        config,
        result,
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Writes to the path, or to stdout when no path was given.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn timing_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".timing");
    out.with_file_name(name)
}

/// Volatile run diagnostics: stderr always, sidecar when a file was written.
pub fn emit_timing(out: Option<&Path>, command: &str, wall_ms: u128, workers: usize) {
    eprintln!("{command}: done in {wall_ms} ms ({workers} workers)");
    if let Some(path) = out {
        let body = format!("wall-time-ms: {wall_ms}\nworkers: {workers}\ncommand: {command}\n");
        if let Err(e) = fs::write(timing_path(path), body) {
            eprintln!("warning: could not write timing sidecar: {e}");
        }
    }
}
