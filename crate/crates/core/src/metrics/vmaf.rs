//! VMAF through an external tool described by a shell command template.

use std::path::Path;

use crate::error::{Error, Result};
use crate::process::{fill_template, run_shell, shell_quote};

/// Placeholders: `{ref}`, `{dist}`, `{width}`, `{height}` and optionally `{bitdepth}`.
pub fn vmaf_external(
    reference: &Path,
    distorted: &Path,
    width: usize,
    height: usize,
    bit_depth: u8,
    tool_command: &str,
) -> Result<f64> {
    for p in ["{ref}", "{dist}"] {
        if !tool_command.contains(p) {
            return Err(Error::InvalidArgument(format!("VMAF command lacks {p}")));
        }
    }
    let cmd = fill_template(
        tool_command,
        &[
            ("ref", shell_quote(&reference.to_string_lossy())),
            ("dist", shell_quote(&distorted.to_string_lossy())),
            ("width", width.to_string()),
            ("height", height.to_string()),
            ("bitdepth", bit_depth.to_string()),
        ],
    );
    let out = run_shell(&cmd)?;
    let text = String::from_utf8_lossy(&out.stdout);
    parse_vmaf_output(&text)
}

/// Accepts a bare number, a `VMAF score: x` / `vmaf: x` line, or libvmaf
/// JSON with `pooled_metrics.vmaf.mean`.
pub fn parse_vmaf_output(text: &str) -> Result<f64> {
    let score = parse_json(text).or_else(|| parse_lines(text)).ok_or_else(|| {
        Error::Format(format!(
            "cannot find a VMAF score in tool output `{}`",
            text.trim().chars().take(120).collect::<String>()
        ))
    })?;
    if !(0.0..=100.0).contains(&score) {
        return Err(Error::Format(format!("VMAF score {score} outside [0, 100]")));
    }
    Ok(score)
}

fn parse_json(text: &str) -> Option<f64> {
    let v: serde_json::Value = serde_json::from_str(text.trim()).ok()?;
    v.pointer("/pooled_metrics/vmaf/mean")
        .or_else(|| v.pointer("/VMAF score"))
        .and_then(serde_json::Value::as_f64)
}

fn parse_lines(text: &str) -> Option<f64> {
    text.lines().rev().find_map(|line| {
        let line = line.trim();
        if let Ok(v) = line.parse::<f64>() {
            return Some(v);
        }
        let lower = line.to_ascii_lowercase();
        let idx = lower.find("vmaf score").map(|i| i + "vmaf score".len()).or_else(|| {
            lower.strip_prefix("vmaf").map(|_| "vmaf".len())
        })?;
        line[idx..]
            .trim_start_matches(|c: char| c == ':' || c == '=' || c.is_whitespace())
            .split_whitespace()
            .next()?
            .parse()
            .ok()
    })
}
