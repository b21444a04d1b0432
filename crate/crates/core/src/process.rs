use std::process::{Command, Output};

use crate::error::{Error, Result};

/// Quotes a value for POSIX `sh`.
pub(crate) fn shell_quote(s: &str) -> String {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_./:=+,@%".contains(c))
    {
        return s.to_owned();
    }
    format!("'{}'", s.replace('\'', r"'\''"))
}

/// Substitutes `{name}` placeholders. Values are inserted verbatim; callers
/// quote them first.
pub(crate) fn fill_template(template: &str, values: &[(&str, String)]) -> String {
    let mut out = template.to_owned();
    for (name, value) in values {
        out = out.replace(&format!("{{{name}}}"), value);
    }
    out
}

/// Runs `command` through `sh -c`; a non-zero exit becomes an adapter error
/// carrying the trimmed stderr.
pub(crate) fn run_shell(command: &str) -> Result<Output> {
    log::debug!("running `{command}`");
    let output = Command::new("sh")
        .arg("-c")
        .arg(command)
        .output()
        .map_err(|e| Error::Adapter {
            command: command.to_owned(),
            status: "spawn failed".into(),
            stderr: e.to_string(),
        })?;
    if !output.status.success() {
        return Err(Error::Adapter {
            command: command.to_owned(),
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_owned(),
        });
    }
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(shell_quote("/tmp/a.yuv"), "/tmp/a.yuv");
        assert_eq!(shell_quote("a b"), "'a b'");
        assert_eq!(shell_quote("it's"), r"'it'\''s'");
    }

    #[test]
    fn failing_command() {
        let err = run_shell("echo nope >&2; exit 3").unwrap_err();
        match err {
            Error::Adapter { stderr, .. } => assert_eq!(stderr, "nope"),
            e => panic!("{e}"),
        }
    }
}
