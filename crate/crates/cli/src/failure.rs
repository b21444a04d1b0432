//! Maps errors to exit codes and prints them as one parsable line:
//! `error: code=N kind=K [segment=I] message="..."`.

use std::fmt;

use resadapt::Error;

pub const CONFIG: u8 = 2;
pub const ADAPTER: u8 = 3;
pub const FORMAT: u8 = 4;

/// A configuration problem found by the CLI itself.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn classify(e: &Error) -> (u8, &'static str) {
    match e.root() {
        Error::Adapter { .. } => (ADAPTER, "adapter"),
        Error::Truncated { .. } => (FORMAT, "truncated"),
        Error::Format(_) => (FORMAT, "format"),
        Error::Shape(_) => (FORMAT, "shape"),
        Error::NonFinite(_) => (FORMAT, "non_finite"),
        Error::InvalidArgument(_) => (CONFIG, "invalid_argument"),
        Error::MissingModel(_) => (CONFIG, "missing_model"),
        Error::Io { .. } | Error::RawIo(_) => (CONFIG, "io"),
        Error::Segment { .. } => unreachable!("root() unwraps segments"),
    }
}

pub fn print_line(code: u8, kind: &str, segment: Option<usize>, message: &str) {
    let seg = segment.map(|i| format!(" segment={i}")).unwrap_or_default();
    let quoted = serde_json::to_string(message).unwrap_or_else(|_| "\"?\"".into());
    eprintln!("error: code={code} kind={kind}{seg} message={quoted}");
}

/// Prints `err` and returns its exit code.
pub fn report(err: &anyhow::Error) -> u8 {
    let (code, kind, segment) = err
        .chain()
        .find_map(|c| {
            if let Some(e) = c.downcast_ref::<Error>() {
                let seg = match e {
                    Error::Segment { index, .. } => Some(*index),
                    _ => None,
                };
                let (code, kind) = classify(e);
                Some((code, kind, seg))
            } else {
                c.downcast_ref::<Usage>().map(|_| (CONFIG, "config", None))
            }
        })
        .unwrap_or((CONFIG, "other", None));
    print_line(code, kind, segment, &message(err));
    code
}

/// The context chain down to the first library error, whose own message
/// already carries its sources.
fn message(err: &anyhow::Error) -> String {
    let mut parts = Vec::new();
    for c in err.chain() {
        parts.push(c.to_string());
        if c.downcast_ref::<Error>().is_some() {
            break;
        }
    }
    parts.join(": ").replace('\n', " ")
}
