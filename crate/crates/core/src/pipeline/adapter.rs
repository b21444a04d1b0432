//! Host codec reached through shell command templates operating on raw files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{fill_template, run_shell, shell_quote};

pub const PLACEHOLDERS: [&str; 7] = ["input", "output", "qp", "width", "height", "fps", "bitdepth"];

/// Encode and decode command templates plus the codec identifier used to
/// pick reconstruction models.
///
/// Templates may use `{input} {output} {qp} {width} {height} {fps}
/// {bitdepth}`; `{input}` and `{output}` are required and no placeholder
/// may appear twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodecAdapter {
    pub codec_id: String,
    pub encode_template: String,
    pub decode_template: String,
}

/// Values substituted into a template.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodingParams {
    pub qp: f64,
    pub width: usize,
    pub height: usize,
    pub fps: f64,
    pub bit_depth: u8,
}

fn check_template(which: &str, t: &str) -> Result<()> {
    for p in PLACEHOLDERS {
        let n = t.matches(&format!("{{{p}}}")).count();
        if n > 1 {
            return Err(Error::InvalidArgument(format!("{which} template repeats {{{p}}}")));
        }
        if n == 0 && (p == "input" || p == "output") {
            return Err(Error::InvalidArgument(format!("{which} template lacks {{{p}}}")));
        }
    }
    Ok(())
}

impl CodecAdapter {
    pub fn new(codec_id: impl Into<String>, encode_template: impl Into<String>, decode_template: impl Into<String>) -> Result<Self> {
        let a = CodecAdapter {
            codec_id: codec_id.into(),
            encode_template: encode_template.into(),
            decode_template: decode_template.into(),
        };
        a.validate()?;
        Ok(a)
    }

    /// Adapter whose "bitstream" is the raw input itself.
    pub fn identity(codec_id: impl Into<String>) -> Self {
        CodecAdapter {
            codec_id: codec_id.into(),
            encode_template: "cp {input} {output}".into(),
            decode_template: "cp {input} {output}".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_template("encode", &self.encode_template)?;
        check_template("decode", &self.decode_template)
    }

    fn command(template: &str, input: &Path, output: &Path, p: &CodingParams) -> String {
        fill_template(
            template,
            &[
                ("input", shell_quote(&input.to_string_lossy())),
                ("output", shell_quote(&output.to_string_lossy())),
                ("qp", p.qp.to_string()),
                ("width", p.width.to_string()),
                ("height", p.height.to_string()),
                ("fps", p.fps.to_string()),
                ("bitdepth", p.bit_depth.to_string()),
            ],
        )
    }

    pub fn encode_command(&self, input: &Path, output: &Path, p: &CodingParams) -> String {
        Self::command(&self.encode_template, input, output, p)
    }

    pub fn decode_command(&self, input: &Path, output: &Path, p: &CodingParams) -> String {
        Self::command(&self.decode_template, input, output, p)
    }

    pub fn encode(&self, input: &Path, output: &Path, p: &CodingParams) -> Result<()> {
        run_shell(&self.encode_command(input, output, p)).map(drop)
    }

    pub fn decode(&self, input: &Path, output: &Path, p: &CodingParams) -> Result<()> {
        run_shell(&self.decode_command(input, output, p)).map(drop)
    }
}
