use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use normortho::NormalMatrix;

/// Reads a matrix argument: an existing file, else an inline matrix with
/// rows separated by `/` or `,`, else a single row of glyphs.
pub fn matrix(arg: &str) -> Result<NormalMatrix> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else if arg.contains(['/', ',']) {
        arg.replace(['/', ','], "\n")
    } else if !arg.is_empty() && arg.chars().all(|c| c == '0' || c == '-') {
        arg.to_string()
    } else {
        bail!(UsageError(format!(
            "{arg}: no such file and not an inline matrix"
        )));
    };
    let trimmed: String = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n");
    NormalMatrix::parse(&trimmed).with_context(|| format!("parsing matrix {arg}"))
}

/// Errors that map to the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Converts a 1-based index argument to 0-based.
pub fn index(value: usize, n: usize, name: &str) -> Result<usize> {
    if value == 0 || value > n {
        bail!(UsageError(format!(
            "--{name} must be between 1 and {n}, got {value}"
        )));
    }
    Ok(value - 1)
}
