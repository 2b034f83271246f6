//! Deterministic text rendering for experiment outputs.
//!
//! All numeric CSV cells use 12 significant digits in scientific notation,
//! every line ends with a bare LF, and metadata precedes the header as
//! `# key = value` comment lines, so a fixed scenario and seed always
//! render to byte-identical files.

use std::fmt::Write as _;

/// One `f64` as 12 significant digits in scientific notation.
pub fn format_sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// Renders metadata lines, a header, and data rows as one CSV document.
pub fn render_csv(
    metadata: &[(String, String)],
    header: &[&str],
    rows: &[Vec<String>],
) -> String {
    let mut out = String::new();
    for (key, value) in metadata {
        let _ = writeln!(out, "# {key} = {value}");
    }
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}
