//! CSV report serialization: '#'-prefixed metadata lines echoing the
//! configuration, a header row, then comma-separated rows with numbers
//! printed to 12 significant digits.  Output is deterministic: identical
//! inputs produce byte-identical text.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Format a float with 12 significant digits.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v:.11e}")
}

#[derive(Debug, Default, Clone)]
pub struct Csv {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header(&mut self, cols: &[&str]) -> &mut Self {
        self.header = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.header.len(), "row width != header width");
        self.rows.push(cells);
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        if !self.header.is_empty() {
            let _ = writeln!(out, "{}", self.header.join(","));
        }
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// Write to a file, or to stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> io::Result<()> {
        let text = self.render();
        match path {
            Some(p) => fs::write(p, text),
            None => io::stdout().write_all(text.as_bytes()),
        }
    }
}

/// Cell helpers.
pub fn num(v: f64) -> String {
    fmt_sig(v)
}

pub fn int(v: usize) -> String {
    v.to_string()
}

pub fn text(v: impl Into<String>) -> String {
    v.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_meta_header_rows() {
        let mut csv = Csv::new();
        csv.meta("command", "gfun").meta("seed", 42);
        csv.header(&["x", "value"]);
        csv.row(vec![num(1.0), num(0.25)]);
        let text = csv.render();
        assert!(text.starts_with("# command=gfun\n# seed=42\nx,value\n"));
        assert!(text.contains("1.00000000000e0,2.50000000000e-1"));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(0.3680051987075608), "3.68005198708e-1");
        assert_eq!(fmt_sig(-12345.678901234), "-1.23456789012e4");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn deterministic_render() {
        let build = || {
            let mut csv = Csv::new();
            csv.meta("alpha", 0.5);
            csv.header(&["a"]);
            csv.row(vec![num(std::f64::consts::PI)]);
            csv.render()
        };
        assert_eq!(build(), build());
    }
}
