//! CSV tables with `#` metadata lines, and companion gnuplot scripts.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

const SIG_DIGITS: i32 = 12;

/// C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    // the exponent after rounding to 12 digits decides the style
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG_DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub struct Table {
    meta: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push(format!("{key}: {value}"));
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width differs from header"
        );
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

/// Writes the table to `path`, or to stdout when no path is given.
pub fn emit(table: &Table, path: Option<&Path>) -> io::Result<()> {
    let text = table.render();
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

/// `<stem>.gp` next to the CSV.
pub fn script_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

/// Writes a gnuplot script that reads `csv` by its file name, so the pair can
/// be moved together.
pub fn emit_script(csv: &Path, body: &str) -> io::Result<PathBuf> {
    let name = csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for {name}");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnheader");
    let _ = writeln!(s, "data = '{name}'");
    s.push_str(body);
    let gp = script_path(csv);
    fs::write(&gp, s)?;
    Ok(gp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_g() {
        let cases = [
            (1.0, "1"),
            (0.1, "0.1"),
            (-2.5, "-2.5"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (999999999999.5, "1e+12"),
            (0.632120558828558, "0.632120558829"),
            (1e-300, "1e-300"),
            (6.02e23, "6.02e+23"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x:e}");
        }
        assert_eq!(fmt_g(f64::NAN), "nan");
        assert_eq!(fmt_g(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn render_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("version", "x");
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(), "# version: x\na,b\n1,2\n");
    }

    #[test]
    #[should_panic]
    fn ragged_rows_rejected() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into()]);
    }
}
