//! Model file format:
//!
//! ```text
//! size 2
//! meet:
//! 0 0
//! 0 1
//! join:
//! 0 1
//! 1 1
//! complement:
//! 1 0
//! R00 = 0
//! R11 = 1
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::relation::ConstantKind;

use super::FiniteModel;

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::ModelSyntax { line, message: message.into() }
}

impl FiniteModel {
    /// Parses the model file format. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<FiniteModel> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let last_line = text.lines().count().max(1);

        let mut next = |want: &str| lines.next().ok_or_else(|| syntax(last_line, format!("expected {want}, found end of file")));

        let (line, size_line) = next("`size n`")?;
        let size: usize = size_line
            .strip_prefix("size")
            .and_then(|rest| rest.trim().parse().ok())
            .ok_or_else(|| syntax(line, "expected `size n`"))?;

        let mut read_rows = |header: &str, rows: usize, width: usize| -> Result<Vec<usize>> {
            let (line, h) = next(header)?;
            if h != header {
                return Err(syntax(line, format!("expected `{header}`")));
            }
            let mut out = Vec::with_capacity(rows * width);
            for _ in 0..rows {
                let (line, row) = next("a table row")?;
                let values: Vec<usize> = row
                    .split_whitespace()
                    .map(|v| v.parse().map_err(|_| syntax(line, format!("`{v}` is not an element"))))
                    .collect::<Result<_>>()?;
                if values.len() != width {
                    return Err(syntax(line, format!("expected {width} entries, found {}", values.len())));
                }
                out.extend(values);
            }
            Ok(out)
        };
        let meet = read_rows("meet:", size, size)?;
        let join = read_rows("join:", size, size)?;
        let complement = read_rows("complement:", 1, size)?;

        let mut constant = |name: &str| -> Result<usize> {
            let (line, l) = next(name)?;
            let (lhs, rhs) = l.split_once('=').ok_or_else(|| syntax(line, format!("expected `{name} = i`")))?;
            if lhs.trim() != name {
                return Err(syntax(line, format!("expected `{name} = i`")));
            }
            rhs.trim().parse().map_err(|_| syntax(line, format!("expected `{name} = i`")))
        };
        let r00 = constant("R00")?;
        let r11 = constant("R11")?;
        if let Some((line, _)) = lines.next() {
            return Err(syntax(line, "unexpected content after `R11`"));
        }
        FiniteModel::new(size, meet, join, complement, r00, r11)
    }

    /// The exact model file form, parseable by [`FiniteModel::parse`].
    pub fn to_file_string(&self) -> String {
        let n = self.size;
        let row = |xs: &[usize]| xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = format!("size {n}\nmeet:\n");
        for r in self.meet.chunks(n) {
            out.push_str(&row(r));
            out.push('\n');
        }
        out.push_str("join:\n");
        for r in self.join.chunks(n) {
            out.push_str(&row(r));
            out.push('\n');
        }
        out.push_str("complement:\n");
        out.push_str(&row(&self.complement));
        out.push('\n');
        let _ = writeln!(out, "R00 = {}", self.r00);
        let _ = writeln!(out, "R11 = {}", self.r11);
        out
    }

    /// Aligned operation tables in the style of Mace4 output.
    pub fn pretty(&self) -> String {
        let n = self.size;
        let w = (n.saturating_sub(1)).to_string().len();
        let header = |sym: &str| {
            let cols: Vec<String> = (0..n).map(|i| format!("{i:>w$}")).collect();
            format!(" {sym} : | {}\n {}-+-{}\n", cols.join(" "), "-".repeat(sym.len() + 2), "-".repeat(cols.join(" ").len()))
        };
        let mut out = String::new();
        for (sym, table) in [("^", &self.meet), ("v", &self.join)] {
            out.push_str(&header(sym));
            for (i, r) in table.chunks(n).enumerate() {
                let cells: Vec<String> = r.iter().map(|v| format!("{v:>w$}")).collect();
                let _ = writeln!(out, " {i:>pad$} | {}", cells.join(" "), pad = sym.len() + 2);
            }
            out.push('\n');
        }
        out.push_str(&header("'"));
        let cells: Vec<String> = self.complement.iter().map(|v| format!("{v:>w$}")).collect();
        let _ = writeln!(out, " {:>pad$} | {}", "", cells.join(" "), pad = 3);
        out.push('\n');
        for k in ConstantKind::ALL {
            let _ = writeln!(out, " {k} : {}", self.constant_index(k));
        }
        out
    }
}
