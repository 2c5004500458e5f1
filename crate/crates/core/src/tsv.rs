//! Minimal tab-separated table reader/writer.
//!
//! Fields never contain raw tabs or newlines; those are written as `\t`,
//! `\n` and `\r`, and a literal backslash as `\\`.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

pub fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// A parsed table: header lookup plus raw (still escaped) rows.
#[derive(Debug)]
pub struct Table {
    name: String,
    columns: HashMap<String, usize>,
    rows: Vec<(usize, Vec<String>)>,
}

/// One data row together with its 1-based line number in the source.
pub struct Row<'a> {
    table: &'a Table,
    pub line: usize,
    fields: &'a [String],
}

impl Table {
    pub fn read<R: BufRead>(name: &str, reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, line)) => {
                    let line = line?;
                    let line = line.strip_suffix('\r').unwrap_or(&line).to_string();
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
                None => {
                    return Err(Error::Parse {
                        file: name.to_string(),
                        line: 1,
                        message: "missing header row".into(),
                    })
                }
            }
        };
        let columns: HashMap<String, usize> = header
            .split('\t')
            .enumerate()
            .map(|(i, c)| (c.trim().to_string(), i))
            .collect();
        let width = header.split('\t').count();

        let mut rows = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
            if fields.len() != width {
                return Err(Error::Parse {
                    file: name.to_string(),
                    line: idx + 1,
                    message: format!("expected {width} fields, found {}", fields.len()),
                });
            }
            rows.push((idx + 1, fields));
        }
        Ok(Table {
            name: name.to_string(),
            columns,
            rows,
        })
    }

    pub fn has_column(&self, column: &str) -> bool {
        self.columns.contains_key(column)
    }

    pub fn require(&self, columns: &[&str]) -> Result<()> {
        for c in columns {
            if !self.has_column(c) {
                return Err(Error::MissingColumn {
                    file: self.name.clone(),
                    column: c.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        self.rows.iter().map(move |(line, fields)| Row {
            table: self,
            line: *line,
            fields,
        })
    }
}

impl Row<'_> {
    fn raw(&self, column: &str) -> Option<&str> {
        self.table
            .columns
            .get(column)
            .map(|&i| self.fields[i].as_str())
    }

    pub fn parse_error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            file: self.table.name.clone(),
            line: self.line,
            message: message.into(),
        }
    }

    /// Unescaped text of a column that the caller has already required.
    pub fn text(&self, column: &str) -> String {
        self.raw(column).map(unescape).unwrap_or_default()
    }

    pub fn opt_f64(&self, column: &str) -> Result<Option<f64>> {
        match self.raw(column).map(str::trim) {
            None | Some("") => Ok(None),
            Some(s) => s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Some)
                .ok_or_else(|| self.parse_error(format!("column `{column}`: invalid number `{s}`"))),
        }
    }

    pub fn f64(&self, column: &str) -> Result<f64> {
        self.opt_f64(column)?
            .ok_or_else(|| self.parse_error(format!("column `{column}`: missing value")))
    }

    pub fn u64(&self, column: &str) -> Result<u64> {
        let s = self.raw(column).unwrap_or("").trim();
        s.parse::<u64>().map_err(|_| {
            self.parse_error(format!(
                "column `{column}`: invalid non-negative integer `{s}`"
            ))
        })
    }
}

/// Formats an optional value as a table cell; `None` becomes an empty cell.
pub fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escape_round_trip() {
        let raw = "a\tb\nc\\d\\t";
        assert_eq!(escape(raw), "a\\tb\\nc\\\\d\\\\t");
        assert_eq!(unescape(&escape(raw)), raw);
    }

    #[test]
    fn ragged_row_is_rejected() {
        let data = "a\tb\n1\t2\n3\n";
        let err = Table::read("x.tsv", data.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn missing_column() {
        let t = Table::read("x.tsv", "a\tb\n".as_bytes()).unwrap();
        let err = t.require(&["a", "c"]).unwrap_err();
        assert_eq!(
            err,
            Error::MissingColumn {
                file: "x.tsv".into(),
                column: "c".into()
            }
        );
    }
}
