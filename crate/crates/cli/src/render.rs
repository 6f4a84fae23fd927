use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "md", alias = "markdown")]
    Markdown,
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Markdown => "md",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn markdown(&self) -> String {
        let width = |s: &str| s.chars().count();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| width(h).max(3)).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(width(cell));
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - width(c))))
                .collect();
            format!("| {} |\n", padded.join(" | "))
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// One command's output in all three renderings.
pub struct Document {
    /// Free-text lines shown above the markdown table.
    pub lines: Vec<String>,
    pub table: Table,
    pub json: Value,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Markdown => {
                let mut out = String::new();
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
                if !self.lines.is_empty() {
                    out.push('\n');
                }
                out.push_str(&self.table.markdown());
                out
            }
            // serde_json maps are ordered by key
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => self.table.csv()?,
        })
    }
}

/// Turns an arbitrary label into a file-name stem.
pub fn file_stem(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

pub enum Golden {
    Match,
    Updated,
    Missing,
    Differs { line: usize, expected: String, actual: String },
}

pub fn golden(dir: &Path, stem: &str, format: Format, text: &str, update: bool) -> Result<Golden> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    if update {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        return Ok(Golden::Updated);
    }
    let Ok(expected) = fs::read_to_string(&path) else {
        return Ok(Golden::Missing);
    };
    if expected == text {
        return Ok(Golden::Match);
    }
    let mut want = expected.lines();
    let mut got = text.lines();
    let mut line = 1;
    loop {
        match (want.next(), got.next()) {
            (Some(a), Some(b)) if a == b => line += 1,
            (a, b) => {
                return Ok(Golden::Differs {
                    line,
                    expected: a.unwrap_or("<end of file>").to_string(),
                    actual: b.unwrap_or("<end of output>").to_string(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_columns_align() {
        let mut t = Table::new(["a", "long header"]);
        t.push(vec!["αβγδε".into(), "1".into()]);
        let md = t.markdown();
        let widths: Vec<usize> = md.lines().map(|l| l.chars().count()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]), "{md}");
    }

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(["x"]);
        t.push(vec!["1, 2".into()]);
        assert_eq!(t.csv().unwrap(), "x\n\"1, 2\"\n");
    }

    #[test]
    fn stems() {
        assert_eq!(file_stem("U(7)+K7"), "U_7_K7");
        assert_eq!(file_stem("8.2"), "8.2");
    }
}
