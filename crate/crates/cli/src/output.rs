//! Delimited text output with fixed numeric formatting.

use std::fmt::Write as _;

use singosc::Params;

use crate::config::located;
use crate::CliError;

pub const DEFAULT_PRECISION: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Accumulates a whole document so it can be written in one go.
pub struct Table {
    format: Format,
    precision: usize,
    text: String,
}

impl Table {
    pub fn new(format: Format, precision: usize) -> Self {
        Table {
            format,
            precision,
            text: String::new(),
        }
    }

    pub fn from_params(p: &Params) -> Result<Self, CliError> {
        let format = match p.str("format").map(|s| s.trim().to_ascii_lowercase()) {
            None => Format::Csv,
            Some(s) if s == "csv" => Format::Csv,
            Some(s) if s == "tsv" => Format::Tsv,
            Some(s) => {
                return Err(CliError::config(format!(
                    "{}: expected csv or tsv, got '{s}'",
                    p.locate("format")
                )))
            }
        };
        let precision = located(p, "precision", p.get_or("precision", DEFAULT_PRECISION))?;
        if !(1..=17).contains(&precision) {
            return Err(CliError::config(format!(
                "{}: precision must be between 1 and 17 significant digits, got {precision}",
                p.locate("precision")
            )));
        }
        Ok(Table::new(format, precision))
    }

    fn sep(&self) -> char {
        match self.format {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }

    pub fn number(&self, x: f64) -> String {
        if x == 0.0 {
            // No negative zero in the output.
            return format!("{:.*e}", self.precision - 1, 0.0);
        }
        format!("{:.*e}", self.precision - 1, x)
    }

    pub fn header(&mut self, names: &[&str]) {
        let line = names.join(&self.sep().to_string());
        self.text.push_str(&line);
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        let parts: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Num(v) => self.number(v),
                Cell::Text(s) => s,
            })
            .collect();
        let line = parts.join(&self.sep().to_string());
        self.text.push_str(&line);
        self.text.push('\n');
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.text, "# {text}");
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
