//! CSV output with a `#`-prefixed echo of the effective configuration.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use quake_core::io::fmt17;

use crate::CliError;

pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt17(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

pub fn open(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes `# key = value` lines, then the table.
pub struct Table {
    config: Vec<(String, String)>,
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    footer: Vec<(String, String)>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            config: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.push((key.into(), value.to_string()));
        self
    }

    /// Echo line printed after the rows.
    pub fn footer(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.footer.push((key.into(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let mut w = open(out)?;
        let fail = |e: io::Error| CliError::Io(format!("writing output: {e}"));
        for (k, v) in &self.config {
            writeln!(w, "# {k} = {v}").map_err(fail)?;
        }
        {
            let mut csv = csv::Writer::from_writer(&mut w);
            let csv_fail = |e: csv::Error| CliError::Io(format!("writing output: {e}"));
            csv.write_record(&self.header).map_err(csv_fail)?;
            for r in &self.rows {
                csv.write_record(r.iter().map(Cell::render))
                    .map_err(csv_fail)?;
            }
            csv.flush().map_err(fail)?;
        }
        for (k, v) in &self.footer {
            writeln!(w, "# {k} = {v}").map_err(fail)?;
        }
        w.flush().map_err(fail)
    }
}
