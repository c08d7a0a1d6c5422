//! Table loading and the mixed-type row distance.
//!
//! Column names carry the schema: a name ending in `+` or `-` marks a goal
//! column (maximize / minimize), which is always numeric; any other name is
//! an independent column, numeric when its first character is uppercase and
//! symbolic otherwise. The literal token `?` marks a missing cell.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;

use crate::{Error, Result};

/// The token that marks a missing cell.
pub const MISSING: &str = "?";

/// One cell of a row: a number, a symbol, or missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Num(f64),
    Sym(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    /// Numeric payload, if any.
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Sym(s) => write!(f, "{s}"),
            Cell::Missing => write!(f, "{MISSING}"),
        }
    }
}

/// Numeric or symbolic storage for a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColKind {
    Numeric,
    Symbolic,
}

/// Optimization direction of a goal column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// Whether a column is an input or something to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Independent,
    Goal(Direction),
}

/// One typed column plus the lo/hi stats gathered at parse time.
///
/// `lo`/`hi` are only meaningful for numeric columns; they start at
/// `(inf, -inf)` and stay that way when every cell is missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub index: usize,
    pub kind: ColKind,
    pub role: Role,
    pub lo: f64,
    pub hi: f64,
}

impl Column {
    /// Classify a header token. Goals (trailing `+`/`-`) are numeric no
    /// matter their case; independents are numeric iff the first character
    /// is uppercase.
    pub fn from_header(name: &str, index: usize) -> Self {
        let role = if name.ends_with('+') {
            Role::Goal(Direction::Maximize)
        } else if name.ends_with('-') {
            Role::Goal(Direction::Minimize)
        } else {
            Role::Independent
        };
        let kind = match role {
            Role::Goal(_) => ColKind::Numeric,
            Role::Independent => {
                if name.chars().next().is_some_and(char::is_uppercase) {
                    ColKind::Numeric
                } else {
                    ColKind::Symbolic
                }
            }
        };
        Column {
            name: name.to_string(),
            index,
            kind,
            role,
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    pub fn is_goal(&self) -> bool {
        matches!(self.role, Role::Goal(_))
    }

    /// Map `v` onto `[0, 1]` using the column's observed lo/hi.
    /// A constant column (hi = lo) maps everything to 0.
    pub fn normalize(&self, v: f64) -> f64 {
        if self.hi > self.lo {
            ((v - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    /// Per-column distance between two cells, in `[0, 1]`.
    ///
    /// Numeric cells compare by normalized absolute difference; symbolic
    /// cells are 0 when equal, else 1. Missing values are scored
    /// pessimistically: both missing is 1, and a single missing numeric side
    /// is imputed as far as possible from the known side (0 when the known
    /// normalized value is above 0.5, else 1).
    pub fn aha_dist(&self, a: &Cell, b: &Cell) -> f64 {
        match (a, b) {
            (Cell::Missing, Cell::Missing) => 1.0,
            (Cell::Missing, known) | (known, Cell::Missing) => match self.kind {
                ColKind::Symbolic => 1.0,
                ColKind::Numeric => match known.num() {
                    Some(v) => {
                        let v = self.normalize(v);
                        let imputed = if v > 0.5 { 0.0 } else { 1.0 };
                        (v - imputed).abs()
                    }
                    None => 1.0,
                },
            },
            (Cell::Num(x), Cell::Num(y)) => (self.normalize(*x) - self.normalize(*y)).abs(),
            (Cell::Sym(x), Cell::Sym(y)) if x == y => 0.0,
            (Cell::Sym(_), Cell::Sym(_)) => 1.0,
            // Mixed num/sym in one column only happens on hand-built rows;
            // treat it like a symbol mismatch.
            _ => 1.0,
        }
    }
}

/// One data row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub cells: Vec<Cell>,
}

/// A parsed dataset: typed columns plus row storage. Immutable after parse,
/// so it can be shared freely across concurrent runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl Table {
    /// Parse a CSV byte stream: comma-separated, header row first, `?` for
    /// missing, whitespace around cells trimmed (header tokens kept as-is).
    /// Ragged rows are rejected, not padded.
    pub fn parse<R: Read>(source: R, name: &str) -> Result<Table> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::Fields)
            .from_reader(source);

        let headers = reader.headers()?.clone();
        if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
            return Err(Error::EmptyInput);
        }
        let mut columns: Vec<Column> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| Column::from_header(h, i))
            .collect();
        if !columns.iter().any(Column::is_goal) {
            return Err(Error::NoGoalColumn);
        }
        if columns.iter().all(Column::is_goal) {
            return Err(Error::NoIndependentColumn);
        }

        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != columns.len() {
                return Err(Error::RaggedRow {
                    row: line + 1,
                    expected: columns.len(),
                    found: record.len(),
                });
            }
            let mut cells = Vec::with_capacity(columns.len());
            for (col, token) in columns.iter_mut().zip(record.iter()) {
                cells.push(parse_cell(col, token, line + 1)?);
            }
            rows.push(Row { cells });
        }
        if rows.is_empty() {
            return Err(Error::NoRows {
                name: name.to_string(),
            });
        }

        Ok(Table {
            name: name.to_string(),
            columns,
            rows,
        })
    }

    /// Parse a CSV file; the table is named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Table> {
        let path = path.as_ref();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Table::parse(std::io::BufReader::new(file), &name)
    }

    /// Render back to the CSV contract. Reparsing the output yields an
    /// identical table.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.cells.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Indices of independent columns.
    pub fn x_indices(&self) -> Vec<usize> {
        self.columns
            .iter()
            .filter(|c| !c.is_goal())
            .map(|c| c.index)
            .collect()
    }

    /// Indices of goal columns.
    pub fn goal_indices(&self) -> Vec<usize> {
        self.columns
            .iter()
            .filter(|c| c.is_goal())
            .map(|c| c.index)
            .collect()
    }

    /// Distance between two rows over a column subset:
    /// `sqrt(sum(dist^2) / |cols|)`, so it stays in `[0, 1]`.
    pub fn row_dist(&self, a: &Row, b: &Row, cols: &[usize]) -> Result<f64> {
        if cols.is_empty() {
            return Err(Error::EmptyColumnSubset);
        }
        let mut sum = 0.0;
        for &i in cols {
            let d = self.columns[i].aha_dist(&a.cells[i], &b.cells[i]);
            sum += d * d;
        }
        Ok((sum / cols.len() as f64).sqrt())
    }

    /// Distance over the independent columns only (the default subset).
    pub fn x_dist(&self, a: &Row, b: &Row) -> Result<f64> {
        self.row_dist(a, b, &self.x_indices())
    }

    /// Same multiset of rows in a permuted order; deterministic for a fixed
    /// seed.
    pub fn shuffle<R: Rng>(&self, rng: &mut R) -> Table {
        let mut rows = self.rows.clone();
        rows.shuffle(rng);
        Table {
            name: self.name.clone(),
            columns: self.columns.clone(),
            rows,
        }
    }
}

fn parse_cell(col: &mut Column, token: &str, row: usize) -> Result<Cell> {
    if token == MISSING {
        return Ok(Cell::Missing);
    }
    match col.kind {
        ColKind::Symbolic => Ok(Cell::Sym(token.to_string())),
        ColKind::Numeric => {
            let v: f64 = token.parse().map_err(|_| Error::BadNumber {
                column: col.name.clone(),
                row,
                token: token.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::BadNumber {
                    column: col.name.clone(),
                    row,
                    token: token.to_string(),
                });
            }
            col.lo = col.lo.min(v);
            col.hi = col.hi.max(v);
            Ok(Cell::Num(v))
        }
    }
}
