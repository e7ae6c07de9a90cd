//! In-memory table store, dataset ingestion and query execution.

mod exec;
mod load;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use exec::{execute, execution_match, try_execution_match, ExecError, ResultSet};
pub use load::{load_examples, load_tables, Example, LoadError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    Text,
    Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: ColumnType,
}

/// A single table value. `Null` only appears in results (empty aggregates);
/// ingestion rejects it.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Number(f64),
    Null,
}

impl Cell {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(n) => Some(*n),
            _ => None,
        }
    }

    /// Total order: nulls, then numbers, then text.
    pub fn total_cmp(&self, other: &Cell) -> Ordering {
        fn rank(c: &Cell) -> u8 {
            match c {
                Cell::Null => 0,
                Cell::Number(_) => 1,
                Cell::Text(_) => 2,
            }
        }
        match (self, other) {
            (Cell::Number(a), Cell::Number(b)) => a.total_cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Text(s) => f.write_str(s),
            Cell::Number(n) => f.write_str(&crate::sql::format_number(*n)),
            Cell::Null => f.write_str("NULL"),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Text(t) => s.serialize_str(t),
            Cell::Number(n) if n.fract() == 0.0 && n.abs() < 9.0e15 => s.serialize_i64(*n as i64),
            Cell::Number(n) => s.serialize_f64(*n),
            Cell::Null => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(Cell::Text(s)),
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(Cell::Number)
                .ok_or_else(|| serde::de::Error::custom("number out of range")),
            serde_json::Value::Null => Ok(Cell::Null),
            other => Err(serde::de::Error::custom(format!("unsupported cell value {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub id: String,
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Case-insensitive column lookup.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        self.columns.iter().position(|c| c.name.eq_ignore_ascii_case(name))
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.column_index(name).map(|i| &self.columns[i])
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    /// Checks arity, typing, null-freedom and column-name uniqueness.
    pub fn validate(&self) -> Result<(), String> {
        if self.columns.is_empty() {
            return Err("table declares no columns".into());
        }
        for (i, c) in self.columns.iter().enumerate() {
            if self.columns[..i].iter().any(|p| p.name.eq_ignore_ascii_case(&c.name)) {
                return Err(format!("duplicate column name `{}`", c.name));
            }
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(format!(
                    "row {r} has {} values but the table declares {} columns",
                    row.len(),
                    self.columns.len()
                ));
            }
            for (cell, col) in row.iter().zip(&self.columns) {
                let ok = matches!(
                    (cell, col.ty),
                    (Cell::Text(_), ColumnType::Text) | (Cell::Number(_), ColumnType::Number)
                );
                if !ok {
                    return Err(format!("row {r}: value {cell:?} does not fit column `{}` ({:?})", col.name, col.ty));
                }
            }
        }
        Ok(())
    }

    /// Copy limited to the first `n` rows.
    pub fn preview(&self, n: usize) -> Table {
        Table {
            rows: self.rows.iter().take(n).cloned().collect(),
            ..self.clone()
        }
    }
}

/// Tables indexed by id. Immutable once loaded.
#[derive(Debug, Clone, Default)]
pub struct TableStore {
    tables: BTreeMap<String, Table>,
}

impl TableStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on a duplicate id, returning the rejected table.
    pub fn insert(&mut self, table: Table) -> Result<(), Table> {
        if self.tables.contains_key(&table.id) {
            return Err(table);
        }
        self.tables.insert(table.id.clone(), table);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Table> {
        self.tables.get(id)
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Table> {
        self.tables.values()
    }
}

impl FromIterator<Table> for TableStore {
    /// Later duplicates are dropped.
    fn from_iter<I: IntoIterator<Item = Table>>(iter: I) -> Self {
        let mut store = TableStore::new();
        for t in iter {
            let _ = store.insert(t);
        }
        store
    }
}
