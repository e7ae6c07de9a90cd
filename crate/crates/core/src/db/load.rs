use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{Table, TableStore};
use crate::sql::SqlQuery;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One question/gold pair of an examples file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub id: String,
    pub table_id: String,
    pub question: String,
    pub gold: SqlQuery,
}

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String), std::io::Error>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .filter(|r| !matches!(r, Ok((_, l)) if l.trim().is_empty()))
}

/// Reads line-delimited table objects. Line numbers in errors are 1-based.
pub fn load_tables<R: BufRead>(reader: R) -> Result<TableStore, LoadError> {
    let mut store = TableStore::new();
    for item in lines(reader) {
        let (line, text) = item?;
        let table: Table = serde_json::from_str(&text).map_err(|e| LoadError::Json {
            line,
            message: e.to_string(),
        })?;
        table
            .validate()
            .map_err(|message| LoadError::Schema { line, message })?;
        if let Err(t) = store.insert(table) {
            return Err(LoadError::DuplicateId { line, id: t.id });
        }
    }
    Ok(store)
}

/// Reads line-delimited examples; with a store, table references are checked.
pub fn load_examples<R: BufRead>(reader: R, store: Option<&TableStore>) -> Result<Vec<Example>, LoadError> {
    let mut out: Vec<Example> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for item in lines(reader) {
        let (line, text) = item?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let ex: Example = serde_path_to_error::deserialize(de).map_err(|e| LoadError::Json {
            line,
            message: format!("at `{}`: {}", e.path(), e.inner()),
        })?;
        if !seen.insert(ex.id.clone()) {
            return Err(LoadError::DuplicateId { line, id: ex.id });
        }
        if let Some(store) = store {
            if store.get(&ex.table_id).is_none() {
                return Err(LoadError::Schema {
                    line,
                    message: format!("unknown table `{}`", ex.table_id),
                });
            }
        }
        out.push(ex);
    }
    Ok(out)
}
