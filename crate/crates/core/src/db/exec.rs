//! Single-table executor.
//!
//! Evaluation order: WHERE (AND binds tighter than OR), GROUP BY, HAVING,
//! projection/aggregation, ORDER BY, LIMIT.

use std::cmp::Ordering;

use serde::Serialize;

use super::{Cell, ColumnType, Table, TableStore};
use crate::sql::{format_number, Agg, Condition, Connector, Op, SqlQuery, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExecError {
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("unknown column `{col}` in table `{table}`")]
    UnknownColumn { table: String, col: String },
    #[error("{agg} needs a numeric column, `{col}` is text")]
    NumericAggregateOverText { agg: Agg, col: String },
    #[error("query contains a nested-query placeholder")]
    RootMarker,
    #[error("joins are not supported ({0} tables referenced)")]
    JoinUnsupported(usize),
    #[error("cannot compare column `{col}` with {value} using {op}")]
    TypeMismatch { col: String, op: Op, value: String },
    #[error("unsupported query shape: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultSet {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Row order is meaningful (ORDER BY present).
    #[serde(skip)]
    pub ordered: bool,
}

impl ResultSet {
    /// Rows sorted by the total cell order, for multiset comparison.
    pub fn sorted_rows(&self) -> Vec<Vec<Cell>> {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| compare_rows(a, b));
        rows
    }

    /// Multiset equality, or sequence equality when either side is ordered.
    pub fn same_result(&self, other: &ResultSet) -> bool {
        if self.rows.len() != other.rows.len() {
            return false;
        }
        if self.ordered || other.ordered {
            rows_equal(&self.rows, &other.rows)
        } else {
            rows_equal(&self.sorted_rows(), &other.sorted_rows())
        }
    }
}

fn compare_rows(a: &[Cell], b: &[Cell]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn rows_equal(a: &[Vec<Cell>], b: &[Vec<Cell>]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| compare_rows(x, y) == Ordering::Equal)
}

struct Bound<'a> {
    table: &'a Table,
}

impl<'a> Bound<'a> {
    fn col(&self, name: &str) -> Result<usize, ExecError> {
        self.table.column_index(name).ok_or_else(|| ExecError::UnknownColumn {
            table: self.table.id.clone(),
            col: name.to_string(),
        })
    }
}

pub fn execute(query: &SqlQuery, store: &TableStore) -> Result<ResultSet, ExecError> {
    if query.table_ids.len() != 1 {
        return Err(ExecError::JoinUnsupported(query.table_ids.len()));
    }
    if query.contains_root() {
        return Err(ExecError::RootMarker);
    }
    let table = store
        .get(&query.table_ids[0])
        .ok_or_else(|| ExecError::UnknownTable(query.table_ids[0].clone()))?;
    let b = Bound { table };

    let select_idx = b.col(&query.select.col)?;
    check_agg(table, query.select.agg, select_idx)?;

    let where_cols = query
        .conditions
        .iter()
        .map(|c| b.col(&c.col))
        .collect::<Result<Vec<_>, _>>()?;
    let mut matched = Vec::new();
    for row in &table.rows {
        let mut truth = Vec::with_capacity(query.conditions.len());
        for (c, &idx) in query.conditions.iter().zip(&where_cols) {
            truth.push(eval_condition(c, &row[idx], table, idx)?);
        }
        if combine(&query.conditions, &truth) {
            matched.push(row);
        }
    }

    let order = match &query.order_by {
        Some(o) => {
            let idx = b.col(&o.col)?;
            let agg = o.agg.unwrap_or(Agg::None);
            check_agg(table, agg, idx)?;
            Some((idx, agg, o.dir, o.limit))
        }
        None => None,
    };

    let group_cols = query
        .group_cols()
        .iter()
        .map(|c| b.col(c))
        .collect::<Result<Vec<_>, _>>()?;

    // (output row, sort key)
    let mut out: Vec<(Vec<Cell>, Option<Cell>)> = Vec::new();
    if !group_cols.is_empty() {
        let mut groups: Vec<(Vec<Cell>, Vec<&Vec<Cell>>)> = Vec::new();
        for row in matched {
            let key: Vec<Cell> = group_cols.iter().map(|&i| row[i].clone()).collect();
            match groups
                .iter_mut()
                .find(|(k, _)| compare_rows(k, &key) == Ordering::Equal)
            {
                Some((_, members)) => members.push(row),
                None => groups.push((key, vec![row])),
            }
        }
        let having = query.having_conds();
        let having_cols = having.iter().map(|c| b.col(&c.col)).collect::<Result<Vec<_>, _>>()?;
        for (c, &idx) in having.iter().zip(&having_cols) {
            check_agg(table, c.agg, idx)?;
        }
        for (_, members) in groups {
            let mut truth = Vec::with_capacity(having.len());
            for (c, &idx) in having.iter().zip(&having_cols) {
                let cell = aggregate(c.agg, &members, idx);
                truth.push(eval_condition(c, &cell, table, idx)?);
            }
            if !combine(having, &truth) {
                continue;
            }
            let value = aggregate(query.select.agg, &members, select_idx);
            let key = order.map(|(idx, agg, ..)| aggregate(agg, &members, idx));
            out.push((vec![value], key));
        }
    } else if !query.select.agg.is_none() {
        let value = aggregate(query.select.agg, &matched, select_idx);
        out.push((vec![value], None));
    } else {
        if let Some((_, agg, ..)) = order {
            if !agg.is_none() {
                return Err(ExecError::Unsupported(
                    "aggregate ORDER BY key without GROUP BY".into(),
                ));
            }
        }
        for row in matched {
            let key = order.map(|(idx, ..)| row[idx].clone());
            out.push((vec![row[select_idx].clone()], key));
        }
    }

    if let Some((_, _, dir, limit)) = order {
        out.sort_by(|(_, ka), (_, kb)| {
            let (ka, kb) = (ka.as_ref().unwrap_or(&Cell::Null), kb.as_ref().unwrap_or(&Cell::Null));
            match dir {
                crate::sql::Direction::Asc => ka.total_cmp(kb),
                crate::sql::Direction::Desc => kb.total_cmp(ka),
            }
        });
        if let Some(n) = limit {
            out.truncate(n as usize);
        }
    }

    Ok(ResultSet {
        columns: vec![crate::sql::target(query.select.agg, &table.columns[select_idx].name)],
        rows: out.into_iter().map(|(row, _)| row).collect(),
        ordered: order.is_some(),
    })
}

fn check_agg(table: &Table, agg: Agg, idx: usize) -> Result<(), ExecError> {
    if agg.is_numeric() && table.columns[idx].ty == ColumnType::Text {
        return Err(ExecError::NumericAggregateOverText {
            agg,
            col: table.columns[idx].name.clone(),
        });
    }
    Ok(())
}

/// OR of AND-runs; `conn` of condition i links it to i + 1.
fn combine(conds: &[Condition], truth: &[bool]) -> bool {
    if conds.is_empty() {
        return true;
    }
    let mut any = false;
    let mut run = true;
    for (i, &t) in truth.iter().enumerate() {
        run &= t;
        let last = i + 1 == truth.len();
        if last || conds[i].conn == Connector::Or {
            any |= run;
            run = true;
        }
    }
    any
}

/// Aggregates over `rows`; with `Agg::None` yields the first row's value.
fn aggregate(agg: Agg, rows: &[&Vec<Cell>], idx: usize) -> Cell {
    let nums = || rows.iter().filter_map(|r| r[idx].as_number());
    match agg {
        Agg::None => rows.first().map(|r| r[idx].clone()).unwrap_or(Cell::Null),
        Agg::Count => Cell::Number(rows.iter().filter(|r| r[idx] != Cell::Null).count() as f64),
        Agg::Max => nums().reduce(f64::max).map(Cell::Number).unwrap_or(Cell::Null),
        Agg::Min => nums().reduce(f64::min).map(Cell::Number).unwrap_or(Cell::Null),
        Agg::Sum => {
            if rows.is_empty() {
                Cell::Null
            } else {
                Cell::Number(nums().sum())
            }
        }
        Agg::Avg => {
            if rows.is_empty() {
                Cell::Null
            } else {
                Cell::Number(nums().sum::<f64>() / rows.len() as f64)
            }
        }
    }
}

fn eval_condition(c: &Condition, cell: &Cell, table: &Table, idx: usize) -> Result<bool, ExecError> {
    let mismatch = || ExecError::TypeMismatch {
        col: table.columns[idx].name.clone(),
        op: c.op,
        value: c.val.to_string(),
    };
    if c.op == Op::Like {
        let pattern = match &c.val {
            Value::Text(s) => s.trim_matches('%').to_lowercase(),
            Value::Number(n) => format_number(*n),
            _ => return Err(mismatch()),
        };
        return Ok(match cell {
            Cell::Null => false,
            other => other.to_string().to_lowercase().contains(&pattern),
        });
    }
    if c.op == Op::Between {
        let Value::Range(lo, hi) = c.val else {
            return Err(mismatch());
        };
        let x = match cell {
            Cell::Number(n) => *n,
            Cell::Text(t) => t.trim().parse::<f64>().map_err(|_| mismatch())?,
            Cell::Null => return Ok(false),
        };
        return Ok(lo <= x && x <= hi);
    }
    let ord = match (cell, &c.val) {
        (Cell::Null, _) => return Ok(false),
        (Cell::Number(x), Value::Number(v)) => x.partial_cmp(v),
        (Cell::Number(x), Value::Text(t)) => {
            let v: f64 = t.trim().parse().map_err(|_| mismatch())?;
            x.partial_cmp(&v)
        }
        (Cell::Text(x), Value::Text(v)) => Some(x.as_str().cmp(v.as_str())),
        (Cell::Text(x), Value::Number(v)) => match x.trim().parse::<f64>() {
            Ok(n) => n.partial_cmp(v),
            Err(_) => match c.op {
                Op::Eq | Op::In => return Ok(false),
                Op::Ne | Op::NotIn => return Ok(true),
                _ => return Err(mismatch()),
            },
        },
        (_, Value::Range(..)) | (_, Value::Root) => return Err(mismatch()),
    };
    let Some(ord) = ord else {
        return Ok(false);
    };
    Ok(match c.op {
        Op::Eq | Op::In => ord == Ordering::Equal,
        Op::Ne | Op::NotIn => ord != Ordering::Equal,
        Op::Gt => ord == Ordering::Greater,
        Op::Lt => ord == Ordering::Less,
        Op::Ge => ord != Ordering::Less,
        Op::Le => ord != Ordering::Greater,
        Op::Like | Op::Between => unreachable!("handled above"),
    })
}

/// Execution-accuracy comparison. Errors on either side count as a
/// mismatch and are logged.
pub fn execution_match(a: &SqlQuery, b: &SqlQuery, store: &TableStore) -> bool {
    match try_execution_match(a, b, store) {
        Ok(m) => m,
        Err(e) => {
            tracing::debug!(error = %e, "execution failed; counted as mismatch");
            false
        }
    }
}

pub fn try_execution_match(a: &SqlQuery, b: &SqlQuery, store: &TableStore) -> Result<bool, ExecError> {
    let ra = execute(a, store)?;
    let rb = execute(b, store)?;
    Ok(ra.same_result(&rb))
}
