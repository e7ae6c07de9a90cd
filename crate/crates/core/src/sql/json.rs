//! Gold-query JSON format.
//!
//! ```json
//! {"table_ids":["t1"],"select":{"agg":"max","col":"age"},
//!  "where":[{"col":"place","op":"eq","val":"ohio","conn":"and"}],
//!  "group_by":["place"],"having":[...],
//!  "order_by":{"col":"age","agg":"max","dir":"desc","limit":3}}
//! ```
//!
//! Condition values: a JSON string is a text literal, a number is numeric,
//! a two-element number array is a `between` range and `{"root":true}` is the
//! nested-query placeholder.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Agg, Condition, Connector, Direction, Op, OrderBy, Select, SqlQuery, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryDecodeError {
    #[error("malformed query JSON at `{path}`: {message}")]
    Json { path: String, message: String },
    #[error("invalid query at `{path}`: {message}")]
    Invalid { path: String, message: String },
}

impl QueryDecodeError {
    pub fn path(&self) -> &str {
        match self {
            QueryDecodeError::Json { path, .. } | QueryDecodeError::Invalid { path, .. } => path,
        }
    }

    fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        QueryDecodeError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSelect {
    agg: Agg,
    col: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCondition {
    col: String,
    #[serde(default, skip_serializing_if = "Agg::is_none")]
    agg: Agg,
    op: Op,
    val: serde_json::Value,
    #[serde(default)]
    conn: Connector,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrderBy {
    col: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    agg: Option<Agg>,
    dir: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limit: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuery {
    table_ids: Vec<String>,
    select: RawSelect,
    #[serde(default, rename = "where")]
    conditions: Vec<RawCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group_by: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    having: Option<Vec<RawCondition>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order_by: Option<RawOrderBy>,
}

pub fn decode_query(text: &str) -> Result<SqlQuery, QueryDecodeError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawQuery = serde_path_to_error::deserialize(de).map_err(|e| QueryDecodeError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    from_raw(raw)
}

/// Decodes from an already-parsed JSON value (dataset lines embed the gold).
pub fn decode_query_value(value: serde_json::Value) -> Result<SqlQuery, QueryDecodeError> {
    let raw: RawQuery = serde_path_to_error::deserialize(value).map_err(|e| QueryDecodeError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    from_raw(raw)
}

pub fn encode_query(query: &SqlQuery) -> String {
    serde_json::to_string(&to_raw(query)).expect("query serialization is infallible")
}

fn from_raw(raw: RawQuery) -> Result<SqlQuery, QueryDecodeError> {
    if raw.table_ids.is_empty() {
        return Err(QueryDecodeError::invalid("table_ids", "at least one table is required"));
    }
    let conditions = raw
        .conditions
        .into_iter()
        .enumerate()
        .map(|(i, c)| condition_from_raw(c, &format!("where[{i}]"), false))
        .collect::<Result<Vec<_>, _>>()?;
    let having = match raw.having {
        None => None,
        Some(list) => Some(
            list.into_iter()
                .enumerate()
                .map(|(i, c)| condition_from_raw(c, &format!("having[{i}]"), true))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let has_group = raw.group_by.as_ref().is_some_and(|g| !g.is_empty());
    if having.as_ref().is_some_and(|h| !h.is_empty()) && !has_group {
        return Err(QueryDecodeError::invalid("having", "having requires a non-empty group_by"));
    }
    let order_by = match raw.order_by {
        None => None,
        Some(o) => {
            let limit = match o.limit {
                None => None,
                Some(n) if n >= 1 && n <= u32::MAX as i64 => Some(n as u32),
                Some(n) => {
                    return Err(QueryDecodeError::invalid(
                        "order_by.limit",
                        format!("limit must be a positive integer, got {n}"),
                    ))
                }
            };
            Some(OrderBy {
                col: o.col,
                agg: o.agg,
                dir: o.dir,
                limit,
            })
        }
    };
    Ok(SqlQuery {
        table_ids: raw.table_ids,
        select: Select {
            agg: raw.select.agg,
            col: raw.select.col,
        },
        conditions,
        group_by: raw.group_by,
        having,
        order_by,
    })
}

fn condition_from_raw(raw: RawCondition, path: &str, in_having: bool) -> Result<Condition, QueryDecodeError> {
    if !in_having && !raw.agg.is_none() {
        return Err(QueryDecodeError::invalid(
            format!("{path}.agg"),
            "aggregators are only allowed in having conditions",
        ));
    }
    let val = value_from_json(&raw.val, &format!("{path}.val"))?;
    match (&val, raw.op) {
        (Value::Range(..), Op::Between) => {}
        (_, Op::Between) => {
            return Err(QueryDecodeError::invalid(
                format!("{path}.val"),
                "between takes exactly two numeric endpoints",
            ))
        }
        (Value::Range(..), op) => {
            return Err(QueryDecodeError::invalid(
                format!("{path}.val"),
                format!("operator {op} takes a single value"),
            ))
        }
        _ => {}
    }
    Ok(Condition {
        col: raw.col,
        agg: raw.agg,
        op: raw.op,
        val,
        conn: raw.conn,
    })
}

pub(crate) fn value_from_json(v: &serde_json::Value, path: &str) -> Result<Value, QueryDecodeError> {
    use serde_json::Value as J;
    match v {
        J::String(s) => Ok(Value::Text(s.clone())),
        J::Number(n) => n
            .as_f64()
            .filter(|f| f.is_finite())
            .map(Value::Number)
            .ok_or_else(|| QueryDecodeError::invalid(path, "number out of range")),
        J::Array(items) => match items.as_slice() {
            [J::Number(a), J::Number(b)] => match (a.as_f64(), b.as_f64()) {
                (Some(a), Some(b)) => Ok(Value::Range(a, b)),
                _ => Err(QueryDecodeError::invalid(path, "range endpoints out of range")),
            },
            _ => Err(QueryDecodeError::invalid(path, "a range must be exactly two numbers")),
        },
        J::Object(map) if map.len() == 1 && map.get("root") == Some(&J::Bool(true)) => Ok(Value::Root),
        other => Err(QueryDecodeError::invalid(path, format!("unsupported value payload {other}"))),
    }
}

pub(crate) fn value_to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Text(s) => json!(s),
        Value::Number(n) => number_json(*n),
        Value::Range(a, b) => json!([number_json(*a), number_json(*b)]),
        Value::Root => json!({"root": true}),
    }
}

/// Integral values are written without a fractional part.
fn number_json(n: f64) -> serde_json::Value {
    if n.fract() == 0.0 && n.abs() < 9.0e15 {
        json!(n as i64)
    } else {
        json!(n)
    }
}

fn condition_to_raw(c: &Condition) -> RawCondition {
    RawCondition {
        col: c.col.clone(),
        agg: c.agg,
        op: c.op,
        val: value_to_json(&c.val),
        conn: c.conn,
    }
}

fn to_raw(q: &SqlQuery) -> RawQuery {
    RawQuery {
        table_ids: q.table_ids.clone(),
        select: RawSelect {
            agg: q.select.agg,
            col: q.select.col.clone(),
        },
        conditions: q.conditions.iter().map(condition_to_raw).collect(),
        group_by: q.group_by.clone(),
        having: q.having.as_ref().map(|h| h.iter().map(condition_to_raw).collect()),
        order_by: q.order_by.as_ref().map(|o| RawOrderBy {
            col: o.col.clone(),
            agg: o.agg,
            dir: o.dir,
            limit: o.limit.map(i64::from),
        }),
    }
}

impl Serialize for SqlQuery {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_raw(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SqlQuery {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawQuery::deserialize(d)?;
        from_raw(raw).map_err(serde::de::Error::custom)
    }
}
