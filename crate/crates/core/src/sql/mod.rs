//! Structured SQL parse representation.
//!
//! A [`SqlQuery`] covers the single-select sketch (aggregator + column,
//! conjunctive/disjunctive conditions) plus group/having/order extensions.
//! Queries arrive structured; there is no SQL text parser here.

mod canon;
mod json;
mod render;
mod slot;

use std::fmt;
use std::str::FromStr;

pub use canon::{canonical_value, canonicalize, query_match};
pub use json::{decode_query, decode_query_value, encode_query, QueryDecodeError};
pub(crate) use json::{value_from_json, value_to_json};
pub use render::{format_number, render_sql, render_value};
pub(crate) use render::{op_symbol, target};
pub use slot::{Clause, SlotId, SlotIdParseError, SlotKind};

/// Error for an enum code outside its closed set.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} code `{code}`")]
pub struct UnknownCode {
    pub kind: &'static str,
    pub code: String,
}

macro_rules! code_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal, { $($(#[$vmeta:meta])* $variant:ident => $code:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub enum $name {
            $($(#[$vmeta])* $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn code(self) -> &'static str {
                match self {
                    $($name::$variant => $code),+
                }
            }
        }

        impl FromStr for $name {
            type Err = UnknownCode;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($code => Ok($name::$variant),)+
                    _ => Err(UnknownCode { kind: $kind, code: s.to_string() }),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.code())
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.code())
            }
        }

        impl<'de> serde::Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

code_enum!(
    /// Aggregation applied to a selected, grouped or ordered column.
    Agg, "aggregator", {
        #[default]
        None => "none",
        Max => "max",
        Min => "min",
        Count => "count",
        Sum => "sum",
        Avg => "avg",
    }
);

code_enum!(
    /// Comparison operator of a condition.
    Op, "operator", {
        #[default]
        Eq => "eq",
        Gt => "gt",
        Lt => "lt",
        Ge => "ge",
        Le => "le",
        Ne => "ne",
        In => "in",
        NotIn => "not_in",
        Like => "like",
        Between => "between",
    }
);

code_enum!(
    /// Connector joining a condition to the next one.
    Connector, "connector", {
        #[default]
        And => "and",
        Or => "or",
    }
);

code_enum!(
    /// Sort direction.
    Direction, "direction", {
        #[default]
        Asc => "asc",
        Desc => "desc",
    }
);

impl Agg {
    pub fn is_none(&self) -> bool {
        matches!(self, Agg::None)
    }

    /// Aggregators that need a numeric input column.
    pub fn is_numeric(self) -> bool {
        matches!(self, Agg::Max | Agg::Min | Agg::Sum | Agg::Avg)
    }
}

impl Op {
    /// Ops offered by the WikiSQL-style sketch.
    pub const WIKISQL: &'static [Op] = &[Op::Eq, Op::Gt, Op::Lt];
}

/// Condition payload.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Number(f64),
    /// Inclusive endpoints of `between`.
    Range(f64, f64),
    /// Placeholder for a value computed by a nested query.
    Root,
}

impl Value {
    pub fn is_root(&self) -> bool {
        matches!(self, Value::Root)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_value(self))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub col: String,
    /// Only meaningful inside HAVING.
    pub agg: Agg,
    pub op: Op,
    pub val: Value,
    /// Connector to the following condition; ignored on the last one.
    pub conn: Connector,
}

impl Condition {
    pub fn new(col: impl Into<String>, op: Op, val: Value) -> Self {
        Condition {
            col: col.into(),
            agg: Agg::None,
            op,
            val,
            conn: Connector::And,
        }
    }

    pub fn with_conn(mut self, conn: Connector) -> Self {
        self.conn = conn;
        self
    }

    pub fn with_agg(mut self, agg: Agg) -> Self {
        self.agg = agg;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Select {
    pub agg: Agg,
    pub col: String,
}

/// Direction plus optional row limit; asked about as one unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderSpec {
    pub dir: Direction,
    pub limit: Option<u32>,
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.limit {
            Some(n) => write!(f, "{} limit {n}", self.dir),
            None => write!(f, "{}", self.dir),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderBy {
    pub col: String,
    pub agg: Option<Agg>,
    pub dir: Direction,
    pub limit: Option<u32>,
}

impl OrderBy {
    pub fn spec(&self) -> OrderSpec {
        OrderSpec {
            dir: self.dir,
            limit: self.limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqlQuery {
    pub table_ids: Vec<String>,
    pub select: Select,
    pub conditions: Vec<Condition>,
    pub group_by: Option<Vec<String>>,
    pub having: Option<Vec<Condition>>,
    pub order_by: Option<OrderBy>,
}

impl SqlQuery {
    /// `SELECT agg(col) FROM table` with nothing else.
    pub fn simple(table: impl Into<String>, agg: Agg, col: impl Into<String>) -> Self {
        SqlQuery {
            table_ids: vec![table.into()],
            select: Select {
                agg,
                col: col.into(),
            },
            conditions: Vec::new(),
            group_by: None,
            having: None,
            order_by: None,
        }
    }

    pub fn with_condition(mut self, cond: Condition) -> Self {
        self.conditions.push(cond);
        self
    }

    pub fn group_cols(&self) -> &[String] {
        self.group_by.as_deref().unwrap_or(&[])
    }

    pub fn having_conds(&self) -> &[Condition] {
        self.having.as_deref().unwrap_or(&[])
    }

    /// True when every connector between consecutive conditions is AND.
    pub fn all_and(conds: &[Condition]) -> bool {
        conds
            .iter()
            .take(conds.len().saturating_sub(1))
            .all(|c| c.conn == Connector::And)
    }

    pub fn contains_root(&self) -> bool {
        self.conditions
            .iter()
            .chain(self.having_conds())
            .any(|c| c.val.is_root())
    }
}

/// Dataset flavour; selects the slot sketch and the question grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Wikisql,
    Spider,
}

impl FromStr for Mode {
    type Err = UnknownCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wikisql" => Ok(Mode::Wikisql),
            "spider" => Ok(Mode::Spider),
            _ => Err(UnknownCode {
                kind: "mode",
                code: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Wikisql => "wikisql",
            Mode::Spider => "spider",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_roundtrip() {
        for a in Agg::ALL {
            assert_eq!(a.code().parse::<Agg>().unwrap(), *a);
        }
        for o in Op::ALL {
            assert_eq!(o.code().parse::<Op>().unwrap(), *o);
        }
        assert!("median".parse::<Agg>().is_err());
        assert!("==".parse::<Op>().is_err());
    }

    #[test]
    fn all_and_ignores_last_connector() {
        let conds = vec![
            Condition::new("a", Op::Eq, Value::Number(1.0)),
            Condition::new("b", Op::Eq, Value::Number(2.0)).with_conn(Connector::Or),
        ];
        assert!(SqlQuery::all_and(&conds));
        let mixed = vec![
            Condition::new("a", Op::Eq, Value::Number(1.0)).with_conn(Connector::Or),
            Condition::new("b", Op::Eq, Value::Number(2.0)),
        ];
        assert!(!SqlQuery::all_and(&mixed));
    }
}
