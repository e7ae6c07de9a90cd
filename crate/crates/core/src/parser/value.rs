use std::fmt;

use serde::{Deserialize, Serialize};

use crate::sql::{render_value, value_from_json, value_to_json, Agg, Connector, Direction, Op, OrderSpec, SlotKind, Value};

/// Candidate filler of one slot.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotValue {
    Column(String),
    Agg(Agg),
    Op(Op),
    Literal(Value),
    Count(usize),
    Flag(bool),
    Conn(Connector),
    Order(OrderSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad value for {kind}: {message}")]
pub struct SlotValueError {
    pub kind: &'static str,
    pub message: String,
}

impl SlotValue {
    /// Reads the bare JSON form used by scripted parsers: a string for
    /// columns, aggregators, operators, connectors and order specs
    /// (`"desc limit 3"`), a number for counts, a bool for presence flags
    /// and a condition value payload for literals.
    pub fn from_slot_json(kind: SlotKind, json: &serde_json::Value) -> Result<SlotValue, SlotValueError> {
        let err = |message: String| SlotValueError {
            kind: kind.name(),
            message,
        };
        let text = || json.as_str().ok_or_else(|| err(format!("expected a string, got {json}")));
        use SlotKind as K;
        match kind {
            K::SelectCol | K::WhereCol | K::GroupByCol | K::HavingCol | K::OrderByCol => {
                Ok(SlotValue::Column(text()?.to_string()))
            }
            K::SelectAgg | K::HavingAgg | K::OrderByAgg => text()?.parse().map(SlotValue::Agg).map_err(|e| err(e.to_string())),
            K::WhereOp | K::HavingOp => text()?.parse().map(SlotValue::Op).map_err(|e| err(e.to_string())),
            K::WhereConn => text()?.parse().map(SlotValue::Conn).map_err(|e| err(e.to_string())),
            K::WhereVal | K::HavingVal => value_from_json(json, "value")
                .map(SlotValue::Literal)
                .map_err(|e| err(e.to_string())),
            K::WhereCount | K::HavingCount => json
                .as_u64()
                .map(|n| SlotValue::Count(n as usize))
                .ok_or_else(|| err(format!("expected a count, got {json}"))),
            K::GroupByPresent | K::OrderByPresent => json
                .as_bool()
                .map(SlotValue::Flag)
                .ok_or_else(|| err(format!("expected a bool, got {json}"))),
            K::OrderByDir => parse_order_spec(text()?).map(SlotValue::Order).map_err(err),
        }
    }

    /// Inverse of [`SlotValue::from_slot_json`].
    pub fn to_slot_json(&self) -> serde_json::Value {
        match self {
            SlotValue::Column(c) => c.clone().into(),
            SlotValue::Agg(a) => a.code().into(),
            SlotValue::Op(o) => o.code().into(),
            SlotValue::Literal(v) => value_to_json(v),
            SlotValue::Count(n) => (*n).into(),
            SlotValue::Flag(b) => (*b).into(),
            SlotValue::Conn(c) => c.code().into(),
            SlotValue::Order(o) => o.to_string().into(),
        }
    }

    /// Whether this variant can fill a slot of `kind`.
    pub fn fits(&self, kind: SlotKind) -> bool {
        use SlotKind as K;
        matches!(
            (self, kind),
            (SlotValue::Column(_), K::SelectCol | K::WhereCol | K::GroupByCol | K::HavingCol | K::OrderByCol)
                | (SlotValue::Agg(_), K::SelectAgg | K::HavingAgg | K::OrderByAgg)
                | (SlotValue::Op(_), K::WhereOp | K::HavingOp)
                | (SlotValue::Literal(_), K::WhereVal | K::HavingVal)
                | (SlotValue::Count(_), K::WhereCount | K::HavingCount)
                | (SlotValue::Flag(_), K::GroupByPresent | K::OrderByPresent)
                | (SlotValue::Conn(_), K::WhereConn)
                | (SlotValue::Order(_), K::OrderByDir)
        )
    }

    pub fn as_column(&self) -> Option<&str> {
        match self {
            SlotValue::Column(c) => Some(c),
            _ => None,
        }
    }
}

/// `asc`, `desc`, optionally followed by `limit N`.
pub fn parse_order_spec(s: &str) -> Result<OrderSpec, String> {
    let mut words = s.split_whitespace();
    let dir: Direction = words
        .next()
        .ok_or("empty order spec")?
        .parse()
        .map_err(|e: crate::sql::UnknownCode| e.to_string())?;
    let limit = match (words.next(), words.next(), words.next()) {
        (None, _, _) => None,
        (Some("limit"), Some(n), None) => Some(
            n.parse::<u32>()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| format!("bad limit `{n}`"))?,
        ),
        _ => return Err(format!("bad order spec `{s}`")),
    };
    Ok(OrderSpec { dir, limit })
}

impl fmt::Display for SlotValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotValue::Column(c) => f.write_str(c),
            SlotValue::Agg(a) => f.write_str(a.code()),
            SlotValue::Op(o) => f.write_str(o.code()),
            SlotValue::Literal(v) => f.write_str(&render_value(v)),
            SlotValue::Count(n) => write!(f, "{n}"),
            SlotValue::Flag(b) => write!(f, "{b}"),
            SlotValue::Conn(c) => f.write_str(c.code()),
            SlotValue::Order(o) => write!(f, "{o}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Repr {
    Column(String),
    Agg(Agg),
    Op(Op),
    Literal(serde_json::Value),
    Count(usize),
    Flag(bool),
    Conn(Connector),
    Order(String),
}

impl Serialize for SlotValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            SlotValue::Column(c) => Repr::Column(c.clone()),
            SlotValue::Agg(a) => Repr::Agg(*a),
            SlotValue::Op(o) => Repr::Op(*o),
            SlotValue::Literal(v) => Repr::Literal(value_to_json(v)),
            SlotValue::Count(n) => Repr::Count(*n),
            SlotValue::Flag(b) => Repr::Flag(*b),
            SlotValue::Conn(c) => Repr::Conn(*c),
            SlotValue::Order(o) => Repr::Order(o.to_string()),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SlotValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        Ok(match Repr::deserialize(d)? {
            Repr::Column(c) => SlotValue::Column(c),
            Repr::Agg(a) => SlotValue::Agg(a),
            Repr::Op(o) => SlotValue::Op(o),
            Repr::Literal(v) => SlotValue::Literal(value_from_json(&v, "literal").map_err(D::Error::custom)?),
            Repr::Count(n) => SlotValue::Count(n),
            Repr::Flag(b) => SlotValue::Flag(b),
            Repr::Conn(c) => SlotValue::Conn(c),
            Repr::Order(o) => SlotValue::Order(parse_order_spec(&o).map_err(D::Error::custom)?),
        })
    }
}
