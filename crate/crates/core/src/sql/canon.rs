use std::cmp::Ordering;

use super::render::render_value;
use super::{Agg, Condition, Connector, SqlQuery, Value};

/// Deterministic normal form used for query-match accuracy.
///
/// Identifiers are case-folded, numeric literals normalized (numeric-looking
/// text becomes a number), table refs treated as a set, and all-AND condition
/// lists sorted by (column, operator code, rendered value). Lists that mix in
/// OR keep their original order.
pub fn canonicalize(query: &SqlQuery) -> SqlQuery {
    let mut table_ids: Vec<String> = query.table_ids.iter().map(|t| fold(t)).collect();
    table_ids.sort();
    table_ids.dedup();

    let group_by = query.group_by.as_ref().and_then(|cols| {
        let mut cols: Vec<String> = cols.iter().map(|c| fold(c)).collect();
        cols.sort();
        cols.dedup();
        (!cols.is_empty()).then_some(cols)
    });
    let having = query
        .having
        .as_ref()
        .map(|h| canonical_conditions(h))
        .filter(|h| !h.is_empty());
    let order_by = query.order_by.as_ref().map(|o| {
        let mut o = o.clone();
        o.col = fold(&o.col);
        if o.agg == Some(Agg::None) {
            o.agg = None;
        }
        o
    });

    SqlQuery {
        table_ids,
        select: super::Select {
            agg: query.select.agg,
            col: fold(&query.select.col),
        },
        conditions: canonical_conditions(&query.conditions),
        group_by,
        having,
        order_by,
    }
}

/// True iff both queries share a canonical form.
pub fn query_match(a: &SqlQuery, b: &SqlQuery) -> bool {
    canonicalize(a) == canonicalize(b)
}

fn fold(name: &str) -> String {
    name.trim().to_lowercase()
}

/// Literal normal form: numeric-looking text becomes a number, -0 becomes 0.
pub fn canonical_value(v: &Value) -> Value {
    match v {
        Value::Text(s) => match s.trim().parse::<f64>() {
            Ok(n) if n.is_finite() && !s.trim().is_empty() => Value::Number(zero(n)),
            _ => Value::Text(s.clone()),
        },
        Value::Number(n) => Value::Number(zero(*n)),
        Value::Range(a, b) => Value::Range(zero(*a), zero(*b)),
        Value::Root => Value::Root,
    }
}

/// Folds negative zero.
fn zero(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        n
    }
}

fn canonical_conditions(conds: &[Condition]) -> Vec<Condition> {
    let all_and = SqlQuery::all_and(conds);
    let mut out: Vec<Condition> = conds
        .iter()
        .map(|c| Condition {
            col: fold(&c.col),
            agg: c.agg,
            op: c.op,
            val: canonical_value(&c.val),
            conn: c.conn,
        })
        .collect();
    if all_and {
        out.sort_by(condition_order);
        for c in &mut out {
            c.conn = Connector::And;
        }
    } else if let Some(last) = out.last_mut() {
        last.conn = Connector::And;
    }
    out
}

fn condition_order(a: &Condition, b: &Condition) -> Ordering {
    a.col
        .cmp(&b.col)
        .then_with(|| a.op.code().cmp(b.op.code()))
        .then_with(|| render_value(&a.val).cmp(&render_value(&b.val)))
        .then_with(|| a.agg.code().cmp(b.agg.code()))
}
