//! Random tables and queries, and a naive row-scan executor.

use clarisql::db::{Cell, Column, ColumnType, Table, TableStore};
use clarisql::sql::{Agg, Condition, Connector, Direction, Op, OrderBy, Select, SqlQuery, Value};
use proptest::prelude::*;

pub const WORDS: &[&str] = &["ohio", "Texas", "ann", "bob", "Cara", "delta", "echo", "Fox"];

/// Two text and two number columns.
pub fn columns() -> Vec<Column> {
    let col = |name: &str, ty| Column { name: name.into(), ty };
    vec![
        col("name", ColumnType::Text),
        col("state", ColumnType::Text),
        col("age", ColumnType::Number),
        col("score", ColumnType::Number),
    ]
}

pub fn is_text(idx: usize) -> bool {
    idx < 2
}

pub fn cell(idx: usize) -> BoxedStrategy<Cell> {
    if is_text(idx) {
        prop::sample::select(WORDS).prop_map(|w| Cell::Text(w.to_string())).boxed()
    } else {
        (-3i32..12).prop_map(|n| Cell::Number(n as f64 / 2.0)).boxed()
    }
}

pub fn table() -> impl Strategy<Value = Table> {
    let row = (cell(0), cell(1), cell(2), cell(3)).prop_map(|(a, b, c, d)| vec![a, b, c, d]);
    prop::collection::vec(row, 0..=10).prop_map(|rows| Table {
        id: "t".into(),
        name: "people".into(),
        columns: columns(),
        rows,
    })
}

/// Type-correct condition on column `idx`.
pub fn condition(idx: usize) -> BoxedStrategy<Condition> {
    let name = columns()[idx].name.clone();
    if is_text(idx) {
        (prop::sample::select(&[Op::Eq, Op::Ne][..]), prop::sample::select(WORDS))
            .prop_map(move |(op, w)| Condition::new(name.clone(), op, Value::Text(w.to_string())))
            .boxed()
    } else {
        let ops = &[Op::Eq, Op::Ne, Op::Gt, Op::Lt, Op::Ge, Op::Le][..];
        (prop::sample::select(ops), -3i32..12)
            .prop_map(move |(op, n)| Condition::new(name.clone(), op, Value::Number(n as f64 / 2.0)))
            .boxed()
    }
}

/// AND-only single-table query with a type-correct aggregate.
pub fn and_query() -> impl Strategy<Value = SqlQuery> {
    let conds = prop::collection::vec((0usize..4).prop_flat_map(condition), 0..=3);
    (0usize..4, prop::sample::select(Agg::ALL), conds).prop_map(|(sel, agg, conditions)| {
        let agg = if agg.is_numeric() && is_text(sel) { Agg::Count } else { agg };
        SqlQuery {
            table_ids: vec!["t".into()],
            select: Select {
                agg,
                col: columns()[sel].name.clone(),
            },
            conditions,
            group_by: None,
            having: None,
            order_by: None,
        }
    })
}

pub fn recase(s: &str, mask: u64) -> String {
    s.chars()
        .enumerate()
        .map(|(i, c)| if mask >> (i % 64) & 1 == 1 { c.to_ascii_uppercase() } else { c })
        .collect()
}

pub fn store_of(t: Table) -> TableStore {
    let mut store = TableStore::new();
    store.insert(t).unwrap();
    store
}

/// Naive row scan: filter, then aggregate.
pub fn oracle(q: &SqlQuery, t: &Table) -> Vec<Vec<Cell>> {
    let idx = |name: &str| t.columns.iter().position(|c| c.name == name).unwrap();
    let holds = |row: &[Cell], c: &Condition| {
        let x = &row[idx(&c.col)];
        let ord = match (x, &c.val) {
            (Cell::Number(a), Value::Number(b)) => a.partial_cmp(b).unwrap(),
            (Cell::Text(a), Value::Text(b)) => a.cmp(b),
            _ => unreachable!(),
        };
        use std::cmp::Ordering::*;
        match c.op {
            Op::Eq => ord == Equal,
            Op::Ne => ord != Equal,
            Op::Gt => ord == Greater,
            Op::Lt => ord == Less,
            Op::Ge => ord != Less,
            Op::Le => ord != Greater,
            _ => unreachable!(),
        }
    };
    let s = idx(&q.select.col);
    let kept: Vec<&Vec<Cell>> = t.rows.iter().filter(|r| q.conditions.iter().all(|c| holds(r, c))).collect();
    let nums: Vec<f64> = kept.iter().filter_map(|r| r[s].as_number()).collect();
    let num_or_null = |v: Option<f64>| vec![vec![v.map(Cell::Number).unwrap_or(Cell::Null)]];
    let mut rows = match q.select.agg {
        Agg::None => kept.iter().map(|r| vec![r[s].clone()]).collect(),
        Agg::Count => vec![vec![Cell::Number(kept.len() as f64)]],
        Agg::Max => num_or_null(nums.iter().copied().reduce(f64::max)),
        Agg::Min => num_or_null(nums.iter().copied().reduce(f64::min)),
        Agg::Sum => num_or_null((!nums.is_empty()).then(|| nums.iter().sum())),
        Agg::Avg => num_or_null((!nums.is_empty()).then(|| nums.iter().sum::<f64>() / nums.len() as f64)),
    };
    rows.sort_by(|a: &Vec<Cell>, b| a[0].total_cmp(&b[0]));
    rows
}

/// Any structurally valid query, for serialization.
pub fn any_query() -> impl Strategy<Value = SqlQuery> {
    let scalar = prop_oneof![
        prop::sample::select(WORDS).prop_map(|w| Value::Text(w.to_string())),
        (-40i32..40).prop_map(|n| Value::Number(n as f64 / 4.0)),
        Just(Value::Root),
    ];
    let scalar_op = prop::sample::select(Op::ALL).prop_filter("scalar op", |op| *op != Op::Between);
    let op_value = prop_oneof![
        (scalar_op, scalar),
        (-8i32..8, 0i32..8).prop_map(|(a, w)| (Op::Between, Value::Range(a as f64, (a + w) as f64))),
    ];
    let cond = (
        prop::sample::select(&["name", "state", "age", "score"][..]),
        op_value,
        prop::sample::select(Connector::ALL),
    )
        .prop_map(|(col, (op, val), conn)| Condition::new(col, op, val).with_conn(conn));
    let having = prop::collection::vec(
        (cond.clone(), prop::sample::select(Agg::ALL)).prop_map(|(c, a)| c.with_agg(a)),
        1..3,
    );
    let order = (
        prop::sample::select(&["age", "score"][..]),
        prop::option::of(prop::sample::select(Agg::ALL)),
        prop::sample::select(Direction::ALL),
        prop::option::of(1u32..5),
    )
        .prop_map(|(col, agg, dir, limit)| OrderBy {
            col: col.into(),
            agg,
            dir,
            limit,
        });
    (
        and_query(),
        prop::collection::vec(cond, 0..4),
        prop::option::of((prop::sample::select(&["name", "state"][..]), prop::option::of(having))),
        prop::option::of(order),
    )
        .prop_map(|(mut q, conditions, group, order_by)| {
            q.conditions = conditions;
            if let Some((g, having)) = group {
                q.group_by = Some(vec![g.to_string()]);
                q.having = having;
            }
            q.order_by = order_by;
            q
        })
}
