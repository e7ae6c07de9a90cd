use super::{Agg, Condition, Connector, Op, SqlQuery, Value};

/// Shortest decimal form; integral values carry no fractional part.
pub fn format_number(n: f64) -> String {
    if n == 0.0 {
        return "0".to_string();
    }
    format!("{n}")
}

pub fn render_value(v: &Value) -> String {
    match v {
        Value::Text(s) => s.clone(),
        Value::Number(n) => format_number(*n),
        Value::Range(a, b) => format!("{} and {}", format_number(*a), format_number(*b)),
        Value::Root => "(subquery)".to_string(),
    }
}

fn sql_literal(v: &Value) -> String {
    match v {
        Value::Text(s) => format!("'{}'", s.replace('\'', "''")),
        Value::Number(n) => format_number(*n),
        Value::Range(a, b) => format!("{} AND {}", format_number(*a), format_number(*b)),
        Value::Root => "(subquery)".to_string(),
    }
}

pub(crate) fn op_symbol(op: Op) -> &'static str {
    match op {
        Op::Eq => "=",
        Op::Gt => ">",
        Op::Lt => "<",
        Op::Ge => ">=",
        Op::Le => "<=",
        Op::Ne => "!=",
        Op::In => "IN",
        Op::NotIn => "NOT IN",
        Op::Like => "LIKE",
        Op::Between => "BETWEEN",
    }
}

pub(crate) fn target(agg: Agg, col: &str) -> String {
    match agg {
        Agg::None => col.to_string(),
        a => format!("{}({col})", a.code()),
    }
}

pub(crate) fn render_conditions(conds: &[Condition]) -> String {
    let mut out = String::new();
    for (i, c) in conds.iter().enumerate() {
        if i > 0 {
            out.push_str(match conds[i - 1].conn {
                Connector::And => " AND ",
                Connector::Or => " OR ",
            });
        }
        out.push_str(&format!(
            "{} {} {}",
            target(c.agg, &c.col),
            op_symbol(c.op),
            sql_literal(&c.val)
        ));
    }
    out
}

/// Display form: `SELECT max(age) FROM t WHERE place = 'ohio'`.
pub fn render_sql(query: &SqlQuery) -> String {
    let mut out = format!(
        "SELECT {} FROM {}",
        target(query.select.agg, &query.select.col),
        query.table_ids.join(", ")
    );
    if !query.conditions.is_empty() {
        out.push_str(" WHERE ");
        out.push_str(&render_conditions(&query.conditions));
    }
    if !query.group_cols().is_empty() {
        out.push_str(" GROUP BY ");
        out.push_str(&query.group_cols().join(", "));
    }
    if !query.having_conds().is_empty() {
        out.push_str(" HAVING ");
        out.push_str(&render_conditions(query.having_conds()));
    }
    if let Some(o) = &query.order_by {
        out.push_str(&format!(
            " ORDER BY {} {}",
            target(o.agg.unwrap_or(Agg::None), &o.col),
            o.dir.code().to_uppercase()
        ));
        if let Some(n) = o.limit {
            out.push_str(&format!(" LIMIT {n}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::{Direction, OrderBy};

    #[test]
    fn max_with_where() {
        let q = SqlQuery::simple("t", Agg::Max, "age")
            .with_condition(Condition::new("place", Op::Eq, Value::Text("ohio".into())));
        assert_eq!(render_sql(&q), "SELECT max(age) FROM t WHERE place = 'ohio'");
    }

    #[test]
    fn bare_select() {
        assert_eq!(render_sql(&SqlQuery::simple("t", Agg::None, "player")), "SELECT player FROM t");
    }

    #[test]
    fn order_desc_limit() {
        let mut q = SqlQuery::simple("t", Agg::None, "player");
        q.order_by = Some(OrderBy {
            col: "age".into(),
            agg: None,
            dir: Direction::Desc,
            limit: Some(3),
        });
        assert_eq!(render_sql(&q), "SELECT player FROM t ORDER BY age DESC LIMIT 3");
    }

    #[test]
    fn numbers_and_quotes() {
        assert_eq!(format_number(30.0), "30");
        assert_eq!(format_number(2.50), "2.5");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(sql_literal(&Value::Text("o'hare".into())), "'o''hare'");
    }
}
