use super::SlotValue;
use crate::sql::{
    format_number, render_value, Agg, Condition, Connector, Mode, Op, OrderBy, OrderSpec, Select, SlotId, SqlQuery, Value,
};

/// Upper bound on predicted WHERE/HAVING condition counts.
pub const MAX_CONDITIONS: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SketchError {
    #[error("slot {got} committed where {} was expected", expected.map(|s| s.to_string()).unwrap_or_else(|| "nothing".into()))]
    OutOfOrder { expected: Option<SlotId>, got: SlotId },
    #[error("value `{value}` cannot fill {slot}")]
    BadValue { slot: SlotId, value: String },
    #[error("query not expressible in the {mode} sketch: {reason}")]
    NotExpressible { mode: Mode, reason: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialCondition {
    pub col: Option<String>,
    pub agg: Option<Agg>,
    pub op: Option<Op>,
    pub val: Option<Value>,
    pub conn: Option<Connector>,
}

impl PartialCondition {
    fn complete(&self, having: bool) -> Option<Condition> {
        let agg = if having { self.agg? } else { Agg::None };
        Some(Condition {
            col: self.col.clone()?,
            agg,
            op: self.op?,
            val: self.val.clone()?,
            conn: self.conn.unwrap_or_default(),
        })
    }
}

/// Query under construction: whatever slots have been committed so far.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialQuery {
    pub select_col: Option<String>,
    pub select_agg: Option<Agg>,
    pub where_count: Option<usize>,
    pub conditions: Vec<PartialCondition>,
    pub group_present: Option<bool>,
    pub group_col: Option<String>,
    pub having_count: Option<usize>,
    pub having: Vec<PartialCondition>,
    pub order_present: Option<bool>,
    pub order_col: Option<String>,
    pub order_agg: Option<Agg>,
    pub order_spec: Option<OrderSpec>,
}

impl PartialQuery {
    /// Replays committed slots, checking they follow the sketch order.
    pub fn from_committed<'a, I>(committed: I, mode: Mode) -> Result<PartialQuery, SketchError>
    where
        I: IntoIterator<Item = (SlotId, &'a SlotValue)>,
    {
        let mut pq = PartialQuery::default();
        for (n, (slot, value)) in committed.into_iter().enumerate() {
            let expected = slot_sequence(&pq, mode).get(n).copied();
            if expected != Some(slot) {
                return Err(SketchError::OutOfOrder { expected, got: slot });
            }
            pq.apply(slot, value)?;
        }
        Ok(pq)
    }

    /// Sets one slot without order checking.
    pub fn apply(&mut self, slot: SlotId, value: &SlotValue) -> Result<(), SketchError> {
        let bad = || SketchError::BadValue {
            slot,
            value: value.to_string(),
        };
        if !value.fits(slot.kind()) {
            return Err(bad());
        }
        fn cond(list: &mut [PartialCondition], i: usize) -> Option<&mut PartialCondition> {
            list.get_mut(i)
        }
        match (slot, value) {
            (SlotId::SelectCol, SlotValue::Column(c)) => self.select_col = Some(c.clone()),
            (SlotId::SelectAgg, SlotValue::Agg(a)) => self.select_agg = Some(*a),
            (SlotId::WhereCount, SlotValue::Count(n)) => {
                if *n > MAX_CONDITIONS {
                    return Err(bad());
                }
                self.where_count = Some(*n);
                self.conditions = vec![PartialCondition::default(); *n];
            }
            (SlotId::WhereCol(i), SlotValue::Column(c)) => cond(&mut self.conditions, i).ok_or_else(bad)?.col = Some(c.clone()),
            (SlotId::WhereOp(i), SlotValue::Op(o)) => cond(&mut self.conditions, i).ok_or_else(bad)?.op = Some(*o),
            (SlotId::WhereVal(i), SlotValue::Literal(v)) => cond(&mut self.conditions, i).ok_or_else(bad)?.val = Some(v.clone()),
            (SlotId::WhereConn(i), SlotValue::Conn(c)) => cond(&mut self.conditions, i).ok_or_else(bad)?.conn = Some(*c),
            (SlotId::GroupByPresent, SlotValue::Flag(b)) => self.group_present = Some(*b),
            (SlotId::GroupByCol, SlotValue::Column(c)) => self.group_col = Some(c.clone()),
            (SlotId::HavingCount, SlotValue::Count(n)) => {
                if *n > MAX_CONDITIONS {
                    return Err(bad());
                }
                self.having_count = Some(*n);
                self.having = vec![PartialCondition::default(); *n];
            }
            (SlotId::HavingCol(i), SlotValue::Column(c)) => cond(&mut self.having, i).ok_or_else(bad)?.col = Some(c.clone()),
            (SlotId::HavingAgg(i), SlotValue::Agg(a)) => cond(&mut self.having, i).ok_or_else(bad)?.agg = Some(*a),
            (SlotId::HavingOp(i), SlotValue::Op(o)) => cond(&mut self.having, i).ok_or_else(bad)?.op = Some(*o),
            (SlotId::HavingVal(i), SlotValue::Literal(v)) => cond(&mut self.having, i).ok_or_else(bad)?.val = Some(v.clone()),
            (SlotId::OrderByPresent, SlotValue::Flag(b)) => self.order_present = Some(*b),
            (SlotId::OrderByCol, SlotValue::Column(c)) => self.order_col = Some(c.clone()),
            (SlotId::OrderByAgg, SlotValue::Agg(a)) => self.order_agg = Some(*a),
            (SlotId::OrderByDir, SlotValue::Order(o)) => self.order_spec = Some(*o),
            _ => return Err(bad()),
        }
        Ok(())
    }

    /// The committed value of `slot`, if any.
    pub fn value_at(&self, slot: SlotId) -> Option<SlotValue> {
        let c = |list: &[PartialCondition], i: usize| list.get(i).cloned();
        match slot {
            SlotId::SelectCol => self.select_col.clone().map(SlotValue::Column),
            SlotId::SelectAgg => self.select_agg.map(SlotValue::Agg),
            SlotId::WhereCount => self.where_count.map(SlotValue::Count),
            SlotId::WhereCol(i) => c(&self.conditions, i)?.col.map(SlotValue::Column),
            SlotId::WhereOp(i) => c(&self.conditions, i)?.op.map(SlotValue::Op),
            SlotId::WhereVal(i) => c(&self.conditions, i)?.val.map(SlotValue::Literal),
            SlotId::WhereConn(i) => c(&self.conditions, i)?.conn.map(SlotValue::Conn),
            SlotId::GroupByPresent => self.group_present.map(SlotValue::Flag),
            SlotId::GroupByCol => self.group_col.clone().map(SlotValue::Column),
            SlotId::HavingCount => self.having_count.map(SlotValue::Count),
            SlotId::HavingCol(i) => c(&self.having, i)?.col.map(SlotValue::Column),
            SlotId::HavingAgg(i) => c(&self.having, i)?.agg.map(SlotValue::Agg),
            SlotId::HavingOp(i) => c(&self.having, i)?.op.map(SlotValue::Op),
            SlotId::HavingVal(i) => c(&self.having, i)?.val.map(SlotValue::Literal),
            SlotId::OrderByPresent => self.order_present.map(SlotValue::Flag),
            SlotId::OrderByCol => self.order_col.clone().map(SlotValue::Column),
            SlotId::OrderByAgg => self.order_agg.map(SlotValue::Agg),
            SlotId::OrderByDir => self.order_spec.map(SlotValue::Order),
        }
    }

    /// The finished query, or `None` while any slot of the sketch is open.
    pub fn to_query(&self, table_ids: &[String], mode: Mode) -> Option<SqlQuery> {
        let mut conditions = Vec::with_capacity(self.conditions.len());
        for c in self.conditions.iter().take(self.where_count?) {
            let mut c = c.complete(false)?;
            if mode == Mode::Wikisql {
                c.conn = Connector::And;
            }
            conditions.push(c);
        }
        let mut q = SqlQuery {
            table_ids: table_ids.to_vec(),
            select: Select {
                agg: self.select_agg?,
                col: self.select_col.clone()?,
            },
            conditions,
            group_by: None,
            having: None,
            order_by: None,
        };
        if mode == Mode::Spider {
            if self.group_present? {
                q.group_by = Some(vec![self.group_col.clone()?]);
                let having = self
                    .having
                    .iter()
                    .take(self.having_count?)
                    .map(|c| c.complete(true))
                    .collect::<Option<Vec<_>>>()?;
                q.having = (!having.is_empty()).then_some(having);
            }
            if self.order_present? {
                let spec = self.order_spec?;
                let agg = self.order_agg?;
                q.order_by = Some(OrderBy {
                    col: self.order_col.clone()?,
                    agg: (!agg.is_none()).then_some(agg),
                    dir: spec.dir,
                    limit: spec.limit,
                });
            }
        }
        Some(q)
    }

    /// SQL-like rendering with `?` for open components.
    pub fn render(&self, table_ids: &[String]) -> String {
        fn target(agg: Option<Agg>, col: Option<&str>) -> String {
            let col = col.unwrap_or("?");
            match agg {
                Some(Agg::None) => col.to_string(),
                Some(a) => format!("{a}({col})"),
                None => format!("?({col})"),
            }
        }
        fn cond(c: &PartialCondition, having: bool) -> String {
            let lhs = if having {
                target(c.agg, c.col.as_deref())
            } else {
                c.col.clone().unwrap_or_else(|| "?".into())
            };
            let op = c.op.map(|o| crate::sql::op_symbol(o).to_string()).unwrap_or_else(|| "?".into());
            let val = match &c.val {
                Some(Value::Text(t)) => format!("'{}'", t.replace('\'', "''")),
                Some(v @ (Value::Number(_) | Value::Range(..) | Value::Root)) => render_value(v),
                None => "?".into(),
            };
            format!("{lhs} {op} {val}")
        }
        fn conds(list: &[PartialCondition], having: bool) -> String {
            let mut s = String::new();
            for (i, c) in list.iter().enumerate() {
                if i > 0 {
                    let conn = list[i - 1].conn.map(|c| c.code().to_uppercase()).unwrap_or_else(|| "AND".into());
                    s.push_str(&format!(" {conn} "));
                }
                s.push_str(&cond(c, having));
            }
            s
        }
        let mut out = format!(
            "SELECT {} FROM {}",
            target(self.select_agg, self.select_col.as_deref()),
            table_ids.join(", ")
        );
        match self.where_count {
            None => out.push_str(" ..."),
            Some(0) => {}
            Some(_) => out.push_str(&format!(" WHERE {}", conds(&self.conditions, false))),
        }
        if self.group_present == Some(true) {
            out.push_str(&format!(" GROUP BY {}", self.group_col.as_deref().unwrap_or("?")));
            if self.having_count.is_some_and(|n| n > 0) {
                out.push_str(&format!(" HAVING {}", conds(&self.having, true)));
            }
        }
        if self.order_present == Some(true) {
            out.push_str(&format!(" ORDER BY {}", target(self.order_agg, self.order_col.as_deref())));
            match self.order_spec {
                Some(s) => {
                    out.push_str(&format!(" {}", s.dir.code().to_uppercase()));
                    if let Some(n) = s.limit {
                        out.push_str(&format!(" LIMIT {}", format_number(n as f64)));
                    }
                }
                None => out.push_str(" ?"),
            }
        }
        out
    }
}

/// Slots implied by what `pq` has decided so far. The list stops right after
/// the first count/presence slot that is still open.
pub fn slot_sequence(pq: &PartialQuery, mode: Mode) -> Vec<SlotId> {
    let mut seq = vec![SlotId::SelectCol, SlotId::SelectAgg, SlotId::WhereCount];
    let Some(n) = pq.where_count else {
        return seq;
    };
    for i in 0..n {
        seq.extend([SlotId::WhereCol(i), SlotId::WhereOp(i), SlotId::WhereVal(i)]);
        if mode == Mode::Spider && i >= 1 {
            seq.push(SlotId::WhereConn(i - 1));
        }
    }
    if mode == Mode::Wikisql {
        return seq;
    }
    seq.push(SlotId::GroupByPresent);
    match pq.group_present {
        None => return seq,
        Some(true) => {
            seq.extend([SlotId::GroupByCol, SlotId::HavingCount]);
            let Some(h) = pq.having_count else {
                return seq;
            };
            for j in 0..h {
                seq.extend([SlotId::HavingCol(j), SlotId::HavingAgg(j), SlotId::HavingOp(j), SlotId::HavingVal(j)]);
            }
        }
        Some(false) => {}
    }
    seq.push(SlotId::OrderByPresent);
    if pq.order_present == Some(true) {
        seq.extend([SlotId::OrderByCol, SlotId::OrderByAgg, SlotId::OrderByDir]);
    }
    seq
}

/// The slot after the committed prefix, or `None` when the sketch is full.
pub fn next_slot<'a, I>(committed: I, mode: Mode) -> Result<Option<SlotId>, SketchError>
where
    I: IntoIterator<Item = (SlotId, &'a SlotValue)>,
{
    let committed: Vec<_> = committed.into_iter().collect();
    let n = committed.len();
    let pq = PartialQuery::from_committed(committed, mode)?;
    Ok(slot_sequence(&pq, mode).get(n).copied())
}

/// The slot-by-slot derivation of `query` in the sketch of `mode`.
pub fn gold_derivation(query: &SqlQuery, mode: Mode) -> Result<Vec<(SlotId, SlotValue)>, SketchError> {
    let unsupported = |reason: &str| SketchError::NotExpressible {
        mode,
        reason: reason.to_string(),
    };
    let mut out = vec![
        (SlotId::SelectCol, SlotValue::Column(query.select.col.clone())),
        (SlotId::SelectAgg, SlotValue::Agg(query.select.agg)),
        (SlotId::WhereCount, SlotValue::Count(query.conditions.len())),
    ];
    if query.conditions.len() > MAX_CONDITIONS || query.having_conds().len() > MAX_CONDITIONS {
        return Err(unsupported("too many conditions"));
    }
    for (i, c) in query.conditions.iter().enumerate() {
        out.push((SlotId::WhereCol(i), SlotValue::Column(c.col.clone())));
        out.push((SlotId::WhereOp(i), SlotValue::Op(c.op)));
        out.push((SlotId::WhereVal(i), SlotValue::Literal(c.val.clone())));
        if mode == Mode::Spider && i >= 1 {
            out.push((SlotId::WhereConn(i - 1), SlotValue::Conn(query.conditions[i - 1].conn)));
        }
    }
    if mode == Mode::Wikisql {
        if query.group_by.is_some() || query.having.is_some() || query.order_by.is_some() {
            return Err(unsupported("grouping and ordering need the spider sketch"));
        }
        if !SqlQuery::all_and(&query.conditions) {
            return Err(unsupported("disjunctive conditions need the spider sketch"));
        }
        return Ok(out);
    }
    match query.group_cols() {
        [] => {
            if !query.having_conds().is_empty() {
                return Err(unsupported("having without group by"));
            }
            out.push((SlotId::GroupByPresent, SlotValue::Flag(false)));
        }
        [col] => {
            out.push((SlotId::GroupByPresent, SlotValue::Flag(true)));
            out.push((SlotId::GroupByCol, SlotValue::Column(col.clone())));
            let having = query.having_conds();
            if !SqlQuery::all_and(having) {
                return Err(unsupported("disjunctive having conditions"));
            }
            out.push((SlotId::HavingCount, SlotValue::Count(having.len())));
            for (j, c) in having.iter().enumerate() {
                out.push((SlotId::HavingCol(j), SlotValue::Column(c.col.clone())));
                out.push((SlotId::HavingAgg(j), SlotValue::Agg(c.agg)));
                out.push((SlotId::HavingOp(j), SlotValue::Op(c.op)));
                out.push((SlotId::HavingVal(j), SlotValue::Literal(c.val.clone())));
            }
        }
        _ => return Err(unsupported("grouping by more than one column")),
    }
    match &query.order_by {
        None => out.push((SlotId::OrderByPresent, SlotValue::Flag(false))),
        Some(o) => {
            out.push((SlotId::OrderByPresent, SlotValue::Flag(true)));
            out.push((SlotId::OrderByCol, SlotValue::Column(o.col.clone())));
            out.push((SlotId::OrderByAgg, SlotValue::Agg(o.agg.unwrap_or_default())));
            out.push((SlotId::OrderByDir, SlotValue::Order(o.spec())));
        }
    }
    Ok(out)
}
