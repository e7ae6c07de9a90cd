use crate::agent::{Answerer, AskedQuestion, Feedback};
use crate::parser::{gold_derivation, Committed, PartialCondition, PartialQuery, SlotValue};
use crate::sql::{canonical_value, Agg, Condition, Connector, Mode, SlotId, SqlQuery};

/// Default number of consecutive failed turns before the user leaves.
pub const DEFAULT_PATIENCE: usize = 3;

/// Truthful user who knows the gold query.
#[derive(Debug, Clone)]
pub struct SimUser {
    gold: SqlQuery,
    gold_slots: PartialQuery,
    mode: Mode,
    /// `None` never leaves.
    pub patience: Option<usize>,
    pub counter: usize,
    pub departed: bool,
}

/// Equality used when judging slot values: columns ignore case, literals
/// compare in canonical form.
pub fn same_value(a: &SlotValue, b: &SlotValue) -> bool {
    match (a, b) {
        (SlotValue::Column(x), SlotValue::Column(y)) => x.trim().eq_ignore_ascii_case(y.trim()),
        (SlotValue::Literal(x), SlotValue::Literal(y)) => canonical_value(x) == canonical_value(y),
        _ => a == b,
    }
}

/// Predicted condition columns up to `upto`, optionally followed by `last`.
fn conds<'a>(list: &'a [PartialCondition], upto: usize, last: Option<&'a str>) -> Vec<Option<&'a str>> {
    let mut cols: Vec<Option<&str>> = list.iter().take(upto).map(|c| c.col.as_deref()).collect();
    if let Some(l) = last {
        cols.push(Some(l));
    }
    cols
}

fn same_col(a: &str, b: &str) -> bool {
    a.trim().eq_ignore_ascii_case(b.trim())
}

/// Greedy alignment: each predicted column, in order, takes the first
/// unmatched gold condition on the same column.
fn align(predicted: &[Option<&str>], gold: &[Condition]) -> Vec<Option<usize>> {
    let mut used = vec![false; gold.len()];
    predicted
        .iter()
        .map(|p| {
            let col = (*p)?;
            let g = (0..gold.len()).find(|&g| !used[g] && same_col(&gold[g].col, col))?;
            used[g] = true;
            Some(g)
        })
        .collect()
}

impl SimUser {
    pub fn new(gold: SqlQuery, mode: Mode, patience: Option<usize>) -> SimUser {
        let gold_slots = gold_derivation(&gold, mode)
            .ok()
            .and_then(|slots| PartialQuery::from_committed(slots.iter().map(|(s, v)| (*s, v)), mode).ok())
            .unwrap_or_default();
        SimUser {
            gold,
            gold_slots,
            mode,
            patience,
            counter: 0,
            departed: false,
        }
    }

    pub fn gold(&self) -> &SqlQuery {
        &self.gold
    }

    /// Whether `value` is right for `slot`, given the predicted prefix.
    pub fn judge(&self, slot: SlotId, value: &SlotValue, partial: &[Committed]) -> bool {
        let pq = PartialQuery::from_committed(partial.iter().map(|c| (c.slot, &c.value)), self.mode).unwrap_or_default();
        match slot {
            SlotId::WhereCol(i) | SlotId::HavingCol(i) => {
                let (list, gold) = if matches!(slot, SlotId::WhereCol(_)) {
                    (&pq.conditions, self.gold.conditions.as_slice())
                } else {
                    (&pq.having, self.gold.having_conds())
                };
                let Some(col) = value.as_column() else { return false };
                align(&conds(list, i, Some(col)), gold)[i].is_some()
            }
            SlotId::WhereOp(i) | SlotId::WhereVal(i) => {
                let Some(g) = align(&conds(&pq.conditions, i + 1, None), &self.gold.conditions).get(i).copied().flatten() else {
                    return false;
                };
                let gc = &self.gold.conditions[g];
                match (slot, value) {
                    (SlotId::WhereOp(_), SlotValue::Op(o)) => *o == gc.op,
                    (_, SlotValue::Literal(_)) => same_value(value, &SlotValue::Literal(gc.val.clone())),
                    _ => false,
                }
            }
            SlotId::HavingAgg(j) | SlotId::HavingOp(j) | SlotId::HavingVal(j) => {
                let gold = self.gold.having_conds();
                let Some(g) = align(&conds(&pq.having, j + 1, None), gold).get(j).copied().flatten() else {
                    return false;
                };
                let gc = &gold[g];
                match value {
                    SlotValue::Agg(a) => *a == gc.agg,
                    SlotValue::Op(o) => *o == gc.op,
                    SlotValue::Literal(_) => same_value(value, &SlotValue::Literal(gc.val.clone())),
                    _ => false,
                }
            }
            SlotId::WhereConn(i) => {
                let SlotValue::Conn(c) = value else { return false };
                let gold = &self.gold.conditions;
                if SqlQuery::all_and(gold) {
                    return *c == Connector::And;
                }
                let aligned = align(&conds(&pq.conditions, i + 2, None), gold);
                let first = match (aligned.get(i).copied().flatten(), aligned.get(i + 1).copied().flatten()) {
                    (Some(a), Some(b)) => a.min(b),
                    _ => i,
                };
                gold.get(first).map(|g| g.conn) == Some(*c)
            }
            SlotId::OrderByAgg => match (value, self.gold.order_by.as_ref()) {
                (SlotValue::Agg(a), Some(o)) => *a == o.agg.unwrap_or(Agg::None),
                _ => false,
            },
            _ => match self.gold_slots.value_at(slot) {
                Some(gold) => same_value(value, &gold),
                None => false,
            },
        }
    }

    /// Yes iff the asked value is right; `Left` once departed.
    pub fn simulate_answer(&self, slot: SlotId, value: &SlotValue, partial: &[Committed]) -> Feedback {
        if self.departed {
            return Feedback::Left;
        }
        if self.judge(slot, value, partial) {
            Feedback::Yes
        } else {
            Feedback::No
        }
    }

    /// Ends a turn: a turn that left the slot wrong counts as a failure,
    /// a correct one resets the counter.
    pub fn update_patience(&mut self, turn_correct: bool) {
        if self.departed {
            return;
        }
        if turn_correct {
            self.counter = 0;
        } else {
            self.counter += 1;
        }
        if self.patience.is_some_and(|p| self.counter >= p) {
            self.departed = true;
        }
    }
}

impl Answerer for SimUser {
    fn answer(&mut self, q: &AskedQuestion, partial: &[Committed]) -> Feedback {
        self.simulate_answer(q.slot, &q.value, partial)
    }

    fn turn_finished(&mut self, slot: SlotId, partial: &[Committed]) {
        let Some(pos) = partial.iter().rposition(|c| c.slot == slot) else { return };
        let correct = self.judge(slot, &partial[pos].value, &partial[..pos]);
        self.update_patience(correct);
    }

    fn has_left(&self) -> bool {
        self.departed
    }
}
