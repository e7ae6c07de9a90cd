use super::lexical::{Analysis, Span, SpanKind};
use super::perturb::{perturbed_chosen_probs, score};
use super::{softmax, BaseParser, Committed, Decision, ParseContext, ParserError, PartialQuery, PerturbationConfig, SlotValue};
use crate::db::{Cell, ColumnType, Table};
use crate::sql::{Agg, Connector, Direction, Mode, Op, OrderSpec, SlotId, Value};

/// Additive score terms of one option; the score is their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionFeatures {
    pub value: SlotValue,
    pub contributions: Vec<f64>,
}

/// Keyword and lexical-overlap scorer standing in for a trained parser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicParser {
    /// Softmax temperature for a 20-token question; shorter questions get
    /// sharper distributions, longer ones flatter.
    pub temperature: f64,
}

impl Default for HeuristicParser {
    fn default() -> Self {
        HeuristicParser { temperature: 1.0 }
    }
}

const AGG_STRONG: &[(Agg, &[&str])] = &[
    (Agg::Count, &["how many", "number of", "count"]),
    (Agg::Avg, &["average", "mean"]),
    (Agg::Max, &["maximum", "most", "highest"]),
    (Agg::Min, &["minimum", "least", "lowest"]),
    (Agg::Sum, &["total", "sum"]),
];

const AGG_WEAK: &[(Agg, &[&str])] = &[
    (Agg::Count, &["tally"]),
    (Agg::Avg, &["typical"]),
    (Agg::Max, &["largest", "biggest", "greatest"]),
    (Agg::Min, &["smallest", "fewest", "earliest"]),
    (Agg::Sum, &["combined", "overall"]),
];

const OP_CUES: &[(Op, &[&str])] = &[
    (Op::Gt, &["more than", "over", "greater", "above", "larger than", "higher than", "older than", "after"]),
    (Op::Lt, &["less than", "under", "below", "fewer than", "smaller than", "lower than", "younger than", "before"]),
    (Op::Ge, &["at least", "or more", "no less than"]),
    (Op::Le, &["at most", "or less", "no more than"]),
    (Op::Ne, &["not", "other than", "except"]),
    (Op::Like, &["like", "containing", "contains"]),
    (Op::Between, &["between"]),
];

/// Openers asking for a plain column value.
const PLAIN_CUES: &[&str] = &["which", "what is the", "what was the", "name the", "tell me the", "list the"];

const GROUP_CUES: &[&str] = &["per", "for each", "each", "for every", "grouped by", "group by"];
const HAVING_CUES: &[&str] = &["having", "that have", "which have", "with more than", "with fewer than", "with at least"];
const ORDER_CUES: &[&str] = &["order", "ordered", "sort", "sorted", "top", "ranked", "descending", "ascending"];
const DESC_CUES: &[&str] = &["descending", "top", "highest", "most", "largest", "decreasing"];
const ASC_CUES: &[&str] = &["ascending", "lowest", "fewest", "smallest", "increasing"];

const SPIDER_OPS: &[Op] = &[Op::Eq, Op::Gt, Op::Lt, Op::Ge, Op::Le, Op::Ne, Op::Like, Op::Between];

/// Everything the scorers read: the question analysis, the table and the
/// decisions committed so far.
struct Scene<'a> {
    a: Analysis,
    table: &'a Table,
    mode: Mode,
    pq: PartialQuery,
}

fn positions(a: &Analysis, phrases: &[&str]) -> Vec<usize> {
    let mut out: Vec<usize> = phrases.iter().flat_map(|p| a.find(p)).collect();
    out.sort_unstable();
    out
}

/// Anchor distance used when there is nothing to measure from.
const FAR: usize = 4;

/// Cue weight multiplier decaying with token distance.
fn proximity(d: usize) -> f64 {
    1.0 / (1.0 + 0.2 * d as f64)
}

fn flag(b: bool, weight: f64) -> f64 {
    if b {
        weight
    } else {
        0.0
    }
}

fn is_numeric_span(s: &Span) -> bool {
    matches!(s.kind, SpanKind::Number | SpanKind::Range)
}

impl<'a> Scene<'a> {
    fn new(ctx: &ParseContext<'a>, partial: &[Committed]) -> Result<Self, ParserError> {
        Ok(Scene {
            a: Analysis::new(ctx.question, ctx.table),
            table: ctx.table,
            mode: ctx.mode,
            pq: PartialQuery::from_committed(partial.iter().map(|c| (c.slot, &c.value)), ctx.mode)?,
        })
    }

    fn having_start(&self) -> Option<usize> {
        if self.mode != Mode::Spider {
            return None;
        }
        positions(&self.a, HAVING_CUES).first().copied()
    }

    /// Spans feeding WHERE; in the spider sketch spans after a having cue
    /// belong to HAVING.
    fn where_spans(&self) -> Vec<&Span> {
        let cut = self.having_start().unwrap_or(usize::MAX);
        self.a.spans.iter().filter(|s| s.start < cut).collect()
    }

    fn having_spans(&self) -> Vec<&Span> {
        match self.having_start() {
            Some(cut) => self.a.spans.iter().filter(|s| s.start > cut && is_numeric_span(s)).collect(),
            None => Vec::new(),
        }
    }

    fn col_type(&self, col: &str) -> Option<ColumnType> {
        self.table.column(col).map(|c| c.ty)
    }

    fn columns(&self, mut score: impl FnMut(&str, usize) -> Vec<f64>) -> Vec<OptionFeatures> {
        self.table
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| OptionFeatures {
                value: SlotValue::Column(c.name.clone()),
                contributions: score(&c.name, i),
            })
            .collect()
    }

    fn agg_trigger(&self, agg: Agg, table: &[(Agg, &[&str])], from: usize) -> bool {
        table
            .iter()
            .filter(|(a, _)| *a == agg)
            .flat_map(|(_, ps)| ps.iter())
            .any(|p| self.a.find(p).iter().any(|&pos| pos >= from))
    }

    /// Token distance from the nearest cue for `agg` to any anchor; `None`
    /// without a cue.
    fn agg_cue_distance(&self, agg: Agg, table: &[(Agg, &[&str])], anchors: &[usize]) -> Option<usize> {
        let cues: Vec<usize> = table
            .iter()
            .filter(|(a, _)| *a == agg)
            .flat_map(|(_, ps)| ps.iter().flat_map(|p| {
                let len = p.split_whitespace().count();
                self.a.find(p).into_iter().map(move |pos| pos + len)
            }))
            .collect();
        cues.iter()
            .map(|&c| anchors.iter().map(|&m| m.abs_diff(c)).min().unwrap_or(FAR))
            .min()
    }

    fn select_col(&self) -> Vec<OptionFeatures> {
        let first = self
            .table
            .columns
            .iter()
            .filter_map(|c| self.a.mentions(&c.name).first().map(|&m| (m, c.name.clone())))
            .min();
        let numeric_agg = [Agg::Max, Agg::Min, Agg::Avg, Agg::Sum]
            .iter()
            .any(|&g| self.agg_trigger(g, AGG_STRONG, 0));
        let spans = self.where_spans();
        self.columns(|name, i| {
            let ty = self.table.columns[i].ty;
            let holds_value = spans.iter().any(|s| s.cell_cols.contains(&i));
            let before_value = spans
                .iter()
                .any(|s| self.a.mentions(name).iter().any(|&m| m < s.start && s.start <= m + 3));
            vec![
                2.0 * self.a.token_match(name),
                self.a.trigram_overlap(name),
                flag(first.as_ref().is_some_and(|(_, n)| n == name), 1.0),
                flag(holds_value, -1.5),
                flag(before_value, -1.0),
                flag(numeric_agg && ty == ColumnType::Number, 0.5),
            ]
        })
    }

    fn select_agg(&self) -> Vec<OptionFeatures> {
        let col = self.pq.select_col.as_deref();
        let col_ty = col.and_then(|c| self.col_type(c));
        let anchors = col.map(|c| self.a.mentions(c)).unwrap_or_default();
        let cue = |g, table, weight: f64| self.agg_cue_distance(g, table, &anchors).map_or(0.0, |d| weight * proximity(d));
        let plain = PLAIN_CUES
            .iter()
            .flat_map(|p| {
                let len = p.split_whitespace().count();
                self.a.find(p).into_iter().map(move |pos| pos + len)
            })
            .map(|c| proximity(anchors.iter().map(|&m| m.abs_diff(c)).min().unwrap_or(FAR)))
            .fold(0.0, f64::max);
        Agg::ALL
            .iter()
            .map(|&g| OptionFeatures {
                value: SlotValue::Agg(g),
                contributions: vec![
                    flag(g.is_none(), 1.0),
                    flag(g.is_none(), 0.8 * plain),
                    cue(g, AGG_STRONG, 2.5),
                    cue(g, AGG_WEAK, 1.2),
                    flag(g.is_numeric() && col_ty == Some(ColumnType::Text), -2.0),
                ],
            })
            .collect()
    }

    fn count_options(n: usize, max: usize) -> Vec<OptionFeatures> {
        (0..=max.max(n))
            .map(|k| OptionFeatures {
                value: SlotValue::Count(k),
                contributions: vec![-1.5 * (k as f64 - n as f64).abs()],
            })
            .collect()
    }

    fn where_col(&self, i: usize) -> Vec<OptionFeatures> {
        let spans = self.where_spans();
        let span = spans.get(i).copied();
        let used: Vec<&str> = self.pq.conditions[..i].iter().filter_map(|c| c.col.as_deref()).collect();
        let select = self.pq.select_col.as_deref();
        self.columns(|name, ci| {
            let ty = self.table.columns[ci].ty;
            let (holds, near, typing) = match span {
                Some(s) => {
                    let near = self.a.mentions(name).iter().any(|&m| m + 4 >= s.start && m < s.start || m >= s.end && m <= s.end + 2);
                    let typing = match (is_numeric_span(s), ty) {
                        (true, ColumnType::Number) => 0.8,
                        (true, ColumnType::Text) | (false, ColumnType::Number) => -1.0,
                        (false, ColumnType::Text) => 0.0,
                    };
                    (s.cell_cols.contains(&ci), near, typing)
                }
                None => (false, false, 0.0),
            };
            vec![
                flag(holds, 2.5),
                flag(near, 1.5),
                0.5 * self.a.token_match(name),
                0.3 * self.a.trigram_overlap(name),
                flag(select.is_some_and(|s| s.eq_ignore_ascii_case(name)), -1.5),
                flag(used.iter().any(|u| u.eq_ignore_ascii_case(name)), -2.0),
                typing,
            ]
        })
    }

    fn op_options(&self, span: Option<&Span>, window: (usize, usize)) -> Vec<OptionFeatures> {
        let ops: &[Op] = match self.mode {
            Mode::Wikisql => Op::WIKISQL,
            Mode::Spider => SPIDER_OPS,
        };
        // cue positions of `op` inside `lo..hi`
        let cues = |op: Op, lo: usize, hi: usize| -> Vec<usize> {
            OP_CUES
                .iter()
                .filter(|(o, _)| *o == op)
                .flat_map(|(_, ps)| ps.iter())
                .flat_map(|p| self.a.find(p))
                .filter(|&pos| pos >= lo && pos < hi)
                .collect()
        };
        let near = |op: Op| {
            let anchor = span.map_or(window.0, |s| s.start);
            cues(op, window.0, window.1)
                .iter()
                .map(|&c| proximity(c.abs_diff(anchor).saturating_sub(1)))
                .fold(0.0, f64::max)
        };
        let numeric_op = |op: Op| matches!(op, Op::Gt | Op::Lt | Op::Ge | Op::Le | Op::Between);
        ops.iter()
            .map(|&op| OptionFeatures {
                value: SlotValue::Op(op),
                contributions: vec![
                    flag(op == Op::Eq, 1.0),
                    2.5 * near(op),
                    flag(!cues(op, 0, usize::MAX).is_empty(), 0.6),
                    flag(op == Op::Between && span.is_some_and(|s| s.kind == SpanKind::Range), 3.0),
                    flag(numeric_op(op) && span.is_some_and(|s| !is_numeric_span(s)), -1.0),
                ],
            })
            .collect()
    }

    fn where_op(&self, i: usize) -> Vec<OptionFeatures> {
        let spans = self.where_spans();
        let span = spans.get(i).copied();
        let window = match span {
            Some(s) => (s.start.saturating_sub(4), s.end + 3),
            None => (0, 0),
        };
        self.op_options(span, window)
    }

    fn value_options(&self, spans: &[&Span], col: Option<&str>, index: usize, used: &[&Value]) -> Vec<OptionFeatures> {
        let ci = col.and_then(|c| self.table.column_index(c));
        let ty = ci.map(|i| self.table.columns[i].ty);
        let mut out: Vec<OptionFeatures> = Vec::new();
        for (k, s) in spans.iter().enumerate() {
            if out.iter().any(|o| o.value == SlotValue::Literal(s.value.clone())) {
                continue;
            }
            let typed = match ty {
                Some(ColumnType::Number) => is_numeric_span(s),
                Some(ColumnType::Text) => !is_numeric_span(s),
                None => false,
            };
            out.push(OptionFeatures {
                value: SlotValue::Literal(s.value.clone()),
                contributions: vec![
                    flag(ci.is_some_and(|c| s.cell_cols.contains(&c)), 2.0),
                    flag(typed, 1.0),
                    flag(used.contains(&&s.value), -2.0),
                    flag(k == index, 0.5),
                ],
            });
        }
        if out.is_empty() {
            // nothing in the question looks like a value: fall back to cells
            if let Some(ci) = ci {
                for row in &self.table.rows {
                    let v = match &row[ci] {
                        Cell::Text(t) => Value::Text(t.clone()),
                        Cell::Number(n) => Value::Number(*n),
                        Cell::Null => continue,
                    };
                    let v = SlotValue::Literal(v);
                    if out.len() < 10 && !out.iter().any(|o| o.value == v) {
                        out.push(OptionFeatures {
                            value: v,
                            contributions: vec![],
                        });
                    }
                }
            }
            if out.is_empty() {
                out.push(OptionFeatures {
                    value: SlotValue::Literal(Value::Number(1.0)),
                    contributions: vec![],
                });
            }
        }
        out
    }

    fn where_val(&self, i: usize) -> Vec<OptionFeatures> {
        let spans = self.where_spans();
        let used: Vec<&Value> = self.pq.conditions[..i].iter().filter_map(|c| c.val.as_ref()).collect();
        self.value_options(&spans, self.pq.conditions[i].col.as_deref(), i, &used)
    }

    fn where_conn(&self, i: usize) -> Vec<OptionFeatures> {
        let spans = self.where_spans();
        let or_between = match (spans.get(i), spans.get(i + 1)) {
            (Some(a), Some(b)) => self.a.find("or").iter().any(|&p| p >= a.end && p < b.start),
            _ => false,
        };
        [Connector::And, Connector::Or]
            .iter()
            .map(|&c| OptionFeatures {
                value: SlotValue::Conn(c),
                contributions: vec![flag(c == Connector::And, 1.0), flag(c == Connector::Or && or_between, 2.0)],
            })
            .collect()
    }

    fn presence(&self, cued: bool) -> Vec<OptionFeatures> {
        vec![
            OptionFeatures {
                value: SlotValue::Flag(false),
                contributions: vec![1.0],
            },
            OptionFeatures {
                value: SlotValue::Flag(true),
                contributions: vec![flag(cued, 2.5)],
            },
        ]
    }

    fn group_col(&self) -> Vec<OptionFeatures> {
        let cues = positions(&self.a, GROUP_CUES);
        self.columns(|name, _| {
            let after_cue = cues.iter().any(|&c| self.a.mentions(name).iter().any(|&m| m > c && m <= c + 3));
            vec![flag(after_cue, 2.5), 0.5 * self.a.token_match(name), 0.3 * self.a.trigram_overlap(name)]
        })
    }

    fn having_col(&self) -> Vec<OptionFeatures> {
        let start = self.having_start();
        let select = self.pq.select_col.as_deref();
        self.columns(|name, _| {
            let after = start.is_some_and(|h| self.a.mentions(name).iter().any(|&m| m > h && m <= h + 5));
            vec![
                flag(select.is_some_and(|s| s.eq_ignore_ascii_case(name)), 1.0),
                flag(after, 1.5),
                0.3 * self.a.trigram_overlap(name),
            ]
        })
    }

    fn having_agg(&self) -> Vec<OptionFeatures> {
        let from = self.having_start().unwrap_or(usize::MAX);
        Agg::ALL
            .iter()
            .map(|&g| OptionFeatures {
                value: SlotValue::Agg(g),
                contributions: vec![
                    flag(g == Agg::Count, 1.5),
                    flag(g.is_none(), 0.5),
                    flag(!g.is_none() && self.agg_trigger(g, AGG_STRONG, from), 2.5),
                ],
            })
            .collect()
    }

    fn order_col(&self) -> Vec<OptionFeatures> {
        let cues = positions(&self.a, ORDER_CUES);
        self.columns(|name, ci| {
            let after_cue = cues.iter().any(|&c| self.a.mentions(name).iter().any(|&m| m > c && m <= c + 4));
            vec![
                flag(after_cue, 2.5),
                0.5 * self.a.token_match(name),
                0.3 * self.a.trigram_overlap(name),
                flag(self.table.columns[ci].ty == ColumnType::Number, 0.5),
            ]
        })
    }

    fn order_agg(&self) -> Vec<OptionFeatures> {
        let from = positions(&self.a, ORDER_CUES).first().copied().unwrap_or(usize::MAX);
        Agg::ALL
            .iter()
            .map(|&g| OptionFeatures {
                value: SlotValue::Agg(g),
                contributions: vec![flag(g.is_none(), 1.0), flag(!g.is_none() && self.agg_trigger(g, AGG_STRONG, from), 2.5)],
            })
            .collect()
    }

    fn order_dir(&self) -> Vec<OptionFeatures> {
        let desc = !positions(&self.a, DESC_CUES).is_empty();
        let asc = !positions(&self.a, ASC_CUES).is_empty();
        let mut limits: Vec<Option<u32>> = vec![None];
        for &(_, n) in &self.a.limits {
            if !limits.contains(&Some(n)) {
                limits.push(Some(n));
            }
        }
        let mut out = Vec::new();
        for dir in [Direction::Asc, Direction::Desc] {
            for &limit in &limits {
                out.push(OptionFeatures {
                    value: SlotValue::Order(OrderSpec { dir, limit }),
                    contributions: vec![
                        flag(dir == Direction::Asc, 0.5),
                        flag(dir == Direction::Desc && desc, 2.0),
                        flag(dir == Direction::Asc && asc, 2.0),
                        flag(limit.is_some(), 2.5),
                        flag(limit.is_none(), 1.0),
                    ],
                });
            }
        }
        out
    }

    fn features(&self, slot: SlotId) -> Vec<OptionFeatures> {
        match slot {
            SlotId::SelectCol => self.select_col(),
            SlotId::SelectAgg => self.select_agg(),
            SlotId::WhereCount => Self::count_options(self.where_spans().len(), 3),
            SlotId::WhereCol(i) => self.where_col(i),
            SlotId::WhereOp(i) => self.where_op(i),
            SlotId::WhereVal(i) => self.where_val(i),
            SlotId::WhereConn(i) => self.where_conn(i),
            SlotId::GroupByPresent => self.presence(!positions(&self.a, GROUP_CUES).is_empty()),
            SlotId::GroupByCol => self.group_col(),
            SlotId::HavingCount => {
                let mut opts = self.presence(self.having_start().is_some());
                for (k, o) in opts.iter_mut().enumerate() {
                    o.value = SlotValue::Count(k);
                }
                opts
            }
            SlotId::HavingCol(_) => self.having_col(),
            SlotId::HavingAgg(_) => self.having_agg(),
            SlotId::HavingOp(_) => {
                let spans = self.having_spans();
                let lo = self.having_start().unwrap_or(0);
                self.op_options(spans.first().copied(), (lo, lo + 5))
            }
            SlotId::HavingVal(j) => {
                let spans = self.having_spans();
                self.value_options(&spans, None, j, &[])
            }
            SlotId::OrderByPresent => {
                let cued = !positions(&self.a, ORDER_CUES).is_empty() || !self.a.limits.is_empty();
                self.presence(cued)
            }
            SlotId::OrderByCol => self.order_col(),
            SlotId::OrderByAgg => self.order_agg(),
            SlotId::OrderByDir => self.order_dir(),
        }
    }
}

impl HeuristicParser {
    /// Temperature applied to `question`.
    pub fn temperature_for(&self, question: &str) -> f64 {
        self.temperature * (0.4 + 0.03 * super::lexical::tokenize(question).len() as f64)
    }

    /// Per-option additive score terms for `slot`, options sorted by their
    /// rendered value.
    pub fn features(&self, ctx: &ParseContext<'_>, partial: &[Committed], slot: SlotId) -> Result<Vec<OptionFeatures>, ParserError> {
        let scene = Scene::new(ctx, partial)?;
        let mut feats = scene.features(slot);
        feats.sort_by_cached_key(|f| f.value.to_string());
        Ok(feats)
    }
}

impl BaseParser for HeuristicParser {
    fn distribution(&self, ctx: &ParseContext<'_>, partial: &[Committed], slot: SlotId) -> Result<Decision, ParserError> {
        let feats = self.features(ctx, partial, slot)?;
        let scores: Vec<f64> = feats.iter().map(|f| score(&f.contributions, |_| true)).collect();
        let probs = softmax(&scores, self.temperature_for(ctx.question));
        Decision::new(slot, feats.into_iter().map(|f| f.value).collect(), probs)
    }

    fn perturbed_passes(
        &self,
        ctx: &ParseContext<'_>,
        partial: &[Committed],
        decision: &Decision,
        config: &PerturbationConfig,
    ) -> Result<Vec<f64>, ParserError> {
        let feats = self.features(ctx, partial, decision.slot)?;
        let contributions: Vec<Vec<f64>> = decision
            .options
            .iter()
            .map(|o| {
                feats
                    .iter()
                    .find(|f| &f.value == o)
                    .map(|f| f.contributions.clone())
                    .unwrap_or_default()
            })
            .collect();
        Ok(perturbed_chosen_probs(
            &contributions,
            decision.chosen,
            self.temperature_for(ctx.question),
            config,
            ctx.example_id,
            decision.slot,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::Column;
    use crate::parser::{unassisted_parse, PartialQuery};

    fn t1() -> Table {
        let row = |p: &str, a: f64, pl: &str| vec![Cell::Text(p.into()), Cell::Number(a), Cell::Text(pl.into())];
        Table {
            id: "t1".into(),
            name: "players".into(),
            columns: vec![
                Column { name: "player".into(), ty: ColumnType::Text },
                Column { name: "age".into(), ty: ColumnType::Number },
                Column { name: "place".into(), ty: ColumnType::Text },
            ],
            rows: vec![row("ann", 30.0, "ohio"), row("bob", 25.0, "iowa"), row("cal", 30.0, "ohio")],
        }
    }

    fn parse(question: &str, mode: Mode) -> PartialQuery {
        let t = t1();
        let ctx = ParseContext { example_id: "x", question, table: &t, mode };
        let parse = unassisted_parse(&HeuristicParser::default(), &ctx).unwrap();
        PartialQuery::from_committed(parse.iter().map(|c| (c.slot, &c.value)), mode).unwrap()
    }

    fn decide(question: &str, partial: &[Committed], slot: SlotId) -> Decision {
        let t = t1();
        let ctx = ParseContext { example_id: "x", question, table: &t, mode: Mode::Wikisql };
        HeuristicParser::default().distribution(&ctx, partial, slot).unwrap()
    }

    #[test]
    fn maximum_triggers_max() {
        let q = "what is the maximum age of players from ohio";
        let partial = [Committed { slot: SlotId::SelectCol, value: SlotValue::Column("age".into()), prob: 1.0, passes: None }];
        assert_eq!(decide(q, &partial, SlotId::SelectAgg).chosen_value(), &SlotValue::Agg(Agg::Max));
        let pq = parse(q, Mode::Wikisql);
        assert_eq!(pq.select_col.as_deref(), Some("age"));
        assert_eq!(pq.where_count, Some(1));
        assert_eq!(pq.conditions[0].col.as_deref(), Some("place"));
        assert_eq!(pq.conditions[0].op, Some(Op::Eq));
        assert_eq!(pq.conditions[0].val, Some(Value::Text("ohio".into())));
    }

    #[test]
    fn exact_column_name_wins() {
        let d = decide("list every player", &[], SlotId::SelectCol);
        assert_eq!(d.chosen_value(), &SlotValue::Column("player".into()));
    }

    #[test]
    fn operator_cues() {
        let pq = parse("which player is older than 26", Mode::Wikisql);
        assert_eq!(pq.conditions[0].op, Some(Op::Gt));
        assert_eq!(pq.conditions[0].col.as_deref(), Some("age"));
        let pq = parse("which player has age 30", Mode::Wikisql);
        assert_eq!(pq.conditions[0].op, Some(Op::Eq));
    }

    #[test]
    fn spider_constructs_need_cues() {
        let pq = parse("list every player", Mode::Spider);
        assert_eq!(pq.group_present, Some(false));
        assert_eq!(pq.order_present, Some(false));
        let pq = parse("how many players are there for each place", Mode::Spider);
        assert_eq!(pq.group_present, Some(true));
        assert_eq!(pq.group_col.as_deref(), Some("place"));
        let pq = parse("show the top 2 players sorted by age", Mode::Spider);
        assert_eq!(pq.order_present, Some(true));
        assert_eq!(pq.order_col.as_deref(), Some("age"));
        assert_eq!(pq.order_spec, Some(OrderSpec { dir: Direction::Desc, limit: Some(2) }));
        assert_eq!(pq.where_count, Some(0));
    }

    #[test]
    fn choice_ignores_table_column_order() {
        let q = "what is the maximum age of players from ohio";
        let mut shuffled = t1();
        shuffled.columns.reverse();
        for r in &mut shuffled.rows {
            r.reverse();
        }
        for slot in [SlotId::SelectCol, SlotId::WhereCount] {
            let a = decide(q, &[], slot);
            let ctx = ParseContext { example_id: "x", question: q, table: &shuffled, mode: Mode::Wikisql };
            let b = HeuristicParser::default().distribution(&ctx, &[], slot).unwrap();
            assert_eq!(a, b);
        }
    }
}
