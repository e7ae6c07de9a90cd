//! Template-grammar question generation.
//!
//! Every askable slot is rendered as a yes/no question from the lexicon
//! (phrases for aggregators, operators and orders) and the grammar (one
//! template per slot kind, value class and dataset mode). Both ship as
//! JSON under `data/` and can be replaced at runtime.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::parser::{PartialQuery, SlotValue};
use crate::sql::{render_value, Agg, Direction, Mode, Op, OrderSpec, SlotId, SlotKind, Value};

pub const BUILTIN_LEXICON: &str = include_str!("../../data/lexicon.json");
pub const BUILTIN_GRAMMAR: &str = include_str!("../../data/grammar.json");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NlgError {
    #[error("{file}: {message}")]
    Data { file: &'static str, message: String },
    #[error("no rule for {slot} with value class `{class}` in {mode} mode")]
    NoRule { slot: String, class: String, mode: Mode },
    #[error("rules {0:?} all apply")]
    Ambiguous(Vec<String>),
    #[error("{0} is not askable")]
    NotAskable(SlotId),
    #[error("no lexicon phrase for {0}")]
    NoPhrase(String),
    #[error("question about {slot} needs `{hole}`, which the partial query lacks")]
    MissingContext { slot: SlotId, hole: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    Agg,
    Op,
    Order,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconEntry {
    pub phrase: String,
    pub category: Category,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppliesTo {
    /// Slot kind name, or `column` for column descriptions.
    pub slot: String,
    pub value: String,
    pub mode: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QRule {
    pub id: String,
    pub template: String,
    pub applies_to: AppliesTo,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    entries: Vec<LexiconEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrammarFile {
    rules: Vec<QRule>,
}

/// A generated question and the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub rule: String,
    pub text: String,
}

/// What a question may refer to besides the pending value.
#[derive(Debug, Clone, Copy)]
pub struct QuestionContext<'a> {
    pub mode: Mode,
    /// Name of the table the columns belong to.
    pub table: &'a str,
    /// Whether the query spans several tables; columns then name theirs.
    pub multi_table: bool,
    pub partial: &'a PartialQuery,
}

const HOLES: &[&str] = &["name", "tab", "col", "agg", "op", "val", "order", "col_i", "col_j", "gcol", "gtab", "target"];

/// Value classes a rule can be keyed on, per slot kind.
pub fn value_classes(kind: SlotKind) -> &'static [&'static str] {
    match kind {
        SlotKind::SelectAgg | SlotKind::HavingAgg | SlotKind::OrderByAgg => &["some", "none"],
        SlotKind::WhereVal | SlotKind::HavingVal => &["literal", "root"],
        SlotKind::WhereConn => &["and", "or"],
        SlotKind::HavingCount => &["zero", "nonzero"],
        _ => &["any"],
    }
}

/// Class of `value` for rule lookup.
pub fn value_class(value: &SlotValue) -> &'static str {
    match value {
        SlotValue::Agg(Agg::None) => "none",
        SlotValue::Agg(_) => "some",
        SlotValue::Literal(Value::Root) => "root",
        SlotValue::Literal(_) => "literal",
        SlotValue::Conn(c) => match c {
            crate::sql::Connector::And => "and",
            crate::sql::Connector::Or => "or",
        },
        SlotValue::Count(0) => "zero",
        SlotValue::Count(_) => "nonzero",
        _ => "any",
    }
}

/// Lexicon plus grammar.
#[derive(Debug, Clone)]
pub struct Nlg {
    lexicon: Vec<LexiconEntry>,
    rules: Vec<QRule>,
}

fn holes(template: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open..].find('}') else { break };
        out.push(&rest[open + 1..open + close]);
        rest = &rest[open + close + 1..];
    }
    out
}

fn fill(template: &str, values: &BTreeMap<&str, String>) -> String {
    // single pass, so braces inside substituted values stay literal
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open..].find('}') else { break };
        let key = &rest[open + 1..open + close];
        out.push_str(&rest[..open]);
        match values.get(key) {
            Some(v) => out.push_str(v),
            None => out.push_str(&rest[open..=open + close]),
        }
        rest = &rest[open + close + 1..];
    }
    out.push_str(rest);
    out
}

impl Nlg {
    /// The grammar and lexicon bundled with the crate.
    pub fn builtin() -> Nlg {
        Nlg::from_json(BUILTIN_LEXICON, BUILTIN_GRAMMAR).expect("bundled NLG data is valid")
    }

    pub fn from_json(lexicon: &str, grammar: &str) -> Result<Nlg, NlgError> {
        let lex: LexiconFile = serde_json::from_str(lexicon).map_err(|e| NlgError::Data {
            file: "lexicon",
            message: e.to_string(),
        })?;
        let gram: GrammarFile = serde_json::from_str(grammar).map_err(|e| NlgError::Data {
            file: "grammar",
            message: e.to_string(),
        })?;
        let nlg = Nlg {
            lexicon: lex.entries,
            rules: gram.rules,
        };
        nlg.check()?;
        Ok(nlg)
    }

    fn check(&self) -> Result<(), NlgError> {
        let lex_err = |message: String| NlgError::Data { file: "lexicon", message };
        let mut expected: Vec<(Category, String)> = Vec::new();
        expected.extend(Agg::ALL.iter().filter(|a| !a.is_none()).map(|a| (Category::Agg, a.code().to_string())));
        expected.extend(Op::ALL.iter().map(|o| (Category::Op, o.code().to_string())));
        expected.extend(Direction::ALL.iter().map(|d| (Category::Order, d.code().to_string())));
        expected.push((Category::Limit, "limit".into()));
        for (cat, payload) in &expected {
            let n = self
                .lexicon
                .iter()
                .filter(|e| e.category == *cat && &e.payload == payload)
                .count();
            if n != 1 {
                return Err(lex_err(format!("{cat:?} `{payload}` has {n} entries, expected one")));
            }
        }
        if let Some(e) = self.lexicon.iter().find(|e| !expected.contains(&(e.category, e.payload.clone()))) {
            return Err(lex_err(format!("unknown payload {:?} `{}`", e.category, e.payload)));
        }
        for r in &self.rules {
            let bad = |message: String| NlgError::Data {
                file: "grammar",
                message: format!("rule {}: {message}", r.id),
            };
            if let Some(h) = holes(&r.template).into_iter().find(|h| !HOLES.contains(h)) {
                return Err(bad(format!("unknown hole `{{{h}}}`")));
            }
            if !["any", "wikisql", "spider"].contains(&r.applies_to.mode.as_str()) {
                return Err(bad(format!("unknown mode `{}`", r.applies_to.mode)));
            }
            let kind = SlotKind::ALL.iter().find(|k| k.name() == r.applies_to.slot);
            let classes: &[&str] = match kind {
                Some(k) => value_classes(*k),
                None if r.applies_to.slot == "column" => &["single", "multi"],
                None => return Err(bad(format!("unknown slot `{}`", r.applies_to.slot))),
            };
            if r.applies_to.value != "any" && !classes.contains(&r.applies_to.value.as_str()) {
                return Err(bad(format!("unknown value class `{}`", r.applies_to.value)));
            }
        }
        Ok(())
    }

    pub fn lexicon(&self) -> &[LexiconEntry] {
        &self.lexicon
    }

    pub fn rules(&self) -> &[QRule] {
        &self.rules
    }

    fn phrase(&self, category: Category, payload: &str) -> Result<&str, NlgError> {
        self.lexicon
            .iter()
            .find(|e| e.category == category && e.payload == payload)
            .map(|e| e.phrase.as_str())
            .ok_or_else(|| NlgError::NoPhrase(format!("{category:?} `{payload}`")))
    }

    /// Payload behind a phrase; the inverse of the lexicon.
    pub fn lookup(&self, phrase: &str) -> Option<(Category, &str)> {
        self.lexicon
            .iter()
            .find(|e| e.phrase == phrase)
            .map(|e| (e.category, e.payload.as_str()))
    }

    pub fn describe_agg(&self, agg: Agg) -> Result<&str, NlgError> {
        self.phrase(Category::Agg, agg.code())
    }

    pub fn describe_op(&self, op: Op) -> Result<&str, NlgError> {
        self.phrase(Category::Op, op.code())
    }

    pub fn describe_order(&self, spec: OrderSpec) -> Result<String, NlgError> {
        let base = self.phrase(Category::Order, spec.dir.code())?;
        Ok(match spec.limit {
            Some(n) => format!("{base} {}", self.phrase(Category::Limit, "limit")?.replace("{n}", &n.to_string())),
            None => base.to_string(),
        })
    }

    /// Rules applicable to a slot kind, value class and mode.
    pub fn applicable(&self, slot: &str, class: &str, mode: Mode) -> Vec<&QRule> {
        let mode = mode.to_string();
        self.rules
            .iter()
            .filter(|r| {
                let a = &r.applies_to;
                a.slot == slot && (a.value == "any" || a.value == class) && (a.mode == "any" || a.mode == mode)
            })
            .collect()
    }

    fn rule(&self, slot: &str, class: &str, mode: Mode) -> Result<&QRule, NlgError> {
        match self.applicable(slot, class, mode).as_slice() {
            [r] => Ok(r),
            [] => Err(NlgError::NoRule {
                slot: slot.to_string(),
                class: class.to_string(),
                mode,
            }),
            many => Err(NlgError::Ambiguous(many.iter().map(|r| r.id.clone()).collect())),
        }
    }

    /// Column mention: quoted name, plus its table when several are in play.
    pub fn describe_column(&self, col: &str, table: &str, multi_table: bool) -> Result<String, NlgError> {
        let class = if multi_table { "multi" } else { "single" };
        let rule = self.rule("column", class, Mode::Wikisql)?;
        let values = BTreeMap::from([("name", col.to_string()), ("tab", table.to_string())]);
        Ok(fill(&rule.template, &values))
    }

    /// Yes/no question validating `value` as the filler of `slot`.
    pub fn question(&self, slot: SlotId, value: &SlotValue, ctx: &QuestionContext<'_>) -> Result<Question, NlgError> {
        let kind = slot.kind();
        if !kind.is_askable() {
            return Err(NlgError::NotAskable(slot));
        }
        let rule = self.rule(kind.name(), value_class(value), ctx.mode)?;
        let pq = ctx.partial;
        let missing = |hole: &'static str| NlgError::MissingContext { slot, hole };
        let col = |name: &str| self.describe_column(name, ctx.table, ctx.multi_table);
        let mut h: BTreeMap<&str, String> = BTreeMap::new();
        h.insert("tab", ctx.table.to_string());
        h.insert("gtab", ctx.table.to_string());
        if let Some(g) = &pq.group_col {
            h.insert("gcol", col(g)?);
        }
        let cond = |list: &[crate::parser::PartialCondition], i: usize| list.get(i).cloned().unwrap_or_default();
        match (slot, value) {
            (SlotId::SelectCol | SlotId::WhereCol(_) | SlotId::GroupByCol | SlotId::HavingCol(_) | SlotId::OrderByCol, SlotValue::Column(c)) => {
                h.insert("col", col(c)?);
            }
            (SlotId::SelectAgg, SlotValue::Agg(a)) => {
                h.insert("col", col(pq.select_col.as_deref().ok_or_else(|| missing("col"))?)?);
                if !a.is_none() {
                    h.insert("agg", self.describe_agg(*a)?.to_string());
                }
            }
            (SlotId::HavingAgg(j), SlotValue::Agg(a)) => {
                h.insert("col", col(cond(&pq.having, j).col.as_deref().ok_or_else(|| missing("col"))?)?);
                if !a.is_none() {
                    h.insert("agg", self.describe_agg(*a)?.to_string());
                }
            }
            (SlotId::OrderByAgg, SlotValue::Agg(a)) => {
                h.insert("col", col(pq.order_col.as_deref().ok_or_else(|| missing("col"))?)?);
                if !a.is_none() {
                    h.insert("agg", self.describe_agg(*a)?.to_string());
                }
            }
            (SlotId::WhereOp(i), SlotValue::Op(o)) => {
                h.insert("col", col(cond(&pq.conditions, i).col.as_deref().ok_or_else(|| missing("col"))?)?);
                h.insert("op", self.describe_op(*o)?.to_string());
            }
            (SlotId::HavingOp(j), SlotValue::Op(o)) => {
                h.insert("col", col(cond(&pq.having, j).col.as_deref().ok_or_else(|| missing("col"))?)?);
                h.insert("op", self.describe_op(*o)?.to_string());
            }
            (SlotId::WhereVal(i), SlotValue::Literal(v)) => {
                let c = cond(&pq.conditions, i);
                h.insert("col", col(c.col.as_deref().ok_or_else(|| missing("col"))?)?);
                h.insert("op", self.describe_op(c.op.ok_or_else(|| missing("op"))?)?.to_string());
                h.insert("val", render_value(v));
            }
            (SlotId::WhereConn(i), SlotValue::Conn(_)) => {
                let a = cond(&pq.conditions, i).col.ok_or_else(|| missing("col_i"))?;
                let b = cond(&pq.conditions, i + 1).col.ok_or_else(|| missing("col_j"))?;
                h.insert("col_i", col(&a)?);
                h.insert("col_j", col(&b)?);
            }
            (SlotId::HavingCount, SlotValue::Count(_)) => {}
            (SlotId::OrderByDir, SlotValue::Order(spec)) => {
                let c = col(pq.order_col.as_deref().ok_or_else(|| missing("col"))?)?;
                let target = match pq.order_agg {
                    Some(a) if !a.is_none() => format!("{} {c}", self.describe_agg(a)?),
                    _ => c,
                };
                h.insert("target", target);
                h.insert("order", self.describe_order(*spec)?);
            }
            _ => return Err(NlgError::NotAskable(slot)),
        }
        for hole in holes(&rule.template) {
            if !h.contains_key(hole) {
                let name = HOLES.iter().find(|x| **x == hole).copied().unwrap_or("?");
                return Err(missing(name));
            }
        }
        Ok(Question {
            rule: rule.id.clone(),
            text: fill(&rule.template, &h),
        })
    }
}
