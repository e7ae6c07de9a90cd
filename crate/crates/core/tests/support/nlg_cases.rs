//! Question cases covering every grammar rule.

use std::path::PathBuf;

use clarisql::nlg::{value_classes, Nlg, QuestionContext};
use clarisql::parser::{PartialCondition, PartialQuery, SlotValue};
use clarisql::sql::{Agg, Connector, Direction, Mode, Op, OrderSpec, SlotId, SlotKind, Value};

fn cond(col: &str, op: Option<Op>) -> PartialCondition {
    PartialCondition {
        col: Some(col.into()),
        op,
        ..PartialCondition::default()
    }
}

pub fn ask(nlg: &Nlg, mode: Mode, multi: bool, pq: &PartialQuery, slot: SlotId, value: SlotValue) -> (String, String) {
    let ctx = QuestionContext {
        mode,
        table: "singer",
        multi_table: multi,
        partial: pq,
    };
    let q = nlg.question(slot, &value, &ctx).unwrap_or_else(|e| panic!("{slot}: {e}"));
    (q.rule, q.text)
}

pub fn all_questions() -> Vec<(String, String)> {
    let nlg = Nlg::builtin();
    let col = |c: &str| SlotValue::Column(c.into());
    let mut out = vec![
        ("T1.col".to_string(), nlg.describe_column("age", "singer", false).unwrap()),
        ("R1".to_string(), nlg.describe_column("age", "singer", true).unwrap()),
    ];
    let w = Mode::Wikisql;
    let s = Mode::Spider;

    let mut pq = PartialQuery::default();
    out.push(ask(&nlg, w, false, &pq, SlotId::SelectCol, col("name")));
    out.push(ask(&nlg, s, true, &pq, SlotId::SelectCol, col("name")));
    pq.select_col = Some("age".into());
    for mode in [w, s] {
        out.push(ask(&nlg, mode, false, &pq, SlotId::SelectAgg, SlotValue::Agg(Agg::Max)));
        out.push(ask(&nlg, mode, false, &pq, SlotId::SelectAgg, SlotValue::Agg(Agg::None)));
        out.push(ask(&nlg, mode, false, &pq, SlotId::WhereCol(0), col("place")));
    }

    pq.conditions = vec![cond("age", Some(Op::Gt)), cond("country", Some(Op::Eq))];
    out.push(ask(&nlg, w, false, &pq, SlotId::WhereOp(0), SlotValue::Op(Op::Gt)));
    out.push(ask(&nlg, w, false, &pq, SlotId::WhereVal(0), SlotValue::Literal(Value::Number(30.0))));
    out.push(ask(&nlg, s, false, &pq, SlotId::WhereVal(0), SlotValue::Literal(Value::Number(30.0))));
    out.push(ask(&nlg, s, false, &pq, SlotId::WhereVal(0), SlotValue::Literal(Value::Root)));
    out.push(ask(&nlg, s, false, &pq, SlotId::WhereConn(0), SlotValue::Conn(Connector::And)));
    out.push(ask(&nlg, s, false, &pq, SlotId::WhereConn(0), SlotValue::Conn(Connector::Or)));

    out.push(ask(&nlg, s, false, &pq, SlotId::GroupByCol, col("country")));
    pq.group_col = Some("country".into());
    out.push(ask(&nlg, s, false, &pq, SlotId::HavingCol(0), col("singer_id")));
    pq.having = vec![cond("singer_id", None)];
    out.push(ask(&nlg, s, false, &pq, SlotId::HavingAgg(0), SlotValue::Agg(Agg::Count)));
    out.push(ask(&nlg, s, false, &pq, SlotId::HavingAgg(0), SlotValue::Agg(Agg::None)));
    out.push(ask(&nlg, s, false, &pq, SlotId::HavingOp(0), SlotValue::Op(Op::Ge)));
    out.push(ask(&nlg, s, false, &pq, SlotId::HavingCount, SlotValue::Count(0)));

    out.push(ask(&nlg, s, false, &pq, SlotId::OrderByCol, col("age")));
    pq.order_col = Some("age".into());
    out.push(ask(&nlg, s, false, &pq, SlotId::OrderByAgg, SlotValue::Agg(Agg::Max)));
    out.push(ask(&nlg, s, false, &pq, SlotId::OrderByAgg, SlotValue::Agg(Agg::None)));
    let desc3 = OrderSpec {
        dir: Direction::Desc,
        limit: Some(3),
    };
    out.push(ask(&nlg, s, false, &pq, SlotId::OrderByDir, SlotValue::Order(desc3)));
    pq.order_agg = Some(Agg::Avg);
    let asc = OrderSpec {
        dir: Direction::Asc,
        limit: None,
    };
    out.push(ask(&nlg, s, false, &pq, SlotId::OrderByDir, SlotValue::Order(asc)));
    out
}

pub fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/nlg_questions.tsv")
}

/// One `rule<TAB>question` line per case.
pub fn golden_text() -> String {
    let lines: Vec<String> = all_questions().iter().map(|(r, q)| format!("{r}\t{q}")).collect();
    lines.join("\n") + "\n"
}

/// Differences between the generated questions and the frozen file.
pub fn golden_diff() -> Vec<String> {
    let text = golden_text();
    let golden = std::fs::read_to_string(golden_path()).expect("golden file present");
    let mut diff: Vec<String> = text
        .lines()
        .zip(golden.lines())
        .filter(|(got, want)| got != want)
        .map(|(got, want)| format!("got `{got}`, want `{want}`"))
        .collect();
    if text.lines().count() != golden.lines().count() {
        diff.push(format!("{} lines, golden has {}", text.lines().count(), golden.lines().count()));
    }
    diff
}

/// Rule ids never exercised by a case, and cases naming unknown rules.
pub fn uncovered_rules() -> Vec<String> {
    let nlg = Nlg::builtin();
    let mut covered: Vec<String> = all_questions().into_iter().map(|(r, _)| r).collect();
    covered.sort_unstable();
    covered.dedup();
    let mut ids: Vec<String> = nlg.rules().iter().map(|r| r.id.clone()).collect();
    ids.sort_unstable();
    let mut out: Vec<String> = ids.iter().filter(|id| !covered.contains(id)).cloned().collect();
    out.extend(covered.into_iter().filter(|c| !ids.contains(c)));
    out
}

/// The three reference strings, as (got, want) pairs.
pub fn reference_pairs() -> Vec<(String, &'static str)> {
    let nlg = Nlg::builtin();
    let mut pq = PartialQuery {
        select_col: Some("age".into()),
        ..PartialQuery::default()
    };
    let (_, a) = ask(&nlg, Mode::Wikisql, false, &pq, SlotId::SelectAgg, SlotValue::Agg(Agg::Max));
    let (_, b) = ask(&nlg, Mode::Wikisql, false, &pq, SlotId::WhereCol(0), SlotValue::Column("place".into()));
    pq.order_col = Some("age".into());
    let spec = OrderSpec {
        dir: Direction::Desc,
        limit: Some(3),
    };
    let (_, c) = ask(&nlg, Mode::Spider, false, &pq, SlotId::OrderByDir, SlotValue::Order(spec));
    vec![
        (a, "Does the system need to return maximum value in \"age\" ?"),
        (b, "Does the system need to consider any conditions about \"place\" ?"),
        (
            c,
            "Given that the system orders the results based on \"age\", does it need to be in descending order and limited to top 3 ?",
        ),
    ]
}

/// Slot kinds the wikisql sketch can ask about.
const WIKISQL_KINDS: &[SlotKind] = &[SlotKind::SelectCol, SlotKind::SelectAgg, SlotKind::WhereCol, SlotKind::WhereOp, SlotKind::WhereVal];

/// (slot kind, value class, mode) triples not matched by exactly one rule.
pub fn ambiguous_or_missing_rules() -> Vec<String> {
    let nlg = Nlg::builtin();
    let mut out = Vec::new();
    for mode in [Mode::Wikisql, Mode::Spider] {
        for kind in SlotKind::ALL.iter().filter(|k| k.is_askable()) {
            if mode == Mode::Wikisql && !WIKISQL_KINDS.contains(kind) {
                continue;
            }
            for class in value_classes(*kind) {
                // a non-empty HAVING count is never asked about
                if *kind == SlotKind::HavingCount && *class == "nonzero" {
                    continue;
                }
                let n = nlg.applicable(kind.name(), class, mode).len();
                if n != 1 {
                    out.push(format!("{} / {class} / {mode:?}: {n} rules", kind.name()));
                }
            }
        }
        for class in ["single", "multi"] {
            let n = nlg.applicable("column", class, mode).len();
            if n != 1 {
                out.push(format!("column / {class} / {mode:?}: {n} rules"));
            }
        }
    }
    out
}
