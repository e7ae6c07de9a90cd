use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::user::SimUser;
use crate::agent::{run_session, AgentConfig, Feedback, QuestionCategory, Transcript};
use crate::db::{execution_match, Example, Table, TableStore};
use crate::detector::{DetectorConfig, DetectorKind};
use crate::nlg::Nlg;
use crate::parser::BaseParser;
use crate::sql::{query_match, render_sql, Mode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("example {example} references unknown table {table}")]
    MissingTable { example: String, table: String },
    #[error("invalid detector: {0}")]
    Detector(String),
    #[error("nothing to evaluate")]
    Empty,
}

/// Settings shared by every session of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub agent: AgentConfig,
    /// Consecutive failed turns before the simulated user leaves; `None`
    /// never leaves.
    pub patience: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            agent: AgentConfig::default(),
            patience: Some(super::DEFAULT_PATIENCE),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub id: String,
    pub correct_qm: bool,
    /// Execution match; wikisql mode only.
    pub correct_ex: Option<bool>,
    pub n_questions: usize,
    pub right: usize,
    pub wrong_solved: usize,
    pub wrong_unsolved: usize,
    pub early_exit: bool,
    pub error: Option<String>,
    pub final_sql: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: Mode,
    pub detector: DetectorConfig,
    pub k: usize,
    pub patience: Option<usize>,
    pub examples: usize,
    pub acc_qm: f64,
    pub acc_ex: Option<f64>,
    /// Exact match; spider mode only.
    pub acc_em: Option<f64>,
    pub avg_questions: f64,
    pub total_questions: usize,
    pub right: usize,
    pub wrong_solved: usize,
    pub wrong_unsolved: usize,
    /// Percentage of questions whose asked value was right; `None` when
    /// nothing was asked.
    pub q_r_percent: Option<f64>,
    pub early_exits: usize,
    pub errors: usize,
    pub rows: Vec<ExampleRow>,
}

/// A report with the transcripts it was computed from, in example order.
#[derive(Debug, Clone)]
pub struct EvalRun {
    pub report: EvalReport,
    pub transcripts: Vec<Transcript>,
}

/// Q_r as a percentage of `right` over `total` questions.
pub fn q_r_percent(right: usize, total: usize) -> Option<f64> {
    (total > 0).then(|| 100.0 * right as f64 / total as f64)
}

/// Recounts categories straight from transcripts.
pub fn recount(transcripts: &[Transcript]) -> BTreeMap<QuestionCategory, usize> {
    let mut counts = BTreeMap::new();
    for e in transcripts.iter().flat_map(|t| &t.events) {
        if e.answer == Feedback::Left {
            continue;
        }
        if let Some(c) = e.category {
            *counts.entry(c).or_insert(0) += 1;
        }
    }
    counts
}

/// Fills in the category of every answered event.
fn categorize(transcript: &mut Transcript, user: &SimUser) {
    let committed = &transcript.committed;
    for event in &mut transcript.events {
        if event.answer == Feedback::Left {
            continue;
        }
        let pos = committed.iter().position(|c| c.slot == event.slot);
        let prefix = &committed[..pos.unwrap_or(committed.len())];
        let category = if user.judge(event.slot, &event.value, prefix) {
            QuestionCategory::Right
        } else if pos.is_some_and(|p| user.judge(event.slot, &committed[p].value, prefix)) {
            QuestionCategory::WrongSolved
        } else {
            QuestionCategory::WrongUnsolved
        };
        event.category = Some(category);
    }
}

fn tables_for(store: &TableStore, examples: &[Example]) -> Result<BTreeMap<String, Arc<Table>>, HarnessError> {
    let mut tables = BTreeMap::new();
    for ex in examples {
        if tables.contains_key(&ex.table_id) {
            continue;
        }
        let table = store.get(&ex.table_id).ok_or_else(|| HarnessError::MissingTable {
            example: ex.id.clone(),
            table: ex.table_id.clone(),
        })?;
        tables.insert(ex.table_id.clone(), Arc::new(table.clone()));
    }
    Ok(tables)
}

/// Runs one session per example against a fresh simulated user.
pub fn evaluate(
    store: &TableStore,
    examples: &[Example],
    parser: Arc<dyn BaseParser>,
    nlg: Arc<Nlg>,
    config: EvalConfig,
) -> Result<EvalRun, HarnessError> {
    config
        .agent
        .detector
        .validate()
        .map_err(|e| HarnessError::Detector(e.to_string()))?;
    let tables = tables_for(store, examples)?;
    let mode = config.agent.mode;

    let results: Vec<(ExampleRow, Transcript)> = examples
        .par_iter()
        .map(|ex| {
            let table = tables[&ex.table_id].clone();
            let mut user = SimUser::new(ex.gold.clone(), mode, config.patience);
            let outcome = run_session(
                parser.clone(),
                nlg.clone(),
                table,
                &ex.id,
                &ex.question,
                config.agent,
                &mut user,
            );
            let (query, mut transcript, error) = match outcome {
                Ok((q, t)) => (Some(q), t, None),
                Err(f) => (None, *f.transcript, Some(f.error.to_string())),
            };
            categorize(&mut transcript, &user);
            let count = |c| transcript.events.iter().filter(|e| e.category == Some(c)).count();
            let correct_qm = query.as_ref().is_some_and(|q| query_match(q, &ex.gold));
            let correct_ex = (mode == Mode::Wikisql)
                .then(|| query.as_ref().is_some_and(|q| execution_match(q, &ex.gold, store)));
            let row = ExampleRow {
                id: ex.id.clone(),
                correct_qm,
                correct_ex,
                n_questions: transcript.question_count(),
                right: count(QuestionCategory::Right),
                wrong_solved: count(QuestionCategory::WrongSolved),
                wrong_unsolved: count(QuestionCategory::WrongUnsolved),
                early_exit: transcript.early_exit,
                error,
                final_sql: query.as_ref().map(render_sql),
            };
            (row, transcript)
        })
        .collect();

    let (rows, transcripts): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(EvalRun {
        report: summarize(&config, rows),
        transcripts,
    })
}

fn summarize(config: &EvalConfig, rows: Vec<ExampleRow>) -> EvalReport {
    let n = rows.len();
    let frac = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    let qm = rows.iter().filter(|r| r.correct_qm).count();
    let ex = rows.iter().filter(|r| r.correct_ex == Some(true)).count();
    let total: usize = rows.iter().map(|r| r.n_questions).sum();
    let right: usize = rows.iter().map(|r| r.right).sum();
    let mode = config.agent.mode;
    EvalReport {
        mode,
        detector: config.agent.detector,
        k: config.agent.k,
        patience: config.patience,
        examples: n,
        acc_qm: frac(qm),
        acc_ex: (mode == Mode::Wikisql).then(|| frac(ex)),
        acc_em: (mode == Mode::Spider).then(|| frac(qm)),
        avg_questions: frac(total),
        total_questions: total,
        right,
        wrong_solved: rows.iter().map(|r| r.wrong_solved).sum(),
        wrong_unsolved: rows.iter().map(|r| r.wrong_unsolved).sum(),
        q_r_percent: q_r_percent(right, total),
        early_exits: rows.iter().filter(|r| r.early_exit).count(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        rows,
    }
}

/// Asks about every askable slot with up to `k + 1` questions each.
pub fn unlimit_run(
    store: &TableStore,
    examples: &[Example],
    parser: Arc<dyn BaseParser>,
    nlg: Arc<Nlg>,
    k: usize,
    mode: Mode,
    patience: Option<usize>,
) -> Result<EvalRun, HarnessError> {
    let agent = AgentConfig {
        k,
        detector: DetectorConfig::Unlimit,
        mode,
        ..AgentConfig::default()
    };
    evaluate(store, examples, parser, nlg, EvalConfig { agent, patience })
}

/// At most four decimals, trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

impl EvalReport {
    /// Short label such as `prob p*=0.95` or `unlimit K=3`.
    pub fn label(&self) -> String {
        match self.detector {
            DetectorConfig::Prob { p_star } => format!("prob p*={}", short(p_star)),
            DetectorConfig::Dropout { s_star, .. } => format!("dropout s*={}", short(s_star)),
            DetectorConfig::Unlimit => format!("unlimit K={}", self.k),
            DetectorConfig::Off => "no interaction".to_string(),
        }
    }

    pub fn kind(&self) -> DetectorKind {
        self.detector.kind()
    }
}
