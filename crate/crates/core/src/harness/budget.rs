use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::eval::{evaluate, EvalConfig, EvalReport, HarnessError};
use crate::db::{Example, TableStore};
use crate::detector::{is_askable_value, population_stddev, DetectorConfig};
use crate::nlg::Nlg;
use crate::parser::{unassisted_parse, BaseParser, ParseContext};

/// Tolerance on Avg #q used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 0.015;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetResult {
    pub target: f64,
    pub tolerance: f64,
    pub threshold: f64,
    pub achieved: f64,
    /// Whether `achieved` lies within `tolerance` of `target`.
    pub feasible: bool,
    /// Thresholds evaluated during the search.
    pub evaluations: usize,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BudgetError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("only prob and dropout detectors have a threshold")]
    NoThreshold,
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
}

/// Detector scores of the askable slots of unassisted parses.
fn observed_scores(
    store: &TableStore,
    examples: &[Example],
    parser: &Arc<dyn BaseParser>,
    nlg: &Arc<Nlg>,
    config: &EvalConfig,
) -> Result<Vec<f64>, HarnessError> {
    let mut scores = Vec::new();
    match config.agent.detector {
        DetectorConfig::Prob { .. } => {
            for ex in examples {
                let table = store.get(&ex.table_id).ok_or_else(|| HarnessError::MissingTable {
                    example: ex.id.clone(),
                    table: ex.table_id.clone(),
                })?;
                let ctx = ParseContext {
                    example_id: &ex.id,
                    question: &ex.question,
                    table,
                    mode: config.agent.mode,
                };
                for c in unassisted_parse(parser.as_ref(), &ctx).unwrap_or_default() {
                    if is_askable_value(c.slot, &c.value) {
                        scores.push(c.prob);
                    }
                }
            }
        }
        DetectorConfig::Dropout { perturbation, .. } => {
            // a threshold nothing exceeds: passes are computed, nothing is asked
            let mut silent = *config;
            silent.agent.detector = DetectorConfig::Dropout {
                s_star: f64::MAX,
                perturbation,
            };
            let run = evaluate(store, examples, parser.clone(), nlg.clone(), silent)?;
            for t in &run.transcripts {
                for c in &t.committed {
                    if let Some(p) = &c.passes {
                        scores.push(population_stddev(p));
                    }
                }
            }
        }
        _ => {}
    }
    scores.sort_by(f64::total_cmp);
    scores.dedup();
    Ok(scores)
}

/// Thresholds ordered from asking nothing to asking about every observed
/// score, one per distinct score.
fn candidates(detector: &DetectorConfig, scores: &[f64]) -> Vec<f64> {
    let mids = scores.windows(2).map(|w| (w[0] + w[1]) / 2.0);
    match detector {
        DetectorConfig::Prob { .. } => {
            let Some((&lo, &hi)) = scores.first().zip(scores.last()) else {
                return vec![1.0];
            };
            let mut out = vec![lo.max(f64::MIN_POSITIVE)];
            out.extend(mids);
            if hi < 1.0 {
                out.push(1.0);
            }
            out
        }
        _ => {
            let positive: Vec<f64> = scores.iter().copied().filter(|s| *s > 0.0).collect();
            let Some((&lo, &hi)) = positive.first().zip(positive.last()) else {
                return vec![1.0];
            };
            let mut out = vec![hi];
            out.extend(positive.windows(2).rev().map(|w| (w[0] + w[1]) / 2.0));
            out.push(lo / 2.0);
            out
        }
    }
}

/// Finds the detector threshold whose Avg #q is closest to `target`.
///
/// Avg #q grows with the candidate index, up to the noise interaction adds,
/// so the search bisects for the first candidate reaching the target and
/// then scans a few neighbours on both sides.
pub fn budget_search(
    store: &TableStore,
    examples: &[Example],
    parser: Arc<dyn BaseParser>,
    nlg: Arc<Nlg>,
    config: EvalConfig,
    target: f64,
    tolerance: f64,
) -> Result<BudgetResult, BudgetError> {
    if config.agent.detector.threshold().is_none() {
        return Err(BudgetError::NoThreshold);
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(BudgetError::Tolerance(tolerance));
    }
    if examples.is_empty() {
        return Err(HarnessError::Empty.into());
    }
    let scores = observed_scores(store, examples, &parser, &nlg, &config)?;
    let cands = candidates(&config.agent.detector, &scores);

    let mut cache: BTreeMap<usize, EvalReport> = BTreeMap::new();
    let mut measure = |i: usize| -> Result<f64, HarnessError> {
        if let Some(r) = cache.get(&i) {
            return Ok(r.avg_questions);
        }
        let mut c = config;
        c.agent.detector = config.agent.detector.with_threshold(cands[i]);
        let report = evaluate(store, examples, parser.clone(), nlg.clone(), c)?.report;
        let avg = report.avg_questions;
        cache.insert(i, report);
        Ok(avg)
    };

    let (mut lo, mut hi) = (0, cands.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if measure(mid)? < target {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    const SCAN: usize = 8;
    let start = lo.saturating_sub(SCAN);
    let end = (lo + SCAN).min(cands.len() - 1);
    for i in start..=end {
        measure(i)?;
    }

    let evaluations = cache.len();
    let (best, report) = cache
        .into_iter()
        .min_by(|(i, a), (j, b)| {
            (a.avg_questions - target)
                .abs()
                .total_cmp(&(b.avg_questions - target).abs())
                .then(i.cmp(j))
        })
        .expect("at least one candidate is evaluated");
    let achieved = report.avg_questions;
    Ok(BudgetResult {
        target,
        tolerance,
        threshold: cands[best],
        achieved,
        feasible: (achieved - target).abs() <= tolerance,
        evaluations,
        report,
    })
}
