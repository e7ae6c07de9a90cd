//! Stepwise base parsers.
//!
//! A parser fills the slot sketch left to right, one [`Decision`] per slot:
//! `select.col`, `select.agg`, `where.count`, then `where[i].{col,op,val}`
//! per condition; the spider sketch continues with connectors, group/having
//! and order slots. Forbidden options are removed and the remaining mass
//! renormalized before the argmax is taken.

mod heuristic;
mod lexical;
mod perturb;
mod scripted;
mod sketch;
mod value;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::db::Table;
use crate::sql::{Mode, SlotId};

pub use heuristic::{HeuristicParser, OptionFeatures};
pub use perturb::{pass_seed, PerturbationConfig};
pub use scripted::{ScriptEntry, ScriptedParser, ScriptError};
pub use sketch::{gold_derivation, next_slot, slot_sequence, PartialCondition, PartialQuery, SketchError};
pub use value::{SlotValue, SlotValueError};

/// Probability sums are checked to this tolerance.
pub const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParserError {
    #[error("every option of {0} is forbidden")]
    AllForbidden(SlotId),
    #[error("invalid decision for {slot}: {message}")]
    InvalidDecision { slot: SlotId, message: String },
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Script(#[from] ScriptError),
}

/// One stepwise prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub slot: SlotId,
    pub options: Vec<SlotValue>,
    pub probs: Vec<f64>,
    pub chosen: usize,
}

impl Decision {
    /// Validates the distribution and picks the lowest-index argmax.
    pub fn new(slot: SlotId, options: Vec<SlotValue>, probs: Vec<f64>) -> Result<Decision, ParserError> {
        let invalid = |message: String| ParserError::InvalidDecision { slot, message };
        if options.is_empty() {
            return Err(invalid("no options".into()));
        }
        if options.len() != probs.len() {
            return Err(invalid(format!("{} options but {} probabilities", options.len(), probs.len())));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(invalid("probabilities must be finite and nonnegative".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(invalid(format!("probabilities sum to {sum}")));
        }
        let chosen = argmax(&probs);
        Ok(Decision {
            slot,
            options,
            probs,
            chosen,
        })
    }

    pub fn chosen_value(&self) -> &SlotValue {
        &self.options[self.chosen]
    }

    pub fn chosen_prob(&self) -> f64 {
        self.probs[self.chosen]
    }

    /// Rank (0-based) of `value` by descending probability, ties by index.
    pub fn rank_of(&self, value: &SlotValue) -> Option<usize> {
        let pos = self.options.iter().position(|o| o == value)?;
        let p = self.probs[pos];
        Some(
            self.probs
                .iter()
                .enumerate()
                .filter(|&(i, &q)| q > p || (q == p && i < pos))
                .count(),
        )
    }

    /// Removes `forbidden` options and renormalizes the rest.
    pub fn constrained(&self, forbidden: &[SlotValue]) -> Result<Decision, ParserError> {
        if forbidden.is_empty() {
            return Ok(self.clone());
        }
        let (options, weights): (Vec<_>, Vec<_>) = self
            .options
            .iter()
            .zip(&self.probs)
            .filter(|(o, _)| !forbidden.contains(o))
            .map(|(o, p)| (o.clone(), *p))
            .unzip();
        if options.is_empty() {
            return Err(ParserError::AllForbidden(self.slot));
        }
        let probs = normalize(&weights);
        Decision::new(self.slot, options, probs)
    }
}

/// Lowest index among the maximal entries.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Scales to unit sum; an all-zero vector becomes uniform.
pub(crate) fn normalize(weights: &[f64]) -> Vec<f64> {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return vec![1.0 / weights.len() as f64; weights.len()];
    }
    let mut probs: Vec<f64> = weights.iter().map(|w| w / sum).collect();
    // push rounding residue onto the largest entry so the sum is exact enough
    let residue = 1.0 - probs.iter().sum::<f64>();
    let top = argmax(&probs);
    probs[top] += residue;
    probs
}

/// Softmax with temperature.
pub(crate) fn softmax(scores: &[f64], temperature: f64) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| ((s - max) / temperature).exp()).collect();
    normalize(&exps)
}

/// Forbidden option values per slot.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    forbidden: BTreeMap<SlotId, Vec<SlotValue>>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn forbid(&mut self, slot: SlotId, value: SlotValue) {
        let list = self.forbidden.entry(slot).or_default();
        if !list.contains(&value) {
            list.push(value);
        }
    }

    pub fn forbidden(&self, slot: SlotId) -> &[SlotValue] {
        self.forbidden.get(&slot).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.forbidden.values().all(Vec::is_empty)
    }
}

/// A committed component of the partial parse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Committed {
    pub slot: SlotId,
    pub value: SlotValue,
    pub prob: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes: Option<Vec<f64>>,
}

/// Everything a parser sees besides the partial parse.
#[derive(Debug, Clone, Copy)]
pub struct ParseContext<'a> {
    pub example_id: &'a str,
    pub question: &'a str,
    pub table: &'a Table,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Decision(Decision),
    Terminal,
}

pub trait BaseParser: Send + Sync {
    /// Unconstrained distribution over the options of `slot`.
    fn distribution(&self, ctx: &ParseContext<'_>, partial: &[Committed], slot: SlotId) -> Result<Decision, ParserError>;

    /// Chosen-option probability under `config.passes` perturbed passes of
    /// the scorer, restricted to the options still present in `decision`.
    fn perturbed_passes(
        &self,
        ctx: &ParseContext<'_>,
        partial: &[Committed],
        decision: &Decision,
        config: &PerturbationConfig,
    ) -> Result<Vec<f64>, ParserError>;

    /// Next slot's decision with `constraints` applied, or terminal once the
    /// sketch is exhausted.
    fn next_decision(
        &self,
        ctx: &ParseContext<'_>,
        partial: &[Committed],
        constraints: &ConstraintSet,
    ) -> Result<Step, ParserError> {
        let Some(slot) = next_slot(partial.iter().map(|c| (c.slot, &c.value)), ctx.mode)? else {
            return Ok(Step::Terminal);
        };
        let raw = self.distribution(ctx, partial, slot)?;
        Ok(Step::Decision(raw.constrained(constraints.forbidden(slot))?))
    }
}

/// Commits every argmax with no constraints; the no-interaction output.
pub fn unassisted_parse(parser: &dyn BaseParser, ctx: &ParseContext<'_>) -> Result<Vec<Committed>, ParserError> {
    let mut partial = Vec::new();
    let empty = ConstraintSet::new();
    while let Step::Decision(d) = parser.next_decision(ctx, &partial, &empty)? {
        partial.push(Committed {
            slot: d.slot,
            value: d.chosen_value().clone(),
            prob: d.chosen_prob(),
            passes: None,
        });
    }
    Ok(partial)
}
